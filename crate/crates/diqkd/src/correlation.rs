//! Conditional probability tables `p(a,b|x,y)` and the CHSH functionals
//! evaluated on them.

use qip_core::{Operator, Povm};

use crate::error::{DiqkdError, Result};

/// Conditional outcome distribution over inputs `x in [nx], y in [ny]` and
/// outcomes `a in [na], b in [nb]`. Entries are nonnegative and normalized
/// per input pair to within 1e-10.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlation {
    probs: Vec<f64>,
    nx: usize,
    ny: usize,
    na: usize,
    nb: usize,
}

impl Correlation {
    pub fn new(probs: Vec<f64>, nx: usize, ny: usize, na: usize, nb: usize) -> Result<Self> {
        let expected = nx * ny * na * nb;
        if probs.len() != expected || expected == 0 {
            return Err(DiqkdError::InvalidCorrelation(format!(
                "need {expected} entries for ({nx},{ny},{na},{nb}), got {}",
                probs.len()
            )));
        }
        let mut probs = probs;
        for p in &mut probs {
            if *p < -1e-12 {
                return Err(DiqkdError::InvalidCorrelation(format!(
                    "negative entry {p}"
                )));
            }
            *p = p.max(0.0);
        }
        let table = Self {
            probs,
            nx,
            ny,
            na,
            nb,
        };
        for x in 0..nx {
            for y in 0..ny {
                let sum: f64 = (0..na)
                    .flat_map(|a| (0..nb).map(move |b| (a, b)))
                    .map(|(a, b)| table.get(x, y, a, b))
                    .sum();
                if (sum - 1.0).abs() > 1e-10 {
                    return Err(DiqkdError::InvalidCorrelation(format!(
                        "inputs ({x},{y}) sum to {sum}"
                    )));
                }
            }
        }
        Ok(table)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        self.probs[((x * self.ny + y) * self.na + a) * self.nb + b]
    }

    pub fn alphabet(&self) -> (usize, usize, usize, usize) {
        (self.nx, self.ny, self.na, self.nb)
    }

    pub fn entries(&self) -> &[f64] {
        &self.probs
    }
}

/// A state plus per-party indexed POVM families — everything a device needs
/// to generate a correlation.
#[derive(Debug, Clone)]
pub struct StateTuple {
    /// Bipartite marginal shared by Alice and Bob.
    pub state: Operator,
    pub alice: Vec<Povm>,
    pub bob: Vec<Povm>,
}

/// Born-rule table of a tuple. Outcome alphabets are padded to the largest
/// family (missing outcomes carry zero probability), so ragged POVMs such as
/// a mixed two/three-outcome family still produce one rectangular table.
pub fn correlation_from_tuple(tuple: &StateTuple) -> Result<Correlation> {
    if tuple.state.parties() != 2 {
        return Err(DiqkdError::WrongPartyCount {
            need: 2,
            got: tuple.state.parties(),
        });
    }
    let dims = tuple.state.dims();
    for povm in &tuple.alice {
        if povm.dim() != dims[0] {
            return Err(DiqkdError::Qip(qip_core::QipError::DimensionMismatch {
                context: format!("Alice POVM dim {} vs subsystem {}", povm.dim(), dims[0]),
            }));
        }
    }
    for povm in &tuple.bob {
        if povm.dim() != dims[1] {
            return Err(DiqkdError::Qip(qip_core::QipError::DimensionMismatch {
                context: format!("Bob POVM dim {} vs subsystem {}", povm.dim(), dims[1]),
            }));
        }
    }
    let nx = tuple.alice.len();
    let ny = tuple.bob.len();
    let na = tuple.alice.iter().map(Povm::outcomes).max().unwrap_or(0);
    let nb = tuple.bob.iter().map(Povm::outcomes).max().unwrap_or(0);
    let mut probs = vec![0.0; nx * ny * na * nb];
    for (x, ma) in tuple.alice.iter().enumerate() {
        for (y, mb) in tuple.bob.iter().enumerate() {
            for a in 0..ma.outcomes() {
                for b in 0..mb.outcomes() {
                    let op = ma.element(a).tensor(mb.element(b));
                    let p = (op.matrix() * tuple.state.matrix()).trace().re;
                    probs[((x * ny + y) * na + a) * nb + b] = p;
                }
            }
        }
    }
    Correlation::new(probs, nx, ny, na, nb)
}

fn require_chsh_alphabets(p: &Correlation) -> Result<()> {
    let (nx, ny, _, _) = p.alphabet();
    if nx < 2 || ny < 2 {
        return Err(DiqkdError::AlphabetMismatch(format!(
            "need two inputs per party, got ({nx}, {ny})"
        )));
    }
    // The CHSH game reads only binary outcomes on the test inputs.
    for x in 0..2 {
        for y in 0..2 {
            let mass: f64 = (0..2)
                .flat_map(|a| (0..2).map(move |b| (a, b)))
                .map(|(a, b)| p.get(x, y, a, b))
                .sum();
            if (mass - 1.0).abs() > 1e-9 {
                return Err(DiqkdError::AlphabetMismatch(format!(
                    "inputs ({x},{y}) put weight {mass} on binary outcomes"
                )));
            }
        }
    }
    Ok(())
}

/// CHSH winning probability
/// `omega = 1/4 sum_{x,y in {0,1}} sum_{a xor b = x.y} p(a,b|x,y)`.
pub fn omega_of_p(p: &Correlation) -> Result<f64> {
    require_chsh_alphabets(p)?;
    let mut omega = 0.0;
    for x in 0..2usize {
        for y in 0..2usize {
            for a in 0..2usize {
                for b in 0..2usize {
                    if a ^ b == x & y {
                        omega += p.get(x, y, a, b);
                    }
                }
            }
        }
    }
    Ok(omega / 4.0)
}

/// CHSH violation `S = 8 omega - 4`.
pub fn s_of_p(p: &Correlation) -> Result<f64> {
    Ok(8.0 * omega_of_p(p)? - 4.0)
}

/// Key-round error rate `Q = Pr[a != b | x_key, y_key]`.
pub fn q_of_p(p: &Correlation, x_key: usize, y_key: usize) -> Result<f64> {
    let (nx, ny, na, nb) = p.alphabet();
    if x_key >= nx || y_key >= ny {
        return Err(DiqkdError::KeyInputOutOfRange {
            x: x_key,
            y: y_key,
            nx,
            ny,
        });
    }
    let agree: f64 = (0..na.min(nb)).map(|a| p.get(x_key, y_key, a, a)).sum();
    Ok(1.0 - agree)
}

/// Largest variation of either party's marginal under the other party's
/// input choice. Quantum-generated tables stay below 1e-10; a genuinely
/// signalling table simply reports a large margin, no error.
pub fn no_signalling_margin(p: &Correlation) -> f64 {
    let (nx, ny, na, nb) = p.alphabet();
    let mut margin = 0.0f64;
    for x in 0..nx {
        for a in 0..na {
            let m = |y: usize| -> f64 { (0..nb).map(|b| p.get(x, y, a, b)).sum() };
            for y1 in 0..ny {
                for y2 in y1 + 1..ny {
                    margin = margin.max((m(y1) - m(y2)).abs());
                }
            }
        }
    }
    for y in 0..ny {
        for b in 0..nb {
            let m = |x: usize| -> f64 { (0..na).map(|a| p.get(x, y, a, b)).sum() };
            for x1 in 0..nx {
                for x2 in x1 + 1..nx {
                    margin = margin.max((m(x1) - m(x2)).abs());
                }
            }
        }
    }
    margin
}

/// Popescu-Rohrlich box: `p(a,b|x,y) = 1/2` iff `a xor b = x.y`.
/// No-signalling but super-quantum (`omega = 1`).
pub fn pr_box() -> Correlation {
    let mut probs = vec![0.0; 16];
    for x in 0..2usize {
        for y in 0..2usize {
            for a in 0..2usize {
                for b in 0..2usize {
                    if a ^ b == x & y {
                        probs[((x * 2 + y) * 2 + a) * 2 + b] = 0.5;
                    }
                }
            }
        }
    }
    Correlation::new(probs, 2, 2, 2, 2).expect("valid by construction")
}

/// Best classical deterministic device: always output `(0, 0)`, winning
/// whenever `x.y = 0`, i.e. with probability 3/4.
pub fn classical_deterministic() -> Correlation {
    let mut probs = vec![0.0; 16];
    for x in 0..2usize {
        for y in 0..2usize {
            probs[(x * 2 + y) * 4] = 1.0;
        }
    }
    Correlation::new(probs, 2, 2, 2, 2).expect("valid by construction")
}

/// Uniformly random outputs, winning with probability 1/2.
pub fn uniform_noise() -> Correlation {
    Correlation::new(vec![0.25; 16], 2, 2, 2, 2).expect("valid by construction")
}
