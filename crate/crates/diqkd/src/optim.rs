//! Minimal Nelder-Mead simplex minimizer with an evaluation budget.
//!
//! The objective may return non-finite values (treated as worse than any
//! finite point), which lets callers reject infeasible inputs without
//! aborting the search.

/// Standard simplex coefficients plus budget and stopping tolerance.
#[derive(Debug, Clone, Copy)]
pub struct NelderMead {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Step used to spawn the initial simplex around the start point.
    pub initial_step: f64,
    /// Hard cap on objective evaluations.
    pub max_evals: usize,
    /// Stop when the simplex function spread falls below this.
    pub ftol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            initial_step: 0.3,
            max_evals: 2000,
            ftol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    /// Number of evaluations that returned a finite value.
    pub finite_evals: usize,
}

impl NelderMead {
    pub fn minimize(&self, mut f: impl FnMut(&[f64]) -> f64, x0: &[f64]) -> OptimOutcome {
        let n = x0.len();
        assert!(n >= 1, "need at least one parameter");
        let mut evals = 0usize;
        let mut finite_evals = 0usize;
        let mut best = (x0.to_vec(), f64::INFINITY);

        let mut eval = |x: &[f64], evals: &mut usize, finite: &mut usize, best: &mut (Vec<f64>, f64)| -> f64 {
            *evals += 1;
            let v = f(x);
            let v = if v.is_finite() { v } else { f64::INFINITY };
            if v.is_finite() {
                *finite += 1;
            }
            if v < best.1 {
                *best = (x.to_vec(), v);
            }
            v
        };

        // Initial simplex: start point plus one step along each axis.
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let v0 = eval(x0, &mut evals, &mut finite_evals, &mut best);
        simplex.push((x0.to_vec(), v0));
        for i in 0..n {
            if evals >= self.max_evals {
                break;
            }
            let mut xi = x0.to_vec();
            xi[i] += self.initial_step;
            let vi = eval(&xi, &mut evals, &mut finite_evals, &mut best);
            simplex.push((xi, vi));
        }

        while evals < self.max_evals && simplex.len() == n + 1 {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[n].1 - simplex[0].1;
            if spread.is_finite() && spread < self.ftol {
                break;
            }

            // Centroid of all points but the worst.
            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / n as f64;
                }
            }
            let worst = simplex[n].clone();
            let blend = |a: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + a * (c - w))
                    .collect()
            };

            let xr = blend(self.reflection);
            let vr = eval(&xr, &mut evals, &mut finite_evals, &mut best);
            if vr < simplex[0].1 {
                let xe = blend(self.reflection * self.expansion);
                let ve = eval(&xe, &mut evals, &mut finite_evals, &mut best);
                simplex[n] = if ve < vr { (xe, ve) } else { (xr, vr) };
            } else if vr < simplex[n - 1].1 {
                simplex[n] = (xr, vr);
            } else {
                let xc = if vr < worst.1 {
                    blend(self.reflection * self.contraction)
                } else {
                    blend(-self.contraction)
                };
                let vc = eval(&xc, &mut evals, &mut finite_evals, &mut best);
                if vc < worst.1.min(vr) {
                    simplex[n] = (xc, vc);
                } else {
                    // Shrink toward the best vertex.
                    let x_best = simplex[0].0.clone();
                    for entry in simplex.iter_mut().skip(1) {
                        if evals >= self.max_evals {
                            break;
                        }
                        let xs: Vec<f64> = x_best
                            .iter()
                            .zip(&entry.0)
                            .map(|(b, x)| b + self.shrink * (x - b))
                            .collect();
                        let vs = eval(&xs, &mut evals, &mut finite_evals, &mut best);
                        *entry = (xs, vs);
                    }
                }
            }
        }

        OptimOutcome {
            x: best.0,
            value: best.1,
            evals,
            finite_evals,
        }
    }
}
