use crate::error::Result;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Stop once every vertex lies within this distance (max norm) of the best.
    pub x_tol: f64,
    /// Improvements of the best value at or below this count as a stall.
    pub f_tol: f64,
    /// Consecutive stalled iterations that end a run.
    pub stall_iterations: usize,
    pub max_iterations: usize,
    /// Fresh simplices built around the optimum after convergence; restarting
    /// stops early once a restart brings no improvement.
    pub restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            x_tol: 1e-9,
            f_tol: 1e-12,
            stall_iterations: 50,
            max_iterations: 20_000,
            restarts: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    /// Objective value at the starting point.
    pub start_value: f64,
    pub evaluations: u64,
    pub iterations: u64,
}

struct Run<'a, F> {
    f: &'a F,
    evaluations: u64,
}

impl<F: Fn(&[f64]) -> Result<f64>> Run<'_, F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        let v = (self.f)(x)?;
        // treat NaN as the worst possible value
        Ok(if v.is_nan() { f64::NEG_INFINITY } else { v })
    }

    /// One simplex descent; returns the best vertex, its value and the
    /// iteration count.
    fn descend(
        &mut self,
        x0: &[f64],
        f0: f64,
        opts: &NelderMeadOptions,
    ) -> Result<(Vec<f64>, f64, u64)> {
        let d = x0.len();
        let mut simplex: Vec<(Vec<f64>, f64)> = vec![(x0.to_vec(), f0)];
        for i in 0..d {
            let mut x = x0.to_vec();
            x[i] += opts.initial_step;
            let v = self.eval(&x)?;
            simplex.push((x, v));
        }

        let mut stalled = 0;
        let mut last_best = f64::NEG_INFINITY;
        let mut iterations = 0;
        while iterations < opts.max_iterations as u64 {
            // maximizing: best first; stable sort keeps earlier vertices on ties
            simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
            let best = simplex[0].1;
            if best > last_best + opts.f_tol {
                stalled = 0;
                last_best = best;
            } else {
                stalled += 1;
                if stalled >= opts.stall_iterations {
                    break;
                }
            }
            let size = simplex[1..]
                .iter()
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if size < opts.x_tol {
                break;
            }
            iterations += 1;

            let worst = simplex[d].clone();
            let centroid: Vec<f64> = (0..d)
                .map(|j| simplex[..d].iter().map(|(x, _)| x[j]).sum::<f64>() / d as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let xr = along(1.0);
            let fr = self.eval(&xr)?;
            if fr > simplex[0].1 {
                let xe = along(2.0);
                let fe = self.eval(&xe)?;
                simplex[d] = if fe > fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr > simplex[d - 1].1 {
                simplex[d] = (xr, fr);
                continue;
            }
            // outside contraction when the reflection beat the worst vertex,
            // inside contraction otherwise
            let (t, target) = if fr > worst.1 {
                (0.5, fr)
            } else {
                (-0.5, worst.1)
            };
            let xc = along(t);
            let fc = self.eval(&xc)?;
            if fc > target || (t > 0.0 && fc == target) {
                simplex[d] = (xc, fc);
                continue;
            }
            // shrink toward the best vertex
            let x_best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = vertex
                    .0
                    .iter()
                    .zip(&x_best)
                    .map(|(v, b)| b + 0.5 * (v - b))
                    .collect();
                let v = self.eval(&x)?;
                *vertex = (x, v);
            }
        }
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let (x, v) = simplex.swap_remove(0);
        Ok((x, v, iterations))
    }
}

/// Derivative-free maximization of `f` from `x0`.
///
/// The returned value is never below `f(x0)`.
pub fn nelder_mead_max<F>(f: &F, x0: &[f64], opts: &NelderMeadOptions) -> Result<NelderMeadOutcome>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut run = Run { f, evaluations: 0 };
    let start_value = run.eval(x0)?;
    let (mut x, mut value, mut iterations) = run.descend(x0, start_value, opts)?;
    for _ in 0..opts.restarts {
        let (x2, v2, it) = run.descend(&x, value, opts)?;
        iterations += it;
        if v2 > value + opts.f_tol {
            x = x2;
            value = v2;
        } else {
            if v2 > value {
                x = x2;
                value = v2;
            }
            break;
        }
    }
    if start_value > value {
        x = x0.to_vec();
        value = start_value;
    }
    Ok(NelderMeadOutcome {
        x,
        value,
        start_value,
        evaluations: run.evaluations,
        iterations,
    })
}
