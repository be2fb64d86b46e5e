//! Bounded-budget Nelder–Mead minimization.
//!
//! The sequence of evaluated points depends only on the objective and the
//! start, never on the budget, so a run with budget `b` evaluates a prefix of
//! the points a run with budget `2b` evaluates. Together with best-so-far
//! tracking this makes the reported minimum monotone in the budget.

/// Standard coefficients: reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2.
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadConfig {
    /// Initial simplex edge, relative to `1 + |x_i|`.
    pub step: f64,
    /// The simplex is rebuilt around the best point once its value spread
    /// and diameter both drop below this.
    pub tolerance: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        NelderMeadConfig {
            step: 0.1,
            tolerance: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub point: Vec<f64>,
    /// `+∞` when no evaluation succeeded.
    pub value: f64,
    pub evaluations: usize,
    /// Evaluations that returned a finite value.
    pub successes: usize,
}

struct Budgeted<F> {
    f: F,
    used: usize,
    budget: usize,
    successes: usize,
    best: (f64, Vec<f64>),
}

impl<F: FnMut(&[f64]) -> f64> Budgeted<F> {
    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.used >= self.budget {
            return None;
        }
        self.used += 1;
        let raw = (self.f)(x);
        let value = if raw.is_finite() {
            self.successes += 1;
            raw
        } else {
            f64::INFINITY
        };
        if value < self.best.0 {
            self.best = (value, x.to_vec());
        }
        Some(value)
    }
}

/// Minimizes `f` from `start` using at most `budget` evaluations. Non-finite
/// values count as `+∞`.
pub fn minimize<F>(f: F, start: &[f64], budget: usize, config: &NelderMeadConfig) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut counter = Budgeted {
        f,
        used: 0,
        budget,
        successes: 0,
        best: (f64::INFINITY, start.to_vec()),
    };
    let _ = run(&mut counter, start, config);
    Minimum {
        point: counter.best.1,
        value: counter.best.0,
        evaluations: counter.used,
        successes: counter.successes,
    }
}

fn run<F: FnMut(&[f64]) -> f64>(
    c: &mut Budgeted<F>,
    start: &[f64],
    config: &NelderMeadConfig,
) -> Option<()> {
    let dim = start.len();
    let mut anchor = start.to_vec();
    let mut anchor_value = c.eval(&anchor)?;
    if dim == 0 {
        return Some(());
    }
    loop {
        let mut simplex: Vec<(f64, Vec<f64>)> = vec![(anchor_value, anchor.clone())];
        for i in 0..dim {
            let mut x = anchor.clone();
            x[i] += config.step * (1.0 + x[i].abs());
            let v = c.eval(&x)?;
            simplex.push((v, x));
        }

        loop {
            simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
            if converged(&simplex, config.tolerance) {
                break;
            }
            let (worst_value, worst) = simplex[dim].clone();
            let second_worst = simplex[dim - 1].0;
            let best_value = simplex[0].0;

            let mut centroid = vec![0.0; dim];
            for (_, x) in &simplex[..dim] {
                for (ci, xi) in centroid.iter_mut().zip(x) {
                    *ci += xi / dim as f64;
                }
            }
            let toward = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst)
                    .map(|(ci, wi)| ci + t * (ci - wi))
                    .collect()
            };

            let reflected = toward(1.0);
            let fr = c.eval(&reflected)?;
            if fr < best_value {
                let expanded = toward(EXPANSION);
                let fe = c.eval(&expanded)?;
                simplex[dim] = if fe < fr {
                    (fe, expanded)
                } else {
                    (fr, reflected)
                };
                continue;
            }
            if fr < second_worst {
                simplex[dim] = (fr, reflected);
                continue;
            }
            let (contracted, limit) = if fr < worst_value {
                (toward(CONTRACTION), fr)
            } else {
                (toward(-CONTRACTION), worst_value)
            };
            let fc = c.eval(&contracted)?;
            if fc < limit || (fr < worst_value && fc <= fr) {
                simplex[dim] = (fc, contracted);
                continue;
            }
            let best = simplex[0].1.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let x: Vec<f64> = best
                    .iter()
                    .zip(&vertex.1)
                    .map(|(b, xi)| b + SHRINK * (xi - b))
                    .collect();
                *vertex = (c.eval(&x)?, x);
            }
        }

        anchor_value = c.best.0;
        anchor = c.best.1.clone();
    }
}

fn converged(simplex: &[(f64, Vec<f64>)], tol: f64) -> bool {
    let best = simplex[0].0;
    let worst = simplex[simplex.len() - 1].0;
    if !best.is_finite() {
        return false;
    }
    let spread = worst - best;
    let diameter = simplex[1..]
        .iter()
        .map(|(_, x)| {
            x.iter()
                .zip(&simplex[0].1)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    spread <= tol * (best.abs() + tol) && diameter <= tol.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn finds_rosenbrock_minimum() {
        let m = minimize(rosenbrock, &[-1.2, 1.0], 5000, &NelderMeadConfig::default());
        assert!(m.value < 1e-10, "{m:?}");
        assert!((m.point[0] - 1.0).abs() < 1e-4);
        assert!(m.evaluations <= 5000);
    }

    #[test]
    fn budget_prefix_is_monotone() {
        let cfg = NelderMeadConfig::default();
        let mut prev = f64::INFINITY;
        for budget in [10, 20, 40, 80, 160, 320] {
            let m = minimize(rosenbrock, &[-1.2, 1.0], budget, &cfg);
            assert_eq!(m.evaluations, budget);
            assert!(m.value <= prev);
            prev = m.value;
        }
    }

    #[test]
    fn non_finite_is_worst() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 2.0).powi(2)
            }
        };
        let m = minimize(f, &[0.5], 500, &NelderMeadConfig::default());
        assert!((m.point[0] - 2.0).abs() < 1e-5);
        assert!(m.successes > 0);

        let never = minimize(
            |_: &[f64]| f64::NAN,
            &[0.0, 0.0],
            50,
            &NelderMeadConfig::default(),
        );
        assert_eq!(never.successes, 0);
        assert_eq!(never.value, f64::INFINITY);
    }
}
