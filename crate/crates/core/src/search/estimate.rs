use std::time::{Duration, Instant};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::{minimize, Minimum, NelderMeadConfig};
use super::sample::{stream_rng, SamplerConfig};
use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::smale::{smale_quotients, thm2_family, thm4_family, QuotientReport, FAMILY_MARGIN};

/// Largest degree the search accepts.
pub const MAX_SEARCH_DEGREE: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    #[serde(rename = "max_S")]
    MaxS,
    #[serde(rename = "min_T")]
    MinT,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub budget: usize,
    pub seed: u64,
    pub sampler: SamplerConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 200,
            budget: 2000,
            seed: 0,
            sampler: SamplerConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub n: usize,
    pub objective: Objective,
    pub best_value: f64,
    pub seed: u64,
    pub restarts: usize,
    pub budget: usize,
    pub evaluations: usize,
    pub successful_evaluations: usize,
    pub best_restart: usize,
    /// Set when a maximization finds `S > 1`.
    pub s_exceeds_one: bool,
    pub product: BlaschkeProduct,
    pub report: QuotientReport,
    #[serde(skip)]
    pub wall_time: Duration,
}

/// Plane-to-disk bijection `v ↦ v / (1 + |v|)`.
pub fn disk_from_plane(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y) / (1.0 + x.hypot(y))
}

/// Inverse of [`disk_from_plane`]: `z ↦ z / (1 - |z|)`.
pub fn plane_from_disk(z: Complex64) -> (f64, f64) {
    let v = z / (1.0 - z.norm());
    (v.re, v.im)
}

/// The product `{0} ∪ {disk_from_plane(x_i, y_i)}` for a flat parameter
/// vector `[x_1, y_1, x_2, y_2, ...]`.
pub fn product_from_params(params: &[f64]) -> Result<BlaschkeProduct> {
    let mut zeros = vec![Complex64::new(0.0, 0.0)];
    zeros.extend(params.chunks_exact(2).map(|p| disk_from_plane(p[0], p[1])));
    BlaschkeProduct::from_zeros(zeros)
}

fn params_from_product(b: &BlaschkeProduct) -> Vec<f64> {
    b.nonzero_zeros()
        .flat_map(|z| {
            let (x, y) = plane_from_disk(z);
            [x, y]
        })
        .collect()
}

struct Problem {
    n: usize,
    objective: Objective,
    min_radius: f64,
    max_radius: f64,
}

impl Problem {
    fn admissible(&self, b: &BlaschkeProduct) -> bool {
        b.origin_multiplicity() == 1
            && b.nonzero_zeros()
                .all(|z| z.norm() >= self.min_radius && z.norm() <= self.max_radius)
    }

    /// Value to minimize, `+∞` outside the search annulus or when the
    /// quotient computation fails.
    fn score(&self, params: &[f64]) -> f64 {
        let Ok(b) = product_from_params(params) else {
            return f64::INFINITY;
        };
        if !self.admissible(&b) {
            return f64::INFINITY;
        }
        match smale_quotients(&b) {
            Ok(r) => match self.objective {
                Objective::MaxS => -r.s,
                Objective::MinT => r.t,
            },
            Err(_) => f64::INFINITY,
        }
    }

    fn warm_starts(&self) -> Vec<Vec<f64>> {
        let d = (self.n - 1) as f64;
        let family: Vec<Result<BlaschkeProduct>> = match self.objective {
            Objective::MaxS => [0.9, 0.99, 0.999, 0.9999, 0.99999]
                .iter()
                .map(|beta: &f64| thm2_family(self.n, beta.powf(1.0 / d)))
                .collect(),
            Objective::MinT => [0.01, 0.05, 0.1, 0.3]
                .iter()
                .map(|&a| thm4_family(self.n, a))
                .collect(),
        };
        family
            .into_iter()
            .filter_map(|b| b.ok())
            .filter(|b| self.admissible(b))
            .map(|b| params_from_product(&b))
            .collect()
    }
}

/// Multi-start estimate of `sup S` over degree-`n` products.
///
/// ```no_run
/// use smale_lab::search::{estimate_kn, SearchConfig};
/// let result = estimate_kn(2, &SearchConfig::default()).unwrap();
/// assert!(result.best_value > 0.99 && result.best_value < 1.0);
/// ```
pub fn estimate_kn(n: usize, config: &SearchConfig) -> Result<SearchResult> {
    estimate(n, Objective::MaxS, config)
}

/// Multi-start estimate of `inf T` over degree-`n` products.
pub fn estimate_ln(n: usize, config: &SearchConfig) -> Result<SearchResult> {
    estimate(n, Objective::MinT, config)
}

pub fn estimate(n: usize, objective: Objective, config: &SearchConfig) -> Result<SearchResult> {
    if !(2..=MAX_SEARCH_DEGREE).contains(&n) {
        return Err(Error::Domain(format!(
            "search degree must lie in 2..={MAX_SEARCH_DEGREE}, got {n}"
        )));
    }
    if config.restarts == 0 || config.budget == 0 {
        return Err(Error::Domain("restarts and budget must be positive".into()));
    }
    let started = Instant::now();
    let problem = Problem {
        n,
        objective,
        min_radius: config.sampler.min_radius(),
        max_radius: 1.0 - FAMILY_MARGIN,
    };
    let warm = problem.warm_starts();
    let nm = NelderMeadConfig::default();

    let runs: Vec<Minimum> = (0..config.restarts)
        .into_par_iter()
        .map(|i| {
            let start = match warm.get(i) {
                Some(p) => p.clone(),
                None => {
                    let mut rng = stream_rng(config.seed, i as u64);
                    (1..n)
                        .flat_map(|_| {
                            let (x, y) = plane_from_disk(config.sampler.point(&mut rng));
                            [x, y]
                        })
                        .collect()
                }
            };
            minimize(|p| problem.score(p), &start, config.budget, &nm)
        })
        .collect();

    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let successful_evaluations = runs.iter().map(|r| r.successes).sum();
    let (best_restart, best) = runs
        .iter()
        .enumerate()
        .filter(|(_, r)| r.value.is_finite())
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .ok_or(Error::SearchFailure)?;

    let product = product_from_params(&best.point)?;
    let report = smale_quotients(&product)?;
    let best_value = match objective {
        Objective::MaxS => report.s,
        Objective::MinT => report.t,
    };
    Ok(SearchResult {
        n,
        objective,
        best_value,
        seed: config.seed,
        restarts: config.restarts,
        budget: config.budget,
        evaluations,
        successful_evaluations,
        best_restart,
        s_exceeds_one: objective == Objective::MaxS && best_value > 1.0,
        product,
        report,
        wall_time: started.elapsed(),
    })
}
