//! Property battery over sampled products.
//!
//! Every sample of degree `n` with index `i` draws the product and all of its
//! auxiliary random points from the stream `(n << 32) | i` of the master
//! seed, so summaries do not depend on scheduling.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blaschke::{
    compose_pre, critical_points, hyperbolic_derivative, normalize, preimages, BlaschkeProduct,
    MobiusAutomorphism, REFLECTION_TOLERANCE,
};
use crate::polycore::poly_smale_quotients;
use crate::search::{sample_blaschke_with, stream_rng, SamplerConfig};
use crate::smale::{
    general_quotients, prop1_check, smale_quotients, thm1_bound, thm3_lower, BoundVariant,
    Prop1Report, THM1_SLACK,
};

pub const BOUNDARY_TOLERANCE: f64 = 1e-10;
pub const SCHWARZ_PICK_SLACK: f64 = 1e-12;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;
pub const COMPOSITION_TOLERANCE: f64 = 1e-10;
pub const REFLECTION_IDENTITY_TOLERANCE: f64 = 1e-9;
pub const ROTATION_TOLERANCE: f64 = 1e-10;
/// Counterexamples kept per check; the pass count still covers every sample.
pub const MAX_COUNTEREXAMPLES: usize = 10;
/// Auxiliary points are drawn from the disk of this radius.
const AUX_RADIUS: f64 = 0.9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatteryConfig {
    pub degrees: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub sampler: SamplerConfig,
    pub boundary_samples: usize,
    pub preimage_targets: usize,
    pub composition_points: usize,
    pub identity_points: usize,
    pub schwarz_pick_points: usize,
    /// Emit only this first-inequality column of the prop1 report; both when
    /// unset.
    pub bound_variant: Option<BoundVariant>,
    /// Products checked in addition to the sampled ones.
    #[serde(skip)]
    pub include: Vec<BlaschkeProduct>,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            degrees: (2..=8).collect(),
            samples: 1000,
            seed: 0,
            sampler: SamplerConfig::default(),
            boundary_samples: 4096,
            preimage_targets: 16,
            composition_points: 64,
            identity_points: 8,
            schwarz_pick_points: 16,
            bound_variant: None,
            include: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckClass {
    /// A failure fails the run.
    Assertion,
    /// Failures are reported only.
    Report,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub product: BlaschkeProduct,
    pub margin: f64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub id: String,
    pub class: CheckClass,
    pub samples: usize,
    pub passes: usize,
    /// Smallest signed margin seen; negative means a failure.
    pub worst_margin: Option<f64>,
    pub counterexamples: Vec<Counterexample>,
}

impl CheckSummary {
    pub fn failures(&self) -> usize {
        self.samples - self.passes
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop1Entry {
    pub product: BlaschkeProduct,
    pub report: Prop1Report,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop1Section {
    pub evaluated: usize,
    pub hypothesis_met: usize,
    pub stated_bound_column: bool,
    pub koebe4_bound_column: bool,
    /// Every product meeting the hypothesis for which some comparison fails.
    pub discrepancies: Vec<Prop1Entry>,
}

/// The closed-form bounds each sample of degree `n` is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegreeBounds {
    pub n: usize,
    pub thm1_bound: f64,
    pub thm3_lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatterySummary {
    pub config: BatteryConfig,
    pub included_products: usize,
    pub bounds: Vec<DegreeBounds>,
    pub checks: Vec<CheckSummary>,
    pub prop1: Prop1Section,
}

impl BatterySummary {
    pub fn check(&self, id: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn assertions_pass(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| c.class == CheckClass::Assertion)
            .all(|c| c.passes == c.samples)
    }
}

/// Outcome of one check on one product.
struct Outcome {
    id: &'static str,
    class: CheckClass,
    margin: f64,
    detail: String,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.margin >= 0.0
    }
}

struct SampleResult {
    product: BlaschkeProduct,
    outcomes: Vec<Outcome>,
    prop1: Option<Prop1Report>,
}

/// Runs every check over `samples` products per degree plus the included
/// ones.
pub fn run_battery(config: &BatteryConfig) -> BatterySummary {
    let jobs: Vec<(usize, usize)> = config
        .degrees
        .iter()
        .flat_map(|&n| (0..config.samples).map(move |i| (n, i)))
        .collect();
    let mut results: Vec<SampleResult> = jobs
        .par_iter()
        .map(|&(n, i)| {
            let mut rng = stream_rng(config.seed, ((n as u64) << 32) | i as u64);
            match sample_blaschke_with(n, &config.sampler, &mut rng) {
                Ok(b) => check_product(b, config, &mut rng),
                Err(e) => SampleResult {
                    product: BlaschkeProduct::power(n),
                    outcomes: vec![failure("sampling", CheckClass::Assertion, e.to_string())],
                    prop1: None,
                },
            }
        })
        .collect();
    let included: Vec<SampleResult> = config
        .include
        .par_iter()
        .enumerate()
        .map(|(k, b)| {
            let mut rng = stream_rng(config.seed, u64::MAX - k as u64);
            check_product(b.clone(), config, &mut rng)
        })
        .collect();
    results.extend(included);
    summarize(config, results)
}

fn failure(id: &'static str, class: CheckClass, detail: String) -> Outcome {
    Outcome {
        id,
        class,
        margin: f64::NEG_INFINITY,
        detail,
    }
}

fn aux_point<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let r = AUX_RADIUS * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..TAU))
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn multiset_gap(a: Vec<f64>, b: Vec<f64>) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    sorted(a)
        .iter()
        .zip(&sorted(b))
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn check_product<R: Rng + ?Sized>(
    b: BlaschkeProduct,
    config: &BatteryConfig,
    rng: &mut R,
) -> SampleResult {
    use CheckClass::Assertion;
    let n = b.degree();
    let mut out = Vec::new();

    // auxiliary draws happen in a fixed order whatever the outcomes
    let targets: Vec<Complex64> = (0..config.preimage_targets)
        .map(|_| aux_point(rng))
        .collect();
    let sp_points: Vec<Complex64> = (0..config.schwarz_pick_points)
        .map(|_| aux_point(rng))
        .collect();
    let w = aux_point(rng);
    let mobius_center = aux_point(rng);
    let mobius_rotation = rng.random_range(0.0..TAU);
    let comp_points: Vec<Complex64> = (0..config.composition_points)
        .map(|_| aux_point(rng))
        .collect();
    let id_points: Vec<Complex64> = (0..config.identity_points)
        .map(|_| aux_point(rng))
        .collect();
    let phase = rng.random_range(0.0..TAU);
    let poly_zeros: Vec<Complex64> = (1..n.max(2)).map(|_| config.sampler.point(rng)).collect();

    let report = smale_quotients(&b);
    match (&report, thm1_bound(n), thm3_lower(n)) {
        (Ok(r), Ok(upper), Ok(lower)) => {
            out.push(Outcome {
                id: "thm1_upper",
                class: Assertion,
                margin: upper + THM1_SLACK - r.s,
                detail: format!("S = {:e}, bound = {upper:e}", r.s),
            });
            out.push(Outcome {
                id: "thm3_lower",
                class: Assertion,
                margin: r.t - lower,
                detail: format!("T = {:e}, bound = {lower:e}", r.t),
            });
        }
        (Err(e), _, _) => {
            out.push(failure("thm1_upper", Assertion, e.to_string()));
            out.push(failure("thm3_lower", Assertion, e.to_string()));
        }
        (_, Err(e), _) | (_, _, Err(e)) => {
            out.push(failure("thm1_upper", Assertion, e.to_string()));
            out.push(failure("thm3_lower", Assertion, e.to_string()));
        }
    }

    match critical_points(&b) {
        Ok(cs) => {
            let diff = cs.total_multiplicity().abs_diff(n - 1);
            out.push(Outcome {
                id: "critical_count",
                class: Assertion,
                margin: -(diff as f64),
                detail: format!("{} interior critical points", cs.total_multiplicity()),
            });
            out.push(Outcome {
                id: "reflection_symmetry",
                class: Assertion,
                margin: if cs.exterior_checked {
                    REFLECTION_TOLERANCE - cs.reflection_error
                } else {
                    -cs.reflection_error.max(f64::MIN_POSITIVE)
                },
                detail: format!("reflection error {:e}", cs.reflection_error),
            });
        }
        Err(e) => {
            out.push(failure("critical_count", Assertion, e.to_string()));
            out.push(failure("reflection_symmetry", Assertion, e.to_string()));
        }
    }

    let deviation = b.boundary_modulus_deviation(config.boundary_samples);
    out.push(Outcome {
        id: "boundary_modulus",
        class: Assertion,
        margin: BOUNDARY_TOLERANCE - deviation,
        detail: format!("max ||B| - 1| = {deviation:e}"),
    });

    let mut worst_count = 0.0f64;
    let mut count_detail = String::new();
    for &t in &targets {
        match preimages(&b, t) {
            Ok(p) if p.len() == n => {}
            Ok(p) => {
                worst_count = worst_count.min(-(p.len().abs_diff(n) as f64));
                count_detail = format!("{} preimages of {t}", p.len());
            }
            Err(e) => {
                worst_count = f64::NEG_INFINITY;
                count_detail = format!("target {t}: {e}");
            }
        }
    }
    out.push(Outcome {
        id: "preimage_count",
        class: Assertion,
        margin: worst_count,
        detail: count_detail,
    });

    let mut sp = Outcome {
        id: "schwarz_pick",
        class: Assertion,
        margin: f64::INFINITY,
        detail: String::new(),
    };
    for &z in &sp_points {
        match hyperbolic_derivative(&b, z) {
            Ok(d) => {
                let m = 1.0 + SCHWARZ_PICK_SLACK - d.norm();
                if m < sp.margin {
                    sp.margin = m;
                    sp.detail = format!("|D_H B({z})| = {:e}", d.norm());
                }
            }
            Err(e) => {
                sp = failure("schwarz_pick", Assertion, format!("at {z}: {e}"));
                break;
            }
        }
    }
    out.push(sp);

    let normalized = normalize(&b, w)
        .and_then(|c| smale_quotients(&c))
        .and_then(|r| Ok((r.values(), general_quotients(&b, w)?)));
    out.push(match normalized {
        Ok((q, g)) => {
            let gap = multiset_gap(q, g);
            Outcome {
                id: "normalization_invariance",
                class: Assertion,
                margin: NORMALIZATION_TOLERANCE - gap,
                detail: format!("w = {w}, gap {gap:e}"),
            }
        }
        Err(e) => failure(
            "normalization_invariance",
            Assertion,
            format!("w = {w}: {e}"),
        ),
    });

    let composed = MobiusAutomorphism::new(mobius_rotation, mobius_center)
        .and_then(|m| Ok((m, compose_pre(&b, &m)?)));
    out.push(match composed {
        Ok((m, c)) => {
            let gap = comp_points
                .iter()
                .map(|&z| match (c.eval(z), b.eval(m.apply(z))) {
                    (Ok(x), Ok(y)) => (x - y).norm(),
                    _ => f64::INFINITY,
                })
                .fold(0.0, f64::max);
            Outcome {
                id: "composition_consistency",
                class: Assertion,
                margin: COMPOSITION_TOLERANCE - gap,
                detail: format!("center {mobius_center}, gap {gap:e}"),
            }
        }
        Err(e) => failure("composition_consistency", Assertion, e.to_string()),
    });

    let identity_gap = id_points
        .iter()
        .map(|&z| match (b.eval(z.conj().inv()), b.eval(z)) {
            (Ok(outer), Ok(inner)) => (outer * inner.conj() - 1.0).norm(),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    out.push(Outcome {
        id: "reflection_identity",
        class: Assertion,
        margin: REFLECTION_IDENTITY_TOLERANCE - identity_gap,
        detail: format!("max |B(1/conj z) conj B(z) - 1| = {identity_gap:e}"),
    });

    let unit = Complex64::from_polar(1.0, phase);
    let rotated = BlaschkeProduct::new(b.rotation(), b.zeros().iter().map(|z| z * unit).collect())
        .and_then(|r| smale_quotients(&r));
    out.push(match (&report, rotated) {
        (Ok(r), Ok(rr)) => {
            let gap = multiset_gap(r.values(), rr.values());
            Outcome {
                id: "rotation_invariance",
                class: Assertion,
                margin: ROTATION_TOLERANCE - gap,
                detail: format!("phase {phase}, gap {gap:e}"),
            }
        }
        (Err(e), _) => failure("rotation_invariance", Assertion, e.to_string()),
        (_, Err(e)) => failure("rotation_invariance", Assertion, e.to_string()),
    });

    let lower = 4f64.powi(-(n as i32));
    out.push(match poly_smale_quotients(&poly_zeros) {
        Ok(pq) => Outcome {
            id: "polynomial_corollary",
            class: Assertion,
            margin: pq.max - lower,
            detail: format!("zeros {poly_zeros:?}, max quotient {:e}", pq.max),
        },
        Err(e) => failure("polynomial_corollary", Assertion, e.to_string()),
    });

    let prop1 = prop1_check(&b).ok();
    if let Some(p) = &prop1 {
        if p.hypothesis_met {
            let columns = [
                ("prop1_first_stated", BoundVariant::Stated),
                ("prop1_first_koebe4", BoundVariant::Koebe4),
            ];
            for (id, variant) in columns {
                if config.bound_variant.is_some_and(|v| v != variant) {
                    continue;
                }
                let bound = variant.first_bound(n);
                out.push(Outcome {
                    id,
                    class: CheckClass::Report,
                    margin: bound - p.s,
                    detail: format!("S = {:e}, bound = {bound:e}, r = {:e}", p.s, p.r),
                });
            }
            out.push(Outcome {
                id: "prop1_second",
                class: Assertion,
                margin: p.t - p.second_bound,
                detail: format!("T = {:e}, bound = {:e}, r = {:e}", p.t, p.second_bound, p.r),
            });
        }
    }

    SampleResult {
        product: b,
        outcomes: out,
        prop1,
    }
}

const CHECK_ORDER: [&str; 16] = [
    "sampling",
    "thm1_upper",
    "thm3_lower",
    "critical_count",
    "reflection_symmetry",
    "boundary_modulus",
    "preimage_count",
    "schwarz_pick",
    "normalization_invariance",
    "composition_consistency",
    "reflection_identity",
    "rotation_invariance",
    "polynomial_corollary",
    "prop1_first_stated",
    "prop1_first_koebe4",
    "prop1_second",
];

fn summarize(config: &BatteryConfig, results: Vec<SampleResult>) -> BatterySummary {
    let mut checks: Vec<CheckSummary> = Vec::new();
    let mut prop1 = Prop1Section {
        evaluated: 0,
        hypothesis_met: 0,
        stated_bound_column: config.bound_variant != Some(BoundVariant::Koebe4),
        koebe4_bound_column: config.bound_variant != Some(BoundVariant::Stated),
        discrepancies: Vec::new(),
    };
    for sample in results {
        for o in &sample.outcomes {
            let idx = match checks.iter().position(|c| c.id == o.id) {
                Some(i) => i,
                None => {
                    checks.push(CheckSummary {
                        id: o.id.to_string(),
                        class: o.class,
                        samples: 0,
                        passes: 0,
                        worst_margin: None,
                        counterexamples: Vec::new(),
                    });
                    checks.len() - 1
                }
            };
            let c = &mut checks[idx];
            c.samples += 1;
            if o.passed() {
                c.passes += 1;
            } else if c.counterexamples.len() < MAX_COUNTEREXAMPLES {
                c.counterexamples.push(Counterexample {
                    product: sample.product.clone(),
                    margin: o.margin,
                    detail: o.detail.clone(),
                });
            }
            c.worst_margin = Some(c.worst_margin.map_or(o.margin, |m: f64| m.min(o.margin)));
        }
        if let Some(p) = sample.prop1 {
            prop1.evaluated += 1;
            if p.hypothesis_met {
                prop1.hypothesis_met += 1;
            }
            let relevant = p.discrepancies.iter().any(|d| match d.inequality.as_str() {
                "first_stated" => prop1.stated_bound_column,
                "first_koebe4" => prop1.koebe4_bound_column,
                _ => true,
            });
            if relevant {
                prop1.discrepancies.push(Prop1Entry {
                    product: sample.product,
                    report: p,
                });
            }
        }
    }
    let rank = |id: &str| {
        CHECK_ORDER
            .iter()
            .position(|&k| k == id)
            .unwrap_or(CHECK_ORDER.len())
    };
    checks.sort_by_key(|c| rank(&c.id));
    let mut degrees = config.degrees.clone();
    degrees.extend(config.include.iter().map(BlaschkeProduct::degree));
    degrees.sort_unstable();
    degrees.dedup();
    let bounds = degrees
        .into_iter()
        .filter_map(|n| {
            Some(DegreeBounds {
                n,
                thm1_bound: thm1_bound(n).ok()?,
                thm3_lower: thm3_lower(n).ok()?,
            })
        })
        .collect();
    BatterySummary {
        config: config.clone(),
        included_products: config.include.len(),
        bounds,
        checks,
        prop1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_battery_passes() {
        let cfg = BatteryConfig {
            degrees: vec![2, 3, 5],
            samples: 6,
            seed: 7,
            ..BatteryConfig::default()
        };
        let s = run_battery(&cfg);
        for c in &s.checks {
            if c.class == CheckClass::Assertion {
                assert_eq!(
                    c.passes,
                    c.samples,
                    "{} failed: {:?}",
                    c.id,
                    c.counterexamples.first()
                );
            }
        }
        assert!(s.assertions_pass());
        assert_eq!(s.check("thm1_upper").unwrap().samples, 18);
        assert_eq!(s.check("boundary_modulus").unwrap().samples, 18);
    }

    #[test]
    fn order_independent_of_threads() {
        let cfg = BatteryConfig {
            degrees: vec![3],
            samples: 4,
            seed: 1,
            ..BatteryConfig::default()
        };
        let a = run_battery(&cfg);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(|| run_battery(&cfg));
        assert_eq!(a, b);
    }

    #[test]
    fn included_discrepancy() {
        let b =
            BlaschkeProduct::from_zeros(vec![Complex64::new(0.0, 0.0), Complex64::new(0.99, 0.0)])
                .unwrap();
        let cfg = BatteryConfig {
            degrees: vec![],
            samples: 0,
            include: vec![b],
            ..BatteryConfig::default()
        };
        let s = run_battery(&cfg);
        assert_eq!(s.prop1.discrepancies.len(), 1);
        let stated = s.check("prop1_first_stated").unwrap();
        assert_eq!(stated.passes, 0);
        assert_eq!(s.check("prop1_first_koebe4").unwrap().passes, 1);
        assert_eq!(s.check("prop1_second").unwrap().passes, 1);
        assert!(s.assertions_pass());
    }
}
