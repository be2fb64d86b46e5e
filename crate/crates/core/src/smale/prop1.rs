use serde::{Deserialize, Serialize};

use super::report::smale_quotients;
use crate::blaschke::BlaschkeProduct;
use crate::error::Result;

/// Which constant multiplies `2/3` in the first inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundVariant {
    /// `4^{(n-2)/(n-1)}`.
    Stated,
    /// The Koebe-type constant `4`.
    Koebe4,
}

impl BoundVariant {
    pub fn constant(self, n: usize) -> f64 {
        match self {
            BoundVariant::Stated => 4f64.powf((n as f64 - 2.0) / (n as f64 - 1.0)),
            BoundVariant::Koebe4 => 4.0,
        }
    }

    /// Upper bound on the smallest quotient: `constant · 2/3`.
    pub fn first_bound(self, n: usize) -> f64 {
        self.constant(n) * 2.0 / 3.0
    }
}

/// Outcome of one inequality, recorded only when the hypothesis holds.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop1Comparison {
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop1Report {
    pub degree: usize,
    /// `min |B(ζ)|` over the critical points.
    pub r: f64,
    pub hypothesis_met: bool,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub stated_bound: f64,
    pub koebe4_bound: f64,
    pub second_bound: f64,
    /// Present only when `hypothesis_met`.
    pub comparisons: Vec<Prop1Comparison>,
    /// Comparisons that failed, kept with full numerics.
    pub discrepancies: Vec<Prop1Comparison>,
}

impl Prop1Report {
    pub fn comparison(&self, inequality: &str) -> Option<&Prop1Comparison> {
        self.comparisons.iter().find(|c| c.inequality == inequality)
    }
}

/// Evaluates the critical-value hypothesis `min |B(ζ)| ≥ 1/2` and, when it
/// holds, both first-inequality variants and the second inequality
/// `T ≥ 2^{-n}`. Failures are recorded, never raised.
///
/// ```
/// use num_complex::Complex64;
/// use smale_lab::blaschke::BlaschkeProduct;
/// use smale_lab::smale::prop1_check;
///
/// let b = BlaschkeProduct::from_zeros(vec![Complex64::new(0.0, 0.0), Complex64::new(0.99, 0.0)])
///     .unwrap();
/// let report = prop1_check(&b).unwrap();
/// assert!(report.hypothesis_met);
/// assert!(!report.comparison("first_stated").unwrap().holds);
/// assert!(report.comparison("first_koebe4").unwrap().holds);
/// assert!(report.comparison("second").unwrap().holds);
/// ```
pub fn prop1_check(b: &BlaschkeProduct) -> Result<Prop1Report> {
    let report = smale_quotients(b)?;
    let n = report.degree;
    let r = report
        .quotients
        .iter()
        .map(|q| b.eval(q.zeta).map(|v| v.norm()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let hypothesis_met = r >= 0.5;
    let stated_bound = BoundVariant::Stated.first_bound(n);
    let koebe4_bound = BoundVariant::Koebe4.first_bound(n);
    let second_bound = 0.5f64.powi(n as i32);

    let mut comparisons = Vec::new();
    if hypothesis_met {
        for (name, bound) in [
            ("first_stated", stated_bound),
            ("first_koebe4", koebe4_bound),
        ] {
            comparisons.push(Prop1Comparison {
                inequality: name.into(),
                lhs: report.s,
                rhs: bound,
                holds: report.s <= bound,
            });
        }
        comparisons.push(Prop1Comparison {
            inequality: "second".into(),
            lhs: report.t,
            rhs: second_bound,
            holds: report.t >= second_bound,
        });
    }
    let discrepancies = comparisons.iter().filter(|c| !c.holds).cloned().collect();

    Ok(Prop1Report {
        degree: n,
        r,
        hypothesis_met,
        s: report.s,
        t: report.t,
        stated_bound,
        koebe4_bound,
        second_bound,
        comparisons,
        discrepancies,
    })
}
