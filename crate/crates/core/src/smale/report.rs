use num_complex::Complex64;
use serde::Serialize;

use super::bounds::{thm1_bound, thm3_lower, THM1_SLACK};
use crate::blaschke::{
    critical_points, hyperbolic_derivative, pseudo_hyperbolic, BlaschkeProduct,
    DEGENERATE_DERIVATIVE,
};
use crate::error::{Error, Result};
use crate::polycore::DEGENERATE_CRITICAL_MODULUS;

/// Relative width inside which critical points count as attaining the
/// minimum or maximum.
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalQuotient {
    #[serde(with = "crate::serial::complex")]
    pub zeta: Complex64,
    pub value: f64,
}

/// A failed inequality: `lhs` against `rhs` with signed `margin` (negative
/// means violated).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// Smale quotients of a normalized product with the bound comparisons.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuotientReport {
    pub degree: usize,
    pub product: BlaschkeProduct,
    /// One entry per critical point, repeated by multiplicity.
    pub quotients: Vec<CriticalQuotient>,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "T")]
    pub t: f64,
    /// Indices into `quotients` attaining `S`.
    pub argmin: Vec<usize>,
    /// Indices into `quotients` attaining `T`.
    pub argmax: Vec<usize>,
    pub thm1_bound: f64,
    pub thm3_lower: f64,
    pub flags: Vec<Violation>,
}

impl QuotientReport {
    pub fn values(&self) -> Vec<f64> {
        self.quotients.iter().map(|q| q.value).collect()
    }
}

/// `|B(ζ) / (ζ B'(0))|` at every critical point of a product with a simple
/// zero at the origin.
///
/// `|B(ζ)/ζ|` is evaluated as the product over the nonzero zeros, and
/// `B'(0)` as `e^{iα} ∏ (-z_k)`, so neither a small `ζ` nor numeric
/// differentiation enters.
pub fn smale_quotients(b: &BlaschkeProduct) -> Result<QuotientReport> {
    let n = b.degree();
    if n < 2 {
        return Err(Error::NoCriticalPoints);
    }
    match b.origin_multiplicity() {
        0 => return Err(Error::NotNormalized),
        1 => {}
        m => {
            return Err(Error::VanishingDerivative(format!(
                "the origin is a zero of multiplicity {m}"
            )))
        }
    }
    let slope = b.derivative_at_origin().norm();
    if slope == 0.0 {
        return Err(Error::VanishingDerivative(
            "B'(0) underflows to zero".into(),
        ));
    }

    let critical = critical_points(b)?;
    let mut quotients = Vec::with_capacity(n - 1);
    for zeta in critical.points() {
        if zeta.norm() < DEGENERATE_CRITICAL_MODULUS {
            return Err(Error::DegenerateQuotient(zeta));
        }
        let value = b.reduced_eval(zeta)?.norm() / slope;
        quotients.push(CriticalQuotient { zeta, value });
    }

    let s = quotients
        .iter()
        .map(|q| q.value)
        .fold(f64::INFINITY, f64::min);
    let t = quotients
        .iter()
        .map(|q| q.value)
        .fold(f64::NEG_INFINITY, f64::max);
    let attaining = |target: f64| -> Vec<usize> {
        quotients
            .iter()
            .enumerate()
            .filter(|(_, q)| (q.value - target).abs() <= TIE_TOLERANCE * target.abs())
            .map(|(i, _)| i)
            .collect()
    };
    let argmin = attaining(s);
    let argmax = attaining(t);

    let upper = thm1_bound(n)?;
    let lower = thm3_lower(n)?;
    let mut flags = Vec::new();
    if !(s <= upper + THM1_SLACK) {
        flags.push(Violation {
            id: "thm1_upper".into(),
            lhs: s,
            rhs: upper,
            margin: upper + THM1_SLACK - s,
        });
    }
    if !(t > lower) {
        flags.push(Violation {
            id: "thm3_lower".into(),
            lhs: t,
            rhs: lower,
            margin: t - lower,
        });
    }

    Ok(QuotientReport {
        degree: n,
        product: b.clone(),
        quotients,
        s,
        t,
        argmin,
        argmax,
        thm1_bound: upper,
        thm3_lower: lower,
        flags,
    })
}

/// `|[B(ζ), B(w)] / [ζ, w]| / |D_H B(w)|` for every critical point `ζ`, in
/// critical-point order.
pub fn general_quotients(b: &BlaschkeProduct, w: Complex64) -> Result<Vec<f64>> {
    if !(w.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "point {w} must lie in the open disk"
        )));
    }
    let slope = b.derivative(w)?;
    if slope.norm() <= DEGENERATE_DERIVATIVE {
        return Err(Error::DegenerateNormalization {
            point: w,
            modulus: slope.norm(),
        });
    }
    let critical = critical_points(b)?;
    let value_at_w = b.eval(w)?;
    let scale = hyperbolic_derivative(b, w)?.norm();
    critical
        .points()
        .into_iter()
        .map(|zeta| {
            let den = pseudo_hyperbolic(zeta, w).norm();
            if den < DEGENERATE_CRITICAL_MODULUS {
                return Err(Error::DegenerateQuotient(zeta));
            }
            let num = pseudo_hyperbolic(b.eval(zeta)?, value_at_w).norm();
            Ok(num / den / scale)
        })
        .collect()
}
