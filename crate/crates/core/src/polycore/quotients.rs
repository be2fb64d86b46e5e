use num_complex::Complex64;

use super::poly::ComplexPolynomial;
use super::roots::{Root, RootFinder};
use crate::error::{Error, Result};

/// Critical points below this modulus make `P(b)/b` meaningless.
pub const DEGENERATE_CRITICAL_MODULUS: f64 = 1e-13;

/// Normalized Smale quotients `|P(b) / (b P'(0))|` of `P(z) = z ∏(z - a_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyQuotients {
    /// Critical points of `P`, clustered.
    pub critical_points: Vec<Root>,
    /// One value per critical point, repeated by multiplicity.
    pub values: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

/// Quotients for the polynomial with zeros `{0} ∪ zeros`.
///
/// `P(b)/b` is evaluated as `∏(b - a_i)`, so no division by a small `b` ever
/// happens.
pub fn poly_smale_quotients(zeros: &[Complex64]) -> Result<PolyQuotients> {
    poly_smale_quotients_with(zeros, &RootFinder::default())
}

pub fn poly_smale_quotients_with(
    zeros: &[Complex64],
    finder: &RootFinder,
) -> Result<PolyQuotients> {
    if zeros.is_empty() {
        return Err(Error::Domain(
            "need at least one nonzero polynomial zero".into(),
        ));
    }
    if let Some(i) = zeros.iter().position(|a| a.norm() == 0.0) {
        return Err(Error::VanishingDerivative(format!(
            "zero #{i} sits at the origin, so P'(0) = 0"
        )));
    }
    let mut all = Vec::with_capacity(zeros.len() + 1);
    all.push(Complex64::new(0.0, 0.0));
    all.extend_from_slice(zeros);
    let p = ComplexPolynomial::from_roots(&all);
    let critical = finder.roots(&p.derivative())?;

    let derivative_at_origin: Complex64 = zeros.iter().map(|&a| -a).product();
    let mut values = Vec::with_capacity(zeros.len());
    for root in &critical.roots {
        if root.location.norm() < DEGENERATE_CRITICAL_MODULUS {
            return Err(Error::DegenerateQuotient(root.location));
        }
        let reduced: Complex64 = zeros.iter().map(|&a| root.location - a).product();
        let q = reduced.norm() / derivative_at_origin.norm();
        values.extend(std::iter::repeat_n(q, root.multiplicity));
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(PolyQuotients {
        critical_points: critical.roots,
        values,
        min,
        max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn quadratic() {
        let q = poly_smale_quotients(&[r(1.0)]).unwrap();
        assert_eq!(q.values.len(), 1);
        assert!((q.min - 0.5).abs() < 1e-15 && (q.max - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cubic_extremal() {
        let q = poly_smale_quotients(&[r(1.0), r(-1.0)]).unwrap();
        for v in &q.values {
            assert!((v - 2.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn double_zero() {
        // P = z(z-1)^2; critical points 1/3 and 1
        let q = poly_smale_quotients(&[r(1.0), r(1.0)]).unwrap();
        assert!(q.min.abs() < 1e-12);
        assert!((q.max - 4.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn zero_at_origin_is_rejected() {
        assert!(matches!(
            poly_smale_quotients(&[r(0.0), r(1.0)]),
            Err(Error::VanishingDerivative(_))
        ));
    }
}
