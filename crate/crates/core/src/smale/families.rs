use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::blaschke::{compose_pre, BlaschkeProduct, MobiusAutomorphism};
use crate::error::{Error, Result};

/// Family parameters must stay more than this far below 1. The edge itself
/// is excluded, with a relative slack so that a decimal input such as
/// `0.999999` counts as sitting on it.
pub const FAMILY_MARGIN: f64 = 1e-6;
const EDGE_SLACK: f64 = 1e-6;

fn check_family(n: usize, name: &str, value: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("degree must be at least 2, got {n}")));
    }
    if !(value > 0.0 && 1.0 - value > FAMILY_MARGIN * (1.0 + EDGE_SLACK)) {
        return Err(Error::Domain(format!(
            "{name} = {value} must lie in (0, 1 - {FAMILY_MARGIN:e})"
        )));
    }
    Ok(())
}

/// `e^{2πik/d}`, exact at quarter turns.
pub fn unit_root(k: usize, d: usize) -> Complex64 {
    let k = k % d;
    if (4 * k).is_multiple_of(d) {
        match 4 * k / d {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::from_polar(1.0, TAU * k as f64 / d as f64)
    }
}

/// `z (z^d - α^d) / (1 - α^d z^d)` with `d = n - 1`, as the zero set
/// `{0} ∪ {α ω_d^k}`.
pub fn thm2_family(n: usize, alpha: f64) -> Result<BlaschkeProduct> {
    check_family(n, "alpha", alpha)?;
    let d = n - 1;
    let mut zeros = vec![Complex64::new(0.0, 0.0)];
    zeros.extend((0..d).map(|k| unit_root(k, d) * alpha));
    BlaschkeProduct::from_zeros(zeros)
}

/// The point `ζ` whose `d`-th roots are the critical points of the
/// [`thm2_family`] member with `β = α^d`:
/// `((d+1) - (d-1)β² - √(((d+1)² - (d-1)²β²)(1 - β²))) / (2β)`.
///
/// Evaluated in the rationalized form `2β / ((d+1) - (d-1)β² + √(...))`.
pub fn thm2_critical_value(n: usize, beta: f64) -> Result<f64> {
    check_family(n, "beta", beta)?;
    let d = (n - 1) as f64;
    let b2 = beta * beta;
    let x = (d + 1.0) - (d - 1.0) * b2;
    let y = ((d + 1.0).powi(2) - (d - 1.0).powi(2) * b2) * (1.0 - b2);
    Ok(2.0 * beta / (x + y.sqrt()))
}

/// Critical points of the [`thm2_family`] member with `β = α^d`.
pub fn thm2_critical_points(n: usize, beta: f64) -> Result<Vec<Complex64>> {
    let zeta = thm2_critical_value(n, beta)?;
    let d = n - 1;
    let radius = zeta.powf(1.0 / d as f64);
    Ok((0..d).map(|k| unit_root(k, d) * radius).collect())
}

/// Closed-form `S` of the [`thm2_family`] member with `β = α^d`:
///
/// `(1/β²) (A - (d+1)s) / (A - (d-1)s)`, `A = √((d+1)² - (d-1)²β²)`,
/// `s = √(1 - β²)`.
///
/// The numerator is rewritten as `4dβ² / (A + (d+1)s)` so small `β` does not
/// cancel.
///
/// ```
/// use smale_lab::smale::thm2_closed_s;
/// let s = thm2_closed_s(2, 0.5).unwrap();
/// assert!((s - 0.5358984).abs() < 1e-7);
/// ```
pub fn thm2_closed_s(n: usize, beta: f64) -> Result<f64> {
    check_family(n, "beta", beta)?;
    let d = (n - 1) as f64;
    let s = (1.0 - beta * beta).sqrt();
    let a = ((d + 1.0).powi(2) - (d - 1.0).powi(2) * beta * beta).sqrt();
    Ok(4.0 * d / ((a + (d + 1.0) * s) * (a - (d - 1.0) * s)))
}

/// `C ∘ M` with `C(z) = (z^n - a^n) / (1 - a^n z^n)` and
/// `M(z) = (z + a) / (1 + az)`; vanishes at the origin and has the single
/// critical point `-a` of multiplicity `n - 1`.
pub fn thm4_family(n: usize, a: f64) -> Result<BlaschkeProduct> {
    check_family(n, "a", a)?;
    let outer = BlaschkeProduct::from_zeros((0..n).map(|k| unit_root(k, n) * a).collect())?;
    let shift = MobiusAutomorphism::new(0.0, Complex64::new(-a, 0.0))?;
    let composed = compose_pre(&outer, &shift)?;
    // M^{-1}(a) = 0 exactly, so the origin zero needs no snapping.
    debug_assert_eq!(composed.origin_multiplicity(), 1);
    Ok(composed)
}

/// `(1/n) (1 - a^{2n}) / (1 - a²)`.
pub fn thm4_closed_t(n: usize, a: f64) -> Result<f64> {
    check_family(n, "a", a)?;
    let a2 = a * a;
    // geometric sum 1 + a² + ... + a^{2(n-1)}
    let sum: f64 = (0..n).map(|k| a2.powi(k as i32)).sum();
    Ok(sum / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smale::smale_quotients;

    #[test]
    fn roots_of_unity_exact() {
        assert_eq!(unit_root(1, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(unit_root(3, 4), Complex64::new(0.0, -1.0));
        assert_eq!(unit_root(0, 7), Complex64::new(1.0, 0.0));
        let w = unit_root(1, 3);
        assert!((w.powu(3) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn thm2_examples() {
        assert!((thm2_closed_s(2, 0.5).unwrap() - 0.5358983848622454).abs() < 1e-15);
        assert!((thm2_closed_s(3, 0.49).unwrap() - 0.68726773895690).abs() < 1e-13);
        let pts = thm2_critical_points(3, 0.49).unwrap();
        assert!((pts[0].re - 0.42839512623017).abs() < 1e-13);
        assert!((pts[1].re + 0.42839512623017).abs() < 1e-13);
        // tends to 1 as β → 1
        assert!(thm2_closed_s(2, 0.99999).unwrap() > 0.99);
        assert!(thm2_closed_s(3, 0.99999).unwrap() > 0.99);
    }

    #[test]
    fn thm2_matches_printed_form() {
        for n in 2..8usize {
            let d = (n - 1) as f64;
            for &beta in &[0.1f64, 0.3, 0.5, 0.9, 0.999] {
                let s = (1.0f64 - beta * beta).sqrt();
                let a = ((d + 1.0).powi(2) - (d - 1.0).powi(2) * beta * beta).sqrt();
                let printed = (a - (d + 1.0) * s) / (a - (d - 1.0) * s) / (beta * beta);
                let stable = thm2_closed_s(n, beta).unwrap();
                assert!((printed - stable).abs() < 1e-12, "n={n} β={beta}");

                let x = (d + 1.0) - (d - 1.0) * beta * beta;
                let zeta = (x - (a * a * s * s).sqrt()) / (2.0 * beta);
                assert!((zeta - thm2_critical_value(n, beta).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn thm2_numeric_agreement() {
        for n in 2..6usize {
            for &beta in &[0.1f64, 0.5, 0.9, 0.999] {
                let alpha = beta.powf(1.0 / (n - 1) as f64);
                let b = thm2_family(n, alpha).unwrap();
                let r = smale_quotients(&b).unwrap();
                let closed = thm2_closed_s(n, alpha.powi(n as i32 - 1)).unwrap();
                assert!(
                    (r.s - closed).abs() < 1e-8,
                    "n={n} β={beta}: {} vs {closed}",
                    r.s
                );
                assert_eq!(r.argmin.len(), n - 1);
            }
        }
    }

    #[test]
    fn thm4_examples() {
        assert!((thm4_closed_t(2, 0.5).unwrap() - 0.625).abs() < 1e-15);
        assert!((thm4_closed_t(3, 0.5).unwrap() - 0.4375).abs() < 1e-15);
        assert!((thm4_closed_t(2, 0.01).unwrap() - 0.50005).abs() < 1e-15);
        let printed = |n: usize, a: f64| (1.0 - a.powi(2 * n as i32)) / (1.0 - a * a) / n as f64;
        assert!((thm4_closed_t(5, 0.7).unwrap() - printed(5, 0.7)).abs() < 1e-14);
    }

    #[test]
    fn thm4_numeric_agreement() {
        for n in 2..7usize {
            for &a in &[0.05, 0.3, 0.5, 0.8] {
                let b = thm4_family(n, a).unwrap();
                assert_eq!(b.origin_multiplicity(), 1);
                let r = smale_quotients(&b).unwrap();
                let closed = thm4_closed_t(n, a).unwrap();
                assert!(
                    (r.t - closed).abs() < 1e-8,
                    "n={n} a={a}: {} vs {closed}",
                    r.t
                );
                for q in &r.quotients {
                    assert!((q.zeta + a).norm() < 1e-8, "n={n} a={a}: {}", q.zeta);
                }
            }
        }
    }

    #[test]
    fn parameter_guards() {
        assert!(thm2_family(1, 0.5).is_err());
        assert!(thm2_family(3, 0.0).is_err());
        assert!(thm2_family(3, 0.999999).is_err());
        assert!(thm2_family(3, 0.999998).is_ok());
        assert!(thm4_family(3, 1.0).is_err());
        assert!(thm2_closed_s(2, 1.0).is_err());
        assert!(thm4_closed_t(2, -0.1).is_err());
    }
}
