use num_complex::Complex64;
use serde::Serialize;

use super::report::smale_quotients;
use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::polycore::poly_smale_quotients;

/// `B_m` with zeros `{0} ∪ {a_i / m}` built from polynomial zeros `a_i`,
/// together with the rescaled function `f_m(z) = m^n B_m(z/m)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RescalePair {
    pub m: f64,
    pub product: BlaschkeProduct,
    #[serde(with = "crate::serial::complex_vec")]
    pub source_zeros: Vec<Complex64>,
}

/// One critical point of `B_m`, its image `d = m c` for `f_m`, and the
/// quotient computed both ways.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RescaledCritical {
    #[serde(with = "crate::serial::complex")]
    pub c: Complex64,
    #[serde(with = "crate::serial::complex")]
    pub d: Complex64,
    pub blaschke_quotient: f64,
    pub scaled_quotient: f64,
}

pub fn rescale_family(poly_zeros: &[Complex64], m: f64) -> Result<RescalePair> {
    if poly_zeros.is_empty() {
        return Err(Error::Domain(
            "rescaling needs at least one polynomial zero".into(),
        ));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Domain(format!("scale m = {m} must be positive")));
    }
    if let Some(i) = poly_zeros.iter().position(|z| z.norm() == 0.0) {
        return Err(Error::VanishingDerivative(format!(
            "polynomial zero {i} sits at the origin"
        )));
    }
    let mut zeros = vec![Complex64::new(0.0, 0.0)];
    zeros.extend(poly_zeros.iter().map(|&a| a / m));
    Ok(RescalePair {
        m,
        product: BlaschkeProduct::from_zeros(zeros)?,
        source_zeros: poly_zeros.to_vec(),
    })
}

impl RescalePair {
    pub fn degree(&self) -> usize {
        self.product.degree()
    }

    /// `m^n B_m(z/m)`.
    pub fn f_m(&self, z: Complex64) -> Result<Complex64> {
        let n = self.degree() as i32;
        Ok(self.product.eval(z / self.m)? * self.m.powi(n))
    }

    /// `f_m` from its own product form `z ∏ (z - a_i) / (1 - conj(a_i) z / m²)`.
    pub fn f_m_direct(&self, z: Complex64) -> Complex64 {
        let m2 = self.m * self.m;
        self.source_zeros.iter().fold(z, |acc, &a| {
            acc * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z / m2)
        })
    }

    /// Critical points of `B_m` with both quotient routes: the Blaschke
    /// quotient from [`smale_quotients`], and `|f_m(d) / (d f_m'(0))|` from
    /// the product form of `f_m`.
    pub fn critical(&self) -> Result<Vec<RescaledCritical>> {
        let report = smale_quotients(&self.product)?;
        let m2 = self.m * self.m;
        let slope: f64 = self.source_zeros.iter().map(|a| a.norm()).product();
        Ok(report
            .quotients
            .iter()
            .map(|q| {
                let d = q.zeta * self.m;
                let ratio: f64 = self
                    .source_zeros
                    .iter()
                    .map(|&a| ((d - a) / (Complex64::new(1.0, 0.0) - a.conj() * d / m2)).norm())
                    .product();
                RescaledCritical {
                    c: q.zeta,
                    d,
                    blaschke_quotient: q.value,
                    scaled_quotient: ratio / slope,
                }
            })
            .collect())
    }

    /// Largest `|f_m quotient - B_m quotient|`.
    pub fn identity_residual(&self) -> Result<f64> {
        Ok(self
            .critical()?
            .iter()
            .map(|c| (c.scaled_quotient - c.blaschke_quotient).abs())
            .fold(0.0, f64::max))
    }

    /// Largest gap between the sorted `B_m` quotients and the sorted
    /// quotients of `P(z) = z ∏ (z - a_i)`.
    pub fn polynomial_distance(&self) -> Result<f64> {
        let mut blaschke: Vec<f64> = self
            .critical()?
            .iter()
            .map(|c| c.blaschke_quotient)
            .collect();
        let mut poly = poly_smale_quotients(&self.source_zeros)?.values;
        blaschke.sort_by(f64::total_cmp);
        poly.sort_by(f64::total_cmp);
        Ok(blaschke
            .iter()
            .zip(&poly)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0)]
    }

    #[test]
    fn quadratic_example() {
        let pair = rescale_family(&one(), 10.0).unwrap();
        assert!((pair.product.zeros()[1] - Complex64::new(0.1, 0.0)).norm() < 1e-17);
        let crit = pair.critical().unwrap();
        assert_eq!(crit.len(), 1);
        assert!((crit[0].c.re - 0.0501256).abs() < 1e-7);
        assert!((crit[0].blaschke_quotient - 0.5012563).abs() < 1e-7);
        assert!(pair.identity_residual().unwrap() < 1e-10);
        assert!((pair.polynomial_distance().unwrap() - 1.2562893e-3).abs() < 1e-9);
    }

    #[test]
    fn decay_is_quadratic() {
        let e10 = rescale_family(&one(), 10.0)
            .unwrap()
            .polynomial_distance()
            .unwrap();
        let e100 = rescale_family(&one(), 100.0)
            .unwrap()
            .polynomial_distance()
            .unwrap();
        assert!((e100 - 1.2500625e-5).abs() < 1e-10);
        let ratio = e10 / e100;
        assert!((ratio - 100.498).abs() < 1e-2);
    }

    #[test]
    fn evaluation_routes_agree() {
        let zs = vec![Complex64::new(1.0, 0.5), Complex64::new(-0.3, 2.0)];
        let pair = rescale_family(&zs, 7.0).unwrap();
        for z in [Complex64::new(0.3, 0.1), Complex64::new(-2.0, 1.5)] {
            let a = pair.f_m(z).unwrap();
            let b = pair.f_m_direct(z);
            assert!((a - b).norm() < 1e-12 * b.norm().max(1.0));
        }
        assert!(pair.identity_residual().unwrap() < 1e-10);
    }

    #[test]
    fn too_small_scale() {
        assert!(matches!(
            rescale_family(&one(), 1.0),
            Err(Error::InvalidZero { .. })
        ));
        assert!(rescale_family(&one(), 0.0).is_err());
        assert!(rescale_family(&[Complex64::new(0.0, 0.0)], 10.0).is_err());
    }
}
