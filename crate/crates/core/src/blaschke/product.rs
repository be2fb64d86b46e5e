use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::polycore::{modulus_argument_order, ComplexPolynomial};
use crate::serial::ComplexRecord;

/// Zeros must satisfy `|z_k| < 1 - ZERO_GUARD`.
pub const ZERO_GUARD: f64 = 1e-12;
/// Evaluation refuses points with `|1 - conj(z_k) z| <= POLE_GUARD`.
pub const POLE_GUARD: f64 = 1e-14;

/// `e^{iα} ∏ (z - z_k) / (1 - conj(z_k) z)` stored as its rotation angle and
/// zero multiset.
///
/// Evaluation is always factorwise; expanded coefficients only appear
/// transiently (see [`derivative_numerator`](Self::derivative_numerator)).
/// Zeros are kept sorted by `(modulus, argument)` so equal products compare
/// equal.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    rotation: f64,
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(rotation: f64, mut zeros: Vec<Complex64>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::Domain(
                "a Blaschke product needs at least one zero".into(),
            ));
        }
        if !rotation.is_finite() {
            return Err(Error::Domain(format!("rotation {rotation} is not finite")));
        }
        for (index, &zero) in zeros.iter().enumerate() {
            let modulus = zero.norm();
            if !(modulus < 1.0 - ZERO_GUARD) {
                return Err(Error::InvalidZero {
                    index,
                    zero,
                    modulus,
                });
            }
        }
        zeros.sort_by(modulus_argument_order);
        Ok(BlaschkeProduct {
            rotation: rotation.rem_euclid(TAU),
            zeros,
        })
    }

    /// Product with unit rotation factor.
    pub fn from_zeros(zeros: Vec<Complex64>) -> Result<Self> {
        Self::new(0.0, zeros)
    }

    /// `z^n`.
    pub fn power(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        BlaschkeProduct {
            rotation: 0.0,
            zeros: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn rotation_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.rotation)
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Same zeros, different rotation.
    pub fn with_rotation(&self, rotation: f64) -> Self {
        BlaschkeProduct {
            rotation: rotation.rem_euclid(TAU),
            zeros: self.zeros.clone(),
        }
    }

    /// How many zeros sit exactly at the origin.
    pub fn origin_multiplicity(&self) -> usize {
        self.zeros.iter().filter(|z| z.norm() == 0.0).count()
    }

    /// Zeros other than the exact origin.
    pub fn nonzero_zeros(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.zeros.iter().copied().filter(|z| z.norm() != 0.0)
    }

    fn check_pole(&self, z: Complex64) -> Result<()> {
        if self
            .zeros
            .iter()
            .any(|zk| (1.0 - zk.conj() * z).norm() <= POLE_GUARD)
        {
            return Err(Error::PoleEvaluation(z));
        }
        Ok(())
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_pole(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.rotation_factor()
            * self
                .zeros
                .iter()
                .map(|&zk| factor(zk, z))
                .product::<Complex64>()
    }

    /// `B(z) / (e^{iα} z^m)` where `m` is the origin multiplicity: the product
    /// over the nonzero zeros only, without its rotation.
    pub fn reduced_eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_pole(z)?;
        Ok(self.nonzero_zeros().map(|zk| factor(zk, z)).product())
    }

    /// `B'(z) = e^{iα} Σ_k (1 - |z_k|²)/(1 - conj(z_k) z)² ∏_{j≠k} b_j(z)`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check_pole(z)?;
        let factors: Vec<Complex64> = self.zeros.iter().map(|&zk| factor(zk, z)).collect();
        let n = factors.len();
        let mut prefix = vec![Complex64::new(1.0, 0.0); n + 1];
        for k in 0..n {
            prefix[k + 1] = prefix[k] * factors[k];
        }
        let mut suffix = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in (0..n).rev() {
            let zk = self.zeros[k];
            let den = Complex64::new(1.0, 0.0) - zk.conj() * z;
            sum += (1.0 - zk.norm_sqr()) / (den * den) * prefix[k] * suffix;
            suffix *= factors[k];
        }
        Ok(self.rotation_factor() * sum)
    }

    /// `B'(0)` in product form. With a simple zero at the origin this is
    /// `e^{iα} ∏_{z_k ≠ 0} (-z_k)`; with no origin zero the general factorwise
    /// derivative is used.
    pub fn derivative_at_origin(&self) -> Complex64 {
        match self.origin_multiplicity() {
            0 => self
                .derivative(Complex64::new(0.0, 0.0))
                .expect("origin is never a pole"),
            1 => self.rotation_factor() * self.nonzero_zeros().map(|z| -z).product::<Complex64>(),
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `P(z) = ∏ (z - z_k)`.
    pub fn numerator(&self) -> ComplexPolynomial {
        ComplexPolynomial::from_roots(&self.zeros)
    }

    /// `P*(z) = z^n conj(P(1/conj z))`.
    pub fn denominator(&self) -> ComplexPolynomial {
        self.numerator()
            .conjugate_reciprocal(self.degree())
            .expect("numerator degree equals the product degree")
    }

    /// `N = P' P* - P (P*)'`, so that `B' = e^{iα} N / (P*)²`. Formal degree
    /// `2n - 2`; origin zeros of multiplicity `m` drop `m - 1` degrees.
    pub fn derivative_numerator(&self) -> ComplexPolynomial {
        let p = self.numerator();
        let q = self.denominator();
        &(&p.derivative() * &q) - &(&p * &q.derivative())
    }

    /// `max ||B(e^{iθ})| - 1|` over `sample_count` equispaced boundary points.
    pub fn boundary_modulus_deviation(&self, sample_count: usize) -> f64 {
        (0..sample_count.max(1))
            .map(|k| {
                let z = Complex64::from_polar(1.0, TAU * k as f64 / sample_count.max(1) as f64);
                (self.eval_unchecked(z).norm() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[inline]
pub(crate) fn factor(zk: Complex64, z: Complex64) -> Complex64 {
    (z - zk) / (Complex64::new(1.0, 0.0) - zk.conj() * z)
}

/// `max ||B(e^{iθ})| - 1|` over equispaced boundary samples.
pub fn boundary_modulus_check(b: &BlaschkeProduct, sample_count: usize) -> f64 {
    b.boundary_modulus_deviation(sample_count)
}

#[derive(Serialize, Deserialize)]
struct ProductRecord {
    degree: usize,
    rotation: f64,
    zeros: Vec<ComplexRecord>,
}

impl Serialize for BlaschkeProduct {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ProductRecord {
            degree: self.degree(),
            rotation: self.rotation,
            zeros: self.zeros.iter().map(|&z| z.into()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BlaschkeProduct {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let record = ProductRecord::deserialize(deserializer)?;
        if record.degree != record.zeros.len() {
            return Err(D::Error::custom(format!(
                "degree {} does not match {} listed zeros",
                record.degree,
                record.zeros.len()
            )));
        }
        BlaschkeProduct::new(
            record.rotation,
            record.zeros.into_iter().map(Complex64::from).collect(),
        )
        .map_err(D::Error::custom)
    }
}
