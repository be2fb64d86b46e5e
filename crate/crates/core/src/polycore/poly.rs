use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients below this magnitude at the top of the vector are trimmed.
pub const TRIM_THRESHOLD: f64 = 1e-300;

/// Dense univariate polynomial over the complex numbers.
///
/// `coeffs[k]` is the coefficient of `z^k`. The vector is kept trimmed so the
/// last entry, when present, is the leading coefficient; the zero polynomial
/// has an empty vector and no degree.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = ComplexPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        ComplexPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monic polynomial `∏ (z - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            coeffs.push(Complex64::new(0.0, 0.0));
            for k in (1..coeffs.len()).rev() {
                coeffs[k] = coeffs[k - 1] - r * coeffs[k];
            }
            coeffs[0] = -r * coeffs[0];
        }
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while self
            .coeffs
            .last()
            .is_some_and(|c| c.norm() < TRIM_THRESHOLD)
        {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Largest coefficient modulus; zero for the zero polynomial.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// `z^n · conj(p(1/conj(z)))`: coefficient `k` of the result is
    /// `conj(coeff_{n-k})`. Zeros of `p` reflect across the unit circle;
    /// zeros at the origin reflect to infinity and lower the degree.
    pub fn conjugate_reciprocal(&self, n: usize) -> Result<Self> {
        if let Some(d) = self.degree() {
            if d > n {
                return Err(Error::InvalidDegree {
                    formal: n,
                    actual: d,
                });
            }
        }
        Ok(Self::new(
            (0..=n).map(|k| self.coeff(n - k).conj()).collect(),
        ))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&a| a * c).collect())
    }
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn add(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn sub(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn mul(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPolynomial::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }
}

impl Neg for &ComplexPolynomial {
    type Output = ComplexPolynomial;

    fn neg(self) -> ComplexPolynomial {
        ComplexPolynomial::new(self.coeffs.iter().map(|&c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn horner_evaluation() {
        let p = ComplexPolynomial::from_real(&[0.0, -0.5, 1.0]);
        assert_eq!(p.eval(c(0.5)), c(0.0));

        let one = ComplexPolynomial::from_real(&[1.0]);
        assert_eq!(one.eval(Complex64::new(3.0, -7.0)), c(1.0));

        let cubic = ComplexPolynomial::from_real(&[0.0, -1.0, 0.0, 1.0]);
        let z = 1.0 / 3f64.sqrt();
        // direct arithmetic: z^3 - z
        let expected = z * z * z - z;
        assert!((cubic.eval(c(z)).re - expected).abs() < 1e-15);
        assert!((expected + 0.3849002).abs() < 1e-7);
    }

    #[test]
    fn derivative_coefficients() {
        let p = ComplexPolynomial::from_real(&[0.0, -0.5, 1.0]);
        assert_eq!(p.derivative(), ComplexPolynomial::from_real(&[-0.5, 2.0]));
        assert!(ComplexPolynomial::from_real(&[4.0]).derivative().is_zero());
        let cubic = ComplexPolynomial::from_real(&[0.0, -1.0, 0.0, 1.0]);
        assert_eq!(
            cubic.derivative(),
            ComplexPolynomial::from_real(&[-1.0, 0.0, 3.0])
        );
    }

    #[test]
    fn conjugate_reciprocal_examples() {
        let p = ComplexPolynomial::from_real(&[-0.5, 1.0]);
        assert_eq!(
            p.conjugate_reciprocal(1).unwrap(),
            ComplexPolynomial::from_real(&[1.0, -0.5])
        );

        let zn = ComplexPolynomial::from_real(&[0.0, 0.0, 0.0, 1.0]);
        assert_eq!(
            zn.conjugate_reciprocal(3).unwrap(),
            ComplexPolynomial::from_real(&[1.0])
        );

        let q = ComplexPolynomial::from_real(&[0.0, -0.5, 1.0]);
        assert_eq!(
            q.conjugate_reciprocal(2).unwrap(),
            ComplexPolynomial::from_real(&[1.0, -0.5])
        );

        assert!(matches!(
            q.conjugate_reciprocal(1),
            Err(Error::InvalidDegree {
                formal: 1,
                actual: 2
            })
        ));
    }

    #[test]
    fn conjugate_reciprocal_conjugates() {
        let p = ComplexPolynomial::new(vec![Complex64::new(0.2, 0.3), Complex64::new(1.0, -1.0)]);
        let star = p.conjugate_reciprocal(1).unwrap();
        assert_eq!(
            star.coeffs(),
            &[Complex64::new(1.0, 1.0), Complex64::new(0.2, -0.3)]
        );
    }

    #[test]
    fn trailing_trim_defines_degree() {
        let p = ComplexPolynomial::new(vec![c(1.0), c(2.0), c(1e-301)]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(ComplexPolynomial::new(vec![c(0.0)]).degree(), None);
    }

    #[test]
    fn from_roots_expands() {
        let p = ComplexPolynomial::from_roots(&[c(0.0), c(0.5)]);
        assert_eq!(p, ComplexPolynomial::from_real(&[0.0, -0.5, 1.0]));
    }
}
