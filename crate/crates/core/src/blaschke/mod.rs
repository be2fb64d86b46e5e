//! Finite Blaschke products: evaluation, derivative structure, critical
//! points, disk automorphisms and the normalization that moves an arbitrary
//! evaluation point to the origin.

mod critical;
mod geometry;
mod mobius;
mod product;

pub use critical::{
    critical_points, critical_points_with, CriticalPoint, CriticalSet, AMBIGUITY_BAND,
    REFLECTION_TOLERANCE,
};
pub use geometry::{hyperbolic_derivative, pseudo_hyperbolic};
pub use mobius::{
    compose_post, compose_pre, normalize, preimages, MobiusAutomorphism, DEGENERATE_DERIVATIVE,
    PREIMAGE_TOLERANCE, PROBE_TOLERANCE,
};
pub use product::{boundary_modulus_check, BlaschkeProduct, POLE_GUARD, ZERO_GUARD};

use num_complex::Complex64;

/// The constant `a` in `e^{-iα} B'(z) = a Q(z) Q*(z) / P*(z)²`, where `Q` is
/// the monic polynomial of the interior critical points. It is recovered as
/// `N(p) / (Q(p) Q*(p))` at whichever probe point makes `|Q Q*|` largest.
pub fn derivative_constant(b: &BlaschkeProduct, critical: &CriticalSet) -> Complex64 {
    use crate::polycore::ComplexPolynomial;
    let q = ComplexPolynomial::from_roots(&critical.points());
    let q_star = q
        .conjugate_reciprocal(b.degree() - 1)
        .expect("degree n - 1 by construction");
    let numerator = b.derivative_numerator();
    [0.0, 0.5, -0.5]
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .map(|p| (numerator.eval(p), q.eval(p) * q_star.eval(p)))
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(n, d)| n / d)
        .expect("non-empty probe list")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_constant_is_not_one() {
        let b =
            BlaschkeProduct::from_zeros(vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)])
                .unwrap();
        let cs = critical_points(&b).unwrap();
        let a = derivative_constant(&b, &cs);
        // N = -0.5 z² + 2z - 0.5 and Q Q* = -ζ z² + (1 + ζ²) z - ζ, so a = 0.5 / ζ
        let zeta = 2.0 - 3f64.sqrt();
        assert!((a - Complex64::new(0.5 / zeta, 0.0)).norm() < 1e-13);
    }
}
