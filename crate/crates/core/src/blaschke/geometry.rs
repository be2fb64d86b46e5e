use num_complex::Complex64;

use super::product::BlaschkeProduct;
use crate::error::Result;

/// Complex pseudo-hyperbolic distance `[z, w] = (z - w) / (1 - conj(w) z)`.
pub fn pseudo_hyperbolic(z: Complex64, w: Complex64) -> Complex64 {
    (z - w) / (Complex64::new(1.0, 0.0) - w.conj() * z)
}

/// `D_H B(w) = B'(w) (1 - |w|²) / (1 - |B(w)|²)`.
pub fn hyperbolic_derivative(b: &BlaschkeProduct, w: Complex64) -> Result<Complex64> {
    let value = b.eval(w)?;
    let slope = b.derivative(w)?;
    Ok(slope * (1.0 - w.norm_sqr()) / (1.0 - value.norm_sqr()))
}
