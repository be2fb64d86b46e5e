use crate::error::{Error, Result};

/// Additive slack allowed when comparing a computed `S` with [`thm1_bound`].
pub const THM1_SLACK: f64 = 1e-9;

fn check_degree(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("degree must be at least 2, got {n}")));
    }
    Ok(())
}

/// Upper bound on `S(B)` for degree `n`:
/// `2 (2n - 1 + (2n - 3) 4^{1/(1-n)}) / (2n - 1)`.
///
/// ```
/// use smale_lab::smale::thm1_bound;
/// assert!((thm1_bound(2).unwrap() - 13.0 / 6.0).abs() < 1e-15);
/// assert!((thm1_bound(3).unwrap() - 2.6).abs() < 1e-15);
/// ```
pub fn thm1_bound(n: usize) -> Result<f64> {
    check_degree(n)?;
    let nf = n as f64;
    let power = 4f64.powf(1.0 / (1.0 - nf));
    Ok(2.0 * (2.0 * nf - 1.0 + (2.0 * nf - 3.0) * power) / (2.0 * nf - 1.0))
}

/// `4^{-n}`, the strict lower bound on `T(B)`.
pub fn thm3_lower(n: usize) -> Result<f64> {
    check_degree(n)?;
    Ok(4f64.powi(-(n as i32)))
}

/// `max{2r, 4r / (1 + 4r²)}` for `0 < r < 1`.
pub fn lemma1_bound(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius {r} must lie in (0, 1)")));
    }
    Ok((2.0 * r).max(4.0 * r / (1.0 + 4.0 * r * r)))
}
