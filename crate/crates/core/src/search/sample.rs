use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};

/// Radial law of sampled zeros: `|z| = r_max √u` with `u` uniform on
/// `[u_min, 1)`, which is area-uniform on the disk of radius `r_max` with a
/// small hole around the origin.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct SamplerConfig {
    pub r_max: f64,
    pub u_min: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            r_max: 0.95,
            u_min: 1e-6,
        }
    }
}

impl SamplerConfig {
    /// Smallest modulus a sampled zero can have.
    pub fn min_radius(&self) -> f64 {
        self.r_max * self.u_min.sqrt()
    }

    fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max < 1.0) || !(self.u_min > 0.0 && self.u_min < 1.0) {
            return Err(Error::Domain(format!(
                "sampler needs 0 < r_max < 1 and 0 < u_min < 1, got {self:?}"
            )));
        }
        Ok(())
    }

    /// One nonzero point from the radial law.
    pub fn point<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let u = rng.random_range(self.u_min..1.0);
        let theta = rng.random_range(0.0..TAU);
        Complex64::from_polar(self.r_max * u.sqrt(), theta)
    }
}

/// Independent generator for `stream` under a master `seed`. Streams are
/// ChaCha8 stream ids, so they never overlap and do not depend on the
/// order in which they are created.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A product with a simple zero at the origin and `n - 1` zeros drawn from
/// [`SamplerConfig::default`].
pub fn sample_blaschke<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<BlaschkeProduct> {
    sample_blaschke_with(n, &SamplerConfig::default(), rng)
}

pub fn sample_blaschke_with<R: Rng + ?Sized>(
    n: usize,
    config: &SamplerConfig,
    rng: &mut R,
) -> Result<BlaschkeProduct> {
    if n < 2 {
        return Err(Error::Domain(format!("degree must be at least 2, got {n}")));
    }
    config.validate()?;
    let mut zeros = Vec::with_capacity(n);
    zeros.push(Complex64::new(0.0, 0.0));
    zeros.extend((1..n).map(|_| config.point(rng)));
    BlaschkeProduct::from_zeros(zeros)
}
