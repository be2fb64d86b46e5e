use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::product::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::polycore::RootFinder;

/// Tolerance used when a composed product's rotation is recovered from one
/// probe point and validated at another.
pub const PROBE_TOLERANCE: f64 = 1e-10;
/// Every preimage must satisfy `|B(z) - w|` below this.
pub const PREIMAGE_TOLERANCE: f64 = 1e-9;
/// `normalize` refuses points where `|B'(w)|` is at most this.
pub const DEGENERATE_DERIVATIVE: f64 = 1e-12;

/// Disk automorphism `M(z) = e^{iθ} (z - β) / (1 - conj(β) z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusAutomorphism {
    pub rotation: f64,
    #[serde(with = "crate::serial::complex")]
    pub center: Complex64,
}

impl MobiusAutomorphism {
    pub fn new(rotation: f64, center: Complex64) -> Result<Self> {
        if !(center.norm() < 1.0) || !rotation.is_finite() {
            return Err(Error::Domain(format!(
                "automorphism center {center} must lie in the open disk"
            )));
        }
        Ok(MobiusAutomorphism { rotation, center })
    }

    pub fn identity() -> Self {
        MobiusAutomorphism {
            rotation: 0.0,
            center: Complex64::new(0.0, 0.0),
        }
    }

    /// `(z - p) / (1 - conj(p) z)`, sending `p` to the origin.
    pub fn centering(p: Complex64) -> Result<Self> {
        Self::new(0.0, p)
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        Complex64::from_polar(1.0, self.rotation) * (z - self.center)
            / (Complex64::new(1.0, 0.0) - self.center.conj() * z)
    }

    /// `M^{-1}(u) = e^{-iθ} (u + β e^{iθ}) / (1 + conj(β e^{iθ}) u)`.
    pub fn inverse(&self) -> Self {
        MobiusAutomorphism {
            rotation: -self.rotation,
            center: -self.center * Complex64::from_polar(1.0, self.rotation),
        }
    }
}

/// Solutions of `B(z) = w` in the disk, repeated by multiplicity.
pub fn preimages(b: &BlaschkeProduct, w: Complex64) -> Result<Vec<Complex64>> {
    if !(w.norm() < 1.0) {
        return Err(Error::Domain(format!(
            "target {w} must lie in the open disk"
        )));
    }
    let n = b.degree();
    let equation = &b.numerator().scaled(b.rotation_factor()) - &b.denominator().scaled(w);
    let roots = RootFinder::default().roots_with_formal_degree(&equation, n)?;
    let mut out = Vec::with_capacity(n);
    for root in roots.roots {
        let z = if root.multiplicity == 1 {
            newton_preimage(b, w, root.location)
        } else {
            root.location
        };
        out.extend(std::iter::repeat_n(z, root.multiplicity));
    }
    if out.len() != n || out.iter().any(|z| !(z.norm() < 1.0)) {
        return Err(Error::Conditioning(format!(
            "expected {n} preimages of {w} in the disk, found {}",
            out.iter().filter(|z| z.norm() < 1.0).count()
        )));
    }
    let worst = out
        .iter()
        .map(|&z| (b.eval_unchecked(z) - w).norm())
        .fold(0.0, f64::max);
    if worst > PREIMAGE_TOLERANCE {
        return Err(Error::Conditioning(format!(
            "preimage residual {worst:e} exceeds {PREIMAGE_TOLERANCE:e}"
        )));
    }
    Ok(out)
}

fn newton_preimage(b: &BlaschkeProduct, w: Complex64, start: Complex64) -> Complex64 {
    let mut z = start;
    let mut err = (b.eval_unchecked(z) - w).norm();
    for _ in 0..3 {
        let Ok(slope) = b.derivative(z) else { break };
        if slope.norm() == 0.0 {
            break;
        }
        let next = z - (b.eval_unchecked(z) - w) / slope;
        let next_err = (b.eval_unchecked(next) - w).norm();
        if !(next_err < err) || !(next.norm() < 1.0) {
            break;
        }
        z = next;
        err = next_err;
    }
    z
}

const PROBES: [(f64, f64); 6] = [
    (0.0, 0.0),
    (0.5, 0.0),
    (-0.5, 0.0),
    (0.0, 0.5),
    (0.0, -0.5),
    (0.35, 0.35),
];

/// Builds the product with the given zeros whose rotation makes it agree with
/// `target`. The rotation comes from the probe point where the unrotated
/// product is largest and is checked at the runner-up.
fn match_rotation(
    zeros: Vec<Complex64>,
    target: impl Fn(Complex64) -> Complex64,
) -> Result<BlaschkeProduct> {
    let base = BlaschkeProduct::from_zeros(zeros)?;
    let mut probes: Vec<(Complex64, Complex64)> = PROBES
        .iter()
        .map(|&(re, im)| {
            let p = Complex64::new(re, im);
            (p, base.eval_unchecked(p))
        })
        .collect();
    probes.sort_by(|a, b| b.1.norm().total_cmp(&a.1.norm()));
    let (p, value) = probes[0];
    let phase = target(p) / value;
    let product = base.with_rotation(phase.arg());

    let (q, _) = probes[1];
    let mismatch = (product.eval_unchecked(q) - target(q)).norm();
    if mismatch > PROBE_TOLERANCE {
        return Err(Error::Conditioning(format!(
            "composition rotation disagrees at the second probe by {mismatch:e}"
        )));
    }
    Ok(product)
}

/// `B ∘ M`: zeros `M^{-1}(z_k)`.
pub fn compose_pre(b: &BlaschkeProduct, m: &MobiusAutomorphism) -> Result<BlaschkeProduct> {
    let inv = m.inverse();
    let zeros = b.zeros().iter().map(|&zk| inv.apply(zk)).collect();
    match_rotation(zeros, |z| b.eval_unchecked(m.apply(z)))
}

/// `M ∘ B`: zeros are the preimages of the center of `M`.
pub fn compose_post(m: &MobiusAutomorphism, b: &BlaschkeProduct) -> Result<BlaschkeProduct> {
    let zeros = preimages(b, m.center)?;
    match_rotation(zeros, |z| m.apply(b.eval_unchecked(z)))
}

/// Moves the evaluation point `w` to the origin and the value `B(w)` to the
/// origin, then drops the rotation: the result `C` has `C(0) = 0`,
/// `C'(0) ≠ 0` and unit rotation factor.
pub fn normalize(b: &BlaschkeProduct, w: Complex64) -> Result<BlaschkeProduct> {
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
    // M1(z) = (z + w) / (1 + conj(w) z) sends 0 to w.
    let shift = MobiusAutomorphism::new(0.0, -w)?;
    let shifted = compose_pre(b, &shift)?;
    let recenter = MobiusAutomorphism::centering(b.eval(w)?)?;
    let centered = compose_post(&recenter, &shifted)?;

    let mut zeros = centered.zeros().to_vec();
    let (idx, closest) = zeros
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("degree >= 1");
    if closest > PROBE_TOLERANCE {
        return Err(Error::Conditioning(format!(
            "normalized product misses the origin by {closest:e}"
        )));
    }
    zeros[idx] = Complex64::new(0.0, 0.0);
    BlaschkeProduct::from_zeros(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_round_trip() {
        let m = MobiusAutomorphism::new(0.8, c(0.3, -0.4)).unwrap();
        let z = c(-0.1, 0.6);
        assert!((m.inverse().apply(m.apply(z)) - z).norm() < 1e-15);
        assert!((m.apply(m.inverse().apply(z)) - z).norm() < 1e-15);
        assert!(m.apply(m.center).norm() < 1e-16);
    }

    #[test]
    fn preimage_examples() {
        let sq = BlaschkeProduct::power(2);
        let pre = preimages(&sq, c(0.25, 0.0)).unwrap();
        assert_eq!(pre.len(), 2);
        assert!(pre.iter().any(|z| (z - c(0.5, 0.0)).norm() < 1e-15));
        assert!(pre.iter().any(|z| (z - c(-0.5, 0.0)).norm() < 1e-15));

        let id = BlaschkeProduct::power(1);
        let pre = preimages(&id, c(0.3, 0.1)).unwrap();
        assert!((pre[0] - c(0.3, 0.1)).norm() < 1e-15);

        let b = BlaschkeProduct::from_zeros(vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let pre = preimages(&b, c(0.0, 0.0)).unwrap();
        assert!(pre.iter().any(|z| z.norm() < 1e-15));
        assert!(pre.iter().any(|z| (z - c(0.5, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn identity_composition() {
        let b = BlaschkeProduct::new(0.4, vec![c(0.0, 0.0), c(0.2, 0.5), c(-0.6, 0.1)]).unwrap();
        let id = MobiusAutomorphism::identity();
        let pre = compose_pre(&b, &id).unwrap();
        let post = compose_post(&id, &b).unwrap();
        for (x, y) in pre.zeros().iter().zip(b.zeros()) {
            assert!((x - y).norm() < 1e-15);
        }
        for (x, y) in post.zeros().iter().zip(b.zeros()) {
            assert!((x - y).norm() < 1e-14);
        }
        assert!((pre.rotation() - 0.4).abs() < 1e-14);
    }

    #[test]
    fn pre_composition_moves_zeros() {
        // M(z) = (z + 0.5) / (1 + 0.5 z) has center -0.5; M^{-1}(0) = -0.5
        let m = MobiusAutomorphism::new(0.0, c(-0.5, 0.0)).unwrap();
        let composed = compose_pre(&BlaschkeProduct::power(2), &m).unwrap();
        for z in composed.zeros() {
            assert!((z - c(-0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn post_centering_fixes_origin() {
        let b = BlaschkeProduct::new(1.0, vec![c(0.3, 0.2), c(-0.1, 0.7)]).unwrap();
        let b0 = b.eval(c(0.0, 0.0)).unwrap();
        let m = MobiusAutomorphism::centering(b0).unwrap();
        let composed = compose_post(&m, &b).unwrap();
        assert!(composed.eval(c(0.0, 0.0)).unwrap().norm() < 1e-12);
    }

    #[test]
    fn normalize_identity() {
        let b = BlaschkeProduct::from_zeros(vec![c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        let n = normalize(&b, c(0.0, 0.0)).unwrap();
        assert_eq!(n.zeros()[0], c(0.0, 0.0));
        assert!((n.zeros()[1] - c(0.5, 0.0)).norm() < 1e-14);
        assert_eq!(n.rotation(), 0.0);

        let z = normalize(&BlaschkeProduct::power(1), c(0.3, -0.2)).unwrap();
        assert_eq!(z.zeros(), &[c(0.0, 0.0)]);
    }

    #[test]
    fn normalize_rejects_critical_points() {
        let err = normalize(&BlaschkeProduct::power(2), c(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::DegenerateNormalization { .. }));
    }
}
