use num_complex::Complex64;
use serde::Serialize;

use super::mobius::MobiusAutomorphism;
use super::product::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::polycore::{backward_error, modulus_argument_order, Root, RootFinder};
use crate::serial::ComplexRecord;

/// Width of the band around the unit circle in which a critical point is
/// considered unclassifiable.
pub const AMBIGUITY_BAND: f64 = 1e-8;
/// Reflection symmetry tolerance between interior and exterior roots.
pub const REFLECTION_TOLERANCE: f64 = 1e-8;

/// A critical point with its multiplicity and backward error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    #[serde(with = "crate::serial::complex")]
    pub zeta: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
}

impl From<Root> for CriticalPoint {
    fn from(r: Root) -> Self {
        CriticalPoint {
            zeta: r.location,
            multiplicity: r.multiplicity,
            residual: r.residual,
        }
    }
}

/// Critical points of a Blaschke product inside the disk, plus the
/// bookkeeping that certifies them against the exterior roots of `B'`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalSet {
    pub interior: Vec<CriticalPoint>,
    #[serde(skip)]
    pub exterior: Vec<CriticalPoint>,
    /// True when the finite exterior roots are the reflections
    /// `1/conj(ζ)` of the interior ones within [`REFLECTION_TOLERANCE`] and
    /// the roots at infinity match the interior roots at the origin.
    pub exterior_checked: bool,
    /// Largest mismatch `|1/conj(e) - ζ|` found by the reflection check.
    pub reflection_error: f64,
    pub infinity_deficiency: usize,
}

impl CriticalSet {
    pub fn total_multiplicity(&self) -> usize {
        self.interior.iter().map(|c| c.multiplicity).sum()
    }

    /// Interior critical points repeated by multiplicity.
    pub fn points(&self) -> Vec<Complex64> {
        self.interior
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.zeta, c.multiplicity))
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.interior.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn records(&self) -> Vec<ComplexRecord> {
        self.points().into_iter().map(ComplexRecord::from).collect()
    }
}

/// Critical points of `B` in the disk: the `n - 1` interior roots of
/// [`BlaschkeProduct::derivative_numerator`].
pub fn critical_points(b: &BlaschkeProduct) -> Result<CriticalSet> {
    critical_points_with(b, &RootFinder::default())
}

///
/// When the coefficient route cannot certify the result (miscounted roots,
/// failed reflection check) the zeros are first moved by an automorphism so
/// that their conformal barycenter sits at the origin, solved there and
/// mapped back. Crowding near the circle is what destroys the expanded
/// coefficients; the recentered configuration does not have it.
pub fn critical_points_with(b: &BlaschkeProduct, finder: &RootFinder) -> Result<CriticalSet> {
    let direct = solve(b, finder);
    if matches!(&direct, Ok(set) if set.exterior_checked)
        || matches!(&direct, Err(Error::NoCriticalPoints))
    {
        return direct;
    }
    match recentered(b, finder) {
        Ok(set) if set.exterior_checked || direct.is_err() => Ok(set),
        _ => direct,
    }
}

fn solve(b: &BlaschkeProduct, finder: &RootFinder) -> Result<CriticalSet> {
    let n = b.degree();
    if n < 2 {
        return Err(Error::NoCriticalPoints);
    }
    let numerator = b.derivative_numerator();
    let roots = finder.roots_with_formal_degree(&numerator, 2 * n - 2)?;
    let coeffs = numerator.coeffs();

    let mut interior = Vec::new();
    let mut exterior = Vec::new();
    for root in roots.roots {
        let mut point = CriticalPoint::from(root);
        if point.multiplicity == 1 && point.zeta.norm() != 0.0 {
            if let Some(z) = polish(b, point.zeta) {
                let residual = backward_error(coeffs, z);
                if residual <= point.residual.max(finder.tol) {
                    point.zeta = z;
                    point.residual = residual;
                }
            }
        }
        let modulus = point.zeta.norm();
        if (modulus - 1.0).abs() < AMBIGUITY_BAND {
            return Err(Error::BoundaryAmbiguity(point.zeta));
        }
        if modulus < 1.0 {
            interior.push(point);
        } else {
            exterior.push(point);
        }
    }
    interior.sort_by(|a, b| modulus_argument_order(&a.zeta, &b.zeta));
    exterior.sort_by(|a, b| modulus_argument_order(&a.zeta, &b.zeta));

    let total: usize = interior.iter().map(|c| c.multiplicity).sum();
    if total != n - 1 {
        return Err(Error::Conditioning(format!(
            "found {total} interior critical points for a degree-{n} product"
        )));
    }

    let (exterior_checked, reflection_error) =
        reflection_check(&interior, &exterior, roots.infinity_deficiency);
    Ok(CriticalSet {
        interior,
        exterior,
        exterior_checked,
        reflection_error,
        infinity_deficiency: roots.infinity_deficiency,
    })
}

/// Approximate conformal barycenter of the zeros: repeatedly move the mean
/// of the recentered zeros back to the origin.
fn barycenter(zeros: &[Complex64]) -> Complex64 {
    let mut c = Complex64::new(0.0, 0.0);
    for _ in 0..64 {
        let to_origin = MobiusAutomorphism {
            rotation: 0.0,
            center: c,
        };
        let mean =
            zeros.iter().map(|&z| to_origin.apply(z)).sum::<Complex64>() / zeros.len() as f64;
        if mean.norm() < 1e-3 {
            break;
        }
        let next = MobiusAutomorphism {
            rotation: 0.0,
            center: -c,
        }
        .apply(mean);
        if !(next.norm() < 1.0 - 1e-9) {
            break;
        }
        c = next;
    }
    c
}

fn recentered(b: &BlaschkeProduct, finder: &RootFinder) -> Result<CriticalSet> {
    let c = barycenter(b.zeros());
    if c.norm() < 1e-3 {
        return Err(Error::Conditioning(
            "recentering does not move the zeros".into(),
        ));
    }
    // φ(z) = (z + c) / (1 + conj(c) z); the moved product is B ∘ φ.
    let phi = MobiusAutomorphism {
        rotation: 0.0,
        center: -c,
    };
    let to_origin = MobiusAutomorphism {
        rotation: 0.0,
        center: c,
    };
    let moved =
        BlaschkeProduct::from_zeros(b.zeros().iter().map(|&z| to_origin.apply(z)).collect())?;
    let inner = solve(&moved, finder)?;
    let coeffs = b.derivative_numerator();
    let coeffs = coeffs.coeffs();
    let origin_critical = b.origin_multiplicity() >= 2;

    let mut interior = Vec::with_capacity(inner.interior.len());
    for p in &inner.interior {
        let mut zeta = phi.apply(p.zeta);
        if origin_critical && zeta.norm() < 1e-10 {
            zeta = Complex64::new(0.0, 0.0);
        } else if p.multiplicity == 1 {
            zeta = polish(b, zeta).unwrap_or(zeta);
        }
        if (zeta.norm() - 1.0).abs() < AMBIGUITY_BAND || zeta.norm() > 1.0 {
            return Err(Error::BoundaryAmbiguity(zeta));
        }
        interior.push(CriticalPoint {
            zeta,
            multiplicity: p.multiplicity,
            residual: backward_error(coeffs, zeta),
        });
    }

    let mut exterior = Vec::with_capacity(inner.exterior.len() + 1);
    let mut deficiency = 0;
    for p in &inner.exterior {
        let den = Complex64::new(1.0, 0.0) + c.conj() * p.zeta;
        if den.norm() <= 1e-12 * p.zeta.norm() {
            deficiency += p.multiplicity;
            continue;
        }
        let zeta = phi.apply(p.zeta);
        exterior.push(CriticalPoint {
            zeta,
            multiplicity: p.multiplicity,
            residual: backward_error(coeffs, zeta),
        });
    }
    if inner.infinity_deficiency > 0 {
        let zeta = c.conj().inv();
        exterior.push(CriticalPoint {
            zeta,
            multiplicity: inner.infinity_deficiency,
            residual: backward_error(coeffs, zeta),
        });
    }
    interior.sort_by(|a, b| modulus_argument_order(&a.zeta, &b.zeta));
    exterior.sort_by(|a, b| modulus_argument_order(&a.zeta, &b.zeta));
    let (exterior_checked, reflection_error) = reflection_check(&interior, &exterior, deficiency);
    Ok(CriticalSet {
        interior,
        exterior,
        exterior_checked,
        reflection_error,
        infinity_deficiency: deficiency,
    })
}

/// Newton steps on `B'/B = Σ (1 - |z_k|²) / ((z - z_k)(1 - conj(z_k) z))`,
/// summed with compensation. Only used away from the zeros of `B`.
fn polish(b: &BlaschkeProduct, start: Complex64) -> Option<Complex64> {
    if b.zeros().iter().any(|&zk| (start - zk).norm() < 1e-6) {
        return None;
    }
    let eval = |z: Complex64| {
        let mut sum = NeumaierSum::default();
        let mut slope = Complex64::new(0.0, 0.0);
        for &zk in b.zeros() {
            let a = (z - zk).inv();
            let den = Complex64::new(1.0, 0.0) - zk.conj() * z;
            let c = zk.conj() / den;
            sum.add(a);
            sum.add(c);
            slope += c * c - a * a;
        }
        (sum.total(), slope)
    };
    let mut z = start;
    let (mut value, mut slope) = eval(z);
    for _ in 0..3 {
        if slope.norm() == 0.0 {
            break;
        }
        let next = z - value / slope;
        let (v, s) = eval(next);
        if !(v.norm() < value.norm()) {
            break;
        }
        z = next;
        value = v;
        slope = s;
    }
    Some(z)
}

#[derive(Default)]
struct NeumaierSum {
    sum: Complex64,
    compensation: Complex64,
}

impl NeumaierSum {
    fn add(&mut self, x: Complex64) {
        let (re, cre) = two_sum(self.sum.re, x.re);
        let (im, cim) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(re, im);
        self.compensation += Complex64::new(cre, cim);
    }

    fn total(&self) -> Complex64 {
        self.sum + self.compensation
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn reflection_check(
    interior: &[CriticalPoint],
    exterior: &[CriticalPoint],
    deficiency: usize,
) -> (bool, f64) {
    let origin: usize = interior
        .iter()
        .filter(|c| c.zeta.norm() == 0.0)
        .map(|c| c.multiplicity)
        .sum();
    let mut targets: Vec<Complex64> = interior
        .iter()
        .filter(|c| c.zeta.norm() != 0.0)
        .flat_map(|c| std::iter::repeat_n(c.zeta, c.multiplicity))
        .collect();
    let reflected: Vec<Complex64> = exterior
        .iter()
        .flat_map(|c| std::iter::repeat_n(c.zeta.conj().inv(), c.multiplicity))
        .collect();
    if origin != deficiency || targets.len() != reflected.len() {
        return (false, f64::INFINITY);
    }
    let mut worst: f64 = 0.0;
    for r in reflected {
        let (idx, dist) = targets
            .iter()
            .enumerate()
            .map(|(i, t)| (i, (t - r).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("counts match");
        worst = worst.max(dist);
        targets.swap_remove(idx);
    }
    (worst <= REFLECTION_TOLERANCE, worst)
}
