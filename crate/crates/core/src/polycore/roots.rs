//! Simultaneous (Aberth–Ehrlich) root finding with a companion-matrix
//! fallback and multiplicity clustering.
//!
//! Roots at the origin are peeled off exactly before iterating. The remaining
//! polynomial is solved from Newton-polygon starting points; the iteration
//! evaluates in the reversed variable `1/z` whenever `|z| > 1`, which keeps
//! roots of very different moduli (the interior and reflected exterior critical
//! points of a Blaschke product) equally well resolved.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly::{ComplexPolynomial, TRIM_THRESHOLD};
use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITERATIONS: usize = 500;
pub const DEFAULT_CLUSTER_RADIUS: f64 = 1e-7;
/// A cluster is accepted as one multiple root only if its refined centre
/// has normwise backward error at most this.
pub const MULTIPLE_ROOT_TOLERANCE: f64 = 1e-14;

/// A root location with its multiplicity and normwise backward error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: usize,
    pub residual: f64,
}

/// Roots of a polynomial, grouped into multiplicity clusters and sorted by
/// `(modulus, argument)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Formal degree minus actual degree: roots sent to infinity.
    pub infinity_deficiency: usize,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Root locations repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.location, r.multiplicity))
            .collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

/// Orders complex numbers by modulus, then argument.
pub fn modulus_argument_order(a: &Complex64, b: &Complex64) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then_with(|| a.arg().total_cmp(&b.arg()))
}

#[derive(Clone, Copy, Debug)]
pub struct RootFinder {
    /// Acceptance threshold on the normwise backward error.
    pub tol: f64,
    pub max_iterations: usize,
    /// Roots closer than this (relative to `max(1, |z|)`) always merge.
    pub cluster_radius: f64,
}

impl Default for RootFinder {
    fn default() -> Self {
        RootFinder {
            tol: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            cluster_radius: DEFAULT_CLUSTER_RADIUS,
        }
    }
}

impl RootFinder {
    pub fn with_tolerance(tol: f64) -> Self {
        RootFinder {
            tol,
            ..Default::default()
        }
    }

    pub fn roots(&self, p: &ComplexPolynomial) -> Result<RootSet> {
        let d = p.degree().filter(|&d| d >= 1).ok_or_else(|| {
            Error::Domain("root finding needs a polynomial of degree >= 1".into())
        })?;
        self.roots_with_formal_degree(p, d)
    }

    /// Like [`roots`](Self::roots), but records `formal - degree(p)` roots at
    /// infinity instead of treating a short coefficient vector as an error.
    pub fn roots_with_formal_degree(
        &self,
        p: &ComplexPolynomial,
        formal: usize,
    ) -> Result<RootSet> {
        let degree = p.degree().unwrap_or(0);
        if degree > formal {
            return Err(Error::InvalidDegree {
                formal,
                actual: degree,
            });
        }
        if p.coeffs()
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::Domain(
                "polynomial has non-finite coefficients".into(),
            ));
        }
        if p.is_zero() {
            return Err(Error::Domain(
                "the zero polynomial has no isolated roots".into(),
            ));
        }

        let mut roots = Vec::new();
        let coeffs = p.coeffs();
        let origin = coeffs
            .iter()
            .take_while(|c| c.norm() < TRIM_THRESHOLD)
            .count();
        if origin > 0 {
            roots.push(Root {
                location: Complex64::new(0.0, 0.0),
                multiplicity: origin,
                residual: 0.0,
            });
        }

        let scale = p.scale();
        let reduced: Vec<Complex64> = coeffs[origin..].iter().map(|&c| c / scale).collect();
        match reduced.len() - 1 {
            0 => {}
            1 => {
                let r = -reduced[0] / reduced[1];
                roots.push(Root {
                    location: r,
                    multiplicity: 1,
                    residual: backward_error(&reduced, r),
                });
            }
            _ => {
                let simple = self.solve(&reduced)?;
                roots.extend(self.cluster(&reduced, &simple));
            }
        }
        roots.sort_by(|a, b| modulus_argument_order(&a.location, &b.location));
        Ok(RootSet {
            roots,
            infinity_deficiency: formal - degree,
        })
    }

    /// All roots of a polynomial with nonzero constant and leading terms.
    fn solve(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        let (first, first_worst) = self.aberth(coeffs, initial_guesses(coeffs));
        if first_worst <= self.tol {
            return Ok(first);
        }
        // Fallback: eigenvalues of the companion matrix, then a short Aberth
        // polish starting from them.
        let (second, second_worst) = match companion_eigenvalues(coeffs) {
            Some(eig) => self.aberth(coeffs, eig),
            None => (Vec::new(), f64::INFINITY),
        };
        if second_worst <= self.tol {
            return Ok(second);
        }
        let (best, residual) = if second_worst < first_worst {
            (second, second_worst)
        } else {
            (first, first_worst)
        };
        Err(Error::ConvergenceFailure {
            iterations: self.max_iterations,
            residual,
            best,
        })
    }

    /// Gauss–Seidel Aberth iteration; returns the iterates and the worst
    /// backward error among them.
    fn aberth(&self, coeffs: &[Complex64], mut z: Vec<Complex64>) -> (Vec<Complex64>, f64) {
        let d = z.len();
        let mut frozen = vec![false; d];
        for _ in 0..self.max_iterations {
            for i in 0..d {
                if frozen[i] {
                    continue;
                }
                let (ratio, backward) = newton_ratio(coeffs, z[i]);
                if backward <= 4.0 * f64::EPSILON || ratio == Complex64::new(0.0, 0.0) {
                    frozen[i] = true;
                    continue;
                }
                let repulsion: Complex64 = (0..d)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let diff = z[i] - z[j];
                        if diff == Complex64::new(0.0, 0.0) {
                            Complex64::new(0.0, 0.0)
                        } else {
                            diff.inv()
                        }
                    })
                    .sum();
                let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
                let correction = if denom.norm() > f64::MIN_POSITIVE {
                    ratio / denom
                } else {
                    ratio
                };
                if !correction.re.is_finite() || !correction.im.is_finite() {
                    continue;
                }
                z[i] -= correction;
                if correction.norm() <= 2.0 * f64::EPSILON * z[i].norm() {
                    frozen[i] = true;
                }
            }
            if frozen.iter().all(|&f| f) {
                break;
            }
        }
        let worst = z
            .iter()
            .map(|&zi| backward_error(coeffs, zi))
            .fold(0.0, f64::max);
        (z, worst)
    }

    /// Groups the iterates into multiple roots. Starting from the whole set,
    /// a group is accepted as one root of multiplicity `m` when Newton on the
    /// `(m-1)`-th derivative lands within twice its spread at a point of
    /// backward error at most [`MULTIPLE_ROOT_TOLERANCE`]; otherwise it is cut
    /// at the longest edge of its minimum spanning tree. Groups tighter than
    /// `cluster_radius` always merge.
    fn cluster(&self, coeffs: &[Complex64], z: &[Complex64]) -> Vec<Root> {
        let mut out = Vec::with_capacity(z.len());
        let mut pending = vec![(0..z.len()).collect::<Vec<usize>>()];
        while let Some(group) = pending.pop() {
            if let [i] = group[..] {
                out.push(Root {
                    location: z[i],
                    multiplicity: 1,
                    residual: backward_error(coeffs, z[i]),
                });
                continue;
            }
            let tree = SpanningTree::new(z, &group);
            match self.merge(coeffs, z, &group, tree.longest()) {
                Some(root) => out.push(root),
                None => {
                    let (left, right) = tree.split(&group);
                    pending.push(left);
                    pending.push(right);
                }
            }
        }
        out
    }

    fn merge(
        &self,
        coeffs: &[Complex64],
        z: &[Complex64],
        group: &[usize],
        longest_edge: f64,
    ) -> Option<Root> {
        let m = group.len();
        let centroid = group.iter().map(|&i| z[i]).sum::<Complex64>() / m as f64;
        let spread = group
            .iter()
            .map(|&i| (z[i] - centroid).norm())
            .fold(0.0, f64::max);
        let floor = self.cluster_radius * centroid.norm().max(1.0);

        // a perturbed m-fold root spreads into a roughly regular m-gon
        let polygon_edge = 2.0 * spread * (std::f64::consts::PI / m as f64).sin();
        let refined = refine_multiple(coeffs, centroid, m);
        let refined_error = backward_error(coeffs, refined);
        if longest_edge <= POLYGON_SLACK * polygon_edge
            && (refined - centroid).norm() <= 2.0 * spread.max(floor)
            && refined_error <= MULTIPLE_ROOT_TOLERANCE
        {
            return Some(Root {
                location: refined,
                multiplicity: m,
                residual: refined_error,
            });
        }
        if spread <= floor {
            let residual = backward_error(coeffs, centroid);
            return Some(Root {
                location: centroid,
                multiplicity: m,
                residual,
            });
        }
        None
    }
}

/// Roots of `p` with the default finder.
pub fn poly_roots(p: &ComplexPolynomial, tol: f64) -> Result<RootSet> {
    RootFinder::with_tolerance(tol).roots(p)
}

/// Value, derivative and absolute-coefficient sum, evaluated in `z` when
/// `|z| <= 1` and in `1/z` for the reversed polynomial otherwise.
struct Horner {
    value: Complex64,
    slope: Complex64,
    magnitude: f64,
    reversed: bool,
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Horner {
    let zero = Complex64::new(0.0, 0.0);
    let (mut value, mut slope, mut magnitude) = (zero, zero, 0.0);
    if z.norm() <= 1.0 {
        let r = z.norm();
        for &c in coeffs.iter().rev() {
            slope = slope * z + value;
            value = value * z + c;
            magnitude = magnitude * r + c.norm();
        }
        Horner {
            value,
            slope,
            magnitude,
            reversed: false,
        }
    } else {
        let y = z.inv();
        let r = y.norm();
        for &c in coeffs.iter() {
            slope = slope * y + value;
            value = value * y + c;
            magnitude = magnitude * r + c.norm();
        }
        Horner {
            value,
            slope,
            magnitude,
            reversed: true,
        }
    }
}

/// Normwise relative backward error `|p(z)| / Σ|a_k||z|^k`.
pub fn backward_error(coeffs: &[Complex64], z: Complex64) -> f64 {
    let h = horner(coeffs, z);
    if h.magnitude == 0.0 {
        return 0.0;
    }
    h.value.norm() / h.magnitude
}

/// Newton correction `p(z)/p'(z)` and the backward error at `z`.
fn newton_ratio(coeffs: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let h = horner(coeffs, z);
    let backward = if h.magnitude == 0.0 {
        0.0
    } else {
        h.value.norm() / h.magnitude
    };
    let ratio = if h.reversed {
        // p(z) = z^d q(y), p'/p = y (d - y q'/q)
        let d = (coeffs.len() - 1) as f64;
        let y = z.inv();
        let denom = y * (h.value * d - y * h.slope);
        if denom == Complex64::new(0.0, 0.0) {
            Complex64::new(0.0, 0.0)
        } else {
            h.value / denom
        }
    } else if h.slope == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        h.value / h.slope
    };
    (ratio, backward)
}

/// Newton on the `(m-1)`-th derivative, whose simple root sits at the centre
/// of an `m`-fold cluster.
fn refine_multiple(coeffs: &[Complex64], start: Complex64, multiplicity: usize) -> Complex64 {
    let mut dp: Vec<Complex64> = coeffs.to_vec();
    for _ in 1..multiplicity {
        dp = dp
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
    }
    if dp.len() < 2 {
        return start;
    }
    let mut c = start;
    for _ in 0..16 {
        let (ratio, _) = newton_ratio(&dp, c);
        if !ratio.re.is_finite() || !ratio.im.is_finite() {
            return start;
        }
        c -= ratio;
        if ratio.norm() <= 2.0 * f64::EPSILON * c.norm().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    c
}

/// How much longer than the edge of a regular polygon the longest spanning
/// edge of a cluster may be.
const POLYGON_SLACK: f64 = 3.0;

/// Euclidean minimum spanning tree over a group of iterates, as edges
/// between positions in the group.
struct SpanningTree {
    edges: Vec<(usize, usize, f64)>,
}

impl SpanningTree {
    fn new(z: &[Complex64], group: &[usize]) -> Self {
        let g = group.len();
        let mut in_tree = vec![false; g];
        let mut best = vec![f64::INFINITY; g];
        let mut link = vec![0usize; g];
        let mut edges = Vec::with_capacity(g.saturating_sub(1));
        best[0] = 0.0;
        for _ in 0..g {
            let u = (0..g)
                .filter(|&k| !in_tree[k])
                .min_by(|&a, &b| best[a].total_cmp(&best[b]))
                .expect("vertices remain");
            in_tree[u] = true;
            if u != 0 {
                edges.push((link[u], u, best[u]));
            }
            for v in 0..g {
                let w = (z[group[u]] - z[group[v]]).norm();
                if !in_tree[v] && w < best[v] {
                    best[v] = w;
                    link[v] = u;
                }
            }
        }
        SpanningTree { edges }
    }

    fn longest(&self) -> f64 {
        self.edges.iter().map(|e| e.2).fold(0.0, f64::max)
    }

    /// The two components left after deleting the longest edge.
    fn split(mut self, group: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let g = group.len();
        let cut = self
            .edges
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .2.total_cmp(&b.1 .2))
            .map(|(k, _)| k)
            .expect("group has at least two members");
        self.edges.swap_remove(cut);

        let mut side = vec![false; g];
        side[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b, _) in &self.edges {
                if side[a] != side[b] {
                    side[a] = true;
                    side[b] = true;
                    changed = true;
                }
            }
        }
        let (left, right): (Vec<usize>, Vec<usize>) = (0..g).partition(|&k| side[k]);
        (
            left.into_iter().map(|k| group[k]).collect(),
            right.into_iter().map(|k| group[k]).collect(),
        )
    }
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(k, ln|a_k|)`.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let points: Vec<(f64, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(k, c)| (k as f64, c.norm().ln()))
        .collect();
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for &p in &points {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(d);
    for w in hull.windows(2) {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let count = (k1 - k0).round() as usize;
        let radius = ((l0 - l1) / (k1 - k0)).exp();
        for t in 0..count {
            let angle = TAU * t as f64 / count as f64 + TAU * k0 / d as f64 + 0.4;
            guesses.push(Complex64::from_polar(radius, angle));
        }
    }
    guesses
}

fn companion_eigenvalues(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let m = DMatrix::from_fn(d, d, |i, j| {
        if i == 0 {
            -coeffs[d - 1 - j] / lead
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    m.eigenvalues().map(|v| v.iter().copied().collect())
}
