//! Lattices given by a generator matrix, their point enumeration, geometric
//! parameters, and exact closest-point decoding.
//!
//! Named generators (rows are basis vectors):
//!
//! * `Z^n`: the identity.
//! * `D_n` (`n ≥ 2`): integer vectors with even coordinate sum, basis
//!   `(-1,-1,0,…,0)`, `(1,-1,0,…,0)`, `(0,1,-1,0,…,0)`, …, `(0,…,0,1,-1)`.
//!   Volume 2.
//! * `E8` (unimodular, even coordinate system `D_8 ∪ D_8 + (½)^8`):
//!
//!   ```text
//!    2  0  0  0  0  0  0  0
//!   -1  1  0  0  0  0  0  0
//!    0 -1  1  0  0  0  0  0
//!    0  0 -1  1  0  0  0  0
//!    0  0  0 -1  1  0  0  0
//!    0  0  0  0 -1  1  0  0
//!    0  0  0  0  0 -1  1  0
//!   1/2 1/2 1/2 1/2 1/2 1/2 1/2 1/2
//!   ```
//!
//! * `E8A` (Construction A, `2Z^8 + RM(8,4,4)`, volume 16): the systematic
//!   code rows on information set `{0,1,2,4}` plus `2e_3, 2e_5, 2e_6, 2e_7`:
//!
//!   ```text
//!   1 0 0 1 0 1 1 0
//!   0 1 0 1 0 1 0 1
//!   0 0 1 1 0 0 1 1
//!   0 0 0 0 1 1 1 1
//!   0 0 0 2 0 0 0 0
//!   0 0 0 0 0 2 0 0
//!   0 0 0 0 0 0 2 0
//!   0 0 0 0 0 0 0 2
//!   ```

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use crate::enumerate::{for_each_in_ellipsoid, slack, Visit};
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Default refusal threshold for [`Lattice::enumerate`].
pub const DEFAULT_POINT_CAP: u64 = 10_000_000;

/// Squared norms closer than this are reported as one spectrum entry.
pub const NORM_GROUPING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedLattice {
    Zn(usize),
    Dn(usize),
    E8Unimodular,
    E8ConstructionA,
}

#[derive(Debug, Clone)]
pub struct Lattice {
    generator: Matrix,
    gram: Matrix,
    chol: Matrix,
    inverse: Option<Matrix>,
    name: Option<String>,
}

/// Result of a closest-point query.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosestPoint {
    pub point: Vec<f64>,
    pub coords: Vec<i64>,
    pub dist_sq: f64,
}

impl Lattice {
    /// Builds a lattice from its generator (rows are basis vectors).
    pub fn new(generator: Matrix) -> Result<Self> {
        let (m, n) = (generator.rows(), generator.cols());
        if m == 0 || m > n {
            return Err(Error::InvalidDimension { what: "generator rows", n: m });
        }
        let gram = generator.gram();
        let chol = gram.cholesky_upper().ok_or(Error::Degenerate)?;
        let inverse = if m == n { Some(generator.inverse()?) } else { None };
        Ok(Lattice { generator, gram, chol, inverse, name: None })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn named(which: NamedLattice) -> Result<Self> {
        let (generator, name) = match which {
            NamedLattice::Zn(n) => {
                if n == 0 {
                    return Err(Error::InvalidDimension { what: "Z^n", n });
                }
                (Matrix::identity(n), format!("Z{n}"))
            }
            NamedLattice::Dn(n) => {
                if n < 2 {
                    return Err(Error::InvalidDimension { what: "D_n", n });
                }
                let mut g = Matrix::zeros(n, n);
                g[(0, 0)] = -1.0;
                g[(0, 1)] = -1.0;
                for i in 1..n {
                    g[(i, i - 1)] = 1.0;
                    g[(i, i)] = -1.0;
                }
                (g, format!("D{n}"))
            }
            NamedLattice::E8Unimodular => {
                let mut g = Matrix::zeros(8, 8);
                g[(0, 0)] = 2.0;
                for i in 1..7 {
                    g[(i, i - 1)] = -1.0;
                    g[(i, i)] = 1.0;
                }
                for j in 0..8 {
                    g[(7, j)] = 0.5;
                }
                (g, String::from("E8"))
            }
            NamedLattice::E8ConstructionA => {
                let rows: [[f64; 8]; 8] = [
                    [1., 0., 0., 1., 0., 1., 1., 0.],
                    [0., 1., 0., 1., 0., 1., 0., 1.],
                    [0., 0., 1., 1., 0., 0., 1., 1.],
                    [0., 0., 0., 0., 1., 1., 1., 1.],
                    [0., 0., 0., 2., 0., 0., 0., 0.],
                    [0., 0., 0., 0., 0., 2., 0., 0.],
                    [0., 0., 0., 0., 0., 0., 2., 0.],
                    [0., 0., 0., 0., 0., 0., 0., 2.],
                ];
                (Matrix::from_rows(&rows)?, String::from("E8A"))
            }
        };
        Ok(Self::new(generator)?.with_name(name))
    }

    /// The lattice `a·Λ`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidParameter { name: "scale factor", value: factor });
        }
        let out = Self::new(self.generator.scale(factor))?;
        Ok(match &self.name {
            Some(n) => out.with_name(format!("{factor}*{n}")),
            None => out,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Number of basis vectors `m`.
    pub fn rank(&self) -> usize {
        self.generator.rows()
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.generator.cols()
    }

    pub fn is_full_rank(&self) -> bool {
        self.inverse.is_some()
    }

    /// `det(gram)^{1/2}`, the volume of a fundamental region.
    pub fn volume(&self) -> f64 {
        (0..self.rank()).map(|i| self.chol[(i, i)]).product()
    }

    /// `u · M` for integer coordinates `u`.
    pub fn point(&self, coords: &[i64]) -> Vec<f64> {
        self.generator.int_vec_mul(coords)
    }

    /// Integer coordinates of `x`, or [`Error::NotInLattice`].
    pub fn coords_of(&self, x: &[f64]) -> Result<Vec<i64>> {
        let inv = self.inverse.as_ref().ok_or(Error::Unsupported("coordinates in a non-square basis"))?;
        check_len(x, self.dim())?;
        let real = inv.vec_mul(x);
        let coords: Vec<i64> = real.iter().map(|c| libm::round(*c) as i64).collect();
        let back = self.point(&coords);
        let scale = x.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        let residual = back.iter().zip(x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if residual > 1e-9 * scale {
            return Err(Error::NotInLattice { max_residual: residual });
        }
        Ok(coords)
    }

    /// Predicted number of lattice points with squared norm at most
    /// `radius_sq`, from the ball volume over the covolume.
    pub fn predicted_count(&self, radius_sq: f64) -> f64 {
        ball_volume(self.rank(), libm::sqrt(radius_sq.max(0.0))) / self.volume()
    }

    /// Every lattice vector with `‖x‖² ≤ radius_sq`, grouped by squared norm.
    pub fn enumerate(&self, radius_sq: f64) -> Result<NormSpectrum> {
        self.enumerate_capped(radius_sq, DEFAULT_POINT_CAP)
    }

    pub fn enumerate_capped(&self, radius_sq: f64, cap: u64) -> Result<NormSpectrum> {
        if !(radius_sq >= 0.0 && radius_sq.is_finite()) {
            return Err(Error::InvalidParameter { name: "radius_sq", value: radius_sq });
        }
        let predicted = self.predicted_count(radius_sq);
        if predicted > cap as f64 {
            return Err(Error::ResourceCap { predicted: predicted as u64, cap });
        }
        let mut buckets: BTreeMap<i64, (f64, u64)> = BTreeMap::new();
        let mut total = 0u64;
        let origin = vec![0.0; self.rank()];
        for_each_in_ellipsoid(&self.chol, &origin, radius_sq, |_, norm| {
            total += 1;
            if total > cap {
                return Visit::Stop;
            }
            let key = libm::round(norm / NORM_GROUPING_TOL) as i64;
            let slot = buckets.entry(key).or_insert((0.0, 0));
            slot.0 += norm;
            slot.1 += 1;
            Visit::Continue
        });
        if total > cap {
            return Err(Error::ResourceCap { predicted: total, cap });
        }
        let mut entries: Vec<(f64, u64)> = Vec::with_capacity(buckets.len());
        let mut last_key = i64::MIN;
        let mut acc = (0.0, 0u64);
        for (key, (sum, count)) in buckets {
            if acc.1 > 0 && key - last_key > 1 {
                entries.push((acc.0 / acc.1 as f64, acc.1));
                acc = (0.0, 0);
            }
            acc.0 += sum;
            acc.1 += count;
            last_key = key;
        }
        if acc.1 > 0 {
            entries.push((acc.0 / acc.1 as f64, acc.1));
        }
        if let Some(first) = entries.first_mut() {
            if first.0.abs() <= NORM_GROUPING_TOL {
                first.0 = 0.0;
            }
        }
        Ok(NormSpectrum { entries, radius_sq })
    }

    /// Length of the shortest nonzero vector.
    pub fn min_distance(&self) -> f64 {
        libm::sqrt(self.min_norm_entry().0)
    }

    /// Number of vectors of minimal nonzero length.
    pub fn kissing_number(&self) -> u64 {
        self.min_norm_entry().1
    }

    fn min_norm_entry(&self) -> (f64, u64) {
        // The shortest basis row bounds d_min², so the loop body almost
        // always runs once.
        let mut radius = (0..self.rank()).map(|i| self.gram[(i, i)]).fold(f64::INFINITY, f64::min);
        loop {
            if let Ok(spectrum) = self.enumerate_capped(radius, u64::MAX) {
                if let Some(e) = spectrum.min_nonzero() {
                    return e;
                }
            }
            radius *= 2.0;
        }
    }

    /// `d_min² / det(gram)^{1/n}`.
    pub fn hermite_parameter(&self) -> Result<f64> {
        if !self.is_full_rank() {
            return Err(Error::Unsupported("Hermite parameter of a non-square generator"));
        }
        let d2 = self.min_norm_entry().0;
        let det = self.volume() * self.volume();
        Ok(d2 / libm::pow(det, 1.0 / self.rank() as f64))
    }

    /// Nearest lattice point to `target`. Ties are broken toward the
    /// lexicographically smallest coordinate vector.
    pub fn closest_point(&self, target: &[f64]) -> Result<ClosestPoint> {
        let (coords, _) = self.cvp_search(target, false)?;
        let coords = coords.into_iter().next().expect("search always yields a point");
        Ok(self.closest_from_coords(target, coords))
    }

    /// Every lattice point at minimal distance from `target`, sorted by
    /// coordinate vector.
    pub fn closest_points(&self, target: &[f64]) -> Result<Vec<ClosestPoint>> {
        let (all, _) = self.cvp_search(target, true)?;
        Ok(all.into_iter().map(|c| self.closest_from_coords(target, c)).collect())
    }

    fn closest_from_coords(&self, target: &[f64], coords: Vec<i64>) -> ClosestPoint {
        let point = self.point(&coords);
        let dist_sq = dist_sq(&point, target);
        ClosestPoint { point, coords, dist_sq }
    }

    fn cvp_search(&self, target: &[f64], keep_all: bool) -> Result<(Vec<Vec<i64>>, f64)> {
        let inv = self.inverse.as_ref().ok_or(Error::Unsupported("closest point in a non-square basis"))?;
        check_len(target, self.dim())?;
        let center = inv.vec_mul(target);
        let babai: Vec<i64> = center.iter().map(|c| libm::round(*c) as i64).collect();
        let start = dist_sq(&self.point(&babai), target);

        let mut best_dist = f64::INFINITY;
        let mut best: Vec<Vec<i64>> = Vec::new();
        for_each_in_ellipsoid(&self.chol, &center, start, |u, d| {
            let tie = 1e-9 * best_dist.max(1.0);
            if best.is_empty() || d < best_dist - tie {
                best_dist = d;
                best.clear();
                best.push(u.to_vec());
                return Visit::Shrink(d + slack(d));
            }
            if d <= best_dist + tie {
                if keep_all {
                    best.push(u.to_vec());
                } else if lex_cmp(u, &best[0]) == Ordering::Less {
                    best[0] = u.to_vec();
                }
            }
            Visit::Continue
        });
        if best.is_empty() {
            // Only reachable if rounding pushed the Babai point itself out.
            best.push(babai);
            best_dist = start;
        }
        if keep_all {
            let cutoff = best_dist + 1e-9 * best_dist.max(1.0);
            best.retain(|u| dist_sq(&self.point(u), target) <= cutoff);
            best.sort_by(|a, b| lex_cmp(a, b));
            best.dedup();
        }
        Ok((best, best_dist))
    }
}

/// Multiset of squared norms from an exhaustive enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpectrum {
    entries: Vec<(f64, u64)>,
    radius_sq: f64,
}

impl NormSpectrum {
    /// `(squared_norm, count)` pairs sorted by squared norm.
    pub fn entries(&self) -> &[(f64, u64)] {
        &self.entries
    }

    /// Radius up to which the listing is exhaustive.
    pub fn radius_sq(&self) -> f64 {
        self.radius_sq
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn min_nonzero(&self) -> Option<(f64, u64)> {
        self.entries.iter().copied().find(|e| e.0 > NORM_GROUPING_TOL)
    }

    /// Count of vectors whose squared norm is within the grouping tolerance
    /// of `norm_sq`.
    pub fn count_at(&self, norm_sq: f64) -> u64 {
        self.entries
            .iter()
            .find(|e| (e.0 - norm_sq).abs() <= 2.0 * NORM_GROUPING_TOL)
            .map_or(0, |e| e.1)
    }

    /// `Σ count · e^{-π y ‖x‖²}` over the listed shells.
    pub fn theta_partial_sum(&self, y: f64) -> f64 {
        // Largest norms first keeps the small terms from being swamped.
        self.entries.iter().rev().map(|&(n, c)| c as f64 * libm::exp(-PI * y * n)).sum()
    }
}

fn check_len(v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::ShapeMismatch { expected: (1, n), got: (1, v.len()) });
    }
    Ok(())
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn lex_cmp(a: &[i64], b: &[i64]) -> Ordering {
    a.iter().cmp(b.iter())
}

/// Volume of the `m`-dimensional ball of radius `r`.
pub fn ball_volume(m: usize, r: f64) -> f64 {
    let half = m as f64 / 2.0;
    libm::pow(PI, half) * libm::pow(r, m as f64) / libm::tgamma(half + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::vec::Vec as StdVec;

    fn named(n: NamedLattice) -> Lattice {
        Lattice::named(n).unwrap()
    }

    /// Brute force over the coordinate box `[-b, b]^m`.
    fn brute_spectrum(l: &Lattice, radius_sq: f64, b: i64) -> BTreeMap<i64, u64> {
        let m = l.rank();
        let mut out = BTreeMap::new();
        let mut u = vec![-b; m];
        loop {
            let x = l.point(&u);
            let n: f64 = x.iter().map(|v| v * v).sum();
            if n <= radius_sq + 1e-9 {
                *out.entry(libm::round(n * 1e6) as i64).or_insert(0) += 1;
            }
            let mut i = 0;
            loop {
                if i == m {
                    return out;
                }
                u[i] += 1;
                if u[i] <= b {
                    break;
                }
                u[i] = -b;
                i += 1;
            }
        }
    }

    /// Determinant by cofactor expansion, independent of the Cholesky path.
    fn det_cofactor(rows: &[StdVec<f64>]) -> f64 {
        let n = rows.len();
        if n == 1 {
            return rows[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: StdVec<StdVec<f64>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| *v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * rows[0][j] * det_cofactor(&minor)
            })
            .sum()
    }

    #[test]
    fn named_dimension_errors() {
        assert!(matches!(Lattice::named(NamedLattice::Zn(0)), Err(Error::InvalidDimension { .. })));
        assert!(matches!(Lattice::named(NamedLattice::Dn(1)), Err(Error::InvalidDimension { .. })));
        assert!(Lattice::named(NamedLattice::Dn(2)).is_ok());
    }

    #[test]
    fn z2_is_identity() {
        let z2 = named(NamedLattice::Zn(2));
        assert_eq!(z2.generator(), &Matrix::identity(2));
        assert_eq!(z2.volume(), 1.0);
    }

    #[test]
    fn volumes_match_cofactor_determinant() {
        for (which, vol) in [
            (NamedLattice::Zn(5), 1.0),
            (NamedLattice::Dn(8), 2.0),
            (NamedLattice::Dn(4), 2.0),
            (NamedLattice::E8Unimodular, 1.0),
            (NamedLattice::E8ConstructionA, 16.0),
        ] {
            let l = named(which);
            let det = det_cofactor(&l.generator().to_rows()).abs();
            assert!((det - vol).abs() < 1e-9, "{which:?}: det {det}");
            assert!((l.volume() - vol).abs() < 1e-9 * vol, "{which:?}: vol {}", l.volume());
            let gram_det = det_cofactor(&l.gram().to_rows());
            assert!((l.volume() * l.volume() - gram_det).abs() < 1e-9 * gram_det);
        }
    }

    #[test]
    fn spectrum_of_z2() {
        let s = named(NamedLattice::Zn(2)).enumerate(1.0).unwrap();
        assert_eq!(s.entries(), &[(0.0, 1), (1.0, 4)]);
    }

    #[test]
    fn e8_and_d4_spectra_match_brute_force() {
        let e8 = named(NamedLattice::E8Unimodular);
        let s = e8.enumerate(2.0).unwrap();
        assert_eq!(s.entries(), &[(0.0, 1), (2.0, 240)]);
        // Oracle: scan every x in (½Z)^8 with entries in [-3/2, 3/2] and keep
        // the lattice members of norm ≤ 2.
        let mut counts = BTreeMap::new();
        let mut idx = [0usize; 8];
        loop {
            let x: StdVec<f64> = idx.iter().map(|&i| i as f64 * 0.5 - 1.5).collect();
            let n: f64 = x.iter().map(|v| v * v).sum();
            if n <= 2.0 && e8.coords_of(&x).is_ok() {
                *counts.entry(n as i64).or_insert(0u64) += 1;
            }
            let mut i = 0;
            while i < 8 {
                idx[i] += 1;
                if idx[i] < 7 {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == 8 {
                break;
            }
        }
        assert_eq!(counts.into_iter().collect::<StdVec<_>>(), [(0, 1), (2, 240)]);

        let d4 = named(NamedLattice::Dn(4));
        assert_eq!(d4.enumerate(2.0).unwrap().entries(), &[(0.0, 1), (2.0, 24)]);
        let brute = brute_spectrum(&d4, 4.0, 4);
        let s = d4.enumerate(4.0).unwrap();
        assert_eq!(s.entries().iter().map(|e| e.1).collect::<StdVec<_>>(), brute.values().copied().collect::<StdVec<_>>());
    }

    #[test]
    fn enumeration_cap_refuses() {
        let z8 = named(NamedLattice::Zn(8));
        assert!(matches!(z8.enumerate_capped(100.0, 1000), Err(Error::ResourceCap { .. })));
        assert!(matches!(z8.enumerate(-1.0), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn geometric_parameters() {
        for n in [1, 3, 6] {
            let z = named(NamedLattice::Zn(n));
            assert_eq!(z.min_distance(), 1.0);
            assert_eq!(z.kissing_number(), 2 * n as u64);
            assert!((z.hermite_parameter().unwrap() - 1.0).abs() < 1e-12);
        }
        for n in [2, 4, 8] {
            assert!((named(NamedLattice::Dn(n)).min_distance() - libm::sqrt(2.0)).abs() < 1e-12);
        }
        assert_eq!(named(NamedLattice::Dn(4)).kissing_number(), 24);
        let e8 = named(NamedLattice::E8Unimodular);
        assert_eq!(e8.kissing_number(), 240);
        assert!((e8.hermite_parameter().unwrap() - 2.0).abs() < 1e-12);
        let e8a = named(NamedLattice::E8ConstructionA);
        assert!((e8a.min_distance() - 2.0).abs() < 1e-12);
        assert_eq!(e8a.kissing_number(), 240);
        assert!((e8a.hermite_parameter().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_square_generators_are_flagged() {
        let l = Lattice::from_rows(&[[1.0, 1.0, 0.0]]).unwrap();
        assert_eq!(l.rank(), 1);
        assert!((l.volume() - libm::sqrt(2.0)).abs() < 1e-12);
        assert!(matches!(l.hermite_parameter(), Err(Error::Unsupported(_))));
        assert!(matches!(l.closest_point(&[0.0, 0.0, 0.0]), Err(Error::Unsupported(_))));
        assert_eq!(l.kissing_number(), 2);
        assert!(matches!(Lattice::from_rows(&[[1.0, 0.0], [2.0, 0.0]]), Err(Error::Degenerate)));
    }

    #[test]
    fn closest_point_examples() {
        let z2 = named(NamedLattice::Zn(2));
        let c = z2.closest_point(&[0.6, -1.2]).unwrap();
        assert_eq!(c.point, [1.0, -1.0]);
        assert_eq!(c.coords, [1, -1]);

        let e8 = named(NamedLattice::E8Unimodular);
        let x = e8.point(&[1, -2, 0, 3, 1, 0, -1, 2]);
        let c = e8.closest_point(&x).unwrap();
        assert_eq!(c.coords, [1, -2, 0, 3, 1, 0, -1, 2]);
        assert!(c.dist_sq < 1e-20);
    }

    #[test]
    fn closest_point_tie_break() {
        // (0.5, 0.5) is equidistant from four points of Z².
        let z2 = named(NamedLattice::Zn(2));
        let c = z2.closest_point(&[0.5, 0.5]).unwrap();
        assert_eq!(c.coords, [0, 0]);
        let all = z2.closest_points(&[0.5, 0.5]).unwrap();
        let coords: StdVec<_> = all.iter().map(|c| c.coords.clone()).collect();
        assert_eq!(coords, [[0, 0], [0, 1], [1, 0], [1, 1]]);
    }

    /// Exhaustive search over every D4 point with coordinates in [-6, 6]^4.
    fn d4_points() -> StdVec<[f64; 4]> {
        let mut pts = StdVec::new();
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for c in -6i64..=6 {
                    for d in -6i64..=6 {
                        if (a + b + c + d).rem_euclid(2) == 0 {
                            pts.push([a as f64, b as f64, c as f64, d as f64]);
                        }
                    }
                }
            }
        }
        pts
    }

    #[test]
    fn d4_closest_point_matches_exhaustive_search() {
        let d4 = named(NamedLattice::Dn(4));
        let pts = d4_points();
        let mut state = 0x2545_f491_4f6c_dd1du64;
        for _ in 0..20 {
            let mut t = [0.0; 4];
            for v in &mut t {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *v = ((state >> 11) as f64 / (1u64 << 53) as f64) * 6.0 - 3.0;
            }
            let best = pts.iter().map(|p| dist_sq(p, &t)).fold(f64::INFINITY, f64::min);
            let c = d4.closest_point(&t).unwrap();
            assert!((c.dist_sq - best).abs() < 1e-9, "target {t:?}");
            assert_eq!(d4.coords_of(&c.point).unwrap(), c.coords);
        }
    }

    #[test]
    fn membership() {
        let d4 = named(NamedLattice::Dn(4));
        assert!(d4.coords_of(&[1.0, 1.0, 0.0, 0.0]).is_ok());
        assert!(matches!(d4.coords_of(&[1.0, 0.0, 0.0, 0.0]), Err(Error::NotInLattice { .. })));
    }

    fn small_lattice() -> impl Strategy<Value = Lattice> {
        (1usize..=4)
            .prop_flat_map(|n| proptest::collection::vec(-2i32..=2, n * n).prop_map(move |v| (n, v)))
            .prop_filter_map("singular", |(n, v)| {
                let mut rows = StdVec::new();
                for i in 0..n {
                    let mut r: StdVec<f64> = v[i * n..(i + 1) * n].iter().map(|x| *x as f64).collect();
                    r[i] += 3.0;
                    rows.push(r);
                }
                Lattice::from_rows(&rows).ok()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn scaling_multiplies_volume(l in small_lattice(), a in prop::sample::select(vec![0.5, 2.0, 3.0])) {
            let s = l.scaled(a).unwrap();
            let expected = libm::pow(a, l.dim() as f64) * l.volume();
            prop_assert!((s.volume() - expected).abs() <= 1e-9 * expected);
        }

        #[test]
        fn hermite_is_scale_invariant(l in small_lattice(), a in 0.1f64..10.0) {
            let g = l.hermite_parameter().unwrap();
            let gs = l.scaled(a).unwrap().hermite_parameter().unwrap();
            prop_assert!((g - gs).abs() < 1e-9);
        }

        #[test]
        fn spectrum_is_symmetric_and_starts_at_origin(l in small_lattice(), r in 0.0f64..30.0) {
            let s = l.enumerate(r).unwrap();
            prop_assert_eq!(s.entries()[0], (0.0, 1));
            for w in s.entries().windows(2) {
                prop_assert!(w[0].0 < w[1].0);
            }
            for &(n, c) in &s.entries()[1..] {
                prop_assert!(c % 2 == 0);
                prop_assert!(n <= r + 1e-9);
            }
        }

        #[test]
        fn min_distance_is_first_nonzero_norm(l in small_lattice()) {
            let d = l.min_distance();
            let s = l.enumerate(d * d * 1.5).unwrap();
            prop_assert!((s.min_nonzero().unwrap().0 - d * d).abs() < 1e-9);
        }

        #[test]
        fn closest_point_beats_box_search(l in small_lattice(), t in proptest::collection::vec(-4.0f64..4.0, 4)) {
            let n = l.dim();
            let t = &t[..n];
            let c = l.closest_point(t).unwrap();
            // Every point in a coordinate box around the answer.
            let span = 3i64;
            let mut u = vec![-span; n];
            loop {
                let coords: StdVec<i64> = u.iter().zip(&c.coords).map(|(a, b)| a + b).collect();
                let p = l.point(&coords);
                prop_assert!(c.dist_sq <= dist_sq(&p, t) + 1e-9);
                let mut i = 0;
                while i < n {
                    u[i] += 1;
                    if u[i] <= span { break; }
                    u[i] = -span;
                    i += 1;
                }
                if i == n { break; }
            }
        }
    }
}
