//! Fincke-Pohst enumeration of integer vectors inside an ellipsoid.
//!
//! With `G = Rᵀ R` (upper-triangular `R`) the quadratic form
//! `(u - c) G (u - c)ᵀ` splits level by level, starting from the last
//! coordinate:
//!
//! ```text
//! Σ_i r_ii² (u_i - c_i + Σ_{j>i} (r_ij / r_ii)(u_j - c_j))²
//! ```
//!
//! so the admissible range of `u_i` only depends on the coordinates above it.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;

/// Visitor verdict for one enumerated point.
pub(crate) enum Visit {
    Continue,
    /// Continue with a smaller squared radius.
    Shrink(f64),
    Stop,
}

/// Absolute slack added to every radius test so that points lying exactly on
/// the sphere are not lost to rounding.
pub(crate) fn slack(radius_sq: f64) -> f64 {
    1e-9 * radius_sq.max(1.0)
}

struct Walker<'a, F> {
    /// `mu[i][j] = r_ij / r_ii` for `j > i`.
    mu: Vec<Vec<f64>>,
    diag_sq: Vec<f64>,
    center: &'a [f64],
    radius_sq: f64,
    coords: Vec<i64>,
    visit: F,
    stopped: bool,
}

impl<F: FnMut(&[i64], f64) -> Visit> Walker<'_, F> {
    fn descend(&mut self, level: usize, partial: f64) {
        let mut shift = 0.0;
        for j in level + 1..self.coords.len() {
            shift += self.mu[level][j] * (self.coords[j] as f64 - self.center[j]);
        }
        let mid = self.center[level] - shift;
        let room = self.radius_sq + slack(self.radius_sq) - partial;
        if room < 0.0 {
            return;
        }
        let half_width = libm::sqrt(room / self.diag_sq[level]);
        let lo = libm::ceil(mid - half_width) as i64;
        let hi = libm::floor(mid + half_width) as i64;
        for v in lo..=hi {
            let d = v as f64 - mid;
            let next = partial + self.diag_sq[level] * d * d;
            // The radius may have shrunk since the range was computed.
            if next > self.radius_sq + slack(self.radius_sq) {
                if (v as f64) > mid {
                    break;
                }
                continue;
            }
            self.coords[level] = v;
            if level == 0 {
                match (self.visit)(&self.coords, next) {
                    Visit::Continue => {}
                    Visit::Shrink(r) => self.radius_sq = r.min(self.radius_sq),
                    Visit::Stop => {
                        self.stopped = true;
                    }
                }
            } else {
                self.descend(level - 1, next);
            }
            if self.stopped {
                return;
            }
        }
    }
}

/// Calls `visit(u, q(u - center))` for every integer `u` with
/// `q(u - center) ≤ radius_sq` (up to [`slack`]), where `q` is the quadratic
/// form whose upper Cholesky factor is `chol`. Coordinates are visited in a
/// fixed, deterministic order.
pub(crate) fn for_each_in_ellipsoid<F>(chol: &Matrix, center: &[f64], radius_sq: f64, visit: F)
where
    F: FnMut(&[i64], f64) -> Visit,
{
    let m = chol.rows();
    debug_assert_eq!(center.len(), m);
    if m == 0 || radius_sq < 0.0 {
        return;
    }
    let mut mu = vec![vec![0.0; m]; m];
    let mut diag_sq = vec![0.0; m];
    for i in 0..m {
        let rii = chol[(i, i)];
        diag_sq[i] = rii * rii;
        for j in i + 1..m {
            mu[i][j] = chol[(i, j)] / rii;
        }
    }
    let mut walker =
        Walker { mu, diag_sq, center, radius_sq, coords: vec![0; m], visit, stopped: false };
    walker.descend(m - 1, 0.0);
}
