//! Jacobi theta functions, lattice theta series, the secrecy function
//! `Ξ_Λ(y) = ϑ3(y)^n / Θ_Λ(y)` and the secrecy gain `sup_{y>0} Ξ_Λ(y)`.
//!
//! Everything is evaluated on the real half-line: `q = e^{-π y}`, `y > 0`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::lattice::Lattice;
use crate::{Error, Result};

/// Truncation tolerance for the Jacobi q-series.
pub const JACOBI_TOL: f64 = 1e-12;
/// Absolute accuracy target for enumerated theta series.
pub const ENUMERATED_TOL: f64 = 1e-10;

/// A point `y > 0` on the imaginary axis, with `q = e^{-π y}`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ThetaArg(f64);

impl ThetaArg {
    pub fn new(y: f64) -> Result<Self> {
        if !(y > 0.0) || y.is_nan() {
            return Err(Error::InvalidParameter { name: "y", value: y });
        }
        Ok(ThetaArg(y))
    }

    /// `y = 1/(2π σ_e²)`: the theta argument at which Eve's correct-decision
    /// sum is evaluated.
    pub fn from_sigma(sigma_e: f64) -> Result<Self> {
        if !(sigma_e > 0.0 && sigma_e.is_finite()) {
            return Err(Error::InvalidParameter { name: "sigma_e", value: sigma_e });
        }
        Self::new(1.0 / (2.0 * PI * sigma_e * sigma_e))
    }

    pub fn y(self) -> f64 {
        self.0
    }

    pub fn q(self) -> f64 {
        libm::exp(-PI * self.0)
    }
}

/// Shorthand for [`ThetaArg::from_sigma`].
pub fn sigma_to_y(sigma_e: f64) -> Result<ThetaArg> {
    ThetaArg::from_sigma(sigma_e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Jacobi {
    Theta2,
    Theta3,
    Theta4,
}

/// Partial sums of the defining series of `ϑ2`, `ϑ3` or `ϑ4` at nome `q`.
///
/// Summation stops once the geometric bound on the remaining terms drops
/// below `tol`, so the absolute error is at most `tol`. `q = 0` (reached
/// when `e^{-πy}` underflows) gives the constant terms.
pub fn jacobi_theta(which: Jacobi, q: f64, tol: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::InvalidParameter { name: "q", value: q });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tol", value: tol });
    }
    let ln_q = libm::log(q);
    let tail_factor = 1.0 / (1.0 - q);
    let (mut sum, offset, first) = match which {
        Jacobi::Theta2 => (0.0, 0.5, 0u32),
        Jacobi::Theta3 | Jacobi::Theta4 => (1.0, 0.0, 1u32),
    };
    let mut n = first;
    loop {
        let e = n as f64 + offset;
        let term = 2.0 * libm::exp(e * e * ln_q);
        let signed = if which == Jacobi::Theta4 && n % 2 == 1 { -term } else { term };
        sum += signed;
        if term * tail_factor < tol {
            break;
        }
        n += 1;
    }
    Ok(sum)
}

fn jacobi_at(which: Jacobi, y: ThetaArg) -> f64 {
    jacobi_theta(which, y.q(), JACOBI_TOL).expect("q = e^{-πy} lies in [0,1)")
}

/// A lattice (or lattice family) whose theta series can be evaluated.
pub trait ThetaSeries {
    fn dimension(&self) -> usize;

    /// `Θ(y) = Σ_x e^{-π y ‖x‖²}`.
    fn theta(&self, y: ThetaArg) -> Result<f64>;
}

/// Lattices with a closed-form theta series in terms of `ϑ2, ϑ3, ϑ4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaFamily {
    Zn(usize),
    Dn(usize),
    E8,
    Leech,
}

/// Closed-form theta series of a classical lattice family.
pub fn theta_closed_form(family: ThetaFamily, y: ThetaArg) -> f64 {
    let t3 = jacobi_at(Jacobi::Theta3, y);
    match family {
        ThetaFamily::Zn(n) => libm::pow(t3, n as f64),
        ThetaFamily::Dn(n) => {
            let t4 = jacobi_at(Jacobi::Theta4, y);
            0.5 * (libm::pow(t3, n as f64) + libm::pow(t4, n as f64))
        }
        ThetaFamily::E8 => {
            let (t2, t4) = (jacobi_at(Jacobi::Theta2, y), jacobi_at(Jacobi::Theta4, y));
            0.5 * (pow8(t2) + pow8(t3) + pow8(t4))
        }
        ThetaFamily::Leech => {
            let (t2, t4) = (jacobi_at(Jacobi::Theta2, y), jacobi_at(Jacobi::Theta4, y));
            let (a, b, c) = (pow8(t2), pow8(t3), pow8(t4));
            let s = a + b + c;
            s * s * s / 8.0 - 45.0 / 16.0 * a * b * c
        }
    }
}

fn pow8(x: f64) -> f64 {
    let x2 = x * x;
    let x4 = x2 * x2;
    x4 * x4
}

impl ThetaSeries for ThetaFamily {
    fn dimension(&self) -> usize {
        match *self {
            ThetaFamily::Zn(n) | ThetaFamily::Dn(n) => n,
            ThetaFamily::E8 => 8,
            ThetaFamily::Leech => 24,
        }
    }

    fn theta(&self, y: ThetaArg) -> Result<f64> {
        Ok(theta_closed_form(*self, y))
    }
}

/// Theta series of an explicit lattice, summed over enumerated points.
#[derive(Debug, Clone, Copy)]
pub struct EnumeratedTheta<'a> {
    pub lattice: &'a Lattice,
    pub tol: f64,
}

impl ThetaSeries for EnumeratedTheta<'_> {
    fn dimension(&self) -> usize {
        self.lattice.dim()
    }

    fn theta(&self, y: ThetaArg) -> Result<f64> {
        theta_enumerated(self.lattice, y, self.tol)
    }
}

impl ThetaSeries for Lattice {
    fn dimension(&self) -> usize {
        self.dim()
    }

    fn theta(&self, y: ThetaArg) -> Result<f64> {
        theta_enumerated(self, y, ENUMERATED_TOL)
    }
}

/// `a·Λ` for any theta source: `Θ_{aΛ}(y) = Θ_Λ(a² y)`.
#[derive(Debug, Clone, Copy)]
pub struct Scaled<T> {
    pub inner: T,
    pub factor: f64,
}

impl<T: ThetaSeries> ThetaSeries for Scaled<T> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn theta(&self, y: ThetaArg) -> Result<f64> {
        self.inner.theta(ThetaArg::new(y.y() * self.factor * self.factor)?)
    }
}

/// Estimated `Σ_{‖x‖² > R²} e^{-π y ‖x‖²}` from the continuum density of
/// points, times a guard factor of 4.
///
/// The shell integral reduces to `Q(m/2, π y R²) / (vol · y^{m/2})` with `Q`
/// the regularized upper incomplete gamma function.
fn tail_estimate(rank: usize, volume: f64, y: f64, radius_sq: f64) -> f64 {
    let x = PI * y * radius_sq;
    4.0 * upper_gamma_q_half_integer(rank, x) / (volume * libm::pow(y, rank as f64 / 2.0))
}

/// `Q(m/2, x)` for integer `m ≥ 1`, by the upward recurrence
/// `Q(a+1, x) = Q(a, x) + x^a e^{-x} / Γ(a+1)`.
fn upper_gamma_q_half_integer(m: usize, x: f64) -> f64 {
    let (mut a, mut q) = if m.is_multiple_of(2) {
        (1.0, libm::exp(-x))
    } else {
        (0.5, libm::erfc(libm::sqrt(x)))
    };
    let target = m as f64 / 2.0;
    while a < target - 1e-9 {
        let log_term = if x > 0.0 { a * libm::log(x) - x - libm::lgamma(a + 1.0) } else { f64::NEG_INFINITY };
        q += libm::exp(log_term);
        a += 1.0;
    }
    q.min(1.0)
}

/// Smallest enumeration radius whose tail estimate is below `tol`.
pub fn theta_radius_sq(lattice: &Lattice, y: ThetaArg, tol: f64) -> f64 {
    let (m, vol, y) = (lattice.rank(), lattice.volume(), y.y());
    let ok = |r: f64| tail_estimate(m, vol, y, r) < tol;
    let mut hi = 1.0 / (PI * y);
    while !ok(hi) {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 0.01 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Theta series of `lattice` at `y`, accurate to about `tol` in absolute
/// terms. Refuses (rather than truncating silently) when the required
/// enumeration exceeds the point cap.
pub fn theta_enumerated(lattice: &Lattice, y: ThetaArg, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tol", value: tol });
    }
    let radius_sq = theta_radius_sq(lattice, y, tol);
    let spectrum = lattice.enumerate(radius_sq)?;
    Ok(spectrum.theta_partial_sum(y.y()))
}

/// One sample of the secrecy function with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyPoint {
    pub y: f64,
    pub theta_lattice: f64,
    pub theta_zn: f64,
    pub xi: f64,
}

pub fn secrecy_point<S: ThetaSeries + ?Sized>(source: &S, y: ThetaArg) -> Result<SecrecyPoint> {
    let theta_lattice = source.theta(y)?;
    let theta_zn = libm::pow(jacobi_at(Jacobi::Theta3, y), source.dimension() as f64);
    Ok(SecrecyPoint { y: y.y(), theta_lattice, theta_zn, xi: theta_zn / theta_lattice })
}

/// `Ξ_Λ(y) = ϑ3(e^{-πy})^n / Θ_Λ(y)`, with no volume normalization.
pub fn secrecy_function<S: ThetaSeries + ?Sized>(source: &S, y: ThetaArg) -> Result<f64> {
    secrecy_point(source, y).map(|p| p.xi)
}

/// `count` points spaced evenly in `log y` over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<ThetaArg>> {
    if !(lo > 0.0 && hi >= lo) {
        return Err(Error::InvalidParameter { name: "y range", value: lo });
    }
    if count == 0 {
        return Err(Error::InvalidParameter { name: "grid points", value: 0.0 });
    }
    let (a, b) = (libm::log(lo), libm::log(hi));
    (0..count)
        .map(|i| {
            let t = if count == 1 { 0.0 } else { i as f64 / (count - 1) as f64 };
            ThetaArg::new(libm::exp(a + t * (b - a)))
        })
        .collect()
}

/// Bracket and resolution for [`secrecy_gain`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSearch {
    pub y_lo: f64,
    pub y_hi: f64,
    /// Golden-section stopping width in `log y`.
    pub tol: f64,
    pub grid_points: usize,
}

impl Default for GainSearch {
    fn default() -> Self {
        GainSearch { y_lo: 1.0 / 16.0, y_hi: 16.0, tol: 1e-8, grid_points: 64 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecrecyResult {
    pub gain: f64,
    pub argmax_y: f64,
    /// Every `(y, Ξ(y))` evaluated, grid first, then refinement steps.
    pub evaluations: Vec<(f64, f64)>,
    /// The grid maximum sat on an end of the bracket; the supremum may lie
    /// outside it.
    pub boundary_warning: bool,
}

/// Maximizes `Ξ` over `[y_lo, y_hi]`: a log-spaced grid locates the peak,
/// then golden-section search in `log y` refines it.
pub fn secrecy_gain<S: ThetaSeries + ?Sized>(source: &S, search: GainSearch) -> Result<SecrecyResult> {
    let GainSearch { y_lo, y_hi, tol, grid_points } = search;
    if !(y_lo > 0.0 && y_hi > y_lo) {
        return Err(Error::InvalidParameter { name: "y_lo", value: y_lo });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tol", value: tol });
    }
    if grid_points < 3 {
        return Err(Error::InvalidParameter { name: "grid points", value: grid_points as f64 });
    }
    let mut evaluations = Vec::with_capacity(grid_points + 64);
    let xi_at_log = |ly: f64, evals: &mut Vec<(f64, f64)>| -> Result<f64> {
        let y = libm::exp(ly);
        let v = secrecy_function(source, ThetaArg::new(y)?)?;
        evals.push((y, v));
        Ok(v)
    };

    for y in log_grid(y_lo, y_hi, grid_points)? {
        xi_at_log(libm::log(y.y()), &mut evaluations)?;
    }
    let best = argmax_first(&evaluations);
    let boundary_warning = best == 0 || best == grid_points - 1;
    let log_at = |i: usize| libm::log(evaluations[i.min(grid_points - 1)].0);
    let (mut a, mut b) = (log_at(best.saturating_sub(1)), log_at(best + 1));

    let inv_phi = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = xi_at_log(c, &mut evaluations)?;
    let mut fd = xi_at_log(d, &mut evaluations)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = xi_at_log(c, &mut evaluations)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = xi_at_log(d, &mut evaluations)?;
        }
    }

    let best = argmax_first(&evaluations);
    let (argmax_y, gain) = evaluations[best];
    Ok(SecrecyResult { gain, argmax_y, evaluations, boundary_warning })
}

/// Index of the largest value; ties go to the smaller `y`.
fn argmax_first(evals: &[(f64, f64)]) -> usize {
    let mut best = 0;
    for (i, &(y, v)) in evals.iter().enumerate() {
        let (by, bv) = evals[best];
        if v > bv || (v == bv && y < by) {
            best = i;
        }
    }
    best
}
