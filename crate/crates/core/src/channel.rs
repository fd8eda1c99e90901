//! Monte Carlo estimates of Bob's and Eve's correct-decision probabilities
//! on the Gaussian wiretap channel, and the large-noise approximations they
//! are compared against.
//!
//! Trial `t` of a run with seed `s` draws everything from Philox substreams
//! keyed by `(s, t, stream)`:
//!
//! * stream 0: the label (uniform over the `2^k` cosets), then the window
//!   coordinates `w_i ∈ [-L, L)` of the random sublattice point;
//! * stream 1: Bob's noise;
//! * stream 2: Eve's noise;
//! * stream 3: the noise of the coset-free estimate [`approx_pcb`].
//!
//! Counts over disjoint trial ranges therefore add up to exactly the counts
//! of one sequential run, whatever the split.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Range};

use crate::coset::{Bits, LatticePoint, QuotientCode};
use crate::lattice::Lattice;
use crate::linalg::Matrix;
use crate::rng::Substream;
use crate::theta::{theta_enumerated, theta_radius_sq, ThetaArg, ENUMERATED_TOL};
use crate::{Error, Result};

pub const DEFAULT_WINDOW: u32 = 2;

const STREAM_MESSAGE: u32 = 0;
const STREAM_BOB: u32 = 1;
const STREAM_EVE: u32 = 2;
const STREAM_PCB: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub sigma_b: f64,
    pub sigma_e: f64,
}

impl ChannelParams {
    pub fn new(sigma_b: f64, sigma_e: f64) -> Result<Self> {
        check_sigma("sigma_b", sigma_b)?;
        check_sigma("sigma_e", sigma_e)?;
        Ok(ChannelParams { sigma_b, sigma_e })
    }
}

fn check_sigma(name: &'static str, sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value: sigma })
    }
}

/// Raw decision counts of a batch of trials.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialCounts {
    pub trials: u64,
    /// Decoded coset equals the sent one.
    pub bob_coset: u64,
    pub eve_coset: u64,
    /// Decoded lattice point equals the sent one.
    pub bob_point: u64,
    pub eve_point: u64,
}

impl Add for TrialCounts {
    type Output = TrialCounts;

    fn add(self, o: TrialCounts) -> TrialCounts {
        TrialCounts {
            trials: self.trials + o.trials,
            bob_coset: self.bob_coset + o.bob_coset,
            eve_coset: self.eve_coset + o.eve_coset,
            bob_point: self.bob_point + o.bob_point,
            eve_point: self.eve_point + o.eve_point,
        }
    }
}

impl AddAssign for TrialCounts {
    fn add_assign(&mut self, o: TrialCounts) {
        *self = *self + o;
    }
}

/// Per-run state shared by all trials: the representative of every label.
struct Transmitter<'a> {
    q: &'a QuotientCode,
    reps: Option<Vec<LatticePoint>>,
}

impl<'a> Transmitter<'a> {
    fn new(q: &'a QuotientCode) -> Result<Self> {
        let reps = match q.codebook() {
            Ok(book) => Some(book.into_iter().map(|(_, p)| p).collect()),
            Err(Error::ResourceCap { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(Transmitter { q, reps })
    }

    fn send(&self, bits: &Bits, w: &[i64]) -> Result<LatticePoint> {
        match &self.reps {
            Some(reps) => {
                let c = &reps[bits.value() as usize];
                let r = self.q.sublattice_point(w)?;
                let coords = c.coords.iter().zip(&r.coords).map(|(a, b)| a + b).collect::<Vec<_>>();
                Ok(LatticePoint { point: self.q.lattice_b().point(&coords), coords })
            }
            None => self.q.encode(bits, w),
        }
    }
}

/// Runs trials `range` and returns their counts.
pub fn run_trials(q: &QuotientCode, ch: ChannelParams, seed: u64, window: u32, range: Range<u64>) -> Result<TrialCounts> {
    let tx = Transmitter::new(q)?;
    let n = q.dim();
    let k = q.k();
    let l = i64::from(window);
    let mut counts = TrialCounts::default();
    let mut noisy = alloc::vec![0.0; n];
    let mut w = alloc::vec![0i64; n];
    for t in range {
        let mut msg = Substream::new(seed, t, STREAM_MESSAGE);
        let bits = Bits::from_value(msg.below(q.index()), k);
        for wi in w.iter_mut() {
            *wi = if l == 0 { 0 } else { msg.below(2 * l as u64) as i64 - l };
        }
        let x = tx.send(&bits, &w)?;
        let mut observe = |stream: u32, sigma: f64| -> Result<(bool, bool)> {
            Substream::new(seed, t, stream).fill_normal(sigma, &mut noisy);
            for (v, xi) in noisy.iter_mut().zip(&x.point) {
                *v += xi;
            }
            let d = q.decode(&noisy)?;
            Ok((d.bits == bits, d.point.coords == x.coords))
        };
        let (bob_coset, bob_point) = observe(STREAM_BOB, ch.sigma_b)?;
        let (eve_coset, eve_point) = observe(STREAM_EVE, ch.sigma_e)?;
        counts.trials += 1;
        counts.bob_coset += u64::from(bob_coset);
        counts.bob_point += u64::from(bob_point);
        counts.eve_coset += u64::from(eve_coset);
        counts.eve_point += u64::from(eve_point);
    }
    Ok(counts)
}

/// Number of trials in `range` whose pure noise decodes to the origin of
/// `lattice_b`.
pub fn pcb_hits(lattice_b: &Lattice, sigma_b: f64, seed: u64, range: Range<u64>) -> Result<u64> {
    check_sigma("sigma_b", sigma_b)?;
    let mut noise = alloc::vec![0.0; lattice_b.dim()];
    let mut hits = 0;
    for t in range {
        Substream::new(seed, t, STREAM_PCB).fill_normal(sigma_b, &mut noise);
        let c = lattice_b.closest_point(&noise)?;
        hits += u64::from(c.coords.iter().all(|&v| v == 0));
    }
    Ok(hits)
}

/// Monte Carlo estimate of the Gaussian mass of the Voronoi cell of
/// `lattice_b`, the high-SNR approximation of Bob's probability.
pub fn approx_pcb(lattice_b: &Lattice, sigma_b: f64, trials: u64, seed: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter { name: "trials", value: 0.0 });
    }
    Ok(Estimate::from_hits(pcb_hits(lattice_b, sigma_b, seed, 0..trials)?, trials))
}

/// A binomial proportion with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub p: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn from_hits(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        Estimate { p, stderr: libm::sqrt(p * (1.0 - p) / trials as f64) }
    }
}

/// Large-noise approximation of Eve's probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PceApprox {
    pub raw: f64,
    pub clamped: f64,
    /// False when the raw value leaves `[0, 1]`, which happens when `σ_e`
    /// is too small for the approximation to apply.
    pub valid: bool,
}

/// `Vol(Λ_b) Σ_{r∈Λ_e} e^{-‖r‖²/2σ_e²} / (√(2π) σ_e)^n`.
///
/// The sum is `Θ_{Λ_e}(y)` with `y = 1/(2πσ_e²)`. For small `y` it is
/// evaluated on the dual lattice through `Θ_Λ(y) = Θ_{Λ*}(1/y) / (Vol(Λ) y^{n/2})`,
/// which keeps the enumeration small when `σ_e` is large.
pub fn approx_pce(q: &QuotientCode, sigma_e: f64, theta_tol: f64) -> Result<PceApprox> {
    check_sigma("sigma_e", sigma_e)?;
    let y = ThetaArg::from_sigma(sigma_e)?;
    let lattice_e = q.lattice_e();
    let n = q.dim() as f64;
    let vol_b = q.lattice_b().volume();
    let dual = dual_lattice(lattice_e)?;
    let inv_y = ThetaArg::new(1.0 / y.y())?;
    let direct_cost = lattice_e.predicted_count(theta_radius_sq(lattice_e, y, theta_tol));
    let dual_cost = dual.predicted_count(theta_radius_sq(&dual, inv_y, theta_tol));
    let log_raw = if direct_cost <= dual_cost {
        libm::log(vol_b) + 0.5 * n * libm::log(y.y()) + libm::log(theta_enumerated(lattice_e, y, theta_tol)?)
    } else {
        libm::log(vol_b) - libm::log(lattice_e.volume()) + libm::log(theta_enumerated(&dual, inv_y, theta_tol)?)
    };
    let raw = libm::exp(log_raw);
    Ok(PceApprox { raw, clamped: raw.clamp(0.0, 1.0), valid: raw <= 1.0 })
}

fn dual_lattice(lattice: &Lattice) -> Result<Lattice> {
    if !lattice.is_full_rank() {
        return Err(Error::Unsupported("dual of a non-square generator"));
    }
    let inv = lattice.generator().inverse()?;
    let n = inv.rows();
    let data = (0..n * n).map(|idx| inv[(idx % n, idx / n)]).collect();
    Lattice::new(Matrix::from_vec(n, n, data)?)
}

/// Two-term approximation `1 + τ e^{-d_min²/2σ_e²}` of the theta sum of
/// `lattice_e`.
pub fn first_order_pce(lattice_e: &Lattice, sigma_e: f64) -> Result<f64> {
    check_sigma("sigma_e", sigma_e)?;
    let d = lattice_e.min_distance();
    let tau = lattice_e.kissing_number() as f64;
    Ok(1.0 + tau * libm::exp(-d * d / (2.0 * sigma_e * sigma_e)))
}

/// Analytic and empirical `P_{c,e} / P_{c,b}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio {
    /// `(σ_b/σ_e)^n Vol(Λ_b) Σ e^{-‖r‖²/2σ_e²} / ∫_V e^{-‖u‖²/2σ_b²}`, built from
    /// the raw Eve approximation and the Voronoi-mass estimate.
    pub analytic: Option<f64>,
    pub empirical: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub trials: u64,
    pub seed: u64,
    pub window: u32,
    pub channel: ChannelParams,
    pub k: u32,
    pub counts: TrialCounts,
    pub bob: Estimate,
    pub eve: Estimate,
    pub bob_point: Estimate,
    pub eve_point: Estimate,
    pub approx_pcb: Estimate,
    pub approx_pce: PceApprox,
    pub ratio: Ratio,
}

impl SimReport {
    /// Assembles a report from counts gathered over trials `0..trials`
    /// (possibly in pieces) and `pcb_hits` over the same range.
    pub fn from_counts(
        q: &QuotientCode,
        ch: ChannelParams,
        seed: u64,
        window: u32,
        counts: TrialCounts,
        pcb_hits: u64,
        theta_tol: f64,
    ) -> Result<Self> {
        let n = counts.trials;
        if n == 0 {
            return Err(Error::InvalidParameter { name: "trials", value: 0.0 });
        }
        let mut report = SimReport {
            trials: n,
            seed,
            window,
            channel: ch,
            k: q.k(),
            counts,
            bob: Estimate::from_hits(counts.bob_coset, n),
            eve: Estimate::from_hits(counts.eve_coset, n),
            bob_point: Estimate::from_hits(counts.bob_point, n),
            eve_point: Estimate::from_hits(counts.eve_point, n),
            approx_pcb: Estimate::from_hits(pcb_hits, n),
            approx_pce: approx_pce(q, ch.sigma_e, theta_tol)?,
            ratio: Ratio { analytic: None, empirical: None },
        };
        report.ratio = ratio(&report);
        Ok(report)
    }
}

/// Both ratios; each is `None` when its denominator is zero.
pub fn ratio(report: &SimReport) -> Ratio {
    let guard = |num: f64, den: f64| (den > 0.0).then(|| num / den);
    Ratio {
        analytic: guard(report.approx_pce.raw, report.approx_pcb.p),
        empirical: guard(report.eve.p, report.bob.p),
    }
}

/// Sequential Monte Carlo run of `trials` transmissions.
pub fn simulate(q: &QuotientCode, ch: ChannelParams, trials: u64, seed: u64, window: u32) -> Result<SimReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter { name: "trials", value: 0.0 });
    }
    let counts = run_trials(q, ch, seed, window, 0..trials)?;
    let hits = pcb_hits(q.lattice_b(), ch.sigma_b, seed, 0..trials)?;
    SimReport::from_counts(q, ch, seed, window, counts, hits, ENUMERATED_TOL)
}
