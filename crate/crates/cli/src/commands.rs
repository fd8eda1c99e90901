use rayon::prelude::*;
use serde::Serialize;

use wiretap_lattice::channel::{pcb_hits, run_trials, ChannelParams, SimReport, TrialCounts};
use wiretap_lattice::coset::{Bits, QuotientCode};
use wiretap_lattice::reed_muller::{e8_example_encoder, e8_example_quotient};
use wiretap_lattice::rng::Substream;
use wiretap_lattice::theta::{log_grid, secrecy_gain, secrecy_point, GainSearch, ThetaArg, ThetaSeries};
use wiretap_lattice::Lattice;

use crate::error::{usage, CliResult};
use crate::format::{csv, sig15};
use crate::select::{parse_int_list, parse_list, parse_selection, Method, Selection, ThetaSource};
use crate::Format;

/// Trials per parallel work item. Counts are integers, so the total does
/// not depend on how chunks are scheduled.
const CHUNK: u64 = 4096;

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("--{name} must be positive, got {v}")))
    }
}

fn theta_arg(y: f64) -> CliResult<ThetaArg> {
    Ok(ThetaArg::new(positive("y", y)?)?)
}

pub fn theta(lattice: &str, y: f64, method: Method, tol: f64, format: Format) -> CliResult<String> {
    let sel = parse_selection(lattice)?;
    let source = ThetaSource::new(&sel, method, tol)?;
    let value = source.theta(theta_arg(y)?)?;
    #[derive(Serialize)]
    struct Out<'a> {
        lattice: &'a str,
        dimension: usize,
        y: f64,
        theta: f64,
        method: &'a str,
    }
    Ok(match format {
        Format::Json => json(&Out { lattice: &sel.name, dimension: source.dimension(), y, theta: value, method: source.method }),
        Format::Csv => csv(&["y", "theta"], [vec![sig15(y), sig15(value)]]),
    })
}

pub struct Grid {
    pub y: Option<f64>,
    pub y_min: f64,
    pub y_max: f64,
    pub points: usize,
}

impl Grid {
    fn args(&self) -> CliResult<Vec<ThetaArg>> {
        if let Some(y) = self.y {
            return Ok(vec![theta_arg(y)?]);
        }
        if self.points == 0 {
            return Err(usage("--points must be at least 1"));
        }
        positive("y-min", self.y_min)?;
        positive("y-max", self.y_max)?;
        if self.y_max < self.y_min {
            return Err(usage("--y-max must not be below --y-min"));
        }
        Ok(log_grid(self.y_min, self.y_max, self.points)?)
    }
}

pub fn secrecy_function(lattice: &str, grid: &Grid, method: Method, tol: f64, format: Format) -> CliResult<String> {
    let sel = parse_selection(lattice)?;
    let source = ThetaSource::new(&sel, method, tol)?;
    let points = grid
        .args()?
        .into_par_iter()
        .map(|y| secrecy_point(&source, y))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(match format {
        Format::Csv => csv(
            &["y", "theta_lattice", "theta_Zn", "xi"],
            points.iter().map(|p| vec![sig15(p.y), sig15(p.theta_lattice), sig15(p.theta_zn), sig15(p.xi)]),
        ),
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                y: f64,
                theta_lattice: f64,
                #[serde(rename = "theta_Zn")]
                theta_zn: f64,
                xi: f64,
            }
            let rows: Vec<Row> =
                points.iter().map(|p| Row { y: p.y, theta_lattice: p.theta_lattice, theta_zn: p.theta_zn, xi: p.xi }).collect();
            json(&rows)
        }
    })
}

pub fn secrecy_gain_cmd(lattice: &str, grid: &Grid, method: Method, tol: f64, format: Format) -> CliResult<String> {
    if format == Format::Csv {
        return Err(usage("secrecy-gain writes JSON only"));
    }
    let sel = parse_selection(lattice)?;
    let source = ThetaSource::new(&sel, method, tol)?;
    if grid.y.is_some() {
        return Err(usage("secrecy-gain searches a bracket; use --y-min/--y-max instead of --y"));
    }
    positive("y-min", grid.y_min)?;
    let search = GainSearch { y_lo: grid.y_min, y_hi: grid.y_max, grid_points: grid.points, ..GainSearch::default() };
    let r = secrecy_gain(&source, search)?;
    #[derive(Serialize)]
    struct Out<'a> {
        lattice: &'a str,
        gain: f64,
        argmax_y: f64,
        boundary_warning: bool,
        y_min: f64,
        y_max: f64,
        evaluations: usize,
        method: &'a str,
    }
    Ok(json(&Out {
        lattice: &sel.name,
        gain: r.gain,
        argmax_y: r.argmax_y,
        boundary_warning: r.boundary_warning,
        y_min: grid.y_min,
        y_max: grid.y_max,
        evaluations: r.evaluations.len(),
        method: source.method,
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Labeling {
    /// Mixed-radix labels from the Smith normal form, min-energy representatives.
    Canonical,
    /// The worked-example tables: Z2/2*Z2 with representatives
    /// (0,0),(0,1),(1,0),(1,1), or E8A/2*E8A with the Reed-Muller labeling.
    Example,
}

pub struct QuotientSel<'a> {
    pub lattice_b: &'a str,
    pub lattice_e: &'a str,
    pub labeling: Labeling,
}

fn same_lattice(a: &Lattice, b: &Lattice) -> bool {
    let (ga, gb) = (a.generator(), b.generator());
    ga.rows() == gb.rows()
        && ga.cols() == gb.cols()
        && (0..ga.rows()).all(|i| (0..ga.cols()).all(|j| (ga[(i, j)] - gb[(i, j)]).abs() < 1e-12))
}

impl QuotientSel<'_> {
    fn names(&self) -> CliResult<(Selection, Selection)> {
        Ok((parse_selection(self.lattice_b)?, parse_selection(self.lattice_e)?))
    }

    fn build(&self) -> CliResult<QuotientCode> {
        let (b, e) = self.names()?;
        let (b, e) = (b.lattice()?.clone(), e.lattice()?.clone());
        match self.labeling {
            Labeling::Canonical => Ok(QuotientCode::new(b, e)?),
            Labeling::Example => {
                for preset in [QuotientCode::z2_example(), e8_example_quotient()?] {
                    if same_lattice(preset.lattice_b(), &b) && same_lattice(preset.lattice_e(), &e) {
                        return Ok(preset);
                    }
                }
                Err(usage("--labeling example exists for Z2 / 2*Z2 and E8A / 2*E8A only"))
            }
        }
    }
}

pub fn quotient(sel: &QuotientSel, codebook: bool, format: Format) -> CliResult<String> {
    if format == Format::Csv {
        return Err(usage("quotient writes JSON only"));
    }
    let q = sel.build()?;
    if codebook {
        #[derive(Serialize)]
        struct Entry {
            label_bits: String,
            representative_coordinates: Vec<f64>,
        }
        let mut entries: Vec<Entry> = q
            .codebook()?
            .into_iter()
            .map(|(bits, p)| Entry { label_bits: bits.to_string(), representative_coordinates: p.point })
            .collect();
        entries.sort_by(|a, b| a.label_bits.cmp(&b.label_bits));
        return Ok(json(&entries));
    }
    #[derive(Serialize)]
    struct Out<'a> {
        lattice_b: &'a str,
        lattice_e: &'a str,
        index: u64,
        k: u32,
        d: &'a [i64],
        rate: f64,
        labeling: Labeling,
    }
    Ok(json(&Out {
        lattice_b: sel.lattice_b,
        lattice_e: sel.lattice_e,
        index: q.index(),
        k: q.k(),
        d: q.invariant_factors(),
        rate: q.rate_per_complex_symbol(),
        labeling: sel.labeling,
    }))
}

impl Serialize for Labeling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Labeling::Canonical => "canonical",
            Labeling::Example => "example",
        })
    }
}

fn window_coords(dim: usize, seed: u64, window: u32) -> Vec<i64> {
    let mut s = Substream::new(seed, 0, 0);
    let l = i64::from(window);
    (0..dim).map(|_| if l == 0 { 0 } else { s.below(2 * l as u64) as i64 - l }).collect()
}

fn parse_bits(text: &str) -> CliResult<Bits> {
    text.parse().map_err(|_| usage(format!("--bits takes a string of 0 and 1, got {text:?}")))
}

pub fn encode(sel: &QuotientSel, bits: &str, r_coords: Option<&str>, seed: u64, window: u32, format: Format) -> CliResult<String> {
    if format == Format::Csv {
        return Err(usage("encode writes JSON only"));
    }
    let q = sel.build()?;
    let bits = parse_bits(bits)?;
    let w = match r_coords {
        Some(text) => parse_int_list(text)?,
        None => window_coords(q.dim(), seed, window),
    };
    let c = q.representative(&bits)?;
    let r = q.sublattice_point(&w)?;
    let x = q.encode(&bits, &w)?;
    #[derive(Serialize)]
    struct Out {
        bits: String,
        r_coords: Vec<i64>,
        r: Vec<f64>,
        c: Vec<f64>,
        x: Vec<f64>,
        x_coords: Vec<i64>,
    }
    Ok(json(&Out { bits: bits.to_string(), r_coords: w, r: r.point, c: c.point, x: x.point, x_coords: x.coords }))
}

pub fn decode(sel: &QuotientSel, received: &str, format: Format) -> CliResult<String> {
    if format == Format::Csv {
        return Err(usage("decode writes JSON only"));
    }
    let q = sel.build()?;
    let y = parse_list(received)?;
    let d = q.decode(&y)?;
    #[derive(Serialize)]
    struct Out {
        received: Vec<f64>,
        bits: String,
        label: Vec<i64>,
        point: Vec<f64>,
        coords: Vec<i64>,
    }
    Ok(json(&Out { received: y, bits: d.bits.to_string(), label: d.label.digits, point: d.point.point, coords: d.point.coords }))
}

pub struct SimArgs<'a> {
    pub sigma_b: f64,
    pub sigma_e: &'a str,
    pub trials: u64,
    pub seed: u64,
    pub window: u32,
    pub tol: f64,
}

fn run_parallel(q: &QuotientCode, ch: ChannelParams, args: &SimArgs) -> CliResult<SimReport> {
    let chunks = args.trials.div_ceil(CHUNK);
    let (counts, hits) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let range = c * CHUNK..((c + 1) * CHUNK).min(args.trials);
            let counts = run_trials(q, ch, args.seed, args.window, range.clone())?;
            let hits = pcb_hits(q.lattice_b(), ch.sigma_b, args.seed, range)?;
            Ok::<_, wiretap_lattice::Error>((counts, hits))
        })
        .try_reduce(|| (TrialCounts::default(), 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(SimReport::from_counts(q, ch, args.seed, args.window, counts, hits, args.tol)?)
}

pub fn simulate(sel: &QuotientSel, args: &SimArgs, format: Option<Format>) -> CliResult<String> {
    if args.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if !(args.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let q = sel.build()?;
    let sigmas = parse_list(args.sigma_e)?;
    let sweep = sigmas.len() > 1;
    let reports = sigmas
        .iter()
        .map(|&s| run_parallel(&q, ChannelParams::new(args.sigma_b, s)?, args))
        .collect::<CliResult<Vec<_>>>()?;
    match format.unwrap_or(if sweep { Format::Csv } else { Format::Json }) {
        Format::Csv => Ok(csv(
            &["sigma_e", "p_mc", "stderr", "p_approx"],
            reports.iter().map(|r| vec![sig15(r.channel.sigma_e), sig15(r.eve.p), sig15(r.eve.stderr), sig15(r.approx_pce.raw)]),
        )),
        Format::Json if sweep => Ok(json(&reports.iter().map(|r| report_json(sel, r)).collect::<Vec<_>>())),
        Format::Json => Ok(json(&report_json(sel, &reports[0]))),
    }
}

#[derive(Serialize)]
struct ReportJson<'a> {
    trials: u64,
    seed: u64,
    window: u32,
    lattice_b: &'a str,
    lattice_e: &'a str,
    sigma_b: f64,
    sigma_e: f64,
    k: u32,
    p_correct_bob: f64,
    p_correct_eve: f64,
    stderr_bob: f64,
    stderr_eve: f64,
    p_point_bob: f64,
    p_point_eve: f64,
    approx_pcb: f64,
    approx_pcb_stderr: f64,
    approx_pce: f64,
    approx_pce_clamped: f64,
    approx_pce_valid: bool,
    ratio_analytic: Option<f64>,
    ratio_empirical: Option<f64>,
}

fn report_json<'a>(sel: &'a QuotientSel, r: &SimReport) -> ReportJson<'a> {
    ReportJson {
        trials: r.trials,
        seed: r.seed,
        window: r.window,
        lattice_b: sel.lattice_b,
        lattice_e: sel.lattice_e,
        sigma_b: r.channel.sigma_b,
        sigma_e: r.channel.sigma_e,
        k: r.k,
        p_correct_bob: r.bob.p,
        p_correct_eve: r.eve.p,
        stderr_bob: r.bob.stderr,
        stderr_eve: r.eve.stderr,
        p_point_bob: r.bob_point.p,
        p_point_eve: r.eve_point.p,
        approx_pcb: r.approx_pcb.p,
        approx_pcb_stderr: r.approx_pcb.stderr,
        approx_pce: r.approx_pce.raw,
        approx_pce_clamped: r.approx_pce.clamped,
        approx_pce_valid: r.approx_pce.valid,
        ratio_analytic: r.ratio.analytic,
        ratio_empirical: r.ratio.empirical,
    }
}

pub fn e8_demo(info: &str, code_bits: Option<&str>, seed: u64, window: u32, format: Format) -> CliResult<String> {
    if format == Format::Csv {
        return Err(usage("e8-demo writes JSON only"));
    }
    let info = parse_bits(info)?;
    let mut rng = Substream::new(seed, 0, 0);
    let code_bits = match code_bits {
        Some(text) => parse_bits(text)?,
        None => Bits::from_value(rng.below(16), 4),
    };
    let l = i64::from(window);
    let z: [i64; 8] = std::array::from_fn(|_| if l == 0 { 0 } else { rng.below(2 * l as u64) as i64 - l });
    let x = e8_example_encoder(&info, &code_bits, &z)?;
    let q = e8_example_quotient()?;
    let point: Vec<f64> = x.iter().map(|&v| v as f64).collect();
    let decoded = q.decode(&point)?.bits;
    #[derive(Serialize)]
    struct Out {
        info_bits: String,
        code_bits: String,
        z: [i64; 8],
        x: [i64; 8],
        in_lattice: bool,
        decoded_bits: String,
        round_trip: bool,
        cosets: u64,
        rate: f64,
    }
    Ok(json(&Out {
        info_bits: info.to_string(),
        code_bits: code_bits.to_string(),
        z,
        x,
        in_lattice: q.lattice_b().coords_of(&point).is_ok(),
        round_trip: decoded == info,
        decoded_bits: decoded.to_string(),
        cosets: q.index(),
        rate: q.rate_per_complex_symbol(),
    }))
}
