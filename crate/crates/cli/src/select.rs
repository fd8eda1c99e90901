//! Lattice selectors.
//!
//! ```text
//! selector := <factor> "*" selector | name | path
//! name     := "Zn:" n | "Z" n | "Dn:" n | "D" n | "E8" | "E8A" | "Leech"
//! factor   := decimal | p "/" q
//! ```
//!
//! A path names a generator-matrix file: one basis vector per line,
//! whitespace-separated decimal or `p/q` entries, `#` starts a comment.

use std::path::Path;

use wiretap_lattice::theta::{EnumeratedTheta, Scaled, ThetaArg, ThetaFamily, ThetaSeries};
use wiretap_lattice::{Lattice, NamedLattice};

use crate::error::{usage, CliError, CliResult};

#[derive(Debug, Clone)]
pub struct Selection {
    pub name: String,
    /// Absent only for `Leech`, which is available through its theta series.
    pub lattice: Option<Lattice>,
    pub family: Option<Scaled<ThetaFamily>>,
}

impl Selection {
    pub fn lattice(&self) -> CliResult<&Lattice> {
        self.lattice
            .as_ref()
            .ok_or_else(|| usage(format!("{} has no generator matrix here; only theta commands accept it", self.name)))
    }
}

pub fn parse_number(s: &str) -> CliResult<f64> {
    let bad = || usage(format!("not a number: {s:?}"));
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            p / q
        }
        None => s.trim().parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(parse_number).collect()
}

pub fn parse_int_list(s: &str) -> CliResult<Vec<i64>> {
    s.split(',').map(|t| t.trim().parse().map_err(|_| usage(format!("not an integer: {t:?}")))).collect()
}

fn dimension(s: &str) -> Option<usize> {
    s.parse().ok().filter(|&n| n >= 1)
}

fn named(which: NamedLattice, family: ThetaFamily, factor: f64, name: &str) -> CliResult<Selection> {
    Ok(Selection {
        name: name.to_string(),
        lattice: Some(Lattice::named(which)?.with_name(name)),
        family: Some(Scaled { inner: family, factor }),
    })
}

pub fn parse_selection(text: &str) -> CliResult<Selection> {
    let text = text.trim();
    if let Some((factor, rest)) = text.split_once('*') {
        let a = parse_number(factor)?;
        if a <= 0.0 {
            return Err(usage(format!("scale factor must be positive: {factor:?}")));
        }
        let inner = parse_selection(rest)?;
        let lattice = match &inner.lattice {
            Some(l) => Some(l.scaled(a)?.with_name(text)),
            None => None,
        };
        let family = inner.family.map(|f| Scaled { inner: f.inner, factor: f.factor * a });
        return Ok(Selection { name: text.to_string(), lattice, family });
    }
    let upper = text.to_ascii_uppercase();
    let by_name = match upper.as_str() {
        "E8" => Some(named(NamedLattice::E8Unimodular, ThetaFamily::E8, 1.0, text)),
        // Construction A from the (8,4,4) code is √2·E8 up to rotation.
        "E8A" => Some(named(NamedLattice::E8ConstructionA, ThetaFamily::E8, std::f64::consts::SQRT_2, text)),
        "LEECH" => Some(Ok(Selection {
            name: text.to_string(),
            lattice: None,
            family: Some(Scaled { inner: ThetaFamily::Leech, factor: 1.0 }),
        })),
        _ => {
            let rest = |prefix: char| {
                upper.strip_prefix(prefix).map(|r| r.strip_prefix("N:").unwrap_or(r)).and_then(dimension)
            };
            if let Some(n) = rest('Z') {
                Some(named(NamedLattice::Zn(n), ThetaFamily::Zn(n), 1.0, text))
            } else if let Some(n) = rest('D') {
                if n < 2 {
                    return Err(usage("D_n needs n >= 2"));
                }
                Some(named(NamedLattice::Dn(n), ThetaFamily::Dn(n), 1.0, text))
            } else {
                None
            }
        }
    };
    match by_name {
        Some(sel) => sel,
        None if Path::new(text).is_file() => read_matrix_file(Path::new(text)),
        None => Err(usage(format!("unknown lattice {text:?} (expected Zn:<n>, Dn:<n>, E8, E8A, Leech, <a>*<name> or a matrix file)"))),
    }
}

pub fn read_matrix_file(path: &Path) -> CliResult<Selection> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let rows = parse_matrix(&text)?;
    let name = path.display().to_string();
    let lattice = Lattice::from_rows(&rows)?.with_name(name.clone());
    Ok(Selection { name, lattice: Some(lattice), family: None })
}

pub fn parse_matrix(text: &str) -> CliResult<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| l.split_whitespace().map(parse_number).collect())
        .collect::<CliResult<_>>()?;
    if rows.is_empty() {
        return Err(usage("generator matrix file has no rows"));
    }
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(usage("generator matrix rows differ in length"));
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// Closed form when the lattice has one, enumeration otherwise.
    Auto,
    Closed,
    Enumerated,
}

/// The theta series a command evaluates for a selection.
pub struct ThetaSource<'a> {
    closed: Option<Scaled<ThetaFamily>>,
    enumerated: Option<EnumeratedTheta<'a>>,
    pub method: &'static str,
}

impl<'a> ThetaSource<'a> {
    pub fn new(sel: &'a Selection, method: Method, tol: f64) -> CliResult<Self> {
        if !(tol > 0.0) {
            return Err(usage("--tol must be positive"));
        }
        let enumerated = || -> CliResult<EnumeratedTheta<'a>> { Ok(EnumeratedTheta { lattice: sel.lattice()?, tol }) };
        Ok(match (method, sel.family) {
            (Method::Auto | Method::Closed, Some(f)) => ThetaSource { closed: Some(f), enumerated: None, method: "closed" },
            (Method::Closed, None) => return Err(usage(format!("no closed-form theta series for {}", sel.name))),
            (Method::Auto | Method::Enumerated, _) => {
                ThetaSource { closed: None, enumerated: Some(enumerated()?), method: "enumerated" }
            }
        })
    }
}

impl ThetaSeries for ThetaSource<'_> {
    fn dimension(&self) -> usize {
        match (&self.closed, &self.enumerated) {
            (Some(c), _) => c.dimension(),
            (None, Some(e)) => e.dimension(),
            (None, None) => unreachable!("a theta source always has a path"),
        }
    }

    fn theta(&self, y: ThetaArg) -> wiretap_lattice::Result<f64> {
        match (&self.closed, &self.enumerated) {
            (Some(c), _) => c.theta(y),
            (None, Some(e)) => e.theta(y),
            (None, None) => unreachable!("a theta source always has a path"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        for (s, dim, vol) in [("Z2", 2, 1.0), ("Zn:3", 3, 1.0), ("dn:4", 4, 2.0), ("D8", 8, 2.0), ("E8", 8, 1.0), ("E8A", 8, 16.0)] {
            let sel = parse_selection(s).unwrap();
            let l = sel.lattice().unwrap();
            assert_eq!(l.dim(), dim, "{s}");
            assert!((l.volume() - vol).abs() < 1e-9, "{s}");
        }
        let leech = parse_selection("Leech").unwrap();
        assert!(leech.lattice().is_err());
        assert!(parse_selection("E9").is_err());
        assert!(parse_selection("Z0").is_err());
        assert!(parse_selection("D1").is_err());
    }

    #[test]
    fn scaling() {
        let sel = parse_selection("2*E8A").unwrap();
        assert!((sel.lattice().unwrap().volume() - 4096.0).abs() < 1e-6);
        assert_eq!(sel.family.unwrap().factor, 2.0 * std::f64::consts::SQRT_2);
        let half = parse_selection("1/2*Z2").unwrap();
        assert!((half.lattice().unwrap().volume() - 0.25).abs() < 1e-12);
        assert!(parse_selection("-1*Z2").is_err());
    }

    #[test]
    fn matrix_text() {
        let rows = parse_matrix("# basis\n1 0\n1/2 3/2  # second\n\n").unwrap();
        assert_eq!(rows, vec![vec![1.0, 0.0], vec![0.5, 1.5]]);
        assert!(parse_matrix("1 0\n1\n").is_err());
        assert!(parse_matrix("1 x\n").is_err());
        assert!(parse_matrix("1/0\n").is_err());
    }

    #[test]
    fn e8a_closed_form_matches_enumeration() {
        let sel = parse_selection("E8A").unwrap();
        let closed = ThetaSource::new(&sel, Method::Closed, 1e-12).unwrap();
        let enumerated = ThetaSource::new(&sel, Method::Enumerated, 1e-12).unwrap();
        for y in [0.3, 1.0] {
            let y = ThetaArg::new(y).unwrap();
            let (a, b) = (closed.theta(y).unwrap(), enumerated.theta(y).unwrap());
            assert!((a - b).abs() < 1e-9 * a, "{a} vs {b}");
        }
    }
}
