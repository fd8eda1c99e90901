//! Coset codes `Λ_b / Λ_e`: information bits pick a coset, a random point of
//! `Λ_e` picks the member that is actually sent.
//!
//! The quotient group is read off the Smith normal form of the integer
//! relation `M_e = B · M_b`. Writing `B = U · D · V`, a point with
//! `Λ_b`-coordinates `u` lies in `Λ_e` exactly when `u · V⁻¹ ∈ Z^n · D`, so
//! the digits `t_i = (u · V⁻¹)_i mod d_i` label its coset.
//!
//! Bits are packed from digits in mixed radix, little-endian: digit 0 owns
//! the lowest `log2 d_0` bits, and bit 0 is the first character of the text
//! form.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::lattice::Lattice;
use crate::snf::{smith_normal_form, IntMatrix, SmithForm};
use crate::{Error, Result};

/// Largest `k` for which the full codebook may be materialized.
pub const MAX_CODEBOOK_BITS: u32 = 20;

/// A bit string, bit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn new(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    /// The `len` low bits of `value`, least significant first.
    pub fn from_value(value: u64, len: u32) -> Self {
        Bits((0..len).map(|i| (value >> i) & 1 == 1).collect())
    }

    pub fn zeros(len: u32) -> Self {
        Bits(vec![false; len as usize])
    }

    pub fn value(&self) -> u64 {
        self.0.iter().enumerate().fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn split_at(&self, mid: usize) -> (Bits, Bits) {
        let (a, b) = self.0.split_at(mid);
        (Bits(a.to_vec()), Bits(b.to_vec()))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().map(|&b| if b { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

impl FromStr for Bits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::BadLabel("bit strings use only '0' and '1'")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Bits)
    }
}

/// Coset of `Λ_e` in `Λ_b`, as digits `0 ≤ t_i < d_i` plus their canonical
/// mixed-radix bit packing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CosetLabel {
    pub digits: Vec<i64>,
    pub bits: Bits,
}

/// A point of `Λ_b` with its integer coordinates in the `Λ_b` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePoint {
    pub point: Vec<f64>,
    pub coords: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    pub bits: Bits,
    pub label: CosetLabel,
    pub point: LatticePoint,
}

/// Explicit bits → representative assignment overriding the canonical one.
#[derive(Debug, Clone)]
struct LabelTable {
    /// Indexed by `bits.value()`: `Λ_b` coordinates of the representative.
    reps: Vec<Vec<i64>>,
    /// Indexed by canonical label value: the table's bits value.
    bits_by_canonical: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct QuotientCode {
    lattice_b: Lattice,
    lattice_e: Lattice,
    relation: IntMatrix,
    snf: SmithForm,
    k: u32,
    table: Option<LabelTable>,
}

/// Builds the quotient code `Λ_b / Λ_e`.
pub fn build_quotient(lattice_b: &Lattice, lattice_e: &Lattice) -> Result<QuotientCode> {
    QuotientCode::new(lattice_b.clone(), lattice_e.clone())
}

impl QuotientCode {
    pub fn new(lattice_b: Lattice, lattice_e: Lattice) -> Result<Self> {
        if !lattice_b.is_full_rank() || !lattice_e.is_full_rank() {
            return Err(Error::Unsupported("quotient of lattices that are not full rank"));
        }
        let n = lattice_b.dim();
        if lattice_e.dim() != n {
            return Err(Error::ShapeMismatch { expected: (n, n), got: (lattice_e.dim(), lattice_e.dim()) });
        }
        let relation = integer_relation(&lattice_b, &lattice_e)?;
        let snf = smith_normal_form(&relation)?;
        let index = snf.d.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d as u64)).ok_or(Error::Overflow)?;
        if !index.is_power_of_two() {
            return Err(Error::IndexNotPowerOfTwo { index });
        }
        let k = index.trailing_zeros();
        Ok(QuotientCode { lattice_b, lattice_e, relation, snf, k, table: None })
    }

    /// Replaces the canonical labeling by an explicit table of
    /// `(bits, representative point)` pairs covering every coset once.
    pub fn with_label_table<I>(mut self, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Bits, Vec<f64>)>,
    {
        if self.k > MAX_CODEBOOK_BITS {
            return Err(Error::BadLabel("too many cosets for an explicit table"));
        }
        let size = 1usize << self.k;
        let mut reps: Vec<Option<Vec<i64>>> = vec![None; size];
        let mut bits_by_canonical: Vec<Option<u64>> = vec![None; size];
        for (bits, point) in entries {
            if bits.len() != self.k as usize {
                return Err(Error::BadLabel("table bit string has the wrong length"));
            }
            let coords = self.lattice_b.coords_of(&point)?;
            let canonical = self.label_of_coords(&coords)?.bits.value() as usize;
            let slot = bits.value() as usize;
            if reps[slot].is_some() || bits_by_canonical[canonical].is_some() {
                return Err(Error::BadLabel("table repeats a bit string or a coset"));
            }
            reps[slot] = Some(coords);
            bits_by_canonical[canonical] = Some(slot as u64);
        }
        let reps: Option<Vec<_>> = reps.into_iter().collect();
        let bits_by_canonical: Option<Vec<_>> = bits_by_canonical.into_iter().collect();
        match (reps, bits_by_canonical) {
            (Some(reps), Some(bits_by_canonical)) => {
                self.table = Some(LabelTable { reps, bits_by_canonical });
                Ok(self)
            }
            _ => Err(Error::BadLabel("table does not cover every coset")),
        }
    }

    /// `Z² / 2Z²` with the bit assignment `00 → 2Z²`, `01 → 2Z² + (0,1)`,
    /// `10 → 2Z² + (1,0)`, `11 → 2Z² + (1,1)`, using exactly those
    /// representatives.
    pub fn z2_example() -> Self {
        let z2 = Lattice::named(crate::NamedLattice::Zn(2)).expect("Z2");
        let two_z2 = z2.scaled(2.0).expect("2Z2");
        let table = [("00", [0.0, 0.0]), ("01", [0.0, 1.0]), ("10", [1.0, 0.0]), ("11", [1.0, 1.0])];
        QuotientCode::new(z2, two_z2)
            .and_then(|q| q.with_label_table(table.iter().map(|(b, p)| (b.parse().expect("bits"), p.to_vec()))))
            .expect("Z2/2Z2 table is valid")
    }

    pub fn lattice_b(&self) -> &Lattice {
        &self.lattice_b
    }

    pub fn lattice_e(&self) -> &Lattice {
        &self.lattice_e
    }

    pub fn dim(&self) -> usize {
        self.lattice_b.dim()
    }

    /// `B` with `M_e = B · M_b`.
    pub fn relation(&self) -> &IntMatrix {
        &self.relation
    }

    pub fn snf(&self) -> &SmithForm {
        &self.snf
    }

    pub fn invariant_factors(&self) -> &[i64] {
        &self.snf.d
    }

    /// `|Λ_b / Λ_e| = 2^k`.
    pub fn index(&self) -> u64 {
        1u64 << self.k
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn has_label_table(&self) -> bool {
        self.table.is_some()
    }

    /// Information bits per complex symbol, `log2|Λ_b/Λ_e| / (n/2)`.
    pub fn rate_per_complex_symbol(&self) -> f64 {
        2.0 * self.k as f64 / self.dim() as f64
    }

    /// Coset label of the point `x ∈ Λ_b`.
    pub fn label_of(&self, x: &[f64]) -> Result<CosetLabel> {
        let coords = self.lattice_b.coords_of(x)?;
        self.label_of_coords(&coords)
    }

    /// Coset label of the point with `Λ_b`-coordinates `u`.
    pub fn label_of_coords(&self, u: &[i64]) -> Result<CosetLabel> {
        if u.len() != self.dim() {
            return Err(Error::BadLabel("coordinate vector has the wrong length"));
        }
        let transformed = self.snf.v_inv.vec_mul(u)?;
        let digits: Vec<i64> = transformed.iter().zip(&self.snf.d).map(|(x, d)| x.rem_euclid(*d)).collect();
        let bits = Bits::from_value(self.pack(&digits), self.k);
        Ok(CosetLabel { digits, bits })
    }

    fn pack(&self, digits: &[i64]) -> u64 {
        let mut value = 0u64;
        let mut weight = 1u64;
        for (t, d) in digits.iter().zip(&self.snf.d) {
            value += *t as u64 * weight;
            weight *= *d as u64;
        }
        value
    }

    /// Label whose canonical packing is `bits`.
    pub fn canonical_label(&self, bits: &Bits) -> Result<CosetLabel> {
        if bits.len() != self.k as usize {
            return Err(Error::BadLabel("bit string length differs from k"));
        }
        let mut rest = bits.value();
        let digits = self
            .snf
            .d
            .iter()
            .map(|&d| {
                let t = rest % d as u64;
                rest /= d as u64;
                t as i64
            })
            .collect();
        Ok(CosetLabel { digits, bits: bits.clone() })
    }

    /// Label carried by `bits` under this code's labeling.
    pub fn label_for_bits(&self, bits: &Bits) -> Result<CosetLabel> {
        match &self.table {
            None => self.canonical_label(bits),
            Some(t) => {
                if bits.len() != self.k as usize {
                    return Err(Error::BadLabel("bit string length differs from k"));
                }
                self.label_of_coords(&t.reps[bits.value() as usize])
            }
        }
    }

    /// Bits carried by `label` under this code's labeling.
    pub fn bits_of(&self, label: &CosetLabel) -> Bits {
        match &self.table {
            None => label.bits.clone(),
            Some(t) => Bits::from_value(t.bits_by_canonical[label.bits.value() as usize], self.k),
        }
    }

    fn point_from_coords(&self, coords: Vec<i64>) -> LatticePoint {
        LatticePoint { point: self.lattice_b.point(&coords), coords }
    }

    /// Shortest member of the coset `label`. Among equally short members
    /// the one with the lexicographically smallest `Λ_b`-coordinates wins.
    pub fn min_energy_representative(&self, label: &CosetLabel) -> Result<LatticePoint> {
        let base = self.snf.v.vec_mul(&label.digits)?;
        let c0 = self.lattice_b.point(&base);
        let mut best: Option<Vec<i64>> = None;
        for p in self.lattice_e.closest_points(&c0)? {
            let shift = self.relation.vec_mul(&p.coords)?;
            let coords: Vec<i64> = base.iter().zip(&shift).map(|(a, b)| a - b).collect();
            if best.as_ref().is_none_or(|b| coords < *b) {
                best = Some(coords);
            }
        }
        Ok(self.point_from_coords(best.expect("closest_points is never empty")))
    }

    /// Representative `c` sent for `bits`: the table entry when a table is
    /// installed, the minimum-energy representative otherwise.
    pub fn representative(&self, bits: &Bits) -> Result<LatticePoint> {
        match &self.table {
            Some(t) => {
                if bits.len() != self.k as usize {
                    return Err(Error::BadLabel("bit string length differs from k"));
                }
                Ok(self.point_from_coords(t.reps[bits.value() as usize].clone()))
            }
            None => self.min_energy_representative(&self.canonical_label(bits)?),
        }
    }

    /// Point of `Λ_e` with coordinates `w` in the basis `D · V · M_b`.
    pub fn sublattice_point(&self, w: &[i64]) -> Result<LatticePoint> {
        if w.len() != self.dim() {
            return Err(Error::BadLabel("sublattice coordinates have the wrong length"));
        }
        let scaled: Vec<i64> = w
            .iter()
            .zip(&self.snf.d)
            .map(|(a, d)| a.checked_mul(*d).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(self.point_from_coords(self.snf.v.vec_mul(&scaled)?))
    }

    /// `x = r + c`: the random sublattice point `r` (coordinates `w`, see
    /// [`Self::sublattice_point`]) shifted by the representative of `bits`.
    pub fn encode(&self, bits: &Bits, w: &[i64]) -> Result<LatticePoint> {
        let c = self.representative(bits)?;
        let r = self.sublattice_point(w)?;
        let coords = c.coords.iter().zip(&r.coords).map(|(a, b)| a + b).collect();
        Ok(self.point_from_coords(coords))
    }

    /// Nearest point of `Λ_b`, then its coset.
    pub fn decode(&self, received: &[f64]) -> Result<Decoded> {
        let nearest = self.lattice_b.closest_point(received)?;
        let label = self.label_of_coords(&nearest.coords)?;
        Ok(Decoded {
            bits: self.bits_of(&label),
            label,
            point: LatticePoint { point: nearest.point, coords: nearest.coords },
        })
    }

    /// Every `(bits, representative)` pair in increasing bit value.
    pub fn codebook(&self) -> Result<Vec<(Bits, LatticePoint)>> {
        if self.k > MAX_CODEBOOK_BITS {
            return Err(Error::ResourceCap { predicted: self.index(), cap: 1 << MAX_CODEBOOK_BITS });
        }
        (0..self.index())
            .map(|v| {
                let bits = Bits::from_value(v, self.k);
                self.representative(&bits).map(|p| (bits, p))
            })
            .collect()
    }
}

/// Rounds `M_e · M_b⁻¹` to integers and verifies the rounding is exact.
fn integer_relation(lattice_b: &Lattice, lattice_e: &Lattice) -> Result<IntMatrix> {
    let inv_b = lattice_b.generator().inverse()?;
    let real = lattice_e.generator().mul(&inv_b)?;
    let n = real.rows();
    let rows: Vec<Vec<i64>> =
        (0..n).map(|i| real.row(i).iter().map(|v| libm::round(*v) as i64).collect()).collect();
    let mut residual: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for (i, row) in rows.iter().enumerate() {
        let back = lattice_b.point(row);
        for (a, b) in back.iter().zip(lattice_e.generator().row(i)) {
            residual = residual.max((a - b).abs());
            scale = scale.max(b.abs());
        }
    }
    if residual > 1e-9 * scale {
        return Err(Error::NotSublattice { max_residual: residual });
    }
    IntMatrix::from_rows(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::NamedLattice;
    use proptest::prelude::*;
    use alloc::string::ToString;
    use std::collections::BTreeSet;

    fn z2_quotient() -> QuotientCode {
        let z2 = Lattice::named(NamedLattice::Zn(2)).unwrap();
        build_quotient(&z2, &z2.scaled(2.0).unwrap()).unwrap()
    }

    fn e8_quotient() -> QuotientCode {
        let e8a = Lattice::named(NamedLattice::E8ConstructionA).unwrap();
        build_quotient(&e8a, &e8a.scaled(2.0).unwrap()).unwrap()
    }

    fn bits(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn bits_text_and_value() {
        let b = bits("0110");
        assert_eq!(b.value(), 6);
        assert_eq!(b.to_string(), "0110");
        assert_eq!(Bits::from_value(6, 4), b);
        assert!("01x".parse::<Bits>().is_err());
    }

    #[test]
    fn quotient_sizes() {
        let q = z2_quotient();
        assert_eq!(q.invariant_factors(), [2, 2]);
        assert_eq!((q.k(), q.index()), (2, 4));

        let q = e8_quotient();
        assert_eq!(q.index(), 256);
        assert_eq!(q.k(), 8);
        assert_eq!(q.invariant_factors(), [2; 8]);
        assert_eq!(q.rate_per_complex_symbol(), 2.0);

        let d4 = Lattice::named(NamedLattice::Dn(4)).unwrap();
        let q = build_quotient(&d4, &d4).unwrap();
        assert_eq!(q.invariant_factors(), [1; 4]);
        assert_eq!(q.k(), 0);
    }

    #[test]
    fn snf_invariants_of_the_relation() {
        for q in [z2_quotient(), e8_quotient()] {
            let f = q.snf();
            let rebuilt = f.u.mul(&f.diagonal()).unwrap().mul(&f.v).unwrap();
            assert_eq!(&rebuilt, q.relation());
            assert_eq!(f.u.determinant().unwrap().abs(), 1);
            assert_eq!(f.v.determinant().unwrap().abs(), 1);
            let ratio = q.lattice_e().volume() / q.lattice_b().volume();
            assert!((ratio - q.index() as f64).abs() < 1e-9 * ratio);
        }
    }

    #[test]
    fn quotient_errors() {
        let z2 = Lattice::named(NamedLattice::Zn(2)).unwrap();
        let skew = Lattice::from_rows(&[[0.5, 0.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(build_quotient(&z2, &skew), Err(Error::NotSublattice { .. })));
        let three = z2.scaled(3.0).unwrap();
        assert_eq!(build_quotient(&z2, &three).unwrap_err(), Error::IndexNotPowerOfTwo { index: 9 });
        let z3 = Lattice::named(NamedLattice::Zn(3)).unwrap();
        assert!(matches!(build_quotient(&z2, &z3), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn z2_labels_are_distinct() {
        let q = z2_quotient();
        assert_eq!(q.label_of(&[0.0, 0.0]).unwrap().digits, [0, 0]);
        let labels: BTreeSet<u64> = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
            .iter()
            .map(|p| q.label_of(p).unwrap().bits.value())
            .collect();
        assert_eq!(labels.len(), 4);
        assert!(matches!(q.label_of(&[0.5, 0.0]), Err(Error::NotInLattice { .. })));
    }

    #[test]
    fn z2_min_energy_tie_break() {
        let q = z2_quotient();
        let label = q.label_of(&[1.0, 1.0]).unwrap();
        let rep = q.min_energy_representative(&label).unwrap();
        assert_eq!(rep.point, [-1.0, -1.0]);
        let zero = q.label_of(&[0.0, 0.0]).unwrap();
        assert_eq!(q.min_energy_representative(&zero).unwrap().point, [0.0, 0.0]);
    }

    #[test]
    fn e8_min_energy_representatives() {
        let q = e8_quotient();
        let book = q.codebook().unwrap();
        assert_eq!(book.len(), 256);
        let mut seen = BTreeSet::new();
        for (b, rep) in &book {
            let norm: f64 = rep.point.iter().map(|v| v * v).sum();
            assert!(norm <= 8.0 + 1e-9, "{b}: norm {norm}");
            // Oracle: no member of the coset within the rep's norm is shorter.
            let cp = q.lattice_e().closest_point(&rep.point).unwrap();
            assert!(cp.dist_sq >= norm - 1e-9);
            assert!(seen.insert(q.label_of(&rep.point).unwrap().bits.value()));
        }
    }

    #[test]
    fn min_energy_against_coset_enumeration() {
        // Every member of the coset with ‖x‖² ≤ 2‖c‖² is at least as long as c.
        let d4 = Lattice::named(NamedLattice::Dn(4)).unwrap();
        let q = build_quotient(&d4, &d4.scaled(2.0).unwrap()).unwrap();
        for (b, rep) in q.codebook().unwrap() {
            let norm: f64 = rep.point.iter().map(|v| v * v).sum();
            let label = q.label_of(&rep.point).unwrap();
            let mut coords = vec![-3i64; 4];
            loop {
                let x = d4.point(&coords);
                let n: f64 = x.iter().map(|v| v * v).sum();
                if n <= 2.0 * norm && q.label_of_coords(&coords).unwrap() == label {
                    assert!(n >= norm - 1e-9, "{b}: {x:?} shorter than {:?}", rep.point);
                }
                let mut i = 0;
                while i < 4 {
                    coords[i] += 1;
                    if coords[i] <= 3 {
                        break;
                    }
                    coords[i] = -3;
                    i += 1;
                }
                if i == 4 {
                    break;
                }
            }
        }
    }

    #[test]
    fn z2_worked_example() {
        let q = QuotientCode::z2_example();
        let r = q.sublattice_point(&[1, 1]).unwrap();
        assert_eq!(r.point, [2.0, 2.0]);
        let x = q.encode(&bits("01"), &[1, 1]).unwrap();
        assert_eq!(x.point, [2.0, 3.0]);
        let d = q.decode(&[2.1, 2.9]).unwrap();
        assert_eq!(d.point.point, [2.0, 3.0]);
        assert_eq!(d.bits.to_string(), "01");
        assert_eq!(q.encode(&bits("00"), &[0, 0]).unwrap().point, [0.0, 0.0]);
    }

    #[test]
    fn bad_tables_are_rejected() {
        let q = z2_quotient();
        let dup = [("00", [0.0, 0.0]), ("01", [2.0, 0.0]), ("10", [1.0, 0.0]), ("11", [1.0, 1.0])];
        let res = q.clone().with_label_table(dup.iter().map(|(b, p)| (bits(b), p.to_vec())));
        assert!(matches!(res, Err(Error::BadLabel(_))));
        let short = [("00", [0.0, 0.0])];
        assert!(q.with_label_table(short.iter().map(|(b, p)| (bits(b), p.to_vec()))).is_err());
    }

    #[test]
    fn zero_noise_round_trip_all_labels() {
        for q in [z2_quotient(), QuotientCode::z2_example(), e8_quotient()] {
            for v in 0..q.index() {
                let b = Bits::from_value(v, q.k());
                for w in [[0i64; 8], [1, -2, 0, 1, -1, 1, 0, -2]] {
                    let x = q.encode(&b, &w[..q.dim()]).unwrap();
                    assert_eq!(q.decode(&x.point).unwrap().bits, b);
                    assert_eq!(q.label_for_bits(&b).unwrap(), q.label_of(&x.point).unwrap());
                }
            }
        }
    }

    #[test]
    fn bit_length_errors() {
        let q = z2_quotient();
        assert!(q.encode(&bits("0"), &[0, 0]).is_err());
        assert!(q.canonical_label(&bits("000")).is_err());
        assert!(q.sublattice_point(&[1]).is_err());
    }

    proptest! {
        #[test]
        fn label_constant_on_cosets(u in proptest::collection::vec(-20i64..20, 8), w in proptest::collection::vec(-5i64..5, 8)) {
            let q = e8_quotient();
            let r = q.sublattice_point(&w).unwrap();
            let shifted: Vec<i64> = u.iter().zip(&r.coords).map(|(a, b)| a + b).collect();
            prop_assert_eq!(q.label_of_coords(&u).unwrap(), q.label_of_coords(&shifted).unwrap());
            // Membership of r in Λ_e via its own basis.
            prop_assert!(q.lattice_e().coords_of(&r.point).is_ok());
        }

        #[test]
        fn label_is_a_homomorphism(a in proptest::collection::vec(-20i64..20, 8), b in proptest::collection::vec(-20i64..20, 8)) {
            let q = e8_quotient();
            let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let (la, lb, ls) = (q.label_of_coords(&a).unwrap(), q.label_of_coords(&b).unwrap(), q.label_of_coords(&sum).unwrap());
            for i in 0..8 {
                let d = q.invariant_factors()[i];
                prop_assert_eq!((la.digits[i] + lb.digits[i]).rem_euclid(d), ls.digits[i]);
            }
        }

        #[test]
        fn encode_round_trip(v in 0u64..256, w in proptest::collection::vec(-2i64..2, 8)) {
            let q = e8_quotient();
            let b = Bits::from_value(v, 8);
            let x = q.encode(&b, &w).unwrap();
            prop_assert_eq!(q.bits_of(&q.label_of(&x.point).unwrap()), b);
        }

        #[test]
        fn packing_round_trip(v in 0u64..256) {
            let q = e8_quotient();
            let b = Bits::from_value(v, 8);
            let l = q.canonical_label(&b).unwrap();
            prop_assert_eq!(q.pack(&l.digits), v);
        }
    }
}
