//! The (8,4,4) Reed-Muller code and the E8 / 2E8 example built on it.
//!
//! Words are `u8` with bit `j` holding coordinate `j`; the text form lists
//! coordinate 0 first. Generator rows are the lexicographically sorted words
//! `00001111, 00110011, 01010101, 11111111`, and message bit `i` (little
//! endian) selects row `i`.
//!
//! With `E8 = 2Z^8 + (8,4,4)` and `2E8 = 4Z^8 + 2·(8,4,4)`, the 256 points
//! `c + 2ℓ` (codeword `c`, minimum-weight coset leader `ℓ`) represent
//! `E8 / 2E8`. The example encoder sends `x = c + 2ℓ + 2c' + 4z` where the
//! information bits pick `c` and `ℓ`, and the random bits pick `c'` and `z`.

use alloc::vec::Vec;

use crate::coset::{Bits, QuotientCode};
use crate::lattice::{Lattice, NamedLattice};
use crate::{Error, Result};

pub const LENGTH: usize = 8;
pub const DIMENSION: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    pub generator: [u8; DIMENSION],
    pub codewords: [u8; 16],
    /// One minimum-weight word per coset of the code, sorted by weight then
    /// lexicographically; entry 0 is the zero word.
    pub coset_leaders: [u8; 16],
}

/// Sort key giving lexicographic order of the text form.
fn lex_key(w: u8) -> u8 {
    w.reverse_bits()
}

pub fn word_to_string(w: u8) -> alloc::string::String {
    (0..LENGTH).map(|j| if (w >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

/// The (8,4,4) first-order Reed-Muller code.
pub fn rm_code() -> BinaryCode {
    let generator = [0xF0, 0xCC, 0xAA, 0xFF];
    let codewords: [u8; 16] = core::array::from_fn(|m| {
        (0..DIMENSION).filter(|i| (m >> i) & 1 == 1).fold(0u8, |acc, i| acc ^ generator[i])
    });
    let coset_id = |w: u8| codewords.iter().map(|c| c ^ w).min().expect("nonempty");
    let mut words: Vec<u8> = (0..=255u8).collect();
    words.sort_by_key(|&w| (w.count_ones(), lex_key(w)));
    let mut leaders = Vec::with_capacity(16);
    let mut ids = Vec::with_capacity(16);
    for w in words {
        let id = coset_id(w);
        if !ids.contains(&id) {
            ids.push(id);
            leaders.push(w);
        }
        if leaders.len() == 16 {
            break;
        }
    }
    let coset_leaders = leaders.try_into().expect("16 cosets");
    BinaryCode { generator, codewords, coset_leaders }
}

impl BinaryCode {
    /// Codeword selected by a 4-bit message.
    pub fn encode(&self, message: &Bits) -> Result<u8> {
        if message.len() != DIMENSION {
            return Err(Error::BadLabel("Reed-Muller messages have 4 bits"));
        }
        Ok(self.codewords[message.value() as usize])
    }

    pub fn min_distance(&self) -> u32 {
        self.codewords.iter().filter(|&&c| c != 0).map(|c| c.count_ones()).min().unwrap_or(0)
    }
}

fn word_vector(w: u8) -> [i64; LENGTH] {
    core::array::from_fn(|j| i64::from((w >> j) & 1))
}

/// Split of the 8 information bits: the first four pick the codeword `c`,
/// the last four pick the coset leader `ℓ`.
fn example_representative(code: &BinaryCode, info: &Bits) -> Result<[i64; LENGTH]> {
    if info.len() != 8 {
        return Err(Error::BadLabel("the E8 example takes 8 information bits"));
    }
    let (msg, leader_bits) = info.split_at(DIMENSION);
    let c = word_vector(code.encode(&msg)?);
    let l = word_vector(code.coset_leaders[leader_bits.value() as usize]);
    Ok(core::array::from_fn(|j| c[j] + 2 * l[j]))
}

/// `E8A / 2·E8A` labeled by the example's 8 information bits.
pub fn e8_example_quotient() -> Result<QuotientCode> {
    let e8a = Lattice::named(NamedLattice::E8ConstructionA)?;
    let code = rm_code();
    let q = QuotientCode::new(e8a.clone(), e8a.scaled(2.0)?)?;
    let entries = (0..256u64)
        .map(|v| {
            let info = Bits::from_value(v, 8);
            let rep = example_representative(&code, &info)?;
            Ok((info, rep.iter().map(|&x| x as f64).collect()))
        })
        .collect::<Result<Vec<_>>>()?;
    q.with_label_table(entries)
}

/// `x = c + 2ℓ + 2c' + 4z`: `info` (8 bits) selects `c` and `ℓ`,
/// `code_bits` (4 bits) selects `c'`, and `z ∈ Z^8` is the remaining
/// randomness.
pub fn e8_example_encoder(info: &Bits, code_bits: &Bits, z: &[i64; LENGTH]) -> Result<[i64; LENGTH]> {
    let code = rm_code();
    let base = example_representative(&code, info)?;
    let c2 = word_vector(code.encode(code_bits)?);
    Ok(core::array::from_fn(|j| base[j] + 2 * c2[j] + 4 * z[j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, BTreeSet};

    #[test]
    fn weight_distribution() {
        let code = rm_code();
        let mut weights = BTreeMap::new();
        for c in code.codewords {
            *weights.entry(c.count_ones()).or_insert(0) += 1;
        }
        assert_eq!(weights.into_iter().collect::<Vec<_>>(), [(0, 1), (4, 14), (8, 1)]);
        assert_eq!(code.min_distance(), 4);
        let distinct: BTreeSet<u8> = code.codewords.iter().copied().collect();
        assert_eq!(distinct.len(), 16);
    }

    #[test]
    fn generator_rows_in_text_form() {
        let rows: Vec<_> = rm_code().generator.iter().map(|&g| word_to_string(g)).collect();
        assert_eq!(rows, ["00001111", "00110011", "01010101", "11111111"]);
    }

    #[test]
    fn coset_leaders() {
        let code = rm_code();
        assert_eq!(code.coset_leaders[0], 0);
        assert!(code.coset_leaders.iter().all(|l| l.count_ones() <= 2));
        // Pairwise distinct cosets: no difference of leaders is a codeword.
        for (i, a) in code.coset_leaders.iter().enumerate() {
            for b in &code.coset_leaders[i + 1..] {
                assert!(!code.codewords.contains(&(a ^ b)));
            }
        }
        let weights: Vec<u32> = code.coset_leaders.iter().map(|l| l.count_ones()).collect();
        assert_eq!(weights, [0, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2]);
        // Weight-2 leaders are the lexicographically first representatives.
        assert_eq!(word_to_string(code.coset_leaders[9]), "00000011");
    }

    #[test]
    fn alphabet_has_256_distinct_cosets() {
        let q = e8_example_quotient().unwrap();
        assert_eq!(q.index(), 256);
        let code = rm_code();
        let mut labels = BTreeSet::new();
        for c in code.codewords {
            for l in code.coset_leaders {
                let x: Vec<f64> = word_vector(c).iter().zip(word_vector(l)).map(|(a, b)| (a + 2 * b) as f64).collect();
                labels.insert(q.label_of(&x).unwrap().bits.value());
            }
        }
        assert_eq!(labels.len(), 256);
    }

    #[test]
    fn example_encoder_lands_in_e8_with_the_right_label() {
        let q = e8_example_quotient().unwrap();
        let zero = e8_example_encoder(&Bits::zeros(8), &Bits::zeros(4), &[0; 8]).unwrap();
        assert_eq!(zero, [0; 8]);
        let mut state = 12345u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..500 {
            let info = Bits::from_value(next() & 0xFF, 8);
            let code_bits = Bits::from_value(next() & 0xF, 4);
            let z: [i64; 8] = core::array::from_fn(|_| (next() % 5) as i64 - 2);
            let x = e8_example_encoder(&info, &code_bits, &z).unwrap();
            let point: Vec<f64> = x.iter().map(|&v| v as f64).collect();
            assert!(q.lattice_b().coords_of(&point).is_ok());
            assert_eq!(q.decode(&point).unwrap().bits, info);
        }
    }

    #[test]
    fn example_rate() {
        let q = e8_example_quotient().unwrap();
        assert_eq!(q.rate_per_complex_symbol(), 2.0);
        assert_eq!(0.25 * (q.index() as f64).log2(), 2.0);
    }

    #[test]
    fn malformed_bit_lengths() {
        assert!(e8_example_encoder(&Bits::zeros(7), &Bits::zeros(4), &[0; 8]).is_err());
        assert!(e8_example_encoder(&Bits::zeros(8), &Bits::zeros(3), &[0; 8]).is_err());
    }
}
