//! Smith normal form of square integer matrices, `B = U · D · V` with `U`,
//! `V` unimodular and `d_1 | d_2 | … | d_n`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(Error::ShapeMismatch { expected: (r, c), got: (r, row.len()) });
            }
            data.extend_from_slice(row);
        }
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    pub fn diagonal(d: &[i64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch { expected: (self.cols, other.cols), got: (other.rows, other.cols) });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0i64;
                for k in 0..self.cols {
                    let p = self.get(i, k).checked_mul(other.get(k, j)).ok_or(Error::Overflow)?;
                    acc = acc.checked_add(p).ok_or(Error::Overflow)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[i64]) -> Result<Vec<i64>> {
        debug_assert_eq!(v.len(), self.rows);
        let mut out = vec![0i64; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.row(i)) {
                *o = o.checked_add(a.checked_mul(m).ok_or(Error::Overflow)?).ok_or(Error::Overflow)?;
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(Error::Unsupported("determinant of a non-square matrix"));
        }
        let n = self.rows;
        let mut a: Vec<Vec<i128>> =
            (0..n).map(|i| self.row(i).iter().map(|&v| v as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        let det = if n == 0 { 1 } else { sign * a[n - 1][n - 1] };
        i64::try_from(det).map_err(|_| Error::Overflow)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c · row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: i64) -> Result<()> {
        for j in 0..self.cols {
            let v = self.get(dst, j).checked_add(c.checked_mul(self.get(src, j)).ok_or(Error::Overflow)?);
            self.set(dst, j, v.ok_or(Error::Overflow)?);
        }
        Ok(())
    }

    /// col[dst] += c · col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: i64) -> Result<()> {
        for i in 0..self.rows {
            let v = self.get(i, dst).checked_add(c.checked_mul(self.get(i, src)).ok_or(Error::Overflow)?);
            self.set(i, dst, v.ok_or(Error::Overflow)?);
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// `B = U · diag(d) · V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: Vec<i64>,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> IntMatrix {
        IntMatrix::diagonal(&self.d)
    }
}

/// Tracks `B = U · S · V` while `S` is reduced to diagonal form.
struct Reducer {
    s: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn row_add(&mut self, dst: usize, src: usize, c: i64) -> Result<()> {
        // S ← E S with E = I + c e_dst e_srcᵀ, so U ← U E⁻¹.
        self.s.add_row(dst, src, c)?;
        self.u.add_col(src, dst, -c)
    }

    fn col_add(&mut self, dst: usize, src: usize, c: i64) -> Result<()> {
        // S ← S F with F = I + c e_src e_dstᵀ, so V ← F⁻¹ V and V⁻¹ ← V⁻¹ F.
        self.s.add_col(dst, src, c)?;
        self.v.add_row(src, dst, -c)?;
        self.v_inv.add_col(dst, src, c)
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        if a != b {
            self.s.swap_rows(a, b);
            self.u.swap_cols(a, b);
        }
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        if a != b {
            self.s.swap_cols(a, b);
            self.v.swap_rows(a, b);
            self.v_inv.swap_cols(a, b);
        }
    }

    fn row_negate(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_col(i);
    }

    fn smallest_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let n = self.s.rows();
        let mut best: Option<(usize, usize)> = None;
        for i in t..n {
            for j in t..n {
                let v = self.s.get(i, j).unsigned_abs();
                if v != 0 && best.is_none_or(|(bi, bj)| v < self.s.get(bi, bj).unsigned_abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn reduce(&mut self, t: usize) -> Result<bool> {
        let n = self.s.rows();
        let Some((pi, pj)) = self.smallest_pivot(t) else {
            return Ok(false);
        };
        self.row_swap(t, pi);
        self.col_swap(t, pj);
        loop {
            let p = self.s.get(t, t);
            let mut clean = true;
            for i in t + 1..n {
                let q = self.s.get(i, t).div_euclid(p);
                if q != 0 {
                    self.row_add(i, t, -q)?;
                }
                if self.s.get(i, t) != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = self.s.get(t, j).div_euclid(p);
                if q != 0 {
                    self.col_add(j, t, -q)?;
                }
                if self.s.get(t, j) != 0 {
                    clean = false;
                }
            }
            if clean {
                let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| self.s.get(i, j) % p != 0));
                match bad {
                    None => break,
                    Some(i) => self.row_add(t, i, 1)?,
                }
            }
            // Move the smallest remaining entry of row/column t to the pivot.
            let (pi, pj) = self.smallest_pivot(t).expect("pivot row is nonzero");
            self.row_swap(t, pi);
            self.col_swap(t, pj);
        }
        if self.s.get(t, t) < 0 {
            self.row_negate(t);
        }
        Ok(true)
    }
}

/// Smith normal form of a square integer matrix.
pub fn smith_normal_form(b: &IntMatrix) -> Result<SmithForm> {
    if b.rows() != b.cols() {
        return Err(Error::Unsupported("Smith normal form of a non-square matrix"));
    }
    let n = b.rows();
    let mut r = Reducer {
        s: b.clone(),
        u: IntMatrix::identity(n),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    for t in 0..n {
        if !r.reduce(t)? {
            break;
        }
    }
    let d = (0..n).map(|i| r.s.get(i, i)).collect();
    Ok(SmithForm { u: r.u, d, v: r.v, v_inv: r.v_inv })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(b: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(b).unwrap();
        let rebuilt = f.u.mul(&f.diagonal()).unwrap().mul(&f.v).unwrap();
        assert_eq!(&rebuilt, b);
        assert_eq!(f.u.determinant().unwrap().abs(), 1);
        assert_eq!(f.v.determinant().unwrap().abs(), 1);
        assert_eq!(f.v.mul(&f.v_inv).unwrap(), IntMatrix::identity(b.rows()));
        for w in f.d.windows(2) {
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0, "{:?}", f.d);
            } else {
                assert_eq!(w[1], 0);
            }
        }
        assert!(f.d.iter().all(|&x| x >= 0));
        f
    }

    #[test]
    fn scalar_and_identity() {
        assert_eq!(check(&IntMatrix::diagonal(&[2, 2])).d, [2, 2]);
        assert_eq!(check(&IntMatrix::identity(4)).d, [1, 1, 1, 1]);
    }

    #[test]
    fn textbook_example() {
        // diag(2, 6, 12) up to units.
        let b = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).unwrap();
        assert_eq!(check(&b).d, [2, 6, 12]);
    }

    #[test]
    fn divisibility_repair() {
        assert_eq!(check(&IntMatrix::diagonal(&[6, 4])).d, [2, 12]);
    }

    #[test]
    fn determinant_matches_product() {
        let b = IntMatrix::from_rows(&[[3, 1, 0], [1, 4, 1], [0, 2, 5]]).unwrap();
        let f = check(&b);
        assert_eq!(b.determinant().unwrap().abs(), f.d.iter().product::<i64>());
    }

    #[test]
    fn singular_matrix() {
        let b = IntMatrix::from_rows(&[[2, 4], [1, 2]]).unwrap();
        assert_eq!(check(&b).d, [1, 0]);
    }

    proptest! {
        #[test]
        fn random_matrices(n in 1usize..=4, entries in proptest::collection::vec(-9i64..=9, 16)) {
            let rows: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 4..i * 4 + n].to_vec()).collect();
            let b = IntMatrix::from_rows(&rows).unwrap();
            let f = check(&b);
            prop_assert_eq!(b.determinant().unwrap().abs(), f.d.iter().product::<i64>());
        }
    }
}
