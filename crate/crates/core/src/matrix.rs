//! Dense integer matrices with exact (checked) arithmetic and Smith normal form.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i128]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
            data.extend_from_slice(r.as_ref());
        }
        IntegerMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn checked_mul(&self, rhs: &IntegerMatrix) -> Result<IntegerMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::RankMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", rhs.rows),
            });
        }
        let mut out = IntegerMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.checked_mul(rhs[(k, j)]).ok_or(Error::Overflow)?;
                    out[(i, j)] = out[(i, j)].checked_add(prod).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(out)
    }

    pub fn checked_pow(&self, exp: u32) -> Result<IntegerMatrix> {
        let mut acc = IntegerMatrix::identity(self.rows);
        for _ in 0..exp {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i128> {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.clone();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[(k, k)] == 0 {
                match (k + 1..n).find(|&i| a[(i, k)] != 0) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = a[(i, j)].checked_mul(a[(k, k)]).ok_or(Error::Overflow)?;
                    let rhs = a[(i, k)].checked_mul(a[(k, j)]).ok_or(Error::Overflow)?;
                    a[(i, j)] = lhs.checked_sub(rhs).ok_or(Error::Overflow)? / prev;
                }
            }
            prev = a[(k, k)];
        }
        Ok(sign * a[(n - 1, n - 1)])
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: i128) -> Result<()> {
        for j in 0..self.cols {
            let delta = self[(src, j)].checked_mul(factor).ok_or(Error::Overflow)?;
            self[(dst, j)] = self[(dst, j)].checked_add(delta).ok_or(Error::Overflow)?;
        }
        Ok(())
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: i128) -> Result<()> {
        for i in 0..self.rows {
            let delta = self[(i, src)].checked_mul(factor).ok_or(Error::Overflow)?;
            self[(i, dst)] = self[(i, dst)].checked_add(delta).ok_or(Error::Overflow)?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = i128;

    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of a Smith normal form computation: `u * m * v == d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Non-negative diagonal entries d_1 | d_2 | ..., length `min(rows, cols)`.
    pub diagonal: Vec<i128>,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub d: IntegerMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&x| x != 0).count()
    }

    /// Recomputes `u * m * v` and compares it with `d`, and checks the
    /// divisibility chain and unimodularity of both transforms.
    pub fn verify(&self, m: &IntegerMatrix) -> Result<bool> {
        let prod = self.u.checked_mul(m)?.checked_mul(&self.v)?;
        if prod != self.d {
            return Ok(false);
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                let expected = if i == j { self.diagonal[i] } else { 0 };
                if self.d[(i, j)] != expected {
                    return Ok(false);
                }
            }
        }
        for w in self.diagonal.windows(2) {
            let (a, b) = (w[0], w[1]);
            let divides = if a == 0 { b == 0 } else { b % a == 0 };
            if !divides {
                return Ok(false);
            }
        }
        Ok(self.u.determinant()?.abs() == 1 && self.v.determinant()?.abs() == 1)
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> Result<SmithForm> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t, |_, _| true) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let pivot = a[(t, t)];
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)] != 0 {
                    let q = a[(i, t)] / pivot;
                    a.add_row_multiple(i, t, -q)?;
                    u.add_row_multiple(i, t, -q)?;
                    clean &= a[(i, t)] == 0;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)] != 0 {
                    let q = a[(t, j)] / pivot;
                    a.add_col_multiple(j, t, -q)?;
                    v.add_col_multiple(j, t, -q)?;
                    clean &= a[(t, j)] == 0;
                }
            }
            if !clean {
                // a remainder smaller than the pivot survives in row or column t
                let (pi, pj) = min_abs_entry(&a, t, |i, j| i == t || j == t)
                    .expect("pivot row/column is nonzero");
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| a[(i, j)] % pivot != 0);
            match offender {
                Some((i, _)) => {
                    a.add_row_multiple(t, i, 1)?;
                    u.add_row_multiple(t, i, 1)?;
                }
                None => break,
            }
        }
        if a[(t, t)] < 0 {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let diagonal = (0..rows.min(cols)).map(|i| a[(i, i)]).collect();
    Ok(SmithForm {
        diagonal,
        u,
        v,
        d: a,
    })
}

fn min_abs_entry(
    a: &IntegerMatrix,
    t: usize,
    allowed: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            if a[(i, j)] == 0 || !allowed(i, j) {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= a[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_its_own_normal_form() {
        let m = IntegerMatrix::identity(2);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal, vec![1, 1]);
        assert!(s.verify(&m).unwrap());
    }

    #[test]
    fn two_by_two_example() {
        // d1 = gcd(2,4,6,8) = 2 and d1*d2 = |det| = |16 - 24| = 8
        let m = IntegerMatrix::from_rows(&[[2, 4], [6, 8]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal, vec![2, 4]);
        assert!(s.verify(&m).unwrap());
    }

    #[test]
    fn zero_matrix() {
        let m = IntegerMatrix::zeros(2, 3);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal, vec![0, 0]);
        assert!(s.verify(&m).unwrap());
    }

    #[test]
    fn empty_shapes() {
        for (r, c) in [(0, 0), (0, 3), (2, 0)] {
            let m = IntegerMatrix::zeros(r, c);
            let s = smith_normal_form(&m).unwrap();
            assert!(s.diagonal.is_empty());
            assert!(s.verify(&m).unwrap());
        }
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(2, 3) is diagonal but not in normal form: expect diag(1, 6)
        let m = IntegerMatrix::from_rows(&[[2, 0], [0, 3]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.diagonal, vec![1, 6]);
        assert!(s.verify(&m).unwrap());
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntegerMatrix::from_rows(&[[0, 2, 1], [3, 1, 4], [1, 5, 9]]);
        // expansion along the first row: -2*(27-4) + 1*(15-1) = -32
        assert_eq!(m.determinant().unwrap(), -32);
    }
}
