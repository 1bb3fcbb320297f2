//! Smith normal form with explicit unimodular transforms.
//!
//! Pivoting always picks the nonzero entry of least absolute value in the
//! active block; entries are reduced by Euclidean division against it.

use super::matrix::Matrix;
use crate::scalar::{IntScalar, Overflow};

/// `u * m * v = d`, `d` diagonal with `d[0] | d[1] | ...`, nonnegative,
/// zeros last. `u_inv` is the inverse of `u`.
#[derive(Clone, Debug)]
pub struct Snf<T> {
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub rank: usize,
}

impl<T: IntScalar> Snf<T> {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<T> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Work<T> {
    a: Matrix<T>,
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
}

impl<T: IntScalar> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row[dst] -= q row[src]
    fn row_op(&mut self, dst: usize, src: usize, q: &T) -> Result<(), Overflow> {
        self.a.sub_row_multiple(dst, src, q)?;
        self.u.sub_row_multiple(dst, src, q)?;
        // inverse op on the right of u_inv: col[src] += q col[dst]
        let nq = -q.clone();
        self.u_inv.sub_col_multiple(src, dst, &nq)
    }

    fn col_op(&mut self, dst: usize, src: usize, q: &T) -> Result<(), Overflow> {
        self.a.sub_col_multiple(dst, src, q)?;
        self.v.sub_col_multiple(dst, src, q)
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn min_in_block(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.a.rows() {
            for j in k..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
                if x.abs().is_one() {
                    return best;
                }
            }
        }
        best
    }
}

/// Smith normal form of `m`.
pub fn snf<T: IntScalar>(m: &Matrix<T>) -> Result<Snf<T>, Overflow> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.clone(),
        u: Matrix::identity(rows),
        u_inv: Matrix::identity(rows),
        v: Matrix::identity(cols),
    };
    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pi, pj)) = w.min_in_block(k) else {
            break;
        };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if w.a[(i, k)].is_zero() {
                    continue;
                }
                let q = w.a[(i, k)].div_floor(&w.a[(k, k)]);
                w.row_op(i, k, &q)?;
                if !w.a[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if w.a[(k, j)].is_zero() {
                    continue;
                }
                let q = w.a[(k, j)].div_floor(&w.a[(k, k)]);
                w.col_op(j, k, &q)?;
                if !w.a[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder in row/column k to the pivot
                let mut best = (k, k);
                for i in k + 1..rows {
                    let x = &w.a[(i, k)];
                    if !x.is_zero() && x.abs() < w.a[best].abs() {
                        best = (i, k);
                    }
                }
                for j in k + 1..cols {
                    let x = &w.a[(k, j)];
                    if !x.is_zero() && x.abs() < w.a[best].abs() {
                        best = (k, j);
                    }
                }
                if best.0 != k {
                    w.swap_rows(k, best.0);
                } else if best.1 != k {
                    w.swap_cols(k, best.1);
                }
                continue;
            }
            // divisibility of the remaining block
            let p = w.a[(k, k)].clone();
            let bad = (k + 1..rows)
                .flat_map(|i| (k + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[(i, j)].is_multiple_of(&p));
            match bad {
                Some((i, _)) => {
                    // row[k] += row[i]
                    w.row_op(k, i, &-T::one())?;
                }
                None => break,
            }
        }
        if w.a[(k, k)].is_negative() {
            w.negate_row(k);
        }
        k += 1;
    }
    Ok(Snf {
        u: w.u,
        u_inv: w.u_inv,
        d: w.a,
        v: w.v,
        rank: k,
    })
}

/// Invariant factors of the cokernel `Z^rows / column-span(m)`: entries of
/// the Smith diagonal other than 1, followed by one 0 per missing rank.
pub fn cokernel_invariants<T: IntScalar>(s: &Snf<T>) -> Vec<T> {
    let rows = s.d.rows();
    let mut out = Vec::new();
    for i in 0..rows {
        let di = if i < s.d.cols() { s.d[(i, i)].clone() } else { T::zero() };
        if !di.is_one() {
            out.push(di);
        }
    }
    out
}

#[cfg(test)]
pub(crate) fn is_diagonal<T: IntScalar>(m: &Matrix<T>) -> bool {
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| i == j || m[(i, j)].is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn check(m: &Matrix<i64>) -> Snf<i64> {
        let s = snf(m).unwrap();
        assert_eq!(s.u.try_mul(m).unwrap().try_mul(&s.v).unwrap(), s.d);
        assert!(is_diagonal(&s.d));
        assert_eq!(s.u.try_mul(&s.u_inv).unwrap(), Matrix::identity(m.rows()));
        assert_eq!(s.u.try_det().unwrap().abs(), 1);
        assert_eq!(s.v.try_det().unwrap().abs(), 1);
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0);
            } else {
                assert!(w[0] >= 0);
            }
        }
        s
    }

    #[test]
    fn two_by_two() {
        let s = check(&Matrix::from_i64_rows(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), vec![2, 4]);
    }

    #[test]
    fn identity_and_zero_are_fixed() {
        let s = check(&Matrix::identity(3));
        assert_eq!(s.d, Matrix::identity(3));
        let s = check(&Matrix::zeros(2, 2));
        assert!(s.d.is_zero());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn rectangular_and_bigint() {
        let m = Matrix::from_i64_rows(&[&[4, 6, 2], &[6, 9, 3]]);
        let s = check(&m);
        assert_eq!(s.diagonal(), vec![1, 0]);
        let mb: Matrix<BigInt> = m.try_convert().unwrap();
        let sb = snf(&mb).unwrap();
        assert_eq!(sb.diagonal(), vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn needs_divisibility_fix() {
        let s = check(&Matrix::from_i64_rows(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![1, 6]);
    }
}
