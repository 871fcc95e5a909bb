//! Exact linear algebra over the rationals.

use std::collections::{BTreeSet, HashMap};

use crate::ring::{Coeff, ParamPoly, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<R> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<R>,
}

impl<R: Coeff> Matrix<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<R>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &R {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<R> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> Vec<R> {
        (0..self.cols).map(|c| self.get(r, c).clone()).collect()
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                m.set(a, b, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn map<S: Coeff, F: Fn(&R) -> S>(&self, f: F) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Entries as strings, row-major.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
            .collect()
    }
}

/// Reduced row echelon data of a rational matrix.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rank: usize,
    /// Pivot column of each pivot row.
    pub pivots: Vec<usize>,
    pub reduced: Matrix<Scalar>,
}

pub fn echelon(m: &Matrix<Scalar>) -> Echelon {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for c in 0..a.cols {
                let t = a.get(p, c).clone();
                a.set(p, c, a.get(row, c).clone());
                a.set(row, c, t);
            }
        }
        let inv = a.get(row, col).recip();
        for c in col..a.cols {
            let v = a.get(row, c) * &inv;
            a.set(row, c, v);
        }
        for r in 0..a.rows {
            if r == row || a.get(r, col).is_zero() {
                continue;
            }
            let f = a.get(r, col).clone();
            for c in col..a.cols {
                let x = a.get(row, c);
                if x.is_zero() {
                    continue;
                }
                let v = a.get(r, c) - &(&f * x);
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon { rank: pivots.len(), pivots, reduced: a }
}

/// Exact rank by fraction-free (Bareiss) elimination on the row-scaled
/// integer matrix.
pub fn rank(m: &Matrix<Scalar>) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let row: Vec<BigRational> = m.row(r).iter().map(Scalar::to_big).collect();
            let l = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .filter(|row: &Vec<BigInt>| row.iter().any(|x| !x.is_zero()))
        .collect();
    let (rows, cols) = (a.len(), m.cols);
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let (top, rest) = a.split_at_mut(row + 1);
        let piv = &top[row];
        for r in rest.iter_mut() {
            let f = std::mem::take(&mut r[col]);
            for c in col + 1..cols {
                let v = &r[c] * &piv[col] - &f * &piv[c];
                r[c] = v / &prev;
            }
        }
        prev = top[row][col].clone();
        row += 1;
    }
    row
}

/// Whether `v` lies in the column span of `m`.
pub fn in_column_span(m: &Matrix<Scalar>, v: &[Scalar]) -> bool {
    let mut cols: Vec<Vec<Scalar>> = (0..m.cols).map(|c| m.column(c)).collect();
    let base = rank(m);
    cols.push(v.to_vec());
    rank(&Matrix::from_columns(m.rows, &cols)) == base
}

/// Unit vectors `e_r` (by index) completing the column span of `m` to the
/// whole space, chosen greedily in index order.
pub fn quotient_witness(m: &Matrix<Scalar>) -> Vec<usize> {
    let mut cols: Vec<Vec<Scalar>> = (0..m.cols).map(|c| m.column(c)).collect();
    let mut r = rank(m);
    let mut out = Vec::new();
    for e in 0..m.rows {
        if r == m.rows {
            break;
        }
        let mut unit = vec![Scalar::zero(); m.rows];
        unit[e] = Scalar::one();
        cols.push(unit);
        let r2 = rank(&Matrix::from_columns(m.rows, &cols));
        if r2 > r {
            r = r2;
            out.push(e);
        } else {
            cols.pop();
        }
    }
    out
}

/// Row and column indices of a nonsingular maximal minor.
pub fn maximal_minor(m: &Matrix<Scalar>) -> (Vec<usize>, Vec<usize>) {
    let cols = echelon(m).pivots;
    let sub = m.select(&(0..m.rows).collect::<Vec<_>>(), &cols);
    let t = Matrix::from_columns(sub.cols, &(0..sub.rows).map(|r| sub.row(r)).collect::<Vec<_>>());
    let rows = echelon(&t).pivots;
    (rows, cols)
}

/// Determinant over any commutative coefficient ring by Laplace expansion
/// memoized on column subsets (`O(2^n n)` ring operations).
pub fn determinant<R: Coeff>(m: &Matrix<R>) -> R {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return R::one();
    }
    assert!(n <= 20, "determinant too large for subset expansion");
    // level t holds det(rows 0..t, cols S) for |S| = t
    let mut level: HashMap<u32, R> = HashMap::new();
    level.insert(0, R::one());
    for t in 0..n {
        let mut next: HashMap<u32, R> = HashMap::new();
        for (&mask, d) in &level {
            if d.is_zero() {
                continue;
            }
            for c in 0..n {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let x = m.get(t, c);
                if x.is_zero() {
                    continue;
                }
                // sign: number of chosen columns to the right of c
                let above = (mask >> (c + 1)).count_ones();
                let term = d.mul(x);
                let term = if above % 2 == 1 { term.neg() } else { term };
                let e = next.entry(mask | (1 << c)).or_insert_with(R::zero);
                *e = e.add(&term);
            }
        }
        level = next;
    }
    level.remove(&((1u32 << n) - 1)).unwrap_or_else(R::zero)
}

pub fn specialize(m: &Matrix<ParamPoly>, point: &[Scalar]) -> Matrix<Scalar> {
    m.map(|x| x.eval(point))
}

/// Sparse linear system `A x = b` over the rationals.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    cols: usize,
    rows: Vec<Vec<(usize, Scalar)>>,
    rhs: Vec<Scalar>,
}

impl SparseSystem {
    pub fn new(cols: usize) -> Self {
        SparseSystem { cols, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Add one equation; entries may repeat a column and are summed.
    pub fn push(&mut self, entries: Vec<(usize, Scalar)>, rhs: Scalar) {
        let mut acc: std::collections::BTreeMap<usize, Scalar> = Default::default();
        for (c, v) in entries {
            assert!(c < self.cols);
            let e = acc.entry(c).or_insert_with(Scalar::zero);
            *e = &*e + &v;
        }
        self.rows.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        self.rhs.push(rhs);
    }

    /// Rank of the coefficient matrix and whether the system is solvable.
    pub fn solve_status(&self) -> (usize, bool) {
        // the right-hand side rides along as column `cols`
        let rhs_col = self.cols;
        let mut rows: Vec<Option<Vec<(usize, Scalar)>>> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, b)| {
                let mut r = r.clone();
                if !b.is_zero() {
                    r.push((rhs_col, b.clone()));
                }
                Some(r)
            })
            .collect();
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.cols];
        for (i, r) in rows.iter().enumerate() {
            for (c, _) in r.as_ref().unwrap() {
                if *c < rhs_col {
                    col_rows[*c].insert(i);
                }
            }
        }
        let mut rank = 0;
        let mut consistent = true;
        loop {
            // shortest remaining row
            let mut best: Option<(usize, usize)> = None;
            for (i, r) in rows.iter().enumerate() {
                let Some(r) = r else { continue };
                let len = r.iter().filter(|(c, _)| *c < rhs_col).count();
                if len == 0 {
                    continue;
                }
                if best.map_or(true, |(_, l)| len < l) {
                    best = Some((i, len));
                    if len == 1 {
                        break;
                    }
                }
            }
            let Some((p, _)) = best else { break };
            let prow = rows[p].take().unwrap();
            let (pc, pv) = prow
                .iter()
                .filter(|(c, _)| *c < rhs_col)
                .min_by_key(|(c, _)| (col_rows[*c].len(), *c))
                .cloned()
                .unwrap();
            for (c, _) in &prow {
                if *c < rhs_col {
                    col_rows[*c].remove(&p);
                }
            }
            let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
            for t in targets {
                let row = rows[t].take().unwrap();
                let f = &row.iter().find(|(c, _)| *c == pc).unwrap().1 / &pv;
                let merged = axpy(&row, &prow, &f);
                for (c, _) in &row {
                    if *c < rhs_col {
                        col_rows[*c].remove(&t);
                    }
                }
                for (c, _) in &merged {
                    if *c < rhs_col {
                        col_rows[*c].insert(t);
                    }
                }
                rows[t] = Some(merged);
            }
            rank += 1;
        }
        for r in rows.iter().flatten() {
            if r.iter().any(|(c, v)| *c == rhs_col && !v.is_zero()) {
                consistent = false;
            }
        }
        (rank, consistent)
    }

    pub fn is_solvable(&self) -> bool {
        self.solve_status().1
    }
}

/// `row - f * piv`, both sorted by column.
fn axpy(row: &[(usize, Scalar)], piv: &[(usize, Scalar)], f: &Scalar) -> Vec<(usize, Scalar)> {
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut a, mut b) = (0, 0);
    while a < row.len() || b < piv.len() {
        let ca = row.get(a).map(|x| x.0).unwrap_or(usize::MAX);
        let cb = piv.get(b).map(|x| x.0).unwrap_or(usize::MAX);
        if ca < cb {
            out.push(row[a].clone());
            a += 1;
        } else if cb < ca {
            out.push((cb, -&(f * &piv[b].1)));
            b += 1;
        } else {
            let v = &row[a].1 - &(f * &piv[b].1);
            if !v.is_zero() {
                out.push((ca, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Scalar> {
        let cols: Vec<Vec<Scalar>> = (0..rows[0].len()).map(|c| rows.iter().map(|r| q(r[c])).collect()).collect();
        Matrix::from_columns(rows.len(), &cols)
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&mat(&[&[1, 2, 3], &[0, 1, 4], &[1, 3, 7]])), 2);
        assert_eq!(rank(&Matrix::<Scalar>::zeros(3, 0)), 0);
    }

    #[test]
    fn span_and_witness() {
        let m = mat(&[&[1], &[1], &[0]]);
        assert!(in_column_span(&m, &[q(2), q(2), q(0)]));
        assert!(!in_column_span(&m, &[q(1), q(0), q(0)]));
        assert_eq!(quotient_witness(&m), vec![0, 2]);
    }

    #[test]
    fn determinants() {
        let m = mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        assert_eq!(determinant(&m), q(2 * (3 - 2) + (1 - 3)));
        let p = |i| ParamPoly::var(i);
        let sym = Matrix::from_columns(2, &[vec![p(0), p(1)], vec![p(2), p(3)]]);
        let d = determinant(&sym);
        assert_eq!(d.to_string(), "p0*p3 - p1*p2");
    }

    #[test]
    fn minors() {
        let m = mat(&[&[0, 0], &[1, 2], &[2, 4], &[0, 1]]);
        let (r, c) = maximal_minor(&m);
        assert_eq!(c.len(), 2);
        assert!(!determinant(&m.select(&r, &c)).is_zero());
    }

    #[test]
    fn sparse_consistency() {
        let mut s = SparseSystem::new(3);
        s.push(vec![(0, q(1)), (1, q(1))], q(2));
        s.push(vec![(1, q(1)), (2, q(1))], q(3));
        s.push(vec![(0, q(1)), (2, q(-1))], q(-1));
        assert_eq!(s.solve_status(), (2, true));
        s.push(vec![(0, q(1)), (2, q(-1))], q(0));
        assert!(!s.is_solvable());
        let mut t = SparseSystem::new(2);
        t.push(vec![], q(1));
        assert!(!t.is_solvable());
    }
}
