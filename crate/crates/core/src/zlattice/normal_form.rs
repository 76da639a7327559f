use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite normal form `U·M = H`.
///
/// Nonzero rows come first; each pivot is positive and the entries above
/// it lie in `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Re-checks every postcondition against the input `m`.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let shape_ok = self.u.rows() == m.rows() && self.h.rows() == m.rows() && self.h.cols() == m.cols();
        if !shape_ok || !self.u.is_unimodular() || self.u.mul(m).ok().as_ref() != Some(&self.h) {
            return false;
        }
        let mut last: Option<usize> = None;
        for (r, &c) in self.pivots.iter().enumerate() {
            if last.is_some_and(|l| c <= l) || !self.h[(r, c)].is_positive() {
                return false;
            }
            if (0..c).any(|j| !self.h[(r, j)].is_zero()) {
                return false;
            }
            if (0..r).any(|i| self.h[(i, c)].is_negative() || self.h[(i, c)] >= self.h[(r, c)]) {
                return false;
            }
            if (r + 1..self.h.rows()).any(|i| !self.h[(i, c)].is_zero()) {
                return false;
            }
            last = Some(c);
        }
        (self.rank()..self.h.rows()).all(|i| self.h.row(i).iter().all(Zero::is_zero))
    }
}

pub fn hnf(m: &IntMatrix) -> Hnf {
    let rows = m.rows();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows).filter(|&i| !h[(i, c)].is_zero()).min_by_key(|&i| h[(i, c)].abs());
            let Some(best) = best else { break };
            h.swap_rows(r, best);
            u.swap_rows(r, best);
            let mut clean = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                clean &= h[(i, c)].is_zero();
            }
            if clean {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    let out = Hnf { h, u, pivots };
    #[cfg(test)]
    assert!(out.verify(m), "hnf postcondition failed for {m}");
    out
}

/// Smith normal form `U·M·V = D`, `d_1 | d_2 | ...`, all `d_i >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// Diagonal entries `d_1, ..., d_min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Nonzero elementary divisors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn verify(&self, m: &IntMatrix) -> bool {
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        let product = self.u.mul(m).and_then(|um| um.mul(&self.v));
        if product.ok().as_ref() != Some(&self.d) {
            return false;
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !self.d[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        if diag.iter().any(|x| x.is_negative()) {
            return false;
        }
        // d_i | d_{i+1}, with zeros only at the tail.
        diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) })
    }
}

pub fn snf(m: &IntMatrix) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[(i, j)].is_zero() && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(d, u, v, m);
            };
            d.swap_rows(t, bi);
            u.swap_rows(t, bi);
            d.swap_cols(t, bj);
            v.swap_cols(t, bj);

            let mut clean = true;
            for i in t + 1..rows {
                if !d[(i, t)].is_zero() {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    clean &= d[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !d[(t, j)].is_zero() {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    clean &= d[(t, j)].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(d, u, v, m)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix, _m: &IntMatrix) -> Snf {
    let out = Snf { d, u, v };
    #[cfg(test)]
    assert!(out.verify(_m), "snf postcondition failed for {_m}");
    out
}
