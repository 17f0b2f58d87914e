use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;

/// Result of a Smith normal form computation: `u * a * v == d`.
///
/// `u_inv` and `v_inv` are the inverses of `u` and `v`, tracked alongside so
/// callers never have to invert a unimodular matrix themselves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    #[serde(skip_serializing)]
    pub u_inv: IntMatrix,
    #[serde(skip_serializing)]
    pub v_inv: IntMatrix,
}

impl Smith {
    /// The nonzero diagonal entries, in order.
    pub fn nonzero_diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k)
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.nonzero_diagonal().len()
    }
}

struct Work {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn row_add(&mut self, t: usize, s: usize, f: &BigInt) {
        self.d.add_row_multiple(t, s, f);
        self.u.add_row_multiple(t, s, f);
        self.u_inv.add_col_multiple(s, t, &-f);
    }

    fn col_add(&mut self, t: usize, s: usize, f: &BigInt) {
        self.d.add_col_multiple(t, s, f);
        self.v.add_col_multiple(t, s, f);
        self.v_inv.add_row_multiple(s, t, &-f);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn row_negate(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of the smallest nonzero |entry| in the block `[k.., k..]`.
    fn smallest(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in k..self.d.rows() {
            for j in k..self.d.cols() {
                let x = self.d.get(i, j);
                if x.is_zero() {
                    continue;
                }
                let a = x.abs();
                if best.as_ref().map_or(true, |b| a < b.2) {
                    let unit = a.is_one();
                    best = Some((i, j, a));
                    if unit {
                        let b = best.unwrap();
                        return Some((b.0, b.1));
                    }
                }
            }
        }
        best.map(|b| (b.0, b.1))
    }

    fn step(&mut self, k: usize) -> bool {
        let (m, n) = (self.d.rows(), self.d.cols());
        let Some((pi, pj)) = self.smallest(k) else {
            return false;
        };
        self.row_swap(k, pi);
        self.col_swap(k, pj);
        loop {
            let mut dirty = false;
            for i in k + 1..m {
                if self.d.get(i, k).is_zero() {
                    continue;
                }
                let q = self.d.get(i, k).div_floor(self.d.get(k, k));
                self.row_add(i, k, &-q);
                if !self.d.get(i, k).is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..n {
                if self.d.get(k, j).is_zero() {
                    continue;
                }
                let q = self.d.get(k, j).div_floor(self.d.get(k, k));
                self.col_add(j, k, &-q);
                if !self.d.get(k, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder smaller than the pivot appeared; move it in
                let mut best = (k, k, self.d.get(k, k).abs());
                for i in k + 1..m {
                    let a = self.d.get(i, k).abs();
                    if !a.is_zero() && a < best.2 {
                        best = (i, k, a);
                    }
                }
                for j in k + 1..n {
                    let a = self.d.get(k, j).abs();
                    if !a.is_zero() && a < best.2 {
                        best = (k, j, a);
                    }
                }
                self.row_swap(k, best.0);
                self.col_swap(k, best.1);
                continue;
            }
            // divisibility fix: pull in a row whose entries the pivot does not divide
            let p = self.d.get(k, k).clone();
            let bad = (k + 1..m).find(|&i| {
                (k + 1..n).any(|j| !self.d.get(i, j).is_multiple_of(&p))
            });
            match bad {
                Some(i) => self.row_add(k, i, &BigInt::one()),
                None => break,
            }
        }
        if self.d.get(k, k).is_negative() {
            self.row_negate(k);
        }
        true
    }
}

/// Smith normal form `u * a * v == d` with unimodular `u`, `v` and a
/// nonnegative diagonal `d` whose nonzero entries form a divisibility chain.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    for k in 0..m.min(n) {
        if !w.step(k) {
            break;
        }
    }
    Smith {
        u: w.u,
        d: w.d,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
    }
}

/// Nonzero invariant factors of `a` without the transformation matrices.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(a).nonzero_diagonal()
}
