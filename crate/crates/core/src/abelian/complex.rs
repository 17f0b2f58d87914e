use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::group::FgAbGroup;
use super::matrix::IntMatrix;
use super::reduce::Homology;
use crate::error::{Error, Result};

/// Compressed sparse row matrix with small integer entries.
///
/// Rows are sorted by column and carry no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    vals: Vec<i64>,
}

pub(crate) fn mod_order(v: i128, order: i64) -> i128 {
    if order == 0 {
        v
    } else {
        v.rem_euclid(order as i128)
    }
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: vec![],
            vals: vec![],
        }
    }

    /// Builds from per-row entry lists; duplicates are summed and each row is
    /// reduced modulo `row_orders[r]` (0 for no reduction).
    pub fn from_row_entries(
        cols: usize,
        rows: Vec<Vec<(u32, i64)>>,
        row_orders: &[i64],
    ) -> Result<Self> {
        let mut m = SparseMatrix {
            rows: rows.len(),
            cols,
            row_ptr: Vec::with_capacity(rows.len() + 1),
            col_idx: Vec::new(),
            vals: Vec::new(),
        };
        m.row_ptr.push(0);
        for (r, mut row) in rows.into_iter().enumerate() {
            row.sort_unstable_by_key(|e| e.0);
            let order = row_orders.get(r).copied().unwrap_or(0);
            let mut k = 0;
            while k < row.len() {
                let c = row[k].0;
                if c as usize >= cols {
                    return Err(Error::Invalid(format!("column {c} out of range {cols}")));
                }
                let mut acc: i128 = 0;
                while k < row.len() && row[k].0 == c {
                    acc += row[k].1 as i128;
                    k += 1;
                }
                let acc = mod_order(acc, order);
                if acc != 0 {
                    let v = i64::try_from(acc)
                        .map_err(|_| Error::Invalid("matrix entry exceeds 64 bits".into()))?;
                    m.col_idx.push(c);
                    m.vals.push(v);
                }
            }
            m.row_ptr.push(m.col_idx.len());
        }
        Ok(m)
    }

    pub fn from_dense(a: &IntMatrix, row_orders: &[i64]) -> Result<Self> {
        let mut rows = Vec::with_capacity(a.rows());
        for i in 0..a.rows() {
            let mut row = Vec::new();
            for j in 0..a.cols() {
                let x = a.get(i, j);
                if !x.is_zero() {
                    let v = x
                        .to_i64()
                        .ok_or_else(|| Error::Invalid("matrix entry exceeds 64 bits".into()))?;
                    row.push((j as u32, v));
                }
            }
            rows.push(row);
        }
        Self::from_row_entries(a.cols(), rows, row_orders)
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                m.set(r, c as usize, BigInt::from(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (u32, i64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.col_idx[a..b].iter().copied().zip(self.vals[a..b].iter().copied())
    }

    pub fn row_vec(&self, r: usize) -> Vec<(u32, i64)> {
        self.row(r).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// `self · x` for a dense vector, without reduction.
    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for (c, v) in self.row(r) {
                    let xc = &x[c as usize];
                    if !xc.is_zero() {
                        acc += xc * v;
                    }
                }
                acc
            })
            .collect()
    }

    /// True when `self · other` vanishes modulo `row_orders` (orders of self's rows).
    pub fn product_vanishes(&self, other: &SparseMatrix, row_orders: &[i64]) -> bool {
        assert_eq!(self.cols, other.rows);
        let mut acc: Vec<i128> = vec![0; other.cols];
        let mut touched: Vec<u32> = Vec::new();
        for r in 0..self.rows {
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k as usize) {
                    if acc[c as usize] == 0 {
                        touched.push(c);
                    }
                    acc[c as usize] += a as i128 * b as i128;
                }
            }
            let order = row_orders.get(r).copied().unwrap_or(0);
            let mut ok = true;
            for &c in &touched {
                if mod_order(acc[c as usize], order) != 0 {
                    ok = false;
                }
                acc[c as usize] = 0;
            }
            touched.clear();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// A bounded cochain complex `C^0 → C^1 → … → C^N` of finitely generated
/// abelian groups whose torsion generators fit in 64 bits.
///
/// Each term is stored by the orders of its generators (0 for `Z`); the
/// generators need not be in normal form, only pairwise independent, so large
/// products `M^k` keep a simple layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplex {
    orders: Vec<Vec<i64>>,
    diffs: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// `orders[i]` lists generator orders of `C^i`; `diffs[i]` is `d^i: C^i → C^{i+1}`
    /// as a `|C^{i+1}| × |C^i|` matrix. Entries are reduced modulo target orders.
    pub fn new(orders: Vec<Vec<i64>>, diffs: Vec<SparseMatrix>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::Invalid("complex needs at least one term".into()));
        }
        if diffs.len() + 1 != orders.len() {
            return Err(Error::Invalid(format!(
                "{} terms need {} differentials, got {}",
                orders.len(),
                orders.len() - 1,
                diffs.len()
            )));
        }
        if orders.iter().flatten().any(|&o| o < 0 || o == 1) {
            return Err(Error::Invalid("generator orders must be 0 or at least 2".into()));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.cols != orders[i].len() || d.rows != orders[i + 1].len() {
                return Err(Error::Invalid(format!("differential {i} has the wrong shape")));
            }
            // well-definedness: a generator of order o must map to o-torsion
            for r in 0..d.rows {
                let to = orders[i + 1][r];
                for (c, v) in d.row(r) {
                    let so = orders[i][c as usize];
                    let img = so as i128 * v as i128;
                    let bad = match (so, to) {
                        (0, _) => false,
                        (_, 0) => v != 0,
                        _ => img.rem_euclid(to as i128) != 0,
                    };
                    if bad {
                        return Err(Error::IllDefinedMap(format!(
                            "differential {i} does not respect generator orders"
                        )));
                    }
                }
            }
        }
        let diffs = diffs
            .into_iter()
            .enumerate()
            .map(|(i, d)| {
                let rows = (0..d.rows).map(|r| d.row_vec(r)).collect();
                SparseMatrix::from_row_entries(d.cols, rows, &orders[i + 1])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChainComplex { orders, diffs })
    }

    /// Builds a complex from groups in normal form and dense differentials.
    pub fn from_groups(groups: &[FgAbGroup], diffs: &[IntMatrix]) -> Result<Self> {
        let orders: Vec<Vec<i64>> = groups
            .iter()
            .map(|g| {
                g.generator_orders()
                    .iter()
                    .map(|o| {
                        o.to_i64()
                            .ok_or_else(|| Error::Invalid("generator order exceeds 64 bits".into()))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let sparse = diffs
            .iter()
            .enumerate()
            .map(|(i, d)| SparseMatrix::from_dense(d, &orders.get(i + 1).cloned().unwrap_or_default()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders, sparse)
    }

    /// Same as [`ChainComplex::new`] without validation, for trusted builders.
    pub(crate) fn new_unchecked(orders: Vec<Vec<i64>>, diffs: Vec<SparseMatrix>) -> Self {
        ChainComplex { orders, diffs }
    }

    /// Highest degree `N`.
    pub fn top_degree(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn orders(&self, i: usize) -> &[i64] {
        &self.orders[i]
    }

    /// The term `C^i` in normal form.
    pub fn group(&self, i: usize) -> FgAbGroup {
        let orders: Vec<BigInt> = self.orders[i].iter().map(|&o| BigInt::from(o)).collect();
        FgAbGroup::from_cyclic_orders(&orders)
    }

    pub fn differential(&self, i: usize) -> &SparseMatrix {
        &self.diffs[i]
    }

    pub fn differentials(&self) -> &[SparseMatrix] {
        &self.diffs
    }

    /// Checks `d^i ∘ d^{i-1} = 0`; the outermost positions are trivially fine.
    pub fn check_at(&self, i: usize) -> Result<()> {
        if i == 0 || i >= self.diffs.len() {
            return Ok(());
        }
        if self.diffs[i].product_vanishes(&self.diffs[i - 1], &self.orders[i + 1]) {
            Ok(())
        } else {
            Err(Error::NotAComplex(i))
        }
    }

    pub fn check(&self) -> Result<()> {
        (1..self.diffs.len()).try_for_each(|i| self.check_at(i))
    }

    /// `ker d^i / im d^{i-1}` with generator lifts and a class map.
    pub fn homology_data(&self, i: usize) -> Result<Homology> {
        if i > self.top_degree() {
            return Err(Error::Invalid(format!("degree {i} above top degree {}", self.top_degree())));
        }
        self.check_at(i)?;
        Homology::compute(self, i)
    }

    pub fn homology_at(&self, i: usize) -> Result<FgAbGroup> {
        Ok(self.homology_data(i)?.group().clone())
    }
}
