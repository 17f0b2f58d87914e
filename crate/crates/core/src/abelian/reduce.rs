//! Homology of a complex at one degree, computed after cancelling unit
//! entries of the two adjacent differentials.
//!
//! Cancelling an invertible entry `u` of `b: C^i → C^{i+1}` between
//! generators `x` and `y` of equal order gives a homotopy equivalent complex
//! without `x` and `y` (Gaussian elimination of chain complexes). Each step is
//! recorded so cocycles can be moved between the original and reduced
//! complexes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::complex::{mod_order, ChainComplex};
use super::group::FgAbGroup;
use super::lattice::{Lattice, Subquotient};
use super::matrix::IntMatrix;
use crate::arith;
use crate::error::{Error, Result};

// Entries of integer (non-torsion) rows are kept below this bound so that all
// intermediate products fit in i128.
const ENTRY_BOUND: i128 = 1 << 40;

type Row = Vec<(u32, i64)>;

/// Mutable sparse matrix used during elimination.
struct Work {
    rows: Vec<Row>,
    row_orders: Vec<i64>,
    col_orders: Vec<i64>,
    // may hold stale row indices; entries are checked on use
    col_support: Vec<Vec<u32>>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
}

fn entry(row: &Row, c: u32) -> i64 {
    match row.binary_search_by_key(&c, |e| e.0) {
        Ok(k) => row[k].1,
        Err(_) => 0,
    }
}

/// Inverse of a unit modulo `order` (0 meaning Z).
fn unit_inverse(u: i64, order: i64) -> Option<i64> {
    if order == 0 {
        return (u == 1 || u == -1).then_some(u);
    }
    let (u, o) = (u.rem_euclid(order), order);
    let e = u.extended_gcd(&o);
    (e.gcd == 1).then(|| e.x.rem_euclid(o))
}

impl Work {
    fn new(rows: Vec<Row>, row_orders: Vec<i64>, col_orders: Vec<i64>) -> Self {
        let mut col_support = vec![Vec::new(); col_orders.len()];
        for (r, row) in rows.iter().enumerate() {
            for &(c, _) in row {
                col_support[c as usize].push(r as u32);
            }
        }
        Work {
            row_alive: vec![true; rows.len()],
            col_alive: vec![true; col_orders.len()],
            rows,
            row_orders,
            col_orders,
            col_support,
        }
    }

    fn kill_col(&mut self, c: u32) {
        self.col_alive[c as usize] = false;
        for r in std::mem::take(&mut self.col_support[c as usize]) {
            let row = &mut self.rows[r as usize];
            if let Ok(k) = row.binary_search_by_key(&c, |e| e.0) {
                row.remove(k);
            }
        }
    }

    fn kill_row(&mut self, r: u32) {
        self.row_alive[r as usize] = false;
        self.rows[r as usize] = Vec::new();
    }

    /// Live entries of column `c` as (row, value), excluding `skip`.
    fn column(&self, c: u32, skip: u32) -> Vec<(u32, i64)> {
        let mut out: Vec<(u32, i64)> = self.col_support[c as usize]
            .iter()
            .filter(|&&r| r != skip && self.row_alive[r as usize])
            .filter_map(|&r| {
                let v = entry(&self.rows[r as usize], c);
                (v != 0).then_some((r, v))
            })
            .collect();
        out.sort_unstable_by_key(|e| e.0);
        out.dedup_by_key(|e| e.0);
        out
    }

    /// `row_r - f · pivot_row` reduced modulo the order of `r`; `None` on overflow.
    fn combine(&self, r: u32, f: i128, pivot_row: &Row) -> Option<Row> {
        let order = self.row_orders[r as usize];
        let row = &self.rows[r as usize];
        let mut out = Vec::with_capacity(row.len() + pivot_row.len());
        let (mut a, mut b) = (0, 0);
        let f = mod_order(f, order);
        loop {
            let (c, v) = match (row.get(a), pivot_row.get(b)) {
                (None, None) => break,
                (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                    a += 1;
                    b += 1;
                    (ca, va as i128 - f * vb as i128)
                }
                (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                    a += 1;
                    (ca, va as i128)
                }
                (Some(&(ca, va)), None) => {
                    a += 1;
                    (ca, va as i128)
                }
                (_, Some(&(cb, vb))) => {
                    b += 1;
                    (cb, -f * vb as i128)
                }
            };
            let v = mod_order(v, order);
            if v != 0 {
                if order == 0 && v.abs() > ENTRY_BOUND {
                    return None;
                }
                out.push((c, v as i64));
            }
        }
        Some(out)
    }

    /// Eliminates the pivot (row y, column x) if possible. Returns the pivot
    /// column as it stood (other rows) and the pivot row (other columns).
    fn eliminate(&mut self, y: u32, x: u32, u_inv: i64) -> Option<(Row, Row)> {
        let pivot_row: Row = self.rows[y as usize].iter().copied().filter(|e| e.0 != x).collect();
        let column = self.column(x, y);
        let mut updates = Vec::with_capacity(column.len());
        for &(r, g) in &column {
            let f = g as i128 * u_inv as i128;
            let new_row = self.combine(r, f, &pivot_row)?;
            updates.push((r, new_row));
        }
        for (r, new_row) in updates {
            for &(c, _) in &new_row {
                if entry(&self.rows[r as usize], c) == 0 {
                    self.col_support[c as usize].push(r);
                }
            }
            self.rows[r as usize] = new_row;
        }
        self.kill_row(y);
        self.kill_col(x);
        Some((column, pivot_row))
    }

    /// Repeatedly cancels unit entries. `on_pivot(y, x, u_inv, column, row)`
    /// observes every accepted step.
    fn reduce(&mut self, mut on_pivot: impl FnMut(u32, u32, i64, Row, Row)) {
        loop {
            let mut progress = false;
            for y in 0..self.rows.len() as u32 {
                if !self.row_alive[y as usize] || self.rows[y as usize].is_empty() {
                    continue;
                }
                let order = self.row_orders[y as usize];
                // cheapest unit entry in the row
                let mut best: Option<(u32, i64, usize)> = None;
                for &(c, v) in &self.rows[y as usize] {
                    if self.col_orders[c as usize] != order {
                        continue;
                    }
                    if let Some(inv) = unit_inverse(v, order) {
                        let cost = self.col_support[c as usize].len();
                        if best.map_or(true, |b| cost < b.2) {
                            best = Some((c, inv, cost));
                        }
                    }
                }
                if let Some((x, inv, _)) = best {
                    if let Some((col, row)) = self.eliminate(y, x, inv) {
                        on_pivot(y, x, inv, col, row);
                        progress = true;
                    }
                }
            }
            if !progress {
                break;
            }
        }
    }
}

#[derive(Clone, Debug)]
enum Step {
    /// Pair (x ∈ C^{i-1}, y ∈ C^i) cancelled in `d^{i-1}`; `gamma` is the
    /// rest of column x (rows in C^i).
    Incoming { y: u32, u_inv: i64, gamma: Row },
    /// Pair (x ∈ C^i, y ∈ C^{i+1}) cancelled in `d^i`; `beta` is the rest of
    /// row y (columns in C^i).
    Outgoing { x: u32, u_inv: i64, beta: Row },
}

/// The homology group `H^i` of a complex together with the data needed to
/// move between cocycles and classes.
#[derive(Clone, Debug)]
pub struct Homology {
    degree: usize,
    orders: Vec<i64>,
    alive: Vec<u32>,
    steps: Vec<Step>,
    sq: Subquotient,
}

impl Homology {
    pub(crate) fn compute(c: &ChainComplex, i: usize) -> Result<Homology> {
        let orders = c.orders(i).to_vec();
        let n = orders.len();
        let mut steps = Vec::new();
        let mut alive_i = vec![true; n];

        // d^{i-1}: rows are C^i, columns C^{i-1}
        let mut incoming_cols: Vec<(u32, Row)> = Vec::new();
        if i > 0 {
            let d = c.differential(i - 1);
            let rows: Vec<Row> = (0..d.rows()).map(|r| d.row_vec(r)).collect();
            let mut w = Work::new(rows, orders.clone(), c.orders(i - 1).to_vec());
            w.reduce(|y, _x, u_inv, col, _row| {
                steps.push(Step::Incoming { y, u_inv, gamma: col });
            });
            for (y, a) in alive_i.iter_mut().enumerate() {
                if !w.row_alive[y] {
                    *a = false;
                }
            }
            // remaining image generators, as columns over C^i
            let mut cols: Vec<Row> = vec![Vec::new(); w.col_orders.len()];
            for (r, row) in w.rows.iter().enumerate() {
                if !w.row_alive[r] {
                    continue;
                }
                for &(cc, v) in row {
                    if w.col_alive[cc as usize] {
                        cols[cc as usize].push((r as u32, v));
                    }
                }
            }
            incoming_cols = cols
                .into_iter()
                .enumerate()
                .filter(|(_, col)| !col.is_empty())
                .map(|(k, col)| (k as u32, col))
                .collect();
        }

        // d^i: rows are C^{i+1}, columns C^i
        let mut outgoing_rows: Vec<(i64, Row)> = Vec::new();
        if i < c.top_degree() {
            let d = c.differential(i);
            let rows: Vec<Row> = (0..d.rows()).map(|r| d.row_vec(r)).collect();
            let mut w = Work::new(rows, c.orders(i + 1).to_vec(), orders.clone());
            for (x, a) in alive_i.iter().enumerate() {
                if !a {
                    w.kill_col(x as u32);
                }
            }
            w.reduce(|_y, x, u_inv, _col, row| {
                steps.push(Step::Outgoing { x, u_inv, beta: row });
            });
            for (x, a) in alive_i.iter_mut().enumerate() {
                if !w.col_alive[x] {
                    *a = false;
                }
            }
            outgoing_rows = w
                .rows
                .into_iter()
                .enumerate()
                .filter(|(r, row)| w.row_alive[*r] && !row.is_empty())
                .map(|(r, row)| (w.row_orders[r], row))
                .collect();
        }

        let alive: Vec<u32> = (0..n as u32).filter(|&k| alive_i[k as usize]).collect();
        let mut pos = vec![u32::MAX; n];
        for (k, &g) in alive.iter().enumerate() {
            pos[g as usize] = k as u32;
        }
        let m = alive.len();

        // cycles: intersect kernels row by row
        let mut z_basis = IntMatrix::identity(m);
        for (order, row) in &outgoing_rows {
            let k = z_basis.cols();
            if k == 0 {
                break;
            }
            let mut w = vec![BigInt::zero(); k];
            for &(cc, v) in row {
                let p = pos[cc as usize];
                debug_assert!(p != u32::MAX);
                for (j, wj) in w.iter_mut().enumerate() {
                    let b = z_basis.get(p as usize, j);
                    if !b.is_zero() {
                        *wj += b * v;
                    }
                }
            }
            let ob = BigInt::from(*order);
            if w.iter().all(|x| arith::reduce(x, &ob).is_zero()) {
                continue;
            }
            let mut constraint = IntMatrix::zeros(1, k + usize::from(*order != 0));
            for (j, x) in w.into_iter().enumerate() {
                constraint.set(0, j, x);
            }
            if *order != 0 {
                constraint.set(0, k, ob);
            }
            let sol = Lattice::kernel_of(&constraint).project(k);
            z_basis = z_basis.mul(sol.basis());
        }
        let z = Lattice::span(&z_basis);

        // boundaries plus relations
        let mut b_cols: Vec<Vec<BigInt>> = Vec::new();
        for (_, col) in &incoming_cols {
            let mut v = vec![BigInt::zero(); m];
            let mut nonzero = false;
            for &(r, x) in col {
                // rows cancelled against d^i are gone from the reduced term
                let p = pos[r as usize];
                if p != u32::MAX {
                    v[p as usize] = BigInt::from(x);
                    nonzero = true;
                }
            }
            if nonzero {
                b_cols.push(v);
            }
        }
        for (k, &g) in alive.iter().enumerate() {
            let o = orders[g as usize];
            if o != 0 {
                let mut v = vec![BigInt::zero(); m];
                v[k] = BigInt::from(o);
                b_cols.push(v);
            }
        }
        let b = Lattice::span(&IntMatrix::from_columns(m, &b_cols));
        let sq = Subquotient::new(z, b).map_err(|_| Error::NotAComplex(i))?;
        Ok(Homology {
            degree: i,
            orders,
            alive,
            steps,
            sq,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn group(&self) -> &FgAbGroup {
        self.sq.group()
    }

    /// A cocycle in the original `C^i` representing canonical generator `t`.
    pub fn representative(&self, t: usize) -> Vec<BigInt> {
        let small = self.sq.lift(t);
        let mut v = vec![BigInt::zero(); self.orders.len()];
        for (k, &g) in self.alive.iter().enumerate() {
            v[g as usize] = small[k].clone();
        }
        for step in self.steps.iter().rev() {
            if let Step::Outgoing { x, u_inv, beta } = step {
                let mut acc = BigInt::zero();
                for &(c, b) in beta {
                    let vc = &v[c as usize];
                    if !vc.is_zero() {
                        acc += vc * b;
                    }
                }
                let o = BigInt::from(self.orders[*x as usize]);
                v[*x as usize] = arith::reduce(&(-acc * u_inv), &o);
            }
        }
        v
    }

    /// Class of a cocycle given in the original `C^i` coordinates.
    pub fn class_of(&self, cocycle: &[BigInt]) -> Result<Vec<BigInt>> {
        let mut v = cocycle.to_vec();
        for step in &self.steps {
            if let Step::Incoming { y, u_inv, gamma } = step {
                let vy = std::mem::take(&mut v[*y as usize]);
                if vy.is_zero() {
                    continue;
                }
                let f = vy * u_inv;
                for &(r, g) in gamma {
                    let o = BigInt::from(self.orders[r as usize]);
                    let nv = &v[r as usize] - &f * g;
                    v[r as usize] = arith::reduce(&nv, &o);
                }
            }
        }
        let small: Vec<BigInt> = self.alive.iter().map(|&g| v[g as usize].clone()).collect();
        self.sq
            .class_of(&small)
            .map_err(|_| Error::Invalid("vector is not a cocycle".into()))
    }
}

/// The map `H^i(C) → H^i(C')` induced by a chain map given on cochains of
/// degree `i`.
pub fn induced_map(
    src: &Homology,
    tgt: &Homology,
    cochain_map: impl Fn(&[BigInt]) -> Vec<BigInt>,
) -> Result<super::hom::Homomorphism> {
    let mut cols = Vec::with_capacity(src.group().ngens());
    for t in 0..src.group().ngens() {
        let z = src.representative(t);
        cols.push(tgt.class_of(&cochain_map(&z))?);
    }
    let m = IntMatrix::from_columns(tgt.group().ngens(), &cols);
    super::hom::Homomorphism::new(src.group().clone(), tgt.group().clone(), m)
}
