//! Sublattices of `Z^n` and subquotients `L/N`, used to present kernels,
//! images and homology groups together with their generator lifts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::group::FgAbGroup;
use super::matrix::IntMatrix;
use super::smith::smith_normal_form;
use crate::arith;
use crate::error::{Error, Result};

/// A sublattice `L ⊆ Z^n` with a basis and a way to compute coordinates.
///
/// For `x ∈ Z^n`, `x ∈ L` iff `annihilator · x = 0` and `(coord_rows · x)_j`
/// is divisible by `scale_j`; the quotients are the basis coordinates.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
    coord_rows: IntMatrix,
    scale: Vec<BigInt>,
    annihilator: IntMatrix,
}

impl Lattice {
    /// Lattice spanned by the columns of `gens`.
    pub fn span(gens: &IntMatrix) -> Lattice {
        let n = gens.rows();
        let s = smith_normal_form(gens);
        let d = s.nonzero_diagonal();
        let k = d.len();
        let first: Vec<usize> = (0..k).collect();
        let rest: Vec<usize> = (k..n).collect();
        let mut basis = s.u_inv.select_columns(&first);
        for (j, dj) in d.iter().enumerate() {
            for i in 0..n {
                let v = basis.get(i, j) * dj;
                basis.set(i, j, v);
            }
        }
        Lattice {
            ambient: n,
            basis,
            coord_rows: s.u.select_rows(&first),
            scale: d,
            annihilator: s.u.select_rows(&rest),
        }
    }

    /// Kernel `{x : a·x = 0}` of an integer matrix.
    pub fn kernel_of(a: &IntMatrix) -> Lattice {
        let n = a.cols();
        let s = smith_normal_form(a);
        let k = s.rank();
        let zero_part: Vec<usize> = (0..k).collect();
        let free_part: Vec<usize> = (k..n).collect();
        Lattice {
            ambient: n,
            basis: s.v.select_columns(&free_part),
            coord_rows: s.v_inv.select_rows(&free_part),
            scale: vec![BigInt::one(); n - k],
            annihilator: s.v_inv.select_rows(&zero_part),
        }
    }

    /// Image of the lattice under the projection onto the first `m` coordinates.
    pub fn project(&self, m: usize) -> Lattice {
        let rows: Vec<usize> = (0..m).collect();
        Lattice::span(&self.basis.select_rows(&rows))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Basis coordinates of `x`, or `None` if `x ∉ L`.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        if self.annihilator.mul_vec(x).iter().any(|v| !v.is_zero()) {
            return None;
        }
        let y = self.coord_rows.mul_vec(x);
        let mut out = Vec::with_capacity(y.len());
        for (v, s) in y.iter().zip(&self.scale) {
            let (q, r) = v.div_rem(s);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(out)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coords(x).is_some()
    }
}

/// The group `L/N` for sublattices `N ⊆ L ⊆ Z^n`, with maps between ambient
/// vectors and normal-form coordinates.
#[derive(Clone, Debug)]
pub struct Subquotient {
    outer: Lattice,
    group: FgAbGroup,
    p: IntMatrix,
    p_inv: IntMatrix,
    // indices into P·c: free ones first, then torsion with their orders
    free_idx: Vec<usize>,
    torsion_idx: Vec<(usize, BigInt)>,
}

impl Subquotient {
    pub fn new(outer: Lattice, inner: Lattice) -> Result<Subquotient> {
        let k = outer.dim();
        let mut cols = Vec::with_capacity(inner.dim());
        for j in 0..inner.dim() {
            let v = inner.basis.column(j);
            let c = outer
                .coords(&v)
                .ok_or_else(|| Error::Invalid("inner lattice is not contained in outer lattice".into()))?;
            cols.push(c);
        }
        let cn = IntMatrix::from_columns(k, &cols);
        let s = smith_normal_form(&cn);
        let e = s.nonzero_diagonal();
        let rank = e.len();
        let free_idx: Vec<usize> = (rank..k).collect();
        let torsion_idx: Vec<(usize, BigInt)> = e
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_one())
            .map(|(j, d)| (j, d.clone()))
            .collect();
        let group = FgAbGroup::new(
            free_idx.len(),
            torsion_idx.iter().map(|(_, d)| d.clone()).collect(),
        )
        .expect("SNF diagonal is a divisibility chain");
        Ok(Subquotient {
            outer,
            group,
            p: s.u,
            p_inv: s.u_inv,
            free_idx,
            torsion_idx,
        })
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn outer(&self) -> &Lattice {
        &self.outer
    }

    /// Normal-form coordinates of the class of `x ∈ L`.
    pub fn class_of(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self
            .outer
            .coords(x)
            .ok_or_else(|| Error::Invalid("vector does not lie in the outer lattice".into()))?;
        let y = self.p.mul_vec(&c);
        let mut out: Vec<BigInt> = self.free_idx.iter().map(|&j| y[j].clone()).collect();
        out.extend(self.torsion_idx.iter().map(|(j, d)| arith::reduce(&y[*j], d)));
        Ok(out)
    }

    /// A vector of `L` representing canonical generator `t` of the group.
    pub fn lift(&self, t: usize) -> Vec<BigInt> {
        let j = if t < self.free_idx.len() {
            self.free_idx[t]
        } else {
            self.torsion_idx[t - self.free_idx.len()].0
        };
        let c = self.p_inv.column(j);
        self.outer.basis.mul_vec(&c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn span_membership() {
        let gens = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3], vec![0, 0]]).unwrap();
        let l = Lattice::span(&gens);
        assert_eq!(l.dim(), 2);
        assert!(l.contains(&v(&[4, 3, 0])));
        assert!(!l.contains(&v(&[1, 0, 0])));
        assert!(!l.contains(&v(&[0, 0, 1])));
    }

    #[test]
    fn kernel_basis() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 1]]).unwrap();
        let k = Lattice::kernel_of(&a);
        assert_eq!(k.dim(), 2);
        assert!(k.contains(&v(&[1, -1, 0])));
        assert!(!k.contains(&v(&[1, 0, 0])));
    }

    #[test]
    fn subquotient_lifts_round_trip() {
        let outer = Lattice::span(&IntMatrix::identity(2));
        let inner = Lattice::span(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 6]]).unwrap());
        let sq = Subquotient::new(outer, inner).unwrap();
        assert_eq!(sq.group(), &"Z/2+Z/6".parse::<FgAbGroup>().unwrap());
        for t in 0..sq.group().ngens() {
            let x = sq.lift(t);
            let mut e = vec![BigInt::zero(); 2];
            e[t] = BigInt::one();
            assert_eq!(sq.class_of(&x).unwrap(), e);
        }
    }
}
