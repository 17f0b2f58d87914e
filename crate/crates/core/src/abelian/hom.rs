use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::group::FgAbGroup;
use super::lattice::{Lattice, Subquotient};
use super::matrix::IntMatrix;
use crate::arith;
use crate::error::{Error, Result};

/// A homomorphism between groups in normal form, as a matrix acting on
/// canonical generator coordinates (columns are images of source generators).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHom", into = "RawHom")]
pub struct Homomorphism {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct RawHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl TryFrom<RawHom> for Homomorphism {
    type Error = Error;
    fn try_from(r: RawHom) -> Result<Self> {
        let matrix = if r.matrix.rows() == 0 && r.matrix.cols() == 0 {
            IntMatrix::zeros(r.target.ngens(), r.source.ngens())
        } else {
            r.matrix
        };
        Homomorphism::new(r.source, r.target, matrix)
    }
}

impl From<Homomorphism> for RawHom {
    fn from(h: Homomorphism) -> Self {
        RawHom {
            source: h.source,
            target: h.target,
            matrix: h.matrix,
        }
    }
}

/// Relation matrix of a group in normal form: one column per torsion
/// generator, with its order on the diagonal.
pub(crate) fn relation_matrix(g: &FgAbGroup) -> IntMatrix {
    let n = g.ngens();
    let mut cols = Vec::new();
    for (i, o) in g.generator_orders().into_iter().enumerate() {
        if !o.is_zero() {
            let mut c = vec![BigInt::zero(); n];
            c[i] = o;
            cols.push(c);
        }
    }
    IntMatrix::from_columns(n, &cols)
}

impl Homomorphism {
    /// Checks well-definedness and reduces entries into canonical residues.
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(Error::IllDefinedMap(format!(
                "matrix is {}×{}, expected {}×{}",
                matrix.rows(),
                matrix.cols(),
                target.ngens(),
                source.ngens()
            )));
        }
        let t_orders = target.generator_orders();
        let s_orders = source.generator_orders();
        let mut m = matrix;
        for (i, to) in t_orders.iter().enumerate() {
            for (j, so) in s_orders.iter().enumerate() {
                let v = arith::reduce(m.get(i, j), to);
                // d·v must vanish in Z/to
                let ok = match (so.is_zero(), to.is_zero()) {
                    (true, _) => true,
                    (false, true) => v.is_zero(),
                    (false, false) => (so * &v).is_multiple_of(to),
                };
                if !ok {
                    return Err(Error::IllDefinedMap(format!(
                        "generator {j} of order {so} maps to an element of infinite or incompatible order"
                    )));
                }
                m.set(i, j, v);
            }
        }
        Ok(Homomorphism {
            source,
            target,
            matrix: m,
        })
    }

    pub fn zero(source: FgAbGroup, target: FgAbGroup) -> Self {
        let matrix = IntMatrix::zeros(target.ngens(), source.ngens());
        Homomorphism {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Homomorphism {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ngens()),
        }
    }

    /// Multiplication by an integer.
    pub fn scalar(g: &FgAbGroup, c: &BigInt) -> Self {
        let n = g.ngens();
        let m = IntMatrix::diagonal(&vec![c.clone(); n]);
        Homomorphism::new(g.clone(), g.clone(), m).expect("scalar maps are well defined")
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.target.normalize_element(&self.matrix.mul_vec(x))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if self.target != other.source {
            return Err(Error::Invalid("composition of non-composable maps".into()));
        }
        Homomorphism::new(
            self.source.clone(),
            other.target.clone(),
            other.matrix.mul(&self.matrix),
        )
    }

    pub fn add(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Invalid("sum of maps with different domains".into()));
        }
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j) + other.matrix.get(i, j);
                m.set(i, j, v);
            }
        }
        Homomorphism::new(self.source.clone(), self.target.clone(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Sublattice of `Z^{target gens}` spanned by the image and the target relations.
    fn image_lattice(&self) -> Lattice {
        Lattice::span(&self.matrix.hstack(&relation_matrix(&self.target)))
    }

    pub fn kernel(&self) -> FgAbGroup {
        self.kernel_subquotient().group().clone()
    }

    /// Kernel as a subquotient of the source coordinates.
    pub fn kernel_subquotient(&self) -> Subquotient {
        let ns = self.source.ngens();
        let joint = self.matrix.hstack(&relation_matrix(&self.target));
        let k = Lattice::kernel_of(&joint).project(ns);
        let rel = Lattice::span(&relation_matrix(&self.source));
        Subquotient::new(k, rel).expect("source relations lie in the kernel")
    }

    pub fn image(&self) -> FgAbGroup {
        let l = self.image_lattice();
        let rel = Lattice::span(&relation_matrix(&self.target));
        Subquotient::new(l, rel).expect("relations lie in the image lattice").group().clone()
    }

    pub fn cokernel(&self) -> FgAbGroup {
        let rows = self.matrix.hstack(&relation_matrix(&self.target)).transpose();
        FgAbGroup::from_presentation(&rows)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn doubling_on_z() {
        let h = Homomorphism::new(g("Z"), g("Z"), m(&[vec![2]])).unwrap();
        assert_eq!(h.kernel(), FgAbGroup::zero());
        assert_eq!(h.cokernel(), g("Z/2"));
        assert_eq!(h.image(), g("Z"));
    }

    #[test]
    fn ill_defined_rejected() {
        assert!(Homomorphism::new(g("Z/2"), g("Z"), m(&[vec![1]])).is_err());
        assert!(Homomorphism::new(g("Z/2"), g("Z/3"), m(&[vec![1]])).is_err());
        assert!(Homomorphism::new(g("Z/2"), g("Z/4"), m(&[vec![2]])).is_ok());
    }

    #[test]
    fn kernel_of_torsion_map() {
        // Z/4 → Z/4, x ↦ 2x
        let h = Homomorphism::new(g("Z/4"), g("Z/4"), m(&[vec![2]])).unwrap();
        assert_eq!(h.kernel(), g("Z/2"));
        assert_eq!(h.image(), g("Z/2"));
        assert_eq!(h.cokernel(), g("Z/2"));
        // Z ⊕ Z/6 → Z/6 summing coordinates
        let s = Homomorphism::new(g("Z+Z/6"), g("Z/6"), m(&[vec![1, 1]])).unwrap();
        assert_eq!(s.kernel(), g("Z"));
        assert!(s.is_surjective());
    }
}
