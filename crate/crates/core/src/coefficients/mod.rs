//! Symbolic coefficient modules: finite sums of cyclic, free and divisible
//! atoms, each carrying a Tate twist.

mod parse;
pub mod zhat;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::FgAbGroup;
use crate::arith;
use crate::error::{Error, Result};

pub use zhat::{frobenius_kernel_cokernel, ZhatModule};

/// The underlying abelian group of an atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoeffKind {
    FreeZ,
    FiniteCyclic(u64),
    RationalQ,
    QmodZ,
    /// `Q_l/Z_l`
    PrimaryDivisible(u64),
    /// `(Q/Z)'`, the prime-to-`p` part of `Q/Z`
    PrimeToP(u64),
}

impl CoeffKind {
    pub fn is_divisible(self) -> bool {
        matches!(
            self,
            CoeffKind::RationalQ | CoeffKind::QmodZ | CoeffKind::PrimaryDivisible(_) | CoeffKind::PrimeToP(_)
        )
    }

    pub fn is_torsion(self) -> bool {
        !matches!(self, CoeffKind::FreeZ | CoeffKind::RationalQ)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, CoeffKind::FiniteCyclic(_))
    }

    fn validate(self) -> Result<()> {
        match self {
            CoeffKind::FiniteCyclic(n) if n < 2 => {
                Err(Error::Invalid(format!("cyclic atom needs order at least 2, got {n}")))
            }
            CoeffKind::PrimaryDivisible(l) | CoeffKind::PrimeToP(l) if !arith::is_prime(l) => {
                Err(Error::Invalid(format!("{l} is not prime")))
            }
            _ => Ok(()),
        }
    }

    fn name(self) -> &'static str {
        match self {
            CoeffKind::FreeZ => "Z",
            CoeffKind::FiniteCyclic(_) => "Z/n",
            CoeffKind::RationalQ => "Q",
            CoeffKind::QmodZ => "Q/Z",
            CoeffKind::PrimaryDivisible(_) => "Q_l/Z_l",
            CoeffKind::PrimeToP(_) => "(Q/Z)'",
        }
    }

    fn param(self) -> Option<u64> {
        match self {
            CoeffKind::FiniteCyclic(n) | CoeffKind::PrimaryDivisible(n) | CoeffKind::PrimeToP(n) => Some(n),
            _ => None,
        }
    }

    fn from_name(name: &str, param: Option<u64>) -> Result<Self> {
        let need = |p: Option<u64>| p.ok_or_else(|| Error::Invalid(format!("atom {name} needs a parameter")));
        let k = match name {
            "Z" => CoeffKind::FreeZ,
            "Z/n" => CoeffKind::FiniteCyclic(need(param)?),
            "Q" => CoeffKind::RationalQ,
            "Q/Z" => CoeffKind::QmodZ,
            "Q_l/Z_l" => CoeffKind::PrimaryDivisible(need(param)?),
            "(Q/Z)'" => CoeffKind::PrimeToP(need(param)?),
            other => return Err(Error::Invalid(format!("unknown atom kind {other:?}"))),
        };
        k.validate()?;
        Ok(k)
    }
}

/// An atom `A(w)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoeffAtom {
    pub kind: CoeffKind,
    pub twist: i64,
}

impl CoeffAtom {
    pub fn new(kind: CoeffKind, twist: i64) -> Result<Self> {
        kind.validate()?;
        Ok(CoeffAtom { kind, twist })
    }
}

fn minus(w: i64) -> String {
    if w < 0 {
        format!("−{}", w.unsigned_abs())
    } else {
        w.to_string()
    }
}

impl fmt::Display for CoeffAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CoeffKind::FreeZ => write!(f, "Z")?,
            CoeffKind::FiniteCyclic(n) => write!(f, "Z/{n}")?,
            CoeffKind::RationalQ => write!(f, "Q")?,
            CoeffKind::QmodZ => write!(f, "Q/Z")?,
            CoeffKind::PrimaryDivisible(l) => write!(f, "Q_{l}/Z_{l}")?,
            CoeffKind::PrimeToP(p) => write!(f, "(Q/Z)^({p}')")?,
        }
        if self.twist != 0 {
            write!(f, "({})", minus(self.twist))?;
        }
        Ok(())
    }
}

/// A formal direct sum of atoms with multiplicities, kept in canonical form:
/// finite cyclic atoms of equal twist are merged into invariant factors.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<RawAtom>", into = "Vec<RawAtom>")]
pub struct SymbolicModule {
    atoms: BTreeMap<CoeffAtom, usize>,
}

#[derive(Serialize, Deserialize)]
struct RawAtom {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<u64>,
    #[serde(default)]
    twist: i64,
    #[serde(default = "one")]
    mult: usize,
}

fn one() -> usize {
    1
}

impl TryFrom<Vec<RawAtom>> for SymbolicModule {
    type Error = Error;
    fn try_from(raw: Vec<RawAtom>) -> Result<Self> {
        let mut terms = Vec::new();
        for r in raw {
            let kind = CoeffKind::from_name(&r.kind, r.param)?;
            terms.push((CoeffAtom { kind, twist: r.twist }, r.mult));
        }
        Ok(SymbolicModule::from_terms(terms))
    }
}

impl From<SymbolicModule> for Vec<RawAtom> {
    fn from(m: SymbolicModule) -> Self {
        m.atoms
            .into_iter()
            .map(|(a, mult)| RawAtom {
                kind: a.kind.name().to_string(),
                param: a.kind.param(),
                twist: a.twist,
                mult,
            })
            .collect()
    }
}

impl SymbolicModule {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn atom(kind: CoeffKind, twist: i64) -> Self {
        Self::from_terms([(CoeffAtom { kind, twist }, 1)])
    }

    pub fn z() -> Self {
        Self::atom(CoeffKind::FreeZ, 0)
    }

    pub fn q() -> Self {
        Self::atom(CoeffKind::RationalQ, 0)
    }

    pub fn q_mod_z() -> Self {
        Self::atom(CoeffKind::QmodZ, 0)
    }

    pub fn cyclic(n: u64, twist: i64) -> Self {
        if n == 0 {
            return Self::atom(CoeffKind::FreeZ, twist);
        }
        Self::from_terms([(CoeffAtom { kind: CoeffKind::FiniteCyclic(n.max(1)), twist }, 1)])
    }

    /// Canonical form of a list of atoms; order-1 cyclic atoms and zero
    /// multiplicities vanish.
    pub fn from_terms(terms: impl IntoIterator<Item = (CoeffAtom, usize)>) -> Self {
        let mut atoms: BTreeMap<CoeffAtom, usize> = BTreeMap::new();
        let mut finite: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
        for (a, m) in terms {
            if m == 0 {
                continue;
            }
            match a.kind {
                CoeffKind::FiniteCyclic(n) => {
                    if n > 1 {
                        finite
                            .entry(a.twist)
                            .or_default()
                            .extend(std::iter::repeat(BigInt::from(n)).take(m));
                    }
                }
                _ => *atoms.entry(a).or_default() += m,
            }
        }
        for (w, orders) in finite {
            let g = FgAbGroup::from_cyclic_orders(&orders);
            for d in g.torsion() {
                let n = d.to_u64().expect("orders of 64-bit atoms stay in 64 bits");
                *atoms
                    .entry(CoeffAtom { kind: CoeffKind::FiniteCyclic(n), twist: w })
                    .or_default() += 1;
            }
        }
        SymbolicModule { atoms }
    }

    /// A finitely generated group as an untwisted module.
    pub fn from_group(g: &FgAbGroup) -> Result<Self> {
        Self::from_group_twisted(g, 0)
    }

    pub fn from_group_twisted(g: &FgAbGroup, twist: i64) -> Result<Self> {
        let mut terms = vec![(CoeffAtom { kind: CoeffKind::FreeZ, twist }, g.rank())];
        for d in g.torsion() {
            let n = d
                .to_u64()
                .ok_or_else(|| Error::UnsupportedModule(format!("invariant factor {d} exceeds 64 bits")))?;
            terms.push((CoeffAtom { kind: CoeffKind::FiniteCyclic(n), twist }, 1));
        }
        Ok(Self::from_terms(terms))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CoeffAtom, usize)> {
        self.atoms.iter().map(|(a, &m)| (a, m))
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_torsion(&self) -> bool {
        self.atoms.keys().all(|a| a.kind.is_torsion())
    }

    pub fn is_finite(&self) -> bool {
        self.atoms.keys().all(|a| a.kind.is_finite())
    }

    pub fn has_divisible(&self) -> bool {
        self.atoms.keys().any(|a| a.kind.is_divisible())
    }

    /// All twists present, deduplicated.
    pub fn twists(&self) -> Vec<i64> {
        let mut w: Vec<i64> = self.atoms.keys().map(|a| a.twist).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// The underlying group when every atom is `Z` or `Z/n`, twists forgotten.
    pub fn to_group(&self) -> Option<FgAbGroup> {
        let mut orders = Vec::new();
        for (a, m) in self.terms() {
            let o = match a.kind {
                CoeffKind::FreeZ => BigInt::zero(),
                CoeffKind::FiniteCyclic(n) => BigInt::from(n),
                _ => return None,
            };
            orders.extend(std::iter::repeat(o).take(m));
        }
        Some(FgAbGroup::from_cyclic_orders(&orders))
    }

    /// Order of a finite module.
    pub fn order(&self) -> Option<BigInt> {
        self.to_group().and_then(|g| g.order())
    }

    pub fn direct_sum(&self, other: &SymbolicModule) -> SymbolicModule {
        Self::from_terms(self.terms().chain(other.terms()).map(|(a, m)| (*a, m)))
    }

    pub fn power(&self, k: usize) -> SymbolicModule {
        Self::from_terms(self.terms().map(|(a, m)| (*a, m * k)))
    }

    fn map_atoms(&self, f: impl Fn(&CoeffAtom) -> Result<SymbolicModule>) -> Result<SymbolicModule> {
        let mut out = SymbolicModule::zero();
        for (a, m) in self.terms() {
            out = out.direct_sum(&f(a)?.power(m));
        }
        Ok(out)
    }

    /// `M(w)`: adds `w` to every twist.
    pub fn twist(&self, w: i64) -> SymbolicModule {
        Self::from_terms(self.terms().map(|(a, m)| (CoeffAtom { kind: a.kind, twist: a.twist + w }, m)))
    }

    /// `M ⊗ G` for a finitely generated group `G` (untwisted).
    pub fn tensor_group(&self, g: &FgAbGroup) -> Result<SymbolicModule> {
        self.tensor(&SymbolicModule::from_group(g)?)
    }

    /// Tensor product; at most one factor may contain divisible atoms.
    pub fn tensor(&self, other: &SymbolicModule) -> Result<SymbolicModule> {
        if self.has_divisible() && other.has_divisible() {
            return Err(Error::UnsupportedTensor(format!("({self}) ⊗ ({other})")));
        }
        let mut terms = Vec::new();
        for (a, ma) in self.terms() {
            for (b, mb) in other.terms() {
                let twist = a.twist + b.twist;
                if let Some(kind) = tensor_kinds(a.kind, b.kind) {
                    terms.push((CoeffAtom { kind, twist }, ma * mb));
                }
            }
        }
        Ok(Self::from_terms(terms))
    }

    /// `M[n]`.
    pub fn n_torsion(&self, n: u64) -> Result<SymbolicModule> {
        if n == 0 {
            return Err(Error::Invalid("n-torsion needs n ≥ 1".into()));
        }
        let nb = BigInt::from(n);
        self.map_atoms(|a| {
            let order = match a.kind {
                CoeffKind::FreeZ | CoeffKind::RationalQ => 1,
                CoeffKind::FiniteCyclic(k) => arith::gcd_u64(k, n),
                CoeffKind::QmodZ => n,
                CoeffKind::PrimaryDivisible(l) => l.pow(arith::valuation(&nb, l)),
                CoeffKind::PrimeToP(p) => arith::strip_prime_u64(n, p),
            };
            Ok(SymbolicModule::cyclic(order, a.twist))
        })
    }

    /// Prime-to-`p` part of the torsion submodule; `p = 0` keeps all torsion.
    pub fn prime_to_p(&self, p: u64) -> Result<SymbolicModule> {
        self.map_atoms(|a| {
            let w = a.twist;
            Ok(match a.kind {
                CoeffKind::FreeZ | CoeffKind::RationalQ => SymbolicModule::zero(),
                CoeffKind::FiniteCyclic(k) => SymbolicModule::cyclic(arith::strip_prime_u64(k, p), w),
                CoeffKind::QmodZ if p < 2 => SymbolicModule::atom(CoeffKind::QmodZ, w),
                CoeffKind::QmodZ => SymbolicModule::atom(CoeffKind::PrimeToP(p), w),
                CoeffKind::PrimaryDivisible(l) if l == p => SymbolicModule::zero(),
                CoeffKind::PrimaryDivisible(l) => SymbolicModule::atom(CoeffKind::PrimaryDivisible(l), w),
                CoeffKind::PrimeToP(q) if q == p || p < 2 => SymbolicModule::atom(CoeffKind::PrimeToP(q), w),
                CoeffKind::PrimeToP(q) => {
                    return Err(Error::UnsupportedModule(format!(
                        "the prime-to-{p} part of (Q/Z)^({q}') is not a single atom"
                    )))
                }
            })
        })
    }

    /// `p`-primary part of the torsion submodule.
    pub fn p_primary(&self, p: u64) -> Result<SymbolicModule> {
        if !arith::is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        self.map_atoms(|a| {
            let w = a.twist;
            Ok(match a.kind {
                CoeffKind::FreeZ | CoeffKind::RationalQ => SymbolicModule::zero(),
                CoeffKind::FiniteCyclic(k) => {
                    SymbolicModule::cyclic(p.pow(arith::valuation(&BigInt::from(k), p)), w)
                }
                CoeffKind::QmodZ => SymbolicModule::atom(CoeffKind::PrimaryDivisible(p), w),
                CoeffKind::PrimaryDivisible(l) if l == p => SymbolicModule::atom(a.kind, w),
                CoeffKind::PrimaryDivisible(_) => SymbolicModule::zero(),
                CoeffKind::PrimeToP(q) if q == p => SymbolicModule::zero(),
                CoeffKind::PrimeToP(_) => SymbolicModule::atom(CoeffKind::PrimaryDivisible(p), w),
            })
        })
    }

    /// Human notation, e.g. `Z/3(−1) ⊕ (Q/Z)^(2')(−1)^2`.
    pub fn notation(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms()
            .map(|(a, m)| if m == 1 { a.to_string() } else { format!("{a}^{m}") })
            .collect::<Vec<_>>()
            .join(" ⊕ ")
    }
}

/// Kind of `A ⊗ B` for non-both-divisible atoms, `None` for zero.
fn tensor_kinds(a: CoeffKind, b: CoeffKind) -> Option<CoeffKind> {
    use CoeffKind::*;
    match (a, b) {
        (FreeZ, k) | (k, FreeZ) => Some(k),
        (FiniteCyclic(m), FiniteCyclic(n)) => {
            let g = arith::gcd_u64(m, n);
            (g > 1).then_some(FiniteCyclic(g))
        }
        // a divisible group tensored with a torsion group vanishes
        _ => None,
    }
}

impl fmt::Display for SymbolicModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.notation())
    }
}

impl fmt::Debug for SymbolicModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolicModule({self})")
    }
}

impl std::str::FromStr for SymbolicModule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse::parse_module(s)
    }
}
