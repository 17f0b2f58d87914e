//! Higher direct images `R^i ε_fl* F` along the comparison between the
//! Kummer log flat and classical flat sites, as formal sums of skyscrapers
//! at the marked points of a log trait or a Dedekind base.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::{FgAbGroup, Homomorphism, IntMatrix};
use crate::arith;
use crate::coefficients::{CoeffAtom, CoeffKind, SymbolicModule};
use crate::error::{Error, Result};

/// A closed marked point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePoint {
    pub label: String,
    /// Residue characteristic, 0 allowed.
    pub p: u64,
    /// Size of the residue field when it is finite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    /// Rank of the stalk of `M^gp/O^×`.
    pub log_rank: usize,
}

impl BasePoint {
    pub fn new(label: impl Into<String>, p: u64, q: Option<u64>, log_rank: usize) -> Result<Self> {
        let pt = BasePoint {
            label: label.into(),
            p,
            q,
            log_rank,
        };
        pt.validate()?;
        Ok(pt)
    }

    fn validate(&self) -> Result<()> {
        if self.p != 0 && !arith::is_prime(self.p) {
            return Err(Error::Invalid(format!("point {}: {} is not 0 or prime", self.label, self.p)));
        }
        if let Some(q) = self.q {
            if self.p == 0 || arith::prime_power_base(q) != Some(self.p) {
                return Err(Error::Invalid(format!(
                    "point {}: q = {q} is not a power of p = {}",
                    self.label, self.p
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseKind {
    #[serde(rename = "log_trait")]
    LogTrait,
    #[serde(rename = "dedekind")]
    DedekindWithS,
}

/// A log trait or a Dedekind scheme with log structure along a finite set
/// `S` of closed points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawBase")]
pub struct BaseDescription {
    pub kind: BaseKind,
    pub generic_char: u64,
    pub points: Vec<BasePoint>,
}

#[derive(Deserialize)]
struct RawBase {
    kind: String,
    #[serde(default)]
    generic_char: u64,
    points: Vec<BasePoint>,
}

impl TryFrom<RawBase> for BaseDescription {
    type Error = Error;
    fn try_from(r: RawBase) -> Result<Self> {
        let kind = match r.kind.as_str() {
            "log_trait" => BaseKind::LogTrait,
            "dedekind" => BaseKind::DedekindWithS,
            other => return Err(Error::UnsupportedBase(other.to_string())),
        };
        BaseDescription::new(kind, r.generic_char, r.points)
    }
}

impl BaseDescription {
    pub fn new(kind: BaseKind, generic_char: u64, points: Vec<BasePoint>) -> Result<Self> {
        if generic_char != 0 && !arith::is_prime(generic_char) {
            return Err(Error::Invalid(format!("generic characteristic {generic_char} is not 0 or prime")));
        }
        for pt in &points {
            pt.validate()?;
            if generic_char != 0 && pt.p != generic_char {
                return Err(Error::Invalid(format!(
                    "point {} has residue characteristic {} under generic characteristic {generic_char}",
                    pt.label, pt.p
                )));
            }
        }
        let mut labels: Vec<&str> = points.iter().map(|p| p.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid("point labels must be distinct".into()));
        }
        if kind == BaseKind::LogTrait && points.len() != 1 {
            return Err(Error::Invalid("a log trait has exactly one closed point".into()));
        }
        Ok(BaseDescription {
            kind,
            generic_char,
            points,
        })
    }

    /// Spectrum of a discrete valuation ring with log structure from a
    /// uniformizer; `q` is the residue field size when finite.
    pub fn log_trait(generic_char: u64, p: u64, q: Option<u64>) -> Result<Self> {
        Self::new(BaseKind::LogTrait, generic_char, vec![BasePoint::new("x", p, q, 1)?])
    }

    pub fn point(&self, label: &str) -> Option<&BasePoint> {
        self.points.iter().find(|p| p.label == label)
    }

    pub fn max_log_rank(&self) -> usize {
        self.points.iter().map(|p| p.log_rank).max().unwrap_or(0)
    }
}

/// The three sheaf classes: étale locally a finite `l`-group, a lattice, or
/// a finite dimensional `Q`-vector space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case", try_from = "RawSheaf", into = "RawSheaf")]
pub enum SheafSpec {
    FiniteLGroup {
        l: u64,
        group: FgAbGroup,
        /// Frobenius on the stalk at a finite-field point; identity when absent.
        frobenius: Option<Homomorphism>,
    },
    Lattice {
        rank: usize,
    },
    RationalSpace {
        dim: usize,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
enum RawSheaf {
    FiniteLGroup {
        l: u64,
        group: FgAbGroup,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        frobenius: Option<IntMatrix>,
    },
    Lattice {
        rank: usize,
    },
    RationalSpace {
        dim: usize,
    },
}

impl TryFrom<RawSheaf> for SheafSpec {
    type Error = Error;
    fn try_from(r: RawSheaf) -> Result<Self> {
        match r {
            RawSheaf::FiniteLGroup { l, group, frobenius } => {
                let f = frobenius
                    .map(|m| Homomorphism::new(group.clone(), group.clone(), m))
                    .transpose()?;
                SheafSpec::finite(l, group, f)
            }
            RawSheaf::Lattice { rank } => Ok(SheafSpec::Lattice { rank }),
            RawSheaf::RationalSpace { dim } => Ok(SheafSpec::RationalSpace { dim }),
        }
    }
}

impl From<SheafSpec> for RawSheaf {
    fn from(s: SheafSpec) -> Self {
        match s {
            SheafSpec::FiniteLGroup { l, group, frobenius } => RawSheaf::FiniteLGroup {
                l,
                group,
                frobenius: frobenius.map(|f| f.matrix().clone()),
            },
            SheafSpec::Lattice { rank } => RawSheaf::Lattice { rank },
            SheafSpec::RationalSpace { dim } => RawSheaf::RationalSpace { dim },
        }
    }
}

impl SheafSpec {
    /// A finite `l`-group, optionally with a Frobenius automorphism.
    pub fn finite(l: u64, group: FgAbGroup, frobenius: Option<Homomorphism>) -> Result<Self> {
        if !arith::is_prime(l) {
            return Err(Error::Invalid(format!("{l} is not prime")));
        }
        if !group.is_finite() || group.primary_part(l) != group {
            return Err(Error::Invalid(format!("{group} is not a finite {l}-group")));
        }
        if let Some(f) = &frobenius {
            if f.source() != &group || f.target() != &group || !f.is_isomorphism() {
                return Err(Error::Invalid("Frobenius must be an automorphism of the group".into()));
            }
        }
        let frobenius = frobenius.filter(|f| f != &Homomorphism::identity(&group));
        Ok(SheafSpec::FiniteLGroup { l, group, frobenius })
    }

    /// The constant sheaf `Z/l^k`.
    pub fn cyclic(l: u64, k: u32) -> Result<Self> {
        Self::finite(l, FgAbGroup::from_cyclic_orders(&[arith::pow_big(l, k)]), None)
    }

    pub fn is_constant(&self) -> bool {
        !matches!(self, SheafSpec::FiniteLGroup { frobenius: Some(_), .. })
    }

    /// The stalk as an untwisted symbolic module.
    pub fn stalk(&self) -> SymbolicModule {
        match self {
            SheafSpec::FiniteLGroup { group, .. } => SymbolicModule::from_group(group).expect("small group"),
            SheafSpec::Lattice { rank } => SymbolicModule::z().power(*rank),
            SheafSpec::RationalSpace { dim } => SymbolicModule::q().power(*dim),
        }
    }
}

impl fmt::Display for SheafSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafSpec::FiniteLGroup { group, frobenius, .. } => {
                write!(f, "{group}")?;
                if frobenius.is_some() {
                    write!(f, " with Frobenius")?;
                }
                Ok(())
            }
            SheafSpec::Lattice { rank } => write!(f, "Z^{rank}"),
            SheafSpec::RationalSpace { dim } => write!(f, "Q^{dim}"),
        }
    }
}

impl std::str::FromStr for SheafSpec {
    type Err = Error;
    /// `lattice[:rank]`, `rational[:dim]`, a finite `l`-group such as `Z/9`,
    /// or JSON.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Invalid(format!("bad sheaf {s:?}: {e}")));
        }
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let count = |a: Option<&str>| -> Result<usize> {
            a.map_or(Ok(1), |a| a.trim().parse().map_err(|_| Error::Invalid(format!("bad count in {s:?}"))))
        };
        match head.trim() {
            "lattice" | "Z" => Ok(SheafSpec::Lattice { rank: count(arg)? }),
            "rational" | "Q" => Ok(SheafSpec::RationalSpace { dim: count(arg)? }),
            _ => {
                let g: FgAbGroup = s.parse()?;
                let (_, parts) = g.torsion_decompose();
                if !g.is_finite() || parts.len() != 1 {
                    return Err(Error::Invalid(format!("{s:?} is not a finite l-group for a single prime l")));
                }
                let l = *parts.keys().next().expect("one prime");
                SheafSpec::finite(l, g, None)
            }
        }
    }
}

/// A formal sum `⊕_x i_{x*}(M_x)` over marked points.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectImageExpr {
    terms: BTreeMap<String, SymbolicModule>,
}

impl DirectImageExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, label: &str, m: SymbolicModule) {
        if m.is_zero() {
            return;
        }
        let e = self.terms.entry(label.to_string()).or_insert_with(SymbolicModule::zero);
        *e = e.direct_sum(&m);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, &SymbolicModule)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn direct_sum(&self, other: &DirectImageExpr) -> DirectImageExpr {
        let mut out = self.clone();
        for (x, m) in other.terms() {
            out.add_term(x, m.clone());
        }
        out
    }
}

impl fmt::Display for DirectImageExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(x, m)| format!("i_{x}*({m})")).collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `(Q/Z)'` at a point of residue characteristic `p`, i.e. `⊕_{l≠p} Q_l/Z_l`.
fn prime_to_char(p: u64, twist: i64) -> SymbolicModule {
    let kind = if p == 0 { CoeffKind::QmodZ } else { CoeffKind::PrimeToP(p) };
    SymbolicModule::from_terms([(CoeffAtom { kind, twist }, 1)])
}

/// `R^i ε_fl* F` for `i ≥ 1`.
pub fn higher_direct_image(base: &BaseDescription, f: &SheafSpec, i: usize) -> Result<DirectImageExpr> {
    if i == 0 {
        return Err(Error::Invalid("higher direct images start in degree 1".into()));
    }
    let mut out = DirectImageExpr::zero();
    let w = -(i as i64);
    match f {
        SheafSpec::RationalSpace { .. } => {}
        SheafSpec::FiniteLGroup { l, group, .. } => {
            for x in base.points.iter().filter(|x| x.p != *l) {
                let k = arith::binomial(x.log_rank, i);
                out.add_term(&x.label, SymbolicModule::from_group_twisted(group, w)?.power(k));
            }
        }
        SheafSpec::Lattice { rank } => {
            if i >= 2 {
                for x in &base.points {
                    let k = arith::binomial(x.log_rank, i - 1);
                    out.add_term(&x.label, prime_to_char(x.p, w + 1).power(rank * k));
                }
            }
        }
    }
    Ok(out)
}

/// The module at `x`, zero when `x` carries no term.
pub fn stalk_on_strict_site(expr: &DirectImageExpr, x: &BasePoint) -> SymbolicModule {
    expr.terms.get(&x.label).cloned().unwrap_or_else(SymbolicModule::zero)
}

/// Least `d` with `R^i ε_fl* F = 0` for all `i ≥ d`.
pub fn vanishing_degree(base: &BaseDescription, f: &SheafSpec) -> usize {
    let rho = base.max_log_rank();
    match f {
        SheafSpec::RationalSpace { .. } => 1,
        SheafSpec::FiniteLGroup { .. } => rho + 1,
        SheafSpec::Lattice { .. } if rho == 0 => 1,
        SheafSpec::Lattice { .. } => rho + 2,
    }
}
