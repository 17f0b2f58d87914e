//! Invariant suites run by `logkfl verify`. Each suite is small enough to
//! finish in a few seconds and reports every failed check by name.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{smith_normal_form, ChainComplex, FgAbGroup, Homomorphism, IntMatrix};
use crate::arith;
use crate::calculators::{dedekind_calculator, dvr_calculator, zhat_cohomology, Mode, Tail, ZhatInput};
use crate::coefficients::{frobenius_kernel_cokernel, SymbolicModule, ZhatModule};
use crate::cohomology::{
    cohomology_bruteforce, cohomology_cyclic_closed, cohomology_rational, profinite_closed_form,
    profinite_colimit_bruteforce, standard_complex, standard_ladder, FiniteAbelianGroup, DEFAULT_SIZE_BOUND,
};
use crate::direct_image::{
    higher_direct_image, vanishing_degree, BaseDescription, BaseKind, BasePoint, DirectImageExpr, SheafSpec,
};
use crate::kummer::{cech_cohomology, cech_colimit, cech_complex, LogPointModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Suite {
    report: SuiteReport,
}

impl Suite {
    fn new(name: &str) -> Self {
        Suite {
            report: SuiteReport {
                name: name.into(),
                checks: 0,
                failures: Vec::new(),
            },
        }
    }

    fn check(&mut self, what: impl FnOnce() -> String, ok: bool) {
        self.report.checks += 1;
        if !ok {
            self.report.failures.push(what());
        }
    }

    /// Records an error from a computation that was expected to succeed.
    fn run<T>(&mut self, what: &str, r: crate::Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.report.checks += 1;
                self.report.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }
}

pub const SUITES: [&str; 6] = [
    "abelian-core",
    "coefficients",
    "group-cohomology",
    "kummer-cech",
    "direct-images",
    "calculators",
];

pub fn run_suite(name: &str) -> Option<SuiteReport> {
    let r = match name {
        "abelian-core" => abelian_core().report,
        "coefficients" => coefficients().report,
        "group-cohomology" => group_cohomology().report,
        "kummer-cech" => kummer_cech().report,
        "direct-images" => direct_images().report,
        "calculators" => calculators().report,
        _ => return None,
    };
    Some(r)
}

pub fn run_all() -> Vec<SuiteReport> {
    SUITES.iter().filter_map(|s| run_suite(s)).collect()
}

fn random_matrix(rng: &mut ChaCha8Rng, max_dim: usize, bound: i64) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..=max_dim), rng.gen_range(1..=max_dim));
    let data = (0..r * c).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::from_data(r, c, data).expect("sizes match")
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..3 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b {
            u.add_row_multiple(a, b, &BigInt::from(rng.gen_range(-3..=3)));
        }
    }
    u
}

/// `gcd` of all `k × k` minors.
fn minor_gcd(a: &IntMatrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in (0..a.rows()).combinations(k) {
        for cols in (0..a.cols()).combinations(k) {
            g = g.gcd(&a.select_rows(&rows).select_columns(&cols).determinant());
        }
    }
    g
}

fn abelian_core() -> Suite {
    let mut s = Suite::new("abelian-core");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..120 {
        let a = random_matrix(&mut rng, 5, 20);
        let sm = smith_normal_form(&a);
        s.check(|| format!("U·A·V = D for matrix #{t}"), sm.u.mul(&a).mul(&sm.v) == sm.d);
        s.check(
            || format!("unimodular U, V for matrix #{t}"),
            sm.u.determinant().abs().is_one() && sm.v.determinant().abs().is_one(),
        );
        let diag = sm.nonzero_diagonal();
        let chain = diag.iter().all(|d| d.is_positive()) && diag.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        s.check(|| format!("divisibility chain for matrix #{t}"), chain);
        let mut prod = BigInt::one();
        for k in 1..=a.rows().min(a.cols()) {
            prod *= diag.get(k - 1).cloned().unwrap_or_else(BigInt::zero);
            s.check(|| format!("determinant divisor {k} of matrix #{t}"), prod == minor_gcd(&a, k));
        }
        let u = random_unimodular(&mut rng, a.rows());
        let v = random_unimodular(&mut rng, a.cols());
        let b = u.mul(&a).mul(&v);
        s.check(
            || format!("presentation change for matrix #{t}"),
            FgAbGroup::from_presentation(&a) == FgAbGroup::from_presentation(&b),
        );
    }
    let groups: Vec<FgAbGroup> = ["0", "Z", "Z/2", "Z/6", "Z+Z/4", "Z/2+Z/12", "Z^2+Z/9"]
        .iter()
        .map(|x| x.parse().expect("group"))
        .collect();
    for g in &groups {
        for g2 in &groups {
            for h in &groups {
                let sum = g.direct_sum(g2);
                s.check(
                    || format!("tensor additive in ({g}) ⊕ ({g2}) against {h}"),
                    sum.tensor(h) == g.tensor(h).direct_sum(&g2.tensor(h)),
                );
                s.check(
                    || format!("hom additive in ({g}) ⊕ ({g2}) against {h}"),
                    sum.hom(h) == g.hom(h).direct_sum(&g2.hom(h)),
                );
            }
        }
        let c = ChainComplex::from_groups(&[FgAbGroup::zero(), g.clone(), FgAbGroup::zero()], &[
            IntMatrix::zeros(g.ngens(), 0),
            IntMatrix::zeros(0, g.ngens()),
        ]);
        if let Some(c) = s.run("single-degree complex", c) {
            let h = s.run("single-degree homology", c.homology_at(1));
            s.check(|| format!("homology of {g} in one degree"), h.as_ref() == Some(g));
        }
    }
    s
}

fn enumerate_fixed(n: u64, c: u64) -> (u64, u64) {
    // kernel and cokernel orders of x ↦ (c − 1)x on Z/n
    let k = (0..n).filter(|&x| (c + n - 1) % n * x % n == 0).count() as u64;
    let mut image: Vec<u64> = (0..n).map(|x| (c + n - 1) % n * x % n).collect();
    image.sort_unstable();
    image.dedup();
    (k, n / image.len() as u64)
}

fn coefficients() -> Suite {
    let mut s = Suite::new("coefficients");
    let samples = ["Z", "Q", "Q/Z", "Z/6(-1)", "Q_3/Z_3(2)", "(Q/Z)^(5')(-1)", "Z^2+Z/4"];
    for x in samples {
        let m: SymbolicModule = x.parse().expect("module");
        let t = s.run("tensor with Z", m.tensor(&SymbolicModule::z()));
        s.check(|| format!("{m} ⊗ Z = {m}"), t.as_ref() == Some(&m));
        let t = s.run("tensor with 0", m.tensor(&SymbolicModule::zero()));
        s.check(|| format!("{m} ⊗ 0 = 0"), t.is_some_and(|t| t.is_zero()));
        for (a, b) in [(2u64, 3u64), (4, 9), (5, 12), (8, 15)] {
            let (Some(ab), Some(ta), Some(tb)) = (
                s.run("n-torsion", m.n_torsion(a * b)),
                s.run("n-torsion", m.n_torsion(a)),
                s.run("n-torsion", m.n_torsion(b)),
            ) else {
                continue;
            };
            s.check(|| format!("{m}[{a}·{b}] splits"), ab == ta.direct_sum(&tb));
        }
    }
    for q in [2u64, 3, 4, 5, 7, 9] {
        let qb = BigInt::from(q);
        for n in 2..=50u64 {
            for w in -2..=2i64 {
                let nb = BigInt::from(n);
                let c = if w >= 0 {
                    qb.modpow(&BigInt::from(w), &nb)
                } else {
                    match arith::mod_inverse(&qb, &nb) {
                        Some(inv) => inv.modpow(&BigInt::from(-w), &nb),
                        None => continue,
                    }
                };
                let c: u64 = c.try_into().expect("residue");
                let Some(zm) = s.run("module", ZhatModule::trivial(FgAbGroup::cyclic(n), w, q)) else {
                    continue;
                };
                let Some((h0, h1)) = s.run("kernel/cokernel", frobenius_kernel_cokernel(&zm)) else {
                    continue;
                };
                let (k, ck) = enumerate_fixed(n, c);
                s.check(
                    || format!("Z/{n}({w}) over q = {q}: enumeration gives ({k}, {ck})"),
                    h0.order() == Some(BigInt::from(k)) && h1.order() == Some(BigInt::from(ck)),
                );
            }
        }
    }
    s
}

fn group_cohomology() -> Suite {
    let mut s = Suite::new("group-cohomology");
    let coeffs: Vec<FgAbGroup> = ["Z", "Z/2", "Z/4", "Z/6", "Z+Z/2"].iter().map(|x| x.parse().expect("group")).collect();
    for m in [2u64, 3, 4, 6] {
        let g = FiniteAbelianGroup::new(vec![m]).expect("group");
        for c in &coeffs {
            if let Some(cx) = s.run("standard complex", standard_complex(&g, c, 5, DEFAULT_SIZE_BOUND)) {
                s.check(|| format!("d∘d = 0 for Z/{m} with {c}"), cx.check().is_ok());
                for i in 0..=4 {
                    let b = s.run("homology", cx.homology_at(i));
                    let closed = s.run("closed form", cohomology_cyclic_closed(m, c, i));
                    s.check(|| format!("H^{i}(Z/{m}, {c}) matches the closed form"), b.is_some() && b == closed);
                }
            }
        }
    }
    for factors in [vec![2u64, 2], vec![2, 4], vec![3, 3], vec![6]] {
        let g = FiniteAbelianGroup::new(factors).expect("group");
        let order = BigInt::from(g.order());
        for c in ["Z", "Z/4", "Z/3"] {
            let c: FgAbGroup = c.parse().expect("group");
            for i in 1..=3 {
                if let Some(h) = s.run("cohomology", cohomology_bruteforce(&g, &c, i)) {
                    let killed = h.is_finite() && h.exponent().is_some_and(|e| order.is_multiple_of(&e));
                    s.check(|| format!("|G| kills H^{i}({g}, {c})"), killed);
                }
            }
        }
        s.check(|| format!("H^1({g}, Q) = 0"), cohomology_rational(&g, 1).is_zero());
    }
    for r in 1..=2 {
        for (m, p) in [("Z/2", 3u64), ("Z/3", 2), ("Z/4", 3), ("Z/6", 5), ("Z/9", 2)] {
            let mg: FgAbGroup = m.parse().expect("group");
            let ms: SymbolicModule = m.parse().expect("module");
            for i in 1..=3 {
                let Some(ladder) = s.run("ladder", standard_ladder(&mg, p, 3)) else { continue };
                let bf = s.run("colimit", profinite_colimit_bruteforce(r, &mg, p, i, &ladder));
                let cf = s.run("closed form", profinite_closed_form(r, &ms, p, i));
                if let (Some(bf), Some(cf)) = (bf, cf) {
                    let got = SymbolicModule::from_group(&bf.value);
                    s.check(|| format!("colimit r={r} M={m} p={p} i={i}"), got.is_ok_and(|g| g == cf));
                }
            }
        }
    }
    s
}

fn kummer_cech() -> Suite {
    let mut s = Suite::new("kummer-cech");
    let coeffs: Vec<FgAbGroup> = ["Z", "Z/2", "Z/4", "Z/6"].iter().map(|x| x.parse().expect("group")).collect();
    for r in 1..=2 {
        for p in [2u64, 3, 5] {
            let model = LogPointModel::new(r, p).expect("model");
            for n in 1..=6u64 {
                let Some(cover) = s.run("cover", model.cover(n)) else { continue };
                let g = cover.group();
                for c in &coeffs {
                    let cx = s.run("Čech complex", cech_complex(&model, n, c, 3, DEFAULT_SIZE_BOUND));
                    let sx = s.run("standard complex", standard_complex(&g, c, 3, DEFAULT_SIZE_BOUND));
                    s.check(|| format!("Čech = standard for r={r} p={p} n={n} M={c}"), cx.is_some() && cx == sx);
                }
                let z = FgAbGroup::free(1);
                if let Some(h1) = s.run("Ȟ^1", cech_cohomology(&model, n, &z, 1, DEFAULT_SIZE_BOUND)) {
                    s.check(|| format!("Ȟ^1(X_{n}/X, Z) = 0 for r={r} p={p}"), h1.is_zero());
                }
                if let Some(h2) = s.run("Ȟ^2", cech_cohomology(&model, n, &z, 2, DEFAULT_SIZE_BOUND)) {
                    let no_p = h2.order().is_some_and(|o| !o.is_multiple_of(&BigInt::from(p)));
                    s.check(|| format!("Ȟ^2(X_{n}/X, Z) finite without {p}-torsion, r={r}"), no_p);
                }
            }
            for m in ["Z/2", "Z/3", "Z/4"] {
                let mg: FgAbGroup = m.parse().expect("group");
                let ms: SymbolicModule = m.parse().expect("module");
                for i in 1..=2 {
                    let Some(ladder) = s.run("ladder", standard_ladder(&mg, p, 3)) else { continue };
                    let bf = s.run("colimit", profinite_colimit_bruteforce(r, &mg, p, i, &ladder));
                    let cf = s.run("Čech colimit", cech_colimit(&model, &ms, i));
                    if let (Some(bf), Some(cf)) = (bf, cf) {
                        let got = SymbolicModule::from_group_twisted(&bf.value, -(i as i64));
                        s.check(|| format!("Čech colimit r={r} p={p} M={m} i={i}"), got.is_ok_and(|g| g == cf));
                    }
                }
            }
        }
    }
    s
}

/// `R^{i−1}` of the finite `l`-groups `(Z/l^{v_l(n)})^rank`, summed over `l | n`.
fn finite_levels(base: &BaseDescription, rank: usize, n: u64, i: usize) -> crate::Result<DirectImageExpr> {
    let mut out = DirectImageExpr::zero();
    for (l, v) in arith::factor_u64(n) {
        let g = FgAbGroup::cyclic(l.pow(v)).power(rank);
        out = out.direct_sum(&higher_direct_image(base, &SheafSpec::finite(l, g, None)?, i - 1)?);
    }
    Ok(out)
}

fn n_torsion_expr(e: &DirectImageExpr, n: u64) -> crate::Result<DirectImageExpr> {
    let mut out = DirectImageExpr::zero();
    for (x, m) in e.terms() {
        out.add_term(x, m.n_torsion(n)?);
    }
    Ok(out)
}

pub(crate) fn sample_bases() -> Vec<BaseDescription> {
    let pt = |l: &str, p, q, r| BasePoint::new(l, p, q, r).expect("point");
    vec![
        BaseDescription::log_trait(0, 2, Some(2)).expect("base"),
        BaseDescription::log_trait(0, 3, None).expect("base"),
        BaseDescription::log_trait(5, 5, Some(25)).expect("base"),
        BaseDescription::new(
            BaseKind::DedekindWithS,
            0,
            vec![pt("a", 2, Some(4), 1), pt("b", 3, Some(3), 1), pt("c", 7, None, 1)],
        )
        .expect("base"),
        BaseDescription::new(BaseKind::DedekindWithS, 0, vec![pt("u", 0, None, 2), pt("v", 5, Some(5), 0)])
            .expect("base"),
    ]
}

fn direct_images() -> Suite {
    let mut s = Suite::new("direct-images");
    let sheaves = || {
        vec![
            SheafSpec::cyclic(2, 1).expect("sheaf"),
            SheafSpec::cyclic(3, 2).expect("sheaf"),
            SheafSpec::cyclic(5, 1).expect("sheaf"),
            SheafSpec::Lattice { rank: 1 },
            SheafSpec::Lattice { rank: 2 },
            SheafSpec::RationalSpace { dim: 3 },
        ]
    };
    for base in sample_bases() {
        for rank in 1..=2 {
            let lat = SheafSpec::Lattice { rank };
            if let Some(e) = s.run("R^1", higher_direct_image(&base, &lat, 1)) {
                s.check(|| format!("R^1 of a lattice vanishes on {base:?}"), e.is_zero());
            }
            for i in 2..=4 {
                let Some(e) = s.run("lattice image", higher_direct_image(&base, &lat, i)) else { continue };
                for n in [2u64, 3, 4, 6, 9, 10, 12, 35] {
                    let lhs = s.run("torsion", n_torsion_expr(&e, n));
                    let rhs = s.run("finite images", finite_levels(&base, rank, n, i));
                    s.check(
                        || format!("R^{i}(Z^{rank})[{n}] = ⊕_l R^{}(finite) on {base:?}", i - 1),
                        lhs.is_some() && lhs == rhs,
                    );
                }
            }
        }
        for f in sheaves() {
            let d = vanishing_degree(&base, &f);
            for i in 1..=5 {
                let Some(e) = s.run("image", higher_direct_image(&base, &f, i)) else { continue };
                if matches!(f, SheafSpec::RationalSpace { .. }) {
                    s.check(|| "rational images vanish".into(), e.is_zero());
                }
                if i >= d {
                    s.check(|| format!("R^{i}({f}) vanishes past degree {d}"), e.is_zero());
                }
                for (x, m) in e.terms() {
                    let pt = base.point(x).expect("labelled point");
                    let want = match f {
                        SheafSpec::Lattice { .. } => -(i as i64) + 1,
                        _ => -(i as i64),
                    };
                    s.check(|| format!("twist of R^{i}({f}) at {x}"), m.twists().iter().all(|&w| w == want));
                    if let SheafSpec::FiniteLGroup { l, .. } = f {
                        s.check(|| format!("no term of R^{i}({f}) at {x} of characteristic {l}"), pt.p != l);
                    }
                }
            }
        }
    }
    s
}

fn calculators() -> Suite {
    let mut s = Suite::new("calculators");
    for n in 2..=30u64 {
        for w in -2..=2i64 {
            for q in [2u64, 3, 4, 5, 7, 8, 9, 25] {
                let Ok(g) = zhat_cohomology(&ZhatInput::Symbolic(SymbolicModule::cyclic(n, w)), q) else {
                    continue;
                };
                s.check(|| format!("|H^0| = |H^1| for Z/{n}({w}), q = {q}"), g.terms[0].order() == g.terms[1].order());
                s.check(
                    || format!("H^{{≥2}} = 0 for Z/{n}({w}), q = {q}"),
                    g.tail == Tail::Zero && g.terms.iter().skip(2).all(|t| t.is_zero()),
                );
            }
        }
    }
    let g: FgAbGroup = "Z/3+Z/3".parse().expect("group");
    let swap = Homomorphism::new(g.clone(), g.clone(), IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).expect("matrix"))
        .expect("hom");
    let mut sheaves = vec![
        SheafSpec::Lattice { rank: 1 },
        SheafSpec::Lattice { rank: 2 },
        SheafSpec::RationalSpace { dim: 1 },
        SheafSpec::finite(3, g, Some(swap)).expect("sheaf"),
    ];
    for (l, k) in [(2u64, 1u32), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)] {
        sheaves.push(SheafSpec::cyclic(l, k).expect("sheaf"));
    }
    for q in [2u64, 3, 4, 5, 7, 8, 9, 13, 16, 25] {
        let p = arith::prime_power_base(q).expect("prime power");
        for f in &sheaves {
            let c = s.run("computed table", dvr_calculator(q, p, f, Mode::Computed));
            let pp = s.run("paper table", dvr_calculator(q, p, f, Mode::Paper));
            let (Some(c), Some(pp)) = (c, pp) else { continue };
            for t in [&c, &pp] {
                let ok = t.check_exactness();
                s.check(|| format!("exactness for {f} over q = {q}: {ok:?}"), ok.is_ok());
            }
            if c.diagnostics.is_empty() {
                s.check(|| format!("modes agree for {f} over q = {q}"), c.entries == pp.entries);
            }
            s.check(
                || format!("H^0 of {f} over q = {q} is the Frobenius invariants"),
                c.entries[0].module().is_some() && c.lower.terms.first().and_then(|t| t.module()) == c.entries[0].module(),
            );
            if matches!(f, SheafSpec::Lattice { .. }) {
                s.check(
                    || format!("H^1_kfl = H^1_fl for {f} over q = {q}"),
                    c.entries[1].module() == c.lower.get(1).as_ref().and_then(|t| t.module()),
                );
            }
        }
    }
    let pt = |l: &str, p, q| BasePoint::new(l, p, Some(q), 1).expect("point");
    let all_two = BaseDescription::new(BaseKind::DedekindWithS, 0, vec![pt("a", 2, 2), pt("b", 2, 2)]).expect("base");
    let mixed = BaseDescription::new(BaseKind::DedekindWithS, 0, vec![pt("a", 2, 4), pt("b", 3, 3), pt("c", 7, 49)])
        .expect("base");
    for base in [&all_two, &mixed] {
        for f in &sheaves {
            let c = s.run("dedekind", dedekind_calculator(base, f, None, Mode::Computed));
            let pp = s.run("dedekind", dedekind_calculator(base, f, None, Mode::Paper));
            let (Some(c), Some(pp)) = (c, pp) else { continue };
            let ok = c.table.check_exactness();
            s.check(|| format!("Dedekind exactness for {f}: {ok:?}"), ok.is_ok());
            if c.table.diagnostics.is_empty() {
                s.check(|| format!("Dedekind modes agree for {f}"), c.table.entries == pp.table.entries);
            }
            if matches!(f, SheafSpec::Lattice { .. }) && base.points.iter().all(|x| x.q == Some(2)) {
                s.check(|| format!("{f} over residue fields with two elements is iso in all degrees"), c.iso_all);
            }
        }
    }
    s
}

pub fn all_passed(reports: &[SuiteReport]) -> bool {
    reports.iter().all(SuiteReport::passed)
}
