use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use logkfl::abelian::{smith_normal_form, FgAbGroup, Homomorphism, IntMatrix};
use logkfl::arith;
use logkfl::calculators::{
    dedekind_calculator, dvr_calculator, zhat_cohomology, GradedModule, ZhatInput,
};
use logkfl::coefficients::{SymbolicModule, ZhatModule};
use logkfl::cohomology::{
    cohomology_bruteforce_bounded, cohomology_cyclic_closed, profinite_closed_form, profinite_colimit_bruteforce,
    standard_ladder, Colimit, FiniteAbelianGroup,
};
use logkfl::direct_image::{higher_direct_image, vanishing_degree, BaseDescription, DirectImageExpr, SheafSpec};
use logkfl::kummer::{cech_cohomology, cech_colimit, kummer_group, LogPointModel};
use logkfl::verify;

use crate::{human, Cli, Command, Format};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<logkfl::Error> for CliError {
    fn from(e: logkfl::Error) -> Self {
        CliError {
            code: if e.is_resource_limit() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

type Out = Result<String, CliError>;

#[derive(Serialize, Deserialize)]
pub struct SnfOut {
    pub matrix: IntMatrix,
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    #[serde(with = "logkfl::serde_int::vec")]
    pub invariant_factors: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
pub struct CohomologyOut {
    pub group: String,
    pub coeff: FgAbGroup,
    pub degree: usize,
    pub value: FgAbGroup,
}

#[derive(Serialize, Deserialize)]
pub struct ProfiniteOut {
    pub rank: usize,
    pub coeff: SymbolicModule,
    pub p: u64,
    pub degree: usize,
    pub closed_form: SymbolicModule,
    pub colimit: Option<Colimit>,
    pub agree: Option<bool>,
}

#[derive(Serialize, Deserialize)]
pub struct CechOut {
    pub model: LogPointModel,
    pub n: u64,
    pub group: FiniteAbelianGroup,
    pub coeff: FgAbGroup,
    pub degree: usize,
    pub value: FgAbGroup,
}

#[derive(Serialize, Deserialize)]
pub struct CechColimitOut {
    pub model: LogPointModel,
    pub coeff: SymbolicModule,
    pub degree: usize,
    pub value: SymbolicModule,
}

#[derive(Serialize, Deserialize)]
pub struct DirectImageOut {
    pub base: BaseDescription,
    pub sheaf: SheafSpec,
    pub degree: usize,
    pub value: DirectImageExpr,
    pub vanishing_degree: usize,
}

#[derive(Serialize, Deserialize)]
pub struct ZhatOut {
    pub q: u64,
    pub input: ZhatInput,
    pub value: GradedModule,
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

fn emit<T: Serialize>(format: Format, x: &T, text: impl FnOnce(&T) -> String) -> String {
    match format {
        Format::Machine => json(x),
        Format::Human => text(x),
    }
}

fn parse_rows(s: &str) -> Result<IntMatrix, CliError> {
    let rows: Vec<Vec<serde_json::Number>> =
        serde_json::from_str(s).map_err(|e| invalid(format!("bad matrix {s:?}: {e}")))?;
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_string().parse::<BigInt>().map_err(|_| invalid(format!("non-integer entry {x}"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.is_empty() {
        return Err(invalid("matrix needs at least one row"));
    }
    Ok(IntMatrix::from_rows(&rows)?)
}

/// Inline JSON, or `@path` to a file holding it.
fn document(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn parse_base(arg: &str) -> Result<BaseDescription, CliError> {
    let text = document(arg)?;
    serde_json::from_str(&text).map_err(|e| {
        let msg = e.to_string();
        if msg.starts_with("unsupported base") {
            invalid(msg)
        } else {
            invalid(format!("bad base description: {msg}"))
        }
    })
}

fn parse<T: std::str::FromStr<Err = logkfl::Error>>(s: &str) -> Result<T, CliError> {
    Ok(s.parse::<T>()?)
}

pub fn run(cli: &Cli) -> Out {
    let f = cli.format;
    let bound = cli.size_bound;
    match &cli.command {
        Command::Snf { matrix } => {
            let a = parse_rows(matrix)?;
            let s = smith_normal_form(&a);
            let out = SnfOut {
                invariant_factors: s.nonzero_diagonal(),
                matrix: a,
                d: s.d,
                u: s.u,
                v: s.v,
            };
            Ok(emit(f, &out, human::snf))
        }
        Command::Group {
            group,
            relations,
            tensor,
            hom,
            exterior,
        } => {
            let g = match (group, relations) {
                (Some(g), _) => parse::<FgAbGroup>(g)?,
                (None, Some(r)) => FgAbGroup::from_presentation(&parse_rows(r)?),
                (None, None) => return Err(invalid("give --group or --relations")),
            };
            let out = match (tensor, hom, exterior) {
                (Some(h), _, _) => g.tensor(&parse(h)?),
                (_, Some(h), _) => g.hom(&parse(h)?),
                (_, _, Some(i)) => g.exterior_power(*i)?,
                _ => g,
            };
            Ok(emit(f, &out, |g| format!("{g}\n")))
        }
        Command::Cohomology { group, coeff, degree } => {
            let g: FiniteAbelianGroup = parse(group)?;
            let m: FgAbGroup = parse(coeff)?;
            let value = cohomology_bruteforce_bounded(&g, &m, *degree, bound)?;
            let out = CohomologyOut {
                group: g.to_string(),
                coeff: m,
                degree: *degree,
                value,
            };
            Ok(emit(f, &out, |o| format!("H^{}({}, {}) = {}\n", o.degree, o.group, o.coeff, o.value)))
        }
        Command::CyclicClosed { m, coeff, degree } => {
            let c: FgAbGroup = parse(coeff)?;
            let value = cohomology_cyclic_closed(*m, &c, *degree)?;
            let out = CohomologyOut {
                group: format!("Z/{m}"),
                coeff: c,
                degree: *degree,
                value,
            };
            Ok(emit(f, &out, |o| format!("H^{}({}, {}) = {}\n", o.degree, o.group, o.coeff, o.value)))
        }
        Command::Profinite {
            rank,
            coeff,
            p,
            degree,
            ladder,
        } => {
            let m: SymbolicModule = parse(coeff)?;
            let closed_form = profinite_closed_form(*rank, &m, *p, *degree)?;
            let colimit = match m.to_group().filter(FgAbGroup::is_finite) {
                Some(g) => {
                    let ladder = match ladder {
                        Some(l) => l.clone(),
                        None => standard_ladder(&g, *p, 3)?,
                    };
                    Some(profinite_colimit_bruteforce(*rank, &g, *p, *degree, &ladder)?)
                }
                None => None,
            };
            let agree = colimit.as_ref().map(|c| closed_form.to_group().as_ref() == Some(&c.value));
            let out = ProfiniteOut {
                rank: *rank,
                coeff: m,
                p: *p,
                degree: *degree,
                closed_form,
                colimit,
                agree,
            };
            Ok(emit(f, &out, human::profinite))
        }
        Command::Cech {
            rank,
            p,
            n,
            coeff,
            degree,
        } => {
            let model = LogPointModel::new(*rank, *p)?;
            let c: FgAbGroup = parse(coeff)?;
            let value = cech_cohomology(&model, *n, &c, *degree, bound)?;
            let out = CechOut {
                group: kummer_group(&model, *n)?,
                model,
                n: *n,
                coeff: c,
                degree: *degree,
                value,
            };
            Ok(emit(f, &out, |o| {
                format!(
                    "H_{}(X) = {}\nȞ^{}(X_{}/X, {}) = {}\n",
                    o.n, o.group, o.degree, o.n, o.coeff, o.value
                )
            }))
        }
        Command::CechColimit { rank, p, coeff, degree } => {
            let model = LogPointModel::new(*rank, *p)?;
            let m: SymbolicModule = parse(coeff)?;
            let value = cech_colimit(&model, &m, *degree)?;
            let out = CechColimitOut {
                model,
                coeff: m,
                degree: *degree,
                value,
            };
            Ok(emit(f, &out, |o| format!("colim_n Ȟ^{}(X_n/X, {}) = {}\n", o.degree, o.coeff, o.value)))
        }
        Command::DirectImage { base, sheaf, degree } => {
            let base = parse_base(base)?;
            let sheaf: SheafSpec = parse(sheaf)?;
            let value = higher_direct_image(&base, &sheaf, *degree)?;
            let out = DirectImageOut {
                vanishing_degree: vanishing_degree(&base, &sheaf),
                base,
                sheaf,
                degree: *degree,
                value,
            };
            Ok(emit(f, &out, |o| {
                format!(
                    "R^{} ε_fl* ({}) = {}\nvanishes from degree {}\n",
                    o.degree, o.sheaf, o.value, o.vanishing_degree
                )
            }))
        }
        Command::Zhat {
            q,
            module,
            group,
            frobenius,
            twist,
        } => {
            let input = match (module, group) {
                (Some(m), _) => ZhatInput::Symbolic(parse(m)?),
                (None, Some(g)) => {
                    let g: FgAbGroup = parse(g)?;
                    let frob = match frobenius {
                        Some(m) => Homomorphism::new(g.clone(), g.clone(), parse_rows(m)?)?,
                        None => Homomorphism::identity(&g),
                    };
                    ZhatInput::Module(ZhatModule::new(g, frob, *twist, *q)?)
                }
                (None, None) => return Err(invalid("give --module or --group")),
            };
            let value = zhat_cohomology(&input, *q)?;
            let out = ZhatOut { q: *q, input, value };
            Ok(emit(f, &out, |o| format!("H^•(Ẑ, M), q = {}: {}\n", o.q, o.value)))
        }
        Command::CalcDvr { q, p, sheaf, mode } => {
            let inferred = arith::prime_power_base(*q).ok_or_else(|| invalid(format!("q = {q} is not a prime power")))?;
            let p = p.unwrap_or(inferred);
            let sheaf: SheafSpec = parse(sheaf)?;
            let t = dvr_calculator(*q, p, &sheaf, *mode)?;
            Ok(emit(f, &t, |t| human::table(&format!("H^i_kfl(X, {sheaf}), q = {q}"), t)))
        }
        Command::CalcDedekind {
            base,
            sheaf,
            etale_row,
            mode,
        } => {
            let base = parse_base(base)?;
            let sheaf: SheafSpec = parse(sheaf)?;
            let row = match etale_row {
                Some(r) => Some(
                    serde_json::from_str::<GradedModule>(&document(r)?)
                        .map_err(|e| invalid(format!("bad étale row: {e}")))?,
                ),
                None => None,
            };
            let r = dedekind_calculator(&base, &sheaf, row, *mode)?;
            Ok(emit(f, &r, |r| {
                let mut s = human::table(&format!("H^i_kfl(X, {sheaf}) over a Dedekind base"), &r.table);
                s.push_str(&format!("{}\n", r.summary));
                s
            }))
        }
        Command::Verify { suite } => {
            let reports = match suite {
                Some(name) => vec![verify::run_suite(name).ok_or_else(|| {
                    invalid(format!("unknown suite {name:?}; known: {}", verify::SUITES.join(", ")))
                })?],
                None => verify::run_all(),
            };
            let text = emit(f, &reports, |r| human::verify(r));
            if verify::all_passed(&reports) {
                Ok(text)
            } else {
                print!("{text}");
                Err(CliError {
                    code: 1,
                    message: "invariant suites failed".into(),
                })
            }
        }
    }
}
