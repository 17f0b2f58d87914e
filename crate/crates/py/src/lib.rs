//! Python bindings. Groups come back as `Group` objects, symbolic results as
//! strings, and calculator tables as `Table` objects that also carry their JSON.

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use logkfl::abelian::{smith_normal_form, FgAbGroup, IntMatrix};
use logkfl::calculators::{self, zhat_cohomology, CohomologyTable, Mode, ZhatInput};
use logkfl::coefficients::SymbolicModule;
use logkfl::cohomology::{self as coh, standard_ladder, FiniteAbelianGroup, DEFAULT_SIZE_BOUND};
use logkfl::direct_image::{self as di, BaseDescription, SheafSpec};
use logkfl::kummer::{self, LogPointModel};

create_exception!(logkfl, ResourceLimit, PyRuntimeError, "Size bound hit or colimit not stabilized.");

fn err(e: logkfl::Error) -> PyErr {
    if e.is_resource_limit() {
        ResourceLimit::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn parse<T: std::str::FromStr<Err = logkfl::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

fn matrix(rows: Vec<Vec<BigInt>>) -> PyResult<IntMatrix> {
    if rows.is_empty() {
        return Err(PyValueError::new_err("matrix needs at least one row"));
    }
    IntMatrix::from_rows(&rows).map_err(err)
}

fn rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
}

fn base(text: &str) -> PyResult<BaseDescription> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(format!("bad base description: {e}")))
}

fn mode(s: &str) -> PyResult<Mode> {
    parse(s)
}

/// Finitely generated abelian group Z^r ⊕ Z/d_1 ⊕ … with d_1 | d_2 | ….
#[pyclass(name = "Group", module = "logkfl", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct Group(FgAbGroup);

/// A `Group` or anything its constructor accepts.
#[derive(FromPyObject)]
enum GroupLike {
    G(Py<Group>),
    S(String),
}

impl GroupLike {
    fn get(self, py: Python<'_>) -> PyResult<FgAbGroup> {
        match self {
            GroupLike::G(g) => Ok(g.bind(py).get().0.clone()),
            GroupLike::S(s) => parse(&s),
        }
    }
}

#[pymethods]
impl Group {
    #[new]
    fn new(notation: &str) -> PyResult<Self> {
        parse(notation).map(Group)
    }

    #[staticmethod]
    fn from_relations(relations: Vec<Vec<BigInt>>) -> PyResult<Self> {
        Ok(Group(FgAbGroup::from_presentation(&matrix(relations)?)))
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank()
    }

    #[getter]
    fn torsion(&self) -> Vec<BigInt> {
        self.0.torsion().to_vec()
    }

    /// None when the group is infinite.
    fn order(&self) -> Option<BigInt> {
        self.0.order()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn direct_sum(&self, py: Python<'_>, other: GroupLike) -> PyResult<Group> {
        Ok(Group(self.0.direct_sum(&other.get(py)?)))
    }

    fn tensor(&self, py: Python<'_>, other: GroupLike) -> PyResult<Group> {
        Ok(Group(self.0.tensor(&other.get(py)?)))
    }

    fn hom(&self, py: Python<'_>, other: GroupLike) -> PyResult<Group> {
        Ok(Group(self.0.hom(&other.get(py)?)))
    }

    fn exterior_power(&self, i: usize) -> PyResult<Group> {
        self.0.exterior_power(i).map(Group).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serializable")
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.0.to_string())
    }
}

/// Result of a calculator: one entry string per degree plus diagnostics.
#[pyclass(name = "Table", module = "logkfl", frozen, skip_from_py_object)]
pub struct Table {
    inner: CohomologyTable,
    summary: Option<String>,
    json: String,
}

#[pymethods]
impl Table {
    #[getter]
    fn entries(&self) -> Vec<String> {
        self.inner.entries.iter().map(|e| e.to_string()).collect()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        match self.inner.mode {
            Mode::Computed => "computed",
            Mode::Paper => "paper",
        }
    }

    /// True when every degree past `entries` vanishes.
    #[getter]
    fn tail_zero(&self) -> bool {
        matches!(self.inner.tail, calculators::Tail::Zero)
    }

    /// `(degree, term, computed, claimed)` for each vanishing claim that fails.
    #[getter]
    fn diagnostics(&self) -> Vec<(usize, String, String, String)> {
        self.inner
            .diagnostics
            .iter()
            .map(|d| (d.degree, d.term.clone(), d.computed.to_string(), d.paper.to_string()))
            .collect()
    }

    #[getter]
    fn summary(&self) -> Option<String> {
        self.summary.clone()
    }

    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __len__(&self) -> usize {
        self.inner.entries.len()
    }

    fn __getitem__(&self, i: usize) -> PyResult<String> {
        self.inner
            .entry(i)
            .map(|e| e.to_string())
            .ok_or_else(|| pyo3::exceptions::PyIndexError::new_err(i))
    }

    fn __repr__(&self) -> String {
        format!("Table({}, mode={})", self.entries().join(", "), self.mode())
    }
}

/// Smith normal form: returns `(D, U, V)` with `U A V = D`.
#[pyfunction]
fn snf(matrix_rows: Vec<Vec<BigInt>>) -> PyResult<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>)> {
    let s = smith_normal_form(&matrix(matrix_rows)?);
    Ok((rows(&s.d), rows(&s.u), rows(&s.v)))
}

/// H^i(G, M) from the standard complex of a finite abelian group.
#[pyfunction]
#[pyo3(signature = (group, coeff, degree, size_bound = DEFAULT_SIZE_BOUND))]
fn cohomology(py: Python<'_>, group: &str, coeff: GroupLike, degree: usize, size_bound: u128) -> PyResult<Group> {
    let g: FiniteAbelianGroup = parse(group)?;
    let m = coeff.get(py)?;
    py.detach(|| coh::cohomology_bruteforce_bounded(&g, &m, degree, size_bound))
        .map(Group)
        .map_err(err)
}

/// H^i(Z/m, M) by periodicity.
#[pyfunction]
fn cyclic_closed(py: Python<'_>, m: u64, coeff: GroupLike, degree: usize) -> PyResult<Group> {
    coh::cohomology_cyclic_closed(m, &coeff.get(py)?, degree).map(Group).map_err(err)
}

/// Closed form for the prime-to-p completion of Z^r, as a module string.
#[pyfunction]
fn profinite(rank: usize, coeff: &str, p: u64, degree: usize) -> PyResult<String> {
    let m: SymbolicModule = parse(coeff)?;
    coh::profinite_closed_form(rank, &m, p, degree).map(|x| x.to_string()).map_err(err)
}

/// The same group as a colimit over a ladder of finite levels; M finite.
#[pyfunction]
#[pyo3(signature = (rank, coeff, p, degree, ladder = None))]
fn profinite_colimit(
    py: Python<'_>,
    rank: usize,
    coeff: GroupLike,
    p: u64,
    degree: usize,
    ladder: Option<Vec<u64>>,
) -> PyResult<Group> {
    let g = coeff.get(py)?;
    let ladder = match ladder {
        Some(l) => l,
        None => standard_ladder(&g, p, 3).map_err(err)?,
    };
    py.detach(|| coh::profinite_colimit_bruteforce(rank, &g, p, degree, &ladder))
        .map(|c| Group(c.value))
        .map_err(err)
}

/// Čech cohomology of the Kummer cover X_n/X of a rank-r log point.
#[pyfunction]
#[pyo3(signature = (rank, p, n, coeff, degree, size_bound = DEFAULT_SIZE_BOUND))]
fn cech(py: Python<'_>, rank: usize, p: u64, n: u64, coeff: GroupLike, degree: usize, size_bound: u128) -> PyResult<Group> {
    let model = LogPointModel::new(rank, p).map_err(err)?;
    let m = coeff.get(py)?;
    py.detach(|| kummer::cech_cohomology(&model, n, &m, degree, size_bound))
        .map(Group)
        .map_err(err)
}

#[pyfunction]
fn cech_colimit(rank: usize, p: u64, coeff: &str, degree: usize) -> PyResult<String> {
    let model = LogPointModel::new(rank, p).map_err(err)?;
    kummer::cech_colimit(&model, &parse(coeff)?, degree).map(|x| x.to_string()).map_err(err)
}

/// R^i ε_fl* F for a base given as JSON.
#[pyfunction]
fn direct_image(base_json: &str, sheaf: &str, degree: usize) -> PyResult<String> {
    let sheaf: SheafSpec = parse(sheaf)?;
    di::higher_direct_image(&base(base_json)?, &sheaf, degree)
        .map(|x| x.to_string())
        .map_err(err)
}

/// `[H^0, H^1, …]` of Gal(F_q) with coefficients in a symbolic module.
#[pyfunction]
fn zhat(q: u64, module: &str) -> PyResult<Vec<String>> {
    let g = zhat_cohomology(&ZhatInput::Symbolic(parse(module)?), q).map_err(err)?;
    Ok(g.terms.iter().map(|t| t.to_string()).collect())
}

#[pyfunction]
#[pyo3(signature = (q, sheaf, mode = "computed", p = None))]
fn calc_dvr(q: u64, sheaf: &str, mode: &str, p: Option<u64>) -> PyResult<Table> {
    let p = match p.or_else(|| logkfl::arith::prime_power_base(q)) {
        Some(p) => p,
        None => return Err(PyValueError::new_err(format!("q = {q} is not a prime power"))),
    };
    let t = calculators::dvr_calculator(q, p, &parse(sheaf)?, self::mode(mode)?).map_err(err)?;
    let json = serde_json::to_string(&t).expect("serializable");
    Ok(Table {
        inner: t,
        summary: None,
        json,
    })
}

#[pyfunction]
#[pyo3(signature = (base_json, sheaf, mode = "computed"))]
fn calc_dedekind(base_json: &str, sheaf: &str, mode: &str) -> PyResult<Table> {
    let r = calculators::dedekind_calculator(&base(base_json)?, &parse(sheaf)?, None, self::mode(mode)?)
        .map_err(err)?;
    let json = serde_json::to_string(&r).expect("serializable");
    Ok(Table {
        inner: r.table,
        summary: Some(r.summary),
        json,
    })
}

/// Runs the invariant suites; returns `(name, checks, failures)` per suite.
#[pyfunction]
#[pyo3(signature = (suite = None))]
fn verify(py: Python<'_>, suite: Option<String>) -> PyResult<Vec<(String, usize, Vec<String>)>> {
    let reports = match suite {
        Some(name) => vec![logkfl::verify::run_suite(&name)
            .ok_or_else(|| PyValueError::new_err(format!("unknown suite {name:?}")))?],
        None => py.detach(logkfl::verify::run_all),
    };
    Ok(reports.into_iter().map(|r| (r.name, r.checks, r.failures)).collect())
}

#[pymodule]
#[pyo3(name = "logkfl")]
fn logkfl_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ResourceLimit", m.py().get_type::<ResourceLimit>())?;
    m.add_class::<Group>()?;
    m.add_class::<Table>()?;
    m.add_function(wrap_pyfunction!(snf, m)?)?;
    m.add_function(wrap_pyfunction!(cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(cyclic_closed, m)?)?;
    m.add_function(wrap_pyfunction!(profinite, m)?)?;
    m.add_function(wrap_pyfunction!(profinite_colimit, m)?)?;
    m.add_function(wrap_pyfunction!(cech, m)?)?;
    m.add_function(wrap_pyfunction!(cech_colimit, m)?)?;
    m.add_function(wrap_pyfunction!(direct_image, m)?)?;
    m.add_function(wrap_pyfunction!(zhat, m)?)?;
    m.add_function(wrap_pyfunction!(calc_dvr, m)?)?;
    m.add_function(wrap_pyfunction!(calc_dedekind, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
