use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use depthtower::algebra::Tower;
use depthtower::builders::tower_from_chain;
use depthtower::depth::{extract_quasibases, is_ld2, is_ld3, is_rd2, is_rd3, verify_quasibases, Side};
use depthtower::galois::{coideal_correspondence, frobenius, jb_roundtrip};
use depthtower::groups::{FiniteGroup, Perm, SubgroupChain};
use depthtower::grouptower::CensusOptions;
use depthtower::structures::{structure_report, Check};
use depthtower::towerfile::{load_tower_file, max_dim, parse_tower_file, quasibase_certificate, quasibases_from_certificate};
use depthtower::{Error, Field};

fn err(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py(py: Python<'_>, v: Value) -> PyResult<PyObject> {
    Ok(py.import("json")?.call_method1("loads", (v.to_string(),))?.unbind())
}

fn from_py(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let s: String = py.import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&s).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn side(s: &str) -> PyResult<Side> {
    match s {
        "right" => Ok(Side::Right),
        "left" => Ok(Side::Left),
        _ => Err(PyValueError::new_err(format!("side must be 'right' or 'left', not '{s}'"))),
    }
}

fn perms(xs: &[String]) -> PyResult<Vec<Perm>> {
    xs.iter().map(|s| Perm::parse(s).map_err(err)).collect()
}

/// A tower `A ⊇ B ⊇ C` of finite-dimensional algebras.
#[pyclass(name = "Tower", module = "depthtower_py")]
struct PyTower {
    inner: Tower,
}

#[pymethods]
impl PyTower {
    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        let tf = load_tower_file(std::path::Path::new(path)).map_err(err)?;
        tf.tower.map(|inner| PyTower { inner }).ok_or_else(|| PyValueError::new_err("file describes a groupoid, not a tower"))
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        let tf = parse_tower_file(text).map_err(err)?;
        tf.tower.map(|inner| PyTower { inner }).ok_or_else(|| PyValueError::new_err("text describes a groupoid, not a tower"))
    }

    /// The group-algebra tower of `K <= H <= G`, generators in cycle notation.
    #[staticmethod]
    #[pyo3(signature = (g, h, k, field = "Q"))]
    fn from_groups(g: Vec<String>, h: Vec<String>, k: Vec<String>, field: &str) -> PyResult<Self> {
        let field = Field::parse(field).map_err(err)?;
        let grp = FiniteGroup::from_permutations(&perms(&g)?, max_dim()).map_err(err)?;
        let hs = grp.subgroup_from_perms(&perms(&h)?).map_err(err)?;
        let ks = grp.subgroup_from_perms(&perms(&k)?).map_err(err)?;
        let chain = SubgroupChain::new(&grp, hs, ks).map_err(err)?;
        Ok(PyTower { inner: tower_from_chain(&chain, field) })
    }

    #[getter]
    fn dims(&self) -> (usize, usize, usize) {
        (self.inner.a.dim(), self.inner.b.dim(), self.inner.c.dim())
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    fn is_rd3(&self) -> PyResult<bool> {
        is_rd3(&self.inner).map_err(err)
    }

    fn is_ld3(&self) -> PyResult<bool> {
        is_ld3(&self.inner).map_err(err)
    }

    /// Depth two of `A | B`, as `(right, left)`.
    fn is_d2(&self) -> PyResult<(bool, bool)> {
        let bg = self.inner.b_gens_in_a();
        Ok((is_rd2(&self.inner.a, &bg).map_err(err)?, is_ld2(&self.inner.a, &bg).map_err(err)?))
    }

    /// Quasibases as a certificate dict, or `None` when the side fails.
    #[pyo3(signature = (side_name = "right"))]
    fn quasibases(&self, py: Python<'_>, side_name: &str) -> PyResult<Option<PyObject>> {
        match extract_quasibases(&self.inner, side(side_name)?) {
            Ok(qb) => to_py(py, quasibase_certificate(&qb)).map(Some),
            Err(Error::NotDepth(_)) => Ok(None),
            Err(e) => Err(err(e)),
        }
    }

    fn verify_certificate(&self, py: Python<'_>, certificate: &Bound<'_, PyAny>) -> PyResult<bool> {
        let qb = quasibases_from_certificate(&from_py(py, certificate)?, self.inner.field()).map_err(err)?;
        Ok(verify_quasibases(&self.inner, &qb).map_err(err)?.is_verified())
    }

    /// Structure checks by name; all tower checks when `checks` is `None`.
    #[pyo3(signature = (checks = None))]
    fn structures(&self, py: Python<'_>, checks: Option<Vec<String>>) -> PyResult<PyObject> {
        let checks: Vec<Check> = match checks {
            Some(cs) => cs.iter().map(|c| c.parse().map_err(err)).collect::<PyResult<_>>()?,
            None => Check::ALL.iter().copied().filter(|c| c.needs_tower()).collect(),
        };
        let r = structure_report(Some(&self.inner), None, &checks).map_err(err)?;
        to_py(py, r.to_json())
    }

    /// Forward and backward checks for the intermediate division ring `B`.
    fn coideal_correspondence(&self, py: Python<'_>) -> PyResult<PyObject> {
        let r = coideal_correspondence(&self.inner).map_err(err)?;
        to_py(py, serde_json::to_value(&r).map_err(|e| PyRuntimeError::new_err(e.to_string()))?)
    }

    fn __repr__(&self) -> String {
        let (a, b, c) = self.dims();
        format!("Tower(field={}, dims=({a}, {b}, {c}))", self.field())
    }
}

/// `F_{p^n}` over `F_p` with its subfield lattice.
#[pyclass(name = "FieldTower", module = "depthtower_py")]
struct PyFieldTower {
    inner: depthtower::galois::FieldTower,
}

#[pymethods]
impl PyFieldTower {
    #[new]
    fn new(p: u64, n: usize) -> PyResult<Self> {
        Ok(PyFieldTower { inner: depthtower::galois::FieldTower::new(p, n).map_err(err)? })
    }

    /// `(d, dim F_d)` for each divisor `d`.
    #[getter]
    fn subfields(&self) -> Vec<(usize, usize)> {
        self.inner.subfields.iter().map(|(d, s)| (*d, s.dim())).collect()
    }

    /// Gal/Fix round trips, with the closure of `λ(E)` and Frobenius.
    fn jb_roundtrip(&self, py: Python<'_>) -> PyResult<PyObject> {
        let t = &self.inner;
        let r = jb_roundtrip(t, &[vec![frobenius(&t.e, t.p, 1)]]).map_err(err)?;
        to_py(py, serde_json::to_value(&r).map_err(|e| PyRuntimeError::new_err(e.to_string()))?)
    }

    fn __repr__(&self) -> String {
        format!("FieldTower(p={}, n={})", self.inner.p, self.inner.n)
    }
}

/// The catalog census as `{"records": [...], "summary": {...}}`.
#[pyfunction]
#[pyo3(signature = (max_order, field = "Q"))]
fn census(py: Python<'_>, max_order: usize, field: &str) -> PyResult<PyObject> {
    let opts = CensusOptions { max_order, field: Field::parse(field).map_err(err)?, ..CensusOptions::default() };
    let c = depthtower::grouptower::census(&opts).map_err(err)?;
    to_py(py, serde_json::to_value(&c).map_err(|e| PyRuntimeError::new_err(e.to_string()))?)
}

/// Whether the normal closure of `K` in `G` lies in `H`.
#[pyfunction]
fn group_criterion(g: Vec<String>, h: Vec<String>, k: Vec<String>) -> PyResult<bool> {
    let grp = FiniteGroup::from_permutations(&perms(&g)?, max_dim()).map_err(err)?;
    let hs = grp.subgroup_from_perms(&perms(&h)?).map_err(err)?;
    let ks = grp.subgroup_from_perms(&perms(&k)?).map_err(err)?;
    Ok(SubgroupChain::new(&grp, hs, ks).map_err(err)?.d3_criterion())
}

#[pymodule]
fn depthtower_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTower>()?;
    m.add_class::<PyFieldTower>()?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(group_criterion, m)?)?;
    Ok(())
}
