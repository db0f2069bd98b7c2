//! Python bindings for qloci.
//!
//! Structured results cross the boundary as plain dicts and lists, built
//! from the same JSON the CLI emits.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qloci::oracle::{census_bipartite, census_type_a, compare_census, DEFAULT_ORACLE_GUARD};
use qloci::perm;
use qloci::poset::{
    degeneration_poset as poset_for, enumerate_orbits, order_equivalence_report, OrbitNode, DEFAULT_ORBIT_GUARD,
};
use qloci::reduction::{
    bipartite_double, degeneration_poset_arbitrary, enumerate_orbits_arbitrary, AnyRep, JunctionKind, TypeARep,
};
use qloci::rep::rank_to_lace;
use qloci::{BipartiteQuiver, DimensionVector, Field, TypeAQuiver};

create_exception!(pyqloci, QlociError, PyValueError);
create_exception!(pyqloci, GuardExceeded, QlociError);

fn err(e: qloci::Error) -> PyErr {
    match e {
        qloci::Error::GuardExceeded { .. } => GuardExceeded::new_err(e.to_string()),
        _ => QlociError::new_err(e.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<PyObject> {
    let text = serde_json::to_string(value).map_err(|e| QlociError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn parse_field(field: Option<&str>, default: Field) -> PyResult<Option<Field>> {
    match field {
        None => Ok(Some(default)),
        Some(s) => s.parse::<Field>().map(Some).map_err(err),
    }
}

fn dims_of(dims: Vec<usize>) -> DimensionVector {
    DimensionVector(dims)
}

fn bipartite_for(d: &DimensionVector) -> PyResult<BipartiteQuiver> {
    if d.len() % 2 == 0 {
        return Err(QlociError::new_err(format!("{} dimensions: a bipartite quiver has an odd count", d.len())));
    }
    Ok(BipartiteQuiver::new(d.len() / 2))
}

fn word(orientation: &str) -> PyResult<TypeAQuiver> {
    TypeAQuiver::from_word(orientation).map_err(err)
}

/// A representation of a type A quiver over Q or a prime field.
#[pyclass(module = "pyqloci", frozen)]
#[derive(Clone)]
struct Representation {
    inner: AnyRep,
}

#[pymethods]
impl Representation {
    /// Parses the JSON representation format. `field` ("Q" or "Fp:p") is
    /// used for untagged matrices.
    #[staticmethod]
    #[pyo3(signature = (text, field=None))]
    fn from_json(text: &str, field: Option<&str>) -> PyResult<Representation> {
        let field = match field {
            Some(s) => Some(s.parse::<Field>().map_err(err)?),
            None => None,
        };
        AnyRep::from_json_in(text, field).map(|inner| Representation { inner }).map_err(err)
    }

    /// A uniformly random point of the representation space.
    #[staticmethod]
    #[pyo3(signature = (dims, field=None, orientation=None, seed=0))]
    fn random(dims: Vec<usize>, field: Option<&str>, orientation: Option<&str>, seed: u64) -> PyResult<Representation> {
        let field = parse_field(field, Field::Prime(qloci::linalg::DEFAULT_PRIME))?.unwrap();
        let d = dims_of(dims);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inner = match orientation {
            None => AnyRep::Bipartite(
                qloci::rep::Representation::random(bipartite_for(&d)?, d, field, &mut rng).map_err(err)?,
            ),
            Some(o) => AnyRep::TypeA(TypeARep::random(word(o)?, d, field, &mut rng).map_err(err)?),
        };
        Ok(Representation { inner })
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        match &self.inner {
            AnyRep::Bipartite(v) => v.dims().0.clone(),
            AnyRep::TypeA(v) => v.dims().0.clone(),
        }
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    #[getter]
    fn is_bipartite(&self) -> bool {
        matches!(self.inner, AnyRep::Bipartite(_))
    }

    fn to_json(&self) -> PyResult<String> {
        match &self.inner {
            AnyRep::Bipartite(v) => serde_json::to_string(v),
            AnyRep::TypeA(v) => serde_json::to_string(v),
        }
        .map_err(|e| QlociError::new_err(e.to_string()))
    }

    /// The lift to the bipartite double; bipartite input is returned as is.
    fn reduce(&self) -> PyResult<Representation> {
        Ok(Representation { inner: AnyRep::Bipartite(self.bipartite()?) })
    }

    /// Ranks of every interval of the bipartite quiver, keyed by interval.
    fn rank_array(&self) -> PyResult<std::collections::BTreeMap<String, usize>> {
        let v = self.bipartite()?;
        let r = v.rank_array();
        Ok(v.quiver().intervals().iter().map(|j| (j.to_string(), r.get(j))).collect())
    }

    /// Multiplicity of each indecomposable summand, nonzero ones only.
    fn decompose(&self) -> PyResult<std::collections::BTreeMap<String, usize>> {
        let v = self.bipartite()?;
        let lace = rank_to_lace(&v.rank_array(), v.dims()).map_err(err)?;
        Ok(lace.nonzero().map(|(j, k)| (j.to_string(), k)).collect())
    }

    /// Orbit data: rank and lace arrays, block ranks, Zelevinsky
    /// permutation, its length and the orbit dimension.
    fn orbit(&self, py: Python<'_>) -> PyResult<PyObject> {
        let v = self.bipartite()?;
        let lace = rank_to_lace(&v.rank_array(), v.dims()).map_err(err)?;
        let node = OrbitNode::from_lace(lace).map_err(err)?;
        to_py(py, &node)
    }

    fn __repr__(&self) -> String {
        let q = match &self.inner {
            AnyRep::Bipartite(v) => format!("bipartite n={}", v.quiver().n),
            AnyRep::TypeA(v) => format!("orientation {:?}", v.quiver().word()),
        };
        format!("Representation({q}, dims={:?}, field={})", self.dims(), self.field())
    }
}

impl Representation {
    fn bipartite(&self) -> PyResult<qloci::rep::Representation> {
        match &self.inner {
            AnyRep::Bipartite(v) => Ok(v.clone()),
            AnyRep::TypeA(v) => bipartite_double(v.quiver()).lift_rep(v).map_err(err),
        }
    }
}

/// How an orientation is turned into a bipartite one.
#[pyclass(module = "pyqloci", frozen)]
struct ReductionContext {
    inner: qloci::reduction::ReductionContext,
}

#[pymethods]
impl ReductionContext {
    /// Number of sink/source pairs of the bipartite double.
    #[getter]
    fn n(&self) -> usize {
        self.inner.target().n
    }

    #[getter]
    fn dualized(&self) -> bool {
        self.inner.dualized()
    }

    #[getter]
    fn padded(&self) -> bool {
        self.inner.padded()
    }

    /// `(junction, "sink" | "source")` for each inserted vertex.
    #[getter]
    fn insertions(&self) -> Vec<(usize, &'static str)> {
        self.inner
            .insertions()
            .iter()
            .map(|&(i, k)| (i, if k == JunctionKind::Sink { "sink" } else { "source" }))
            .collect()
    }

    fn lift_dimension(&self, dims: Vec<usize>) -> PyResult<Vec<usize>> {
        Ok(self.inner.lift_dimension(&dims_of(dims)).map_err(err)?.0)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| QlociError::new_err(e.to_string()))
    }
}

#[pyfunction]
fn reduce(orientation: &str) -> PyResult<ReductionContext> {
    Ok(ReductionContext { inner: bipartite_double(&word(orientation)?) })
}

/// Orbit closures of `rep(d)` under degeneration.
#[pyclass(module = "pyqloci", frozen)]
struct DegenerationPoset {
    inner: qloci::poset::DegenerationPoset,
}

#[pymethods]
impl DegenerationPoset {
    fn __len__(&self) -> usize {
        self.inner.nodes.len()
    }

    /// Covering pairs `(lower, upper)` as node indices.
    #[getter]
    fn covers(&self) -> Vec<(usize, usize)> {
        self.inner.covers.clone()
    }

    fn node(&self, py: Python<'_>, i: usize) -> PyResult<PyObject> {
        let node = self
            .inner
            .nodes
            .get(i)
            .ok_or_else(|| pyo3::exceptions::PyIndexError::new_err(i))?;
        to_py(py, node)
    }

    fn maximal(&self) -> Vec<usize> {
        self.inner.maximal()
    }

    fn minimal(&self) -> Vec<usize> {
        self.inner.minimal()
    }

    /// Whether the rank order and the reversed Bruhat order agree on
    /// every pair of nodes.
    fn order_consistent(&self) -> bool {
        order_equivalence_report(&self.inner).consistent()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| QlociError::new_err(e.to_string()))
    }
}

#[pyfunction]
#[pyo3(signature = (dims, orientation=None, guard=None))]
fn degeneration_poset(dims: Vec<usize>, orientation: Option<&str>, guard: Option<u128>) -> PyResult<DegenerationPoset> {
    let d = dims_of(dims);
    let guard = guard.unwrap_or(DEFAULT_ORBIT_GUARD);
    let inner = match orientation {
        None => poset_for(&bipartite_for(&d)?, &d, guard),
        Some(o) => degeneration_poset_arbitrary(&bipartite_double(&word(o)?), &d, guard),
    }
    .map_err(err)?;
    Ok(DegenerationPoset { inner })
}

/// Brute-force orbit census over `F_p` compared with the predicted orbits.
#[pyfunction]
#[pyo3(signature = (dims, p=2, orientation=None, guard=None))]
fn oracle(py: Python<'_>, dims: Vec<usize>, p: u32, orientation: Option<&str>, guard: Option<u128>) -> PyResult<PyObject> {
    let d = dims_of(dims);
    let guard = guard.unwrap_or(DEFAULT_ORACLE_GUARD);
    Field::prime(p as u64).map_err(err)?;
    let (census, predicted) = match orientation {
        None => {
            let q = bipartite_for(&d)?;
            let census = census_bipartite(&q, &d, p, guard).map_err(err)?;
            (census, enumerate_orbits(&q, &d, DEFAULT_ORBIT_GUARD).map_err(err)?)
        }
        Some(o) => {
            let ctx = bipartite_double(&word(o)?);
            let census = census_type_a(&ctx, &d, p, guard).map_err(err)?;
            (census, enumerate_orbits_arbitrary(&ctx, &d, DEFAULT_ORBIT_GUARD).map_err(err)?)
        }
    };
    let report = compare_census(&census, &d, predicted.into_iter().map(|n| n.rank_array).collect());
    let out = PyDict::new(py);
    out.set_item("agrees", report.agrees())?;
    out.set_item("census", to_py(py, &census)?)?;
    out.set_item("report", to_py(py, &report)?)?;
    Ok(out.into_any().unbind())
}

fn permutation(one_line: Vec<usize>) -> PyResult<perm::Permutation> {
    perm::Permutation::new(one_line).map_err(err)
}

#[pyfunction]
fn inversion_length(one_line: Vec<usize>) -> PyResult<usize> {
    Ok(perm::inversion_length(&permutation(one_line)?))
}

/// Boxes of Fulton's essential set, 1-based.
#[pyfunction]
fn essential_set(one_line: Vec<usize>) -> PyResult<Vec<(usize, usize)>> {
    Ok(perm::essential_set(&permutation(one_line)?))
}

#[pyfunction]
fn bruhat_leq(u: Vec<usize>, v: Vec<usize>) -> PyResult<bool> {
    perm::bruhat_leq(&permutation(u)?, &permutation(v)?).map_err(err)
}

#[pymodule]
fn pyqloci(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QlociError", m.py().get_type::<QlociError>())?;
    m.add("GuardExceeded", m.py().get_type::<GuardExceeded>())?;
    m.add_class::<Representation>()?;
    m.add_class::<ReductionContext>()?;
    m.add_class::<DegenerationPoset>()?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(degeneration_poset, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(inversion_length, m)?)?;
    m.add_function(wrap_pyfunction!(essential_set, m)?)?;
    m.add_function(wrap_pyfunction!(bruhat_leq, m)?)?;
    Ok(())
}
