use std::collections::BTreeMap;
use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use strongstable::fixed_edge::{optimal_with_edge as core_optimal_with_edge, stable_pairs as core_stable_pairs};
use strongstable::maxseq::maximal_sequence as core_maximal_sequence;
use strongstable::oracle::{oracle_enumerate, DEFAULT_CAP};
use strongstable::representation::{enumerate_classes as core_enumerate_classes, irreducible_classes as core_irreducible_classes};
use strongstable::rotations::rotation_poset;
use strongstable::solver::is_strongly_stable as core_is_strongly_stable;
use strongstable::{self as core, GenParams};

create_exception!(strongstable, NoSolutionError, PyException, "No strongly stable matching exists.");
create_exception!(strongstable, CapExceededError, PyException, "The oracle refused to enumerate past its cap.");

type ClassList = Vec<BTreeMap<String, Option<u32>>>;

fn no_solution() -> PyErr {
    NoSolutionError::new_err("no strongly stable matching exists")
}

/// A bipartite instance with preference lists that may contain ties.
#[pyclass(name = "Instance", module = "strongstable", frozen)]
struct PyInstance {
    inner: Arc<core::Instance>,
}

#[pymethods]
impl PyInstance {
    /// Parses instance text (`men:`/`women:` headers, then one list per vertex).
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let inner = core::parse_instance(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyInstance { inner: Arc::new(inner) })
    }

    /// Seeded random instance.
    #[staticmethod]
    #[pyo3(signature = (men, women, density = 0.5, ties = 0.0, seed = 0))]
    fn generate(men: usize, women: usize, density: f64, ties: f64, seed: u64) -> PyResult<Self> {
        let params = GenParams {
            men,
            women,
            edge_density: density,
            tie_rate: ties,
            seed,
        };
        params.validate().map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyInstance {
            inner: Arc::new(core::generate_random(&params)),
        })
    }

    #[getter]
    fn men(&self) -> Vec<String> {
        self.inner.men_ids().to_vec()
    }

    #[getter]
    fn women(&self) -> Vec<String> {
        self.inner.women_ids().to_vec()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn to_text(&self) -> String {
        core::serialize_instance(&self.inner)
    }

    /// Builds a matching from `(man, woman)` id pairs.
    fn matching(&self, pairs: Vec<(String, String)>) -> PyResult<PyMatching> {
        let mut idx = Vec::with_capacity(pairs.len());
        for (m, w) in &pairs {
            let mi = self
                .inner
                .man_index(m)
                .ok_or_else(|| PyValueError::new_err(format!("unknown man `{m}`")))?;
            let wi = self
                .inner
                .woman_index(w)
                .ok_or_else(|| PyValueError::new_err(format!("unknown woman `{w}`")))?;
            idx.push((mi, wi));
        }
        let inner = core::Matching::from_pairs(&self.inner, idx).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(self.wrap(inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(men={}, women={}, edges={})",
            self.inner.men_count(),
            self.inner.women_count(),
            self.inner.edge_count()
        )
    }
}

impl PyInstance {
    fn wrap(&self, inner: core::Matching) -> PyMatching {
        PyMatching {
            inner,
            inst: Arc::clone(&self.inner),
        }
    }

    fn pair_ids(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = pairs
            .into_iter()
            .map(|(m, w)| (self.inner.man_id(m).to_owned(), self.inner.woman_id(w).to_owned()))
            .collect();
        out.sort();
        out
    }

    fn signature_dict(&self, sig: &core::Signature) -> BTreeMap<String, Option<u32>> {
        sig.ranks()
            .iter()
            .enumerate()
            .map(|(m, r)| (self.inner.man_id(m).to_owned(), *r))
            .collect()
    }
}

/// A matching of a particular instance.
#[pyclass(name = "Matching", module = "strongstable", frozen)]
struct PyMatching {
    inner: core::Matching,
    inst: Arc<core::Instance>,
}

#[pymethods]
impl PyMatching {
    /// `(man, woman)` pairs sorted by man id.
    fn pairs(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = self
            .inner
            .pairs()
            .map(|(m, w)| (self.inst.man_id(m).to_owned(), self.inst.woman_id(w).to_owned()))
            .collect();
        out.sort();
        out
    }

    /// Rank of each man's partner, `None` if unmatched.
    fn signature(&self) -> BTreeMap<String, Option<u32>> {
        (0..self.inst.men_count())
            .map(|m| (self.inst.man_id(m).to_owned(), self.inner.man_rank(&self.inst, m)))
            .collect()
    }

    fn to_text(&self) -> String {
        core::format_matching(&self.inst, &self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __eq__(&self, other: &PyMatching) -> bool {
        self.pairs() == other.pairs()
    }

    fn __repr__(&self) -> String {
        let body: Vec<String> = self.pairs().iter().map(|(m, w)| format!("{m}-{w}")).collect();
        format!("Matching({})", body.join(" "))
    }
}

#[pyfunction]
fn man_optimal(inst: &PyInstance) -> PyResult<PyMatching> {
    core::man_optimal(&inst.inner).map(|m| inst.wrap(m)).map_err(|_| no_solution())
}

#[pyfunction]
fn woman_optimal(inst: &PyInstance) -> PyResult<PyMatching> {
    core::woman_optimal(&inst.inner).map(|m| inst.wrap(m)).map_err(|_| no_solution())
}

/// Edges blocking the matching, as `(man, woman)` pairs.
#[pyfunction]
fn blocking_edges(inst: &PyInstance, matching: &PyMatching) -> PyResult<Vec<(String, String)>> {
    let report = core::blocking_edges(&inst.inner, &matching.inner).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(inst.pair_ids(report.edges.iter().map(|&e| (inst.inner.edge(e).man, inst.inner.edge(e).woman))))
}

#[pyfunction]
fn is_strongly_stable(inst: &PyInstance, matching: &PyMatching) -> bool {
    matching.inner.check_against(&inst.inner).is_ok() && core_is_strongly_stable(&inst.inner, &matching.inner)
}

/// Every edge in some strongly stable matching.
#[pyfunction]
fn stable_pairs(py: Python<'_>, inst: &PyInstance) -> Vec<(String, String)> {
    let edges = py.detach(|| core_stable_pairs(&inst.inner));
    inst.pair_ids(edges.iter().map(|&e| (inst.inner.edge(e).man, inst.inner.edge(e).woman)))
}

/// The man-optimal strongly stable matching containing `(man, woman)`, or
/// `None` if there is none.
#[pyfunction]
fn optimal_with_edge(inst: &PyInstance, man: &str, woman: &str) -> PyResult<Option<PyMatching>> {
    let e = inst
        .inner
        .man_index(man)
        .zip(inst.inner.woman_index(woman))
        .and_then(|(m, w)| inst.inner.edge_between(m, w))
        .ok_or_else(|| PyValueError::new_err(format!("`{man}`-`{woman}` is not an edge")))?;
    Ok(core_optimal_with_edge(&inst.inner, e).ok().map(|m| inst.wrap(m)))
}

/// Signatures of the irreducible classes, plus covering pairs `(above, below)`.
#[pyfunction]
fn irreducible_classes(
    py: Python<'_>,
    inst: &PyInstance,
) -> PyResult<(ClassList, Vec<(usize, usize)>)> {
    let poset = py.detach(|| core_irreducible_classes(&inst.inner)).map_err(|_| no_solution())?;
    let classes = poset
        .elements()
        .iter()
        .map(|el| inst.signature_dict(&el.class.signature))
        .collect();
    Ok((classes, poset.covers()))
}

/// One representative matching per equivalence class.
#[pyfunction]
fn enumerate_classes(py: Python<'_>, inst: &PyInstance) -> PyResult<Vec<PyMatching>> {
    let classes = py.detach(|| core_enumerate_classes(&inst.inner)).map_err(|_| no_solution())?;
    Ok(classes.into_iter().map(|c| inst.wrap(c.representative)).collect())
}

/// A maximal chain of classes from man-optimal to woman-optimal.
#[pyfunction]
fn maximal_sequence(py: Python<'_>, inst: &PyInstance) -> PyResult<Vec<PyMatching>> {
    let seq = py
        .detach(|| core_maximal_sequence(&inst.inner))
        .map_err(|e| match e {
            strongstable::maxseq::SequenceError::NoSolution(_) => no_solution(),
            other => PyException::new_err(other.to_string()),
        })?;
    Ok(seq.matchings.into_iter().map(|m| inst.wrap(m)).collect())
}

#[pyfunction]
fn has_intermediate(py: Python<'_>, inst: &PyInstance) -> PyResult<bool> {
    Ok(maximal_sequence(py, inst)?.len() >= 3)
}

/// Rotations as `{man: (rank_before, rank_after)}` maps, plus covering pairs
/// `(i, j)` meaning rotation `i` must come before rotation `j`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn rotations(
    py: Python<'_>,
    inst: &PyInstance,
) -> PyResult<(Vec<BTreeMap<String, (u32, u32)>>, Vec<(usize, usize)>)> {
    let poset = py.detach(|| rotation_poset(&inst.inner)).map_err(|e| match e {
        strongstable::rotations::RotationError::NoSolution(_) => no_solution(),
        other => PyException::new_err(other.to_string()),
    })?;
    let rots = poset
        .rotations()
        .iter()
        .map(|r| {
            r.moved_men
                .iter()
                .map(|(&m, &moves)| (inst.inner.man_id(m).to_owned(), moves))
                .collect()
        })
        .collect();
    Ok((rots, poset.covers()))
}

/// Every strongly stable matching, by exhaustive search.
#[pyfunction]
#[pyo3(signature = (inst, cap = DEFAULT_CAP))]
fn oracle(py: Python<'_>, inst: &PyInstance, cap: u64) -> PyResult<Vec<PyMatching>> {
    let result = py
        .detach(|| oracle_enumerate(&inst.inner, cap))
        .map_err(|e| CapExceededError::new_err(e.to_string()))?;
    Ok(result.all_stable.into_iter().map(|m| inst.wrap(m)).collect())
}

/// The `strongstable` Python module.
#[pymodule(name = "strongstable")]
pub fn strongstable_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyMatching>()?;
    m.add("NoSolutionError", m.py().get_type::<NoSolutionError>())?;
    m.add("CapExceededError", m.py().get_type::<CapExceededError>())?;
    m.add_function(wrap_pyfunction!(man_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(woman_optimal, m)?)?;
    m.add_function(wrap_pyfunction!(blocking_edges, m)?)?;
    m.add_function(wrap_pyfunction!(is_strongly_stable, m)?)?;
    m.add_function(wrap_pyfunction!(stable_pairs, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_with_edge, m)?)?;
    m.add_function(wrap_pyfunction!(irreducible_classes, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_classes, m)?)?;
    m.add_function(wrap_pyfunction!(maximal_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(has_intermediate, m)?)?;
    m.add_function(wrap_pyfunction!(rotations, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    Ok(())
}
