//! Python bindings for the rectilinear planarity tester.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rlp_core::builder::build;
use rlp_core::layout::{draw, emit_svg};
use rlp_core::oracle::{oracle_verdict, verify_drawing, DEFAULT_CAP};
use rlp_core::tester::{Outcome, Verdict as CoreVerdict};

fn err(e: rlp_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A series-parallel term.
#[pyclass(frozen, eq, skip_from_py_object, module = "rlp")]
#[derive(Clone, PartialEq)]
pub struct Term(rlp_core::SpTerm);

#[pymethods]
impl Term {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        rlp_core::parse_spterm(text).map(Term).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        rlp_core::term_from_json(text).map(|g| Term(g.term)).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        rlp_core::term_to_json(&self.0).map_err(err)
    }

    fn canonical(&self) -> Self {
        Term(self.0.canonical())
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Term('{}')", self.0)
    }
}

/// Result of the rectilinearity test.
#[pyclass(frozen, module = "rlp")]
pub struct Verdict(CoreVerdict);

#[pymethods]
impl Verdict {
    #[getter]
    fn accepted(&self) -> bool {
        self.0.accepted()
    }

    /// Rejection reason, or `None` when accepted.
    #[getter]
    fn reason(&self) -> Option<String> {
        match self.0.outcome {
            Outcome::Accepted { .. } => None,
            Outcome::Rejected(r) => Some(r.reason.to_string()),
        }
    }

    /// Feasible root-child spiralities as a doubled `(lo, hi)` pair.
    #[getter]
    fn feasible(&self) -> Option<(i64, i64)> {
        match self.0.outcome {
            Outcome::Accepted { feasible } => feasible.bounds(),
            Outcome::Rejected(_) => None,
        }
    }

    /// `(node, label, interval)` per tree node in post-order.
    fn intervals(&self) -> Vec<(u32, String, String)> {
        let tree = self.0.tree();
        tree.postorder()
            .filter(|&id| id != tree.root())
            .map(|id| (id.0, tree.node(id).label(), self.0.intervals[id.idx()].to_string()))
            .collect()
    }

    fn __repr__(&self) -> String {
        match self.0.outcome {
            Outcome::Accepted { feasible } => format!("Verdict(accepted, feasible={feasible})"),
            Outcome::Rejected(r) => format!("Verdict(rejected at node {}: {})", r.node, r.reason),
        }
    }
}

/// Grid coordinates of an accepted graph.
#[pyclass(frozen, module = "rlp")]
pub struct Drawing {
    #[pyo3(get)]
    coords: Vec<(i64, i64)>,
    #[pyo3(get)]
    edges: Vec<(u32, u32)>,
    svg: String,
}

#[pymethods]
impl Drawing {
    fn svg(&self) -> &str {
        &self.svg
    }
}

#[pyfunction]
fn test(term: &Term) -> PyResult<Verdict> {
    rlp_core::test(&term.0).map(Verdict).map_err(err)
}

/// Draws an accepted term; raises `ValueError` if it is rejected.
#[pyfunction]
#[pyo3(signature = (term, scale = 24))]
fn draw_term(term: &Term, scale: u32) -> PyResult<Drawing> {
    let v = rlp_core::test(&term.0).map_err(err)?;
    let c = build(&v).map_err(err)?;
    let g = c.rep.graph();
    let d = draw(&c.rep).map_err(err)?;
    if !verify_drawing(&d, g).passed() {
        return Err(PyValueError::new_err("drawing failed verification"));
    }
    Ok(Drawing {
        coords: d.coords.iter().map(|&[x, y]| (x, y)).collect(),
        edges: g.edges().iter().map(|&[a, b]| (a.0, b.0)).collect(),
        svg: emit_svg(&d, g, scale),
    })
}

/// Exhaustive check of small graphs: whether a drawing without bends exists.
#[pyfunction]
#[pyo3(signature = (term, cap = DEFAULT_CAP))]
fn oracle(term: &Term, cap: usize) -> PyResult<bool> {
    let rooted = rlp_core::build_spq_tree(&term.0).map_err(err)?;
    oracle_verdict(&rooted, cap).map(|v| v.rectilinear).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (edges, seed, min_chain = 1))]
fn random_term(edges: usize, seed: u64, min_chain: u32) -> PyResult<Term> {
    let params = rlp_core::GenParams { min_chain, ..Default::default() };
    rlp_core::gen_random_spterm_with(edges, seed, params).map(Term).map_err(err)
}

#[pymodule]
fn rlp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Term>()?;
    m.add_class::<Verdict>()?;
    m.add_class::<Drawing>()?;
    m.add_function(wrap_pyfunction!(test, m)?)?;
    m.add_function(wrap_pyfunction!(draw_term, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(random_term, m)?)?;
    Ok(())
}
