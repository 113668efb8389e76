//! Python bindings: groups, graphs, automorphism groups, gadgets and the game.

// the pymethods expansion converts PyErr into itself
#![allow(clippy::useless_conversion)]

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;
use vdgame_core::aut::{self, AutOptions};
use vdgame_core::constructions::{self, ConstructionOptions};
use vdgame_core::game::{
    self, GameConfig, GameError, GameOptions, GameState, Strategy, Transcript,
};
use vdgame_core::group::{self, are_isomorphic, FiniteGroup, GroupError};
use vdgame_core::{Graph, VertexId, VertexTag};

create_exception!(vdgame, VdgameError, PyException);

fn err(e: impl std::fmt::Display) -> PyErr {
    VdgameError::new_err(e.to_string())
}

fn game_err(e: GameError) -> PyErr {
    match e {
        GameError::BadIndex { .. }
        | GameError::Config(_)
        | GameError::Group(GroupError::Parse { .. }) => PyValueError::new_err(e.to_string()),
        e => err(e),
    }
}

fn group_err(e: GroupError) -> PyErr {
    match e {
        GroupError::Parse { .. } => PyValueError::new_err(e.to_string()),
        e => err(e),
    }
}

/// Serializes through JSON into plain Python objects.
fn to_py(py: Python<'_>, value: &impl Serialize) -> PyResult<PyObject> {
    let text = serde_json::to_string(value).map_err(err)?;
    Ok(py
        .import_bound("json")?
        .call_method1("loads", (text,))?
        .unbind())
}

fn options(max_vertices: usize, max_order: usize, verify: bool) -> GameOptions {
    GameOptions {
        construction: ConstructionOptions {
            verify,
            max_group_order: max_order,
            aut: AutOptions {
                max_vertices,
                ..AutOptions::default()
            },
        },
        verify_rounds: verify,
        ..GameOptions::default()
    }
}

/// A finite group given by its Cayley table, identity at index 0.
#[pyclass(name = "Group", module = "vdgame")]
#[derive(Clone)]
struct PyGroup {
    inner: FiniteGroup,
}

#[pymethods]
impl PyGroup {
    /// Build from a spec such as "C3", "D4", "S3", "C2xC2" or "table:path".
    #[new]
    #[pyo3(signature = (spec, max_order = group::DEFAULT_MAX_ORDER))]
    fn new(spec: &str, max_order: usize) -> PyResult<Self> {
        Ok(PyGroup {
            inner: group::build_group(spec, max_order).map_err(group_err)?,
        })
    }

    #[staticmethod]
    fn from_table(rows: Vec<Vec<usize>>) -> PyResult<Self> {
        Ok(PyGroup {
            inner: FiniteGroup::from_table(rows).map_err(group_err)?,
        })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.inner.name().map(str::to_owned)
    }

    #[getter]
    fn table(&self) -> Vec<Vec<usize>> {
        self.inner.rows()
    }

    fn mul(&self, a: usize, b: usize) -> PyResult<usize> {
        if a >= self.inner.order() || b >= self.inner.order() {
            return Err(PyValueError::new_err("element out of range"));
        }
        Ok(self.inner.mul(a, b))
    }

    fn is_abelian(&self) -> bool {
        self.inner.is_abelian()
    }

    fn minimal_generating_set(&self) -> Vec<usize> {
        self.inner.minimal_generating_set()
    }

    fn is_isomorphic(&self, other: &PyGroup) -> bool {
        are_isomorphic(&self.inner, &other.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.order()
    }

    fn __repr__(&self) -> String {
        format!(
            "Group({}, order={})",
            self.inner.name().unwrap_or("?"),
            self.inner.order()
        )
    }
}

/// Simple undirected graph with stable vertex IDs.
#[pyclass(name = "Graph", module = "vdgame")]
#[derive(Clone)]
struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new() -> Self {
        PyGraph {
            inner: Graph::new(),
        }
    }

    #[staticmethod]
    fn from_edges(n: u32, edges: Vec<(VertexId, VertexId)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: Graph::from_edges(n, &edges).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: Graph::from_json(text).map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn hash(&self) -> String {
        self.inner.hash()
    }

    fn add_vertex(&mut self) -> VertexId {
        self.inner.add_vertex(VertexTag::plain())
    }

    fn add_edge(&mut self, u: VertexId, v: VertexId) -> PyResult<bool> {
        self.inner
            .add_edge(u, v)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn remove_vertex(&mut self, v: VertexId) -> PyResult<()> {
        self.inner
            .remove_vertex(v)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// A copy of the graph without `v`.
    fn delete_vertex(&self, v: VertexId) -> PyResult<PyGraph> {
        Ok(PyGraph {
            inner: self
                .inner
                .delete_vertex(v)
                .map_err(|e| PyValueError::new_err(e.to_string()))?,
        })
    }

    fn vertices(&self) -> Vec<VertexId> {
        self.inner.vertex_ids().collect()
    }

    fn edges(&self) -> Vec<(VertexId, VertexId)> {
        self.inner.edges().collect()
    }

    fn neighbors(&self, v: VertexId) -> PyResult<Vec<VertexId>> {
        if !self.inner.contains(v) {
            return Err(PyValueError::new_err(format!("unknown vertex {v}")));
        }
        Ok(self.inner.neighbors(v).collect())
    }

    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.inner.has_edge(u, v)
    }

    fn tag(&self, py: Python<'_>, v: VertexId) -> PyResult<PyObject> {
        let tag = self
            .inner
            .tag(v)
            .ok_or_else(|| PyValueError::new_err(format!("unknown vertex {v}")))?;
        to_py(py, tag)
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn __len__(&self) -> usize {
        self.inner.vertex_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, edges={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }
}

/// Automorphism group of a graph, by generators.
#[pyclass(name = "AutGroup", module = "vdgame")]
struct PyAutGroup {
    inner: aut::AutGroup,
}

#[pymethods]
impl PyAutGroup {
    #[getter]
    fn order(&self) -> u128 {
        self.inner.order()
    }

    /// Each generator as the list of images of `vertices` in order.
    #[getter]
    fn generators(&self) -> Vec<Vec<VertexId>> {
        self.inner.generator_images()
    }

    #[getter]
    fn vertices(&self) -> Vec<VertexId> {
        self.inner.vertices().to_vec()
    }

    fn orbit(&self, v: VertexId) -> PyResult<Vec<VertexId>> {
        let orbit = self
            .inner
            .orbit(v)
            .ok_or_else(|| PyValueError::new_err(format!("unknown vertex {v}")))?;
        Ok(orbit.into_iter().collect())
    }

    fn fixes(&self, v: VertexId) -> bool {
        self.inner.fixes(v)
    }

    fn is_isomorphic_to(&self, group: &PyGroup) -> PyResult<bool> {
        if self.inner.order() != group.inner.order() as u128 {
            return Ok(false);
        }
        let abstract_group =
            aut::aut_as_abstract_group(&self.inner, aut::DEFAULT_ABSTRACT_CAP).map_err(err)?;
        Ok(are_isomorphic(&abstract_group, &group.inner))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_json_value()).expect("serializes")
    }

    fn __repr__(&self) -> String {
        format!(
            "AutGroup(order={}, generators={})",
            self.inner.order(),
            self.inner.generators().len()
        )
    }
}

#[pyfunction]
fn automorphisms(graph: &PyGraph) -> PyResult<PyAutGroup> {
    Ok(PyAutGroup {
        inner: aut::automorphisms(&graph.inner).map_err(err)?,
    })
}

#[pyfunction]
fn automorphism_order(graph: &PyGraph) -> PyResult<u128> {
    Ok(aut::automorphisms(&graph.inner).map_err(err)?.order())
}

#[pyfunction]
fn brute_force_automorphism_order(graph: &PyGraph) -> PyResult<u128> {
    Ok(aut::brute_force_automorphisms(&graph.inner)
        .map_err(err)?
        .order())
}

#[pyfunction]
fn stabilizer_order(graph: &PyGraph, v: VertexId) -> PyResult<u128> {
    aut::stabilizer_order(&graph.inner, v).map_err(err)
}

#[pyfunction]
fn orbit(graph: &PyGraph, v: VertexId) -> PyResult<Vec<VertexId>> {
    Ok(aut::orbit_of(&graph.inner, v)
        .map_err(err)?
        .into_iter()
        .collect())
}

#[pyfunction]
fn graph_isomorphic(a: &PyGraph, b: &PyGraph) -> PyResult<bool> {
    aut::graph_isomorphic(&a.inner, &b.inner).map_err(err)
}

/// Connected graph with automorphism group `group` and an anchor vertex of
/// trivial stabilizer. Returns `(graph, anchor)`.
#[pyfunction]
fn stabilized_graph(group: &PyGroup) -> PyResult<(PyGraph, VertexId)> {
    let sg = constructions::frucht_with_trivial_stabilizer(&group.inner).map_err(err)?;
    Ok((PyGraph { inner: sg.graph }, sg.anchor))
}

/// Rigid graph `H` with vertices `x`, `y` where deleting `x` reveals `group`.
#[pyclass(name = "RevealGadget", module = "vdgame")]
struct PyRevealGadget {
    #[pyo3(get)]
    graph: PyGraph,
    #[pyo3(get)]
    x: VertexId,
    #[pyo3(get)]
    y: VertexId,
    #[pyo3(get)]
    orbit: Vec<VertexId>,
    #[pyo3(get)]
    verified: bool,
    report: Option<constructions::GadgetReport>,
}

#[pymethods]
impl PyRevealGadget {
    /// The five invariant checks, or `None` when built without verification.
    fn report(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &self.report)
    }

    fn __repr__(&self) -> String {
        format!(
            "RevealGadget(vertices={}, x={}, y={})",
            self.graph.inner.vertex_count(),
            self.x,
            self.y
        )
    }
}

#[pyfunction]
#[pyo3(signature = (group, verify = true))]
fn reveal_gadget(group: &PyGroup, verify: bool) -> PyResult<PyRevealGadget> {
    let opts = ConstructionOptions {
        verify,
        ..ConstructionOptions::default()
    };
    let (g, report) = constructions::build_reveal_gadget_with(&group.inner, &opts).map_err(err)?;
    Ok(PyRevealGadget {
        graph: PyGraph { inner: g.graph },
        x: g.x,
        y: g.y,
        orbit: g.orbit.into_iter().collect(),
        verified: g.verified,
        report,
    })
}

/// A game session: the game graph plus the player's strategy.
#[pyclass(name = "Game", module = "vdgame")]
struct PyGame {
    inner: GameState,
}

#[pymethods]
impl PyGame {
    /// `groups[0]` is the starting group, the rest are the challenges.
    #[new]
    #[pyo3(signature = (groups, rounds, verify = true, max_vertices = aut::DEFAULT_MAX_VERTICES, max_order = group::DEFAULT_MAX_ORDER))]
    fn new(
        py: Python<'_>,
        groups: Vec<String>,
        rounds: usize,
        verify: bool,
        max_vertices: usize,
        max_order: usize,
    ) -> PyResult<Self> {
        let state = py.allow_threads(|| {
            let config = GameConfig::from_specs(&groups, rounds, max_order)?;
            game::build_game(config, options(max_vertices, max_order, verify))
        });
        Ok(PyGame {
            inner: state.map_err(game_err)?,
        })
    }

    /// Rebuilds a game from transcript JSON, checking every recorded round.
    #[staticmethod]
    #[pyo3(signature = (transcript, max_vertices = aut::DEFAULT_MAX_VERTICES, max_order = group::DEFAULT_MAX_ORDER))]
    fn replay(
        py: Python<'_>,
        transcript: &str,
        max_vertices: usize,
        max_order: usize,
    ) -> PyResult<Self> {
        let t =
            Transcript::from_json(transcript).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let state = py
            .allow_threads(|| game::replay(&t, max_order, options(max_vertices, max_order, true)));
        Ok(PyGame {
            inner: state.map_err(game_err)?,
        })
    }

    /// Plays one round against `challenge` (1-based) and returns its record.
    fn play(&mut self, py: Python<'_>, challenge: usize) -> PyResult<PyObject> {
        let record = py
            .allow_threads(|| self.inner.play(challenge))
            .map_err(game_err)?;
        to_py(py, &record)
    }

    /// Deletes the strategy vertex without verifying; returns its ID.
    #[pyo3(signature = (challenge, negative_control = false))]
    fn move_only(&mut self, challenge: usize, negative_control: bool) -> PyResult<VertexId> {
        let strategy = if negative_control {
            Strategy::DeleteYCopy
        } else {
            Strategy::RevealX
        };
        self.inner
            .player_move_with(challenge, strategy)
            .map_err(game_err)
    }

    fn verify_round(&mut self, py: Python<'_>) -> PyResult<PyObject> {
        let record = py
            .allow_threads(|| self.inner.verify_round())
            .map_err(game_err)?;
        to_py(py, &record)
    }

    fn check_claim1(
        &self,
        py: Python<'_>,
        layer: usize,
        removed: Vec<VertexId>,
    ) -> PyResult<PyObject> {
        let report = py
            .allow_threads(|| self.inner.check_claim1(layer, &removed))
            .map_err(game_err)?;
        to_py(py, &report)
    }

    fn automorphisms(&self) -> PyResult<PyAutGroup> {
        Ok(PyAutGroup {
            inner: self.inner.current_aut().map_err(game_err)?,
        })
    }

    fn transcript(&self) -> String {
        self.inner.transcript().to_json()
    }

    fn history(&self, py: Python<'_>) -> PyResult<PyObject> {
        to_py(py, &self.inner.history())
    }

    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph {
            inner: self.inner.graph().clone(),
        }
    }

    #[getter]
    fn initial_graph(&self) -> PyGraph {
        PyGraph {
            inner: self.inner.initial_graph().clone(),
        }
    }

    #[getter]
    fn initial_order(&self) -> Option<u128> {
        self.inner.initial_verification().map(|r| r.aut_order)
    }

    #[getter]
    fn round(&self) -> usize {
        self.inner.round()
    }

    #[getter]
    fn remaining_rounds(&self) -> usize {
        self.inner.remaining_rounds()
    }

    #[getter]
    fn finished(&self) -> bool {
        self.inner.is_finished()
    }

    #[getter]
    fn anchors(&self) -> Vec<VertexId> {
        self.inner.anchors().to_vec()
    }

    #[getter]
    fn current_u(&self) -> VertexId {
        self.inner.current_u()
    }

    fn u_layer(&self, j: usize) -> PyResult<Vec<VertexId>> {
        if j > self.inner.config().rounds() {
            return Err(PyValueError::new_err(format!("no layer {j}")));
        }
        Ok(self.inner.u_layer(j).to_vec())
    }

    fn __repr__(&self) -> String {
        format!(
            "Game(vertices={}, round={}/{})",
            self.inner.graph().vertex_count(),
            self.inner.round(),
            self.inner.config().rounds()
        )
    }
}

/// Plays the strategy against every challenge sequence; returns the report.
#[pyfunction]
#[pyo3(signature = (groups, rounds, negative_control = false, max_vertices = aut::DEFAULT_MAX_VERTICES, max_order = group::DEFAULT_MAX_ORDER))]
fn verify_exhaustive(
    py: Python<'_>,
    groups: Vec<String>,
    rounds: usize,
    negative_control: bool,
    max_vertices: usize,
    max_order: usize,
) -> PyResult<PyObject> {
    let strategy = if negative_control {
        Strategy::DeleteYCopy
    } else {
        Strategy::RevealX
    };
    let report = py
        .allow_threads(|| {
            let config = GameConfig::from_specs(&groups, rounds, max_order)?;
            game::verify_exhaustive_with(config, options(max_vertices, max_order, true), strategy)
        })
        .map_err(game_err)?;
    to_py(py, &report)
}

#[pymodule]
fn vdgame(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("VdgameError", m.py().get_type_bound::<VdgameError>())?;
    m.add_class::<PyGroup>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyAutGroup>()?;
    m.add_class::<PyRevealGadget>()?;
    m.add_class::<PyGame>()?;
    m.add_function(wrap_pyfunction!(automorphisms, m)?)?;
    m.add_function(wrap_pyfunction!(automorphism_order, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_automorphism_order, m)?)?;
    m.add_function(wrap_pyfunction!(stabilizer_order, m)?)?;
    m.add_function(wrap_pyfunction!(orbit, m)?)?;
    m.add_function(wrap_pyfunction!(graph_isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(stabilized_graph, m)?)?;
    m.add_function(wrap_pyfunction!(reveal_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(verify_exhaustive, m)?)?;
    let dict = PyDict::new_bound(m.py());
    dict.set_item("max_vertices", aut::DEFAULT_MAX_VERTICES)?;
    dict.set_item("max_order", group::DEFAULT_MAX_ORDER)?;
    m.add("DEFAULTS", dict)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bad_input_becomes_value_error() {
        pyo3::prepare_freethreaded_python();
        Python::with_gil(|py| {
            assert!(
                game_err(GameError::BadIndex { index: 2, k: 1 }).is_instance_of::<PyValueError>(py)
            );
            assert!(game_err(GameError::RoundsExhausted(1)).is_instance_of::<VdgameError>(py));
            assert!(PyGroup::new("Q8", 64)
                .err()
                .unwrap()
                .is_instance_of::<PyValueError>(py));
        });
    }

    #[test]
    fn game_round_trip() {
        pyo3::prepare_freethreaded_python();
        Python::with_gil(|py| {
            let mut game =
                PyGame::new(py, vec!["C2".into(), "C3".into()], 1, true, 20_000, 64).unwrap();
            assert_eq!(game.initial_order(), Some(2));
            let record = game.play(py, 1).unwrap();
            assert_eq!(
                record
                    .bind(py)
                    .get_item("aut_order")
                    .unwrap()
                    .extract::<u128>()
                    .unwrap(),
                3
            );
            let again = PyGame::replay(py, &game.transcript(), 20_000, 64).unwrap();
            assert_eq!(again.graph().hash(), game.graph().hash());
        });
    }
}
