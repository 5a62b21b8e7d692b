//! JSON graph format and conversion back to a term by series-parallel
//! reduction.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{to_plane_graph, EdgeId, PlaneGraph, VertexId};
use crate::term::SpTerm;

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<u64>,
    terminals: [u64; 2],
    rotation: BTreeMap<String, Vec<usize>>,
    edges: Vec<[u64; 2]>,
}

/// A graph read from JSON together with its term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImportedGraph {
    pub term: SpTerm,
    /// Input id of every vertex of `to_plane_graph(&term)`.
    pub vertex_ids: Vec<u64>,
}

/// Serializes a graph; vertex ids are vertex indices and edge ids are
/// positions in `edges`.
pub fn graph_to_json(graph: &PlaneGraph) -> String {
    let doc = GraphJson {
        vertices: graph.vertices().map(|v| u64::from(v.0)).collect(),
        terminals: graph.terminals().map(|t| u64::from(t.0)),
        rotation: graph
            .vertices()
            .map(|v| (v.0.to_string(), graph.rotation(v).iter().map(|e| e.idx()).collect()))
            .collect(),
        edges: graph.edges().iter().map(|&[a, b]| [u64::from(a.0), u64::from(b.0)]).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// JSON of the graph realized by `term`.
pub fn term_to_json(term: &SpTerm) -> Result<String> {
    Ok(graph_to_json(&to_plane_graph(term)?))
}

/// Reads a graph in the JSON format into a [`PlaneGraph`] and the input id
/// of every vertex.
pub fn graph_from_json(text: &str) -> Result<(PlaneGraph, Vec<u64>)> {
    let doc: GraphJson = serde_json::from_str(text)?;
    let index: HashMap<u64, VertexId> =
        doc.vertices.iter().enumerate().map(|(i, &id)| (id, VertexId::from(i))).collect();
    if index.len() != doc.vertices.len() {
        return Err(Error::InvalidGraph("duplicate vertex id".into()));
    }
    let vertex = |id: u64| index.get(&id).copied().ok_or_else(|| Error::InvalidGraph(format!("unknown vertex {id}")));
    let edges = doc.edges.iter().map(|&[a, b]| Ok([vertex(a)?, vertex(b)?])).collect::<Result<Vec<_>>>()?;
    let mut rotation = vec![Vec::new(); doc.vertices.len()];
    for (key, rot) in &doc.rotation {
        let id: u64 =
            key.parse().map_err(|_| Error::InvalidGraph(format!("rotation key {key:?} is not a vertex id")))?;
        rotation[vertex(id)?.idx()] = rot.iter().map(|&e| EdgeId::from(e)).collect();
    }
    let terminals = [vertex(doc.terminals[0])?, vertex(doc.terminals[1])?];
    Ok((PlaneGraph::new(edges, rotation, terminals)?, doc.vertices))
}

/// Reads a graph in the JSON format and recovers its term.
///
/// # Errors
/// `Json` or `InvalidGraph` for malformed input, `NotSeriesParallel` if the
/// reduction gets stuck or the embedding differs from the one the term
/// realizes.
pub fn term_from_json(text: &str) -> Result<ImportedGraph> {
    let (graph, ids) = graph_from_json(text)?;
    let term = reduce(&graph)?;
    let realized = to_plane_graph(&term)?;
    let (code_in, order_in) = rotation_code(&graph);
    let (code_out, order_out) = rotation_code(&realized);
    if code_in != code_out {
        return Err(Error::NotSeriesParallel("embedding does not match the recovered term".into()));
    }
    let mut vertex_ids = vec![0; realized.vertex_count()];
    for (a, b) in order_in.iter().zip(&order_out) {
        vertex_ids[b.idx()] = ids[a.idx()];
    }
    Ok(ImportedGraph { term, vertex_ids })
}

#[derive(Clone, Copy)]
struct Ref {
    part: usize,
    flipped: bool,
}

enum Part {
    Edge,
    Series(Vec<Ref>),
    Parallel(Vec<Ref>),
}

struct VEdge {
    ends: [usize; 2],
    part: Ref,
}

struct Reducer {
    parts: Vec<Part>,
    edges: Vec<VEdge>,
    rot: Vec<Vec<usize>>,
    terminals: [usize; 2],
}

impl Reducer {
    fn other(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e].ends;
        if a == v {
            b
        } else {
            a
        }
    }

    /// Edge `e` as a part oriented away from `from`.
    fn from(&self, e: usize, from: usize) -> Ref {
        let r = self.edges[e].part;
        Ref { part: r.part, flipped: r.flipped ^ (self.edges[e].ends[0] != from) }
    }

    fn add(&mut self, ends: [usize; 2], part: Part) -> usize {
        self.parts.push(part);
        self.edges.push(VEdge { ends, part: Ref { part: self.parts.len() - 1, flipped: false } });
        self.edges.len() - 1
    }

    fn is_terminal(&self, v: usize) -> bool {
        self.terminals.contains(&v)
    }

    fn replace(&mut self, v: usize, old: usize, new: usize) {
        let slot = self.rot[v].iter().position(|&e| e == old).expect("edge at its endpoint");
        self.rot[v][slot] = new;
    }

    fn series(&mut self, w: usize) -> Option<[usize; 2]> {
        if self.is_terminal(w) || self.rot[w].len() != 2 {
            return None;
        }
        let [a, b] = [self.rot[w][0], self.rot[w][1]];
        let (x, y) = (self.other(a, w), self.other(b, w));
        if x == y {
            return None;
        }
        let parts = vec![self.from(a, x), self.from(b, w)];
        let n = self.add([x, y], Part::Series(parts));
        self.replace(x, a, n);
        self.replace(y, b, n);
        self.rot[w].clear();
        Some([x, y])
    }

    /// Consecutive edges `e1`, `e2` at `v` leading to the same vertex `y`
    /// and bounding a face of length two.
    fn parallel(&mut self, v: usize) -> Option<usize> {
        let deg = self.rot[v].len();
        if deg < 2 || (deg == 2 && !self.is_terminal(v)) {
            return None;
        }
        let pairs = if self.is_terminal(v) { deg - 1 } else { deg };
        let (i, y) = (0..pairs).find_map(|i| {
            let (e1, e2) = (self.rot[v][i], self.rot[v][(i + 1) % deg]);
            let y = self.other(e1, v);
            (y == self.other(e2, v) && self.digon_at(y, e1, e2)).then_some((i, y))
        })?;
        let (e1, e2) = (self.rot[v][i], self.rot[v][(i + 1) % deg]);
        let parts = vec![self.from(e2, v), self.from(e1, v)];
        let n = self.add([v, y], Part::Parallel(parts));
        for u in [v, y] {
            self.replace(u, e1, n);
            self.rot[u].retain(|&e| e != e2);
        }
        Some(y)
    }

    fn digon_at(&self, y: usize, e1: usize, e2: usize) -> bool {
        let r = &self.rot[y];
        if r.len() == 2 && !self.is_terminal(y) {
            return false;
        }
        let p2 = r.iter().position(|&e| e == e2).expect("edge at its endpoint");
        let next = (p2 + 1) % r.len();
        r[next] == e1 && !(self.is_terminal(y) && next == 0)
    }

    fn term(&self, r: Ref) -> SpTerm {
        let children = |c: &[Ref]| -> Vec<SpTerm> {
            let mut out: Vec<SpTerm> =
                c.iter().map(|x| self.term(Ref { part: x.part, flipped: x.flipped ^ r.flipped })).collect();
            if r.flipped {
                out.reverse();
            }
            out
        };
        match &self.parts[r.part] {
            Part::Edge => SpTerm::Chain(1),
            Part::Series(c) => SpTerm::Series(children(c)),
            Part::Parallel(c) => SpTerm::Parallel(children(c)),
        }
    }
}

/// Recovers the canonical term of a two-terminal series-parallel graph
/// by series and parallel reductions that respect the rotation system.
pub fn reduce(graph: &PlaneGraph) -> Result<SpTerm> {
    let terminals = graph.terminals().map(VertexId::idx);
    let mut r = Reducer {
        parts: vec![Part::Edge],
        edges: graph
            .edges()
            .iter()
            .map(|&[a, b]| VEdge { ends: [a.idx(), b.idx()], part: Ref { part: 0, flipped: false } })
            .collect(),
        rot: graph.rotations().iter().map(|rot| rot.iter().map(|e| e.idx()).collect()).collect(),
        terminals,
    };
    let mut queue: VecDeque<usize> = (0..graph.vertex_count()).collect();
    let mut alive = graph.edge_count();
    while let Some(v) = queue.pop_front() {
        while let Some(y) = r.parallel(v) {
            alive -= 1;
            queue.push_back(y);
        }
        if let Some(ends) = r.series(v) {
            alive -= 1;
            queue.extend(ends);
        }
    }
    let [s, t] = terminals;
    if alive != 1 || r.rot[s].len() != 1 || r.other(r.rot[s][0], s) != t {
        return Err(Error::NotSeriesParallel(format!("{alive} edges remain after reduction")));
    }
    Ok(r.term(r.from(r.rot[s][0], s)).canonical())
}

/// Canonical encoding of the rotation system, rooted at the first edge
/// around the source, with the vertices in encoding order.
fn rotation_code(graph: &PlaneGraph) -> (Vec<u32>, Vec<VertexId>) {
    let [s, t] = graph.terminals();
    let mut vlabel = vec![u32::MAX; graph.vertex_count()];
    let mut elabel = vec![u32::MAX; graph.edge_count()];
    let mut start = vec![0; graph.vertex_count()];
    let mut order = vec![s];
    let mut code = Vec::with_capacity(4 * graph.edge_count());
    vlabel[s.idx()] = 0;
    let mut next_edge = 0;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        let rot = graph.rotation(v);
        code.push(u32::MAX);
        for k in 0..rot.len() {
            let e = rot[(start[v.idx()] + k) % rot.len()];
            if elabel[e.idx()] == u32::MAX {
                elabel[e.idx()] = next_edge;
                next_edge += 1;
            }
            let w = graph.other(e, v);
            if vlabel[w.idx()] == u32::MAX {
                vlabel[w.idx()] = order.len() as u32;
                start[w.idx()] = graph.position(w, e);
                order.push(w);
            }
            code.extend([elabel[e.idx()], vlabel[w.idx()]]);
        }
    }
    code.push(vlabel[t.idx()]);
    (code, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_spterm;

    #[test]
    fn square_json() {
        let json = term_to_json(&parse_spterm("P(Q2,Q2)").unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
        assert_eq!(v["edges"].as_array().unwrap().len(), 4);
        assert_eq!(v["terminals"], serde_json::json!([0, 1]));
    }

    #[test]
    fn round_trips() {
        for s in [
            "Q1",
            "Q3",
            "P(Q1,Q1)",
            "P(Q1,S(Q1,Q1))",
            "S(Q1,P(Q2,S(Q1,P(Q2,Q2),Q1)),Q1)",
            "P(P(Q1,Q2,Q2),Q3)",
            "P(S(Q1,P(Q1,Q2)),Q2,Q3)",
        ] {
            let t = parse_spterm(s).unwrap();
            let back = term_from_json(&term_to_json(&t).unwrap()).unwrap();
            assert_eq!(back.term, t.canonical(), "{s}");
            assert_eq!(back.vertex_ids, (0..back.vertex_ids.len() as u64).collect::<Vec<_>>());
        }
    }

    #[test]
    fn relabelled_input() {
        let json = r#"{"vertices":[10,20,30,40],"terminals":[10,20],
            "rotation":{"10":[0,2],"20":[3,1],"30":[0,1],"40":[2,3]},
            "edges":[[10,30],[30,20],[10,40],[40,20]]}"#;
        let g = term_from_json(json).unwrap();
        assert_eq!(g.term, parse_spterm("P(Q2,Q2)").unwrap());
        assert_eq!(g.vertex_ids[..2], [10, 20]);
    }

    #[test]
    fn rejects_non_sp_and_bad_embeddings() {
        let k4 = r#"{"vertices":[0,1,2,3],"terminals":[0,1],
            "rotation":{"0":[0,1,2],"1":[3,4,0],"2":[1,3,5],"3":[2,5,4]},
            "edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#;
        assert!(matches!(term_from_json(k4), Err(Error::NotSeriesParallel(_))));
        let unknown = r#"{"vertices":[0,1],"terminals":[0,1],"rotation":{"0":[0],"1":[0]},"edges":[[0,7]]}"#;
        assert!(matches!(term_from_json(unknown), Err(Error::InvalidGraph(_))));
        assert!(matches!(term_from_json("{"), Err(Error::Json(_))));
    }
}
