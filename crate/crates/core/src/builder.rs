//! Spirality assignment and zero-bend orthogonal representations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Corner, EdgeId, PlaneGraph, VertexId};
use crate::interval::{HalfInt, HalfIntInterval};
use crate::spq::{NodeKind, SpqTree};
use crate::tester::{Outcome, Verdict};

/// Per-node spiralities and the pole angle parameters of two-child P-nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpiralityAssignment {
    /// Doubled spirality per node; zero for the root and the reference edge.
    pub sigma2: Vec<i64>,
    /// `alpha[node][w][d]` for pole `w` (0 = u, 1 = v) and child side `d`.
    pub alpha: Vec<Option<[[u8; 2]; 2]>>,
}

impl SpiralityAssignment {
    pub fn sigma(&self, node: crate::graph::NodeId) -> HalfInt {
        HalfInt(self.sigma2[node.idx()])
    }
}

/// Angles of a plane graph in multiples of 90 degrees; `angles[v][i]` is
/// the angle of corner `(v, i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoRep {
    graph: PlaneGraph,
    angles: Vec<Vec<u8>>,
}

#[derive(Serialize)]
struct CornerJson {
    edge: u32,
    face_id: u32,
    angle: u32,
}

#[derive(Serialize)]
struct VertexJson {
    id: u32,
    corners: Vec<CornerJson>,
}

#[derive(Serialize)]
struct RepJson {
    external_face: u32,
    vertices: Vec<VertexJson>,
}

impl OrthoRep {
    /// # Errors
    /// `InvalidRepresentation` if the angle lists do not match the rotation
    /// system in length.
    pub fn new(graph: PlaneGraph, angles: Vec<Vec<u8>>) -> Result<Self> {
        if angles.len() != graph.vertex_count() || graph.vertices().any(|v| angles[v.idx()].len() != graph.degree(v)) {
            return Err(Error::InvalidRepresentation("angle lists do not match the rotation system".into()));
        }
        Ok(OrthoRep { graph, angles })
    }

    pub fn graph(&self) -> &PlaneGraph {
        &self.graph
    }

    pub fn angle(&self, (v, i): Corner) -> u8 {
        self.angles[v.idx()][i]
    }

    pub fn angles(&self, v: VertexId) -> &[u8] {
        &self.angles[v.idx()]
    }

    pub fn all_angles(&self) -> &[Vec<u8>] {
        &self.angles
    }

    /// Right turn when entering `v` along `a` and leaving along `b`.
    pub fn turn(&self, v: VertexId, a: EdgeId, b: EdgeId) -> i32 {
        let rot = self.graph.rotation(v);
        let (pa, pb) = (self.graph.position(v, a), self.graph.position(v, b));
        let span = (pb + rot.len() - pa) % rot.len();
        let span = if span == 0 { rot.len() } else { span };
        let sum: i32 = (0..span).map(|k| i32::from(self.angles[v.idx()][(pa + k) % rot.len()])).sum();
        2 - sum
    }

    /// JSON dump: per vertex the counterclockwise corners with face id and
    /// angle in degrees.
    pub fn to_json(&self) -> String {
        let faces = self.graph.faces();
        let vertices = self
            .graph
            .vertices()
            .map(|v| VertexJson {
                id: v.0,
                corners: self
                    .graph
                    .rotation(v)
                    .iter()
                    .enumerate()
                    .map(|(i, e)| CornerJson {
                        edge: e.0,
                        face_id: faces.face_of((v, i)).0,
                        angle: 90 * u32::from(self.angles[v.idx()][i]),
                    })
                    .collect(),
            })
            .collect();
        serde_json::to_string_pretty(&RepJson { external_face: faces.external().0, vertices })
            .expect("serializing plain data")
    }
}

/// The feasible value of smallest magnitude, preferring the positive one.
pub fn pick_root_spirality(feasible: HalfIntInterval) -> Option<HalfInt> {
    let (lo, hi) = feasible.bounds()?;
    Some(HalfInt(if lo >= 0 {
        lo
    } else if hi <= 0 {
        hi
    } else if lo % 2 == 0 {
        0
    } else {
        1
    }))
}

fn internal(msg: String) -> Error {
    Error::InvalidRepresentation(msg)
}

/// Propagates `sigma_eta` down the tree.
///
/// # Errors
/// `InvalidRepresentation` if some node cannot be given a spirality inside
/// its interval.
pub fn assign_spiralities(
    tree: &SpqTree,
    intervals: &[HalfIntInterval],
    sigma_eta: HalfInt,
) -> Result<SpiralityAssignment> {
    let mut sigma2 = vec![0i64; tree.len()];
    let mut alpha = vec![None; tree.len()];
    let eta = tree.eta();
    if !intervals[eta.idx()].contains(sigma_eta) {
        return Err(internal(format!("root spirality {sigma_eta} outside {}", intervals[eta.idx()])));
    }
    sigma2[eta.idx()] = sigma_eta.0;
    let inside = |id: crate::graph::NodeId, s: i64| intervals[id.idx()].contains(HalfInt(s));
    let mut stack = vec![eta];
    while let Some(id) = stack.pop() {
        let node = tree.node(id);
        let s = sigma2[id.idx()];
        stack.extend(node.children.iter().copied());
        match node.kind {
            NodeKind::Q | NodeKind::Root => {}
            NodeKind::S => {
                let bounds: Vec<(i64, i64)> =
                    node.children.iter().map(|c| intervals[c.idx()].bounds().unwrap_or((1, 0))).collect();
                let mut excess = bounds.iter().map(|b| b.1).sum::<i64>() - s;
                for (&c, &(lo, hi)) in node.children.iter().zip(&bounds) {
                    let dec = excess.min(hi - lo);
                    sigma2[c.idx()] = hi - dec;
                    excess -= dec;
                }
                if excess != 0 {
                    return Err(internal(format!("series node {id} cannot reach {}", HalfInt(s))));
                }
            }
            NodeKind::P => match node.p2 {
                None => {
                    for (&c, shift) in node.children.iter().zip([4, 0, -4]) {
                        sigma2[c.idx()] = s + shift;
                    }
                }
                Some(class) => {
                    let degree = |w: usize| node.indeg[w] + node.outdeg[w];
                    let k = |w: usize, d: usize| i64::from(class.k2[w][d]);
                    let [l, r] = [node.children[0], node.children[1]];
                    let found = (0..16u8).find_map(|bits| {
                        let [ul, vl, ur, vr] = [3, 2, 1, 0].map(|b| (bits >> b) & 1);
                        let a = [[ul, ur], [vl, vr]];
                        let ok = (0..2).all(|w| if degree(w) == 3 { a[w][0] + a[w][1] >= 1 } else { a[w] == [1, 1] });
                        let sl = s + k(0, 0) * i64::from(a[0][0]) + k(1, 0) * i64::from(a[1][0]);
                        let sr = s - k(0, 1) * i64::from(a[0][1]) - k(1, 1) * i64::from(a[1][1]);
                        (ok && inside(l, sl) && inside(r, sr)).then_some((a, sl, sr))
                    });
                    let (a, sl, sr) = found.ok_or_else(|| {
                        internal(format!("no pole angles for {} node {id} at {}", node.label(), HalfInt(s)))
                    })?;
                    alpha[id.idx()] = Some(a);
                    sigma2[l.idx()] = sl;
                    sigma2[r.idx()] = sr;
                }
            },
        }
    }
    Ok(SpiralityAssignment { sigma2, alpha })
}

/// Angles of the working graph (including a dummy reference edge).
///
/// # Errors
/// `InvalidRepresentation` if the assignment leaves a corner without a
/// valid angle.
pub fn synthesize(tree: &SpqTree, graph: &PlaneGraph, asg: &SpiralityAssignment) -> Result<OrthoRep> {
    let mut angles: Vec<Vec<u8>> = graph.rotations().iter().map(|r| vec![0; r.len()]).collect();
    for v in graph.vertices().filter(|&v| graph.degree(v) == 4) {
        angles[v.idx()] = vec![1; 4];
    }
    let set = |angles: &mut Vec<Vec<u8>>, v: VertexId, e: EdgeId, a: i64| {
        angles[v.idx()][graph.position(v, e)] = a as u8;
    };
    for id in tree.postorder() {
        let node = tree.node(id);
        match node.kind {
            NodeKind::Q if id != tree.reference_node() => {
                let c = node.chain.as_ref().unwrap();
                let s = asg.sigma2[id.idx()] / 2;
                for j in 1..c.edges.len() {
                    let turn = if (j as i64) <= s.abs() { s.signum() } else { 0 };
                    let w = c.verts[j];
                    set(&mut angles, w, c.edges[j - 1], 2 - turn);
                    set(&mut angles, w, c.edges[j], 2 + turn);
                }
            }
            NodeKind::P => {
                let Some(a) = asg.alpha[id.idx()] else { continue };
                for (w, &pole) in node.poles.iter().enumerate() {
                    if graph.degree(pole) != 3 {
                        continue;
                    }
                    let [al, ar] = a[w].map(i64::from);
                    let el = tree.node(node.children[0]).pole_edges[w][0];
                    let er = tree.node(node.children[1]).pole_edges[w][0];
                    let x = *graph.rotation(pole).iter().find(|&&e| e != el && e != er).unwrap();
                    if w == 0 {
                        set(&mut angles, pole, er, al + ar);
                        set(&mut angles, pole, el, 2 - al);
                        set(&mut angles, pole, x, 2 - ar);
                    } else {
                        set(&mut angles, pole, el, al + ar);
                        set(&mut angles, pole, x, 2 - al);
                        set(&mut angles, pole, er, 2 - ar);
                    }
                }
            }
            NodeKind::Root => {
                let [s, t] = node.poles;
                let reference = tree.reference();
                let eta = tree.node(tree.eta());
                if reference.is_dummy {
                    for w in [s, t].into_iter().filter(|&w| graph.degree(w) == 2) {
                        angles[w.idx()] = vec![2, 2];
                    }
                    continue;
                }
                let coincide = [graph.degree(s) == 2, graph.degree(t) == 2];
                let rem = 4 - asg.sigma2[tree.eta().idx()] / 2;
                let (a_s, a_t) = match coincide {
                    [true, true] => (rem.clamp(-1, 1), rem - rem.clamp(-1, 1)),
                    [true, false] => (rem, 0),
                    [false, true] => (0, rem),
                    [false, false] => (0, 0),
                };
                if coincide[0] {
                    set(&mut angles, s, reference.edge, 2 - a_s);
                    set(&mut angles, s, eta.pole_edges[0][0], 2 + a_s);
                }
                if coincide[1] {
                    set(&mut angles, t, eta.pole_edges[1][0], 2 - a_t);
                    set(&mut angles, t, reference.edge, 2 + a_t);
                }
            }
            _ => {}
        }
    }
    if let Some(v) = graph.vertices().find(|v| angles[v.idx()].iter().any(|&a| !(1..=4).contains(&a))) {
        return Err(internal(format!("vertex {v} left with angles {:?}", angles[v.idx()])));
    }
    OrthoRep::new(graph.clone(), angles)
}

/// Deletes the dummy reference edge (the last edge) and merges the corners
/// it separated.
pub fn remove_dummy(rep: &OrthoRep) -> OrthoRep {
    let g = &rep.graph;
    let dummy = EdgeId::from(g.edge_count() - 1);
    let [s, t] = g.endpoints(dummy);
    let mut angles = rep.angles.clone();
    for w in [s, t] {
        let p = g.position(w, dummy);
        let d = g.degree(w);
        let a = &mut angles[w.idx()];
        let prev = (p + d - 1) % d;
        a[prev] += a[p];
        a.remove(p);
    }
    OrthoRep::new(g.without_dummy(), angles).expect("corner lists follow the rotation")
}

/// Output of the construction for an accepted instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub assignment: SpiralityAssignment,
    /// Representation of the working graph, dummy reference edge included.
    pub working: OrthoRep,
    /// Representation of the input graph.
    pub rep: OrthoRep,
}

/// Chooses the root spirality, assigns all spiralities and synthesizes the
/// representation.
///
/// # Errors
/// `NotRectilinear` for rejected instances.
pub fn build(verdict: &Verdict) -> Result<Construction> {
    let Outcome::Accepted { feasible } = verdict.outcome else {
        return Err(Error::NotRectilinear);
    };
    let tree = verdict.tree();
    let sigma = pick_root_spirality(feasible).ok_or(Error::NotRectilinear)?;
    let assignment = assign_spiralities(tree, &verdict.intervals, sigma)?;
    let working = synthesize(tree, &verdict.rooted.working, &assignment)?;
    let rep = if tree.is_dummy() { remove_dummy(&working) } else { working.clone() };
    Ok(Construction { assignment, working, rep })
}
