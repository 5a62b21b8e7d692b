//! Plane multigraphs with a rotation system, realized from composition terms.

use std::fmt;

use crate::error::{Error, Result};
use crate::term::SpTerm;

macro_rules! id_type {
    ($(#[$m:meta])* $name:ident) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn idx(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            #[inline]
            fn from(i: usize) -> Self {
                $name(i as u32)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f)
            }
        }
    };
}

id_type!(VertexId);
id_type!(EdgeId);
id_type!(
    /// Face index in the order produced by [`PlaneGraph::faces`].
    FaceId
);
id_type!(
    /// Index of a decomposition-tree node; arena order is a post-order.
    NodeId
);

/// A corner `(v, i)` lies between `rotation(v)[i]` and the next edge
/// counterclockwise.
pub type Corner = (VertexId, usize);

/// An undirected plane multigraph given by a counterclockwise rotation at
/// each vertex. At both terminals the external face owns the corner between
/// the last and the first rotation entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneGraph {
    edges: Vec<[VertexId; 2]>,
    rotation: Vec<Vec<EdgeId>>,
    terminals: [VertexId; 2],
    pos: Vec<[u32; 2]>,
}

impl PlaneGraph {
    /// Builds a graph and checks that the rotation lists each incident edge
    /// exactly once.
    pub fn new(edges: Vec<[VertexId; 2]>, rotation: Vec<Vec<EdgeId>>, terminals: [VertexId; 2]) -> Result<Self> {
        let n = rotation.len();
        let mut pos = vec![[u32::MAX; 2]; edges.len()];
        for (i, &[a, b]) in edges.iter().enumerate() {
            if a.idx() >= n || b.idx() >= n {
                return Err(Error::InvalidGraph(format!("edge {i} has an unknown endpoint")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("edge {i} is a loop")));
            }
        }
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &e) in rot.iter().enumerate() {
                let Some(&[a, b]) = edges.get(e.idx()) else {
                    return Err(Error::InvalidGraph(format!("vertex {v} lists unknown edge {e}")));
                };
                let side = if a.idx() == v {
                    0
                } else if b.idx() == v {
                    1
                } else {
                    return Err(Error::InvalidGraph(format!("vertex {v} lists edge {e}, which is not incident")));
                };
                if pos[e.idx()][side] != u32::MAX {
                    return Err(Error::InvalidGraph(format!("vertex {v} lists edge {e} twice")));
                }
                pos[e.idx()][side] = i as u32;
            }
        }
        if let Some(e) = pos.iter().position(|p| p.contains(&u32::MAX)) {
            return Err(Error::InvalidGraph(format!("edge {e} is missing from a rotation")));
        }
        if terminals.iter().any(|t| t.idx() >= n) || terminals[0] == terminals[1] {
            return Err(Error::InvalidGraph("terminals must be two distinct vertices".into()));
        }
        Ok(PlaneGraph { edges, rotation, terminals, pos })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.rotation.len()).map(VertexId::from)
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[e.idx()]
    }

    pub fn other(&self, e: EdgeId, v: VertexId) -> VertexId {
        let [a, b] = self.edges[e.idx()];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn rotation(&self, v: VertexId) -> &[EdgeId] {
        &self.rotation[v.idx()]
    }

    pub fn rotations(&self) -> &[Vec<EdgeId>] {
        &self.rotation
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v.idx()].len()
    }

    pub fn terminals(&self) -> [VertexId; 2] {
        self.terminals
    }

    /// Index of `e` in the rotation of its endpoint `v`.
    pub fn position(&self, v: VertexId, e: EdgeId) -> usize {
        let [a, _] = self.edges[e.idx()];
        self.pos[e.idx()][usize::from(a != v)] as usize
    }

    /// The corner reached when arriving at `v` along `e`.
    pub fn corner_after(&self, v: VertexId, e: EdgeId) -> Corner {
        (v, self.position(v, e))
    }

    /// Edge leaving corner `(v, i)` counterclockwise.
    pub fn corner_exit(&self, (v, i): Corner) -> EdgeId {
        let rot = &self.rotation[v.idx()];
        rot[(i + 1) % rot.len()]
    }

    pub fn max_degree(&self) -> usize {
        self.rotation.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Traces every face, keeping the face on the right of each dart.
    pub fn faces(&self) -> Faces {
        let mut corner_face: Vec<Vec<FaceId>> = self.rotation.iter().map(|r| vec![FaceId(u32::MAX); r.len()]).collect();
        let mut boundary = Vec::new();
        for v in self.vertices() {
            for i in 0..self.degree(v) {
                if corner_face[v.idx()][i].0 != u32::MAX {
                    continue;
                }
                let f = FaceId::from(boundary.len());
                let mut corners = Vec::new();
                let mut c = (v, i);
                loop {
                    corner_face[c.0.idx()][c.1] = f;
                    corners.push(c);
                    let e = self.corner_exit(c);
                    let w = self.other(e, c.0);
                    c = self.corner_after(w, e);
                    if c == (v, i) {
                        break;
                    }
                }
                boundary.push(corners);
            }
        }
        let [s, _] = self.terminals;
        let external = corner_face[s.idx()][self.degree(s) - 1];
        Faces { corner_face, boundary, external }
    }

    /// Adds an edge between the terminals as the new rightmost parallel
    /// branch.
    pub fn with_dummy(&self) -> (PlaneGraph, EdgeId) {
        let [s, t] = self.terminals;
        let e = EdgeId::from(self.edges.len());
        let mut edges = self.edges.clone();
        edges.push([s, t]);
        let mut rotation = self.rotation.clone();
        rotation[s.idx()].insert(0, e);
        rotation[t.idx()].push(e);
        (PlaneGraph::new(edges, rotation, self.terminals).expect("dummy keeps the graph valid"), e)
    }

    /// Removes the edge with the highest id, which must be a dummy added by
    /// [`PlaneGraph::with_dummy`].
    pub fn without_dummy(&self) -> PlaneGraph {
        let e = EdgeId::from(self.edges.len() - 1);
        let mut edges = self.edges.clone();
        edges.pop();
        let rotation = self.rotation.iter().map(|r| r.iter().copied().filter(|&x| x != e).collect()).collect();
        PlaneGraph::new(edges, rotation, self.terminals).expect("removing the dummy keeps the graph valid")
    }
}

/// Face structure of a [`PlaneGraph`].
#[derive(Debug, Clone)]
pub struct Faces {
    corner_face: Vec<Vec<FaceId>>,
    boundary: Vec<Vec<Corner>>,
    external: FaceId,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn face_of(&self, (v, i): Corner) -> FaceId {
        self.corner_face[v.idx()][i]
    }

    /// Corners of face `f` in traversal order.
    pub fn corners(&self, f: FaceId) -> &[Corner] {
        &self.boundary[f.idx()]
    }

    pub fn external(&self) -> FaceId {
        self.external
    }

    pub fn ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.boundary.len()).map(FaceId::from)
    }
}

/// A term whose chains carry the realized vertex and edge ids, in
/// source-to-sink order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Ann {
    Chain { verts: Vec<VertexId>, edges: Vec<EdgeId> },
    Series(Vec<Ann>),
    Parallel(Vec<Ann>),
}

impl Ann {
    pub(crate) fn reverse(&mut self) {
        match self {
            Ann::Chain { verts, edges } => {
                verts.reverse();
                edges.reverse();
            }
            Ann::Series(c) | Ann::Parallel(c) => {
                c.reverse();
                c.iter_mut().for_each(Ann::reverse);
            }
        }
    }

    /// Flattens nested series and parallel nodes and merges adjacent chains.
    pub(crate) fn normalize(self) -> Ann {
        match self {
            Ann::Chain { .. } => self,
            Ann::Series(children) => {
                let mut out: Vec<Ann> = Vec::with_capacity(children.len());
                let push = |t: Ann, out: &mut Vec<Ann>| match (out.last_mut(), t) {
                    (Some(Ann::Chain { verts, edges }), Ann::Chain { verts: v2, edges: e2 }) => {
                        verts.extend_from_slice(&v2[1..]);
                        edges.extend(e2);
                    }
                    (_, t) => out.push(t),
                };
                for c in children {
                    match c.normalize() {
                        Ann::Series(inner) => inner.into_iter().for_each(|t| push(t, &mut out)),
                        t => push(t, &mut out),
                    }
                }
                if out.len() == 1 {
                    out.pop().unwrap()
                } else {
                    Ann::Series(out)
                }
            }
            Ann::Parallel(children) => {
                let mut out = Vec::with_capacity(children.len());
                for c in children {
                    match c.normalize() {
                        Ann::Parallel(inner) => out.extend(inner),
                        t => out.push(t),
                    }
                }
                Ann::Parallel(out)
            }
        }
    }

    pub(crate) fn is_single_edge(&self) -> bool {
        matches!(self, Ann::Chain { edges, .. } if edges.len() == 1)
    }
}

struct Realizer {
    edges: Vec<[VertexId; 2]>,
    rotation: Vec<Vec<EdgeId>>,
}

impl Realizer {
    fn vertex(&mut self) -> VertexId {
        self.rotation.push(Vec::new());
        VertexId::from(self.rotation.len() - 1)
    }

    fn edge(&mut self, a: VertexId, b: VertexId) -> EdgeId {
        self.edges.push([a, b]);
        EdgeId::from(self.edges.len() - 1)
    }

    /// Returns the annotated term plus the edges at `a` (counterclockwise,
    /// right to left) and at `b` (counterclockwise, left to right).
    fn build(&mut self, term: &SpTerm, a: VertexId, b: VertexId) -> (Ann, Vec<EdgeId>, Vec<EdgeId>) {
        match term {
            SpTerm::Chain(len) => {
                let mut verts = vec![a];
                let mut edges = Vec::with_capacity(*len as usize);
                for i in 0..*len {
                    let next = if i + 1 == *len { b } else { self.vertex() };
                    let e = self.edge(*verts.last().unwrap(), next);
                    if let Some(&prev) = edges.last() {
                        let mid = verts.last().unwrap().idx();
                        self.rotation[mid] = vec![prev, e];
                    }
                    edges.push(e);
                    verts.push(next);
                }
                let (first, last) = (edges[0], *edges.last().unwrap());
                (Ann::Chain { verts, edges }, vec![first], vec![last])
            }
            SpTerm::Series(children) => {
                let joins: Vec<VertexId> = (1..children.len()).map(|_| self.vertex()).collect();
                let mut anns = Vec::with_capacity(children.len());
                let mut src = Vec::new();
                let mut prev_dst = Vec::new();
                for (i, child) in children.iter().enumerate() {
                    let from = if i == 0 { a } else { joins[i - 1] };
                    let to = if i + 1 == children.len() { b } else { joins[i] };
                    let (ann, s, d) = self.build(child, from, to);
                    if i == 0 {
                        src = s;
                    } else {
                        let mut rot = s;
                        rot.extend_from_slice(&prev_dst);
                        self.rotation[from.idx()] = rot;
                    }
                    prev_dst = d;
                    anns.push(ann);
                }
                (Ann::Series(anns), src, prev_dst)
            }
            SpTerm::Parallel(children) => {
                let mut anns = Vec::with_capacity(children.len());
                let mut srcs = Vec::with_capacity(children.len());
                let mut dst = Vec::new();
                for child in children {
                    let (ann, s, d) = self.build(child, a, b);
                    anns.push(ann);
                    srcs.push(s);
                    dst.extend(d);
                }
                let src = srcs.into_iter().rev().flatten().collect();
                (Ann::Parallel(anns), src, dst)
            }
        }
    }
}

/// Realizes a term: vertex 0 is the source, vertex 1 the sink, further
/// vertices and all edges are numbered in depth-first creation order.
pub(crate) fn realize(term: &SpTerm) -> Result<(PlaneGraph, Ann)> {
    let mut r = Realizer { edges: Vec::with_capacity(term.edge_count()), rotation: vec![Vec::new(), Vec::new()] };
    let (ann, src, dst) = r.build(term, VertexId(0), VertexId(1));
    r.rotation[0] = src;
    r.rotation[1] = dst;
    if let Some((v, rot)) = r.rotation.iter().enumerate().find(|(_, rot)| rot.len() > 4) {
        return Err(Error::DegreeViolation { vertex: v as u32, degree: rot.len() });
    }
    let graph = PlaneGraph::new(r.edges, r.rotation, [VertexId(0), VertexId(1)])?;
    Ok((graph, ann))
}

/// The plane graph of a degree-valid term.
pub fn to_plane_graph(term: &SpTerm) -> Result<PlaneGraph> {
    realize(term).map(|(g, _)| g)
}
