//! SPQ*-trees rooted at a reference edge.

use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::graph::{realize, Ann, EdgeId, NodeId, PlaneGraph, VertexId};
use crate::term::SpTerm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// A maximal chain of edges.
    Q,
    S,
    P,
    Root,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    /// 0 for left, 1 for right.
    pub fn rho(self) -> u8 {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    fn letter(self) -> char {
        match self {
            Side::Left => 'l',
            Side::Right => 'r',
        }
    }
}

/// Types of P-nodes with two children.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PSubtype {
    /// Both poles have indegree 2; `alpha <= beta` are the pole outdegrees.
    Pio2 { alpha: u8, beta: u8 },
    /// One pole has indegree 3, two of its inside edges belonging to child `d`.
    Pio3 { d: Side, alpha: u8, beta: u8 },
    /// Both poles have indegree 3; `d` holds two edges at `u`, `d2` at `v`.
    Pin3 { d: Side, d2: Side },
}

impl fmt::Display for PSubtype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PSubtype::Pio2 { alpha, beta } => write!(f, "Pio2_{alpha}{beta}"),
            PSubtype::Pio3 { d, alpha, beta } => write!(f, "Pio3{}_{alpha}{beta}", d.letter()),
            PSubtype::Pin3 { d, d2 } => write!(f, "Pin3_{}{}", d.letter(), d2.letter()),
        }
    }
}

/// Classification data of a two-child P-node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct P2Class {
    pub subtype: PSubtype,
    /// `k2[w][d]` is twice the coefficient of pole `w` (0 = u, 1 = v) and
    /// child side `d` (0 = left, 1 = right).
    pub k2: [[u8; 2]; 2],
    pub gamma: u8,
    /// `rho(d)` for `Pio3`, `rho(d) + rho(d2)` for `Pin3`, 0 otherwise.
    pub rho: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Integer,
    SemiInteger,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    /// Vertices from the source pole to the sink pole.
    pub verts: Vec<VertexId>,
    /// Edges in the same order.
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpqNode {
    pub kind: NodeKind,
    pub children: Vec<NodeId>,
    pub parent: Option<NodeId>,
    /// Source and sink pole.
    pub poles: [VertexId; 2],
    /// Degree of each pole inside the pertinent graph.
    pub indeg: [u8; 2],
    /// Degree of each pole outside the pertinent graph.
    pub outdeg: [u8; 2],
    /// Pertinent edges at each pole.
    pub pole_edges: [Vec<EdgeId>; 2],
    pub chain: Option<Chain>,
    pub p2: Option<P2Class>,
}

/// Number of distinct alias vertices of a pole.
pub fn alias_count(indeg: u8, outdeg: u8) -> u8 {
    if indeg > 1 && outdeg == 2 {
        2
    } else {
        1
    }
}

impl SpqNode {
    pub fn len(&self) -> usize {
        self.chain.as_ref().map_or(0, |c| c.edges.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alias_count(&self, pole: usize) -> u8 {
        alias_count(self.indeg[pole], self.outdeg[pole])
    }

    /// Whether the alias of `pole` is the pole itself.
    pub fn alias_coincides(&self, pole: usize) -> bool {
        self.indeg[pole] == 1
    }

    pub fn alias_parity(&self) -> Parity {
        if (self.alias_count(0) + self.alias_count(1)).is_multiple_of(2) {
            Parity::Integer
        } else {
            Parity::SemiInteger
        }
    }

    /// `Q*`, `S`, `P3`, `Proot` or the two-child subtype.
    pub fn label(&self) -> String {
        match self.kind {
            NodeKind::Q => "Q*".into(),
            NodeKind::S => "S".into(),
            NodeKind::Root => "Proot".into(),
            NodeKind::P => match &self.p2 {
                Some(c) => c.subtype.to_string(),
                None => "P3".into(),
            },
        }
    }
}

/// How the reference edge was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reference {
    pub edge: EdgeId,
    pub is_dummy: bool,
    /// The tree treats vertex 1 as the source and vertex 0 as the sink.
    pub flipped: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpqTree {
    nodes: Vec<SpqNode>,
    reference: Reference,
}

impl SpqTree {
    pub fn nodes(&self) -> &[SpqNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &SpqNode {
        &self.nodes[id.idx()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeId {
        NodeId::from(self.nodes.len() - 1)
    }

    /// The root child that is not the reference edge.
    pub fn eta(&self) -> NodeId {
        self.node(self.root()).children[0]
    }

    pub fn reference_node(&self) -> NodeId {
        self.node(self.root()).children[1]
    }

    pub fn reference(&self) -> Reference {
        self.reference
    }

    pub fn is_dummy(&self) -> bool {
        self.reference.is_dummy
    }

    /// Node ids in post-order (children before parents).
    pub fn postorder(&self) -> impl DoubleEndedIterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId::from)
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.node(id).children.iter().rev());
        }
        out
    }

    pub fn depth(&self, mut id: NodeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.node(id).parent {
            id = p;
            d += 1;
        }
        d
    }

    /// Edges of the pertinent graph.
    pub fn pertinent_edges(&self, id: NodeId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            let n = self.node(x);
            if let Some(c) = &n.chain {
                out.extend_from_slice(&c.edges);
            }
            stack.extend(n.children.iter().rev());
        }
        out
    }

    /// Vertices of the pertinent graph, poles first.
    pub fn pertinent_vertices(&self, id: NodeId) -> Vec<VertexId> {
        let n = self.node(id);
        let mut out = vec![n.poles[0], n.poles[1]];
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            let n = self.node(x);
            if let Some(c) = &n.chain {
                out.extend_from_slice(&c.verts[1..c.verts.len() - 1]);
            }
            if n.kind == NodeKind::S {
                out.extend(n.children[1..].iter().map(|&c| self.node(c).poles[0]));
            }
            stack.extend(n.children.iter().rev());
        }
        out
    }

    /// The u-to-v path through the leftmost child of every P-node, as a
    /// sequence of `(vertex, edge leaving it)`.
    pub fn leftmost_path(&self, id: NodeId) -> Vec<(VertexId, EdgeId)> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            let n = self.node(x);
            match n.kind {
                NodeKind::Q => {
                    let c = n.chain.as_ref().unwrap();
                    out.extend(c.verts.iter().copied().zip(c.edges.iter().copied()));
                }
                NodeKind::S => stack.extend(n.children.iter().rev()),
                NodeKind::P | NodeKind::Root => stack.push(n.children[0]),
            }
        }
        out
    }

    /// One line per node in pre-order, indented by depth.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root(), 0usize)];
        while let Some((id, depth)) = stack.pop() {
            let n = self.node(id);
            let _ = write!(out, "{:indent$}{} {}", "", id, n.label(), indent = 2 * depth);
            if let Some(c) = &n.chain {
                let _ = write!(out, " len={}", c.edges.len());
                if id == self.reference_node() {
                    out.push_str(if self.reference.is_dummy { " ref=dummy" } else { " ref" });
                }
            }
            let _ = writeln!(
                out,
                " poles=({},{}) in=({},{}) out=({},{})",
                n.poles[0], n.poles[1], n.indeg[0], n.indeg[1], n.outdeg[0], n.outdeg[1]
            );
            stack.extend(n.children.iter().rev().map(|&c| (c, depth + 1)));
        }
        out
    }
}

/// A graph together with its reference edge and SPQ*-tree.
#[derive(Debug, Clone)]
pub struct Rooted {
    /// The input graph.
    pub graph: PlaneGraph,
    /// `graph` plus the dummy reference edge, if one was added.
    pub working: PlaneGraph,
    pub tree: SpqTree,
}

impl Rooted {
    pub fn reference(&self) -> Reference {
        self.tree.reference()
    }
}

/// Picks the reference edge: the rightmost root child if it is a single
/// edge, else the leftmost one, else a dummy edge between the terminals.
pub fn choose_reference_edge(term: &SpTerm) -> Result<(PlaneGraph, Reference)> {
    let r = build_spq_tree(term)?;
    let reference = r.reference();
    Ok((r.working, reference))
}

/// Realizes `term`, chooses the reference edge and builds the normalized
/// SPQ*-tree.
pub fn build_spq_tree(term: &SpTerm) -> Result<Rooted> {
    let (graph, ann) = realize(term)?;
    let mut top = match ann.normalize() {
        Ann::Parallel(c) => c,
        other => vec![other],
    };
    let (working, reference) = if top.len() >= 2 && top.last().unwrap().is_single_edge() {
        let edge = chain_edge(top.last().unwrap());
        (graph.clone(), Reference { edge, is_dummy: false, flipped: false })
    } else if top.len() >= 2 && top[0].is_single_edge() {
        top.reverse();
        top.iter_mut().for_each(Ann::reverse);
        let edge = chain_edge(top.last().unwrap());
        (graph.clone(), Reference { edge, is_dummy: false, flipped: true })
    } else {
        for t in graph.terminals() {
            if graph.degree(t) >= 4 {
                return Err(Error::InfeasibleRooting { vertex: t.0, degree: graph.degree(t) + 1 });
            }
        }
        let (working, edge) = graph.with_dummy();
        let [s, t] = graph.terminals();
        top.push(Ann::Chain { verts: vec![s, t], edges: vec![edge] });
        (working, Reference { edge, is_dummy: true, flipped: false })
    };
    let ref_ann = top.pop().unwrap();
    let eta = if top.len() == 1 { top.pop().unwrap() } else { Ann::Parallel(top) };

    let mut b = TreeBuilder { graph: &working, nodes: Vec::new() };
    let eta_id = b.add(eta)?;
    let ref_id = b.add(ref_ann)?;
    let (e, r) = (&b.nodes[eta_id.idx()], &b.nodes[ref_id.idx()]);
    let poles = e.poles;
    let pole_edges =
        [[&e.pole_edges[0][..], &r.pole_edges[0][..]].concat(), [&e.pole_edges[1][..], &r.pole_edges[1][..]].concat()];
    let root = NodeId::from(b.nodes.len());
    b.push(NodeKind::Root, vec![eta_id, ref_id], poles, pole_edges, None);
    b.nodes[eta_id.idx()].parent = Some(root);
    b.nodes[ref_id.idx()].parent = Some(root);
    let tree = SpqTree { nodes: b.nodes, reference };
    Ok(Rooted { graph, working, tree })
}

fn chain_edge(a: &Ann) -> EdgeId {
    match a {
        Ann::Chain { edges, .. } => edges[0],
        _ => unreachable!(),
    }
}

struct TreeBuilder<'g> {
    graph: &'g PlaneGraph,
    nodes: Vec<SpqNode>,
}

impl TreeBuilder<'_> {
    fn push(
        &mut self,
        kind: NodeKind,
        children: Vec<NodeId>,
        poles: [VertexId; 2],
        pole_edges: [Vec<EdgeId>; 2],
        chain: Option<Chain>,
    ) -> NodeId {
        let indeg = [pole_edges[0].len() as u8, pole_edges[1].len() as u8];
        let outdeg = [0, 1].map(|i| (self.graph.degree(poles[i]) - pole_edges[i].len()) as u8);
        self.nodes.push(SpqNode { kind, children, parent: None, poles, indeg, outdeg, pole_edges, chain, p2: None });
        NodeId::from(self.nodes.len() - 1)
    }

    fn add(&mut self, ann: Ann) -> Result<NodeId> {
        let id = match ann {
            Ann::Chain { verts, edges } => {
                let poles = [verts[0], *verts.last().unwrap()];
                let pole_edges = [vec![edges[0]], vec![*edges.last().unwrap()]];
                self.push(NodeKind::Q, Vec::new(), poles, pole_edges, Some(Chain { verts, edges }))
            }
            Ann::Series(children) => {
                let ids = children.into_iter().map(|c| self.add(c)).collect::<Result<Vec<_>>>()?;
                let (first, last) = (&self.nodes[ids[0].idx()], &self.nodes[ids.last().unwrap().idx()]);
                let poles = [first.poles[0], last.poles[1]];
                let pole_edges = [first.pole_edges[0].clone(), last.pole_edges[1].clone()];
                self.push(NodeKind::S, ids, poles, pole_edges, None)
            }
            Ann::Parallel(children) => {
                let ids = children.into_iter().map(|c| self.add(c)).collect::<Result<Vec<_>>>()?;
                let poles = self.nodes[ids[0].idx()].poles;
                let mut pole_edges = [Vec::new(), Vec::new()];
                for &c in &ids {
                    for (w, pe) in pole_edges.iter_mut().enumerate() {
                        pe.extend_from_slice(&self.nodes[c.idx()].pole_edges[w]);
                    }
                }
                let id = self.push(NodeKind::P, ids, poles, pole_edges, None);
                self.classify(id)?;
                id
            }
        };
        for c in self.nodes[id.idx()].children.clone() {
            self.nodes[c.idx()].parent = Some(id);
        }
        Ok(id)
    }

    fn classify(&mut self, id: NodeId) -> Result<()> {
        let n = &self.nodes[id.idx()];
        let unclassifiable = || Error::UnclassifiablePNode {
            node: id.0,
            detail: format!("in=({},{}) out=({},{})", n.indeg[0], n.indeg[1], n.outdeg[0], n.outdeg[1]),
        };
        match n.children.len() {
            3 => {
                let ok = n.children.iter().all(|c| self.nodes[c.idx()].indeg == [1, 1]) && n.outdeg == [1, 1];
                return if ok { Ok(()) } else { Err(unclassifiable()) };
            }
            2 => {}
            _ => return Err(unclassifiable()),
        }
        let child_in = |side: usize, w: usize| self.nodes[n.children[side].idx()].indeg[w];
        let two_at = |w: usize| if child_in(0, w) == 2 { Side::Left } else { Side::Right };
        let ok_out = |o: u8| (1..=2).contains(&o);
        let subtype = match (n.indeg, n.outdeg) {
            ([2, 2], [ou, ov]) if ok_out(ou) && ok_out(ov) => PSubtype::Pio2 { alpha: ou.min(ov), beta: ou.max(ov) },
            ([3, 2], [1, o]) | ([2, 3], [o, 1]) if ok_out(o) => {
                let w = if n.indeg[0] == 3 { 0 } else { 1 };
                PSubtype::Pio3 { d: two_at(w), alpha: 1, beta: o }
            }
            ([3, 3], [1, 1]) => PSubtype::Pin3 { d: two_at(0), d2: two_at(1) },
            _ => return Err(unclassifiable()),
        };
        let k2 = [0, 1].map(|w| [0, 1].map(|d| if child_in(d, w) == 1 && n.outdeg[w] == 1 { 2 } else { 1 }));
        let (gamma, rho) = match subtype {
            PSubtype::Pio2 { alpha, beta } => (alpha + beta - 2, 0),
            PSubtype::Pio3 { d, alpha, beta } => (alpha + beta - 2, d.rho()),
            PSubtype::Pin3 { d, d2 } => (0, d.rho() + d2.rho()),
        };
        self.nodes[id.idx()].p2 = Some(P2Class { subtype, k2, gamma, rho });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_spterm;

    fn tree(s: &str) -> Rooted {
        build_spq_tree(&parse_spterm(s).unwrap()).unwrap()
    }

    fn shape(t: &SpqTree, id: NodeId) -> String {
        let n = t.node(id);
        match n.kind {
            NodeKind::Q => format!("Q{}", n.len()),
            _ => {
                let c: Vec<String> = n.children.iter().map(|&c| shape(t, c)).collect();
                format!("{}[{}]", n.label(), c.join(","))
            }
        }
    }

    #[test]
    fn triangle_uses_leftmost_edge_flipped() {
        let r = tree("P(Q1,S(Q1,Q1))");
        assert_eq!(shape(&r.tree, r.tree.root()), "Proot[Q2,Q1]");
        let rf = r.reference();
        assert!(!rf.is_dummy && rf.flipped);
        assert_eq!(rf.edge, EdgeId(0));
        assert_eq!(r.tree.node(r.tree.root()).poles, [VertexId(1), VertexId(0)]);
    }

    #[test]
    fn path_gets_dummy() {
        let r = tree("S(Q1,Q1)");
        assert_eq!(shape(&r.tree, r.tree.root()), "Proot[Q2,Q1]");
        assert!(r.tree.is_dummy());
        assert_eq!(r.working.edge_count(), 3);
        assert_eq!(r.graph.edge_count(), 2);
    }

    #[test]
    fn square_is_pio2_11_under_dummy() {
        let r = tree("P(Q2,Q2)");
        assert!(r.tree.is_dummy());
        let eta = r.tree.node(r.tree.eta());
        assert_eq!(eta.label(), "Pio2_11");
        assert_eq!(eta.p2.unwrap().k2, [[2, 2], [2, 2]]);
    }

    #[test]
    fn three_edges_group_under_p() {
        let r = tree("P(Q1,Q1,Q1)");
        assert!(!r.tree.is_dummy());
        assert_eq!(shape(&r.tree, r.tree.root()), "Proot[Pio2_11[Q1,Q1],Q1]");
    }

    #[test]
    fn normalization_merges_chains() {
        let r = tree("S(Q1,S(Q1,P(Q1,Q2)))");
        assert_eq!(shape(&r.tree, r.tree.root()), "Proot[S[Q2,Pio2_11[Q1,Q2]],Q1]");
        let r = tree("P(P(Q2,Q2),Q2)");
        assert_eq!(shape(&r.tree, r.tree.root()), "Proot[P3[Q2,Q2,Q2],Q1]");
    }

    #[test]
    fn pio2_22_coefficients() {
        // both poles of the middle P have two inside and two outside edges
        let r = tree("S(P(Q2,Q2),P(Q2,Q2),P(Q2,Q2))");
        let t = &r.tree;
        let inner = t.postorder().find(|&id| t.node(id).label() == "Pio2_22").expect("Pio2_22 present");
        assert_eq!(t.node(inner).p2.unwrap().k2, [[1, 1], [1, 1]]);
        assert_eq!(t.node(inner).alias_count(0), 2);
    }

    #[test]
    fn pin3_lr() {
        // u has two edges in the left child, v two edges in the right child
        let r = tree("S(Q1,P(S(P(Q1,Q1),Q1),S(Q1,P(Q1,Q1))),Q1)");
        let t = &r.tree;
        let p = t.postorder().find(|&id| t.node(id).label().starts_with("Pin3")).unwrap();
        assert_eq!(t.node(p).label(), "Pin3_lr");
        assert_eq!(t.node(p).p2.unwrap().rho, 1);
    }

    #[test]
    fn alias_parity_rule() {
        assert_eq!(alias_count(1, 3), 1);
        assert_eq!(alias_count(2, 2), 2);
        assert_eq!(alias_count(2, 1), 1);
        let r = tree("P(Q2,Q3)");
        for id in r.tree.postorder() {
            if r.tree.node(id).kind == NodeKind::Q {
                assert_eq!(r.tree.node(id).alias_parity(), Parity::Integer);
            }
        }
        assert_eq!(r.tree.node(r.tree.eta()).alias_parity(), Parity::Integer);
    }

    #[test]
    fn degrees_add_up() {
        let r = tree("S(P(Q1,S(Q1,P(Q1,Q1))),Q2,P(Q2,Q1))");
        for n in r.tree.nodes() {
            for w in 0..2 {
                assert_eq!((n.indeg[w] + n.outdeg[w]) as usize, r.working.degree(n.poles[w]));
            }
        }
        let verts = r.tree.pertinent_vertices(r.tree.eta());
        assert_eq!(verts.len(), r.graph.vertex_count());
    }

    #[test]
    fn infeasible_rooting_is_reported() {
        let t = parse_spterm("P(S(P(Q1,Q1),Q1),Q2,Q2)").unwrap();
        assert!(matches!(build_spq_tree(&t), Err(Error::InfeasibleRooting { .. })));
    }

    #[test]
    fn preorder_starts_at_root() {
        let r = tree("P(Q2,Q2)");
        let pre = r.tree.preorder();
        assert_eq!(pre[0], r.tree.root());
        assert_eq!(pre.len(), r.tree.len());
        assert!(r.tree.dump().starts_with(&format!("{} Proot", r.tree.root())));
    }
}
