//! Brute-force ground truth: representation checks, exhaustive enumeration,
//! spirality measurement and per-component achievable spirality sets.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::builder::OrthoRep;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, FaceId, NodeId, PlaneGraph, VertexId};
use crate::interval::{HalfInt, HalfIntInterval};
use crate::layout::{drawn_direction, GridDrawing};
use crate::spq::{Rooted, SpqTree};

pub const DEFAULT_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    VertexSum,
    FaceSum,
    AngleRange,
    Crossing,
    EmbeddingMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn push(&mut self, kind: ViolationKind, location: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation { kind, location: location.into(), detail: detail.into() });
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("passed");
        }
        for v in &self.violations {
            writeln!(f, "{:?} at {}: {}", v.kind, v.location, v.detail)?;
        }
        Ok(())
    }
}

/// Checks angle ranges, vertex sums, face sums and that `rep` uses the
/// rotation system of `graph`.
pub fn verify_orthorep(rep: &OrthoRep, graph: &PlaneGraph) -> VerificationReport {
    let mut report = VerificationReport::default();
    if rep.graph().edges() != graph.edges() || rep.graph().rotations() != graph.rotations() {
        report.push(ViolationKind::EmbeddingMismatch, "graph", "corner orders differ from the rotation system");
        return report;
    }
    for v in graph.vertices() {
        let a = rep.angles(v);
        if let Some(&bad) = a.iter().find(|&&x| !(1..=4).contains(&x)) {
            report.push(ViolationKind::AngleRange, format!("vertex {v}"), format!("angle {}", 90 * u32::from(bad)));
        }
        let sum: u32 = a.iter().map(|&x| u32::from(x)).sum();
        if sum != 4 {
            report.push(ViolationKind::VertexSum, format!("vertex {v}"), format!("angles sum to {}", 90 * sum));
        }
    }
    let faces = graph.faces();
    for f in faces.ids() {
        let sum: i32 = faces.corners(f).iter().map(|&c| 2 - i32::from(rep.angle(c))).sum();
        let want = if f == faces.external() { -4 } else { 4 };
        if sum != want {
            report.push(ViolationKind::FaceSum, format!("face {f}"), format!("turn sum {sum}, expected {want}"));
        }
    }
    report
}

/// Checks that a drawing is a planar zero-bend drawing of `graph` with
/// the rotation system of `graph`.
pub fn verify_drawing(drawing: &GridDrawing, graph: &PlaneGraph) -> VerificationReport {
    let mut report = VerificationReport::default();
    if drawing.coords.len() != graph.vertex_count() {
        report.push(ViolationKind::EmbeddingMismatch, "drawing", "vertex count differs");
        return report;
    }
    let mut pts: Vec<([i64; 2], VertexId)> = graph.vertices().map(|v| (drawing.coords[v.idx()], v)).collect();
    pts.sort_unstable();
    for w in pts.windows(2).filter(|w| w[0].0 == w[1].0) {
        report.push(ViolationKind::Crossing, format!("vertices {} {}", w[0].1, w[1].1), "same point");
    }
    let mut horizontal = Vec::new();
    let mut vertical = Vec::new();
    for (k, &[a, b]) in graph.edges().iter().enumerate() {
        let ([x0, y0], [x1, y1]) = (drawing.coords[a.idx()], drawing.coords[b.idx()]);
        let e = EdgeId::from(k);
        if drawn_direction(drawing, graph, a, e).is_none() {
            report.push(ViolationKind::AngleRange, format!("edge {e}"), "not axis-parallel with positive length");
        } else if y0 == y1 {
            horizontal.push((y0, x0.min(x1), x0.max(x1), e));
        } else {
            vertical.push((x0, y0.min(y1), y0.max(y1), e));
        }
    }
    if !report.passed() {
        return report;
    }
    for (segs, name) in [(&mut horizontal, "horizontal"), (&mut vertical, "vertical")] {
        segs.sort_unstable();
        let mut reach: Option<(i64, i64, EdgeId)> = None;
        for &(line, lo, hi, e) in segs.iter() {
            if let Some((l, end, f)) = reach {
                if l == line && lo < end {
                    report.push(
                        ViolationKind::Crossing,
                        format!("edges {f} {e}"),
                        format!("overlapping {name} segments"),
                    );
                }
            }
            if reach.is_none_or(|(l, end, _)| l != line || hi > end) {
                reach = Some((line, hi, e));
            }
        }
    }
    let shared = |h: EdgeId, v: EdgeId, p: [i64; 2]| {
        let ends = |e: EdgeId| graph.endpoints(e).map(|x| (x, drawing.coords[x.idx()]));
        ends(h).iter().any(|&(x, c)| c == p && ends(v).iter().any(|&(y, _)| y == x))
    };
    let mut events: Vec<(i64, u8, usize)> = Vec::with_capacity(2 * horizontal.len() + vertical.len());
    for (i, &(_, lo, hi, _)) in horizontal.iter().enumerate() {
        events.push((lo, 0, i));
        events.push((hi, 2, i));
    }
    for (i, &(x, ..)) in vertical.iter().enumerate() {
        events.push((x, 1, i));
    }
    events.sort_unstable();
    let mut active: BTreeMap<(i64, usize), ()> = BTreeMap::new();
    for (x, kind, i) in events {
        match kind {
            0 => {
                active.insert((horizontal[i].0, i), ());
            }
            2 => {
                active.remove(&(horizontal[i].0, i));
            }
            _ => {
                let (_, lo, hi, v) = vertical[i];
                for (&(y, j), _) in active.range((lo, 0)..=(hi, usize::MAX)) {
                    let h = horizontal[j].3;
                    if !shared(h, v, [x, y]) {
                        report.push(ViolationKind::Crossing, format!("edges {h} {v}"), format!("meet at ({x},{y})"));
                    }
                }
            }
        }
    }
    for v in graph.vertices() {
        let r = graph.rotation(v);
        let dirs: Vec<u8> = r.iter().map(|&e| drawn_direction(drawing, graph, v, e).unwrap()).collect();
        let ccw = (0..r.len()).all(|i| {
            let (a, b) = (dirs[i], dirs[(i + 1) % r.len()]);
            let gap = (i32::from(b) - i32::from(a)).rem_euclid(4);
            let gap = if gap == 0 { 4 } else { gap };
            r.len() == 1 || dirs.iter().all(|&d| d == a || d == b || (i32::from(d) - i32::from(a)).rem_euclid(4) > gap)
        });
        if !ccw {
            report.push(
                ViolationKind::EmbeddingMismatch,
                format!("vertex {v}"),
                "edge order differs from the rotation",
            );
        }
    }
    report
}

/// Angle tuples allowed at a vertex of the given degree.
pub fn angle_choices(degree: usize) -> &'static [&'static [u8]] {
    match degree {
        1 => &[&[4]],
        2 => &[&[1, 3], &[2, 2], &[3, 1]],
        3 => &[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]],
        4 => &[&[1, 1, 1, 1]],
        _ => &[],
    }
}

fn turn_from(angles: &[u8], pa: usize, pb: usize) -> i64 {
    let d = angles.len();
    let span = match (pb + d - pa) % d {
        0 => d,
        s => s,
    };
    2 - (0..span).map(|k| i64::from(angles[(pa + k) % d])).sum::<i64>()
}

/// A weighted sum of turns whose value is twice the spirality of a
/// component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpiralityFunctional {
    /// `(vertex, entering edge, leaving edge, weight)`.
    terms: Vec<(VertexId, EdgeId, EdgeId, i64)>,
}

impl SpiralityFunctional {
    /// Along `path` (edges from `u` to `v` inside node `id`), with alias
    /// stubs on the edges outside the component.
    pub fn along(graph: &PlaneGraph, tree: &SpqTree, id: NodeId, path: &[EdgeId]) -> Self {
        let node = tree.node(id);
        let [u, v] = node.poles;
        let mut terms = Vec::new();
        let mut w = u;
        for pair in path.windows(2) {
            w = graph.other(pair[0], w);
            terms.push((w, pair[0], pair[1], 2));
        }
        for (pole, end) in [(0, path[0]), (1, *path.last().unwrap())] {
            if node.indeg[pole] <= 1 {
                continue;
            }
            let p = node.poles[pole];
            let ext: Vec<EdgeId> =
                graph.rotation(p).iter().copied().filter(|e| !node.pole_edges[pole].contains(e)).collect();
            let weight = 2 / ext.len() as i64;
            for x in ext {
                terms.push(if pole == 0 { (u, x, end, weight) } else { (v, end, x, weight) });
            }
        }
        SpiralityFunctional { terms }
    }

    /// Along the leftmost path of node `id`.
    pub fn leftmost(graph: &PlaneGraph, tree: &SpqTree, id: NodeId) -> Self {
        let path: Vec<EdgeId> = tree.leftmost_path(id).into_iter().map(|(_, e)| e).collect();
        Self::along(graph, tree, id, &path)
    }

    pub fn eval(&self, graph: &PlaneGraph, angles: &[Vec<u8>]) -> HalfInt {
        HalfInt(self.terms.iter().map(|&(w, a, b, k)| k * self.term(graph, angles, w, a, b)).sum())
    }

    fn term(&self, graph: &PlaneGraph, angles: &[Vec<u8>], w: VertexId, a: EdgeId, b: EdgeId) -> i64 {
        turn_from(&angles[w.idx()], graph.position(w, a), graph.position(w, b))
    }

    /// Contribution of vertex `w` given its angles.
    fn vertex_part(&self, graph: &PlaneGraph, w: VertexId, angles: &[u8]) -> i64 {
        self.terms
            .iter()
            .filter(|t| t.0 == w)
            .map(|&(_, a, b, k)| k * turn_from(angles, graph.position(w, a), graph.position(w, b)))
            .sum()
    }
}

/// Spirality of node `id` in `rep`, which must be a representation of the
/// working graph of the tree (including a dummy reference edge).
pub fn measure_spirality(rep: &OrthoRep, tree: &SpqTree, id: NodeId) -> HalfInt {
    SpiralityFunctional::leftmost(rep.graph(), tree, id).eval(rep.graph(), rep.all_angles())
}

struct PathSearch<'a> {
    graph: &'a PlaneGraph,
    allowed: HashSet<EdgeId>,
    target: VertexId,
    limit: usize,
    seen: Vec<bool>,
    path: Vec<EdgeId>,
    out: Vec<Vec<EdgeId>>,
}

impl PathSearch<'_> {
    fn go(&mut self, w: VertexId) {
        if self.out.len() >= self.limit {
            return;
        }
        if w == self.target {
            self.out.push(self.path.clone());
            return;
        }
        self.seen[w.idx()] = true;
        for &e in self.graph.rotation(w) {
            let x = self.graph.other(e, w);
            if self.allowed.contains(&e) && !self.seen[x.idx()] {
                self.path.push(e);
                self.go(x);
                self.path.pop();
            }
        }
        self.seen[w.idx()] = false;
    }
}

/// Simple `u`-`v` paths that use only edges of `edges`, at most `limit`.
pub fn simple_paths(graph: &PlaneGraph, edges: &[EdgeId], u: VertexId, v: VertexId, limit: usize) -> Vec<Vec<EdgeId>> {
    let mut search = PathSearch {
        graph,
        allowed: edges.iter().copied().collect(),
        target: v,
        limit,
        seen: vec![false; graph.vertex_count()],
        path: Vec::new(),
        out: Vec::new(),
    };
    search.go(u);
    search.out
}

/// Breadth-first vertex order from the first terminal.
fn bfs_order(graph: &PlaneGraph, vertices: &[VertexId]) -> Vec<VertexId> {
    let inside: HashSet<VertexId> = vertices.iter().copied().collect();
    let mut seen = HashSet::new();
    let mut order = Vec::with_capacity(vertices.len());
    for &start in vertices {
        if !seen.insert(start) {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            order.push(w);
            for &e in graph.rotation(w) {
                let x = graph.other(e, w);
                if inside.contains(&x) && seen.insert(x) {
                    queue.push_back(x);
                }
            }
        }
    }
    order
}

/// Which faces must close with which turn sum.
struct FaceTargets {
    faces: crate::graph::Faces,
    target: Vec<Option<i32>>,
}

impl FaceTargets {
    fn all(graph: &PlaneGraph) -> Self {
        let faces = graph.faces();
        let target = faces.ids().map(|f| Some(if f == faces.external() { -4 } else { 4 })).collect();
        FaceTargets { faces, target }
    }
}

/// Exhaustive search over per-vertex angle tuples. Returns the achievable
/// values of `functional` (or `{0}` when none is given) over all angle
/// assignments of `vertices` meeting the face targets.
fn search(
    graph: &PlaneGraph,
    vertices: &[VertexId],
    ft: &FaceTargets,
    functional: Option<&SpiralityFunctional>,
) -> BTreeSet<i64> {
    let order = bfs_order(graph, vertices);
    let nf = ft.faces.len();
    let mut remaining = vec![0i32; nf];
    for &w in &order {
        for i in 0..graph.degree(w) {
            remaining[ft.faces.face_of((w, i)).idx()] += 1;
        }
    }
    let tracked: Vec<FaceId> = ft.faces.ids().filter(|f| ft.target[f.idx()].is_some()).collect();
    let mut slot = vec![usize::MAX; nf];
    for (k, f) in tracked.iter().enumerate() {
        slot[f.idx()] = k;
    }
    let mut states: HashSet<(Vec<i32>, i64)> = HashSet::from([(vec![0; tracked.len()], 0)]);
    for &w in &order {
        let d = graph.degree(w);
        for i in 0..d {
            remaining[ft.faces.face_of((w, i)).idx()] -= 1;
        }
        let options: Vec<(&[u8], i64)> =
            angle_choices(d).iter().map(|&a| (a, functional.map_or(0, |f| f.vertex_part(graph, w, a)))).collect();
        let mut next = HashSet::with_capacity(states.len() * options.len());
        for (sums, sigma) in &states {
            'opt: for &(a, contrib) in &options {
                let mut s = sums.clone();
                for (i, &x) in a.iter().enumerate() {
                    let f = ft.faces.face_of((w, i)).idx();
                    if slot[f] != usize::MAX {
                        s[slot[f]] += 2 - i32::from(x);
                    }
                }
                for i in 0..d {
                    let f = ft.faces.face_of((w, i)).idx();
                    if slot[f] == usize::MAX {
                        continue;
                    }
                    let target = ft.target[f].unwrap();
                    let (cur, left) = (s[slot[f]], remaining[f]);
                    if cur - 2 * left > target || cur + left < target {
                        continue 'opt;
                    }
                    if left == 0 {
                        s[slot[f]] = 0;
                    }
                }
                next.insert((s, sigma + contrib));
            }
        }
        states = next;
        if states.is_empty() {
            break;
        }
    }
    states.into_iter().map(|(_, s)| s).collect()
}

fn check_cap(graph: &PlaneGraph, cap: usize) -> Result<()> {
    if graph.edge_count() > cap {
        return Err(Error::CapExceeded { edges: graph.edge_count(), cap });
    }
    Ok(())
}

/// Whether `graph` admits a zero-bend orthogonal representation.
pub fn has_rep(graph: &PlaneGraph, cap: usize) -> Result<bool> {
    check_cap(graph, cap)?;
    let all: Vec<VertexId> = graph.vertices().collect();
    Ok(!search(graph, &all, &FaceTargets::all(graph), None).is_empty())
}

/// Iterator over every zero-bend orthogonal representation of a graph, in
/// lexicographic order of per-vertex angle choices.
pub struct RepIter {
    graph: PlaneGraph,
    faces: crate::graph::Faces,
    /// Per vertex: for each corner, its face.
    corner_faces: Vec<Vec<usize>>,
    targets: Vec<i32>,
    /// Number of corners per face belonging to vertices after position `k`.
    left_after: Vec<Vec<i32>>,
    choice: Vec<usize>,
    sums: Vec<Vec<i32>>,
    depth: usize,
    done: bool,
}

impl RepIter {
    fn new(graph: &PlaneGraph) -> Self {
        let faces = graph.faces();
        let n = graph.vertex_count();
        let corner_faces: Vec<Vec<usize>> =
            graph.vertices().map(|v| (0..graph.degree(v)).map(|i| faces.face_of((v, i)).idx()).collect()).collect();
        let targets = faces.ids().map(|f| if f == faces.external() { -4 } else { 4 }).collect();
        let mut left_after = vec![vec![0i32; faces.len()]; n + 1];
        for k in (0..n).rev() {
            left_after[k] = left_after[k + 1].clone();
            for &f in &corner_faces[k] {
                left_after[k][f] += 1;
            }
        }
        let mut it = RepIter {
            graph: graph.clone(),
            faces,
            corner_faces,
            targets,
            left_after,
            choice: vec![0; n],
            sums: vec![Vec::new(); n + 1],
            depth: 0,
            done: false,
        };
        it.sums[0] = vec![0; it.faces.len()];
        it
    }

    fn angles(&self) -> Vec<Vec<u8>> {
        self.graph.vertices().map(|v| angle_choices(self.graph.degree(v))[self.choice[v.idx()]].to_vec()).collect()
    }

    /// Applies the current choice at `depth`, returning whether it is
    /// consistent with the face targets.
    fn apply(&mut self) -> bool {
        let k = self.depth;
        let v = VertexId::from(k);
        let opts = angle_choices(self.graph.degree(v));
        let a = opts[self.choice[k]];
        let mut s = self.sums[k].clone();
        for (i, &x) in a.iter().enumerate() {
            s[self.corner_faces[k][i]] += 2 - i32::from(x);
        }
        let ok = self.corner_faces[k].iter().all(|&f| {
            let left = self.left_after[k + 1][f];
            s[f] - 2 * left <= self.targets[f] && s[f] + left >= self.targets[f]
        });
        self.sums[k + 1] = s;
        ok
    }
}

impl Iterator for RepIter {
    type Item = OrthoRep;

    fn next(&mut self) -> Option<OrthoRep> {
        let n = self.graph.vertex_count();
        if self.done {
            return None;
        }
        let mut backtrack = self.depth == n;
        loop {
            if backtrack {
                if self.depth == 0 {
                    self.done = true;
                    return None;
                }
                self.depth -= 1;
                self.choice[self.depth] += 1;
                backtrack = false;
            }
            let k = self.depth;
            let opts = angle_choices(self.graph.degree(VertexId::from(k))).len();
            if self.choice[k] >= opts {
                self.choice[k] = 0;
                backtrack = true;
                continue;
            }
            if !self.apply() {
                self.choice[k] += 1;
                continue;
            }
            self.depth += 1;
            if self.depth == n {
                let rep = OrthoRep::new(self.graph.clone(), self.angles()).expect("one angle per corner");
                return Some(rep);
            }
            self.choice[self.depth] = 0;
        }
    }
}

/// Every zero-bend orthogonal representation of `graph`.
///
/// # Errors
/// `CapExceeded` above `cap` edges.
pub fn enumerate_reps(graph: &PlaneGraph, cap: usize) -> Result<RepIter> {
    check_cap(graph, cap)?;
    Ok(RepIter::new(graph))
}

/// Per node, the spiralities its component can take: every vertex of the
/// pertinent graph (poles with their full rotation) gets an angle tuple and
/// every face bounded only by pertinent edges closes with turn sum +4.
///
/// # Errors
/// `CapExceeded` above `cap` edges.
pub fn oracle_intervals(rooted: &Rooted, cap: usize) -> Result<Vec<BTreeSet<HalfInt>>> {
    let graph = &rooted.working;
    let tree = &rooted.tree;
    check_cap(&rooted.graph, cap)?;
    let faces = graph.faces();
    let mut out = vec![BTreeSet::new(); tree.len()];
    for id in tree.postorder() {
        if id == tree.root() || id == tree.reference_node() {
            continue;
        }
        let edges: HashSet<EdgeId> = tree.pertinent_edges(id).into_iter().collect();
        let target = faces
            .ids()
            .map(|f| {
                let inside = faces.corners(f).iter().all(|&c| edges.contains(&graph.corner_exit(c)));
                inside.then_some(4)
            })
            .collect();
        let ft = FaceTargets { faces: faces.clone(), target };
        let functional = SpiralityFunctional::leftmost(graph, tree, id);
        let verts = tree.pertinent_vertices(id);
        out[id.idx()] = search(graph, &verts, &ft, Some(&functional)).into_iter().map(HalfInt).collect();
    }
    Ok(out)
}

/// Whole-graph ground truth for one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    /// The input graph admits a zero-bend representation.
    pub rectilinear: bool,
    /// Spiralities of the root child over representations of the input
    /// graph with a straight reference edge, or with a freely bending dummy
    /// reference edge.
    pub eta_values: BTreeSet<HalfInt>,
}

/// Exhaustive whole-graph verdict.
///
/// # Errors
/// `CapExceeded` above `cap` edges.
pub fn oracle_verdict(rooted: &Rooted, cap: usize) -> Result<OracleVerdict> {
    let rectilinear = has_rep(&rooted.graph, cap)?;
    let graph = &rooted.working;
    let tree = &rooted.tree;
    let mut ft = FaceTargets::all(graph);
    if tree.is_dummy() {
        let dummy = tree.reference().edge;
        let [s, _] = graph.endpoints(dummy);
        let p = graph.position(s, dummy);
        let d = graph.degree(s);
        for c in [(s, p), (s, (p + d - 1) % d)] {
            ft.target[ft.faces.face_of(c).idx()] = None;
        }
    }
    let functional = SpiralityFunctional::leftmost(graph, tree, tree.eta());
    let all: Vec<VertexId> = graph.vertices().collect();
    let eta_values = search(graph, &all, &ft, Some(&functional)).into_iter().map(HalfInt).collect();
    Ok(OracleVerdict { rectilinear, eta_values })
}

/// Values of a tester interval as a set.
pub fn interval_set(iv: HalfIntInterval) -> BTreeSet<HalfInt> {
    iv.values().collect()
}

/// A node whose tester interval differs from the oracle set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub node: NodeId,
    pub label: String,
    pub tester: HalfIntInterval,
    pub oracle: BTreeSet<HalfInt>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let oracle: Vec<String> = self.oracle.iter().map(ToString::to_string).collect();
        write!(f, "node {} {}: tester {} oracle {{{}}}", self.node, self.label, self.tester, oracle.join(","))
    }
}

/// Compares all non-root intervals with the oracle sets.
pub fn compare(tree: &SpqTree, intervals: &[HalfIntInterval], oracle: &[BTreeSet<HalfInt>]) -> Vec<Mismatch> {
    tree.postorder()
        .filter(|&id| id != tree.root() && id != tree.reference_node())
        .filter(|&id| interval_set(intervals[id.idx()]) != oracle[id.idx()])
        .map(|id| Mismatch {
            node: id,
            label: tree.node(id).label(),
            tester: intervals[id.idx()],
            oracle: oracle[id.idx()].clone(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::build;
    use crate::spq::build_spq_tree;
    use crate::term::parse_spterm;
    use crate::tester::{compute_all_intervals, test};

    fn graph(s: &str) -> PlaneGraph {
        crate::graph::to_plane_graph(&parse_spterm(s).unwrap()).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_reps(&graph("P(Q1,S(Q1,Q1))"), 14).unwrap().count(), 0);
        assert_eq!(enumerate_reps(&graph("P(Q2,Q2)"), 14).unwrap().count(), 1);
        let single: Vec<_> = enumerate_reps(&graph("Q1"), 14).unwrap().collect();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].all_angles(), [vec![4], vec![4]]);
        assert!(matches!(enumerate_reps(&graph("Q15"), 14), Err(Error::CapExceeded { edges: 15, cap: 14 })));
    }

    #[test]
    fn enumeration_agrees_with_search() {
        for s in ["P(Q2,Q3)", "P(Q1,Q1,Q1)", "P(S(Q1,P(Q1,Q1)),Q1)", "Q4", "P(Q3,S(Q1,P(Q2,Q2),Q1))"] {
            let g = graph(s);
            let n = enumerate_reps(&g, 14).unwrap().count();
            assert_eq!(n > 0, has_rep(&g, 14).unwrap(), "{s}");
            for r in enumerate_reps(&g, 14).unwrap() {
                assert!(verify_orthorep(&r, &g).passed());
            }
        }
    }

    #[test]
    fn perturbed_square_fails() {
        let g = graph("P(Q2,Q2)");
        let r = enumerate_reps(&g, 14).unwrap().next().unwrap();
        let mut angles = r.all_angles().to_vec();
        let i = angles[2].iter().position(|&a| a == 1).unwrap();
        angles[2][i] = 2;
        let bad = OrthoRep::new(g.clone(), angles).unwrap();
        let report = verify_orthorep(&bad, &g);
        assert!(report.count(ViolationKind::VertexSum) > 0 && report.count(ViolationKind::FaceSum) > 0);
        let reversed: Vec<Vec<EdgeId>> = g.rotations().iter().map(|r| r.iter().rev().copied().collect()).collect();
        let mirror = PlaneGraph::new(g.edges().to_vec(), reversed, g.terminals()).unwrap();
        let report = verify_orthorep(&OrthoRep::new(mirror, r.all_angles().to_vec()).unwrap(), &g);
        assert_eq!(report.count(ViolationKind::EmbeddingMismatch), 1);
    }

    #[test]
    fn spirality_of_square_branches() {
        let v = test(&parse_spterm("P(Q2,Q2)").unwrap()).unwrap();
        let tree = v.tree();
        let c = build(&v).unwrap();
        let eta = tree.node(tree.eta());
        assert_eq!(measure_spirality(&c.working, tree, eta.children[0]), HalfInt(2));
        assert_eq!(measure_spirality(&c.working, tree, eta.children[1]), HalfInt(-2));
    }

    #[test]
    fn spirality_is_path_independent() {
        let v = test(&parse_spterm("S(Q1,P(Q2,S(Q1,P(Q2,Q2),Q1)),Q1)").unwrap()).unwrap();
        assert!(v.accepted());
        let c = build(&v).unwrap();
        let tree = v.tree();
        let g = &v.rooted.working;
        for id in tree.postorder().filter(|&id| id != tree.root() && id != tree.reference_node()) {
            let [u, w] = tree.node(id).poles;
            let want = measure_spirality(&c.working, tree, id);
            let paths = simple_paths(g, &tree.pertinent_edges(id), u, w, 64);
            assert!(!paths.is_empty());
            for p in paths {
                let f = SpiralityFunctional::along(g, tree, id, &p);
                assert_eq!(f.eval(g, c.working.all_angles()), want, "node {id}");
            }
        }
    }

    #[test]
    fn component_sets_match_small_intervals() {
        for s in ["P(Q2,Q2)", "Q4", "S(Q1,P(Q3,Q3,Q3),Q1)", "P(Q1,S(Q1,Q1))", "S(P(Q2,Q2),P(Q2,Q2),P(Q2,Q2))"] {
            let r = build_spq_tree(&parse_spterm(s).unwrap()).unwrap();
            let sets = oracle_intervals(&r, 14).unwrap();
            let iv = compute_all_intervals(&r.tree);
            assert_eq!(compare(&r.tree, &iv, &sets), [], "{s}");
        }
    }

    #[test]
    fn drawing_checks() {
        let v = test(&parse_spterm("P(S(Q2,P(Q2,Q2)),Q4)").unwrap()).unwrap();
        let rep = build(&v).unwrap().rep;
        let g = rep.graph().clone();
        let d = crate::layout::draw(&rep).unwrap();
        assert!(verify_drawing(&d, &g).passed());
        let mirrored = GridDrawing { coords: d.coords.iter().map(|&[x, y]| [-x, y]).collect() };
        assert!(verify_drawing(&mirrored, &g).count(ViolationKind::EmbeddingMismatch) > 0);
        let path = graph("Q2");
        let folded = GridDrawing { coords: vec![[0, 0], [1, 0], [2, 0]] };
        assert!(verify_drawing(&folded, &path).count(ViolationKind::Crossing) > 0);
    }

    #[test]
    fn whole_graph_verdicts() {
        let tri = build_spq_tree(&parse_spterm("P(Q1,S(Q1,Q1))").unwrap()).unwrap();
        let o = oracle_verdict(&tri, 14).unwrap();
        assert!(!o.rectilinear && o.eta_values.is_empty());
        let sq = build_spq_tree(&parse_spterm("P(Q2,Q2)").unwrap()).unwrap();
        let o = oracle_verdict(&sq, 14).unwrap();
        assert!(o.rectilinear);
        assert_eq!(o.eta_values, [-2, 0, 2].map(HalfInt).into());
    }
}
