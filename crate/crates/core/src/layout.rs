//! Grid coordinates for zero-bend orthogonal representations.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::builder::OrthoRep;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, PlaneGraph, VertexId};

/// Unit direction: 0 east, 1 north, 2 west, 3 south.
pub type Dir = u8;

fn rot(d: Dir, k: i32) -> Dir {
    (i32::from(d) + k).rem_euclid(4) as Dir
}

/// Right turn from direction `a` to direction `b`.
fn turn(a: Dir, b: Dir) -> i32 {
    match (i32::from(a) - i32::from(b)).rem_euclid(4) {
        0 => 0,
        1 => 1,
        3 => -1,
        _ => -2,
    }
}

/// Integer coordinates per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridDrawing {
    pub coords: Vec<[i64; 2]>,
}

impl GridDrawing {
    pub fn width(&self) -> i64 {
        span(self.coords.iter().map(|c| c[0]))
    }

    pub fn height(&self) -> i64 {
        span(self.coords.iter().map(|c| c[1]))
    }

    /// `{"vertex_id":[x,y],...}` in vertex order.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{");
        for (i, [x, y]) in self.coords.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "\"{i}\":[{x},{y}]");
        }
        out.push('}');
        out
    }
}

fn span(it: impl Iterator<Item = i64> + Clone) -> i64 {
    it.clone().max().unwrap_or(0) - it.min().unwrap_or(0)
}

/// Direction of every edge, oriented from its first endpoint to its second.
///
/// # Errors
/// `InvalidRepresentation` if the angles are inconsistent around a cycle.
pub fn edge_directions(rep: &OrthoRep) -> Result<Vec<Dir>> {
    let g = rep.graph();
    let [s, _] = g.terminals();
    let mut dir: Vec<Option<Dir>> = vec![None; g.edge_count()];
    let out_dir = |dir: &[Option<Dir>], v: VertexId, e: EdgeId| {
        dir[e.idx()].map(|d| if g.endpoints(e)[0] == v { d } else { rot(d, 2) })
    };
    let first = g.rotation(s)[0];
    dir[first.idx()] = Some(if g.endpoints(first)[0] == s { 0 } else { 2 });
    let mut queue = VecDeque::from([s]);
    let mut seen = vec![false; g.vertex_count()];
    seen[s.idx()] = true;
    while let Some(v) = queue.pop_front() {
        let r = g.rotation(v);
        let start = (0..r.len()).find(|&i| dir[r[i].idx()].is_some()).expect("vertex reached through an edge");
        let mut d = out_dir(&dir, v, r[start]).unwrap();
        for k in 1..=r.len() {
            d = rot(d, i32::from(rep.angle((v, (start + k - 1) % r.len()))));
            let e = r[(start + k) % r.len()];
            let want = if g.endpoints(e)[0] == v { d } else { rot(d, 2) };
            match dir[e.idx()] {
                Some(x) if x != want => {
                    return Err(Error::InvalidRepresentation(format!("inconsistent direction of edge {e}")));
                }
                _ => dir[e.idx()] = Some(want),
            }
            let w = g.other(e, v);
            if !seen[w.idx()] {
                seen[w.idx()] = true;
                queue.push_back(w);
            }
        }
    }
    Ok(dir.into_iter().map(|d| d.expect("connected graph")).collect())
}

/// A dart structure in which every face is a rectangle. Vertices and edges
/// beyond the original counts are dummies; darts `2k` and `2k+1` are the
/// two orientations of edge `k`.
#[derive(Debug, Clone)]
pub struct Refined {
    tail: Vec<u32>,
    dir: Vec<Dir>,
    next: Vec<u32>,
    prev: Vec<u32>,
    vertices: usize,
    /// Original vertex and edge counts.
    pub original: (usize, usize),
    /// Per edge, the original edge it is a piece of.
    pub origin: Vec<Option<EdgeId>>,
}

impl Refined {
    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.tail.len() / 2
    }

    fn head(&self, d: u32) -> u32 {
        self.tail[(d ^ 1) as usize]
    }

    fn head_turn(&self, d: u32) -> i32 {
        turn(self.dir[d as usize], self.dir[self.next[d as usize] as usize])
    }

    fn new_vertex(&mut self) -> u32 {
        self.vertices += 1;
        (self.vertices - 1) as u32
    }

    fn new_edge(&mut self, a: u32, b: u32, d: Dir, origin: Option<EdgeId>) -> u32 {
        let k = self.tail.len() as u32;
        self.tail.extend([a, b]);
        self.dir.extend([d, rot(d, 2)]);
        self.next.extend([u32::MAX, u32::MAX]);
        self.prev.extend([u32::MAX, u32::MAX]);
        self.origin.push(origin);
        k
    }

    fn link(&mut self, a: u32, b: u32) {
        self.next[a as usize] = b;
        self.prev[b as usize] = a;
    }

    /// Splits dart `g` at a new vertex, keeping `g` as the first piece.
    /// Returns the new vertex and the second piece.
    fn split(&mut self, g: u32) -> (u32, u32) {
        let x = self.new_vertex();
        let b = self.head(g);
        let (gt, old_next, twin_prev) = (g ^ 1, self.next[g as usize], self.prev[(g ^ 1) as usize]);
        let origin = self.origin[(g / 2) as usize];
        let g2 = self.new_edge(x, b, self.dir[g as usize], origin);
        self.tail[gt as usize] = x;
        self.link(g2, old_next);
        self.link(twin_prev, g2 ^ 1);
        self.link(g2 ^ 1, gt);
        self.link(g, g2);
        (x, g2)
    }

    /// Cuts from the head of `e_in` straight ahead to dart `g`.
    fn cut(&mut self, e_in: u32, g: u32) -> (u32, u32) {
        let w = self.head(e_in);
        let old = self.next[e_in as usize];
        let (x, g2) = self.split(g);
        let r = self.new_edge(w, x, self.dir[e_in as usize], None);
        self.link(e_in, r);
        self.link(r, g2);
        self.link(g, r ^ 1);
        self.link(r ^ 1, old);
        (r, g2)
    }

    fn rectangularize(&mut self, start: u32) -> Result<()> {
        let mut pending: VecDeque<u32> = VecDeque::new();
        let mut d = start;
        loop {
            if self.head_turn(d) != 0 {
                pending.push_back(d);
            }
            d = self.next[d as usize];
            if d == start {
                break;
            }
        }
        let mut negatives = pending.iter().filter(|&&d| self.head_turn(d) < 0).count();
        let mut stack: VecDeque<u32> = VecDeque::new();
        let mut idle = 0usize;
        while negatives > 0 {
            let d = match pending.pop_front() {
                Some(d) => d,
                None => stack.pop_front().expect("face with a reflex corner"),
            };
            stack.push_back(d);
            idle += 1;
            while let Some((k, e_in)) = self.pattern(&stack) {
                let last = *stack.back().unwrap();
                let g = self.next[last as usize];
                stack.truncate(stack.len() - k - 1);
                let (r, g2) = self.cut(e_in, g);
                stack.push_back(r);
                if pending.front() == Some(&g) {
                    pending[0] = g2;
                } else if pending.is_empty() && stack.front() == Some(&g) {
                    stack[0] = g2;
                }
                negatives -= 1;
                idle = 0;
            }
            if idle > 2 * (stack.len() + pending.len()) + 8 {
                return Err(Error::InvalidRepresentation("face cannot be made rectangular".into()));
            }
        }
        Ok(())
    }

    /// A reflex dart followed by enough right turns at the top of `stack`.
    fn pattern(&self, stack: &VecDeque<u32>) -> Option<(usize, u32)> {
        let m = stack.len();
        for k in [2usize, 3] {
            if m > k
                && self.head_turn(stack[m - 1 - k]) == 1 - k as i32
                && (m - k..m).all(|i| self.head_turn(stack[i]) == 1)
            {
                return Some((k, stack[m - 1 - k]));
            }
        }
        None
    }

    /// Encloses the external face in a rectangular frame attached at a
    /// reflex corner and returns a dart of the face between graph and frame.
    fn frame(&mut self, external: u32) -> Result<u32> {
        let mut e_in = external;
        while self.head_turn(e_in) >= 0 {
            e_in = self.next[e_in as usize];
            if e_in == external {
                return Err(Error::InvalidRepresentation("external face without reflex corner".into()));
            }
        }
        let w = self.head(e_in);
        let old = self.next[e_in as usize];
        let d = self.dir[e_in as usize];
        let x = self.new_vertex();
        let c: Vec<u32> = (0..4).map(|_| self.new_vertex()).collect();
        let r = self.new_edge(w, x, d, None);
        let ring = [
            (x, c[0], rot(d, -1)),
            (c[0], c[1], rot(d, -2)),
            (c[1], c[2], rot(d, 1)),
            (c[2], c[3], d),
            (c[3], x, rot(d, -1)),
        ];
        let f: Vec<u32> = ring.iter().map(|&(a, b, dd)| self.new_edge(a, b, dd, None)).collect();
        self.link(e_in, r);
        self.link(r, f[0]);
        for i in 0..4 {
            self.link(f[i], f[i + 1]);
        }
        self.link(f[4], r ^ 1);
        self.link(r ^ 1, old);
        for i in (1..5).rev() {
            self.link(f[i] ^ 1, f[i - 1] ^ 1);
        }
        self.link(f[0] ^ 1, f[4] ^ 1);
        Ok(r)
    }
}

/// Inserts dummy vertices and edges until every face is a rectangle.
///
/// # Errors
/// `InvalidRepresentation` if the angles do not describe a valid shape.
pub fn refine(rep: &OrthoRep) -> Result<Refined> {
    let g = rep.graph();
    let dirs = edge_directions(rep)?;
    let m = g.edge_count();
    let mut r = Refined {
        tail: Vec::with_capacity(4 * m),
        dir: Vec::with_capacity(4 * m),
        next: Vec::new(),
        prev: Vec::new(),
        vertices: g.vertex_count(),
        original: (g.vertex_count(), m),
        origin: Vec::with_capacity(2 * m),
    };
    for (k, &[a, b]) in g.edges().iter().enumerate() {
        r.new_edge(a.0, b.0, dirs[k], Some(EdgeId::from(k)));
    }
    let dart_into = |v: VertexId, e: EdgeId| 2 * e.0 + u32::from(g.endpoints(e)[1] != v);
    for v in g.vertices() {
        let rt = g.rotation(v);
        for (i, &e) in rt.iter().enumerate() {
            let out = rt[(i + 1) % rt.len()];
            r.link(dart_into(v, e), dart_into(v, out) ^ 1);
        }
    }
    let faces = g.faces();
    let external = faces.external();
    let mut starts = Vec::new();
    for f in faces.ids() {
        let (v, i) = faces.corners(f)[0];
        starts.push((f == external, dart_into(v, g.rotation(v)[i])));
    }
    for (is_external, d) in starts {
        let d = if is_external { r.frame(d)? } else { d };
        r.rectangularize(d)?;
    }
    Ok(r)
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.0[root as usize] != root {
            root = self.0[root as usize];
        }
        let mut y = x;
        while self.0[y as usize] != root {
            let n = self.0[y as usize];
            self.0[y as usize] = root;
            y = n;
        }
        root
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb) as usize] = ra.min(rb);
        }
    }
}

/// Longest-path coordinate along one axis: edges with direction `pos` or
/// `neg` constrain, the other edges share the coordinate.
fn axis(r: &Refined, pos: Dir) -> Result<Vec<i64>> {
    let n = r.vertices;
    let mut uf = UnionFind((0..n as u32).collect());
    let along = |d: Dir| d == pos || d == rot(pos, 2);
    for k in 0..r.edge_count() {
        let d = 2 * k as u32;
        if !along(r.dir[d as usize]) {
            uf.union(r.tail[d as usize], r.head(d));
        }
    }
    let class: Vec<u32> = (0..n as u32).map(|v| uf.find(v)).collect();
    let mut succ: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut indeg = vec![0u32; n];
    for k in 0..r.edge_count() {
        let d = 2 * k as u32;
        if along(r.dir[d as usize]) {
            let (a, b) = (class[r.tail[d as usize] as usize], class[r.head(d) as usize]);
            let (lo, hi) = if r.dir[d as usize] == pos { (a, b) } else { (b, a) };
            succ[lo as usize].push(hi);
            indeg[hi as usize] += 1;
        }
    }
    let mut coord = vec![0i64; n];
    let mut queue: VecDeque<u32> =
        (0..n as u32).filter(|&c| class[c as usize] == c && indeg[c as usize] == 0).collect();
    let mut done = 0;
    while let Some(c) = queue.pop_front() {
        done += 1;
        for &h in &succ[c as usize] {
            coord[h as usize] = coord[h as usize].max(coord[c as usize] + 1);
            indeg[h as usize] -= 1;
            if indeg[h as usize] == 0 {
                queue.push_back(h);
            }
        }
    }
    if done != (0..n).filter(|&c| class[c] == c as u32).count() {
        return Err(Error::CycleInConstraintGraph);
    }
    Ok(class.iter().map(|&c| coord[c as usize]).collect())
}

fn compress(values: &mut [i64]) {
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for v in values.iter_mut() {
        *v = sorted.binary_search(v).unwrap() as i64;
    }
}

/// Coordinates of the original vertices, rank-compressed and translated so
/// that the first terminal sits at the origin.
///
/// # Errors
/// `CycleInConstraintGraph` if the refined shape is inconsistent.
pub fn compact(r: &Refined, source: VertexId) -> Result<GridDrawing> {
    let n = r.original.0;
    let mut xs = axis(r, 0)?;
    let mut ys = axis(r, 1)?;
    xs.truncate(n);
    ys.truncate(n);
    compress(&mut xs);
    compress(&mut ys);
    let (ox, oy) = (xs[source.idx()], ys[source.idx()]);
    Ok(GridDrawing { coords: xs.into_iter().zip(ys).map(|(x, y)| [x - ox, y - oy]).collect() })
}

/// Refines and compacts.
///
/// # Errors
/// As [`refine`] and [`compact`].
pub fn draw(rep: &OrthoRep) -> Result<GridDrawing> {
    compact(&refine(rep)?, rep.graph().terminals()[0])
}

/// Direction of `e` leaving `v` in a drawing.
pub fn drawn_direction(drawing: &GridDrawing, graph: &PlaneGraph, v: VertexId, e: EdgeId) -> Option<Dir> {
    let [x0, y0] = drawing.coords[v.idx()];
    let [x1, y1] = drawing.coords[graph.other(e, v).idx()];
    match ((x1 - x0).signum(), (y1 - y0).signum()) {
        (1, 0) => Some(0),
        (0, 1) => Some(1),
        (-1, 0) => Some(2),
        (0, -1) => Some(3),
        _ => None,
    }
}

/// Angles read off a drawing, in the corner order of `graph`.
pub fn read_angles(drawing: &GridDrawing, graph: &PlaneGraph) -> Option<Vec<Vec<u8>>> {
    graph
        .vertices()
        .map(|v| {
            let r = graph.rotation(v);
            (0..r.len())
                .map(|i| {
                    let a = drawn_direction(drawing, graph, v, r[i])?;
                    let b = drawn_direction(drawing, graph, v, r[(i + 1) % r.len()])?;
                    Some(match (i32::from(b) - i32::from(a)).rem_euclid(4) {
                        0 => 4,
                        k => k as u8,
                    })
                })
                .collect()
        })
        .collect()
}

/// SVG with one dot per vertex and one segment per edge.
pub fn emit_svg(drawing: &GridDrawing, graph: &PlaneGraph, scale: u32) -> String {
    let s = i64::from(scale);
    let minx = drawing.coords.iter().map(|c| c[0]).min().unwrap_or(0);
    let maxy = drawing.coords.iter().map(|c| c[1]).max().unwrap_or(0);
    let p = |v: VertexId| {
        let [x, y] = drawing.coords[v.idx()];
        ((x - minx) * s, (maxy - y) * s)
    };
    let (w, h) = (drawing.width() * s + 24, drawing.height() * s + 24);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="-12 -12 {w} {h}">"#
    );
    let _ = writeln!(out, r#"<g stroke="black" stroke-width="1.5" stroke-linecap="square">"#);
    for &[a, b] in graph.edges() {
        let ((x1, y1), (x2, y2)) = (p(a), p(b));
        let _ = writeln!(out, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g fill="black">"#);
    for v in graph.vertices() {
        let (x, y) = p(v);
        let _ = writeln!(out, r#"<circle cx="{x}" cy="{y}" r="3"/>"#);
    }
    let _ = writeln!(out, "</g>\n</svg>");
    out
}
