//! Assembling complexes from pieces: product blowups over joins, and
//! amalgams over disjoint unions, where component complexes are joined by
//! the edges of a skeleton graph whose loops carry the isolated vertices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::blowup::BlowupComplex;
use crate::cube::{isomorphic_unlabeled, CubeComplex, CubicalMap, Square, Step};
use crate::error::{Error, Result};
use crate::graph::{SignedSet, SignedVertex, SimplicialGraph, VertexSet};
use crate::partition::WhiteheadPartition;
use crate::restriction::collapse_separating;
use crate::structure::Structure;

/// `Γ = Γ₁ ∗ Γ₂`: every vertex of one part is adjacent to every vertex of
/// the other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JoinDecomposition {
    pub parts: [VertexSet; 2],
}

impl JoinDecomposition {
    pub fn new(g: &SimplicialGraph, a: VertexSet, b: VertexSet) -> Result<Self> {
        if a.is_empty() || b.is_empty() || !a.intersection(b).is_empty() || a.union(b) != g.vertices() {
            return Err(Error::Precondition("the parts must split the vertices into two nonempty sets".into()));
        }
        for v in a.iter() {
            if !b.is_subset(g.lk(v)) {
                return Err(Error::Precondition(format!("`{}` misses part of the other factor", g.name(v))));
            }
        }
        Ok(JoinDecomposition { parts: [a, b] })
    }

    /// The split whose first part is the complement component of vertex 0,
    /// if the graph is a nontrivial join.
    pub fn find(g: &SimplicialGraph) -> Option<Self> {
        let all = g.vertices();
        let mut part = VertexSet::singleton(0);
        let mut q = VecDeque::from([0]);
        while let Some(v) = q.pop_front() {
            for w in all.difference(g.st(v)).difference(part).iter() {
                part.insert(w);
                q.push_back(w);
            }
        }
        let rest = all.difference(part);
        (!rest.is_empty()).then(|| JoinDecomposition { parts: [part, rest] })
    }
}

fn lift_signed(s: SignedSet, map: &[usize]) -> SignedSet {
    SignedSet::from_iter(s.iter().map(|x| SignedVertex { vertex: map[x.vertex], inverse: x.inverse }))
}

/// A partition of an induced subgraph, with `extra` added to its link.
fn lift_partition(p: &WhiteheadPartition, map: &[usize], extra: VertexSet) -> WhiteheadPartition {
    WhiteheadPartition::from_sides_unchecked(
        lift_signed(p.link(), map).union(extra.signed()),
        lift_signed(p.side1(), map),
        lift_signed(p.side2(), map),
    )
}

/// The blowup of `g` along the entries of both factors, each lifted by
/// putting the whole other factor in its link. Factor 1 entries come first.
pub fn product_blowup(g: &SimplicialGraph, j: &JoinDecomposition, x1: &BlowupComplex, x2: &BlowupComplex) -> Result<BlowupComplex> {
    let mut pi = Vec::new();
    for (k, x) in [x1, x2].into_iter().enumerate() {
        let (sub, map) = g.induced_subgraph(j.parts[k])?;
        if *x.graph() != sub {
            return Err(Error::Precondition(format!("factor {} is not over the induced subgraph", k + 1)));
        }
        for p in x.partitions() {
            let q = lift_partition(p, &map, j.parts[1 - k]);
            q.validate(g, true)?;
            pi.push(q);
        }
    }
    BlowupComplex::build(g, &pi)
}

/// The product of two complexes, keeping the 2-skeleton. Vertex `(i, j)`
/// is `i * |V(b)| + j`.
pub fn product_complex(a: &CubeComplex, b: &CubeComplex) -> CubeComplex {
    let (na, nb) = (a.num_vertices, b.num_vertices);
    let ea = |e: usize, j: usize| e * nb + j;
    let off = a.edges.len() * nb;
    let eb = |i: usize, e: usize| off + i * b.edges.len() + e;
    let mut edges = Vec::new();
    for &(t, h) in &a.edges {
        for j in 0..nb {
            edges.push((t * nb + j, h * nb + j));
        }
    }
    for i in 0..na {
        for &(t, h) in &b.edges {
            edges.push((i * nb + t, i * nb + h));
        }
    }
    let mut squares = Vec::new();
    for s in &a.squares {
        for j in 0..nb {
            squares.push(Square { boundary: s.boundary.map(|(e, f)| (ea(e, j), f)) });
        }
    }
    for i in 0..na {
        for s in &b.squares {
            squares.push(Square { boundary: s.boundary.map(|(e, f)| (eb(i, e), f)) });
        }
    }
    for (e, &(ta, ha)) in a.edges.iter().enumerate() {
        for (f, &(tb, hb)) in b.edges.iter().enumerate() {
            squares.push(Square { boundary: [(ea(e, tb), true), (eb(ha, f), true), (ea(e, hb), false), (eb(ta, f), false)] });
        }
    }
    CubeComplex { num_vertices: na * nb, edges, squares }
}

/// The result of subdividing one hyperplane. Every dual edge `e` keeps its
/// index for the half from its tail to the new midpoint; the other half
/// and the edges joining midpoints across squares are appended.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: CubeComplex,
    pub second_half: Vec<Option<usize>>,
    pub midpoint: Vec<Option<usize>>,
    /// For each old square crossed by the hyperplane, the edge joining the
    /// midpoints of its two dual sides.
    pub middle_edge: Vec<Option<usize>>,
}

/// Duplicates hyperplane `h`: each dual edge is cut at its midpoint and
/// each square it crosses is cut in two.
pub fn subdivide_hyperplane(x: &CubeComplex, h: usize) -> Result<Subdivision> {
    let hp = x.hyperplanes()?;
    if h >= hp.len() {
        return Err(Error::Precondition(format!("no hyperplane {h}")));
    }
    let mut c = x.clone();
    let mut second_half = vec![None; x.edges.len()];
    let mut midpoint = vec![None; x.edges.len()];
    for &e in &hp.members[h] {
        let (_, hd) = x.edges[e];
        let m = c.num_vertices;
        c.num_vertices += 1;
        c.edges[e].1 = m;
        c.edges.push((m, hd));
        midpoint[e] = Some(m);
        second_half[e] = Some(c.edges.len() - 1);
    }
    // The two halves of a step, in traversal order.
    let halves = |s: Step| -> [Step; 2] {
        let e2 = second_half[s.0].expect("dual edge");
        if s.1 {
            [(s.0, true), (e2, true)]
        } else {
            [(e2, false), (s.0, false)]
        }
    };
    let mid = |s: Step| midpoint[s.0].expect("dual edge");
    let mut middle_edge = vec![None; x.squares.len()];
    let mut parallel: BTreeMap<Step, Vec<Step>> = BTreeMap::new();
    for (i, sq) in x.squares.iter().enumerate() {
        let hits: Vec<usize> = (0..4).filter(|&k| hp.class[sq.boundary[k].0] == h).collect();
        let r = match hits[..] {
            [] => continue,
            [0, 2] => 0,
            [1, 3] => 1,
            _ => return Err(Error::Precondition(format!("hyperplane {h} crosses itself in square {i}"))),
        };
        let b = [0, 1, 2, 3].map(|k| sq.boundary[(k + r) % 4]);
        let (m0, m2) = (mid(b[0]), mid(b[2]));
        c.edges.push((m0, m2));
        let me = c.edges.len() - 1;
        middle_edge[i] = Some(me);
        let [a0, b0] = halves(b[0]);
        let [a2, b2] = halves(b[2]);
        c.squares[i] = Square { boundary: [a0, (me, true), b2, b[3]] };
        c.squares.push(Square { boundary: [b0, b[1], a2, (me, false)] });
        // The middle edge is a translate of b[1], and of b[3] reversed.
        for (s, fwd) in [(b[1], true), (b[3], false)] {
            parallel.entry(s).or_default().push((me, fwd));
            parallel.entry((s.0, !s.1)).or_default().push((me, !fwd));
        }
    }
    // Cubes are implicit: a square beside the hyperplane whose four sides
    // each span a crossed square is the bottom of a cube, and the cube's
    // middle section becomes a square.
    let mut seen: BTreeSet<[Step; 4]> = c.squares.iter().map(Square::canonical).collect();
    for sq in &x.squares {
        if sq.boundary.iter().any(|s| hp.class[s.0] == h) {
            continue;
        }
        let options: Vec<&Vec<Step>> = match sq.boundary.iter().map(|s| parallel.get(s)).collect::<Option<Vec<_>>>() {
            Some(o) => o,
            None => continue,
        };
        for i0 in options[0] {
            for i1 in options[1] {
                for i2 in options[2] {
                    for i3 in options[3] {
                        let ring = [*i0, *i1, *i2, *i3];
                        let closed = (0..4).all(|k| c.step_end(ring[k]) == c.step_start(ring[(k + 1) % 4]));
                        let new = Square { boundary: ring };
                        if closed && seen.insert(new.canonical()) {
                            c.squares.push(new);
                        }
                    }
                }
            }
        }
    }
    c.validate()?;
    Ok(Subdivision { complex: c, second_half, midpoint, middle_edge })
}

/// Labels on a subdivision: the terminal half of a labeled edge keeps the
/// label and its initial half joins the tree; a middle edge reads what the
/// side it runs parallel to reads.
fn subdivided_labels(x: &CubeComplex, s: &Subdivision, labels: &[Option<SignedVertex>]) -> Vec<Option<SignedVertex>> {
    let mut out = labels.to_vec();
    out.resize(s.complex.edges.len(), None);
    for e in 0..x.edges.len() {
        if let Some(e2) = s.second_half[e] {
            out[e2] = labels[e];
            out[e] = None;
        }
    }
    for (i, m) in s.middle_edge.iter().enumerate() {
        let Some(me) = *m else { continue };
        // The middle edge runs from the midpoint of the first dual side to
        // that of the second, parallel to the side between them.
        let b = x.squares[i].boundary;
        let hp_side = if s.second_half[b[0].0].is_some() && s.second_half[b[2].0].is_some() { 1 } else { 2 };
        let side = b[hp_side];
        out[me] = labels[side.0].map(|l| if side.1 { l } else { l.inv() });
    }
    out
}

/// Where a skeleton edge meets a component complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attachment {
    Vertex(usize),
    EdgeMidpoint(usize),
    SquareCenter(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SkeletonEdge {
    pub ends: [usize; 2],
    /// Attachment at each end; only meaningful at labeled vertices, where
    /// `None` means vertex 0 of the component complex.
    #[serde(default)]
    pub attach: [Option<Attachment>; 2],
}

/// A multigraph with loops; vertex `v` is labeled by component
/// `labels[v]` or is a bare point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Skeleton {
    pub labels: Vec<Option<usize>>,
    pub edges: Vec<SkeletonEdge>,
}

impl Skeleton {
    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().map(|e| e.ends.iter().filter(|&&w| w == v).count()).sum()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.labels.len();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut q = VecDeque::from([0]);
        while let Some(v) = q.pop_front() {
            for e in &self.edges {
                for (a, b) in [(e.ends[0], e.ends[1]), (e.ends[1], e.ends[0])] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        q.push_back(b);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// First Betti number of a connected skeleton.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.labels.len()
    }

    /// Breadth-first spanning tree from vertex 0, scanning edges in order.
    pub fn spanning_tree(&self) -> Vec<bool> {
        let n = self.labels.len();
        let mut in_tree = vec![false; self.edges.len()];
        let mut seen = vec![false; n];
        if n == 0 {
            return in_tree;
        }
        seen[0] = true;
        let mut q = VecDeque::from([0]);
        while let Some(v) = q.pop_front() {
            for (i, e) in self.edges.iter().enumerate() {
                for (a, b) in [(e.ends[0], e.ends[1]), (e.ends[1], e.ends[0])] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        in_tree[i] = true;
                        q.push_back(b);
                    }
                }
            }
        }
        in_tree
    }

    /// Checks the shape conditions for `k` components and `rank` isolated
    /// vertices. A lone vertex with one loop is allowed as the circle.
    pub fn validate(&self, k: usize, rank: usize) -> Result<()> {
        let n = self.labels.len();
        if n == 0 {
            return Err(Error::Precondition("the skeleton has no vertices".into()));
        }
        if let Some(e) = self.edges.iter().find(|e| e.ends.iter().any(|&v| v >= n)) {
            return Err(Error::Precondition(format!("skeleton edge {:?} leaves the vertex range", e.ends)));
        }
        let labeled: BTreeSet<usize> = self.labels.iter().flatten().copied().collect();
        if labeled.len() != k || self.labels.iter().flatten().count() != k || labeled.iter().any(|&i| i >= k) {
            return Err(Error::Precondition(format!("exactly {k} vertices must carry the labels 0..{k}")));
        }
        if !self.is_connected() {
            return Err(Error::Precondition("the skeleton is disconnected".into()));
        }
        if self.rank() != rank {
            return Err(Error::Precondition(format!("skeleton rank {} differs from {rank}", self.rank())));
        }
        let circle = n == 1 && self.edges.len() == 1;
        for v in 0..n {
            if self.labels[v].is_none() && self.valence(v) < 3 && !circle {
                return Err(Error::Precondition(format!("unlabeled skeleton vertex {v} has valence {}", self.valence(v))));
            }
        }
        for e in &self.edges {
            for s in 0..2 {
                if self.labels[e.ends[s]].is_none() && e.attach[s].is_some() {
                    return Err(Error::Precondition("an attachment sits at an unlabeled vertex".into()));
                }
            }
        }
        Ok(())
    }

    fn canonical_edges(&self, perm: &[usize]) -> Vec<(usize, usize)> {
        let mut es: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (perm[e.ends[0]], perm[e.ends[1]]);
                (a.min(b), a.max(b))
            })
            .collect();
        es.sort_unstable();
        es
    }
}

/// Connected skeletons with `k` labeled vertices (labels `0..k` on the
/// first `k` vertices), the given rank, and unlabeled valence at least 3,
/// up to isomorphism fixing labels. Attachments are left empty.
pub fn enumerate_skeletons(k: usize, rank: usize, limit: usize) -> Result<Vec<Skeleton>> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    // Degrees sum to 2(rank + n - 1) with unlabeled degrees at least 3 and
    // labeled ones at least 1, so there are at most 2 rank + k - 2
    // unlabeled vertices (one for the circle).
    let max_u = (2 * rank + k).saturating_sub(2).max(1);
    let mut examined = 0usize;
    for u in 0..=max_u {
        let n = k + u;
        if n == 0 {
            continue;
        }
        let m = rank + n - 1;
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let perms = permutations_of_tail(n, k);
        let mut search = SkeletonSearch { k, n, pairs: &pairs, deg: vec![0; n], chosen: Vec::new(), found: Vec::new() };
        search.rec(0, m, &mut examined, limit)?;
        for edges in search.found {
            let s = Skeleton {
                labels: (0..n).map(|v| (v < k).then_some(v)).collect(),
                edges: edges.into_iter().map(|(a, b)| SkeletonEdge { ends: [a, b], attach: [None, None] }).collect(),
            };
            if s.validate(k, rank).is_ok() {
                let canon = perms.iter().map(|p| s.canonical_edges(p)).min().expect("identity permutation");
                if seen.insert(canon) {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

/// Multisets of vertex pairs, pruned by the valence each vertex still
/// needs once no later pair can reach it.
struct SkeletonSearch<'a> {
    k: usize,
    n: usize,
    pairs: &'a [(usize, usize)],
    deg: Vec<usize>,
    chosen: Vec<(usize, usize)>,
    found: Vec<Vec<(usize, usize)>>,
}

impl SkeletonSearch<'_> {
    fn need(&self, v: usize) -> usize {
        let want: usize = if self.n == 1 { 0 } else if v >= self.k { 3 } else { 1 };
        want.saturating_sub(self.deg[v])
    }

    fn rec(&mut self, i: usize, left: usize, examined: &mut usize, limit: usize) -> Result<()> {
        // Vertices below the first endpoint of pair `i` are finished.
        let first = self.pairs.get(i).map_or(self.n, |p| p.0);
        let open_need: usize = (first..self.n).map(|v| self.need(v)).sum();
        if (0..first).any(|v| self.need(v) > 0) || open_need > 2 * left {
            return Ok(());
        }
        if i == self.pairs.len() {
            if left == 0 {
                *examined += 1;
                if *examined > limit {
                    return Err(Error::Budget(format!("more than {limit} candidate skeletons")));
                }
                self.found.push(self.chosen.clone());
            }
            return Ok(());
        }
        let (a, b) = self.pairs[i];
        for c in 0..=left {
            self.rec(i + 1, left - c, examined, limit)?;
            if c == left {
                break;
            }
            self.chosen.push((a, b));
            self.deg[a] += 1;
            self.deg[b] += 1;
        }
        for _ in 0..left {
            if self.chosen.last() == Some(&(a, b)) {
                self.chosen.pop();
                self.deg[a] -= 1;
                self.deg[b] -= 1;
            }
        }
        Ok(())
    }
}

/// All permutations of `0..n` fixing `0..k`.
fn permutations_of_tail(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i + 1 >= p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            rec(p, i + 1, out);
            p.swap(i, j);
        }
    }
    if k >= n {
        out.push(p);
    } else {
        rec(&mut p, k, &mut out);
    }
    out
}

/// `Γ = Γ₁ ⊔ ⋯ ⊔ Γ_k ⊔ Λ` with `Λ` the vertices outside every component,
/// plus the skeleton gluing the component complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmalgamSpec {
    pub components: Vec<VertexSet>,
    pub skeleton: Skeleton,
}

/// Serialized amalgam specification, with components by vertex name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamSpecJson {
    pub components: Vec<Vec<String>>,
    pub skeleton: Skeleton,
}

impl AmalgamSpec {
    pub fn to_json(&self, g: &SimplicialGraph) -> AmalgamSpecJson {
        AmalgamSpecJson { components: self.components.iter().map(|&c| g.set_names(c)).collect(), skeleton: self.skeleton.clone() }
    }

    pub fn from_json(g: &SimplicialGraph, j: &AmalgamSpecJson) -> Result<Self> {
        let components = j.components.iter().map(|c| g.parse_set(c)).collect::<Result<Vec<_>>>()?;
        Ok(AmalgamSpec { components, skeleton: j.skeleton.clone() })
    }

    /// The isolated vertices, ascending.
    pub fn lambda(&self, g: &SimplicialGraph) -> VertexSet {
        self.components.iter().fold(g.vertices(), |acc, &c| acc.difference(c))
    }

    pub fn validate(&self, g: &SimplicialGraph) -> Result<()> {
        let mut used = VertexSet::EMPTY;
        for &c in &self.components {
            if c.is_empty() || !c.intersection(used).is_empty() {
                return Err(Error::Precondition("components must be nonempty and disjoint".into()));
            }
            used = used.union(c);
        }
        for &c in &self.components {
            for v in c.iter() {
                if !g.lk(v).is_subset(c) {
                    return Err(Error::Precondition(format!("`{}` has a neighbor outside its component", g.name(v))));
                }
            }
        }
        let lambda = self.lambda(g);
        if let Some(v) = lambda.iter().find(|&v| !g.lk(v).is_empty()) {
            return Err(Error::Precondition(format!("`{}` is outside every component but not isolated", g.name(v))));
        }
        self.skeleton.validate(self.components.len(), lambda.len())
    }
}

/// The default decomposition: connected components with at least two
/// vertices, in order of least vertex; isolated vertices form `Λ`.
pub fn disjoint_decomposition(g: &SimplicialGraph) -> Result<Vec<VertexSet>> {
    Ok(g.components(g.vertices())?.into_iter().filter(|c| c.len() >= 2).collect())
}

/// A validated amalgam: the complex after collapsing separating
/// hyperplanes, the structure assembled from the pieces, the partitions it
/// recovers, and an isomorphism from their blowup onto the complex.
#[derive(Clone, Debug)]
pub struct Amalgam {
    pub complex: CubeComplex,
    pub structure: Structure,
    pub partitions: Vec<WhiteheadPartition>,
    pub blowup: BlowupComplex,
    pub iso: CubicalMap,
    pub separating_collapsed: usize,
}

/// A component complex after the subdivisions its attachments require.
struct Piece {
    complex: CubeComplex,
    labels: Vec<Option<SignedVertex>>,
    points: Vec<usize>,
}

fn subdivide_for(x: &CubeComplex, labels: Vec<Option<SignedVertex>>, attach: &[Attachment]) -> Result<Piece> {
    let hp = x.hyperplanes()?;
    let mut cut_edges: Vec<usize> = Vec::new();
    for a in attach {
        match *a {
            Attachment::Vertex(v) if v < x.num_vertices => {}
            Attachment::EdgeMidpoint(e) if e < x.edges.len() => cut_edges.push(e),
            Attachment::SquareCenter(s) if s < x.squares.len() => {
                cut_edges.push(x.squares[s].boundary[0].0);
                cut_edges.push(x.squares[s].boundary[1].0);
            }
            _ => return Err(Error::Precondition(format!("attachment {a:?} is out of range"))),
        }
    }
    // One cut per hyperplane; edges of the original complex keep their
    // indices throughout, so the cut edge names the hyperplane.
    let mut done = BTreeSet::new();
    cut_edges.retain(|&e| done.insert(hp.class[e]));
    let n0 = x.num_vertices;
    let e0 = x.edges.len();
    let mut cur = x.clone();
    let mut labels = labels;
    let mut edge_mid = vec![None; e0];
    // Midpoints of edges created by earlier cuts: the centers of squares.
    let mut centers = BTreeSet::new();
    for e in cut_edges {
        let h = cur.hyperplanes()?.class[e];
        let s = subdivide_hyperplane(&cur, h)?;
        labels = subdivided_labels(&cur, &s, &labels);
        for (f, m) in s.midpoint.iter().enumerate() {
            if let Some(m) = *m {
                if f < e0 {
                    edge_mid[f] = Some(m);
                } else {
                    centers.insert(m);
                }
            }
        }
        cur = s.complex;
    }
    let points = attach
        .iter()
        .map(|a| match *a {
            Attachment::Vertex(v) => Ok(v),
            Attachment::EdgeMidpoint(e) => Ok(edge_mid[e].expect("cut")),
            Attachment::SquareCenter(s) => {
                // Square `s` keeps its index as the quarter at its first corner.
                let b = cur.squares[s].boundary;
                b.iter()
                    .map(|&st| cur.step_start(st))
                    .find(|v| *v >= n0 && centers.contains(v))
                    .ok_or_else(|| Error::Internal(format!("square {s} has no center after subdivision")))
            }
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(Piece { complex: cur, labels, points })
}

/// Builds the amalgam: subdivides component complexes where skeleton edges
/// attach inside cells, glues in the skeleton, collapses separating
/// hyperplanes and validates the result.
pub fn gamma_amalgam(g: &SimplicialGraph, spec: &AmalgamSpec, parts: &[BlowupComplex]) -> Result<Amalgam> {
    spec.validate(g)?;
    if parts.len() != spec.components.len() {
        return Err(Error::Precondition(format!("{} complexes for {} components", parts.len(), spec.components.len())));
    }
    let sk = &spec.skeleton;
    let mut num_vertices = 0;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut squares: Vec<Square> = Vec::new();
    let mut labels: Vec<Option<SignedVertex>> = Vec::new();
    // Vertex of the assembled complex for each skeleton edge end.
    let mut end_point = vec![[usize::MAX; 2]; sk.edges.len()];
    for (z, lab) in sk.labels.iter().enumerate() {
        let Some(i) = *lab else {
            for (ei, e) in sk.edges.iter().enumerate() {
                for s in 0..2 {
                    if e.ends[s] == z {
                        end_point[ei][s] = num_vertices;
                    }
                }
            }
            num_vertices += 1;
            continue;
        };
        let (sub, map) = g.induced_subgraph(spec.components[i])?;
        let b = &parts[i];
        if *b.graph() != sub {
            return Err(Error::Precondition(format!("complex {i} is not over its component")));
        }
        let base = Structure::from_blowup(b)?;
        let mut ends = Vec::new();
        let mut attach = Vec::new();
        for (ei, e) in sk.edges.iter().enumerate() {
            for s in 0..2 {
                if e.ends[s] == z {
                    ends.push((ei, s));
                    attach.push(e.attach[s].unwrap_or(Attachment::Vertex(0)));
                }
            }
        }
        let piece = subdivide_for(b.complex(), base.labels.clone(), &attach)?;
        let (v0, e0) = (num_vertices, edges.len());
        num_vertices += piece.complex.num_vertices;
        edges.extend(piece.complex.edges.iter().map(|&(t, h)| (t + v0, h + v0)));
        squares.extend(piece.complex.squares.iter().map(|s| Square { boundary: s.boundary.map(|(e, f)| (e + e0, f)) }));
        labels.extend(piece.labels.iter().map(|l| l.map(|l| SignedVertex { vertex: map[l.vertex], inverse: l.inverse })));
        for ((ei, s), p) in ends.into_iter().zip(piece.points) {
            end_point[ei][s] = p + v0;
        }
    }
    let in_tree = sk.spanning_tree();
    let mut lambda = spec.lambda(g).iter();
    for (ei, _) in sk.edges.iter().enumerate() {
        edges.push((end_point[ei][0], end_point[ei][1]));
        labels.push(if in_tree[ei] { None } else { Some(SignedVertex::pos(lambda.next().expect("rank matches"))) });
    }
    let y = CubeComplex { num_vertices, edges, squares };
    y.validate()?;
    let ys = Structure::from_labels(&y, labels)?;
    let c = collapse_separating(&y)?;
    let separating_collapsed = y.hyperplanes()?.len() - c.complex.hyperplanes()?.len();
    let structure = ys
        .push_through(&y, &c)
        .map_err(|e| Error::NotGammaComplex(format!("a separating hyperplane carries a label: {e}")))?;
    let x = c.complex;
    let partitions = structure.recover_partitions(&x, g).map_err(|e| match e {
        Error::NotTreelike(m) => Error::NotGammaComplex(m),
        e => e,
    })?;
    for (i, p) in partitions.iter().enumerate() {
        if p.validate(g, false).is_err() {
            return Err(Error::NotGammaComplex(format!("entry {i} recovers the singleton {}", p.display(g))));
        }
        if partitions[..i].contains(p) {
            return Err(Error::NotGammaComplex(format!("entry {i} repeats {}", p.display(g))));
        }
    }
    let blowup = BlowupComplex::build(g, &partitions)?;
    let iso = isomorphic_unlabeled(blowup.complex(), &x)
        .ok_or_else(|| Error::NotGammaComplex("the recovered blowup is not the amalgam".into()))?;
    Ok(Amalgam { complex: x, structure, partitions, blowup, iso, separating_collapsed })
}

/// Amalgam specifications over the default decomposition: every skeleton
/// with all ends at vertex 0, and for each skeleton loop at a labeled
/// vertex, variants moving one end of the first such loop to each edge
/// midpoint and square center of that component's complex.
///
/// Moving one end of a loop leaves its other end at an original vertex, so
/// the loop's generator lies on opposite sides of both copies of every cut
/// hyperplane. Other interior attachments can leave singleton entries and
/// are not generated.
pub fn amalgam_specs(g: &SimplicialGraph, parts: &[BlowupComplex], limit: usize) -> Result<Vec<AmalgamSpec>> {
    let components = disjoint_decomposition(g)?;
    if parts.len() != components.len() {
        return Err(Error::Precondition(format!("{} complexes for {} components", parts.len(), components.len())));
    }
    let lambda = components.iter().fold(g.vertices(), |acc, &c| acc.difference(c));
    let mut out = Vec::new();
    for sk in enumerate_skeletons(components.len(), lambda.len(), limit)? {
        out.push(AmalgamSpec { components: components.clone(), skeleton: sk.clone() });
        let Some(li) = sk.edges.iter().position(|e| e.ends[0] == e.ends[1] && sk.labels[e.ends[0]].is_some()) else {
            continue;
        };
        let x = parts[sk.labels[sk.edges[li].ends[0]].expect("labeled")].complex();
        let interior = (0..x.edges.len()).map(Attachment::EdgeMidpoint).chain((0..x.squares.len()).map(Attachment::SquareCenter));
        for a in interior {
            let mut s = sk.clone();
            s.edges[li].attach = [Some(a), Some(Attachment::Vertex(0))];
            out.push(AmalgamSpec { components: components.clone(), skeleton: s });
            if out.len() > limit {
                return Err(Error::Budget(format!("more than {limit} amalgam specifications")));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::partition::{all_partitions, enumerate_compatible_collections};
    use crate::restriction::separating_hyperplanes;
    use crate::structure::is_treelike;

    fn edge_plus_z() -> SimplicialGraph {
        SimplicialGraph::new(&["a", "b", "z"], &[("a", "b")]).unwrap()
    }

    fn torus() -> BlowupComplex {
        BlowupComplex::salvetti(&SimplicialGraph::new(&["a", "b"], &[("a", "b")]).unwrap())
    }

    fn loop_spec(attach: [Option<Attachment>; 2]) -> AmalgamSpec {
        let g = edge_plus_z();
        AmalgamSpec {
            components: vec![g.parse_set(&["a", "b"]).unwrap()],
            skeleton: Skeleton { labels: vec![Some(0)], edges: vec![SkeletonEdge { ends: [0, 0], attach }] },
        }
    }

    #[test]
    fn product_counts_and_shape() {
        for g in corpus() {
            let Some(j) = JoinDecomposition::find(&g) else { continue };
            let (g1, _) = g.induced_subgraph(j.parts[0]).unwrap();
            let (g2, _) = g.induced_subgraph(j.parts[1]).unwrap();
            let c1 = enumerate_compatible_collections(&g1, 2).unwrap();
            let c2 = enumerate_compatible_collections(&g2, 2).unwrap();
            for p1 in c1.iter().take(4) {
                for p2 in c2.iter().take(4) {
                    let x1 = BlowupComplex::build(&g1, p1).unwrap();
                    let x2 = BlowupComplex::build(&g2, p2).unwrap();
                    let x = product_blowup(&g, &j, &x1, &x2).unwrap();
                    assert_eq!(x.regions().len(), x1.regions().len() * x2.regions().len());
                    let n1 = x1.complex().num_vertices;
                    let n2 = x2.complex().num_vertices;
                    assert_eq!(x.complex().edges.len(), x1.complex().edges.len() * n2 + x2.complex().edges.len() * n1);
                    let prod = product_complex(x1.complex(), x2.complex());
                    assert!(isomorphic_unlabeled(x.complex(), &prod).is_some(), "{g:?}");
                }
            }
        }
    }

    #[test]
    fn product_of_salvettis_is_salvetti() {
        let g = SimplicialGraph::new(&["x", "y", "a", "b"], &[("x", "a"), ("x", "b"), ("y", "a"), ("y", "b")]).unwrap();
        let j = JoinDecomposition::find(&g).unwrap();
        assert_eq!(j.parts[0], g.parse_set(&["x", "y"]).unwrap());
        let (g1, _) = g.induced_subgraph(j.parts[0]).unwrap();
        let (g2, _) = g.induced_subgraph(j.parts[1]).unwrap();
        let x = product_blowup(&g, &j, &BlowupComplex::salvetti(&g1), &BlowupComplex::salvetti(&g2)).unwrap();
        assert!(isomorphic_unlabeled(x.complex(), BlowupComplex::salvetti(&g).complex()).is_some());
        // A theta factor over the discrete pair gives two regions.
        let p = all_partitions(&g1).unwrap()[0];
        let x = product_blowup(&g, &j, &BlowupComplex::build(&g1, &[p]).unwrap(), &BlowupComplex::salvetti(&g2)).unwrap();
        assert_eq!(x.regions().len(), 2);
        assert!(JoinDecomposition::find(&discrete(3)).is_none());
        assert!(JoinDecomposition::new(&g, j.parts[0], VertexSet::EMPTY).is_err());
    }

    #[test]
    fn subdividing_the_torus() {
        let t = torus();
        let s = subdivide_hyperplane(t.complex(), 0).unwrap();
        assert_eq!((s.complex.num_vertices, s.complex.edges.len(), s.complex.squares.len()), (2, 4, 2));
        assert_eq!(s.complex.hyperplanes().unwrap().len(), 3);
        let s2 = subdivide_hyperplane(&s.complex, s.complex.hyperplanes().unwrap().class[1]).unwrap();
        assert_eq!((s2.complex.num_vertices, s2.complex.edges.len(), s2.complex.squares.len()), (4, 8, 4));
    }

    #[test]
    fn subdivision_matches_duplication() {
        let triangle_z = SimplicialGraph::new(&["a", "b", "c", "z"], &[("a", "b"), ("b", "c"), ("a", "c")]).unwrap();
        for g in [figure_four(), path(4), discrete(3), triangle_z] {
            for pi in enumerate_compatible_collections(&g, 2).unwrap().iter().take(6) {
                let b = BlowupComplex::build(&g, pi).unwrap();
                for label in b.hyperplane_labels() {
                    let e = b.hyperplane_edges(label)[0];
                    let h = b.complex().hyperplanes().unwrap().class[e];
                    let s = subdivide_hyperplane(b.complex(), h).unwrap();
                    let d = b.duplicate_hyperplane(label).unwrap();
                    assert!(isomorphic_unlabeled(&s.complex, d.complex()).is_some());
                    let base = Structure::from_blowup(&b).unwrap();
                    let labels = subdivided_labels(b.complex(), &s, &base.labels);
                    let st = Structure::from_labels(&s.complex, labels).unwrap();
                    st.validate(&s.complex, &g).unwrap();
                }
            }
        }
    }

    #[test]
    fn rose_and_theta_as_amalgams() {
        let g = discrete(2);
        // Rose, theta and the dumbbell, whose bar is separating.
        let sks = enumerate_skeletons(0, 2, 1_000_000).unwrap();
        assert_eq!(sks.len(), 3);
        let mut shapes = Vec::new();
        for sk in sks {
            let spec = AmalgamSpec { components: vec![], skeleton: sk };
            let a = gamma_amalgam(&g, &spec, &[]).unwrap();
            shapes.push((a.complex.num_vertices, a.partitions.len()));
        }
        shapes.sort();
        assert_eq!(shapes, vec![(1, 0), (1, 0), (2, 1)]);
    }

    #[test]
    fn loop_at_the_torus_vertex_is_salvetti() {
        let g = edge_plus_z();
        let a = gamma_amalgam(&g, &loop_spec([None, None]), &[torus()]).unwrap();
        assert!(a.partitions.is_empty());
        assert!(isomorphic_unlabeled(&a.complex, BlowupComplex::salvetti(&g).complex()).is_some());
    }

    #[test]
    fn loop_from_square_center_to_corner() {
        let g = edge_plus_z();
        let spec = loop_spec([Some(Attachment::SquareCenter(0)), Some(Attachment::Vertex(0))]);
        let a = gamma_amalgam(&g, &spec, &[torus()]).unwrap();
        assert_eq!(a.partitions.len(), 2);
        assert_eq!(a.complex.num_vertices, 4);
        let (za, zb) = (g.parse_signed("z").unwrap(), g.parse_signed("z^-1").unwrap());
        for p in &a.partitions {
            assert_ne!(p.side_of(za), p.side_of(zb));
        }
        assert!(separating_hyperplanes(&a.complex).unwrap().is_empty());
        assert!(is_treelike(&a.complex, &g, &a.structure.tree).unwrap());
    }

    #[test]
    fn loop_with_both_ends_inside_leaves_singletons() {
        let g = edge_plus_z();
        let spec = loop_spec([Some(Attachment::SquareCenter(0)), Some(Attachment::SquareCenter(0))]);
        assert!(matches!(gamma_amalgam(&g, &spec, &[torus()]), Err(Error::NotGammaComplex(_))));
    }

    #[test]
    fn separating_edge_between_components_is_collapsed() {
        // Two tori joined by an edge, with a z-loop on the second.
        let g = SimplicialGraph::new(&["a", "b", "c", "d", "z"], &[("a", "b"), ("c", "d")]).unwrap();
        let comps = disjoint_decomposition(&g).unwrap();
        let sk = Skeleton {
            labels: vec![Some(0), Some(1)],
            edges: vec![SkeletonEdge { ends: [0, 1], attach: [None, None] }, SkeletonEdge { ends: [1, 1], attach: [None, None] }],
        };
        let parts: Vec<BlowupComplex> =
            comps.iter().map(|&c| BlowupComplex::salvetti(&g.induced_subgraph(c).unwrap().0)).collect();
        let a = gamma_amalgam(&g, &AmalgamSpec { components: comps, skeleton: sk }, &parts).unwrap();
        assert_eq!(a.separating_collapsed, 1);
        assert!(isomorphic_unlabeled(&a.complex, BlowupComplex::salvetti(&g).complex()).is_some());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let g = edge_plus_z();
        let mut spec = loop_spec([None, None]);
        spec.skeleton.edges.push(SkeletonEdge { ends: [0, 0], attach: [None, None] });
        assert!(matches!(spec.validate(&g), Err(Error::Precondition(_))));
        let spec = AmalgamSpec {
            components: vec![g.parse_set(&["a"]).unwrap()],
            skeleton: Skeleton { labels: vec![Some(0)], edges: vec![] },
        };
        assert!(spec.validate(&g).is_err());
        let bad = Skeleton { labels: vec![None, None], edges: vec![SkeletonEdge { ends: [0, 1], attach: [None, None] }; 2] };
        assert!(bad.validate(0, 1).is_err());
    }

    /// Brute force: symmetric multiplicity matrices (loops on the
    /// diagonal), deduplicated over every relabeling of unlabeled vertices.
    fn brute_skeleton_count(k: usize, rank: usize, max_n: usize) -> usize {
        fn fill(cells: &[(usize, usize)], i: usize, left: usize, m: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
            if i == cells.len() {
                if left == 0 {
                    out.push(m.clone());
                }
                return;
            }
            for c in 0..=left {
                let (a, b) = cells[i];
                m[a][b] = c;
                m[b][a] = c;
                fill(cells, i + 1, left - c, m, out);
            }
            let (a, b) = cells[i];
            m[a][b] = 0;
            m[b][a] = 0;
        }
        let mut total = 0;
        for n in k.max(1)..=max_n {
            let edges = rank + n - 1;
            let cells: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
            let mut mats = Vec::new();
            fill(&cells, 0, edges, &mut vec![vec![0; n]; n], &mut mats);
            let mut seen = BTreeSet::new();
            for m in mats {
                let deg = |v: usize| (0..n).map(|w| if w == v { 2 * m[v][v] } else { m[v][w] }).sum::<usize>();
                let mut comp = vec![false; n];
                comp[0] = true;
                let mut stack = vec![0];
                while let Some(v) = stack.pop() {
                    for w in 0..n {
                        if m[v][w] > 0 && !comp[w] {
                            comp[w] = true;
                            stack.push(w);
                        }
                    }
                }
                let circle = n == 1 && edges == 1;
                if !comp.iter().all(|&c| c) || (k..n).any(|v| deg(v) < 3 && !circle) {
                    continue;
                }
                let canon = permutations_of_tail(n, k)
                    .into_iter()
                    .map(|p| (0..n).flat_map(|a| (0..n).map(|b| m[p[a]][p[b]]).collect::<Vec<_>>()).collect::<Vec<_>>())
                    .min()
                    .unwrap();
                seen.insert(canon);
            }
            total += seen.len();
        }
        total
    }

    #[test]
    fn skeleton_counts_match_brute_force() {
        assert_eq!(enumerate_skeletons(0, 1, 1000).unwrap().len(), 1);
        assert_eq!(enumerate_skeletons(1, 0, 1000).unwrap().len(), 1);
        assert_eq!(enumerate_skeletons(2, 0, 1000).unwrap().len(), 1);
        for (k, r) in [(0, 2), (0, 3), (1, 1), (1, 2), (2, 1), (3, 0)] {
            let got = enumerate_skeletons(k, r, 100_000_000).unwrap();
            for s in &got {
                assert!(s.validate(k, r).is_ok());
            }
            let max_n = k + (2 * r + k).saturating_sub(2).max(1);
            assert_eq!(got.len(), brute_skeleton_count(k, r, max_n), "k={k} rank={r}");
        }
    }

    #[test]
    fn generated_amalgams_validate() {
        let g = edge_plus_z();
        let specs = amalgam_specs(&g, &[torus()], 10_000).unwrap();
        assert!(specs.iter().any(|s| s.skeleton.edges.iter().any(|e| matches!(e.attach[0], Some(Attachment::SquareCenter(_))))));
        for s in &specs {
            let a = gamma_amalgam(&g, s, &[torus()]).unwrap();
            assert!(separating_hyperplanes(&a.complex).unwrap().is_empty());
        }
    }
}
