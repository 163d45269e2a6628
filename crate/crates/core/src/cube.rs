//! Finite cube complexes stored by their 2-skeleton: vertices, oriented
//! edges (loops allowed) and squares given by boundary cycles. Higher cubes
//! are implied by the squares. Provides hyperplanes, hyperplane collapse,
//! and isomorphism and automorphism search.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A traversal of an edge: `forward` goes from tail to head.
pub type Step = (usize, bool);

/// A square given by its boundary cycle, starting at a corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Square {
    pub boundary: [Step; 4],
}

impl Square {
    /// The least of the eight cyclic readings (4 rotations, 2 directions).
    pub fn canonical(&self) -> [Step; 4] {
        let b = self.boundary;
        let rev: [Step; 4] = [3, 2, 1, 0].map(|i| (b[i].0, !b[i].1));
        let mut best = b;
        for s in [b, rev] {
            for r in 0..4 {
                let rot = [0, 1, 2, 3].map(|i| s[(i + r) % 4]);
                if rot < best {
                    best = rot;
                }
            }
        }
        best
    }

    pub fn edges(&self) -> [usize; 4] {
        self.boundary.map(|s| s.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeComplex {
    pub num_vertices: usize,
    /// `(tail, head)` of every edge.
    pub edges: Vec<(usize, usize)>,
    pub squares: Vec<Square>,
}

/// Parallelism classes of edges. `flip[e]` tells whether edge `e` points
/// against the first edge of its class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplanes {
    pub class: Vec<usize>,
    pub flip: Vec<bool>,
    pub members: Vec<Vec<usize>>,
}

impl Hyperplanes {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Union-find with parity, used for both vertices and edges.
#[derive(Clone, Debug)]
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (r, pp) = self.find(p);
        self.parent[x] = r;
        self.parity[x] ^= pp;
        (r, self.parity[x])
    }

    /// Records `parity(a) xor parity(b) == rel`; returns false on conflict.
    fn union(&mut self, a: usize, b: usize, rel: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.parity[hi] = pa ^ pb ^ rel;
        true
    }
}

/// The result of collapsing hyperplanes, with the maps from the old cells.
#[derive(Clone, Debug)]
pub struct Collapse {
    pub complex: CubeComplex,
    pub vertex_map: Vec<usize>,
    /// `None` for collapsed edges, else the image edge and whether it is
    /// reversed.
    pub edge_map: Vec<Option<(usize, bool)>>,
}

impl CubeComplex {
    pub fn validate(&self) -> Result<()> {
        for &(t, h) in &self.edges {
            if t >= self.num_vertices || h >= self.num_vertices {
                return Err(Error::Internal("edge endpoint out of range".into()));
            }
        }
        for sq in &self.squares {
            let mut at = self.step_start(sq.boundary[0]);
            for &s in &sq.boundary {
                if s.0 >= self.edges.len() || self.step_start(s) != at {
                    return Err(Error::Internal("square boundary is not a closed path".into()));
                }
                at = self.step_end(s);
            }
            if at != self.step_start(sq.boundary[0]) {
                return Err(Error::Internal("square boundary is not closed".into()));
            }
        }
        Ok(())
    }

    pub fn step_start(&self, s: Step) -> usize {
        let (t, h) = self.edges[s.0];
        if s.1 {
            t
        } else {
            h
        }
    }

    pub fn step_end(&self, s: Step) -> usize {
        let (t, h) = self.edges[s.0];
        if s.1 {
            h
        } else {
            t
        }
    }

    /// Whether `path` is a connected edge path starting at `start`; returns
    /// the end vertex.
    pub fn path_end(&self, start: usize, path: &[Step]) -> Option<usize> {
        let mut at = start;
        for &s in path {
            if self.step_start(s) != at {
                return None;
            }
            at = self.step_end(s);
        }
        Some(at)
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices == 0 {
            return true;
        }
        let adj = self.vertex_adjacency();
        let mut seen = vec![false; self.num_vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(_, w) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// For each vertex, the steps leaving it and their far endpoints.
    pub fn vertex_adjacency(&self) -> Vec<Vec<(Step, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            adj[t].push(((e, true), h));
            adj[h].push(((e, false), t));
        }
        adj
    }

    /// Squares containing each edge.
    pub fn squares_at_edge(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.edges.len()];
        for (i, sq) in self.squares.iter().enumerate() {
            for e in sq.edges() {
                if !out[e].contains(&i) {
                    out[e].push(i);
                }
            }
        }
        out
    }

    /// Parallelism classes, numbered by least member edge.
    pub fn hyperplanes(&self) -> Result<Hyperplanes> {
        let mut uf = ParityUnionFind::new(self.edges.len());
        for sq in &self.squares {
            let b = sq.boundary;
            for (i, j) in [(0, 2), (1, 3)] {
                // Opposite sides run the same way exactly when their
                // traversal directions around the boundary differ.
                if !uf.union(b[i].0, b[j].0, b[i].1 == b[j].1) {
                    return Err(Error::Internal("hyperplane is not two-sided".into()));
                }
            }
        }
        let mut index: HashMap<usize, usize> = HashMap::new();
        let mut class = vec![0; self.edges.len()];
        let mut flip = vec![false; self.edges.len()];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for e in 0..self.edges.len() {
            let (r, p) = uf.find(e);
            let k = *index.entry(r).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            class[e] = k;
            members[k].push(e);
            flip[e] = p;
        }
        // Re-base parities on the first member of each class.
        for m in &members {
            let base = flip[m[0]];
            for &e in m {
                flip[e] ^= base;
            }
        }
        Ok(Hyperplanes { class, flip, members })
    }

    /// A hyperplane crossing itself: some square has both pairs of opposite
    /// sides in the same class.
    pub fn has_self_intersection(&self) -> Result<bool> {
        let h = self.hyperplanes()?;
        Ok(self.squares.iter().any(|sq| {
            let b = sq.boundary;
            h.class[b[0].0] == h.class[b[1].0]
        }))
    }

    /// Collapses every hyperplane containing one of `edges`.
    pub fn collapse(&self, edges: &[usize]) -> Result<Collapse> {
        let hp = self.hyperplanes()?;
        let dead_classes: HashSet<usize> = edges.iter().map(|&e| hp.class[e]).collect();
        let dead: Vec<bool> = (0..self.edges.len()).map(|e| dead_classes.contains(&hp.class[e])).collect();

        let mut vuf = ParityUnionFind::new(self.num_vertices);
        for (e, &(t, h)) in self.edges.iter().enumerate() {
            if dead[e] {
                vuf.union(t, h, false);
            }
        }
        let mut euf = ParityUnionFind::new(self.edges.len());
        for sq in &self.squares {
            let b = sq.boundary;
            for (i, j, k, l) in [(0, 2, 1, 3), (1, 3, 0, 2)] {
                if dead[b[i].0] && !dead[b[k].0] {
                    // The square is squashed onto one edge.
                    debug_assert!(dead[b[j].0] && !dead[b[l].0]);
                    euf.union(b[k].0, b[l].0, b[k].1 == b[l].1);
                }
            }
        }

        let mut vertex_index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut vertex_map = vec![0; self.num_vertices];
        for v in 0..self.num_vertices {
            let (r, _) = vuf.find(v);
            let n = vertex_index.len();
            vertex_map[v] = *vertex_index.entry(r).or_insert(n);
        }
        let mut edge_index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut new_edges = Vec::new();
        let mut edge_map = vec![None; self.edges.len()];
        for e in 0..self.edges.len() {
            if dead[e] {
                continue;
            }
            let (r, p) = euf.find(e);
            let k = *edge_index.entry(r).or_insert_with(|| {
                let (t, h) = self.edges[r];
                new_edges.push((vertex_map[t], vertex_map[h]));
                new_edges.len() - 1
            });
            edge_map[e] = Some((k, p));
        }
        let mut seen = HashSet::new();
        let mut new_squares = Vec::new();
        for sq in &self.squares {
            if sq.boundary.iter().any(|s| dead[s.0]) {
                continue;
            }
            let boundary = sq.boundary.map(|(e, f)| {
                let (k, p) = edge_map[e].expect("live edge");
                (k, f ^ p)
            });
            let s = Square { boundary };
            if seen.insert(s.canonical()) {
                new_squares.push(s);
            }
        }
        let complex = CubeComplex { num_vertices: vertex_index.len(), edges: new_edges, squares: new_squares };
        complex.validate()?;
        Ok(Collapse { complex, vertex_map, edge_map })
    }

    /// Coarse invariant used to bucket complexes before exact isomorphism.
    pub fn fingerprint(&self) -> Vec<u64> {
        let at_edge = self.squares_at_edge();
        let mut vdeg: Vec<(usize, usize, usize)> = vec![(0, 0, 0); self.num_vertices];
        for &(t, h) in &self.edges {
            if t == h {
                vdeg[t].2 += 1;
            } else {
                vdeg[t].0 += 1;
                vdeg[h].1 += 1;
            }
        }
        let mut vs: Vec<u64> = vdeg.iter().map(|&(a, b, c)| ((a + b) as u64) << 32 | (c as u64)).collect();
        vs.sort();
        let mut es: Vec<u64> = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, &(t, h))| ((t == h) as u64) << 40 | (at_edge[e].len() as u64))
            .collect();
        es.sort();
        let mut out = vec![self.num_vertices as u64, self.edges.len() as u64, self.squares.len() as u64];
        out.extend(vs);
        out.extend(es);
        out
    }
}

/// A map of complexes sending vertices to vertices and edges to edges, with
/// a reversal flag per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubicalMap {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<Step>,
}

impl CubicalMap {
    pub fn identity(x: &CubeComplex) -> Self {
        CubicalMap {
            vertex_map: (0..x.num_vertices).collect(),
            edge_map: (0..x.edges.len()).map(|e| (e, false)).collect(),
        }
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &CubicalMap) -> CubicalMap {
        CubicalMap {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            edge_map: other
                .edge_map
                .iter()
                .map(|&(e, r)| {
                    let (e2, r2) = self.edge_map[e];
                    (e2, r ^ r2)
                })
                .collect(),
        }
    }

    pub fn inverse(&self) -> CubicalMap {
        let mut vertex_map = vec![0; self.vertex_map.len()];
        for (v, &w) in self.vertex_map.iter().enumerate() {
            vertex_map[w] = v;
        }
        let mut edge_map = vec![(0, false); self.edge_map.len()];
        for (e, &(f, r)) in self.edge_map.iter().enumerate() {
            edge_map[f] = (e, r);
        }
        CubicalMap { vertex_map, edge_map }
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_map.iter().enumerate().all(|(i, &v)| i == v)
            && self.edge_map.iter().enumerate().all(|(i, &(e, r))| i == e && !r)
    }

    pub fn apply_step(&self, s: Step) -> Step {
        let (e, r) = self.edge_map[s.0];
        (e, s.1 ^ r)
    }

    pub fn apply_path(&self, path: &[Step]) -> Vec<Step> {
        path.iter().map(|&s| self.apply_step(s)).collect()
    }

    /// Checks that this is an isomorphism from `a` onto `b`.
    pub fn is_isomorphism(&self, a: &CubeComplex, b: &CubeComplex) -> bool {
        if self.vertex_map.len() != a.num_vertices
            || self.edge_map.len() != a.edges.len()
            || a.num_vertices != b.num_vertices
            || a.edges.len() != b.edges.len()
            || a.squares.len() != b.squares.len()
        {
            return false;
        }
        let vs: HashSet<usize> = self.vertex_map.iter().copied().collect();
        let es: HashSet<usize> = self.edge_map.iter().map(|s| s.0).collect();
        if vs.len() != a.num_vertices || es.len() != a.edges.len() || vs.iter().any(|&v| v >= b.num_vertices) {
            return false;
        }
        for (e, &(t, h)) in a.edges.iter().enumerate() {
            let (f, r) = self.edge_map[e];
            let (t2, h2) = if r { (b.edges[f].1, b.edges[f].0) } else { b.edges[f] };
            if self.vertex_map[t] != t2 || self.vertex_map[h] != h2 {
                return false;
            }
        }
        let target: HashSet<[Step; 4]> = b.squares.iter().map(|s| s.canonical()).collect();
        a.squares
            .iter()
            .all(|s| target.contains(&Square { boundary: s.boundary.map(|st| self.apply_step(st)) }.canonical()))
    }
}

/// Edge colors for structured comparisons. Edges may only map to edges of the
/// same color; edges of an oriented color must keep their direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    pub colors: Vec<u32>,
    pub oriented: Vec<bool>,
}

impl EdgeColoring {
    pub fn uniform(x: &CubeComplex) -> Self {
        EdgeColoring { colors: vec![0; x.edges.len()], oriented: vec![false; x.edges.len()] }
    }
}

struct IsoSearch<'a> {
    a: &'a CubeComplex,
    b: &'a CubeComplex,
    ca: &'a EdgeColoring,
    cb: &'a EdgeColoring,
    order: Vec<usize>,
    a_sq_at: Vec<Vec<usize>>,
    b_sq_at: Vec<Vec<usize>>,
    b_squares: HashSet<[Step; 4]>,
    vmap: Vec<usize>,
    vused: Vec<bool>,
    emap: Vec<Option<Step>>,
    eused: Vec<bool>,
    a_vinv: Vec<(usize, usize, usize)>,
    b_vinv: Vec<(usize, usize, usize)>,
    limit: usize,
    found: Vec<CubicalMap>,
}

const UNSET: usize = usize::MAX;

fn vertex_invariants(x: &CubeComplex, sq_at: &[Vec<usize>]) -> Vec<(usize, usize, usize)> {
    let mut inv = vec![(0, 0, 0); x.num_vertices];
    for (e, &(t, h)) in x.edges.iter().enumerate() {
        if t == h {
            inv[t].1 += 1;
        } else {
            inv[t].0 += 1;
            inv[h].0 += 1;
        }
        inv[t].2 += sq_at[e].len();
        inv[h].2 += sq_at[e].len();
    }
    inv
}

impl<'a> IsoSearch<'a> {
    fn new(
        a: &'a CubeComplex,
        b: &'a CubeComplex,
        ca: &'a EdgeColoring,
        cb: &'a EdgeColoring,
        limit: usize,
    ) -> Option<Self> {
        if a.num_vertices != b.num_vertices || a.edges.len() != b.edges.len() || a.squares.len() != b.squares.len() {
            return None;
        }
        if a.fingerprint() != b.fingerprint() {
            return None;
        }
        let mut ccount_a: Vec<u32> = ca.colors.clone();
        let mut ccount_b: Vec<u32> = cb.colors.clone();
        ccount_a.sort();
        ccount_b.sort();
        if ccount_a != ccount_b {
            return None;
        }
        // Edge order: breadth-first over vertices so each new edge touches an
        // already mapped vertex whenever possible.
        let adj = a.vertex_adjacency();
        let mut order = Vec::new();
        let mut eseen = vec![false; a.edges.len()];
        let mut vseen = vec![false; a.num_vertices];
        for root in 0..a.num_vertices {
            if vseen[root] {
                continue;
            }
            vseen[root] = true;
            let mut q = VecDeque::from([root]);
            while let Some(v) = q.pop_front() {
                for &((e, _), w) in &adj[v] {
                    if !eseen[e] {
                        eseen[e] = true;
                        order.push(e);
                    }
                    if !vseen[w] {
                        vseen[w] = true;
                        q.push_back(w);
                    }
                }
            }
        }
        let a_sq_at = a.squares_at_edge();
        let b_sq_at = b.squares_at_edge();
        Some(IsoSearch {
            a,
            b,
            ca,
            cb,
            order,
            a_vinv: vertex_invariants(a, &a_sq_at),
            b_vinv: vertex_invariants(b, &b_sq_at),
            a_sq_at,
            b_sq_at,
            b_squares: b.squares.iter().map(|s| s.canonical()).collect(),
            vmap: vec![UNSET; a.num_vertices],
            vused: vec![false; b.num_vertices],
            emap: vec![None; a.edges.len()],
            eused: vec![false; b.edges.len()],
            limit,
            found: Vec::new(),
        })
    }

    fn bind(&mut self, v: usize, w: usize, undo: &mut Vec<usize>) -> bool {
        if self.vmap[v] == UNSET {
            if self.vused[w] || self.a_vinv[v] != self.b_vinv[w] {
                return false;
            }
            self.vmap[v] = w;
            self.vused[w] = true;
            undo.push(v);
            true
        } else {
            self.vmap[v] == w
        }
    }

    fn squares_ok(&self, e: usize) -> bool {
        for &s in &self.a_sq_at[e] {
            let sq = &self.a.squares[s];
            if sq.boundary.iter().all(|st| self.emap[st.0].is_some()) {
                let img = Square {
                    boundary: sq.boundary.map(|(f, d)| {
                        let (g, r) = self.emap[f].unwrap();
                        (g, d ^ r)
                    }),
                };
                if !self.b_squares.contains(&img.canonical()) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            // Vertices without edges can go anywhere unused.
            let mut vmap = self.vmap.clone();
            let mut free: Vec<usize> = (0..self.b.num_vertices).filter(|&w| !self.vused[w]).collect();
            for v in vmap.iter_mut() {
                if *v == UNSET {
                    *v = free.pop().expect("vertex counts agree");
                }
            }
            self.found.push(CubicalMap { vertex_map: vmap, edge_map: self.emap.iter().map(|s| s.unwrap()).collect() });
            return self.found.len() >= self.limit;
        }
        let e = self.order[k];
        let (t, h) = self.a.edges[e];
        let loop_a = t == h;
        for f in 0..self.b.edges.len() {
            if self.eused[f]
                || self.ca.colors[e] != self.cb.colors[f]
                || self.a_sq_at[e].len() != self.b_sq_at[f].len()
            {
                continue;
            }
            let (t2, h2) = self.b.edges[f];
            if loop_a != (t2 == h2) {
                continue;
            }
            for rev in [false, true] {
                if rev && self.ca.oriented[e] {
                    continue;
                }
                let (tt, hh) = if rev { (h2, t2) } else { (t2, h2) };
                let mut undo = Vec::new();
                let ok = self.bind(t, tt, &mut undo) && self.bind(h, hh, &mut undo);
                if ok {
                    self.emap[e] = Some((f, rev));
                    self.eused[f] = true;
                    if self.squares_ok(e) && self.run(k + 1) {
                        return true;
                    }
                    self.emap[e] = None;
                    self.eused[f] = false;
                }
                for v in undo {
                    self.vused[self.vmap[v]] = false;
                    self.vmap[v] = UNSET;
                }
            }
        }
        false
    }
}

/// An isomorphism `a → b` respecting the colorings, if one exists.
pub fn isomorphism(a: &CubeComplex, b: &CubeComplex, ca: &EdgeColoring, cb: &EdgeColoring) -> Option<CubicalMap> {
    let mut s = IsoSearch::new(a, b, ca, cb, 1)?;
    s.run(0);
    s.found.pop()
}

pub fn isomorphic_unlabeled(a: &CubeComplex, b: &CubeComplex) -> Option<CubicalMap> {
    isomorphism(a, b, &EdgeColoring::uniform(a), &EdgeColoring::uniform(b))
}

/// Every automorphism respecting the coloring, in search order (the
/// identity first).
pub fn automorphisms(a: &CubeComplex, c: &EdgeColoring, limit: usize) -> Result<Vec<CubicalMap>> {
    let mut s = IsoSearch::new(a, a, c, c, limit).expect("a complex matches itself");
    // Try each edge's own image first so the identity comes first.
    s.run(0);
    let mut out = s.found;
    if out.len() >= limit {
        return Err(Error::Budget(format!("more than {limit} automorphisms")));
    }
    if let Some(i) = out.iter().position(|m| m.is_identity()) {
        let id = out.remove(i);
        out.insert(0, id);
    }
    Ok(out)
}
