//! Blowups of the Salvetti complex along compatible multisets of partitions.
//!
//! Vertices ("regions") are consistent choices of one side per entry. Two
//! chosen sides are consistent when the bases of their entries commute or
//! the sides meet. Repeated entries are ordered: for equal entries `i < j`
//! the choice (`i` on side1, `j` on side2) is excluded, which lays the copies
//! out along a path of regions.
//!
//! Edges are identified by label and tail region. A partition edge goes
//! from the region choosing side2 to the region choosing side1. A `v`-edge
//! ends at a region choosing the side containing `v` for every entry with
//! `v` off its link, and starts at the region obtained by moving every entry
//! that splits `v` to the side containing `v^-1`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::cube::{CubeComplex, EdgeColoring, Square, Step};
use crate::error::{Error, Result};
use crate::graph::{SignedVertex, SimplicialGraph};
use crate::partition::{adjacent, compatible, singleton_partition, WhiteheadPartition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    /// Entry index in the multiset.
    Partition(usize),
    Vertex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlowupEdge {
    pub label: EdgeLabel,
    pub tail: usize,
    pub head: usize,
}

/// A blowup complex together with its labels.
#[derive(Clone, Debug)]
pub struct BlowupComplex {
    graph: SimplicialGraph,
    pi: Vec<WhiteheadPartition>,
    regions: Vec<Vec<u8>>,
    edges: Vec<BlowupEdge>,
    complex: CubeComplex,
}

/// Which side pairs of two entries are excluded from regions.
fn forbidden_pairs(g: &SimplicialGraph, pi: &[WhiteheadPartition], i: usize, j: usize) -> [[bool; 2]; 2] {
    let (p, q) = (&pi[i], &pi[j]);
    let mut out = [[false; 2]; 2];
    if p == q {
        // Equal entries: the earlier copy on side1 forces the later one there.
        if i < j {
            out[0][1] = true;
        } else {
            out[1][0] = true;
        }
        return out;
    }
    if adjacent(g, p, q) {
        return out;
    }
    for a in 0..2 {
        for b in 0..2 {
            out[a][b] = p.side(a).is_disjoint(q.side(b));
        }
    }
    out
}

fn labels_commute(g: &SimplicialGraph, pi: &[WhiteheadPartition], a: EdgeLabel, b: EdgeLabel) -> bool {
    match (a, b) {
        (EdgeLabel::Vertex(v), EdgeLabel::Vertex(w)) => g.adjacent(v, w),
        (EdgeLabel::Vertex(v), EdgeLabel::Partition(i)) | (EdgeLabel::Partition(i), EdgeLabel::Vertex(v)) => {
            pi[i].link().contains(SignedVertex::pos(v))
        }
        (EdgeLabel::Partition(i), EdgeLabel::Partition(j)) => i != j && adjacent(g, &pi[i], &pi[j]),
    }
}

pub const MAX_ENTRIES: usize = 24;

impl BlowupComplex {
    /// Builds the blowup for a pairwise compatible multiset `pi`.
    pub fn build(g: &SimplicialGraph, pi: &[WhiteheadPartition]) -> Result<Self> {
        let k = pi.len();
        if k > MAX_ENTRIES {
            return Err(Error::Budget(format!("{k} entries exceed the limit of {MAX_ENTRIES}")));
        }
        for (i, p) in pi.iter().enumerate() {
            p.validate(g, true).map_err(|e| Error::InvalidPartition(format!("entry {i}: {e}")))?;
        }
        for i in 0..k {
            for j in i + 1..k {
                if !compatible(g, &pi[i], &pi[j]) {
                    return Err(Error::Incompatible(i, j));
                }
            }
        }
        let forbid: Vec<Vec<[[bool; 2]; 2]>> =
            (0..k).map(|i| (0..k).map(|j| forbidden_pairs(g, pi, i, j)).collect()).collect();

        // Regions in lexicographic order of side choices.
        let mut regions: Vec<Vec<u8>> = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(k: usize, forbid: &[Vec<[[bool; 2]; 2]>], cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            let i = cur.len();
            if i == k {
                out.push(cur.clone());
                return;
            }
            for s in 0..2u8 {
                if (0..i).all(|j| !forbid[j][i][cur[j] as usize][s as usize]) {
                    cur.push(s);
                    rec(k, forbid, cur, out);
                    cur.pop();
                }
            }
        }
        rec(k, &forbid, &mut cur, &mut regions);
        let index: HashMap<Vec<u8>, usize> = regions.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();

        let mut edges = Vec::new();
        for i in 0..k {
            for (t, r) in regions.iter().enumerate() {
                if r[i] == 1 {
                    let mut h = r.clone();
                    h[i] = 0;
                    if let Some(&hi) = index.get(&h) {
                        edges.push(BlowupEdge { label: EdgeLabel::Partition(i), tail: t, head: hi });
                    }
                }
            }
        }
        for v in 0..g.len() {
            let pv = SignedVertex::pos(v);
            for (hi, r) in regions.iter().enumerate() {
                let terminal = pi.iter().enumerate().all(|(i, p)| match p.side_of(pv) {
                    Some(s) => r[i] as usize == s,
                    None => true,
                });
                if !terminal {
                    continue;
                }
                let mut t = r.clone();
                for (i, p) in pi.iter().enumerate() {
                    if let Some(s) = p.side_of(pv.inv()) {
                        t[i] = s as u8;
                    }
                }
                let ti = *index.get(&t).ok_or_else(|| {
                    Error::Internal(format!("initial region of a `{}`-edge is inconsistent", g.name(v)))
                })?;
                edges.push(BlowupEdge { label: EdgeLabel::Vertex(v), tail: ti, head: hi });
            }
        }
        edges.sort_by_key(|e| (e.label, e.tail));

        let by_tail: HashMap<(EdgeLabel, usize), usize> =
            edges.iter().enumerate().map(|(n, e)| ((e.label, e.tail), n)).collect();
        let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); regions.len()];
        for (n, e) in edges.iter().enumerate() {
            out_edges[e.tail].push(n);
        }
        let mut squares = Vec::new();
        for r in 0..regions.len() {
            let outs = &out_edges[r];
            for (a, &e1) in outs.iter().enumerate() {
                for &e2 in &outs[a + 1..] {
                    let (l1, l2) = (edges[e1].label, edges[e2].label);
                    if !labels_commute(g, pi, l1, l2) {
                        continue;
                    }
                    let e3 = by_tail.get(&(l2, edges[e1].head));
                    let e4 = by_tail.get(&(l1, edges[e2].head));
                    match (e3, e4) {
                        (Some(&e3), Some(&e4)) if edges[e3].head == edges[e4].head => {
                            squares.push(Square { boundary: [(e1, true), (e3, true), (e4, false), (e2, false)] });
                        }
                        _ => {
                            return Err(Error::Internal(format!(
                                "commuting edges at region {r} do not span a square"
                            )))
                        }
                    }
                }
            }
        }
        let complex = CubeComplex {
            num_vertices: regions.len(),
            edges: edges.iter().map(|e| (e.tail, e.head)).collect(),
            squares,
        };
        complex.validate()?;
        Ok(BlowupComplex { graph: g.clone(), pi: pi.to_vec(), regions, edges, complex })
    }

    /// The blowup with no partitions.
    pub fn salvetti(g: &SimplicialGraph) -> Self {
        BlowupComplex::build(g, &[]).expect("the empty multiset is compatible")
    }

    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    pub fn partitions(&self) -> &[WhiteheadPartition] {
        &self.pi
    }

    pub fn regions(&self) -> &[Vec<u8>] {
        &self.regions
    }

    pub fn edges(&self) -> &[BlowupEdge] {
        &self.edges
    }

    pub fn complex(&self) -> &CubeComplex {
        &self.complex
    }

    pub fn region_index(&self, r: &[u8]) -> Option<usize> {
        self.regions.iter().position(|x| x == r)
    }

    pub fn edge_index(&self, label: EdgeLabel, tail: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label && e.tail == tail)
    }

    /// Partition edges share one unoriented color; `v`-edges get color
    /// `v + 1` and keep their direction.
    pub fn coloring(&self) -> EdgeColoring {
        EdgeColoring {
            colors: self
                .edges
                .iter()
                .map(|e| match e.label {
                    EdgeLabel::Partition(_) => 0,
                    EdgeLabel::Vertex(v) => v as u32 + 1,
                })
                .collect(),
            oriented: self.edges.iter().map(|e| matches!(e.label, EdgeLabel::Vertex(_))).collect(),
        }
    }

    /// Edges dual to each label, i.e. the hyperplanes: entries first, then
    /// vertices.
    pub fn hyperplane_edges(&self, label: EdgeLabel) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].label == label).collect()
    }

    pub fn hyperplane_labels(&self) -> Vec<EdgeLabel> {
        (0..self.pi.len()).map(EdgeLabel::Partition).chain((0..self.graph.len()).map(EdgeLabel::Vertex)).collect()
    }

    /// The blowup without entry `i`, with the maps on regions and edges.
    pub fn collapse_partition(&self, i: usize) -> Result<(BlowupComplex, Vec<usize>, Vec<Option<usize>>)> {
        if i >= self.pi.len() {
            return Err(Error::Precondition(format!("no entry {i}")));
        }
        let mut pi = self.pi.clone();
        pi.remove(i);
        let y = BlowupComplex::build(&self.graph, &pi)?;
        let region_map: Vec<usize> = self
            .regions
            .iter()
            .map(|r| {
                let mut s = r.clone();
                s.remove(i);
                y.region_index(&s).expect("forgetting an entry keeps consistency")
            })
            .collect();
        let edge_map = self
            .edges
            .iter()
            .map(|e| {
                let label = match e.label {
                    EdgeLabel::Partition(j) if j == i => return None,
                    EdgeLabel::Partition(j) => EdgeLabel::Partition(if j > i { j - 1 } else { j }),
                    l => l,
                };
                y.edge_index(label, region_map[e.tail])
            })
            .collect();
        Ok((y, region_map, edge_map))
    }

    /// Duplicates a hyperplane: a partition entry gains a copy placed right
    /// after it; a vertex hyperplane `H_v` adds the singleton partition at
    /// `v^-1`, so the terminal segment keeps the `v` label.
    pub fn duplicate_hyperplane(&self, label: EdgeLabel) -> Result<BlowupComplex> {
        let mut pi = self.pi.clone();
        match label {
            EdgeLabel::Partition(i) => {
                let p = *pi.get(i).ok_or_else(|| Error::Precondition(format!("no entry {i}")))?;
                pi.insert(i + 1, p);
            }
            EdgeLabel::Vertex(v) => pi.push(singleton_partition(&self.graph, v)?),
        }
        BlowupComplex::build(&self.graph, &pi)
    }

    /// Shortest path between regions using partition edges only.
    pub fn tree_path(&self, from: usize, to: usize) -> Option<Vec<Step>> {
        let mut prev: Vec<Option<(usize, Step)>> = vec![None; self.regions.len()];
        let mut seen = vec![false; self.regions.len()];
        seen[from] = true;
        let mut q = VecDeque::from([from]);
        let mut adj: Vec<Vec<(Step, usize)>> = vec![Vec::new(); self.regions.len()];
        for (n, e) in self.edges.iter().enumerate() {
            if let EdgeLabel::Partition(_) = e.label {
                adj[e.tail].push(((n, true), e.head));
                adj[e.head].push(((n, false), e.tail));
            }
        }
        while let Some(r) = q.pop_front() {
            if r == to {
                break;
            }
            for &(s, w) in &adj[r] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((r, s));
                    q.push_back(w);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut at = to;
        while at != from {
            let (p, s) = prev[at].unwrap();
            path.push(s);
            at = p;
        }
        path.reverse();
        Some(path)
    }

    /// A closed path crossing `H_v` once and each partition hyperplane at
    /// most once: the `v`-edge with the least tail, then a shortest
    /// partition-edge path back. Returns the start region and the steps.
    pub fn characteristic_cycle(&self, v: usize) -> Result<(usize, Vec<Step>)> {
        let e = self
            .edges
            .iter()
            .position(|e| e.label == EdgeLabel::Vertex(v))
            .ok_or(Error::VertexIndex(v))?;
        let BlowupEdge { tail, head, .. } = self.edges[e];
        let back = self.tree_path(head, tail).ok_or_else(|| Error::Internal("partition edges do not connect".into()))?;
        let mut path = vec![(e, true)];
        path.extend(back);
        Ok((tail, path))
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Partition(i) => write!(f, "P{i}"),
            EdgeLabel::Vertex(v) => write!(f, "v{v}"),
        }
    }
}
