//! Finite simplicial graphs, induced subgraphs, links and stars, the doubled
//! graph on signed vertices, and fold-equivalence classes.
//!
//! Vertices are indexed `0..n` in the order they were declared, with `n <= 64`
//! so that vertex sets fit in a `u64` and signed-vertex sets in a `u128`.
//! Every enumeration in the crate walks vertices in this index order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A set of vertices of an ambient graph, always read as the full induced
/// subgraph on those vertices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn full(n: usize) -> Self {
        if n == 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        VertexSet(it.into_iter().fold(0u64, |m, v| m | (1u64 << v)))
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, o: Self) -> Self {
        VertexSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        VertexSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        VertexSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    /// Both signs of every member.
    pub fn signed(self) -> SignedSet {
        let mut s = SignedSet::EMPTY;
        for v in self.iter() {
            s.insert(SignedVertex::pos(v));
            s.insert(SignedVertex::neg(v));
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SignedVertex {
    pub vertex: usize,
    pub inverse: bool,
}

impl SignedVertex {
    pub fn pos(vertex: usize) -> Self {
        SignedVertex { vertex, inverse: false }
    }

    pub fn neg(vertex: usize) -> Self {
        SignedVertex { vertex, inverse: true }
    }

    pub fn new(vertex: usize, sign: i8) -> Self {
        SignedVertex { vertex, inverse: sign < 0 }
    }

    pub fn inv(self) -> Self {
        SignedVertex { vertex: self.vertex, inverse: !self.inverse }
    }

    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Position in signed-set bitmasks: `2v` for `v`, `2v+1` for `v^-1`.
    pub fn index(self) -> usize {
        2 * self.vertex + self.inverse as usize
    }

    pub fn from_index(i: usize) -> Self {
        SignedVertex { vertex: i / 2, inverse: i % 2 == 1 }
    }
}

/// A set of signed vertices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedSet(pub u128);

impl SignedSet {
    pub const EMPTY: SignedSet = SignedSet(0);

    pub fn all(n: usize) -> Self {
        VertexSet::full(n).signed()
    }

    pub fn from_iter<I: IntoIterator<Item = SignedVertex>>(it: I) -> Self {
        let mut s = SignedSet::EMPTY;
        for x in it {
            s.insert(x);
        }
        s
    }

    pub fn contains(self, x: SignedVertex) -> bool {
        self.0 >> x.index() & 1 == 1
    }

    pub fn insert(&mut self, x: SignedVertex) {
        self.0 |= 1u128 << x.index();
    }

    pub fn remove(&mut self, x: SignedVertex) {
        self.0 &= !(1u128 << x.index());
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, o: Self) -> Self {
        SignedSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        SignedSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        SignedSet(self.0 & !o.0)
    }

    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = SignedVertex> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(SignedVertex::from_index(i))
            }
        })
    }

    /// Vertices having at least one sign in the set.
    pub fn vertices(self) -> VertexSet {
        VertexSet::from_iter(self.iter().map(|x| x.vertex))
    }

    /// Vertices having both signs in the set.
    pub fn full_vertices(self) -> VertexSet {
        VertexSet::from_iter(self.iter().filter(|x| self.contains(x.inv())).map(|x| x.vertex))
    }

    /// Restriction to the signed vertices of `d`.
    pub fn restrict(self, d: VertexSet) -> Self {
        self.intersection(d.signed())
    }
}

impl fmt::Debug for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.iter().map(|x| format!("{}{}", x.vertex, if x.inverse { "'" } else { "" })))
            .finish()
    }
}

/// A finite simplicial graph with named vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimplicialGraph {
    names: Vec<String>,
    adj: Vec<u64>,
}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialGraph({:?}, {:?})", self.names, self.edge_list())
    }
}

impl SimplicialGraph {
    /// Builds a graph from vertex names and edges given by name.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut g = SimplicialGraph::discrete_named(names)?;
        for (a, b) in edges {
            let i = g.index_of(a.as_ref())?;
            let j = g.index_of(b.as_ref())?;
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    fn discrete_named(names: Vec<String>) -> Result<Self> {
        if names.len() > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!("more than {MAX_VERTICES} vertices")));
        }
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains(char::is_whitespace) || n.contains('^') {
                return Err(Error::InvalidGraph(format!("bad vertex name `{n}`")));
            }
            if seen.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{n}`")));
            }
        }
        let n = names.len();
        Ok(SimplicialGraph { names, adj: vec![0; n] })
    }

    /// Builds a graph from index pairs; vertices are named by `names`.
    pub fn from_indices(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = SimplicialGraph::discrete_named(names)?;
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Discrete graph on `names`.
    pub fn discrete<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        SimplicialGraph::new(names, &[])
    }

    /// Complete graph on `names`.
    pub fn complete<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let n = names.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        SimplicialGraph::from_indices(names.iter().map(|s| s.as_ref().to_string()).collect(), &edges)
    }

    fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(Error::VertexIndex(i.max(j)));
        }
        if i == j {
            return Err(Error::InvalidGraph(format!("loop at `{}`", self.names[i])));
        }
        self.adj[i] |= 1 << j;
        self.adj[j] |= 1 << i;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::VertexIndex(v))
        }
    }

    fn check_set(&self, s: VertexSet) -> Result<()> {
        if s.is_subset(self.vertices()) {
            Ok(())
        } else {
            Err(Error::VertexIndex(s.difference(self.vertices()).first().unwrap_or(0)))
        }
    }

    pub fn adjacent(&self, v: usize, w: usize) -> bool {
        self.adj[v] >> w & 1 == 1
    }

    /// Whether the generators `x` and `y` commute in the RAAG (equal or adjacent).
    pub fn commute(&self, x: usize, y: usize) -> bool {
        x == y || self.adjacent(x, y)
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.edge_list().len()
    }

    /// Unchecked link for internal use.
    pub fn lk(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    /// Unchecked star for internal use.
    pub fn st(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v] | 1 << v)
    }

    pub fn link(&self, v: usize) -> Result<VertexSet> {
        self.check(v)?;
        Ok(self.lk(v))
    }

    /// Intersection of the links of the members; the empty set has link `V`.
    pub fn link_of_set(&self, s: VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        Ok(s.iter().fold(self.vertices(), |acc, v| acc.intersection(self.lk(v))))
    }

    pub fn star(&self, v: usize) -> Result<VertexSet> {
        self.check(v)?;
        Ok(self.st(v))
    }

    /// Signed link `lk±(v)`.
    pub fn signed_link(&self, v: usize) -> SignedSet {
        self.lk(v).signed()
    }

    /// Connected components of the subgraph induced on `s`, each listed once,
    /// ordered by least member.
    pub fn components(&self, s: VertexSet) -> Result<Vec<VertexSet>> {
        self.check_set(s)?;
        Ok(self.components_unchecked(s))
    }

    pub(crate) fn components_unchecked(&self, s: VertexSet) -> Vec<VertexSet> {
        let mut rest = s;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next = next.union(self.lk(v));
                }
                next = next.intersection(s).difference(comp);
                comp = comp.union(next);
                frontier = next;
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self, s: VertexSet) -> bool {
        self.components_unchecked(s).len() <= 1
    }

    pub fn double(&self) -> DoubledGraph {
        DoubledGraph { graph: self.clone() }
    }

    /// Full subgraph on `d`, plus the map from new indices to old ones.
    pub fn induced_subgraph(&self, d: VertexSet) -> Result<(SimplicialGraph, Vec<usize>)> {
        self.check_set(d)?;
        let map: Vec<usize> = d.iter().collect();
        let names = map.iter().map(|&v| self.names[v].clone()).collect();
        let mut edges = Vec::new();
        for (i, &a) in map.iter().enumerate() {
            for (j, &b) in map.iter().enumerate().skip(i + 1) {
                if self.adjacent(a, b) {
                    edges.push((i, j));
                }
            }
        }
        Ok((SimplicialGraph::from_indices(names, &edges)?, map))
    }

    /// Fold-equivalence classes (equal links), the link-inclusion order on
    /// them, and which classes are maximal.
    pub fn fold_classes(&self) -> FoldClasses {
        let mut classes: Vec<VertexSet> = Vec::new();
        for v in 0..self.len() {
            match classes.iter_mut().find(|c| self.lk(c.first().unwrap()) == self.lk(v)) {
                Some(c) => c.insert(v),
                None => classes.push(VertexSet::singleton(v)),
            }
        }
        let k = classes.len();
        let rep: Vec<usize> = classes.iter().map(|c| c.first().unwrap()).collect();
        let mut le = vec![vec![false; k]; k];
        for i in 0..k {
            for j in 0..k {
                le[i][j] = self.lk(rep[i]).is_subset(self.lk(rep[j]));
            }
        }
        let maximal = (0..k).map(|i| (0..k).all(|j| j == i || !le[i][j])).collect();
        FoldClasses { classes, le, maximal }
    }

    /// The graph with vertices renamed by the permutation `perm` (old index
    /// `i` goes to new index `perm[i]`), keeping names attached to positions.
    pub fn permuted(&self, perm: &[usize]) -> Result<SimplicialGraph> {
        let edges: Vec<(usize, usize)> = self.edge_list().iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        SimplicialGraph::from_indices(self.names.clone(), &edges)
    }

    /// Graph automorphisms, as permutations of vertex indices.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn rec(g: &SimplicialGraph, i: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            let n = g.len();
            if i == n {
                out.push(perm.clone());
                return;
            }
            for c in 0..n {
                if used[c] || g.lk(i).len() != g.lk(c).len() {
                    continue;
                }
                if (0..i).all(|j| g.adjacent(i, j) == g.adjacent(c, perm[j])) {
                    used[c] = true;
                    perm[i] = c;
                    rec(g, i + 1, perm, used, out);
                    used[c] = false;
                }
            }
        }
        rec(self, 0, &mut perm, &mut used, &mut out);
        out
    }

    /// Whether `perm` carries this graph isomorphically onto `other`.
    pub fn is_isomorphic_to(&self, other: &SimplicialGraph) -> bool {
        if self.len() != other.len() || self.num_edges() != other.num_edges() {
            return false;
        }
        let n = self.len();
        let mut perm = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn rec(a: &SimplicialGraph, b: &SimplicialGraph, i: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            if i == a.len() {
                return true;
            }
            for c in 0..a.len() {
                if used[c] || a.lk(i).len() != b.lk(c).len() {
                    continue;
                }
                if (0..i).all(|j| a.adjacent(i, j) == b.adjacent(c, perm[j])) {
                    used[c] = true;
                    perm[i] = c;
                    if rec(a, b, i + 1, perm, used) {
                        return true;
                    }
                    used[c] = false;
                }
            }
            false
        }
        rec(self, other, 0, &mut perm, &mut used)
    }

    pub fn signed_name(&self, x: SignedVertex) -> String {
        if x.inverse {
            format!("{}^-1", self.names[x.vertex])
        } else {
            self.names[x.vertex].clone()
        }
    }

    pub fn parse_signed(&self, s: &str) -> Result<SignedVertex> {
        let s = s.trim();
        match s.strip_suffix("^-1") {
            Some(base) => Ok(SignedVertex::neg(self.index_of(base)?)),
            None => Ok(SignedVertex::pos(self.index_of(s)?)),
        }
    }

    pub fn set_names(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|v| self.names[v].clone()).collect()
    }

    pub fn signed_set_names(&self, s: SignedSet) -> Vec<String> {
        s.iter().map(|x| self.signed_name(x)).collect()
    }

    pub fn parse_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        let mut s = VertexSet::EMPTY;
        for n in names {
            s.insert(self.index_of(n.as_ref())?);
        }
        Ok(s)
    }

    pub fn parse_signed_set<S: AsRef<str>>(&self, names: &[S]) -> Result<SignedSet> {
        let mut s = SignedSet::EMPTY;
        for n in names {
            s.insert(self.parse_signed(n.as_ref())?);
        }
        Ok(s)
    }

    // ---- ingestion / emission ----

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_graph()
    }

    pub fn to_json_value(&self) -> GraphJson {
        GraphJson {
            vertices: self.names.clone(),
            edges: self
                .edge_list()
                .into_iter()
                .map(|(a, b)| [self.names[a].clone(), self.names[b].clone()])
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string(&self.to_json_value()).expect("graph json");
        s.push('\n');
        s
    }

    /// Parses the undirected, attribute-free DOT subset:
    /// `graph NAME { a; b -- c; c -- d -- e; }`.
    pub fn from_dot_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s.find('{').ok_or_else(|| Error::Parse("missing `{`".into()))?;
        let close = s.rfind('}').ok_or_else(|| Error::Parse("missing `}`".into()))?;
        let header: Vec<&str> = s[..open].split_whitespace().collect();
        let header = match header.first() {
            Some(&"strict") => &header[1..],
            _ => &header[..],
        };
        if header.first() != Some(&"graph") {
            return Err(Error::Parse("only undirected `graph` is supported".into()));
        }
        if !s[close + 1..].trim().is_empty() {
            return Err(Error::Parse("trailing input after `}`".into()));
        }
        let body = &s[open + 1..close];
        let mut names: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut edges = Vec::new();
        let mut intern = |n: &str, names: &mut Vec<String>| -> Result<usize> {
            let n = n.trim().trim_matches('"');
            if n.is_empty() || n.contains(|c: char| c == '[' || c == ']' || c == '=' || c.is_whitespace()) {
                return Err(Error::Parse(format!("unsupported DOT token `{n}`")));
            }
            if let Some(&i) = index.get(n) {
                return Ok(i);
            }
            index.insert(n.to_string(), names.len());
            names.push(n.to_string());
            Ok(names.len() - 1)
        };
        for stmt in body.split(|c| c == ';' || c == '\n') {
            let stmt = stmt.trim();
            if stmt.is_empty() || stmt.starts_with("//") {
                continue;
            }
            if stmt.contains("->") {
                return Err(Error::Parse("directed edges are not supported".into()));
            }
            let parts: Vec<&str> = stmt.split("--").collect();
            let ids = parts.iter().map(|p| intern(p, &mut names)).collect::<Result<Vec<_>>>()?;
            for w in ids.windows(2) {
                edges.push((w[0], w[1]));
            }
        }
        SimplicialGraph::from_indices(names, &edges)
    }

    pub fn to_dot_string(&self) -> String {
        let mut s = String::from("graph G {\n");
        for n in &self.names {
            s.push_str(&format!("  {n};\n"));
        }
        for (a, b) in self.edge_list() {
            s.push_str(&format!("  {} -- {};\n", self.names[a], self.names[b]));
        }
        s.push_str("}\n");
        s
    }

    /// Reads JSON or DOT, deciding by the first non-blank character.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            SimplicialGraph::from_json_str(s)
        } else {
            SimplicialGraph::from_dot_str(s)
        }
    }
}

/// Serialized graph form.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl GraphJson {
    pub fn into_graph(self) -> Result<SimplicialGraph> {
        let edges: Vec<(String, String)> = self.edges.into_iter().map(|[a, b]| (a, b)).collect();
        SimplicialGraph::new(&self.vertices, &edges)
    }
}

/// The double `Γ±`: signed vertices, adjacent when they commute and are not
/// inverses of each other.
#[derive(Clone, Debug)]
pub struct DoubledGraph {
    graph: SimplicialGraph,
}

impl DoubledGraph {
    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    pub fn vertices(&self) -> SignedSet {
        SignedSet::all(self.graph.len())
    }

    pub fn adjacent(&self, x: SignedVertex, y: SignedVertex) -> bool {
        x.vertex != y.vertex && self.graph.adjacent(x.vertex, y.vertex)
    }

    pub fn neighbors(&self, x: SignedVertex) -> SignedSet {
        self.graph.lk(x.vertex).signed()
    }

    /// Connected components of `Γ±` with `removed` deleted, ordered by least
    /// signed index.
    pub fn components(&self, removed: SignedSet) -> Vec<SignedSet> {
        let mut rest = self.vertices().difference(removed);
        let mut out = Vec::new();
        while !rest.is_empty() {
            let start = rest.iter().next().unwrap();
            let mut comp = SignedSet::from_iter([start]);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = SignedSet::EMPTY;
                for x in frontier.iter() {
                    next = next.union(self.neighbors(x));
                }
                next = next.intersection(rest).difference(comp);
                comp = comp.union(next);
                frontier = next;
            }
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }
}

/// Components of `Γ±` minus the signed set `removed`.
pub fn components_double(d: &DoubledGraph, removed: SignedSet) -> Vec<SignedSet> {
    d.components(removed)
}

/// Fold-equivalence classes and their order by link inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldClasses {
    pub classes: Vec<VertexSet>,
    /// `le[i][j]` iff the link of class `i` is contained in the link of class `j`.
    pub le: Vec<Vec<bool>>,
    pub maximal: Vec<bool>,
}

impl FoldClasses {
    pub fn maximal_classes(&self) -> Vec<VertexSet> {
        self.classes
            .iter()
            .zip(&self.maximal)
            .filter(|(_, &m)| m)
            .map(|(c, _)| *c)
            .collect()
    }
}
