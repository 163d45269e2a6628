//! Subgraphs whose special subgroup is preserved up to conjugacy by the
//! untwisted subgroup `U⁰(A_Γ)`, their lattice and chain lengths, and the
//! restriction of generators to such a subgraph.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{SignedSet, SignedVertex, SimplicialGraph, VertexSet};
use crate::partition::WhiteheadPartition;
use crate::raag::{FoldKind, RaagAutomorphism};

/// Which of the two invariance conditions failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// `x ∈ Δ` and `lk(x) ⊆ lk(y)` but `y ∉ Δ`.
    #[serde(rename = "i")]
    LinkContainment,
    /// `Δ` meets two components of `Γ ∖ st(y)` but `y ∉ Δ`.
    #[serde(rename = "ii")]
    StarSeparation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    /// The witness `x` for condition (i); `None` for condition (ii).
    pub x: Option<usize>,
    pub y: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSubgraphReport {
    pub subgraph: VertexSet,
    pub invariant: bool,
    pub violations: Vec<Violation>,
}

/// Checks both conditions over all vertex pairs and lists every violation.
pub fn is_u0_invariant(g: &SimplicialGraph, d: VertexSet) -> Result<InvariantSubgraphReport> {
    if !d.is_subset(g.vertices()) {
        return Err(Error::VertexIndex(d.difference(g.vertices()).first().unwrap_or(0)));
    }
    let mut violations = Vec::new();
    for x in d.iter() {
        for y in 0..g.len() {
            if y != x && !d.contains(y) && g.lk(x).is_subset(g.lk(y)) {
                violations.push(Violation { condition: Condition::LinkContainment, x: Some(x), y });
            }
        }
    }
    for y in 0..g.len() {
        if d.contains(y) {
            continue;
        }
        let rest = g.vertices().difference(g.st(y));
        let hits = g.components_unchecked(rest).into_iter().filter(|c| !c.intersection(d).is_empty()).count();
        if hits > 1 {
            violations.push(Violation { condition: Condition::StarSeparation, x: None, y });
        }
    }
    Ok(InvariantSubgraphReport { subgraph: d, invariant: violations.is_empty(), violations })
}

fn invariant(g: &SimplicialGraph, d: VertexSet) -> bool {
    is_u0_invariant(g, d).map(|r| r.invariant).unwrap_or(false)
}

pub const DEFAULT_SUBSET_BUDGET: usize = 16;

/// All invariant subsets, in increasing bitmask order. Refuses graphs with
/// more than `budget` vertices.
pub fn u0_invariant_subgraphs(g: &SimplicialGraph, budget: usize) -> Result<Vec<VertexSet>> {
    if g.len() > budget {
        return Err(Error::Budget(format!(
            "{} vertices exceed the subset budget of {budget}; test explicit subsets instead",
            g.len()
        )));
    }
    Ok((0u64..(1u64 << g.len())).map(VertexSet).filter(|&d| invariant(g, d)).collect())
}

/// Nonempty invariant subgraphs with no nonempty invariant proper subset.
pub fn minimal_invariant_subgraphs(g: &SimplicialGraph) -> Result<Vec<VertexSet>> {
    let all = u0_invariant_subgraphs(g, DEFAULT_SUBSET_BUDGET)?;
    Ok(all
        .iter()
        .copied()
        .filter(|d| !d.is_empty())
        .filter(|d| !all.iter().any(|e| !e.is_empty() && e != d && e.is_subset(*d)))
        .collect())
}

/// The lattice of invariant subgraphs of one graph, computed once.
#[derive(Clone, Debug)]
pub struct InvariantLattice {
    pub subgraphs: Vec<VertexSet>,
    chain: Vec<usize>,
}

impl InvariantLattice {
    pub fn new(g: &SimplicialGraph) -> Result<Self> {
        let subgraphs = u0_invariant_subgraphs(g, DEFAULT_SUBSET_BUDGET)?;
        // Increasing bitmask order lists every proper subset before its superset.
        let mut chain = vec![0usize; subgraphs.len()];
        for i in 0..subgraphs.len() {
            for j in 0..i {
                let (a, b) = (subgraphs[j], subgraphs[i]);
                if !a.is_empty() && a != b && a.is_subset(b) {
                    chain[i] = chain[i].max(chain[j] + 1);
                }
            }
        }
        Ok(InvariantLattice { subgraphs, chain })
    }

    /// Longest chain `∅ ⊊ Γ₁ ⊊ ⋯ ⊊ Γ_ℓ ⊊ Δ` of invariant subgraphs; minimal
    /// invariant subgraphs have length 0.
    pub fn chain_length(&self, d: VertexSet) -> Result<usize> {
        match self.subgraphs.iter().position(|&s| s == d) {
            Some(i) => Ok(self.chain[i]),
            None => Err(Error::Precondition("subgraph is not U0-invariant".into())),
        }
    }

    /// Emits the Hasse diagram as a DOT digraph.
    pub fn to_dot(&self, g: &SimplicialGraph) -> String {
        let name = |d: VertexSet| format!("\"{{{}}}\"", g.set_names(d).join(","));
        let mut s = String::from("digraph invariant_subgraphs {\n");
        for &d in &self.subgraphs {
            s.push_str(&format!("  {};\n", name(d)));
        }
        for &a in &self.subgraphs {
            for &b in &self.subgraphs {
                let covers = a != b
                    && a.is_subset(b)
                    && !self.subgraphs.iter().any(|&c| c != a && c != b && a.is_subset(c) && c.is_subset(b));
                if covers {
                    s.push_str(&format!("  {} -> {};\n", name(a), name(b)));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn chain_length(g: &SimplicialGraph, d: VertexSet) -> Result<usize> {
    InvariantLattice::new(g)?.chain_length(d)
}

/// `Δ` together with every vertex adjacent to it.
pub fn neighborhood(g: &SimplicialGraph, d: VertexSet) -> VertexSet {
    (0..g.len()).filter(|&v| !g.lk(v).intersection(d).is_empty()).fold(d, |acc, v| acc.union(VertexSet::singleton(v)))
}

/// A generator of `U⁰(A_Γ)` (or an inversion), kept with its description so
/// that it can be restricted to invariant subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Inversion(usize),
    /// `x ↦ x y^-1` (right) or `x ↦ y x` (left).
    Fold { x: usize, y: SignedVertex, kind: FoldKind },
    /// Conjugation by `x` of every generator in `c`.
    PartialConjugation { x: SignedVertex, c: VertexSet },
    Whitehead { partition: WhiteheadPartition, base: SignedVertex },
}

impl Generator {
    pub fn automorphism(&self, g: &SimplicialGraph) -> Result<RaagAutomorphism> {
        match *self {
            Generator::Inversion(v) => RaagAutomorphism::inversion(g, v),
            Generator::Fold { x, y, kind } => RaagAutomorphism::fold(g, x, y, kind),
            Generator::PartialConjugation { x, c } => RaagAutomorphism::partial_conjugation(g, x, c),
            Generator::Whitehead { partition, base } => partition.whitehead_automorphism(g, base),
        }
    }

    /// Writes a Whitehead automorphism as folds of its split vertices and one
    /// partial conjugation of the unsplit vertices on the base side. The
    /// factors commute.
    pub fn factor(&self, g: &SimplicialGraph) -> Result<Vec<Generator>> {
        let Generator::Whitehead { partition, base } = *self else {
            return Ok(vec![self.clone()]);
        };
        if !partition.bases(g).contains(base.vertex) {
            return Err(Error::Precondition(format!("`{}` is not a base of the partition", g.name(base.vertex))));
        }
        let side: SignedSet = partition.side(partition.side_of(base).expect("base lies on a side"));
        let mut out = Vec::new();
        let mut conj = VertexSet::EMPTY;
        for v in 0..g.len() {
            if v == base.vertex {
                continue;
            }
            match (side.contains(SignedVertex::pos(v)), side.contains(SignedVertex::neg(v))) {
                (true, false) => out.push(Generator::Fold { x: v, y: base, kind: FoldKind::Right }),
                (false, true) => out.push(Generator::Fold { x: v, y: base, kind: FoldKind::Left }),
                (true, true) => conj.insert(v),
                (false, false) => {}
            }
        }
        if !conj.is_empty() {
            out.push(Generator::PartialConjugation { x: base, c: conj });
        }
        Ok(out)
    }
}

/// An automorphism of `A_Δ`, with the induced subgraph and its index map.
#[derive(Clone, Debug)]
pub struct RestrictedAutomorphism {
    pub graph: SimplicialGraph,
    /// Vertex `i` of `graph` is vertex `map[i]` of the ambient graph.
    pub map: Vec<usize>,
    pub automorphism: RaagAutomorphism,
}

/// The restriction `r_Δ` of a generator to the invariant subgraph `d`.
pub fn restrict_generator(g: &SimplicialGraph, gen: &Generator, d: VertexSet) -> Result<RestrictedAutomorphism> {
    if !invariant(g, d) {
        return Err(Error::Precondition("subgraph is not U0-invariant".into()));
    }
    gen.automorphism(g)?;
    let (sub, map) = g.induced_subgraph(d)?;
    let local = |v: usize| map.iter().position(|&m| m == v);
    let mut auto = RaagAutomorphism::identity(&sub);
    for factor in gen.factor(g)? {
        let piece = match factor {
            Generator::Inversion(v) => match local(v) {
                Some(i) => RaagAutomorphism::inversion(&sub, i)?,
                None => RaagAutomorphism::identity(&sub),
            },
            Generator::Fold { x, y, kind } => match local(x) {
                Some(i) => {
                    let j = local(y.vertex).ok_or_else(|| {
                        Error::Internal("fold multiplier left an invariant subgraph".into())
                    })?;
                    RaagAutomorphism::fold(&sub, i, SignedVertex { vertex: j, inverse: y.inverse }, kind)?
                }
                None => RaagAutomorphism::identity(&sub),
            },
            Generator::PartialConjugation { x, c } => match local(x.vertex) {
                Some(i) => {
                    let cd = VertexSet::from_iter(c.intersection(d).iter().filter_map(local));
                    RaagAutomorphism::partial_conjugation(&sub, SignedVertex { vertex: i, inverse: x.inverse }, cd)?
                }
                None => RaagAutomorphism::identity(&sub),
            },
            Generator::Whitehead { .. } => unreachable!("factored above"),
        };
        auto = RaagAutomorphism::compose(&sub, &auto, &piece);
    }
    Ok(RestrictedAutomorphism { graph: sub, map, automorphism: auto })
}
