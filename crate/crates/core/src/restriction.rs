//! Invariant subcomplexes of blowups for linkless invariant subgraphs,
//! extendability of partitions of a subgraph, finite group actions on
//! complexes and their reduction by collapsing hyperplane orbits.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::blowup::{BlowupComplex, EdgeLabel};
use crate::cube::{Collapse, CubeComplex, CubicalMap, Square, Step};
use crate::error::{Error, Result};
use crate::graph::{SignedSet, SignedVertex, SimplicialGraph, VertexSet};
use crate::invariance::is_u0_invariant;
use crate::partition::{restrict, WhiteheadPartition};
use crate::structure::{treelike_sets, Structure};

/// Checks that `d` is a nonempty invariant subgraph with empty link.
fn check_linkless_invariant(g: &SimplicialGraph, d: VertexSet) -> Result<()> {
    if d.is_empty() {
        return Err(Error::Precondition("the subgraph is empty".into()));
    }
    if !is_u0_invariant(g, d)?.invariant {
        return Err(Error::Precondition(format!("{{{}}} is not invariant", g.set_names(d).join(","))));
    }
    if !g.link_of_set(d)?.is_empty() {
        return Err(Error::Precondition(format!("{{{}}} has a nonempty link", g.set_names(d).join(","))));
    }
    Ok(())
}

/// The side of `p` (0 or 1) holding the letters of `d` outside the link.
/// The bases of `p` must lie outside `d`.
pub fn delta_side(g: &SimplicialGraph, p: &WhiteheadPartition, d: VertexSet) -> Result<usize> {
    check_linkless_invariant(g, d)?;
    if !p.bases(g).intersection(d).is_empty() {
        return Err(Error::Precondition("the partition is based in the subgraph".into()));
    }
    let ds = d.signed();
    let ok: Vec<usize> = (0..2)
        .filter(|&i| ds.is_subset(p.side(i).union(p.link())) && !ds.is_disjoint(p.side(i)))
        .collect();
    match ok[..] {
        [i] => Ok(i),
        _ => Err(Error::Precondition(format!("{} sides contain the subgraph", ok.len()))),
    }
}

/// Where the bases of a partition lie relative to `d`.
fn based_inside(g: &SimplicialGraph, p: &WhiteheadPartition, d: VertexSet) -> Result<bool> {
    let b = p.bases(g);
    if b.is_subset(d) {
        Ok(true)
    } else if b.intersection(d).is_empty() {
        Ok(false)
    } else {
        Err(Error::Internal("a partition has bases on both sides of an invariant subgraph".into()))
    }
}

/// The subcomplex of a blowup cut out by an invariant subgraph `Δ`, and its
/// identification with the blowup of `Δ` along the restricted entries.
#[derive(Clone, Debug)]
pub struct InvariantSubcomplex {
    pub delta: SimplicialGraph,
    /// Vertex `i` of `delta` is ambient vertex `delta_map[i]`.
    pub delta_map: Vec<usize>,
    /// The restricted multiset, and the ambient entry each one comes from.
    pub omega: Vec<WhiteheadPartition>,
    pub omega_sources: Vec<usize>,
    /// Regions and edges of the ambient blowup, sorted.
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// The subcomplex, indexed by position in `vertices` and `edges`.
    pub complex: CubeComplex,
    /// The blowup of `Δ` along `omega`, and an isomorphism onto `complex`.
    pub blowup: BlowupComplex,
    pub iso: CubicalMap,
}

/// The full subcomplex on the given cells.
fn subcomplex(x: &CubeComplex, vertices: &[usize], edges: &[usize]) -> CubeComplex {
    let vpos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let epos: HashMap<usize, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let new_edges = edges.iter().map(|&e| (vpos[&x.edges[e].0], vpos[&x.edges[e].1])).collect();
    let squares = x
        .squares
        .iter()
        .filter(|s| s.edges().iter().all(|e| epos.contains_key(e)))
        .map(|s| Square { boundary: s.boundary.map(|(e, f)| (epos[&e], f)) })
        .collect();
    CubeComplex { num_vertices: vertices.len(), edges: new_edges, squares }
}

/// Builds the invariant subcomplex of `b` for `d` together with the
/// isomorphism from the blowup of `Δ` along the restricted entries.
pub fn invariant_subcomplex(b: &BlowupComplex, d: VertexSet) -> Result<InvariantSubcomplex> {
    let g = b.graph();
    check_linkless_invariant(g, d)?;
    let (delta, delta_map) = g.induced_subgraph(d)?;
    let pi = b.partitions();
    let mut fixed: Vec<Option<u8>> = vec![None; pi.len()];
    // Inside entries: (entry, restricted partition, ambient side matching
    // the restricted side1).
    let mut inside: Vec<(usize, WhiteheadPartition, usize)> = Vec::new();
    for (i, p) in pi.iter().enumerate() {
        if based_inside(g, p, d)? {
            let r = restrict(g, p, d)?;
            let q = r.in_subgraph(&delta_map);
            let lifted1 = lift(q.side1(), &delta_map);
            let a = if lifted1 == r.side1 { 0 } else { 1 };
            inside.push((i, q, a));
        } else {
            fixed[i] = Some(delta_side(g, p, d)? as u8);
        }
    }
    // Equal restricted entries are nested on the ambient side; list the
    // innermost first so the excluded side pair matches.
    let mut order: Vec<usize> = (0..inside.len()).collect();
    order.sort_by_key(|&k| {
        let (i, q, a) = &inside[k];
        let first = inside.iter().position(|(_, q2, _)| q2 == q).unwrap();
        (first, pi[*i].side(*a).len(), k)
    });
    let inside: Vec<(usize, WhiteheadPartition, usize)> = order.into_iter().map(|k| inside[k].clone()).collect();
    let omega: Vec<WhiteheadPartition> = inside.iter().map(|t| t.1).collect();
    let omega_sources: Vec<usize> = inside.iter().map(|t| t.0).collect();

    let vertices: Vec<usize> = (0..b.regions().len())
        .filter(|&r| fixed.iter().enumerate().all(|(i, f)| f.is_none_or(|s| b.regions()[r][i] == s)))
        .collect();
    let in_k: BTreeSet<usize> = vertices.iter().copied().collect();
    let edges: Vec<usize> = (0..b.edges().len())
        .filter(|&e| {
            let be = b.edges()[e];
            let good_label = match be.label {
                EdgeLabel::Partition(i) => fixed[i].is_none(),
                EdgeLabel::Vertex(v) => d.contains(v),
            };
            good_label && in_k.contains(&be.tail) && in_k.contains(&be.head)
        })
        .collect();
    let complex = subcomplex(b.complex(), &vertices, &edges);

    let y = BlowupComplex::build(&delta, &omega)?;
    let region_of: HashMap<&[u8], usize> = b.regions().iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();
    let vpos: HashMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let epos: HashMap<usize, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut region_map = Vec::with_capacity(y.regions().len());
    for w in y.regions() {
        let mut r: Vec<u8> = fixed.iter().map(|f| f.unwrap_or(0)).collect();
        for (k, (i, _, a)) in inside.iter().enumerate() {
            // Restricted side1 is ambient side `a`.
            r[*i] = w[k] ^ (*a as u8);
        }
        let ri = *region_of
            .get(r.as_slice())
            .ok_or_else(|| Error::Internal("a restricted region is not an ambient region".into()))?;
        region_map.push(ri);
    }
    let mut edge_map = Vec::with_capacity(y.edges().len());
    for ye in y.edges() {
        let (label, tail, rev) = match ye.label {
            EdgeLabel::Partition(k) => {
                let (i, _, a) = inside[k];
                if a == 0 {
                    (EdgeLabel::Partition(i), region_map[ye.tail], false)
                } else {
                    (EdgeLabel::Partition(i), region_map[ye.head], true)
                }
            }
            EdgeLabel::Vertex(u) => (EdgeLabel::Vertex(delta_map[u]), region_map[ye.tail], false),
        };
        let e = b
            .edge_index(label, tail)
            .ok_or_else(|| Error::Internal(format!("no ambient edge for {label} at region {tail}")))?;
        let p = *epos.get(&e).ok_or_else(|| Error::Internal("an image edge lies outside the subcomplex".into()))?;
        edge_map.push((p, rev));
    }
    let vertex_map = region_map
        .iter()
        .map(|r| vpos.get(r).copied().ok_or_else(|| Error::Internal("an image region lies outside the subcomplex".into())))
        .collect::<Result<Vec<usize>>>()?;
    let iso = CubicalMap { vertex_map, edge_map };
    if !iso.is_isomorphism(y.complex(), &complex) {
        return Err(Error::Internal("the invariant subcomplex is not the restricted blowup".into()));
    }
    Ok(InvariantSubcomplex { delta, delta_map, omega, omega_sources, vertices, edges, complex, blowup: y, iso })
}

fn lift(s: SignedSet, map: &[usize]) -> SignedSet {
    SignedSet::from_iter(s.iter().map(|x| SignedVertex { vertex: map[x.vertex], inverse: x.inverse }))
}

/// The vertices and edges of the invariant subcomplex of `x` for `d`,
/// computed from an arbitrary structure on `x`.
pub fn invariant_cells(x: &CubeComplex, g: &SimplicialGraph, s: &Structure, d: VertexSet) -> Result<(Vec<usize>, Vec<usize>)> {
    check_linkless_invariant(g, d)?;
    let hp = x.hyperplanes()?;
    let rec = s.recover_hyperplanes(x, g)?;
    let mut inside_hyperplanes = Vec::new();
    let mut keep = vec![true; x.num_vertices];
    for r in &rec {
        if based_inside(g, &r.partition, d)? {
            inside_hyperplanes.push(r.hyperplane);
        } else {
            let side = r.partition.side(delta_side(g, &r.partition, d)?);
            let half = if r.sides_by_half[0] == side { 0 } else { 1 };
            for (v, k) in keep.iter_mut().enumerate() {
                *k &= r.half[v] == half;
            }
        }
    }
    let vertices: Vec<usize> = (0..x.num_vertices).filter(|&v| keep[v]).collect();
    let edges = (0..x.edges.len())
        .filter(|&e| {
            let (t, h) = x.edges[e];
            let good = match s.labels[e] {
                Some(l) => d.contains(l.vertex),
                None => inside_hyperplanes.contains(&hp.class[e]),
            };
            good && keep[t] && keep[h]
        })
        .collect();
    Ok((vertices, edges))
}

/// A failed extendability condition at one candidate base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition")]
pub enum ExtensionViolation {
    /// A split vertex whose ambient link is not inside the base's link.
    #[serde(rename = "link")]
    SplitLink { base: usize, split: usize },
    /// Two subgraph vertices in one component of `Γ ∖ st(base)` whose
    /// letters do not all lie on one side.
    #[serde(rename = "component")]
    ComponentSplit { base: usize, v1: usize, v2: usize },
}

/// The outcome of the extendability test, in ambient vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    /// The least base meeting both conditions.
    pub base: Option<usize>,
    /// One violation for each base that fails.
    pub violations: Vec<ExtensionViolation>,
}

/// How to place components of `Γ ∖ st(m)` that miss the subgraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FreePlacement {
    Side1,
    #[default]
    Side2,
}

/// `q` is a partition of the induced subgraph on `d`, lifted to ambient
/// indices: (link, side1, side2, bases, split vertices).
struct Lifted {
    sides: [SignedSet; 2],
    bases: VertexSet,
    split: VertexSet,
}

fn lift_partition(g: &SimplicialGraph, d: VertexSet, q: &WhiteheadPartition) -> Result<Lifted> {
    let (dg, map) = g.induced_subgraph(d)?;
    q.validate(&dg, true)?;
    let m = |s: VertexSet| VertexSet::from_iter(s.iter().map(|v| map[v]));
    Ok(Lifted {
        sides: [lift(q.side1(), &map), lift(q.side2(), &map)],
        bases: m(q.bases(&dg)),
        split: m(q.split_set()),
    })
}

fn side_of(sides: &[SignedSet; 2], x: SignedVertex) -> Option<usize> {
    (0..2).find(|&i| sides[i].contains(x))
}

/// Tests whether the subgraph partition `q` extends to an ambient
/// partition, reporting a witness for every base that fails.
pub fn check_extendable(g: &SimplicialGraph, d: VertexSet, q: &WhiteheadPartition) -> Result<ExtensionReport> {
    if !is_u0_invariant(g, d)?.invariant {
        return Err(Error::Precondition("the subgraph is not invariant".into()));
    }
    let l = lift_partition(g, d, q)?;
    let mut violations = Vec::new();
    let mut base = None;
    for m in l.bases.iter() {
        if let Some(v) = l.split.iter().find(|&v| !g.lk(v).is_subset(g.lk(m))) {
            violations.push(ExtensionViolation::SplitLink { base: m, split: v });
            continue;
        }
        let rest = g.vertices().difference(g.st(m));
        let mut bad = None;
        for c in g.components(rest)? {
            let inside: Vec<usize> = c.intersection(d).iter().collect();
            let Some(&v1) = inside.first() else { continue };
            for &v2 in &inside[1..] {
                let letters = [SignedVertex::pos(v1), SignedVertex::neg(v1), SignedVertex::pos(v2), SignedVertex::neg(v2)];
                let s: BTreeSet<Option<usize>> = letters.iter().map(|&x| side_of(&l.sides, x)).collect();
                if s.len() > 1 {
                    bad = Some((v1, v2));
                    break;
                }
            }
            if bad.is_some() {
                break;
            }
        }
        match bad {
            Some((v1, v2)) => violations.push(ExtensionViolation::ComponentSplit { base: m, v1, v2 }),
            None => {
                if base.is_none() {
                    base = Some(m);
                }
            }
        }
    }
    Ok(ExtensionReport { base, violations })
}

/// Every extension of `q` at its least good base, one per placement of the
/// components that miss the subgraph (placement bits in component order).
pub fn extend_partition_all(g: &SimplicialGraph, d: VertexSet, q: &WhiteheadPartition, limit: usize) -> Result<Vec<WhiteheadPartition>> {
    let report = check_extendable(g, d, q)?;
    let Some(m) = report.base else {
        return Err(Error::NotExtendable(format!("{:?}", report.violations)));
    };
    let l = lift_partition(g, d, q)?;
    let link = g.lk(m).signed();
    let mut sides = [SignedSet::EMPTY; 2];
    for x in d.signed().difference(link).iter() {
        let i = side_of(&l.sides, x).ok_or_else(|| Error::Internal("subgraph letter on no side".into()))?;
        sides[i].insert(x);
    }
    let mut free = Vec::new();
    for c in g.components(g.vertices().difference(g.st(m)))? {
        let rest = c.difference(d);
        if rest.is_empty() {
            continue;
        }
        if c.intersection(d).is_empty() {
            free.push(c);
            continue;
        }
        let w = c
            .intersection(d)
            .iter()
            .find(|&w| side_of(&l.sides, SignedVertex::pos(w)) == side_of(&l.sides, SignedVertex::neg(w)))
            .ok_or_else(|| Error::Internal("a mixed component has no unsplit subgraph vertex".into()))?;
        let i = side_of(&l.sides, SignedVertex::pos(w)).expect("placed");
        sides[i] = sides[i].union(rest.signed());
    }
    if free.len() >= 63 || (1usize << free.len()) > limit {
        return Err(Error::Budget(format!("{} free components", free.len())));
    }
    let mut out = Vec::new();
    for bits in 0..(1usize << free.len()) {
        let mut s = sides;
        for (k, c) in free.iter().enumerate() {
            let i = (bits >> k) & 1;
            s[i] = s[i].union(c.signed());
        }
        let p = WhiteheadPartition::from_sides_unchecked(link, s[0], s[1]);
        p.validate(g, true)?;
        out.push(p);
    }
    Ok(out)
}

/// The extension of `q` with every free component placed by `placement`.
pub fn extend_partition(g: &SimplicialGraph, d: VertexSet, q: &WhiteheadPartition, placement: FreePlacement) -> Result<WhiteheadPartition> {
    let all = extend_partition_all(g, d, q, usize::MAX)?;
    // Bit 0 everywhere puts free components on side1, all bits on side2.
    Ok(match placement {
        FreePlacement::Side1 => all[0],
        FreePlacement::Side2 => *all.last().expect("at least one placement"),
    })
}

/// A finite group of automorphisms of a complex, given by generators.
#[derive(Clone, Debug)]
pub struct ActionOnComplex {
    pub complex: CubeComplex,
    pub generators: Vec<(String, CubicalMap)>,
    /// Every group element, sorted; the identity comes first.
    pub closure: Vec<CubicalMap>,
}

impl ActionOnComplex {
    pub fn new(complex: CubeComplex, generators: Vec<(String, CubicalMap)>, limit: usize) -> Result<Self> {
        for (name, f) in &generators {
            if !f.is_isomorphism(&complex, &complex) {
                return Err(Error::Precondition(format!("generator `{name}` is not an automorphism")));
            }
        }
        let id = CubicalMap::identity(&complex);
        let mut seen: BTreeSet<(Vec<usize>, Vec<Step>)> = BTreeSet::new();
        seen.insert((id.vertex_map.clone(), id.edge_map.clone()));
        let mut q = VecDeque::from([id]);
        while let Some(f) = q.pop_front() {
            for (_, h) in &generators {
                let fh = h.compose(&f);
                if seen.insert((fh.vertex_map.clone(), fh.edge_map.clone())) {
                    if seen.len() > limit {
                        return Err(Error::Budget(format!("group has more than {limit} elements")));
                    }
                    q.push_back(fh);
                }
            }
        }
        let closure = seen.into_iter().map(|(vertex_map, edge_map)| CubicalMap { vertex_map, edge_map }).collect();
        Ok(ActionOnComplex { complex, generators, closure })
    }

    /// Orbits of hyperplanes, each sorted, ordered by least member.
    pub fn hyperplane_orbits(&self) -> Result<Vec<Vec<usize>>> {
        let hp = self.complex.hyperplanes()?;
        let mut orbit_of = vec![usize::MAX; hp.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for h in 0..hp.len() {
            if orbit_of[h] != usize::MAX {
                continue;
            }
            let e = hp.members[h][0];
            let o: BTreeSet<usize> = self.closure.iter().map(|f| hp.class[f.edge_map[e].0]).collect();
            for &k in &o {
                orbit_of[k] = out.len();
            }
            out.push(o.into_iter().collect());
        }
        Ok(out)
    }

    /// The least hyperplane orbit contained in some treelike set, if any.
    pub fn unreduced_orbit(&self, g: &SimplicialGraph, limit: usize) -> Result<Option<Vec<usize>>> {
        let sets = treelike_sets(&self.complex, g, limit)?;
        Ok(self.hyperplane_orbits()?.into_iter().find(|o| sets.iter().any(|t| o.iter().all(|h| t.contains(h)))))
    }

    pub fn is_reduced(&self, g: &SimplicialGraph, limit: usize) -> Result<bool> {
        Ok(self.unreduced_orbit(g, limit)?.is_none())
    }
}

/// `f` carried through the collapse of an `f`-invariant hyperplane set.
pub fn transport_map(f: &CubicalMap, c: &Collapse) -> Result<CubicalMap> {
    let mut vertex_map = vec![usize::MAX; c.complex.num_vertices];
    for (v, &nv) in c.vertex_map.iter().enumerate() {
        let img = c.vertex_map[f.vertex_map[v]];
        if vertex_map[nv] != usize::MAX && vertex_map[nv] != img {
            return Err(Error::Precondition("the collapsed set is not invariant".into()));
        }
        vertex_map[nv] = img;
    }
    let mut edge_map = vec![(usize::MAX, false); c.complex.edges.len()];
    for (e, m) in c.edge_map.iter().enumerate() {
        let Some((k, p)) = *m else {
            if c.edge_map[f.edge_map[e].0].is_some() {
                return Err(Error::Precondition("the collapsed set is not invariant".into()));
            }
            continue;
        };
        let (e2, r) = f.edge_map[e];
        let (k2, p2) = c.edge_map[e2].ok_or_else(|| Error::Precondition("the collapsed set is not invariant".into()))?;
        edge_map[k] = (k2, p ^ r ^ p2);
    }
    Ok(CubicalMap { vertex_map, edge_map })
}

/// One collapse performed while reducing an action.
#[derive(Clone, Debug)]
pub struct ReductionStep {
    /// Hyperplanes of the complex before this step.
    pub orbit: Vec<usize>,
    pub collapse: Collapse,
}

/// Collapses the least orbit lying in a treelike set until none is left.
pub fn reduce_action(a: &ActionOnComplex, g: &SimplicialGraph, limit: usize) -> Result<(ActionOnComplex, Vec<ReductionStep>)> {
    let mut cur = a.clone();
    let mut steps = Vec::new();
    while let Some(orbit) = cur.unreduced_orbit(g, limit)? {
        let hp = cur.complex.hyperplanes()?;
        let edges: Vec<usize> = orbit.iter().map(|&h| hp.members[h][0]).collect();
        let c = cur.complex.collapse(&edges)?;
        let generators = cur
            .generators
            .iter()
            .map(|(n, f)| Ok((n.clone(), transport_map(f, &c)?)))
            .collect::<Result<Vec<_>>>()?;
        let next = ActionOnComplex::new(c.complex.clone(), generators, limit)?;
        steps.push(ReductionStep { orbit, collapse: c });
        cur = next;
    }
    Ok((cur, steps))
}

/// Hyperplanes whose dual edges disconnect the 1-skeleton when removed.
pub fn separating_hyperplanes(x: &CubeComplex) -> Result<Vec<usize>> {
    let hp = x.hyperplanes()?;
    let adj = x.vertex_adjacency();
    let mut out = Vec::new();
    for h in 0..hp.len() {
        let mut seen = vec![false; x.num_vertices];
        if x.num_vertices == 0 {
            continue;
        }
        seen[0] = true;
        let mut q = VecDeque::from([0]);
        while let Some(v) = q.pop_front() {
            for &(s, w) in &adj[v] {
                if hp.class[s.0] != h && !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
        if seen.contains(&false) {
            out.push(h);
        }
    }
    Ok(out)
}

/// Collapses every separating hyperplane at once.
pub fn collapse_separating(x: &CubeComplex) -> Result<Collapse> {
    let hp = x.hyperplanes()?;
    let edges: Vec<usize> = separating_hyperplanes(x)?.iter().map(|&h| hp.members[h][0]).collect();
    x.collapse(&edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::{automorphisms, isomorphic_unlabeled, EdgeColoring};
    use crate::fixtures::*;
    use crate::partition::{all_partitions, partitions_based_at};

    /// Discrete `x, y` plus an edge `a – b`.
    fn two_plus_edge() -> SimplicialGraph {
        SimplicialGraph::new(&["x", "y", "a", "b"], &[("a", "b")]).unwrap()
    }

    fn part(g: &SimplicialGraph, s1: &[&str], s2: &[&str]) -> WhiteheadPartition {
        let a = g.parse_signed_set(s1).unwrap();
        let b = g.parse_signed_set(s2).unwrap();
        let link = SignedSet::all(g.len()).difference(a).difference(b);
        WhiteheadPartition::new(g, link, a, b).unwrap()
    }

    #[test]
    fn delta_sides() {
        let g = two_plus_edge();
        let d = g.parse_set(&["a", "b"]).unwrap();
        let p = part(&g, &["x", "a", "a^-1", "b", "b^-1"], &["x^-1", "y", "y^-1"]);
        assert_eq!(p.side(delta_side(&g, &p, d).unwrap()), g.parse_signed_set(&["x", "a", "a^-1", "b", "b^-1"]).unwrap());
        let p = part(&g, &["x", "y"], &["x^-1", "y^-1", "a", "a^-1", "b", "b^-1"]);
        assert_eq!(p.side(delta_side(&g, &p, d).unwrap()).len(), 6);
        let a = g.parse_set(&["a"]).unwrap();
        assert!(matches!(delta_side(&g, &p, a), Err(Error::Precondition(_))));
    }

    #[test]
    fn subcomplex_with_no_inside_entries_is_a_torus() {
        let g = two_plus_edge();
        let d = g.parse_set(&["a", "b"]).unwrap();
        let p = part(&g, &["x", "a", "a^-1", "b", "b^-1"], &["x^-1", "y", "y^-1"]);
        let b = BlowupComplex::build(&g, &[p]).unwrap();
        let k = invariant_subcomplex(&b, d).unwrap();
        assert!(k.omega.is_empty());
        assert_eq!((k.complex.num_vertices, k.complex.edges.len(), k.complex.squares.len()), (1, 2, 1));
        let side1 = b.region_index(&[0]).unwrap();
        assert_eq!(k.vertices, vec![side1]);
    }

    #[test]
    fn figure_four_subcomplex() {
        let g = figure_four();
        let d = g.parse_set(&["a", "b", "c", "d"]).unwrap();
        let p = part(&g, &["c", "d"], &["c^-1", "d^-1", "e", "e^-1", "f", "f^-1"]);
        let b = BlowupComplex::build(&g, &[p]).unwrap();
        let k = invariant_subcomplex(&b, d).unwrap();
        assert_eq!(k.omega.len(), 1);
        let expect = part(&k.delta, &["c", "d"], &["c^-1", "d^-1"]);
        assert_eq!(k.omega[0], expect);
        assert_eq!(k.complex.num_vertices, 2);
        let empty = invariant_subcomplex(&BlowupComplex::salvetti(&g), d).unwrap();
        assert_eq!(empty.complex.num_vertices, 1);
        assert_eq!(empty.complex.edges.len(), 4);
    }

    /// Partitions based at `c` in the six-vertex test graph whose
    /// restrictions to `{a, b, c, d}` collide or trivialize.
    #[test]
    fn figure_four_restrictions_collapse_and_duplicate() {
        let g = figure_four();
        let d = g.parse_set(&["a", "b", "c", "d"]).unwrap();
        let c = g.index_of("c").unwrap();
        let parts = partitions_based_at(&g, c).unwrap();
        let (_, map) = g.induced_subgraph(d).unwrap();
        let rs: Vec<_> = parts.iter().map(|p| restrict(&g, p, d).unwrap()).collect();
        assert!(rs.iter().any(|r| r.trivial));
        let mut dup = false;
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                if !rs[i].trivial && rs[i].in_subgraph(&map) == rs[j].in_subgraph(&map) {
                    dup = true;
                }
            }
        }
        assert!(dup);
    }

    #[test]
    fn duplicated_restrictions_embed() {
        // Two nested partitions based at c with the same restriction.
        let g = figure_four();
        let d = g.parse_set(&["a", "b", "c", "d"]).unwrap();
        let p = part(&g, &["c", "d"], &["c^-1", "d^-1", "e", "e^-1", "f", "f^-1"]);
        let q = part(&g, &["c", "d", "e", "e^-1"], &["c^-1", "d^-1", "f", "f^-1"]);
        for pi in [vec![p, q], vec![q, p]] {
            let b = BlowupComplex::build(&g, &pi).unwrap();
            let k = invariant_subcomplex(&b, d).unwrap();
            assert_eq!(k.omega[0], k.omega[1]);
            assert_eq!(k.complex.num_vertices, 3);
        }
    }

    #[test]
    fn structure_independence_on_small_blowups() {
        let g = figure_four();
        let d = g.parse_set(&["a", "b", "c", "d"]).unwrap();
        let p = part(&g, &["c", "d"], &["c^-1", "d^-1", "e", "e^-1", "f", "f^-1"]);
        let b = BlowupComplex::build(&g, &[p]).unwrap();
        let x = b.complex();
        let base = Structure::from_blowup(&b).unwrap();
        let k = invariant_subcomplex(&b, d).unwrap();
        assert_eq!(invariant_cells(x, &g, &base, d).unwrap(), (k.vertices.clone(), k.edges.clone()));
        let mut count = 0;
        for t in treelike_sets(x, &g, 10_000).unwrap() {
            let s = Structure::from_treelike(x, &g, &t).unwrap();
            for perm in g.automorphisms() {
                let signed: Vec<SignedVertex> = perm.iter().map(|&v| SignedVertex::pos(v)).collect();
                let s2 = s.relabeled(&signed);
                if base.marking_change(&s2, x, &g).unwrap().respects_fold_order(&g) {
                    assert_eq!(invariant_cells(x, &g, &s2, d).unwrap(), (k.vertices.clone(), k.edges.clone()));
                    count += 1;
                }
            }
        }
        assert!(count >= 2);
    }

    #[test]
    fn extension_at_c() {
        let g = figure_four();
        let d = g.parse_set(&["a", "b", "c", "d"]).unwrap();
        let (dg, map) = g.induced_subgraph(d).unwrap();
        let q = part(&dg, &["c", "d"], &["c^-1", "d^-1"]);
        let r = check_extendable(&g, d, &q).unwrap();
        assert_eq!(r.base, Some(g.index_of("c").unwrap()));
        let all = extend_partition_all(&g, d, &q, 64).unwrap();
        // Components {e} and {f} of Γ ∖ st(c) are free.
        assert_eq!(all.len(), 4);
        for p in &all {
            assert_eq!(restrict(&g, p, d).unwrap().in_subgraph(&map), q);
        }
        let p = extend_partition(&g, d, &q, FreePlacement::Side2).unwrap();
        assert!(p.side2().contains(SignedVertex::pos(g.index_of("e").unwrap())));
    }

    /// Brute force: some ambient partition based in `d` restricts to `q`.
    fn brute_extendable(g: &SimplicialGraph, d: VertexSet, q: &WhiteheadPartition, all: &[WhiteheadPartition]) -> bool {
        let (_, map) = g.induced_subgraph(d).unwrap();
        all.iter().any(|p| p.bases(g).is_subset(d) && restrict(g, p, d).unwrap().in_subgraph(&map) == *q)
    }

    fn verify_violation(g: &SimplicialGraph, d: VertexSet, q: &WhiteheadPartition, v: &ExtensionViolation) -> bool {
        let l = lift_partition(g, d, q).unwrap();
        match *v {
            ExtensionViolation::SplitLink { base, split } => {
                l.bases.contains(base) && l.split.contains(split) && !g.lk(split).is_subset(g.lk(base))
            }
            ExtensionViolation::ComponentSplit { base, v1, v2 } => {
                let rest = g.vertices().difference(g.st(base));
                let same = g.components(rest).unwrap().iter().any(|c| c.contains(v1) && c.contains(v2));
                let sides: BTreeSet<_> = [SignedVertex::pos(v1), SignedVertex::neg(v1), SignedVertex::pos(v2), SignedVertex::neg(v2)]
                    .iter()
                    .map(|&x| side_of(&l.sides, x))
                    .collect();
                l.bases.contains(base) && v1 != v2 && same && sides.len() > 1
            }
        }
    }

    #[test]
    fn extendability_matches_brute_force_on_five_vertex_graphs() {
        let mut inextendable = 0;
        let mut link_witness = false;
        for g in nonisomorphic_graphs(5, usize::MAX) {
            let all = all_partitions(&g).unwrap();
            for d in crate::invariance::u0_invariant_subgraphs(&g, 16).unwrap() {
                if d.is_empty() || d == g.vertices() {
                    continue;
                }
                let (dg, map) = g.induced_subgraph(d).unwrap();
                for q in all_partitions(&dg).unwrap() {
                    let r = check_extendable(&g, d, &q).unwrap();
                    assert_eq!(r.base.is_some(), brute_extendable(&g, d, &q, &all), "{:?}", g.edge_list());
                    match r.base {
                        Some(_) => {
                            let p = extend_partition(&g, d, &q, FreePlacement::Side2).unwrap();
                            assert_eq!(restrict(&g, &p, d).unwrap().in_subgraph(&map), q);
                        }
                        None => {
                            inextendable += 1;
                            assert!(!r.violations.is_empty());
                            for v in &r.violations {
                                assert!(verify_violation(&g, d, &q, v));
                                link_witness |= matches!(v, ExtensionViolation::SplitLink { .. });
                            }
                        }
                    }
                }
            }
        }
        assert!(inextendable > 0);
        assert!(link_witness);
    }

    #[test]
    fn trivial_action_on_theta_reduces_to_the_rose() {
        let g = discrete(2);
        let p = all_partitions(&g).unwrap()[0];
        let b = BlowupComplex::build(&g, &[p]).unwrap();
        let a = ActionOnComplex::new(b.complex().clone(), vec![], 100).unwrap();
        assert!(!a.is_reduced(&g, 1000).unwrap());
        let (r, steps) = reduce_action(&a, &g, 1000).unwrap();
        assert_eq!(steps.len(), 1);
        assert!(isomorphic_unlabeled(&r.complex, BlowupComplex::salvetti(&g).complex()).is_some());
    }

    #[test]
    fn full_group_on_theta_is_reduced() {
        let g = discrete(2);
        let p = all_partitions(&g).unwrap()[0];
        let b = BlowupComplex::build(&g, &[p]).unwrap();
        let x = b.complex().clone();
        let auts = automorphisms(&x, &EdgeColoring::uniform(&x), 100).unwrap();
        let gens = auts.into_iter().enumerate().map(|(i, f)| (format!("g{i}"), f)).collect();
        let a = ActionOnComplex::new(x, gens, 100).unwrap();
        assert_eq!(a.closure.len(), 12);
        assert!(a.closure[0].is_identity());
        assert_eq!(a.hyperplane_orbits().unwrap(), vec![vec![0, 1, 2]]);
        assert!(a.is_reduced(&g, 1000).unwrap());
        let sa = BlowupComplex::salvetti(&g);
        let t = ActionOnComplex::new(sa.complex().clone(), vec![], 10).unwrap();
        assert!(t.is_reduced(&g, 1000).unwrap());
    }

    #[test]
    fn separating_arc_of_a_dumbbell() {
        let x = CubeComplex { num_vertices: 2, edges: vec![(0, 0), (0, 1), (1, 1)], squares: vec![] };
        assert_eq!(separating_hyperplanes(&x).unwrap(), vec![1]);
        let c = collapse_separating(&x).unwrap();
        let g = discrete(2);
        assert!(isomorphic_unlabeled(&c.complex, BlowupComplex::salvetti(&g).complex()).is_some());
        let p = all_partitions(&g).unwrap()[0];
        let theta = BlowupComplex::build(&g, &[p]).unwrap();
        assert!(separating_hyperplanes(theta.complex()).unwrap().is_empty());
    }
}
