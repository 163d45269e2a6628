//! Γ-Whitehead partitions: validation, enumeration, adjacency and
//! compatibility, singleton partitions, restriction to subgraphs, and
//! compatible collections.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SignedSet, SignedVertex, SimplicialGraph, VertexSet};
use crate::raag::RaagAutomorphism;

/// A partition `(link | side1 | side2)` of the signed vertices. Sides are
/// stored in canonical order: `side1` holds the least split vertex with
/// positive sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WhiteheadPartition {
    link: SignedSet,
    side1: SignedSet,
    side2: SignedSet,
}

impl WhiteheadPartition {
    /// Builds and validates a partition (singleton sides rejected).
    pub fn new(g: &SimplicialGraph, link: SignedSet, side1: SignedSet, side2: SignedSet) -> Result<Self> {
        let p = WhiteheadPartition::from_sides_unchecked(link, side1, side2);
        p.validate(g, false)?;
        Ok(p)
    }

    /// Builds a partition allowing a side with a single element, as for
    /// singleton partitions and trivial restrictions.
    pub fn new_allow_singleton(
        g: &SimplicialGraph,
        link: SignedSet,
        side1: SignedSet,
        side2: SignedSet,
    ) -> Result<Self> {
        let p = WhiteheadPartition::from_sides_unchecked(link, side1, side2);
        p.validate(g, true)?;
        Ok(p)
    }

    /// Canonicalizes side order without validating.
    pub fn from_sides_unchecked(link: SignedSet, side1: SignedSet, side2: SignedSet) -> Self {
        let p = WhiteheadPartition { link, side1, side2 };
        match p.split_set().first() {
            Some(v) if !side1.contains(SignedVertex::pos(v)) => WhiteheadPartition { link, side1: side2, side2: side1 },
            _ => p,
        }
    }

    pub fn link(&self) -> SignedSet {
        self.link
    }

    pub fn side1(&self) -> SignedSet {
        self.side1
    }

    pub fn side2(&self) -> SignedSet {
        self.side2
    }

    pub fn sides(&self) -> [SignedSet; 2] {
        [self.side1, self.side2]
    }

    pub fn side(&self, i: usize) -> SignedSet {
        self.sides()[i]
    }

    /// `Some(0)` for side1, `Some(1)` for side2, `None` in the link.
    pub fn side_of(&self, x: SignedVertex) -> Option<usize> {
        if self.side1.contains(x) {
            Some(0)
        } else if self.side2.contains(x) {
            Some(1)
        } else {
            None
        }
    }

    /// Vertices whose two signs lie on different sides.
    pub fn split_set(&self) -> VertexSet {
        let mut s = VertexSet::EMPTY;
        for x in self.side1.iter() {
            if self.side2.contains(x.inv()) {
                s.insert(x.vertex);
            }
        }
        s
    }

    /// Split vertices whose signed link is exactly the link of the partition.
    pub fn bases(&self, g: &SimplicialGraph) -> VertexSet {
        VertexSet::from_iter(self.split_set().iter().filter(|&v| g.signed_link(v) == self.link))
    }

    /// A side with a single element.
    pub fn is_singleton(&self) -> bool {
        self.side1.len() == 1 || self.side2.len() == 1
    }

    /// Checks the partition conditions. With `allow_singleton`, a side may
    /// consist of one element.
    pub fn validate(&self, g: &SimplicialGraph, allow_singleton: bool) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidPartition(m.to_string()));
        let all = SignedSet::all(g.len());
        let (l, a, b) = (self.link, self.side1, self.side2);
        if !l.union(a).union(b).is_subset(all) {
            return bad("signed vertex outside the graph");
        }
        if !l.is_disjoint(a) || !l.is_disjoint(b) || !a.is_disjoint(b) {
            return bad("link and sides overlap");
        }
        if l.union(a).union(b) != all {
            return bad("link and sides do not cover every signed vertex");
        }
        if l.vertices().signed() != l {
            return bad("link is not closed under inversion");
        }
        if self.bases(g).is_empty() {
            return bad("no split vertex has link equal to the partition link");
        }
        let min = if allow_singleton { 1 } else { 2 };
        if a.len() < min || b.len() < min {
            return bad("a side has no element besides its base");
        }
        for comp in g.double().components(l) {
            if !comp.is_subset(a) && !comp.is_subset(b) {
                return bad("a component of the doubled graph minus the link meets both sides");
            }
        }
        let link_v = l.vertices();
        for y in self.split_set().iter() {
            if !g.lk(y).is_subset(link_v) {
                return Err(Error::InvalidPartition(format!(
                    "split vertex `{}` has link outside the partition link",
                    g.name(y)
                )));
            }
        }
        Ok(())
    }

    /// The Whitehead automorphism based at `x`, which must be a base.
    pub fn whitehead_automorphism(&self, g: &SimplicialGraph, x: SignedVertex) -> Result<RaagAutomorphism> {
        if !self.bases(g).contains(x.vertex) {
            return Err(Error::Precondition(format!("`{}` is not a base of the partition", g.name(x.vertex))));
        }
        let side = if self.side1.contains(x) { self.side1 } else { self.side2 };
        RaagAutomorphism::whitehead(g, side, x)
    }

    /// Relabels signed vertices, e.g. under a signed graph automorphism.
    pub fn map_signed(&self, f: impl Fn(SignedVertex) -> SignedVertex) -> Self {
        let m = |s: SignedSet| SignedSet::from_iter(s.iter().map(&f));
        WhiteheadPartition::from_sides_unchecked(m(self.link), m(self.side1), m(self.side2))
    }

    pub fn display(&self, g: &SimplicialGraph) -> String {
        let f = |s: SignedSet| g.signed_set_names(s).join(",");
        format!("({} | {} | {})", f(self.link), f(self.side1), f(self.side2))
    }

    pub fn to_json(&self, g: &SimplicialGraph) -> PartitionJson {
        PartitionJson {
            link: g.signed_set_names(self.link),
            side1: g.signed_set_names(self.side1),
            side2: g.signed_set_names(self.side2),
        }
    }

    /// Reads and validates a partition; singleton sides are accepted.
    pub fn from_json(g: &SimplicialGraph, j: &PartitionJson) -> Result<Self> {
        WhiteheadPartition::new_allow_singleton(
            g,
            g.parse_signed_set(&j.link)?,
            g.parse_signed_set(&j.side1)?,
            g.parse_signed_set(&j.side2)?,
        )
    }
}

/// Serialized partition form.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PartitionJson {
    pub link: Vec<String>,
    pub side1: Vec<String>,
    pub side2: Vec<String>,
}

impl fmt::Display for WhiteheadPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} | {:?} | {:?})", self.link, self.side1, self.side2)
    }
}

/// Every partition with `x` among its bases, ordered by the bitmask of
/// side choices over the free components.
pub fn partitions_based_at(g: &SimplicialGraph, x: usize) -> Result<Vec<WhiteheadPartition>> {
    if x >= g.len() {
        return Err(Error::VertexIndex(x));
    }
    let link = g.signed_link(x);
    let px = SignedVertex::pos(x);
    let free: Vec<SignedSet> = g
        .double()
        .components(link)
        .into_iter()
        .filter(|c| !c.contains(px) && !c.contains(px.inv()))
        .collect();
    if free.len() > 40 {
        return Err(Error::Budget(format!("{} free components at `{}`", free.len(), g.name(x))));
    }
    let link_v = link.vertices();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << free.len()) {
        let mut a = SignedSet::from_iter([px]);
        let mut b = SignedSet::from_iter([px.inv()]);
        for (i, c) in free.iter().enumerate() {
            if mask >> i & 1 == 0 {
                a = a.union(*c);
            } else {
                b = b.union(*c);
            }
        }
        if a.len() < 2 || b.len() < 2 {
            continue;
        }
        let p = WhiteheadPartition::from_sides_unchecked(link, a, b);
        if p.split_set().iter().all(|y| g.lk(y).is_subset(link_v)) {
            debug_assert!(p.validate(g, false).is_ok());
            out.push(p);
        }
    }
    Ok(out)
}

/// All partitions of `Γ`, without repetition, in order of their first base.
pub fn all_partitions(g: &SimplicialGraph) -> Result<Vec<WhiteheadPartition>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in 0..g.len() {
        for p in partitions_based_at(g, x)? {
            if seen.insert(p) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Some base of `p` is adjacent in `Γ` to some base of `q`.
pub fn adjacent(g: &SimplicialGraph, p: &WhiteheadPartition, q: &WhiteheadPartition) -> bool {
    let bq = q.bases(g);
    p.bases(g).iter().any(|x| !g.lk(x).intersection(bq).is_empty())
}

/// Adjacent, or some side of `p` is disjoint from some side of `q`.
pub fn compatible(g: &SimplicialGraph, p: &WhiteheadPartition, q: &WhiteheadPartition) -> bool {
    adjacent(g, p, q) || p.sides().iter().any(|a| q.sides().iter().any(|b| a.is_disjoint(*b)))
}

/// The singleton partition `(lk±(v) | {v^-1} | rest)`.
pub fn singleton_partition(g: &SimplicialGraph, v: usize) -> Result<WhiteheadPartition> {
    if v >= g.len() {
        return Err(Error::VertexIndex(v));
    }
    let link = g.signed_link(v);
    let small = SignedSet::from_iter([SignedVertex::neg(v)]);
    let rest = SignedSet::all(g.len()).difference(link).difference(small);
    if rest.len() < 2 {
        return Err(Error::InvalidPartition(format!(
            "no room for a singleton partition at `{}`",
            g.name(v)
        )));
    }
    WhiteheadPartition::new_allow_singleton(g, link, small, rest)
}

/// Intersection of a partition with `Δ±`, indexed in the ambient graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Restriction {
    pub link: SignedSet,
    pub side1: SignedSet,
    pub side2: SignedSet,
    /// A side keeps no element besides its base letter.
    pub trivial: bool,
}

impl Restriction {
    /// The restricted partition as a partition of the induced subgraph whose
    /// vertex `i` is ambient vertex `map[i]`. Side order is canonical there.
    pub fn in_subgraph(&self, map: &[usize]) -> WhiteheadPartition {
        let m = |s: SignedSet| {
            SignedSet::from_iter(
                s.iter()
                    .map(|x| SignedVertex { vertex: map.iter().position(|&v| v == x.vertex).unwrap(), inverse: x.inverse }),
            )
        };
        WhiteheadPartition::from_sides_unchecked(m(self.link), m(self.side1), m(self.side2))
    }
}

/// Intersects `p` with `Δ±`. Every base of `p` must lie in `d`.
pub fn restrict(g: &SimplicialGraph, p: &WhiteheadPartition, d: VertexSet) -> Result<Restriction> {
    if !d.is_subset(g.vertices()) {
        return Err(Error::VertexIndex(d.difference(g.vertices()).first().unwrap_or(0)));
    }
    if !p.bases(g).is_subset(d) {
        return Err(Error::Precondition("a base of the partition lies outside the subgraph".into()));
    }
    let ds = d.signed();
    let (link, side1, side2) = (p.link.intersection(ds), p.side1.intersection(ds), p.side2.intersection(ds));
    Ok(Restriction { link, side1, side2, trivial: side1.len() < 2 || side2.len() < 2 })
}

/// An ordered list of partitions, possibly with repeats and singleton
/// partitions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PartitionMultiset {
    pub entries: Vec<WhiteheadPartition>,
}

impl PartitionMultiset {
    pub fn new(entries: Vec<WhiteheadPartition>) -> Self {
        PartitionMultiset { entries }
    }

    /// Fails with the first incompatible pair of entries.
    pub fn check_compatible(&self, g: &SimplicialGraph) -> Result<()> {
        for i in 0..self.entries.len() {
            for j in i + 1..self.entries.len() {
                if !compatible(g, &self.entries[i], &self.entries[j]) {
                    return Err(Error::Incompatible(i, j));
                }
            }
        }
        Ok(())
    }

    /// Distinct and free of singleton partitions.
    pub fn is_collection(&self) -> bool {
        let set: HashSet<_> = self.entries.iter().collect();
        set.len() == self.entries.len() && self.entries.iter().all(|p| !p.is_singleton())
    }
}

/// Index sets of pairwise compatible partitions with at most `max_size`
/// members, ordered by size and then lexicographically.
pub fn compatible_cliques(g: &SimplicialGraph, parts: &[WhiteheadPartition], max_size: usize) -> Vec<Vec<usize>> {
    let n = parts.len();
    let compat: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| i != j && compatible(g, &parts[i], &parts[j])).collect()).collect();
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_size + 1];
    fn rec(
        compat: &[Vec<bool>],
        cur: &mut Vec<usize>,
        cands: &[usize],
        max: usize,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        out[cur.len()].push(cur.clone());
        if cur.len() == max {
            return;
        }
        for (k, &c) in cands.iter().enumerate() {
            cur.push(c);
            let next: Vec<usize> = cands[k + 1..].iter().copied().filter(|&d| compat[c][d]).collect();
            rec(compat, cur, &next, max, out);
            cur.pop();
        }
    }
    let all: Vec<usize> = (0..n).collect();
    rec(&compat, &mut Vec::new(), &all, max_size, &mut by_size);
    by_size.into_iter().flatten().collect()
}

/// All compatible collections of at most `max_size` partitions of `Γ`.
pub fn enumerate_compatible_collections(g: &SimplicialGraph, max_size: usize) -> Result<Vec<Vec<WhiteheadPartition>>> {
    let parts = all_partitions(g)?;
    Ok(compatible_cliques(g, &parts, max_size)
        .into_iter()
        .map(|c| c.into_iter().map(|i| parts[i]).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;

    /// Counts partitions straight from the definition: assign every signed
    /// vertex to the link or a side, over all `3^(2n)` assignments.
    fn brute_count(g: &SimplicialGraph) -> usize {
        let n = g.len();
        let m = 2 * n;
        let mut found = HashSet::new();
        let mut code = vec![0u8; m];
        loop {
            let mut sets = [SignedSet::EMPTY; 3];
            for (i, &c) in code.iter().enumerate() {
                sets[c as usize].insert(SignedVertex::from_index(i));
            }
            let [l, a, b] = sets;
            let has_base = (0..n).any(|x| {
                let px = SignedVertex::pos(x);
                let split = (a.contains(px) && b.contains(px.inv())) || (b.contains(px) && a.contains(px.inv()));
                split && g.signed_link(x) == l
            });
            let no_cross_edge = a.iter().all(|x| b.iter().all(|y| !g.double().adjacent(x, y)));
            let links_ok = (0..n).all(|y| {
                let py = SignedVertex::pos(y);
                let split = (a.contains(py) && b.contains(py.inv())) || (b.contains(py) && a.contains(py.inv()));
                !split || g.lk(y).is_subset(l.vertices())
            });
            if has_base && a.len() >= 2 && b.len() >= 2 && no_cross_edge && links_ok {
                found.insert(if a < b { (l, a, b) } else { (l, b, a) });
            }
            let mut i = 0;
            while i < m && code[i] == 2 {
                code[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            code[i] += 1;
        }
        found.len()
    }

    fn sides_unordered(p: &WhiteheadPartition) -> (SignedSet, SignedSet) {
        (p.side1().min(p.side2()), p.side1().max(p.side2()))
    }

    #[test]
    fn based_at_examples() {
        let f2 = discrete(2);
        let ps = partitions_based_at(&f2, 0).unwrap();
        assert_eq!(ps.len(), 2);
        let want1 = (f2.parse_signed_set(&["a", "b"]).unwrap(), f2.parse_signed_set(&["a^-1", "b^-1"]).unwrap());
        let want2 = (f2.parse_signed_set(&["a", "b^-1"]).unwrap(), f2.parse_signed_set(&["a^-1", "b"]).unwrap());
        let got: HashSet<_> = ps.iter().map(sides_unordered).collect();
        let norm = |(a, b): (SignedSet, SignedSet)| (a.min(b), a.max(b));
        assert_eq!(got, HashSet::from([norm(want1), norm(want2)]));
        assert!(partitions_based_at(&complete(3), 0).unwrap().is_empty());
        let g = figure_four();
        assert_eq!(partitions_based_at(&g, g.index_of("c").unwrap()).unwrap().len(), 62);
        assert!(partitions_based_at(&g, 9).is_err());
    }

    #[test]
    fn all_partitions_match_brute_force() {
        assert_eq!(all_partitions(&discrete(2)).unwrap().len(), 2);
        assert!(all_partitions(&complete(4)).unwrap().is_empty());
        for g in all_graphs_up_to(4).into_iter().chain([path(5), cycle(5), figure_four()]) {
            let ps = all_partitions(&g).unwrap();
            for p in &ps {
                p.validate(&g, false).unwrap();
            }
            assert_eq!(ps.len(), brute_count(&g), "{g:?}");
        }
    }

    #[test]
    fn figure_four_partition_count() {
        // Base c gives 62 and base d gives 62; the 32 splitting both coincide.
        assert_eq!(all_partitions(&figure_four()).unwrap().len(), 92);
    }

    #[test]
    fn adjacency_and_compatibility() {
        let f2 = discrete(2);
        let ps = all_partitions(&f2).unwrap();
        assert!(!adjacent(&f2, &ps[0], &ps[1]));
        assert!(!compatible(&f2, &ps[0], &ps[1]));
        assert!(compatible(&f2, &ps[0], &ps[0]));

        let g = figure_four();
        let link = g.signed_link(g.index_of("c").unwrap());
        let all = SignedSet::all(g.len()).difference(link);
        let s1 = g.parse_signed_set(&["c", "d"]).unwrap();
        let p = WhiteheadPartition::new(&g, link, s1, all.difference(s1)).unwrap();
        let s1 = g.parse_signed_set(&["c", "e"]).unwrap();
        let q = WhiteheadPartition::new(&g, link, s1, all.difference(s1)).unwrap();
        let four_pairs_disjoint =
            p.sides().iter().any(|a| q.sides().iter().any(|b| a.intersection(*b).is_empty()));
        assert!(!adjacent(&g, &p, &q));
        assert_eq!(compatible(&g, &p, &q), four_pairs_disjoint);
        assert!(!four_pairs_disjoint);
    }

    #[test]
    fn adjacency_on_square() {
        // In the 4-cycle a-b-c-d, a and c share a link, so do b and d.
        let g = cycle(4);
        let ps = all_partitions(&g).unwrap();
        assert_eq!(ps.len(), 4);
        let (ac, bd): (Vec<_>, Vec<_>) = ps.iter().partition(|p| p.bases(&g).contains(0));
        assert_eq!((ac.len(), bd.len()), (2, 2));
        assert!(adjacent(&g, ac[0], bd[1]));
        assert!(compatible(&g, ac[0], bd[1]));
        assert!(!adjacent(&g, ac[0], ac[1]));
        assert!(!compatible(&g, ac[0], ac[1]));
    }

    #[test]
    fn singletons() {
        let f2 = SimplicialGraph::discrete(&["x", "y"]).unwrap();
        let s = singleton_partition(&f2, 0).unwrap();
        assert_eq!(
            sides_unordered(&s),
            sides_unordered(&WhiteheadPartition::from_sides_unchecked(
                SignedSet::EMPTY,
                f2.parse_signed_set(&["x^-1"]).unwrap(),
                f2.parse_signed_set(&["x", "y", "y^-1"]).unwrap()
            ))
        );
        assert!(s.is_singleton());
        assert!(singleton_partition(&complete(3), 0).is_err());
        let g = figure_four();
        let c = g.index_of("c").unwrap();
        let s = singleton_partition(&g, c).unwrap();
        assert_eq!(s.link(), g.parse_signed_set(&["a", "a^-1", "b", "b^-1"]).unwrap());
        assert!(s.sides().contains(&g.parse_signed_set(&["c^-1"]).unwrap()));
        for p in all_partitions(&g).unwrap() {
            assert!(compatible(&g, &s, &p));
        }
    }

    #[test]
    fn restriction_examples() {
        let g = figure_four();
        let delta = g.parse_set(&["a", "b", "c", "d"]).unwrap();
        let link = g.signed_link(g.index_of("c").unwrap());
        let rest = SignedSet::all(g.len()).difference(link);
        let s1 = g.parse_signed_set(&["c", "d"]).unwrap();
        let p = WhiteheadPartition::new(&g, link, s1, rest.difference(s1)).unwrap();
        let r = restrict(&g, &p, delta).unwrap();
        assert!(!r.trivial);
        assert_eq!(r.link, link);
        let pair = (r.side1.min(r.side2), r.side1.max(r.side2));
        let want = (s1, g.parse_signed_set(&["c^-1", "d^-1"]).unwrap());
        assert_eq!(pair, (want.0.min(want.1), want.0.max(want.1)));

        let s1 = g.parse_signed_set(&["c", "e", "e^-1", "f", "f^-1"]).unwrap();
        let q = WhiteheadPartition::new(&g, link, s1, rest.difference(s1)).unwrap();
        let r = restrict(&g, &q, delta).unwrap();
        assert!(r.trivial);

        // Moving e± and f± between sides does not change the restriction.
        let s1 = g.parse_signed_set(&["c", "d", "e", "e^-1"]).unwrap();
        let p2 = WhiteheadPartition::new(&g, link, s1, rest.difference(s1)).unwrap();
        assert_ne!(p, p2);
        assert_eq!(restrict(&g, &p, delta).unwrap(), restrict(&g, &p2, delta).unwrap());

        assert!(restrict(&g, &p, g.parse_set(&["a", "b", "c"]).unwrap()).is_err());
    }

    #[test]
    fn compatible_collection_enumeration() {
        let f2 = discrete(2);
        let cols = enumerate_compatible_collections(&f2, 3).unwrap();
        assert_eq!(cols.len(), 3);
        assert_eq!(enumerate_compatible_collections(&complete(3), 3).unwrap().len(), 1);
        let d3 = discrete(3);
        let parts = all_partitions(&d3).unwrap();
        let cols = enumerate_compatible_collections(&d3, 2).unwrap();
        assert_eq!(cols.iter().filter(|c| c.len() == 1).count(), parts.len());
        let pairs = (0..parts.len())
            .flat_map(|i| (i + 1..parts.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| compatible(&d3, &parts[i], &parts[j]))
            .count();
        assert_eq!(cols.iter().filter(|c| c.len() == 2).count(), pairs);
    }

    #[test]
    fn counts_invariant_under_relabeling() {
        let g = figure_four();
        let n = all_partitions(&g).unwrap().len();
        for perm in [vec![1, 0, 3, 2, 5, 4], vec![5, 4, 3, 2, 1, 0], vec![2, 3, 4, 5, 0, 1]] {
            assert_eq!(all_partitions(&g.permuted(&perm).unwrap()).unwrap().len(), n);
        }
    }

    #[test]
    fn whitehead_from_partition() {
        let g = figure_four();
        let c = g.index_of("c").unwrap();
        let link = g.signed_link(c);
        let rest = SignedSet::all(g.len()).difference(link);
        let s1 = g.parse_signed_set(&["c", "d"]).unwrap();
        let p = WhiteheadPartition::new(&g, link, s1, rest.difference(s1)).unwrap();
        let phi = p.whitehead_automorphism(&g, SignedVertex::pos(c)).unwrap();
        for v in p.link().vertices().iter() {
            assert_eq!(phi.image(v).letters(), &[SignedVertex::pos(v)]);
        }
        assert!(p.whitehead_automorphism(&g, SignedVertex::pos(g.index_of("e").unwrap())).is_err());
    }
}
