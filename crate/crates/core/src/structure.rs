//! Blowup structures on abstract cube complexes: a treelike set of
//! hyperplanes together with a labeling of the remaining edges by signed
//! generators, identifying the collapse with the Salvetti complex. From a
//! structure we recover the partitions and read off the outer automorphism
//! induced by a cubical automorphism.

use std::collections::VecDeque;

use crate::blowup::{BlowupComplex, EdgeLabel};
use crate::cube::{automorphisms, isomorphic_unlabeled, Collapse, CubeComplex, CubicalMap, EdgeColoring, Step};
use crate::error::{Error, Result};
use crate::graph::{SignedSet, SignedVertex, SimplicialGraph};
use crate::partition::WhiteheadPartition;
use crate::raag::{normalize, RaagAutomorphism, Word};

/// A treelike set (hyperplane indices of the complex) and, for each edge
/// outside it, the generator read when the edge is traversed forward.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Structure {
    pub tree: Vec<usize>,
    pub labels: Vec<Option<SignedVertex>>,
}

/// Hyperplane indices whose collapse has the right number of hyperplanes
/// and a single vertex; cheap filter before the isomorphism test.
fn spans_all_vertices(x: &CubeComplex, class: &[usize], tree: &[usize]) -> bool {
    let mut parent: Vec<usize> = (0..x.num_vertices).collect();
    fn find(p: &mut [usize], a: usize) -> usize {
        let mut a = a;
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    let mut comps = x.num_vertices;
    for (e, &(t, h)) in x.edges.iter().enumerate() {
        if tree.contains(&class[e]) {
            let (a, b) = (find(&mut parent, t), find(&mut parent, h));
            if a != b {
                parent[a] = b;
                comps -= 1;
            }
        }
    }
    comps == 1
}

fn tree_edges(x: &CubeComplex, tree: &[usize]) -> Result<Vec<usize>> {
    let hp = x.hyperplanes()?;
    if let Some(&h) = tree.iter().find(|&&h| h >= hp.len()) {
        return Err(Error::Precondition(format!("no hyperplane {h}")));
    }
    Ok(tree.iter().map(|&h| hp.members[h][0]).collect())
}

/// Does collapsing the hyperplanes `tree` give the Salvetti complex of `g`?
pub fn is_treelike(x: &CubeComplex, g: &SimplicialGraph, tree: &[usize]) -> Result<bool> {
    let hp = x.hyperplanes()?;
    if hp.len() < tree.len() || hp.len() - tree.len() != g.len() || !spans_all_vertices(x, &hp.class, tree) {
        return Ok(false);
    }
    let c = x.collapse(&tree_edges(x, tree)?)?;
    Ok(isomorphic_unlabeled(&c.complex, BlowupComplex::salvetti(g).complex()).is_some())
}

/// Every treelike set, each sorted, in lexicographic order. Errors when more
/// than `limit` candidate subsets would have to be examined.
pub fn treelike_sets(x: &CubeComplex, g: &SimplicialGraph, limit: usize) -> Result<Vec<Vec<usize>>> {
    let hp = x.hyperplanes()?;
    if hp.len() < g.len() {
        return Ok(Vec::new());
    }
    let k = hp.len() - g.len();
    let mut out = Vec::new();
    let mut examined = 0usize;
    let mut cur = Vec::with_capacity(k);
    fn rec(
        x: &CubeComplex,
        g: &SimplicialGraph,
        n: usize,
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        examined: &mut usize,
        limit: usize,
    ) -> Result<()> {
        if cur.len() == k {
            *examined += 1;
            if *examined > limit {
                return Err(Error::Budget(format!("more than {limit} candidate hyperplane sets")));
            }
            if is_treelike(x, g, cur)? {
                out.push(cur.clone());
            }
            return Ok(());
        }
        for h in start..n {
            if n - h < k - cur.len() {
                break;
            }
            cur.push(h);
            rec(x, g, n, k, h + 1, cur, out, examined, limit)?;
            cur.pop();
        }
        Ok(())
    }
    rec(x, g, hp.len(), k, 0, &mut cur, &mut out, &mut examined, limit)?;
    Ok(out)
}

/// A treelike hyperplane with its recovered partition. Half 0 contains the
/// tail of the hyperplane's first edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredHyperplane {
    pub hyperplane: usize,
    pub partition: WhiteheadPartition,
    pub sides_by_half: [SignedSet; 2],
    pub half: Vec<u8>,
}

impl Structure {
    /// The structure a blowup is built with: partition hyperplanes form the
    /// treelike set, in entry order, and `v`-edges read `v`.
    pub fn from_blowup(b: &BlowupComplex) -> Result<Self> {
        let x = b.complex();
        let hp = x.hyperplanes()?;
        let tree = (0..b.partitions().len())
            .map(|i| {
                let e = b.edges().iter().position(|e| e.label == EdgeLabel::Partition(i)).expect("entry has edges");
                hp.class[e]
            })
            .collect();
        let labels = b
            .edges()
            .iter()
            .map(|e| match e.label {
                EdgeLabel::Partition(_) => None,
                EdgeLabel::Vertex(v) => Some(SignedVertex::pos(v)),
            })
            .collect();
        Ok(Structure { tree, labels })
    }

    /// Labels pulled back along an isomorphism `iso` from the collapse of
    /// `tree` onto the Salvetti complex.
    fn from_collapse_iso(x: &CubeComplex, tree: &[usize], edge_map: &[Option<(usize, bool)>], iso: &CubicalMap) -> Self {
        let labels = (0..x.edges.len())
            .map(|e| {
                edge_map[e].map(|(k, p)| {
                    // Salvetti edge `s` is the loop of generator `s`.
                    let (s, r) = iso.edge_map[k];
                    SignedVertex::new(s, if p ^ r { -1 } else { 1 })
                })
            })
            .collect();
        Structure { tree: tree.to_vec(), labels }
    }

    /// Some labeling of a treelike set.
    pub fn from_treelike(x: &CubeComplex, g: &SimplicialGraph, tree: &[usize]) -> Result<Structure> {
        let c = x.collapse(&tree_edges(x, tree)?)?;
        let sa = BlowupComplex::salvetti(g);
        let iso = isomorphic_unlabeled(&c.complex, sa.complex())
            .ok_or_else(|| Error::NotTreelike("the collapse is not the Salvetti complex".into()))?;
        Ok(Structure::from_collapse_iso(x, tree, &c.edge_map, &iso))
    }

    /// Renames every label `v^e` to `perm[v]^e`.
    pub fn relabeled(&self, perm: &[SignedVertex]) -> Structure {
        let labels = self
            .labels
            .iter()
            .map(|l| l.map(|l| if l.inverse { perm[l.vertex].inv() } else { perm[l.vertex] }))
            .collect();
        Structure { tree: self.tree.clone(), labels }
    }

    /// Every labeling of a treelike set: one per isomorphism of the collapse
    /// with the Salvetti complex.
    pub fn labelings(x: &CubeComplex, g: &SimplicialGraph, tree: &[usize], limit: usize) -> Result<Vec<Structure>> {
        let c = x.collapse(&tree_edges(x, tree)?)?;
        let sa = BlowupComplex::salvetti(g);
        let Some(iso) = isomorphic_unlabeled(&c.complex, sa.complex()) else {
            return Err(Error::NotTreelike("the collapse is not the Salvetti complex".into()));
        };
        let auts = automorphisms(sa.complex(), &EdgeColoring::uniform(sa.complex()), limit)?;
        let mut out: Vec<Structure> =
            auts.iter().map(|a| Structure::from_collapse_iso(x, tree, &c.edge_map, &a.compose(&iso))).collect();
        out.sort_by(|a, b| a.labels.cmp(&b.labels));
        Ok(out)
    }

    /// Checks that the tree is a set of hyperplanes, that labels are
    /// missing exactly on its edges, and that they identify the collapse
    /// with the Salvetti complex.
    pub fn validate(&self, x: &CubeComplex, g: &SimplicialGraph) -> Result<()> {
        let hp = x.hyperplanes()?;
        if self.labels.len() != x.edges.len() {
            return Err(Error::NotTreelike("one label per edge is required".into()));
        }
        let c = x.collapse(&tree_edges(x, &self.tree)?)?;
        for e in 0..x.edges.len() {
            if self.tree.contains(&hp.class[e]) != self.labels[e].is_none() {
                return Err(Error::NotTreelike(format!("edge {e} is labeled inconsistently with the tree")));
            }
        }
        let sa = BlowupComplex::salvetti(g);
        if c.complex.edges.len() != g.len() || c.complex.num_vertices != 1 {
            return Err(Error::NotTreelike("the collapse is not the Salvetti complex".into()));
        }
        let mut edge_map: Vec<Option<Step>> = vec![None; c.complex.edges.len()];
        for e in 0..x.edges.len() {
            let (Some((k, p)), Some(l)) = (c.edge_map[e], self.labels[e]) else { continue };
            let img = (l.vertex, l.inverse ^ p);
            match edge_map[k] {
                None => edge_map[k] = Some(img),
                Some(old) if old == img => {}
                Some(_) => return Err(Error::NotTreelike("parallel edges carry different labels".into())),
            }
        }
        let map = CubicalMap {
            vertex_map: vec![0],
            edge_map: edge_map.into_iter().map(|s| s.expect("every collapsed edge has a preimage")).collect(),
        };
        if !map.is_isomorphism(&c.complex, sa.complex()) {
            return Err(Error::NotTreelike("the labels do not identify the collapse with the Salvetti complex".into()));
        }
        Ok(())
    }

    /// The structure whose treelike set is the hyperplanes of the unlabeled
    /// edges, sorted.
    pub fn from_labels(x: &CubeComplex, labels: Vec<Option<SignedVertex>>) -> Result<Structure> {
        if labels.len() != x.edges.len() {
            return Err(Error::NotTreelike("one label per edge is required".into()));
        }
        let hp = x.hyperplanes()?;
        let mut tree: Vec<usize> = (0..x.edges.len()).filter(|&e| labels[e].is_none()).map(|e| hp.class[e]).collect();
        tree.sort_unstable();
        tree.dedup();
        Ok(Structure { tree, labels })
    }

    /// The structure on the result of collapsing some hyperplanes of the
    /// treelike set.
    pub fn push_through(&self, x: &CubeComplex, c: &Collapse) -> Result<Structure> {
        let mut labels = vec![None; c.complex.edges.len()];
        for (e, m) in c.edge_map.iter().enumerate() {
            match (*m, self.labels[e]) {
                (None, Some(_)) => return Err(Error::Precondition(format!("collapsed edge {e} is labeled"))),
                (Some((k, p)), l) => labels[k] = l.map(|l| if p { l.inv() } else { l }),
                (None, None) => {}
            }
        }
        let hp = x.hyperplanes()?;
        let new_hp = c.complex.hyperplanes()?;
        let tree = self
            .tree
            .iter()
            .filter_map(|&h| c.edge_map[hp.members[h][0]].map(|(k, _)| new_hp.class[k]))
            .collect();
        Ok(Structure { tree, labels })
    }

    fn is_tree_edge(&self, e: usize) -> bool {
        self.labels[e].is_none()
    }

    /// Shortest path between vertices along edges of the treelike set.
    pub fn tree_path(&self, x: &CubeComplex, from: usize, to: usize) -> Result<Vec<Step>> {
        let mut prev: Vec<Option<(usize, Step)>> = vec![None; x.num_vertices];
        let mut seen = vec![false; x.num_vertices];
        seen[from] = true;
        let mut q = VecDeque::from([from]);
        let adj = x.vertex_adjacency();
        while let Some(r) = q.pop_front() {
            if r == to {
                break;
            }
            for &(s, w) in &adj[r] {
                if self.is_tree_edge(s.0) && !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((r, s));
                    q.push_back(w);
                }
            }
        }
        if !seen[to] {
            return Err(Error::NotTreelike("tree edges do not connect the complex".into()));
        }
        let mut path = Vec::new();
        let mut at = to;
        while at != from {
            let (p, s) = prev[at].expect("visited");
            path.push(s);
            at = p;
        }
        path.reverse();
        Ok(path)
    }

    /// A loop at vertex 0 reading exactly `v`: tree path, the first edge
    /// labeled by `v` or its inverse, tree path back.
    pub fn characteristic_loop(&self, x: &CubeComplex, v: usize) -> Result<Vec<Step>> {
        let e = (0..x.edges.len())
            .find(|&e| self.labels[e].map(|l| l.vertex) == Some(v))
            .ok_or(Error::VertexIndex(v))?;
        let step = (e, !self.labels[e].expect("labeled").inverse);
        let mut path = self.tree_path(x, 0, x.step_start(step))?;
        path.push(step);
        path.extend(self.tree_path(x, x.step_end(step), 0)?);
        Ok(path)
    }

    /// The generators read along a path, skipping tree edges.
    pub fn reading(&self, g: &SimplicialGraph, path: &[Step]) -> Result<Word> {
        let letters = path
            .iter()
            .filter_map(|&(e, fwd)| self.labels[e].map(|l| if fwd { l } else { l.inv() }))
            .collect();
        normalize(g, &Word(letters))
    }

    /// The automorphism of `A_Γ` induced by a cubical automorphism `f`,
    /// using vertex 0 as base point and tree paths to return to it.
    pub fn induced_automorphism(&self, x: &CubeComplex, g: &SimplicialGraph, f: &CubicalMap) -> Result<RaagAutomorphism> {
        if !f.is_isomorphism(x, x) {
            return Err(Error::Precondition("the map is not an automorphism of the complex".into()));
        }
        let finv = f.inverse();
        let mut images = Vec::with_capacity(g.len());
        let mut back = Vec::with_capacity(g.len());
        for v in 0..g.len() {
            let l = self.characteristic_loop(x, v)?;
            images.push(self.reading(g, &f.apply_path(&l))?);
            back.push(self.reading(g, &finv.apply_path(&l))?);
        }
        // a_{f^-1} ∘ a_f is conjugation by the reading of f^-1 applied to a
        // tree path from the base point to its image.
        let tau = self.tree_path(x, 0, f.vertex_map[0])?;
        let u = self.reading(g, &finv.apply_path(&tau))?;
        let inverse_images = back.iter().map(|w| u.inverse().concat(w).concat(&u)).collect();
        RaagAutomorphism::new(g, images, inverse_images)
            .map_err(|e| Error::Internal(format!("induced map is not an automorphism: {e}")))
    }

    /// The change of marking from `self` to `other` on `π₁(X, 0)`: each
    /// generator's loop under `self` read with the labels of `other`.
    pub fn marking_change(&self, other: &Structure, x: &CubeComplex, g: &SimplicialGraph) -> Result<RaagAutomorphism> {
        let mut images = Vec::with_capacity(g.len());
        let mut inverse = Vec::with_capacity(g.len());
        for v in 0..g.len() {
            images.push(other.reading(g, &self.characteristic_loop(x, v)?)?);
            inverse.push(self.reading(g, &other.characteristic_loop(x, v)?)?);
        }
        RaagAutomorphism::new(g, images, inverse)
    }

    /// Recovers one partition per treelike hyperplane, in tree order. A
    /// generator whose hyperplane crosses `H` goes to the link; otherwise
    /// the half containing the terminal end of its edges gets `v` and the
    /// half containing the initial end gets `v^-1`.
    pub fn recover_partitions(&self, x: &CubeComplex, g: &SimplicialGraph) -> Result<Vec<WhiteheadPartition>> {
        Ok(self.recover_hyperplanes(x, g)?.into_iter().map(|r| r.partition).collect())
    }

    /// Like [`Structure::recover_partitions`], also reporting which half of
    /// the complex each vertex lies in.
    pub fn recover_hyperplanes(&self, x: &CubeComplex, g: &SimplicialGraph) -> Result<Vec<RecoveredHyperplane>> {
        self.validate(x, g)?;
        let hp = x.hyperplanes()?;
        let adj = x.vertex_adjacency();
        let mut out = Vec::with_capacity(self.tree.len());
        for &h in &self.tree {
            let mut link = SignedSet::EMPTY;
            for sq in &x.squares {
                let b = sq.boundary;
                for (i, j) in [(0, 1), (1, 0)] {
                    if hp.class[b[i].0] == h {
                        if let Some(l) = self.labels[b[j].0] {
                            link.insert(SignedVertex::pos(l.vertex));
                            link.insert(SignedVertex::neg(l.vertex));
                        }
                    }
                }
            }
            // Halves of the tree complex cut along H.
            let (t0, h0) = x.edges[hp.members[h][0]];
            let mut half = vec![usize::MAX; x.num_vertices];
            for (side, start) in [(0, t0), (1, h0)] {
                if half[start] != usize::MAX {
                    return Err(Error::NotGammaComplex(format!("hyperplane {h} does not separate the tree complex")));
                }
                half[start] = side;
                let mut q = VecDeque::from([start]);
                while let Some(r) = q.pop_front() {
                    for &(s, w) in &adj[r] {
                        if self.is_tree_edge(s.0) && hp.class[s.0] != h && half[w] == usize::MAX {
                            half[w] = side;
                            q.push_back(w);
                        }
                    }
                }
            }
            if half.contains(&usize::MAX) {
                return Err(Error::NotGammaComplex("tree edges do not connect the complex".into()));
            }
            let mut sides = [SignedSet::EMPTY; 2];
            let mut placed: Vec<Option<[usize; 2]>> = vec![None; g.len()];
            for (e, &(t, hd)) in x.edges.iter().enumerate() {
                let Some(l) = self.labels[e] else { continue };
                if link.contains(SignedVertex::pos(l.vertex)) {
                    continue;
                }
                let (init, term) = if l.inverse { (hd, t) } else { (t, hd) };
                let p = [half[term], half[init]];
                match placed[l.vertex] {
                    None => placed[l.vertex] = Some(p),
                    Some(q) if q == p => {}
                    Some(_) => {
                        return Err(Error::NotGammaComplex(format!(
                            "edges of `{}` lie on different sides of hyperplane {h}",
                            g.name(l.vertex)
                        )))
                    }
                }
            }
            for (v, p) in placed.iter().enumerate() {
                if let Some([term, init]) = *p {
                    sides[term].insert(SignedVertex::pos(v));
                    sides[init].insert(SignedVertex::neg(v));
                }
            }
            let partition = WhiteheadPartition::from_sides_unchecked(link, sides[0], sides[1]);
            partition
                .validate(g, true)
                .map_err(|e| Error::NotGammaComplex(format!("hyperplane {h} gives no partition: {e}")))?;
            let half = half.into_iter().map(|s| s as u8).collect();
            out.push(RecoveredHyperplane { hyperplane: h, partition, sides_by_half: sides, half });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::partition::{all_partitions, singleton_partition};
    use crate::raag::outer_equal_bounded;

    fn theta() -> (SimplicialGraph, BlowupComplex) {
        let g = discrete(2);
        // The partition ({a, b} | {a^-1, b^-1}).
        let p = all_partitions(&g)
            .unwrap()
            .into_iter()
            .find(|p| p.side_of(SignedVertex::pos(0)) == p.side_of(SignedVertex::pos(1)))
            .unwrap();
        let b = BlowupComplex::build(&g, &[p]).unwrap();
        (g, b)
    }

    fn word(g: &SimplicialGraph, s: &str) -> Word {
        Word::parse(g, s).unwrap()
    }

    #[test]
    fn theta_treelike_sets_are_the_singletons() {
        let (g, b) = theta();
        let sets = treelike_sets(b.complex(), &g, 1000).unwrap();
        assert_eq!(sets, vec![vec![0], vec![1], vec![2]]);
        let sa = BlowupComplex::salvetti(&g);
        assert_eq!(treelike_sets(sa.complex(), &g, 1000).unwrap(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn doubled_theta_treelike_sets_are_spanning_trees() {
        // Without squares a set is treelike exactly when its edges form a
        // spanning tree of the graph.
        let (g, b) = theta();
        let d = b.duplicate_hyperplane(EdgeLabel::Partition(0)).unwrap();
        let x = d.complex();
        let sets = treelike_sets(x, &g, 1000).unwrap();
        let mut brute = Vec::new();
        for i in 0..x.edges.len() {
            for j in i + 1..x.edges.len() {
                let (a, b) = (x.edges[i], x.edges[j]);
                let ends: std::collections::BTreeSet<usize> = [a.0, a.1, b.0, b.1].into();
                if ends.len() == 3 && a.0 != a.1 && b.0 != b.1 {
                    brute.push(vec![i, j]);
                }
            }
        }
        assert_eq!(sets, brute);
        assert_eq!(sets.len(), 5);
        assert!(sets.contains(&vec![0, 1]));
    }

    #[test]
    fn recovery_roundtrip_on_blowups() {
        let g = figure_four();
        let parts = all_partitions(&g).unwrap();
        for pi in [vec![], vec![parts[0]], vec![parts[3], parts[3]]] {
            let b = BlowupComplex::build(&g, &pi).unwrap();
            let s = Structure::from_blowup(&b).unwrap();
            s.validate(b.complex(), &g).unwrap();
            assert_eq!(s.recover_partitions(b.complex(), &g).unwrap(), pi);
        }
        let r = BlowupComplex::build(&g, &[singleton_partition(&g, 0).unwrap()]).unwrap();
        let s = Structure::from_blowup(&r).unwrap();
        assert_eq!(s.recover_partitions(r.complex(), &g).unwrap(), r.partitions());
    }

    #[test]
    fn other_structures_on_theta_give_blowups_of_theta() {
        let (g, b) = theta();
        for tree in treelike_sets(b.complex(), &g, 1000).unwrap() {
            for s in Structure::labelings(b.complex(), &g, &tree, 100).unwrap() {
                let pi = s.recover_partitions(b.complex(), &g).unwrap();
                assert_eq!(pi.len(), 1);
                let c = BlowupComplex::build(&g, &pi).unwrap();
                assert!(isomorphic_unlabeled(c.complex(), b.complex()).is_some());
            }
        }
    }

    #[test]
    fn induced_automorphisms_on_theta_and_rose() {
        let (g, b) = theta();
        let x = b.complex();
        let s = Structure::from_blowup(&b).unwrap();
        // Edges: 0 partition, 1 x-edge, 2 y-edge, all between the regions.
        let swap = CubicalMap { vertex_map: vec![0, 1], edge_map: vec![(0, false), (2, false), (1, false)] };
        let a = s.induced_automorphism(x, &g, &swap).unwrap();
        assert_eq!(a.images(), &[word(&g, "b"), word(&g, "a")]);
        let id = s.induced_automorphism(x, &g, &CubicalMap::identity(x)).unwrap();
        assert!(id.is_identity());

        let sa = BlowupComplex::salvetti(&g);
        let rs = Structure::from_blowup(&sa).unwrap();
        let rev = CubicalMap { vertex_map: vec![0], edge_map: vec![(0, true), (1, false)] };
        let a = rs.induced_automorphism(sa.complex(), &g, &rev).unwrap();
        assert_eq!(a.images(), &[word(&g, "a^-1"), word(&g, "b")]);
    }

    #[test]
    fn induced_map_is_a_homomorphism_to_outer_classes() {
        let (g, b) = theta();
        let x = b.complex();
        let s = Structure::from_blowup(&b).unwrap();
        let auts = automorphisms(x, &EdgeColoring::uniform(x), 100).unwrap();
        assert_eq!(auts.len(), 12);
        let induced: Vec<RaagAutomorphism> = auts.iter().map(|f| s.induced_automorphism(x, &g, f).unwrap()).collect();
        for (i, f) in auts.iter().enumerate() {
            for (j, h) in auts.iter().enumerate() {
                let fh = s.induced_automorphism(x, &g, &f.compose(h)).unwrap();
                let prod = RaagAutomorphism::compose(&g, &induced[i], &induced[j]);
                assert!(outer_equal_bounded(&g, &fh, &prod, 4).is_some());
            }
        }
    }

    #[test]
    fn swapping_tree_edge_with_a_generator_edge() {
        // All three theta edges run from region 1 to region 0. Swapping the
        // partition edge with the x-edge sends the loop (e0^-1 e1) to
        // (e1^-1 e0), reading x^-1, and (e0^-1 e2) to (e1^-1 e2).
        let (g, b) = theta();
        let x = b.complex();
        let s = Structure::from_blowup(&b).unwrap();
        let f = CubicalMap { vertex_map: vec![0, 1], edge_map: vec![(1, false), (0, false), (2, false)] };
        let a = s.induced_automorphism(x, &g, &f).unwrap();
        assert_eq!(a.images(), &[word(&g, "a^-1"), word(&g, "a^-1 b")]);
    }
}
