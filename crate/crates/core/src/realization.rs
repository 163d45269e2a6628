//! Realizing finite groups of outer automorphisms by cubical automorphisms
//! of blowups. The search runs over combinatorial types of complexes, their
//! once-subdivided variants, blowup structures and automorphisms; every
//! result comes with a certificate that can be checked on its own.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::blowup::BlowupComplex;
use crate::cube::{automorphisms, isomorphic_unlabeled, CubeComplex, CubicalMap, EdgeColoring};
use crate::error::{Error, Result};
use crate::graph::{GraphJson, SignedVertex, SimplicialGraph};
use crate::partition::{all_partitions, compatible_cliques, PartitionJson, WhiteheadPartition};
use crate::raag::{is_inner_bounded, outer_equal_bounded, RaagAutomorphism, Word};
use crate::restriction::{transport_map, ActionOnComplex};
use crate::structure::{treelike_sets, Structure};

/// One combinatorial type of complex, with the first collection in
/// enumeration order that builds it.
#[derive(Clone, Debug)]
pub struct ComplexType {
    pub blowup: BlowupComplex,
    pub automorphism_order: usize,
}

#[derive(Clone, Debug)]
pub struct TypeCatalog {
    pub types: Vec<ComplexType>,
    /// False when larger collections than the bound exist.
    pub complete: bool,
    pub collections_examined: usize,
}

/// Builds the blowup of every compatible collection with at most
/// `max_entries` entries and keeps one per isomorphism type.
pub fn enumerate_complex_types(g: &SimplicialGraph, max_entries: usize, aut_limit: usize) -> Result<TypeCatalog> {
    let parts = all_partitions(g)?;
    let cliques = compatible_cliques(g, &parts, max_entries.saturating_add(1).min(parts.len()));
    let complete = cliques.iter().all(|c| c.len() <= max_entries);
    let mut types: Vec<ComplexType> = Vec::new();
    let mut prints: Vec<Vec<u64>> = Vec::new();
    let mut examined = 0;
    for c in cliques.iter().filter(|c| c.len() <= max_entries) {
        examined += 1;
        let pi: Vec<WhiteheadPartition> = c.iter().map(|&i| parts[i]).collect();
        let b = BlowupComplex::build(g, &pi)?;
        let fp = b.complex().fingerprint();
        let seen = types
            .iter()
            .zip(&prints)
            .any(|(t, p)| *p == fp && isomorphic_unlabeled(t.blowup.complex(), b.complex()).is_some());
        if seen {
            continue;
        }
        let x = b.complex();
        let automorphism_order = automorphisms(x, &EdgeColoring::uniform(x), aut_limit)?.len();
        prints.push(fp);
        types.push(ComplexType { blowup: b, automorphism_order });
    }
    Ok(TypeCatalog { types, complete, collections_examined: examined })
}

/// A named generator of the group being realized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    pub name: String,
    pub automorphism: RaagAutomorphism,
    /// How the target was written in terms of elementary automorphisms.
    pub expression: Option<String>,
}

/// A word in the targets that must act as the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub text: String,
    pub factors: Vec<(usize, i64)>,
}

impl Relation {
    /// Parses space-separated factors `name` or `name^k`.
    pub fn parse(text: &str, names: &[String]) -> Result<Relation> {
        let mut factors = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?),
                None => (tok, 1),
            };
            let i = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse(format!("relation `{text}` names no target `{name}`")))?;
            factors.push((i, exp));
        }
        if factors.is_empty() {
            return Err(Error::Parse("empty relation".into()));
        }
        Ok(Relation { text: text.to_string(), factors })
    }

    /// The product of the factors, the leftmost applied last.
    pub fn evaluate<T: Clone>(&self, gens: &[T], id: T, inv: impl Fn(&T) -> T, mul: impl Fn(&T, &T) -> T) -> T {
        let mut acc = id;
        for &(i, e) in &self.factors {
            let base = if e < 0 { inv(&gens[i]) } else { gens[i].clone() };
            for _ in 0..e.unsigned_abs() {
                acc = mul(&acc, &base);
            }
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBudget {
    /// Largest compatible collection to build.
    #[serde(default = "default_max_entries")]
    pub max_entries: usize,
    /// Conjugator radius for outer matching; twice the longest target
    /// image when absent.
    #[serde(default)]
    pub radius: Option<usize>,
    #[serde(default)]
    pub time_limit_secs: Option<u64>,
    /// Also search complexes with one hyperplane duplicated.
    #[serde(default = "default_true")]
    pub subdivide: bool,
    #[serde(default = "default_aut_limit")]
    pub automorphism_limit: usize,
    #[serde(default = "default_structure_limit")]
    pub structure_limit: usize,
}

fn default_max_entries() -> usize {
    3
}
fn default_true() -> bool {
    true
}
fn default_aut_limit() -> usize {
    100_000
}
fn default_structure_limit() -> usize {
    100_000
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_entries: default_max_entries(),
            radius: None,
            time_limit_secs: None,
            subdivide: true,
            automorphism_limit: default_aut_limit(),
            structure_limit: default_structure_limit(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RealizationProblem {
    pub graph: SimplicialGraph,
    pub targets: Vec<Target>,
    pub relations: Vec<Relation>,
    pub budget: SearchBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetJson {
    pub name: String,
    pub images: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemJson {
    pub graph: GraphJson,
    pub targets: Vec<TargetJson>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub budget: SearchBudget,
}

fn target_json(g: &SimplicialGraph, t: &Target) -> TargetJson {
    TargetJson {
        name: t.name.clone(),
        images: t.automorphism.to_json_map(g),
        inverse: Some(t.automorphism.inverse().to_json_map(g)),
        expression: t.expression.clone(),
    }
}

fn read_targets(g: &SimplicialGraph, ts: &[TargetJson]) -> Result<Vec<Target>> {
    let mut out: Vec<Target> = Vec::new();
    for t in ts {
        if out.iter().any(|o| o.name == t.name) {
            return Err(Error::Parse(format!("target `{}` is named twice", t.name)));
        }
        let automorphism = RaagAutomorphism::from_json_map(g, &t.images, t.inverse.as_ref())?;
        out.push(Target { name: t.name.clone(), automorphism, expression: t.expression.clone() });
    }
    Ok(out)
}

impl RealizationProblem {
    pub fn new(graph: SimplicialGraph, targets: Vec<Target>, relations: &[&str], budget: SearchBudget) -> Result<Self> {
        let names: Vec<String> = targets.iter().map(|t| t.name.clone()).collect();
        let relations = relations.iter().map(|r| Relation::parse(r, &names)).collect::<Result<Vec<_>>>()?;
        let p = RealizationProblem { graph, targets, relations, budget };
        p.validate()?;
        Ok(p)
    }

    pub fn from_json(j: &ProblemJson) -> Result<Self> {
        let g = j.graph.clone().into_graph()?;
        let targets = read_targets(&g, &j.targets)?;
        let rels: Vec<&str> = j.relations.iter().map(String::as_str).collect();
        RealizationProblem::new(g, targets, &rels, j.budget.clone())
    }

    pub fn to_json(&self) -> ProblemJson {
        ProblemJson {
            graph: self.graph.to_json_value(),
            targets: self.targets.iter().map(|t| target_json(&self.graph, t)).collect(),
            relations: self.relations.iter().map(|r| r.text.clone()).collect(),
            budget: self.budget.clone(),
        }
    }

    pub fn radius(&self) -> usize {
        self.budget.radius.unwrap_or_else(|| {
            2 * self.targets.iter().flat_map(|t| t.automorphism.images().iter().map(Word::len)).max().unwrap_or(1).max(1)
        })
    }

    /// Each relation must be inner within the radius.
    pub fn validate(&self) -> Result<()> {
        if self.targets.is_empty() {
            return Err(Error::Precondition("no targets".into()));
        }
        let g = &self.graph;
        let autos: Vec<RaagAutomorphism> = self.targets.iter().map(|t| t.automorphism.clone()).collect();
        for r in &self.relations {
            let a = r.evaluate(&autos, RaagAutomorphism::identity(g), |a| a.inverse(), |a, b| RaagAutomorphism::compose(g, a, b));
            if is_inner_bounded(g, &a, self.radius()).is_none() {
                return Err(Error::Precondition(format!("relation `{}` is not inner within radius {}", r.text, self.radius())));
            }
        }
        Ok(())
    }
}

/// A complex, a blowup structure on it, a correction `marking` of the
/// structure's identification, and a cubical automorphism per target with
/// `marking ∘ induced ∘ marking⁻¹ = inner(witness) ∘ target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizationCertificate {
    pub graph: SimplicialGraph,
    pub complex: CubeComplex,
    pub structure: Structure,
    pub marking: RaagAutomorphism,
    pub targets: Vec<Target>,
    pub relations: Vec<Relation>,
    pub assignment: Vec<CubicalMap>,
    pub witnesses: Vec<Word>,
    pub radius: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureJson {
    pub tree: Vec<usize>,
    pub labels: Vec<Option<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkingJson {
    pub images: BTreeMap<String, String>,
    pub inverse: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateJson {
    pub graph: GraphJson,
    pub complex: CubeComplex,
    /// The entries the structure recovers, for reading only.
    pub partitions: Vec<PartitionJson>,
    pub structure: StructureJson,
    pub marking: MarkingJson,
    pub targets: Vec<TargetJson>,
    pub relations: Vec<String>,
    pub assignment: BTreeMap<String, CubicalMap>,
    pub witnesses: BTreeMap<String, String>,
    pub radius: usize,
}

impl RealizationCertificate {
    pub fn to_json(&self) -> Result<CertificateJson> {
        let g = &self.graph;
        let partitions = self.structure.recover_partitions(&self.complex, g)?.iter().map(|p| p.to_json(g)).collect();
        Ok(CertificateJson {
            graph: g.to_json_value(),
            complex: self.complex.clone(),
            partitions,
            structure: StructureJson {
                tree: self.structure.tree.clone(),
                labels: self.structure.labels.iter().map(|l| l.map(|l| g.signed_name(l))).collect(),
            },
            marking: MarkingJson {
                images: self.marking.to_json_map(g),
                inverse: self.marking.inverse().to_json_map(g),
            },
            targets: self.targets.iter().map(|t| target_json(g, t)).collect(),
            relations: self.relations.iter().map(|r| r.text.clone()).collect(),
            assignment: self.targets.iter().zip(&self.assignment).map(|(t, f)| (t.name.clone(), f.clone())).collect(),
            witnesses: self.targets.iter().zip(&self.witnesses).map(|(t, w)| (t.name.clone(), w.display(g))).collect(),
            radius: self.radius,
        })
    }

    /// Reads a certificate; structural errors are input errors, while
    /// whether it certifies anything is left to [`check_certificate`].
    pub fn from_json(j: &CertificateJson) -> Result<Self> {
        let g = j.graph.clone().into_graph()?;
        j.complex.validate().map_err(|e| Error::Parse(format!("complex: {e}")))?;
        let labels = j
            .structure
            .labels
            .iter()
            .map(|l| l.as_deref().map(|s| g.parse_signed(s)).transpose())
            .collect::<Result<Vec<Option<SignedVertex>>>>()?;
        let structure = Structure { tree: j.structure.tree.clone(), labels };
        let marking = RaagAutomorphism::from_json_map(&g, &j.marking.images, Some(&j.marking.inverse))?;
        let targets = read_targets(&g, &j.targets)?;
        let names: Vec<String> = targets.iter().map(|t| t.name.clone()).collect();
        let relations = j.relations.iter().map(|r| Relation::parse(r, &names)).collect::<Result<Vec<_>>>()?;
        let mut assignment = Vec::new();
        let mut witnesses = Vec::new();
        for t in &targets {
            let f = j.assignment.get(&t.name).ok_or_else(|| Error::Parse(format!("no assignment for `{}`", t.name)))?;
            let w = j.witnesses.get(&t.name).ok_or_else(|| Error::Parse(format!("no witness for `{}`", t.name)))?;
            assignment.push(f.clone());
            witnesses.push(Word::parse(&g, w)?);
        }
        Ok(RealizationCertificate {
            graph: g,
            complex: j.complex.clone(),
            structure,
            marking,
            targets,
            relations,
            assignment,
            witnesses,
            radius: j.radius,
        })
    }
}

/// The verdict of [`check_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub valid: bool,
    pub reason: Option<String>,
}

impl CheckOutcome {
    fn fail(reason: String) -> Self {
        CheckOutcome { valid: false, reason: Some(reason) }
    }
}

/// The outer automorphism a cubical automorphism induces through the
/// structure, corrected by the marking.
fn corrected_action(g: &SimplicialGraph, x: &CubeComplex, s: &Structure, psi: &RaagAutomorphism, f: &CubicalMap) -> Result<RaagAutomorphism> {
    let a = s.induced_automorphism(x, g, f)?;
    Ok(RaagAutomorphism::compose(g, psi, &RaagAutomorphism::compose(g, &a, &psi.inverse())))
}

/// Re-verifies a certificate from scratch: the complex is a Γ-complex
/// under the structure, every assigned map is an automorphism, the
/// relations hold exactly as cubical maps, and every witness checks.
pub fn check_certificate(c: &RealizationCertificate) -> CheckOutcome {
    let g = &c.graph;
    let x = &c.complex;
    if let Err(e) = x.validate() {
        return CheckOutcome::fail(format!("the complex is malformed: {e}"));
    }
    let partitions = match c.structure.recover_partitions(x, g) {
        Ok(p) => p,
        Err(e) => return CheckOutcome::fail(format!("the structure is not a blowup structure: {e}")),
    };
    if let Some(p) = partitions.iter().find(|p| p.validate(g, false).is_err()) {
        return CheckOutcome::fail(format!("the structure recovers the singleton {}", p.display(g)));
    }
    if c.assignment.len() != c.targets.len() || c.witnesses.len() != c.targets.len() {
        return CheckOutcome::fail("one assignment and one witness per target are required".into());
    }
    for (t, f) in c.targets.iter().zip(&c.assignment) {
        if f.vertex_map.len() != x.num_vertices || f.edge_map.len() != x.edges.len() || !f.is_isomorphism(x, x) {
            return CheckOutcome::fail(format!("the map assigned to `{}` is not an automorphism", t.name));
        }
    }
    let id = CubicalMap::identity(x);
    for r in &c.relations {
        let m = r.evaluate(&c.assignment, id.clone(), |f| f.inverse(), |a, b| a.compose(b));
        if !m.is_identity() {
            return CheckOutcome::fail(format!("relation `{}` fails", r.text));
        }
    }
    for ((t, f), u) in c.targets.iter().zip(&c.assignment).zip(&c.witnesses) {
        let a = match corrected_action(g, x, &c.structure, &c.marking, f) {
            Ok(a) => a,
            Err(e) => return CheckOutcome::fail(format!("cannot read the action of `{}`: {e}", t.name)),
        };
        let expected = RaagAutomorphism::compose(g, &RaagAutomorphism::inner(g, u), &t.automorphism);
        if a.images() != expected.images() {
            return CheckOutcome::fail(format!("witness fails for `{}`", t.name));
        }
    }
    CheckOutcome { valid: true, reason: None }
}

/// Outcome of a search.
#[derive(Clone, Debug)]
pub enum RealizeOutcome {
    Found(Box<RealizationCertificate>),
    /// Nothing within budget; not a proof that no realization exists.
    NotFound { reason: String },
}

/// Structures to try on a complex: the blowup's own first, then every
/// labeling of every treelike set.
fn structures_for(b: &BlowupComplex, limit: usize) -> Result<Vec<Structure>> {
    let x = b.complex();
    let g = b.graph();
    let own = Structure::from_blowup(b)?;
    let mut out = vec![own.clone()];
    for t in treelike_sets(x, g, limit)? {
        for s in Structure::labelings(x, g, &t, limit)? {
            if s != own {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Candidate complexes in search order: catalog types, then each type
/// with one hyperplane duplicated.
fn candidates(g: &SimplicialGraph, budget: &SearchBudget) -> Result<Vec<BlowupComplex>> {
    let cat = enumerate_complex_types(g, budget.max_entries, budget.automorphism_limit)?;
    let mut out: Vec<BlowupComplex> = cat.types.iter().map(|t| t.blowup.clone()).collect();
    if budget.subdivide {
        for t in &cat.types {
            for label in t.blowup.hyperplane_labels() {
                out.push(t.blowup.duplicate_hyperplane(label)?);
            }
        }
    }
    Ok(out)
}

/// Assigns one candidate per target so that every relation holds as a
/// cubical map.
fn choose_assignment(
    x: &CubeComplex,
    relations: &[Relation],
    options: &[Vec<(usize, Word)>],
    auts: &[CubicalMap],
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == options.len() {
        let gens: Vec<CubicalMap> = chosen.iter().enumerate().map(|(t, &k)| auts[options[t][k].0].clone()).collect();
        let id = CubicalMap::identity(x);
        return relations.iter().all(|r| r.evaluate(&gens, id.clone(), |f| f.inverse(), |a, b| a.compose(b)).is_identity());
    }
    for k in 0..options[chosen.len()].len() {
        chosen.push(k);
        if choose_assignment(x, relations, options, auts, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Searches for a certificate; the first success in search order wins.
pub fn realize(p: &RealizationProblem) -> Result<RealizeOutcome> {
    p.validate()?;
    let g = &p.graph;
    let radius = p.radius();
    let start = Instant::now();
    let deadline = p.budget.time_limit_secs.map(Duration::from_secs);
    let out_of_time = || deadline.is_some_and(|d| start.elapsed() > d);
    for b in candidates(g, &p.budget)? {
        let x = b.complex();
        let auts = match automorphisms(x, &EdgeColoring::uniform(x), p.budget.automorphism_limit) {
            Ok(a) => a,
            Err(Error::Budget(_)) => continue,
            Err(e) => return Err(e),
        };
        let structures = match structures_for(&b, p.budget.structure_limit) {
            Ok(s) => s,
            Err(Error::Budget(_)) => vec![Structure::from_blowup(&b)?],
            Err(e) => return Err(e),
        };
        for s in structures {
            if out_of_time() {
                return Ok(RealizeOutcome::NotFound { reason: "time limit reached".into() });
            }
            let induced = auts.iter().map(|f| s.induced_automorphism(x, g, f)).collect::<Result<Vec<_>>>()?;
            let options: Vec<Vec<(usize, Word)>> = p
                .targets
                .iter()
                .map(|t| {
                    induced
                        .iter()
                        .enumerate()
                        .filter_map(|(i, a)| outer_equal_bounded(g, a, &t.automorphism, radius).map(|w| (i, w.conjugator)))
                        .collect()
                })
                .collect();
            if options.iter().any(Vec::is_empty) {
                continue;
            }
            let mut chosen = Vec::new();
            if choose_assignment(x, &p.relations, &options, &auts, &mut chosen) {
                let cert = RealizationCertificate {
                    graph: g.clone(),
                    complex: x.clone(),
                    structure: s,
                    marking: RaagAutomorphism::identity(g),
                    targets: p.targets.clone(),
                    relations: p.relations.clone(),
                    assignment: chosen.iter().enumerate().map(|(t, &k)| auts[options[t][k].0].clone()).collect(),
                    witnesses: chosen.iter().enumerate().map(|(t, &k)| options[t][k].1.clone()).collect(),
                    radius,
                };
                return Ok(RealizeOutcome::Found(Box::new(cert)));
            }
        }
    }
    Ok(RealizeOutcome::NotFound { reason: "no candidate complex carries a matching action".into() })
}

/// Collapses hyperplane orbits of the certified action that lie in a
/// treelike set until the action is reduced, carrying the structure,
/// marking, maps and witnesses along.
pub fn reduce_certificate(c: &RealizationCertificate, limit: usize) -> Result<RealizationCertificate> {
    let g = &c.graph;
    let mut cur = c.clone();
    loop {
        let gens = cur.targets.iter().zip(&cur.assignment).map(|(t, f)| (t.name.clone(), f.clone())).collect();
        let action = ActionOnComplex::new(cur.complex.clone(), gens, limit)?;
        let Some(orbit) = action.unreduced_orbit(g, limit)? else {
            return Ok(cur);
        };
        let x = &cur.complex;
        let tree = treelike_sets(x, g, limit)?
            .into_iter()
            .find(|t| orbit.iter().all(|h| t.contains(h)))
            .ok_or_else(|| Error::Internal("the unreduced orbit lies in no treelike set".into()))?;
        // Keep the current structure when its tree already contains the
        // orbit; otherwise switch and absorb the change into the marking.
        let (s2, psi) = if orbit.iter().all(|h| cur.structure.tree.contains(h)) {
            (cur.structure.clone(), cur.marking.clone())
        } else {
            let s2 = Structure::from_treelike(x, g, &tree)?;
            let chi = cur.structure.marking_change(&s2, x, g)?;
            (s2.clone(), RaagAutomorphism::compose(g, &cur.marking, &chi.inverse()))
        };
        let hp = x.hyperplanes()?;
        let edges: Vec<usize> = orbit.iter().map(|&h| hp.members[h][0]).collect();
        let col = x.collapse(&edges)?;
        let structure = s2.push_through(x, &col)?;
        let assignment = cur.assignment.iter().map(|f| transport_map(f, &col)).collect::<Result<Vec<_>>>()?;
        let mut witnesses = Vec::new();
        for (t, f) in cur.targets.iter().zip(&assignment) {
            let a = corrected_action(g, &col.complex, &structure, &psi, f)?;
            let w = outer_equal_bounded(g, &a, &t.automorphism, cur.radius.max(1) * 2)
                .ok_or_else(|| Error::Internal(format!("reduction lost the match for `{}`", t.name)))?;
            witnesses.push(w.conjugator);
        }
        let radius = cur.radius.max(witnesses.iter().map(Word::len).max().unwrap_or(0));
        cur = RealizationCertificate {
            graph: g.clone(),
            complex: col.complex,
            structure,
            marking: psi,
            targets: cur.targets.clone(),
            relations: cur.relations.clone(),
            assignment,
            witnesses,
            radius,
        };
    }
}

/// A subgroup of one type's automorphism group and its image in `Out`.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub type_index: usize,
    /// Indices into the type's automorphism list; the identity is 0.
    pub elements: Vec<usize>,
    /// One automorphism per distinct outer class of the image.
    pub outer_image: Vec<RaagAutomorphism>,
}

/// Every subgroup of a finite group given by a multiplication table, as
/// sorted element lists. Element 0 must be the identity.
pub fn all_subgroups(table: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = table.len();
    let close = |gens: &BTreeSet<usize>| -> BTreeSet<usize> {
        let mut s: BTreeSet<usize> = gens.clone();
        s.insert(0);
        loop {
            let add: Vec<usize> = s.iter().flat_map(|&a| s.iter().map(move |&b| table[a][b])).filter(|c| !s.contains(c)).collect();
            if add.is_empty() {
                return s;
            }
            s.extend(add);
        }
    };
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut frontier = vec![close(&BTreeSet::new())];
    seen.insert(frontier[0].clone());
    while let Some(h) = frontier.pop() {
        for x in 0..n {
            if h.contains(&x) {
                continue;
            }
            let mut gens = h.clone();
            gens.insert(x);
            let k = close(&gens);
            if seen.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().map(|s| s.into_iter().collect()).collect();
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    out
}

fn multiplication_table(auts: &[CubicalMap]) -> Result<Vec<Vec<usize>>> {
    let index: BTreeMap<(&[usize], &[(usize, bool)]), usize> =
        auts.iter().enumerate().map(|(i, f)| ((f.vertex_map.as_slice(), f.edge_map.as_slice()), i)).collect();
    auts.iter()
        .map(|a| {
            auts.iter()
                .map(|b| {
                    let c = a.compose(b);
                    index
                        .get(&(c.vertex_map.as_slice(), c.edge_map.as_slice()))
                        .copied()
                        .ok_or_else(|| Error::Internal("automorphisms are not closed under composition".into()))
                })
                .collect()
        })
        .collect()
}

/// Distinct outer classes among `autos`, compared with bounded witnesses.
fn outer_classes(g: &SimplicialGraph, autos: &[RaagAutomorphism], radius: usize) -> Vec<RaagAutomorphism> {
    let mut reps: Vec<RaagAutomorphism> = Vec::new();
    for a in autos {
        if !reps.iter().any(|r| outer_equal_bounded(g, a, r, radius).is_some()) {
            reps.push(a.clone());
        }
    }
    reps
}

fn same_outer_set(g: &SimplicialGraph, a: &[RaagAutomorphism], b: &[RaagAutomorphism], radius: usize) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| outer_equal_bounded(g, x, y, radius).is_some()))
}

/// Subgroups of every catalog type's automorphism group with their images
/// in `Out`, keeping one per distinct image. Images are compared as sets of
/// outer classes, which is finer than conjugacy.
pub fn enumerate_finite_subgroup_classes(g: &SimplicialGraph, max_entries: usize, radius: usize, limit: usize) -> Result<(TypeCatalog, Vec<SubgroupClass>)> {
    let cat = enumerate_complex_types(g, max_entries, limit)?;
    let mut out: Vec<SubgroupClass> = Vec::new();
    for (ti, t) in cat.types.iter().enumerate() {
        let x = t.blowup.complex();
        let auts = automorphisms(x, &EdgeColoring::uniform(x), limit)?;
        let s = Structure::from_blowup(&t.blowup)?;
        let induced = auts.iter().map(|f| s.induced_automorphism(x, g, f)).collect::<Result<Vec<_>>>()?;
        let table = multiplication_table(&auts)?;
        for h in all_subgroups(&table) {
            let img: Vec<RaagAutomorphism> = h.iter().map(|&i| induced[i].clone()).collect();
            let outer_image = outer_classes(g, &img, radius);
            if out.iter().any(|o| same_outer_set(g, &o.outer_image, &outer_image, radius)) {
                continue;
            }
            out.push(SubgroupClass { type_index: ti, elements: h, outer_image });
        }
    }
    Ok((cat, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::partition::enumerate_compatible_collections;
    use crate::restriction::invariant_cells;
    use crate::invariance::u0_invariant_subgraphs;

    fn f2_target(g: &SimplicialGraph, x: &str, y: &str) -> Target {
        let mut m = BTreeMap::new();
        m.insert("x".to_string(), x.to_string());
        m.insert("y".to_string(), y.to_string());
        Target { name: "s".into(), automorphism: RaagAutomorphism::from_json_map(g, &m, None).unwrap(), expression: None }
    }

    fn f2() -> SimplicialGraph {
        SimplicialGraph::discrete(&["x", "y"]).unwrap()
    }

    fn solve(x: &str, y: &str) -> RealizationCertificate {
        let g = f2();
        let p = RealizationProblem::new(g.clone(), vec![f2_target(&g, x, y)], &["s^2"], SearchBudget::default()).unwrap();
        match realize(&p).unwrap() {
            RealizeOutcome::Found(c) => *c,
            RealizeOutcome::NotFound { reason } => panic!("{reason}"),
        }
    }

    #[test]
    fn f2_catalog() {
        let g = f2();
        let cat = enumerate_complex_types(&g, 2, 1000).unwrap();
        assert!(cat.complete);
        let mut orders: Vec<usize> = cat.types.iter().map(|t| t.automorphism_order).collect();
        orders.sort();
        assert_eq!(orders, vec![8, 12]);
        let k3 = enumerate_complex_types(&complete(3), 3, 1000).unwrap();
        assert_eq!(k3.types.len(), 1);
    }

    /// Every compatible collection's blowup is isomorphic to exactly one
    /// catalog entry.
    #[test]
    fn catalog_matches_brute_force() {
        let g = SimplicialGraph::new(&["a", "b", "z"], &[("a", "b")]).unwrap();
        let all = all_partitions(&g).unwrap();
        let cat = enumerate_complex_types(&g, all.len(), 10_000).unwrap();
        assert!(cat.complete);
        for pi in enumerate_compatible_collections(&g, all.len()).unwrap() {
            let b = BlowupComplex::build(&g, &pi).unwrap();
            let hits = cat.types.iter().filter(|t| isomorphic_unlabeled(t.blowup.complex(), b.complex()).is_some()).count();
            assert_eq!(hits, 1);
        }
    }

    #[test]
    fn rose_realizes_inversion_and_swap() {
        for (x, y) in [("x^-1", "y^-1"), ("y", "x")] {
            let c = solve(x, y);
            assert_eq!(c.complex.num_vertices, 1);
            assert_eq!(check_certificate(&c), CheckOutcome { valid: true, reason: None });
        }
    }

    #[test]
    fn theta_realizes_the_order_two_class() {
        let c = solve("x y", "y^-1");
        assert_eq!((c.complex.num_vertices, c.complex.edges.len()), (2, 3));
        assert!(check_certificate(&c).valid);
        let j = serde_json::to_string(&c.to_json().unwrap()).unwrap();
        let back = RealizationCertificate::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn tampering_is_detected() {
        let g = f2();
        let c = solve("x^-1", "y^-1");
        let mut bad = c.clone();
        bad.witnesses[0] = Word::parse(&g, "x").unwrap();
        let out = check_certificate(&bad);
        assert!(!out.valid);
        assert!(out.reason.unwrap().contains("witness fails"));
        // A half-turn swap squares to the identity; a quarter turn does not.
        let rose = c.complex.clone();
        let quarter = CubicalMap { vertex_map: vec![0], edge_map: vec![(1, false), (0, true)] };
        assert!(quarter.is_isomorphism(&rose, &rose));
        let mut bad = c.clone();
        bad.assignment[0] = quarter;
        let out = check_certificate(&bad);
        assert_eq!(out.reason.unwrap(), "relation `s^2` fails");
    }

    #[test]
    fn reduction_keeps_certificates_valid() {
        // Theta with the trivial group is not reduced; the certificate for
        // the identity reduces to the rose.
        let g = f2();
        let t = Target { name: "e".into(), automorphism: RaagAutomorphism::identity(&g), expression: None };
        let p = RealizationProblem::new(g.clone(), vec![t], &["e"], SearchBudget::default()).unwrap();
        let RealizeOutcome::Found(c) = realize(&p).unwrap() else { panic!() };
        let theta = enumerate_complex_types(&g, 1, 100).unwrap().types.into_iter().find(|t| t.automorphism_order == 12).unwrap();
        let x = theta.blowup.complex().clone();
        let mut on_theta = (*c).clone();
        on_theta.structure = Structure::from_blowup(&theta.blowup).unwrap();
        on_theta.complex = x.clone();
        on_theta.assignment = vec![CubicalMap::identity(&x)];
        assert!(check_certificate(&on_theta).valid);
        let r = reduce_certificate(&on_theta, 10_000).unwrap();
        assert_eq!(r.complex.num_vertices, 1);
        assert!(check_certificate(&r).valid);
        for (a, b) in [("x^-1", "y^-1"), ("y", "x"), ("x y", "y^-1")] {
            let c = solve(a, b);
            let r = reduce_certificate(&c, 10_000).unwrap();
            assert!(check_certificate(&r).valid, "{a} {b}");
        }
    }

    /// Marking changes conjugate induced automorphisms: switching the theta
    /// structure to one whose tree is another edge keeps the realization
    /// once the change is absorbed into the marking.
    #[test]
    fn marking_absorbs_structure_changes() {
        let c = solve("x y", "y^-1");
        let g = &c.graph;
        for t in treelike_sets(&c.complex, g, 100).unwrap() {
            let s2 = Structure::from_treelike(&c.complex, g, &t).unwrap();
            let chi = c.structure.marking_change(&s2, &c.complex, g).unwrap();
            let psi = RaagAutomorphism::compose(g, &c.marking, &chi.inverse());
            let a = corrected_action(g, &c.complex, &s2, &psi, &c.assignment[0]).unwrap();
            assert!(outer_equal_bounded(g, &a, &c.targets[0].automorphism, 8).is_some());
        }
    }

    #[test]
    fn invariant_subcomplexes_are_preserved() {
        for (a, b) in [("x^-1", "y^-1"), ("y", "x"), ("x y", "y^-1")] {
            let c = solve(a, b);
            let g = &c.graph;
            for d in u0_invariant_subgraphs(g, 64).unwrap() {
                if d.is_empty() || !g.link_of_set(d).unwrap().is_empty() {
                    continue;
                }
                let (vs, es) = invariant_cells(&c.complex, g, &c.structure, d).unwrap();
                for f in &c.assignment {
                    let img: BTreeSet<usize> = vs.iter().map(|&v| f.vertex_map[v]).collect();
                    assert_eq!(img, vs.iter().copied().collect());
                    let img: BTreeSet<usize> = es.iter().map(|&e| f.edge_map[e].0).collect();
                    assert_eq!(img, es.iter().copied().collect());
                }
            }
        }
    }

    /// Brute force: subsets of the group closed under multiplication.
    fn brute_subgroup_count(table: &[Vec<usize>]) -> usize {
        let n = table.len();
        (0u32..1 << n)
            .filter(|&m| m & 1 == 1 && (0..n).all(|a| m >> a & 1 == 0 || (0..n).all(|b| m >> b & 1 == 0 || m >> table[a][b] & 1 == 1)))
            .count()
    }

    #[test]
    fn torus_subgroups() {
        let g = complete(2);
        let x = BlowupComplex::salvetti(&g);
        let auts = automorphisms(x.complex(), &EdgeColoring::uniform(x.complex()), 100).unwrap();
        assert_eq!(auts.len(), 8);
        let table = multiplication_table(&auts).unwrap();
        assert_eq!(all_subgroups(&table).len(), brute_subgroup_count(&table));
        let (_, classes) = enumerate_finite_subgroup_classes(&g, 2, 4, 1000).unwrap();
        assert_eq!(classes.len(), brute_subgroup_count(&table));
        assert_eq!(classes[0].elements, vec![0]);
    }

    #[test]
    fn f2_subgroups_embed_in_full_images() {
        let g = f2();
        let (cat, classes) = enumerate_finite_subgroup_classes(&g, 2, 4, 1000).unwrap();
        for t in &cat.types {
            let x = t.blowup.complex();
            let auts = automorphisms(x, &EdgeColoring::uniform(x), 100).unwrap();
            let table = multiplication_table(&auts).unwrap();
            assert_eq!(all_subgroups(&table).len(), brute_subgroup_count(&table));
        }
        let full: Vec<Vec<RaagAutomorphism>> = classes
            .iter()
            .filter(|c| c.elements.len() == cat.types[c.type_index].automorphism_order)
            .map(|c| c.outer_image.clone())
            .collect();
        assert_eq!(classes.iter().filter(|c| c.elements.len() == 1).count(), 1);
        assert_eq!(full.len(), 2);
        assert_eq!(full.iter().map(Vec::len).collect::<BTreeSet<_>>(), BTreeSet::from([8, 12]));
        for c in &classes {
            assert!(full.iter().any(|f| c.outer_image.iter().all(|a| f.iter().any(|b| outer_equal_bounded(&g, a, b, 4).is_some()))));
        }
    }

    #[test]
    fn relations_are_checked_up_to_inner() {
        let g = f2();
        let t = f2_target(&g, "y", "x");
        assert!(RealizationProblem::new(g.clone(), vec![t.clone()], &["s^2"], SearchBudget::default()).is_ok());
        assert!(RealizationProblem::new(g.clone(), vec![t.clone()], &["s"], SearchBudget::default()).is_err());
        assert!(RealizationProblem::new(g, vec![t], &["q^2"], SearchBudget::default()).is_err());
    }
}
