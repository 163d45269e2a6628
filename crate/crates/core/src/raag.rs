//! Words and automorphisms of the right-angled Artin group `A_Γ`.
//!
//! Words are sequences of signed generators. [`normalize`] brings a word to
//! a reduced, canonical representative: cancellations are found across
//! commuting letters, and then letters are extracted greedily, each time
//! taking the least letter (vertex order, `v` before `v^-1`) that commutes
//! with everything before it.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{SignedSet, SignedVertex, SimplicialGraph, VertexSet};

/// A word in the generators and their inverses.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word(pub Vec<SignedVertex>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(x: SignedVertex) -> Self {
        Word(vec![x])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[SignedVertex] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|x| x.inv()).collect())
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    /// Parses space-separated letters such as `a b^-1`. The empty string and
    /// `1` denote the identity. `a^n` with an integer exponent is expanded.
    pub fn parse(g: &SimplicialGraph, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => {
                    let e: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                    (b, e)
                }
                None => (tok, 1),
            };
            let v = g.index_of(base)?;
            let x = SignedVertex::new(v, if exp < 0 { -1 } else { 1 });
            for _ in 0..exp.unsigned_abs() {
                out.push(x);
            }
        }
        Ok(Word(out))
    }

    pub fn display(&self, g: &SimplicialGraph) -> String {
        self.0.iter().map(|&x| g.signed_name(x)).collect::<Vec<_>>().join(" ")
    }

    /// Exponent sum of every generator.
    pub fn exponent_sums(&self, n: usize) -> Vec<i64> {
        let mut out = vec![0; n];
        for x in &self.0 {
            out[x.vertex] += x.sign() as i64;
        }
        out
    }

    pub fn support(&self) -> VertexSet {
        VertexSet::from_iter(self.0.iter().map(|x| x.vertex))
    }
}

fn letters_commute(g: &SimplicialGraph, a: SignedVertex, b: SignedVertex) -> bool {
    if a.vertex == b.vertex {
        a == b
    } else {
        g.adjacent(a.vertex, b.vertex)
    }
}

fn check_word(g: &SimplicialGraph, w: &Word) -> Result<()> {
    match w.0.iter().find(|x| x.vertex >= g.len()) {
        Some(x) => Err(Error::VertexIndex(x.vertex)),
        None => Ok(()),
    }
}

/// Appends `x` to the reduced word `w`, cancelling it against an inverse
/// letter reachable across commuting letters.
fn push_reduced(g: &SimplicialGraph, w: &mut Vec<SignedVertex>, x: SignedVertex) {
    let mut j = w.len();
    while j > 0 {
        let y = w[j - 1];
        if y == x.inv() {
            w.remove(j - 1);
            return;
        }
        if y.vertex == x.vertex || !g.adjacent(y.vertex, x.vertex) {
            break;
        }
        j -= 1;
    }
    w.push(x);
}

fn canonical_order(g: &SimplicialGraph, mut w: Vec<SignedVertex>) -> Vec<SignedVertex> {
    let mut out = Vec::with_capacity(w.len());
    while !w.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..w.len() {
            if best.is_some_and(|b| w[b].index() <= w[i].index()) {
                continue;
            }
            if (0..i).all(|j| letters_commute(g, w[j], w[i])) {
                best = Some(i);
            }
        }
        out.push(w.remove(best.expect("first letter is always movable")));
    }
    out
}

fn normalize_unchecked(g: &SimplicialGraph, w: &[SignedVertex]) -> Word {
    let mut r = Vec::with_capacity(w.len());
    for &x in w {
        push_reduced(g, &mut r, x);
    }
    Word(canonical_order(g, r))
}

/// The canonical reduced representative of `w`.
pub fn normalize(g: &SimplicialGraph, w: &Word) -> Result<Word> {
    check_word(g, w)?;
    Ok(normalize_unchecked(g, &w.0))
}

/// Equality in `A_Γ`.
pub fn equal(g: &SimplicialGraph, a: &Word, b: &Word) -> Result<bool> {
    Ok(normalize(g, a)? == normalize(g, b)?)
}

/// Normal form of the product `a·b`.
pub fn multiply(g: &SimplicialGraph, a: &Word, b: &Word) -> Word {
    normalize_unchecked(g, &a.concat(b).0)
}

/// Normal form of `u w u^-1`.
pub fn conjugate(g: &SimplicialGraph, u: &Word, w: &Word) -> Word {
    normalize_unchecked(g, &u.concat(w).concat(&u.inverse()).0)
}

/// Certifies that an automorphism equals conjugation by `conjugator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterWitness {
    pub conjugator: Word,
}

/// An automorphism of `A_Γ`, stored with its inverse. Images are kept in
/// normal form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RaagAutomorphism {
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

fn substitute(g: &SimplicialGraph, images: &[Word], w: &Word) -> Word {
    let mut r = Vec::new();
    for x in &w.0 {
        let img = &images[x.vertex];
        if x.inverse {
            for y in img.0.iter().rev() {
                push_reduced(g, &mut r, y.inv());
            }
        } else {
            for &y in &img.0 {
                push_reduced(g, &mut r, y);
            }
        }
    }
    Word(canonical_order(g, r))
}

fn is_endomorphism(g: &SimplicialGraph, images: &[Word]) -> bool {
    g.edge_list().into_iter().all(|(a, b)| {
        let ab = images[a].concat(&images[b]);
        let ba = images[b].concat(&images[a]);
        normalize_unchecked(g, &ab.0) == normalize_unchecked(g, &ba.0)
    })
}

impl RaagAutomorphism {
    pub fn identity(g: &SimplicialGraph) -> Self {
        let images: Vec<Word> = (0..g.len()).map(|v| Word::letter(SignedVertex::pos(v))).collect();
        RaagAutomorphism { inverse_images: images.clone(), images }
    }

    /// Builds an automorphism from generator images and a claimed inverse;
    /// both compositions must normalize to the identity.
    pub fn new(g: &SimplicialGraph, images: Vec<Word>, inverse_images: Vec<Word>) -> Result<Self> {
        let n = g.len();
        if images.len() != n || inverse_images.len() != n {
            return Err(Error::NotInvertible("wrong number of generator images".into()));
        }
        for w in images.iter().chain(&inverse_images) {
            check_word(g, w)?;
        }
        let images: Vec<Word> = images.iter().map(|w| normalize_unchecked(g, &w.0)).collect();
        let inverse_images: Vec<Word> = inverse_images.iter().map(|w| normalize_unchecked(g, &w.0)).collect();
        if !is_endomorphism(g, &images) || !is_endomorphism(g, &inverse_images) {
            return Err(Error::NotAutomorphism("images of adjacent generators do not commute".into()));
        }
        for v in 0..n {
            let id = Word::letter(SignedVertex::pos(v));
            if substitute(g, &images, &inverse_images[v]) != id || substitute(g, &inverse_images, &images[v]) != id {
                return Err(Error::NotInvertible(format!("supplied inverse fails on `{}`", g.name(v))));
            }
        }
        Ok(RaagAutomorphism { images, inverse_images })
    }

    /// Builds an automorphism from images alone. The inverse is found when
    /// some power `a^k` with `k <= max_order` is inner by a conjugator of
    /// length at most `radius`: then `a^-1 = a^(k-1) ∘ inner(u^-1)`.
    pub fn from_images(g: &SimplicialGraph, images: Vec<Word>, max_order: usize, radius: usize) -> Result<Self> {
        let n = g.len();
        if images.len() != n {
            return Err(Error::NotInvertible("wrong number of generator images".into()));
        }
        for w in &images {
            check_word(g, w)?;
        }
        let images: Vec<Word> = images.iter().map(|w| normalize_unchecked(g, &w.0)).collect();
        if !is_endomorphism(g, &images) {
            return Err(Error::NotAutomorphism("images of adjacent generators do not commute".into()));
        }
        // Powers computed as raw image lists, composed without inverses.
        let mut power = images.clone();
        let mut prev = RaagAutomorphism::identity(g).images;
        for _ in 1..=max_order {
            if let Some(u) = inner_conjugator(g, &power, radius) {
                let uinv = u.inverse();
                let inverse_images: Vec<Word> = (0..n)
                    .map(|v| {
                        let c = conjugate(g, &uinv, &Word::letter(SignedVertex::pos(v)));
                        substitute(g, &prev, &c)
                    })
                    .collect();
                return RaagAutomorphism::new(g, images, inverse_images);
            }
            prev = power.clone();
            power = (0..n).map(|v| substitute(g, &images, &prev[v])).collect();
        }
        Err(Error::NotInvertible(format!(
            "no power up to {max_order} is inner within radius {radius}; supply an inverse"
        )))
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, v: usize) -> &Word {
        &self.images[v]
    }

    pub fn inverse(&self) -> RaagAutomorphism {
        RaagAutomorphism { images: self.inverse_images.clone(), inverse_images: self.images.clone() }
    }

    /// Applies the automorphism to a word and normalizes.
    pub fn apply(&self, g: &SimplicialGraph, w: &Word) -> Word {
        substitute(g, &self.images, w)
    }

    /// `a ∘ b`: applies `b` first.
    pub fn compose(g: &SimplicialGraph, a: &RaagAutomorphism, b: &RaagAutomorphism) -> RaagAutomorphism {
        let images = b.images.iter().map(|w| a.apply(g, w)).collect();
        let inverse_images = a.inverse_images.iter().map(|w| substitute(g, &b.inverse_images, w)).collect();
        RaagAutomorphism { images, inverse_images }
    }

    pub fn power(g: &SimplicialGraph, a: &RaagAutomorphism, k: i64) -> RaagAutomorphism {
        let base = if k < 0 { a.inverse() } else { a.clone() };
        let mut out = RaagAutomorphism::identity(g);
        for _ in 0..k.unsigned_abs() {
            out = RaagAutomorphism::compose(g, &base, &out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(v, w)| w.0.len() == 1 && w.0[0] == SignedVertex::pos(v))
    }

    /// `w ↦ u w u^-1`.
    pub fn inner(g: &SimplicialGraph, u: &Word) -> RaagAutomorphism {
        let u = normalize_unchecked(g, &u.0);
        let uinv = u.inverse();
        let images = (0..g.len()).map(|v| conjugate(g, &u, &Word::letter(SignedVertex::pos(v)))).collect();
        let inverse_images = (0..g.len()).map(|v| conjugate(g, &uinv, &Word::letter(SignedVertex::pos(v)))).collect();
        RaagAutomorphism { images, inverse_images }
    }

    pub fn inversion(g: &SimplicialGraph, v: usize) -> Result<RaagAutomorphism> {
        if v >= g.len() {
            return Err(Error::VertexIndex(v));
        }
        let mut images = RaagAutomorphism::identity(g).images;
        images[v] = Word::letter(SignedVertex::neg(v));
        Ok(RaagAutomorphism { inverse_images: images.clone(), images })
    }

    /// Permutes and inverts generators: `v ↦ perm[v]`.
    pub fn signed_permutation(g: &SimplicialGraph, perm: &[SignedVertex]) -> Result<RaagAutomorphism> {
        let images = perm.iter().map(|&x| Word::letter(x)).collect();
        let mut inverse = vec![Word::empty(); g.len()];
        for (v, x) in perm.iter().enumerate() {
            if x.vertex >= g.len() || !inverse[x.vertex].is_empty() {
                return Err(Error::NotInvertible("not a signed permutation".into()));
            }
            inverse[x.vertex] = Word::letter(SignedVertex::new(v, x.sign()));
        }
        RaagAutomorphism::new(g, images, inverse)
    }

    /// The Whitehead automorphism for the side `side` containing the base
    /// letter `x` (and not `x^-1`). Callers are responsible for `side`
    /// coming from a valid partition; invertibility is checked here.
    pub fn whitehead(g: &SimplicialGraph, side: SignedSet, x: SignedVertex) -> Result<RaagAutomorphism> {
        if !side.contains(x) || side.contains(x.inv()) {
            return Err(Error::Precondition("base letter must be split by the side".into()));
        }
        let build = |x: SignedVertex| -> Vec<Word> {
            (0..g.len())
                .map(|v| {
                    let y = SignedVertex::pos(v);
                    let xw = Word::letter(x);
                    let xi = Word::letter(x.inv());
                    let yw = Word::letter(y);
                    if v == x.vertex {
                        return yw;
                    }
                    match (side.contains(y), side.contains(y.inv())) {
                        (true, false) => yw.concat(&xi),
                        (false, true) => xw.concat(&yw),
                        (true, true) => xw.concat(&yw).concat(&xi),
                        (false, false) => yw,
                    }
                })
                .collect()
        };
        RaagAutomorphism::new(g, build(x), build(x.inv()))
    }

    /// Fold moving `x` by the signed letter `y`: `Right` gives `x ↦ x y^-1`,
    /// `Left` gives `x ↦ y x`. Requires `lk(x) ⊆ lk(y)`.
    pub fn fold(g: &SimplicialGraph, x: usize, y: SignedVertex, kind: FoldKind) -> Result<RaagAutomorphism> {
        if x >= g.len() || y.vertex >= g.len() {
            return Err(Error::VertexIndex(x.max(y.vertex)));
        }
        if x == y.vertex {
            return Err(Error::Precondition("fold needs two distinct generators".into()));
        }
        if !g.lk(x).is_subset(g.lk(y.vertex)) {
            return Err(Error::Precondition(format!(
                "lk({}) is not contained in lk({})",
                g.name(x),
                g.name(y.vertex)
            )));
        }
        let xw = Word::letter(SignedVertex::pos(x));
        let (img, inv) = match kind {
            FoldKind::Right => (xw.concat(&Word::letter(y.inv())), xw.concat(&Word::letter(y))),
            FoldKind::Left => (Word::letter(y).concat(&xw), Word::letter(y.inv()).concat(&xw)),
        };
        let mut images = RaagAutomorphism::identity(g).images;
        let mut inverse = images.clone();
        images[x] = img;
        inverse[x] = inv;
        RaagAutomorphism::new(g, images, inverse)
    }

    /// Conjugates every generator of `c` by `x`. `c` must be a union of
    /// components of `Γ ∖ st(x)`.
    pub fn partial_conjugation(g: &SimplicialGraph, x: SignedVertex, c: VertexSet) -> Result<RaagAutomorphism> {
        if x.vertex >= g.len() {
            return Err(Error::VertexIndex(x.vertex));
        }
        let rest = g.vertices().difference(g.st(x.vertex));
        if !c.is_subset(rest) {
            return Err(Error::Precondition(format!("conjugated set meets st({})", g.name(x.vertex))));
        }
        for comp in g.components(rest)? {
            if !comp.intersection(c).is_empty() && !comp.is_subset(c) {
                return Err(Error::Precondition(format!(
                    "conjugated set is not a union of components of the complement of st({})",
                    g.name(x.vertex)
                )));
            }
        }
        let xw = Word::letter(x);
        let xi = Word::letter(x.inv());
        let mut images = RaagAutomorphism::identity(g).images;
        let mut inverse = images.clone();
        for v in c.iter() {
            let y = Word::letter(SignedVertex::pos(v));
            images[v] = xw.concat(&y).concat(&xi);
            inverse[v] = xi.concat(&y).concat(&xw);
        }
        RaagAutomorphism::new(g, images, inverse)
    }

    /// Rows are exponent-sum vectors of the generator images.
    pub fn abelianization(&self, n: usize) -> Vec<Vec<i64>> {
        self.images.iter().map(|w| w.exponent_sums(n)).collect()
    }

    /// Abelianized test for membership of an untwisted automorphism in
    /// `U⁰`: the image of `x` may involve another generator `y` only when
    /// `lk(x) ⊆ lk(y)`.
    pub fn respects_fold_order(&self, g: &SimplicialGraph) -> bool {
        let m = self.abelianization(g.len());
        (0..g.len()).all(|x| (0..g.len()).all(|y| x == y || m[x][y] == 0 || g.lk(x).is_subset(g.lk(y))))
    }

    pub fn to_json_map(&self, g: &SimplicialGraph) -> BTreeMap<String, String> {
        (0..g.len()).map(|v| (g.name(v).to_string(), self.images[v].display(g))).collect()
    }

    /// Parses `{"x": "x y^-1", ...}`; unlisted generators are fixed.
    pub fn from_json_map(
        g: &SimplicialGraph,
        map: &BTreeMap<String, String>,
        inverse: Option<&BTreeMap<String, String>>,
    ) -> Result<Self> {
        let read = |m: &BTreeMap<String, String>| -> Result<Vec<Word>> {
            let mut images = RaagAutomorphism::identity(g).images;
            for (k, w) in m {
                images[g.index_of(k)?] = Word::parse(g, w)?;
            }
            Ok(images)
        };
        let images = read(map)?;
        match inverse {
            Some(m) => RaagAutomorphism::new(g, images, read(m)?),
            None => RaagAutomorphism::from_images(g, images, 12, 4),
        }
    }

    pub fn display(&self, g: &SimplicialGraph) -> String {
        let parts: Vec<String> =
            (0..g.len()).map(|v| format!("{}↦{}", g.name(v), self.images[v].display(g))).collect();
        parts.join(", ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FoldKind {
    Right,
    Left,
}

/// Calls `f` on every normal form of length at most `radius`, by length and
/// then lexicographically. Stops early when `f` returns `true`.
pub fn for_each_normal_form(g: &SimplicialGraph, radius: usize, mut f: impl FnMut(&Word) -> bool) -> bool {
    let letters: Vec<SignedVertex> = (0..2 * g.len()).map(SignedVertex::from_index).collect();
    fn rec(
        g: &SimplicialGraph,
        letters: &[SignedVertex],
        w: &mut Word,
        len: usize,
        f: &mut impl FnMut(&Word) -> bool,
    ) -> bool {
        if w.len() == len {
            return f(w);
        }
        for &x in letters {
            w.0.push(x);
            // Prefixes of canonical words are canonical, so pruning is exact.
            if normalize_unchecked(g, &w.0) == *w && rec(g, letters, w, len, f) {
                return true;
            }
            w.0.pop();
        }
        false
    }
    for len in 0..=radius {
        let mut w = Word::empty();
        if rec(g, &letters, &mut w, len, &mut f) {
            return true;
        }
    }
    false
}

fn inner_conjugator(g: &SimplicialGraph, images: &[Word], radius: usize) -> Option<Word> {
    let mut found = None;
    for_each_normal_form(g, radius, |u| {
        let ok = (0..g.len()).all(|v| conjugate(g, u, &Word::letter(SignedVertex::pos(v))) == images[v]);
        if ok {
            found = Some(u.clone());
        }
        ok
    });
    found
}

/// Looks for `u` of length at most `radius` with `a = inner(u)`. Absence is
/// not a proof that `a` is outer.
pub fn is_inner_bounded(g: &SimplicialGraph, a: &RaagAutomorphism, radius: usize) -> Option<OuterWitness> {
    inner_conjugator(g, &a.images, radius).map(|conjugator| OuterWitness { conjugator })
}

/// Bounded test of `a = inner(u) ∘ b`.
pub fn outer_equal_bounded(
    g: &SimplicialGraph,
    a: &RaagAutomorphism,
    b: &RaagAutomorphism,
    radius: usize,
) -> Option<OuterWitness> {
    is_inner_bounded(g, &RaagAutomorphism::compose(g, a, &b.inverse()), radius)
}

impl fmt::Display for FoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoldKind::Right => write!(f, "right"),
            FoldKind::Left => write!(f, "left"),
        }
    }
}
