//! Hereditarily finite values, finite sets, total functions between them, and
//! the finite limits and dependent exponentials of the base category.
//!
//! Every constructed object tags its elements freshly (`pb`, `fn`), so two
//! constructions agree structurally only when they are literally the same
//! construction. That is what keeps the pullback model honestly non-split.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::report::{Bounds, Report};

/// A canonical hereditarily finite value.
///
/// The derived ordering ranks constructors `Atom < Pair < Tag < Fn` and then
/// compares fields lexicographically, which makes it total and compatible
/// with structural equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Atom(Arc<str>),
    Pair(Arc<(Val, Val)>),
    Tag(Arc<str>, Arc<Val>),
    /// Graph of a finite function, sorted by key with distinct keys.
    Fn(Arc<[(Val, Val)]>),
}

impl Val {
    pub fn atom(name: &str) -> Val {
        Val::Atom(Arc::from(name))
    }

    pub fn pair(left: Val, right: Val) -> Val {
        Val::Pair(Arc::new((left, right)))
    }

    pub fn tag(tag: &str, payload: Val) -> Val {
        Val::Tag(Arc::from(tag), Arc::new(payload))
    }

    /// Builds a function graph, sorting it. Panics on a repeated key.
    pub fn graph(entries: impl IntoIterator<Item = (Val, Val)>) -> Val {
        Val::try_graph(entries).expect("function graph with a repeated key")
    }

    pub fn try_graph(entries: impl IntoIterator<Item = (Val, Val)>) -> Option<Val> {
        let mut entries: Vec<(Val, Val)> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(Val::Fn(entries.into()))
    }

    pub fn as_pair(&self) -> Option<(&Val, &Val)> {
        match self {
            Val::Pair(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    pub fn as_tag(&self) -> Option<(&str, &Val)> {
        match self {
            Val::Tag(t, v) => Some((t, v)),
            _ => None,
        }
    }

    /// Payload of a value tagged exactly `name`.
    pub fn untag(&self, name: &str) -> Option<&Val> {
        match self {
            Val::Tag(t, v) if &**t == name => Some(v),
            _ => None,
        }
    }

    pub fn as_graph(&self) -> Option<&[(Val, Val)]> {
        match self {
            Val::Fn(g) => Some(g),
            _ => None,
        }
    }

    /// Looks a key up in a function graph.
    pub fn lookup(&self, key: &Val) -> Option<&Val> {
        let g = self.as_graph()?;
        g.binary_search_by(|(k, _)| k.cmp(key)).ok().map(|i| &g[i].1)
    }

    /// Nesting depth; atoms have depth one.
    pub fn depth(&self) -> usize {
        match self {
            Val::Atom(_) => 1,
            Val::Pair(p) => 1 + p.0.depth().max(p.1.depth()),
            Val::Tag(_, v) => 1 + v.depth(),
            Val::Fn(g) => 1 + g.iter().map(|(k, v)| k.depth().max(v.depth())).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Atom(a) => write!(f, "{a}"),
            Val::Pair(p) => write!(f, "({}, {})", p.0, p.1),
            Val::Tag(t, v) => write!(f, "{t}[{v}]"),
            Val::Fn(g) => {
                write!(f, "{{")?;
                for (i, (k, v)) in g.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k}: {v}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl fmt::Debug for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Total order on values.
pub fn val_compare(a: &Val, b: &Val) -> std::cmp::Ordering {
    a.cmp(b)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FinError {
    #[error("{what}: expected {expected}, found {found}")]
    Mismatch {
        what: &'static str,
        expected: String,
        found: String,
    },
    #[error("value {0} lies outside the codomain")]
    OutsideCodomain(Val),
    #[error("no image given for {0}")]
    NotTotal(Val),
    #[error("{0} is not in the domain")]
    NotInDomain(Val),
}

/// A finite set of values, sorted and duplicate free.
#[derive(Clone, Eq, PartialOrd, Ord)]
pub struct FinSet {
    elems: Arc<[Val]>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.elems, &other.elems) || self.elems == other.elems
    }
}

impl std::hash::Hash for FinSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elems.hash(state);
    }
}

impl FinSet {
    pub fn new(elems: impl IntoIterator<Item = Val>) -> FinSet {
        let mut v: Vec<Val> = elems.into_iter().collect();
        v.sort();
        v.dedup();
        FinSet { elems: v.into() }
    }

    pub fn empty() -> FinSet {
        FinSet::new([])
    }

    pub fn singleton(v: Val) -> FinSet {
        FinSet::new([v])
    }

    /// The chosen terminal object `{pt}`.
    pub fn terminal() -> FinSet {
        FinSet::singleton(Val::atom("pt"))
    }

    /// `{prefix0, …, prefix(n-1)}` as atoms.
    pub fn atoms(prefix: &str, n: usize) -> FinSet {
        FinSet::new((0..n).map(|i| Val::atom(&format!("{prefix}{i}"))))
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[Val] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Val> {
        self.elems.iter()
    }

    pub fn index_of(&self, v: &Val) -> Option<usize> {
        self.elems.binary_search(v).ok()
    }

    pub fn contains(&self, v: &Val) -> bool {
        self.index_of(v).is_some()
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a> IntoIterator for &'a FinSet {
    type Item = &'a Val;
    type IntoIter = std::slice::Iter<'a, Val>;
    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// A total function between finite sets. `images[i]` is the image of the
/// `i`-th element of `dom`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinFun {
    dom: FinSet,
    cod: FinSet,
    images: Arc<[Val]>,
}

impl FinFun {
    pub fn from_images(dom: FinSet, cod: FinSet, images: Vec<Val>) -> Result<FinFun, FinError> {
        if images.len() != dom.len() {
            return Err(FinError::Mismatch {
                what: "image count",
                expected: dom.len().to_string(),
                found: images.len().to_string(),
            });
        }
        if let Some(bad) = images.iter().find(|v| !cod.contains(v)) {
            return Err(FinError::OutsideCodomain(bad.clone()));
        }
        Ok(FinFun {
            dom,
            cod,
            images: images.into(),
        })
    }

    pub fn new(dom: FinSet, cod: FinSet, f: impl FnMut(&Val) -> Val) -> Result<FinFun, FinError> {
        let images = dom.iter().map(f).collect();
        FinFun::from_images(dom, cod, images)
    }

    /// Builds a function from an association list that must cover `dom`.
    pub fn from_pairs(
        dom: FinSet,
        cod: FinSet,
        pairs: impl IntoIterator<Item = (Val, Val)>,
    ) -> Result<FinFun, FinError> {
        let table: HashMap<Val, Val> = pairs.into_iter().collect();
        let mut images = Vec::with_capacity(dom.len());
        for x in dom.iter() {
            match table.get(x) {
                Some(y) => images.push(y.clone()),
                None => return Err(FinError::NotTotal(x.clone())),
            }
        }
        FinFun::from_images(dom, cod, images)
    }

    pub fn identity(x: &FinSet) -> FinFun {
        FinFun {
            dom: x.clone(),
            cod: x.clone(),
            images: x.elems.clone(),
        }
    }

    /// The unique map into the terminal object.
    pub fn to_terminal(x: &FinSet) -> FinFun {
        let pt = Val::atom("pt");
        FinFun::new(x.clone(), FinSet::terminal(), |_| pt.clone()).unwrap()
    }

    pub fn dom(&self) -> &FinSet {
        &self.dom
    }

    pub fn cod(&self) -> &FinSet {
        &self.cod
    }

    pub fn images(&self) -> &[Val] {
        &self.images
    }

    pub fn get(&self, x: &Val) -> Option<&Val> {
        self.dom.index_of(x).map(|i| &self.images[i])
    }

    /// Applies the function. Panics outside the domain.
    pub fn apply(&self, x: &Val) -> &Val {
        match self.get(x) {
            Some(y) => y,
            None => panic!("{x} is not in the domain {}", self.dom),
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Val, &Val)> {
        self.dom.iter().zip(self.images.iter())
    }

    /// `self ∘ first`.
    pub fn try_after(&self, first: &FinFun) -> Result<FinFun, FinError> {
        if first.cod != self.dom {
            return Err(FinError::Mismatch {
                what: "composition",
                expected: self.dom.to_string(),
                found: first.cod.to_string(),
            });
        }
        let images = first.images.iter().map(|y| self.apply(y).clone()).collect();
        FinFun::from_images(first.dom.clone(), self.cod.clone(), images)
    }

    /// `self ∘ first`; panics when the functions do not compose.
    pub fn after(&self, first: &FinFun) -> FinFun {
        self.try_after(first).expect("composable maps")
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.dom.iter().zip(self.images.iter()).all(|(x, y)| x == y)
    }

    pub fn is_injective(&self) -> bool {
        let distinct: BTreeSet<&Val> = self.images.iter().collect();
        distinct.len() == self.images.len()
    }

    pub fn is_surjective(&self) -> bool {
        let hit: BTreeSet<&Val> = self.images.iter().collect();
        hit.len() == self.cod.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// The preimage of `y`, in domain order.
    pub fn preimage(&self, y: &Val) -> Vec<Val> {
        self.pairs().filter(|(_, b)| *b == y).map(|(a, _)| a.clone()).collect()
    }

    /// Preimages of every codomain element, indexed like `cod`.
    pub fn fibers(&self) -> Vec<Vec<Val>> {
        let mut out = vec![Vec::new(); self.cod.len()];
        for (x, y) in self.pairs() {
            out[self.cod.index_of(y).unwrap()].push(x.clone());
        }
        out
    }

    /// The graph as a function value.
    pub fn graph(&self) -> Val {
        Val::Fn(self.pairs().map(|(a, b)| (a.clone(), b.clone())).collect())
    }

    /// Same assignment with a larger (or equal) codomain.
    pub fn with_cod(&self, cod: FinSet) -> Result<FinFun, FinError> {
        FinFun::from_images(self.dom.clone(), cod, self.images.to_vec())
    }
}

impl fmt::Display for FinFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.graph())
    }
}

impl fmt::Debug for FinFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self.graph(), self.dom, self.cod)
    }
}

/// Odometer over all choice vectors, one coordinate per option list. The
/// first coordinate is most significant, so with sorted option lists the
/// output is in lexicographic order.
pub struct Choices<'a> {
    options: &'a [Vec<Val>],
    cursor: Option<Vec<usize>>,
}

impl<'a> Choices<'a> {
    pub fn new(options: &'a [Vec<Val>]) -> Self {
        let cursor = if options.iter().any(|o| o.is_empty()) {
            None
        } else {
            Some(vec![0; options.len()])
        };
        Choices { options, cursor }
    }
}

impl Iterator for Choices<'_> {
    type Item = Vec<Val>;

    fn next(&mut self) -> Option<Vec<Val>> {
        let cur = self.cursor.as_mut()?;
        let out = cur.iter().zip(self.options).map(|(&i, o)| o[i].clone()).collect();
        let mut k = cur.len();
        loop {
            if k == 0 {
                self.cursor = None;
                break;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < self.options[k].len() {
                break;
            }
            cur[k] = 0;
        }
        Some(out)
    }
}

/// Number of choice vectors, saturating.
pub fn choice_count(options: &[Vec<Val>]) -> usize {
    options.iter().fold(1usize, |acc, o| acc.saturating_mul(o.len()))
}

/// The `k`-th choice vector in [`Choices`] order.
pub fn nth_choice(options: &[Vec<Val>], mut k: usize) -> Option<Vec<Val>> {
    if k >= choice_count(options) || options.iter().any(|o| o.is_empty()) {
        return None;
    }
    let mut out = vec![Val::atom("nil"); options.len()];
    for (slot, o) in out.iter_mut().zip(options).rev() {
        *slot = o[k % o.len()].clone();
        k /= o.len();
    }
    Some(out)
}

/// At most `limit` indices below `total`, evenly spaced, keeping both ends.
pub fn spread_indices(total: usize, limit: usize) -> Vec<usize> {
    match (total, limit) {
        (0, _) | (_, 0) => Vec::new(),
        (t, l) if t <= l => (0..t).collect(),
        (_, 1) => vec![0],
        (t, l) => (0..l).map(|i| (i as u128 * (t as u128 - 1) / (l as u128 - 1)) as usize).collect(),
    }
}

/// Evenly spaced choice vectors, without enumerating the rest.
pub fn spread_choices(options: &[Vec<Val>], limit: usize) -> Vec<Vec<Val>> {
    spread_indices(choice_count(options), limit).into_iter().filter_map(|k| nth_choice(options, k)).collect()
}

/// Every function `dom → cod`.
pub fn all_maps(dom: &FinSet, cod: &FinSet) -> Vec<FinFun> {
    let options = vec![cod.elements().to_vec(); dom.len()];
    Choices::new(&options)
        .map(|images| FinFun::from_images(dom.clone(), cod.clone(), images).unwrap())
        .collect()
}

/// Every `m : W → E` with `over ∘ m = base`, where `base : W → X` and
/// `over : E → X`.
pub fn maps_over(base: &FinFun, over: &FinFun) -> Vec<FinFun> {
    let fibers = over.fibers();
    let options: Vec<Vec<Val>> = base
        .images()
        .iter()
        .map(|x| match over.cod().index_of(x) {
            Some(i) => fibers[i].clone(),
            None => Vec::new(),
        })
        .collect();
    Choices::new(&options)
        .map(|images| FinFun::from_images(base.dom().clone(), over.dom().clone(), images).unwrap())
        .collect()
}

/// Every section of `display : E → X`.
pub fn sections(display: &FinFun) -> Vec<FinFun> {
    maps_over(&FinFun::identity(display.cod()), display)
}

/// At most `limit` sections, spread through the enumeration order of [`sections`].
pub fn sections_spread(display: &FinFun, limit: usize) -> Vec<FinFun> {
    let fibers = display.fibers();
    spread_choices(&fibers, limit)
        .into_iter()
        .map(|images| FinFun::from_images(display.cod().clone(), display.dom().clone(), images).unwrap())
        .collect()
}

/// A chosen binary product with its projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub object: FinSet,
    pub left: FinFun,
    pub right: FinFun,
}

impl Product {
    /// The mediating map `⟨f, g⟩`.
    pub fn pairing(&self, f: &FinFun, g: &FinFun) -> Result<FinFun, FinError> {
        if f.dom() != g.dom() {
            return Err(FinError::Mismatch {
                what: "pairing domains",
                expected: f.dom().to_string(),
                found: g.dom().to_string(),
            });
        }
        FinFun::new(f.dom().clone(), self.object.clone(), |z| {
            Val::pair(f.apply(z).clone(), g.apply(z).clone())
        })
    }
}

/// `x × y` with elements `(a, b)`.
pub fn product(x: &FinSet, y: &FinSet) -> Product {
    let object = FinSet::new(
        x.iter().flat_map(|a| y.iter().map(move |b| Val::pair(a.clone(), b.clone()))),
    );
    let left = FinFun::new(object.clone(), x.clone(), |p| p.as_pair().unwrap().0.clone()).unwrap();
    let right = FinFun::new(object.clone(), y.clone(), |p| p.as_pair().unwrap().1.clone()).unwrap();
    Product { object, left, right }
}

/// A chosen pullback of a cospan `f : A → C ← B : g`, with apex elements
/// `pb[(a, b)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanLimit {
    pub apex: FinSet,
    pub leg1: FinFun,
    pub leg2: FinFun,
}

impl SpanLimit {
    /// The unique map `W → apex` through which `h : W → A`, `k : W → B` factor.
    pub fn mediate(&self, h: &FinFun, k: &FinFun) -> Result<FinFun, FinError> {
        FinFun::new(h.dom().clone(), self.apex.clone(), |w| {
            pb_point(h.apply(w).clone(), k.apply(w).clone())
        })
    }
}

pub fn pb_point(a: Val, b: Val) -> Val {
    Val::tag("pb", Val::pair(a, b))
}

/// Chosen pullback of `f` and `g`. Deliberately not functorial: pulling back
/// a pullback nests the `pb` tags.
pub fn pullback(f: &FinFun, g: &FinFun) -> Result<SpanLimit, FinError> {
    if f.cod() != g.cod() {
        return Err(FinError::Mismatch {
            what: "pullback codomains",
            expected: f.cod().to_string(),
            found: g.cod().to_string(),
        });
    }
    let g_fibers = g.fibers();
    let mut pts = Vec::new();
    for (a, c) in f.pairs() {
        let i = g.cod().index_of(c).unwrap();
        for b in &g_fibers[i] {
            pts.push(pb_point(a.clone(), b.clone()));
        }
    }
    let apex = FinSet::new(pts);
    let leg1 = FinFun::new(apex.clone(), f.dom().clone(), |p| pb_parts(p).0.clone())?;
    let leg2 = FinFun::new(apex.clone(), g.dom().clone(), |p| pb_parts(p).1.clone())?;
    Ok(SpanLimit { apex, leg1, leg2 })
}

fn pb_parts(p: &Val) -> (&Val, &Val) {
    p.untag("pb").and_then(Val::as_pair).expect("pullback point")
}

/// Dependent exponential `∏[f, g]` for `f : Y → X` and `g : Z → Y`.
///
/// The fiber over `x` is the set of sections of `g` over `f⁻¹(x)`, each
/// stored as `fn[(x, graph)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepExp {
    pub base: FinSet,
    pub display: FinFun,
    pub family: FinFun,
    pub object: FinSet,
    pub proj: FinFun,
    /// Pullback of `proj` along `display`; the domain of `eval`.
    pub eval_domain: SpanLimit,
    pub eval: FinFun,
}

pub fn fn_point(x: Val, graph: Val) -> Val {
    Val::tag("fn", Val::pair(x, graph))
}

/// Splits `fn[(x, graph)]`.
pub fn fn_parts(p: &Val) -> Option<(&Val, &Val)> {
    p.untag("fn").and_then(Val::as_pair)
}

pub fn dep_exp(f: &FinFun, g: &FinFun) -> Result<DepExp, FinError> {
    if g.cod() != f.dom() {
        return Err(FinError::Mismatch {
            what: "dependent exponential",
            expected: f.dom().to_string(),
            found: g.cod().to_string(),
        });
    }
    let f_fibers = f.fibers();
    let g_fibers = g.fibers();
    let mut pts = Vec::new();
    for (xi, x) in f.cod().iter().enumerate() {
        let ys = &f_fibers[xi];
        let options: Vec<Vec<Val>> =
            ys.iter().map(|y| g_fibers[g.cod().index_of(y).unwrap()].clone()).collect();
        for choice in Choices::new(&options) {
            let graph = Val::Fn(ys.iter().cloned().zip(choice).collect());
            pts.push(fn_point(x.clone(), graph));
        }
    }
    let object = FinSet::new(pts);
    let proj = FinFun::new(object.clone(), f.cod().clone(), |p| fn_parts(p).unwrap().0.clone())?;
    let eval_domain = pullback(&proj, f)?;
    let eval = FinFun::new(eval_domain.apex.clone(), g.dom().clone(), |p| {
        let (s, y) = pb_parts(p);
        fn_parts(s).unwrap().1.lookup(y).expect("section defined on its fiber").clone()
    })?;
    Ok(DepExp {
        base: f.cod().clone(),
        display: f.clone(),
        family: g.clone(),
        object,
        proj,
        eval_domain,
        eval,
    })
}

impl DepExp {
    /// Transpose of `m : W → ∏` over `w = proj ∘ m`: the map
    /// `W ×_X Y → Z` given by evaluation. Returns the pullback used as its
    /// domain too.
    pub fn transpose(&self, m: &FinFun) -> Result<(SpanLimit, FinFun), FinError> {
        let w = self.proj.after(m);
        let pb = pullback(&w, &self.display)?;
        let n = FinFun::new(pb.apex.clone(), self.family.dom().clone(), |p| {
            let (wi, y) = pb_parts(p);
            let q = pb_point(m.apply(wi).clone(), y.clone());
            self.eval.apply(&q).clone()
        })?;
        Ok((pb, n))
    }

    /// Inverse transpose: given `w : W → X` and `n : W ×_X Y → Z` over `Y`,
    /// the map `W → ∏`.
    pub fn curry(&self, w: &FinFun, n: &FinFun) -> Result<FinFun, FinError> {
        let f_fibers = self.display.fibers();
        FinFun::new(w.dom().clone(), self.object.clone(), |wi| {
            let x = w.apply(wi);
            let ys = &f_fibers[self.base.index_of(x).unwrap()];
            let graph = Val::Fn(
                ys.iter()
                    .map(|y| (y.clone(), n.apply(&pb_point(wi.clone(), y.clone())).clone()))
                    .collect(),
            );
            fn_point(x.clone(), graph)
        })
    }
}

fn probes(max: usize) -> Vec<FinSet> {
    (0..=max).map(|n| FinSet::atoms("w", n)).collect()
}

/// Checks the product's universal property against every pair of maps out of
/// probe objects of size at most `max_probe`. Returns the case count.
pub fn verify_product(x: &FinSet, y: &FinSet, p: &Product, max_probe: usize) -> Result<usize, String> {
    let mut cases = 0;
    for w in probes(max_probe) {
        let candidates = all_maps(&w, &p.object);
        for a in all_maps(&w, x) {
            for b in all_maps(&w, y) {
                let hits = candidates
                    .iter()
                    .filter(|m| p.left.after(m) == a && p.right.after(m) == b)
                    .count();
                cases += 1;
                if hits != 1 {
                    return Err(format!("probe {w}: {hits} mediating maps for ({a}, {b})"));
                }
            }
        }
    }
    Ok(cases)
}

/// Existence and uniqueness of mediating maps for a chosen pullback.
pub fn verify_pullback(f: &FinFun, g: &FinFun, s: &SpanLimit, max_probe: usize) -> Result<usize, String> {
    if f.after(&s.leg1) != g.after(&s.leg2) {
        return Err("pullback square does not commute".into());
    }
    let mut cases = 0;
    for w in probes(max_probe) {
        let candidates = all_maps(&w, &s.apex);
        for h in all_maps(&w, f.dom()) {
            for k in all_maps(&w, g.dom()) {
                if f.after(&h) != g.after(&k) {
                    continue;
                }
                let hits = candidates
                    .iter()
                    .filter(|m| s.leg1.after(m) == h && s.leg2.after(m) == k)
                    .count();
                cases += 1;
                if hits != 1 {
                    return Err(format!("probe {w}: {hits} mediating maps for cone ({h}, {k})"));
                }
            }
        }
    }
    Ok(cases)
}

/// Brute-force check of `C/X(W, ∏[f,g]) ≅ C/Y(W ×_X Y, Z)`: for every probe
/// `w : W → X`, transposition is injective on maps over `X` and hits every
/// map over `Y`.
pub fn verify_dep_exp(f: &FinFun, g: &FinFun, e: &DepExp, max_probe: usize) -> Result<usize, String> {
    if e.proj.cod() != f.cod() || e.eval.cod() != g.dom() {
        return Err("exponential has the wrong shape".into());
    }
    // g ∘ eval must be the leg to Y.
    if g.after(&e.eval) != e.eval_domain.leg2 {
        return Err(format!("eval is not over Y: {}", e.eval));
    }
    let mut cases = 0;
    for wset in probes(max_probe) {
        for w in all_maps(&wset, f.cod()) {
            let pb = pullback(&w, f).map_err(|err| err.to_string())?;
            let over_y = maps_over(&pb.leg2, g);
            let mut transposes = BTreeSet::new();
            let over_x = maps_over(&w, &e.proj);
            for m in &over_x {
                let (_, n) = e.transpose(m).map_err(|err| err.to_string())?;
                if g.after(&n) != pb.leg2 {
                    return Err(format!("transpose of {m} is not over Y"));
                }
                transposes.insert(n);
            }
            cases += 1;
            if transposes.len() != over_x.len() {
                return Err(format!("probe {w}: transposition is not injective"));
            }
            if let Some(missed) = over_y.iter().find(|n| !transposes.contains(*n)) {
                return Err(format!("probe {w}: map {missed} over Y has no transpose"));
            }
        }
    }
    Ok(cases)
}

/// A display map over `x` with the given fiber sizes; elements are `(x, yi)`.
pub fn family_display(x: &FinSet, sizes: &[usize], label: &str) -> FinFun {
    let total = FinSet::new(x.iter().zip(sizes).flat_map(|(xi, &n)| {
        (0..n).map(move |i| Val::pair(xi.clone(), Val::atom(&format!("{label}{i}"))))
    }));
    FinFun::new(total, x.clone(), |e| e.as_pair().unwrap().0.clone()).unwrap()
}

/// Every vector of fiber sizes over `n` points with entries `≤ max`.
pub fn size_vectors(n: usize, max: usize) -> Vec<Vec<usize>> {
    let options: Vec<Vec<Val>> = vec![(0..=max).map(|i| Val::atom(&i.to_string())).collect(); n];
    Choices::new(&options)
        .map(|c| c.iter().map(|v| v.to_string().parse().unwrap()).collect())
        .collect()
}

/// Verifies condition (LF) at the given bounds: for every display map `f`
/// and every display map or product projection `g` into its domain,
/// `dep_exp(f, g)` satisfies its adjunction.
pub fn check_lf(bounds: &Bounds) -> Report {
    check_lf_with(bounds, dep_exp)
}

/// As [`check_lf`] with a caller-supplied exponential, so corrupted
/// constructions can be fed through the same harness.
pub fn check_lf_with(
    bounds: &Bounds,
    build: impl Fn(&FinFun, &FinFun) -> Result<DepExp, FinError>,
) -> Report {
    let mut report = Report::new("lf");
    let base_max = bounds.max_ctx.min(2);
    for nx in 0..=base_max {
        let x = FinSet::atoms("x", nx);
        for fs in size_vectors(nx, bounds.max_fiber) {
            let f = family_display(&x, &fs, "y");
            let mut gs = Vec::new();
            for gsz in size_vectors(f.dom().len(), bounds.max_fiber) {
                gs.push(family_display(f.dom(), &gsz, "z"));
            }
            for nv in 0..=bounds.max_fiber {
                let p = product(f.dom(), &FinSet::atoms("v", nv));
                gs.push(p.left);
            }
            for g in gs {
                let outcome = build(&f, &g)
                    .map_err(|e| e.to_string())
                    .and_then(|e| verify_dep_exp(&f, &g, &e, bounds.max_probe));
                match outcome {
                    Ok(_) => report.pass(),
                    Err(why) => report.fail(|| format!("f = {f:?}, g = {g:?}: {why}")),
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Val {
        Val::atom(s)
    }

    fn pool() -> Vec<Val> {
        let mut p = vec![a("a"), a("b"), a("z")];
        p.push(Val::pair(a("a"), a("b")));
        p.push(Val::pair(a("b"), a("a")));
        p.push(Val::pair(a("a"), a("a")));
        p.push(Val::tag("pb", a("a")));
        p.push(Val::tag("fn", a("a")));
        p.push(Val::tag("pb", Val::pair(a("a"), a("b"))));
        p.push(Val::graph([]));
        p.push(Val::graph([(a("a"), a("b"))]));
        p.push(Val::graph([(a("a"), a("a"))]));
        p.push(Val::graph([(a("a"), a("b")), (a("b"), a("a"))]));
        p.push(Val::pair(Val::graph([]), a("a")));
        p.push(Val::tag("x", Val::pair(a("z"), a("a"))));
        p.push(Val::pair(Val::tag("x", a("a")), a("a")));
        p.push(a(""));
        p.push(a("aa"));
        p.push(Val::tag("", a("a")));
        p.push(Val::graph([(Val::pair(a("a"), a("b")), a("z"))]));
        p
    }

    #[test]
    fn compare_examples() {
        use std::cmp::Ordering::*;
        assert_eq!(val_compare(&a("x"), &a("x")), Equal);
        assert_eq!(val_compare(&a("a"), &a("b")), Less);
        assert_eq!(val_compare(&Val::pair(a("a"), a("b")), &a("z")), Greater);
        assert!(a("z") < Val::pair(a("a"), a("a")));
        assert!(Val::pair(a("z"), a("z")) < Val::tag("a", a("a")));
        assert!(Val::tag("z", a("z")) < Val::graph([]));
    }

    #[test]
    fn ordering_is_a_total_order_on_the_pool() {
        let p = pool();
        assert_eq!(p.len(), 20);
        for x in &p {
            for y in &p {
                assert_eq!(x.cmp(y) == std::cmp::Ordering::Equal, x == y);
                assert_eq!(x.cmp(y), y.cmp(x).reverse());
                for z in &p {
                    if x <= y && y <= z {
                        assert!(x <= z, "{x} {y} {z}");
                    }
                }
            }
        }
    }

    #[test]
    fn graphs_are_canonical() {
        let g1 = Val::graph([(a("b"), a("x")), (a("a"), a("y"))]);
        let g2 = Val::graph([(a("a"), a("y")), (a("b"), a("x"))]);
        assert_eq!(g1, g2);
        assert_eq!(g1.lookup(&a("b")), Some(&a("x")));
        assert!(Val::try_graph([(a("a"), a("x")), (a("a"), a("y"))]).is_none());
    }

    #[test]
    fn product_examples() {
        let p = product(&FinSet::singleton(a("a")), &FinSet::singleton(a("b")));
        assert_eq!(p.object, FinSet::singleton(Val::pair(a("a"), a("b"))));
        let e = product(&FinSet::empty(), &FinSet::atoms("s", 3));
        assert!(e.object.is_empty());
        let x = FinSet::atoms("x", 2);
        let y = FinSet::atoms("y", 3);
        let p = product(&x, &y);
        assert_eq!(p.object.len(), 6);
        // 4 probes of size ≤ 3; Σ_n (2·3)^n pairs of maps = 1 + 6 + 36 + 216
        assert_eq!(verify_product(&x, &y, &p, 3), Ok(259));
    }

    #[test]
    fn pullback_examples() {
        let x = FinSet::atoms("x", 2);
        let id = FinFun::identity(&x);
        let s = pullback(&id, &id).unwrap();
        assert_eq!(s.apex.len(), 2);
        assert!(!s.apex.contains(&a("x0")));
        assert!(s.apex.contains(&pb_point(a("x0"), a("x0"))));

        let c = FinSet::atoms("c", 2);
        let f = FinFun::new(FinSet::atoms("f", 2), c.clone(), |_| a("c0")).unwrap();
        let g = FinFun::new(FinSet::atoms("g", 3), c.clone(), |_| a("c1")).unwrap();
        assert!(pullback(&f, &g).unwrap().apex.is_empty());

        let g = FinFun::new(FinSet::atoms("g", 3), c.clone(), |_| a("c0")).unwrap();
        let s = pullback(&f, &g).unwrap();
        assert_eq!(s.apex.len(), 6);
        assert!(verify_pullback(&f, &g, &s, 2).is_ok());

        let bad = FinFun::identity(&FinSet::atoms("q", 1));
        assert!(pullback(&f, &bad).is_err());
    }

    #[test]
    fn pullbacks_of_pullbacks_nest_tags() {
        let x = FinSet::atoms("x", 2);
        let e = family_display(&x, &[1, 2], "e");
        let sigma = FinFun::new(x.clone(), x.clone(), |_| a("x1")).unwrap();
        let tau = FinFun::new(x.clone(), x.clone(), |v| if v == &a("x0") { a("x1") } else { a("x0") }).unwrap();
        let once = pullback(&sigma, &e).unwrap();
        let twice = pullback(&tau, &once.leg1).unwrap();
        let direct = pullback(&sigma.after(&tau), &e).unwrap();
        assert_eq!(twice.apex.len(), direct.apex.len());
        assert_ne!(twice.apex, direct.apex);
    }

    #[test]
    fn dep_exp_examples() {
        // empty fiber over x0: exactly one (empty) section
        let x = FinSet::atoms("x", 1);
        let f = family_display(&x, &[0], "y");
        let g = family_display(f.dom(), &[], "z");
        let e = dep_exp(&f, &g).unwrap();
        assert_eq!(e.object.len(), 1);

        // f = id: ∏ is Z up to singleton graphs
        let y = FinSet::atoms("y", 2);
        let f = FinFun::identity(&y);
        let g = family_display(&y, &[2, 1], "z");
        let e = dep_exp(&f, &g).unwrap();
        assert_eq!(e.object.len(), 3);
        for p in e.object.iter() {
            let (_, graph) = fn_parts(p).unwrap();
            assert_eq!(graph.as_graph().unwrap().len(), 1);
        }

        // two-point fiber, three-point g fibers: 3^2 sections
        let f = family_display(&x, &[2], "y");
        let g = family_display(f.dom(), &[3, 3], "z");
        let e = dep_exp(&f, &g).unwrap();
        assert_eq!(e.object.len(), 9);
        assert!(verify_dep_exp(&f, &g, &e, 2).is_ok());

        assert!(dep_exp(&g, &f).is_err());
    }

    #[test]
    fn lf_holds_at_small_bounds() {
        let b = Bounds { max_ctx: 2, max_fiber: 2, max_universe: 2, max_probe: 1, telescope_depth: 1 };
        let r = check_lf(&b);
        assert!(r.passed(), "{r}");
        assert!(r.cases > 0);
    }

    #[test]
    fn lf_with_zero_sized_sets() {
        let b = Bounds { max_ctx: 0, max_fiber: 0, max_universe: 1, max_probe: 1, telescope_depth: 1 };
        let r = check_lf(&b);
        assert!(r.passed());
        // the empty base with the empty display map and one projection
        assert_eq!(r.cases, 2);
    }

    #[test]
    fn corrupted_eval_is_caught() {
        let b = Bounds { max_ctx: 1, max_fiber: 2, max_universe: 1, max_probe: 1, telescope_depth: 1 };
        let r = check_lf_with(&b, |f, g| {
            let mut e = dep_exp(f, g)?;
            // send every evaluation to the first element of its fiber
            let fibers = g.fibers();
            e.eval = FinFun::new(e.eval.dom().clone(), g.dom().clone(), |p| {
                let z = e.eval.apply(p);
                let y = g.apply(z);
                fibers[g.cod().index_of(y).unwrap()][0].clone()
            })?;
            Ok(e)
        });
        assert!(!r.passed());
        assert!(r.witness.unwrap().contains("transpos"));
    }

    fn maps_among(sets: &[FinSet]) -> Vec<FinFun> {
        let mut out = Vec::new();
        for s in sets {
            for t in sets {
                out.extend(all_maps(s, t));
            }
        }
        out
    }

    #[test]
    fn composition_is_associative_and_unital() {
        let sets: Vec<FinSet> = (0..=3).map(|n| FinSet::atoms("s", n)).collect();
        let maps = maps_among(&sets);
        for f in &maps {
            assert_eq!(f.after(&FinFun::identity(f.dom())), *f);
            assert_eq!(FinFun::identity(f.cod()).after(f), *f);
        }
        // triples among sets of size ≤ 2 keep this under a second
        let small: Vec<FinFun> = maps.iter().filter(|m| m.dom().len() <= 2 && m.cod().len() <= 2).cloned().collect();
        for h in &small {
            for g in small.iter().filter(|g| g.dom() == h.cod()) {
                let gh = g.after(h);
                for f in small.iter().filter(|f| f.dom() == g.cod()) {
                    assert_eq!(f.after(&gh), f.after(g).after(h));
                }
            }
        }
    }
}
