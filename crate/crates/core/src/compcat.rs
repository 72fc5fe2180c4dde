//! Comprehension categories over finite sets: types over a context given by
//! their display maps, cleavings, the constructor witnesses a model may
//! provide, and brute-force checkers for the stability taxonomy.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::finval::{all_maps, family_display, maps_over, sections, size_vectors, FinError, FinFun, FinSet, Val};
use crate::report::{Bounds, Report};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Fin(#[from] FinError),
    #[error("model {model} provides no {constructor} types")]
    Unsupported { model: String, constructor: &'static str },
    #[error("not a valid witness: {0}")]
    Invalid(String),
    #[error("W-type would be infinite: {0}")]
    Infinite(String),
    #[error("context mismatch: {0}")]
    Context(String),
    #[error("ill-typed data: {0}")]
    IllTyped(String),
}

/// A type over `Γ`, presented by its comprehension `χ(A) : Γ.A → Γ`.
#[derive(Clone)]
pub struct TypeOver {
    display: FinFun,
    fibers: Arc<Vec<Vec<Val>>>,
}

impl PartialEq for TypeOver {
    fn eq(&self, other: &Self) -> bool {
        self.display == other.display
    }
}

impl Eq for TypeOver {}

impl std::hash::Hash for TypeOver {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.display.hash(state)
    }
}

impl fmt::Debug for TypeOver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TypeOver{:?}", self.display)
    }
}

impl TypeOver {
    pub fn new(display: FinFun) -> TypeOver {
        let fibers = Arc::new(display.fibers());
        TypeOver { display, fibers }
    }

    /// A type in family form: the fiber over `γ` is `{(γ, label_i)}`.
    pub fn family(ctx: &FinSet, sizes: &[usize], label: &str) -> TypeOver {
        TypeOver::new(family_display(ctx, sizes, label))
    }

    /// A type with the given elements, each sent to its listed point.
    pub fn from_points(ctx: &FinSet, points: impl IntoIterator<Item = (Val, Val)>) -> Result<TypeOver, FinError> {
        let pts: Vec<(Val, Val)> = points.into_iter().collect();
        let total = FinSet::new(pts.iter().map(|(e, _)| e.clone()));
        Ok(TypeOver::new(FinFun::from_pairs(total, ctx.clone(), pts)?))
    }

    pub fn ctx(&self) -> &FinSet {
        self.display.cod()
    }

    pub fn total(&self) -> &FinSet {
        self.display.dom()
    }

    pub fn display(&self) -> &FinFun {
        &self.display
    }

    /// Elements over `γ`, in order. Empty outside the context.
    pub fn fiber(&self, gamma: &Val) -> &[Val] {
        match self.ctx().index_of(gamma) {
            Some(i) => &self.fibers[i],
            None => &[],
        }
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        self.fibers.iter().map(Vec::len).collect()
    }

    pub fn point_of(&self, e: &Val) -> &Val {
        self.display.apply(e)
    }

    /// Canonical value form, used in seals and memo keys.
    pub fn to_val(&self) -> Val {
        self.display.graph()
    }

    /// Sections `Γ → Γ.A`.
    pub fn sections(&self) -> Vec<FinFun> {
        sections(&self.display)
    }

    /// At most `limit` sections, evenly spread through [`TypeOver::sections`].
    pub fn sections_spread(&self, limit: usize) -> Vec<FinFun> {
        crate::finval::sections_spread(&self.display, limit)
    }

    pub fn is_section(&self, s: &FinFun) -> bool {
        s.dom() == self.ctx() && s.cod() == self.total() && self.display.after(s).is_identity()
    }
}

/// The lift `σ.A : Δ.A[σ] → Γ.A` of `A` along `σ : Δ → Γ`.
#[derive(Clone)]
pub struct CartesianLift {
    pub src: TypeOver,
    pub dst: TypeOver,
    pub over: FinFun,
    pub top: FinFun,
    index: Arc<HashMap<(Val, Val), Val>>,
}

impl PartialEq for CartesianLift {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src && self.dst == other.dst && self.over == other.over && self.top == other.top
    }
}

impl Eq for CartesianLift {}

impl fmt::Debug for CartesianLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lift {{ over: {}, top: {} }}", self.over, self.top)
    }
}

impl CartesianLift {
    /// Assembles a lift. The top map must be injective on each fiber of
    /// `src`, which makes elements addressable by (base point, anchor).
    pub fn new(src: TypeOver, dst: TypeOver, over: FinFun, top: FinFun) -> Result<CartesianLift, ModelError> {
        if top.dom() != src.total() || top.cod() != dst.total() || over.dom() != src.ctx() || over.cod() != dst.ctx() {
            return Err(ModelError::IllTyped("lift components do not fit".into()));
        }
        let mut index = HashMap::with_capacity(src.total().len());
        for (e, anchor) in top.pairs() {
            let key = (src.point_of(e).clone(), anchor.clone());
            if index.insert(key, e.clone()).is_some() {
                return Err(ModelError::Invalid(format!("lift identifies two elements over one point at {anchor}")));
            }
        }
        Ok(CartesianLift { src, dst, over, top, index: Arc::new(index) })
    }

    pub fn identity(a: &TypeOver) -> CartesianLift {
        CartesianLift::new(a.clone(), a.clone(), FinFun::identity(a.ctx()), FinFun::identity(a.total())).unwrap()
    }

    /// The element of `src` over `delta` whose image under `top` is `anchor`.
    pub fn element(&self, delta: &Val, anchor: &Val) -> Option<&Val> {
        self.index.get(&(delta.clone(), anchor.clone()))
    }

    pub fn commutes(&self) -> bool {
        self.dst.display().after(&self.top) == self.over.after(self.src.display())
    }

    /// Whether the square is a pullback: every compatible pair (δ, e) is hit
    /// exactly once.
    pub fn is_pullback(&self) -> bool {
        if !self.commutes() {
            return false;
        }
        let mut expected = 0;
        for delta in self.over.dom().iter() {
            let fiber = self.dst.fiber(self.over.apply(delta));
            expected += fiber.len();
            if fiber.iter().any(|e| self.element(delta, e).is_none()) {
                return false;
            }
        }
        expected == self.src.total().len()
    }

    /// Pulls back a section of `dst` to a section of `src`.
    pub fn pull_section(&self, s: &FinFun) -> Result<FinFun, ModelError> {
        let mut images = Vec::with_capacity(self.src.ctx().len());
        for delta in self.src.ctx().iter() {
            let target = s.apply(self.over.apply(delta));
            match self.element(delta, target) {
                Some(e) => images.push(e.clone()),
                None => return Err(ModelError::IllTyped(format!("section value {target} has no pullback over {delta}"))),
            }
        }
        Ok(FinFun::from_images(self.src.ctx().clone(), self.src.total().clone(), images)?)
    }

    /// Pastes `self : A[σ] → A` after `inner : A[σ][τ] → A[σ]`.
    pub fn paste(&self, inner: &CartesianLift) -> Result<CartesianLift, ModelError> {
        if inner.dst != self.src {
            return Err(ModelError::IllTyped("lifts do not paste".into()));
        }
        CartesianLift::new(inner.src.clone(), self.dst.clone(), self.over.after(&inner.over), self.top.after(&inner.top))
    }

    /// Induced map between two lifts of the same type over the same map:
    /// sends each element of `self.src` to the element of `other.src` with
    /// the same base point and anchor.
    pub fn comparison(&self, other: &CartesianLift) -> Result<FinFun, ModelError> {
        let mut images = Vec::new();
        for (e, anchor) in self.top.pairs() {
            match other.element(self.src.point_of(e), anchor) {
                Some(x) => images.push(x.clone()),
                None => return Err(ModelError::Invalid(format!("no counterpart for {e}"))),
            }
        }
        Ok(FinFun::from_images(self.src.total().clone(), other.src.total().clone(), images)?)
    }
}

/// A binary sum `A + B` over `Γ` with its inclusions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumWitness {
    pub left: TypeOver,
    pub right: TypeOver,
    pub sum: TypeOver,
    pub inl: FinFun,
    pub inr: FinFun,
}

/// A dependent product `Π[A, B]` over `Γ`; `app` is defined on the
/// reindexing `Π[A,B][χ(A)]` and lands in `Γ.A.B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiWitness {
    pub a: TypeOver,
    pub b: TypeOver,
    pub pi: TypeOver,
    pub at_a: CartesianLift,
    pub app: FinFun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaWitness {
    pub a: TypeOver,
    pub b: TypeOver,
    pub sigma: TypeOver,
    pub pair: FinFun,
}

/// An identity type over `Γ.A.A`, where `Γ.A.A` is the comprehension of
/// `A[χ(A)]` (`aa.src`), with reflexivity `r : Γ.A → Γ.A.A.Id_A` lying over
/// the diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdWitness {
    pub a: TypeOver,
    pub aa: CartesianLift,
    pub id: TypeOver,
    pub refl: FinFun,
}

impl IdWitness {
    /// The diagonal `Γ.A → Γ.A.A`.
    pub fn diagonal(&self) -> Result<FinFun, ModelError> {
        diagonal(&self.aa)
    }
}

/// The diagonal `Γ.A → Γ.A.A` determined by the self-reindexing `A[χ(A)]`.
pub fn diagonal(aa: &CartesianLift) -> Result<FinFun, ModelError> {
    let images = aa
        .dst
        .total()
        .iter()
        .map(|x| aa.element(x, x).cloned().ok_or_else(|| ModelError::Invalid(format!("no diagonal point over {x}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FinFun::from_images(aa.dst.total().clone(), aa.src.total().clone(), images)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitWitness {
    pub unit: TypeOver,
    pub tt: FinFun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroWitness {
    pub zero: TypeOver,
}

/// A W-type over `Γ` for `A` and `B` over `Γ.A`. `poly` is the polynomial
/// `Σ_{x:A} (B(x) → W)` with elements `node[(x, graph)]`, and `fold` is the
/// structure map `poly → W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WWitness {
    pub a: TypeOver,
    pub b: TypeOver,
    pub w: TypeOver,
    pub poly: TypeOver,
    pub fold: FinFun,
}

/// Encodes a node of the polynomial functor.
pub fn node(x: Val, graph: Val) -> Val {
    Val::tag("node", Val::pair(x, graph))
}

pub fn node_parts(p: &Val) -> Option<(&Val, &Val)> {
    p.untag("node").and_then(Val::as_pair)
}

/// Builds `Σ_{x:A} (B(x) → W)` over the context of `w`.
pub fn polynomial(a: &TypeOver, b: &TypeOver, w: &TypeOver) -> Result<TypeOver, ModelError> {
    let mut pts = Vec::new();
    for x in a.total().iter() {
        let gamma = a.point_of(x);
        let bs: Vec<Val> = b.fiber(x).to_vec();
        let options = vec![w.fiber(gamma).to_vec(); bs.len()];
        for choice in crate::finval::Choices::new(&options) {
            let graph = Val::Fn(bs.iter().cloned().zip(choice).collect());
            pts.push((node(x.clone(), graph), gamma.clone()));
        }
    }
    Ok(TypeOver::from_points(a.ctx(), pts)?)
}

/// A comprehension category over finite sets.
///
/// Constructor providers return witnesses of weakly stable structure. They
/// are checked, never assumed.
pub trait Model: Send + Sync {
    fn name(&self) -> &'static str;

    /// Whether the chosen lifts are claimed to compose strictly. Checked by
    /// [`check_splitness`], which is an expected failure when this is false.
    fn claims_split(&self) -> bool {
        false
    }

    /// The chosen cartesian lift of `a` along `sigma`.
    fn reindex(&self, a: &TypeOver, sigma: &FinFun) -> Result<CartesianLift, ModelError>;

    /// Representatives of every isomorphism class of types over `ctx` with
    /// fibers of size at most `max_fiber`.
    fn types_over(&self, ctx: &FinSet, max_fiber: usize) -> Vec<TypeOver> {
        size_vectors(ctx.len(), max_fiber).iter().map(|s| self.family(ctx, s)).collect()
    }

    /// At most `limit` of [`Model::types_over`], evenly spread.
    fn types_spread(&self, ctx: &FinSet, max_fiber: usize, limit: usize) -> Vec<TypeOver> {
        let sizes: Vec<Val> = (0..=max_fiber).map(|i| Val::atom(&i.to_string())).collect();
        crate::finval::spread_choices(&vec![sizes; ctx.len()], limit)
            .iter()
            .map(|c| self.family(ctx, &c.iter().map(|v| v.to_string().parse().unwrap()).collect::<Vec<usize>>()))
            .collect()
    }

    /// A type over `ctx` with the given fiber sizes.
    fn family(&self, ctx: &FinSet, sizes: &[usize]) -> TypeOver;

    fn sum(&self, a: &TypeOver, b: &TypeOver) -> Result<SumWitness, ModelError>;
    fn pi(&self, a: &TypeOver, b: &TypeOver) -> Result<PiWitness, ModelError>;
    fn sigma(&self, a: &TypeOver, b: &TypeOver) -> Result<SigmaWitness, ModelError>;
    fn id(&self, a: &TypeOver) -> Result<IdWitness, ModelError>;
    fn unit(&self, ctx: &FinSet) -> Result<UnitWitness, ModelError>;
    fn zero(&self, ctx: &FinSet) -> Result<ZeroWitness, ModelError>;
    fn w(&self, a: &TypeOver, b: &TypeOver) -> Result<WWitness, ModelError>;
}

/// Contexts `{g0, …}` of every size up to `max`.
pub fn contexts(max: usize) -> Vec<FinSet> {
    (0..=max).map(|n| FinSet::atoms("g", n)).collect()
}

/// Every substitution into `gamma` from a context of size at most `max`.
pub fn substitutions_into(gamma: &FinSet, max: usize) -> Vec<FinFun> {
    let mut out = Vec::new();
    for n in 0..=max {
        out.extend(all_maps(&FinSet::atoms("d", n), gamma));
    }
    out
}

/// Checks that every chosen lift is a pullback square, including pasted
/// composites of two lifts.
pub fn check_fibration_axioms(model: &dyn Model, bounds: &Bounds) -> Report {
    let mut report = Report::new(format!("fibration-axioms[{}]", model.name()));
    for gamma in contexts(bounds.max_ctx) {
        for a in model.types_over(&gamma, bounds.max_fiber) {
            for sigma in substitutions_into(&gamma, bounds.max_ctx) {
                let lift = match model.reindex(&a, &sigma) {
                    Ok(l) => l,
                    Err(e) => {
                        report.fail(|| format!("reindex of {a:?} along {sigma}: {e}"));
                        continue;
                    }
                };
                report.check(lift.is_pullback(), || format!("lift of {a:?} along {sigma} is not a pullback"));
                if sigma.dom().len() > 2 {
                    continue;
                }
                for tau in substitutions_into(sigma.dom(), 2) {
                    let ok = model
                        .reindex(&lift.src, &tau)
                        .and_then(|inner| lift.paste(&inner))
                        .map(|p| p.is_pullback())
                        .unwrap_or(false);
                    report.check(ok, || format!("pasting {a:?} along {sigma} then {tau} is not a pullback"));
                }
            }
        }
    }
    report
}

/// Checks `A[1] = A` and `A[σ∘τ] = A[σ][τ]` (with lifts composing) as
/// structural equalities.
pub fn check_splitness(model: &dyn Model, bounds: &Bounds) -> Report {
    check_splitness_on(model, bounds, false)
}

/// As [`check_splitness`]; with `identities_only` set, only the identity law
/// is exercised.
pub fn check_splitness_on(model: &dyn Model, bounds: &Bounds, identities_only: bool) -> Report {
    let mut report = Report::new(format!("splitness[{}]", model.name()));
    for gamma in contexts(bounds.max_ctx) {
        for a in model.types_over(&gamma, bounds.max_fiber) {
            let ok = model.reindex(&a, &FinFun::identity(&gamma)).map(|l| l == CartesianLift::identity(&a));
            report.check(ok == Ok(true), || format!("A[1] != A for A = {a:?}"));
            if identities_only {
                continue;
            }
            for sigma in substitutions_into(&gamma, bounds.max_ctx) {
                for tau in substitutions_into(sigma.dom(), bounds.max_ctx.min(2)) {
                    let outcome = (|| -> Result<Option<String>, ModelError> {
                        let once = model.reindex(&a, &sigma.after(&tau))?;
                        let first = model.reindex(&a, &sigma)?;
                        let second = model.reindex(&first.src, &tau)?;
                        if once.src != second.src {
                            return Ok(Some(format!(
                                "A[σ∘τ] != A[σ][τ] for A = {a:?}, σ = {sigma}, τ = {tau}: {} vs {}",
                                once.src.total(),
                                second.src.total()
                            )));
                        }
                        if once != first.paste(&second)? {
                            return Ok(Some(format!("lifts do not compose for A = {a:?}, σ = {sigma}, τ = {tau}")));
                        }
                        Ok(None)
                    })();
                    match outcome {
                        Ok(None) => report.pass(),
                        Ok(Some(w)) => report.fail(|| w),
                        Err(e) => report.fail(|| e.to_string()),
                    }
                }
            }
        }
    }
    report
}

/// Reindexes a sum witness along `sigma`, with inclusions induced by the
/// cleaving.
pub fn reindex_sum(model: &dyn Model, w: &SumWitness, sigma: &FinFun) -> Result<SumWitness, ModelError> {
    let s = model.reindex(&w.sum, sigma)?;
    let l = model.reindex(&w.left, sigma)?;
    let r = model.reindex(&w.right, sigma)?;
    let inl = induced(&l, &w.inl, &s)?;
    let inr = induced(&r, &w.inr, &s)?;
    Ok(SumWitness { left: l.src, right: r.src, sum: s.src, inl, inr })
}

/// The map `from.src → to.src` induced by `f : from.dst → to.dst` over the
/// identity of the base, where both lifts lie over the same map.
pub fn induced(from: &CartesianLift, f: &FinFun, to: &CartesianLift) -> Result<FinFun, ModelError> {
    let mut images = Vec::with_capacity(from.src.total().len());
    for (x, anchor) in from.top.pairs() {
        let target = f.apply(anchor);
        match to.element(from.src.point_of(x), target) {
            Some(y) => images.push(y.clone()),
            None => return Err(ModelError::IllTyped(format!("induced map undefined at {x}"))),
        }
    }
    Ok(FinFun::from_images(from.src.total().clone(), to.src.total().clone(), images)?)
}

/// Every copair candidate for `c` over the sum: sections `t` of `c` with
/// `t ∘ inl = d1` and `t ∘ inr = d2` after pulling back. Returns the first
/// in lexicographic order, if any.
pub fn search_copair(
    model: &dyn Model,
    w: &SumWitness,
    c: &TypeOver,
    d1: &FinFun,
    d2: &FinFun,
) -> Result<Option<FinFun>, ModelError> {
    let l1 = model.reindex(c, &w.inl)?;
    let l2 = model.reindex(c, &w.inr)?;
    for t in c.sections() {
        if l1.pull_section(&t)? == *d1 && l2.pull_section(&t)? == *d2 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Whether a sum witness stays a binary sum after every reindexing: for each
/// `σ` in bounds, every type `C` over the reindexed sum and every pair of
/// sections `d1, d2` admit a copair, found by exhaustive search.
pub fn check_weak_stability_sum(model: &dyn Model, w: &SumWitness, bounds: &Bounds) -> bool {
    weak_stability_sum_report(model, w, bounds).passed()
}

pub fn weak_stability_sum_report(model: &dyn Model, w: &SumWitness, bounds: &Bounds) -> Report {
    let mut report = Report::new("weak-stability-sum");
    for sigma in substitutions_into(w.sum.ctx(), bounds.max_ctx) {
        let ws = match reindex_sum(model, w, &sigma) {
            Ok(ws) => ws,
            Err(e) => {
                report.fail(|| e.to_string());
                continue;
            }
        };
        for c in model.types_over(ws.sum.total(), bounds.max_fiber) {
            let (Ok(l1), Ok(l2)) = (model.reindex(&c, &ws.inl), model.reindex(&c, &ws.inr)) else {
                report.fail(|| "cannot reindex motive".into());
                continue;
            };
            for d1 in l1.src.sections() {
                for d2 in l2.src.sections() {
                    let found = search_copair(model, &ws, &c, &d1, &d2);
                    report.check(matches!(found, Ok(Some(_))), || {
                        format!("no copair over σ = {sigma} for C = {c:?}, d1 = {d1}, d2 = {d2}")
                    });
                }
            }
        }
    }
    report
}

/// Reindexes an identity-type witness along `sigma`.
pub fn reindex_id(model: &dyn Model, w: &IdWitness, sigma: &FinFun) -> Result<IdWitness, ModelError> {
    let la = model.reindex(&w.a, sigma)?;
    let aa = model.reindex(&la.src, la.src.display())?;
    // Γ'.A'.A' → Γ.A.A over the lift of A
    let top_aa = induced_over(&aa, &la.top, &w.aa)?;
    let lid = model.reindex(&w.id, &top_aa)?;
    let refl = {
        let diag = diagonal(&aa)?;
        let mut images = Vec::new();
        for x in la.src.total().iter() {
            let target = w.refl.apply(la.top.apply(x));
            match lid.element(diag.apply(x), target) {
                Some(y) => images.push(y.clone()),
                None => return Err(ModelError::Invalid(format!("reflexivity has no reindexing at {x}"))),
            }
        }
        FinFun::from_images(la.src.total().clone(), lid.src.total().clone(), images)?
    };
    Ok(IdWitness { a: la.src, aa, id: lid.src, refl })
}

/// Sends an element of `from.src` over `x'` with anchor `e'` to the element
/// of `to.src` over `h(x')` with anchor `h(e')`.
fn induced_over(from: &CartesianLift, h: &FinFun, to: &CartesianLift) -> Result<FinFun, ModelError> {
    let mut images = Vec::new();
    for (x, anchor) in from.top.pairs() {
        let base = h.apply(from.src.point_of(x));
        match to.element(base, h.apply(anchor)) {
            Some(y) => images.push(y.clone()),
            None => return Err(ModelError::Invalid(format!("no image for {x}"))),
        }
    }
    Ok(FinFun::from_images(from.src.total().clone(), to.src.total().clone(), images)?)
}

/// Beck–Chevalley for identity types: with `Id'` the identity type the model
/// provides for `A[σ]`, the canonical comparison `Id' → Id_A[σ]`, obtained by
/// eliminating `Id'` into `Id_A[σ]` with the reindexed reflexivity, is a
/// bijection.
pub fn check_beck_chevalley_id(model: &dyn Model, w: &IdWitness, sigma: &FinFun) -> Result<bool, ModelError> {
    let reindexed = reindex_id(model, w, sigma)?;
    let fresh = model.id(&reindexed.a)?;
    if fresh.aa.src != reindexed.aa.src {
        return Err(ModelError::IllTyped("identity types over different contexts".into()));
    }
    // the motive is Id_A[σ] pulled back to Γ'.A'.A'.Id' along the display
    let motive = model.reindex(&reindexed.id, fresh.id.display())?;
    let at_refl = model.reindex(&motive.src, &fresh.refl)?;
    // d : Γ'.A' → motive[r'] sending x to r_A[σ](x)
    let mut images = Vec::new();
    for x in reindexed.a.total().iter() {
        let target = motive.element(fresh.refl.apply(x), reindexed.refl.apply(x));
        let Some(target) = target else {
            return Ok(false);
        };
        match at_refl.element(x, target) {
            Some(y) => images.push(y.clone()),
            None => return Ok(false),
        }
    }
    let d = FinFun::from_images(reindexed.a.total().clone(), at_refl.src.total().clone(), images)?;
    let j = crate::models::elim::extend(&motive.src, &[(&fresh.refl, &at_refl, &d)])?;
    let comparison = motive.top.after(&j);
    // comparison sends Id' into Id_A[σ] over the same points
    Ok(comparison.is_bijective())
}

/// A candidate functorial action of identity types on cartesian maps: for
/// each `σ` and `A`, a map `Id_{A[σ]} → Id_A` over the lift `σ.A.A`.
pub trait IdAction {
    fn act(&self, model: &dyn Model, a: &TypeOver, sigma: &FinFun) -> Result<FinFun, ModelError>;
}

/// The action sending an element of `Id_{A[σ]}` to the element of `Id_A`
/// reached by following reflexivity: `r'(x) ↦ r(σ.A(x))`.
pub struct ReflAction;

impl IdAction for ReflAction {
    fn act(&self, model: &dyn Model, a: &TypeOver, sigma: &FinFun) -> Result<FinFun, ModelError> {
        let w = model.id(a)?;
        let la = model.reindex(a, sigma)?;
        let w2 = model.id(&la.src)?;
        let mut pairs = Vec::new();
        for x in la.src.total().iter() {
            pairs.push((w2.refl.apply(x).clone(), w.refl.apply(la.top.apply(x)).clone()));
        }
        Ok(FinFun::from_pairs(w2.id.total().clone(), w.id.total().clone(), pairs)?)
    }
}

/// Verifies the identity and composition laws of an identity-type action,
/// and (with `with_refl`) its commutation with reflexivity.
pub fn check_pseudo_action(model: &dyn Model, action: &dyn IdAction, bounds: &Bounds, with_refl: bool) -> Report {
    let mut report = Report::new(format!("pseudo-action[{}]", model.name()));
    for gamma in contexts(bounds.max_ctx.min(2)) {
        for a in model.types_over(&gamma, bounds.max_fiber) {
            let outcome = (|| -> Result<Option<String>, ModelError> {
                let w = model.id(&a)?;
                let ident = action.act(model, &a, &FinFun::identity(&gamma))?;
                if !ident.is_identity() {
                    return Ok(Some(format!("action of 1 on {a:?} is {ident}")));
                }
                for sigma in substitutions_into(&gamma, 2) {
                    let la = model.reindex(&a, &sigma)?;
                    let act_s = action.act(model, &a, &sigma)?;
                    if with_refl {
                        let w2 = model.id(&la.src)?;
                        let lhs = act_s.after(&w2.refl);
                        let rhs = w.refl.after(&la.top);
                        if lhs != rhs {
                            return Ok(Some(format!("action along {sigma} does not commute with r")));
                        }
                    }
                    for tau in substitutions_into(sigma.dom(), 2) {
                        let act_t = action.act(model, &la.src, &tau)?;
                        let act_st = action.act(model, &a, &sigma.after(&tau))?;
                        let lb = model.reindex(&la.src, &tau)?;
                        // A[σ][τ] and A[σ∘τ] differ in a non-split model; compare
                        // through the canonical identification of their Id types.
                        let direct = model.reindex(&a, &sigma.after(&tau))?;
                        let iso = id_comparison(model, &lb.src, &direct.src, &lb, &la, &direct)?;
                        if act_s.after(&act_t) != act_st.after(&iso) {
                            return Ok(Some(format!("action fails composition for σ = {sigma}, τ = {tau}")));
                        }
                    }
                }
                Ok(None)
            })();
            match outcome {
                Ok(None) => report.pass(),
                Ok(Some(w)) => report.fail(|| w),
                Err(e) => report.fail(|| e.to_string()),
            }
        }
    }
    report
}

/// The map `Id_{A[σ][τ]} → Id_{A[σ∘τ]}` induced by the canonical iso of the
/// two reindexings, following reflexivity.
fn id_comparison(
    model: &dyn Model,
    iterated: &TypeOver,
    direct: &TypeOver,
    inner: &CartesianLift,
    outer: &CartesianLift,
    one_step: &CartesianLift,
) -> Result<FinFun, ModelError> {
    let wi = model.id(iterated)?;
    let wd = model.id(direct)?;
    let pasted = outer.paste(inner)?;
    let iso = pasted.comparison(one_step)?;
    let mut pairs = Vec::new();
    for x in iterated.total().iter() {
        pairs.push((wi.refl.apply(x).clone(), wd.refl.apply(iso.apply(x)).clone()));
    }
    Ok(FinFun::from_pairs(wi.id.total().clone(), wd.id.total().clone(), pairs)?)
}

/// Fullness: maps `Γ.B → Γ.A` over `Γ`.
pub fn fiber_maps(b: &TypeOver, a: &TypeOver) -> Vec<FinFun> {
    maps_over(b.display(), a.display())
}

/// Every map of comprehensions over `Γ` is a morphism of types: the
/// enumerated morphisms commute with the displays and there are
/// `∏_γ |A_γ|^{|B_γ|}` of them.
pub fn check_fullness(model: &dyn Model, bounds: &Bounds) -> Report {
    let mut report = Report::new(format!("fullness[{}]", model.name()));
    for gamma in contexts(bounds.max_ctx.min(2)) {
        let types = model.types_over(&gamma, bounds.max_fiber);
        for a in &types {
            for b in &types {
                let maps = fiber_maps(b, a);
                let expected: usize = gamma.iter().map(|g| a.fiber(g).len().pow(b.fiber(g).len() as u32)).product();
                let over = maps.iter().all(|m| a.display().after(m) == *b.display());
                report.check(over && maps.len() == expected, || {
                    format!("{} morphisms from {b:?} to {a:?}, expected {expected}", maps.len())
                });
            }
        }
    }
    report
}
