//! The split comprehension category `C_!`.
//!
//! A type over `Γ` is a local universe `(V, Ê)` together with a name map
//! `ν : Γ → V`. Reindexing composes the name, so it is split by
//! construction; the comprehension is that of the realization `Ê[ν]`
//! computed in the backing model. Elements of a realization are addressed
//! by their base point and their anchor, the element of `Ê` they sit over.

use std::fmt;

use crate::compcat::{induced, CartesianLift, Model, ModelError, TypeOver};
use crate::finval::{choice_count, maps_over, nth_choice, size_vectors, spread_indices, FinFun, FinSet, Val};
use crate::report::{Bounds, Report};

/// A local universe: a type `Ê` over the base `V`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    pub total: TypeOver,
}

impl Universe {
    pub fn new(total: TypeOver) -> Universe {
        Universe { total }
    }

    pub fn base(&self) -> &FinSet {
        self.total.ctx()
    }

    /// Structural key, used for memo tables.
    pub fn key(&self) -> Val {
        let base = Val::Fn(self.base().iter().map(|v| (v.clone(), v.clone())).collect());
        Val::pair(base, self.total.to_val())
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "U({} over {})", self.total.total(), self.base())
    }
}

/// A type of `C_!` over `ctx`: the triple `(V, Ê, ν)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalType {
    pub universe: Universe,
    pub name: FinFun,
}

impl fmt::Debug for LocalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalType {{ {:?}, name: {} }}", self.universe, self.name)
    }
}

impl LocalType {
    pub fn new(universe: Universe, name: FinFun) -> Result<LocalType, ModelError> {
        if name.cod() != universe.base() {
            return Err(ModelError::Context(format!("name lands in {}, not in {}", name.cod(), universe.base())));
        }
        Ok(LocalType { universe, name })
    }

    pub fn ctx(&self) -> &FinSet {
        self.name.dom()
    }

    pub fn base(&self) -> &FinSet {
        self.universe.base()
    }

    pub fn total(&self) -> &TypeOver {
        &self.universe.total
    }
}

/// A map of `C_!` from `src` over `Δ` to `dst` over `Γ` lying over `over`:
/// just a map `[src] → [dst]` over `over`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTypeMap {
    pub src: LocalType,
    pub dst: LocalType,
    pub over: FinFun,
    pub map: FinFun,
}

/// `C_!` over a backing model.
#[derive(Clone, Copy)]
pub struct Bang<'m> {
    pub model: &'m dyn Model,
}

impl<'m> Bang<'m> {
    pub fn new(model: &'m dyn Model) -> Self {
        Bang { model }
    }

    /// The realization `[A] = Ê[ν]` with its lift into `Ê`; the lift's top
    /// map assigns each element its anchor.
    pub fn realize(&self, a: &LocalType) -> Result<CartesianLift, ModelError> {
        self.model.reindex(a.total(), &a.name)
    }

    /// `A[σ] = (V, Ê, ν ∘ σ)`.
    pub fn reindex(&self, a: &LocalType, sigma: &FinFun) -> Result<LocalType, ModelError> {
        if sigma.cod() != a.ctx() {
            return Err(ModelError::Context(format!("{} is not {}", sigma.cod(), a.ctx())));
        }
        Ok(LocalType { universe: a.universe.clone(), name: a.name.after(sigma) })
    }

    /// The split lift `[A[σ]] → [A]` over `σ`, matching anchors.
    pub fn lift(&self, a: &LocalType, sigma: &FinFun) -> Result<CartesianLift, ModelError> {
        let upper = self.realize(&self.reindex(a, sigma)?)?;
        let lower = self.realize(a)?;
        let top = FinFun::new(upper.src.total().clone(), lower.src.total().clone(), |y| {
            let delta = upper.src.point_of(y);
            lower.element(sigma.apply(delta), upper.top.apply(y)).expect("realizations agree on anchors").clone()
        })?;
        CartesianLift::new(upper.src, lower.src, sigma.clone(), top)
    }

    /// `χ_!(A) = χ([A])`.
    pub fn comprehension(&self, a: &LocalType) -> Result<FinFun, ModelError> {
        Ok(self.realize(a)?.src.display().clone())
    }

    /// `(Γ, A, 1_Γ)`.
    pub fn embed(&self, a: &TypeOver) -> LocalType {
        LocalType { universe: Universe::new(a.clone()), name: FinFun::identity(a.ctx()) }
    }

    /// Pulls a section of `[A]` back to a section of `[A[σ]]`.
    pub fn pull_section(&self, a: &LocalType, sigma: &FinFun, s: &FinFun) -> Result<FinFun, ModelError> {
        self.lift(a, sigma)?.pull_section(s)
    }

    /// Reindexes a map `f : [X] → [Y]` over `Γ` along `σ`.
    pub fn pull_map(&self, x: &LocalType, y: &LocalType, f: &FinFun, sigma: &FinFun) -> Result<FinFun, ModelError> {
        induced(&self.lift(x, sigma)?, f, &self.lift(y, sigma)?)
    }

    /// Every map of `C_!` from `b` to `a` over the identity of their context.
    pub fn local_type_maps(&self, b: &LocalType, a: &LocalType) -> Result<Vec<LocalTypeMap>, ModelError> {
        let rb = self.realize(b)?;
        let ra = self.realize(a)?;
        let over = FinFun::identity(a.ctx());
        Ok(maps_over(rb.src.display(), ra.src.display())
            .into_iter()
            .map(|map| LocalTypeMap { src: b.clone(), dst: a.clone(), over: over.clone(), map })
            .collect())
    }
}

/// Every local universe with base of size at most `max_universe` and fibers
/// of size at most `max_fiber`, up to isomorphism.
pub fn universe_pool(model: &dyn Model, max_universe: usize, max_fiber: usize) -> Vec<Universe> {
    let mut out = Vec::new();
    for n in 0..=max_universe {
        let base = FinSet::atoms("v", n);
        for sizes in size_vectors(n, max_fiber) {
            out.push(Universe::new(model.family(&base, &sizes)));
        }
    }
    out
}

/// Picks at most `limit` items spread evenly through `items`, keeping the
/// first and last.
pub fn spread<T: Clone>(items: &[T], limit: usize) -> Vec<T> {
    spread_indices(items.len(), limit).into_iter().map(|i| items[i].clone()).collect()
}

/// Local types over `ctx`: every universe in the pool with every name,
/// thinned to at most `limit` without enumerating the rest.
pub fn local_type_pool(model: &dyn Model, ctx: &FinSet, bounds: &Bounds, limit: usize) -> Vec<LocalType> {
    let universes = universe_pool(model, bounds.max_universe, bounds.max_fiber);
    let options: Vec<Vec<Vec<Val>>> = universes.iter().map(|u| vec![u.base().elements().to_vec(); ctx.len()]).collect();
    let counts: Vec<usize> = options.iter().map(|o| choice_count(o)).collect();
    let total = counts.iter().fold(0usize, |acc, c| acc.saturating_add(*c));
    let mut out = Vec::new();
    for mut k in spread_indices(total, limit) {
        let mut i = 0;
        while k >= counts[i] {
            k -= counts[i];
            i += 1;
        }
        let images = nth_choice(&options[i], k).expect("index within the count");
        let name = FinFun::from_images(ctx.clone(), universes[i].base().clone(), images).expect("images in the base");
        out.push(LocalType { universe: universes[i].clone(), name });
    }
    out
}

/// Both split-fibration laws for `C_!`, as structural equalities on types
/// and on lifts, plus cartesianness of the comprehension.
pub fn check_bang_splitness(model: &dyn Model, bounds: &Bounds, types_per_ctx: usize) -> Report {
    let bang = Bang::new(model);
    let mut report = Report::new(format!("bang-splitness[{}]", model.name()));
    for gamma in crate::compcat::contexts(bounds.max_ctx) {
        let sigmas = crate::compcat::substitutions_into(&gamma, bounds.max_ctx);
        for a in local_type_pool(model, &gamma, bounds, types_per_ctx) {
            let outcome = (|| -> Result<Option<String>, ModelError> {
                let id = FinFun::identity(&gamma);
                if bang.reindex(&a, &id)? != a {
                    return Ok(Some(format!("A[1] != A for {a:?}")));
                }
                if bang.lift(&a, &id)? != CartesianLift::identity(&bang.realize(&a)?.src) {
                    return Ok(Some(format!("lift of {a:?} along 1 is not the identity")));
                }
                Ok(None)
            })();
            record(&mut report, outcome);
            for sigma in &sigmas {
                let first = bang.reindex(&a, sigma).and_then(|s| Ok((s.clone(), bang.lift(&a, sigma)?)));
                let (a_sigma, lift_sigma) = match first {
                    Ok(x) => x,
                    Err(e) => {
                        report.fail(|| e.to_string());
                        continue;
                    }
                };
                report.check(lift_sigma.is_pullback(), || format!("χ_! of the lift of {a:?} along {sigma} is no pullback"));
                for tau in crate::compcat::substitutions_into(sigma.dom(), bounds.max_ctx) {
                    let outcome = (|| -> Result<Option<String>, ModelError> {
                        let composite = sigma.after(&tau);
                        let once = bang.reindex(&a, &composite)?;
                        let twice = bang.reindex(&a_sigma, &tau)?;
                        if once != twice {
                            return Ok(Some(format!("A[σ∘τ] != A[σ][τ] for {a:?}, σ = {sigma}, τ = {tau}")));
                        }
                        let direct = bang.lift(&a, &composite)?;
                        let pasted = lift_sigma.paste(&bang.lift(&a_sigma, &tau)?)?;
                        if direct != pasted {
                            return Ok(Some(format!("lifts do not compose for {a:?}, σ = {sigma}, τ = {tau}")));
                        }
                        Ok(None)
                    })();
                    record(&mut report, outcome);
                }
            }
        }
    }
    report
}

fn record(report: &mut Report, outcome: Result<Option<String>, ModelError>) {
    match outcome {
        Ok(None) => report.pass(),
        Ok(Some(w)) => report.fail(|| w),
        Err(e) => report.fail(|| e.to_string()),
    }
}

/// Fiberwise equivalence of `C` and `C_!`: each type is isomorphic over `Γ`
/// to the realization of its embedding, and maps of `C_!` between embedded
/// types correspond bijectively to maps of `C` over `Γ`. With `drop_one`,
/// the last `C_!` map is withheld from the enumeration (a negative control).
pub fn check_equivalence(model: &dyn Model, bounds: &Bounds, drop_one: bool) -> Report {
    let bang = Bang::new(model);
    let mut report = Report::new(format!("equivalence[{}]", model.name()));
    for gamma in crate::compcat::contexts(bounds.max_ctx.min(2)) {
        let types = model.types_over(&gamma, bounds.max_fiber);
        for a in &types {
            let ra = bang.realize(&bang.embed(a));
            let ok = matches!(&ra, Ok(l) if l.top.is_bijective() && l.src.fiber_sizes() == a.fiber_sizes());
            report.check(ok, || format!("{a:?} is not isomorphic to its embedding"));
        }
        for a in &types {
            for b in &types {
                let outcome = (|| -> Result<Option<String>, ModelError> {
                    let (ea, eb) = (bang.embed(a), bang.embed(b));
                    let mut local = bang.local_type_maps(&eb, &ea)?;
                    if drop_one {
                        local.pop();
                    }
                    let plain = maps_over(b.display(), a.display());
                    let (la, lb) = (bang.realize(&ea)?, bang.realize(&eb)?);
                    // transport along the realization isos
                    let mut image = std::collections::BTreeSet::new();
                    for m in &local {
                        let back = invert(&lb.top)?;
                        image.insert(la.top.after(&m.map).after(&back));
                    }
                    if image.len() != local.len() || image.len() != plain.len() || plain.iter().any(|f| !image.contains(f)) {
                        return Ok(Some(format!(
                            "{} maps of C_! vs {} maps of C from {b:?} to {a:?}",
                            local.len(),
                            plain.len()
                        )));
                    }
                    Ok(None)
                })();
                record(&mut report, outcome);
            }
        }
    }
    report
}

fn invert(f: &FinFun) -> Result<FinFun, ModelError> {
    if !f.is_bijective() {
        return Err(ModelError::Invalid(format!("{f} is not invertible")));
    }
    Ok(FinFun::from_pairs(f.cod().clone(), f.dom().clone(), f.pairs().map(|(a, b)| (b.clone(), a.clone())))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FamModel, PullbackModel};

    fn a(s: &str) -> Val {
        Val::atom(s)
    }

    #[test]
    fn reindex_examples() {
        let m = PullbackModel;
        let bang = Bang::new(&m);
        let v = FinSet::atoms("v", 2);
        let u = Universe::new(m.family(&v, &[3, 1]));
        let g = FinSet::atoms("g", 2);
        let name = FinFun::new(g.clone(), v.clone(), |x| if *x == a("g0") { a("v0") } else { a("v1") }).unwrap();
        let t = LocalType::new(u.clone(), name).unwrap();
        assert_eq!(bang.reindex(&t, &FinFun::identity(&g)).unwrap(), t);
        assert_eq!(bang.comprehension(&t).unwrap().dom().len(), 4);

        let empty = FinFun::new(FinSet::empty(), g.clone(), |_| unreachable!()).unwrap();
        let te = bang.reindex(&t, &empty).unwrap();
        assert!(te.name.dom().is_empty());
        assert!(bang.realize(&te).unwrap().src.total().is_empty());

        let all_empty = LocalType::new(Universe::new(m.family(&v, &[0, 0])), t.name.clone()).unwrap();
        assert!(bang.comprehension(&all_empty).unwrap().dom().is_empty());
    }

    #[test]
    fn embed_examples() {
        for m in [&FamModel as &dyn Model, &PullbackModel] {
            let bang = Bang::new(m);
            let g = FinSet::atoms("g", 2);
            let x = m.family(&g, &[2, 1]);
            let e = bang.embed(&x);
            assert!(e.name.is_identity());
            assert_eq!(bang.comprehension(&e).unwrap(), *x.display());
            for sigma in crate::compcat::substitutions_into(&g, 2) {
                let r = bang.reindex(&e, &sigma).unwrap();
                assert_eq!(r, LocalType::new(Universe::new(x.clone()), sigma.clone()).unwrap());
            }
        }
    }

    #[test]
    fn bang_is_split_over_pullbacks() {
        let r = check_bang_splitness(&PullbackModel, &Bounds::smoke(), 20);
        assert!(r.passed(), "{r}");
        assert!(r.cases > 100);
    }

    #[test]
    fn equivalence_and_its_negative_control() {
        let b = Bounds { max_ctx: 2, max_fiber: 2, ..Bounds::smoke() };
        for m in [&FamModel as &dyn Model, &PullbackModel] {
            assert!(check_equivalence(m, &b, false).passed());
            assert!(!check_equivalence(m, &b, true).passed());
        }
        let empty = Bounds { max_ctx: 0, ..b };
        assert!(check_equivalence(&PullbackModel, &empty, false).passed());
    }

    #[test]
    fn spread_keeps_ends() {
        let xs: Vec<usize> = (0..10).collect();
        assert_eq!(spread(&xs, 3), vec![0, 4, 9]);
        assert_eq!(spread(&xs, 20).len(), 10);
    }
}
