//! The split model of indexed families.
//!
//! A type over `Γ` assigns a finite set to each `γ`; its comprehension is the
//! disjoint union with elements `(γ, a)`. Reindexing is precomposition, so
//! the cleaving is split on the nose. Constructors act on the second
//! components only, which makes them strictly stable.

use crate::compcat::{
    CartesianLift, IdWitness, Model, ModelError, PiWitness, SigmaWitness, SumWitness, TypeOver, UnitWitness, WWitness,
    ZeroWitness,
};
use crate::finval::{Choices, FinFun, FinSet, Val};

#[derive(Clone, Copy, Debug, Default)]
pub struct FamModel;

/// Splits a family element `(γ, a)`.
fn parts(e: &Val) -> Result<(&Val, &Val), ModelError> {
    e.as_pair().ok_or_else(|| ModelError::IllTyped(format!("{e} is not a family element")))
}

fn check_family(a: &TypeOver) -> Result<(), ModelError> {
    for (e, gamma) in a.display().pairs() {
        if parts(e)?.0 != gamma {
            return Err(ModelError::IllTyped(format!("{e} does not lie over its first component {gamma}")));
        }
    }
    Ok(())
}

fn payload(e: &Val) -> &Val {
    e.as_pair().expect("family element").1
}

fn over(ctx: &FinSet, pts: Vec<Val>) -> Result<TypeOver, ModelError> {
    let pairs = pts.into_iter().map(|e| {
        let g = payload_point(&e);
        (e, g)
    });
    Ok(TypeOver::from_points(ctx, pairs)?)
}

fn payload_point(e: &Val) -> Val {
    e.as_pair().expect("family element").0.clone()
}

fn w_regime(a: &TypeOver, b: &TypeOver, gamma: &Val) -> Result<(), ModelError> {
    let xs = a.fiber(gamma);
    let empty = xs.iter().filter(|x| b.fiber(x).is_empty()).count();
    if empty > 0 && empty < xs.len() {
        return Err(ModelError::Infinite(format!("over {gamma} some positions are leaves and some branch")));
    }
    Ok(())
}

/// Trees over each point by iterating `W ↦ {sup(x, f) | f : B(x) → W}` to
/// its fixed point. Only called in finite regimes.
pub(crate) fn trees(
    a: &TypeOver,
    b: &TypeOver,
    gamma: &Val,
    key: impl Fn(&Val) -> Val,
    build: impl Fn(&Val, Val) -> Val,
) -> Vec<Val> {
    let mut current: Vec<Val> = Vec::new();
    loop {
        let mut next = Vec::new();
        for x in a.fiber(gamma) {
            let bs = b.fiber(x);
            let options = vec![current.clone(); bs.len()];
            for choice in Choices::new(&options) {
                let graph = Val::Fn(bs.iter().map(&key).zip(choice).collect());
                next.push(build(x, graph));
            }
        }
        next.sort();
        next.dedup();
        if next == current {
            return current;
        }
        current = next;
    }
}

impl Model for FamModel {
    fn name(&self) -> &'static str {
        "fam"
    }

    fn claims_split(&self) -> bool {
        true
    }

    fn reindex(&self, a: &TypeOver, sigma: &FinFun) -> Result<CartesianLift, ModelError> {
        if sigma.cod() != a.ctx() {
            return Err(ModelError::Context(format!("{} is not {}", sigma.cod(), a.ctx())));
        }
        check_family(a)?;
        let mut pts = Vec::new();
        for delta in sigma.dom().iter() {
            for e in a.fiber(sigma.apply(delta)) {
                pts.push(Val::pair(delta.clone(), payload(e).clone()));
            }
        }
        let src = over(sigma.dom(), pts)?;
        let top = FinFun::new(src.total().clone(), a.total().clone(), |e| {
            let (d, p) = e.as_pair().unwrap();
            Val::pair(sigma.apply(d).clone(), p.clone())
        })?;
        CartesianLift::new(src, a.clone(), sigma.clone(), top)
    }

    fn family(&self, ctx: &FinSet, sizes: &[usize]) -> TypeOver {
        TypeOver::family(ctx, sizes, "a")
    }

    fn sum(&self, a: &TypeOver, b: &TypeOver) -> Result<SumWitness, ModelError> {
        if a.ctx() != b.ctx() {
            return Err(ModelError::Context("summands over different contexts".into()));
        }
        check_family(a)?;
        check_family(b)?;
        let tagged = |t: &str, e: &Val| {
            let (g, p) = e.as_pair().unwrap();
            Val::pair(g.clone(), Val::tag(t, p.clone()))
        };
        let pts = a.total().iter().map(|e| tagged("inl", e)).chain(b.total().iter().map(|e| tagged("inr", e))).collect();
        let sum = over(a.ctx(), pts)?;
        let inl = FinFun::new(a.total().clone(), sum.total().clone(), |e| tagged("inl", e))?;
        let inr = FinFun::new(b.total().clone(), sum.total().clone(), |e| tagged("inr", e))?;
        Ok(SumWitness { left: a.clone(), right: b.clone(), sum, inl, inr })
    }

    fn pi(&self, a: &TypeOver, b: &TypeOver) -> Result<PiWitness, ModelError> {
        if b.ctx() != a.total() {
            return Err(ModelError::Context("codomain family is not over the domain".into()));
        }
        check_family(a)?;
        check_family(b)?;
        let mut pts = Vec::new();
        for gamma in a.ctx().iter() {
            let xs = a.fiber(gamma);
            let options: Vec<Vec<Val>> = xs.iter().map(|x| b.fiber(x).iter().map(|y| payload(y).clone()).collect()).collect();
            for choice in Choices::new(&options) {
                let graph = Val::Fn(xs.iter().map(|x| payload(x).clone()).zip(choice).collect());
                pts.push(Val::pair(gamma.clone(), graph));
            }
        }
        let pi = over(a.ctx(), pts)?;
        let at_a = self.reindex(&pi, a.display())?;
        let app = FinFun::new(at_a.src.total().clone(), b.total().clone(), |q| {
            let (x, graph) = q.as_pair().unwrap();
            Val::pair(x.clone(), graph.lookup(payload(x)).unwrap().clone())
        })?;
        Ok(PiWitness { a: a.clone(), b: b.clone(), pi, at_a, app })
    }

    fn sigma(&self, a: &TypeOver, b: &TypeOver) -> Result<SigmaWitness, ModelError> {
        if b.ctx() != a.total() {
            return Err(ModelError::Context("second component is not over the first".into()));
        }
        check_family(a)?;
        check_family(b)?;
        let pair_of = |y: &Val| {
            let (x, q) = y.as_pair().unwrap();
            let (g, p) = x.as_pair().unwrap();
            Val::pair(g.clone(), Val::pair(p.clone(), q.clone()))
        };
        let sigma = over(a.ctx(), b.total().iter().map(pair_of).collect())?;
        let pair = FinFun::new(b.total().clone(), sigma.total().clone(), pair_of)?;
        Ok(SigmaWitness { a: a.clone(), b: b.clone(), sigma, pair })
    }

    fn id(&self, a: &TypeOver) -> Result<IdWitness, ModelError> {
        check_family(a)?;
        let aa = self.reindex(a, a.display())?;
        let refl_of = |x: &Val| Val::pair(Val::pair(x.clone(), payload(x).clone()), Val::atom("refl"));
        let id = over(aa.src.total(), a.total().iter().map(refl_of).collect())?;
        let refl = FinFun::new(a.total().clone(), id.total().clone(), refl_of)?;
        Ok(IdWitness { a: a.clone(), aa, id, refl })
    }

    fn unit(&self, ctx: &FinSet) -> Result<UnitWitness, ModelError> {
        let tt_of = |g: &Val| Val::pair(g.clone(), Val::atom("tt"));
        let unit = over(ctx, ctx.iter().map(tt_of).collect())?;
        let tt = FinFun::new(ctx.clone(), unit.total().clone(), tt_of)?;
        Ok(UnitWitness { unit, tt })
    }

    fn zero(&self, ctx: &FinSet) -> Result<ZeroWitness, ModelError> {
        Ok(ZeroWitness { zero: over(ctx, Vec::new())? })
    }

    fn w(&self, a: &TypeOver, b: &TypeOver) -> Result<WWitness, ModelError> {
        if b.ctx() != a.total() {
            return Err(ModelError::Context("arities are not over the shapes".into()));
        }
        check_family(a)?;
        check_family(b)?;
        let sup = |x: &Val, graph: Val| Val::tag("sup", Val::pair(payload(x).clone(), graph));
        let mut pts = Vec::new();
        for gamma in a.ctx().iter() {
            w_regime(a, b, gamma)?;
            for t in trees(a, b, gamma, |y| payload(y).clone(), sup) {
                pts.push(Val::pair(gamma.clone(), t));
            }
        }
        let w = over(a.ctx(), pts)?;
        let (poly, fold) = fam_polynomial(a, b, &w)?;
        Ok(WWitness { a: a.clone(), b: b.clone(), w, poly, fold })
    }
}

/// `Σ_{x:A} (B(x) → W)` in family form, with its fold into `W`.
fn fam_polynomial(a: &TypeOver, b: &TypeOver, w: &TypeOver) -> Result<(TypeOver, FinFun), ModelError> {
    let mut pts = Vec::new();
    let mut folds = Vec::new();
    for x in a.total().iter() {
        let (gamma, p) = parts(x)?;
        let bs = b.fiber(x);
        let options = vec![w.fiber(gamma).to_vec(); bs.len()];
        for choice in Choices::new(&options) {
            let graph = Val::Fn(bs.iter().cloned().zip(choice.iter().cloned()).collect());
            let element = Val::pair(gamma.clone(), crate::compcat::node(x.clone(), graph));
            let payload_graph = Val::Fn(bs.iter().map(|y| payload(y).clone()).zip(choice.iter().map(|t| payload(t).clone())).collect());
            let tree = Val::pair(gamma.clone(), Val::tag("sup", Val::pair(p.clone(), payload_graph)));
            folds.push((element.clone(), tree));
            pts.push(element);
        }
    }
    let poly = over(a.ctx(), pts)?;
    let fold = FinFun::from_pairs(poly.total().clone(), w.total().clone(), folds)?;
    Ok((poly, fold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compcat::check_splitness;
    use crate::report::Bounds;

    fn a(s: &str) -> Val {
        Val::atom(s)
    }

    #[test]
    fn sum_fiber_is_disjoint_union() {
        let g = FinSet::singleton(a("g"));
        let x = TypeOver::from_points(&g, [(Val::pair(a("g"), a("a")), a("g"))]).unwrap();
        let y = TypeOver::from_points(&g, [(Val::pair(a("g"), a("b")), a("g")), (Val::pair(a("g"), a("c")), a("g"))]).unwrap();
        assert_eq!(FamModel.sum(&x, &y).unwrap().sum.fiber(&a("g")).len(), 3);
    }

    #[test]
    fn pi_counts_sections() {
        let g = FinSet::atoms("g", 1);
        let x = FamModel.family(&g, &[2]);
        let y = FamModel.family(x.total(), &[2, 2]);
        assert_eq!(FamModel.pi(&x, &y).unwrap().pi.fiber_sizes(), vec![4]);
    }

    #[test]
    fn id_is_diagonal() {
        let g = FinSet::atoms("g", 1);
        let x = FamModel.family(&g, &[2]);
        let w = FamModel.id(&x).unwrap();
        assert_eq!(w.aa.src.total().len(), 4);
        let sizes = w.id.fiber_sizes();
        assert_eq!(sizes.iter().sum::<usize>(), 2);
        let diag = w.diagonal().unwrap();
        for e in x.total().iter() {
            assert_eq!(w.id.fiber(diag.apply(e)).len(), 1);
        }
    }

    #[test]
    fn w_degenerate_regimes() {
        let g = FinSet::atoms("g", 2);
        let x = FamModel.family(&g, &[2, 1]);
        let branching = FamModel.family(x.total(), &[1, 2, 1]);
        assert!(FamModel.w(&x, &branching).unwrap().w.total().is_empty());
        let leaves = FamModel.family(x.total(), &[0, 0, 0]);
        let w = FamModel.w(&x, &leaves).unwrap();
        assert_eq!(w.w.fiber_sizes(), vec![2, 1]);
        assert!(w.fold.is_bijective());
        let mixed = FamModel.family(x.total(), &[0, 1, 0]);
        assert!(matches!(FamModel.w(&x, &mixed), Err(ModelError::Infinite(_))));
    }

    #[test]
    fn fam_is_split() {
        let r = check_splitness(&FamModel, &Bounds::smoke());
        assert!(r.passed(), "{r}");
    }
}
