//! The non-split model: every map is a display map and reindexing is the
//! chosen pullback. Its constructors are weakly stable but stamp a context
//! seal into every element they build, so they are never strictly stable.

use crate::compcat::{
    diagonal, CartesianLift, IdWitness, Model, ModelError, PiWitness, SigmaWitness, SumWitness, TypeOver, UnitWitness,
    WWitness, ZeroWitness,
};
use crate::finval::{pullback, Choices, FinFun, FinSet, Val};
use crate::models::fam::trees;
use crate::models::seal::{seal, sealed, unseal};

#[derive(Clone, Copy, Debug, Default)]
pub struct PullbackModel;

fn same_ctx(a: &TypeOver, b: &TypeOver) -> Result<(), ModelError> {
    if a.ctx() != b.ctx() {
        return Err(ModelError::Context("types over different contexts".into()));
    }
    Ok(())
}

fn over_total(a: &TypeOver, b: &TypeOver) -> Result<(), ModelError> {
    if b.ctx() != a.total() {
        return Err(ModelError::Context("dependent type is not over the comprehension".into()));
    }
    Ok(())
}

impl Model for PullbackModel {
    fn name(&self) -> &'static str {
        "pullback"
    }

    fn reindex(&self, a: &TypeOver, sigma: &FinFun) -> Result<CartesianLift, ModelError> {
        if sigma.cod() != a.ctx() {
            return Err(ModelError::Context(format!("{} is not {}", sigma.cod(), a.ctx())));
        }
        // normal cleaving
        if sigma.is_identity() {
            return Ok(CartesianLift::identity(a));
        }
        let pb = pullback(sigma, a.display())?;
        CartesianLift::new(TypeOver::new(pb.leg1), a.clone(), sigma.clone(), pb.leg2)
    }

    fn family(&self, ctx: &FinSet, sizes: &[usize]) -> TypeOver {
        let mut pts = Vec::new();
        let mut k = 0;
        for (g, &n) in ctx.iter().zip(sizes) {
            for _ in 0..n {
                pts.push((Val::atom(&format!("e{k}")), g.clone()));
                k += 1;
            }
        }
        TypeOver::from_points(ctx, pts).unwrap()
    }

    fn sum(&self, a: &TypeOver, b: &TypeOver) -> Result<SumWitness, ModelError> {
        same_ctx(a, b)?;
        let s = seal("sum", a.ctx(), &[&a.to_val(), &b.to_val()]);
        let inl_of = |x: &Val| sealed(&s, "inl", x.clone());
        let inr_of = |y: &Val| sealed(&s, "inr", y.clone());
        let pts = a
            .total()
            .iter()
            .map(|x| (inl_of(x), a.point_of(x).clone()))
            .chain(b.total().iter().map(|y| (inr_of(y), b.point_of(y).clone())));
        let sum = TypeOver::from_points(a.ctx(), pts)?;
        let inl = FinFun::new(a.total().clone(), sum.total().clone(), inl_of)?;
        let inr = FinFun::new(b.total().clone(), sum.total().clone(), inr_of)?;
        Ok(SumWitness { left: a.clone(), right: b.clone(), sum, inl, inr })
    }

    fn pi(&self, a: &TypeOver, b: &TypeOver) -> Result<PiWitness, ModelError> {
        over_total(a, b)?;
        let s = seal("pi", a.ctx(), &[&a.to_val(), &b.to_val()]);
        let mut pts = Vec::new();
        for gamma in a.ctx().iter() {
            let xs = a.fiber(gamma);
            let options: Vec<Vec<Val>> = xs.iter().map(|x| b.fiber(x).to_vec()).collect();
            for choice in Choices::new(&options) {
                let graph = Val::Fn(xs.iter().cloned().zip(choice).collect());
                pts.push((sealed(&s, "lam", Val::pair(gamma.clone(), graph)), gamma.clone()));
            }
        }
        let pi = TypeOver::from_points(a.ctx(), pts)?;
        let at_a = self.reindex(&pi, a.display())?;
        let app = FinFun::new(at_a.src.total().clone(), b.total().clone(), |q| {
            let x = at_a.src.point_of(q);
            let p = at_a.top.apply(q);
            let (_, body) = unseal(p).unwrap();
            body.as_pair().unwrap().1.lookup(x).unwrap().clone()
        })?;
        Ok(PiWitness { a: a.clone(), b: b.clone(), pi, at_a, app })
    }

    fn sigma(&self, a: &TypeOver, b: &TypeOver) -> Result<SigmaWitness, ModelError> {
        over_total(a, b)?;
        let s = seal("sigma", a.ctx(), &[&a.to_val(), &b.to_val()]);
        let pair_of = |y: &Val| sealed(&s, "pair", y.clone());
        let pts = b.total().iter().map(|y| (pair_of(y), a.point_of(b.point_of(y)).clone()));
        let sigma = TypeOver::from_points(a.ctx(), pts)?;
        let pair = FinFun::new(b.total().clone(), sigma.total().clone(), pair_of)?;
        Ok(SigmaWitness { a: a.clone(), b: b.clone(), sigma, pair })
    }

    fn id(&self, a: &TypeOver) -> Result<IdWitness, ModelError> {
        let s = seal("id", a.ctx(), &[&a.to_val()]);
        let aa = self.reindex(a, a.display())?;
        let diag = diagonal(&aa)?;
        let refl_of = |x: &Val| sealed(&s, "refl", x.clone());
        let pts = a.total().iter().map(|x| (refl_of(x), diag.apply(x).clone()));
        let id = TypeOver::from_points(aa.src.total(), pts)?;
        let refl = FinFun::new(a.total().clone(), id.total().clone(), refl_of)?;
        Ok(IdWitness { a: a.clone(), aa, id, refl })
    }

    fn unit(&self, ctx: &FinSet) -> Result<UnitWitness, ModelError> {
        let s = seal("unit", ctx, &[]);
        let tt_of = |g: &Val| sealed(&s, "tt", g.clone());
        let unit = TypeOver::from_points(ctx, ctx.iter().map(|g| (tt_of(g), g.clone())))?;
        let tt = FinFun::new(ctx.clone(), unit.total().clone(), tt_of)?;
        Ok(UnitWitness { unit, tt })
    }

    fn zero(&self, ctx: &FinSet) -> Result<ZeroWitness, ModelError> {
        Ok(ZeroWitness { zero: TypeOver::from_points(ctx, [])? })
    }

    fn w(&self, a: &TypeOver, b: &TypeOver) -> Result<WWitness, ModelError> {
        over_total(a, b)?;
        let s = seal("w", a.ctx(), &[&a.to_val(), &b.to_val()]);
        let sup = |x: &Val, graph: Val| sealed(&s, "sup", Val::pair(x.clone(), graph));
        let mut pts = Vec::new();
        for gamma in a.ctx().iter() {
            let xs = a.fiber(gamma);
            let leaves = xs.iter().filter(|x| b.fiber(x).is_empty()).count();
            if leaves > 0 && leaves < xs.len() {
                return Err(ModelError::Infinite(format!("over {gamma} some positions are leaves and some branch")));
            }
            for t in trees(a, b, gamma, |y| y.clone(), sup) {
                pts.push((t, gamma.clone()));
            }
        }
        let w = TypeOver::from_points(a.ctx(), pts)?;
        let poly = crate::compcat::polynomial(a, b, &w)?;
        let fold = FinFun::new(poly.total().clone(), w.total().clone(), |p| {
            let (x, graph) = crate::compcat::node_parts(p).unwrap();
            sup(x, graph.clone())
        })?;
        Ok(WWitness { a: a.clone(), b: b.clone(), w, poly, fold })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compcat::{check_fibration_axioms, check_splitness, check_weak_stability_sum};
    use crate::report::Bounds;

    #[test]
    fn fibration_but_not_split() {
        let b = Bounds::smoke();
        assert!(check_fibration_axioms(&PullbackModel, &b).passed());
        let r = check_splitness(&PullbackModel, &b);
        assert!(!r.passed());
        assert!(r.witness.unwrap().contains("A[σ∘τ] != A[σ][τ]"));
    }

    #[test]
    fn sums_depend_on_the_context() {
        let g1 = FinSet::atoms("g", 1);
        let g2 = FinSet::atoms("h", 1);
        let m = PullbackModel;
        let s1 = m.sum(&m.family(&g1, &[1]), &m.family(&g1, &[1])).unwrap();
        let s2 = m.sum(&m.family(&g2, &[1]), &m.family(&g2, &[1])).unwrap();
        assert_eq!(s1.sum.total().len(), 2);
        assert_ne!(s1.sum.total(), s2.sum.total());
    }

    #[test]
    fn empty_left_summand() {
        let g = FinSet::atoms("g", 2);
        let m = PullbackModel;
        let w = m.sum(&m.family(&g, &[0, 0]), &m.family(&g, &[1, 2])).unwrap();
        assert!(w.inr.is_bijective());
    }

    #[test]
    fn provider_sum_is_weakly_stable() {
        let g = FinSet::singleton(Val::atom("g"));
        let m = PullbackModel;
        let w = m.sum(&m.family(&g, &[1]), &m.family(&g, &[1])).unwrap();
        assert!(check_weak_stability_sum(&m, &w, &Bounds::smoke()));
    }

    #[test]
    fn id_fibers() {
        let g = FinSet::atoms("g", 1);
        let m = PullbackModel;
        let w = m.id(&m.family(&g, &[2])).unwrap();
        let mut sizes = w.id.fiber_sizes();
        sizes.sort();
        assert_eq!(sizes, vec![0, 0, 1, 1]);
    }
}
