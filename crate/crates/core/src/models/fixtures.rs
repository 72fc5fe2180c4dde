//! Deliberately broken structure, used to show that each checker can fail.

use crate::compcat::{
    CartesianLift, IdAction, IdWitness, Model, ModelError, PiWitness, SigmaWitness, SumWitness, TypeOver, UnitWitness,
    WWitness, ZeroWitness,
};
use crate::finval::{dep_exp, DepExp, FinError, FinFun, FinSet, Val};

/// Wraps a model so that every non-identity reindexing loses the last
/// element of its apex. The result still commutes but is no pullback.
pub struct CorruptedLift<M>(pub M);

impl<M: Model> Model for CorruptedLift<M> {
    fn name(&self) -> &'static str {
        "corrupted-lift"
    }

    fn reindex(&self, a: &TypeOver, sigma: &FinFun) -> Result<CartesianLift, ModelError> {
        let lift = self.0.reindex(a, sigma)?;
        if sigma.is_identity() || lift.src.total().is_empty() {
            return Ok(lift);
        }
        let kept: Vec<Val> = lift.src.total().elements()[..lift.src.total().len() - 1].to_vec();
        let total = FinSet::new(kept);
        let display = FinFun::new(total.clone(), lift.src.ctx().clone(), |e| lift.src.point_of(e).clone())?;
        let top = FinFun::new(total, a.total().clone(), |e| lift.top.apply(e).clone())?;
        CartesianLift::new(TypeOver::new(display), a.clone(), sigma.clone(), top)
    }

    fn family(&self, ctx: &FinSet, sizes: &[usize]) -> TypeOver {
        self.0.family(ctx, sizes)
    }

    fn sum(&self, a: &TypeOver, b: &TypeOver) -> Result<SumWitness, ModelError> {
        self.0.sum(a, b)
    }

    fn pi(&self, a: &TypeOver, b: &TypeOver) -> Result<PiWitness, ModelError> {
        self.0.pi(a, b)
    }

    fn sigma(&self, a: &TypeOver, b: &TypeOver) -> Result<SigmaWitness, ModelError> {
        self.0.sigma(a, b)
    }

    fn id(&self, a: &TypeOver) -> Result<IdWitness, ModelError> {
        self.0.id(a)
    }

    fn unit(&self, ctx: &FinSet) -> Result<UnitWitness, ModelError> {
        self.0.unit(ctx)
    }

    fn zero(&self, ctx: &FinSet) -> Result<ZeroWitness, ModelError> {
        self.0.zero(ctx)
    }

    fn w(&self, a: &TypeOver, b: &TypeOver) -> Result<WWitness, ModelError> {
        self.0.w(a, b)
    }
}

/// A sum whose object misses the first right-hand element; `inr` sends it
/// to the first left-hand element over the same point, when one exists.
pub fn dropping_sum(model: &dyn Model, a: &TypeOver, b: &TypeOver) -> Result<SumWitness, ModelError> {
    let w = model.sum(a, b)?;
    let Some(y0) = b.total().iter().next() else {
        return Ok(w);
    };
    let dropped = w.inr.apply(y0).clone();
    let Some(x0) = a.fiber(b.point_of(y0)).first() else {
        return Err(ModelError::Invalid("no left element to collapse onto".into()));
    };
    let replacement = w.inl.apply(x0).clone();
    let total = FinSet::new(w.sum.total().iter().filter(|e| **e != dropped).cloned());
    let sum = TypeOver::new(FinFun::new(total.clone(), w.sum.ctx().clone(), |e| w.sum.point_of(e).clone())?);
    let inl = w.inl.with_cod(total.clone())?;
    let inr = FinFun::new(b.total().clone(), total, |y| {
        if y == y0 {
            replacement.clone()
        } else {
            w.inr.apply(y).clone()
        }
    })?;
    Ok(SumWitness { sum, inl, inr, ..w })
}

/// An identity type with one extra loop over the first diagonal point.
pub fn loopy_id(model: &dyn Model, a: &TypeOver) -> Result<IdWitness, ModelError> {
    let w = model.id(a)?;
    let Some(x0) = a.total().iter().next() else {
        return Ok(w);
    };
    let point = w.id.point_of(w.refl.apply(x0)).clone();
    let extra = Val::pair(point.clone(), Val::tag("loop", x0.clone()));
    let pts = w.id.display().pairs().map(|(e, g)| (e.clone(), g.clone())).chain([(extra, point)]);
    let id = TypeOver::from_points(w.id.ctx(), pts)?;
    let refl = w.refl.with_cod(id.total().clone())?;
    Ok(IdWitness { id, refl, ..w })
}

/// A dependent exponential whose evaluation sends everything to the first
/// element of the right fiber.
pub fn corrupted_eval(f: &FinFun, g: &FinFun) -> Result<DepExp, FinError> {
    let mut e = dep_exp(f, g)?;
    let fibers = g.fibers();
    e.eval = FinFun::new(e.eval.dom().clone(), g.dom().clone(), |p| {
        let z = e.eval.apply(p);
        fibers[g.cod().index_of(g.apply(z)).unwrap()][0].clone()
    })?;
    Ok(e)
}

/// An identity-type action that ignores the lift and sends every element of
/// `Id_{A[σ]}` to reflexivity at the first element of `A` over the same
/// context point. It breaks commutation with reflexivity.
pub struct CollapsingAction;

impl IdAction for CollapsingAction {
    fn act(&self, model: &dyn Model, a: &TypeOver, sigma: &FinFun) -> Result<FinFun, ModelError> {
        let w = model.id(a)?;
        let la = model.reindex(a, sigma)?;
        let w2 = model.id(&la.src)?;
        let mut pairs = Vec::new();
        for x in la.src.total().iter() {
            let target = la.top.apply(x);
            let first = a.fiber(a.point_of(target))[0].clone();
            pairs.push((w2.refl.apply(x).clone(), w.refl.apply(&first).clone()));
        }
        Ok(FinFun::from_pairs(w2.id.total().clone(), w.id.total().clone(), pairs)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compcat::{
        check_beck_chevalley_id, check_fibration_axioms, check_pseudo_action, check_weak_stability_sum,
        substitutions_into, ReflAction,
    };
    use crate::finval::check_lf_with;
    use crate::models::{FamModel, PullbackModel};
    use crate::report::Bounds;

    #[test]
    fn corrupted_lift_fails_fibration_axioms() {
        let r = check_fibration_axioms(&CorruptedLift(PullbackModel), &Bounds::smoke());
        assert!(!r.passed());
        assert!(r.witness.unwrap().contains("not a pullback"));
    }

    #[test]
    fn dropping_sum_is_not_weakly_stable() {
        let g = FinSet::singleton(Val::atom("g"));
        let m = PullbackModel;
        let w = dropping_sum(&m, &m.family(&g, &[1]), &m.family(&g, &[1])).unwrap();
        assert_eq!(w.sum.total().len(), 1);
        assert!(!check_weak_stability_sum(&m, &w, &Bounds { max_fiber: 2, ..Bounds::smoke() }));
    }

    #[test]
    fn beck_chevalley() {
        for m in [&FamModel as &dyn Model, &PullbackModel] {
            let g = FinSet::atoms("g", 2);
            let a = m.family(&g, &[2, 1]);
            let w = m.id(&a).unwrap();
            for sigma in substitutions_into(&g, 2) {
                assert_eq!(check_beck_chevalley_id(m, &w, &sigma), Ok(true));
            }
            let singles = m.family(&g, &[1, 1]);
            let ws = m.id(&singles).unwrap();
            assert_eq!(check_beck_chevalley_id(m, &ws, &FinFun::identity(&g)), Ok(true));
            let bad = loopy_id(m, &a).unwrap();
            assert_eq!(check_beck_chevalley_id(m, &bad, &FinFun::identity(&g)), Ok(false));
        }
    }

    #[test]
    fn corrupted_eval_fails_lf() {
        let r = check_lf_with(&Bounds { max_ctx: 1, max_fiber: 2, ..Bounds::smoke() }, corrupted_eval);
        assert!(!r.passed());
    }

    #[test]
    fn pseudo_actions() {
        let b = Bounds::smoke();
        assert!(check_pseudo_action(&FamModel, &ReflAction, &b, true).passed());
        assert!(check_pseudo_action(&PullbackModel, &ReflAction, &b, true).passed());
        let collapsing = check_pseudo_action(&PullbackModel, &CollapsingAction, &Bounds { max_fiber: 2, ..b }, true);
        assert!(!collapsing.passed());
    }
}
