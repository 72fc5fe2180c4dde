//! The model's own constructors, called directly over `Γ`.

use std::sync::Arc;

use crate::compcat::{CartesianLift, Model, ModelError, TypeOver};
use crate::finval::{FinFun, FinSet};
use crate::lift::piclass::{derive_stable_class, PiSource, StableClassPi};
use crate::lift::SplitSuite;
use crate::models::elim;
use crate::report::Bounds;

pub struct DirectSuite<'m> {
    pub model: &'m dyn Model,
    pub pi_class: Arc<dyn StableClassPi>,
}

impl<'m> DirectSuite<'m> {
    pub fn new(model: &'m dyn Model) -> Self {
        DirectSuite { model, pi_class: Arc::new(derive_stable_class(PiSource::PseudoStable)) }
    }
}

impl SplitSuite for DirectSuite<'_> {
    type Ty = TypeOver;

    fn label(&self) -> String {
        format!("direct[{}]", self.model.name())
    }

    fn ctx_of(&self, a: &TypeOver) -> FinSet {
        a.ctx().clone()
    }

    fn realize(&self, a: &TypeOver) -> Result<TypeOver, ModelError> {
        Ok(a.clone())
    }

    fn reindex(&self, a: &TypeOver, sigma: &FinFun) -> Result<TypeOver, ModelError> {
        Ok(self.model.reindex(a, sigma)?.src)
    }

    fn lift(&self, a: &TypeOver, sigma: &FinFun) -> Result<CartesianLift, ModelError> {
        self.model.reindex(a, sigma)
    }

    fn types_over(&self, ctx: &FinSet, bounds: &Bounds, limit: usize) -> Vec<TypeOver> {
        self.model.types_spread(ctx, bounds.max_fiber, limit)
    }

    fn sum_form(&self, a: &TypeOver, b: &TypeOver) -> Result<TypeOver, ModelError> {
        Ok(self.model.sum(a, b)?.sum)
    }

    fn sum_inl(&self, a: &TypeOver, b: &TypeOver) -> Result<FinFun, ModelError> {
        Ok(self.model.sum(a, b)?.inl)
    }

    fn sum_inr(&self, a: &TypeOver, b: &TypeOver) -> Result<FinFun, ModelError> {
        Ok(self.model.sum(a, b)?.inr)
    }

    fn sum_copair(&self, a: &TypeOver, b: &TypeOver, c: &TypeOver, d1: &FinFun, d2: &FinFun) -> Result<FinFun, ModelError> {
        let w = self.model.sum(a, b)?;
        let l1 = self.model.reindex(c, &w.inl)?;
        let l2 = self.model.reindex(c, &w.inr)?;
        elim::extend(c, &[(&w.inl, &l1, d1), (&w.inr, &l2, d2)])
    }

    fn pi_form(&self, a: &TypeOver, b: &TypeOver) -> Result<TypeOver, ModelError> {
        Ok(self.pi_class.choose_pi(self.model, a, b)?.pi)
    }

    fn pi_app(&self, a: &TypeOver, b: &TypeOver) -> Result<FinFun, ModelError> {
        Ok(self.pi_class.choose_pi(self.model, a, b)?.app)
    }

    fn pi_lambda(&self, a: &TypeOver, b: &TypeOver, t: &FinFun) -> Result<FinFun, ModelError> {
        let w = self.pi_class.choose_pi(self.model, a, b)?;
        self.pi_class.choose_lambda(&w, t)
    }

    fn sigma_form(&self, a: &TypeOver, b: &TypeOver) -> Result<TypeOver, ModelError> {
        Ok(self.model.sigma(a, b)?.sigma)
    }

    fn sigma_pair(&self, a: &TypeOver, b: &TypeOver) -> Result<FinFun, ModelError> {
        Ok(self.model.sigma(a, b)?.pair)
    }

    fn sigma_split(&self, a: &TypeOver, b: &TypeOver, c: &TypeOver, d: &FinFun) -> Result<FinFun, ModelError> {
        let w = self.model.sigma(a, b)?;
        let l = self.model.reindex(c, &w.pair)?;
        elim::extend(c, &[(&w.pair, &l, d)])
    }

    fn id_form(&self, a: &TypeOver) -> Result<TypeOver, ModelError> {
        Ok(self.model.id(a)?.id)
    }

    fn id_refl(&self, a: &TypeOver) -> Result<FinFun, ModelError> {
        Ok(self.model.id(a)?.refl)
    }

    fn id_j(&self, a: &TypeOver, delta: &[TypeOver], c: &TypeOver, d: &FinFun) -> Result<FinFun, ModelError> {
        let (rs, _) = self.refl_chain(a, delta)?;
        let r = rs.last().unwrap();
        let l = self.model.reindex(c, r)?;
        elim::extend(c, &[(r, &l, d)])
    }

    fn unit_form(&self, ctx: &FinSet) -> Result<TypeOver, ModelError> {
        Ok(self.model.unit(ctx)?.unit)
    }

    fn unit_tt(&self, ctx: &FinSet) -> Result<FinFun, ModelError> {
        Ok(self.model.unit(ctx)?.tt)
    }

    fn unit_rec(&self, ctx: &FinSet, c: &TypeOver, d: &FinFun) -> Result<FinFun, ModelError> {
        let w = self.model.unit(ctx)?;
        let l = self.model.reindex(c, &w.tt)?;
        elim::extend(c, &[(&w.tt, &l, d)])
    }

    fn zero_form(&self, ctx: &FinSet) -> Result<TypeOver, ModelError> {
        Ok(self.model.zero(ctx)?.zero)
    }

    fn zero_elim(&self, _ctx: &FinSet, c: &TypeOver) -> Result<FinFun, ModelError> {
        elim::absurd(c)
    }

    fn w_form(&self, a: &TypeOver, b: &TypeOver) -> Result<TypeOver, ModelError> {
        Ok(self.model.w(a, b)?.w)
    }
}
