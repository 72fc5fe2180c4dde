//! Eliminators computed on demand from (possibly reindexed) witness data.
//!
//! Each eliminator is found constructively. Sums, dependent sums, the unit
//! and identity types eliminate by locating the unique preimage of a point
//! under the introduction maps; λ-abstraction searches the Π-fiber for an
//! element satisfying β. When no suitable element exists the data was not a
//! valid witness.

use crate::compcat::{CartesianLift, ModelError, TypeOver};
use crate::finval::{FinFun, Val};

/// One case of an elimination: an introduction map `intro : X → K` into the
/// context `K` of the motive, the lift `C[intro] → C`, and the given section
/// `d` of `C[intro]`.
pub type Case<'a> = (&'a FinFun, &'a CartesianLift, &'a FinFun);

/// The section `t` of `target` (a type over `K`) with `t ∘ intro_i = d_i`
/// for every case, defined by case analysis. Each point of `K` must be the
/// image of exactly one element across all cases.
pub fn extend(target: &TypeOver, cases: &[Case<'_>]) -> Result<FinFun, ModelError> {
    extend_over(target.ctx(), target, cases)
}

/// As [`extend`], with the context spelled out (useful when `cases` is
/// empty and the target must still be named).
pub fn extend_over(ctx: &crate::finval::FinSet, target: &TypeOver, cases: &[Case<'_>]) -> Result<FinFun, ModelError> {
    let mut values: Vec<Option<Val>> = vec![None; ctx.len()];
    for (intro, lift, d) in cases {
        if lift.dst != *target || lift.over != **intro {
            return Err(ModelError::IllTyped("case does not lie over its introduction map".into()));
        }
        if d.dom() != intro.dom() || d.cod() != lift.src.total() {
            return Err(ModelError::IllTyped("case is not a section of the reindexed motive".into()));
        }
        for (x, k) in intro.pairs() {
            let Some(i) = ctx.index_of(k) else {
                return Err(ModelError::IllTyped(format!("{k} is outside the motive's context")));
            };
            if values[i].is_some() {
                return Err(ModelError::Invalid(format!("{k} is introduced twice")));
            }
            values[i] = Some(lift.top.apply(d.apply(x)).clone());
        }
    }
    let mut images = Vec::with_capacity(ctx.len());
    for (k, v) in ctx.iter().zip(values) {
        match v {
            Some(v) => images.push(v),
            None => return Err(ModelError::Invalid(format!("{k} is not introduced by any case"))),
        }
    }
    Ok(FinFun::from_images(ctx.clone(), target.total().clone(), images)?)
}

/// λ-abstraction: for each `γ`, the first element `p` of the Π-fiber such
/// that `app` at `(x, p)` returns `t(x)` for every `x` over `γ`.
///
/// `at_a` is `Π[χ(A)]` with `app` defined on its total space, and `t` is a
/// section of `B` over `Γ.A`.
pub fn lambda(pi: &TypeOver, a: &TypeOver, at_a: &CartesianLift, app: &FinFun, t: &FinFun) -> Result<FinFun, ModelError> {
    if t.dom() != a.total() || app.dom() != at_a.src.total() {
        return Err(ModelError::IllTyped("λ body or application is not over Γ.A".into()));
    }
    let mut images = Vec::with_capacity(pi.ctx().len());
    for gamma in pi.ctx().iter() {
        let found = pi.fiber(gamma).iter().find(|p| {
            a.fiber(gamma).iter().all(|x| match at_a.element(x, p) {
                Some(q) => app.apply(q) == t.apply(x),
                None => false,
            })
        });
        match found {
            Some(p) => images.push(p.clone()),
            None => return Err(ModelError::Invalid(format!("no λ-abstraction over {gamma}"))),
        }
    }
    Ok(FinFun::from_images(pi.ctx().clone(), pi.total().clone(), images)?)
}

/// The absurd eliminator: the empty section over an empty context.
pub fn absurd(target: &TypeOver) -> Result<FinFun, ModelError> {
    extend(target, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compcat::Model;
    use crate::finval::FinSet;
    use crate::models::{FamModel, PullbackModel};

    fn copair_case(model: &dyn Model) {
        let g = FinSet::atoms("g", 1);
        let a = model.family(&g, &[1]);
        let b = model.family(&g, &[1]);
        let w = model.sum(&a, &b).unwrap();
        assert_eq!(w.sum.total().len(), 2);
        let c = model.family(w.sum.total(), &[2, 2]);
        let l1 = model.reindex(&c, &w.inl).unwrap();
        let l2 = model.reindex(&c, &w.inr).unwrap();
        let d1 = l1.src.sections()[0].clone();
        let d2 = l2.src.sections()[1].clone();
        let t = extend(&c, &[(&w.inl, &l1, &d1), (&w.inr, &l2, &d2)]).unwrap();
        assert!(c.is_section(&t));
        assert_eq!(l1.pull_section(&t).unwrap(), d1);
        assert_eq!(l2.pull_section(&t).unwrap(), d2);
    }

    #[test]
    fn copair_agrees_with_cases() {
        copair_case(&FamModel);
        copair_case(&PullbackModel);
    }

    #[test]
    fn missing_case_is_invalid() {
        let m = PullbackModel;
        let g = FinSet::atoms("g", 1);
        let a = m.family(&g, &[1]);
        let w = m.sum(&a, &a).unwrap();
        let c = m.family(w.sum.total(), &[1, 1]);
        let l1 = m.reindex(&c, &w.inl).unwrap();
        let d1 = l1.src.sections()[0].clone();
        assert!(matches!(extend(&c, &[(&w.inl, &l1, &d1)]), Err(ModelError::Invalid(_))));
    }

    #[test]
    fn j_on_diagonal_identity() {
        for model in [&FamModel as &dyn Model, &PullbackModel] {
            let g = FinSet::atoms("g", 2);
            let a = model.family(&g, &[2, 1]);
            let w = model.id(&a).unwrap();
            let c = model.family(w.id.total(), &[2, 1, 2]);
            let lc = model.reindex(&c, &w.refl).unwrap();
            for d in lc.src.sections() {
                let j = extend(&c, &[(&w.refl, &lc, &d)]).unwrap();
                assert_eq!(lc.pull_section(&j).unwrap(), d);
            }
        }
    }

    #[test]
    fn beta_round_trip() {
        for model in [&FamModel as &dyn Model, &PullbackModel] {
            let g = FinSet::atoms("g", 1);
            let a = model.family(&g, &[2]);
            let b = model.family(a.total(), &[2, 2]);
            let w = model.pi(&a, &b).unwrap();
            assert_eq!(w.pi.total().len(), 4);
            for t in b.sections() {
                let l = lambda(&w.pi, &a, &w.at_a, &w.app, &t).unwrap();
                let back = w.app.after(&w.at_a.pull_section(&l).unwrap());
                assert_eq!(back, t);
            }
        }
    }
}
