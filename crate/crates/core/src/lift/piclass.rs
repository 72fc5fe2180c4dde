//! Stable classes of Π-types: which witnesses and λ-abstractions count as
//! good, and a chooser returning a good one.

use crate::compcat::{substitutions_into, Model, ModelError, PiWitness, TypeOver};
use crate::finval::{choice_count, FinFun, Val};
use crate::lift::map_total;
use crate::models::elim;

pub trait StableClassPi: Send + Sync {
    fn name(&self) -> &'static str;
    fn good_pi(&self, model: &dyn Model, w: &PiWitness) -> bool;
    fn good_lambda(&self, w: &PiWitness, t: &FinFun, candidate: &FinFun) -> bool {
        beta_holds(w, t, candidate)
    }
    fn choose_pi(&self, model: &dyn Model, a: &TypeOver, b: &TypeOver) -> Result<PiWitness, ModelError> {
        let w = model.pi(a, b)?;
        if !self.good_pi(model, &w) {
            return Err(ModelError::Invalid(format!("the provided Π-type is not in the {} class", self.name())));
        }
        Ok(w)
    }
    /// The first element of each Π-fiber satisfying β.
    fn choose_lambda(&self, w: &PiWitness, t: &FinFun) -> Result<FinFun, ModelError> {
        elim::lambda(&w.pi, &w.a, &w.at_a, &w.app, t)
    }
}

/// Where a stable class comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PiSource {
    /// Every weakly stable Π-type is good.
    AllWeaklyStable,
    /// Π-types whose application exhibits each fiber as the set of sections.
    PseudoStable,
}

pub struct PiClass {
    pub source: PiSource,
}

pub fn derive_stable_class(source: PiSource) -> PiClass {
    PiClass { source }
}

impl StableClassPi for PiClass {
    fn name(&self) -> &'static str {
        match self.source {
            PiSource::AllWeaklyStable => "weakly-stable",
            PiSource::PseudoStable => "pseudo-stable",
        }
    }

    fn good_pi(&self, model: &dyn Model, w: &PiWitness) -> bool {
        match self.source {
            PiSource::AllWeaklyStable => substitutions_into(w.pi.ctx(), 1)
                .iter()
                .chain([&FinFun::identity(w.pi.ctx())])
                .all(|sigma| matches!(reindex_pi(model, w, sigma), Ok(r) if admits_all_lambdas(&r))),
            PiSource::PseudoStable => represents_sections(w),
        }
    }
}

/// `app ∘ (λ along χ(A)) = t`.
pub fn beta_holds(w: &PiWitness, t: &FinFun, candidate: &FinFun) -> bool {
    if !w.pi.is_section(candidate) {
        return false;
    }
    match w.at_a.pull_section(candidate) {
        Ok(s) => w.app.after(&s) == *t,
        Err(_) => false,
    }
}

/// Every section of `B` has some λ-abstraction. Sections split over the
/// points of `Γ`, so this asks that application reach every family of
/// `B`-elements over each `A`-fiber.
pub fn admits_all_lambdas(w: &PiWitness) -> bool {
    w.pi.ctx().iter().all(|gamma| {
        let xs = w.a.fiber(gamma);
        let options: Vec<Vec<Val>> = xs.iter().map(|x| w.b.fiber(x).to_vec()).collect();
        let mut reached = std::collections::BTreeSet::new();
        for p in w.pi.fiber(gamma) {
            let graph: Option<Vec<Val>> = xs.iter().map(|x| w.at_a.element(x, p).map(|q| w.app.apply(q).clone())).collect();
            match graph {
                Some(g) if g.iter().zip(&options).all(|(v, o)| o.contains(v)) => {
                    reached.insert(g);
                }
                _ => return false,
            }
        }
        reached.len() == choice_count(&options)
    })
}

/// Each Π-fiber over `γ` corresponds bijectively, through application, to
/// the sections of `B` over the `A`-fiber of `γ`.
pub fn represents_sections(w: &PiWitness) -> bool {
    w.pi.ctx().iter().all(|gamma| {
        let xs = w.a.fiber(gamma);
        let options: Vec<Vec<Val>> = xs.iter().map(|x| w.b.fiber(x).to_vec()).collect();
        let fiber = w.pi.fiber(gamma);
        if fiber.len() != choice_count(&options) {
            return false;
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in fiber {
            let mut graph = Vec::new();
            for x in xs {
                match w.at_a.element(x, p) {
                    Some(q) => graph.push(w.app.apply(q).clone()),
                    None => return false,
                }
            }
            seen.insert(graph);
        }
        seen.len() == fiber.len()
    })
}

/// Reindexes a Π-witness along `σ`, with application induced by the lifts.
pub fn reindex_pi(model: &dyn Model, w: &PiWitness, sigma: &FinFun) -> Result<PiWitness, ModelError> {
    let lp = model.reindex(&w.pi, sigma)?;
    let la = model.reindex(&w.a, sigma)?;
    let lb = model.reindex(&w.b, &la.top)?;
    let at_a = model.reindex(&lp.src, la.src.display())?;
    let app = map_total(at_a.src.total(), lb.src.total(), |q| {
        let x2 = at_a.src.point_of(q);
        let p = lp.top.apply(at_a.top.apply(q));
        let x = la.top.apply(x2);
        let q0 = w.at_a.element(x, p).ok_or_else(|| ModelError::Invalid(format!("no application at {x}")))?;
        lb.element(x2, w.app.apply(q0)).cloned().ok_or_else(|| ModelError::Invalid(format!("no result over {x2}")))
    })?;
    Ok(PiWitness { a: la.src, b: lb.src, pi: lp.src, at_a, app })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finval::FinSet;
    use crate::models::{FamModel, PullbackModel};

    fn pool(m: &dyn Model) -> Vec<PiWitness> {
        let mut out = Vec::new();
        for n in 0..=2 {
            let g = FinSet::atoms("g", n);
            for a in m.types_over(&g, 2) {
                for b in m.types_over(a.total(), 2).into_iter().step_by(3) {
                    out.push(m.pi(&a, &b).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn classes_are_nonempty_and_reindexing_closed() {
        for (m, src) in [(&PullbackModel as &dyn Model, PiSource::AllWeaklyStable), (&FamModel, PiSource::PseudoStable)] {
            let class = derive_stable_class(src);
            for w in pool(m) {
                let chosen = class.choose_pi(m, &w.a, &w.b).unwrap();
                for t in w.b.sections().into_iter().take(4) {
                    let l = class.choose_lambda(&chosen, &t).unwrap();
                    assert!(class.good_lambda(&chosen, &t, &l));
                }
                for sigma in substitutions_into(w.pi.ctx(), 2) {
                    let r = reindex_pi(m, &chosen, &sigma).unwrap();
                    assert!(class.good_pi(m, &r), "{} not closed under {sigma}", class.name());
                }
            }
        }
    }

    #[test]
    fn sources_agree_on_empty_fibers() {
        let g = FinSet::atoms("g", 2);
        for m in [&FamModel as &dyn Model, &PullbackModel] {
            let a = m.family(&g, &[0, 0]);
            let b = m.family(a.total(), &[]);
            let w = m.pi(&a, &b).unwrap();
            assert!(derive_stable_class(PiSource::AllWeaklyStable).good_pi(m, &w));
            assert!(derive_stable_class(PiSource::PseudoStable).good_pi(m, &w));
            assert_eq!(w.pi.fiber_sizes(), vec![1, 1]);
        }
    }
}
