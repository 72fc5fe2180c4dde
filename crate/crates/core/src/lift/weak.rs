//! Weak stability of a model's providers, certified by brute force: after
//! every substitution in the pool, the reindexed witness still has its
//! universal property, with eliminators found by exhaustive search over
//! sections rather than by the constructive eliminators.

use crate::bang::spread;
use crate::compcat::{
    check_beck_chevalley_id, contexts, induced, reindex_id, reindex_sum, search_copair, substitutions_into, IdWitness,
    Model, ModelError, SumWitness, TypeOver,
};
use crate::finval::{FinFun, FinSet};
use crate::lift::piclass::{admits_all_lambdas, beta_holds, reindex_pi};
use crate::lift::pull_over;
use crate::lift::stability::Thinning;
use crate::models::elim;
use crate::report::{Bounds, Report};

pub type SumProvider<'a> = &'a dyn Fn(&dyn Model, &TypeOver, &TypeOver) -> Result<SumWitness, ModelError>;
pub type IdProvider<'a> = &'a dyn Fn(&dyn Model, &TypeOver) -> Result<IdWitness, ModelError>;

type Outcome = Result<Option<String>, ModelError>;

fn record(report: &mut Report, outcome: Outcome) {
    match outcome {
        Ok(None) => report.pass(),
        Ok(Some(w)) => report.fail(|| w),
        Err(e) => report.fail(|| e.to_string()),
    }
}

/// The first section `t` of `c` whose pullback along `intro` is `d`.
fn search_section(model: &dyn Model, c: &TypeOver, intro: &FinFun, d: &FinFun) -> Result<Option<FinFun>, ModelError> {
    let l = model.reindex(c, intro)?;
    for t in c.sections() {
        if l.pull_section(&t)? == *d {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Every motive `c` in the thinned pool over `intro`'s codomain and every
/// thinned section `d` of `c[intro]` admits some `t`.
fn eliminates(model: &dyn Model, intro: &FinFun, bounds: &Bounds, thin: Thinning) -> Outcome {
    let ctx = TypeOver::new(FinFun::identity(intro.cod()));
    for c in model.types_spread(ctx.total(), bounds.max_fiber, thin.types) {
        let l = model.reindex(&c, intro)?;
        for d in l.src.sections_spread(thin.sections) {
            if search_section(model, &c, intro, &d)?.is_none() {
                return Ok(Some(format!("no eliminator for C = {c:?} at d = {d}")));
            }
        }
    }
    Ok(None)
}

struct Pools<'a> {
    model: &'a dyn Model,
    bounds: Bounds,
    thin: Thinning,
}

impl Pools<'_> {
    fn types(&self, ctx: &FinSet) -> Vec<TypeOver> {
        self.model.types_spread(ctx, self.bounds.max_fiber, self.thin.types)
    }

    fn sigmas(&self, gamma: &FinSet) -> Vec<FinFun> {
        spread(&substitutions_into(gamma, self.bounds.max_ctx), self.thin.substitutions)
    }
}

/// Sums, Π, Σ, Id, unit, zero and W of the model's own providers.
pub fn certify_providers(model: &dyn Model, bounds: &Bounds, thin: Thinning) -> Vec<Report> {
    let p = Pools { model, bounds: *bounds, thin };
    vec![
        certify_sums(model, bounds, thin, &|m, a, b| m.sum(a, b)),
        pis(&p),
        sigmas(&p),
        certify_ids(model, bounds, thin, &|m, a| m.id(a)),
        units(&p),
        zeros(&p),
        ws(&p),
    ]
}

/// The certification report for one former's provider.
pub fn certify_former(model: &dyn Model, bounds: &Bounds, thin: Thinning, former: super::stability::Former) -> Report {
    use super::stability::Former;
    let p = Pools { model, bounds: *bounds, thin };
    match former {
        Former::Sum => certify_sums(model, bounds, thin, &|m, a, b| m.sum(a, b)),
        Former::Pi => pis(&p),
        Former::Sigma => sigmas(&p),
        Former::Id => certify_ids(model, bounds, thin, &|m, a| m.id(a)),
        Former::Unit => units(&p),
        Former::Zero => zeros(&p),
        Former::W => ws(&p),
    }
}

pub fn certify_sums(model: &dyn Model, bounds: &Bounds, thin: Thinning, provider: SumProvider<'_>) -> Report {
    let p = Pools { model, bounds: *bounds, thin };
    let mut report = Report::new(format!("weak-sum[{}]", model.name()));
    for gamma in contexts(bounds.max_ctx) {
        for a in p.types(&gamma) {
            for b in p.types(&gamma) {
                let w = match provider(model, &a, &b) {
                    Ok(w) => w,
                    Err(e) => {
                        report.fail(|| e.to_string());
                        continue;
                    }
                };
                for sigma in p.sigmas(&gamma) {
                    let outcome = (|| -> Outcome {
                        let ws = reindex_sum(model, &w, &sigma)?;
                        for c in p.types(ws.sum.total()) {
                            let (l1, l2) = (model.reindex(&c, &ws.inl)?, model.reindex(&c, &ws.inr)?);
                            for d1 in l1.src.sections_spread(thin.sections) {
                                for d2 in l2.src.sections_spread(thin.sections) {
                                    if search_copair(model, &ws, &c, &d1, &d2)?.is_none() {
                                        return Ok(Some(format!("no copair after σ = {sigma} for C = {c:?}, d₁ = {d1}, d₂ = {d2}")));
                                    }
                                }
                            }
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

fn pis(p: &Pools<'_>) -> Report {
    let model = p.model;
    let mut report = Report::new(format!("weak-pi[{}]", model.name()));
    for gamma in contexts(p.bounds.max_ctx) {
        for a in p.types(&gamma) {
            for b in p.types(a.total()) {
                let w = match model.pi(&a, &b) {
                    Ok(w) => w,
                    Err(e) => {
                        report.fail(|| e.to_string());
                        continue;
                    }
                };
                for sigma in p.sigmas(&gamma) {
                    let outcome = (|| -> Outcome {
                        let wp = reindex_pi(model, &w, &sigma)?;
                        if !admits_all_lambdas(&wp) {
                            return Ok(Some(format!("some section has no λ after σ = {sigma}")));
                        }
                        for t in wp.b.sections_spread(p.thin.sections) {
                            let found = wp.pi.sections().into_iter().find(|l| beta_holds(&wp, &t, l));
                            if found.is_none() {
                                return Ok(Some(format!("no λ({t}) after σ = {sigma}")));
                            }
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

fn sigmas(p: &Pools<'_>) -> Report {
    let model = p.model;
    let mut report = Report::new(format!("weak-sigma[{}]", model.name()));
    for gamma in contexts(p.bounds.max_ctx) {
        for a in p.types(&gamma) {
            for b in p.types(a.total()) {
                let w = match model.sigma(&a, &b) {
                    Ok(w) => w,
                    Err(e) => {
                        report.fail(|| e.to_string());
                        continue;
                    }
                };
                for sigma in p.sigmas(&gamma) {
                    let outcome = (|| -> Outcome {
                        let ls = model.reindex(&w.sigma, &sigma)?;
                        let la = model.reindex(&a, &sigma)?;
                        let lb = model.reindex(&b, &la.top)?;
                        let base = la.src.display().after(lb.src.display());
                        let pair = pull_over(&lb.top, &base, &w.pair, &ls)?;
                        eliminates(model, &pair, &p.bounds, p.thin)
                    })();
                    record(&mut report, outcome);
                }
            }
        }
    }
    report
}

pub fn certify_ids(model: &dyn Model, bounds: &Bounds, thin: Thinning, provider: IdProvider<'_>) -> Report {
    let p = Pools { model, bounds: *bounds, thin };
    let mut report = Report::new(format!("weak-id[{}]", model.name()));
    for gamma in contexts(bounds.max_ctx) {
        for a in p.types(&gamma) {
            let w = match provider(model, &a) {
                Ok(w) => w,
                Err(e) => {
                    report.fail(|| e.to_string());
                    continue;
                }
            };
            for sigma in p.sigmas(&gamma) {
                let outcome = (|| -> Outcome {
                    if !check_beck_chevalley_id(model, &w, &sigma)? {
                        return Ok(Some(format!("Beck–Chevalley fails along {sigma}")));
                    }
                    let wi = reindex_id(model, &w, &sigma)?;
                    eliminates(model, &wi.refl, &p.bounds, p.thin)
                })();
                record(&mut report, outcome);
            }
        }
    }
    report
}

fn units(p: &Pools<'_>) -> Report {
    let model = p.model;
    let mut report = Report::new(format!("weak-unit[{}]", model.name()));
    for gamma in contexts(p.bounds.max_ctx) {
        let Ok(w) = model.unit(&gamma) else {
            report.fail(|| format!("no unit over {gamma}"));
            continue;
        };
        for sigma in p.sigmas(&gamma) {
            let outcome = (|| -> Outcome {
                let lu = model.reindex(&w.unit, &sigma)?;
                let tt = pull_over(&sigma, &FinFun::identity(sigma.dom()), &w.tt, &lu)?;
                eliminates(model, &tt, &p.bounds, p.thin)
            })();
            record(&mut report, outcome);
        }
    }
    report
}

fn zeros(p: &Pools<'_>) -> Report {
    let model = p.model;
    let mut report = Report::new(format!("weak-zero[{}]", model.name()));
    for gamma in contexts(p.bounds.max_ctx) {
        let Ok(w) = model.zero(&gamma) else {
            report.fail(|| format!("no zero over {gamma}"));
            continue;
        };
        for sigma in p.sigmas(&gamma) {
            let outcome = (|| -> Outcome {
                let lz = model.reindex(&w.zero, &sigma)?;
                if !lz.src.total().is_empty() {
                    return Ok(Some(format!("0[{sigma}] is inhabited")));
                }
                for c in p.types(lz.src.total()) {
                    if elim::absurd(&c).is_err() {
                        return Ok(Some(format!("no map out of 0[{sigma}]")));
                    }
                }
                Ok(None)
            })();
            record(&mut report, outcome);
        }
    }
    report
}

/// In the degenerate regimes an algebra map out of `W` exists for every
/// motive exactly when `fold` is a bijection, which is checked after each
/// substitution.
fn ws(p: &Pools<'_>) -> Report {
    let model = p.model;
    let mut report = Report::new(format!("weak-w[{}]", model.name()));
    for gamma in contexts(p.bounds.max_ctx) {
        for a in p.types(&gamma) {
            for n in [0, 1, 2] {
                let b = model.family(a.total(), &vec![n; a.total().len()]);
                let w = match model.w(&a, &b) {
                    Ok(w) => w,
                    Err(e) => {
                        report.fail(|| e.to_string());
                        continue;
                    }
                };
                for sigma in p.sigmas(&gamma) {
                    let outcome = (|| -> Outcome {
                        let lw = model.reindex(&w.w, &sigma)?;
                        let lp = model.reindex(&w.poly, &sigma)?;
                        let fold = induced(&lp, &w.fold, &lw)?;
                        if !fold.is_bijective() {
                            return Ok(Some(format!("fold is not a bijection after σ = {sigma}")));
                        }
                        let leaves = n == 0;
                        let expected = if leaves { la_size(model, &a, &sigma)? } else { 0 };
                        if lw.src.total().len() != expected {
                            return Ok(Some(format!("|W[σ]| = {} but expected {expected}", lw.src.total().len())));
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

fn la_size(model: &dyn Model, a: &TypeOver, sigma: &FinFun) -> Result<usize, ModelError> {
    Ok(model.reindex(a, sigma)?.src.total().len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fixtures::{dropping_sum, loopy_id};
    use crate::models::{FamModel, PullbackModel};

    #[test]
    fn providers_are_weakly_stable() {
        for m in [&FamModel as &dyn Model, &PullbackModel] {
            for r in certify_providers(m, &Bounds::smoke(), Thinning::default()) {
                assert!(r.passed() && r.cases > 0, "{r}");
            }
        }
    }

    #[test]
    fn adversarial_witnesses_are_caught() {
        let m = &PullbackModel;
        let r = certify_sums(m, &Bounds::smoke(), Thinning::default(), &dropping_sum);
        assert!(!r.passed(), "{r}");
        let r = certify_ids(m, &Bounds::smoke(), Thinning::default(), &loopy_id);
        assert!(!r.passed(), "{r}");
    }
}
