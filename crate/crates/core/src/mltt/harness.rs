//! Soundness of the interpretation: it commutes with substitution on the
//! nose, and two suites agree fiberwise on the pool.

use std::collections::HashMap;

use super::interp::{Interp, InterpError, SemCtx};
use super::pool::Pool;
use super::syntax::{subst_tm, subst_ty, Ctx};
use crate::finval::FinFun;
use crate::lift::SplitSuite;
use crate::report::Report;

struct Cache<'s, S: SplitSuite> {
    interp: Interp<'s, S>,
    ctxs: HashMap<usize, Result<SemCtx<S::Ty>, InterpError>>,
}

impl<'s, S: SplitSuite> Cache<'s, S> {
    fn ctx(&mut self, pool: &Pool, i: usize) -> Result<SemCtx<S::Ty>, InterpError> {
        let interp = &self.interp;
        self.ctxs.entry(i).or_insert_with(|| interp.ctx(&pool.contexts[i])).clone()
    }
}

fn seed_tag(pool: &Pool) -> String {
    format!("seed={:#x}", pool.config.seed)
}

/// For every substitution `σ : Δ → Γ` of the pool and every type and term
/// over `Γ`: `⟦A[σ]⟧ = ⟦A⟧[⟦σ⟧]` and `⟦t[σ]⟧ = ⟦t⟧[⟦σ⟧]`, as exact equalities.
pub fn soundness<S: SplitSuite>(suite: &S, pool: &Pool) -> Vec<Report> {
    let tag = seed_tag(pool);
    let mut types = Report::new(format!("soundness-types[{}]{{{tag}}}", suite.label()));
    let mut terms = Report::new(format!("soundness-terms[{}]{{{tag}}}", suite.label()));
    let mut cache = Cache { interp: Interp::new(suite), ctxs: HashMap::new() };
    let mut ty_sem: HashMap<usize, Result<S::Ty, InterpError>> = HashMap::new();
    let mut tm_sem: HashMap<usize, Result<(S::Ty, FinFun), InterpError>> = HashMap::new();
    for case in &pool.substs {
        let (delta, gamma) = (&pool.contexts[case.from], &pool.contexts[case.to]);
        let setup = (|| {
            let sd = cache.ctx(pool, case.from)?;
            let m = cache.interp.subst(&sd, delta, gamma, &case.sigma)?;
            Ok::<_, InterpError>((sd, m))
        })();
        let (sd, m) = match setup {
            Ok(x) => x,
            Err(e) => {
                types.fail(|| format!("⟦σ⟧ for {:?}: {e}", case.sigma));
                continue;
            }
        };
        for (k, (ci, a)) in pool.types.iter().enumerate() {
            if *ci != case.to {
                continue;
            }
            let sem = ty_sem
                .entry(k)
                .or_insert_with(|| cache.ctx(pool, *ci).and_then(|sg| cache.interp.ty(&sg, gamma, a)))
                .clone();
            let outcome = sem.and_then(|sa| {
                let lhs = cache.interp.ty(&sd, delta, &subst_ty(a, &case.sigma))?;
                Ok(lhs == suite.reindex(&sa, &m)?)
            });
            record(&mut types, outcome, || format!("A = {a}, σ = {:?}", case.sigma), gamma);
        }
        for (k, t) in pool.terms.iter().enumerate() {
            if t.ctx != case.to {
                continue;
            }
            let sem = tm_sem
                .entry(k)
                .or_insert_with(|| {
                    let sg = cache.ctx(pool, t.ctx)?;
                    Ok((cache.interp.ty(&sg, gamma, &t.ty)?, cache.interp.tm(&sg, gamma, &t.tm)?))
                })
                .clone();
            let outcome = sem.and_then(|(sa, st)| {
                let lhs = cache.interp.tm(&sd, delta, &subst_tm(&t.tm, &case.sigma))?;
                Ok(lhs == suite.pull_section(&sa, &m, &st)?)
            });
            record(&mut terms, outcome, || format!("t = {}, σ = {:?}", t.tm, case.sigma), gamma);
        }
    }
    vec![types, terms]
}

fn record(report: &mut Report, outcome: Result<bool, InterpError>, what: impl FnOnce() -> String, _gamma: &Ctx) {
    match outcome {
        Ok(true) => report.pass(),
        Ok(false) => report.fail(what),
        Err(e) => report.fail(|| format!("{}: {e}", what())),
    }
}

/// The shape of an interpreted judgement: the sorted fiber sizes of each
/// context type, then of the type itself.
fn shape<S: SplitSuite>(suite: &S, sc: &SemCtx<S::Ty>, a: &S::Ty) -> Result<Vec<Vec<usize>>, InterpError> {
    let mut out = Vec::new();
    for t in sc.types.iter().chain([a]) {
        let mut sizes = suite.realize(t)?.fiber_sizes();
        sizes.sort_unstable();
        out.push(sizes);
    }
    Ok(out)
}

/// Both suites interpret every pool judgement with the same fiber sizes.
pub fn agreement<S: SplitSuite, T: SplitSuite>(left: &S, right: &T, pool: &Pool) -> Report {
    let mut report = Report::new(format!("two-model-agreement[{}|{}]{{{}}}", left.label(), right.label(), seed_tag(pool)));
    let (il, ir) = (Interp::new(left), Interp::new(right));
    for t in &pool.terms {
        let ctx = &pool.contexts[t.ctx];
        let l = il.ctx(ctx).and_then(|sc| {
            let a = il.ty(&sc, ctx, &t.ty)?;
            il.tm(&sc, ctx, &t.tm)?;
            shape(left, &sc, &a)
        });
        let r = ir.ctx(ctx).and_then(|sc| {
            let a = ir.ty(&sc, ctx, &t.ty)?;
            ir.tm(&sc, ctx, &t.tm)?;
            shape(right, &sc, &a)
        });
        match (l, r) {
            (Ok(x), Ok(y)) => report.check(x == y, || format!("{}: {x:?} vs {y:?}", t.tm)),
            (Err(e), _) | (_, Err(e)) => report.fail(|| format!("{}: {e}", t.tm)),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::{BangSuite, DirectSuite};
    use crate::mltt::pool::{build, PoolConfig};
    use crate::models::{FamModel, PullbackModel};

    #[test]
    fn interpretation_commutes_with_substitution_smoke() {
        let pool = build(PoolConfig::smoke());
        let t = std::time::Instant::now();
        let suite = BangSuite::new(&PullbackModel);
        for r in soundness(&suite, &pool) {
            eprintln!("{r} {:?}", t.elapsed());
            assert!(r.passed() && r.cases > 0, "{r}");
        }
        let fam = DirectSuite::new(&FamModel);
        for r in soundness(&fam, &pool) {
            eprintln!("{r} {:?}", t.elapsed());
            assert!(r.passed() && r.cases > 0, "{r}");
        }
        let r = agreement(&fam, &suite, &pool);
        eprintln!("{r} {:?}", t.elapsed());
        assert!(r.passed(), "{r}");
    }
}
