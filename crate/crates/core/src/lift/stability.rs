//! Strict stability of a constructor suite under substitution, and the
//! computation laws, checked by enumeration.
//!
//! Every check reindexes the premises along `σ : Δ → Γ` through the suite's
//! own lifts, applies the constructor over `Δ`, and compares the result with
//! the reindexed conclusion as a structural equality.

use std::fmt::Debug;

use crate::bang::spread;
use crate::compcat::{contexts, substitutions_into, ModelError};
use crate::finval::{FinFun, FinSet};
use crate::lift::bangsuite::BangSuite;
use crate::lift::{pull_over, SplitSuite};
use crate::report::{Bounds, Report};

/// How far each pool is thinned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Thinning {
    pub types: usize,
    pub sections: usize,
    pub substitutions: usize,
}

impl Default for Thinning {
    fn default() -> Self {
        Thinning { types: 3, sections: 2, substitutions: 4 }
    }
}

type Outcome = Result<Option<String>, ModelError>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Ok(Some(format!($($msg)*)));
        }
    };
}

fn record(report: &mut Report, outcome: Outcome) {
    match outcome {
        Ok(None) => report.pass(),
        Ok(Some(w)) => report.fail(|| w),
        Err(e) => report.fail(|| e.to_string()),
    }
}

fn eq<T: PartialEq + Debug>(got: &T, want: &T) -> bool {
    got == want
}

struct Env<'s, S: SplitSuite> {
    suite: &'s S,
    bounds: Bounds,
    thin: Thinning,
}

impl<S: SplitSuite> Env<'_, S> {
    fn types(&self, ctx: &FinSet) -> Vec<S::Ty> {
        self.suite.types_over(ctx, &self.bounds, self.thin.types)
    }

    fn sigmas(&self, gamma: &FinSet) -> Vec<FinFun> {
        spread(&substitutions_into(gamma, self.bounds.max_ctx), self.thin.substitutions)
    }

    fn sections(&self, a: &S::Ty) -> Vec<FinFun> {
        match self.suite.realize(a) {
            Ok(t) => t.sections_spread(self.thin.sections),
            Err(_) => Vec::new(),
        }
    }

    fn label(&self, what: &str) -> String {
        format!("{what}[{}]", self.suite.label())
    }
}

/// Strict stability of sums, Π, Σ, Id (with Frobenius telescopes), unit and
/// zero, one report per former.
pub fn check_strict_stability<S: SplitSuite>(suite: &S, bounds: &Bounds, thin: Thinning) -> Vec<Report> {
    let env = Env { suite, bounds: *bounds, thin };
    vec![sums(&env), pis(&env), sigmas(&env), ids(&env), units(&env), zeros(&env)]
}

/// β for Π, copair, split, urec and `j ∘ r = d`.
pub fn check_computation_laws<S: SplitSuite>(suite: &S, bounds: &Bounds, thin: Thinning) -> Vec<Report> {
    let env = Env { suite, bounds: *bounds, thin };
    vec![beta(&env), copair_law(&env), split_law(&env), urec_law(&env), j_law(&env)]
}

/// A type former, used to select which checks run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Former {
    Sum,
    Pi,
    Sigma,
    Id,
    Unit,
    Zero,
    W,
}

impl Former {
    pub const ALL: [Former; 7] = [Former::Sum, Former::Pi, Former::Sigma, Former::Id, Former::Unit, Former::Zero, Former::W];

    pub fn name(self) -> &'static str {
        match self {
            Former::Sum => "sums",
            Former::Pi => "pi",
            Former::Sigma => "sigma",
            Former::Id => "id",
            Former::Unit => "unit",
            Former::Zero => "zero",
            Former::W => "w",
        }
    }

    pub fn parse(name: &str) -> Option<Former> {
        Former::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Strict stability and the computation law of one former. W is not
/// handled here; see [`check_w_stability`].
pub fn check_former<S: SplitSuite>(suite: &S, bounds: &Bounds, thin: Thinning, former: Former) -> Vec<Report> {
    let env = Env { suite, bounds: *bounds, thin };
    match former {
        Former::Sum => vec![sums(&env), copair_law(&env)],
        Former::Pi => vec![pis(&env), beta(&env)],
        Former::Sigma => vec![sigmas(&env), split_law(&env)],
        Former::Id => vec![ids(&env), j_law(&env)],
        Former::Unit => vec![units(&env), urec_law(&env)],
        Former::Zero => vec![zeros(&env)],
        Former::W => Vec::new(),
    }
}

fn sums<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("strict-sum"));
    for gamma in contexts(env.bounds.max_ctx) {
        for a in env.types(&gamma) {
            for b in env.types(&gamma) {
                let Ok(sum) = s.sum_form(&a, &b) else {
                    report.fail(|| format!("no sum of {a:?} and {b:?}"));
                    continue;
                };
                let motives = s.total(&sum).map(|t| env.types(&t)).unwrap_or_default();
                for sigma in env.sigmas(&gamma) {
                    let outcome = (|| -> Outcome {
                        let (a2, b2) = (s.reindex(&a, &sigma)?, s.reindex(&b, &sigma)?);
                        let sum2 = s.sum_form(&a2, &b2)?;
                        ensure!(eq(&sum2, &s.reindex(&sum, &sigma)?), "(A+B)[σ] differs from A[σ]+B[σ] along {sigma}");
                        let (la, lb, ls) = (s.lift(&a, &sigma)?, s.lift(&b, &sigma)?, s.lift(&sum, &sigma)?);
                        let inl = pull_over(&la.top, &s.comprehension(&a2)?, &s.sum_inl(&a, &b)?, &ls)?;
                        ensure!(eq(&s.sum_inl(&a2, &b2)?, &inl), "inl is not stable along {sigma}");
                        let inr = pull_over(&lb.top, &s.comprehension(&b2)?, &s.sum_inr(&a, &b)?, &ls)?;
                        ensure!(eq(&s.sum_inr(&a2, &b2)?, &inr), "inr is not stable along {sigma}");
                        Ok(None)
                    })();
                    record(&mut report, outcome);
                    for c in &motives {
                        let outcome = (|| -> Outcome {
                            let (inl, inr) = (s.sum_inl(&a, &b)?, s.sum_inr(&a, &b)?);
                            let (ca, cb) = (s.reindex(c, &inl)?, s.reindex(c, &inr)?);
                            let (la, lb, ls) = (s.lift(&a, &sigma)?, s.lift(&b, &sigma)?, s.lift(&sum, &sigma)?);
                            let (a2, b2) = (s.reindex(&a, &sigma)?, s.reindex(&b, &sigma)?);
                            let c2 = s.reindex(c, &ls.top)?;
                            for d1 in env.sections(&ca) {
                                for d2 in env.sections(&cb) {
                                    let t = s.sum_copair(&a, &b, c, &d1, &d2)?;
                                    let d1s = s.pull_section(&ca, &la.top, &d1)?;
                                    let d2s = s.pull_section(&cb, &lb.top, &d2)?;
                                    let t2 = s.sum_copair(&a2, &b2, &c2, &d1s, &d2s)?;
                                    ensure!(eq(&t2, &s.pull_section(c, &ls.top, &t)?), "copair is not stable along {sigma}");
                                }
                            }
                            Ok(None)
                        })();
                        record(&mut report, outcome);
                    }
                }
            }
        }
    }
    report
}

fn copair_law<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("law-copair"));
    for gamma in contexts(env.bounds.max_ctx) {
        for a in env.types(&gamma) {
            for b in env.types(&gamma) {
                let Ok(sum) = s.sum_form(&a, &b) else { continue };
                for c in s.total(&sum).map(|t| env.types(&t)).unwrap_or_default() {
                    let outcome = (|| -> Outcome {
                        let (inl, inr) = (s.sum_inl(&a, &b)?, s.sum_inr(&a, &b)?);
                        let (ca, cb) = (s.reindex(&c, &inl)?, s.reindex(&c, &inr)?);
                        for d1 in env.sections(&ca) {
                            for d2 in env.sections(&cb) {
                                let t = s.sum_copair(&a, &b, &c, &d1, &d2)?;
                                ensure!(s.realize(&c)?.is_section(&t), "copair is not a section");
                                ensure!(eq(&s.pull_section(&c, &inl, &t)?, &d1), "copair ∘ inl != d₁");
                                ensure!(eq(&s.pull_section(&c, &inr, &t)?, &d2), "copair ∘ inr != d₂");
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

fn pis<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("strict-pi"));
    for gamma in contexts(env.bounds.max_ctx) {
        for a in env.types(&gamma) {
            let Ok(ga) = s.total(&a) else { continue };
            for b in env.types(&ga) {
                for sigma in env.sigmas(&gamma) {
                    let outcome = (|| -> Outcome {
                        let pi = s.pi_form(&a, &b)?;
                        let la = s.lift(&a, &sigma)?;
                        let (a2, b2) = (s.reindex(&a, &sigma)?, s.reindex(&b, &la.top)?);
                        let pi2 = s.pi_form(&a2, &b2)?;
                        ensure!(eq(&pi2, &s.reindex(&pi, &sigma)?), "Π[A,B][σ] differs from Π[A[σ],B[σ]] along {sigma}");
                        let at = s.reindex(&pi, &s.comprehension(&a)?)?;
                        let at2 = s.reindex(&pi2, &s.comprehension(&a2)?)?;
                        let app = pull_over(
                            &s.lift(&at, &la.top)?.top,
                            &s.comprehension(&at2)?,
                            &s.pi_app(&a, &b)?,
                            &s.lift(&b, &la.top)?,
                        )?;
                        ensure!(eq(&s.pi_app(&a2, &b2)?, &app), "app is not stable along {sigma}");
                        for t in env.sections(&b) {
                            let lam = s.pi_lambda(&a, &b, &t)?;
                            let t2 = s.pull_section(&b, &la.top, &t)?;
                            let lam2 = s.pi_lambda(&a2, &b2, &t2)?;
                            ensure!(eq(&lam2, &s.pull_section(&pi, &sigma, &lam)?), "λ is not stable along {sigma}");
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

fn beta<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("law-beta"));
    for gamma in contexts(env.bounds.max_ctx) {
        for a in env.types(&gamma) {
            let Ok(ga) = s.total(&a) else { continue };
            for b in env.types(&ga) {
                let outcome = (|| -> Outcome {
                    let pi = s.pi_form(&a, &b)?;
                    let app = s.pi_app(&a, &b)?;
                    for t in env.sections(&b) {
                        let lam = s.pi_lambda(&a, &b, &t)?;
                        ensure!(s.realize(&pi)?.is_section(&lam), "λ is not a section of Π");
                        let at = s.pull_section(&pi, &s.comprehension(&a)?, &lam)?;
                        ensure!(eq(&app.after(&at), &t), "app ∘ λ(t) != t");
                    }
                    Ok(None)
                })();
                record(&mut report, outcome);
            }
        }
    }
    report
}

fn sigmas<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("strict-sigma"));
    for gamma in contexts(env.bounds.max_ctx) {
        for a in env.types(&gamma) {
            let Ok(ga) = s.total(&a) else { continue };
            for b in env.types(&ga) {
                let Ok(sig) = s.sigma_form(&a, &b) else {
                    report.fail(|| format!("no Σ of {a:?} and {b:?}"));
                    continue;
                };
                let motives = s.total(&sig).map(|t| env.types(&t)).unwrap_or_default();
                for sigma in env.sigmas(&gamma) {
                    let outcome = (|| -> Outcome {
                        let la = s.lift(&a, &sigma)?;
                        let (a2, b2) = (s.reindex(&a, &sigma)?, s.reindex(&b, &la.top)?);
                        let sig2 = s.sigma_form(&a2, &b2)?;
                        ensure!(eq(&sig2, &s.reindex(&sig, &sigma)?), "Σ[A,B][σ] differs along {sigma}");
                        let lb = s.lift(&b, &la.top)?;
                        let ls = s.lift(&sig, &sigma)?;
                        let base = s.comprehension(&a2)?.after(&s.comprehension(&b2)?);
                        let pair = pull_over(&lb.top, &base, &s.sigma_pair(&a, &b)?, &ls)?;
                        ensure!(eq(&s.sigma_pair(&a2, &b2)?, &pair), "pair is not stable along {sigma}");
                        let pr = s.sigma_pair(&a, &b)?;
                        for c in &motives {
                            let cp = s.reindex(c, &pr)?;
                            let c2 = s.reindex(c, &ls.top)?;
                            for d in env.sections(&cp) {
                                let t = s.sigma_split(&a, &b, c, &d)?;
                                let d2 = s.pull_section(&cp, &lb.top, &d)?;
                                let t2 = s.sigma_split(&a2, &b2, &c2, &d2)?;
                                ensure!(eq(&t2, &s.pull_section(c, &ls.top, &t)?), "split is not stable along {sigma}");
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

fn split_law<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("law-split"));
    for gamma in contexts(env.bounds.max_ctx) {
        for a in env.types(&gamma) {
            let Ok(ga) = s.total(&a) else { continue };
            for b in env.types(&ga) {
                let Ok(sig) = s.sigma_form(&a, &b) else { continue };
                for c in s.total(&sig).map(|t| env.types(&t)).unwrap_or_default() {
                    let outcome = (|| -> Outcome {
                        let pr = s.sigma_pair(&a, &b)?;
                        for d in env.sections(&s.reindex(&c, &pr)?) {
                            let t = s.sigma_split(&a, &b, &c, &d)?;
                            ensure!(s.realize(&c)?.is_section(&t), "split is not a section");
                            ensure!(eq(&s.pull_section(&c, &pr, &t)?, &d), "split ∘ pair != d");
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

/// Frobenius telescopes of length at most `depth` over the identity type of `a`.
fn telescopes<S: SplitSuite>(env: &Env<'_, S>, a: &S::Ty, depth: usize) -> Result<Vec<Vec<S::Ty>>, ModelError> {
    let s = env.suite;
    let id = s.id_form(a)?;
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), s.total(&id)?)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (tel, ctx) in frontier {
            for b in spread(&env.types(&ctx), 2) {
                let mut t: Vec<S::Ty> = tel.clone();
                t.push(b.clone());
                next.push((t.clone(), s.total(&b)?));
                out.push(t);
            }
        }
        frontier = next;
    }
    Ok(out)
}

fn ids<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("strict-id"));
    for gamma in contexts(env.bounds.max_ctx) {
        for a in env.types(&gamma) {
            for sigma in env.sigmas(&gamma) {
                let outcome = (|| -> Outcome {
                    let id = s.id_form(&a)?;
                    let la = s.lift(&a, &sigma)?;
                    let a2 = s.reindex(&a, &sigma)?;
                    let aa = s.reindex(&a, &s.comprehension(&a)?)?;
                    let sigma_aa = s.lift(&aa, &la.top)?.top;
                    let id2 = s.id_form(&a2)?;
                    ensure!(eq(&id2, &s.reindex(&id, &sigma_aa)?), "Id_A[σ] differs from Id_(A[σ]) along {sigma}");
                    let li = s.lift(&id, &sigma_aa)?;
                    let refl = pull_over(&la.top, &s.diagonal(&a2)?, &s.id_refl(&a)?, &li)?;
                    ensure!(eq(&s.id_refl(&a2)?, &refl), "r is not stable along {sigma}");
                    Ok(None)
                })();
                record(&mut report, outcome);
                let tels = telescopes(env, &a, env.bounds.telescope_depth).unwrap_or_default();
                for delta in tels {
                    let outcome = j_stable(env, &a, &delta, &sigma);
                    record(&mut report, outcome);
                }
            }
        }
    }
    report
}

/// The last context of `delta` (or the identity type's comprehension).
fn motive_ctx<S: SplitSuite>(s: &S, a: &S::Ty, delta: &[S::Ty]) -> Result<FinSet, ModelError> {
    match delta.last() {
        Some(b) => s.total(b),
        None => s.total(&s.id_form(a)?),
    }
}

fn j_stable<S: SplitSuite>(env: &Env<'_, S>, a: &S::Ty, delta: &[S::Ty], sigma: &FinFun) -> Outcome {
    let s = env.suite;
    let id = s.id_form(a)?;
    let la = s.lift(a, sigma)?;
    let a2 = s.reindex(a, sigma)?;
    let aa = s.reindex(a, &s.comprehension(a)?)?;
    let sigma_aa = s.lift(&aa, &la.top)?.top;
    // σ_k : Δ.A'.A'.Id'.B'₁…B'_k → Γ.A.A.Id.B₁…B_k
    let mut tops = vec![s.lift(&id, &sigma_aa)?.top];
    let mut delta2 = Vec::new();
    for b in delta {
        let prev = tops.last().unwrap().clone();
        delta2.push(s.reindex(b, &prev)?);
        tops.push(s.lift(b, &prev)?.top);
    }
    let (rs, pulled) = s.refl_chain(a, delta)?;
    // ρ_k : Δ.A'.(Δ'[r'])_k → Γ.A.(Δ[r])_k
    let mut rho = la.top.clone();
    for p in &pulled {
        rho = s.lift(p, &rho)?.top;
    }
    let sigma_n = tops.last().unwrap();
    for c in env.types(&motive_ctx(s, a, delta)?) {
        let cr = s.reindex(&c, rs.last().unwrap())?;
        let c2 = s.reindex(&c, sigma_n)?;
        for d in env.sections(&cr) {
            let t = s.id_j(a, delta, &c, &d)?;
            let d2 = s.pull_section(&cr, &rho, &d)?;
            let t2 = s.id_j(&a2, &delta2, &c2, &d2)?;
            ensure!(eq(&t2, &s.pull_section(&c, sigma_n, &t)?), "J is not stable along {sigma} with {} premises", delta.len());
        }
    }
    Ok(None)
}

fn j_law<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("law-j"));
    for gamma in contexts(env.bounds.max_ctx) {
        for a in env.types(&gamma) {
            for delta in telescopes(env, &a, env.bounds.telescope_depth).unwrap_or_default() {
                let outcome = (|| -> Outcome {
                    let (rs, _) = s.refl_chain(&a, &delta)?;
                    let r = rs.last().unwrap();
                    for c in env.types(&motive_ctx(s, &a, &delta)?) {
                        for d in env.sections(&s.reindex(&c, r)?) {
                            let t = s.id_j(&a, &delta, &c, &d)?;
                            ensure!(s.realize(&c)?.is_section(&t), "J is not a section");
                            ensure!(eq(&s.pull_section(&c, r, &t)?, &d), "j ∘ r != d with {} premises", delta.len());
                        }
                    }
                    Ok(None)
                })();
                record(&mut report, outcome);
            }
        }
    }
    report
}

fn units<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("strict-unit"));
    for gamma in contexts(env.bounds.max_ctx) {
        for sigma in env.sigmas(&gamma) {
            let outcome = (|| -> Outcome {
                let delta = sigma.dom().clone();
                let u = s.unit_form(&gamma)?;
                ensure!(eq(&s.unit_form(&delta)?, &s.reindex(&u, &sigma)?), "1[σ] != 1 along {sigma}");
                let lu = s.lift(&u, &sigma)?;
                let tt = pull_over(&sigma, &FinFun::identity(&delta), &s.unit_tt(&gamma)?, &lu)?;
                ensure!(eq(&s.unit_tt(&delta)?, &tt), "tt is not stable along {sigma}");
                let tt0 = s.unit_tt(&gamma)?;
                for c in env.types(&s.total(&u)?) {
                    let ct = s.reindex(&c, &tt0)?;
                    let c2 = s.reindex(&c, &lu.top)?;
                    for d in env.sections(&ct) {
                        let t = s.unit_rec(&gamma, &c, &d)?;
                        let t2 = s.unit_rec(&delta, &c2, &s.pull_section(&ct, &sigma, &d)?)?;
                        ensure!(eq(&t2, &s.pull_section(&c, &lu.top, &t)?), "urec is not stable along {sigma}");
                    }
                }
                Ok(None)
            })();
            record(&mut report, outcome);
        }
    }
    report
}

fn urec_law<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("law-urec"));
    for gamma in contexts(env.bounds.max_ctx) {
        let outcome = (|| -> Outcome {
            let u = s.unit_form(&gamma)?;
            let tt = s.unit_tt(&gamma)?;
            for c in env.types(&s.total(&u)?) {
                for d in env.sections(&s.reindex(&c, &tt)?) {
                    let t = s.unit_rec(&gamma, &c, &d)?;
                    ensure!(s.realize(&c)?.is_section(&t), "urec is not a section");
                    ensure!(eq(&s.pull_section(&c, &tt, &t)?, &d), "urec ∘ tt != d");
                }
            }
            Ok(None)
        })();
        record(&mut report, outcome);
    }
    report
}

fn zeros<S: SplitSuite>(env: &Env<'_, S>) -> Report {
    let s = env.suite;
    let mut report = Report::new(env.label("strict-zero"));
    for gamma in contexts(env.bounds.max_ctx) {
        for sigma in env.sigmas(&gamma) {
            let outcome = (|| -> Outcome {
                let delta = sigma.dom().clone();
                let z = s.zero_form(&gamma)?;
                ensure!(eq(&s.zero_form(&delta)?, &s.reindex(&z, &sigma)?), "0[σ] != 0 along {sigma}");
                let lz = s.lift(&z, &sigma)?;
                for c in env.types(&s.total(&z)?) {
                    let t = s.zero_elim(&gamma, &c)?;
                    let t2 = s.zero_elim(&delta, &s.reindex(&c, &lz.top)?)?;
                    ensure!(eq(&t2, &s.pull_section(&c, &lz.top, &t)?), "ex falso is not stable along {sigma}");
                }
                Ok(None)
            })();
            record(&mut report, outcome);
        }
    }
    report
}

/// Which degenerate regime a W instance falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WRegime {
    /// Every position branches: no well-founded trees.
    Branching,
    /// Every position is a leaf: trees are the shapes.
    Leaves,
}

fn regime(suite: &BangSuite<'_>, a: &crate::bang::LocalType, b: &crate::bang::LocalType) -> Option<WRegime> {
    let (ra, rb) = (suite.realize(a).ok()?, suite.realize(b).ok()?);
    let sizes: Vec<usize> = ra.total().iter().map(|x| rb.fiber(x).len()).collect();
    if sizes.iter().all(|n| *n == 0) {
        Some(WRegime::Leaves)
    } else if sizes.iter().all(|n| *n > 0) {
        Some(WRegime::Branching)
    } else {
        None
    }
}

/// W instances in one regime over `gamma`.
pub fn w_instances(
    suite: &BangSuite<'_>,
    gamma: &FinSet,
    bounds: &Bounds,
    thin: Thinning,
    want: WRegime,
) -> Vec<(crate::bang::LocalType, crate::bang::LocalType)> {
    let mut out = Vec::new();
    let sizes = match want {
        WRegime::Branching => [1, 2],
        WRegime::Leaves => [0, 0],
    };
    for a in suite.types_over(gamma, bounds, thin.types) {
        let Ok(ga) = suite.total(&a) else { continue };
        let mut fitting: Vec<_> =
            suite.types_over(&ga, bounds, 4 * thin.types).into_iter().filter(|b| regime(suite, &a, b) == Some(want)).collect();
        for n in sizes {
            let b = suite.bang.embed(&suite.model().family(&ga, &vec![n; ga.len()]));
            if !fitting.contains(&b) {
                fitting.push(b);
            }
        }
        for b in spread(&fitting, thin.types) {
            out.push((a.clone(), b));
        }
    }
    out
}

/// Strict stability of W-types in one degenerate regime: formation, the
/// polynomial with `fold`, and recursion.
pub fn check_w_stability(suite: &BangSuite<'_>, bounds: &Bounds, thin: Thinning, want: WRegime) -> Report {
    let s = suite;
    let mut report = Report::new(format!("strict-w-{}[{}]", regime_name(want), s.label()));
    for gamma in contexts(bounds.max_ctx) {
        for (a, b) in w_instances(s, &gamma, bounds, thin, want) {
            for sigma in spread(&substitutions_into(&gamma, bounds.max_ctx), thin.substitutions) {
                let outcome = (|| -> Outcome {
                    let w = s.w_form(&a, &b)?;
                    let la = s.lift(&a, &sigma)?;
                    let (a2, b2) = (s.reindex(&a, &sigma)?, s.reindex(&b, &la.top)?);
                    ensure!(eq(&s.w_form(&a2, &b2)?, &s.reindex(&w, &sigma)?), "W[σ] differs along {sigma}");
                    let (poly, fold) = s.w_poly(&a, &b)?;
                    let (poly2, fold2) = s.w_poly(&a2, &b2)?;
                    ensure!(eq(&poly2, &s.reindex(&poly, &sigma)?), "P[σ] differs along {sigma}");
                    let lp = s.lift(&poly, &sigma)?;
                    let lw = s.lift(&w, &sigma)?;
                    let pulled = pull_over(&lp.top, &s.comprehension(&poly2)?, &fold, &lw)?;
                    ensure!(eq(&fold2, &pulled), "fold is not stable along {sigma}");
                    for c in spread(&s.types_over(&s.total(&w)?, bounds, thin.types), thin.types) {
                        let m = s.w_motive(&a, &b, &c)?;
                        let c2 = s.reindex(&c, &lw.top)?;
                        let m2 = s.w_motive(&a2, &b2, &c2)?;
                        let sigma_ih = s.lift(&m.ih, &lp.top)?.top;
                        ensure!(eq(&m2.d_type, &s.reindex(&m.d_type, &sigma_ih)?), "the W step type is not stable along {sigma}");
                        for d in s.realize(&m.d_type)?.sections_spread(thin.sections) {
                            let t = s.w_rec(&a, &b, &c, &d)?;
                            let t2 = s.w_rec(&a2, &b2, &c2, &s.pull_section(&m.d_type, &sigma_ih, &d)?)?;
                            ensure!(eq(&t2, &s.pull_section(&c, &lw.top, &t)?), "W recursion is not stable along {sigma}");
                        }
                    }
                    Ok(None)
                })();
                record(&mut report, outcome);
            }
        }
    }
    report
}

/// The computation square of W-recursion: `t ∘ fold = d ∘ λ(t ∘ eval)`,
/// with `λ` the suite's own abstraction.
pub fn check_w_square(suite: &BangSuite<'_>, bounds: &Bounds, thin: Thinning, want: WRegime) -> Report {
    let s = suite;
    let mut report = Report::new(format!("law-w-{}[{}]", regime_name(want), s.label()));
    for gamma in contexts(bounds.max_ctx) {
        for (a, b) in w_instances(s, &gamma, bounds, thin, want) {
            let outcome = (|| -> Outcome {
                let w = s.w_form(&a, &b)?;
                for c in spread(&s.types_over(&s.total(&w)?, bounds, thin.types), thin.types) {
                    let m = s.w_motive(&a, &b, &c)?;
                    let step = s.lift(&c, &m.fold.after(&s.comprehension(&m.ih)?))?;
                    for d in s.realize(&m.d_type)?.sections_spread(thin.sections) {
                        let t = s.w_rec(&a, &b, &c, &d)?;
                        ensure!(s.realize(&c)?.is_section(&t), "W recursion is not a section");
                        let sub = s.pull_section(&c, &m.eval, &t)?;
                        let lam = s.pi_lambda(&m.branches, &m.c_eval, &sub)?;
                        let lhs = t.after(&m.fold);
                        let rhs = step.top.after(&d.after(&lam));
                        ensure!(eq(&lhs, &rhs), "t ∘ fold != d ∘ λ(t ∘ eval)");
                    }
                }
                Ok(None)
            })();
            record(&mut report, outcome);
        }
    }
    report
}

pub fn regime_name(r: WRegime) -> &'static str {
    match r {
        WRegime::Branching => "branching",
        WRegime::Leaves => "leaves",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compcat::Model;
    use crate::models::{FamModel, PullbackModel};

    fn all_pass(reports: &[Report]) {
        for r in reports {
            assert!(r.passed() && r.cases > 0, "{r}");
        }
    }

    #[test]
    fn bang_suite_is_strictly_stable_at_smoke_bounds() {
        for m in [&FamModel as &dyn Model, &PullbackModel] {
            let suite = BangSuite::new(m);
            all_pass(&check_strict_stability(&suite, &Bounds::smoke(), Thinning::default()));
            all_pass(&check_computation_laws(&suite, &Bounds::smoke(), Thinning::default()));
        }
    }

    #[test]
    fn w_in_both_regimes() {
        for m in [&FamModel as &dyn Model, &PullbackModel] {
            let suite = BangSuite::new(m);
            for r in [WRegime::Branching, WRegime::Leaves] {
                all_pass(&[check_w_stability(&suite, &Bounds::smoke(), Thinning::default(), r)]);
                all_pass(&[check_w_square(&suite, &Bounds::smoke(), Thinning::default(), r)]);
            }
        }
    }
}
