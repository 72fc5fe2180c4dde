//! Interpretation of checked syntax into a split suite. Contexts go to
//! towers of comprehensions, types to suite types over the top, terms to
//! sections and substitutions to maps of totals.

use thiserror::Error;

use super::check::{infer, j_base, j_step_ctx, TypeError};
use super::syntax::{Ctx, Name, Subst, Tm, Ty};
use crate::compcat::ModelError;
use crate::finval::{FinFun, FinSet};
use crate::lift::{pull_over, SplitSuite};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `⟦Γ⟧`: the types of a context and the totals they live over.
#[derive(Clone, Debug)]
pub struct SemCtx<T> {
    pub types: Vec<T>,
    /// `totals[k]` is the context of `types[k]`; the last is `⟦Γ⟧` itself.
    pub totals: Vec<FinSet>,
}

impl<T> SemCtx<T> {
    pub fn empty() -> Self {
        SemCtx { types: Vec::new(), totals: vec![FinSet::terminal()] }
    }

    pub fn total(&self) -> &FinSet {
        self.totals.last().unwrap()
    }
}

pub struct Interp<'s, S: SplitSuite> {
    pub suite: &'s S,
}

type R<T> = Result<T, InterpError>;

impl<'s, S: SplitSuite> Interp<'s, S> {
    pub fn new(suite: &'s S) -> Self {
        Interp { suite }
    }

    fn push(&self, sc: &SemCtx<S::Ty>, a: S::Ty) -> R<SemCtx<S::Ty>> {
        let mut out = sc.clone();
        out.totals.push(self.suite.total(&a)?);
        out.types.push(a);
        Ok(out)
    }

    fn bind(&self, sc: &SemCtx<S::Ty>, ctx: &Ctx, x: &Name, a: &Ty) -> R<(SemCtx<S::Ty>, Ctx, S::Ty)> {
        let sa = self.ty(sc, ctx, a)?;
        let mut c = ctx.clone();
        c.push((x.clone(), a.clone()));
        Ok((self.push(sc, sa.clone())?, c, sa))
    }

    pub fn ctx(&self, ctx: &Ctx) -> R<SemCtx<S::Ty>> {
        let mut sc = SemCtx::empty();
        for k in 0..ctx.len() {
            let a = self.ty(&sc, &ctx[..k].to_vec(), &ctx[k].1)?;
            sc = self.push(&sc, a)?;
        }
        Ok(sc)
    }

    pub fn ty(&self, sc: &SemCtx<S::Ty>, ctx: &Ctx, a: &Ty) -> R<S::Ty> {
        let s = self.suite;
        let g = sc.total();
        Ok(match a {
            Ty::Unit => s.unit_form(g)?,
            Ty::Zero => s.zero_form(g)?,
            Ty::Sum(x, y) => s.sum_form(&self.ty(sc, ctx, x)?, &self.ty(sc, ctx, y)?)?,
            Ty::Pi(n, x, y) | Ty::Sigma(n, x, y) => {
                let (sc2, ctx2, sa) = self.bind(sc, ctx, n, x)?;
                let sb = self.ty(&sc2, &ctx2, y)?;
                if matches!(a, Ty::Pi(..)) {
                    s.pi_form(&sa, &sb)?
                } else {
                    s.sigma_form(&sa, &sb)?
                }
            }
            Ty::Id(x, u, v) => {
                let sa = self.ty(sc, ctx, x)?;
                let pair = self.pair_map(&sa, &self.tm(sc, ctx, u)?, &self.tm(sc, ctx, v)?)?;
                s.reindex(&s.id_form(&sa)?, &pair)?
            }
        })
    }

    /// `⟨u, v⟩ : Γ → Γ.A.A`.
    fn pair_map(&self, a: &S::Ty, u: &FinFun, v: &FinFun) -> R<FinFun> {
        let chi = self.suite.comprehension(a)?;
        let aa = self.suite.lift(a, &chi)?;
        Ok(pull_over(v, u, &FinFun::identity(chi.dom()), &aa)?)
    }

    /// The section of `⟦A⟧` over `⟦Γ⟧` for `Γ ⊢ t : A`.
    pub fn tm(&self, sc: &SemCtx<S::Ty>, ctx: &Ctx, t: &Tm) -> R<FinFun> {
        let s = self.suite;
        let g = sc.total();
        Ok(match t {
            Tm::Var(i) => self.var(sc, *i)?,
            Tm::Tt => s.unit_tt(g)?,
            Tm::Lam(x, a, body) => {
                let (sc2, ctx2, sa) = self.bind(sc, ctx, x, a)?;
                let cod = infer(&ctx2, body)?;
                let sb = self.ty(&sc2, &ctx2, &cod)?;
                s.pi_lambda(&sa, &sb, &self.tm(&sc2, &ctx2, body)?)?
            }
            Tm::App(f, arg) => {
                let Ty::Pi(x, a, cod) = infer(ctx, f)? else {
                    unreachable!("checked")
                };
                let (sc2, ctx2, sa) = self.bind(sc, ctx, &x, &a)?;
                let sb = self.ty(&sc2, &ctx2, &cod)?;
                let pi = s.pi_form(&sa, &sb)?;
                let chi = s.comprehension(&sa)?;
                let fa = s.pull_section(&pi, &chi, &self.tm(sc, ctx, f)?)?;
                let body = after(&s.pi_app(&sa, &sb)?, &fa)?;
                s.pull_section(&sb, &self.tm(sc, ctx, arg)?, &body)?
            }
            Tm::Pair(x, a, fam, u, v) => {
                let (sc2, ctx2, sa) = self.bind(sc, ctx, x, a)?;
                let sb = self.ty(&sc2, &ctx2, fam)?;
                let su = self.tm(sc, ctx, u)?;
                let into = after(&s.lift(&sb, &su)?.top, &self.tm(sc, ctx, v)?)?;
                after(&s.sigma_pair(&sa, &sb)?, &into)?
            }
            Tm::Split(p, z, c, x, y, d) => {
                let sig = infer(ctx, p)?;
                let Ty::Sigma(_, a, fam) = &sig else { unreachable!("checked") };
                let (sc_a, ctx_a, sa) = self.bind(sc, ctx, x, a)?;
                let (sc_ab, ctx_ab, sb) = self.bind(&sc_a, &ctx_a, y, fam)?;
                let (sc_s, ctx_s, _) = self.bind(sc, ctx, z, &sig)?;
                let sc_ty = self.ty(&sc_s, &ctx_s, c)?;
                let sd = self.tm(&sc_ab, &ctx_ab, d)?;
                let e = s.sigma_split(&sa, &sb, &sc_ty, &sd)?;
                s.pull_section(&sc_ty, &self.tm(sc, ctx, p)?, &e)?
            }
            Tm::Inl(u, bt) => {
                let a = infer(ctx, u)?;
                let (sa, sb) = (self.ty(sc, ctx, &a)?, self.ty(sc, ctx, bt)?);
                after(&s.sum_inl(&sa, &sb)?, &self.tm(sc, ctx, u)?)?
            }
            Tm::Inr(at, v) => {
                let b = infer(ctx, v)?;
                let (sa, sb) = (self.ty(sc, ctx, at)?, self.ty(sc, ctx, &b)?);
                after(&s.sum_inr(&sa, &sb)?, &self.tm(sc, ctx, v)?)?
            }
            Tm::Case(u, z, c, x, d1, y, d2) => {
                let sum = infer(ctx, u)?;
                let Ty::Sum(a, b) = &sum else { unreachable!("checked") };
                let (sc_s, ctx_s, _) = self.bind(sc, ctx, z, &sum)?;
                let sc_ty = self.ty(&sc_s, &ctx_s, c)?;
                let (sc_a, ctx_a, sa) = self.bind(sc, ctx, x, a)?;
                let (sc_b, ctx_b, sb) = self.bind(sc, ctx, y, b)?;
                let e1 = self.tm(&sc_a, &ctx_a, d1)?;
                let e2 = self.tm(&sc_b, &ctx_b, d2)?;
                let e = s.sum_copair(&sa, &sb, &sc_ty, &e1, &e2)?;
                s.pull_section(&sc_ty, &self.tm(sc, ctx, u)?, &e)?
            }
            Tm::Urec(u, z, c, d) => {
                let (sc_u, ctx_u, _) = self.bind(sc, ctx, z, &Ty::Unit)?;
                let sc_ty = self.ty(&sc_u, &ctx_u, c)?;
                let e = s.unit_rec(g, &sc_ty, &self.tm(sc, ctx, d)?)?;
                s.pull_section(&sc_ty, &self.tm(sc, ctx, u)?, &e)?
            }
            Tm::Exfalso(u, z, c) => {
                let (sc_z, ctx_z, _) = self.bind(sc, ctx, z, &Ty::Zero)?;
                let sc_ty = self.ty(&sc_z, &ctx_z, c)?;
                let e = s.zero_elim(g, &sc_ty)?;
                s.pull_section(&sc_ty, &self.tm(sc, ctx, u)?, &e)?
            }
            Tm::Refl(u) => {
                let a = infer(ctx, u)?;
                let sa = self.ty(sc, ctx, &a)?;
                let su = self.tm(sc, ctx, u)?;
                let l = s.lift(&s.id_form(&sa)?, &self.pair_map(&sa, &su, &su)?)?;
                pull_over(&su, &FinFun::identity(g), &s.id_refl(&sa)?, &l)?
            }
            Tm::J(j) => {
                let id = infer(ctx, &j.p)?;
                let Ty::Id(a, l, r) = &id else { unreachable!("checked") };
                let sa = self.ty(sc, ctx, a)?;
                let base = j_base(ctx, j, a);
                let sc_base = self.ctx_over(sc, ctx, &base)?;
                let mut mctx = base;
                let mut msc = sc_base;
                let mut delta = Vec::new();
                for (w, bt) in &j.tel {
                    let (sc2, ctx2, sb) = self.bind(&msc, &mctx, w, bt)?;
                    delta.push(sb);
                    msc = sc2;
                    mctx = ctx2;
                }
                let motive = self.ty(&msc, &mctx, &j.motive)?;
                let step = j_step_ctx(ctx, j, a);
                let sc_step = self.ctx_over(sc, ctx, &step)?;
                let sd = self.tm(&sc_step, &step, &j.d)?;
                let e = s.id_j(&sa, &delta, &motive, &sd)?;
                let (sl, sr) = (self.tm(sc, ctx, l)?, self.tm(sc, ctx, r)?);
                let mut m = self.pair_map(&sa, &sl, &sr)?;
                let sid = s.id_form(&sa)?;
                m = after(&s.lift(&sid, &m)?.top, &self.tm(sc, ctx, &j.p)?)?;
                for (b, arg) in delta.iter().zip(&j.args) {
                    m = after(&s.lift(b, &m)?.top, &self.tm(sc, ctx, arg)?)?;
                }
                s.pull_section(&motive, &m, &e)?
            }
        })
    }

    /// Extends `⟦ctx⟧` to `⟦longer⟧`, where `ctx` is a prefix of `longer`.
    fn ctx_over(&self, sc: &SemCtx<S::Ty>, ctx: &Ctx, longer: &Ctx) -> R<SemCtx<S::Ty>> {
        let mut sc = sc.clone();
        for k in ctx.len()..longer.len() {
            let a = self.ty(&sc, &longer[..k].to_vec(), &longer[k].1)?;
            sc = self.push(&sc, a)?;
        }
        Ok(sc)
    }

    /// The generic element of the variable `i`, weakened to the whole context.
    fn var(&self, sc: &SemCtx<S::Ty>, i: usize) -> R<FinFun> {
        let s = self.suite;
        let k = sc.types.len() - 1 - i;
        let a = &sc.types[k];
        let mut sec = s.diagonal(a)?;
        let mut ty = s.reindex(a, &s.comprehension(a)?)?;
        for later in &sc.types[k + 1..] {
            let chi = s.comprehension(later)?;
            sec = s.pull_section(&ty, &chi, &sec)?;
            ty = s.reindex(&ty, &chi)?;
        }
        Ok(sec)
    }

    /// `⟦σ⟧ : ⟦Δ⟧ → ⟦Γ⟧`.
    pub fn subst(&self, sd: &SemCtx<S::Ty>, delta: &Ctx, gamma: &Ctx, sigma: &Subst) -> R<FinFun> {
        let n = gamma.len();
        let mut m = FinFun::to_terminal(sd.total());
        let sg = self.ctx(gamma)?;
        for k in 0..n {
            let t = self.tm(sd, delta, &sigma.0[n - 1 - k])?;
            m = after(&self.suite.lift(&sg.types[k], &m)?.top, &t)?;
        }
        Ok(m)
    }
}

/// Fiber sizes of `⟦A⟧` over `⟦Γ⟧`, in the order of `⟦Γ⟧`.
pub fn fiber_sizes<S: SplitSuite>(suite: &S, a: &S::Ty) -> R<Vec<usize>> {
    Ok(suite.realize(a)?.fiber_sizes())
}

/// Interprets a closed-over-`ctx` type and returns its fiber sizes.
pub fn ty_fibers<S: SplitSuite>(suite: &S, ctx: &Ctx, a: &Ty) -> R<Vec<usize>> {
    super::check::check_ctx(ctx)?;
    super::check::check_ty(ctx, a)?;
    let i = Interp::new(suite);
    let sc = i.ctx(ctx)?;
    fiber_sizes(suite, &i.ty(&sc, ctx, a)?)
}

fn after(g: &FinFun, f: &FinFun) -> Result<FinFun, ModelError> {
    Ok(g.try_after(f)?)
}
