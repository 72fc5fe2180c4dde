//! Deterministic pools of well-typed judgements and substitutions.
//!
//! Terms are built level by level: level `d` applies one former to terms of
//! lower levels, with annotation types drawn from `Unit`, `Bool = Unit + Unit`
//! and `Zero`, and every candidate is kept only if it checks. Each level is
//! deduplicated and thinned to `per_level` entries. Deeper cases are grown
//! from the pool by seeded random former applications.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::check::{check_subst, infer};
use super::syntax::{bool_ty, depth_tm, free_vars_ty, shift_tm, shift_ty, subst_ty, Ctx, JData, Name, Subst, Tm, Ty};
use crate::bang::spread;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoolConfig {
    /// Largest AST depth of the exhaustive part.
    pub max_depth: usize,
    /// Terms kept per context and level.
    pub per_level: usize,
    /// Substitutions kept per pair of contexts.
    pub per_pair: usize,
    /// Seeded random cases deeper than `max_depth`.
    pub deep: usize,
    pub seed: u64,
    /// Largest estimated local universe of any type in a kept judgement.
    pub max_universe: u64,
}

impl Default for PoolConfig {
    fn default() -> Self {
        PoolConfig { max_depth: 5, per_level: 24, per_pair: 3, deep: 100, seed: 0x5eed, max_universe: 64 }
    }
}

impl PoolConfig {
    pub fn smoke() -> Self {
        PoolConfig { max_depth: 4, per_level: 8, per_pair: 2, deep: 10, seed: 0x5eed, max_universe: 16 }
    }
}

#[derive(Clone, Debug)]
pub struct TermCase {
    pub ctx: usize,
    pub tm: Tm,
    pub ty: Ty,
    pub deep: bool,
}

#[derive(Clone, Debug)]
pub struct SubstCase {
    pub from: usize,
    pub to: usize,
    pub sigma: Subst,
}

#[derive(Clone, Debug)]
pub struct Pool {
    pub config: PoolConfig,
    pub contexts: Vec<Ctx>,
    pub terms: Vec<TermCase>,
    pub types: Vec<(usize, Ty)>,
    pub substs: Vec<SubstCase>,
}

fn n(s: &str) -> Name {
    Name::new(s)
}

fn b<T>(x: T) -> Box<T> {
    Box::new(x)
}

fn var_id(a: Ty, i: usize, j: usize) -> Ty {
    Ty::Id(b(a), b(Tm::Var(i)), b(Tm::Var(j)))
}

/// The base contexts, each of length at most two.
pub fn base_contexts() -> Vec<Ctx> {
    vec![
        vec![],
        vec![(n("u"), Ty::Unit)],
        vec![(n("b"), bool_ty())],
        vec![(n("b"), bool_ty()), (n("c"), bool_ty())],
        vec![(n("b"), bool_ty()), (n("e"), var_id(bool_ty(), 0, 0))],
        vec![(n("u"), Ty::Unit), (n("f"), Ty::Pi(n("x"), b(Ty::Unit), b(bool_ty())))],
    ]
}

fn annotations() -> [Ty; 3] {
    [Ty::Unit, bool_ty(), Ty::Zero]
}

fn extend(ctx: &Ctx, x: &str, a: &Ty) -> Ctx {
    let mut c = ctx.clone();
    c.push((n(x), a.clone()));
    c
}

/// `T` with `T↑k = a`, if `a` does not mention the last `k` variables.
pub fn unshift(a: &Ty, k: usize, outer: usize) -> Option<Ty> {
    if free_vars_ty(a).iter().any(|&i| i < k) {
        return None;
    }
    let mut v = vec![Tm::Tt; k];
    v.extend((0..outer).map(Tm::Var));
    Some(subst_ty(a, &Subst(v)))
}

/// Upper bounds on the base and the largest fiber of the local universe
/// interpreting `a`. Universes depend on the shape of a type only.
pub fn universe_bound(a: &Ty) -> (u64, u64) {
    let wedge = |(va, fa): (u64, u64), (vb, _): (u64, u64)| va.saturating_mul(pow(vb, fa));
    match a {
        Ty::Unit => (1, 1),
        Ty::Zero => (1, 0),
        Ty::Sum(x, y) => {
            let ((va, fa), (vb, fb)) = (universe_bound(x), universe_bound(y));
            (va.saturating_mul(vb), fa.saturating_add(fb))
        }
        Ty::Sigma(_, x, y) => {
            let (ua, ub) = (universe_bound(x), universe_bound(y));
            (wedge(ua, ub), ua.1.saturating_mul(ub.1))
        }
        Ty::Pi(_, x, y) => {
            let (ua, ub) = (universe_bound(x), universe_bound(y));
            (wedge(ua, ub), pow(ub.1, ua.1))
        }
        Ty::Id(x, _, _) => {
            let (va, fa) = universe_bound(x);
            (va.saturating_mul(fa.saturating_mul(fa)), 1)
        }
    }
}

fn pow(b: u64, e: u64) -> u64 {
    (0..e).fold(1u64, |acc, _| acc.saturating_mul(b))
}

fn types_in(t: &Tm, out: &mut Vec<Ty>) {
    let mut tys = |a: &Ty| out.push(a.clone());
    match t {
        Tm::Var(_) | Tm::Tt => {}
        Tm::Lam(_, a, body) => {
            tys(a);
            types_in(body, out);
        }
        Tm::App(f, a) => {
            types_in(f, out);
            types_in(a, out);
        }
        Tm::Pair(_, a, fam, x, y) => {
            tys(a);
            tys(fam);
            types_in(x, out);
            types_in(y, out);
        }
        Tm::Split(p, _, c, _, _, d) => {
            tys(c);
            types_in(p, out);
            types_in(d, out);
        }
        Tm::Inl(x, a) | Tm::Inr(a, x) => {
            tys(a);
            types_in(x, out);
        }
        Tm::Case(s, _, c, _, d1, _, d2) => {
            tys(c);
            types_in(s, out);
            types_in(d1, out);
            types_in(d2, out);
        }
        Tm::Urec(s, _, c, d) => {
            tys(c);
            types_in(s, out);
            types_in(d, out);
        }
        Tm::Exfalso(e, _, c) => {
            tys(c);
            types_in(e, out);
        }
        Tm::Refl(x) => types_in(x, out),
        Tm::J(j) => {
            for (_, b) in &j.tel {
                out.push(b.clone());
            }
            out.push(j.motive.clone());
            types_in(&j.d, out);
            types_in(&j.p, out);
            for e in &j.args {
                types_in(e, out);
            }
        }
    }
}

/// Whether every type of the judgement, including those of its function
/// subterms, has a universe within `max`.
pub fn fits(tm: &Tm, ty: &Ty, max: u64) -> bool {
    let mut tys = vec![ty.clone()];
    types_in(tm, &mut tys);
    if let Tm::App(f, _) = tm {
        if let Tm::Lam(x, a, _) = &**f {
            tys.push(Ty::Pi(x.clone(), a.clone(), b(shift_ty(ty, 1))));
        }
    }
    tys.iter().all(|a| universe_bound(a).0 <= max && universe_bound(a).1 <= max)
}

struct Gen {
    cfg: PoolConfig,
    memo: HashMap<(Ctx, usize), Vec<(Tm, Ty)>>,
}

impl Gen {
    fn upto(&mut self, ctx: &Ctx, d: usize) -> Vec<(Tm, Ty)> {
        (1..=d).flat_map(|k| self.level(ctx, k)).collect()
    }

    fn level(&mut self, ctx: &Ctx, d: usize) -> Vec<(Tm, Ty)> {
        if let Some(v) = self.memo.get(&(ctx.clone(), d)) {
            return v.clone();
        }
        let cands = if d == 1 { self.atoms(ctx) } else { self.formers(ctx, d) };
        let mut seen: HashSet<Tm> = (1..d).flat_map(|k| self.memo.get(&(ctx.clone(), k)).cloned().unwrap_or_default()).map(|p| p.0).collect();
        let mut out = Vec::new();
        for t in cands {
            if depth_tm(&t) > self.cfg.max_depth || !seen.insert(t.clone()) {
                continue;
            }
            if let Ok(ty) = infer(ctx, &t) {
                if fits(&t, &ty, self.cfg.max_universe) {
                    out.push((t, ty));
                }
            }
        }
        let out = diverse(out, self.cfg.per_level);
        self.memo.insert((ctx.clone(), d), out.clone());
        out
    }

    fn atoms(&self, ctx: &Ctx) -> Vec<Tm> {
        let mut v: Vec<Tm> = (0..ctx.len()).map(Tm::Var).collect();
        v.push(Tm::Tt);
        v
    }

    fn formers(&mut self, ctx: &Ctx, d: usize) -> Vec<Tm> {
        let k = ctx.len();
        let subs = self.upto(ctx, d - 1);
        let few = spread(&subs, 6);
        let mut out = Vec::new();
        for (t, _) in &subs {
            out.push(Tm::Inl(b(t.clone()), b(Ty::Unit)));
            out.push(Tm::Inr(b(Ty::Unit), b(t.clone())));
            out.push(Tm::Refl(b(t.clone())));
        }
        for (i, a) in annotations().iter().enumerate() {
            for (body, _) in spread(&self.upto(&extend(ctx, ["x", "y", "z"][i], a), d - 1), 8) {
                out.push(Tm::Lam(n(["x", "y", "z"][i]), b(a.clone()), b(body)));
            }
        }
        for (f, ft) in &subs {
            if let Ty::Pi(_, a, _) = ft {
                for (x, xt) in &subs {
                    if xt == &**a {
                        out.push(Tm::App(b(f.clone()), b(x.clone())));
                    }
                }
            }
        }
        for (x, a) in &few {
            for (y, bt) in &few {
                out.push(Tm::Pair(n("x"), b(a.clone()), b(shift_ty(bt, 1)), b(x.clone()), b(y.clone())));
            }
            let dep = var_id(shift_ty(a, 1), 0, 0);
            out.push(Tm::Pair(n("x"), b(a.clone()), b(dep), b(x.clone()), b(Tm::Refl(b(x.clone())))));
        }
        for (s, st) in &subs {
            match st {
                Ty::Sigma(_, a, fam) => {
                    let inner = extend(&extend(ctx, "x", a), "y", fam);
                    for (body, bt) in spread(&self.upto(&inner, d - 1), 4) {
                        if let Some(c) = unshift(&bt, 2, k) {
                            out.push(Tm::Split(b(s.clone()), n("z"), b(shift_ty(&c, 1)), n("x"), n("y"), b(body)));
                        }
                    }
                }
                Ty::Sum(a, bt) => {
                    let dep = var_id(shift_ty(st, 1), 0, 0);
                    out.push(Tm::Case(
                        b(s.clone()),
                        n("z"),
                        b(dep),
                        n("x"),
                        b(Tm::Refl(b(Tm::Inl(b(Tm::Var(0)), b(shift_ty(bt, 1)))))),
                        n("y"),
                        b(Tm::Refl(b(Tm::Inr(b(shift_ty(a, 1)), b(Tm::Var(0)))))),
                    ));
                    let left = spread(&self.upto(&extend(ctx, "x", a), d - 1), 4);
                    let right = spread(&self.upto(&extend(ctx, "y", bt), d - 1), 4);
                    for (d1, t1) in &left {
                        for (d2, t2) in &right {
                            match (unshift(t1, 1, k), unshift(t2, 1, k)) {
                                (Some(c1), Some(c2)) if c1 == c2 => out.push(Tm::Case(
                                    b(s.clone()),
                                    n("z"),
                                    b(shift_ty(&c1, 1)),
                                    n("x"),
                                    b(d1.clone()),
                                    n("y"),
                                    b(d2.clone()),
                                )),
                                _ => {}
                            }
                        }
                    }
                }
                Ty::Unit => {
                    out.push(Tm::Urec(b(s.clone()), n("z"), b(var_id(Ty::Unit, 0, 0)), b(Tm::Refl(b(Tm::Tt)))));
                    for (dd, dt) in &few {
                        out.push(Tm::Urec(b(s.clone()), n("z"), b(shift_ty(dt, 1)), b(dd.clone())));
                    }
                }
                Ty::Zero => {
                    for c in [Ty::Unit, bool_ty()] {
                        out.push(Tm::Exfalso(b(s.clone()), n("z"), b(c)));
                    }
                }
                Ty::Id(a, _, _) => {
                    out.extend(self.js(ctx, s, a, &few, d));
                }
                Ty::Pi(..) => {}
            }
        }
        out
    }

    fn js(&mut self, ctx: &Ctx, p: &Tm, a: &Ty, few: &[(Tm, Ty)], d: usize) -> Vec<Tm> {
        let k = ctx.len();
        let j = |tel: Vec<(Name, Ty)>, motive: Ty, d: Tm, args: Vec<Tm>| {
            Tm::J(b(JData {
                x: n("x"),
                y: n("y"),
                q: n("q"),
                dw: tel.iter().map(|(w, _)| w.clone()).collect(),
                tel,
                motive,
                dx: n("x"),
                d,
                p: p.clone(),
                args,
            }))
        };
        let mut out = vec![j(vec![], var_id(shift_ty(a, 3), 2, 1), Tm::Refl(b(Tm::Var(0))), vec![])];
        for (body, bt) in spread(&self.upto(&extend(ctx, "x", a), d - 1), 4) {
            if let Some(c) = unshift(&bt, 1, k) {
                out.push(j(vec![], shift_ty(&c, 3), body, vec![]));
            }
        }
        for (e, et) in few.iter().take(3) {
            out.push(j(vec![(n("w"), shift_ty(et, 3))], shift_ty(et, 4), Tm::Var(0), vec![e.clone()]));
        }
        out.push(j(vec![(n("w"), var_id(shift_ty(a, 3), 2, 1))], var_id(shift_ty(a, 4), 3, 2), Tm::Var(0), vec![p.clone()]));
        out
    }
}

fn head(t: &Tm) -> u8 {
    match t {
        Tm::Var(_) => 0,
        Tm::Lam(..) => 1,
        Tm::App(..) => 2,
        Tm::Pair(..) => 3,
        Tm::Split(..) => 4,
        Tm::Inl(..) => 5,
        Tm::Inr(..) => 6,
        Tm::Case(..) => 7,
        Tm::Tt => 8,
        Tm::Urec(..) => 9,
        Tm::Exfalso(..) => 10,
        Tm::Refl(..) => 11,
        Tm::J(j) if j.tel.is_empty() => 12,
        Tm::J(_) => 13,
    }
}

/// Thins to `limit` entries, taking round-robin from groups keyed by the
/// outer two formers so that rare formers survive.
fn diverse(items: Vec<(Tm, Ty)>, limit: usize) -> Vec<(Tm, Ty)> {
    let key = |t: &Tm| match t {
        Tm::Lam(_, _, body) => (1, head(body)),
        t => (head(t), 0),
    };
    let mut groups: std::collections::BTreeMap<(u8, u8), Vec<(Tm, Ty)>> = Default::default();
    for it in items {
        groups.entry(key(&it.0)).or_default().push(it);
    }
    let mut groups: Vec<Vec<(Tm, Ty)>> = groups.into_values().map(|g| spread(&g, limit)).collect();
    let mut out = Vec::new();
    let mut round = 0;
    while out.len() < limit && groups.iter().any(|g| round < g.len()) {
        for g in &mut groups {
            if out.len() < limit && round < g.len() {
                out.push(g[round].clone());
            }
        }
        round += 1;
    }
    out
}

/// Grows cases deeper than the exhaustive bound by random former
/// applications over the pool of one context.
fn deepen(ctx: &Ctx, avail: &mut Vec<(Tm, Ty)>, rng: &mut ChaCha8Rng, cfg: &PoolConfig, want: usize) -> Vec<(Tm, Ty)> {
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < want && tries < 200 * want.max(1) && !avail.is_empty() {
        tries += 1;
        let (t, ty) = avail.choose(rng).unwrap().clone();
        let cand = match rng.gen_range(0..6) {
            0 => Tm::Inl(b(t.clone()), b(bool_ty())),
            1 => Tm::Refl(b(t.clone())),
            2 => Tm::App(b(Tm::Lam(n("v"), b(ty.clone()), b(Tm::Var(0)))), b(t.clone())),
            3 => {
                let (u, ut) = avail.choose(rng).unwrap().clone();
                Tm::Pair(n("x"), b(ty.clone()), b(shift_ty(&ut, 1)), b(t.clone()), b(u))
            }
            4 => Tm::Urec(b(Tm::Tt), n("z"), b(shift_ty(&ty, 1)), b(t.clone())),
            _ => Tm::Lam(n("v"), b(Ty::Unit), b(shift_tm(&t, 1))),
        };
        let Ok(cty) = infer(ctx, &cand) else { continue };
        if fits(&cand, &cty, cfg.max_universe) {
            avail.push((cand.clone(), cty.clone()));
            if depth_tm(&cand) > cfg.max_depth {
                out.push((cand, cty));
            }
        }
    }
    out
}

/// Substitutions `Δ → Γ` whose components are pool terms of `Δ`.
fn substitutions(gen: &mut Gen, delta: &Ctx, gamma: &Ctx, limit: usize) -> Vec<Subst> {
    let terms = gen.upto(delta, 3);
    let mut partial = vec![Subst(vec![])];
    for (_, a) in gamma {
        let mut next = Vec::new();
        for s in &partial {
            let want = subst_ty(a, s);
            for (t, _) in terms.iter().filter(|(_, ty)| *ty == want) {
                next.push(s.cons(t.clone()));
            }
        }
        partial = spread(&next, limit * 2);
    }
    spread(&partial, limit)
}

pub fn build(config: PoolConfig) -> Pool {
    let contexts = base_contexts();
    let mut gen = Gen { cfg: config, memo: HashMap::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut terms = Vec::new();
    let mut types = Vec::new();
    let mut seen_types = HashSet::new();
    let per_ctx_deep = config.deep / contexts.len() + 1;
    let mut deep_total = 0;
    for (ci, ctx) in contexts.iter().enumerate() {
        let mut avail = gen.upto(ctx, config.max_depth);
        for (tm, ty) in &avail {
            terms.push(TermCase { ctx: ci, tm: tm.clone(), ty: ty.clone(), deep: false });
            if seen_types.insert((ci, ty.clone())) {
                types.push((ci, ty.clone()));
            }
        }
        let want = per_ctx_deep.min(config.deep - deep_total);
        for (tm, ty) in deepen(ctx, &mut avail, &mut rng, &config, want) {
            deep_total += 1;
            terms.push(TermCase { ctx: ci, tm, ty, deep: true });
        }
    }
    let mut substs = Vec::new();
    for (from, delta) in contexts.iter().enumerate() {
        for (to, gamma) in contexts.iter().enumerate() {
            for sigma in substitutions(&mut gen, delta, gamma, config.per_pair) {
                debug_assert!(check_subst(delta, gamma, &sigma).is_ok());
                substs.push(SubstCase { from, to, sigma });
            }
        }
    }
    let direct = substs.clone();
    for s in &direct {
        for t in direct.iter().filter(|t| t.to == s.from).take(1) {
            substs.push(SubstCase { from: t.from, to: s.to, sigma: s.sigma.after(&t.sigma) });
        }
    }
    Pool { config, contexts, terms, types, substs }
}

impl Pool {
    pub fn deep_count(&self) -> usize {
        self.terms.iter().filter(|t| t.deep).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mltt::parse::print_tm;

    #[test]
    fn pool_is_well_typed_and_deterministic() {
        let p = build(PoolConfig::smoke());
        assert!(p.terms.len() > 50, "{}", p.terms.len());
        for t in &p.terms {
            assert_eq!(infer(&p.contexts[t.ctx], &t.tm).unwrap(), t.ty);
        }
        for s in &p.substs {
            check_subst(&p.contexts[s.from], &p.contexts[s.to], &s.sigma).unwrap();
        }
        let q = build(PoolConfig::smoke());
        assert_eq!(p.terms.iter().map(|t| &t.tm).collect::<Vec<_>>(), q.terms.iter().map(|t| &t.tm).collect::<Vec<_>>());
    }

    #[test]
    fn every_former_occurs() {
        let p = build(PoolConfig::default());
        let printed: Vec<String> = p.terms.iter().map(|t| print_tm(&t.tm)).collect();
        for head in ["(lam", "(app", "(pair", "(split", "(inl", "(inr", "(case", "tt", "(urec", "(exfalso", "(refl", "(J"] {
            assert!(printed.iter().any(|s| s.contains(head)), "no {head} in the pool");
        }
        let frobenius = p.terms.iter().any(|t| matches!(&t.tm, Tm::J(j) if !j.tel.is_empty()));
        assert!(frobenius);
        assert_eq!(p.deep_count(), 100);
    }
}
