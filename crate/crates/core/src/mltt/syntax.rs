//! Fully annotated syntax with de Bruijn indices and simultaneous
//! substitutions.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

/// A binder's display name. Names never affect equality.
#[derive(Clone)]
pub struct Name(pub String);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(s.to_string())
    }
}

impl PartialEq for Name {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Name {}

impl Hash for Name {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ty {
    Unit,
    Zero,
    Sum(Box<Ty>, Box<Ty>),
    Pi(Name, Box<Ty>, Box<Ty>),
    Sigma(Name, Box<Ty>, Box<Ty>),
    Id(Box<Ty>, Box<Tm>, Box<Tm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tm {
    /// Counted from the end of the context.
    Var(usize),
    Lam(Name, Box<Ty>, Box<Tm>),
    App(Box<Tm>, Box<Tm>),
    /// `(pair (x A) B a b)`, with `B` under `x`.
    Pair(Name, Box<Ty>, Box<Ty>, Box<Tm>, Box<Tm>),
    /// `(split p (z C) (x y d))`.
    Split(Box<Tm>, Name, Box<Ty>, Name, Name, Box<Tm>),
    /// `(inl a B)`.
    Inl(Box<Tm>, Box<Ty>),
    /// `(inr A b)`.
    Inr(Box<Ty>, Box<Tm>),
    /// `(case s (z C) (x d1) (y d2))`.
    Case(Box<Tm>, Name, Box<Ty>, Name, Box<Tm>, Name, Box<Tm>),
    Tt,
    /// `(urec s (z C) d)`.
    Urec(Box<Tm>, Name, Box<Ty>, Box<Tm>),
    /// `(exfalso e (z C))`.
    Exfalso(Box<Tm>, Name, Box<Ty>),
    Refl(Box<Tm>),
    J(Box<JData>),
}

/// `(J (x y q (w B)… C) (x w… d) p e…)`: the motive `C` over
/// `x y : A, q : Id(A,x,y), w… : Δ`, the step `d` over `x : A, w… : Δ[x,x,refl x]`,
/// the proof `p : Id(A,a,b)` and arguments `e… : Δ[a,b,p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JData {
    pub x: Name,
    pub y: Name,
    pub q: Name,
    pub tel: Vec<(Name, Ty)>,
    pub motive: Ty,
    pub dx: Name,
    pub dw: Vec<Name>,
    pub d: Tm,
    pub p: Tm,
    pub args: Vec<Tm>,
}

/// A context, first variable first.
pub type Ctx = Vec<(Name, Ty)>;

/// A substitution `Δ → Γ`: one term over `Δ` per variable of `Γ`, indexed
/// like variables (entry 0 is the last variable of `Γ`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subst(pub Vec<Tm>);

impl Subst {
    /// The identity on a context of length `n`.
    pub fn identity(n: usize) -> Subst {
        Subst((0..n).map(Tm::Var).collect())
    }

    /// The projection `Γ.A₁…A_k → Γ` for `|Γ| = n`.
    pub fn weaken(n: usize, k: usize) -> Subst {
        Subst((0..n).map(|i| Tm::Var(i + k)).collect())
    }

    /// `⟨1, t⟩ : Γ → Γ.A` for `|Γ| = n`.
    pub fn single(n: usize, t: Tm) -> Subst {
        let mut v = vec![t];
        v.extend((0..n).map(Tm::Var));
        Subst(v)
    }

    /// Extends by a term for one more variable.
    pub fn cons(&self, t: Tm) -> Subst {
        let mut v = vec![t];
        v.extend(self.0.iter().cloned());
        Subst(v)
    }

    /// `σ` under one binder: `σ.A : Δ.A[σ] → Γ.A`.
    pub fn lift(&self) -> Subst {
        let mut v = vec![Tm::Var(0)];
        v.extend(self.0.iter().map(|t| shift_tm(t, 1)));
        Subst(v)
    }

    pub fn lift_by(&self, k: usize) -> Subst {
        (0..k).fold(self.clone(), |s, _| s.lift())
    }

    /// `self ∘ tau`, for `tau : Θ → Δ` and `self : Δ → Γ`.
    pub fn after(&self, tau: &Subst) -> Subst {
        Subst(self.0.iter().map(|t| subst_tm(t, tau)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Adds `k` to every free variable.
pub fn shift_tm(t: &Tm, k: usize) -> Tm {
    if k == 0 {
        return t.clone();
    }
    rename_tm(t, &|i| i + k, 0)
}

pub fn shift_ty(a: &Ty, k: usize) -> Ty {
    if k == 0 {
        return a.clone();
    }
    rename_ty(a, &|i| i + k, 0)
}

fn rename_ty(a: &Ty, f: &dyn Fn(usize) -> usize, depth: usize) -> Ty {
    match a {
        Ty::Unit => Ty::Unit,
        Ty::Zero => Ty::Zero,
        Ty::Sum(x, y) => Ty::Sum(Box::new(rename_ty(x, f, depth)), Box::new(rename_ty(y, f, depth))),
        Ty::Pi(n, x, y) => Ty::Pi(n.clone(), Box::new(rename_ty(x, f, depth)), Box::new(rename_ty(y, f, depth + 1))),
        Ty::Sigma(n, x, y) => Ty::Sigma(n.clone(), Box::new(rename_ty(x, f, depth)), Box::new(rename_ty(y, f, depth + 1))),
        Ty::Id(x, s, t) => Ty::Id(Box::new(rename_ty(x, f, depth)), Box::new(rename_tm(s, f, depth)), Box::new(rename_tm(t, f, depth))),
    }
}

fn rename_tm(t: &Tm, f: &dyn Fn(usize) -> usize, depth: usize) -> Tm {
    let ty = |a: &Ty, d: usize| Box::new(rename_ty(a, f, depth + d));
    let tm = |s: &Tm, d: usize| Box::new(rename_tm(s, f, depth + d));
    match t {
        Tm::Var(i) if *i < depth => Tm::Var(*i),
        Tm::Var(i) => Tm::Var(f(i - depth) + depth),
        Tm::Lam(n, a, b) => Tm::Lam(n.clone(), ty(a, 0), tm(b, 1)),
        Tm::App(g, a) => Tm::App(tm(g, 0), tm(a, 0)),
        Tm::Pair(n, a, b, x, y) => Tm::Pair(n.clone(), ty(a, 0), ty(b, 1), tm(x, 0), tm(y, 0)),
        Tm::Split(p, z, c, x, y, d) => Tm::Split(tm(p, 0), z.clone(), ty(c, 1), x.clone(), y.clone(), tm(d, 2)),
        Tm::Inl(a, b) => Tm::Inl(tm(a, 0), ty(b, 0)),
        Tm::Inr(a, b) => Tm::Inr(ty(a, 0), tm(b, 0)),
        Tm::Case(s, z, c, x, d1, y, d2) => {
            Tm::Case(tm(s, 0), z.clone(), ty(c, 1), x.clone(), tm(d1, 1), y.clone(), tm(d2, 1))
        }
        Tm::Tt => Tm::Tt,
        Tm::Urec(s, z, c, d) => Tm::Urec(tm(s, 0), z.clone(), ty(c, 1), tm(d, 0)),
        Tm::Exfalso(e, z, c) => Tm::Exfalso(tm(e, 0), z.clone(), ty(c, 1)),
        Tm::Refl(a) => Tm::Refl(tm(a, 0)),
        Tm::J(j) => {
            let n = j.tel.len();
            Tm::J(Box::new(JData {
                tel: j.tel.iter().enumerate().map(|(i, (w, b))| (w.clone(), rename_ty(b, f, depth + 3 + i))).collect(),
                motive: rename_ty(&j.motive, f, depth + 3 + n),
                d: rename_tm(&j.d, f, depth + 1 + n),
                p: rename_tm(&j.p, f, depth),
                args: j.args.iter().map(|e| rename_tm(e, f, depth)).collect(),
                ..(**j).clone()
            }))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("scope violation: {what} mentions a variable outside a context of length {len}")]
pub struct ScopeError {
    pub what: String,
    pub len: usize,
}

/// `a[σ]`, refusing types that are not scoped by `σ`'s target.
pub fn checked_subst_ty(a: &Ty, s: &Subst) -> Result<Ty, ScopeError> {
    if !scoped_ty(a, s.len()) {
        return Err(ScopeError { what: format!("{a:?}"), len: s.len() });
    }
    Ok(subst_ty(a, s))
}

pub fn checked_subst_tm(t: &Tm, s: &Subst) -> Result<Tm, ScopeError> {
    if !scoped_tm(t, s.len()) {
        return Err(ScopeError { what: format!("{t:?}"), len: s.len() });
    }
    Ok(subst_tm(t, s))
}

/// `a[σ]`. Variables outside the domain of `σ` are left alone.
pub fn subst_ty(a: &Ty, s: &Subst) -> Ty {
    let ty = |b: &Ty, k: usize| Box::new(subst_ty(b, &s.lift_by(k)));
    match a {
        Ty::Unit => Ty::Unit,
        Ty::Zero => Ty::Zero,
        Ty::Sum(x, y) => Ty::Sum(ty(x, 0), ty(y, 0)),
        Ty::Pi(n, x, y) => Ty::Pi(n.clone(), ty(x, 0), ty(y, 1)),
        Ty::Sigma(n, x, y) => Ty::Sigma(n.clone(), ty(x, 0), ty(y, 1)),
        Ty::Id(x, u, v) => Ty::Id(ty(x, 0), Box::new(subst_tm(u, s)), Box::new(subst_tm(v, s))),
    }
}

pub fn subst_tm(t: &Tm, s: &Subst) -> Tm {
    let ty = |b: &Ty, k: usize| Box::new(subst_ty(b, &s.lift_by(k)));
    let tm = |u: &Tm, k: usize| Box::new(subst_tm(u, &s.lift_by(k)));
    match t {
        Tm::Var(i) => s.0.get(*i).cloned().unwrap_or(Tm::Var(*i)),
        Tm::Lam(n, a, b) => Tm::Lam(n.clone(), ty(a, 0), tm(b, 1)),
        Tm::App(g, a) => Tm::App(tm(g, 0), tm(a, 0)),
        Tm::Pair(n, a, b, x, y) => Tm::Pair(n.clone(), ty(a, 0), ty(b, 1), tm(x, 0), tm(y, 0)),
        Tm::Split(p, z, c, x, y, d) => Tm::Split(tm(p, 0), z.clone(), ty(c, 1), x.clone(), y.clone(), tm(d, 2)),
        Tm::Inl(a, b) => Tm::Inl(tm(a, 0), ty(b, 0)),
        Tm::Inr(a, b) => Tm::Inr(ty(a, 0), tm(b, 0)),
        Tm::Case(u, z, c, x, d1, y, d2) => {
            Tm::Case(tm(u, 0), z.clone(), ty(c, 1), x.clone(), tm(d1, 1), y.clone(), tm(d2, 1))
        }
        Tm::Tt => Tm::Tt,
        Tm::Urec(u, z, c, d) => Tm::Urec(tm(u, 0), z.clone(), ty(c, 1), tm(d, 0)),
        Tm::Exfalso(e, z, c) => Tm::Exfalso(tm(e, 0), z.clone(), ty(c, 1)),
        Tm::Refl(a) => Tm::Refl(tm(a, 0)),
        Tm::J(j) => {
            let n = j.tel.len();
            Tm::J(Box::new(JData {
                tel: j.tel.iter().enumerate().map(|(i, (w, b))| (w.clone(), subst_ty(b, &s.lift_by(3 + i)))).collect(),
                motive: subst_ty(&j.motive, &s.lift_by(3 + n)),
                d: subst_tm(&j.d, &s.lift_by(1 + n)),
                p: subst_tm(&j.p, s),
                args: j.args.iter().map(|e| subst_tm(e, s)).collect(),
                ..(**j).clone()
            }))
        }
    }
}

/// Whether every free variable is below `n`.
pub fn scoped_ty(a: &Ty, n: usize) -> bool {
    match a {
        Ty::Unit | Ty::Zero => true,
        Ty::Sum(x, y) => scoped_ty(x, n) && scoped_ty(y, n),
        Ty::Pi(_, x, y) | Ty::Sigma(_, x, y) => scoped_ty(x, n) && scoped_ty(y, n + 1),
        Ty::Id(x, u, v) => scoped_ty(x, n) && scoped_tm(u, n) && scoped_tm(v, n),
    }
}

pub fn scoped_tm(t: &Tm, n: usize) -> bool {
    match t {
        Tm::Var(i) => *i < n,
        Tm::Lam(_, a, b) => scoped_ty(a, n) && scoped_tm(b, n + 1),
        Tm::App(g, a) => scoped_tm(g, n) && scoped_tm(a, n),
        Tm::Pair(_, a, b, x, y) => scoped_ty(a, n) && scoped_ty(b, n + 1) && scoped_tm(x, n) && scoped_tm(y, n),
        Tm::Split(p, _, c, _, _, d) => scoped_tm(p, n) && scoped_ty(c, n + 1) && scoped_tm(d, n + 2),
        Tm::Inl(a, b) => scoped_tm(a, n) && scoped_ty(b, n),
        Tm::Inr(a, b) => scoped_ty(a, n) && scoped_tm(b, n),
        Tm::Case(s, _, c, _, d1, _, d2) => scoped_tm(s, n) && scoped_ty(c, n + 1) && scoped_tm(d1, n + 1) && scoped_tm(d2, n + 1),
        Tm::Tt => true,
        Tm::Urec(s, _, c, d) => scoped_tm(s, n) && scoped_ty(c, n + 1) && scoped_tm(d, n),
        Tm::Exfalso(e, _, c) => scoped_tm(e, n) && scoped_ty(c, n + 1),
        Tm::Refl(a) => scoped_tm(a, n),
        Tm::J(j) => {
            let k = j.tel.len();
            j.tel.iter().enumerate().all(|(i, (_, b))| scoped_ty(b, n + 3 + i))
                && scoped_ty(&j.motive, n + 3 + k)
                && scoped_tm(&j.d, n + 1 + k)
                && scoped_tm(&j.p, n)
                && j.args.iter().all(|e| scoped_tm(e, n))
        }
    }
}

/// Nesting depth of the syntax tree.
pub fn depth_ty(a: &Ty) -> usize {
    1 + match a {
        Ty::Unit | Ty::Zero => 0,
        Ty::Sum(x, y) | Ty::Pi(_, x, y) | Ty::Sigma(_, x, y) => depth_ty(x).max(depth_ty(y)),
        Ty::Id(x, u, v) => depth_ty(x).max(depth_tm(u)).max(depth_tm(v)),
    }
}

pub fn depth_tm(t: &Tm) -> usize {
    1 + match t {
        Tm::Var(_) | Tm::Tt => 0,
        Tm::Lam(_, a, b) => depth_ty(a).max(depth_tm(b)),
        Tm::App(g, a) => depth_tm(g).max(depth_tm(a)),
        Tm::Pair(_, a, b, x, y) => depth_ty(a).max(depth_ty(b)).max(depth_tm(x)).max(depth_tm(y)),
        Tm::Split(p, _, c, _, _, d) => depth_tm(p).max(depth_ty(c)).max(depth_tm(d)),
        Tm::Inl(a, b) => depth_tm(a).max(depth_ty(b)),
        Tm::Inr(a, b) => depth_ty(a).max(depth_tm(b)),
        Tm::Case(s, _, c, _, d1, _, d2) => depth_tm(s).max(depth_ty(c)).max(depth_tm(d1)).max(depth_tm(d2)),
        Tm::Urec(s, _, c, d) => depth_tm(s).max(depth_ty(c)).max(depth_tm(d)),
        Tm::Exfalso(e, _, c) => depth_tm(e).max(depth_ty(c)),
        Tm::Refl(a) => depth_tm(a),
        Tm::J(j) => {
            let tel = j.tel.iter().map(|(_, b)| depth_ty(b)).max().unwrap_or(0);
            let args = j.args.iter().map(depth_tm).max().unwrap_or(0);
            tel.max(depth_ty(&j.motive)).max(depth_tm(&j.d)).max(depth_tm(&j.p)).max(args)
        }
    }
}

/// The free variables of a term.
pub fn free_vars_tm(t: &Tm) -> BTreeSet<usize> {
    let seen = RefCell::new(BTreeSet::new());
    rename_tm(t, &|i| {
        seen.borrow_mut().insert(i);
        i
    }, 0);
    seen.into_inner()
}

pub fn free_vars_ty(a: &Ty) -> BTreeSet<usize> {
    let seen = RefCell::new(BTreeSet::new());
    rename_ty(a, &|i| {
        seen.borrow_mut().insert(i);
        i
    }, 0);
    seen.into_inner()
}

pub fn bool_ty() -> Ty {
    Ty::Sum(Box::new(Ty::Unit), Box::new(Ty::Unit))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> Tm {
        Tm::Var(i)
    }

    #[test]
    fn substitution_under_binders() {
        // λ(y:Unit). x  with x ↦ tt
        let t = Tm::Lam(Name::new("y"), Box::new(Ty::Unit), Box::new(v(1)));
        let s = Subst::single(0, Tm::Tt);
        assert_eq!(subst_tm(&t, &s), Tm::Lam(Name::new("y"), Box::new(Ty::Unit), Box::new(Tm::Tt)));
    }

    #[test]
    fn identity_and_composition() {
        let a = Ty::Id(Box::new(bool_ty()), Box::new(v(0)), Box::new(v(1)));
        assert_eq!(subst_ty(&a, &Subst::identity(2)), a);
        let sigma = Subst(vec![v(1), v(0)]);
        let tau = Subst(vec![Tm::Inl(Box::new(Tm::Tt), Box::new(Ty::Unit)), v(0)]);
        assert_eq!(subst_ty(&a, &sigma.after(&tau)), subst_ty(&subst_ty(&a, &sigma), &tau));
    }

    #[test]
    fn names_do_not_matter() {
        let a = Ty::Pi(Name::new("x"), Box::new(Ty::Unit), Box::new(Ty::Unit));
        let b = Ty::Pi(Name::new("y"), Box::new(Ty::Unit), Box::new(Ty::Unit));
        assert_eq!(a, b);
    }
}
