//! Syntax-directed type checking. Type equality is syntactic identity up
//! to binder names.

use thiserror::Error;

use super::parse::{print_ty_in, print_tm_in};
use super::syntax::{scoped_tm, scoped_ty, shift_ty, subst_ty, Ctx, JData, Name, Subst, Tm, Ty};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("variable #{index} is out of scope in a context of length {len}")]
    Scope { index: usize, len: usize },
    #[error("{term}: expected {expected}, found {actual}")]
    Mismatch { term: String, expected: String, actual: String },
    #[error("{term}: expected {what}, found {actual}")]
    NotA { term: String, what: &'static str, actual: String },
    #[error("J: telescope of length {tel} with {names} step names and {args} arguments")]
    JArity { tel: usize, names: usize, args: usize },
}

fn var_ty(ctx: &Ctx, i: usize) -> Result<Ty, TypeError> {
    let n = ctx.len();
    if i >= n {
        return Err(TypeError::Scope { index: i, len: n });
    }
    Ok(shift_ty(&ctx[n - 1 - i].1, i + 1))
}

fn extend(ctx: &Ctx, x: &Name, a: &Ty) -> Ctx {
    let mut c = ctx.clone();
    c.push((x.clone(), a.clone()));
    c
}

pub fn check_ctx(ctx: &Ctx) -> Result<(), TypeError> {
    for k in 0..ctx.len() {
        check_ty(&ctx[..k].to_vec(), &ctx[k].1)?;
    }
    Ok(())
}

pub fn check_ty(ctx: &Ctx, a: &Ty) -> Result<(), TypeError> {
    if !scoped_ty(a, ctx.len()) {
        return Err(TypeError::Scope { index: ctx.len(), len: ctx.len() });
    }
    match a {
        Ty::Unit | Ty::Zero => Ok(()),
        Ty::Sum(x, y) => {
            check_ty(ctx, x)?;
            check_ty(ctx, y)
        }
        Ty::Pi(n, x, y) | Ty::Sigma(n, x, y) => {
            check_ty(ctx, x)?;
            check_ty(&extend(ctx, n, x), y)
        }
        Ty::Id(x, u, v) => {
            check_ty(ctx, x)?;
            check(ctx, u, x)?;
            check(ctx, v, x)
        }
    }
}

pub fn check(ctx: &Ctx, t: &Tm, a: &Ty) -> Result<(), TypeError> {
    let actual = infer(ctx, t)?;
    if actual != *a {
        return Err(TypeError::Mismatch {
            term: print_tm_in(t, ctx),
            expected: print_ty_in(a, ctx),
            actual: print_ty_in(&actual, ctx),
        });
    }
    Ok(())
}

fn not_a(ctx: &Ctx, t: &Tm, what: &'static str, actual: &Ty) -> TypeError {
    TypeError::NotA { term: print_tm_in(t, ctx), what, actual: print_ty_in(actual, ctx) }
}

/// The substitution `Γ.A.B → Γ.Σ(A,B)` sending the last two variables to
/// their pair.
pub fn pair_subst(n: usize, x: &Name, a: &Ty, b: &Ty) -> Subst {
    let w2 = Subst::weaken(n, 2);
    let pair = Tm::Pair(x.clone(), Box::new(subst_ty(a, &w2)), Box::new(subst_ty(b, &w2.lift())), Box::new(Tm::Var(1)), Box::new(Tm::Var(0)));
    w2.cons(pair)
}

/// `Γ.A → Γ.(A+B)` through `inl`.
pub fn inl_subst(n: usize, b: &Ty) -> Subst {
    Subst::weaken(n, 1).cons(Tm::Inl(Box::new(Tm::Var(0)), Box::new(shift_ty(b, 1))))
}

pub fn inr_subst(n: usize, a: &Ty) -> Subst {
    Subst::weaken(n, 1).cons(Tm::Inr(Box::new(shift_ty(a, 1)), Box::new(Tm::Var(0))))
}

/// `Γ.A.Δ[x,x,refl x] → Γ.A.A.Id.Δ` over the first `i` telescope entries.
pub fn refl_subst(n: usize, i: usize) -> Subst {
    let mut v: Vec<Tm> = (0..i).map(Tm::Var).collect();
    v.push(Tm::Refl(Box::new(Tm::Var(i))));
    v.push(Tm::Var(i));
    v.push(Tm::Var(i));
    v.extend((0..n).map(|j| Tm::Var(i + 1 + j)));
    Subst(v)
}

/// `Γ → Γ.A.A.Id.Δ` given by `a, b, p` and the first `i` arguments.
pub fn j_args_subst(n: usize, a: &Tm, b: &Tm, p: &Tm, args: &[Tm]) -> Subst {
    let mut v: Vec<Tm> = args.iter().rev().cloned().collect();
    v.push(p.clone());
    v.push(b.clone());
    v.push(a.clone());
    v.extend((0..n).map(Tm::Var));
    Subst(v)
}

/// The context `Γ, x : A, y : A, q : Id(A,x,y)` of a J motive, before the telescope.
pub fn j_base(ctx: &Ctx, j: &JData, a: &Ty) -> Ctx {
    let c = extend(ctx, &j.x, a);
    let c = extend(&c, &j.y, &shift_ty(a, 1));
    let id = Ty::Id(Box::new(shift_ty(a, 2)), Box::new(Tm::Var(1)), Box::new(Tm::Var(0)));
    extend(&c, &j.q, &id)
}

/// The context `Γ, x : A, w… : Δ[x,x,refl x]` of a J step.
pub fn j_step_ctx(ctx: &Ctx, j: &JData, a: &Ty) -> Ctx {
    let n = ctx.len();
    let mut c = extend(ctx, &j.dx, a);
    for (i, (w, b)) in j.tel.iter().enumerate() {
        let name = j.dw.get(i).unwrap_or(w);
        c = extend(&c, name, &subst_ty(b, &refl_subst(n, i)));
    }
    c
}

pub fn infer(ctx: &Ctx, t: &Tm) -> Result<Ty, TypeError> {
    let n = ctx.len();
    if !scoped_tm(t, n) {
        return Err(TypeError::Scope { index: n, len: n });
    }
    match t {
        Tm::Var(i) => var_ty(ctx, *i),
        Tm::Lam(x, a, body) => {
            check_ty(ctx, a)?;
            let cod = infer(&extend(ctx, x, a), body)?;
            Ok(Ty::Pi(x.clone(), a.clone(), b(cod)))
        }
        Tm::App(f, arg) => match infer(ctx, f)? {
            Ty::Pi(_, a, cod) => {
                check(ctx, arg, &a)?;
                Ok(subst_ty(&cod, &Subst::single(n, (**arg).clone())))
            }
            other => Err(not_a(ctx, f, "a Π-type", &other)),
        },
        Tm::Pair(x, a, fam, u, v) => {
            check_ty(ctx, a)?;
            check_ty(&extend(ctx, x, a), fam)?;
            check(ctx, u, a)?;
            check(ctx, v, &subst_ty(fam, &Subst::single(n, (**u).clone())))?;
            Ok(Ty::Sigma(x.clone(), a.clone(), fam.clone()))
        }
        Tm::Split(p, z, c, x, y, d) => {
            let sig = infer(ctx, p)?;
            let Ty::Sigma(sx, a, fam) = &sig else {
                return Err(not_a(ctx, p, "a Σ-type", &sig));
            };
            check_ty(&extend(ctx, z, &sig), c)?;
            let inner = extend(&extend(ctx, x, a), y, fam);
            check(&inner, d, &subst_ty(c, &pair_subst(n, sx, a, fam)))?;
            Ok(subst_ty(c, &Subst::single(n, (**p).clone())))
        }
        Tm::Inl(u, bty) => {
            let a = infer(ctx, u)?;
            check_ty(ctx, bty)?;
            Ok(Ty::Sum(b(a), bty.clone()))
        }
        Tm::Inr(aty, v) => {
            check_ty(ctx, aty)?;
            let bt = infer(ctx, v)?;
            Ok(Ty::Sum(aty.clone(), b(bt)))
        }
        Tm::Case(s, z, c, x, d1, y, d2) => {
            let sum = infer(ctx, s)?;
            let Ty::Sum(a, bt) = &sum else {
                return Err(not_a(ctx, s, "a sum type", &sum));
            };
            check_ty(&extend(ctx, z, &sum), c)?;
            check(&extend(ctx, x, a), d1, &subst_ty(c, &inl_subst(n, bt)))?;
            check(&extend(ctx, y, bt), d2, &subst_ty(c, &inr_subst(n, a)))?;
            Ok(subst_ty(c, &Subst::single(n, (**s).clone())))
        }
        Tm::Tt => Ok(Ty::Unit),
        Tm::Urec(s, z, c, d) => {
            check(ctx, s, &Ty::Unit)?;
            check_ty(&extend(ctx, z, &Ty::Unit), c)?;
            check(ctx, d, &subst_ty(c, &Subst::single(n, Tm::Tt)))?;
            Ok(subst_ty(c, &Subst::single(n, (**s).clone())))
        }
        Tm::Exfalso(e, z, c) => {
            check(ctx, e, &Ty::Zero)?;
            check_ty(&extend(ctx, z, &Ty::Zero), c)?;
            Ok(subst_ty(c, &Subst::single(n, (**e).clone())))
        }
        Tm::Refl(u) => {
            let a = infer(ctx, u)?;
            Ok(Ty::Id(b(a), u.clone(), u.clone()))
        }
        Tm::J(j) => {
            if j.dw.len() != j.tel.len() || j.args.len() != j.tel.len() {
                return Err(TypeError::JArity { tel: j.tel.len(), names: j.dw.len(), args: j.args.len() });
            }
            let id = infer(ctx, &j.p)?;
            let Ty::Id(a, l, r) = &id else {
                return Err(not_a(ctx, &j.p, "an identity type", &id));
            };
            let mut mctx = j_base(ctx, j, a);
            for (w, bt) in &j.tel {
                check_ty(&mctx, bt)?;
                mctx = extend(&mctx, w, bt);
            }
            check_ty(&mctx, &j.motive)?;
            let step = j_step_ctx(ctx, j, a);
            check(&step, &j.d, &subst_ty(&j.motive, &refl_subst(n, j.tel.len())))?;
            for (i, (_, bt)) in j.tel.iter().enumerate() {
                check(ctx, &j.args[i], &subst_ty(bt, &j_args_subst(n, l, r, &j.p, &j.args[..i])))?;
            }
            Ok(subst_ty(&j.motive, &j_args_subst(n, l, r, &j.p, &j.args)))
        }
    }
}

/// Checks `σ : Δ → Γ` componentwise.
pub fn check_subst(delta: &Ctx, gamma: &Ctx, sigma: &Subst) -> Result<(), TypeError> {
    if sigma.len() != gamma.len() {
        return Err(TypeError::Scope { index: sigma.len(), len: gamma.len() });
    }
    let n = gamma.len();
    for (k, (_, ty)) in gamma.iter().enumerate() {
        // the variable of Γ at position k has de Bruijn index n-1-k in Γ
        let rest = Subst(sigma.0[n - k..].to_vec());
        check(delta, &sigma.0[n - 1 - k], &subst_ty(ty, &rest))?;
    }
    Ok(())
}

fn b<T>(x: T) -> Box<T> {
    Box::new(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mltt::parse::{parse_ctx, parse_tm, parse_tm_in, parse_ty};

    #[test]
    fn identity_function() {
        let t = parse_tm("(lam (x Unit) x)").unwrap();
        assert_eq!(infer(&vec![], &t).unwrap(), parse_ty("(Pi (x Unit) Unit)").unwrap());
    }

    #[test]
    fn j_at_refl() {
        let ctx = parse_ctx("((a (Sum Unit Unit)))").unwrap();
        let t = parse_tm_in("(J (x y q (Id (Sum Unit Unit) x y)) (x (refl x)) (refl a))", &ctx).unwrap();
        let expected = Ty::Id(Box::new(crate::mltt::syntax::bool_ty()), Box::new(Tm::Var(0)), Box::new(Tm::Var(0)));
        assert_eq!(infer(&ctx, &t).unwrap(), expected);
    }

    #[test]
    fn frobenius_j() {
        let ctx = parse_ctx("((a Unit) (e (Id Unit a a)) (u Unit))").unwrap();
        let t = parse_tm_in("(J (x y q (w Unit) (Id Unit w w)) (x w (refl w)) e u)", &ctx).unwrap();
        assert_eq!(infer(&ctx, &t).unwrap(), Ty::Id(Box::new(Ty::Unit), Box::new(Tm::Var(0)), Box::new(Tm::Var(0))));
    }

    #[test]
    fn ill_typed_application() {
        let t = parse_tm("(app (lam (x Unit) x) (inl tt Unit))").unwrap();
        match infer(&vec![], &t) {
            Err(TypeError::Mismatch { expected, actual, .. }) => {
                assert_eq!(expected, "Unit");
                assert_eq!(actual, "(Sum Unit Unit)");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn case_and_split() {
        let t = parse_tm(
            "(lam (b (Sum Unit Unit)) (case b (z (Sum Unit Unit)) (x (inr Unit x)) (y (inl y Unit))))",
        )
        .unwrap();
        assert!(infer(&vec![], &t).is_ok());
        let s = parse_tm("(lam (p (Sigma (x Unit) Unit)) (split p (z Unit) (x y y)))").unwrap();
        assert!(infer(&vec![], &s).is_ok());
    }

    #[test]
    fn substitutions_are_checked() {
        let g = parse_ctx("((b (Sum Unit Unit)) (e (Id (Sum Unit Unit) b b)))").unwrap();
        let good = Subst(vec![Tm::Refl(Box::new(parse_tm("(inl tt Unit)").unwrap())), parse_tm("(inl tt Unit)").unwrap()]);
        assert!(check_subst(&vec![], &g, &good).is_ok());
        let bad = Subst(vec![Tm::Refl(Box::new(parse_tm("(inr Unit tt)").unwrap())), parse_tm("(inl tt Unit)").unwrap()]);
        assert!(check_subst(&vec![], &g, &bad).is_err());
    }
}
