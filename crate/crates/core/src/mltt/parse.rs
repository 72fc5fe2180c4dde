//! S-expression reader, parser and printer for the syntax, plus the
//! declaration file format.
//!
//! ```text
//! ty ::= Unit | Zero | (Sum ty ty) | (Pi (x ty) ty) | (Sigma (x ty) ty) | (Id ty tm tm)
//! tm ::= x | tt | (lam (x ty) tm) | (app tm tm) | (pair (x ty) ty tm tm)
//!      | (split tm (z ty) (x y tm)) | (inl tm ty) | (inr ty tm)
//!      | (case tm (z ty) (x tm) (y tm)) | (urec tm (z ty) tm) | (exfalso tm (z ty))
//!      | (refl tm) | (J (x y q (w ty)… ty) (x w… tm) tm tm…)
//! decl ::= (ctx name ((x ty) …)) | (ty name ctx ty) | (tm name ctx tm ty)
//!        | (subst name from to (tm …))
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::syntax::{free_vars_tm, free_vars_ty, Ctx, JData, Name, Subst, Tm, Ty};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("token {token} (line {line}, column {col}): {message}")]
pub struct ParseError {
    /// 1-based index of the offending token; one past the last at end of input.
    pub token: usize,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
struct Pos {
    token: usize,
    line: usize,
    col: usize,
}

#[derive(Clone, Debug)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> &Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => p,
        }
    }
}

fn err<T>(pos: &Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { token: pos.token, line: pos.line, col: pos.col, message: message.into() })
}

enum Tok {
    Open,
    Close,
    Atom(String),
}

fn lex(text: &str) -> Vec<(Tok, Pos)> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    let push = |out: &mut Vec<(Tok, Pos)>, t, line, col| {
        let token = out.len() + 1;
        out.push((t, Pos { token, line, col }));
    };
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ';' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '(' | ')' => {
                chars.next();
                push(&mut out, if c == '(' { Tok::Open } else { Tok::Close }, line, col);
                col += 1;
            }
            _ => {
                let start = col;
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    col += 1;
                }
                push(&mut out, Tok::Atom(s), line, start);
            }
        }
    }
    out
}

fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let toks = lex(text);
    let end = Pos {
        token: toks.len() + 1,
        line: text.lines().count().max(1),
        col: text.lines().last().map_or(1, |l| l.chars().count() + 1),
    };
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    for (t, pos) in toks {
        match t {
            Tok::Open => stack.push((Vec::new(), pos)),
            Tok::Close => {
                let Some((items, open)) = stack.pop() else {
                    return err(&pos, "unbalanced ')'");
                };
                let e = Sexp::List(items, open);
                match stack.last_mut() {
                    Some((items, _)) => items.push(e),
                    None => top.push(e),
                }
            }
            Tok::Atom(s) => {
                let e = Sexp::Atom(s, pos);
                match stack.last_mut() {
                    Some((items, _)) => items.push(e),
                    None => top.push(e),
                }
            }
        }
    }
    if let Some((_, open)) = stack.last() {
        return err(&end, format!("unclosed '(' opened at token {}", open.token));
    }
    Ok(top)
}

fn read_one(text: &str) -> Result<Sexp, ParseError> {
    let mut all = read_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => err(&Pos { token: 1, line: 1, col: 1 }, "empty input"),
        _ => err(all[1].pos(), "trailing input"),
    }
}

const KEYWORDS: &[&str] = &[
    "Unit", "Zero", "Sum", "Pi", "Sigma", "Id", "lam", "app", "pair", "split", "inl", "inr", "case", "tt", "urec",
    "exfalso", "refl", "J", "ctx", "ty", "tm", "subst",
];

fn name_of(e: &Sexp) -> Result<String, ParseError> {
    match e {
        Sexp::Atom(s, p) if KEYWORDS.contains(&s.as_str()) => err(p, format!("'{s}' is reserved")),
        Sexp::Atom(s, _) => Ok(s.clone()),
        Sexp::List(_, p) => err(p, "expected a name"),
    }
}

fn list_of<'a>(e: &'a Sexp, what: &str) -> Result<&'a [Sexp], ParseError> {
    match e {
        Sexp::List(items, _) => Ok(items),
        Sexp::Atom(_, p) => err(p, format!("expected {what}")),
    }
}

fn arity(items: &[Sexp], open: &Pos, head: &str, n: usize) -> Result<(), ParseError> {
    if items.len() == n + 1 {
        return Ok(());
    }
    let pos = items.get(n + 1).map_or(open, Sexp::pos);
    err(pos, format!("'{head}' takes {n} arguments, found {}", items.len() - 1))
}

/// Name resolution scope, innermost last.
#[derive(Clone, Default)]
struct Scope(Vec<String>);

impl Scope {
    fn with(&self, names: &[String]) -> Scope {
        let mut s = self.clone();
        s.0.extend(names.iter().cloned());
        s
    }

    fn resolve(&self, name: &str) -> Option<usize> {
        self.0.iter().rev().position(|n| n == name)
    }
}

/// `(x A)`.
fn binder(e: &Sexp, scope: &Scope) -> Result<(String, Ty), ParseError> {
    let items = list_of(e, "a binder '(x A)'")?;
    if items.len() != 2 {
        return err(e.pos(), "a binder has the form '(x A)'");
    }
    Ok((name_of(&items[0])?, ty_in(&items[1], scope)?))
}

fn ty_in(e: &Sexp, scope: &Scope) -> Result<Ty, ParseError> {
    let (items, open) = match e {
        Sexp::Atom(s, p) => {
            return match s.as_str() {
                "Unit" => Ok(Ty::Unit),
                "Zero" => Ok(Ty::Zero),
                _ => err(p, format!("expected a type, found '{s}'")),
            }
        }
        Sexp::List(items, p) => (items, p),
    };
    let Some(Sexp::Atom(head, hp)) = items.first() else {
        return err(open, "expected a type former");
    };
    match head.as_str() {
        "Sum" => {
            arity(items, open, head, 2)?;
            Ok(Ty::Sum(b(ty_in(&items[1], scope)?), b(ty_in(&items[2], scope)?)))
        }
        "Pi" | "Sigma" => {
            let Some(first) = items.get(1) else {
                return err(open, format!("'{head}' takes a binder and a type"));
            };
            let (x, a) = binder(first, scope)?;
            arity(items, open, head, 2)?;
            let body = ty_in(&items[2], &scope.with(std::slice::from_ref(&x)))?;
            let x = Name(x);
            Ok(if head == "Pi" { Ty::Pi(x, b(a), b(body)) } else { Ty::Sigma(x, b(a), b(body)) })
        }
        "Id" => {
            arity(items, open, head, 3)?;
            Ok(Ty::Id(b(ty_in(&items[1], scope)?), b(tm_in(&items[2], scope)?), b(tm_in(&items[3], scope)?)))
        }
        _ => err(hp, format!("unknown type former '{head}'")),
    }
}

/// `(z C)` as a motive over one new variable.
fn motive(e: &Sexp, scope: &Scope) -> Result<(Name, Ty), ParseError> {
    let items = list_of(e, "a motive '(z C)'")?;
    if items.len() != 2 {
        return err(e.pos(), "a motive has the form '(z C)'");
    }
    let z = name_of(&items[0])?;
    let c = ty_in(&items[1], &scope.with(std::slice::from_ref(&z)))?;
    Ok((Name(z), c))
}

/// `(x… body)`: names followed by a term in their scope.
fn abstraction(e: &Sexp, scope: &Scope, n: usize) -> Result<(Vec<String>, Tm), ParseError> {
    let items = list_of(e, "a branch")?;
    if items.len() != n + 1 {
        return err(e.pos(), format!("expected {n} names and a body"));
    }
    let names = items[..n].iter().map(name_of).collect::<Result<Vec<_>, _>>()?;
    let body = tm_in(&items[n], &scope.with(&names))?;
    Ok((names, body))
}

fn tm_in(e: &Sexp, scope: &Scope) -> Result<Tm, ParseError> {
    let (items, open) = match e {
        Sexp::Atom(s, p) => {
            if s == "tt" {
                return Ok(Tm::Tt);
            }
            let name = name_of(e)?;
            return scope.resolve(&name).map(Tm::Var).map_or_else(|| err(p, format!("unbound variable '{name}'")), Ok);
        }
        Sexp::List(items, p) => (items, p),
    };
    let Some(Sexp::Atom(head, hp)) = items.first() else {
        return err(open, "expected a term former");
    };
    let need = |n| arity(items, open, head, n);
    match head.as_str() {
        "lam" => {
            need(2)?;
            let (x, a) = binder(&items[1], scope)?;
            let body = tm_in(&items[2], &scope.with(std::slice::from_ref(&x)))?;
            Ok(Tm::Lam(Name(x), b(a), b(body)))
        }
        "app" => {
            need(2)?;
            Ok(Tm::App(b(tm_in(&items[1], scope)?), b(tm_in(&items[2], scope)?)))
        }
        "pair" => {
            need(4)?;
            let (x, a) = binder(&items[1], scope)?;
            let fam = ty_in(&items[2], &scope.with(std::slice::from_ref(&x)))?;
            Ok(Tm::Pair(Name(x), b(a), b(fam), b(tm_in(&items[3], scope)?), b(tm_in(&items[4], scope)?)))
        }
        "split" => {
            need(3)?;
            let p = tm_in(&items[1], scope)?;
            let (z, c) = motive(&items[2], scope)?;
            let (xy, d) = abstraction(&items[3], scope, 2)?;
            Ok(Tm::Split(b(p), z, b(c), Name(xy[0].clone()), Name(xy[1].clone()), b(d)))
        }
        "inl" => {
            need(2)?;
            Ok(Tm::Inl(b(tm_in(&items[1], scope)?), b(ty_in(&items[2], scope)?)))
        }
        "inr" => {
            need(2)?;
            Ok(Tm::Inr(b(ty_in(&items[1], scope)?), b(tm_in(&items[2], scope)?)))
        }
        "case" => {
            need(4)?;
            let s = tm_in(&items[1], scope)?;
            let (z, c) = motive(&items[2], scope)?;
            let (x, d1) = abstraction(&items[3], scope, 1)?;
            let (y, d2) = abstraction(&items[4], scope, 1)?;
            Ok(Tm::Case(b(s), z, b(c), Name(x[0].clone()), b(d1), Name(y[0].clone()), b(d2)))
        }
        "urec" => {
            need(3)?;
            let s = tm_in(&items[1], scope)?;
            let (z, c) = motive(&items[2], scope)?;
            Ok(Tm::Urec(b(s), z, b(c), b(tm_in(&items[3], scope)?)))
        }
        "exfalso" => {
            need(2)?;
            let s = tm_in(&items[1], scope)?;
            let (z, c) = motive(&items[2], scope)?;
            Ok(Tm::Exfalso(b(s), z, b(c)))
        }
        "refl" => {
            need(1)?;
            Ok(Tm::Refl(b(tm_in(&items[1], scope)?)))
        }
        "J" => j_in(items, open, scope),
        _ => err(hp, format!("unknown term former '{head}'")),
    }
}

fn j_in(items: &[Sexp], open: &Pos, scope: &Scope) -> Result<Tm, ParseError> {
    if items.len() < 4 {
        return err(items.get(items.len()).map_or(open, Sexp::pos), "'J' takes a motive, a step and a proof");
    }
    let m = list_of(&items[1], "a motive '(x y q (w B)… C)'")?;
    if m.len() < 4 {
        return err(items[1].pos(), "a J motive has the form '(x y q (w B)… C)'");
    }
    let (x, y, q) = (name_of(&m[0])?, name_of(&m[1])?, name_of(&m[2])?);
    let mut inner = scope.with(&[x.clone(), y.clone(), q.clone()]);
    let mut tel = Vec::new();
    for e in &m[3..m.len() - 1] {
        let (w, bty) = binder(e, &inner)?;
        inner = inner.with(std::slice::from_ref(&w));
        tel.push((Name(w), bty));
    }
    let motive = ty_in(&m[m.len() - 1], &inner)?;
    let (names, d) = abstraction(&items[2], scope, 1 + tel.len())?;
    let p = tm_in(&items[3], scope)?;
    let args = items[4..].iter().map(|e| tm_in(e, scope)).collect::<Result<Vec<_>, _>>()?;
    if args.len() != tel.len() {
        let pos = items.get(4 + tel.len()).map_or(open, Sexp::pos);
        return err(pos, format!("'J' with a telescope of length {} takes {} arguments", tel.len(), tel.len()));
    }
    Ok(Tm::J(Box::new(JData {
        x: Name(x),
        y: Name(y),
        q: Name(q),
        tel,
        motive,
        dx: Name(names[0].clone()),
        dw: names[1..].iter().cloned().map(Name).collect(),
        d,
        p,
        args,
    })))
}

/// Parses a closed type.
pub fn parse_ty(text: &str) -> Result<Ty, ParseError> {
    ty_in(&read_one(text)?, &Scope::default())
}

/// Parses a closed term.
pub fn parse_tm(text: &str) -> Result<Tm, ParseError> {
    tm_in(&read_one(text)?, &Scope::default())
}

pub fn parse_ty_in(text: &str, ctx: &Ctx) -> Result<Ty, ParseError> {
    ty_in(&read_one(text)?, &scope_of(ctx))
}

pub fn parse_tm_in(text: &str, ctx: &Ctx) -> Result<Tm, ParseError> {
    tm_in(&read_one(text)?, &scope_of(ctx))
}

fn scope_of(ctx: &Ctx) -> Scope {
    Scope(ctx.iter().map(|(n, _)| n.0.clone()).collect())
}

/// `((x A) …)`.
pub fn parse_ctx(text: &str) -> Result<Ctx, ParseError> {
    ctx_in(&read_one(text)?)
}

fn ctx_in(e: &Sexp) -> Result<Ctx, ParseError> {
    let mut scope = Scope::default();
    let mut ctx = Vec::new();
    for b in list_of(e, "a context '((x A) …)'")? {
        let (x, a) = binder(b, &scope)?;
        scope = scope.with(std::slice::from_ref(&x));
        ctx.push((Name(x), a));
    }
    Ok(ctx)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Ctx { name: String, ctx: Ctx },
    Ty { name: String, ctx: String, ty: Ty },
    Tm { name: String, ctx: String, tm: Tm, ty: Ty },
    /// `terms` indexed like variables of `to`.
    Subst { name: String, from: String, to: String, subst: Subst },
}

/// A parsed declaration file.
#[derive(Clone, Debug, Default)]
pub struct Module {
    pub decls: Vec<Decl>,
    pub contexts: BTreeMap<String, Ctx>,
}

pub fn parse_file(text: &str) -> Result<Module, ParseError> {
    let mut module = Module::default();
    for e in read_all(text)? {
        let items = list_of(&e, "a declaration")?;
        let Some(Sexp::Atom(head, hp)) = items.first() else {
            return err(e.pos(), "expected a declaration keyword");
        };
        let open = e.pos();
        let lookup = |m: &Module, i: usize| -> Result<(String, Ctx), ParseError> {
            let name = name_of(&items[i])?;
            match m.contexts.get(&name) {
                Some(c) => Ok((name, c.clone())),
                None => err(items[i].pos(), format!("unknown context '{name}'")),
            }
        };
        let decl = match head.as_str() {
            "ctx" => {
                arity(items, open, head, 2)?;
                let name = name_of(&items[1])?;
                let ctx = ctx_in(&items[2])?;
                if module.contexts.insert(name.clone(), ctx.clone()).is_some() {
                    return err(items[1].pos(), format!("context '{name}' declared twice"));
                }
                Decl::Ctx { name, ctx }
            }
            "ty" => {
                arity(items, open, head, 3)?;
                let (cname, ctx) = lookup(&module, 2)?;
                Decl::Ty { name: name_of(&items[1])?, ctx: cname, ty: ty_in(&items[3], &scope_of(&ctx))? }
            }
            "tm" => {
                arity(items, open, head, 4)?;
                let (cname, ctx) = lookup(&module, 2)?;
                let scope = scope_of(&ctx);
                Decl::Tm { name: name_of(&items[1])?, ctx: cname, tm: tm_in(&items[3], &scope)?, ty: ty_in(&items[4], &scope)? }
            }
            "subst" => {
                arity(items, open, head, 4)?;
                let (from, dctx) = lookup(&module, 2)?;
                let (to, gctx) = lookup(&module, 3)?;
                let ts = list_of(&items[4], "a list of terms")?;
                if ts.len() != gctx.len() {
                    return err(items[4].pos(), format!("'{to}' has {} variables but {} terms were given", gctx.len(), ts.len()));
                }
                let scope = scope_of(&dctx);
                let mut terms = ts.iter().map(|t| tm_in(t, &scope)).collect::<Result<Vec<_>, _>>()?;
                terms.reverse();
                Decl::Subst { name: name_of(&items[1])?, from, to, subst: Subst(terms) }
            }
            _ => return err(hp, format!("unknown declaration '{head}'")),
        };
        module.decls.push(decl);
    }
    Ok(module)
}

/// Names in scope while printing, innermost last.
struct Printer {
    names: Vec<String>,
}

impl Printer {
    fn var(&self, i: usize) -> String {
        match self.names.len().checked_sub(i + 1) {
            Some(k) => self.names[k].clone(),
            None => format!("#{i}"),
        }
    }

    /// Chooses display names for new binders so that no variable the
    /// construct refers to gets captured.
    fn fresh(&self, wanted: &[&Name], used: &BTreeSet<usize>) -> Vec<String> {
        let mut taken: BTreeSet<String> = used.iter().filter(|&&i| i < self.names.len()).map(|&i| self.var(i)).collect();
        let mut out = Vec::new();
        for w in wanted {
            let mut n = if w.0.is_empty() { "v".to_string() } else { w.0.clone() };
            while taken.contains(&n) || KEYWORDS.contains(&n.as_str()) {
                n.push('\'');
            }
            taken.insert(n.clone());
            out.push(n);
        }
        out
    }

    fn under<T>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> T) -> T {
        let k = self.names.len();
        self.names.extend(names.iter().cloned());
        let out = f(self);
        self.names.truncate(k);
        out
    }

    fn ty(&mut self, a: &Ty) -> String {
        match a {
            Ty::Unit => "Unit".into(),
            Ty::Zero => "Zero".into(),
            Ty::Sum(x, y) => format!("(Sum {} {})", self.ty(x), self.ty(y)),
            Ty::Pi(n, x, y) | Ty::Sigma(n, x, y) => {
                let head = if matches!(a, Ty::Pi(..)) { "Pi" } else { "Sigma" };
                let v = self.fresh(&[n], &free_vars_ty(a));
                let dom = self.ty(x);
                let cod = self.under(&v, |p| p.ty(y));
                format!("({head} ({} {dom}) {cod})", v[0])
            }
            Ty::Id(x, u, v) => format!("(Id {} {} {})", self.ty(x), self.tm(u), self.tm(v)),
        }
    }

    fn motive(&mut self, z: &Name, c: &Ty, used: &BTreeSet<usize>) -> String {
        let v = self.fresh(&[z], used);
        let body = self.under(&v, |p| p.ty(c));
        format!("({} {body})", v[0])
    }

    fn branch(&mut self, xs: &[&Name], d: &Tm, used: &BTreeSet<usize>) -> String {
        let v = self.fresh(xs, used);
        let body = self.under(&v, |p| p.tm(d));
        format!("({} {body})", v.join(" "))
    }

    fn tm(&mut self, t: &Tm) -> String {
        let used = free_vars_tm(t);
        match t {
            Tm::Var(i) => self.var(*i),
            Tm::Tt => "tt".into(),
            Tm::Lam(n, a, b) => {
                let v = self.fresh(&[n], &used);
                let dom = self.ty(a);
                let body = self.under(&v, |p| p.tm(b));
                format!("(lam ({} {dom}) {body})", v[0])
            }
            Tm::App(f, a) => format!("(app {} {})", self.tm(f), self.tm(a)),
            Tm::Pair(n, a, fam, x, y) => {
                let v = self.fresh(&[n], &used);
                let dom = self.ty(a);
                let fam = self.under(&v, |p| p.ty(fam));
                format!("(pair ({} {dom}) {fam} {} {})", v[0], self.tm(x), self.tm(y))
            }
            Tm::Split(s, z, c, x, y, d) => {
                format!("(split {} {} {})", self.tm(s), self.motive(z, c, &used), self.branch(&[x, y], d, &used))
            }
            Tm::Inl(a, b) => format!("(inl {} {})", self.tm(a), self.ty(b)),
            Tm::Inr(a, b) => format!("(inr {} {})", self.ty(a), self.tm(b)),
            Tm::Case(s, z, c, x, d1, y, d2) => format!(
                "(case {} {} {} {})",
                self.tm(s),
                self.motive(z, c, &used),
                self.branch(&[x], d1, &used),
                self.branch(&[y], d2, &used)
            ),
            Tm::Urec(s, z, c, d) => format!("(urec {} {} {})", self.tm(s), self.motive(z, c, &used), self.tm(d)),
            Tm::Exfalso(e, z, c) => format!("(exfalso {} {})", self.tm(e), self.motive(z, c, &used)),
            Tm::Refl(a) => format!("(refl {})", self.tm(a)),
            Tm::J(j) => {
                let mut wanted = vec![&j.x, &j.y, &j.q];
                wanted.extend(j.tel.iter().map(|(w, _)| w));
                let v = self.fresh(&wanted, &used);
                let motive = self.under(&v[..3], |p| {
                    let mut parts = v[..3].to_vec();
                    for (i, (_, b)) in j.tel.iter().enumerate() {
                        let b = p.under(&v[3..3 + i], |p| p.ty(b));
                        parts.push(format!("({} {b})", v[3 + i]));
                    }
                    parts.push(p.under(&v[3..], |p| p.ty(&j.motive)));
                    parts.join(" ")
                });
                let mut dn = vec![&j.dx];
                dn.extend(j.dw.iter());
                let step = self.branch(&dn, &j.d, &used);
                let mut out = format!("(J ({motive}) {step} {}", self.tm(&j.p));
                for e in &j.args {
                    out.push(' ');
                    out.push_str(&self.tm(e));
                }
                out.push(')');
                out
            }
        }
    }
}

pub fn print_ty_in(a: &Ty, ctx: &Ctx) -> String {
    Printer { names: ctx.iter().map(|(n, _)| n.0.clone()).collect() }.ty(a)
}

pub fn print_tm_in(t: &Tm, ctx: &Ctx) -> String {
    Printer { names: ctx.iter().map(|(n, _)| n.0.clone()).collect() }.tm(t)
}

pub fn print_ty(a: &Ty) -> String {
    print_ty_in(a, &Vec::new())
}

pub fn print_tm(t: &Tm) -> String {
    print_tm_in(t, &Vec::new())
}

pub fn print_ctx(ctx: &Ctx) -> String {
    let mut p = Printer { names: Vec::new() };
    let parts: Vec<String> = ctx
        .iter()
        .map(|(n, a)| {
            let s = format!("({} {})", n.0, p.ty(a));
            p.names.push(n.0.clone());
            s
        })
        .collect();
    format!("({})", parts.join(" "))
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_ty(self))
    }
}

impl fmt::Display for Tm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_tm(self))
    }
}

/// Collapses runs of whitespace, for comparing printed text.
pub fn normalize_ws(s: &str) -> String {
    let mut out = String::new();
    for tok in lex(s) {
        let piece = match tok.0 {
            Tok::Open => "(".to_string(),
            Tok::Close => ")".to_string(),
            Tok::Atom(a) => a,
        };
        if !out.is_empty() && !out.ends_with('(') && piece != ")" {
            out.push(' ');
        }
        out.push_str(&piece);
    }
    out
}

fn b<T>(x: T) -> Box<T> {
    Box::new(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_forms() {
        assert!(matches!(parse_ty("(Pi (x Unit) Unit)").unwrap(), Ty::Pi(..)));
        let t = parse_tm("(lam (x Unit) x)").unwrap();
        assert!(matches!(t, Tm::Lam(_, _, ref b) if **b == Tm::Var(0)));
    }

    #[test]
    fn arity_error_position() {
        let e = parse_ty("(Pi x)").unwrap_err();
        assert_eq!(e.token, 3, "{e}");
    }

    #[test]
    fn errors_are_positioned() {
        assert_eq!(parse_tm("(lam (x Unit) y)").unwrap_err().token, 7);
        assert_eq!(parse_ty("(Sum Unit").unwrap_err().token, 4);
        assert_eq!(parse_ty("(Sum Unit Unit Unit)").unwrap_err().token, 5);
    }

    #[test]
    fn round_trip() {
        let ty = "(Pi (x (Sum Unit Unit)) (Id (Sum Unit Unit) x x))";
        assert_eq!(normalize_ws(&print_ty(&parse_ty(ty).unwrap())), normalize_ws(ty));
        for s in [
            "(lam (x (Sum Unit Unit)) (case x (z (Sum Unit Unit)) (a (inr Unit tt)) (b (inl tt Unit))))",
            "(pair (x Unit) (Id Unit x x) tt (refl tt))",
            "(split (pair (x Unit) Unit tt tt) (z Unit) (a b b))",
            "(J (x y q (w Unit) (Id Unit w w)) (x w (refl w)) (refl tt) tt)",
            "(lam (z Zero) (exfalso z (u Unit)))",
            "(urec tt (z Unit) tt)",
        ] {
            let t = parse_tm(s).unwrap();
            assert_eq!(normalize_ws(&print_tm(&t)), normalize_ws(s));
            assert_eq!(parse_tm(&print_tm(&t)).unwrap(), t);
        }
    }

    #[test]
    fn printer_avoids_capture() {
        // λx. λx'. x  printed with both binders named x
        let t = Tm::Lam(
            Name::new("x"),
            Box::new(Ty::Unit),
            Box::new(Tm::Lam(Name::new("x"), Box::new(Ty::Unit), Box::new(Tm::Var(1)))),
        );
        assert_eq!(parse_tm(&print_tm(&t)).unwrap(), t);
    }

    #[test]
    fn files() {
        let m = parse_file(
            "; booleans\n(ctx g ((b (Sum Unit Unit))))\n(ctx e ())\n(ty t g (Id (Sum Unit Unit) b b))\n(tm r g (refl b) (Id (Sum Unit Unit) b b))\n(subst s e g ((inl tt Unit)))",
        )
        .unwrap();
        assert_eq!(m.decls.len(), 5);
        let e = parse_file("(ty t nowhere Unit)").unwrap_err();
        assert_eq!(e.token, 4);
    }
}
