//! Independent oracles for derived cardinalities.

use luc_core::bang::Bang;
use luc_core::compcat::Model;
use luc_core::finval::{all_maps, dep_exp, family_display, size_vectors, FinFun, FinSet};
use luc_core::lift::{BangSuite, DirectSuite, SplitSuite};
use luc_core::mltt::check::j_step_ctx;
use luc_core::mltt::pool::{build, PoolConfig};
use luc_core::mltt::{infer, Ctx, Interp, Tm, Ty};
use luc_core::models::{FamModel, PullbackModel};
use luc_core::universe::{wedge, wedge_hom_law};
use luc_core::Bounds;

/// Values of the naive set model.
#[derive(Clone, Debug, PartialEq, Eq)]
enum V {
    Tt,
    Inl(Box<V>),
    Inr(Box<V>),
    Pair(Box<V>, Box<V>),
    Fun(Vec<(V, V)>),
    Refl,
}

/// `env[env.len() - 1 - i]` is variable `i`.
fn elems(ty: &Ty, ctx: &Ctx, env: &[V]) -> Vec<V> {
    match ty {
        Ty::Unit => vec![V::Tt],
        Ty::Zero => vec![],
        Ty::Sum(a, b) => {
            let l = elems(a, ctx, env).into_iter().map(|x| V::Inl(Box::new(x)));
            l.chain(elems(b, ctx, env).into_iter().map(|y| V::Inr(Box::new(y)))).collect()
        }
        Ty::Sigma(x_name, a, b) => {
            let mut out = Vec::new();
            for x in elems(a, ctx, env) {
                for y in elems(b, &bind(ctx, x_name, a), &extend(env, &x)) {
                    out.push(V::Pair(Box::new(x.clone()), Box::new(y)));
                }
            }
            out
        }
        Ty::Pi(x_name, a, b) => {
            let mut graphs: Vec<Vec<(V, V)>> = vec![Vec::new()];
            for x in elems(a, ctx, env) {
                let ys = elems(b, &bind(ctx, x_name, a), &extend(env, &x));
                graphs = graphs
                    .into_iter()
                    .flat_map(|g| {
                        let x = x.clone();
                        ys.iter().map(move |y| {
                            let mut g = g.clone();
                            g.push((x.clone(), y.clone()));
                            g
                        })
                    })
                    .collect();
            }
            graphs.into_iter().map(V::Fun).collect()
        }
        Ty::Id(_, u, v) => {
            if eval(u, ctx, env) == eval(v, ctx, env) {
                vec![V::Refl]
            } else {
                vec![]
            }
        }
    }
}

fn extend(env: &[V], x: &V) -> Vec<V> {
    let mut e = env.to_vec();
    e.push(x.clone());
    e
}

/// Evaluates `t` in the environment `env` of the context `ctx`.
fn eval(t: &Tm, ctx: &Ctx, env: &[V]) -> V {
    match t {
        Tm::Var(i) => env[env.len() - 1 - i].clone(),
        Tm::Lam(x, a, body) => {
            let inner = bind(ctx, x, a);
            V::Fun(elems(a, ctx, env).into_iter().map(|v| (v.clone(), eval(body, &inner, &extend(env, &v)))).collect())
        }
        Tm::App(f, a) => {
            let V::Fun(g) = eval(f, ctx, env) else { panic!("applying a non-function") };
            let x = eval(a, ctx, env);
            g.into_iter().find(|(k, _)| *k == x).expect("argument in the domain").1
        }
        Tm::Pair(_, _, _, a, b) => V::Pair(Box::new(eval(a, ctx, env)), Box::new(eval(b, ctx, env))),
        Tm::Split(p, _, _, x, y, d) => {
            let Ty::Sigma(_, a, b) = infer(ctx, p).unwrap() else { panic!("splitting a non-pair") };
            let V::Pair(u, v) = eval(p, ctx, env) else { panic!("splitting a non-pair") };
            let inner = bind(&bind(ctx, x, &a), y, &b);
            eval(d, &inner, &extend(&extend(env, &u), &v))
        }
        Tm::Inl(a, _) => V::Inl(Box::new(eval(a, ctx, env))),
        Tm::Inr(_, b) => V::Inr(Box::new(eval(b, ctx, env))),
        Tm::Case(s, _, _, x, d1, y, d2) => {
            let Ty::Sum(a, b) = infer(ctx, s).unwrap() else { panic!("case on a non-sum") };
            match eval(s, ctx, env) {
                V::Inl(u) => eval(d1, &bind(ctx, x, &a), &extend(env, &u)),
                V::Inr(v) => eval(d2, &bind(ctx, y, &b), &extend(env, &v)),
                other => panic!("case on {other:?}"),
            }
        }
        Tm::Tt => V::Tt,
        Tm::Urec(_, _, _, d) => eval(d, ctx, env),
        Tm::Exfalso(..) => panic!("an element of the empty type"),
        Tm::Refl(_) => V::Refl,
        Tm::J(j) => {
            // reflexivity is the only inhabitant, so the endpoints agree
            // and the result is the base case at the left endpoint
            let Ty::Id(a, u, _) = infer(ctx, &j.p).unwrap() else { panic!("J on a non-identity") };
            let mut e = extend(env, &eval(&u, ctx, env));
            for arg in &j.args {
                e.push(eval(arg, ctx, env));
            }
            eval(&j.d, &j_step_ctx(ctx, j, &a), &e)
        }
    }
}

fn bind(ctx: &Ctx, x: &luc_core::mltt::Name, a: &Ty) -> Ctx {
    let mut c = ctx.clone();
    c.push((x.clone(), a.clone()));
    c
}

fn envs(ctx: &Ctx) -> Vec<Vec<V>> {
    let mut out: Vec<Vec<V>> = vec![Vec::new()];
    for k in 0..ctx.len() {
        let prefix = ctx[..k].to_vec();
        out = out.into_iter().flat_map(|e| elems(&ctx[k].1, &prefix, &e).into_iter().map(move |x| extend(&e, &x))).collect();
    }
    out
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

#[test]
fn interpreted_fiber_sizes_match_the_set_model() {
    let pool = build(PoolConfig::smoke());
    let bang = BangSuite::new(&PullbackModel);
    let fam = DirectSuite::new(&FamModel);
    let mut checked = 0;
    let cases = pool.types.iter().map(|(c, a)| (*c, a.clone(), None)).chain(pool.terms.iter().map(|t| (t.ctx, t.ty.clone(), Some(t.tm.clone()))));
    for (ci, ty, tm) in cases {
        let ctx = &pool.contexts[ci];
        let envs = envs(ctx);
        let want = sorted(envs.iter().map(|e| elems(&ty, ctx, e).len()).collect());
        if let Some(t) = &tm {
            // the term's value lies in the type at every environment
            for e in &envs {
                assert!(elems(&ty, ctx, e).contains(&eval(t, ctx, e)), "{t} : {ty}");
            }
        }
        let i = Interp::new(&bang);
        let got = i.ctx(ctx).and_then(|sc| Ok(bang.realize(&i.ty(&sc, ctx, &ty)?)?.fiber_sizes())).unwrap();
        assert_eq!(sorted(got), want, "{ty} over {ctx:?}");
        let i = Interp::new(&fam);
        let got = i.ctx(ctx).and_then(|sc| Ok(fam.realize(&i.ty(&sc, ctx, &ty)?)?.fiber_sizes())).unwrap();
        assert_eq!(sorted(got), want, "{ty} over {ctx:?}");
        checked += 1;
    }
    assert!(checked > 100);
}

/// Fiber sizes of each former computed from its inputs' fiber sizes.
fn check_former_cardinalities<S: SplitSuite>(suite: &S) -> usize {
    let bounds = Bounds::default();
    let mut cases = 0;
    for n in 0..=2 {
        let gamma = FinSet::atoms("g", n);
        let types = suite.types_over(&gamma, &bounds, 4);
        for a in &types {
            let ra = suite.realize(a).unwrap();
            let size_a = |g| ra.fiber(g).len();
            for b in &types {
                let rb = suite.realize(b).unwrap();
                let sum = suite.realize(&suite.sum_form(a, b).unwrap()).unwrap();
                for g in gamma.iter() {
                    assert_eq!(sum.fiber(g).len(), size_a(g) + rb.fiber(g).len());
                }
                cases += 1;
            }
            for b in suite.types_over(ra.total(), &bounds, 4) {
                let rb = suite.realize(&b).unwrap();
                let pi = suite.realize(&suite.pi_form(a, &b).unwrap()).unwrap();
                let sigma = suite.realize(&suite.sigma_form(a, &b).unwrap()).unwrap();
                for g in gamma.iter() {
                    let sizes: Vec<usize> = ra.fiber(g).iter().map(|x| rb.fiber(x).len()).collect();
                    assert_eq!(pi.fiber(g).len(), sizes.iter().product::<usize>());
                    assert_eq!(sigma.fiber(g).len(), sizes.iter().sum::<usize>());
                }
                let all: Vec<usize> = ra.total().iter().map(|x| rb.fiber(x).len()).collect();
                if all.iter().all(|k| *k == 0) || all.iter().all(|k| *k > 0) {
                    let w = suite.realize(&suite.w_form(a, &b).unwrap()).unwrap();
                    for g in gamma.iter() {
                        let leaves = ra.fiber(g).iter().all(|x| rb.fiber(x).is_empty());
                        let want = if leaves { ra.fiber(g).len() } else { 0 };
                        assert_eq!(w.fiber(g).len(), want);
                    }
                }
                cases += 1;
            }
            let aa = suite.lift(a, &suite.comprehension(a).unwrap()).unwrap();
            let id = suite.realize(&suite.id_form(a).unwrap()).unwrap();
            for p in aa.src.total().iter() {
                let same = aa.src.point_of(p) == aa.top.apply(p);
                assert_eq!(id.fiber(p).len(), usize::from(same));
            }
            cases += 1;
        }
        let unit = suite.realize(&suite.unit_form(&gamma).unwrap()).unwrap();
        let zero = suite.realize(&suite.zero_form(&gamma).unwrap()).unwrap();
        assert!(gamma.iter().all(|g| unit.fiber(g).len() == 1 && zero.fiber(g).is_empty()));
    }
    cases
}

#[test]
fn bang_formers_match_counting() {
    assert!(check_former_cardinalities(&BangSuite::new(&PullbackModel)) > 50);
    assert!(check_former_cardinalities(&BangSuite::new(&FamModel)) > 50);
}

#[test]
fn fam_formers_match_counting() {
    assert!(check_former_cardinalities(&DirectSuite::new(&FamModel)) > 50);
}

#[test]
fn wedge_carrier_matches_hom_counting() {
    let mut instances = 0;
    for m in [&FamModel as &dyn Model, &PullbackModel] {
        let bang = Bang::new(m);
        for n in 1..=3 {
            for sizes in size_vectors(n, 2) {
                for vb in 0..=3 {
                    let ea = m.family(&FinSet::atoms("v", n), &sizes);
                    let vbs = FinSet::atoms("b", vb);
                    let w = wedge(&ea, &vbs);
                    let formula: usize = sizes.iter().map(|k| vb.pow(*k as u32)).sum();
                    assert_eq!(w.carrier.len(), formula, "sizes {sizes:?}, |V_B| = {vb}");
                    // global elements of the carrier, counted as maps and as pairs
                    let (direct, pairs) = wedge_hom_law(&bang, &w, &FinSet::terminal()).unwrap();
                    assert_eq!((direct, pairs), (formula, formula));
                    if formula <= 8 {
                        let two = FinSet::atoms("g", 2);
                        let (d2, p2) = wedge_hom_law(&bang, &w, &two).unwrap();
                        assert_eq!((d2, p2), (formula * formula, formula * formula));
                    }
                    instances += 1;
                }
            }
        }
    }
    assert!(instances >= 50, "{instances}");
}

#[test]
fn dependent_exponential_matches_counting_sections() {
    let mut instances = 0;
    for x in 1..=2 {
        let xs = FinSet::atoms("x", x);
        for ysz in size_vectors(x, 2) {
            let f = family_display(&xs, &ysz, "y");
            for zsz in size_vectors(f.dom().len(), 2) {
                let g = family_display(f.dom(), &zsz, "z");
                let e = dep_exp(&f, &g).unwrap();
                for xv in xs.iter() {
                    // sections of g over f⁻¹(x), by brute force over all maps
                    let ys = FinSet::new(f.preimage(xv));
                    let brute = all_maps(&ys, g.dom())
                        .into_iter()
                        .filter(|s| ys.iter().all(|y| g.apply(s.apply(y)) == y))
                        .count();
                    assert_eq!(e.proj.preimage(xv).len(), brute);
                }
                instances += 1;
            }
        }
    }
    assert!(instances > 10);
}

#[test]
fn family_display_has_requested_fibers() {
    let f: FinFun = family_display(&FinSet::atoms("x", 3), &[2, 0, 1], "e");
    assert_eq!(f.fibers().iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 0, 1]);
}
