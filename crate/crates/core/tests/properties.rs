use std::cmp::Ordering;
use std::sync::OnceLock;

use proptest::prelude::*;

use luc_core::bang::{local_type_pool, Bang, LocalType};
use luc_core::compcat::{substitutions_into, Model};
use luc_core::finval::{all_maps, product, pullback, FinFun, FinSet, Val};
use luc_core::lift::stability::Thinning;
use luc_core::lift::weak::certify_sums;
use luc_core::lift::{BangSuite, SplitSuite};
use luc_core::mltt::harness::soundness;
use luc_core::mltt::pool::{build, Pool, PoolConfig};
use luc_core::mltt::parse::{parse_tm_in, print_tm_in};
use luc_core::mltt::{check, print_tm, subst_tm, subst_ty, Subst};
use luc_core::models::{FamModel, PullbackModel};
use luc_core::universe::wedge;
use luc_core::Bounds;

fn pool() -> &'static Pool {
    static POOL: OnceLock<Pool> = OnceLock::new();
    POOL.get_or_init(|| build(PoolConfig::smoke()))
}

fn model(i: usize) -> &'static dyn Model {
    [&FamModel as &dyn Model, &PullbackModel][i % 2]
}

/// A map between sets of the given sizes, from raw image indices.
fn map(dom: usize, cod: usize, raw: &[usize]) -> Option<FinFun> {
    let (d, c) = (FinSet::atoms("x", dom), FinSet::atoms("x", cod));
    if cod == 0 && dom > 0 {
        return None;
    }
    let images = (0..dom).map(|i| c.elements()[raw[i] % cod].clone()).collect();
    Some(FinFun::from_images(d, c, images).unwrap())
}

fn val() -> impl Strategy<Value = Val> {
    let leaf = prop_oneof![Just(Val::atom("a")), Just(Val::atom("b")), Just(Val::atom("c"))];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Val::pair(l, r)),
            (prop_oneof![Just("s"), Just("t")], inner.clone()).prop_map(|(t, v)| Val::tag(t, v)),
            prop::collection::vec(inner, 0..3).prop_map(|vs| Val::graph(vs.into_iter().enumerate().map(|(i, v)| (Val::atom(&i.to_string()), v)))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn composition_is_associative_and_unital(n in prop::array::uniform4(1usize..=3), raw in prop::array::uniform3(prop::collection::vec(0usize..3, 3))) {
        let f = map(n[0], n[1], &raw[0]).unwrap();
        let g = map(n[1], n[2], &raw[1]).unwrap();
        let h = map(n[2], n[3], &raw[2]).unwrap();
        prop_assert_eq!(h.after(&g.after(&f)), h.after(&g).after(&f));
        prop_assert_eq!(f.after(&FinFun::identity(f.dom())), f.clone());
        prop_assert_eq!(FinFun::identity(f.cod()).after(&f), f);
    }

    #[test]
    fn value_order_is_a_total_order(a in val(), b in val(), c in val()) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        prop_assert_eq!(a.cmp(&b) == Ordering::Equal, a == b);
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn product_mediators_are_unique(nx in 0usize..=2, ny in 0usize..=2, nw in 0usize..=2, raw in prop::collection::vec(0usize..4, 4)) {
        let (x, y, w) = (FinSet::atoms("x", nx), FinSet::atoms("y", ny), FinSet::atoms("w", nw));
        let p = product(&x, &y);
        if let (Some(f), Some(g)) = (map(nw, nx, &raw), map(nw, ny, &raw[2..].iter().chain(&raw).copied().collect::<Vec<_>>())) {
            let (f, g) = (relabel(&f, &w, &x), relabel(&g, &w, &y));
            let mediators = all_maps(&w, &p.object).into_iter().filter(|m| p.left.after(m) == f && p.right.after(m) == g).count();
            prop_assert_eq!(mediators, 1);
        }
    }

    #[test]
    fn pullback_mediators_are_unique(nx in 1usize..=3, ny in 1usize..=3, nz in 1usize..=2, raw in prop::collection::vec(0usize..3, 6)) {
        let f = map(nx, nz, &raw).unwrap();
        let g = map(ny, nz, &raw[3..]).unwrap();
        let g = relabel(&g, &FinSet::atoms("y", ny), f.cod());
        let s = pullback(&f, &g).unwrap();
        for probe in 0..=2 {
            let w = FinSet::atoms("w", probe);
            for h in all_maps(&w, f.dom()) {
                for k in all_maps(&w, g.dom()) {
                    let commutes = f.after(&h) == g.after(&k);
                    let count = all_maps(&w, &s.apex).into_iter().filter(|m| s.leg1.after(m) == h && s.leg2.after(m) == k).count();
                    prop_assert_eq!(count, usize::from(commutes));
                }
            }
        }
    }

    #[test]
    fn reindexing_pastes_to_pullbacks(m in 0usize..2, n in 0usize..=2, pick in 0usize..64, s in 0usize..64, t in 0usize..64) {
        let model = model(m);
        let gamma = FinSet::atoms("g", n);
        let types = model.types_over(&gamma, 2);
        let a = &types[pick % types.len()];
        let sigmas = substitutions_into(&gamma, 2);
        let sigma = &sigmas[s % sigmas.len()];
        let taus = substitutions_into(sigma.dom(), 2);
        let tau = &taus[t % taus.len()];
        let first = model.reindex(a, sigma).unwrap();
        let second = model.reindex(&first.src, tau).unwrap();
        let pasted = first.paste(&second).unwrap();
        prop_assert!(first.is_pullback() && second.is_pullback() && pasted.is_pullback());
    }

    #[test]
    fn bang_reindexing_is_split(m in 0usize..2, n in 0usize..=3, pick in 0usize..64, s in 0usize..64, t in 0usize..64) {
        let model = model(m);
        let bang = Bang::new(model);
        let gamma = FinSet::atoms("g", n);
        let types = local_type_pool(model, &gamma, &Bounds::default(), 16);
        let a = &types[pick % types.len()];
        let sigmas = substitutions_into(&gamma, 3);
        let sigma = &sigmas[s % sigmas.len()];
        let taus = substitutions_into(sigma.dom(), 3);
        let tau = &taus[t % taus.len()];
        let once = bang.reindex(a, &sigma.after(tau)).unwrap();
        let twice = bang.reindex(&bang.reindex(a, sigma).unwrap(), tau).unwrap();
        prop_assert_eq!(&once, &twice);
        let pasted = bang.lift(a, sigma).unwrap().paste(&bang.lift(&bang.reindex(a, sigma).unwrap(), tau).unwrap()).unwrap();
        prop_assert_eq!(bang.lift(a, &sigma.after(tau)).unwrap(), pasted);
        prop_assert_eq!(bang.reindex(a, &FinFun::identity(&gamma)).unwrap(), a.clone());
    }

    #[test]
    fn classification_is_strictly_natural(m in 0usize..2, n in 0usize..=2, raw in prop::collection::vec(0usize..8, 8), s in 0usize..64) {
        let model = model(m);
        let bang = Bang::new(model);
        let ea = model.family(&FinSet::atoms("v", 2), &[1, 2]);
        let w = wedge(&ea, &FinSet::atoms("b", 2));
        let gamma = FinSet::atoms("g", n);
        let nu_a = relabel(&map(n, 2, &raw).unwrap_or_else(|| FinFun::identity(&FinSet::empty())), &gamma, w.universe_a.base());
        let la = LocalType::new(w.universe_a.clone(), nu_a.clone()).unwrap();
        let ga = bang.realize(&la).unwrap();
        let total = ga.src.total();
        let nu_b = FinFun::from_images(total.clone(), w.vb.clone(), (0..total.len()).map(|i| w.vb.elements()[raw[i % 8] % 2].clone()).collect()).unwrap();
        let k = w.pairing(&bang, &nu_a, &nu_b).unwrap();
        let sigmas = substitutions_into(&gamma, 2);
        let sigma = &sigmas[s % sigmas.len()];
        let lift = bang.lift(&la, sigma).unwrap();
        let pulled = w.pairing(&bang, &nu_a.after(sigma), &nu_b.after(&lift.top)).unwrap();
        prop_assert_eq!(k.after(sigma), pulled);
    }

    #[test]
    fn substitution_is_functorial(pick in 0usize..4096, s in 0usize..4096, t in 0usize..4096) {
        let pool = pool();
        let sigma = &pool.substs[s % pool.substs.len()];
        let taus: Vec<_> = pool.substs.iter().filter(|c| c.to == sigma.from).collect();
        let terms: Vec<_> = pool.terms.iter().filter(|c| c.ctx == sigma.to).collect();
        prop_assume!(!taus.is_empty() && !terms.is_empty());
        let tau = taus[t % taus.len()];
        let term = terms[pick % terms.len()];
        let gamma = &pool.contexts[sigma.to];
        prop_assert_eq!(subst_tm(&term.tm, &Subst::identity(gamma.len())), term.tm.clone());
        prop_assert_eq!(subst_tm(&subst_tm(&term.tm, &sigma.sigma), &tau.sigma), subst_tm(&term.tm, &sigma.sigma.after(&tau.sigma)));
        prop_assert_eq!(subst_ty(&subst_ty(&term.ty, &sigma.sigma), &tau.sigma), subst_ty(&term.ty, &sigma.sigma.after(&tau.sigma)));
        // weakening then instantiating the fresh variable is the identity
        let n = gamma.len();
        let weak = subst_tm(&term.tm, &Subst::weaken(n, 1));
        prop_assert_eq!(subst_tm(&weak, &Subst::single(n, luc_core::mltt::Tm::Tt)), term.tm.clone());
        // substitution preserves typing
        let delta = &pool.contexts[sigma.from];
        prop_assert!(check(delta, &subst_tm(&term.tm, &sigma.sigma), &subst_ty(&term.ty, &sigma.sigma)).is_ok());
    }

    #[test]
    fn printing_round_trips(pick in 0usize..4096) {
        let pool = pool();
        let term = &pool.terms[pick % pool.terms.len()];
        let ctx = &pool.contexts[term.ctx];
        let printed = print_tm_in(&term.tm, ctx);
        prop_assert_eq!(parse_tm_in(&printed, ctx).unwrap(), term.tm.clone(), "{}", printed);
        let _ = print_tm(&term.tm);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn interpretation_commutes_with_random_substitutions(pick in 0usize..4096, s in 0usize..4096) {
        let full = pool();
        let case = &full.substs[s % full.substs.len()];
        let terms: Vec<_> = full.terms.iter().filter(|c| c.ctx == case.to).cloned().collect();
        prop_assume!(!terms.is_empty());
        let term = terms[pick % terms.len()].clone();
        let one = Pool {
            config: full.config,
            contexts: full.contexts.clone(),
            types: vec![(case.to, term.ty.clone())],
            terms: vec![term],
            substs: vec![case.clone()],
        };
        let suite = BangSuite::new(&PullbackModel);
        for r in soundness(&suite, &one) {
            prop_assert!(r.passed() && r.cases == 1, "{}", r);
        }
    }

    #[test]
    fn formers_are_deterministic_and_universe_local(m in 0usize..2, n in 0usize..=2, i in 0usize..64, j in 0usize..64) {
        let model = model(m);
        let (s1, s2) = (BangSuite::new(model), BangSuite::new(model));
        let gamma = FinSet::atoms("g", n);
        let types = s1.types_over(&gamma, &Bounds::default(), 8);
        let (a, b) = (&types[i % types.len()], &types[j % types.len()]);
        let sum = s1.sum_form(a, b).unwrap();
        prop_assert_eq!(&sum, &s1.sum_form(a, b).unwrap());
        prop_assert_eq!(&sum, &s2.sum_form(a, b).unwrap());
        prop_assert_eq!(s1.id_form(a).unwrap(), s2.id_form(a).unwrap());
        // the same universes with names over another context give the same universe
        let other = FinSet::atoms("h", 1);
        let pin = |t: &LocalType| LocalType::new(t.universe.clone(), FinFun::new(other.clone(), t.base().clone(), |_| t.base().elements()[0].clone()).unwrap()).unwrap();
        prop_assume!(!a.base().is_empty() && !b.base().is_empty());
        let moved = s1.sum_form(&pin(a), &pin(b)).unwrap();
        prop_assert_eq!(moved.universe.key(), sum.universe.key());
        prop_assert_eq!(moved.total(), sum.total());
    }
}

/// Moves a map onto the given domain and codomain, preserving indices.
fn relabel(f: &FinFun, dom: &FinSet, cod: &FinSet) -> FinFun {
    let images = f.images().iter().map(|v| cod.elements()[f.cod().index_of(v).unwrap()].clone()).collect();
    FinFun::from_images(dom.clone(), cod.clone(), images).unwrap()
}

#[test]
fn nested_pullbacks_differ_from_one_step() {
    // pulling back twice tags apex elements twice, so the composite lift
    // is a different object from the one-step lift
    let m = PullbackModel;
    let a = m.family(&FinSet::atoms("g", 1), &[1]);
    let sigma = FinFun::from_images(FinSet::atoms("d", 1), FinSet::atoms("g", 1), vec![Val::atom("g0")]).unwrap();
    let tau = FinFun::identity(&FinSet::atoms("d", 1));
    let tau = FinFun::from_images(FinSet::atoms("e", 2), tau.cod().clone(), vec![Val::atom("d0"), Val::atom("d0")]).unwrap();
    let once = m.reindex(&a, &sigma.after(&tau)).unwrap();
    let twice = m.reindex(&m.reindex(&a, &sigma).unwrap().src, &tau).unwrap();
    assert_ne!(once.src, twice.src);
    assert_eq!(once.src.fiber_sizes(), twice.src.fiber_sizes());
}

#[test]
fn weak_certification_is_monotone_in_bounds() {
    for m in [&FamModel as &dyn Model, &PullbackModel] {
        let provider = &|m: &dyn Model, a: &_, b: &_| m.sum(a, b);
        let big = certify_sums(m, &Bounds::default(), Thinning::default(), provider);
        assert!(big.passed(), "{big}");
        for small in [Bounds::smoke(), Bounds { max_ctx: 2, ..Bounds::default() }] {
            let r = certify_sums(m, &small, Thinning::default(), provider);
            assert!(r.passed() && r.cases <= big.cases, "{r}");
        }
    }
}

#[test]
fn strictly_stable_sums_are_weakly_stable() {
    use luc_core::lift::stability::{check_former, Former};
    use luc_core::lift::DirectSuite;
    for m in [&FamModel as &dyn Model, &PullbackModel] {
        let strict = check_former(&DirectSuite::new(m), &Bounds::default(), Thinning::default(), Former::Sum);
        if strict[0].passed() {
            let provider = &|m: &dyn Model, a: &_, b: &_| m.sum(a, b);
            assert!(certify_sums(m, &Bounds::default(), Thinning::default(), provider).passed());
        }
    }
}
