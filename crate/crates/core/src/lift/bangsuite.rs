//! Strictly stable structure on `C_!`.
//!
//! Each former takes the model's constructor once, over the universal
//! instance of its premises (a local universe), and names it by the
//! classifying map of the data. Introductions and eliminations act on
//! anchors, so they commute with reindexing on the nose.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bang::{local_type_pool, Bang, LocalType, Universe};
use crate::compcat::{
    node_parts, CartesianLift, IdWitness, Model, ModelError, PiWitness, SigmaWitness, SumWitness, TypeOver, UnitWitness, WWitness,
};
use crate::finval::{product, FinFun, FinSet, Product, Val};
use crate::lift::memo::Memo;
use crate::lift::piclass::{derive_stable_class, PiSource, StableClassPi};
use crate::lift::{map_total, SplitSuite};
use crate::models::elim;
use crate::report::Bounds;
use crate::universe::{
    chain_ctx, classify_envs, family_over, tuple, universal_instance, wedge, Instance, Layer, Slot, Telescope,
    WedgeObject,
};

/// `V_A × V_B` with the model's sum of `Ê_A[π₁]` and `Ê_B[π₂]`.
pub struct SumUniverse {
    pub prod: Product,
    pub left: CartesianLift,
    pub right: CartesianLift,
    pub witness: SumWitness,
    pub universe: Universe,
}

impl SumUniverse {
    pub fn inl_anchor(&self, av: &Val, bv: &Val, e: &Val) -> Option<Val> {
        let x = self.left.element(&Val::pair(av.clone(), bv.clone()), e)?;
        Some(self.witness.inl.apply(x).clone())
    }

    pub fn inr_anchor(&self, av: &Val, bv: &Val, e: &Val) -> Option<Val> {
        let y = self.right.element(&Val::pair(av.clone(), bv.clone()), e)?;
        Some(self.witness.inr.apply(y).clone())
    }
}

/// `V_A ◁ V_B` with `Ê_A[π_A]` and `Ê_B[π_B]` realized over it.
pub struct WedgeUniverse {
    pub wedge: WedgeObject,
    pub fam_a: CartesianLift,
    pub fam_b: CartesianLift,
}

impl WedgeUniverse {
    pub fn point(&self, a: &Val, graph: &Val) -> Val {
        self.wedge.telescope.encode(&[a.clone(), graph.clone()])
    }

    /// The element of `Ê_A[π_A]` over `r` with anchor `ea`.
    pub fn x_at(&self, r: &Val, ea: &Val) -> Option<&Val> {
        self.fam_a.element(r, ea)
    }

    pub fn y_at(&self, x: &Val, eb: &Val) -> Option<&Val> {
        self.fam_b.element(x, eb)
    }
}

pub struct PiUniverse {
    pub base: Arc<WedgeUniverse>,
    pub witness: PiWitness,
    pub universe: Universe,
}

pub struct SigmaUniverse {
    pub base: Arc<WedgeUniverse>,
    pub witness: SigmaWitness,
    pub universe: Universe,
}

/// Over `V.Ê.Ê`.
pub struct IdUniverse {
    pub witness: IdWitness,
    pub universe: Universe,
}

/// A constant universe over the terminal object.
pub struct ConstUniverse {
    pub universe: Universe,
    pub unit: Option<UnitWitness>,
}

/// The finite part of `V_A ◁ V_B`: wedge points over which every position
/// is a leaf or every position branches.
pub struct WUniverse {
    pub base: Arc<WedgeUniverse>,
    pub safe: FinSet,
    pub shapes: CartesianLift,
    pub arities: CartesianLift,
    pub witness: WWitness,
    pub universe: Universe,
    pub poly: Universe,
    /// The arities of each node, over the polynomial.
    pub branches: CartesianLift,
    pub branch_universe: Universe,
    /// The subtree a branch of a node points to.
    pub eval: FinFun,
}

fn node_of(p: &Val) -> Option<(&Val, &Val)> {
    node_parts(p).or_else(|| p.as_pair().and_then(|(_, n)| node_parts(n)))
}

pub struct BangSuite<'m> {
    pub bang: Bang<'m>,
    pub pi_class: Arc<dyn StableClassPi>,
    /// Compute copairs over `Γ` itself instead of at the universal instance.
    pub shortcut_copair: bool,
    memo: Memo,
}

fn ill(msg: impl Into<String>) -> ModelError {
    ModelError::IllTyped(msg.into())
}

fn key(tag: &str, parts: &[&Universe]) -> Val {
    let mut v = Val::atom("nil");
    for u in parts.iter().rev() {
        v = Val::pair(u.key(), v);
    }
    Val::tag(tag, v)
}

fn same_ctx(a: &LocalType, b: &LocalType) -> Result<(), ModelError> {
    if a.ctx() != b.ctx() {
        return Err(ModelError::Context(format!("{} is not {}", a.ctx(), b.ctx())));
    }
    Ok(())
}

impl<'m> BangSuite<'m> {
    pub fn new(model: &'m dyn Model) -> Self {
        BangSuite {
            bang: Bang::new(model),
            pi_class: Arc::new(derive_stable_class(PiSource::AllWeaklyStable)),
            shortcut_copair: false,
            memo: Memo::new(),
        }
    }

    pub fn with_shortcut_copair(mut self, on: bool) -> Self {
        self.shortcut_copair = on;
        self
    }

    pub fn with_pi_class(mut self, class: Arc<dyn StableClassPi>) -> Self {
        self.pi_class = class;
        self
    }

    pub fn model(&self) -> &'m dyn Model {
        self.bang.model
    }

    /// Entries published so far.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn over_a(&self, a: &LocalType, b: &LocalType) -> Result<(), ModelError> {
        if b.ctx() != self.bang.realize(a)?.src.total() {
            return Err(ModelError::Context("dependent type is not over the comprehension".into()));
        }
        Ok(())
    }

    pub fn sum_universe(&self, ua: &Universe, ub: &Universe) -> Result<Arc<SumUniverse>, ModelError> {
        self.memo.get_or_publish(key("sum", &[ua, ub]), || {
            let model = self.model();
            let prod = product(ua.base(), ub.base());
            let left = model.reindex(&ua.total, &prod.left)?;
            let right = model.reindex(&ub.total, &prod.right)?;
            let witness = model.sum(&left.src, &right.src)?;
            let universe = Universe::new(witness.sum.clone());
            Ok(SumUniverse { prod, left, right, witness, universe })
        })
    }

    pub fn wedge_universe(&self, ua: &Universe, ub: &Universe) -> Result<Arc<WedgeUniverse>, ModelError> {
        self.memo.get_or_publish(key("wedge", &[ua, ub]), || {
            let wedge = wedge(&ua.total, ub.base());
            let (ty, pb) = wedge.proj_b(&self.bang)?;
            let fam_a = self.bang.realize(&ty)?;
            let fam_b = self.model().reindex(&ub.total, &pb)?;
            Ok(WedgeUniverse { wedge, fam_a, fam_b })
        })
    }

    pub fn pi_universe(&self, ua: &Universe, ub: &Universe) -> Result<Arc<PiUniverse>, ModelError> {
        self.memo.get_or_publish(key("pi", &[ua, ub]), || {
            let base = self.wedge_universe(ua, ub)?;
            let witness = self.pi_class.choose_pi(self.model(), &base.fam_a.src, &base.fam_b.src)?;
            let universe = Universe::new(witness.pi.clone());
            Ok(PiUniverse { base, witness, universe })
        })
    }

    pub fn sigma_universe(&self, ua: &Universe, ub: &Universe) -> Result<Arc<SigmaUniverse>, ModelError> {
        self.memo.get_or_publish(key("sigma", &[ua, ub]), || {
            let base = self.wedge_universe(ua, ub)?;
            let witness = self.model().sigma(&base.fam_a.src, &base.fam_b.src)?;
            let universe = Universe::new(witness.sigma.clone());
            Ok(SigmaUniverse { base, witness, universe })
        })
    }

    pub fn id_universe(&self, ua: &Universe) -> Result<Arc<IdUniverse>, ModelError> {
        self.memo.get_or_publish(key("id", &[ua]), || {
            let witness = self.model().id(&ua.total)?;
            let universe = Universe::new(witness.id.clone());
            Ok(IdUniverse { witness, universe })
        })
    }

    pub fn unit_universe(&self) -> Result<Arc<ConstUniverse>, ModelError> {
        self.memo.get_or_publish(Val::tag("unit", Val::atom("nil")), || {
            let w = self.model().unit(&FinSet::terminal())?;
            Ok(ConstUniverse { universe: Universe::new(w.unit.clone()), unit: Some(w) })
        })
    }

    pub fn zero_universe(&self) -> Result<Arc<ConstUniverse>, ModelError> {
        self.memo.get_or_publish(Val::tag("zero", Val::atom("nil")), || {
            let w = self.model().zero(&FinSet::terminal())?;
            Ok(ConstUniverse { universe: Universe::new(w.zero), unit: None })
        })
    }

    pub fn w_universe(&self, ua: &Universe, ub: &Universe) -> Result<Arc<WUniverse>, ModelError> {
        self.memo.get_or_publish(key("w", &[ua, ub]), || {
            let model = self.model();
            let base = self.wedge_universe(ua, ub)?;
            let (fa, fb) = (&base.fam_a.src, &base.fam_b.src);
            let safe = FinSet::new(base.wedge.carrier.iter().filter(|r| {
                let leaves = fa.fiber(r).iter().filter(|x| fb.fiber(x).is_empty()).count();
                leaves == 0 || leaves == fa.fiber(r).len()
            }).cloned());
            let incl = FinFun::new(safe.clone(), base.wedge.carrier.clone(), |r| r.clone())?;
            let shapes = model.reindex(fa, &incl)?;
            let arities = model.reindex(fb, &shapes.top)?;
            let witness = model.w(&shapes.src, &arities.src)?;
            let to_shape = map_total(witness.poly.total(), shapes.src.total(), |p| {
                node_of(p).map(|(x, _)| x.clone()).ok_or_else(|| ill(format!("{p} is not a node")))
            })?;
            let branches = model.reindex(&arities.src, &to_shape)?;
            let eval = map_total(branches.src.total(), witness.w.total(), |y| {
                let (_, graph) = node_of(branches.src.point_of(y)).ok_or_else(|| ill("not a node"))?;
                graph.lookup(branches.top.apply(y)).cloned().ok_or_else(|| ill("node graph undefined"))
            })?;
            Ok(WUniverse {
                universe: Universe::new(witness.w.clone()),
                poly: Universe::new(witness.poly.clone()),
                branch_universe: Universe::new(branches.src.clone()),
                base,
                safe,
                shapes,
                arities,
                witness,
                branches,
                eval,
            })
        })
    }

    fn w_name(&self, wu: &WUniverse, a: &LocalType, b: &LocalType) -> Result<FinFun, ModelError> {
        self.wedge_name(&wu.base, a, b)?
            .with_cod(wu.safe.clone())
            .map_err(|_| ModelError::Infinite("W data mixes leaves and branching positions".into()))
    }

    /// Anchor of each element of a realization.
    fn anchors(&self, a: &LocalType) -> Result<CartesianLift, ModelError> {
        self.bang.realize(a)
    }

    /// The `(a, ν_B)` name of a wedge-based former at `γ`.
    fn wedge_name(&self, wu: &WedgeUniverse, a: &LocalType, b: &LocalType) -> Result<FinFun, ModelError> {
        self.over_a(a, b)?;
        wu.wedge.pairing(&self.bang, &a.name, &b.name)
    }

    /// Runs an elimination: classifies the data, evaluates the universal
    /// elimination at each classifying point (memoized), and pulls the
    /// results back by anchors.
    #[allow(clippy::too_many_arguments)]
    fn eliminate(
        &self,
        tel: &Telescope,
        inst: &Instance,
        out_chain: &[Layer],
        out_family: &Layer,
        target: &LocalType,
        universal: &dyn Fn(&Instance) -> Result<FinFun, ModelError>,
    ) -> Result<FinFun, ModelError> {
        let bang = &self.bang;
        let envs = classify_envs(bang, tel, inst)?;
        let ctx = &inst.ctx;
        let cc = chain_ctx(bang, ctx, &envs, out_chain)?;
        let by_point: HashMap<Val, Vec<Val>> = ctx.iter().cloned().zip(envs.iter().cloned()).collect();
        let fam = family_over(&cc, &by_point, out_family)?;
        if fam != *target {
            return Err(ill("the motive does not match the classified data"));
        }
        let rf = bang.realize(&fam)?;
        let mut graphs: HashMap<Val, Arc<Val>> = HashMap::new();
        let mut point_of = HashMap::new();
        for (g, env) in ctx.iter().zip(&envs) {
            let r = tel.encode(env);
            if !graphs.contains_key(&r) {
                let k = Val::pair(Val::tag("elim", tel.key.clone()), r.clone());
                let graph = self
                    .memo
                    .get_or_publish(k, || self.universal_graph(tel, &r, out_chain, out_family, universal))?;
                graphs.insert(r.clone(), graph);
            }
            point_of.insert(g.clone(), r);
        }
        map_total(&cc.total, rf.src.total(), |x| {
            let (g, t) = cc.coords(x);
            let anchor = graphs[&point_of[g]]
                .lookup(&tuple(t))
                .ok_or_else(|| ModelError::Invalid(format!("universal elimination undefined at {x}")))?;
            rf.element(x, anchor).cloned().ok_or_else(|| ModelError::Invalid(format!("no element over {x}")))
        })
    }

    fn universal_graph(
        &self,
        tel: &Telescope,
        r: &Val,
        out_chain: &[Layer],
        out_family: &Layer,
        universal: &dyn Fn(&Instance) -> Result<FinFun, ModelError>,
    ) -> Result<Val, ModelError> {
        let pts = FinSet::singleton(r.clone());
        let inst = universal_instance(&self.bang, tel, &pts)?;
        let sec = universal(&inst)?;
        let env = tel.decode(r)?;
        let cc = chain_ctx(&self.bang, &pts, std::slice::from_ref(&env), out_chain)?;
        let by_point = HashMap::from([(r.clone(), env)]);
        let rf = self.bang.realize(&family_over(&cc, &by_point, out_family)?)?;
        if *sec.dom() != cc.total || !rf.src.is_section(&sec) {
            return Err(ModelError::Invalid("universal elimination is not a section".into()));
        }
        Ok(Val::graph(cc.total.iter().map(|x| (tuple(&cc.coords(x).1), rf.top.apply(sec.apply(x)).clone()))))
    }

    fn sum_layer(su: &Arc<SumUniverse>) -> Layer {
        Layer::new(su.universe.clone(), vec![0, 1], |env, _| Val::pair(env[0].clone(), env[1].clone()))
    }

    fn wedge_layer(wu: &Arc<WedgeUniverse>, universe: &Universe) -> Layer {
        let wu = wu.clone();
        Layer::new(universe.clone(), vec![0, 1], move |env, _| wu.point(&env[0], &env[1]))
    }

    pub fn copair_telescope(&self, ua: &Universe, ub: &Universe, uc: &Universe) -> Result<(Telescope, Layer), ModelError> {
        let su = self.sum_universe(ua, ub)?;
        let (s1, s2) = (su.clone(), su.clone());
        let d1 = Layer::new(uc.clone(), vec![0, 1, 2], move |env, t| {
            let s = s1.inl_anchor(&env[0], &env[1], &t[0]).expect("left summand anchored");
            env[2].lookup(&s).expect("motive named on the sum").clone()
        });
        let d2 = Layer::new(uc.clone(), vec![0, 1, 2], move |env, t| {
            let s = s2.inr_anchor(&env[0], &env[1], &t[0]).expect("right summand anchored");
            env[2].lookup(&s).expect("motive named on the sum").clone()
        });
        let tel = Telescope::new(
            key("copair", &[ua, ub, uc]),
            vec![
                Slot::Base(ua.base().clone()),
                Slot::Base(ub.base().clone()),
                Slot::Map { chain: vec![Self::sum_layer(&su)], target: uc.base().clone() },
                Slot::Section { chain: vec![Layer::at(ua.clone(), 0)], family: d1 },
                Slot::Section { chain: vec![Layer::at(ub.clone(), 1)], family: d2 },
            ],
        )?;
        Ok((tel, Self::sum_layer(&su)))
    }

    pub fn lambda_telescope(&self, ua: &Universe, ub: &Universe) -> Result<Telescope, ModelError> {
        Telescope::new(
            key("lambda", &[ua, ub]),
            vec![
                Slot::Base(ua.base().clone()),
                Slot::Map { chain: vec![Layer::at(ua.clone(), 0)], target: ub.base().clone() },
                Slot::Section { chain: vec![Layer::at(ua.clone(), 0)], family: Layer::applied(ub.clone(), 1, vec![]) },
            ],
        )
    }

    pub fn split_telescope(&self, ua: &Universe, ub: &Universe, uc: &Universe) -> Result<(Telescope, Layer), ModelError> {
        let su = self.sigma_universe(ua, ub)?;
        let s = su.clone();
        let d = Layer::new(uc.clone(), vec![0, 1, 2], move |env, t| {
            let r = s.base.point(&env[0], &env[1]);
            let x = s.base.x_at(&r, &t[0]).expect("first component anchored");
            let y = s.base.y_at(x, &t[1]).expect("second component anchored");
            env[2].lookup(s.witness.pair.apply(y)).expect("motive named on Σ").clone()
        });
        let sigma_layer = Self::wedge_layer(&su.base, &su.universe);
        let tel = Telescope::new(
            key("split", &[ua, ub, uc]),
            vec![
                Slot::Base(ua.base().clone()),
                Slot::Map { chain: vec![Layer::at(ua.clone(), 0)], target: ub.base().clone() },
                Slot::Map { chain: vec![sigma_layer.clone()], target: uc.base().clone() },
                Slot::Section { chain: vec![Layer::at(ua.clone(), 0), Layer::applied(ub.clone(), 1, vec![])], family: d },
            ],
        )?;
        Ok((tel, sigma_layer))
    }

    fn unit_layer(cu: &ConstUniverse) -> Layer {
        Layer::new(cu.universe.clone(), vec![], |_, _| Val::atom("pt"))
    }

    pub fn urec_telescope(&self, uc: &Universe) -> Result<(Telescope, Layer), ModelError> {
        let cu = self.unit_universe()?;
        let tt = cu.unit.as_ref().unwrap().tt.apply(&Val::atom("pt")).clone();
        let d = Layer::new(uc.clone(), vec![0], move |env, _| env[0].lookup(&tt).expect("motive named at tt").clone());
        let tel = Telescope::new(
            key("urec", &[uc]),
            vec![
                Slot::Map { chain: vec![Self::unit_layer(&cu)], target: uc.base().clone() },
                Slot::Section { chain: vec![], family: d },
            ],
        )?;
        Ok((tel, Self::unit_layer(&cu)))
    }

    pub fn zero_telescope(&self, uc: &Universe) -> Result<(Telescope, Layer), ModelError> {
        let zu = self.zero_universe()?;
        let layer = Layer::new(zu.universe.clone(), vec![], |_, _| Val::atom("pt"));
        let tel = Telescope::new(key("absurd", &[uc]), vec![Slot::Map { chain: vec![layer.clone()], target: uc.base().clone() }])?;
        Ok((tel, layer))
    }

    /// The Frobenius telescope `a, b₁ … bₙ, c, d` and the chain of the
    /// motive's context `Γ.A.A.Id.Δ`.
    pub fn j_telescope(&self, ua: &Universe, ubs: &[Universe], uc: &Universe) -> Result<(Telescope, Vec<Layer>), ModelError> {
        let iu = self.id_universe(ua)?;
        let n = ubs.len();
        let i1 = iu.clone();
        let id_layer = Layer::new(iu.universe.clone(), vec![0], move |_, t| {
            i1.witness.aa.element(&t[0], &t[1]).expect("pairs over one point").clone()
        });
        let mut motive_chain =
            vec![Layer::at(ua.clone(), 0), Layer::new(ua.clone(), vec![0], |env, _| env[0].clone()), id_layer];
        let mut slots = vec![Slot::Base(ua.base().clone())];
        for (i, ub) in ubs.iter().enumerate() {
            slots.push(Slot::Map { chain: motive_chain.clone(), target: ub.base().clone() });
            motive_chain.push(Layer::applied(ub.clone(), i + 1, vec![]));
        }
        slots.push(Slot::Map { chain: motive_chain.clone(), target: uc.base().clone() });
        // Γ.A.Δ[r]: anchors (e, b…) stand for (e, e, r(e), b…)
        let expand = {
            let iu = iu.clone();
            move |t: &[Val]| {
                let mut full = vec![t[0].clone(), t[0].clone(), iu.witness.refl.apply(&t[0]).clone()];
                full.extend_from_slice(&t[1..]);
                tuple(&full)
            }
        };
        let mut refl_chain = vec![Layer::at(ua.clone(), 0)];
        for (i, ub) in ubs.iter().enumerate() {
            let expand = expand.clone();
            refl_chain.push(Layer::new(ub.clone(), vec![i + 1], move |env, t| {
                env[i + 1].lookup(&expand(t)).expect("telescope named along r").clone()
            }));
        }
        let family = Layer::new(uc.clone(), vec![n + 1], move |env, t| {
            env[n + 1].lookup(&expand(t)).expect("motive named along r").clone()
        });
        slots.push(Slot::Section { chain: refl_chain, family });
        let mut parts = vec![ua];
        parts.extend(ubs.iter());
        parts.push(uc);
        Ok((Telescope::new(key("j", &parts), slots)?, motive_chain))
    }

    fn copair_at(&self, a: &LocalType, b: &LocalType, c: &LocalType, d1: &FinFun, d2: &FinFun) -> Result<FinFun, ModelError> {
        let inl = self.sum_inl(a, b)?;
        let inr = self.sum_inr(a, b)?;
        let l1 = self.bang.lift(c, &inl)?;
        let l2 = self.bang.lift(c, &inr)?;
        elim::extend(&self.bang.realize(c)?.src, &[(&inl, &l1, d1), (&inr, &l2, d2)])
    }

    /// `(Γ.A.A.Id.Δ, [Δ])` for a Frobenius elimination, as local types.
    fn check_frobenius(&self, a: &LocalType, delta: &[LocalType], c: &LocalType) -> Result<(), ModelError> {
        let mut ctx = self.bang.realize(&self.id_form(a)?)?.src.total().clone();
        for b in delta.iter().chain([c]) {
            if *b.ctx() != ctx {
                return Err(ill("Frobenius telescope is not over the identity type"));
            }
            ctx = self.bang.realize(b)?.src.total().clone();
        }
        Ok(())
    }

    /// The polynomial `Σ_{x:A}(B(x) → W)` as a type of `C_!`, and `fold`.
    pub fn w_poly(&self, a: &LocalType, b: &LocalType) -> Result<(LocalType, FinFun), ModelError> {
        let wu = self.w_universe(&a.universe, &b.universe)?;
        let name = self.w_name(&wu, a, b)?;
        let poly = LocalType::new(wu.poly.clone(), name.clone())?;
        let (rp, rw) = (self.bang.realize(&poly)?, self.bang.realize(&LocalType::new(wu.universe.clone(), name)?)?);
        let fold = map_total(rp.src.total(), rw.src.total(), |p| {
            let anchor = wu.witness.fold.apply(rp.top.apply(p));
            rw.element(rp.src.point_of(p), anchor).cloned().ok_or_else(|| ModelError::Invalid("fold leaves W".into()))
        })?;
        Ok((poly, fold))
    }

    /// The types and maps of W-recursion into `c` over `Γ.W`.
    pub fn w_motive(&self, a: &LocalType, b: &LocalType, c: &LocalType) -> Result<WMotive, ModelError> {
        let wu = self.w_universe(&a.universe, &b.universe)?;
        let w = self.w_form(a, b)?;
        let (poly, fold) = self.w_poly(a, b)?;
        let rw = self.bang.realize(&w)?;
        if c.ctx() != rw.src.total() {
            return Err(ill("W motive is not over Γ.W"));
        }
        let rp = self.bang.realize(&poly)?;
        let branches = LocalType::new(wu.branch_universe.clone(), rp.top.clone())?;
        let rb = self.bang.realize(&branches)?;
        let eval = map_total(rb.src.total(), rw.src.total(), |y| {
            let g = rp.src.point_of(rb.src.point_of(y));
            rw.element(g, wu.eval.apply(rb.top.apply(y))).cloned().ok_or_else(|| ill("subtree not in W"))
        })?;
        let c_eval = self.bang.reindex(c, &eval)?;
        let ih = self.pi_form(&branches, &c_eval)?;
        let d_type = self.bang.reindex(c, &fold.after(&self.comprehension(&ih)?))?;
        Ok(WMotive { w, poly, fold, branches, eval, c_eval, ih, d_type })
    }

    /// W-recursion: the section `t` of `c` with `t(fold p) = d(λ(t ∘ eval))`,
    /// computed by depth.
    pub fn w_rec(&self, a: &LocalType, b: &LocalType, c: &LocalType, d: &FinFun) -> Result<FinFun, ModelError> {
        let m = self.w_motive(a, b, c)?;
        let rd = self.bang.realize(&m.d_type)?;
        if d.dom() != rd.src.ctx() || !rd.src.is_section(d) {
            return Err(ill("W recursion step is not a section of D"));
        }
        let rc = self.bang.realize(c)?.src;
        let rb = self.bang.realize(&m.branches)?.src;
        let rih = self.bang.realize(&m.ih)?.src;
        let at = self.bang.lift(&m.ih, rb.display())?;
        let app = self.pi_app(&m.branches, &m.c_eval)?;
        let lift_eval = self.bang.lift(c, &m.eval)?;
        let lift_d = self.bang.lift(c, &m.fold.after(&self.comprehension(&m.ih)?))?;
        let mut values: HashMap<Val, Val> = HashMap::new();
        let mut pending: Vec<Val> = m.fold.dom().elements().to_vec();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for p in pending {
                let ys = rb.fiber(&p);
                if !ys.iter().all(|y| values.contains_key(m.eval.apply(y))) {
                    rest.push(p);
                    continue;
                }
                let q = rih
                    .fiber(&p)
                    .iter()
                    .find(|q| {
                        ys.iter().all(|y| {
                            at.element(y, q)
                                .is_some_and(|qy| lift_eval.top.apply(app.apply(qy)) == &values[m.eval.apply(y)])
                        })
                    })
                    .ok_or_else(|| ModelError::Invalid(format!("no λ-abstraction of the recursive values over {p}")))?;
                let tree = m.fold.apply(&p).clone();
                if values.insert(tree.clone(), lift_d.top.apply(d.apply(q)).clone()).is_some() {
                    return Err(ModelError::Invalid(format!("fold is not injective at {tree}")));
                }
            }
            if rest.len() == before {
                return Err(ModelError::Infinite("W recursion does not terminate".into()));
            }
            pending = rest;
        }
        map_total(rc.ctx(), rc.total(), |w| values.get(w).cloned().ok_or_else(|| ill(format!("{w} is not a fold"))))
    }
}

/// The types and maps of a W-recursion over `Γ`: the branches `B'` of each
/// node over `Γ.P`, the subtree map `eval : Γ.P.B' → Γ.W`, the induction
/// hypotheses `IH = Π[B', C[eval]]` and the step type `C[fold ∘ χ(IH)]`.
#[derive(Clone, Debug)]
pub struct WMotive {
    pub w: LocalType,
    pub poly: LocalType,
    pub fold: FinFun,
    pub branches: LocalType,
    pub eval: FinFun,
    pub c_eval: LocalType,
    pub ih: LocalType,
    pub d_type: LocalType,
}

impl SplitSuite for BangSuite<'_> {
    type Ty = LocalType;

    fn label(&self) -> String {
        format!("bang[{}]", self.model().name())
    }

    fn ctx_of(&self, a: &LocalType) -> FinSet {
        a.ctx().clone()
    }

    fn realize(&self, a: &LocalType) -> Result<TypeOver, ModelError> {
        Ok(self.bang.realize(a)?.src)
    }

    fn reindex(&self, a: &LocalType, sigma: &FinFun) -> Result<LocalType, ModelError> {
        self.bang.reindex(a, sigma)
    }

    fn lift(&self, a: &LocalType, sigma: &FinFun) -> Result<CartesianLift, ModelError> {
        self.bang.lift(a, sigma)
    }

    fn types_over(&self, ctx: &FinSet, bounds: &Bounds, limit: usize) -> Vec<LocalType> {
        local_type_pool(self.model(), ctx, bounds, limit)
    }

    fn sum_form(&self, a: &LocalType, b: &LocalType) -> Result<LocalType, ModelError> {
        same_ctx(a, b)?;
        let su = self.sum_universe(&a.universe, &b.universe)?;
        LocalType::new(su.universe.clone(), su.prod.pairing(&a.name, &b.name)?)
    }

    fn sum_inl(&self, a: &LocalType, b: &LocalType) -> Result<FinFun, ModelError> {
        let su = self.sum_universe(&a.universe, &b.universe)?;
        let (ra, rs) = (self.anchors(a)?, self.anchors(&self.sum_form(a, b)?)?);
        map_total(ra.src.total(), rs.src.total(), |x| {
            let g = ra.src.point_of(x);
            let s = su.inl_anchor(a.name.apply(g), b.name.apply(g), ra.top.apply(x)).ok_or_else(|| ill("inl anchor"))?;
            rs.element(g, &s).cloned().ok_or_else(|| ill("inl leaves the sum"))
        })
    }

    fn sum_inr(&self, a: &LocalType, b: &LocalType) -> Result<FinFun, ModelError> {
        let su = self.sum_universe(&a.universe, &b.universe)?;
        let (rb, rs) = (self.anchors(b)?, self.anchors(&self.sum_form(a, b)?)?);
        map_total(rb.src.total(), rs.src.total(), |y| {
            let g = rb.src.point_of(y);
            let s = su.inr_anchor(a.name.apply(g), b.name.apply(g), rb.top.apply(y)).ok_or_else(|| ill("inr anchor"))?;
            rs.element(g, &s).cloned().ok_or_else(|| ill("inr leaves the sum"))
        })
    }

    fn sum_copair(&self, a: &LocalType, b: &LocalType, c: &LocalType, d1: &FinFun, d2: &FinFun) -> Result<FinFun, ModelError> {
        if self.shortcut_copair {
            return self.copair_at(a, b, c, d1, d2);
        }
        same_ctx(a, b)?;
        let (tel, sum_layer) = self.copair_telescope(&a.universe, &b.universe, &c.universe)?;
        let inst = Instance {
            ctx: a.ctx().clone(),
            data: vec![a.name.clone(), b.name.clone(), c.name.clone(), d1.clone(), d2.clone()],
        };
        let (ua, ub, uc) = (a.universe.clone(), b.universe.clone(), c.universe.clone());
        let universal = |u: &Instance| {
            let au = LocalType::new(ua.clone(), u.data[0].clone())?;
            let bu = LocalType::new(ub.clone(), u.data[1].clone())?;
            let cu = LocalType::new(uc.clone(), u.data[2].clone())?;
            self.copair_at(&au, &bu, &cu, &u.data[3], &u.data[4])
        };
        self.eliminate(&tel, &inst, &[sum_layer], &Layer::applied(c.universe.clone(), 2, vec![0, 1]), c, &universal)
    }

    fn pi_form(&self, a: &LocalType, b: &LocalType) -> Result<LocalType, ModelError> {
        let pu = self.pi_universe(&a.universe, &b.universe)?;
        LocalType::new(pu.universe.clone(), self.wedge_name(&pu.base, a, b)?)
    }

    fn pi_app(&self, a: &LocalType, b: &LocalType) -> Result<FinFun, ModelError> {
        let pu = self.pi_universe(&a.universe, &b.universe)?;
        let pi = self.pi_form(a, b)?;
        let pa = self.bang.reindex(&pi, &self.comprehension(a)?)?;
        let (rpa, ra, rb) = (self.anchors(&pa)?, self.anchors(a)?, self.anchors(b)?);
        map_total(rpa.src.total(), rb.src.total(), |q| {
            let x = rpa.src.point_of(q);
            let r = pi.name.apply(ra.src.point_of(x));
            let xu = pu.base.x_at(r, ra.top.apply(x)).ok_or_else(|| ill("argument not anchored"))?;
            let qu = pu.witness.at_a.element(xu, rpa.top.apply(q)).ok_or_else(|| ill("no application"))?;
            let eb = pu.base.fam_b.top.apply(pu.witness.app.apply(qu));
            rb.element(x, eb).cloned().ok_or_else(|| ill("result leaves B"))
        })
    }

    fn pi_lambda(&self, a: &LocalType, b: &LocalType, t: &FinFun) -> Result<FinFun, ModelError> {
        let pu = self.pi_universe(&a.universe, &b.universe)?;
        let tel = self.lambda_telescope(&a.universe, &b.universe)?;
        let inst = Instance { ctx: a.ctx().clone(), data: vec![a.name.clone(), b.name.clone(), t.clone()] };
        let (ua, ub) = (a.universe.clone(), b.universe.clone());
        let universal = |u: &Instance| {
            let au = LocalType::new(ua.clone(), u.data[0].clone())?;
            let bu = LocalType::new(ub.clone(), u.data[1].clone())?;
            let pi = self.pi_form(&au, &bu)?;
            let w = PiWitness {
                a: self.realize(&au)?,
                b: self.realize(&bu)?,
                pi: self.realize(&pi)?,
                at_a: self.bang.lift(&pi, &self.comprehension(&au)?)?,
                app: self.pi_app(&au, &bu)?,
            };
            self.pi_class.choose_lambda(&w, &u.data[2])
        };
        let family = Self::wedge_layer(&pu.base, &pu.universe);
        self.eliminate(&tel, &inst, &[], &family, &self.pi_form(a, b)?, &universal)
    }

    fn sigma_form(&self, a: &LocalType, b: &LocalType) -> Result<LocalType, ModelError> {
        let su = self.sigma_universe(&a.universe, &b.universe)?;
        LocalType::new(su.universe.clone(), self.wedge_name(&su.base, a, b)?)
    }

    fn sigma_pair(&self, a: &LocalType, b: &LocalType) -> Result<FinFun, ModelError> {
        let su = self.sigma_universe(&a.universe, &b.universe)?;
        let sigma = self.sigma_form(a, b)?;
        let (ra, rb, rs) = (self.anchors(a)?, self.anchors(b)?, self.anchors(&sigma)?);
        map_total(rb.src.total(), rs.src.total(), |y| {
            let x = rb.src.point_of(y);
            let g = ra.src.point_of(x);
            let xu = su.base.x_at(sigma.name.apply(g), ra.top.apply(x)).ok_or_else(|| ill("first component"))?;
            let yu = su.base.y_at(xu, rb.top.apply(y)).ok_or_else(|| ill("second component"))?;
            rs.element(g, su.witness.pair.apply(yu)).cloned().ok_or_else(|| ill("pair leaves Σ"))
        })
    }

    fn sigma_split(&self, a: &LocalType, b: &LocalType, c: &LocalType, d: &FinFun) -> Result<FinFun, ModelError> {
        self.over_a(a, b)?;
        let (tel, sigma_layer) = self.split_telescope(&a.universe, &b.universe, &c.universe)?;
        let inst = Instance { ctx: a.ctx().clone(), data: vec![a.name.clone(), b.name.clone(), c.name.clone(), d.clone()] };
        let (ua, ub, uc) = (a.universe.clone(), b.universe.clone(), c.universe.clone());
        let universal = |u: &Instance| {
            let au = LocalType::new(ua.clone(), u.data[0].clone())?;
            let bu = LocalType::new(ub.clone(), u.data[1].clone())?;
            let cu = LocalType::new(uc.clone(), u.data[2].clone())?;
            let pair = self.sigma_pair(&au, &bu)?;
            let l = self.bang.lift(&cu, &pair)?;
            elim::extend(&self.realize(&cu)?, &[(&pair, &l, &u.data[3])])
        };
        self.eliminate(&tel, &inst, &[sigma_layer], &Layer::applied(c.universe.clone(), 2, vec![0, 1]), c, &universal)
    }

    fn id_form(&self, a: &LocalType) -> Result<LocalType, ModelError> {
        let iu = self.id_universe(&a.universe)?;
        let ra = self.anchors(a)?;
        let raa = self.anchors(&self.bang.reindex(a, ra.src.display())?)?;
        let name = map_total(raa.src.total(), iu.universe.base(), |x| {
            let e1 = ra.top.apply(raa.src.point_of(x));
            iu.witness.aa.element(e1, raa.top.apply(x)).cloned().ok_or_else(|| ill("pair of anchors"))
        })?;
        LocalType::new(iu.universe.clone(), name)
    }

    fn id_refl(&self, a: &LocalType) -> Result<FinFun, ModelError> {
        let iu = self.id_universe(&a.universe)?;
        let ra = self.anchors(a)?;
        let raa = self.anchors(&self.bang.reindex(a, ra.src.display())?)?;
        let rid = self.anchors(&self.id_form(a)?)?;
        map_total(ra.src.total(), rid.src.total(), |x| {
            let e = ra.top.apply(x);
            let x2 = raa.element(x, e).ok_or_else(|| ill("no diagonal point"))?;
            rid.element(x2, iu.witness.refl.apply(e)).cloned().ok_or_else(|| ill("refl leaves Id"))
        })
    }

    fn id_j(&self, a: &LocalType, delta: &[LocalType], c: &LocalType, d: &FinFun) -> Result<FinFun, ModelError> {
        self.check_frobenius(a, delta, c)?;
        let ubs: Vec<Universe> = delta.iter().map(|b| b.universe.clone()).collect();
        let (tel, motive_chain) = self.j_telescope(&a.universe, &ubs, &c.universe)?;
        let mut data = vec![a.name.clone()];
        data.extend(delta.iter().map(|b| b.name.clone()));
        data.push(c.name.clone());
        data.push(d.clone());
        let inst = Instance { ctx: a.ctx().clone(), data };
        let n = delta.len();
        let (ua, uc) = (a.universe.clone(), c.universe.clone());
        let universal = |u: &Instance| {
            let au = LocalType::new(ua.clone(), u.data[0].clone())?;
            let bus = ubs
                .iter()
                .enumerate()
                .map(|(i, ub)| LocalType::new(ub.clone(), u.data[i + 1].clone()))
                .collect::<Result<Vec<_>, _>>()?;
            let cu = LocalType::new(uc.clone(), u.data[n + 1].clone())?;
            let (rs, _) = self.refl_chain(&au, &bus)?;
            let r = rs.last().unwrap();
            let l = self.bang.lift(&cu, r)?;
            elim::extend(&self.realize(&cu)?, &[(r, &l, &u.data[n + 2])])
        };
        self.eliminate(&tel, &inst, &motive_chain, &Layer::applied(c.universe.clone(), n + 1, vec![]), c, &universal)
    }

    fn unit_form(&self, ctx: &FinSet) -> Result<LocalType, ModelError> {
        LocalType::new(self.unit_universe()?.universe.clone(), FinFun::to_terminal(ctx))
    }

    fn unit_tt(&self, ctx: &FinSet) -> Result<FinFun, ModelError> {
        let cu = self.unit_universe()?;
        let tt = cu.unit.as_ref().unwrap().tt.apply(&Val::atom("pt")).clone();
        let ru = self.anchors(&self.unit_form(ctx)?)?;
        map_total(ctx, ru.src.total(), |g| ru.element(g, &tt).cloned().ok_or_else(|| ill("tt leaves the unit")))
    }

    fn unit_rec(&self, ctx: &FinSet, c: &LocalType, d: &FinFun) -> Result<FinFun, ModelError> {
        let (tel, layer) = self.urec_telescope(&c.universe)?;
        let inst = Instance { ctx: ctx.clone(), data: vec![c.name.clone(), d.clone()] };
        let uc = c.universe.clone();
        let universal = |u: &Instance| {
            let cu = LocalType::new(uc.clone(), u.data[0].clone())?;
            let tt = self.unit_tt(&u.ctx)?;
            let l = self.bang.lift(&cu, &tt)?;
            elim::extend(&self.realize(&cu)?, &[(&tt, &l, &u.data[1])])
        };
        self.eliminate(&tel, &inst, &[layer], &Layer::applied(c.universe.clone(), 0, vec![]), c, &universal)
    }

    fn zero_form(&self, ctx: &FinSet) -> Result<LocalType, ModelError> {
        LocalType::new(self.zero_universe()?.universe.clone(), FinFun::to_terminal(ctx))
    }

    fn zero_elim(&self, ctx: &FinSet, c: &LocalType) -> Result<FinFun, ModelError> {
        let (tel, layer) = self.zero_telescope(&c.universe)?;
        let inst = Instance { ctx: ctx.clone(), data: vec![c.name.clone()] };
        let uc = c.universe.clone();
        let universal = |u: &Instance| elim::absurd(&self.realize(&LocalType::new(uc.clone(), u.data[0].clone())?)?);
        self.eliminate(&tel, &inst, &[layer], &Layer::applied(c.universe.clone(), 0, vec![]), c, &universal)
    }

    fn w_form(&self, a: &LocalType, b: &LocalType) -> Result<LocalType, ModelError> {
        let wu = self.w_universe(&a.universe, &b.universe)?;
        LocalType::new(wu.universe.clone(), self.w_name(&wu, a, b)?)
    }
}
