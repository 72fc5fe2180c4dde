//! Representing objects for rule premises.
//!
//! A [`Telescope`] is an ordered list of premise slots over local universes.
//! Its carrier is built from universes alone, using products and dependent
//! exponentials of display maps; maps `Γ → carrier` correspond to instances
//! of the premises over `Γ`. [`classify`] sends an instance to its
//! classifying map and [`universal_instance`] goes back.
//!
//! Anchors locate data: a dependent slot is stored as a graph keyed by tuples
//! of anchors, which is what makes classification strictly natural.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::bang::{Bang, LocalType, Universe};
use crate::compcat::{CartesianLift, ModelError, TypeOver};
use crate::finval::{all_maps, dep_exp, fn_parts, fn_point, product, FinFun, FinSet, Val};

/// Computes the name of a layer from the slot values decoded so far and the
/// anchors of the preceding layers in its chain.
pub type NameFn = Arc<dyn Fn(&[Val], &[Val]) -> Val + Send + Sync>;

#[derive(Clone)]
pub struct Layer {
    pub universe: Universe,
    /// Slots read by `name`.
    pub deps: Vec<usize>,
    pub name: NameFn,
}

impl Layer {
    pub fn new(universe: Universe, deps: Vec<usize>, name: impl Fn(&[Val], &[Val]) -> Val + Send + Sync + 'static) -> Layer {
        Layer { universe, deps, name: Arc::new(name) }
    }

    /// The layer whose name is the value of base slot `slot`.
    pub fn at(universe: Universe, slot: usize) -> Layer {
        Layer::new(universe, vec![slot], move |env, _| env[slot].clone())
    }

    /// The layer whose name is map slot `slot` applied to the anchors.
    pub fn applied(universe: Universe, slot: usize, extra: Vec<usize>) -> Layer {
        let mut deps = extra;
        deps.push(slot);
        Layer::new(universe, deps, move |env, anchors| {
            env[slot].lookup(&tuple(anchors)).expect("map slot defined on its fiber").clone()
        })
    }
}

impl fmt::Debug for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Layer({:?}, deps {:?})", self.universe, self.deps)
    }
}

#[derive(Clone, Debug)]
pub enum Slot {
    /// `a : V`.
    Base(FinSet),
    /// `c : ∏_{chain} V`.
    Map { chain: Vec<Layer>, target: FinSet },
    /// `d : ∏_{chain} Ê(family)`.
    Section { chain: Vec<Layer>, family: Layer },
}

impl Slot {
    fn layers(&self) -> Vec<&Layer> {
        match self {
            Slot::Base(_) => Vec::new(),
            Slot::Map { chain, .. } => chain.iter().collect(),
            Slot::Section { chain, family } => chain.iter().chain([family]).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Telescope {
    /// Structural key of the universes involved, used by memo tables.
    pub key: Val,
    pub slots: Vec<Slot>,
}

/// Encodes a tuple of anchors.
pub fn tuple(anchors: &[Val]) -> Val {
    match anchors {
        [] => Val::atom("nil"),
        [x] => x.clone(),
        [x, rest @ ..] => Val::pair(x.clone(), tuple(rest)),
    }
}

fn point() -> Val {
    Val::atom("pt")
}

/// Instance data for a telescope over `ctx`, one map per slot: a name
/// `Γ → V` for a base slot, a name `chain → V` for a map slot, and a
/// section of the realized family for a section slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub ctx: FinSet,
    pub data: Vec<FinFun>,
}

/// A chain of layers realized over some context.
#[derive(Clone, Debug)]
pub struct ChainCtx {
    pub types: Vec<LocalType>,
    pub lifts: Vec<CartesianLift>,
    /// The last comprehension (the context itself for an empty chain).
    pub total: FinSet,
    coords: HashMap<Val, (Val, Vec<Val>)>,
    index: HashMap<(Val, Vec<Val>), Val>,
}

impl ChainCtx {
    /// Base point and anchor tuple of an element.
    pub fn coords(&self, x: &Val) -> &(Val, Vec<Val>) {
        &self.coords[x]
    }

    pub fn locate(&self, gamma: &Val, anchors: &[Val]) -> Option<&Val> {
        self.index.get(&(gamma.clone(), anchors.to_vec()))
    }

    /// The projection of the last comprehension to the context.
    pub fn to_ctx(&self, ctx: &FinSet) -> FinFun {
        FinFun::new(self.total.clone(), ctx.clone(), |x| self.coords[x].0.clone()).expect("chain over its context")
    }
}

/// Realizes `chain` over `ctx`, where `envs[i]` are the slot values at the
/// `i`-th point of `ctx`.
pub fn chain_ctx(bang: &Bang<'_>, ctx: &FinSet, envs: &[Vec<Val>], chain: &[Layer]) -> Result<ChainCtx, ModelError> {
    let mut coords: HashMap<Val, (Val, Vec<Val>)> = ctx.iter().map(|g| (g.clone(), (g.clone(), Vec::new()))).collect();
    let env_of: HashMap<&Val, &Vec<Val>> = ctx.iter().zip(envs).collect();
    let mut current = ctx.clone();
    let (mut types, mut lifts) = (Vec::new(), Vec::new());
    for layer in chain {
        let name = FinFun::new(current.clone(), layer.universe.base().clone(), |x| {
            let (g, t) = &coords[x];
            (layer.name)(env_of[g], t)
        })?;
        let ty = LocalType::new(layer.universe.clone(), name)?;
        let lift = bang.realize(&ty)?;
        let mut next = HashMap::new();
        for (y, e) in lift.top.pairs() {
            let (g, t) = &coords[lift.src.point_of(y)];
            let mut t = t.clone();
            t.push(e.clone());
            next.insert(y.clone(), (g.clone(), t));
        }
        coords = next;
        current = lift.src.total().clone();
        types.push(ty);
        lifts.push(lift);
    }
    let index = coords.iter().map(|(x, c)| (c.clone(), x.clone())).collect();
    Ok(ChainCtx { types, lifts, total: current, coords, index })
}

impl Telescope {
    /// Validates slot dependencies: every layer may read only earlier slots,
    /// and a map-slot value may be applied only by layers that come after it.
    pub fn new(key: Val, slots: Vec<Slot>) -> Result<Telescope, ModelError> {
        for (j, slot) in slots.iter().enumerate() {
            for layer in slot.layers() {
                if let Some(d) = layer.deps.iter().find(|&&d| d >= j) {
                    return Err(ModelError::Invalid(format!("slot {j} refers to slot {d}, which is not earlier")));
                }
            }
        }
        Ok(Telescope { key, slots })
    }

    /// Anchor tuples of `chain` at the given slot values.
    pub fn fiber_tuples(chain: &[Layer], env: &[Val]) -> Vec<Vec<Val>> {
        let mut tuples = vec![Vec::new()];
        for layer in chain {
            let mut next = Vec::new();
            for t in &tuples {
                let v = (layer.name)(env, t);
                for e in layer.universe.total.fiber(&v) {
                    let mut t = t.clone();
                    t.push(e.clone());
                    next.push(t);
                }
            }
            tuples = next;
        }
        tuples
    }

    fn encode_step(&self, j: usize, prev: Val, value: Val) -> Val {
        match (&self.slots[j], j) {
            (Slot::Base(_), 0) => value,
            (Slot::Base(_), _) => Val::pair(prev, value),
            _ => fn_point(prev, value),
        }
    }

    /// The carrier point with the given slot values.
    pub fn encode(&self, env: &[Val]) -> Val {
        let mut r = point();
        for (j, v) in env.iter().enumerate() {
            r = self.encode_step(j, r, v.clone());
        }
        r
    }

    /// The slot values of a carrier point.
    pub fn decode(&self, r: &Val) -> Result<Vec<Val>, ModelError> {
        let bad = || ModelError::Invalid(format!("{r} is not a carrier point"));
        let mut env = vec![Val::atom("nil"); self.slots.len()];
        let mut cur = r.clone();
        for j in (0..self.slots.len()).rev() {
            let (prev, value) = match (&self.slots[j], j) {
                (Slot::Base(_), 0) => (point(), cur.clone()),
                (Slot::Base(_), _) => {
                    let (p, v) = cur.as_pair().ok_or_else(bad)?;
                    (p.clone(), v.clone())
                }
                _ => {
                    let (p, v) = fn_parts(&cur).ok_or_else(bad)?;
                    (p.clone(), v.clone())
                }
            };
            env[j] = value;
            cur = prev;
        }
        if cur != point() {
            return Err(bad());
        }
        Ok(env)
    }

    /// The possible values of slot `j` at the earlier slot values `env`.
    pub fn options(&self, j: usize, env: &[Val]) -> Vec<Val> {
        match &self.slots[j] {
            Slot::Base(v) => v.elements().to_vec(),
            Slot::Map { chain, target } => {
                let keys: Vec<Val> = Telescope::fiber_tuples(chain, env).iter().map(|t| tuple(t)).collect();
                let opts = vec![target.elements().to_vec(); keys.len()];
                crate::finval::Choices::new(&opts)
                    .map(|c| Val::graph(keys.iter().cloned().zip(c)))
                    .collect()
            }
            Slot::Section { chain, family } => {
                let tuples = Telescope::fiber_tuples(chain, env);
                let keys: Vec<Val> = tuples.iter().map(|t| tuple(t)).collect();
                let opts: Vec<Vec<Val>> =
                    tuples.iter().map(|t| family.universe.total.fiber(&(family.name)(env, t)).to_vec()).collect();
                crate::finval::Choices::new(&opts)
                    .map(|c| Val::graph(keys.iter().cloned().zip(c)))
                    .collect()
            }
        }
    }

    /// The carrier, enumerated pointwise from the slot options.
    pub fn carrier(&self) -> FinSet {
        let mut envs: Vec<Vec<Val>> = vec![Vec::new()];
        for j in 0..self.slots.len() {
            envs = envs
                .into_iter()
                .flat_map(|env| {
                    self.options(j, &env).into_iter().map(move |v| {
                        let mut e = env.clone();
                        e.push(v);
                        e
                    })
                })
                .collect();
        }
        FinSet::new(envs.iter().map(|e| self.encode(e)))
    }

    /// The carrier, built from the terminal object by products and dependent
    /// exponentials of display maps; each exponential's graphs are rekeyed
    /// by anchor tuples.
    pub fn carrier_by_limits(&self) -> Result<FinSet, ModelError> {
        let mut current = FinSet::terminal();
        for (j, slot) in self.slots.iter().enumerate() {
            current = match slot {
                Slot::Base(v) if j == 0 => v.clone(),
                Slot::Base(v) => product(&current, v).object,
                Slot::Map { chain, target } => {
                    let (display, keys) = self.chain_display(&current, j, chain)?;
                    let p = product(display.dom(), target);
                    self.rekey(&dep_exp(&display, &p.left)?.object, &keys, |z| z.as_pair().unwrap().1.clone())?
                }
                Slot::Section { chain, family } => {
                    let (display, keys) = self.chain_display(&current, j, chain)?;
                    let mut pts = Vec::new();
                    for x in display.dom().iter() {
                        let (r, t) = &keys[x];
                        let env = self.decode_prefix(r, j)?;
                        for e in family.universe.total.fiber(&(family.name)(&env, t)) {
                            pts.push((Val::pair(x.clone(), e.clone()), x.clone()));
                        }
                    }
                    let fam = TypeOver::from_points(display.dom(), pts)?;
                    self.rekey(&dep_exp(&display, fam.display())?.object, &keys, |z| {
                        z.as_pair().unwrap().1.clone()
                    })?
                }
            };
        }
        Ok(current)
    }

    fn decode_prefix(&self, r: &Val, j: usize) -> Result<Vec<Val>, ModelError> {
        if j == 0 {
            return Ok(Vec::new());
        }
        Telescope { key: self.key.clone(), slots: self.slots[..j].to_vec() }.decode(r)
    }

    #[allow(clippy::type_complexity)]
    fn chain_display(
        &self,
        current: &FinSet,
        j: usize,
        chain: &[Layer],
    ) -> Result<(FinFun, HashMap<Val, (Val, Vec<Val>)>), ModelError> {
        let mut pts = Vec::new();
        let mut keys = HashMap::new();
        for r in current.iter() {
            let env = self.decode_prefix(r, j)?;
            for t in Telescope::fiber_tuples(chain, &env) {
                let x = Val::pair(r.clone(), tuple(&t));
                keys.insert(x.clone(), (r.clone(), t));
                pts.push((x, r.clone()));
            }
        }
        Ok((TypeOver::from_points(current, pts)?.display().clone(), keys))
    }

    fn rekey(
        &self,
        object: &FinSet,
        keys: &HashMap<Val, (Val, Vec<Val>)>,
        value: impl Fn(&Val) -> Val,
    ) -> Result<FinSet, ModelError> {
        let mut out = Vec::new();
        for p in object.iter() {
            let (r, graph) = fn_parts(p).ok_or_else(|| ModelError::Invalid("exponential point".into()))?;
            let entries = graph.as_graph().unwrap().iter().map(|(x, z)| (tuple(&keys[x].1), value(z)));
            out.push(fn_point(r.clone(), Val::graph(entries)));
        }
        Ok(FinSet::new(out))
    }

    fn family_type(&self, cc: &ChainCtx, envs: &HashMap<Val, Vec<Val>>, family: &Layer) -> Result<LocalType, ModelError> {
        family_over(cc, envs, family)
    }
}

/// The type `family` names over a chain context, given the slot values at
/// each point of the underlying context.
pub fn family_over(cc: &ChainCtx, envs: &HashMap<Val, Vec<Val>>, family: &Layer) -> Result<LocalType, ModelError> {
    let name = FinFun::new(cc.total.clone(), family.universe.base().clone(), |x| {
        let (g, t) = cc.coords(x);
        (family.name)(&envs[g], t)
    })?;
    LocalType::new(family.universe.clone(), name)
}

fn ill(msg: impl Into<String>) -> ModelError {
    ModelError::IllTyped(msg.into())
}

/// Slot values of an instance at each point of its context.
pub fn classify_envs(bang: &Bang<'_>, tel: &Telescope, inst: &Instance) -> Result<Vec<Vec<Val>>, ModelError> {
    if inst.data.len() != tel.slots.len() {
        return Err(ill(format!("{} data for {} slots", inst.data.len(), tel.slots.len())));
    }
    let ctx = &inst.ctx;
    let mut envs: Vec<Vec<Val>> = vec![Vec::new(); ctx.len()];
    for (j, (slot, data)) in tel.slots.iter().zip(&inst.data).enumerate() {
        match slot {
            Slot::Base(v) => {
                if data.dom() != ctx || data.cod() != v {
                    return Err(ill(format!("slot {j}: expected a map {ctx} → {v}")));
                }
                for (env, g) in envs.iter_mut().zip(ctx.iter()) {
                    env.push(data.apply(g).clone());
                }
            }
            Slot::Map { chain, target } => {
                let cc = chain_ctx(bang, ctx, &envs, chain)?;
                if *data.dom() != cc.total || data.cod() != target {
                    return Err(ill(format!("slot {j}: expected a map {} → {target}", cc.total)));
                }
                push_graphs(ctx, &mut envs, &cc, |x| data.apply(x).clone());
            }
            Slot::Section { chain, family } => {
                let cc = chain_ctx(bang, ctx, &envs, chain)?;
                let by_point: HashMap<Val, Vec<Val>> = ctx.iter().cloned().zip(envs.iter().cloned()).collect();
                let fam = bang.realize(&tel.family_type(&cc, &by_point, family)?)?;
                if *data.dom() != cc.total || data.cod() != fam.src.total() || !fam.src.is_section(data) {
                    return Err(ill(format!("slot {j}: not a section of the family over {}", cc.total)));
                }
                push_graphs(ctx, &mut envs, &cc, |x| fam.top.apply(data.apply(x)).clone());
            }
        }
    }
    Ok(envs)
}

fn push_graphs(ctx: &FinSet, envs: &mut [Vec<Val>], cc: &ChainCtx, value: impl Fn(&Val) -> Val) {
    let mut entries: Vec<Vec<(Val, Val)>> = vec![Vec::new(); ctx.len()];
    for x in cc.total.iter() {
        let (g, t) = cc.coords(x);
        entries[ctx.index_of(g).unwrap()].push((tuple(t), value(x)));
    }
    for (env, e) in envs.iter_mut().zip(entries) {
        env.push(Val::graph(e));
    }
}

/// The classifying points of an instance, aligned with its context.
pub fn classify_points(bang: &Bang<'_>, tel: &Telescope, inst: &Instance) -> Result<Vec<Val>, ModelError> {
    Ok(classify_envs(bang, tel, inst)?.iter().map(|e| tel.encode(e)).collect())
}

/// The classifying map `Γ → carrier` of an instance.
pub fn classify(bang: &Bang<'_>, tel: &Telescope, carrier: &FinSet, inst: &Instance) -> Result<FinFun, ModelError> {
    let pts = classify_points(bang, tel, inst)?;
    Ok(FinFun::from_images(inst.ctx.clone(), carrier.clone(), pts)?)
}

/// The instance classified by the inclusion of `points` into the carrier.
pub fn universal_instance(bang: &Bang<'_>, tel: &Telescope, points: &FinSet) -> Result<Instance, ModelError> {
    let envs: Vec<Vec<Val>> = points.iter().map(|r| tel.decode(r)).collect::<Result<_, _>>()?;
    let by_point: HashMap<Val, Vec<Val>> = points.iter().cloned().zip(envs.iter().cloned()).collect();
    let mut data = Vec::new();
    for (j, slot) in tel.slots.iter().enumerate() {
        let f = match slot {
            Slot::Base(v) => FinFun::new(points.clone(), v.clone(), |r| by_point[r][j].clone())?,
            Slot::Map { chain, target } => {
                let cc = chain_ctx(bang, points, &envs, chain)?;
                FinFun::new(cc.total.clone(), target.clone(), |x| {
                    let (r, t) = cc.coords(x);
                    by_point[r][j].lookup(&tuple(t)).expect("graph on its fiber").clone()
                })?
            }
            Slot::Section { chain, family } => {
                let cc = chain_ctx(bang, points, &envs, chain)?;
                let fam = bang.realize(&tel.family_type(&cc, &by_point, family)?)?;
                FinFun::new(cc.total.clone(), fam.src.total().clone(), |x| {
                    let (r, t) = cc.coords(x);
                    let anchor = by_point[r][j].lookup(&tuple(t)).expect("graph on its fiber");
                    fam.element(x, anchor).expect("anchored element").clone()
                })?
            }
        };
        data.push(f);
    }
    Ok(Instance { ctx: points.clone(), data })
}

/// Reindexes an instance along `σ : Δ → Γ`: base names are precomposed and
/// chain data is pulled back along the induced map of chain contexts.
pub fn reindex_instance(bang: &Bang<'_>, tel: &Telescope, inst: &Instance, sigma: &FinFun) -> Result<Instance, ModelError> {
    if sigma.cod() != &inst.ctx {
        return Err(ModelError::Context(format!("{} is not {}", sigma.cod(), inst.ctx)));
    }
    let envs = classify_envs(bang, tel, inst)?;
    let small: Vec<Vec<Val>> = sigma.images().iter().map(|g| envs[inst.ctx.index_of(g).unwrap()].clone()).collect();
    let by_point: HashMap<Val, Vec<Val>> = sigma.dom().iter().cloned().zip(small.iter().cloned()).collect();
    let big_by_point: HashMap<Val, Vec<Val>> = inst.ctx.iter().cloned().zip(envs.iter().cloned()).collect();
    let mut data = Vec::new();
    for (slot, d) in tel.slots.iter().zip(&inst.data) {
        let f = match slot {
            Slot::Base(_) => d.after(sigma),
            Slot::Map { chain, .. } | Slot::Section { chain, .. } => {
                let small_cc = chain_ctx(bang, sigma.dom(), &small, chain)?;
                let big_cc = chain_ctx(bang, &inst.ctx, &envs, chain)?;
                let over = |x: &Val| {
                    let (g, t) = small_cc.coords(x);
                    big_cc.locate(sigma.apply(g), t).expect("chain fibers agree").clone()
                };
                match slot {
                    Slot::Map { target, .. } => FinFun::new(small_cc.total.clone(), target.clone(), |x| d.apply(&over(x)).clone())?,
                    Slot::Section { family, .. } => {
                        let small_f = bang.realize(&tel.family_type(&small_cc, &by_point, family)?)?;
                        let big_f = bang.realize(&tel.family_type(&big_cc, &big_by_point, family)?)?;
                        FinFun::new(small_cc.total.clone(), small_f.src.total().clone(), |x| {
                            let anchor = big_f.top.apply(d.apply(&over(x)));
                            small_f.element(x, anchor).expect("anchored element").clone()
                        })?
                    }
                    Slot::Base(_) => unreachable!(),
                }
            }
        };
        data.push(f);
    }
    Ok(Instance { ctx: sigma.dom().clone(), data })
}

/// `V_A ◁ V_B`: families of elements of `V_B` indexed by an `Ê_A`-fiber.
#[derive(Clone, Debug)]
pub struct WedgeObject {
    pub universe_a: Universe,
    pub vb: FinSet,
    pub telescope: Telescope,
    pub carrier: FinSet,
    pub proj_a: FinFun,
}

pub fn wedge(ea: &TypeOver, vb: &FinSet) -> WedgeObject {
    let ua = Universe::new(ea.clone());
    let key = Val::tag("wedge", Val::pair(ua.key(), Val::Fn(vb.iter().map(|v| (v.clone(), v.clone())).collect())));
    let telescope = Telescope::new(
        key,
        vec![Slot::Base(ea.ctx().clone()), Slot::Map { chain: vec![Layer::at(ua.clone(), 0)], target: vb.clone() }],
    )
    .expect("wedge slots are ordered");
    let carrier = telescope.carrier();
    let proj_a = FinFun::new(carrier.clone(), ea.ctx().clone(), |r| fn_parts(r).unwrap().0.clone()).unwrap();
    WedgeObject { universe_a: ua, vb: vb.clone(), telescope, carrier, proj_a }
}

impl WedgeObject {
    /// `Ê_A[π_A]` over the carrier and `π_B` out of its comprehension.
    pub fn proj_b(&self, bang: &Bang<'_>) -> Result<(LocalType, FinFun), ModelError> {
        let inst = universal_instance(bang, &self.telescope, &self.carrier)?;
        let ty = LocalType::new(self.universe_a.clone(), inst.data[0].clone())?;
        Ok((ty, inst.data[1].clone()))
    }

    /// `⟨ν_A, ν_B⟩ : Γ → ◁` for `ν_B` defined on `Γ.(Ê_A[ν_A])`.
    pub fn pairing(&self, bang: &Bang<'_>, nu_a: &FinFun, nu_b: &FinFun) -> Result<FinFun, ModelError> {
        let inst = Instance { ctx: nu_a.dom().clone(), data: vec![nu_a.clone(), nu_b.clone()] };
        classify(bang, &self.telescope, &self.carrier, &inst)
    }

    /// The pair corresponding to `k : Γ → ◁`.
    pub fn unpair(&self, bang: &Bang<'_>, k: &FinFun) -> Result<(FinFun, FinFun), ModelError> {
        let (ty, pb) = self.proj_b(bang)?;
        let lift = bang.lift(&ty, k)?;
        Ok((self.proj_a.after(k), pb.after(&lift.top)))
    }
}

/// Counts `Hom(Γ, ◁)` directly and as pairs `(ν_A, ν_B)`, checking that
/// pairing is a bijection between them.
pub fn wedge_hom_law(bang: &Bang<'_>, w: &WedgeObject, gamma: &FinSet) -> Result<(usize, usize), ModelError> {
    let direct = all_maps(gamma, &w.carrier);
    let mut seen = std::collections::BTreeSet::new();
    let mut pairs = 0;
    for nu_a in all_maps(gamma, w.universe_a.base()) {
        let ga = bang.realize(&LocalType::new(w.universe_a.clone(), nu_a.clone())?)?;
        for nu_b in all_maps(ga.src.total(), &w.vb) {
            pairs += 1;
            let k = w.pairing(bang, &nu_a, &nu_b)?;
            if w.unpair(bang, &k)? != (nu_a.clone(), nu_b) {
                return Err(ModelError::Invalid(format!("unpair ∘ pair is not the identity at {k}")));
            }
            seen.insert(k);
        }
    }
    if seen.len() != pairs || direct.iter().any(|k| !seen.contains(k)) {
        return Err(ModelError::Invalid(format!("pairing into {} is not a bijection", w.carrier)));
    }
    Ok((direct.len(), pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compcat::{substitutions_into, Model};
    use crate::models::{FamModel, PullbackModel};

    fn uni(m: &dyn Model, n: usize, sizes: &[usize]) -> Universe {
        Universe::new(m.family(&FinSet::atoms("v", n), sizes))
    }

    #[test]
    fn wedge_cardinalities() {
        let m = PullbackModel;
        let one = FinSet::atoms("v", 1);
        assert_eq!(wedge(&m.family(&one, &[0]), &FinSet::atoms("b", 5)).carrier.len(), 1);
        assert_eq!(wedge(&m.family(&one, &[1]), &FinSet::atoms("b", 2)).carrier.len(), 2);
        let w = wedge(&m.family(&FinSet::atoms("v", 2), &[1, 2]), &FinSet::atoms("b", 3));
        assert_eq!(w.carrier.len(), 12);
        assert_eq!(w.telescope.carrier_by_limits().unwrap(), w.carrier);
    }

    #[test]
    fn wedge_adjunction() {
        for m in [&FamModel as &dyn Model, &PullbackModel] {
            let bang = Bang::new(m);
            let w = wedge(&m.family(&FinSet::atoms("v", 2), &[1, 2]), &FinSet::atoms("b", 2));
            for n in 0..=2 {
                let (d, p) = wedge_hom_law(&bang, &w, &FinSet::atoms("g", n)).unwrap();
                assert_eq!(d, p);
            }
            let (ty, pb) = w.proj_b(&bang).unwrap();
            assert_eq!(w.pairing(&bang, &ty.name, &pb).unwrap(), FinFun::identity(&w.carrier));
        }
    }

    #[test]
    fn single_and_product_telescopes() {
        let m = PullbackModel;
        let bang = Bang::new(&m);
        let v = FinSet::atoms("v", 3);
        let single = Telescope::new(Val::atom("one"), vec![Slot::Base(v.clone())]).unwrap();
        assert_eq!(single.carrier(), v);
        let inst = universal_instance(&bang, &single, &v).unwrap();
        assert!(inst.data[0].is_identity());

        let w = FinSet::atoms("w", 2);
        let prod = Telescope::new(Val::atom("two"), vec![Slot::Base(v.clone()), Slot::Base(w.clone())]).unwrap();
        let p = product(&v, &w);
        assert_eq!(prod.carrier(), p.object);
        assert_eq!(prod.carrier_by_limits().unwrap(), p.object);
        let inst = universal_instance(&bang, &prod, &p.object).unwrap();
        assert_eq!(inst.data, vec![p.left.clone(), p.right.clone()]);
        assert_eq!(classify(&bang, &prod, &p.object, &inst).unwrap(), FinFun::identity(&p.object));
        let empty = Instance { ctx: FinSet::empty(), data: vec![all_maps(&FinSet::empty(), &v)[0].clone(), all_maps(&FinSet::empty(), &w)[0].clone()] };
        assert!(classify(&bang, &prod, &p.object, &empty).unwrap().dom().is_empty());
    }

    #[test]
    fn out_of_order_slots_are_rejected() {
        let m = PullbackModel;
        let u = uni(&m, 1, &[1]);
        let r = Telescope::new(Val::atom("bad"), vec![Slot::Map { chain: vec![Layer::at(u, 0)], target: FinSet::atoms("b", 1) }]);
        assert!(matches!(r, Err(ModelError::Invalid(_))));
    }

    fn dependent_telescope(m: &dyn Model) -> Telescope {
        let ua = uni(m, 2, &[1, 2]);
        let uc = uni(m, 2, &[2, 1]);
        Telescope::new(
            Val::atom("dep"),
            vec![
                Slot::Base(ua.base().clone()),
                Slot::Map { chain: vec![Layer::at(ua.clone(), 0)], target: uc.base().clone() },
                Slot::Section { chain: vec![Layer::at(ua, 0)], family: Layer::applied(uc, 1, vec![]) },
            ],
        )
        .unwrap()
    }

    #[test]
    fn dependent_carrier_and_round_trip() {
        for m in [&FamModel as &dyn Model, &PullbackModel] {
            let bang = Bang::new(m);
            let tel = dependent_telescope(m);
            let carrier = tel.carrier();
            // sections per name: over v0, 2 or 1; over v1, products of 2 and 1
            assert_eq!(carrier.len(), (2 + 1) + (4 + 2 + 2 + 1));
            assert_eq!(tel.carrier_by_limits().unwrap(), carrier);
            let inst = universal_instance(&bang, &tel, &carrier).unwrap();
            assert_eq!(classify(&bang, &tel, &carrier, &inst).unwrap(), FinFun::identity(&carrier));
            for r in carrier.iter() {
                assert_eq!(tel.encode(&tel.decode(r).unwrap()), *r);
            }
        }
    }

    #[test]
    fn classify_is_natural() {
        for m in [&FamModel as &dyn Model, &PullbackModel] {
            let bang = Bang::new(m);
            let tel = dependent_telescope(m);
            let carrier = tel.carrier();
            let subsets: Vec<FinSet> = vec![
                FinSet::new(carrier.elements()[..3].to_vec()),
                FinSet::new(carrier.elements()[4..6].to_vec()),
            ];
            for p in subsets {
                let inst = universal_instance(&bang, &tel, &p).unwrap();
                let k = classify(&bang, &tel, &carrier, &inst).unwrap();
                for sigma in substitutions_into(&p, 2) {
                    let small = reindex_instance(&bang, &tel, &inst, &sigma).unwrap();
                    assert_eq!(classify(&bang, &tel, &carrier, &small).unwrap(), k.after(&sigma));
                }
            }
        }
    }

    #[test]
    fn ill_typed_instances_are_rejected() {
        let m = PullbackModel;
        let bang = Bang::new(&m);
        let tel = dependent_telescope(&m);
        let carrier = tel.carrier();
        let p = FinSet::new(carrier.elements()[..2].to_vec());
        let mut inst = universal_instance(&bang, &tel, &p).unwrap();
        inst.data.pop();
        assert!(matches!(classify_points(&bang, &tel, &inst), Err(ModelError::IllTyped(_))));
    }
}
