//! Constructor suites on split comprehension categories.
//!
//! [`SplitSuite`] fixes one calling convention for every type former. Types
//! live over contexts that are realized totals of earlier types, and every
//! map is a plain [`FinFun`] between realized totals. [`BangSuite`] lifts a
//! model's weakly stable structure to `C_!`; [`DirectSuite`] uses the
//! model's own providers and is strictly stable only when they happen to be.

pub mod bangsuite;
pub mod direct;
pub mod memo;
pub mod piclass;
pub mod stability;
pub mod weak;

use std::fmt;

use crate::compcat::{CartesianLift, ModelError, TypeOver};
use crate::finval::{FinFun, FinSet, Val};
use crate::report::Bounds;

pub use bangsuite::BangSuite;
pub use direct::DirectSuite;
pub use memo::Memo;
pub use piclass::{derive_stable_class, PiSource, StableClassPi};

pub trait SplitSuite: Send + Sync {
    type Ty: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn label(&self) -> String;
    fn ctx_of(&self, a: &Self::Ty) -> FinSet;
    /// The comprehension of `a`, as a type of the backing model.
    fn realize(&self, a: &Self::Ty) -> Result<TypeOver, ModelError>;
    fn reindex(&self, a: &Self::Ty, sigma: &FinFun) -> Result<Self::Ty, ModelError>;
    /// The lift `[a[σ]] → [a]` over `σ`.
    fn lift(&self, a: &Self::Ty, sigma: &FinFun) -> Result<CartesianLift, ModelError>;
    /// A deterministic thinned pool of types over `ctx`.
    fn types_over(&self, ctx: &FinSet, bounds: &Bounds, limit: usize) -> Vec<Self::Ty>;

    fn sum_form(&self, a: &Self::Ty, b: &Self::Ty) -> Result<Self::Ty, ModelError>;
    fn sum_inl(&self, a: &Self::Ty, b: &Self::Ty) -> Result<FinFun, ModelError>;
    fn sum_inr(&self, a: &Self::Ty, b: &Self::Ty) -> Result<FinFun, ModelError>;
    /// `c` over the sum, `d1`, `d2` sections of `c[inl]`, `c[inr]`.
    fn sum_copair(&self, a: &Self::Ty, b: &Self::Ty, c: &Self::Ty, d1: &FinFun, d2: &FinFun) -> Result<FinFun, ModelError>;

    /// `b` over `Γ.A`.
    fn pi_form(&self, a: &Self::Ty, b: &Self::Ty) -> Result<Self::Ty, ModelError>;
    /// `Γ.A.Π[χ(A)] → Γ.A.B` over `Γ.A`.
    fn pi_app(&self, a: &Self::Ty, b: &Self::Ty) -> Result<FinFun, ModelError>;
    fn pi_lambda(&self, a: &Self::Ty, b: &Self::Ty, t: &FinFun) -> Result<FinFun, ModelError>;

    fn sigma_form(&self, a: &Self::Ty, b: &Self::Ty) -> Result<Self::Ty, ModelError>;
    /// `Γ.A.B → Γ.Σ` over `Γ`.
    fn sigma_pair(&self, a: &Self::Ty, b: &Self::Ty) -> Result<FinFun, ModelError>;
    fn sigma_split(&self, a: &Self::Ty, b: &Self::Ty, c: &Self::Ty, d: &FinFun) -> Result<FinFun, ModelError>;

    /// Over `Γ.A.A`, the comprehension of `A[χ(A)]`.
    fn id_form(&self, a: &Self::Ty) -> Result<Self::Ty, ModelError>;
    /// `Γ.A → Γ.A.A.Id` over the diagonal.
    fn id_refl(&self, a: &Self::Ty) -> Result<FinFun, ModelError>;
    /// Frobenius elimination: `delta` is a telescope over `Γ.A.A.Id`, `c` a
    /// type over its last comprehension and `d` a section of `c` reindexed
    /// along `r.Δ`.
    fn id_j(&self, a: &Self::Ty, delta: &[Self::Ty], c: &Self::Ty, d: &FinFun) -> Result<FinFun, ModelError>;

    fn unit_form(&self, ctx: &FinSet) -> Result<Self::Ty, ModelError>;
    fn unit_tt(&self, ctx: &FinSet) -> Result<FinFun, ModelError>;
    fn unit_rec(&self, ctx: &FinSet, c: &Self::Ty, d: &FinFun) -> Result<FinFun, ModelError>;

    fn zero_form(&self, ctx: &FinSet) -> Result<Self::Ty, ModelError>;
    fn zero_elim(&self, ctx: &FinSet, c: &Self::Ty) -> Result<FinFun, ModelError>;

    fn w_form(&self, a: &Self::Ty, b: &Self::Ty) -> Result<Self::Ty, ModelError>;

    fn total(&self, a: &Self::Ty) -> Result<FinSet, ModelError> {
        Ok(self.realize(a)?.total().clone())
    }

    fn comprehension(&self, a: &Self::Ty) -> Result<FinFun, ModelError> {
        Ok(self.realize(a)?.display().clone())
    }

    fn pull_section(&self, a: &Self::Ty, sigma: &FinFun, s: &FinFun) -> Result<FinFun, ModelError> {
        self.lift(a, sigma)?.pull_section(s)
    }

    /// The diagonal `Γ.A → Γ.A.A`.
    fn diagonal(&self, a: &Self::Ty) -> Result<FinFun, ModelError> {
        crate::compcat::diagonal(&self.lift(a, &self.comprehension(a)?)?)
    }

    /// The substitutions `r_0 = r, r_1, …` of a Frobenius telescope, with
    /// the reindexed telescope `Δ[r]` over `Γ.A`.
    fn refl_chain(&self, a: &Self::Ty, delta: &[Self::Ty]) -> Result<(Vec<FinFun>, Vec<Self::Ty>), ModelError> {
        let mut rs = vec![self.id_refl(a)?];
        let mut pulled = Vec::new();
        for b in delta {
            let r = rs.last().unwrap();
            pulled.push(self.reindex(b, r)?);
            rs.push(self.lift(b, r)?.top);
        }
        Ok((rs, pulled))
    }
}

/// The map `X' → Y'` induced by `f : X → Y`, given the lift `x_top : X' → X`,
/// the base map `base : X' → K'` and a lift `y : Y' → Y` over `K' → K`.
pub fn pull_over(x_top: &FinFun, base: &FinFun, f: &FinFun, y: &CartesianLift) -> Result<FinFun, ModelError> {
    map_total(x_top.dom(), y.src.total(), |x| {
        let ill = |what: &str| ModelError::IllTyped(format!("{x} has no {what}"));
        let target = x_top.get(x).and_then(|e| f.get(e)).ok_or_else(|| ill("image"))?;
        let over = base.get(x).ok_or_else(|| ill("base point"))?;
        y.element(over, target)
            .cloned()
            .ok_or_else(|| ModelError::IllTyped(format!("no element over {over} above {target}")))
    })
}

/// Builds a map from a fallible pointwise rule.
pub fn map_total(dom: &FinSet, cod: &FinSet, mut f: impl FnMut(&Val) -> Result<Val, ModelError>) -> Result<FinFun, ModelError> {
    let images = dom.iter().map(&mut f).collect::<Result<Vec<_>, _>>()?;
    Ok(FinFun::from_images(dom.clone(), cod.clone(), images)?)
}
