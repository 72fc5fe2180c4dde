//! Strictification of comprehension categories over finite sets by local
//! universes.
//!
//! The base category is finite sets and total functions ([`finval`]). A
//! comprehension category over it is a [`compcat::Model`]; two are provided
//! in [`models`]. [`bang`] builds the split replacement `C_!`, whose types
//! are local universes with a name map, and [`lift`] equips it with strictly
//! stable logical structure from weakly stable structure on the model.
//! [`mltt`] interprets a small dependent type theory into either.

pub mod bang;
pub mod compcat;
pub mod finval;
pub mod lift;
pub mod mltt;
pub mod models;
pub mod report;
pub mod universe;

pub use finval::{FinError, FinFun, FinSet, Val};
pub use report::{Bounds, Report};
