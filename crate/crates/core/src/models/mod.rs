//! Concrete comprehension categories over finite sets.

pub mod elim;
pub mod fam;
pub mod fixtures;
pub mod pullback;
pub mod seal;

pub use fam::FamModel;
pub use pullback::PullbackModel;

use crate::compcat::Model;

/// Looks a model up by its command-line name.
pub fn by_name(name: &str) -> Option<Box<dyn Model>> {
    match name {
        "fam" => Some(Box::new(FamModel)),
        "pullback" => Some(Box::new(PullbackModel)),
        _ => None,
    }
}
