//! A small dependent type theory with Π, Σ, identity types with Frobenius
//! J, binary sums, unit and empty types, interpreted into split suites.

pub mod check;
pub mod harness;
pub mod interp;
pub mod parse;
pub mod pool;
pub mod syntax;

pub use check::{check, check_ctx, check_subst, check_ty, infer, TypeError};
pub use interp::{Interp, InterpError, SemCtx};
pub use parse::{parse_ctx, parse_file, parse_tm, parse_ty, print_tm, print_ty, Decl, Module, ParseError};
pub use syntax::{subst_tm, subst_ty, Ctx, Name, Subst, Tm, Ty};
