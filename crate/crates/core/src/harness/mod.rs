//! Machine-checkable congruence claims for `p̄_{j,k}(n)` and the sweep that
//! verifies them.

pub mod catalog;
pub mod check;
pub mod expr;
pub mod report;

pub use crate::arith::legendre;
pub use catalog::{ArgumentMap, Catalog, Category, CongruenceClaim, PrimeFilter, Progression, Residues};
pub use check::{reference_verdict, required_order, Harness, HarnessConfig};
pub use expr::{Expr, Var};
pub use report::{Params, Summary, Verdict, VerificationReport, TABLE_HEADER};
