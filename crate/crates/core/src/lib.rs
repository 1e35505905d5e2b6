//! Truncated q-series over ℤ and ℤ/Mℤ, the named products and theta
//! functions built on them, and a verifier for congruences of
//! (j,k)-regular overpartitions.
//!
//! ```
//! use ovp_core::{euler_f, Ring, TruncatedSeries};
//!
//! let p = euler_f(1, 10).inverse().unwrap();
//! let want = TruncatedSeries::from_i64s(Ring::Exact, &[1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
//! assert_eq!(p, want);
//! ```

pub mod arith;
pub mod error;
pub mod harness;
pub mod identities;
pub mod partitions;
pub mod products;
pub mod series;

pub use error::{Error, Result};
pub use harness::{Catalog, CongruenceClaim, Harness, HarnessConfig, Params, Verdict, VerificationReport};
pub use identities::{verify_identity, verify_p_dissection, IdentityCheck, IdentityEntry};
pub use partitions::{enumerate_pjk, series_pjk, series_pjk_mod, RegularOverpartitionSpec};
pub use products::{
    eta_quotient_series, eta_quotient_series_mod, euler_f, theta, EtaQuotient, EtaTerm, Sign, ThetaSpec,
};
pub use series::{Ring, TruncatedSeries};
