//! Exact and high-precision Plancherel averages of Young diagram statistics.
//!
//! Each quantity can be computed by brute-force enumeration
//! ([`oracle`]), by a binomial-convolution formula ([`convolution`]) and,
//! where one exists, by a holonomic recurrence ([`holonomic`]). The
//! [`asymptotics`] module holds the matching large-`n` expansions.

pub mod asymptotics;
pub mod convolution;
pub mod error;
pub mod exact;
pub mod holonomic;
pub mod oracle;
pub mod partition;
pub mod rsk;

pub use error::{Error, Result};
pub use partition::Partition;
