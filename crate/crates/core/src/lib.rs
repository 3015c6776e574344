//! Minimal vanishing sums of powers of an integer.
//!
//! For coprime positive integers `q` and `e`, `m(q, e)` is the least `t`
//! such that some sum `q^{a_1} + … + q^{a_t}` is divisible by `e`. This
//! crate computes it exactly (with witnesses), classifies the pairs where it
//! is large, studies the prime-power towers `m(q, p^k)`, derives the finite
//! exceptional sets coming from cyclotomic polynomials, and runs sweeps that
//! check the known bounds and tables against brute force.
//!
//! ```
//! let r = msum::m(4, 7).unwrap();
//! assert_eq!(r.value, 3);
//! assert_eq!(r.witness, vec![0, 1, 2]); // 4^0 + 4^1 + 4^2 = 21
//! ```

pub mod campaign;
pub mod classification;
pub mod cyclotomic;
pub mod engine;
pub mod error;
pub mod modular;
pub mod oracle;
pub mod prime_power;
pub mod render;

pub use engine::{
    ceil_bound, is_m_two, m, m_of_subgroup, two_power_m, verify_witness, MResult, MsumCache,
    SubgroupKey,
};
pub use error::{Error, Result};
pub use modular::{mul_order, unit_subgroup, PowerSumInstance, UnitSubgroup};
