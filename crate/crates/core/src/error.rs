use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `m(q, e)` and `ord_e(q)` only exist for coprime pairs.
    #[error("q = {q} and e = {e} must be coprime (gcd = {gcd})")]
    NotCoprime { q: u64, e: u64, gcd: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),

    #[error("no level k <= {cap} reached m = {target} for p = {p}, n = {n}")]
    NotFoundWithinCap {
        p: u64,
        n: u64,
        target: u64,
        cap: u32,
    },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("search exceeded its memory budget at e = {e} ({states} stored states)")]
    SearchTooLarge { e: u64, states: usize },

    #[error("store error: {0}")]
    Store(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
