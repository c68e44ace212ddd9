// mdbook cannot run listings that depend on a workspace crate, so each
// chapter is pulled in as a module doc and checked by `cargo test --doc`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/tape.md")]
pub mod tape {}
#[doc = include_str!("../../../book/src/matching-size.md")]
pub mod matching_size {}
#[doc = include_str!("../../../book/src/matchings.md")]
pub mod matchings {}
#[doc = include_str!("../../../book/src/mixed-rank.md")]
pub mod mixed_rank {}
#[doc = include_str!("../../../book/src/edmonds.md")]
pub mod edmonds {}
#[doc = include_str!("../../../book/src/parameters.md")]
pub mod parameters {}
#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
