pub mod conjugacy;
pub mod error;
pub mod inequalities;
pub mod map;
pub mod periodic;
pub mod renorm;
pub mod sampling;
pub mod scalar;
pub mod suites;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/maps.md")]
    pub struct Maps;
    #[doc = include_str!("../../../book/src/periodic.md")]
    pub struct Periodic;
    #[doc = include_str!("../../../book/src/renormalization.md")]
    pub struct Renormalization;
    #[doc = include_str!("../../../book/src/expansion.md")]
    pub struct Expansion;
    #[doc = include_str!("../../../book/src/conjugacy.md")]
    pub struct Conjugacy;
    #[doc = include_str!("../../../book/src/verification.md")]
    pub struct Verification;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
