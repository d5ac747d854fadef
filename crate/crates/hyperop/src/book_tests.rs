// Compiles every code snippet of the guide as a doc-test, keeping the book
// and the library in sync.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}
#[doc = include_str!("../../../book/src/arithmetic.md")]
mod arithmetic {}
#[doc = include_str!("../../../book/src/modules.md")]
mod modules {}
#[doc = include_str!("../../../book/src/operators.md")]
mod operators {}
#[doc = include_str!("../../../book/src/spectra.md")]
mod spectra {}
#[doc = include_str!("../../../book/src/calculus.md")]
mod calculus {}
#[doc = include_str!("../../../book/src/projections.md")]
mod projections {}
#[doc = include_str!("../../../book/src/states.md")]
mod states {}
#[doc = include_str!("../../../book/src/cli.md")]
mod cli {}
