//! Runs the guide's code snippets as doc-tests. mdbook itself cannot link
//! against workspace crates.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/coefficients.md")]
pub mod coefficients {}

#[doc = include_str!("../../../book/src/primes.md")]
pub mod primes {}

#[doc = include_str!("../../../book/src/products.md")]
pub mod products {}

#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
