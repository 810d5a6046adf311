//! Multidimensional paperfolding crease patterns.
//!
//! The crate builds the `d`-dimensional paperfolding structures `S_d(n)` in
//! two independent ways (the folding recursion and a primitive block
//! substitution on semi-cube tiles), checks that they agree, and computes
//! the invariants that the substitution makes accessible: primitivity, a
//! Dekking coincidence, pattern complexity and the Čech cohomology of the
//! hull for `d ≤ 2`.
//!
//! ```
//! use paperfold::crease::generate_recursive;
//! use paperfold::substitution::equivalence_check;
//!
//! let s = generate_recursive(1, 3)?;
//! let word: String = s.iter().map(|(_, sign)| sign.symbol()).collect();
//! assert_eq!(word, "--++-++");
//! assert!(equivalence_check(2, 3)?.is_equivalent());
//! # Ok::<(), paperfold::Error>(())
//! ```

pub mod cli;
pub mod cohomology;
pub mod complexity;
pub mod crease;
mod error;
pub mod linalg;
pub mod render;
pub mod spectral;
pub mod substitution;

pub use error::{Error, Result};

/// The guide's chapters, compiled so their snippets run as doctests.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/creases.md")]
    mod creases {}
    #[doc = include_str!("../../../book/src/substitution.md")]
    mod substitution {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/complexity.md")]
    mod complexity {}
    #[doc = include_str!("../../../book/src/cohomology.md")]
    mod cohomology {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
