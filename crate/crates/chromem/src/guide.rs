//! The narrative guide lives under `book/` as an mdbook; including its
//! chapters here compiles every Rust snippet as a doc-test, so the guide
//! cannot drift from the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/automata.md")]
pub mod automata {}

#[doc = include_str!("../../../book/src/preorder.md")]
pub mod preorder {}

#[doc = include_str!("../../../book/src/memory.md")]
pub mod memory {}

#[doc = include_str!("../../../book/src/synthesis.md")]
pub mod synthesis {}

#[doc = include_str!("../../../book/src/games.md")]
pub mod games {}

#[doc = include_str!("../../../book/src/hardness.md")]
pub mod hardness {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
