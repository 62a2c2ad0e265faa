//! The book chapters, compiled so every code listing runs under
//! `cargo test --doc`. Each chapter of `book/src` becomes one module here;
//! keeping the listings green keeps the book in sync with the library.

#[doc = include_str!("../../../book/src/language.md")]
pub mod language {}
