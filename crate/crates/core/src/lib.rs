//! Counterfactual word orders for dependency-parsed text.
//!
//! The crate swaps Greenbergian correlation pairs (`<V, O>`, `<Adp, NP>`,
//! `<Cop, Pred>`, `<Aux, V>`, `<Noun, Genitive>`) in Universal Dependencies
//! trees, and carries the bookkeeping around it: preprocessing, swap
//! statistics, minimal pairs, annotation sampling and validation scoring.
//! Everything here is `no_std` with `alloc`; file formats and the command
//! line live in the `wordorder` crate.
//!
//! ```
//! use wordorder_core::policy::EnglishPolicy;
//! use wordorder_core::sentence::{Head, Sentence, Token, TokenId};
//! use wordorder_core::swap::{swap_sentence, CorrelationPair};
//!
//! let s = Sentence::new(vec![
//!     Token::new(1, "we", "PRON", Head::Token(TokenId(2)), "nsubj"),
//!     Token::new(2, "like", "VERB", Head::Root, "root"),
//!     Token::new(3, "cats", "NOUN", Head::Token(TokenId(2)), "obj"),
//! ]);
//! let (out, records) =
//!     swap_sentence(&s, CorrelationPair::VerbObject, &EnglishPolicy::default()).unwrap();
//! assert_eq!(out.forms(), ["we", "cats", "like"]);
//! assert!(records[0].applied);
//! ```

#![no_std]

extern crate alloc;

pub mod minpairs;
pub mod policy;
pub mod preprocess;
pub mod sample;
pub mod sentence;
pub mod stats;
pub mod swap;
#[cfg(feature = "testgen")]
pub mod testgen;
pub mod tree;
pub mod validation;

pub use sentence::{Head, Sentence, Token, TokenId};
pub use swap::{identify_pairs, swap_sentence, CorrelationPair, Language, SwapPolicy, SwapRecord};
