//! Corpus preparation and synthetic data.
//!
//! - [`filter`]: sentence selection filters and tokenization
//! - [`entropy`]: ranking by byte-model entropy
//! - [`strategy`]: abbreviation strategy classifier and generators
//! - [`abbreviate`]: sampling abbreviated sentences from a strategy mixture
//! - [`toy`]: a template grammar for small end-to-end experiments

pub mod abbreviate;
pub mod entropy;
pub mod filter;
pub mod strategy;
pub mod toy;

pub use abbreviate::{abbreviate, deletion_histogram, sentence_seed, AbbrevPolicy, Abbreviation};
pub use entropy::{below_median, entropy_rank};
pub use filter::{filter_sentences, tokenize, FilterConfig};
pub use strategy::{classify_strategy, StrategyLabel};
pub use toy::toy_corpus;
