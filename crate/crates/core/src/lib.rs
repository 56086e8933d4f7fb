//! Noisy-channel expansion of ad hoc, deletion-based abbreviations.
//!
//! An abbreviated sentence is expanded token by token: a channel model
//! proposes in-vocabulary supersequences of each token with a cost, and a
//! word-level language model picks the most fluent path through the
//! resulting confusion network.
//!
//! The crate is organized bottom-up:
//!
//! - [`text`] and [`lexicon`]: tokens, sentence pairs, supersequence lookup
//! - [`align`]: EM-trained monotonic character alignment
//! - [`lm`]: Kneser-Ney n-gram models over arbitrary symbols
//! - [`channel`]: the pair-LM and subsequence channel models
//! - [`decode`]: confusion networks, Viterbi and beam search
//! - [`eval`]: WER/OER/UER/IER scoring
//! - [`corpus`]: sentence filters, entropy ranking, synthetic abbreviation
//! - [`pipeline`]: end-to-end training and expansion

pub mod align;
pub mod channel;
pub mod corpus;
pub mod decode;
mod error;
pub mod eval;
pub mod lexicon;
pub mod lm;
pub mod pipeline;
pub mod text;

pub use align::{Alignment, AlignmentModel, EmConfig, PairSymbol};
pub use channel::{Candidate, CandidateSet, Channel, PairChannelModel};
pub use channel::subseq::{ExpansionMemory, InsertionCostModel, SubseqConfig};
pub use decode::{ConfusionNetwork, DecodeResult, SequentialScorer};
pub use error::{Error, Result};
pub use eval::EvalReport;
pub use lexicon::Lexicon;
pub use lm::{LmState, NGramModel, NGramTrainer};
pub use text::{is_subsequence, Sentence, SentencePair, Token};
