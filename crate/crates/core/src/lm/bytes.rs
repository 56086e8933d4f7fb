use super::{NGramModel, NGramTrainer};
use crate::error::{Error, Result};

/// Symbol spelling for one byte in a byte-level model.
pub fn byte_symbol(b: u8) -> String {
    format!("{b:02x}")
}

fn byte_symbols(text: &str) -> Vec<String> {
    text.bytes().map(byte_symbol).collect()
}

/// Train a byte-level model over sentences. All 256 byte values are in the
/// vocabulary.
pub fn train_byte_lm<S: AsRef<str>>(sentences: &[S], order: usize) -> Result<NGramModel> {
    NGramTrainer::new(order)
        .vocab((0..=255u8).map(byte_symbol))
        .train(sentences.iter().map(|s| byte_symbols(s.as_ref())))
}

/// Bits per byte of `sentence` under a byte-level model: the negative log2
/// probability of its bytes and the end symbol, divided by its byte length.
pub fn per_char_entropy(model: &NGramModel, sentence: &str) -> Result<f64> {
    if sentence.is_empty() {
        return Err(Error::EmptySentence);
    }
    let lp = model.sequence_ln_prob(&byte_symbols(sentence))?;
    Ok(-lp / std::f64::consts::LN_2 / sentence.len() as f64)
}
