use std::fmt;

use serde::{Deserialize, Serialize};

/// Finite code over the alphabet of maps; letters are stored zero-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: &[usize]) -> Self {
        Word(letters.to_vec())
    }

    /// Builds a word from one-based letters as written in reports.
    pub fn from_one_based(letters: &[usize]) -> Self {
        Word(letters.iter().map(|l| l - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn parent(&self) -> Option<Word> {
        if self.0.is_empty() {
            None
        } else {
            Some(Word(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn child(&self, letter: usize) -> Word {
        let mut v = self.0.clone();
        v.push(letter);
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Product of the ratios along the word; 1 for the empty word.
    pub fn ratio(&self, ratios: &[f64]) -> f64 {
        self.0.iter().map(|&l| ratios[l]).product()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{}", l + 1)?;
        }
        Ok(())
    }
}

/// The stopping family `Σ(ε)`: words whose cylinders are comparable to `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordSet {
    pub eps: f64,
    pub words: Vec<Word>,
    /// `r_ω` for each word, in the same order.
    pub ratios: Vec<f64>,
}

impl WordSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `Σ r_ω^D`.
    pub fn mass(&self, dimension: f64) -> f64 {
        self.ratios.iter().map(|r| r.powf(dimension)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, f64)> {
        self.words.iter().zip(self.ratios.iter().copied())
    }
}
