use alloc::vec::Vec;

use crate::distribution::Distribution;
use crate::math::compensated_sum;

/// Per-symbol code lengths (query counts) and the expected length of a
/// coder's output, in `D`-ary digits.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeReport {
    pub arity: u32,
    pub per_symbol_lengths: Vec<u32>,
    pub expected_length: f64,
    pub entropy_base_d: f64,
    /// Codewords as answer-digit sequences, when the coder produces them.
    pub codewords: Option<Vec<Vec<u32>>>,
}

impl CodeReport {
    pub fn from_lengths(dist: &Distribution, arity: u32, lengths: Vec<u32>) -> Self {
        let expected_length = compensated_sum(
            lengths
                .iter()
                .zip(dist.probs())
                .map(|(&l, &p)| p * f64::from(l)),
        );
        Self {
            arity,
            per_symbol_lengths: lengths,
            expected_length,
            entropy_base_d: dist.entropy(f64::from(arity)),
            codewords: None,
        }
    }

    pub fn with_codewords(mut self, codewords: Vec<Vec<u32>>) -> Self {
        self.codewords = Some(codewords);
        self
    }

    /// `sum_i D^(-l_i)`.
    pub fn kraft_sum(&self) -> f64 {
        let d = f64::from(self.arity);
        compensated_sum(
            self.per_symbol_lengths
                .iter()
                .map(|&l| libm::pow(d, -f64::from(l))),
        )
    }
}
