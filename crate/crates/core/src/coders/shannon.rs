//! D-ary Shannon coding: `l_i = ceil(log_D(1/p_i))` with canonical codewords.

use alloc::vec::Vec;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::math::shannon_length;
use crate::report::CodeReport;

pub fn shannon_dary(dist: &Distribution, arity: u32) -> Result<CodeReport> {
    if arity < 2 {
        return Err(Error::InvalidArity(arity));
    }
    let lengths: Vec<u32> = dist
        .probs()
        .iter()
        .map(|&p| shannon_length(p, arity))
        .collect();
    let report = CodeReport::from_lengths(dist, arity, lengths);
    let sum = report.kraft_sum();
    if sum > 1.0 + 1e-12 {
        return Err(Error::KraftViolation { sum });
    }
    let codewords = canonical_codewords(&report.per_symbol_lengths, arity)?;
    Ok(report.with_codewords(codewords))
}

/// Assigns codewords by counting in base `arity` over the symbols ordered
/// by (length, index).
pub fn canonical_codewords(lengths: &[u32], arity: u32) -> Result<Vec<Vec<u32>>> {
    let mut order: Vec<usize> = (0..lengths.len()).collect();
    order.sort_by_key(|&i| (lengths[i], i));
    let mut out = alloc::vec![Vec::new(); lengths.len()];
    let mut code: Option<Vec<u32>> = None;
    for i in order {
        let len = lengths[i] as usize;
        let mut next = match code {
            None => Vec::new(),
            Some(mut prev) => {
                // increment prev as a base-D number
                let mut pos = prev.len();
                loop {
                    if pos == 0 {
                        return Err(Error::KraftViolation { sum: f64::INFINITY });
                    }
                    pos -= 1;
                    if prev[pos] + 1 < arity {
                        prev[pos] += 1;
                        break;
                    }
                    prev[pos] = 0;
                }
                prev
            }
        };
        next.resize(len, 0);
        out[i] = next.clone();
        code = Some(next);
    }
    Ok(out)
}
