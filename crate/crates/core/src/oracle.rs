//! Brute-force ground truth: exact minimum distance, rank, and exhaustive
//! erasure-pattern sweeps.

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::code::EvaluationCode;
use crate::gf::FieldElement;
use crate::linalg;
use crate::recovery::{peel_level, solve_erasures_ml, ErasureWord, HierarchyStructure, Scope};
use crate::rng::SplitMix64;

pub const DEFAULT_DISTANCE_BUDGET: u64 = 2_000_000;
pub const MAX_PATTERNS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{q}^{k} codewords exceed the budget of {budget}")]
    BudgetExceeded { q: u32, k: usize, budget: u64 },
    #[error("code has dimension 0")]
    Degenerate,
    #[error("{count} erasure patterns exceed the limit of {limit}")]
    TooManyPatterns { count: u64, limit: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistanceResult {
    pub d: usize,
    /// Message (over the generator rows) of a minimum-weight codeword.
    pub witness: Vec<FieldElement>,
    /// Nonzero codewords examined.
    pub enumerated: u64,
}

pub fn dimension_rank(code: &EvaluationCode) -> usize {
    linalg::rank(&code.field, &code.generator)
}

/// Exact minimum distance by enumerating every nonzero codeword.
///
/// Codewords are walked with a base-`p` counter over the prime-field digits
/// of the message, so each step adds one precomputed vector.
pub fn min_distance_bruteforce(code: &EvaluationCode, budget: u64) -> Result<DistanceResult, OracleError> {
    let field = &code.field;
    let mut rows = code.generator.clone();
    let k = linalg::row_reduce(field, &mut rows).len();
    rows.truncate(k);
    if k == 0 {
        return Err(OracleError::Degenerate);
    }
    let q = field.q();
    let total = (q as u64).checked_pow(k as u32).filter(|&t| t <= budget);
    let Some(total) = total else {
        return Err(OracleError::BudgetExceeded { q, k, budget });
    };
    let (p, h) = (field.p(), field.h() as usize);
    // atoms[i * h + e] = x^e * rows[i]
    let atoms: Vec<Vec<FieldElement>> = rows
        .iter()
        .flat_map(|row| {
            (0..h).map(move |e| {
                let scale = FieldElement(p.pow(e as u32));
                row.iter().map(|&x| field.mul(scale, x)).collect()
            })
        })
        .collect();
    let mut digits = vec![0u32; atoms.len()];
    let mut word = vec![FieldElement::ZERO; code.n];
    let mut best: Option<(usize, Vec<u32>)> = None;
    for _ in 1..total {
        for (pos, d) in digits.iter_mut().enumerate() {
            for (w, &a) in word.iter_mut().zip(&atoms[pos]) {
                *w = field.add(*w, a);
            }
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
        let weight = word.iter().filter(|x| !x.is_zero()).count();
        if best.as_ref().is_none_or(|(b, _)| weight < *b) {
            best = Some((weight, digits.clone()));
        }
    }
    let (d, digits) = best.expect("k >= 1 gives a nonzero codeword");
    let coeffs: Vec<FieldElement> =
        digits.chunks(h).map(|ds| FieldElement(ds.iter().rev().fold(0, |acc, &x| acc * p + x))).collect();
    let codeword = linalg::vec_mat(field, &coeffs, &rows);
    let witness = linalg::solve_left(field, &code.generator, &codeword).expect("codeword lies in the row space");
    Ok(DistanceResult { d, witness, enumerated: total - 1 })
}

/// Decoder used by [`exhaustive_erasure_check`].
#[derive(Debug, Clone, Copy)]
pub enum Decoder<'a> {
    /// Peeling at `level` inside the support of `owner`.
    Peeling {
        structure: &'a HierarchyStructure,
        level: usize,
        owner: usize,
    },
    Ml,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErasureCheck {
    pub patterns: u64,
    /// First pattern the decoder failed on.
    pub counterexample: Option<Vec<usize>>,
}

impl ErasureCheck {
    pub fn pass(&self) -> bool {
        self.counterexample.is_none()
    }
}

pub fn pattern_count(support: usize, max_weight: usize) -> u64 {
    (1..=max_weight.min(support)).map(|w| crate::rm::binomial(support as u64, w as u64)).sum()
}

/// Runs `decoder` on every erasure pattern of weight `1..=max_weight` inside
/// `support`, applied to one seeded random codeword.
pub fn exhaustive_erasure_check(
    code: &EvaluationCode,
    support: &[usize],
    max_weight: usize,
    decoder: Decoder<'_>,
    seed: u64,
) -> Result<ErasureCheck, OracleError> {
    let count = pattern_count(support.len(), max_weight);
    if count > MAX_PATTERNS {
        return Err(OracleError::TooManyPatterns { count, limit: MAX_PATTERNS });
    }
    let mut rng = SplitMix64::new(seed);
    let q = code.field.q() as u64;
    let msg: Vec<FieldElement> = (0..code.message_len()).map(|_| FieldElement(rng.below(q) as u32)).collect();
    let codeword = code.encode(&msg);
    for w in 1..=max_weight.min(support.len()) {
        for pattern in support.iter().copied().combinations(w) {
            let word = ErasureWord::new(&codeword, &pattern);
            let ok = match decoder {
                Decoder::Ml => solve_erasures_ml(code, &word).is_some_and(|x| x.values == codeword),
                Decoder::Peeling { structure, level, owner } => {
                    let mut word = word;
                    let rep =
                        peel_level(&code.field, &mut word, structure, level, Scope { owner: Some(owner), avoid: None });
                    rep.success && word.values == codeword
                }
            };
            if !ok {
                return Ok(ErasureCheck { patterns: count, counterexample: Some(pattern) });
            }
        }
    }
    Ok(ErasureCheck { patterns: count, counterexample: None })
}
