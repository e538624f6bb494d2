//! Seeded erasure experiments.
//!
//! Trial `i` of a run with seed `s` draws everything from
//! `SplitMix64::derive(s, i)`: first the message symbols (`below(q)` each),
//! then the erasure pattern. Results are therefore reproducible bit for bit.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::code::EvaluationCode;
use crate::gf::FieldElement;
use crate::recovery::{
    hierarchical_recover, solve_erasures_ml, ErasureWord, HierarchyStructure, RecoveryError, Target,
};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("at least one trial is required")]
    NoTrials,
    #[error("erasure probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error("weight {w} exceeds code length {n}")]
    WeightTooLarge { w: usize, n: usize },
    #[error("level {level} is outside 1..={depth}")]
    BadLevel { level: usize, depth: usize },
    #[error("cannot parse erasure model `{0}` (expected iid:<p>, fixed:<w> or burst:<level>+<extra>)")]
    BadModel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ErasureModel {
    /// Each position erased independently with probability `p`.
    Iid { p: f64 },
    /// Exactly `w` distinct uniform positions.
    FixedWeight { w: usize },
    /// A whole repair group of `level` through a uniform position, plus
    /// `extra` further uniform positions.
    GroupBurst { level: usize, extra: usize },
}

impl fmt::Display for ErasureModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErasureModel::Iid { p } => write!(f, "iid:{p}"),
            ErasureModel::FixedWeight { w } => write!(f, "fixed:{w}"),
            ErasureModel::GroupBurst { level, extra } => write!(f, "burst:{level}+{extra}"),
        }
    }
}

impl FromStr for ErasureModel {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, SimError> {
        let bad = || SimError::BadModel(s.to_string());
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "iid" => Ok(ErasureModel::Iid { p: arg.parse().map_err(|_| bad())? }),
            "fixed" => Ok(ErasureModel::FixedWeight { w: arg.parse().map_err(|_| bad())? }),
            "burst" => {
                let (level, extra) = arg.split_once('+').unwrap_or((arg, "0"));
                Ok(ErasureModel::GroupBurst {
                    level: level.parse().map_err(|_| bad())?,
                    extra: extra.parse().map_err(|_| bad())?,
                })
            }
            _ => Err(bad()),
        }
    }
}

impl ErasureModel {
    pub fn validate(&self, n: usize, depth: usize) -> Result<(), SimError> {
        match *self {
            ErasureModel::Iid { p } if !(0.0..=1.0).contains(&p) => Err(SimError::BadProbability(p)),
            ErasureModel::FixedWeight { w } if w > n => Err(SimError::WeightTooLarge { w, n }),
            ErasureModel::GroupBurst { level, .. } if level == 0 || level > depth => {
                Err(SimError::BadLevel { level, depth })
            }
            ErasureModel::GroupBurst { extra, .. } if extra > n => Err(SimError::WeightTooLarge { w: extra, n }),
            _ => Ok(()),
        }
    }

    /// Draws a sorted erasure pattern.
    pub fn sample(&self, rng: &mut SplitMix64, structure: &HierarchyStructure) -> Vec<usize> {
        let n = structure.n;
        let mut out = match *self {
            ErasureModel::Iid { p } => (0..n).filter(|_| rng.next_f64() < p).collect(),
            ErasureModel::FixedWeight { w } => rng.sample_distinct(n, w),
            ErasureModel::GroupBurst { level, extra } => {
                let anchor = rng.below(n as u64) as usize;
                let groups = structure.groups_through(anchor, level);
                let g = groups[rng.below(groups.len() as u64) as usize];
                let mut erased = g.members.clone();
                let rest: Vec<usize> = (0..n).filter(|x| !g.members.contains(x)).collect();
                erased.extend(rng.sample_distinct(rest.len(), extra).into_iter().map(|i| rest[i]));
                erased
            }
        };
        out.sort_unstable();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub model: ErasureModel,
    pub trials: u64,
    pub seed: u64,
    /// Allow the global solve after peeling.
    pub fallback: bool,
    /// Check every full peeling recovery against the global solve.
    pub cross_check: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialStats {
    pub code: String,
    pub model: String,
    pub trials: u64,
    pub seed: u64,
    pub fallback: bool,
    pub successes: u64,
    pub failures: u64,
    /// Recovered symbols that differ from the transmitted codeword.
    pub mismatches: u64,
    /// Full peeling recoveries the global solve could not reproduce.
    pub ml_disagreements: u64,
    pub erasures: u64,
    /// Symbols recovered per level; key 0 is the global solve.
    pub level_recoveries: BTreeMap<usize, u64>,
    pub symbols_accessed: u64,
    pub max_symbols_accessed: u64,
    /// Trials by number of erasures left unrecovered.
    pub residual_histogram: BTreeMap<usize, u64>,
}

impl TrialStats {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn mean_symbols_accessed(&self) -> f64 {
        self.symbols_accessed as f64 / self.trials as f64
    }

    /// Line-oriented report; every input is echoed.
    pub fn to_text(&self) -> String {
        let mut s = String::from("hlrc-sim 1\n");
        let mut kv = |k: &str, v: String| writeln!(s, "{k} {v}").unwrap();
        kv("code", self.code.clone());
        kv("model", self.model.clone());
        kv("trials", self.trials.to_string());
        kv("seed", self.seed.to_string());
        kv("fallback", self.fallback.to_string());
        kv("successes", self.successes.to_string());
        kv("failures", self.failures.to_string());
        kv("success-rate", format!("{:.6}", self.success_rate()));
        kv("mismatches", self.mismatches.to_string());
        kv("ml-disagreements", self.ml_disagreements.to_string());
        kv("erasures", self.erasures.to_string());
        for (level, count) in &self.level_recoveries {
            kv("recovered-at-level", format!("{level} {count}"));
        }
        kv("symbols-accessed", self.symbols_accessed.to_string());
        kv("mean-symbols-accessed", format!("{:.6}", self.mean_symbols_accessed()));
        kv("max-symbols-accessed", self.max_symbols_accessed.to_string());
        for (residual, count) in &self.residual_histogram {
            kv("residual", format!("{residual} {count}"));
        }
        s
    }
}

pub fn random_codeword(code: &EvaluationCode, rng: &mut SplitMix64) -> Vec<FieldElement> {
    let q = code.field.q() as u64;
    let msg: Vec<FieldElement> = (0..code.message_len()).map(|_| FieldElement(rng.below(q) as u32)).collect();
    code.encode(&msg)
}

pub fn run_trials(
    code: &EvaluationCode,
    structure: &HierarchyStructure,
    config: &SimConfig,
) -> Result<TrialStats, SimError> {
    if config.trials == 0 {
        return Err(SimError::NoTrials);
    }
    config.model.validate(code.n, structure.depth())?;
    let mut stats = TrialStats {
        code: code.family_name(),
        model: config.model.to_string(),
        trials: config.trials,
        seed: config.seed,
        fallback: config.fallback,
        successes: 0,
        failures: 0,
        mismatches: 0,
        ml_disagreements: 0,
        erasures: 0,
        level_recoveries: BTreeMap::new(),
        symbols_accessed: 0,
        max_symbols_accessed: 0,
        residual_histogram: BTreeMap::new(),
    };
    for trial in 0..config.trials {
        let mut rng = SplitMix64::derive(config.seed, trial);
        let codeword = random_codeword(code, &mut rng);
        let pattern = config.model.sample(&mut rng, structure);
        let word = ErasureWord::new(&codeword, &pattern);
        stats.erasures += pattern.len() as u64;
        let (out, report) = match hierarchical_recover(code, &word, structure, Target::All, config.fallback) {
            Ok(x) => x,
            Err(RecoveryError::Unrecoverable { report, partial }) => (*partial, *report),
            Err(e) => unreachable!("recovery on a validated structure failed: {e}"),
        };
        let residual = out.erasure_count();
        for e in &report.events {
            *stats.level_recoveries.entry(e.level).or_default() += e.recovered.len() as u64;
        }
        if report.success {
            let wrong = (0..code.n).filter(|&i| out.values[i] != codeword[i]).count();
            stats.mismatches += wrong as u64;
        } else {
            // Only positions actually refilled can be compared.
            let wrong = report
                .events
                .iter()
                .flat_map(|e| &e.recovered)
                .filter(|&&i| !out.mask[i] && out.values[i] != codeword[i])
                .count();
            stats.mismatches += wrong as u64;
        }
        if config.cross_check && report.success && report.events.iter().all(|e| e.level > 0) {
            match solve_erasures_ml(code, &word) {
                Some(ml) if ml.values == out.values => {}
                _ => stats.ml_disagreements += 1,
            }
        }
        if report.success {
            stats.successes += 1;
        } else {
            stats.failures += 1;
        }
        stats.symbols_accessed += report.symbols_accessed as u64;
        stats.max_symbols_accessed = stats.max_symbols_accessed.max(report.symbols_accessed as u64);
        *stats.residual_histogram.entry(residual).or_default() += 1;
    }
    Ok(stats)
}
