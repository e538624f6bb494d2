//! Word and message files.
//!
//! A word file is
//!
//! ```text
//! hlrc-word 1
//! n 6
//! values 3 0 * 1 * 2
//! ```
//!
//! where `*` marks an erased position. A message file is a whitespace
//! separated list of element indices; lines starting with `#` are ignored.

use anyhow::{bail, ensure, Context, Result};

use hlrc::gf::{FieldElement, FieldSpec};
use hlrc::recovery::ErasureWord;

pub fn write_word(word: &ErasureWord) -> String {
    let values: Vec<String> = (0..word.len())
        .map(|i| match word.get(i) {
            Some(v) => v.to_string(),
            None => "*".to_string(),
        })
        .collect();
    format!("hlrc-word 1\nn {}\nvalues {}\n", word.len(), values.join(" "))
}

pub fn read_word(text: &str, field: &FieldSpec) -> Result<ErasureWord> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    ensure!(lines.next() == Some("hlrc-word 1"), "missing `hlrc-word 1` header");
    let n: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("n "))
        .context("expected `n <length>`")?
        .trim()
        .parse()
        .context("bad length")?;
    let values = lines.next().and_then(|l| l.strip_prefix("values")).context("expected `values ...`")?;
    let mut word = ErasureWord { values: Vec::with_capacity(n), mask: Vec::with_capacity(n) };
    for tok in values.split_whitespace() {
        if tok == "*" {
            word.values.push(FieldElement::ZERO);
            word.mask.push(true);
        } else {
            let idx: u32 = tok.parse().with_context(|| format!("bad symbol `{tok}`"))?;
            word.values.push(field.element(idx)?);
            word.mask.push(false);
        }
    }
    ensure!(word.len() == n, "declared length {n} but found {} symbols", word.len());
    if lines.next().is_some() {
        bail!("trailing content after `values`");
    }
    Ok(word)
}

pub fn read_message(text: &str, field: &FieldSpec, k: usize) -> Result<Vec<FieldElement>> {
    let msg: Vec<FieldElement> = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace)
        .map(|tok| {
            let idx: u32 = tok.parse().with_context(|| format!("bad symbol `{tok}`"))?;
            Ok(field.element(idx)?)
        })
        .collect::<Result<_>>()?;
    ensure!(msg.len() == k, "message has {} symbols, code expects {k}", msg.len());
    Ok(msg)
}

/// Parses `3,5,9` (or whitespace separated) into sorted, distinct positions.
pub fn parse_pattern(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().with_context(|| format!("bad position `{t}`")))
        .collect::<Result<_>>()?;
    out.sort_unstable();
    out.dedup();
    if let Some(&bad) = out.iter().find(|&&i| i >= n) {
        bail!("position {bad} is outside 0..{n}");
    }
    Ok(out)
}
