use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use hlrc::code::{read_code, write_code, CodeFamily, EvaluationCode};
use hlrc::fiber::{self, BoundKind, FiberFamily};
use hlrc::oracle::{self, Decoder, OracleError};
use hlrc::recovery::{default_hierarchy, hierarchical_recover, ErasureWord, HierarchyStructure, RecoveryError, Target};
use hlrc::rm::{self, rm_hierarchy_params};
use hlrc::rng::SplitMix64;
use hlrc::sim::{run_trials, ErasureModel, SimConfig};

use crate::report::{recovery_text, CheckResult, Labeled, LevelRow, ParamsReport, Status, VerifyReport};
use crate::specfile::CodeSpecFile;
use crate::wordfile::{parse_pattern, read_message, read_word, write_word};

#[derive(Debug, Parser)]
#[command(name = "hlrc", version, about = "Hierarchical locally recoverable codes: build, recover, verify, simulate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct CodeSource {
    /// Code specification (TOML).
    #[arg(long, required_unless_present = "code", conflicts_with = "code")]
    pub spec: Option<PathBuf>,
    /// Prebuilt code file.
    #[arg(long)]
    pub code: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print code and hierarchy parameters.
    Params {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build a code and write it in the code file format.
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a message file into a word file.
    Encode {
        #[command(flatten)]
        source: CodeSource,
        #[arg(long)]
        message: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Erase positions of a word, by explicit pattern or seeded model.
    Erase {
        #[command(flatten)]
        source: CodeSource,
        #[arg(long)]
        word: PathBuf,
        /// Comma separated positions.
        #[arg(long, conflicts_with = "model", required_unless_present = "model")]
        pattern: Option<String>,
        /// iid:<p>, fixed:<w> or burst:<level>+<extra>.
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover erasures hierarchically.
    Recover {
        #[command(flatten)]
        source: CodeSource,
        #[arg(long)]
        word: PathBuf,
        /// Recover only this position.
        #[arg(long)]
        target: Option<usize>,
        /// Fall back to a global solve when local recovery stalls.
        #[arg(long)]
        fallback: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the recovery report (stdout by default).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run verification checks.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        /// all, or a comma separated subset of distance, dimension,
        /// hierarchy, embedding, availability.
        #[arg(long, default_value = "all")]
        checks: String,
        /// Codeword budget for the distance oracle.
        #[arg(long, default_value_t = oracle::DEFAULT_DISTANCE_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run seeded erasure experiments.
    Simulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        fallback: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => out.write_all(text.as_bytes()).context("writing output"),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Code and hierarchy from a spec file or a code file (default hierarchy).
fn load(source: &CodeSource) -> Result<(EvaluationCode, Option<CodeSpecFile>)> {
    match (&source.spec, &source.code) {
        (Some(spec), _) => {
            let spec = CodeSpecFile::load(spec)?;
            Ok((spec.build()?, Some(spec)))
        }
        (None, Some(path)) => Ok((read_code(&read(path)?).with_context(|| format!("in {}", path.display()))?, None)),
        (None, None) => bail!("either --spec or --code is required"),
    }
}

fn structure_for(code: &EvaluationCode, spec: Option<&CodeSpecFile>) -> Result<HierarchyStructure> {
    match spec {
        Some(s) => s.structure(code),
        None => Ok(default_hierarchy(code)?),
    }
}

/// Runs a command, writing primary output to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Params { spec, format } => {
            let spec = CodeSpecFile::load(&spec)?;
            let report = params_report(&spec)?;
            let text = match format {
                Format::Text => report.to_text(),
                Format::Json => json(&report),
            };
            emit(out, None, &text)?;
        }
        Command::Build { spec, out: path } => {
            let code = CodeSpecFile::load(&spec)?.build()?;
            emit(out, path.as_deref(), &write_code(&code))?;
        }
        Command::Encode { source, message, out: path } => {
            let (code, _) = load(&source)?;
            let msg = read_message(&read(&message)?, &code.field, code.message_len())?;
            emit(out, path.as_deref(), &write_word(&ErasureWord::new(&code.encode(&msg), &[])))?;
        }
        Command::Erase { source, word, pattern, model, seed, out: path } => {
            let (code, spec) = load(&source)?;
            let mut w = read_word(&read(&word)?, &code.field)?;
            if w.len() != code.n {
                bail!("word has length {}, code has length {}", w.len(), code.n);
            }
            let erased = match (pattern, model) {
                (Some(p), _) => parse_pattern(&p, code.n)?,
                (None, Some(m)) => {
                    let model: ErasureModel = m.parse()?;
                    let structure = structure_for(&code, spec.as_ref())?;
                    model.validate(code.n, structure.depth())?;
                    model.sample(&mut SplitMix64::new(seed), &structure)
                }
                (None, None) => bail!("either --pattern or --model is required"),
            };
            for i in erased {
                w.erase(i);
            }
            emit(out, path.as_deref(), &write_word(&w))?;
        }
        Command::Recover { source, word, target, fallback, out: path, report } => {
            let (code, spec) = load(&source)?;
            let w = read_word(&read(&word)?, &code.field)?;
            if w.len() != code.n {
                bail!("word has length {}, code has length {}", w.len(), code.n);
            }
            if let Some(t) = target.filter(|&t| t >= code.n) {
                bail!("target {t} is outside 0..{}", code.n);
            }
            let structure = structure_for(&code, spec.as_ref())?;
            let target = target.map_or(Target::All, Target::Position);
            let (recovered, rep, code_out) = match hierarchical_recover(&code, &w, &structure, target, fallback) {
                Ok((r, rep)) => {
                    let status = if rep.success { 0 } else { 1 };
                    (r, rep, status)
                }
                Err(RecoveryError::Unrecoverable { report, partial }) => (*partial, *report, 1),
                Err(e) => return Err(e.into()),
            };
            if let Some(p) = &path {
                emit(out, Some(p), &write_word(&recovered))?;
            }
            match (&report, &path) {
                (Some(r), _) => emit(out, Some(r), &recovery_text(&rep))?,
                (None, Some(_)) => emit(out, None, &recovery_text(&rep))?,
                (None, None) => {
                    emit(out, None, &write_word(&recovered))?;
                    emit(out, None, &recovery_text(&rep))?;
                }
            }
            return Ok(code_out);
        }
        Command::Verify { spec, checks, budget, seed, format } => {
            let spec = CodeSpecFile::load(&spec)?;
            let selected = parse_checks(&checks)?;
            let report = verify(&spec, &selected, budget, seed)?;
            let text = match format {
                Format::Text => report.to_text(),
                Format::Json => json(&report),
            };
            emit(out, None, &text)?;
            return Ok(report.exit_code());
        }
        Command::Simulate { spec, model, trials, seed, fallback, format, out: path } => {
            let spec = CodeSpecFile::load(&spec)?;
            let code = spec.build()?;
            let structure = spec.structure(&code)?;
            let model: ErasureModel = model.parse()?;
            let config = SimConfig { model, trials, seed, fallback, cross_check: true };
            let stats = run_trials(&code, &structure, &config)?;
            let text = match format {
                Format::Text => stats.to_text(),
                Format::Json => json(&stats),
            };
            emit(out, path.as_deref(), &text)?;
        }
    }
    Ok(0)
}

pub const ALL_CHECKS: [&str; 5] = ["dimension", "distance", "hierarchy", "embedding", "availability"];

pub fn parse_checks(text: &str) -> Result<Vec<String>> {
    if text == "all" {
        return Ok(ALL_CHECKS.iter().map(|s| s.to_string()).collect());
    }
    let mut out = Vec::new();
    for c in text.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        if !ALL_CHECKS.contains(&c) {
            bail!("unknown check `{c}` (expected one of {})", ALL_CHECKS.join(", "));
        }
        if !out.iter().any(|x: &String| x == c) {
            out.push(c.to_string());
        }
    }
    if out.is_empty() {
        bail!("no checks selected");
    }
    Ok(out)
}

pub fn params_report(spec: &CodeSpecFile) -> Result<ParamsReport> {
    let code = spec.build()?;
    let fr = code.field.record();
    let field = format!(
        "GF({}) p={} h={} modulus={}",
        code.field.q(),
        fr.p,
        fr.h,
        fr.modulus.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    );
    let mut warnings = code.warnings.clone();
    if let Some(rs) = spec.rm_spec()? {
        let (n, k, d) = rs.params();
        let dims = spec.hierarchy().and_then(|h| h.dims.clone());
        let ladder = rm_hierarchy_params(&rs, dims.as_deref())?;
        let q = rs.q() as u64;
        let levels = ladder
            .iter()
            .enumerate()
            .map(|(j, l)| LevelRow {
                level: j + 1,
                dim: Some(l.dim),
                n: l.n,
                s: l.s,
                delta: l.delta,
                t: (q.pow(l.dim as u32) - 1) / (q - 1),
                t_printed: Some((q.pow((rs.m - j) as u32) - 1) / (q - 1)),
            })
            .collect();
        if rs.v + 1 >= rs.field.q() {
            warnings.push(format!("v={} leaves lines without redundancy; local recovery needs v <= q-2", rs.v));
        }
        return Ok(ParamsReport {
            code: code.family_name(),
            field,
            n: Labeled { value: n as i64, label: "formula".into(), lower_bound: false },
            k_formula: k,
            k_rank: code.k,
            d: Labeled { value: d as i64, label: "formula".into(), lower_bound: false },
            localities: Vec::new(),
            levels,
            flags: Vec::new(),
            warnings,
        });
    }
    let fs = code.fiber_spec().context("fiber code expected")?;
    let prm = fiber::fiber_params(fs)?;
    warnings.extend(prm.warnings.iter().cloned());
    let structure = spec.structure(&code)?;
    let levels = structure
        .params()
        .iter()
        .enumerate()
        .map(|(j, l)| LevelRow { level: j + 1, dim: None, n: l.n, s: l.s, delta: l.delta, t: l.t, t_printed: None })
        .collect();
    let exact = matches!(fs.family, FiberFamily::Hermitian { .. });
    Ok(ParamsReport {
        code: code.family_name(),
        field,
        n: Labeled { value: prm.n as i64, label: "enumerated".into(), lower_bound: false },
        k_formula: prm.k,
        k_rank: code.k,
        d: Labeled { value: prm.d_lower, label: prm.bound.label().into(), lower_bound: !exact },
        localities: fs
            .factors
            .iter()
            .zip(prm.localities.iter().zip(&prm.rho))
            .map(|(f, (&r, &rho))| (f.label.clone(), r, rho))
            .collect(),
        levels,
        flags: prm.flags,
        warnings,
    })
}

fn check(name: &str, status: Status, label: &str, detail: String) -> CheckResult {
    CheckResult { name: name.into(), status, label: label.into(), detail }
}

pub fn verify(spec: &CodeSpecFile, checks: &[String], budget: u64, seed: u64) -> Result<VerifyReport> {
    let code = spec.build()?;
    let mut results = Vec::new();
    let structure = match spec.structure(&code) {
        Ok(s) => Some(s),
        Err(e) => {
            if checks.iter().any(|c| c == "hierarchy" || c == "availability") {
                results.push(check("hierarchy.build", Status::Fail, "formula", format!("{e:#}")));
            }
            None
        }
    };
    for c in checks {
        match c.as_str() {
            "dimension" => results.push(check_dimension(&code)),
            "distance" => results.push(check_distance(&code, budget)?),
            "hierarchy" => {
                if let Some(s) = &structure {
                    results.extend(check_hierarchy(&code, s, seed));
                }
            }
            "embedding" => results.push(check_embedding(&code)),
            "availability" => {
                if let Some(s) = &structure {
                    results.extend(check_availability(s));
                }
            }
            other => bail!("unknown check `{other}`"),
        }
    }
    Ok(VerifyReport { code: code.family_name(), checks: results })
}

fn formula_k(code: &EvaluationCode) -> u64 {
    match &code.family {
        CodeFamily::ReedMuller { v, m } => rm::rm_params(code.field.q(), *v, *m).1,
        CodeFamily::Fiber(s) => fiber::dimension_formula(s),
    }
}

fn check_dimension(code: &EvaluationCode) -> CheckResult {
    let rank = oracle::dimension_rank(code);
    let k = formula_k(code);
    let status = if rank as u64 == k { Status::Pass } else { Status::Fail };
    check("dimension", status, "rank-verified", format!("rank={rank} formula={k}"))
}

fn check_distance(code: &EvaluationCode, budget: u64) -> Result<CheckResult> {
    let (target, exact) = match &code.family {
        CodeFamily::ReedMuller { v, m } => (rm::rm_params(code.field.q(), *v, *m).2 as i64, true),
        CodeFamily::Fiber(s) => {
            let p = fiber::fiber_params(s)?;
            (p.d_lower, p.bound == BoundKind::Hermitian)
        }
    };
    Ok(match oracle::min_distance_bruteforce(code, budget) {
        Ok(r) => {
            let ok = if exact { r.d as i64 == target } else { r.d as i64 >= target };
            let rel = if exact { "expected" } else { "bound" };
            let witness: Vec<String> = r.witness.iter().map(|x| x.to_string()).collect();
            check(
                "distance",
                if ok { Status::Pass } else { Status::Fail },
                "oracle-verified",
                format!("d={} {rel}={target} codewords={} witness={}", r.d, r.enumerated, witness.join(",")),
            )
        }
        Err(e @ OracleError::BudgetExceeded { .. }) => check("distance", Status::Skipped, "formula", e.to_string()),
        Err(e) => check("distance", Status::Fail, "oracle-verified", e.to_string()),
    })
}

fn check_hierarchy(code: &EvaluationCode, s: &HierarchyStructure, seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let mut problems: Vec<String> =
        s.nesting_violations().iter().map(|(i, j)| format!("nesting at {i} level {j}")).collect();
    problems.extend(s.group_violations());
    if let (Some(fs), Some(pts)) = (code.fiber_spec(), code.curve_points()) {
        problems.extend(
            fiber::disjointness_violations(pts, fs.t())
                .iter()
                .map(|v| format!("supports of {} and {} meet in direction {}", v.l1, v.l2, v.k)),
        );
        if let Some((i, a, j)) = fiber::union_identity_violation(pts, fs.t()) {
            problems.push(format!("union identity fails at {i} for {a:?} via {j}"));
        }
    }
    let status = if problems.is_empty() { Status::Pass } else { Status::Fail };
    let detail = if problems.is_empty() {
        format!("nesting and disjointness hold for {} positions", s.n)
    } else {
        format!("{} violations, first: {}", problems.len(), problems[0])
    };
    out.push(check("hierarchy.structure", status, "exhaustive", detail));

    for (j, lp) in s.params().iter().enumerate() {
        let level = j + 1;
        let w = lp.delta as usize - 1;
        let name = format!("hierarchy.level{level}");
        let mut owners = Vec::new();
        let mut seen = vec![false; s.n];
        for i in 0..s.n {
            if !seen[i] {
                for &x in s.support(i, level) {
                    seen[x] = true;
                }
                owners.push(i);
            }
        }
        let total: u64 = owners.iter().map(|&o| oracle::pattern_count(s.support(o, level).len(), w)).sum();
        if total > oracle::MAX_PATTERNS {
            out.push(check(
                &name,
                Status::Skipped,
                "exhaustive",
                format!("{total} patterns exceed the limit {}", oracle::MAX_PATTERNS),
            ));
            continue;
        }
        let mut failure = None;
        for &o in &owners {
            let dec = Decoder::Peeling { structure: s, level, owner: o };
            match oracle::exhaustive_erasure_check(code, s.support(o, level), w, dec, seed) {
                Ok(r) if r.pass() => {}
                Ok(r) => {
                    failure = r.counterexample;
                    break;
                }
                Err(e) => {
                    failure = Some(Vec::new());
                    out.push(check(&name, Status::Skipped, "exhaustive", e.to_string()));
                    break;
                }
            }
        }
        match failure {
            None => out.push(check(
                &name,
                Status::Pass,
                "exhaustive",
                format!("all {total} patterns of weight <= {w} in {} supports recovered", owners.len()),
            )),
            Some(p) if !p.is_empty() => {
                out.push(check(&name, Status::Fail, "exhaustive", format!("pattern {p:?} not recovered")))
            }
            Some(_) => {}
        }
    }
    out
}

fn check_embedding(code: &EvaluationCode) -> CheckResult {
    match fiber::verify_rm_embedding(code) {
        None => check("embedding", Status::NotApplicable, "formula", "Reed-Muller codes embed trivially".into()),
        Some(r) => check(
            "embedding",
            if r.pass() { Status::Pass } else { Status::Fail },
            "exhaustive",
            format!(
                "r<={} max-degree={} basis={} injective={} axis-parallel={} subcode-rank={} restriction={}",
                r.degree_bound,
                r.max_degree,
                r.basis_within_bound,
                r.coordinates_injective,
                r.supports_axis_parallel,
                r.subcode_rank.map_or("skipped".to_string(), |b| b.to_string()),
                r.restriction_degree
            ),
        ),
    }
}

fn check_availability(s: &HierarchyStructure) -> Vec<CheckResult> {
    s.params()
        .iter()
        .enumerate()
        .map(|(j, lp)| {
            let level = j + 1;
            let counts: Vec<usize> = (0..s.n).map(|i| s.groups_through(i, level).len()).collect();
            let ok = counts.iter().all(|&c| c as u64 == lp.t);
            let mut detail = format!("groups per position = {} for all {} positions", lp.t, s.n);
            if !ok {
                let bad = counts.iter().position(|&c| c as u64 != lp.t).unwrap();
                detail = format!("position {bad} has {} groups, expected {}", counts[bad], lp.t);
            }
            if let Some(tp) = lp.t_printed {
                detail.push_str(&format!(
                    "; quoted formula gives {tp} [flagged-inconsistency: flat dimension off by one]"
                ));
            }
            check(
                &format!("availability.level{level}"),
                if ok { Status::Pass } else { Status::Fail },
                "exhaustive",
                detail,
            )
        })
        .collect()
}
