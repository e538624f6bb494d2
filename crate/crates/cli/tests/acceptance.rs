//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use hlrc::code::EvaluationCode;
use hlrc::fiber::{
    artin_schreier_spec, build_fiber_code, disjointness_violations, hermitian_spec, union_identity_violation,
    verify_rm_embedding,
};
use hlrc::gf::build_field;
use hlrc::oracle::{dimension_rank, exhaustive_erasure_check, min_distance_bruteforce, Decoder};
use hlrc::recovery::{default_hierarchy, HierarchyStructure};
use hlrc::rm::{rm_build, rm_params, RmSpec};
use hlrc::sim::{run_trials, ErasureModel, SimConfig};
use hlrc_cli::commands::params_report;
use hlrc_cli::specfile::CodeSpecFile;

const LIMIT_1: Duration = Duration::from_secs(30);
const LIMIT_2: Duration = Duration::from_secs(300);
const LIMIT_3: Duration = Duration::from_secs(600);
const LIMIT_4_CONSTRUCTION: Duration = Duration::from_secs(60);
const LIMIT_5: Duration = Duration::from_secs(600);
/// Criterion 2 enumerates codes with q^k up to this many codewords.
const MAX_CODEWORDS_2: u64 = 2_000_000;
const DISTANCE_BUDGET: u64 = 2_000_000;
/// Criterion 4: distance floor for AS(3,1,1,1).
const AS_SMALL_MIN_D: usize = 20;
const TRIALS_9: u64 = 10_000;
const EPSILONS_9: [f64; 2] = [0.05, 0.15];
const SEED_9: u64 = 9;
const SIM_ARGS_10: [&str; 8] = ["--model", "iid:0.15", "--trials", "500", "--seed", "2024", "--format", "text"];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rm(q: u32, v: u32, m: usize) -> EvaluationCode {
    rm_build(&RmSpec::new(build_field(q, 1).unwrap(), v, m).unwrap()).unwrap()
}

fn fixture(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {t:?}, limit {limit:?}"))
    }
}

fn c1() -> Outcome {
    let start = Instant::now();
    let spec = CodeSpecFile::parse("family = \"rm\"\nq = 7\nv = 5\nm = 3\n").map_err(|e| e.to_string())?;
    let report = params_report(&spec).map_err(|e| e.to_string())?;
    let text = report.to_text();
    let code = spec.build().map_err(|e| e.to_string())?;
    let rank = dimension_rank(&code);
    within(start, LIMIT_1, "params")?;
    if !text.contains("parameters [343, 56, 98]") || !text.contains("hierarchy [(49, 21, 14), (7, 6, 2)]") {
        return Err(format!("unexpected report:\n{text}"));
    }
    if report.k_rank != 56 || rank != 56 {
        return Err(format!("rank {rank}, reported {}", report.k_rank));
    }
    Ok(format!("[343, 56, 98] hierarchy [(49,21,14),(7,6,2)] k rank-verified in {:?}", start.elapsed()))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let mut checked = Vec::new();
    for q in [2u32, 3, 5] {
        for m in [2usize, 3] {
            for v in 0..=q.saturating_sub(2) {
                let (_, k, d) = rm_params(q, v, m);
                if (q as f64).powi(k as i32) > MAX_CODEWORDS_2 as f64 {
                    continue;
                }
                let code = rm(q, v, m);
                let r = min_distance_bruteforce(&code, MAX_CODEWORDS_2).map_err(|e| e.to_string())?;
                let expected = (q - v) as u64 * (q as u64).pow(m as u32 - 1);
                if r.d as u64 != expected || d != expected {
                    return Err(format!("RM_{q}({v},{m}): oracle {} formula {expected}", r.d));
                }
                checked.push(format!("RM_{q}({v},{m})={}", r.d));
            }
        }
    }
    within(start, LIMIT_2, "distance sweep")?;
    Ok(format!("{} codes: {}", checked.len(), checked.join(" ")))
}

fn c3() -> Outcome {
    let start = Instant::now();
    let mut out = Vec::new();
    for (q, expected) in [(2u32, (6usize, 2usize, 4usize)), (3, (24, 6, 14))] {
        let code = build_fiber_code(&hermitian_spec(q).unwrap()).map_err(|e| e.to_string())?;
        let d = min_distance_bruteforce(&code, DISTANCE_BUDGET).map_err(|e| e.to_string())?;
        let got = (code.n, dimension_rank(&code), d.d);
        if got != expected {
            return Err(format!("q={q}: {got:?}, expected {expected:?}"));
        }
        out.push(format!("q={q} {got:?} over {} codewords", d.enumerated));
    }
    within(start, LIMIT_3, "Hermitian oracle")?;
    Ok(out.join("; "))
}

fn c4() -> Outcome {
    let small = build_fiber_code(&artin_schreier_spec(3, 1, 1, 1).unwrap()).map_err(|e| e.to_string())?;
    let k = dimension_rank(&small);
    let d = min_distance_bruteforce(&small, DISTANCE_BUDGET).map_err(|e| e.to_string())?.d;
    if small.n != 27 || k != 4 || d < AS_SMALL_MIN_D {
        return Err(format!("(3,1,1,1): n={} k={k} d={d}", small.n));
    }
    let start = Instant::now();
    let big = build_fiber_code(&artin_schreier_spec(3, 2, 2, 1).unwrap()).map_err(|e| e.to_string())?;
    let built = start.elapsed();
    within(start, LIMIT_4_CONSTRUCTION, "(3,2,2,1) construction")?;
    let kb = dimension_rank(&big);
    if big.n != 729 || big.field.q() != 81 || kb != 8 {
        return Err(format!("(3,2,2,1): n={} q={} k={kb}", big.n, big.field.q()));
    }
    Ok(format!("(3,1,1,1) n=27 k=4 d={d} (exact); (3,2,2,1) n=729 GF(81) k=8 built in {built:?}"))
}

/// Exhaustive peeling at `level` over every distinct support of that level.
fn exhaustive_level(code: &EvaluationCode, s: &HierarchyStructure, level: usize, weight: usize) -> Result<u64, String> {
    let mut seen = vec![false; s.n];
    let mut patterns = 0;
    for owner in 0..s.n {
        if seen[owner] {
            continue;
        }
        let support = s.support(owner, level);
        for &x in support {
            seen[x] = true;
        }
        let dec = Decoder::Peeling { structure: s, level, owner };
        let r = exhaustive_erasure_check(code, support, weight, dec, owner as u64).map_err(|e| e.to_string())?;
        if let Some(p) = r.counterexample {
            return Err(format!("{}: pattern {p:?} not recovered", code.family_name()));
        }
        patterns += r.patterns;
    }
    Ok(patterns)
}

fn c5() -> Outcome {
    let start = Instant::now();
    let h = build_fiber_code(&hermitian_spec(3).unwrap()).map_err(|e| e.to_string())?;
    let hs = default_hierarchy(&h).map_err(|e| e.to_string())?;
    if hs.params()[0].delta != 4 {
        return Err(format!("Hermitian delta_1 = {}", hs.params()[0].delta));
    }
    let a = exhaustive_level(&h, &hs, 1, 3)?;
    let r = rm(3, 1, 3);
    let rs = default_hierarchy(&r).map_err(|e| e.to_string())?;
    if rs.params()[0].delta != 6 {
        return Err(format!("RM delta_1 = {}", rs.params()[0].delta));
    }
    let b = exhaustive_level(&r, &rs, 1, 5)?;
    within(start, LIMIT_5, "exhaustive completeness")?;
    Ok(format!("Hermitian q=3: {a} patterns; RM_3(1,3): {b} patterns; 0 failures"))
}

fn in_scope_codes() -> Vec<EvaluationCode> {
    let mut codes = Vec::new();
    for q in [2u32, 3, 5] {
        for m in [2usize, 3] {
            for v in 0..=q.saturating_sub(2) {
                codes.push(rm(q, v, m));
            }
        }
    }
    codes.push(rm(7, 5, 3));
    for q in [2, 3, 4, 5] {
        codes.push(build_fiber_code(&hermitian_spec(q).unwrap()).unwrap());
    }
    codes.push(build_fiber_code(&artin_schreier_spec(3, 1, 1, 1).unwrap()).unwrap());
    codes.push(build_fiber_code(&artin_schreier_spec(3, 2, 2, 1).unwrap()).unwrap());
    codes.push(CodeSpecFile::load(&fixture("custom_kummer.toml")).unwrap().build().unwrap());
    codes
}

fn c6() -> Outcome {
    let codes = in_scope_codes();
    for code in &codes {
        let s = default_hierarchy(code).map_err(|e| e.to_string())?;
        let nest = s.nesting_violations();
        let groups = s.group_violations();
        if !nest.is_empty() || !groups.is_empty() {
            return Err(format!("{}: {} nesting, {} group violations", code.family_name(), nest.len(), groups.len()));
        }
        if let (Some(fs), Some(pts)) = (code.fiber_spec(), code.curve_points()) {
            let v = disjointness_violations(pts, fs.t());
            if !v.is_empty() || union_identity_violation(pts, fs.t()).is_some() {
                return Err(format!("{}: disjointness violated", code.family_name()));
            }
        }
    }
    Ok(format!("{} codes, 0 violations", codes.len()))
}

fn c7() -> Outcome {
    let mut fiber = 0;
    let mut rm_count = 0;
    for code in in_scope_codes() {
        let s = default_hierarchy(&code).map_err(|e| e.to_string())?;
        let depth = s.depth();
        for (j, lp) in s.params().iter().enumerate() {
            let level = j + 1;
            let expected = match &code.family {
                hlrc::code::CodeFamily::ReedMuller { .. } => {
                    let q = code.field.q() as u64;
                    let dim = (lp.n as f64).log(q as f64).round() as u32;
                    (q.pow(dim) - 1) / (q - 1)
                }
                _ => (depth + 1 - level) as u64,
            };
            if lp.t != expected {
                return Err(format!("{} level {level}: declared t={} expected {expected}", code.family_name(), lp.t));
            }
            if let Some(i) = (0..s.n).find(|&i| s.groups_through(i, level).len() as u64 != expected) {
                return Err(format!(
                    "{} level {level}: position {i} has {} groups",
                    code.family_name(),
                    s.groups_through(i, level).len()
                ));
            }
        }
        if code.fiber_spec().is_some() {
            fiber += 1;
        } else {
            rm_count += 1;
        }
    }
    let spec = CodeSpecFile::load(&fixture("rm_7_5_3.toml")).map_err(|e| e.to_string())?;
    let text = params_report(&spec).map_err(|e| e.to_string())?.to_text();
    if !text.contains("level 1 dim=2 n=49 s=21 delta=14 t=8 [formula]")
        || !text.contains("level 1 t=57 [flagged-inconsistency")
    {
        return Err(format!("RM_7(5,3) report lacks the flagged count:\n{text}"));
    }
    Ok(format!("{fiber} fiber and {rm_count} RM structures; RM_7(5,3) level 1 t=8 with quoted 57 flagged"))
}

fn c8() -> Outcome {
    let mut out = Vec::new();
    for q in [2u32, 3, 4] {
        let code = build_fiber_code(&hermitian_spec(q).unwrap()).map_err(|e| e.to_string())?;
        let r = verify_rm_embedding(&code).ok_or("not a fiber code")?;
        if !r.pass() || r.degree_bound > 2 * q - 3 || r.subcode_rank != Some(true) {
            return Err(format!("Hermitian q={q}: {r:?}"));
        }
        out.push(format!("H{q} r={}", r.degree_bound));
    }
    let code = build_fiber_code(&artin_schreier_spec(3, 1, 1, 1).unwrap()).map_err(|e| e.to_string())?;
    let r = verify_rm_embedding(&code).ok_or("not a fiber code")?;
    if !r.pass() || r.degree_bound > 2 || r.subcode_rank != Some(true) {
        return Err(format!("AS(3,1,1,1): {r:?}"));
    }
    out.push(format!("AS(3,1,1,1) r={}", r.degree_bound));
    Ok(format!("{}; supports axis-parallel", out.join(" ")))
}

fn c9() -> Outcome {
    let codes = [rm(5, 3, 3), build_fiber_code(&hermitian_spec(3).unwrap()).unwrap()];
    let per = TRIALS_9 / (codes.len() * EPSILONS_9.len()) as u64;
    let mut total = 0;
    let mut successes = 0;
    for code in &codes {
        let s = default_hierarchy(code).map_err(|e| e.to_string())?;
        for (k, &p) in EPSILONS_9.iter().enumerate() {
            let cfg = SimConfig {
                model: ErasureModel::Iid { p },
                trials: per,
                seed: SEED_9 + k as u64,
                fallback: false,
                cross_check: true,
            };
            let st = run_trials(code, &s, &cfg).map_err(|e| e.to_string())?;
            if st.mismatches != 0 || st.ml_disagreements != 0 {
                return Err(format!(
                    "{} eps={p}: {} wrong symbols, {} ML disagreements",
                    code.family_name(),
                    st.mismatches,
                    st.ml_disagreements
                ));
            }
            total += st.trials;
            successes += st.successes;
        }
    }
    if total < TRIALS_9 {
        return Err(format!("only {total} trials"));
    }
    Ok(format!("{total} trials, {successes} peeling successes, 0 wrong symbols, 0 ML disagreements"))
}

fn c10() -> Outcome {
    let spec = fixture("hermitian_3.toml");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_hlrc"))
            .args(["simulate", "--spec", spec.to_str().unwrap()])
            .args(SIM_ARGS_10)
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    if !a.status.success() || a.stdout != b.stdout {
        return Err("repeated runs differ".into());
    }
    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/simulate_hermitian_3.txt");
    let golden = std::fs::read(&golden_path).map_err(|e| e.to_string())?;
    if a.stdout != golden {
        return Err("report differs from the committed golden file".into());
    }
    Ok(format!("two runs byte-identical and equal to the golden report ({} bytes)", golden.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("RM_7(5,3) parameters and hierarchy", c1),
        ("RM distance formula by oracle", c2),
        ("Hermitian parameters by oracle", c3),
        ("Artin-Schreier construction", c4),
        ("exhaustive hierarchical completeness", c5),
        ("disjointness and nesting", c6),
        ("availability counts", c7),
        ("Reed-Muller embedding", c8),
        ("peeling soundness", c9),
        ("simulation determinism", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name}: {detail} [{:.1?}]", i + 1, start.elapsed());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
