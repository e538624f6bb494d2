//! q-ary Reed-Muller codes RM_q(v, m) and their flat-based parameter ladders.

use thiserror::Error;

use crate::code::{sort_graded_lex, CodeFamily, EvalPoints, EvaluationCode, Monomial};
use crate::geometry::{self, GeometryError};
use crate::gf::FieldSpec;

/// Largest supported basis size.
pub const MAX_BASIS: u64 = 10_000;
/// Largest generator matrix we are willing to materialize.
pub const MAX_GENERATOR_ENTRIES: u64 = 1 << 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RmError {
    #[error("degree bound v={v} exceeds q-1={}", q - 1)]
    DegreeAboveField { v: u32, q: u32 },
    #[error("RM_{q}({v},{m}) is too large to build (n={n}, k={k})")]
    TooLarge { q: u32, v: u32, m: usize, n: u64, k: u64 },
    #[error("level dimensions {dims:?} must be strictly decreasing within [1, {max}]")]
    BadDims { dims: Vec<usize>, max: usize },
    #[error("need at least one variable")]
    NoVariables,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmSpec {
    pub field: FieldSpec,
    pub v: u32,
    pub m: usize,
}

impl RmSpec {
    pub fn new(field: FieldSpec, v: u32, m: usize) -> Result<Self, RmError> {
        if m == 0 {
            return Err(RmError::NoVariables);
        }
        if v > field.q() - 1 {
            return Err(RmError::DegreeAboveField { v, q: field.q() });
        }
        Ok(RmSpec { field, v, m })
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn params(&self) -> (u64, u64, u64) {
        rm_params(self.q(), self.v, self.m)
    }

    pub fn default_dims(&self) -> Vec<usize> {
        (1..self.m).rev().collect()
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form `(n, k, d) = (q^m, C(v+m, m), (q-v) q^(m-1))`.
pub fn rm_params(q: u32, v: u32, m: usize) -> (u64, u64, u64) {
    let q = q as u64;
    let n = q.pow(m as u32);
    let k = binomial(v as u64 + m as u64, m as u64);
    let d = (q - v as u64) * q.pow(m as u32 - 1);
    (n, k, d)
}

/// Parameters of one hierarchy level whose support is a flat of dimension `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct LevelParams {
    pub dim: usize,
    pub n: u64,
    pub s: u64,
    pub delta: u64,
}

fn check_dims(dims: &[usize], max: usize) -> Result<(), RmError> {
    let ok = !dims.is_empty() && dims[0] <= max && *dims.last().unwrap() >= 1 && dims.windows(2).all(|w| w[0] > w[1]);
    if ok {
        Ok(())
    } else {
        Err(RmError::BadDims { dims: dims.to_vec(), max })
    }
}

/// Per-level `(q^l, C(v+l, l), (q-v) q^(l-1))` for flats of dimension `l`;
/// the default ladder is `l = m-1, ..., 1`.
pub fn rm_hierarchy_params(spec: &RmSpec, dims: Option<&[usize]>) -> Result<Vec<LevelParams>, RmError> {
    let default = spec.default_dims();
    let dims = dims.unwrap_or(&default);
    check_dims(dims, spec.m.saturating_sub(1))?;
    Ok(dims
        .iter()
        .map(|&l| {
            let (n, s, delta) = rm_params(spec.q(), spec.v, l);
            LevelParams { dim: l, n, s, delta }
        })
        .collect())
}

/// All exponent vectors of total degree at most `v` in `m` variables.
pub fn rm_monomials(v: u32, m: usize) -> Vec<Monomial> {
    fn rec(m: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == m {
            out.push(Monomial { exponents: prefix.clone() });
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            rec(m, budget - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, v, &mut Vec::new(), &mut out);
    sort_graded_lex(&mut out);
    out
}

/// Builds RM_q(v, m): graded-lex monomial basis evaluated at all points of
/// F_q^m in lexicographic order. `k` is the computed rank.
pub fn rm_build(spec: &RmSpec) -> Result<EvaluationCode, RmError> {
    let (n, k, _) = spec.params();
    let too_large = || RmError::TooLarge { q: spec.q(), v: spec.v, m: spec.m, n, k };
    if k > MAX_BASIS || n.checked_mul(k).is_none_or(|e| e > MAX_GENERATOR_ENTRIES) {
        return Err(too_large());
    }
    let points = geometry::all_points(&spec.field, spec.m).map_err(|_| too_large())?;
    let basis = rm_monomials(spec.v, spec.m);
    let mut code = EvaluationCode::from_basis(
        spec.field.clone(),
        CodeFamily::ReedMuller { v: spec.v, m: spec.m },
        EvalPoints::Affine(points),
        basis,
    );
    if code.k as u64 != k {
        code.warnings.push(format!("rank {} differs from C(v+m, m) = {k}", code.k));
    }
    Ok(code)
}
