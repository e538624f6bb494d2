//! Fiber-product evaluation codes over the affine line.
//!
//! A code is described by `t` factor curves over a base coordinate `y0`. Factor
//! `j` is either Kummer (`y^e = f(y0)`) or additive (`L(y) = f(y0)` with
//! `L(y) = sum c_i y^(p^i)`). Evaluation points are the tuples
//! `(y0, y1, ..., yt)` over base values where every factor splits completely;
//! the basis is `y0^a * prod y_j^(e_j)` with `a <= l` and
//! `e_j <= d_j - rho_j`, where `d_j` is the degree of factor `j`.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::code::{sort_graded_lex, CodeFamily, EvalPoints, EvaluationCode, Monomial};
use crate::gf::{build_field, prime_power, FieldElement, FieldSpec, GfError};
use crate::linalg;
use crate::rm::{rm_monomials, MAX_GENERATOR_ENTRIES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error("invalid fiber specification: {0}")]
    Invalid(String),
    #[error("no base value splits completely in every factor")]
    EmptyS,
    #[error("degree bound l={l} must be smaller than |S|={s}")]
    DegreeTooHigh { l: u32, s: usize },
    #[error("t={t} must satisfy 1 <= t <= h={h}")]
    BadT { t: u32, h: u32 },
    #[error("l={l} exceeds the largest admissible value {max}")]
    LTooLarge { l: u32, max: i64 },
    #[error("code too large to build (n={n}, basis={k})")]
    TooLarge { n: usize, k: usize },
    #[error(transparent)]
    Field(#[from] GfError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactorKind {
    /// `y^exponent = f(y0)`; with `exclude_zero`, base values where the
    /// right-hand side vanishes are dropped.
    Kummer { exponent: u32, exclude_zero: bool },
    /// `sum coeffs[i] * y^(p^i) = f(y0)`.
    Additive { coeffs: Vec<FieldElement> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorCurve {
    pub label: String,
    pub kind: FactorKind,
    /// Right-hand side in the base coordinate, low degree first.
    pub f: Vec<FieldElement>,
}

impl FactorCurve {
    /// Fiber size over a completely split base value.
    pub fn degree(&self, p: u32) -> u32 {
        match &self.kind {
            FactorKind::Kummer { exponent, .. } => *exponent,
            FactorKind::Additive { coeffs } => match coeffs.iter().rposition(|c| !c.is_zero()) {
                Some(top) => p.pow(top as u32),
                None => 0,
            },
        }
    }

    /// Left-hand side evaluated at `y`.
    pub fn lhs(&self, field: &FieldSpec, y: FieldElement) -> FieldElement {
        match &self.kind {
            FactorKind::Kummer { exponent, .. } => field.pow_u(y, *exponent as u64),
            FactorKind::Additive { coeffs } => {
                let mut acc = FieldElement::ZERO;
                let mut frob = y;
                for &c in coeffs {
                    acc = field.add(acc, field.mul(c, frob));
                    frob = field.pow_u(frob, field.p() as u64);
                }
                acc
            }
        }
    }

    /// The fiber equation over base value `s` as a univariate polynomial in
    /// `y`, low degree first.
    pub fn fiber_polynomial(&self, field: &FieldSpec, s: FieldElement) -> Vec<FieldElement> {
        let rhs = field.eval_poly(&self.f, s);
        let mut poly = match &self.kind {
            FactorKind::Kummer { exponent, .. } => {
                let mut v = vec![FieldElement::ZERO; *exponent as usize + 1];
                v[*exponent as usize] = FieldElement::ONE;
                v
            }
            FactorKind::Additive { coeffs } => {
                let top = field.p().pow(coeffs.len().saturating_sub(1) as u32) as usize;
                let mut v = vec![FieldElement::ZERO; top + 1];
                for (i, &c) in coeffs.iter().enumerate() {
                    v[field.p().pow(i as u32) as usize] = c;
                }
                v
            }
        };
        poly[0] = field.sub(poly[0], rhs);
        poly
    }

    fn excludes(&self, field: &FieldSpec, s: FieldElement) -> bool {
        matches!(self.kind, FactorKind::Kummer { exclude_zero: true, .. }) && field.eval_poly(&self.f, s).is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberFamily {
    Hermitian { q: u32 },
    ArtinSchreier { p: u32, h: u32, t: u32 },
    Custom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiberSpec {
    pub field: FieldSpec,
    pub factors: Vec<FactorCurve>,
    pub rho: Vec<u32>,
    /// Degree bound for the base coordinate.
    pub l: u32,
    pub family: FiberFamily,
}

impl FiberSpec {
    /// Validates a spec assembled from parts.
    pub fn new(
        field: FieldSpec,
        factors: Vec<FactorCurve>,
        rho: Vec<u32>,
        l: u32,
        family: FiberFamily,
    ) -> Result<FiberSpec, FiberError> {
        let spec = FiberSpec { field, factors, rho, l, family };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), FiberError> {
        let bad = |m: String| Err(FiberError::Invalid(m));
        if self.factors.is_empty() {
            return bad("at least one factor is required".into());
        }
        if self.factors.len() != self.rho.len() {
            return bad(format!("{} factors but {} rho values", self.factors.len(), self.rho.len()));
        }
        let q = self.field.q();
        for (f, &rho) in self.factors.iter().zip(&self.rho) {
            let elems = match &f.kind {
                FactorKind::Kummer { .. } => f.f.clone(),
                FactorKind::Additive { coeffs } => coeffs.iter().chain(&f.f).copied().collect(),
            };
            if let Some(e) = elems.iter().find(|e| e.0 >= q) {
                return bad(format!("factor {}: element {} is outside GF({q})", f.label, e.0));
            }
            if let FactorKind::Additive { coeffs } = &f.kind {
                if coeffs.last().is_none_or(|c| c.is_zero()) {
                    return bad(format!("factor {}: leading additive coefficient must be nonzero", f.label));
                }
                if coeffs.len() > 1 + self.field.h() as usize {
                    return bad(format!("factor {}: additive degree exceeds the field size", f.label));
                }
            }
            let d = f.degree(self.field.p());
            if d < 2 {
                return bad(format!("factor {}: degree {d} must be at least 2", f.label));
            }
            if rho < 2 || rho > d {
                return bad(format!("factor {}: rho={rho} must lie in [2, {d}]", f.label));
            }
        }
        let mut labels: Vec<&str> = self.factors.iter().map(|f| f.label.as_str()).collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return bad("factor labels must be distinct".into());
        }
        Ok(())
    }

    pub fn t(&self) -> usize {
        self.factors.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.factors.iter().map(|f| f.degree(self.field.p())).collect()
    }

    /// `d_j - rho_j + 1` per factor.
    pub fn localities(&self) -> Vec<u32> {
        self.degrees().iter().zip(&self.rho).map(|(d, r)| d - r + 1).collect()
    }

    /// Position of the factor with the given label.
    pub fn direction(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.label == label)
    }

    pub fn name(&self) -> String {
        match self.family {
            FiberFamily::Hermitian { q } => format!("Hermitian(q={q})"),
            FiberFamily::ArtinSchreier { p, h, t } => format!("ArtinSchreier(p={p},h={h},t={t},l={})", self.l),
            FiberFamily::Custom => format!("Fiber(GF({}),t={},l={})", self.field.q(), self.t(), self.l),
        }
    }
}

/// An evaluation point `(y0, y1, ..., yt)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurvePoint {
    pub base: FieldElement,
    pub fibers: Vec<FieldElement>,
}

impl CurvePoint {
    pub fn coords(&self) -> Vec<FieldElement> {
        let mut c = Vec::with_capacity(1 + self.fibers.len());
        c.push(self.base);
        c.extend_from_slice(&self.fibers);
        c
    }
}

/// Hermitian curve over GF(q^2) as the fiber product of `y^(q+1) = u` and
/// `x^q + x = u`, evaluated away from `y = 0`, with `l = 0` and `rho = (2, 2)`.
pub fn hermitian_spec(q: u32) -> Result<FiberSpec, FiberError> {
    let (p, h) = prime_power(q).ok_or_else(|| FiberError::Invalid(format!("q={q} is not a prime power")))?;
    let field = build_field(p, 2 * h)?;
    let mut coeffs = vec![FieldElement::ZERO; h as usize + 1];
    coeffs[0] = FieldElement::ONE;
    coeffs[h as usize] = FieldElement::ONE;
    let u = vec![FieldElement::ZERO, FieldElement::ONE];
    let factors = vec![
        FactorCurve {
            label: "y".into(),
            kind: FactorKind::Kummer { exponent: q + 1, exclude_zero: true },
            f: u.clone(),
        },
        FactorCurve { label: "x".into(), kind: FactorKind::Additive { coeffs }, f: u },
    ];
    FiberSpec::new(field, factors, vec![2, 2], 0, FiberFamily::Hermitian { q })
}

/// Largest `l` with `l p^t + t(p-2)(q+1)p^(t-1) + 1 <= q^2 p^t`.
pub fn artin_schreier_max_l(p: u32, h: u32, t: u32) -> i64 {
    let (p, q, t) = (p as i64, (p as i64).pow(h), t as i64);
    let pt = p.pow(t as u32);
    let num = q * q * pt - t * (p - 2) * (q + 1) * p.pow(t as u32 - 1) - 1;
    num.div_euclid(pt)
}

/// The curves `y_i^p - y_i = a_i y0^(q+1)`, `i = 1..t`, over GF(q^2) with
/// `q = p^h`; the `a_i` are the first prime-field-independent roots of
/// `X^q + X`.
pub fn artin_schreier_spec(p: u32, h: u32, t: u32, l: u32) -> Result<FiberSpec, FiberError> {
    if !crate::gf::is_prime(p) || p == 2 {
        return Err(FiberError::Invalid(format!("p={p} must be an odd prime")));
    }
    if t == 0 || t > h {
        return Err(FiberError::BadT { t, h });
    }
    let max = artin_schreier_max_l(p, h, t);
    if l as i64 > max {
        return Err(FiberError::LTooLarge { l, max });
    }
    let field = build_field(p, 2 * h)?;
    let q = p.pow(h);
    let mut trace = vec![FieldElement::ZERO; q as usize + 1];
    trace[1] = FieldElement::ONE;
    trace[q as usize] = FieldElement::ONE;
    let a = field.subfield_linear_independent(&field.poly_roots(&trace)?, t as usize)?;
    let minus_one = field.neg(FieldElement::ONE);
    let factors = a
        .iter()
        .enumerate()
        .map(|(i, &ai)| {
            let mut f = vec![FieldElement::ZERO; q as usize + 2];
            f[q as usize + 1] = ai;
            FactorCurve {
                label: format!("y{}", i + 1),
                kind: FactorKind::Additive { coeffs: vec![minus_one, FieldElement::ONE] },
                f,
            }
        })
        .collect();
    FiberSpec::new(field, factors, vec![2; t as usize], l, FiberFamily::ArtinSchreier { p, h, t })
}

/// Completely split base values and the points above them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPoints {
    pub s: Vec<FieldElement>,
    pub points: Vec<CurvePoint>,
}

/// For each factor, maps a right-hand-side value to its roots (ascending).
fn root_tables(spec: &FiberSpec) -> Vec<HashMap<FieldElement, Vec<FieldElement>>> {
    spec.factors
        .iter()
        .map(|f| {
            let mut table: HashMap<FieldElement, Vec<FieldElement>> = HashMap::new();
            for y in spec.field.all_elements() {
                table.entry(f.lhs(&spec.field, y)).or_default().push(y);
            }
            table
        })
        .collect()
}

/// Base values over which every factor has its full number of roots, and
/// the lexicographically ordered points above them.
pub fn enumerate_split_points(spec: &FiberSpec) -> Result<SplitPoints, FiberError> {
    spec.validate()?;
    let field = &spec.field;
    let tables = root_tables(spec);
    let degrees = spec.degrees();
    let mut s = Vec::new();
    let mut points = Vec::new();
    for base in field.all_elements() {
        if spec.factors.iter().any(|f| f.excludes(field, base)) {
            continue;
        }
        let fibers: Option<Vec<&Vec<FieldElement>>> = spec
            .factors
            .iter()
            .zip(&tables)
            .zip(&degrees)
            .map(|((f, table), &d)| table.get(&field.eval_poly(&f.f, base)).filter(|roots| roots.len() == d as usize))
            .collect();
        let Some(fibers) = fibers else { continue };
        s.push(base);
        let mut idx = vec![0usize; fibers.len()];
        loop {
            points.push(CurvePoint { base, fibers: idx.iter().zip(&fibers).map(|(&i, r)| r[i]).collect() });
            let mut j = fibers.len();
            let done = loop {
                if j == 0 {
                    break true;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < fibers[j].len() {
                    break false;
                }
                idx[j] = 0;
            };
            if done {
                break;
            }
        }
    }
    if s.is_empty() {
        return Err(FiberError::EmptyS);
    }
    Ok(SplitPoints { s, points })
}

/// `y0^a * prod y_j^(e_j)` for `a <= l`, `e_j <= d_j - rho_j`, graded-lex.
pub fn fiber_basis(spec: &FiberSpec) -> Vec<Monomial> {
    let bounds: Vec<u32> =
        std::iter::once(spec.l).chain(spec.degrees().iter().zip(&spec.rho).map(|(d, r)| d - r)).collect();
    let mut out = Vec::new();
    let mut e = vec![0u32; bounds.len()];
    'outer: loop {
        out.push(Monomial { exponents: e.clone() });
        for i in (0..e.len()).rev() {
            if e[i] < bounds[i] {
                e[i] += 1;
                continue 'outer;
            }
            e[i] = 0;
        }
        break;
    }
    sort_graded_lex(&mut out);
    out
}

/// `(l + 1) * prod (d_j - rho_j + 1)`.
pub fn dimension_formula(spec: &FiberSpec) -> u64 {
    (spec.l as u64 + 1) * spec.localities().iter().map(|&r| r as u64).product::<u64>()
}

pub fn build_fiber_code(spec: &FiberSpec) -> Result<EvaluationCode, FiberError> {
    let split = enumerate_split_points(spec)?;
    if spec.l as usize >= split.s.len() {
        return Err(FiberError::DegreeTooHigh { l: spec.l, s: split.s.len() });
    }
    let basis = fiber_basis(spec);
    let n = split.points.len();
    if (n as u64).saturating_mul(basis.len() as u64) > MAX_GENERATOR_ENTRIES {
        return Err(FiberError::TooLarge { n, k: basis.len() });
    }
    let mut code = EvaluationCode::from_basis(
        spec.field.clone(),
        CodeFamily::Fiber(spec.clone()),
        EvalPoints::Curve(split.points),
        basis,
    );
    let expected = dimension_formula(spec);
    if code.k as u64 != expected {
        code.warnings
            .push(format!("rank {} differs from dimension formula (l+1)*prod(d_j-rho_j+1) = {expected}", code.k));
    }
    Ok(code)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Hermitian,
    ArtinSchreier,
    /// Generic expression for custom specs, not independently established.
    Unverified,
}

impl BoundKind {
    pub fn label(self) -> &'static str {
        match self {
            BoundKind::Hermitian => "closed form q^3-2q^2+q+2",
            BoundKind::ArtinSchreier => "closed form n-l*p^t-t(p-2)(q+1)p^(t-1)",
            BoundKind::Unverified => "unverified bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FiberParams {
    pub n: u64,
    pub k: u64,
    pub d_lower: i64,
    pub bound: BoundKind,
    pub s_size: usize,
    pub degrees: Vec<u32>,
    pub localities: Vec<u32>,
    pub rho: Vec<u32>,
    pub warnings: Vec<String>,
    /// Divergences between computed values and commonly quoted ones.
    pub flags: Vec<String>,
}

/// `n - l d_g - sum (d_j - rho_j) (d_g / d_j) deg f_j` with `d_g = prod d_j`.
pub fn generic_distance_bound(spec: &FiberSpec, n: u64) -> i64 {
    let degrees = spec.degrees();
    let dg: i64 = degrees.iter().map(|&d| d as i64).product();
    let mut bound = n as i64 - spec.l as i64 * dg;
    for ((f, &d), &rho) in spec.factors.iter().zip(&degrees).zip(&spec.rho) {
        let deg_f = f.f.iter().rposition(|c| !c.is_zero()).unwrap_or(0) as i64;
        bound -= (d - rho) as i64 * (dg / d as i64) * deg_f;
    }
    bound
}

pub fn fiber_params(spec: &FiberSpec) -> Result<FiberParams, FiberError> {
    let split = enumerate_split_points(spec)?;
    let n = split.points.len() as u64;
    let generic = generic_distance_bound(spec, n);
    let mut warnings = Vec::new();
    let mut flags = Vec::new();
    let (d_lower, bound) = match spec.family {
        FiberFamily::Hermitian { q } => {
            let q = q as i64;
            if n as i64 != q * q * q - q {
                warnings.push(format!("enumerated n={n} differs from q^3-q"));
            }
            flags.push(format!(
                "localities computed as d-rho+1: y={}, x={}; commonly quoted as ((q-2,2),(q-1,2)) = (({},2),({},2))",
                q,
                q - 1,
                q - 2,
                q - 1
            ));
            (q * q * q - 2 * q * q + q + 2, BoundKind::Hermitian)
        }
        FiberFamily::ArtinSchreier { p, h, t } => {
            let (p, q, t) = (p as i64, (p as i64).pow(h), t as i64);
            let pt = p.pow(t as u32);
            if n as i64 != pt * q * q {
                warnings.push(format!("enumerated n={n} differs from p^t q^2"));
            }
            (n as i64 - spec.l as i64 * pt - t * (p - 2) * (q + 1) * p.pow(t as u32 - 1), BoundKind::ArtinSchreier)
        }
        FiberFamily::Custom => (generic, BoundKind::Unverified),
    };
    if bound != BoundKind::Unverified && d_lower != generic {
        warnings.push(format!("closed-form bound {d_lower} differs from generic expression {generic}"));
    }
    if d_lower <= 0 {
        warnings.push(format!("distance bound {d_lower} is not positive"));
    }
    if spec.l as usize >= split.s.len() {
        warnings.push(format!("l={} is not below |S|={}", spec.l, split.s.len()));
    }
    Ok(FiberParams {
        n,
        k: dimension_formula(spec),
        d_lower,
        bound,
        s_size: split.s.len(),
        degrees: spec.degrees(),
        localities: spec.localities(),
        rho: spec.rho.clone(),
        warnings,
        flags,
    })
}

/// Positions agreeing with point `i` in the base and in every fiber
/// coordinate outside `dirs`.
pub fn middle_support(points: &[CurvePoint], i: usize, dirs: &[usize]) -> Vec<usize> {
    let pi = &points[i];
    points
        .iter()
        .enumerate()
        .filter(|(_, pt)| {
            pt.base == pi.base
                && pt.fibers.iter().zip(&pi.fibers).enumerate().all(|(k, (a, b))| a == b || dirs.contains(&k))
        })
        .map(|(idx, _)| idx)
        .collect()
}

/// Positions agreeing with point `i` everywhere except fiber coordinate `j`.
pub fn recovery_support(points: &[CurvePoint], i: usize, j: usize) -> Vec<usize> {
    middle_support(points, i, &[j])
}

/// Partition of the positions into direction-`j` recovery supports, for
/// every direction.
#[derive(Debug, Clone)]
pub struct FiberIndex {
    /// `group_of[j][i]` is the index of the direction-`j` support of `i`.
    pub group_of: Vec<Vec<usize>>,
    /// `groups[j][g]` lists the positions of support `g`, ascending.
    pub groups: Vec<Vec<Vec<usize>>>,
}

impl FiberIndex {
    pub fn new(points: &[CurvePoint], t: usize) -> FiberIndex {
        let mut group_of = Vec::with_capacity(t);
        let mut groups = Vec::with_capacity(t);
        for j in 0..t {
            let mut ids: BTreeMap<Vec<FieldElement>, usize> = BTreeMap::new();
            let mut of = Vec::with_capacity(points.len());
            let mut gs: Vec<Vec<usize>> = Vec::new();
            for (i, pt) in points.iter().enumerate() {
                let mut key = pt.coords();
                key.remove(j + 1);
                let next = ids.len();
                let g = *ids.entry(key).or_insert(next);
                if g == gs.len() {
                    gs.push(Vec::new());
                }
                gs[g].push(i);
                of.push(g);
            }
            group_of.push(of);
            groups.push(gs);
        }
        FiberIndex { group_of, groups }
    }

    pub fn support(&self, i: usize, j: usize) -> &[usize] {
        &self.groups[j][self.group_of[j][i]]
    }
}

/// A pair of positions in one direction-`j` support whose direction-`k`
/// supports intersect.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DisjointnessViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l1: usize,
    pub l2: usize,
}

/// For every `i`, `j`, distinct `l1, l2` in the direction-`j` support of `i`,
/// and `k != j`, checks that the direction-`k` supports of `l1` and `l2` are
/// disjoint. Returns every violation.
pub fn disjointness_violations(points: &[CurvePoint], t: usize) -> Vec<DisjointnessViolation> {
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in 0..t {
            let sup = recovery_support(points, i, j);
            for (a, &l1) in sup.iter().enumerate() {
                for &l2 in &sup[a + 1..] {
                    for k in (0..t).filter(|&k| k != j) {
                        let s1 = recovery_support(points, l1, k);
                        let s2 = recovery_support(points, l2, k);
                        if s1.iter().any(|x| s2.contains(x)) {
                            out.push(DisjointnessViolation { i, j, k, l1, l2 });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Checks `M(i, A) = union over l in R(i, j) of M(l, A \ {j})` for every
/// position `i`, nonempty direction set `A` and `j` in `A`. Returns the
/// first failing `(i, A, j)`.
pub fn union_identity_violation(points: &[CurvePoint], t: usize) -> Option<(usize, Vec<usize>, usize)> {
    for mask in 1u32..(1 << t) {
        let a: Vec<usize> = (0..t).filter(|&k| mask >> k & 1 == 1).collect();
        for i in 0..points.len() {
            let mut lhs = middle_support(points, i, &a);
            lhs.sort_unstable();
            for &j in &a {
                let rest: Vec<usize> = a.iter().copied().filter(|&k| k != j).collect();
                let mut rhs: Vec<usize> =
                    recovery_support(points, i, j).into_iter().flat_map(|l| middle_support(points, l, &rest)).collect();
                rhs.sort_unstable();
                rhs.dedup();
                if lhs != rhs {
                    return Some((i, a.clone(), j));
                }
            }
        }
    }
    None
}

/// Checks that every basis function restricted to every direction-`j`
/// support is a polynomial of degree `<= d_j - rho_j` in `y_j`. Returns the
/// first failing `(row, direction, support)`.
pub fn restriction_degree_violation(code: &EvaluationCode) -> Option<(usize, usize, Vec<usize>)> {
    let spec = code.fiber_spec()?;
    let points = code.curve_points()?;
    let index = FiberIndex::new(points, spec.t());
    let field = &code.field;
    for (j, (&d, &rho)) in spec.degrees().iter().zip(&spec.rho).enumerate() {
        let deg = (d - rho) as usize;
        for group in &index.groups[j] {
            let xs: Vec<FieldElement> = group.iter().map(|&i| points[i].fibers[j]).collect();
            for (r, row) in code.generator.iter().enumerate() {
                let ys: Vec<FieldElement> = group.iter().map(|&i| row[i]).collect();
                let ok = (deg + 1..group.len())
                    .all(|m| linalg::lagrange_eval(field, &xs[..=deg], &ys[..=deg], xs[m]) == ys[m]);
                if !ok {
                    return Some((r, j, group.clone()));
                }
            }
        }
    }
    None
}

/// Outcome of checking that a fiber code is a punctured Reed-Muller subcode.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct EmbeddingReport {
    /// `l + sum (d_j - rho_j)`.
    pub degree_bound: u32,
    /// Largest total degree among basis monomials.
    pub max_degree: u32,
    /// Every basis function is a monomial of total degree at most the bound.
    pub basis_within_bound: bool,
    /// Distinct evaluation points map to distinct points of the ambient space.
    pub coordinates_injective: bool,
    /// Every recovery support is `B` intersected with an axis-parallel line,
    /// of size `d_j`.
    pub supports_axis_parallel: bool,
    /// Generator rows lie in the span of the degree-bounded monomials
    /// evaluated at `B`; `None` if that matrix was too large to form.
    pub subcode_rank: Option<bool>,
    /// Basis restrictions to recovery supports have degree `<= d_j - rho_j`.
    pub restriction_degree: bool,
}

impl EmbeddingReport {
    pub fn pass(&self) -> bool {
        self.basis_within_bound
            && self.coordinates_injective
            && self.supports_axis_parallel
            && self.subcode_rank != Some(false)
            && self.restriction_degree
    }
}

pub fn verify_rm_embedding(code: &EvaluationCode) -> Option<EmbeddingReport> {
    let spec = code.fiber_spec()?;
    let points = code.curve_points()?;
    let t = spec.t();
    let degrees = spec.degrees();
    let degree_bound = spec.l + degrees.iter().zip(&spec.rho).map(|(d, r)| d - r).sum::<u32>();
    let max_degree = code.basis.iter().map(Monomial::degree).max().unwrap_or(0);
    let basis_within_bound = code.basis.iter().all(|m| m.exponents.len() == 1 + t && m.degree() <= degree_bound);

    let mut seen = std::collections::HashSet::new();
    let coordinates_injective = points.iter().all(|p| seen.insert(p.coords()));

    let index = FiberIndex::new(points, t);
    let supports_axis_parallel = (0..points.len()).all(|i| {
        (0..t).all(|j| {
            let line = recovery_support(points, i, j);
            line.len() == degrees[j] as usize && line.contains(&i) && line == index.support(i, j)
        })
    });

    let ambient = rm_monomials(degree_bound, 1 + t);
    let subcode_rank = if (ambient.len() as u64) * (code.n as u64) <= MAX_GENERATOR_ENTRIES / 4 {
        let coords: Vec<Vec<FieldElement>> = points.iter().map(CurvePoint::coords).collect();
        let rm: linalg::Matrix =
            ambient.iter().map(|m| coords.iter().map(|c| m.eval(&code.field, c)).collect()).collect();
        let mut both = rm.clone();
        both.extend(code.generator.iter().cloned());
        Some(linalg::rank(&code.field, &both) == linalg::rank(&code.field, &rm))
    } else {
        None
    };

    Some(EmbeddingReport {
        degree_bound,
        max_degree,
        basis_within_bound,
        coordinates_injective,
        supports_axis_parallel,
        subcode_rank,
        restriction_degree: restriction_degree_violation(code).is_none(),
    })
}
