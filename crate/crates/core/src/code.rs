//! Evaluation codes shared by the Reed-Muller and fiber-product families, and
//! their line-oriented text file format.
//!
//! ```text
//! hlrc-code 1
//! family rm v=5 m=3                      | family fiber <fiber header, see below>
//! field p=7 h=1 modulus=0,1
//! n 343
//! k 56
//! points 343                            one point per line, element indices
//! 0 0 0
//! ...
//! basis 56                              one exponent vector per line
//! 0 0 0
//! ...
//! generator 56 343                      one row per basis function
//! 1 1 1 ...
//! ```
//!
//! A fiber header is
//! `family fiber kind=<hermitian:q | artin-schreier:p:h:t | custom> l=<l> factors=<t>`
//! followed by one `factor` line per factor:
//! `factor label=y kind=kummer exponent=4 exclude-zero=true f=0,1 rho=2` or
//! `factor label=x kind=additive coeffs=1,0,1 f=0,1 rho=2`.
//! Fiber points are written `base fiber_1 ... fiber_t`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::fiber::{CurvePoint, FactorCurve, FactorKind, FiberFamily, FiberSpec};
use crate::geometry::Point;
use crate::gf::{FieldElement, FieldSpec, GfError};
use crate::linalg::{self, Matrix};

/// Exponent vector of a basis monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct Monomial {
    pub exponents: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn eval(&self, field: &FieldSpec, coords: &[FieldElement]) -> FieldElement {
        self.exponents
            .iter()
            .zip(coords)
            .fold(FieldElement::ONE, |acc, (&e, &c)| field.mul(acc, field.pow_u(c, e as u64)))
    }
}

/// Sorts monomials in graded lexicographic order: total degree ascending,
/// then earlier variables first (`1, x1, x2, ..., x1^2, x1 x2, ...`).
pub fn sort_graded_lex(monomials: &mut [Monomial]) {
    monomials.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| b.exponents.cmp(&a.exponents)));
}

#[derive(Debug, Clone, PartialEq)]
pub enum CodeFamily {
    ReedMuller { v: u32, m: usize },
    Fiber(FiberSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalPoints {
    Affine(Vec<Point>),
    Curve(Vec<CurvePoint>),
}

impl EvalPoints {
    pub fn len(&self) -> usize {
        match self {
            EvalPoints::Affine(p) => p.len(),
            EvalPoints::Curve(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of point `i` as a flat vector (fiber points: base first).
    pub fn coords(&self, i: usize) -> Vec<FieldElement> {
        match self {
            EvalPoints::Affine(p) => p[i].coords.clone(),
            EvalPoints::Curve(p) => p[i].coords(),
        }
    }
}

/// A linear code given by evaluating a monomial basis at ordered points.
///
/// Row `i` of `generator` is basis function `i` evaluated at every point; `k`
/// is the verified rank, which may be smaller than the number of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationCode {
    pub field: FieldSpec,
    pub family: CodeFamily,
    pub n: usize,
    pub k: usize,
    pub generator: Matrix,
    pub points: EvalPoints,
    pub basis: Vec<Monomial>,
    /// Non-fatal findings from construction, e.g. a rank below the formula.
    pub warnings: Vec<String>,
}

impl EvaluationCode {
    pub(crate) fn from_basis(
        field: FieldSpec,
        family: CodeFamily,
        points: EvalPoints,
        basis: Vec<Monomial>,
    ) -> EvaluationCode {
        let n = points.len();
        let coords: Vec<Vec<FieldElement>> = (0..n).map(|i| points.coords(i)).collect();
        let generator: Matrix =
            basis.iter().map(|mono| coords.iter().map(|c| mono.eval(&field, c)).collect()).collect();
        let k = linalg::rank(&field, &generator);
        EvaluationCode { field, family, n, k, generator, points, basis, warnings: Vec::new() }
    }

    /// Number of message symbols accepted by [`EvaluationCode::encode`].
    pub fn message_len(&self) -> usize {
        self.generator.len()
    }

    pub fn encode(&self, message: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(message.len(), self.message_len(), "message length");
        linalg::vec_mat(&self.field, message, &self.generator)
    }

    pub fn family_name(&self) -> String {
        match &self.family {
            CodeFamily::ReedMuller { v, m } => format!("RM_{}({},{})", self.field.q(), v, m),
            CodeFamily::Fiber(spec) => spec.name(),
        }
    }

    pub fn fiber_spec(&self) -> Option<&FiberSpec> {
        match &self.family {
            CodeFamily::Fiber(s) => Some(s),
            CodeFamily::ReedMuller { .. } => None,
        }
    }

    pub fn curve_points(&self) -> Option<&[CurvePoint]> {
        match &self.points {
            EvalPoints::Curve(p) => Some(p),
            EvalPoints::Affine(_) => None,
        }
    }

    pub fn affine_points(&self) -> Option<&[Point]> {
        match &self.points {
            EvalPoints::Affine(p) => Some(p),
            EvalPoints::Curve(_) => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] GfError),
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn factor_line(f: &FactorCurve, rho: u32) -> String {
    let kind = match &f.kind {
        FactorKind::Kummer { exponent, exclude_zero } => {
            format!("kind=kummer exponent={exponent} exclude-zero={exclude_zero}")
        }
        FactorKind::Additive { coeffs } => format!("kind=additive coeffs={}", join(coeffs, ",")),
    };
    format!("factor label={} {} f={} rho={}", f.label, kind, join(&f.f, ","), rho)
}

/// Serializes a code in the `hlrc-code 1` text format.
pub fn write_code(code: &EvaluationCode) -> String {
    let mut out = String::from("hlrc-code 1\n");
    match &code.family {
        CodeFamily::ReedMuller { v, m } => writeln!(out, "family rm v={v} m={m}").unwrap(),
        CodeFamily::Fiber(spec) => {
            let kind = match spec.family {
                FiberFamily::Hermitian { q } => format!("hermitian:{q}"),
                FiberFamily::ArtinSchreier { p, h, t } => format!("artin-schreier:{p}:{h}:{t}"),
                FiberFamily::Custom => "custom".to_string(),
            };
            writeln!(out, "family fiber kind={} l={} factors={}", kind, spec.l, spec.factors.len()).unwrap();
            for (f, &rho) in spec.factors.iter().zip(&spec.rho) {
                writeln!(out, "{}", factor_line(f, rho)).unwrap();
            }
        }
    }
    let fr = code.field.record();
    writeln!(out, "field p={} h={} modulus={}", fr.p, fr.h, join(&fr.modulus, ",")).unwrap();
    writeln!(out, "n {}", code.n).unwrap();
    writeln!(out, "k {}", code.k).unwrap();
    writeln!(out, "points {}", code.n).unwrap();
    for i in 0..code.n {
        writeln!(out, "{}", join(code.points.coords(i), " ")).unwrap();
    }
    writeln!(out, "basis {}", code.basis.len()).unwrap();
    for b in &code.basis {
        writeln!(out, "{}", join(&b.exponents, " ")).unwrap();
    }
    writeln!(out, "generator {} {}", code.generator.len(), code.n).unwrap();
    for row in &code.generator {
        writeln!(out, "{}", join(row, " ")).unwrap();
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<&'a str, FormatError> {
        let (i, l) =
            self.inner.next().ok_or(FormatError::Parse { line: self.line + 1, msg: "unexpected end".into() })?;
        self.line = i + 1;
        Ok(l.trim())
    }

    fn err(&self, msg: impl Into<String>) -> FormatError {
        FormatError::Parse { line: self.line, msg: msg.into() }
    }

    fn keyed(&mut self, key: &str) -> Result<Vec<&'a str>, FormatError> {
        let l = self.next()?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(key) {
            return Err(self.err(format!("expected `{key}`")));
        }
        Ok(parts.collect())
    }

    fn numbers<T: std::str::FromStr>(&self, s: &str, sep: char) -> Result<Vec<T>, FormatError> {
        s.split(sep)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse().map_err(|_| self.err(format!("bad number `{x}`"))))
            .collect()
    }
}

fn kv<'a>(parts: &[&'a str], key: &str) -> Option<&'a str> {
    parts.iter().find_map(|p| p.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
}

/// Parses the `hlrc-code 1` text format.
pub fn read_code(text: &str) -> Result<EvaluationCode, FormatError> {
    let mut lines = Lines { inner: text.lines().enumerate(), line: 0 };
    if lines.next()? != "hlrc-code 1" {
        return Err(lines.err("missing `hlrc-code 1` header"));
    }
    let fam = lines.keyed("family")?;
    let need = |lines: &Lines, parts: &[&str], key: &str| -> Result<String, FormatError> {
        kv(parts, key).map(str::to_string).ok_or_else(|| lines.err(format!("missing `{key}`")))
    };
    enum Pending {
        Rm { v: u32, m: usize },
        Fiber { family: FiberFamily, l: u32, factors: Vec<FactorCurve>, rho: Vec<u32> },
    }
    let pending = match fam.first().copied() {
        Some("rm") => {
            let v = need(&lines, &fam, "v")?.parse().map_err(|_| lines.err("bad v"))?;
            let m = need(&lines, &fam, "m")?.parse().map_err(|_| lines.err("bad m"))?;
            Pending::Rm { v, m }
        }
        Some("fiber") => {
            let kind = need(&lines, &fam, "kind")?;
            let nums = |s: &str| -> Vec<u32> { s.split(':').skip(1).filter_map(|x| x.parse().ok()).collect() };
            let family = match kind.split(':').next() {
                Some("hermitian") => {
                    FiberFamily::Hermitian { q: *nums(&kind).first().ok_or_else(|| lines.err("bad kind"))? }
                }
                Some("artin-schreier") => match nums(&kind)[..] {
                    [p, h, t] => FiberFamily::ArtinSchreier { p, h, t },
                    _ => return Err(lines.err("bad kind")),
                },
                Some("custom") => FiberFamily::Custom,
                _ => return Err(lines.err("unknown fiber kind")),
            };
            let l = need(&lines, &fam, "l")?.parse().map_err(|_| lines.err("bad l"))?;
            let count: usize = need(&lines, &fam, "factors")?.parse().map_err(|_| lines.err("bad factors"))?;
            let mut factors = Vec::new();
            let mut rho = Vec::new();
            for _ in 0..count {
                let parts = lines.keyed("factor")?;
                let label = need(&lines, &parts, "label")?;
                let f: Vec<FieldElement> =
                    lines.numbers::<u32>(&need(&lines, &parts, "f")?, ',')?.into_iter().map(FieldElement).collect();
                let kind = match need(&lines, &parts, "kind")?.as_str() {
                    "kummer" => FactorKind::Kummer {
                        exponent: need(&lines, &parts, "exponent")?.parse().map_err(|_| lines.err("bad exponent"))?,
                        exclude_zero: need(&lines, &parts, "exclude-zero")? == "true",
                    },
                    "additive" => FactorKind::Additive {
                        coeffs: lines
                            .numbers::<u32>(&need(&lines, &parts, "coeffs")?, ',')?
                            .into_iter()
                            .map(FieldElement)
                            .collect(),
                    },
                    other => return Err(lines.err(format!("unknown factor kind `{other}`"))),
                };
                rho.push(need(&lines, &parts, "rho")?.parse().map_err(|_| lines.err("bad rho"))?);
                factors.push(FactorCurve { label, kind, f });
            }
            Pending::Fiber { family, l, factors, rho }
        }
        _ => return Err(lines.err("unknown family")),
    };
    let fp = lines.keyed("field")?;
    let p = need(&lines, &fp, "p")?.parse().map_err(|_| lines.err("bad p"))?;
    let h = need(&lines, &fp, "h")?.parse().map_err(|_| lines.err("bad h"))?;
    let modulus = lines.numbers(&need(&lines, &fp, "modulus")?, ',')?;
    let field = FieldSpec::with_modulus(p, h, modulus)?;
    let single = |lines: &mut Lines, key: &str| -> Result<usize, FormatError> {
        let parts = lines.keyed(key)?;
        parts.first().and_then(|x| x.parse().ok()).ok_or_else(|| lines.err(format!("bad `{key}` count")))
    };
    let n = single(&mut lines, "n")?;
    let k = single(&mut lines, "k")?;
    if single(&mut lines, "points")? != n {
        return Err(lines.err("point count differs from n"));
    }
    let elem = |lines: &Lines, row: Vec<u32>| -> Result<Vec<FieldElement>, FormatError> {
        row.into_iter().map(|x| field.element(x).map_err(|e| lines.err(e.to_string()))).collect()
    };
    let mut coords = Vec::with_capacity(n);
    for _ in 0..n {
        let l = lines.next()?;
        let row = lines.numbers(l, ' ')?;
        coords.push(elem(&lines, row)?);
    }
    let nb = single(&mut lines, "basis")?;
    let mut basis = Vec::with_capacity(nb);
    for _ in 0..nb {
        let l = lines.next()?;
        basis.push(Monomial { exponents: lines.numbers(l, ' ')? });
    }
    let g = lines.keyed("generator")?;
    if g.len() != 2 || g[0].parse::<usize>().ok() != Some(nb) || g[1].parse::<usize>().ok() != Some(n) {
        return Err(lines.err("generator shape mismatch"));
    }
    let mut generator = Vec::with_capacity(nb);
    for _ in 0..nb {
        let l = lines.next()?;
        let row = elem(&lines, lines.numbers(l, ' ')?)?;
        if row.len() != n {
            return Err(lines.err("generator row length"));
        }
        generator.push(row);
    }
    let (family, points) = match pending {
        Pending::Rm { v, m } => {
            if coords.iter().any(|c| c.len() != m) {
                return Err(lines.err("point dimension mismatch"));
            }
            (CodeFamily::ReedMuller { v, m }, EvalPoints::Affine(coords.into_iter().map(Point::new).collect()))
        }
        Pending::Fiber { family, l, factors, rho } => {
            let t = factors.len();
            if coords.iter().any(|c| c.len() != t + 1) {
                return Err(lines.err("point dimension mismatch"));
            }
            let spec = FiberSpec { field: field.clone(), factors, rho, l, family };
            let pts = coords.into_iter().map(|c| CurvePoint { base: c[0], fibers: c[1..].to_vec() }).collect();
            (CodeFamily::Fiber(spec), EvalPoints::Curve(pts))
        }
    };
    let rank = linalg::rank(&field, &generator);
    if rank != k {
        return Err(lines.err(format!("declared k={k} but generator rank is {rank}")));
    }
    Ok(EvaluationCode { field, family, n, k, generator, points, basis, warnings: Vec::new() })
}
