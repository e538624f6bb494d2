//! TOML code specifications.
//!
//! ```toml
//! family = "rm"            # rm | hermitian | artin-schreier | fiber-custom
//! q = 7
//! v = 5
//! m = 3
//!
//! [hierarchy]              # optional
//! dims = [2, 1]            # rm: flat dimensions, largest first
//! seed = 11                # rm: seeded flags instead of deterministic ones
//! # order = ["y", "x"]     # fiber families: factor labels, outermost first
//! ```
//!
//! A custom fiber code lists its factors explicitly:
//!
//! ```toml
//! family = "fiber-custom"
//! p = 5
//! h = 1
//! l = 0
//!
//! [[factors]]
//! label = "z"
//! kind = "kummer"          # or "additive" with coeffs = [c0, c1, ...]
//! exponent = 2
//! exclude-zero = true
//! f = [0, 1]
//! rho = 2
//! ```

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use hlrc::code::EvaluationCode;
use hlrc::fiber::{self, FactorCurve, FactorKind, FiberFamily, FiberSpec};
use hlrc::geometry::FlagPolicy;
use hlrc::gf::{build_field, prime_power, FieldElement};
use hlrc::recovery::{build_fiber_hierarchy, build_rm_hierarchy, HierarchyStructure};
use hlrc::rm::{self, RmSpec};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HierarchySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RmFile {
    pub q: u32,
    pub v: u32,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hierarchy: Option<HierarchySpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HermitianFile {
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hierarchy: Option<HierarchySpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArtinSchreierFile {
    pub p: u32,
    pub h: u32,
    pub t: u32,
    pub l: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hierarchy: Option<HierarchySpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FactorFile {
    Kummer {
        label: String,
        exponent: u32,
        #[serde(default, rename = "exclude-zero")]
        exclude_zero: bool,
        f: Vec<u32>,
        rho: u32,
    },
    Additive {
        label: String,
        coeffs: Vec<u32>,
        f: Vec<u32>,
        rho: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomFile {
    pub p: u32,
    pub h: u32,
    pub l: u32,
    pub factors: Vec<FactorFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hierarchy: Option<HierarchySpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum CodeSpecFile {
    Rm(RmFile),
    Hermitian(HermitianFile),
    ArtinSchreier(ArtinSchreierFile),
    FiberCustom(CustomFile),
}

impl CodeSpecFile {
    pub fn parse(text: &str) -> Result<CodeSpecFile> {
        let spec: CodeSpecFile = toml::from_str(text).context("invalid code specification")?;
        spec.check_hierarchy()?;
        Ok(spec)
    }

    pub fn load(path: &std::path::Path) -> Result<CodeSpecFile> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn hierarchy(&self) -> Option<&HierarchySpec> {
        match self {
            CodeSpecFile::Rm(x) => x.hierarchy.as_ref(),
            CodeSpecFile::Hermitian(x) => x.hierarchy.as_ref(),
            CodeSpecFile::ArtinSchreier(x) => x.hierarchy.as_ref(),
            CodeSpecFile::FiberCustom(x) => x.hierarchy.as_ref(),
        }
    }

    fn check_hierarchy(&self) -> Result<()> {
        let Some(h) = self.hierarchy() else { return Ok(()) };
        match self {
            CodeSpecFile::Rm(_) if h.order.is_some() => bail!("`order` applies only to fiber families"),
            CodeSpecFile::Rm(_) => Ok(()),
            _ if h.dims.is_some() || h.seed.is_some() => bail!("`dims` and `seed` apply only to rm"),
            _ => Ok(()),
        }
    }

    pub fn rm_spec(&self) -> Result<Option<RmSpec>> {
        let CodeSpecFile::Rm(f) = self else { return Ok(None) };
        let (p, h) = prime_power(f.q).with_context(|| format!("q={} is not a prime power", f.q))?;
        Ok(Some(RmSpec::new(build_field(p, h)?, f.v, f.m)?))
    }

    pub fn fiber_spec(&self) -> Result<Option<FiberSpec>> {
        let spec = match self {
            CodeSpecFile::Rm(_) => return Ok(None),
            CodeSpecFile::Hermitian(f) => fiber::hermitian_spec(f.q)?,
            CodeSpecFile::ArtinSchreier(f) => fiber::artin_schreier_spec(f.p, f.h, f.t, f.l)?,
            CodeSpecFile::FiberCustom(f) => {
                let field = build_field(f.p, f.h)?;
                let elems = |v: &[u32]| v.iter().map(|&x| FieldElement(x)).collect::<Vec<_>>();
                let mut factors = Vec::new();
                let mut rho = Vec::new();
                for fac in &f.factors {
                    let (curve, r) = match fac {
                        FactorFile::Kummer { label, exponent, exclude_zero, f, rho } => (
                            FactorCurve {
                                label: label.clone(),
                                kind: FactorKind::Kummer { exponent: *exponent, exclude_zero: *exclude_zero },
                                f: elems(f),
                            },
                            *rho,
                        ),
                        FactorFile::Additive { label, coeffs, f, rho } => (
                            FactorCurve {
                                label: label.clone(),
                                kind: FactorKind::Additive { coeffs: elems(coeffs) },
                                f: elems(f),
                            },
                            *rho,
                        ),
                    };
                    factors.push(curve);
                    rho.push(r);
                }
                FiberSpec::new(field, factors, rho, f.l, FiberFamily::Custom)?
            }
        };
        Ok(Some(spec))
    }

    pub fn build(&self) -> Result<EvaluationCode> {
        if let Some(spec) = self.rm_spec()? {
            return Ok(rm::rm_build(&spec)?);
        }
        let spec = self.fiber_spec()?.expect("non-rm families are fiber codes");
        Ok(fiber::build_fiber_code(&spec)?)
    }

    /// The hierarchy directive applied to `code` (defaults when absent).
    pub fn structure(&self, code: &EvaluationCode) -> Result<HierarchyStructure> {
        let h = self.hierarchy().cloned().unwrap_or_default();
        if let CodeSpecFile::Rm(_) = self {
            let policy = h.seed.map_or(FlagPolicy::Deterministic, FlagPolicy::Seeded);
            return Ok(build_rm_hierarchy(code, h.dims.as_deref(), policy)?);
        }
        let spec = code.fiber_spec().context("fiber family produced a non-fiber code")?;
        let order: Vec<usize> = match &h.order {
            Some(labels) => labels
                .iter()
                .map(|l| spec.direction(l).with_context(|| format!("unknown factor label `{l}`")))
                .collect::<Result<_>>()?,
            None => (0..spec.t()).collect(),
        };
        Ok(build_fiber_hierarchy(code, &order)?)
    }
}
