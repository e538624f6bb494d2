//! Affine geometry of F_q^m: points, canonical flats, lines and flags.
//!
//! Points are ordered lexicographically with the first coordinate most
//! significant; that order fixes codeword positions for Reed-Muller codes.
//!
//! Directions are normalized so the first nonzero coordinate is 1 and are
//! ordered colexicographically (last coordinate most significant), which puts
//! the unit vectors `e1, e2, ...` ahead of mixed directions.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{FieldElement, FieldSpec};
use crate::linalg;
use crate::rng::SplitMix64;

/// Largest ambient space we enumerate.
pub const MAX_POINTS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("q^m = {q}^{m} exceeds the enumeration limit")]
    TooLarge { q: u32, m: usize },
    #[error("point does not lie in the flat")]
    PointNotInFlat,
    #[error("line is not contained in the flat")]
    LineNotInFlat,
    #[error("flag dimensions {dims:?} must be strictly decreasing, below {m} and at least 1")]
    BadDims { dims: Vec<usize>, m: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub coords: Vec<FieldElement>,
}

impl Point {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        Point { coords }
    }

    pub fn origin(m: usize) -> Self {
        Point { coords: vec![FieldElement::ZERO; m] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Position of this point in [`all_points`] order.
    pub fn index(&self, q: u32) -> usize {
        self.coords.iter().fold(0usize, |acc, c| acc * q as usize + c.0 as usize)
    }

    /// Inverse of [`Point::index`].
    pub fn from_index(index: usize, q: u32, m: usize) -> Self {
        let mut coords = vec![FieldElement::ZERO; m];
        let mut rest = index;
        for c in coords.iter_mut().rev() {
            *c = FieldElement((rest % q as usize) as u32);
            rest /= q as usize;
        }
        Point { coords }
    }

    fn offset(&self, field: &FieldSpec, dir: &[FieldElement], scale: FieldElement) -> Point {
        Point { coords: self.coords.iter().zip(dir).map(|(&a, &d)| field.add(a, field.mul(scale, d))).collect() }
    }
}

/// An affine subspace in canonical form: reduced row-echelon basis with
/// pivot-normalized rows, and a base point that is zero on every pivot
/// coordinate. Two `Flat`s are equal iff they are the same point set.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Flat {
    pub dim: usize,
    pub base: Point,
    pub basis: Vec<Vec<FieldElement>>,
}

impl Flat {
    /// The flat `base + span(directions)`, canonicalized. Dependent or zero
    /// directions are dropped.
    pub fn new(field: &FieldSpec, base: &Point, directions: &[Vec<FieldElement>]) -> Flat {
        let mut basis: Vec<Vec<FieldElement>> = directions.to_vec();
        let pivots = linalg::row_reduce(field, &mut basis);
        basis.truncate(pivots.len());
        let mut base = base.clone();
        for (row, &c) in basis.iter().zip(&pivots) {
            let coef = base.coords[c];
            if !coef.is_zero() {
                base = base.offset(field, row, field.neg(coef));
            }
        }
        Flat { dim: basis.len(), base, basis }
    }

    /// The 0-dimensional flat `{point}`.
    pub fn point(point: &Point) -> Flat {
        Flat { dim: 0, base: point.clone(), basis: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.base.dim()
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r.iter().position(|c| !c.is_zero()).unwrap()).collect()
    }

    /// Residual of `v` after eliminating the basis directions.
    fn reduce(&self, field: &FieldSpec, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut v = v.to_vec();
        for (row, c) in self.basis.iter().zip(self.pivots()) {
            let coef = v[c];
            if !coef.is_zero() {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = field.sub(*x, field.mul(coef, r));
                }
            }
        }
        v
    }

    pub fn spans(&self, field: &FieldSpec, dir: &[FieldElement]) -> bool {
        self.reduce(field, dir).iter().all(|c| c.is_zero())
    }

    pub fn contains(&self, field: &FieldSpec, p: &Point) -> bool {
        let diff: Vec<FieldElement> = p.coords.iter().zip(&self.base.coords).map(|(&a, &b)| field.sub(a, b)).collect();
        self.spans(field, &diff)
    }

    pub fn contains_flat(&self, field: &FieldSpec, other: &Flat) -> bool {
        self.contains(field, &other.base) && other.basis.iter().all(|d| self.spans(field, d))
    }

    /// The point `base + sum coeffs[r] * basis[r]`.
    pub fn point_at(&self, field: &FieldSpec, coeffs: &[FieldElement]) -> Point {
        let mut p = self.base.clone();
        for (&c, row) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                p = p.offset(field, row, c);
            }
        }
        p
    }

    /// Coordinates of `p` in this flat's chart (inverse of [`Flat::point_at`]).
    pub fn chart(&self, field: &FieldSpec, p: &Point) -> Vec<FieldElement> {
        self.pivots().iter().map(|&c| field.sub(p.coords[c], self.base.coords[c])).collect()
    }
}

/// A chain of nested flats through a common point, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatFlag {
    pub point: Point,
    pub chain: Vec<Flat>,
}

/// How [`flag_through`] picks extension directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlagPolicy {
    /// Smallest canonical direction not already spanned.
    Deterministic,
    /// Uniform random directions from a SplitMix64 stream.
    Seeded(u64),
}

fn digits_msb(mut idx: u64, q: u32, len: usize) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::ZERO; len];
    for c in out.iter_mut().rev() {
        *c = FieldElement((idx % q as u64) as u32);
        idx /= q as u64;
    }
    out
}

fn check_size(q: u32, m: usize) -> Result<u64, GeometryError> {
    let n = (q as u64).checked_pow(m as u32).filter(|&n| n <= MAX_POINTS);
    n.ok_or(GeometryError::TooLarge { q, m })
}

/// All `q^m` points in lexicographic order.
pub fn all_points(field: &FieldSpec, m: usize) -> Result<Vec<Point>, GeometryError> {
    let n = check_size(field.q(), m)?;
    Ok((0..n).map(|i| Point { coords: digits_msb(i, field.q(), m) }).collect())
}

/// Normalized nonzero directions of F_q^m in colex order.
pub fn all_directions(field: &FieldSpec, m: usize) -> impl Iterator<Item = Vec<FieldElement>> + '_ {
    let q = field.q() as u64;
    let total = q.pow(m as u32);
    (1..total).filter_map(move |mut idx| {
        let mut v = vec![FieldElement::ZERO; m];
        for c in v.iter_mut() {
            *c = FieldElement((idx % q) as u32);
            idx /= q;
        }
        (v.iter().find(|c| !c.is_zero()) == Some(&FieldElement::ONE)).then_some(v)
    })
}

fn colex_key(v: &[FieldElement]) -> Vec<u32> {
    v.iter().rev().map(|c| c.0).collect()
}

/// The `(q^m - 1)/(q - 1)` lines through `p`, ordered by direction.
pub fn lines_through(field: &FieldSpec, p: &Point) -> Vec<Flat> {
    all_directions(field, p.dim()).map(|d| Flat::new(field, p, &[d])).collect()
}

/// The points of `flat` in lexicographic order of basis coefficients.
pub fn flat_points(field: &FieldSpec, flat: &Flat) -> Vec<Point> {
    let count = (field.q() as u64).pow(flat.dim as u32);
    (0..count).map(|i| flat.point_at(field, &digits_msb(i, field.q(), flat.dim))).collect()
}

/// All lines through `p` contained in `flat`, ordered by direction.
pub fn lines_in_flat_through(field: &FieldSpec, p: &Point, flat: &Flat) -> Result<Vec<Flat>, GeometryError> {
    if !flat.contains(field, p) {
        return Err(GeometryError::PointNotInFlat);
    }
    let q = field.q();
    let d = flat.dim;
    let mut dirs: Vec<Vec<FieldElement>> = (1..(q as u64).pow(d as u32))
        .filter_map(|i| {
            let coeffs = digits_msb(i, q, d);
            // RREF rows: the leading coordinate of the combination equals the
            // first nonzero coefficient.
            if coeffs.iter().find(|c| !c.is_zero()) != Some(&FieldElement::ONE) {
                return None;
            }
            let zero = Point::origin(flat.ambient_dim());
            let mut v = zero;
            for (&c, row) in coeffs.iter().zip(&flat.basis) {
                v = v.offset(field, row, c);
            }
            Some(v.coords)
        })
        .collect();
    dirs.sort_by_key(|v| colex_key(v));
    Ok(dirs.into_iter().map(|dir| Flat::new(field, p, &[dir])).collect())
}

/// Nested flats through `p` with the requested (strictly decreasing)
/// dimensions, built from the smallest upward so nesting holds by
/// construction.
pub fn flag_through(
    field: &FieldSpec,
    p: &Point,
    dims: &[usize],
    policy: FlagPolicy,
) -> Result<FlatFlag, GeometryError> {
    let m = p.dim();
    let bad = || GeometryError::BadDims { dims: dims.to_vec(), m };
    if dims.is_empty() || dims[0] >= m || *dims.last().unwrap() < 1 {
        return Err(bad());
    }
    if dims.windows(2).any(|w| w[0] <= w[1]) {
        return Err(bad());
    }
    let mut rng = match policy {
        FlagPolicy::Seeded(seed) => Some(SplitMix64::new(seed)),
        FlagPolicy::Deterministic => None,
    };
    let q = field.q() as u64;
    let total = q.pow(m as u32);
    let mut current = Flat::point(p);
    let mut chain = Vec::with_capacity(dims.len());
    for &target in dims.iter().rev() {
        while current.dim < target {
            let dir = match rng.as_mut() {
                Some(rng) => loop {
                    let v = digits_msb(1 + rng.below(total - 1), field.q(), m);
                    if !current.spans(field, &v) {
                        break v;
                    }
                },
                None => all_directions(field, m).find(|d| !current.spans(field, d)).unwrap(),
            };
            let mut basis = current.basis.clone();
            basis.push(dir);
            current = Flat::new(field, p, &basis);
        }
        chain.push(current.clone());
    }
    chain.reverse();
    Ok(FlatFlag { point: p.clone(), chain })
}

/// Partition of `flat` into the `q^(d-1)` lines parallel to `line`.
pub fn parallel_partition(field: &FieldSpec, flat: &Flat, line: &Flat) -> Result<Vec<Flat>, GeometryError> {
    if line.dim != 1 {
        return Err(GeometryError::Dimension { expected: 1, got: line.dim });
    }
    if !flat.contains_flat(field, line) {
        return Err(GeometryError::LineNotInFlat);
    }
    let dir = &line.basis[0];
    let mut covered: HashSet<Point> = HashSet::new();
    let mut out = Vec::new();
    for p in flat_points(field, flat) {
        if covered.contains(&p) {
            continue;
        }
        let l = Flat::new(field, &p, std::slice::from_ref(dir));
        covered.extend(flat_points(field, &l));
        out.push(l);
    }
    Ok(out)
}
