//! Dense Gaussian elimination over a [`FieldSpec`].

use crate::gf::{FieldElement, FieldSpec};

pub type Matrix = Vec<Vec<FieldElement>>;

/// Reduces `m` in place to reduced row-echelon form and returns the pivot
/// columns. Zero rows are moved to the bottom.
pub fn row_reduce(field: &FieldSpec, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, sel);
        let inv = field.inv(m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for (x, &pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x = field.sub(*x, field.mul(f, pv));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(field: &FieldSpec, m: &Matrix) -> usize {
    let mut work = m.clone();
    row_reduce(field, &mut work).len()
}

/// Rank of the submatrix formed by the given columns.
pub fn column_rank(field: &FieldSpec, m: &Matrix, columns: &[usize]) -> usize {
    let sub: Matrix = m.iter().map(|row| columns.iter().map(|&c| row[c]).collect()).collect();
    rank(field, &sub)
}

/// `message * m` for a row vector `message`.
pub fn vec_mat(field: &FieldSpec, message: &[FieldElement], m: &Matrix) -> Vec<FieldElement> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![FieldElement::ZERO; cols];
    for (&coef, row) in message.iter().zip(m) {
        if coef.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = field.add(*o, field.mul(coef, x));
        }
    }
    out
}

/// Solves `x * m = target` for a row vector `x` (free variables set to zero).
/// Returns `None` if the system is inconsistent.
pub fn solve_left(field: &FieldSpec, m: &Matrix, target: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let rows = m.len();
    let cols = target.len();
    // Transpose to A x^T = target^T, augmented.
    let mut aug: Matrix = (0..cols)
        .map(|c| {
            let mut r: Vec<FieldElement> = (0..rows).map(|i| m[i][c]).collect();
            r.push(target[c]);
            r
        })
        .collect();
    let pivots = row_reduce(field, &mut aug);
    if pivots.last() == Some(&rows) {
        return None;
    }
    let mut x = vec![FieldElement::ZERO; rows];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][rows];
    }
    Some(x)
}

/// True when the row spaces of `a` and `b` coincide.
pub fn same_row_space(field: &FieldSpec, a: &Matrix, b: &Matrix) -> bool {
    let ra = rank(field, a);
    if ra != rank(field, b) {
        return false;
    }
    let mut both = a.clone();
    both.extend(b.iter().cloned());
    rank(field, &both) == ra
}

/// Evaluates at `x` the unique polynomial of degree `< xs.len()` through the
/// points `(xs[i], ys[i])`. The abscissae must be distinct.
pub fn lagrange_eval(field: &FieldSpec, xs: &[FieldElement], ys: &[FieldElement], x: FieldElement) -> FieldElement {
    let mut acc = FieldElement::ZERO;
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut num = FieldElement::ONE;
        let mut den = FieldElement::ONE;
        for (k, &xk) in xs.iter().enumerate() {
            if k != i {
                num = field.mul(num, field.sub(x, xk));
                den = field.mul(den, field.sub(xi, xk));
            }
        }
        let basis = field.div(num, den).expect("abscissae must be distinct");
        acc = field.add(acc, field.mul(yi, basis));
    }
    acc
}
