//! Reference implementations used as test oracles. They share nothing with
//! the library beyond the element encoding (base-p digits, low degree first).

#![allow(dead_code)]

/// Naive GF(p^h) arithmetic on digit vectors.
#[derive(Debug, Clone)]
pub struct RefField {
    pub p: u32,
    pub h: usize,
    /// Monic modulus, low degree first, length h + 1.
    pub modulus: Vec<u32>,
}

fn poly_mod(mut a: Vec<u32>, m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    while a.len() > dm {
        let top = a.pop().unwrap();
        if top != 0 {
            let off = a.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                a[off + i] = (a[off + i] + (p - c) * top % p) % p;
            }
        }
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut div: Vec<u32> = (0..d).map(|i| low / p.pow(i as u32) % p).collect();
            div.push(1);
            if poly_mod(poly.to_vec(), &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible of degree `h`, scanning coefficient vectors
/// (constant term first) in lexicographic order.
pub fn smallest_irreducible(p: u32, h: usize) -> Vec<u32> {
    let count = p.pow(h as u32);
    let mut candidates: Vec<Vec<u32>> = (0..count)
        .map(|x| {
            let mut v: Vec<u32> = (0..h).map(|i| x / p.pow(i as u32) % p).collect();
            v.push(1);
            v
        })
        .collect();
    candidates.sort();
    candidates.into_iter().find(|c| irreducible(c, p)).unwrap()
}

impl RefField {
    pub fn new(p: u32, h: usize) -> Self {
        RefField { p, h, modulus: smallest_irreducible(p, h) }
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.h as u32)
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        (0..self.h).map(|i| a / self.p.pow(i as u32) % self.p).collect()
    }

    pub fn index(&self, d: &[u32]) -> u32 {
        d.iter().enumerate().map(|(i, &c)| c * self.p.pow(i as u32)).sum()
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.index(&x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.index(&x.iter().zip(&y).map(|(u, v)| (u + self.p - v) % self.p).collect::<Vec<_>>())
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let prod = poly_mul(&self.digits(a), &self.digits(b), self.p);
        let mut r = poly_mod(prod, &self.modulus, self.p);
        r.resize(self.h, 0);
        self.index(&r)
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        (0..e).fold(1, |acc, _| self.mul(acc, a))
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (1..self.q()).find(|&b| self.mul(a, b) == 1)
    }
}

/// Rank over GF(q) by plain Gaussian elimination.
pub fn rank(f: &RefField, rows: &[Vec<u32>]) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = f.inv(m[r][c]).unwrap();
        let pivot_row: Vec<u32> = m[r].iter().map(|&x| f.mul(x, inv)).collect();
        m[r] = pivot_row.clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let k = row[c];
                *row = row.iter().zip(&pivot_row).map(|(&x, &y)| f.sub(x, f.mul(k, y))).collect();
            }
        }
        r += 1;
    }
    r
}

/// Minimum weight over all nonzero combinations of the rows.
pub fn min_distance(f: &RefField, rows: &[Vec<u32>]) -> usize {
    let q = f.q() as u64;
    let k = rows.len() as u32;
    let n = rows[0].len();
    let mut best = usize::MAX;
    for x in 1..q.pow(k) {
        let mut word = vec![0u32; n];
        let mut rest = x;
        for row in rows {
            let c = (rest % q) as u32;
            rest /= q;
            if c != 0 {
                for (w, &g) in word.iter_mut().zip(row) {
                    *w = f.add(*w, f.mul(c, g));
                }
            }
        }
        let wt = word.iter().filter(|&&w| w != 0).count();
        if wt > 0 {
            best = best.min(wt);
        }
    }
    best
}

/// All points of GF(q)^m in lexicographic order.
pub fn affine_points(q: u32, m: usize) -> Vec<Vec<u32>> {
    (0..q.pow(m as u32)).map(|x| (0..m).rev().map(|i| x / q.pow(i as u32) % q).collect()).collect()
}

/// Generator of RM_q(v, m) over a prime field: monomials with every exponent
/// below q and total degree at most v.
pub fn rm_generator(f: &RefField, v: u32, m: usize) -> Vec<Vec<u32>> {
    let q = f.q();
    let pts = affine_points(q, m);
    affine_points(q, m)
        .into_iter()
        .filter(|e| e.iter().sum::<u32>() <= v)
        .map(|e| {
            pts.iter().map(|x| x.iter().zip(&e).fold(1, |acc, (&xi, &ei)| f.mul(acc, f.pow(xi, ei as u64)))).collect()
        })
        .collect()
}

/// Points (x, y) with `y^(q+1) = x^q + x`, `y != 0`, over GF(q^2), q prime.
pub fn hermitian_points(q: u32) -> Vec<(u32, u32)> {
    let f = RefField::new(q, 2);
    let mut out = Vec::new();
    for x in 0..f.q() {
        for y in 1..f.q() {
            if f.pow(y, q as u64 + 1) == f.add(f.pow(x, q as u64), x) {
                out.push((x, y));
            }
        }
    }
    out
}
