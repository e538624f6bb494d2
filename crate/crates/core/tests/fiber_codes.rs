mod common;

use std::collections::BTreeSet;

use common::{hermitian_points, min_distance, rank, RefField};
use hlrc::fiber::{
    artin_schreier_spec, build_fiber_code, disjointness_violations, fiber_params, hermitian_spec,
    union_identity_violation, verify_rm_embedding, BoundKind,
};
use hlrc::gf::FieldElement;
use hlrc::oracle::min_distance_bruteforce;
use hlrc::rng::SplitMix64;
use hlrc::sim::random_codeword;
use proptest::prelude::*;

fn generator(code: &hlrc::code::EvaluationCode) -> Vec<Vec<u32>> {
    code.generator.iter().map(|r| r.iter().map(|x| x.0).collect()).collect()
}

#[test]
fn hermitian_points_match_reference() {
    for q in [2, 3] {
        let code = build_fiber_code(&hermitian_spec(q).unwrap()).unwrap();
        let pts = code.curve_points().unwrap();
        let got: BTreeSet<(u32, u32)> = pts.iter().map(|p| (p.fibers[1].0, p.fibers[0].0)).collect();
        let expected: BTreeSet<(u32, u32)> = hermitian_points(q).into_iter().collect();
        assert_eq!(got.len(), pts.len());
        assert_eq!(got, expected, "q={q}");
        assert_eq!(pts.len() as u32, q * q * q - q);
    }
}

#[test]
fn hermitian_small_parameters() {
    let code = build_fiber_code(&hermitian_spec(2).unwrap()).unwrap();
    let r = RefField::new(2, 2);
    let g = generator(&code);
    assert_eq!((code.n, rank(&r, &g), min_distance(&r, &g)), (6, 2, 4));
    let p = fiber_params(code.fiber_spec().unwrap()).unwrap();
    assert_eq!((p.n, p.k, p.d_lower, p.bound), (6, 2, 4, BoundKind::Hermitian));
}

#[test]
fn hermitian_dimension_by_reference_rank() {
    for q in [3, 5] {
        let code = build_fiber_code(&hermitian_spec(q).unwrap()).unwrap();
        let r = RefField::new(q, 2);
        assert_eq!(rank(&r, &generator(&code)), (q * q - q) as usize, "q={q}");
        assert_eq!(code.k, (q * q - q) as usize);
    }
}

#[test]
fn artin_schreier_small_code() {
    let spec = artin_schreier_spec(3, 1, 1, 1).unwrap();
    let code = build_fiber_code(&spec).unwrap();
    let r = RefField::new(3, 2);
    let a = spec.factors[0].f[4].0;
    // Every base value splits: y^3 - y = a * y0^4 has three roots for all y0.
    let mut count = 0;
    for y0 in 0..9 {
        let rhs = r.mul(a, r.pow(y0, 4));
        count += (0..9).filter(|&y| r.sub(r.pow(y, 3), y) == rhs).count();
    }
    assert_eq!(count, 27);
    assert_eq!(code.n, 27);
    let g = generator(&code);
    assert_eq!(rank(&r, &g), 4);
    let d = min_distance(&r, &g);
    assert!(d >= 20);
    assert_eq!(min_distance_bruteforce(&code, 1_000_000).unwrap().d, d);
    let p = fiber_params(&spec).unwrap();
    assert_eq!(p.bound, BoundKind::ArtinSchreier);
    assert!(p.d_lower <= d as i64);
}

#[test]
fn larger_artin_schreier_construction() {
    let code = build_fiber_code(&artin_schreier_spec(3, 2, 2, 1).unwrap()).unwrap();
    assert_eq!((code.n, code.k, code.field.q()), (729, 8, 81));
}

#[test]
fn recovery_supports_are_disjoint() {
    for spec in [
        hermitian_spec(2),
        hermitian_spec(3),
        hermitian_spec(4),
        artin_schreier_spec(3, 1, 1, 1),
        artin_schreier_spec(3, 2, 2, 1),
    ] {
        let spec = spec.unwrap();
        let code = build_fiber_code(&spec).unwrap();
        let pts = code.curve_points().unwrap();
        assert!(disjointness_violations(pts, spec.t()).is_empty(), "{}", spec.name());
        assert_eq!(union_identity_violation(pts, spec.t()), None, "{}", spec.name());
    }
}

#[test]
fn embedding_into_reed_muller() {
    for q in [2u32, 3, 4] {
        let code = build_fiber_code(&hermitian_spec(q).unwrap()).unwrap();
        let rep = verify_rm_embedding(&code).unwrap();
        assert!(rep.pass(), "q={q}: {rep:?}");
        assert!(rep.degree_bound <= 2 * q - 3 && rep.max_degree <= rep.degree_bound, "q={q}: {rep:?}");
    }
    let code = build_fiber_code(&artin_schreier_spec(3, 1, 1, 1).unwrap()).unwrap();
    let rep = verify_rm_embedding(&code).unwrap();
    assert!(rep.pass() && rep.degree_bound <= 2, "{rep:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// On each fiber, a codeword is a polynomial in that fiber coordinate of
    /// degree at most `d_j - rho_j`.
    #[test]
    fn hermitian_codewords_are_low_degree_on_fibers(seed in any::<u64>(), pick in 0usize..24) {
        let spec = hermitian_spec(3).unwrap();
        let code = build_fiber_code(&spec).unwrap();
        let pts = code.curve_points().unwrap();
        let word = random_codeword(&code, &mut SplitMix64::new(seed));
        let f = &code.field;
        for j in 0..2 {
            let members: Vec<usize> = (0..pts.len())
                .filter(|&i| (0..2).all(|k| k == j || pts[i].fibers[k] == pts[pick].fibers[k]) && pts[i].base == pts[pick].base)
                .collect();
            let deg = (spec.degrees()[j] - spec.rho[j]) as usize;
            let xs: Vec<FieldElement> = members.iter().map(|&i| pts[i].fibers[j]).collect();
            let ys: Vec<FieldElement> = members.iter().map(|&i| word[i]).collect();
            for (k, &x) in xs.iter().enumerate().skip(deg + 1) {
                let pred = hlrc::linalg::lagrange_eval(f, &xs[..=deg], &ys[..=deg], x);
                prop_assert_eq!(pred, ys[k]);
            }
        }
    }
}
