//! Independent oracles for values the engines compute by other routes.

use fbl_core::dual_functionals::{self, DualFunctional};
use fbl_core::fbl_norm::{self, DualTuple};
use fbl_core::lattice_expr::random_expr;
use fbl_core::spaces::Side;
use fbl_core::{LatticeExpr, SpaceModel};
use nalgebra::{DMatrix, DVector};

/// Dual norm of a polytope norm `max_j |<a_j, x>|` as the largest `<y, v>`
/// over vertices `v` of the unit ball, found by enumerating every choice of
/// `n` facets with signs.
fn polytope_dual_by_vertices(facets: &[Vec<f64>], y: &[f64]) -> f64 {
    let n = y.len();
    let k = facets.len();
    let mut best = f64::NEG_INFINITY;
    let mut pick = vec![0usize; n];
    fn next(pick: &mut [usize], k: usize) -> bool {
        let n = pick.len();
        for i in (0..n).rev() {
            if pick[i] < k - n + i {
                pick[i] += 1;
                for j in i + 1..n {
                    pick[j] = pick[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    for (i, p) in pick.iter_mut().enumerate() {
        *p = i;
    }
    loop {
        let a = DMatrix::from_fn(n, n, |r, c| facets[pick[r]][c]);
        if let Some(inv) = a.clone().try_inverse() {
            for signs in 0..(1u32 << n) {
                let rhs = DVector::from_fn(n, |r, _| if signs >> r & 1 == 1 { -1.0 } else { 1.0 });
                let v = &inv * rhs;
                let feasible = facets.iter().all(|f| {
                    let s: f64 = f.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                    s.abs() <= 1.0 + 1e-9
                });
                if feasible {
                    let s: f64 = y.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                    best = best.max(s);
                }
            }
        }
        if !next(&mut pick, k) {
            break;
        }
    }
    best
}

#[test]
fn polytope_dual_norm_matches_vertex_enumeration() {
    let shapes: Vec<Vec<Vec<f64>>> = vec![
        vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.6, 0.6]],
        vec![
            vec![1.0, 0.2],
            vec![-0.3, 1.0],
            vec![0.7, 0.7],
            vec![0.9, -0.5],
        ],
        vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.5, 0.5, 0.5],
            vec![0.4, -0.6, 0.3],
        ],
    ];
    for facets in shapes {
        let space = SpaceModel::polytope(facets.clone()).unwrap();
        for (i, y) in SpaceModel::l2(space.dim())
            .sample_sphere(Side::Dual, 60, 11)
            .into_iter()
            .enumerate()
        {
            let y: Vec<f64> = y.iter().map(|v| v * (1.0 + i as f64 / 10.0)).collect();
            let lp = space.dual_norm(&y).unwrap();
            let brute = polytope_dual_by_vertices(&facets, &y);
            assert!(
                (lp - brute).abs() <= 1e-9 * (1.0 + brute),
                "{facets:?} {y:?}: {lp} vs {brute}"
            );
        }
    }
}

/// `sup_{x ∈ B_E} Σ|x_i*(x)|` over the extreme points of `B_E`: `±e_c` for
/// `l1`, sign vectors for `l∞`.
fn gauge_by_extreme_points(space: &SpaceModel, t: &DualTuple, points: &[Vec<f64>]) -> f64 {
    let _ = space;
    points
        .iter()
        .map(|x| {
            t.vectors
                .iter()
                .map(|v| v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs())
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}

#[test]
fn gauge_matches_the_primal_supremum() {
    for n in 2..=4 {
        let l1 = SpaceModel::l1(n);
        let linf = SpaceModel::linf(n);
        let coords: Vec<Vec<f64>> = (0..n)
            .map(|c| (0..n).map(|j| if j == c { 1.0 } else { 0.0 }).collect())
            .collect();
        let signs: Vec<Vec<f64>> = (0..1u32 << n)
            .map(|s| {
                (0..n)
                    .map(|j| if s >> j & 1 == 1 { -1.0 } else { 1.0 })
                    .collect()
            })
            .collect();
        for seed in 0..40 {
            let m = 1 + (seed as usize % 5);
            let t = DualTuple::new(l1.sample_sphere(Side::Dual, m, seed));
            let g1 = fbl_norm::sign_gauge(&l1, &t).unwrap().0;
            let o1 = gauge_by_extreme_points(&l1, &t, &coords);
            assert!((g1 - o1).abs() <= 1e-12 * (1.0 + o1));
            let gi = fbl_norm::sign_gauge(&linf, &t).unwrap().0;
            let oi = gauge_by_extreme_points(&linf, &t, &signs);
            assert!((gi - oi).abs() <= 1e-12 * (1.0 + oi));
        }
    }
}

#[test]
fn search_agrees_with_grid_oracle() {
    let l1 = SpaceModel::l1(2);
    for seed in 0..50 {
        let depth = 1 + (seed as usize % 3);
        let f = random_expr(2, depth, seed).unwrap();
        let found = fbl_norm::norm_lower(&l1, &f, 2, 8, seed).unwrap().lower;
        let grid = fbl_norm::grid_oracle_norm(&l1, &f, 2, 100).unwrap();
        assert!(
            found >= grid - 2e-2,
            "seed {seed}: {found} < {grid} - 2e-2 for {f:?}"
        );
        let upper = fbl_norm::norm_upper_recursive(&l1, &f).unwrap();
        assert!(grid <= upper + 1e-12);
    }
}

#[test]
fn octa_examples_match_exact_l1_arithmetic() {
    use fbl_core::experiments::octa_witness_search;
    let l1 = SpaceModel::l1(2);
    // ‖δ_a + δ_x‖ = ‖a + x‖_1 by isometry
    let fs = [
        LatticeExpr::delta([1.0, 0.0]),
        LatticeExpr::delta([-1.0, 0.0]),
    ];
    let r = octa_witness_search(&l1, &fs, 2, 3, 4, 5).unwrap();
    let exact = fs
        .iter()
        .map(|f| match f {
            LatticeExpr::Delta(a) => a.iter().zip(&r.x).map(|(p, q)| (p + q).abs()).sum::<f64>(),
            _ => unreachable!(),
        })
        .fold(f64::INFINITY, f64::min);
    assert_eq!(r.value, exact);
    assert_eq!(exact, 2.0);
}

#[test]
fn witness_values_match_the_closed_form() {
    for n in [2usize, 3] {
        let space = SpaceModel::l1(n);
        let pts = space.sample_sphere(Side::Dual, 8, 21);
        let gammas = [0.5, -1.25, 2.0, -0.75, 1.0, 0.3, -0.2, 1.7];
        let a = DualFunctional::from_pairs(gammas.iter().copied().zip(pts.clone()));
        let w = dual_functionals::dual_lower_via_witness(&space, &a, None).unwrap();
        let closed: f64 = gammas
            .iter()
            .zip(&pts)
            .map(|(g, x)| g.abs() * x.iter().fold(0.0f64, |m, v| m.max(v.abs())))
            .sum::<f64>()
            / n as f64;
        assert!((w.value - closed).abs() <= 1e-12 * (1.0 + closed));
    }
}
