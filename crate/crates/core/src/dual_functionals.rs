//! Finite combinations `Σ γ_i δ_{x_i*}` of point evaluations, viewed as
//! functionals on `FBL[E]`.
//!
//! `x* ↦ δ_{x*}` is not linear: `λδ_{x*} = δ_{λx*}` only for `λ ≥ 0`.

use serde::{Deserialize, Serialize};

use crate::c_of_k::{self, SphereGrid};
use crate::error::{check_dim, FblError, Result};
use crate::fbl_norm::{self, MAX_ENUMERATION_TERMS};
use crate::lattice_expr::LatticeExpr;
use crate::spaces::{SpaceKind, SpaceModel};
use crate::vector;

/// Angular tolerance below which two points count as parallel.
pub const PARALLEL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub gamma: f64,
    pub xs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DualFunctional {
    pub terms: Vec<Term>,
}

impl DualFunctional {
    pub fn new(terms: Vec<Term>) -> Self {
        Self { terms }
    }

    pub fn dirac(xs: impl Into<Vec<f64>>) -> Self {
        Self::new(vec![Term {
            gamma: 1.0,
            xs: xs.into(),
        }])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, Vec<f64>)>) -> Self {
        Self::new(
            pairs
                .into_iter()
                .map(|(gamma, xs)| Term { gamma, xs })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| Term {
                    gamma: k * t.gamma,
                    xs: t.xs.clone(),
                })
                .collect(),
        )
    }

    /// Concatenates the terms of `self` and `k·other`.
    pub fn plus_scaled(&self, k: f64, other: &DualFunctional) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.scaled(k).terms);
        Self::new(terms)
    }

    fn check_dims(&self, n: usize) -> Result<()> {
        for t in &self.terms {
            check_dim(n, t.xs.len())?;
        }
        Ok(())
    }

    // Terms that act as the zero functional.
    fn live_terms(&self) -> impl Iterator<Item = (usize, &Term)> {
        self.terms
            .iter()
            .enumerate()
            .filter(|(_, t)| t.gamma != 0.0 && !vector::is_zero(&t.xs))
    }
}

/// `Σ γ_i f(x_i*)`.
pub fn apply(a: &DualFunctional, f: &LatticeExpr) -> Result<f64> {
    a.check_dims(f.dim()?)?;
    Ok(a.terms
        .iter()
        .map(|t| t.gamma * f.eval_unchecked(&t.xs))
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

/// `‖Σ γ_i x_i*‖ ≤ ‖Σ γ_i δ_{x_i*}‖ ≤ max_μ ‖Σ μ_i γ_i x_i*‖` over signs `μ`.
pub fn bracket(space: &SpaceModel, a: &DualFunctional) -> Result<Bracket> {
    a.check_dims(space.dim())?;
    let n = space.dim();
    let mut sum = vec![0.0; n];
    for t in &a.terms {
        sum.iter_mut()
            .zip(&t.xs)
            .for_each(|(s, x)| *s += t.gamma * x);
    }
    let lower = space.dual_norm(&sum)?;
    let weighted = fbl_norm::DualTuple::new(
        a.terms
            .iter()
            .map(|t| vector::scaled(&t.xs, t.gamma))
            .collect(),
    );
    let upper = if space.kind() == SpaceKind::L1 {
        fbl_norm::l1_gauge(space, &weighted)?.0
    } else {
        if a.len() > MAX_ENUMERATION_TERMS {
            return Err(FblError::TooManyTerms {
                count: a.len(),
                max: MAX_ENUMERATION_TERMS,
            });
        }
        fbl_norm::sign_gauge(space, &weighted)?.0
    };
    Ok(Bracket { lower, upper })
}

fn check_independent(a: &DualFunctional) -> Result<()> {
    let live: Vec<(usize, &Term)> = a.live_terms().collect();
    for (k, (i, s)) in live.iter().enumerate() {
        for (j, t) in &live[k + 1..] {
            if vector::line_angle(&s.xs, &t.xs) < PARALLEL_TOL {
                return Err(FblError::ParallelPair {
                    first: *i,
                    second: *j,
                    tolerance: PARALLEL_TOL,
                });
            }
        }
    }
    Ok(())
}

/// `(1/(n·d)) Σ |γ_i| ‖x_i*‖` for pairwise independent points, where `d`
/// bounds the Banach–Mazur distance from `E` to `l1(n)`. Terms with `γ = 0`
/// or `x* = 0` are the zero functional and are skipped.
pub fn dirac_separation_value(space: &SpaceModel, a: &DualFunctional, d: f64) -> Result<f64> {
    a.check_dims(space.dim())?;
    if !(d >= 1.0) || !d.is_finite() {
        return Err(FblError::InvalidArgument(format!(
            "distance bound must be a finite number >= 1, got {d}"
        )));
    }
    check_independent(a)?;
    let total: f64 = a
        .live_terms()
        .map(|(_, t)| t.gamma.abs() * space.dual_norm_raw(&t.xs))
        .sum();
    Ok(total / (space.dim() as f64 * d))
}

/// Numerical corroboration of an interpolant on the cube sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpolantCheck {
    pub resolution: usize,
    /// `max (|g| - M_n)` over the grid; the construction makes this `≤ 0`.
    pub max_excess: f64,
    /// `max_i |g(p_i) - signs[i]|`
    pub point_error: f64,
    pub lipschitz: f64,
    /// `max|g|` on the grid plus `Lip(g)·radius`.
    pub grid_sup_upper: f64,
}

/// A lattice expression `g` with `g(p_i) = signs[i]` and `|g| ≤ M_n`.
///
/// `g = Σ signs[i]·b_i` with
/// `b_p = (M_n - ‖x* - M_n(x*)·p‖_∞ / θ) ∨ 0`. On the sphere `b_p` is a
/// tent of height 1 at `p` supported in the open `θ`-ball around `p`, and
/// `b_p ≤ M_n` everywhere. Points at sup-distance `≥ 2θ` have disjoint
/// supports, so `|g| = max_i b_i ≤ M_n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignInterpolant {
    pub expr: LatticeExpr,
    pub points: Vec<Vec<f64>>,
    pub signs: Vec<i8>,
    pub theta: f64,
    pub check: InterpolantCheck,
}

/// `p ↦ ‖x* - M_n(x*)·p‖_∞`
fn distance_to_ray(p: &[f64]) -> LatticeExpr {
    let n = p.len();
    let m = LatticeExpr::max_abs_coordinates(n);
    let parts: Vec<LatticeExpr> = (0..n)
        .map(|c| LatticeExpr::abs(LatticeExpr::coordinate(n, c).minus(m.clone().scaled(p[c]))))
        .collect();
    if n == 1 {
        parts.into_iter().next().expect("n = 1")
    } else {
        LatticeExpr::sup(parts).expect("n >= 2 children")
    }
}

fn bump(p: &[f64], theta: f64) -> LatticeExpr {
    let n = p.len();
    LatticeExpr::max_abs_coordinates(n)
        .plus(LatticeExpr::scale(-1.0 / theta, distance_to_ray(p)))
        .max(LatticeExpr::zero(n))
}

fn min_pairwise_distance(points: &[Vec<f64>]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            let d = vector::norm_inf(&vector::sub(p, q));
            best = Some(best.map_or(d, |b: f64| b.min(d)));
        }
    }
    best
}

pub fn sign_interpolant(
    space: &SpaceModel,
    points: &[Vec<f64>],
    signs: &[i8],
    theta: f64,
) -> Result<SignInterpolant> {
    space.require_kind(SpaceKind::L1)?;
    let n = space.dim();
    if points.is_empty() || points.len() != signs.len() {
        return Err(FblError::InvalidArgument(
            "need one sign per point and at least one point".into(),
        ));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(FblError::InvalidArgument(format!(
            "sharpness must lie in (0, 1), got {theta}"
        )));
    }
    for p in points {
        check_dim(n, p.len())?;
        if vector::norm_inf(p) != 1.0 {
            return Err(FblError::InvalidArgument(format!(
                "point {p:?} is not on the unit sphere of l∞({n})"
            )));
        }
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(FblError::InvalidArgument("signs must be +1 or -1".into()));
    }
    if let Some(d) = min_pairwise_distance(points) {
        if d < 2.0 * theta {
            return Err(FblError::InvalidArgument(format!(
                "points at sup-distance {d} are too close for sharpness {theta}"
            )));
        }
    }

    let mut terms: Vec<LatticeExpr> = points
        .iter()
        .zip(signs)
        .map(|(p, &s)| LatticeExpr::scale(s as f64, bump(p, theta)))
        .collect();
    let expr = if terms.len() == 1 {
        terms.pop().expect("one term")
    } else {
        LatticeExpr::add(terms)?
    };

    let grid = SphereGrid::default_for(n)?;
    let max_excess = grid.max_of(|p| expr.eval_unchecked(p).abs() - vector::norm_inf(p));
    let point_error = points
        .iter()
        .zip(signs)
        .map(|(p, &s)| (expr.eval_unchecked(p) - s as f64).abs())
        .fold(0.0, f64::max);
    let sup = c_of_k::ck_sup_norm(&expr, &grid)?;
    let check = InterpolantCheck {
        resolution: grid.resolution(),
        max_excess,
        point_error,
        lipschitz: sup.lipschitz,
        grid_sup_upper: sup.upper,
    };
    if point_error > 1e-9 || max_excess > 1e-12 {
        return Err(FblError::Verification(format!(
            "sign interpolant failed its contract: {check:?}"
        )));
    }
    Ok(SignInterpolant {
        expr,
        points: points.to_vec(),
        signs: signs.to_vec(),
        theta,
        check,
    })
}

/// A certified lower bound `a(f) ≤ ‖a‖` with `‖f‖ ≤ 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessBound {
    pub value: f64,
    pub witness: LatticeExpr,
    pub interpolant: SignInterpolant,
}

/// Pairs `a` with `f = g/n`, `g` a sign interpolant through the points of
/// `a` pushed to the cube sphere. `‖g‖ ≤ n·sup_S |g| ≤ n`, so `‖f‖ ≤ 1` and
/// `a(f) = (1/n) Σ |γ_i| ‖x_i*‖_∞` bounds `‖a‖` from below.
///
/// `theta` defaults to a quarter of the least pairwise sup-distance.
pub fn dual_lower_via_witness(
    space: &SpaceModel,
    a: &DualFunctional,
    theta: Option<f64>,
) -> Result<WitnessBound> {
    space.require_kind(SpaceKind::L1)?;
    let n = space.dim();
    a.check_dims(n)?;
    check_independent(a)?;
    let mut points = Vec::new();
    let mut signs = Vec::new();
    for (_, t) in a.live_terms() {
        let r = vector::norm_inf(&t.xs);
        points.push(vector::divided(&t.xs, r));
        signs.push(if t.gamma < 0.0 { -1 } else { 1 });
    }
    if points.is_empty() {
        return Ok(WitnessBound {
            value: 0.0,
            witness: LatticeExpr::zero(n),
            interpolant: sign_interpolant(space, &[vector::basis(n, 0)], &[1], 0.5)?,
        });
    }
    let theta = theta.unwrap_or_else(|| min_pairwise_distance(&points).map_or(0.5, |d| d / 4.0));
    let interpolant = sign_interpolant(space, &points, &signs, theta)?;
    let witness = LatticeExpr::scale(1.0 / n as f64, interpolant.expr.clone());
    let value = apply(a, &witness)?;
    Ok(WitnessBound {
        value,
        witness,
        interpolant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_expr::random_expr;

    fn l1_2() -> SpaceModel {
        SpaceModel::l1(2)
    }

    #[test]
    fn apply_examples() {
        let e1 = DualFunctional::dirac([1.0, 0.0]);
        assert_eq!(apply(&e1, &LatticeExpr::delta([1.0, 0.0])).unwrap(), 1.0);
        let a = DualFunctional::from_pairs([(1.0, vec![1.0, 0.0]), (1.0, vec![0.0, 1.0])]);
        assert_eq!(
            apply(&a, &LatticeExpr::max_abs_coordinates(2)).unwrap(),
            2.0
        );
        for seed in 0..20 {
            let f = random_expr(2, 3, seed).unwrap();
            let x = [0.3, -0.7];
            let lhs = apply(&DualFunctional::from_pairs([(2.0, x.to_vec())]), &f).unwrap();
            let rhs = apply(&DualFunctional::dirac([0.6, -1.4]), &f).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }
        assert!(apply(&e1, &LatticeExpr::coordinate(3, 0)).is_err());
    }

    #[test]
    fn embedding_is_not_linear_for_negative_scalars() {
        let f = LatticeExpr::abs(LatticeExpr::coordinate(2, 0));
        let x = vec![1.0, 0.0];
        let lhs = apply(&DualFunctional::from_pairs([(-1.0, x.clone())]), &f).unwrap();
        let rhs = apply(&DualFunctional::dirac(vector::scaled(&x, -1.0)), &f).unwrap();
        assert_eq!((lhs, rhs), (-1.0, 1.0));
    }

    #[test]
    fn bracket_examples() {
        let b = bracket(&l1_2(), &DualFunctional::dirac([0.5, 0.5])).unwrap();
        assert_eq!((b.lower, b.upper), (0.5, 0.5));
        let a = DualFunctional::from_pairs([(1.0, vec![1.0, 0.0]), (1.0, vec![0.0, 1.0])]);
        let b = bracket(&l1_2(), &a).unwrap();
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        let a = DualFunctional::from_pairs([(1.0, vec![1.0, 0.0]), (-1.0, vec![1.0, 0.01])]);
        let b = bracket(&l1_2(), &a).unwrap();
        assert_eq!(b.lower, 0.01);
        assert_eq!(b.upper, 2.0);
    }

    #[test]
    fn bracket_l1_closed_form_matches_enumeration() {
        let l1 = SpaceModel::l1(3);
        for seed in 0..40 {
            let pts = l1.sample_sphere(crate::spaces::Side::Dual, 4, seed);
            let a = DualFunctional::from_pairs(
                pts.into_iter()
                    .enumerate()
                    .map(|(i, x)| (i as f64 - 1.5, x)),
            );
            let weighted = fbl_norm::DualTuple::new(
                a.terms
                    .iter()
                    .map(|t| vector::scaled(&t.xs, t.gamma))
                    .collect(),
            );
            let enumerated = fbl_norm::sign_gauge(&l1, &weighted).unwrap().0;
            let b = bracket(&l1, &a).unwrap();
            assert!((b.upper - enumerated).abs() <= 1e-12 * (1.0 + enumerated));
        }
    }

    #[test]
    fn dirac_separation_examples() {
        let a = DualFunctional::from_pairs([(1.0, vec![1.0, 0.0]), (-1.0, vec![1.0, 0.01])]);
        assert_eq!(dirac_separation_value(&l1_2(), &a, 1.0).unwrap(), 1.0);
        let single = DualFunctional::dirac([1.0, -0.2, 0.5]);
        let v = dirac_separation_value(&SpaceModel::l1(3), &single, 1.0).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        let parallel = DualFunctional::from_pairs([(1.0, vec![1.0, 0.0]), (1.0, vec![2.0, 0.0])]);
        assert!(matches!(
            dirac_separation_value(&l1_2(), &parallel, 1.0),
            Err(FblError::ParallelPair {
                first: 0,
                second: 1,
                ..
            })
        ));
        assert!(dirac_separation_value(&l1_2(), &a, 0.5).is_err());
    }

    #[test]
    fn sign_interpolant_examples() {
        let s = sign_interpolant(&l1_2(), &[vec![1.0, 0.3]], &[1], 0.2).unwrap();
        assert_eq!(s.expr.eval(&[1.0, 0.3]).unwrap(), 1.0);
        assert!(s.check.max_excess <= 0.0);

        let p = vec![0.4, -1.0];
        let s = sign_interpolant(
            &l1_2(),
            &[p.clone(), vector::scaled(&p, -1.0)],
            &[1, -1],
            0.5,
        )
        .unwrap();
        assert_eq!(s.expr.eval(&p).unwrap(), 1.0);
        assert_eq!(s.expr.eval(&[-0.4, 1.0]).unwrap(), -1.0);

        assert!(sign_interpolant(&l1_2(), &[p.clone(), p.clone()], &[1, -1], 0.1).is_err());
        assert!(sign_interpolant(&l1_2(), &[vec![0.5, 0.5]], &[1], 0.1).is_err());
        assert!(sign_interpolant(&SpaceModel::l2(2), &[p], &[1], 0.1).is_err());
    }

    #[test]
    fn interpolant_respects_envelope_off_the_sphere() {
        let pts = vec![vec![1.0, 0.3], vec![-0.2, 1.0], vec![1.0, -0.8]];
        let s = sign_interpolant(&l1_2(), &pts, &[1, -1, 1], 0.1).unwrap();
        for x in l1_2().sample_sphere(crate::spaces::Side::Primal, 300, 9) {
            let x = vector::scaled(&x, 3.0);
            let g = s.expr.eval(&x).unwrap();
            assert!(g.abs() <= vector::norm_inf(&x) + 1e-12);
        }
    }

    #[test]
    fn witness_examples() {
        let a = DualFunctional::from_pairs([(1.0, vec![1.0, 0.2]), (-1.0, vec![-0.5, 1.0])]);
        let w = dual_lower_via_witness(&l1_2(), &a, None).unwrap();
        assert!((w.value - 1.0).abs() <= 1e-12);
        assert_eq!(apply(&a, &w.witness).unwrap(), w.value);

        let a = DualFunctional::from_pairs([(1.0, vec![1.0, 0.0]), (1.0, vec![0.0, 1.0])]);
        let w = dual_lower_via_witness(&l1_2(), &a, None).unwrap();
        assert_eq!(w.value, 1.0);
        assert_eq!(bracket(&l1_2(), &a).unwrap().upper, 1.0);

        let parallel = DualFunctional::from_pairs([(1.0, vec![1.0, 0.0]), (-1.0, vec![3.0, 0.0])]);
        assert!(dual_lower_via_witness(&l1_2(), &parallel, None).is_err());
    }

    #[test]
    fn witness_norm_is_certified_by_the_search() {
        let a = DualFunctional::from_pairs([(1.0, vec![1.0, 0.2]), (-2.0, vec![-0.5, 1.0])]);
        let w = dual_lower_via_witness(&l1_2(), &a, None).unwrap();
        let cert = fbl_norm::norm_lower(&l1_2(), &w.witness, 2, 8, 0).unwrap();
        assert!(cert.lower <= 1.0 + 1e-12, "{}", cert.lower);
    }

    #[test]
    fn functional_json_shape() {
        let a = DualFunctional::from_pairs([(1.0, vec![1.0, 0.0])]);
        assert_eq!(
            crate::canonical::to_string(&a).unwrap(),
            r#"{"terms":[{"gamma":1.0000000000000000e0,"xs":[1.0000000000000000e0,0.0000000000000000e0]}]}"#
        );
        let back: DualFunctional =
            serde_json::from_str(r#"{"terms":[{"gamma":-2,"xs":[0.5,1]}]}"#).unwrap();
        assert_eq!(back.terms[0].gamma, -2.0);
        assert!(serde_json::from_str::<DualFunctional>(r#"{"terms":[],"x":1}"#).is_err());
    }
}
