//! The `FBL[E]` norm
//!
//! `‖f‖ = sup Σ|f(x_i*)|` over admissible tuples, i.e. tuples with
//! `sup_{x ∈ B_E} Σ|x_i*(x)| ≤ 1`, equivalently `‖Σ ξ_i x_i*‖ ≤ 1` for every
//! sign vector `ξ`. The lower side is a seeded search over admissible tuples
//! of a fixed length `m`; every reported value is backed by a tuple that is
//! re-checked at tolerance zero. The upper side is structural recursion.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical;
use crate::error::{check_dim, FblError, Result};
use crate::lattice_expr::LatticeExpr;
use crate::lp;
use crate::rng::{self, stream, Rng};
use crate::spaces::{Side, SpaceKind, SpaceModel};
use crate::vector;
use rand_distr::{Distribution, StandardNormal};

/// Longest tuple whose sign patterns are enumerated.
pub const MAX_ENUMERATION_TERMS: usize = 24;
/// Admissibility slack used inside searches. Certificates use zero.
pub const SEARCH_TOL: f64 = 1e-9;
pub const DEFAULT_BUDGET: usize = 24;

const PARALLEL_PATTERNS: usize = 1 << 14;
const ASCENT_BASE_ITERS: usize = 60;
const ASCENT_ITERS_PER_TERM: usize = 60;
const STRUCTURED_TAG: u64 = 1 << 20;
const POLISH_ROUNDS: usize = 4;
const ROUNDING_SLACK: f64 = 1e-12;

/// A finite list of dual vectors `(x_1*, …, x_m*)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DualTuple {
    pub vectors: Vec<Vec<f64>>,
}

impl DualTuple {
    pub fn new(vectors: Vec<Vec<f64>>) -> Self {
        Self { vectors }
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self::new(vec![vec![0.0; n]; m])
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.vectors.iter().map(|v| vector::scaled(v, k)).collect())
    }

    /// `Σ|f(x_i*)|`, summed in index order.
    pub fn value_of(&self, f: &LatticeExpr) -> Result<f64> {
        let n = f.dim()?;
        for v in &self.vectors {
            check_dim(n, v.len())?;
        }
        Ok(objective(f, &self.vectors))
    }

    fn check_dims(&self, space: &SpaceModel) -> Result<()> {
        for v in &self.vectors {
            check_dim(space.dim(), v.len())?;
        }
        Ok(())
    }
}

fn objective(f: &LatticeExpr, vectors: &[Vec<f64>]) -> f64 {
    vectors.iter().map(|v| f.eval_unchecked(v).abs()).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Admissibility {
    Admissible {
        gauge: f64,
    },
    /// `signs` realizes the worst signed sum; `excess = gauge - 1`.
    Violated {
        signs: Vec<i8>,
        excess: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        coordinate: Option<usize>,
    },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible { .. })
    }
}

/// `max_ξ ‖Σ ξ_i x_i*‖_*` over sign patterns with `ξ_1 = +1`, with the
/// first maximizing pattern.
pub fn sign_gauge(space: &SpaceModel, t: &DualTuple) -> Result<(f64, Vec<i8>)> {
    t.check_dims(space)?;
    let m = t.len();
    if m > MAX_ENUMERATION_TERMS {
        return Err(FblError::TooManyTerms {
            count: m,
            max: MAX_ENUMERATION_TERMS,
        });
    }
    if m == 0 {
        return Ok((0.0, Vec::new()));
    }
    let patterns = 1usize << (m - 1);
    let n = space.dim();
    let signed_norm = |mask: usize, buf: &mut Vec<f64>| {
        buf.iter_mut().for_each(|b| *b = 0.0);
        for (i, v) in t.vectors.iter().enumerate() {
            let negative = i > 0 && (mask >> (i - 1)) & 1 == 1;
            for (b, x) in buf.iter_mut().zip(v) {
                if negative {
                    *b -= x;
                } else {
                    *b += x;
                }
            }
        }
        space.dual_norm_raw(buf)
    };
    let pick = |a: (f64, usize), b: (f64, usize)| match a.0.total_cmp(&b.0) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    };
    let (value, mask) = if patterns >= PARALLEL_PATTERNS {
        (0..patterns)
            .into_par_iter()
            .map_init(|| vec![0.0; n], |buf, mask| (signed_norm(mask, buf), mask))
            .reduce(|| (f64::NEG_INFINITY, usize::MAX), pick)
    } else {
        let mut buf = vec![0.0; n];
        (0..patterns)
            .map(|mask| (signed_norm(mask, &mut buf), mask))
            .fold((f64::NEG_INFINITY, usize::MAX), pick)
    };
    let signs = (0..m)
        .map(|i| {
            if i > 0 && (mask >> (i - 1)) & 1 == 1 {
                -1
            } else {
                1
            }
        })
        .collect();
    Ok((value, signs))
}

/// Per-coordinate gauge for `E = l1(n)`: `max_c Σ_i |x_i*[c]|`, with the
/// worst coordinate.
pub fn l1_gauge(space: &SpaceModel, t: &DualTuple) -> Result<(f64, usize)> {
    space.require_kind(SpaceKind::L1)?;
    t.check_dims(space)?;
    Ok(l1_gauge_raw(space.dim(), &t.vectors))
}

fn l1_gauge_raw(n: usize, vectors: &[Vec<f64>]) -> (f64, usize) {
    let mut best = (0.0, 0);
    for c in 0..n {
        let s: f64 = vectors.iter().map(|v| v[c].abs()).sum();
        if s > best.0 {
            best = (s, c);
        }
    }
    best
}

/// The admissibility gauge, by the cheapest exact route for the space.
pub fn gauge(space: &SpaceModel, t: &DualTuple) -> Result<f64> {
    if space.kind() == SpaceKind::L1 {
        Ok(l1_gauge(space, t)?.0)
    } else {
        Ok(sign_gauge(space, t)?.0)
    }
}

fn gauge_raw(space: &SpaceModel, vectors: &[Vec<f64>]) -> f64 {
    if space.kind() == SpaceKind::L1 {
        return l1_gauge_raw(space.dim(), vectors).0;
    }
    let m = vectors.len();
    if m == 0 {
        return 0.0;
    }
    let mut buf = vec![0.0; space.dim()];
    let mut best = 0.0f64;
    for mask in 0..(1usize << (m - 1)) {
        buf.iter_mut().for_each(|b| *b = 0.0);
        for (i, v) in vectors.iter().enumerate() {
            let sign = if i > 0 && (mask >> (i - 1)) & 1 == 1 {
                -1.0
            } else {
                1.0
            };
            for (b, x) in buf.iter_mut().zip(v) {
                *b += sign * x;
            }
        }
        best = best.max(space.dual_norm_raw(&buf));
    }
    best
}

/// Checks `‖Σ ξ_i x_i*‖_* ≤ 1 + tol` for every sign pattern.
pub fn is_admissible(space: &SpaceModel, t: &DualTuple, tol: f64) -> Result<Admissibility> {
    let (g, signs) = sign_gauge(space, t)?;
    Ok(verdict(g, tol, signs, None))
}

/// Linear-time admissibility for `E = l1(n)`, `E* = l∞(n)`.
pub fn is_admissible_l1(space: &SpaceModel, t: &DualTuple, tol: f64) -> Result<Admissibility> {
    let (g, c) = l1_gauge(space, t)?;
    let flip = t.vectors.first().is_some_and(|v| v[c] < 0.0);
    let signs = t
        .vectors
        .iter()
        .map(|v| if (v[c] < 0.0) != flip { -1 } else { 1 })
        .collect();
    Ok(verdict(g, tol, signs, Some(c)))
}

fn verdict(g: f64, tol: f64, signs: Vec<i8>, coordinate: Option<usize>) -> Admissibility {
    if g <= 1.0 + tol {
        Admissibility::Admissible { gauge: g }
    } else {
        Admissibility::Violated {
            signs,
            excess: g - 1.0,
            coordinate,
        }
    }
}

/// Rescales a tuple onto the boundary of the admissible set.
pub fn gauge_project(space: &SpaceModel, t: &DualTuple) -> Result<DualTuple> {
    t.check_dims(space)?;
    if space.kind() != SpaceKind::L1 && t.len() > MAX_ENUMERATION_TERMS {
        return Err(FblError::TooManyTerms {
            count: t.len(),
            max: MAX_ENUMERATION_TERMS,
        });
    }
    let g = gauge_raw(space, &t.vectors);
    if g == 0.0 {
        return Err(FblError::ZeroVector);
    }
    if !g.is_finite() {
        return Err(FblError::InvalidSpace("non-finite gauge".into()));
    }
    Ok(DualTuple::new(project_raw(space, t.vectors.clone(), g)))
}

// Divides by the gauge, then shrinks by ulps until the gauge is <= 1 exactly.
fn project_raw(space: &SpaceModel, mut vectors: Vec<Vec<f64>>, g: f64) -> Vec<Vec<f64>> {
    let mut k = 1.0 / g;
    for _ in 0..64 {
        let cand: Vec<Vec<f64>> = vectors.iter().map(|v| vector::scaled(v, k)).collect();
        if gauge_raw(space, &cand) <= 1.0 {
            return cand;
        }
        k *= 1.0 - f64::EPSILON;
    }
    vectors
        .iter_mut()
        .for_each(|v| v.iter_mut().for_each(|x| *x *= 0.5 / g));
    vectors
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub tuple: DualTuple,
    pub value: f64,
}

/// One node of the structural upper-bound derivation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecursionNode {
    pub op: &'static str,
    pub bound: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<RecursionNode>,
}

/// `‖f‖ ≤ n·‖Rf‖_∞` with `‖Rf‖_∞` bounded on a cube-sphere grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReprGridBound {
    pub resolution: usize,
    pub sup_lower: f64,
    pub sup_upper: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UpperTrace {
    pub recursive: RecursionNode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repr_grid: Option<ReprGridBound>,
}

/// A certified bracket `lower ≤ ‖f‖ ≤ upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormCertificate {
    pub lower: f64,
    pub upper: f64,
    pub witness: Witness,
    pub m: usize,
    pub budget: usize,
    pub seed: u64,
    pub upper_trace: UpperTrace,
    /// Best value at each tuple length `1..=m`.
    pub sweep: Vec<f64>,
    /// The least length from which the sweep stops improving, when that is
    /// shorter than `m`.
    pub plateau: Option<usize>,
}

impl NormCertificate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Adopts the representation bound when it is tighter.
    pub fn with_repr_bound(mut self, bound: ReprGridBound) -> Self {
        if bound.bound < self.upper && bound.bound >= self.lower {
            self.upper = bound.bound;
        }
        self.upper_trace.repr_grid = Some(bound);
        self
    }

    /// Re-checks the lower witness from scratch: admissible at tolerance
    /// zero, value reproduced exactly and within 1e-12 of `lower`, and
    /// `lower ≤ upper`.
    pub fn verify(&self, space: &SpaceModel, f: &LatticeExpr) -> Result<()> {
        let t = &self.witness.tuple;
        let admissible = if t.len() <= MAX_ENUMERATION_TERMS {
            is_admissible(space, t, 0.0)?
        } else {
            is_admissible_l1(space, t, 0.0)?
        };
        if !admissible.is_admissible() {
            return Err(FblError::Verification(format!(
                "witness tuple is not admissible: {admissible:?}"
            )));
        }
        let value = t.value_of(f)?;
        if value != self.witness.value
            || (self.lower - value).abs() > ROUNDING_SLACK * (1.0 + value)
        {
            return Err(FblError::Verification(format!(
                "witness value {value} does not reproduce lower {}",
                self.lower
            )));
        }
        if self.sweep.len() != self.m
            || self.sweep.last() != Some(&self.witness.value)
            || self.sweep.windows(2).any(|w| w[1] < w[0])
        {
            return Err(FblError::Verification(format!(
                "sweep {:?} is not a nondecreasing run ending at the witness",
                self.sweep
            )));
        }
        let recursive = norm_upper_recursive(space, f)?;
        if recursive != self.upper_trace.recursive.bound {
            return Err(FblError::Verification("recursive bound changed".into()));
        }
        if !(self.lower <= self.upper) {
            return Err(FblError::Verification(format!(
                "lower {} exceeds upper {}",
                self.lower, self.upper
            )));
        }
        Ok(())
    }
}

/// Structural upper bound: `U(δ_x) = ‖x‖`, scales by `|k|`, sums over
/// `add`/`sup`/`inf` children, unchanged through `abs`/`neg`.
pub fn norm_upper_recursive(space: &SpaceModel, f: &LatticeExpr) -> Result<f64> {
    Ok(recursive_trace(space, f)?.bound)
}

pub fn recursive_trace(space: &SpaceModel, f: &LatticeExpr) -> Result<RecursionNode> {
    check_dim(space.dim(), f.dim()?)?;
    Ok(trace(space, f, &|s, x| s.norm_raw(x)))
}

/// Lipschitz constant of `x* ↦ f(x*)` for the sup metric on `E* = l∞(n)`.
pub fn lipschitz_bound(space: &SpaceModel, f: &LatticeExpr) -> Result<f64> {
    space.require_kind(SpaceKind::L1)?;
    check_dim(space.dim(), f.dim()?)?;
    Ok(trace(space, f, &|_, x| vector::norm1(x)).bound)
}

fn trace(
    space: &SpaceModel,
    f: &LatticeExpr,
    leaf: &impl Fn(&SpaceModel, &[f64]) -> f64,
) -> RecursionNode {
    let (bound, children) = match f {
        LatticeExpr::Delta(x) => (leaf(space, x), Vec::new()),
        LatticeExpr::Scale(k, c) => {
            let child = trace(space, c, leaf);
            (k.abs() * child.bound, vec![child])
        }
        LatticeExpr::Add(cs) | LatticeExpr::Sup(cs) | LatticeExpr::Inf(cs) => {
            let children: Vec<RecursionNode> = cs.iter().map(|c| trace(space, c, leaf)).collect();
            (children.iter().map(|c| c.bound).sum(), children)
        }
        LatticeExpr::Abs(c) | LatticeExpr::Neg(c) => {
            let child = trace(space, c, leaf);
            (child.bound, vec![child])
        }
    };
    RecursionNode {
        op: f.op_name(),
        bound,
        children,
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    vectors: Vec<Vec<f64>>,
    value: f64,
}

struct SearchContext<'a> {
    space: &'a SpaceModel,
    f: &'a LatticeExpr,
    singles: Vec<Vec<f64>>,
}

/// Certified lower bound on `‖f‖` from admissible `m`-tuples.
///
/// Candidates come from structured starts (norming functionals of the
/// support, coordinate functionals, dual-ball vertices for `l1`), `budget`
/// seeded random starts, and the best `(m-1)`-tuple padded with a zero
/// vector. Structured and random starts are refined by local ascent on
/// `Σ|f(x_i*)| / gauge`. The padded warm start and the fixed per-restart
/// streams make the result nondecreasing in both `m` and `budget`.
pub fn norm_lower(
    space: &SpaceModel,
    f: &LatticeExpr,
    m: usize,
    budget: usize,
    seed: u64,
) -> Result<NormCertificate> {
    if m == 0 {
        return Err(FblError::InvalidArgument(
            "tuple length m must be >= 1".into(),
        ));
    }
    check_dim(space.dim(), f.dim()?)?;
    if space.kind() != SpaceKind::L1 && m > MAX_ENUMERATION_TERMS {
        return Err(FblError::TooManyTerms {
            count: m,
            max: MAX_ENUMERATION_TERMS,
        });
    }
    let ctx = SearchContext {
        space,
        f,
        singles: structured_singles(space, f),
    };
    let mut best: Option<Candidate> = None;
    let mut sweep = Vec::with_capacity(m);
    for level in 1..=m {
        let found = search_level(&ctx, level, budget, seed, best.as_ref());
        sweep.push(found.value.max(0.0));
        best = Some(found);
    }
    let best = best.expect("m >= 1");
    let plateau = sweep
        .iter()
        .position(|&v| v == sweep[m - 1])
        .map(|i| i + 1)
        .filter(|&k| k < m);

    let n = space.dim();
    let witness = if best.value > 0.0 {
        Witness {
            tuple: DualTuple::new(best.vectors),
            value: best.value,
        }
    } else {
        Witness {
            tuple: DualTuple::zeros(m, n),
            value: 0.0,
        }
    };
    let recursive = recursive_trace(space, f)?;
    // a witness can round a few ulps past an exact upper bound
    let lower = if witness.value > recursive.bound
        && witness.value <= recursive.bound * (1.0 + ROUNDING_SLACK)
    {
        recursive.bound
    } else {
        witness.value
    };
    let cert = NormCertificate {
        lower,
        upper: recursive.bound,
        witness,
        m,
        budget,
        seed,
        upper_trace: UpperTrace {
            recursive,
            repr_grid: None,
        },
        sweep,
        plateau,
    };
    cert.verify(space, f)?;
    Ok(cert)
}

fn structured_singles(space: &SpaceModel, f: &LatticeExpr) -> Vec<Vec<f64>> {
    let n = space.dim();
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut push = |v: Vec<f64>| {
        if !vector::is_zero(&v) && !out.iter().any(|u| u == &v) {
            out.push(v);
        }
    };
    let support = f.support().vectors;
    for v in &support {
        if let Ok(u) = space.norming_functional(v) {
            push(u);
        }
        let neg: Vec<f64> = v.iter().map(|x| -x).collect();
        if let Ok(u) = space.norming_functional(&neg) {
            push(u);
        }
    }
    let mut total = vec![0.0; n];
    for v in &support {
        total.iter_mut().zip(v).for_each(|(t, x)| *t += x);
    }
    if let Ok(u) = space.norming_functional(&total) {
        push(u);
    }
    for sign in [1.0, -1.0] {
        for c in 0..n {
            let e = vector::scaled(&vector::basis(n, c), sign);
            let d = space.dual_norm_raw(&e);
            push(vector::scaled(&e, 1.0 / d));
        }
    }
    match space.kind() {
        SpaceKind::L1 if n <= 6 => {
            for mask in 0..(1usize << n) {
                push(
                    (0..n)
                        .map(|c| if (mask >> c) & 1 == 1 { -1.0 } else { 1.0 })
                        .collect(),
                );
            }
        }
        SpaceKind::Polytope => {
            for a in space.facets() {
                let d = space.dual_norm_raw(a);
                if d > 0.0 && d.is_finite() {
                    push(vector::scaled(a, 1.0 / d));
                    push(vector::scaled(a, -1.0 / d));
                }
            }
        }
        _ => {}
    }
    out
}

fn search_level(
    ctx: &SearchContext,
    m: usize,
    budget: usize,
    seed: u64,
    prev: Option<&Candidate>,
) -> Candidate {
    let space = ctx.space;
    let n = space.dim();

    let mut starts: Vec<(u64, Vec<Vec<f64>>)> = Vec::new();
    let pad = |mut vs: Vec<Vec<f64>>| {
        vs.truncate(m);
        while vs.len() < m {
            vs.push(vec![0.0; n]);
        }
        vs
    };
    let mut tag = STRUCTURED_TAG;
    for s in &ctx.singles {
        starts.push((tag, pad(vec![s.clone()])));
        tag += 1;
    }
    let coords: Vec<Vec<f64>> = (0..n).map(|c| vector::basis(n, c)).collect();
    starts.push((tag, pad(coords)));
    tag += 1;
    let normings: Vec<Vec<f64>> = ctx
        .f
        .support()
        .vectors
        .iter()
        .filter_map(|v| space.norming_functional(v).ok())
        .collect();
    if !normings.is_empty() {
        starts.push((tag, pad(normings)));
    }
    for r in 0..budget as u64 {
        let mut rng = rng::indexed(seed, stream::NORM_RANDOM_START, m as u64, r);
        let vs = (0..m)
            .map(|_| space.sample_unit(Side::Dual, &mut rng))
            .collect();
        starts.push((r, vs));
    }

    let results: Vec<[Option<Candidate>; 2]> = starts
        .into_par_iter()
        .map(|(tag, vs)| {
            let g = gauge_raw(space, &vs);
            if !(g > 0.0) || !g.is_finite() {
                return [None, None];
            }
            let start = project_raw(space, vs, g);
            let raw = Candidate {
                value: objective(ctx.f, &start),
                vectors: start.clone(),
            };
            let mut rng = rng::indexed(seed, stream::NORM_ASCENT, m as u64, tag);
            let climbed = ascend(ctx, start, &mut rng);
            [Some(raw), climbed]
        })
        .collect();

    let mut best: Option<Candidate> = prev.map(|p| Candidate {
        vectors: pad(p.vectors.clone()),
        value: p.value,
    });
    for cand in results.into_iter().flatten().flatten() {
        best = Some(match best {
            None => cand,
            Some(b) => better(b, cand),
        });
    }
    best.unwrap_or_else(|| Candidate {
        vectors: vec![vec![0.0; n]; m],
        value: 0.0,
    })
}

// Larger value wins; ties go to the lexicographically smallest serialization.
fn better(a: Candidate, b: Candidate) -> Candidate {
    match a.value.total_cmp(&b.value) {
        Ordering::Greater => a,
        Ordering::Less => b,
        Ordering::Equal => {
            let sa = canonical::to_string(&a.vectors).unwrap_or_default();
            let sb = canonical::to_string(&b.vectors).unwrap_or_default();
            if sb < sa {
                b
            } else {
                a
            }
        }
    }
}

fn ratio(ctx: &SearchContext, vs: &[Vec<f64>]) -> f64 {
    let g = gauge_raw(ctx.space, vs);
    if g > 0.0 && g.is_finite() {
        objective(ctx.f, vs) / g
    } else {
        f64::NEG_INFINITY
    }
}

// Random local search on the scale-free ratio `Σ|f(x_i*)| / gauge`.
fn climb(
    ctx: &SearchContext,
    mut cur: Vec<Vec<f64>>,
    sigma: f64,
    iters: usize,
    rng: &mut Rng,
) -> (Vec<Vec<f64>>, f64) {
    let m = cur.len();
    let mut cur_ratio = ratio(ctx, &cur);
    let mut sigma = sigma;
    let mut failures = 0;
    for it in 0..iters {
        if sigma < 1e-10 {
            break;
        }
        let mut cand = cur.clone();
        let whole = it % 4 == 3;
        for (i, v) in cand.iter_mut().enumerate() {
            if whole || i == it % m {
                for x in v.iter_mut() {
                    let g: f64 = StandardNormal.sample(&mut *rng);
                    *x += sigma * g;
                }
            }
        }
        let r = ratio(ctx, &cand);
        if r > cur_ratio {
            let g = gauge_raw(ctx.space, &cand);
            cur = cand
                .into_iter()
                .map(|v| vector::scaled(&v, 1.0 / g))
                .collect();
            cur_ratio = r;
            failures = 0;
        } else {
            failures += 1;
            if failures >= 2 * m + 2 {
                sigma *= 0.5;
                failures = 0;
            }
        }
    }
    (cur, cur_ratio)
}

/// For `E = l1(n)`: maximizes `Σ|f(x_i*)|` exactly over the admissible
/// tuples lying in the linearity cells of `f` that contain the current
/// tuple. The cells and the sign of each `f(x_i*)` are fixed, so the
/// objective is linear; `|x_i*[c]|` is bounded through auxiliary variables.
fn polish_l1(f: &LatticeExpr, vectors: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let m = vectors.len();
    let n = vectors.first()?.len();
    let vars = 2 * m * n;
    let x = |i: usize, c: usize| i * n + c;
    let u = |i: usize, c: usize| m * n + i * n + c;
    let mut objective = vec![0.0; vars];
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut row_on = |entries: &[(usize, f64)], h: f64| {
        let mut r = vec![0.0; vars];
        for &(j, v) in entries {
            r[j] += v;
        }
        rows.push(r);
        rhs.push(h);
    };
    for (i, v) in vectors.iter().enumerate() {
        let lin = f.linearize(v);
        let sigma = if lin.value < 0.0 { -1.0 } else { 1.0 };
        for c in 0..n {
            objective[x(i, c)] = sigma * lin.gradient[c];
        }
        let on_x = |w: &[f64], k: f64| -> Vec<(usize, f64)> {
            w.iter()
                .enumerate()
                .map(|(c, a)| (x(i, c), k * a))
                .collect()
        };
        row_on(&on_x(&lin.gradient, -sigma), 0.0);
        for w in &lin.cell {
            row_on(&on_x(w, -1.0), 0.0);
        }
        for c in 0..n {
            row_on(&[(x(i, c), 1.0), (u(i, c), -1.0)], 0.0);
            row_on(&[(x(i, c), -1.0), (u(i, c), -1.0)], 0.0);
        }
    }
    for c in 0..n {
        let column: Vec<(usize, f64)> = (0..m).map(|i| (u(i, c), 1.0)).collect();
        row_on(&column, 1.0);
    }
    let sol = lp::maximize_free(&objective, &rows, &rhs).ok()?;
    Some((0..m).map(|i| sol.y[i * n..(i + 1) * n].to_vec()).collect())
}

fn ascend(ctx: &SearchContext, start: Vec<Vec<f64>>, rng: &mut Rng) -> Option<Candidate> {
    let space = ctx.space;
    let m = start.len();
    let iters = ASCENT_BASE_ITERS + ASCENT_ITERS_PER_TERM * m;
    let (mut cur, mut cur_ratio) = climb(ctx, start, 0.3, iters, rng);
    if space.kind() == SpaceKind::L1 {
        for _ in 0..POLISH_ROUNDS {
            let Some(p) = polish_l1(ctx.f, &cur) else {
                break;
            };
            let r = ratio(ctx, &p);
            if !(r > cur_ratio) {
                break;
            }
            (cur, cur_ratio) = climb(ctx, p, 0.05, iters / 2, rng);
        }
    }
    let g = gauge_raw(space, &cur);
    if !(g > 0.0) || !g.is_finite() {
        return None;
    }
    let vectors = project_raw(space, cur, g);
    Some(Candidate {
        value: objective(ctx.f, &vectors),
        vectors,
    })
}

/// Brute-force lower bound for `E = l1(2)`, `m ≤ 2`: maximizes `Σ|f(x_i*)|`
/// over a lattice of spacing `1/resolution` inside the per-coordinate
/// constraint `Σ_i |x_i*[c]| ≤ 1`. By positive homogeneity at least one
/// coordinate block can be taken on the boundary of its constraint.
pub fn grid_oracle_norm(
    space: &SpaceModel,
    f: &LatticeExpr,
    m: usize,
    resolution: usize,
) -> Result<f64> {
    space.require_kind(SpaceKind::L1)?;
    if space.dim() != 2 {
        return Err(FblError::InvalidArgument(
            "grid oracle supports dim 2 only".into(),
        ));
    }
    check_dim(2, f.dim()?)?;
    if !(1..=2).contains(&m) || resolution == 0 {
        return Err(FblError::InvalidArgument(
            "grid oracle supports m in {1, 2} and resolution >= 1".into(),
        ));
    }
    let r = resolution as i64;
    let side = (2 * r + 1) as usize;
    let h = 1.0 / resolution as f64;
    // table[i][j] = |f(i h, j h)| for i, j in -r..=r
    let table: Vec<f64> = (0..side * side)
        .into_par_iter()
        .map(|k| {
            let (i, j) = ((k / side) as i64 - r, (k % side) as i64 - r);
            f.eval_unchecked(&[i as f64 * h, j as f64 * h]).abs()
        })
        .collect();
    let at = |i: i64, j: i64| table[(i + r) as usize * side + (j + r) as usize];

    if m == 1 {
        return Ok(table.iter().copied().fold(0.0, f64::max));
    }

    // per-coordinate blocks (a, b) = (x_1*[c], x_2*[c]) with |a| + |b| <= 1
    let mut diamond = Vec::new();
    let mut boundary = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            let s = a.abs() + b.abs();
            if s <= r {
                diamond.push((a, b));
                if s == r {
                    boundary.push((a, b));
                }
            }
        }
    }
    let best = |edge: &[(i64, i64)], fill: &[(i64, i64)], edge_first: bool| {
        edge.par_iter()
            .map(|&p| {
                fill.iter().fold(0.0f64, |acc, &q| {
                    let (c1, c2) = if edge_first { (p, q) } else { (q, p) };
                    acc.max(at(c1.0, c2.0) + at(c1.1, c2.1))
                })
            })
            .reduce(|| 0.0, f64::max)
    };
    Ok(best(&boundary, &diamond, true).max(best(&boundary, &diamond, false)))
}
