//! Drivers: octahedrality witnesses, diameters of convex combinations of
//! w*-slices of the dual ball, and the roughness probe.

use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::dual_functionals::{self, DualFunctional, Term, PARALLEL_TOL};
use crate::error::{check_dim, FblError, Result};
use crate::fbl_norm::{self, DualTuple, NormCertificate};
use crate::lattice_expr::{self, LatticeExpr};
use crate::rng::{self, stream, Rng};
use crate::spaces::{Side, SpaceKind, SpaceModel};
use crate::vector;

/// Largest certified upper bound accepted for a "unit" expression.
pub const UNIT_TOL: f64 = 1e-6;
pub const DEFAULT_ETA: f64 = 1e-3;
const ETA_HALVINGS: usize = 8;
const INDEPENDENCE_RETRIES: usize = 16;
const OCTA_STEPS: usize = 8;

fn primal_unit(space: &SpaceModel, x: &[f64]) -> Option<Vec<f64>> {
    let r = space.norm_raw(x);
    (r > 0.0 && r.is_finite()).then(|| vector::divided(x, r))
}

fn gaussian(rng: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(&mut *rng)).collect()
}

/// Certifies `‖f‖ ≤ 1 + UNIT_TOL` by recursion, or for `l1` by the
/// cube-sphere representation when recursion is too coarse.
fn certified_unit_upper(space: &SpaceModel, f: &LatticeExpr) -> Result<f64> {
    let mut upper = fbl_norm::norm_upper_recursive(space, f)?;
    if upper > 1.0 + UNIT_TOL && space.kind() == SpaceKind::L1 {
        let grid = crate::c_of_k::SphereGrid::default_for(space.dim())?;
        upper = upper.min(crate::c_of_k::repr_upper(f, &grid)?.bound);
    }
    Ok(upper)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OctaReport {
    pub x: Vec<f64>,
    /// Certificates for `f_i + δ_x`, in input order.
    pub certificates: Vec<NormCertificate>,
    pub value: f64,
    pub candidates: usize,
}

impl OctaReport {
    pub fn verify(&self, space: &SpaceModel, fs: &[LatticeExpr]) -> Result<()> {
        if self.certificates.len() != fs.len() {
            return Err(FblError::Verification("certificate count mismatch".into()));
        }
        let mut least = f64::INFINITY;
        for (f, c) in fs.iter().zip(&self.certificates) {
            c.verify(space, &f.clone().plus(LatticeExpr::delta(self.x.clone())))?;
            least = least.min(c.lower);
        }
        if least != self.value {
            return Err(FblError::Verification(format!(
                "reported value {} differs from the least certificate {least}",
                self.value
            )));
        }
        Ok(())
    }
}

/// Searches for a unit `x` making every `‖f_i + δ_x‖` large.
///
/// Candidates are `±e_c`, the normalized support vectors of the family, and
/// `budget` seeded sphere samples, each refined by a short local ascent on
/// `x`. The earliest best candidate wins, so the value is nondecreasing in
/// `budget`. `inner_budget` is the random-restart budget of every norm
/// search.
pub fn octa_witness_search(
    space: &SpaceModel,
    fs: &[LatticeExpr],
    m: usize,
    budget: usize,
    inner_budget: usize,
    seed: u64,
) -> Result<OctaReport> {
    if fs.is_empty() {
        return Err(FblError::InvalidArgument("empty family".into()));
    }
    let n = space.dim();
    for (i, f) in fs.iter().enumerate() {
        check_dim(n, f.dim()?)?;
        let upper = certified_unit_upper(space, f)?;
        if upper > 1.0 + UNIT_TOL {
            return Err(FblError::InvalidArgument(format!(
                "family member {i} has certified upper bound {upper}, not a unit element"
            )));
        }
    }

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    for sign in [1.0, -1.0] {
        for c in 0..n {
            candidates.extend(primal_unit(
                space,
                &vector::scaled(&vector::basis(n, c), sign),
            ));
        }
    }
    for f in fs {
        for v in f.support().vectors {
            if let Some(u) = primal_unit(space, &v) {
                if !candidates.contains(&u) {
                    candidates.push(u);
                }
            }
        }
    }
    for r in 0..budget as u64 {
        let mut rng = rng::indexed(seed, stream::OCTA, 0, r);
        candidates.push(space.sample_unit(Side::Primal, &mut rng));
    }
    let structured = candidates.len() - budget;

    let score = |x: &[f64]| -> Result<(f64, Vec<NormCertificate>)> {
        let certs = fs
            .iter()
            .map(|f| {
                let g = f.clone().plus(LatticeExpr::delta(x.to_vec()));
                fbl_norm::norm_lower(space, &g, m, inner_budget, seed)
            })
            .collect::<Result<Vec<_>>>()?;
        let value = certs.iter().map(|c| c.lower).fold(f64::INFINITY, f64::min);
        Ok((value, certs))
    };

    type Scored = (Vec<f64>, f64, Vec<NormCertificate>);
    let results: Vec<Result<Scored>> = candidates
        .par_iter()
        .enumerate()
        .map(|(i, x0)| {
            // random candidates keep their stream index when budget changes
            let tag = if i < structured {
                (1 << 32) + i as u64
            } else {
                (i - structured) as u64
            };
            let mut rng = rng::indexed(seed, stream::OCTA, 1, tag);
            let mut x = x0.clone();
            let (mut value, mut certs) = score(&x)?;
            let mut sigma = 0.25;
            for _ in 0..OCTA_STEPS {
                let step = gaussian(&mut rng, n);
                let moved: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a + sigma * b).collect();
                let Some(y) = primal_unit(space, &moved) else {
                    continue;
                };
                let (v, c) = score(&y)?;
                if v > value {
                    (x, value, certs) = (y, v, c);
                } else {
                    sigma *= 0.5;
                }
            }
            Ok((x, value, certs))
        })
        .collect();

    let mut best: Option<(Vec<f64>, f64, Vec<NormCertificate>)> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.1 > b.1) {
            best = Some(r);
        }
    }
    let (x, value, certificates) = best.expect("at least 2n candidates");
    let report = OctaReport {
        x,
        certificates,
        value,
        candidates: candidates.len(),
    };
    report.verify(space, fs)?;
    Ok(report)
}

/// `S(B, f, alpha) = {a ∈ B_{FBL[E]*} : a(f) > 1 - alpha}` for an `f` whose
/// certified norm interval `[lower, upper]` contains 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceSpec {
    pub f: LatticeExpr,
    pub alpha: f64,
    pub lower: f64,
    pub upper: f64,
}

impl SliceSpec {
    pub fn new(f: LatticeExpr, alpha: f64, lower: f64, upper: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(FblError::InvalidArgument(format!(
                "slice depth must lie in (0, 1), got {alpha}"
            )));
        }
        if !(lower <= 1.0 + 1e-9 && upper >= 1.0 - 1e-9 && lower <= upper) {
            return Err(FblError::InvalidArgument(format!(
                "norm interval [{lower}, {upper}] does not contain 1"
            )));
        }
        Ok(Self {
            f,
            alpha,
            lower,
            upper,
        })
    }

    /// Certifies the norm of `f` and builds the slice.
    pub fn certify(
        space: &SpaceModel,
        f: LatticeExpr,
        alpha: f64,
        m: usize,
        budget: usize,
        seed: u64,
    ) -> Result<Self> {
        let cert = fbl_norm::norm_lower(space, &f, m, budget, seed)?;
        Self::new(f, alpha, cert.lower, cert.upper)
    }

    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    /// `a(f) > 1 - alpha` and the bracket certifies `‖a‖ ≤ 1`.
    pub fn contains(&self, space: &SpaceModel, a: &DualFunctional) -> Result<bool> {
        let value = dual_functionals::apply(a, &self.f)?;
        let upper = dual_functionals::bracket(space, a)?.upper;
        Ok(value > 1.0 - self.alpha && upper <= 1.0)
    }
}

/// An element `Σ sign(f(x_i*)) δ_{x_i*}` of the slice built from the best
/// admissible tuple found for `f`.
pub fn slice_inhabit(
    space: &SpaceModel,
    slice: &SliceSpec,
    m: usize,
    budget: usize,
    seed: u64,
) -> Result<DualFunctional> {
    if !(slice.alpha > slice.gap()) {
        return Err(FblError::InvalidArgument(format!(
            "slice depth {} does not exceed the certificate gap {}",
            slice.alpha,
            slice.gap()
        )));
    }
    let cert = fbl_norm::norm_lower(space, &slice.f, m, budget, seed)?;
    let target = 1.0 - slice.alpha;
    if !(cert.lower > target) {
        return Err(FblError::SearchFailed {
            best: cert.lower,
            target,
            detail: format!("m = {m}, budget = {budget}"),
        });
    }
    let a = signed_functional(&slice.f, &cert.witness.tuple);
    if !slice.contains(space, &a)? {
        return Err(FblError::Verification(
            "inhabitant fails slice membership".into(),
        ));
    }
    Ok(a)
}

fn signed_functional(f: &LatticeExpr, tuple: &DualTuple) -> DualFunctional {
    DualFunctional::new(
        tuple
            .vectors
            .iter()
            .filter_map(|x| {
                let v = f.eval_unchecked(x);
                (v != 0.0 && !vector::is_zero(x)).then(|| Term {
                    gamma: v.signum(),
                    xs: x.clone(),
                })
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiameterMethod {
    Formula,
    Witness,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiameterCertificate {
    pub u: Vec<DualFunctional>,
    pub v: Vec<DualFunctional>,
    pub lambdas: Vec<f64>,
    /// Certified lower bound on `‖Σ λ_i (u_i - v_i)‖`.
    pub value: f64,
    pub method: DiameterMethod,
    pub formula_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_value: Option<f64>,
    pub distance_bound: f64,
    pub alpha_constant: f64,
    /// Perturbation size that kept each slice inhabited.
    pub etas: Vec<f64>,
}

impl DiameterCertificate {
    pub fn combination(&self) -> DualFunctional {
        let mut out = DualFunctional::new(Vec::new());
        for ((u, v), &l) in self.u.iter().zip(&self.v).zip(&self.lambdas) {
            out = out.plus_scaled(l, u).plus_scaled(-l, v);
        }
        out
    }

    /// Re-checks membership of every `u_i`, `v_i` and recomputes the value.
    pub fn verify(&self, space: &SpaceModel, slices: &[SliceSpec]) -> Result<()> {
        for (i, s) in slices.iter().enumerate() {
            for a in [&self.u[i], &self.v[i]] {
                if !s.contains(space, a)? {
                    return Err(FblError::Verification(format!(
                        "functional for slice {i} left its slice"
                    )));
                }
            }
        }
        let total = self.combination();
        let formula = dual_functionals::dirac_separation_value(space, &total, self.distance_bound)?;
        let mut value = formula;
        if let Some(w) = self.witness_value {
            let again = dual_functionals::dual_lower_via_witness(space, &total, None)?.value;
            if again != w {
                return Err(FblError::Verification("witness value changed".into()));
            }
            value = value.max(w);
        }
        if formula != self.formula_value || value != self.value {
            return Err(FblError::Verification(format!(
                "diameter value {} does not reproduce ({value})",
                self.value
            )));
        }
        let cap = 2.0 * self.lambdas.iter().sum::<f64>();
        if value > cap * (1.0 + 1e-12) {
            return Err(FblError::Verification(format!(
                "diameter bound {value} exceeds the ball diameter {cap}"
            )));
        }
        Ok(())
    }
}

fn perturb_tuple(
    space: &SpaceModel,
    tuple: &[Vec<f64>],
    eta: f64,
    rng: &mut Rng,
) -> Option<Vec<Vec<f64>>> {
    let moved: Vec<Vec<f64>> = tuple
        .iter()
        .map(|x| {
            let g = gaussian(rng, x.len());
            let k = eta * vector::norm2(x) / vector::norm2(&g);
            x.iter().zip(&g).map(|(a, b)| a + k * b).collect()
        })
        .collect();
    fbl_norm::gauge_project(space, &DualTuple::new(moved))
        .ok()
        .map(|t| t.vectors)
}

// Turns a perturbed tuple into a functional with the inhabitant's signs,
// normalized by its bracket upper bound.
fn normalized(space: &SpaceModel, signs: &[f64], tuple: Vec<Vec<f64>>) -> Result<DualFunctional> {
    let a = DualFunctional::from_pairs(signs.iter().copied().zip(tuple));
    let upper = dual_functionals::bracket(space, &a)?.upper;
    if !(upper > 0.0) {
        return Err(FblError::ZeroVector);
    }
    Ok(a.scaled(1.0 / upper))
}

fn all_independent(fs: &[&DualFunctional]) -> bool {
    let points: Vec<&Vec<f64>> = fs
        .iter()
        .flat_map(|a| a.terms.iter().map(|t| &t.xs))
        .collect();
    points.iter().enumerate().all(|(i, p)| {
        points[i + 1..]
            .iter()
            .all(|q| vector::line_angle(p, q) >= PARALLEL_TOL)
    })
}

/// Lower bound on the diameter of `Σ λ_i S_i` for slices `S_i` of the dual
/// ball: each slice is inhabited, its inhabitant perturbed twice into
/// `u_i, v_i` in general position, and `‖Σ λ_i (u_i - v_i)‖` bounded below
/// by Dirac separation (and, for `l1`, by an explicit witness).
pub fn cc_slice_diameter(
    space: &SpaceModel,
    slices: &[SliceSpec],
    lambdas: &[f64],
    eta: f64,
    m: usize,
    budget: usize,
    seed: u64,
) -> Result<DiameterCertificate> {
    if slices.is_empty() || slices.len() != lambdas.len() {
        return Err(FblError::InvalidArgument(
            "need one weight per slice and at least one slice".into(),
        ));
    }
    if lambdas.iter().any(|&l| !(l >= 0.0)) || (lambdas.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(FblError::InvalidArgument(format!(
            "weights {lambdas:?} are not a convex combination"
        )));
    }
    if !(eta > 0.0) {
        return Err(FblError::InvalidArgument(
            "perturbation must be positive".into(),
        ));
    }
    let (d, _) = space.bm_distance_upper();
    let alpha_constant = space.alpha_constant()?;

    let inhabitants = slices
        .iter()
        .enumerate()
        .map(|(i, s)| slice_inhabit(space, s, m, budget, seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>>>()?;

    let mut chosen: Vec<(DualFunctional, DualFunctional, f64)> = Vec::new();
    for (i, (s, a)) in slices.iter().zip(&inhabitants).enumerate() {
        let signs: Vec<f64> = a.terms.iter().map(|t| t.gamma).collect();
        let tuple: Vec<Vec<f64>> = a.terms.iter().map(|t| t.xs.clone()).collect();
        let mut found = None;
        'eta: for h in 0..=ETA_HALVINGS {
            let eta_h = eta / f64::powi(2.0, h as i32);
            for attempt in 0..INDEPENDENCE_RETRIES as u64 {
                let mut rng =
                    rng::indexed(seed, stream::PERTURB, i as u64, (h as u64) << 16 | attempt);
                let (Some(y), Some(z)) = (
                    perturb_tuple(space, &tuple, eta_h, &mut rng),
                    perturb_tuple(space, &tuple, eta_h, &mut rng),
                ) else {
                    continue;
                };
                let u = normalized(space, &signs, y)?;
                let v = normalized(space, &signs, z)?;
                if !(s.contains(space, &u)? && s.contains(space, &v)?) {
                    continue 'eta;
                }
                let mut all: Vec<&DualFunctional> =
                    chosen.iter().flat_map(|(u, v, _)| [u, v]).collect();
                all.extend([&u, &v]);
                if all_independent(&all) {
                    found = Some((u, v, eta_h));
                    break 'eta;
                }
            }
        }
        match found {
            Some(c) => chosen.push(c),
            None => {
                return Err(FblError::SearchFailed {
                    best: 0.0,
                    target: 1.0 - s.alpha,
                    detail: format!(
                        "slice {i}: no perturbation of size >= {} kept membership and independence",
                        eta / f64::powi(2.0, ETA_HALVINGS as i32)
                    ),
                })
            }
        }
    }

    let mut cert = DiameterCertificate {
        u: chosen.iter().map(|c| c.0.clone()).collect(),
        v: chosen.iter().map(|c| c.1.clone()).collect(),
        lambdas: lambdas.to_vec(),
        value: 0.0,
        method: DiameterMethod::Formula,
        formula_value: 0.0,
        witness_value: None,
        distance_bound: d,
        alpha_constant,
        etas: chosen.iter().map(|c| c.2).collect(),
    };
    let total = cert.combination();
    cert.formula_value = dual_functionals::dirac_separation_value(space, &total, d)?;
    cert.value = cert.formula_value;
    if space.kind() == SpaceKind::L1 {
        let w = dual_functionals::dual_lower_via_witness(space, &total, None)?.value;
        cert.witness_value = Some(w);
        if w > cert.value {
            cert.value = w;
            cert.method = DiameterMethod::Witness;
        }
    }
    let cap = 2.0 * lambdas.iter().sum::<f64>();
    if cert.value > cap * (1.0 + 1e-12) {
        return Err(FblError::Verification(format!(
            "diameter bound {} exceeds the ball diameter {cap}",
            cert.value
        )));
    }
    cert.verify(space, slices)?;
    Ok(cert)
}

/// A random expression of certified norm 1 with a gap of at most
/// `UNIT_TOL`: a normalized point evaluation, or for `l1` also
/// `Σ a_c |δ_{e_c}|` and `sup_c a_c |δ_{e_c}|` normalized, possibly negated.
pub fn random_tight_unit(
    space: &SpaceModel,
    m: usize,
    budget: usize,
    seed: u64,
) -> Result<LatticeExpr> {
    let n = space.dim();
    for attempt in 0..64u64 {
        let mut rng = rng::indexed(seed, stream::FAMILY, 0, attempt);
        let kinds = if space.kind() == SpaceKind::L1 { 3 } else { 1 };
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
        let abs_coords = || (0..n).map(|c| LatticeExpr::abs(LatticeExpr::coordinate(n, c)));
        let f = match rng.random_range(0..kinds) {
            0 => {
                let x = space.sample_unit(Side::Primal, &mut rng);
                LatticeExpr::delta(x)
            }
            1 => {
                let total: f64 = weights.iter().sum();
                let parts = abs_coords()
                    .zip(&weights)
                    .map(|(e, w)| e.scaled(w / total))
                    .collect();
                if n == 1 {
                    abs_coords().next().expect("n = 1")
                } else {
                    LatticeExpr::add(parts)?
                }
            }
            _ => {
                let total: f64 = weights.iter().sum();
                let parts = abs_coords()
                    .zip(&weights)
                    .map(|(e, w)| e.scaled(w / total))
                    .collect();
                if n == 1 {
                    abs_coords().next().expect("n = 1")
                } else {
                    LatticeExpr::sup(parts)?
                }
            }
        };
        let f = if rng.random_bool(0.5) {
            LatticeExpr::neg(f)
        } else {
            f
        };
        let cert = fbl_norm::norm_lower(space, &f, m, budget, seed)?;
        if cert.width() <= UNIT_TOL
            && (cert.lower - 1.0).abs() <= UNIT_TOL
            && cert.upper <= 1.0 + UNIT_TOL
        {
            return Ok(f);
        }
    }
    Err(FblError::SearchFailed {
        best: 0.0,
        target: 1.0,
        detail: "no tight unit expression in 64 draws".into(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleResult {
    pub t: f64,
    pub quotient: f64,
    pub direction: String,
    pub lower_plus: f64,
    pub lower_minus: f64,
    pub h_upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoughReport {
    pub f_lower: f64,
    pub f_upper: f64,
    pub alpha_constant: f64,
    pub scales: Vec<ScaleResult>,
}

impl RoughReport {
    pub fn best(&self) -> f64 {
        self.scales
            .iter()
            .map(|s| s.quotient)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Certified roughness quotients
/// `(L(f+h) + L(f-h) - 2U(f)) / U(h)` for `h = t·d` over a finite family of
/// unit directions `d`: `M_n`, sign interpolants (`l1` only), and `budget`
/// random expressions.
pub fn rough_probe(
    space: &SpaceModel,
    f: &LatticeExpr,
    scales: &[f64],
    budget: usize,
    seed: u64,
) -> Result<RoughReport> {
    let n = space.dim();
    check_dim(n, f.dim()?)?;
    if scales.is_empty() || scales.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
        return Err(FblError::InvalidArgument("scales must be positive".into()));
    }
    let m = n.max(2);
    let f_cert = fbl_norm::norm_lower(space, f, m, budget, seed)?;
    if f_cert.width() > UNIT_TOL {
        return Err(FblError::InvalidArgument(format!(
            "rough probe needs a tight certificate, got [{}, {}]",
            f_cert.lower, f_cert.upper
        )));
    }

    let mut directions: Vec<(String, LatticeExpr)> =
        vec![("max_abs".into(), LatticeExpr::max_abs_coordinates(n))];
    if space.kind() == SpaceKind::L1 {
        for k in 0..2u64 {
            let mut rng = rng::indexed(seed, stream::ROUGH, 0, k);
            let p = space.sample_unit(Side::Dual, &mut rng);
            let q = vector::scaled(&p, -1.0);
            let s: i8 = if rng.random_bool(0.5) { 1 } else { -1 };
            let g = dual_functionals::sign_interpolant(space, &[p, q], &[s, s], 0.5)?;
            directions.push((format!("interpolant_{k}"), g.expr));
        }
    }
    for r in 0..budget as u64 {
        let e = lattice_expr::random_expr(n, 3, rng::indexed(seed, stream::ROUGH, 1, r).random())?;
        let u = fbl_norm::norm_upper_recursive(space, &e)?;
        if u > 0.0 {
            directions.push((format!("random_{r}"), e.scaled(1.0 / u)));
        }
    }

    let results = scales
        .iter()
        .map(|&t| {
            let per_direction = directions
                .par_iter()
                .map(|(name, d)| {
                    let h = d.clone().scaled(t);
                    let h_upper = fbl_norm::norm_upper_recursive(space, &h)?;
                    let plus =
                        fbl_norm::norm_lower(space, &f.clone().plus(h.clone()), m, budget, seed)?;
                    let minus = fbl_norm::norm_lower(space, &f.clone().minus(h), m, budget, seed)?;
                    let quotient = (plus.lower + minus.lower - 2.0 * f_cert.upper) / h_upper;
                    Ok(ScaleResult {
                        t,
                        quotient,
                        direction: name.clone(),
                        lower_plus: plus.lower,
                        lower_minus: minus.lower,
                        h_upper,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let mut best: Option<ScaleResult> = None;
            for r in per_direction {
                if best.as_ref().is_none_or(|b| r.quotient > b.quotient) {
                    best = Some(r);
                }
            }
            Ok(best.expect("at least one direction"))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(RoughReport {
        f_lower: f_cert.lower,
        f_upper: f_cert.upper,
        alpha_constant: space.alpha_constant()?,
        scales: results,
    })
}

/// One line of the flat run summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub experiment: String,
    pub space: String,
    pub n: usize,
    pub value: f64,
    pub alpha: f64,
    pub seed: u64,
    pub budget: usize,
    pub wall_time: f64,
}
