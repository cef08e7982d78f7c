//! `FBL[l1(n)]` as functions on the cube sphere `S = {x* : ‖x*‖_∞ = 1}`.
//!
//! Restriction to `S` satisfies `(1/n)‖f‖ ≤ sup_S |f| ≤ ‖f‖`. Sup-norms on
//! `S` are bracketed by a facet lattice plus a Lipschitz slack.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, FblError, Result};
use crate::fbl_norm::{self, ReprGridBound};
use crate::lattice_expr::LatticeExpr;
use crate::spaces::{SpaceKind, SpaceModel};

/// Regular lattices on the `2n` facets of the cube sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    n: usize,
    resolution: usize,
    points: Vec<Vec<f64>>,
}

impl SphereGrid {
    /// Each facet `{x_c = ±1}` carries `(resolution + 1)^(n-1)` points with
    /// spacing `2/resolution` in the free coordinates.
    pub fn new(n: usize, resolution: usize) -> Result<Self> {
        if n == 0 || resolution == 0 {
            return Err(FblError::InvalidArgument(
                "sphere grid needs n >= 1 and resolution >= 1".into(),
            ));
        }
        let side = resolution + 1;
        let per_facet = side
            .checked_pow(n as u32 - 1)
            .filter(|&k| k <= 50_000_000 / (2 * n))
            .ok_or_else(|| FblError::InvalidArgument("sphere grid too large".into()))?;
        let tick = |k: usize| -1.0 + 2.0 * k as f64 / resolution as f64;
        let mut points = Vec::with_capacity(2 * n * per_facet);
        for c in 0..n {
            for s in [1.0, -1.0] {
                for mut idx in 0..per_facet {
                    let mut p = vec![0.0; n];
                    for (j, x) in p.iter_mut().enumerate() {
                        if j == c {
                            *x = s;
                        } else {
                            *x = tick(idx % side);
                            idx /= side;
                        }
                    }
                    points.push(p);
                }
            }
        }
        Ok(Self {
            n,
            resolution,
            points,
        })
    }

    /// 400 per facet edge for `n = 2`, 64 for `n = 3`, 16 for `n = 4`.
    pub fn default_for(n: usize) -> Result<Self> {
        Self::new(n, default_resolution(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Largest sup-distance from a point of the sphere to the grid.
    pub fn covering_radius(&self) -> f64 {
        1.0 / self.resolution as f64
    }

    /// `max_p h(p)` over the grid, reduced in a fixed order.
    pub fn max_of(&self, h: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
        self.points
            .par_iter()
            .map(|p| h(p))
            .reduce(|| f64::NEG_INFINITY, f64::max)
    }
}

pub fn default_resolution(n: usize) -> usize {
    match n {
        0..=2 => 400,
        3 => 64,
        4 => 16,
        _ => 8,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupBracket {
    pub lower: f64,
    pub upper: f64,
    pub lipschitz: f64,
    pub covering_radius: f64,
}

/// Brackets `sup_S |f|`: the grid maximum below, plus `Lip(f)·radius` above.
pub fn ck_sup_norm(f: &LatticeExpr, grid: &SphereGrid) -> Result<SupBracket> {
    check_dim(grid.n(), f.dim()?)?;
    let lipschitz = fbl_norm::lipschitz_bound(&SpaceModel::l1(grid.n()), f)?;
    let lower = grid.max_of(|p| f.eval_unchecked(p).abs());
    let covering_radius = grid.covering_radius();
    Ok(SupBracket {
        lower,
        upper: lower + lipschitz * covering_radius,
        lipschitz,
        covering_radius,
    })
}

/// `‖f‖ ≤ n·sup_S |f|`, with the sup bounded on `grid`.
pub fn repr_upper(f: &LatticeExpr, grid: &SphereGrid) -> Result<ReprGridBound> {
    let s = ck_sup_norm(f, grid)?;
    Ok(ReprGridBound {
        resolution: grid.resolution(),
        sup_lower: s.lower,
        sup_upper: s.upper,
        bound: grid.n() as f64 * s.upper,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub n: usize,
    pub norm_lower: f64,
    pub norm_upper: f64,
    pub sup_lower: f64,
    pub sup_upper: f64,
    /// `sup_lower ≤ norm_upper`
    pub restriction_ok: bool,
    /// `norm_lower ≤ n·sup_upper`
    pub inverse_ok: bool,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.restriction_ok && self.inverse_ok
    }
}

/// Checks the two one-sided consequences of `(1/n)‖f‖ ≤ sup_S |f| ≤ ‖f‖`
/// that lower and upper certificates can support.
pub fn sandwich_check(
    space: &SpaceModel,
    f: &LatticeExpr,
    m_max: usize,
    budget: usize,
    seed: u64,
    grid: &SphereGrid,
) -> Result<SandwichReport> {
    space.require_kind(SpaceKind::L1)?;
    check_dim(space.dim(), grid.n())?;
    let cert = fbl_norm::norm_lower(space, f, m_max, budget, seed)?;
    let upper = fbl_norm::norm_upper_recursive(space, f)?;
    let s = ck_sup_norm(f, grid)?;
    let n = space.dim() as f64;
    let slack = |x: f64| 1e-12 * (1.0 + x.abs());
    Ok(SandwichReport {
        n: space.dim(),
        norm_lower: cert.lower,
        norm_upper: upper,
        sup_lower: s.lower,
        sup_upper: s.upper,
        restriction_ok: s.lower <= upper + slack(upper),
        inverse_ok: cert.lower <= n * s.upper + slack(n * s.upper),
    })
}
