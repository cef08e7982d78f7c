//! Finite-dimensional normed spaces `E` with their duals.
//!
//! A [`SpaceModel`] answers the primal norm, the dual norm, norming
//! functionals and sphere samples. Polytope spaces are described by facet
//! functionals `a_j` with unit ball `{x : |<a_j, x>| <= 1 for all j}`.

use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, FblError, Result};
use crate::lp;
use crate::rng::{self, stream, Rng};
use crate::vector::{self, dot, lex_cmp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    L1,
    L2,
    Linf,
    Polytope,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::L1 => "l1",
            SpaceKind::L2 => "l2",
            SpaceKind::Linf => "linf",
            SpaceKind::Polytope => "polytope",
        }
    }
}

/// Which sphere to sample: `S_E` or `S_{E*}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Primal,
    Dual,
}

/// On-disk descriptor: `{"kind":..,"dim":n,"facets":[[..],..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDescriptor {
    pub kind: SpaceKind,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDescriptor", into = "SpaceDescriptor")]
pub struct SpaceModel {
    kind: SpaceKind,
    dim: usize,
    facets: Vec<Vec<f64>>,
}

impl TryFrom<SpaceDescriptor> for SpaceModel {
    type Error = FblError;

    fn try_from(d: SpaceDescriptor) -> Result<Self> {
        match (d.kind, d.facets) {
            (SpaceKind::Polytope, Some(facets)) => {
                let model = SpaceModel::polytope(facets)?;
                check_dim(d.dim, model.dim)?;
                Ok(model)
            }
            (SpaceKind::Polytope, None) => Err(FblError::InvalidSpace(
                "polytope descriptor needs facets".into(),
            )),
            (_, Some(_)) => Err(FblError::InvalidSpace(
                "facets are only allowed for kind polytope".into(),
            )),
            (kind, None) => SpaceModel::standard(kind, d.dim),
        }
    }
}

impl From<SpaceModel> for SpaceDescriptor {
    fn from(s: SpaceModel) -> Self {
        SpaceDescriptor {
            kind: s.kind,
            dim: s.dim,
            facets: (s.kind == SpaceKind::Polytope).then_some(s.facets),
        }
    }
}

impl std::fmt::Display for SpaceModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            SpaceKind::Polytope => {
                write!(f, "polytope({}, {} facets)", self.dim, self.facets.len())
            }
            kind => write!(f, "{}({})", kind.name(), self.dim),
        }
    }
}

impl SpaceModel {
    pub fn l1(dim: usize) -> Self {
        Self::standard(SpaceKind::L1, dim).expect("dim >= 1")
    }

    pub fn l2(dim: usize) -> Self {
        Self::standard(SpaceKind::L2, dim).expect("dim >= 1")
    }

    pub fn linf(dim: usize) -> Self {
        Self::standard(SpaceKind::Linf, dim).expect("dim >= 1")
    }

    pub fn standard(kind: SpaceKind, dim: usize) -> Result<Self> {
        if kind == SpaceKind::Polytope {
            return Err(FblError::InvalidSpace(
                "polytope spaces are built from facets".into(),
            ));
        }
        if dim == 0 {
            return Err(FblError::InvalidSpace(
                "dimension must be at least 1".into(),
            ));
        }
        Ok(Self {
            kind,
            dim,
            facets: Vec::new(),
        })
    }

    /// Unit ball `{x : |<a_j, x>| <= 1}`; the facets must span the space.
    pub fn polytope(facets: Vec<Vec<f64>>) -> Result<Self> {
        let dim = facets
            .first()
            .map(Vec::len)
            .ok_or_else(|| FblError::InvalidSpace("no facets".into()))?;
        if dim == 0 {
            return Err(FblError::InvalidSpace(
                "dimension must be at least 1".into(),
            ));
        }
        for a in &facets {
            check_dim(dim, a.len())?;
            if a.iter().any(|x| !x.is_finite()) {
                return Err(FblError::InvalidSpace("non-finite facet entry".into()));
            }
        }
        let m = DMatrix::from_fn(facets.len(), dim, |i, j| facets[i][j]);
        if m.rank(1e-10) < dim {
            return Err(FblError::InvalidSpace(
                "facets do not span the space (unbounded ball)".into(),
            ));
        }
        Ok(Self {
            kind: SpaceKind::Polytope,
            dim,
            facets,
        })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Vec<f64>] {
        &self.facets
    }

    pub fn require_kind(&self, kind: SpaceKind) -> Result<()> {
        if self.kind != kind {
            return Err(FblError::WrongKind {
                required: kind.name(),
                got: self.to_string(),
            });
        }
        Ok(())
    }

    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self.norm_raw(x))
    }

    pub(crate) fn norm_raw(&self, x: &[f64]) -> f64 {
        match self.kind {
            SpaceKind::L1 => vector::norm1(x),
            SpaceKind::L2 => vector::norm2(x),
            SpaceKind::Linf => vector::norm_inf(x),
            SpaceKind::Polytope => self.facets.iter().fold(0.0, |m, a| m.max(dot(a, x).abs())),
        }
    }

    pub fn dual_norm(&self, xs: &[f64]) -> Result<f64> {
        check_dim(self.dim, xs.len())?;
        match self.kind {
            SpaceKind::Polytope => self.polytope_dual_norm(xs),
            _ => Ok(self.dual_norm_raw(xs)),
        }
    }

    /// Dual norm without dimension checks. A polytope LP failure (impossible
    /// for a validated model) surfaces as `+inf`.
    pub(crate) fn dual_norm_raw(&self, xs: &[f64]) -> f64 {
        match self.kind {
            SpaceKind::L1 => vector::norm_inf(xs),
            SpaceKind::L2 => vector::norm2(xs),
            SpaceKind::Linf => vector::norm1(xs),
            SpaceKind::Polytope => self.polytope_dual_norm(xs).unwrap_or(f64::INFINITY),
        }
    }

    // support function of the primal ball: max <xs, y> s.t. |<a_j, y>| <= 1
    fn polytope_dual_norm(&self, xs: &[f64]) -> Result<f64> {
        if vector::is_zero(xs) {
            return Ok(0.0);
        }
        let mut rows = Vec::with_capacity(2 * self.facets.len());
        for a in &self.facets {
            rows.push(a.clone());
            rows.push(a.iter().map(|v| -v).collect());
        }
        let h = vec![1.0; rows.len()];
        let sol = lp::maximize_free(xs, &rows, &h)?;
        Ok(sol.value.max(0.0))
    }

    /// A dual vector `x*` with `||x*||_* = 1` and `<x*, x> = ||x||`. On a
    /// face of the dual ball the lexicographically smallest extreme point is
    /// returned.
    pub fn norming_functional(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        if vector::is_zero(x) {
            return Err(FblError::ZeroVector);
        }
        let out = match self.kind {
            SpaceKind::L1 => x
                .iter()
                .map(|&v| if v > 0.0 { 1.0 } else { -1.0 })
                .collect(),
            SpaceKind::L2 => vector::scaled(x, 1.0 / vector::norm2(x)),
            SpaceKind::Linf => {
                let peak = vector::norm_inf(x);
                let candidates =
                    x.iter()
                        .enumerate()
                        .filter(|(_, v)| v.abs() == peak)
                        .map(|(i, v)| {
                            let mut e = vec![0.0; self.dim];
                            e[i] = v.signum();
                            e
                        });
                lex_min(candidates)
            }
            SpaceKind::Polytope => {
                let values: Vec<f64> = self.facets.iter().map(|a| dot(a, x)).collect();
                let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let candidates = self
                    .facets
                    .iter()
                    .zip(&values)
                    .filter(|(_, v)| v.abs() >= peak * (1.0 - 1e-12))
                    .map(|(a, v)| vector::scaled(a, v.signum()));
                lex_min(candidates)
            }
        };
        Ok(out)
    }

    /// `count` deterministic samples of the unit sphere of `E` or `E*`.
    pub fn sample_sphere(&self, which: Side, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = rng::seeded(seed, stream::SPHERE);
        (0..count)
            .map(|_| self.sample_unit(which, &mut rng))
            .collect()
    }

    pub(crate) fn sample_unit(&self, which: Side, rng: &mut Rng) -> Vec<f64> {
        loop {
            let g: Vec<f64> = (0..self.dim)
                .map(|_| StandardNormal.sample(&mut *rng))
                .collect();
            let r = match which {
                Side::Primal => self.norm_raw(&g),
                Side::Dual => self.dual_norm_raw(&g),
            };
            if r > 1e-300 && r.is_finite() {
                return vector::divided(&g, r);
            }
        }
    }

    /// Certified upper bound on the multiplicative Banach–Mazur distance
    /// between `l1(n)` and this space.
    pub fn bm_distance_upper(&self) -> (f64, OperatorPair) {
        let pair = banach_mazur_search(self);
        (pair.cost, pair)
    }

    /// `2 / (n d)` with `d` the certified distance upper bound.
    pub fn alpha_constant(&self) -> Result<f64> {
        if self.dim < 2 {
            return Err(FblError::InvalidArgument(
                "the slice-diameter constant needs dim >= 2".into(),
            ));
        }
        let (d, _) = self.bm_distance_upper();
        Ok(2.0 / (self.dim as f64 * d))
    }
}

fn lex_min(candidates: impl Iterator<Item = Vec<f64>>) -> Vec<f64> {
    candidates
        .min_by(|a, b| lex_cmp(a, b))
        .expect("nonzero input has a peak")
}

/// An isomorphism `T : l1(n) -> E` with its inverse and `cost = ||T|| ||T^-1||`.
#[derive(Debug, Clone, Serialize)]
pub struct OperatorPair {
    pub t: Vec<Vec<f64>>,
    pub t_inv: Vec<Vec<f64>>,
    pub norm_t: f64,
    pub norm_t_inv: f64,
    pub cost: f64,
}

impl OperatorPair {
    /// Recomputes both operator norms from `t` alone.
    pub fn evaluate(space: &SpaceModel, t: &DMatrix<f64>) -> Option<OperatorPair> {
        let n = space.dim;
        if t.nrows() != n || t.ncols() != n {
            return None;
        }
        let t_inv = t.clone().try_inverse()?;
        let residual = (t * &t_inv - DMatrix::<f64>::identity(n, n)).amax();
        if !(residual <= 1e-12) {
            return None;
        }
        // ||T||_{l1 -> E} is attained on a basis vector
        let norm_t = (0..n)
            .map(|j| space.norm_raw(t.column(j).as_slice()))
            .fold(0.0, f64::max);
        // ||T^-1||_{E -> l1} = max_s ||(T^-1)^T s||_*
        let tt = t_inv.transpose();
        let mut norm_t_inv = 0.0f64;
        let mut s = vec![1.0; n];
        for mask in 0u64..(1u64 << (n - 1)) {
            for (i, si) in s.iter_mut().enumerate().skip(1) {
                *si = if mask >> (i - 1) & 1 == 1 { -1.0 } else { 1.0 };
            }
            let v = &tt * nalgebra::DVector::from_column_slice(&s);
            norm_t_inv = norm_t_inv.max(space.dual_norm_raw(v.as_slice()));
        }
        let cost = norm_t * norm_t_inv;
        if !cost.is_finite() || cost < 1.0 - 1e-12 {
            return None;
        }
        Some(OperatorPair {
            t: rows_of(t),
            t_inv: rows_of(&t_inv),
            norm_t,
            norm_t_inv,
            cost,
        })
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.t.len();
        DMatrix::from_fn(n, n, |i, j| self.t[i][j])
    }
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

const BM_SEED: u64 = 0x5eed_b411;
const BM_RESTARTS: u64 = 12;
const BM_STEPS: usize = 400;

fn banach_mazur_search(space: &SpaceModel) -> OperatorPair {
    let n = space.dim;
    let identity = DMatrix::<f64>::identity(n, n);
    let start = OperatorPair::evaluate(space, &identity).expect("identity is invertible");
    if space.kind == SpaceKind::L1 {
        return start;
    }

    let mut starts = vec![identity.clone()];
    if n >= 2 {
        // 2x2 blocks ((1,1),(1,-1)) carry l1(2) onto linf(2)
        let mut blocks = DMatrix::<f64>::identity(n, n);
        for b in (0..n - 1).step_by(2) {
            blocks[(b, b + 1)] = 1.0;
            blocks[(b + 1, b)] = 1.0;
            blocks[(b + 1, b + 1)] = -1.0;
        }
        starts.push(blocks);
    }
    if n.is_power_of_two() && n >= 4 {
        starts.push(DMatrix::from_fn(n, n, |i, j| {
            if (i & j).count_ones() % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        }));
    }
    for r in 0..BM_RESTARTS {
        let mut rng = rng::indexed(BM_SEED, stream::BANACH_MAZUR, 0, r);
        starts.push(DMatrix::from_fn(n, n, |_, _| {
            StandardNormal.sample(&mut rng)
        }));
    }

    let mut best = start;
    for (i, t0) in starts.into_iter().enumerate() {
        let mut rng = rng::indexed(BM_SEED, stream::BANACH_MAZUR, 1, i as u64);
        let Some(local) = descend(space, t0, &mut rng) else {
            continue;
        };
        if local.cost < best.cost {
            best = local;
        }
    }
    best
}

fn descend(space: &SpaceModel, t0: DMatrix<f64>, rng: &mut Rng) -> Option<OperatorPair> {
    let n = space.dim;
    let mut t = t0;
    let mut cur = OperatorPair::evaluate(space, &t)?;
    let mut sigma = 0.25;
    let mut failures = 0;
    for _ in 0..BM_STEPS {
        if sigma < 1e-9 {
            break;
        }
        let scale = t.amax().max(1e-300);
        let mut cand = t.clone();
        if rng.random_bool(0.5) {
            let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
            let g: f64 = StandardNormal.sample(&mut *rng);
            cand[(i, j)] += sigma * scale * g;
        } else {
            for v in cand.iter_mut() {
                let g: f64 = StandardNormal.sample(&mut *rng);
                *v += sigma * scale * g;
            }
        }
        match OperatorPair::evaluate(space, &cand) {
            Some(p) if p.cost < cur.cost => {
                t = cand;
                cur = p;
                failures = 0;
            }
            _ => {
                failures += 1;
                if failures >= 8 {
                    sigma *= 0.5;
                    failures = 0;
                }
            }
        }
    }
    Some(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_polytope() -> SpaceModel {
        SpaceModel::polytope(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn norm_examples() {
        assert_eq!(SpaceModel::l1(2).norm(&[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(SpaceModel::l1(2).norm(&[0.5, -0.5]).unwrap(), 1.0);
        assert_eq!(square_polytope().norm(&[0.3, -0.7]).unwrap(), 0.7);
        assert!(matches!(
            SpaceModel::l2(3).norm(&[1.0, 2.0]),
            Err(FblError::DimensionMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn dual_norm_examples() {
        assert_eq!(SpaceModel::l1(2).dual_norm(&[0.5, 0.5]).unwrap(), 0.5);
        assert_eq!(SpaceModel::l2(3).dual_norm(&[1.0, 2.0, 2.0]).unwrap(), 3.0);
        let v = square_polytope().dual_norm(&[1.0, 1.0]).unwrap();
        assert!((v - 2.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn norming_functional_examples() {
        assert_eq!(
            SpaceModel::l1(2).norming_functional(&[2.0, -1.0]).unwrap(),
            vec![1.0, -1.0]
        );
        let v = SpaceModel::l2(2).norming_functional(&[3.0, 4.0]).unwrap();
        assert!((v[0] - 0.6).abs() < 1e-15 && (v[1] - 0.8).abs() < 1e-15);
        assert_eq!(
            SpaceModel::linf(2).norming_functional(&[1.0, 0.5]).unwrap(),
            vec![1.0, 0.0]
        );
        assert!(matches!(
            SpaceModel::l2(2).norming_functional(&[0.0, 0.0]),
            Err(FblError::ZeroVector)
        ));
    }

    #[test]
    fn norming_functional_ties_pick_lexicographic_minimum() {
        // zero coordinate in l1: the face is a segment, -1 is smallest
        assert_eq!(
            SpaceModel::l1(2).norming_functional(&[1.0, 0.0]).unwrap(),
            vec![1.0, -1.0]
        );
        // two peaks in linf: e2 < e1 lexicographically
        assert_eq!(
            SpaceModel::linf(2).norming_functional(&[1.0, 1.0]).unwrap(),
            vec![0.0, 1.0]
        );
    }

    #[test]
    fn sphere_samples_are_unit_and_deterministic() {
        let s = SpaceModel::l1(2);
        let a = s.sample_sphere(Side::Primal, 1, 7);
        assert!((s.norm(&a[0]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(a, s.sample_sphere(Side::Primal, 1, 7));
        let s3 = SpaceModel::l2(3);
        let b = s3.sample_sphere(Side::Dual, 100, 1);
        assert_eq!(b.len(), 100);
        for v in &b {
            assert!((s3.dual_norm(v).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn polytope_validation() {
        assert!(SpaceModel::polytope(vec![vec![1.0, 1.0], vec![2.0, 2.0]]).is_err());
        assert!(SpaceModel::polytope(vec![]).is_err());
        assert!(SpaceModel::polytope(vec![vec![1.0, 0.0], vec![0.0]]).is_err());
    }

    #[test]
    fn descriptor_round_trip_and_rejections() {
        let s: SpaceModel =
            serde_json::from_str(r#"{"kind":"polytope","dim":2,"facets":[[1,0],[0,1],[1,1]]}"#)
                .unwrap();
        assert_eq!(s.kind(), SpaceKind::Polytope);
        let back: SpaceModel = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
        assert!(
            serde_json::from_str::<SpaceModel>(r#"{"kind":"l1","dim":2,"facets":[[1,0]]}"#)
                .is_err()
        );
        assert!(serde_json::from_str::<SpaceModel>(r#"{"kind":"polytope","dim":2}"#).is_err());
        assert!(serde_json::from_str::<SpaceModel>(r#"{"kind":"l2","dim":0}"#).is_err());
        let l2: SpaceModel = serde_json::from_str(r#"{"kind":"l2","dim":3}"#).unwrap();
        assert_eq!(l2, SpaceModel::l2(3));
    }

    #[test]
    fn banach_mazur_examples() {
        let (d, pair) = SpaceModel::l1(3).bm_distance_upper();
        assert_eq!(d, 1.0);
        assert_eq!(
            pair.t,
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ]
        );

        let (d, _) = SpaceModel::l2(2).bm_distance_upper();
        assert!(d <= 2f64.sqrt() + 1e-6, "{d}");

        let (d, _) = SpaceModel::linf(2).bm_distance_upper();
        assert!(d <= 1.0 + 1e-9, "{d}");
    }

    #[test]
    fn operator_pair_is_consistent() {
        for s in [SpaceModel::l2(3), SpaceModel::linf(3), square_polytope()] {
            let (d, pair) = s.bm_distance_upper();
            assert!(d >= 1.0);
            let re = OperatorPair::evaluate(&s, &pair.matrix()).unwrap();
            assert!((re.cost - d).abs() <= 1e-12);
            let n = s.dim();
            let t = pair.matrix();
            let ti = DMatrix::from_fn(n, n, |i, j| pair.t_inv[i][j]);
            assert!((t * ti - DMatrix::<f64>::identity(n, n)).amax() <= 1e-12);
        }
    }

    #[test]
    fn alpha_constant_examples() {
        assert_eq!(SpaceModel::l1(2).alpha_constant().unwrap(), 1.0);
        assert_eq!(SpaceModel::l1(4).alpha_constant().unwrap(), 0.5);
        let a = SpaceModel::l2(2).alpha_constant().unwrap();
        assert!((a - 2.0 / (2.0 * 2f64.sqrt())).abs() < 1e-6, "{a}");
        assert!(SpaceModel::l1(1).alpha_constant().is_err());
    }
}
