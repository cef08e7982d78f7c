//! Expressions in the vector lattice generated by the evaluations `δ_x`.
//!
//! An expression is evaluated pointwise at a dual vector `x*`, with
//! `δ_x(x*) = <x*, x>` and the lattice operations acting pointwise.
//! Every expression is positively homogeneous in `x*`.

use rand::Rng as _;
use serde_json::{json, Map, Value};

use crate::canonical;
use crate::error::{check_dim, FblError, Result};
use crate::rng::{self, stream};
use crate::spaces::{Side, SpaceModel};
use crate::vector;

#[derive(Debug, Clone, PartialEq)]
pub enum LatticeExpr {
    Delta(Vec<f64>),
    Scale(f64, Box<LatticeExpr>),
    Add(Vec<LatticeExpr>),
    Sup(Vec<LatticeExpr>),
    Inf(Vec<LatticeExpr>),
    Abs(Box<LatticeExpr>),
    Neg(Box<LatticeExpr>),
}

use LatticeExpr::*;

impl serde::Serialize for LatticeExpr {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&self.to_json(), serializer)
    }
}

impl<'de> serde::Deserialize<'de> for LatticeExpr {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let value = <Value as serde::Deserialize>::deserialize(deserializer)?;
        Self::from_json(&value).map_err(serde::de::Error::custom)
    }
}

impl LatticeExpr {
    pub fn delta(x: impl Into<Vec<f64>>) -> Self {
        Delta(x.into())
    }

    /// `δ_{e_i}` in dimension `n`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        Delta(vector::basis(n, i))
    }

    /// `Scale(k, f)` exactly as written; no folding.
    pub fn scale(k: f64, f: LatticeExpr) -> Self {
        Scale(k, Box::new(f))
    }

    /// `k·self`, folding into an existing outer `Scale`.
    pub fn scaled(self, k: f64) -> Self {
        match self {
            Scale(k0, inner) => Scale(k * k0, inner),
            other => Scale(k, Box::new(other)),
        }
    }

    pub fn abs(f: LatticeExpr) -> Self {
        Abs(Box::new(f))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: LatticeExpr) -> Self {
        Neg(Box::new(f))
    }

    pub fn add(children: Vec<LatticeExpr>) -> Result<Self> {
        check_arity("add", &children)?;
        Ok(Add(children))
    }

    pub fn sup(children: Vec<LatticeExpr>) -> Result<Self> {
        check_arity("sup", &children)?;
        Ok(Sup(children))
    }

    pub fn inf(children: Vec<LatticeExpr>) -> Result<Self> {
        check_arity("inf", &children)?;
        Ok(Inf(children))
    }

    pub fn plus(self, other: LatticeExpr) -> Self {
        Add(vec![self, other])
    }

    pub fn minus(self, other: LatticeExpr) -> Self {
        Add(vec![self, Neg(Box::new(other))])
    }

    pub fn max(self, other: LatticeExpr) -> Self {
        Sup(vec![self, other])
    }

    pub fn min(self, other: LatticeExpr) -> Self {
        Inf(vec![self, other])
    }

    /// The identically zero expression `Scale(0, δ_{e_1})`.
    pub fn zero(n: usize) -> Self {
        Scale(0.0, Box::new(Self::coordinate(n, 0)))
    }

    /// `M_n = |δ_{e_1}| ∨ … ∨ |δ_{e_n}|`; on `E* = l∞(n)` this is the sup norm.
    pub fn max_abs_coordinates(n: usize) -> Self {
        let mut terms: Vec<LatticeExpr> =
            (0..n).map(|i| Self::abs(Self::coordinate(n, i))).collect();
        if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Sup(terms)
        }
    }

    /// Ambient dimension, after checking that all leaves agree and every
    /// n-ary node has at least two children.
    pub fn dim(&self) -> Result<usize> {
        let mut dim = None;
        self.validate_into(&mut dim)?;
        Ok(dim.expect("every expression has a leaf"))
    }

    fn validate_into(&self, dim: &mut Option<usize>) -> Result<()> {
        match self {
            Delta(x) => {
                if x.is_empty() {
                    return Err(FblError::InvalidArgument("empty delta vector".into()));
                }
                match *dim {
                    Some(d) => check_dim(d, x.len())?,
                    None => *dim = Some(x.len()),
                }
            }
            Scale(_, f) | Abs(f) | Neg(f) => f.validate_into(dim)?,
            Add(cs) | Sup(cs) | Inf(cs) => {
                check_arity(self.op_name(), cs)?;
                for c in cs {
                    c.validate_into(dim)?;
                }
            }
        }
        Ok(())
    }

    pub fn op_name(&self) -> &'static str {
        match self {
            Delta(_) => "delta",
            Scale(..) => "scale",
            Add(_) => "add",
            Sup(_) => "sup",
            Inf(_) => "inf",
            Abs(_) => "abs",
            Neg(_) => "neg",
        }
    }

    pub fn eval(&self, xs: &[f64]) -> Result<f64> {
        check_dim(self.dim()?, xs.len())?;
        Ok(self.eval_unchecked(xs))
    }

    /// Evaluation without the dimension walk; callers guarantee agreement.
    pub fn eval_unchecked(&self, xs: &[f64]) -> f64 {
        match self {
            Delta(x) => vector::dot(xs, x),
            Scale(k, f) => k * f.eval_unchecked(xs),
            Add(cs) => cs.iter().map(|c| c.eval_unchecked(xs)).sum(),
            Sup(cs) => cs
                .iter()
                .map(|c| c.eval_unchecked(xs))
                .fold(f64::NEG_INFINITY, f64::max),
            Inf(cs) => cs
                .iter()
                .map(|c| c.eval_unchecked(xs))
                .fold(f64::INFINITY, f64::min),
            Abs(f) => f.eval_unchecked(xs).abs(),
            Neg(f) => -f.eval_unchecked(xs),
        }
    }

    /// The linear piece active at `xs`: `f = <gradient, ·>` on the closed
    /// cell `{y : <w, y> ≥ 0 for every w in cell}`, which contains `xs`.
    /// Ties go to the first child.
    pub fn linearize(&self, xs: &[f64]) -> Linearization {
        let mut cell = Vec::new();
        let (value, gradient) = self.linearize_into(xs, &mut cell);
        Linearization {
            value,
            gradient,
            cell,
        }
    }

    fn linearize_into(&self, xs: &[f64], cell: &mut Vec<Vec<f64>>) -> (f64, Vec<f64>) {
        match self {
            Delta(x) => (vector::dot(xs, x), x.clone()),
            Scale(k, f) => {
                let (v, g) = f.linearize_into(xs, cell);
                (k * v, vector::scaled(&g, *k))
            }
            Add(cs) => {
                let mut value = 0.0;
                let mut grad = vec![0.0; xs.len()];
                for c in cs {
                    let (v, g) = c.linearize_into(xs, cell);
                    value += v;
                    grad.iter_mut().zip(&g).for_each(|(a, b)| *a += b);
                }
                (value, grad)
            }
            Sup(cs) | Inf(cs) => {
                let upper = matches!(self, Sup(_));
                let parts: Vec<(f64, Vec<f64>)> =
                    cs.iter().map(|c| c.linearize_into(xs, cell)).collect();
                let mut best = 0;
                for (i, p) in parts.iter().enumerate().skip(1) {
                    if (upper && p.0 > parts[best].0) || (!upper && p.0 < parts[best].0) {
                        best = i;
                    }
                }
                for (i, p) in parts.iter().enumerate() {
                    if i != best {
                        let w = vector::sub(&parts[best].1, &p.1);
                        cell.push(if upper { w } else { vector::scaled(&w, -1.0) });
                    }
                }
                parts.into_iter().nth(best).expect("nonempty")
            }
            Abs(f) => {
                let (v, g) = f.linearize_into(xs, cell);
                let g = if v < 0.0 { vector::scaled(&g, -1.0) } else { g };
                cell.push(g.clone());
                (v.abs(), g)
            }
            Neg(f) => {
                let (v, g) = f.linearize_into(xs, cell);
                (-v, vector::scaled(&g, -1.0))
            }
        }
    }

    /// Distinct `Delta` leaves in first-occurrence order (bitwise equality).
    pub fn support(&self) -> CoordinateSupport {
        let mut vectors: Vec<Vec<f64>> = Vec::new();
        self.visit_leaves(&mut |x| {
            if !vectors.iter().any(|v| bitwise_eq(v, x)) {
                vectors.push(x.to_vec());
            }
        });
        CoordinateSupport { vectors }
    }

    pub fn leaf_count(&self) -> usize {
        let mut n = 0;
        self.visit_leaves(&mut |_| n += 1);
        n
    }

    fn visit_leaves(&self, visit: &mut impl FnMut(&[f64])) {
        match self {
            Delta(x) => visit(x),
            Scale(_, f) | Abs(f) | Neg(f) => f.visit_leaves(visit),
            Add(cs) | Sup(cs) | Inf(cs) => cs.iter().for_each(|c| c.visit_leaves(visit)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Delta(x) => json!({ "delta": x }),
            Scale(k, f) => json!({ "scale": { "k": k, "of": f.to_json() } }),
            Add(cs) => json!({ "add": cs.iter().map(Self::to_json).collect::<Vec<_>>() }),
            Sup(cs) => json!({ "sup": cs.iter().map(Self::to_json).collect::<Vec<_>>() }),
            Inf(cs) => json!({ "inf": cs.iter().map(Self::to_json).collect::<Vec<_>>() }),
            Abs(f) => json!({ "abs": f.to_json() }),
            Neg(f) => json!({ "neg": f.to_json() }),
        }
    }

    /// Canonical text: keys sorted, children in order, 17 significant digits.
    pub fn serialize(&self) -> String {
        canonical::to_string(&self.to_json()).expect("finite expression")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| FblError::Parse {
            path: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        let expr = Self::from_json_at(&value, "$")?;
        expr.dim().map_err(|e| FblError::Parse {
            path: "$".into(),
            message: e.to_string(),
        })?;
        Ok(expr)
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let expr = Self::from_json_at(value, "$")?;
        expr.dim()?;
        Ok(expr)
    }

    fn from_json_at(value: &Value, path: &str) -> Result<Self> {
        let err = |message: String| FblError::Parse {
            path: path.to_string(),
            message,
        };
        let obj = value
            .as_object()
            .ok_or_else(|| err("expected an object with a single node key".into()))?;
        if obj.len() != 1 {
            return Err(err(format!(
                "expected exactly one key, found {}",
                obj.len()
            )));
        }
        let (key, body) = obj.iter().next().expect("one key");
        let here = format!("{path}.{key}");
        let children = |min: usize| -> Result<Vec<LatticeExpr>> {
            let items = body
                .as_array()
                .ok_or_else(|| err(format!("'{key}' expects an array")))?;
            if items.len() < min {
                return Err(err(format!(
                    "'{key}' needs at least {min} children, found {}",
                    items.len()
                )));
            }
            items
                .iter()
                .enumerate()
                .map(|(i, c)| Self::from_json_at(c, &format!("{here}[{i}]")))
                .collect()
        };
        match key.as_str() {
            "delta" => {
                let items = body
                    .as_array()
                    .ok_or_else(|| err("'delta' expects an array of numbers".into()))?;
                let x = items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.as_f64()
                            .ok_or_else(|| err(format!("'delta' entry {i} is not a number")))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                if x.is_empty() {
                    return Err(err("'delta' vector is empty".into()));
                }
                Ok(Delta(x))
            }
            "scale" => {
                let inner: &Map<String, Value> = body
                    .as_object()
                    .ok_or_else(|| err("'scale' expects {\"k\":..,\"of\":..}".into()))?;
                if inner.len() != 2 {
                    return Err(err("'scale' expects exactly the keys k and of".into()));
                }
                let k = inner
                    .get("k")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| err("'scale.k' must be a number".into()))?;
                let of = inner
                    .get("of")
                    .ok_or_else(|| err("'scale.of' is missing".into()))?;
                Ok(Scale(
                    k,
                    Box::new(Self::from_json_at(of, &format!("{here}.of"))?),
                ))
            }
            "add" => Ok(Add(children(2)?)),
            "sup" => Ok(Sup(children(2)?)),
            "inf" => Ok(Inf(children(2)?)),
            "abs" => Ok(Abs(Box::new(Self::from_json_at(body, &here)?))),
            "neg" => Ok(Neg(Box::new(Self::from_json_at(body, &here)?))),
            other => Err(err(format!("unknown node kind '{other}'"))),
        }
    }
}

fn check_arity(op: &str, children: &[LatticeExpr]) -> Result<()> {
    if children.len() < 2 {
        return Err(FblError::InvalidArgument(format!(
            "'{op}' needs at least 2 children, found {}",
            children.len()
        )));
    }
    Ok(())
}

fn bitwise_eq(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

/// The primal vectors an expression depends on.
/// A linear piece of an expression and the cell where it is active.
#[derive(Debug, Clone, PartialEq)]
pub struct Linearization {
    pub value: f64,
    pub gradient: Vec<f64>,
    pub cell: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateSupport {
    pub vectors: Vec<Vec<f64>>,
}

impl CoordinateSupport {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityViolation {
    pub xs: Vec<f64>,
    pub lambda: f64,
    pub scaled_value: f64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityReport {
    pub trials: usize,
    pub first_violation: Option<HomogeneityViolation>,
}

impl HomogeneityReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Samples `(x*, λ ≥ 0)` and checks `f(λx*) = λ f(x*)` to 1e-9 relative.
/// The first trial always uses `λ = 0`.
pub fn homogeneity_check(f: &LatticeExpr, trials: usize, seed: u64) -> Result<HomogeneityReport> {
    let dim = f.dim()?;
    Ok(homogeneity_check_with(dim, trials, seed, |xs| {
        f.eval_unchecked(xs)
    }))
}

/// Same check against an arbitrary evaluator.
pub fn homogeneity_check_with(
    dim: usize,
    trials: usize,
    seed: u64,
    eval: impl Fn(&[f64]) -> f64,
) -> HomogeneityReport {
    let space = SpaceModel::l2(dim);
    let mut rng = rng::seeded(seed, stream::HOMOGENEITY);
    for trial in 0..trials {
        let radius: f64 = rng.random_range(0.1..10.0);
        let xs = vector::scaled(&space.sample_unit(Side::Dual, &mut rng), radius);
        let lambda = if trial == 0 {
            0.0
        } else {
            rng.random_range(0.0..10.0)
        };
        let scaled_xs = vector::scaled(&xs, lambda);
        let scaled_value = eval(&scaled_xs);
        let expected = lambda * eval(&xs);
        let tol = 1e-9 * (1.0 + scaled_value.abs().max(expected.abs()));
        if !((scaled_value - expected).abs() <= tol) {
            return HomogeneityReport {
                trials: trial + 1,
                first_violation: Some(HomogeneityViolation {
                    xs,
                    lambda,
                    scaled_value,
                    expected,
                }),
            };
        }
    }
    HomogeneityReport {
        trials,
        first_violation: None,
    }
}

/// Deterministic random expression with exactly `depth` levels along the
/// leftmost path; n-ary nodes are binary, so there are at most
/// `2^(depth-1)` leaves. Leaves are unit vectors of `l1(dim)`.
pub fn random_expr(dim: usize, depth: usize, seed: u64) -> Result<LatticeExpr> {
    if dim == 0 || depth == 0 {
        return Err(FblError::InvalidArgument(
            "random_expr needs dim >= 1 and depth >= 1".into(),
        ));
    }
    let space = SpaceModel::l1(dim);
    let mut rng = rng::seeded(seed, stream::EXPR);
    Ok(grow(&space, depth, &mut rng))
}

fn grow(space: &SpaceModel, depth: usize, rng: &mut crate::rng::Rng) -> LatticeExpr {
    if depth == 1 {
        return Delta(space.sample_unit(Side::Primal, rng));
    }
    match rng.random_range(0..6) {
        0 => {
            let k = rng.random_range(-2.0..2.0);
            Scale(k, Box::new(grow(space, depth - 1, rng)))
        }
        1 => Add(vec![
            grow(space, depth - 1, rng),
            grow(space, depth - 1, rng),
        ]),
        2 => Sup(vec![
            grow(space, depth - 1, rng),
            grow(space, depth - 1, rng),
        ]),
        3 => Inf(vec![
            grow(space, depth - 1, rng),
            grow(space, depth - 1, rng),
        ]),
        4 => Abs(Box::new(grow(space, depth - 1, rng))),
        _ => Neg(Box::new(grow(space, depth - 1, rng))),
    }
}
