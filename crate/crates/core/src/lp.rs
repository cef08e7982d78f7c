//! Dense tableau simplex for small linear programs.
//!
//! Solves `max cᵀy` subject to `G y ≤ h` with `h ≥ 0` and `y` free. The
//! origin is feasible, so a single phase from the slack basis suffices.
//! Bland's rule guarantees termination on degenerate vertices.

use crate::error::{FblError, Result};

const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub value: f64,
    pub y: Vec<f64>,
}

/// `rows[i]` is row `i` of `G`; every row must have length `c.len()`.
pub fn maximize_free(c: &[f64], rows: &[Vec<f64>], h: &[f64]) -> Result<LpSolution> {
    let n = c.len();
    let k = rows.len();
    if h.len() != k || rows.iter().any(|r| r.len() != n) {
        return Err(FblError::LinearProgram("inconsistent shapes".into()));
    }
    if h.iter().any(|&b| b < 0.0 || !b.is_finite()) {
        return Err(FblError::LinearProgram(
            "right-hand side must be finite and nonnegative".into(),
        ));
    }

    // columns: y+ (n), y- (n), slacks (k), rhs
    let cols = 2 * n + k + 1;
    let rhs = cols - 1;
    let mut tab = vec![vec![0.0; cols]; k + 1];
    for (i, row) in rows.iter().enumerate() {
        for j in 0..n {
            tab[i][j] = row[j];
            tab[i][n + j] = -row[j];
        }
        tab[i][2 * n + i] = 1.0;
        tab[i][rhs] = h[i];
    }
    let z = k;
    for j in 0..n {
        tab[z][j] = -c[j];
        tab[z][n + j] = c[j];
    }
    let mut basis: Vec<usize> = (0..k).map(|i| 2 * n + i).collect();

    for _ in 0..MAX_PIVOTS {
        let Some(enter) = (0..rhs).find(|&j| tab[z][j] < -PIVOT_EPS) else {
            let mut y = vec![0.0; n];
            for (i, &b) in basis.iter().enumerate() {
                if b < n {
                    y[b] += tab[i][rhs];
                } else if b < 2 * n {
                    y[b - n] -= tab[i][rhs];
                }
            }
            return Ok(LpSolution {
                value: tab[z][rhs],
                y,
            });
        };

        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..k {
            let a = tab[i][enter];
            if a > PIVOT_EPS {
                let ratio = tab[i][rhs] / a;
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[l]),
                };
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            return Err(FblError::LinearProgram("objective is unbounded".into()));
        };

        let p = tab[leave][enter];
        for v in tab[leave].iter_mut() {
            *v /= p;
        }
        let pivot_row = tab[leave].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == leave {
                continue;
            }
            let factor = row[enter];
            if factor != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
            }
        }
        basis[leave] = enter;
    }
    Err(FblError::LinearProgram("pivot limit reached".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_constrained_maximum() {
        // max x + 2y, |x| <= 1, |y| <= 1
        let rows = vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ];
        let sol = maximize_free(&[1.0, 2.0], &rows, &[1.0; 4]).unwrap();
        assert!((sol.value - 3.0).abs() < 1e-12);
        assert!((sol.y[0] - 1.0).abs() < 1e-12 && (sol.y[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_direction_uses_split_variable() {
        let rows = vec![vec![1.0], vec![-1.0]];
        let sol = maximize_free(&[-3.0], &rows, &[2.0, 2.0]).unwrap();
        assert!((sol.value - 6.0).abs() < 1e-12);
        assert!((sol.y[0] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_is_reported() {
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0]];
        assert!(maximize_free(&[0.0, 1.0], &rows, &[1.0, 1.0]).is_err());
    }
}
