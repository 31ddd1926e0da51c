//! `min sum cost_j |x_j|  s.t.  A x = b` by a dense single-phase simplex over the split
//! variables `x = y+ - y-`, started from the signed unit columns (always feasible), with Bland's
//! rule. The final basis is re-solved exactly in the chain's scalar type.

use crate::chains::Chain;
use crate::scalar::Scalar;

use super::columns::{solve_exact, ColumnSet};
use super::{DecompPart, NormError};

const EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 200_000;

/// Optimal basis as `(column, sign)` pairs, one per row.
pub(crate) fn optimal_basis<S: Scalar>(
    cols: &ColumnSet<S>,
    b: &[f64],
) -> Result<Vec<(usize, bool)>, NormError> {
    let m = cols.rows();
    let ncol = cols.columns.len();
    let nvar = 2 * ncol;
    let cost = |v: usize| cols.columns[v % ncol].cost;
    let mut t = vec![vec![0.0f64; nvar]; m];
    let mut beta = vec![0.0f64; m];
    let mut basis = vec![0usize; m];
    for i in 0..m {
        let s = if b[i] >= 0.0 { 1.0 } else { -1.0 };
        for (j, c) in cols.columns.iter().enumerate() {
            for &(r, e) in &c.entries {
                if r == i {
                    t[i][j] = s * e as f64;
                    t[i][j + ncol] = -s * e as f64;
                }
            }
        }
        beta[i] = b[i].abs();
        basis[i] = cols.unit_of_row[i] + if s > 0.0 { 0 } else { ncol };
    }
    let mut d: Vec<f64> = (0..nvar).map(cost).collect();
    for i in 0..m {
        let cb = cost(basis[i]);
        for v in 0..nvar {
            d[v] -= cb * t[i][v];
        }
    }
    for _ in 0..MAX_PIVOTS {
        let Some(enter) = (0..nvar).find(|&v| d[v] < -EPS) else {
            return Ok(basis.iter().map(|&v| (v % ncol, v < ncol)).collect());
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            if t[i][enter] > EPS {
                let ratio = beta[i] / t[i][enter];
                let better = match leave {
                    None => true,
                    Some(l) => ratio < best - EPS || (ratio <= best + EPS && basis[i] < basis[l]),
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(l) = leave else {
            return Err(NormError::Lp("unbounded program".into()));
        };
        let piv = t[l][enter];
        for v in 0..nvar {
            t[l][v] /= piv;
        }
        beta[l] /= piv;
        for i in 0..m {
            if i != l && t[i][enter] != 0.0 {
                let f = t[i][enter];
                for v in 0..nvar {
                    t[i][v] -= f * t[l][v];
                }
                beta[i] -= f * beta[l];
                if beta[i] < 0.0 && beta[i] > -1e-9 {
                    beta[i] = 0.0;
                }
            }
        }
        let f = d[enter];
        for v in 0..nvar {
            d[v] -= f * t[l][v];
        }
        basis[l] = enter;
    }
    Err(NormError::Lp("pivot limit reached".into()))
}

/// Optimal decomposition parts for every basis direction of `p`.
pub(crate) fn lp_parts<S: Scalar>(
    p: &Chain<S>,
    cols: &ColumnSet<S>,
) -> Result<Vec<DecompPart<S>>, NormError> {
    let mut parts = Vec::new();
    for (idx, b) in &cols.rhs {
        let bf: Vec<f64> = b.iter().map(|c| c.to_f64()).collect();
        let basis = optimal_basis(cols, &bf)?;
        let a: Vec<Vec<S>> = {
            let dense: Vec<Vec<S>> = basis.iter().map(|&(c, _)| cols.dense(c)).collect();
            (0..cols.rows())
                .map(|r| dense.iter().map(|col| col[r].clone()).collect())
                .collect()
        };
        let x = solve_exact(a, b.clone())
            .ok_or_else(|| NormError::Lp("singular final basis".into()))?;
        for ((c, _), xi) in basis.iter().zip(x) {
            if !xi.is_zero() {
                parts.push(cols.part(*c, *idx, xi));
            }
        }
    }
    debug_assert!(p.is_monopolar());
    Ok(parts)
}
