//! Enumeration oracle: the l1 program's optimum is attained at a basic solution, so every
//! basis (set of `rows` independent columns) is visited and the cheapest representation kept.
//! Shares nothing with the simplex or the matcher except the column class.

use crate::chains::Chain;
use crate::scalar::Scalar;

use super::columns::ColumnSet;
use super::NormError;

pub const BRUTE_FORCE_MAX_POLES: usize = 6;

/// Exact infimum over the decomposition class on the support of `p`, for `r <= 2`.
pub fn brute_force_norm<S: Scalar>(p: &Chain<S>, r: usize) -> Result<f64, NormError> {
    if !p.is_monopolar() {
        return Err(NormError::NotMonopolar);
    }
    let cols = ColumnSet::build(p, r.min(2));
    if cols.rows() > BRUTE_FORCE_MAX_POLES {
        return Err(NormError::TooLarge {
            poles: cols.rows(),
            max: BRUTE_FORCE_MAX_POLES,
        });
    }
    let dense: Vec<Vec<f64>> = (0..cols.columns.len())
        .map(|c| cols.dense(c).iter().map(|v| v.to_f64()).collect())
        .collect();
    let costs: Vec<f64> = cols.columns.iter().map(|c| c.cost).collect();
    let mut total = 0.0;
    for b in cols.rhs.values() {
        let b: Vec<f64> = b.iter().map(|v| v.to_f64()).collect();
        let mut best = f64::INFINITY;
        let mut chosen = Vec::new();
        visit(
            &dense,
            &costs,
            &b,
            0,
            &mut chosen,
            &mut Vec::new(),
            &mut best,
        );
        total += best;
    }
    Ok(total)
}

/// Depth-first over column subsets kept linearly independent; `echelon` holds the chosen
/// columns reduced against each other as `(pivot row, vector)`.
fn visit(
    dense: &[Vec<f64>],
    costs: &[f64],
    b: &[f64],
    start: usize,
    chosen: &mut Vec<usize>,
    echelon: &mut Vec<(usize, Vec<f64>)>,
    best: &mut f64,
) {
    let m = b.len();
    if chosen.len() == m {
        if let Some(x) = solve(dense, chosen, b) {
            let cost: f64 = chosen
                .iter()
                .zip(&x)
                .map(|(&c, xi)| costs[c] * xi.abs())
                .sum();
            if cost < *best {
                *best = cost;
            }
        }
        return;
    }
    if dense.len() - start < m - chosen.len() {
        return;
    }
    for c in start..dense.len() {
        if dense.len() - c < m - chosen.len() {
            break;
        }
        let mut v = dense[c].clone();
        for (piv, row) in echelon.iter() {
            let f = v[*piv] / row[*piv];
            if f != 0.0 {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi -= f * ri;
                }
            }
        }
        let Some(piv) = (0..m).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs())) else {
            continue;
        };
        if v[piv].abs() < 1e-9 {
            continue;
        }
        echelon.push((piv, v));
        chosen.push(c);
        visit(dense, costs, b, c + 1, chosen, echelon, best);
        chosen.pop();
        echelon.pop();
    }
}

fn solve(dense: &[Vec<f64>], chosen: &[usize], b: &[f64]) -> Option<Vec<f64>> {
    let m = b.len();
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|r| chosen.iter().map(|&c| dense[c][r]).collect())
        .collect();
    let mut b = b.to_vec();
    for col in 0..m {
        let piv = (col..m).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..m {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..m).map(|i| b[i] / a[i][i]).collect())
}
