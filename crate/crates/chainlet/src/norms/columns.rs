//! The decomposition class on a fixed support: unit columns, pair differences and parallelogram
//! second differences whose vertices are all support points.

use std::collections::BTreeMap;

use crate::algebra::{KVector, MultiIndex};
use crate::chains::{Chain, Point};
use crate::scalar::Scalar;

use super::DecompPart;

/// Column of the constraint matrix: `Delta_U^j (points[base]; .)` expressed on support rows.
#[derive(Clone, Debug)]
pub(crate) struct Column<S> {
    pub entries: Vec<(usize, i64)>,
    pub cost: f64,
    pub base: usize,
    pub steps: Vec<Vec<S>>,
}

#[derive(Clone, Debug)]
pub(crate) struct ColumnSet<S> {
    pub n: usize,
    pub points: Vec<Point<S>>,
    pub columns: Vec<Column<S>>,
    /// Index of the unit column of each row.
    pub unit_of_row: Vec<usize>,
    /// Right-hand side per basis direction.
    pub rhs: BTreeMap<MultiIndex, Vec<S>>,
}

fn length<S: Scalar>(u: &[S]) -> f64 {
    u.iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt()
}

impl<S: Scalar> ColumnSet<S> {
    /// Columns up to order `max_order` (0, 1 or 2) on the support of an order-0 chain.
    /// Columns whose cost is at least the mass cost of their entries are dominated and omitted.
    pub fn build(p: &Chain<S>, max_order: usize) -> Self {
        let mut points: Vec<Point<S>> = p.poles().iter().map(|q| q.at.clone()).collect();
        points.dedup();
        let row_of: BTreeMap<Point<S>, usize> = points
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, q)| (q, i))
            .collect();
        let m = points.len();
        let mut rhs: BTreeMap<MultiIndex, Vec<S>> = BTreeMap::new();
        for pole in p.poles() {
            let row = row_of[&pole.at];
            for t in pole.payload.terms() {
                let v = rhs.entry(t.idx).or_insert_with(|| vec![S::zero(); m]);
                v[row] = v[row].clone() + t.coeff.clone();
            }
        }
        let mut columns = Vec::new();
        let mut unit_of_row = Vec::with_capacity(m);
        for i in 0..m {
            unit_of_row.push(columns.len());
            columns.push(Column {
                entries: vec![(i, 1)],
                cost: 1.0,
                base: i,
                steps: vec![],
            });
        }
        if max_order >= 1 {
            for i in 0..m {
                for j in i + 1..m {
                    let u = points[j].minus(&points[i]);
                    let cost = length(&u);
                    if cost < 2.0 {
                        columns.push(Column {
                            entries: vec![(j, 1), (i, -1)],
                            cost,
                            base: i,
                            steps: vec![u],
                        });
                    }
                }
            }
        }
        if max_order >= 2 {
            // pairs grouped by the sum of their endpoints: equal sums are parallelogram diagonals
            let mut by_sum: BTreeMap<Point<S>, Vec<(usize, usize)>> = BTreeMap::new();
            for i in 0..m {
                for j in i + 1..m {
                    let s = points[i].translate(points[j].coords());
                    by_sum.entry(s).or_default().push((i, j));
                }
            }
            for (sum, pairs) in &by_sum {
                for x in 0..pairs.len() {
                    for y in x + 1..pairs.len() {
                        let (a, c) = pairs[x];
                        let (b, d) = pairs[y];
                        let u = points[b].minus(&points[a]);
                        let w = points[d].minus(&points[a]);
                        let cost = length(&u) * length(&w);
                        if cost < 4.0 {
                            columns.push(Column {
                                entries: vec![(a, 1), (b, -1), (d, -1), (c, 1)],
                                cost,
                                base: a,
                                steps: vec![u, w],
                            });
                        }
                    }
                }
                // collinear triple: the midpoint of the pair is itself a support point
                let half = S::one() / (S::one() + S::one());
                if let Some(&b) = row_of.get(&sum.scale(&half)) {
                    for &(a, c) in pairs {
                        let u = points[b].minus(&points[a]);
                        let cost = length(&u).powi(2);
                        if cost < 4.0 {
                            columns.push(Column {
                                entries: vec![(a, 1), (b, -2), (c, 1)],
                                cost,
                                base: a,
                                steps: vec![u.clone(), u],
                            });
                        }
                    }
                }
            }
        }
        ColumnSet {
            n: p.n(),
            points,
            columns,
            unit_of_row,
            rhs,
        }
    }

    pub fn rows(&self) -> usize {
        self.points.len()
    }

    pub fn part(&self, col: usize, idx: MultiIndex, coeff: S) -> DecompPart<S> {
        let c = &self.columns[col];
        DecompPart {
            base: self.points[c.base].clone(),
            steps: c.steps.clone(),
            alpha: KVector::basis(self.n, idx),
            coeff,
        }
    }

    /// Dense column `col` as scalars.
    pub fn dense(&self, col: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.rows()];
        for &(r, e) in &self.columns[col].entries {
            v[r] = S::from_i64(e);
        }
        v
    }
}

/// Exact solve of a square system by Gaussian elimination; `None` if singular.
pub(crate) fn solve_exact<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let m = b.len();
    for col in 0..m {
        let piv = (col..m)
            .filter(|&r| !a[r][col].is_zero() && a[r][col].abs().to_f64() > 1e-12)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..m {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / a[col][col].clone();
            for c in col..m {
                let v = a[col][c].clone() * f.clone();
                a[r][c] = a[r][c].clone() - v;
            }
            let v = b[col].clone() * f;
            b[r] = b[r].clone() - v;
        }
    }
    let mut x = vec![S::zero(); m];
    for r in (0..m).rev() {
        let mut s = b[r].clone();
        for c in r + 1..m {
            s = s - a[r][c].clone() * x[c].clone();
        }
        x[r] = s / a[r][r].clone();
    }
    Some(x)
}
