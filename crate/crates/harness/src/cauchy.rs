//! Refinement Cauchy brackets: `|P_(N+1) - P_N|^1` for unit cubes, bounded above by the sum
//! of per-parent transport optima (each parent's difference is a chain of its own, and the sum
//! of their decompositions decomposes the whole difference).

use chainlet::chains::Chain;
use chainlet::geometry::CubeCell;
use chainlet::norms::{lower_bound, upper_bound, DualFamilySpec};
use serde_json::Value;

use crate::report::{num, Report, Table};
use crate::{HarnessConfig, HarnessError};

pub const MAX_RATIO: f64 = 0.6;
/// Whole-chain lower and global upper bounds are computed up to this many poles.
const GLOBAL_POLES: usize = 96;

fn parent_difference(corner: Vec<f64>, h: f64, k: usize) -> Result<Chain<f64>, HarnessError> {
    let edges = (0..k)
        .map(|i| (0..k).map(|j| if i == j { h } else { 0.0 }).collect())
        .collect();
    let cell = CubeCell::new(corner, edges, 1)?;
    Ok(cell.to_chain(1)?.sub(&cell.to_chain(0)?)?)
}

/// `(upper, parents, literal)`: per-parent transport sum at level `N`.
fn level_upper(k: usize, level: u32, cap: usize) -> Result<(f64, u64, bool), HarnessError> {
    let m = 1u64 << level;
    let h = 1.0 / m as f64;
    let parents = m.pow(k as u32);
    if parents as usize > cap {
        // every parent is a translate of the first; the transport cost is translation invariant
        let one = upper_bound(&parent_difference(vec![0.0; k], h, k)?, 1)?.cost();
        return Ok((one * parents as f64, parents, false));
    }
    let mut total = 0.0;
    let mut idx = vec![0u64; k];
    for _ in 0..parents {
        let corner = idx.iter().map(|&i| i as f64 * h).collect();
        total += upper_bound(&parent_difference(corner, h, k)?, 1)?.cost();
        for d in idx.iter_mut() {
            *d += 1;
            if *d < m {
                break;
            }
            *d = 0;
        }
    }
    Ok((total, parents, true))
}

pub fn refinement_cauchy(cfg: &HarnessConfig) -> Result<Report, HarnessError> {
    let mut rep = Report::new(
        "refinement_cauchy",
        "upper bracket of |P_(N+1) - P_N|^1 for unit k-cubes",
        Table::new(&[
            "k",
            "level",
            "parents",
            "literal",
            "upper",
            "global_upper",
            "lower",
            "ratio",
        ]),
    );
    let fam = DualFamilySpec::default();
    for k in 1..=3usize {
        let mut uppers = Vec::new();
        let mut representative = false;
        for level in 1..=cfg.cauchy_levels {
            let (upper, parents, literal) = level_upper(k, level, cfg.literal_parent_cap)?;
            representative |= !literal;
            let unit = CubeCell::<f64>::unit(k, k);
            let poles = (1usize << (k as u32 * level)) * (1 + (1 << k));
            let (global, lower) = if poles <= GLOBAL_POLES {
                let d = unit.to_chain(level + 1)?.sub(&unit.to_chain(level)?)?;
                (
                    num(upper_bound(&d, 1)?.cost()),
                    num(lower_bound(&d, 1, &fam)?.value),
                )
            } else {
                (Value::Null, Value::Null)
            };
            let ratio = uppers
                .last()
                .map(|&p: &f64| num(upper / p))
                .unwrap_or(Value::Null);
            uppers.push(upper);
            rep.table.push(vec![
                Value::from(k),
                Value::from(level),
                Value::from(parents),
                Value::from(literal),
                num(upper),
                global,
                lower,
                ratio,
            ]);
        }
        let worst = uppers.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        rep.check(
            format!("cube_k{k}_ratio"),
            uppers.windows(2).all(|w| w[1] <= MAX_RATIO * w[0]),
            format!("max inter-level ratio {worst:.6} (<= {MAX_RATIO})"),
        );
        if representative {
            rep.notes.push(format!(
                "k = {k}: levels above {} parents use one representative parent times the parent count",
                cfg.literal_parent_cap
            ));
        }
    }
    Ok(rep)
}
