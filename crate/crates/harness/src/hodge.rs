//! Dual-mesh sequences: circumcentric duals should approach the perp of the primal, a skew
//! (barycentric) dual should not.

use chainlet::geometry::{
    hodge_sequence_report, square_grid_family, DualKind, HodgeConfig, HodgeReport, HodgeVerdict,
};
use serde_json::Value;

use crate::report::{num, Report, Table};
use crate::{HarnessConfig, HarnessError};

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn rows(table: &mut Table, family: &str, r: &HodgeReport) {
    for l in &r.levels {
        table.push(vec![
            Value::from(family),
            Value::from(l.level),
            num(l.mesh_size),
            Value::from(l.pairs),
            Value::from(l.degenerate),
            num(l.direction_ratio),
            num(l.max_barycenter_distance),
            num(l.bracket_lower),
            num(l.bracket_upper),
            Value::from(r.verdict.to_string()),
        ]);
    }
}

pub fn hodge_sequences(cfg: &HarnessConfig) -> Result<Report, HarnessError> {
    let levels: Vec<u32> = (1..=cfg.hodge_levels).collect();
    let hc = HodgeConfig::default();
    let mut table = Table::new(&[
        "family",
        "level",
        "mesh_size",
        "pairs",
        "degenerate",
        "direction_ratio",
        "max_barycenter_distance",
        "bracket_lower",
        "bracket_upper",
        "verdict",
    ]);
    let circ = hodge_sequence_report(&square_grid_family(&levels, DualKind::Circumcentric)?, &hc)?;
    let skew = hodge_sequence_report(&square_grid_family(&levels, DualKind::Barycentric)?, &hc)?;
    let selfdual = hodge_sequence_report(
        &square_grid_family(&levels[..levels.len().min(3)], DualKind::PerpTranslate)?,
        &hc,
    )?;
    rows(&mut table, "circumcentric", &circ);
    rows(&mut table, "barycentric", &skew);
    rows(&mut table, "perp", &selfdual);
    let mut rep = Report::new(
        "hodge_sequence",
        "structured unit-square triangulations with circumcentric, barycentric and perp-translated duals",
        table,
    );
    let ratios: Vec<f64> = circ.levels.iter().map(|l| l.direction_ratio).collect();
    let uppers: Vec<f64> = circ.levels.iter().map(|l| l.bracket_upper).collect();
    rep.check(
        "circumcentric_ratio_strictly_decreasing",
        strictly_decreasing(&ratios),
        format!("{ratios:?}"),
    );
    rep.check(
        "circumcentric_bracket_strictly_decreasing",
        strictly_decreasing(&uppers),
        format!("{uppers:?}"),
    );
    let last = ratios.last().copied().unwrap_or(f64::INFINITY);
    rep.check(
        "circumcentric_final_ratio",
        last < hc.final_ratio,
        format!("{last:.6} < {}", hc.final_ratio),
    );
    rep.check(
        "circumcentric_verdict",
        circ.verdict == HodgeVerdict::Hodge,
        format!("{} {:?}", circ.verdict, circ.reasons),
    );
    rep.check(
        "skew_verdict",
        skew.verdict == HodgeVerdict::NotHodge,
        format!("{} {:?}", skew.verdict, skew.reasons),
    );
    let zero = selfdual.levels.iter().all(|l| l.direction_ratio == 0.0);
    rep.check(
        "perp_dual_ratio_zero",
        zero,
        "perp-translated dual has direction ratio 0 at every level",
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_levels() {
        let rep = hodge_sequences(&HarnessConfig {
            hodge_levels: 3,
            ..HarnessConfig::default()
        })
        .unwrap();
        let failed: Vec<&str> = rep
            .failed_checks()
            .iter()
            .map(|c| c.name.as_str())
            .collect();
        // 1/8 is not yet below the 0.05 target; everything else holds
        assert_eq!(
            failed,
            vec!["circumcentric_final_ratio", "circumcentric_verdict"]
        );
    }
}
