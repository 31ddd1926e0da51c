//! Norm oracles: the upper-bound solver against brute-force enumeration on a small enumerated
//! family, and the dual lower bound against the analytic dipole bound `(2/pi) h`.

use std::f64::consts::FRAC_2_PI;

use chainlet::algebra::KVector;
use chainlet::chains::{Chain, Point};
use chainlet::norms::{brute_force_norm, lower_bound, upper_bound, upper_bound_lp, DualFamilySpec};
use chainlet::scalar::Rational;
use rand::Rng;
use serde_json::Value;

use crate::gen::*;
use crate::report::{num, Classical, Reference, Report, Table};
use crate::{HarnessConfig, HarnessError};

pub const ORACLE_TOL: f64 = 1e-9;

/// Deterministic family: pole counts cycle through 1..=6, dimensions 1 and 2, every grade.
pub fn enumerated_family(cfg: &HarnessConfig) -> Vec<Chain<Rational>> {
    let mut rng = rng_for(cfg.seed, "norm_family");
    let mut out = Vec::with_capacity(cfg.norm_family);
    let mut i = 0usize;
    while out.len() < cfg.norm_family {
        let poles = 1 + i % 6;
        let n = 1 + (i / 6) % 2;
        let k = (i / 12) % (n + 1);
        i += 1;
        let parts: Vec<_> = (0..poles)
            .map(|_| {
                let at = Point::new((0..n).map(|_| q(rng.gen_range(0..=6), 2)).collect());
                let c = *[1, -1, 2, -2].get(rng.gen_range(0..4)).expect("index < 4");
                let idx = rand_index(&mut rng, n, k);
                (
                    at,
                    chainlet::XElement::from_kvector(&KVector::basis_scaled(
                        n,
                        idx,
                        q(c, if rng.gen_bool(0.2) { 2 } else { 1 }),
                    )),
                )
            })
            .collect();
        let p = Chain::from_parts(n, parts).expect("consistent dimension");
        if !p.is_zero() {
            out.push(p);
        }
    }
    out
}

pub fn upper_vs_brute(cfg: &HarnessConfig) -> Result<Report, HarnessError> {
    let family = enumerated_family(cfg);
    let mut rep = Report::new(
        "norm_oracle",
        "upper-bound solvers against brute-force enumeration of the decomposition class",
        Table::new(&[
            "chain",
            "n",
            "poles",
            "r",
            "upper",
            "lp_route",
            "brute_force",
            "difference",
        ]),
    );
    let mut worst = 0.0f64;
    let mut bad = 0usize;
    let mut lp_bad = 0usize;
    for (i, p) in family.iter().enumerate() {
        for r in 0..=2 {
            let upper = upper_bound(p, r)?.cost();
            let lp = upper_bound_lp(p, r)?.cost();
            let brute = brute_force_norm(p, r)?;
            let diff = (upper - brute).abs();
            worst = worst.max(diff);
            if diff > ORACLE_TOL {
                bad += 1;
                rep.counterexamples
                    .push(format!("# r = {r}\n{}", chainlet::io::write_chain(p)));
            }
            if (lp - brute).abs() > ORACLE_TOL {
                lp_bad += 1;
            }
            rep.table.push(vec![
                Value::from(i),
                Value::from(p.n()),
                Value::from(p.len()),
                Value::from(r),
                num(upper),
                num(lp),
                num(brute),
                num(diff),
            ]);
        }
    }
    rep.classical = Some(Classical {
        value: 0.0,
        reference: Reference::Oracle,
    });
    rep.check(
        "family_size",
        family.len() >= 50,
        format!("{} chains, at most 6 poles each", family.len()),
    );
    rep.check(
        "upper_equals_brute",
        bad == 0,
        format!("{bad} mismatches, max difference {worst:.2e} (tol {ORACLE_TOL:e})"),
    );
    rep.check(
        "lp_route_equals_brute",
        lp_bad == 0,
        format!("{lp_bad} mismatches between the LP route and enumeration"),
    );
    Ok(rep)
}

/// Dipoles `(0; e_I) - (h u; e_I)` with unit `u`: upper bound `h`, lower bound at least `(2/pi) h`.
pub fn dipole_lower_bounds(cfg: &HarnessConfig) -> Result<Report, HarnessError> {
    let mut rng = rng_for(cfg.seed, "dipoles");
    let fam = DualFamilySpec::default();
    let mut rep = Report::new(
        "dipole_lower_bound",
        "sine-family lower bound against the analytic dipole bound (2/pi) h, r = 1",
        Table::new(&[
            "n",
            "grade",
            "h",
            "direction",
            "upper",
            "lower",
            "lower_over_upper",
        ]),
    );
    let hs = [0.5, 0.375, 0.25, 0.125, 0.1, 0.0625, 0.03125, 0.01];
    let (mut bad_lower, mut bad_upper, mut worst) = (0usize, 0usize, f64::INFINITY);
    for n in 1..=3usize {
        for &h in &hs {
            let k = rng.gen_range(0..=n);
            let idx = rand_index(&mut rng, n, k);
            let mut u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let len = u.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-3);
            u.iter_mut().for_each(|c| *c /= len);
            let a = KVector::basis(n, idx);
            let at: Vec<f64> = u.iter().map(|c| c * h).collect();
            let p = Chain::monopole(Point::origin(n), &a)?
                .sub(&Chain::monopole(Point::new(at), &a)?)?;
            let upper = upper_bound(&p, 1)?.cost();
            let lower = lower_bound(&p, 1, &fam)?.value;
            if (upper - h).abs() > 1e-12 {
                bad_upper += 1;
            }
            if lower < FRAC_2_PI * upper {
                bad_lower += 1;
            }
            worst = worst.min(lower / upper);
            rep.table.push(vec![
                Value::from(n),
                Value::from(k),
                num(h),
                Value::from(format!("{u:?}")),
                num(upper),
                num(lower),
                num(lower / upper),
            ]);
        }
    }
    rep.classical = Some(Classical {
        value: FRAC_2_PI,
        reference: Reference::Analytic,
    });
    rep.check(
        "upper_is_h",
        bad_upper == 0,
        format!("{bad_upper} dipoles with upper != h"),
    );
    rep.check(
        "lower_at_least_2_over_pi",
        bad_lower == 0,
        format!("{bad_lower} failures, min lower/upper {worst:.6}"),
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_is_deterministic_and_varied() {
        let cfg = HarnessConfig::default();
        let a = enumerated_family(&cfg);
        assert_eq!(a, enumerated_family(&cfg));
        assert_eq!(a.len(), 60);
        assert!(a.iter().all(|p| p.len() <= 6));
        assert!(a.iter().any(|p| p.n() == 2 && p.grade() == Some(2)));
    }

    #[test]
    fn small_runs_pass() {
        let cfg = HarnessConfig {
            norm_family: 12,
            ..HarnessConfig::default()
        };
        let r = upper_vs_brute(&cfg).unwrap();
        let failed: Vec<_> = r
            .failed_checks()
            .into_iter()
            .filter(|c| c.name != "family_size")
            .collect();
        assert!(failed.is_empty(), "{failed:?}");
    }
}
