use std::io::Write;

use harness::quadrature::{custom_stokes, Domain};
use harness::theorems::run_cell_theorem;
use harness::{run_suite, HarnessConfig, Report, Suite};
use serde_json::Value;

use crate::args::VerifyArgs;
use crate::{banner, fixed, read_text, CliError, Status};

fn config(a: &VerifyArgs) -> Result<HarnessConfig, CliError> {
    let mut cfg = match &a.config {
        Some(p) => serde_json::from_str(&read_text(p)?)
            .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?,
        None => HarnessConfig::default(),
    };
    if let Some(n) = a.n {
        cfg.n_max = n;
    }
    if let Some(l) = a.levels {
        cfg.levels = l;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(t) = a.tol {
        cfg.float_tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Number(x) if x.is_f64() => fixed(x.as_f64().expect("f64")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub(crate) fn print_table(out: &mut dyn Write, r: &Report) -> Result<(), CliError> {
    writeln!(out, "  {}", r.table.columns.join("  "))?;
    for row in &r.table.rows {
        writeln!(
            out,
            "  {}",
            row.iter().map(cell).collect::<Vec<_>>().join("  ")
        )?;
    }
    Ok(())
}

fn print_report(out: &mut dyn Write, r: &Report, table: bool) -> Result<(), CliError> {
    writeln!(out, "{} {}", if r.pass() { "PASS" } else { "FAIL" }, r.name)?;
    if table {
        print_table(out, r)?;
    }
    for c in &r.checks {
        writeln!(
            out,
            "  {} {}: {}",
            if c.pass { "ok  " } else { "FAIL" },
            c.name,
            c.detail
        )?;
    }
    for n in &r.notes {
        writeln!(out, "  note: {n}")?;
    }
    Ok(())
}

pub fn run(a: VerifyArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let suite: Suite = a.suite.parse()?;
    let cfg = config(&a)?;
    let reports = match &a.form {
        Some(literal) => {
            if suite != Suite::Stokes {
                return Err(CliError::Usage(
                    "--form is only accepted by the stokes suite".into(),
                ));
            }
            let domain: Domain = a.domain.parse()?;
            let t = custom_stokes(literal, domain)?;
            vec![run_cell_theorem(&t, &cfg)?]
        }
        None => run_suite(suite, &cfg)?,
    };
    banner(
        out,
        "verify",
        "rational (exact identities) + float (convergence)",
    )?;
    writeln!(
        out,
        "suite {suite} | n_max {} | levels {} | seed {}",
        cfg.n_max, cfg.levels, cfg.seed
    )?;
    if let Some(c) = reports
        .first()
        .and_then(|r| r.classical.as_ref())
        .filter(|_| a.form.is_some())
    {
        writeln!(out, "classical value {} (quadrature)", fixed(c.value))?;
    }
    for r in &reports {
        print_report(out, r, a.tables || a.form.is_some())?;
        r.write_to(&a.out)?;
    }
    let failed = reports.iter().filter(|r| !r.pass()).count();
    writeln!(
        out,
        "verdict: {} ({} reports, {failed} failed) -> {}",
        if failed == 0 { "PASS" } else { "FAIL" },
        reports.len(),
        a.out.display()
    )?;
    Ok(if failed == 0 {
        Status::Ok
    } else {
        Status::VerificationFailed
    })
}
