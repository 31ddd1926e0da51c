use std::io::Write;

use chainlet::geometry::{hodge_sequence_report, HodgeConfig};
use chainlet::io::read_mesh;

use crate::args::HodgeArgs;
use crate::{banner, fixed, read_text, CliError, Status};

/// Prints the per-level table and the verdict; NOT-HODGE is a result, not an error.
pub fn run(a: HodgeArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let meshes = a
        .meshes
        .iter()
        .map(|p| {
            read_mesh(&read_text(p)?).map_err(|source| CliError::Parse {
                path: p.clone(),
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut cfg = HodgeConfig {
        refine: a.refine,
        final_ratio: a.final_ratio,
        ..HodgeConfig::default()
    };
    if a.no_lower {
        cfg.family = None;
    }
    let r = hodge_sequence_report(&meshes, &cfg)?;
    banner(out, "hodge", "rational meshes, float brackets")?;
    writeln!(out, "level  mesh_size  pairs  degenerate  direction_ratio  barycenter_distance  bracket_lower  bracket_upper")?;
    for l in &r.levels {
        writeln!(
            out,
            "{}  {}  {}  {}  {}  {}  {}  {}",
            l.level,
            fixed(l.mesh_size),
            l.pairs,
            l.degenerate,
            fixed(l.direction_ratio),
            fixed(l.max_barycenter_distance),
            fixed(l.bracket_lower),
            fixed(l.bracket_upper)
        )?;
    }
    writeln!(out, "verdict: {}", r.verdict)?;
    for reason in &r.reasons {
        writeln!(out, "  {reason}")?;
    }
    Ok(Status::Ok)
}
