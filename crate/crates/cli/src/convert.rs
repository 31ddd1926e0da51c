use std::io::Write;
use std::path::Path;

use chainlet::geometry::{square_grid_pair, CubeCell, DualKind};
use chainlet::io::{write_mesh, AnyChain};
use chainlet::{ArithmeticMode, Rational};

use crate::args::{ConvertArgs, ConvertWhat, DualArg};
use crate::{banner, convert_mode, describe, load_chain, mode_label, write_text, CliError, Status};

fn emit(
    out: &mut dyn Write,
    path: Option<&Path>,
    text: &str,
    mode: &str,
    what: String,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            write_text(p, text)?;
            banner(out, "convert", mode)?;
            writeln!(out, "{what} -> {}", p.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn summary(c: &AnyChain) -> String {
    match c {
        AnyChain::Rational(c) => describe(c),
        AnyChain::Float(c) => describe(c),
    }
}

pub fn run(a: ConvertArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    match a.what {
        ConvertWhat::Chain {
            input,
            mode,
            out: path,
        } => {
            let c = convert_mode(load_chain(&input, None)?, mode.into())?;
            emit(
                out,
                path.as_deref(),
                &c.write(),
                mode_label(c.mode()),
                format!("chain {}", summary(&c)),
            )?;
        }
        ConvertWhat::Cube {
            n,
            k,
            level,
            mode,
            out: path,
        } => {
            if k == 0 || k > n || n > chainlet::algebra::MAX_DIM {
                return Err(CliError::Usage(format!(
                    "need 1 <= k <= n <= {}",
                    chainlet::algebra::MAX_DIM
                )));
            }
            if level as usize * k > 24 {
                return Err(CliError::Usage("cube chain above 2^24 poles".into()));
            }
            let c = AnyChain::Rational(CubeCell::<Rational>::unit(n, k).to_chain(level)?);
            let c = convert_mode(c, ArithmeticMode::from(mode))?;
            emit(
                out,
                path.as_deref(),
                &c.write(),
                mode_label(c.mode()),
                format!("cube {}", summary(&c)),
            )?;
        }
        ConvertWhat::Mesh {
            level,
            dual,
            out: path,
        } => {
            if level > 8 {
                return Err(CliError::Usage("mesh level above 8".into()));
            }
            let kind = match dual {
                DualArg::Circumcentric => DualKind::Circumcentric,
                DualArg::Barycentric => DualKind::Barycentric,
                DualArg::Perp => DualKind::PerpTranslate,
            };
            let m = square_grid_pair(1usize << level, kind)?;
            let what = format!("mesh level {level} with {} pairs", m.pairs.len());
            emit(
                out,
                path.as_deref(),
                &write_mesh(&m),
                "rational (exact)",
                what,
            )?;
        }
    }
    Ok(Status::Ok)
}
