use std::io::Write;

use chainlet::forms::SmoothMap;
use chainlet::io::{write_chain, AnyChain};
use chainlet::{Chain, Scalar};

use crate::args::{ApplyArgs, Op};
use crate::{describe, load_chain, mode_label, write_text, CliError, Status};

fn direction<S: Scalar>(s: &str, n: usize) -> Result<Vec<S>, CliError> {
    let v = s
        .split(',')
        .map(|t| {
            S::parse_literal(t.trim())
                .ok_or_else(|| CliError::Usage(format!("bad direction component '{t}'")))
        })
        .collect::<Result<Vec<S>, _>>()?;
    if v.len() != n {
        return Err(CliError::Usage(format!(
            "direction has {} components, chain lives in R^{n}",
            v.len()
        )));
    }
    Ok(v)
}

fn apply<S: Scalar>(c: &Chain<S>, a: &ApplyArgs) -> Result<Chain<S>, CliError> {
    Ok(match a.op {
        Op::Boundary => c.boundary(),
        Op::Perp => c.perp(),
        Op::Diamond => c.diamond(),
        Op::Neg => c.neg(),
        Op::Pushforward => {
            let m = a
                .map
                .as_deref()
                .ok_or_else(|| CliError::Usage("pushforward needs --map".into()))?;
            c.pushforward(&SmoothMap::parse(m, c.n())?)?
        }
        Op::Prederivative => {
            let d = a
                .dir
                .as_deref()
                .ok_or_else(|| CliError::Usage("prederivative needs --dir".into()))?;
            c.prederivative(&direction::<S>(d, c.n())?)?
        }
    })
}

/// The chain goes to `--out` (summary on stdout) or to stdout alone, so it can be piped.
pub fn run(a: ApplyArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let c = load_chain(&a.chain, a.mode.map(Into::into))?;
    let (text, summary) = match &c {
        AnyChain::Rational(c) => {
            let r = apply(c, &a)?;
            (write_chain(&r), describe(&r))
        }
        AnyChain::Float(c) => {
            let r = apply(c, &a)?;
            (write_chain(&r), describe(&r))
        }
    };
    match &a.out {
        Some(p) => {
            write_text(p, &text)?;
            crate::banner(out, "apply", mode_label(c.mode()))?;
            writeln!(out, "{:?} -> {} ({summary})", a.op, p.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(Status::Ok)
}
