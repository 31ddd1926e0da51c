use std::io::Write;

use chainlet::io::AnyChain;
use chainlet::norms::{bracket, brute_force_norm, DualFamilySpec};
use chainlet::{Chain, Scalar};

use crate::args::NormArgs;
use crate::{banner, describe, fixed, load_chain, mode_label, CliError, Status};

fn report<S: Scalar>(c: &Chain<S>, a: &NormArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let b = bracket(c, a.r, &DualFamilySpec::default())?;
    let brute = if a.brute {
        Some(brute_force_norm(c, a.r)?)
    } else {
        None
    };
    banner(out, "norm", mode_label(S::MODE))?;
    writeln!(out, "chain {}", describe(c))?;
    writeln!(out, "r = {}", a.r)?;
    writeln!(out, "bracket: [{}, {}]", fixed(b.lower), fixed(b.upper))?;
    writeln!(out, "gap: {}", fixed(b.gap()))?;
    if let Some(v) = brute {
        writeln!(out, "brute force: {}", fixed(v))?;
    }
    write!(out, "upper witness: {}", b.upper_witness)?;
    writeln!(out, "lower witness: {}", b.lower_witness)?;
    Ok(())
}

pub fn run(a: NormArgs, out: &mut dyn Write) -> Result<Status, CliError> {
    let c = load_chain(&a.chain, a.mode.map(Into::into))?;
    match &c {
        AnyChain::Rational(c) => report(c, &a, out)?,
        AnyChain::Float(c) => report(c, &a, out)?,
    }
    Ok(Status::Ok)
}
