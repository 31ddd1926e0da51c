//! Text formats for chains and primal/dual mesh pairs.
//!
//! Chain file:
//!
//! ```text
//! chainlet-chain v1
//! n 2
//! mode rational
//! # p <x_1..x_n> <j> <m_1..m_j> <k> <i_1..i_k> <coeff>
//! p 1/2 0 1 1 1 2 3/4
//! ```
//!
//! Each `p` record is one basis term `coeff * grad_{e_m1 .. e_mj} (x) e_{i1..ik}` at the point.
//! Records at the same point are summed. Indices are 1-based. Rational files use exact
//! `a/b` literals; float files use shortest round-trip decimals. Blank lines and `#`
//! comments are ignored.
//!
//! Mesh file:
//!
//! ```text
//! chainlet-mesh v1
//! vertices 3
//! 0 0
//! 1 0
//! 0 1
//! triangles 1
//! 0 1 2 1
//! dual_vertices 2
//! 1/2 1/2
//! 1/2 -1/2
//! pairs 3
//! 0 1 : 0 1
//! ...
//! ```
//!
//! Triangles are three 0-based vertex indices and an orientation sign. Each pair line maps a
//! primal edge `a b` to a dual polyline given by dual-vertex indices.

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{MultiIndex, SymMonomial, XElement, MAX_DIM};
use crate::chains::{Chain, ChainError, Point};
use crate::geometry::{CellPair, GeometryError, MeshPair};
use crate::scalar::{ArithmeticMode, Rational, Scalar};

pub const CHAIN_HEADER: &str = "chainlet-chain v1";
pub const MESH_HEADER: &str = "chainlet-mesh v1";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("file is {found} but {expected} was requested")]
    ModeMismatch {
        expected: ArithmeticMode,
        found: ArithmeticMode,
    },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn perr(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        msg: msg.into(),
    }
}

/// A chain read from a file in whichever mode its header declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyChain {
    Rational(Chain<Rational>),
    Float(Chain<f64>),
}

impl AnyChain {
    pub fn mode(&self) -> ArithmeticMode {
        match self {
            AnyChain::Rational(_) => ArithmeticMode::Rational,
            AnyChain::Float(_) => ArithmeticMode::Float,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyChain::Rational(c) => c.n(),
            AnyChain::Float(c) => c.n(),
        }
    }

    pub fn write(&self) -> String {
        match self {
            AnyChain::Rational(c) => write_chain(c),
            AnyChain::Float(c) => write_chain(c),
        }
    }
}

fn fmt_scalar<S: Scalar>(v: &S) -> String {
    match S::MODE {
        ArithmeticMode::Rational => v.to_string(),
        ArithmeticMode::Float => format!("{:?}", v.to_f64()),
    }
}

fn parse_scalar<S: Scalar>(tok: &str, line: usize) -> Result<S, IoError> {
    let v = match S::MODE {
        // std parsing is correctly rounded, so written floats come back bit for bit
        ArithmeticMode::Float => tok
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .and_then(S::from_f64),
        ArithmeticMode::Rational => S::parse_literal(tok),
    };
    v.ok_or_else(|| perr(line, format!("bad number `{tok}`")))
}

pub fn write_chain<S: Scalar>(c: &Chain<S>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{CHAIN_HEADER}");
    let _ = writeln!(out, "n {}", c.n());
    let _ = writeln!(out, "mode {}", S::MODE);
    for pole in c.poles() {
        for t in pole.payload.terms() {
            let mut rec = String::from("p");
            for x in pole.at.coords() {
                let _ = write!(rec, " {}", fmt_scalar(x));
            }
            let _ = write!(rec, " {}", t.mono.order());
            for m in t.mono.factors() {
                let _ = write!(rec, " {m}");
            }
            let _ = write!(rec, " {}", t.idx.len());
            for i in t.idx.iter() {
                let _ = write!(rec, " {i}");
            }
            let _ = write!(rec, " {}", fmt_scalar(&t.coeff));
            let _ = writeln!(out, "{rec}");
        }
    }
    out
}

/// Meaningful lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn keyed<'a>(line: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str), IoError> {
    let (no, l) = line.ok_or_else(|| perr(0, format!("missing `{key}` line")))?;
    match l.split_once(char::is_whitespace) {
        Some((k, v)) if k == key => Ok((no, v.trim())),
        _ => Err(perr(no, format!("expected `{key} ...`"))),
    }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, IoError> {
    tok.parse()
        .map_err(|_| perr(line, format!("bad {what} `{tok}`")))
}

fn read_header(text: &str) -> Result<(usize, ArithmeticMode, Vec<(usize, &str)>), IoError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, h)) if h == CHAIN_HEADER => {}
        Some((no, _)) => return Err(perr(no, format!("expected header `{CHAIN_HEADER}`"))),
        None => return Err(perr(0, "empty file")),
    }
    let (no, v) = keyed(lines.next(), "n")?;
    let n = parse_usize(v, no, "dimension")?;
    if n == 0 || n > MAX_DIM {
        return Err(perr(no, format!("dimension {n} outside 1..={}", MAX_DIM)));
    }
    let (no, v) = keyed(lines.next(), "mode")?;
    let mode: ArithmeticMode = v.parse().map_err(|e: String| perr(no, e))?;
    Ok((n, mode, lines.collect()))
}

struct Cursor<'a> {
    toks: &'a [&'a str],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn next(&mut self, what: &str) -> Result<&'a str, IoError> {
        let t = self
            .toks
            .get(self.pos)
            .ok_or_else(|| perr(self.line, format!("record ends before {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn indices(&mut self, count: usize, n: usize) -> Result<Vec<usize>, IoError> {
        let mut v = Vec::with_capacity(count);
        for _ in 0..count {
            let i = parse_usize(self.next("an index")?, self.line, "index")?;
            if i == 0 || i > n {
                return Err(perr(self.line, format!("index {i} outside 1..={n}")));
            }
            v.push(i);
        }
        Ok(v)
    }
}

fn read_records<S: Scalar>(n: usize, lines: &[(usize, &str)]) -> Result<Chain<S>, IoError> {
    let mut parts = Vec::with_capacity(lines.len());
    for &(no, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks[0] != "p" {
            return Err(perr(no, format!("unknown record `{}`", toks[0])));
        }
        let mut cur = Cursor {
            toks: &toks[1..],
            pos: 0,
            line: no,
        };
        let mut coords = Vec::with_capacity(n);
        for _ in 0..n {
            coords.push(parse_scalar::<S>(cur.next("a coordinate")?, no)?);
        }
        let j = parse_usize(cur.next("the order")?, no, "order")?;
        let mono_idx = cur.indices(j, n)?;
        let k = parse_usize(cur.next("the grade")?, no, "grade")?;
        let kv_idx = cur.indices(k, n)?;
        let coeff = parse_scalar::<S>(cur.next("the coefficient")?, no)?;
        if cur.pos < cur.toks.len() {
            return Err(perr(no, "trailing tokens after the coefficient"));
        }
        let mono = SymMonomial::new(&mono_idx).ok_or_else(|| perr(no, "bad symmetric factor"))?;
        let mut sorted = kv_idx.clone();
        sorted.sort_unstable();
        if kv_idx != sorted || sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(perr(no, "multi-index must be strictly increasing"));
        }
        let idx = MultiIndex::new(&kv_idx).ok_or_else(|| perr(no, "bad multi-index"))?;
        parts.push((Point::new(coords), XElement::term(n, mono, idx, coeff)));
    }
    Ok(Chain::from_parts(n, parts)?)
}

/// Reads a chain in the mode its header declares.
pub fn read_any_chain(text: &str) -> Result<AnyChain, IoError> {
    let (n, mode, lines) = read_header(text)?;
    Ok(match mode {
        ArithmeticMode::Rational => AnyChain::Rational(read_records(n, &lines)?),
        ArithmeticMode::Float => AnyChain::Float(read_records(n, &lines)?),
    })
}

/// Reads a chain whose header mode must match `S`.
pub fn read_chain<S: Scalar>(text: &str) -> Result<Chain<S>, IoError> {
    let (n, mode, lines) = read_header(text)?;
    if mode != S::MODE {
        return Err(IoError::ModeMismatch {
            expected: S::MODE,
            found: mode,
        });
    }
    read_records(n, &lines)
}

pub fn write_mesh(m: &MeshPair) -> String {
    let mut out = String::new();
    let row = |v: &[Rational]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(out, "{MESH_HEADER}");
    let _ = writeln!(out, "vertices {}", m.vertices.len());
    for v in &m.vertices {
        let _ = writeln!(out, "{}", row(v));
    }
    let _ = writeln!(out, "triangles {}", m.triangles.len());
    for (t, s) in &m.triangles {
        let _ = writeln!(out, "{} {} {} {s}", t[0], t[1], t[2]);
    }
    let _ = writeln!(out, "dual_vertices {}", m.dual_vertices.len());
    for v in &m.dual_vertices {
        let _ = writeln!(out, "{}", row(v));
    }
    let _ = writeln!(out, "pairs {}", m.pairs.len());
    for p in &m.pairs {
        let d: Vec<String> = p.dual.iter().map(|i| i.to_string()).collect();
        let _ = writeln!(out, "{} {} : {}", p.edge[0], p.edge[1], d.join(" "));
    }
    out
}

fn section<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
) -> Result<(usize, Vec<(usize, &'a str)>), IoError> {
    let (no, v) = keyed(lines.next(), key)?;
    let count = parse_usize(v, no, "count")?;
    let mut body = Vec::with_capacity(count);
    for _ in 0..count {
        body.push(
            lines
                .next()
                .ok_or_else(|| perr(no, format!("`{key}` section has fewer than {count} lines")))?,
        );
    }
    Ok((no, body))
}

fn points(body: &[(usize, &str)]) -> Result<Vec<Vec<Rational>>, IoError> {
    body.iter()
        .map(|&(no, l)| {
            let v = l
                .split_whitespace()
                .map(|t| parse_scalar::<Rational>(t, no))
                .collect::<Result<Vec<_>, _>>()?;
            if v.len() != 2 {
                return Err(perr(
                    no,
                    format!("expected 2 coordinates, found {}", v.len()),
                ));
            }
            Ok(v)
        })
        .collect()
}

/// Parses and validates a mesh pair; validation errors from the geometry layer pass through.
pub fn read_mesh(text: &str) -> Result<MeshPair, IoError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, h)) if h == MESH_HEADER => {}
        Some((no, _)) => return Err(perr(no, format!("expected header `{MESH_HEADER}`"))),
        None => return Err(perr(0, "empty file")),
    }
    let (_, vbody) = section(&mut lines, "vertices")?;
    let vertices = points(&vbody)?;
    let (_, tbody) = section(&mut lines, "triangles")?;
    let mut triangles = Vec::with_capacity(tbody.len());
    for (no, l) in tbody {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(perr(no, "triangle needs three vertex indices and a sign"));
        }
        let mut t = [0usize; 3];
        for (slot, tok) in t.iter_mut().zip(&toks[..3]) {
            *slot = parse_usize(tok, no, "vertex index")?;
        }
        let s: i32 = match toks[3] {
            "1" | "+1" => 1,
            "-1" => -1,
            other => {
                return Err(perr(
                    no,
                    format!("orientation sign must be 1 or -1, found `{other}`"),
                ))
            }
        };
        triangles.push((t, s));
    }
    let (_, dbody) = section(&mut lines, "dual_vertices")?;
    let dual_vertices = points(&dbody)?;
    let (_, pbody) = section(&mut lines, "pairs")?;
    let mut pairs = Vec::with_capacity(pbody.len());
    for (no, l) in pbody {
        let (edge, dual) = l
            .split_once(':')
            .ok_or_else(|| perr(no, "pair needs `a b : d0 d1 ...`"))?;
        let e: Vec<usize> = edge
            .split_whitespace()
            .map(|t| parse_usize(t, no, "vertex index"))
            .collect::<Result<_, _>>()?;
        if e.len() != 2 {
            return Err(perr(no, "primal edge needs two vertex indices"));
        }
        let d: Vec<usize> = dual
            .split_whitespace()
            .map(|t| parse_usize(t, no, "dual vertex index"))
            .collect::<Result<_, _>>()?;
        pairs.push(CellPair {
            edge: [e[0], e[1]],
            dual: d,
        });
    }
    if let Some((no, _)) = lines.next() {
        return Err(perr(no, "unexpected content after the pairs section"));
    }
    Ok(MeshPair::new(vertices, triangles, dual_vertices, pairs)?)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::algebra::KVector;
    use crate::geometry::{square_grid_pair, DualKind};
    use crate::testutil::*;

    #[test]
    fn writes_documented_record() {
        let c = Chain::single(
            Point::new(vec![qr(1, 2), q(0)]),
            XElement::term(
                2,
                SymMonomial::new(&[1]).unwrap(),
                MultiIndex::new(&[2]).unwrap(),
                qr(3, 4),
            ),
        )
        .unwrap();
        let text = write_chain(&c);
        assert_eq!(
            text,
            "chainlet-chain v1\nn 2\nmode rational\np 1/2 0 1 1 1 2 3/4\n"
        );
        assert_eq!(read_chain::<Q>(&text).unwrap(), c);
    }

    #[test]
    fn float_round_trip_is_bitwise() {
        let c = Chain::monopole(
            Point::new(vec![0.1, -1e-300]),
            &KVector::vector(&[1.0 / 3.0, 2.5]),
        )
        .unwrap();
        let back = read_chain::<f64>(&write_chain(&c)).unwrap();
        for (a, b) in c.poles().iter().zip(back.poles()) {
            assert_eq!(a.at.coords(), b.at.coords());
            for (s, t) in a.payload.terms().iter().zip(b.payload.terms()) {
                assert_eq!(s.coeff.to_bits(), t.coeff.to_bits());
            }
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = |body: &str| {
            read_any_chain(&format!("chainlet-chain v1\nn 2\nmode rational\n\n{body}"))
        };
        assert!(matches!(
            bad("p 0 0 0 1 1 x"),
            Err(IoError::Parse { line: 5, .. })
        ));
        assert!(matches!(
            bad("p 0 0 0 1 3 1"),
            Err(IoError::Parse { line: 5, .. })
        ));
        assert!(matches!(
            bad("p 0 0 0 2 2 1 1"),
            Err(IoError::Parse { line: 5, .. })
        ));
        assert!(matches!(
            bad("p 0 0 0 1 1 1 9"),
            Err(IoError::Parse { line: 5, .. })
        ));
        assert!(matches!(bad("q 0 0"), Err(IoError::Parse { line: 5, .. })));
        assert!(matches!(
            read_any_chain("chainlet-chain v2\n"),
            Err(IoError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_chain::<f64>("chainlet-chain v1\nn 1\nmode rational\n"),
            Err(IoError::ModeMismatch { .. })
        ));
        // empty chain is fine
        assert_eq!(
            read_any_chain("chainlet-chain v1\nn 3\nmode float\n").unwrap(),
            AnyChain::Float(Chain::zero(3))
        );
    }

    #[test]
    fn mesh_round_trip_and_validation() {
        for kind in [
            DualKind::Circumcentric,
            DualKind::Barycentric,
            DualKind::PerpTranslate,
        ] {
            let m = square_grid_pair(2, kind).unwrap();
            assert_eq!(read_mesh(&write_mesh(&m)).unwrap(), m);
        }
        let text = write_mesh(&square_grid_pair(1, DualKind::Circumcentric).unwrap());
        let no_pair: String = {
            let mut ls: Vec<&str> = text.lines().collect();
            let at = ls.iter().position(|l| l.starts_with("pairs")).unwrap();
            let count: usize = ls[at][6..].parse().unwrap();
            let header = format!("pairs {}", count - 1);
            ls[at] = &header;
            ls.pop();
            ls.join("\n")
        };
        assert!(matches!(
            read_mesh(&no_pair),
            Err(IoError::Geometry(GeometryError::Bijection(_)))
        ));
        let flipped = text.replacen(" 1\ndual_vertices", " -1\ndual_vertices", 1);
        assert!(matches!(read_mesh(&flipped), Err(IoError::Geometry(_))));
        assert!(matches!(
            read_mesh("chainlet-mesh v1\nvertices 2\n0 0\n"),
            Err(IoError::Parse { line: 2, .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rational_round_trip_is_exact(
            p in (1usize..=4, 0usize..=2, 0usize..=4).prop_flat_map(|(n, j, k)| arb_chain(n, j, k.min(n), 5))
        ) {
            prop_assert_eq!(read_chain::<Q>(&write_chain(&p)).unwrap(), p.clone());
            prop_assert_eq!(read_any_chain(&write_chain(&p)).unwrap(), AnyChain::Rational(p));
        }
    }
}
