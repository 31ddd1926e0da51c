//! Textual form literals.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*       '*' between forms is the wedge product
//! unary   := '-' unary | power
//! power   := primary ('^' integer)?           only 0-forms may be raised to a power
//! primary := number | 'x'i | 'dx'i | ('sin' | 'cos') '(' expr ')' | '(' expr ')'
//! ```
//!
//! Numbers are exact decimals or integers (`0.25`, `3e-2`). Division is allowed only by a
//! nonzero constant. Trig arguments must be 0-forms. Terms of a sum must share a grade.

use std::collections::BTreeMap;

use super::{CoeffFn, Const, Form, FormError};
use crate::algebra::MultiIndex;
use crate::scalar::parse_rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Coord(usize),
    Diff(usize),
    Func(&'static str),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, FormError> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'-' || b[j] == b'+') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    i = j;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            out.push((start, Tok::Num(s[start..i].to_string())));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < b.len() && b[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let word = &s[start..i];
            let tok = if word == "sin" {
                Tok::Func("sin")
            } else if word == "cos" {
                Tok::Func("cos")
            } else if let Some(d) = word.strip_prefix("dx") {
                Tok::Diff(parse_index(d, start, word)?)
            } else if let Some(d) = word.strip_prefix('x') {
                Tok::Coord(parse_index(d, start, word)?)
            } else {
                return Err(FormError::Parse {
                    pos: start,
                    msg: format!("unknown identifier `{word}`"),
                });
            };
            out.push((start, tok));
            continue;
        }
        if "+-*/^()".contains(c) {
            out.push((start, Tok::Op(c)));
            i += 1;
            continue;
        }
        return Err(FormError::Parse {
            pos: start,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

fn parse_index(d: &str, pos: usize, word: &str) -> Result<usize, FormError> {
    match d.parse::<usize>() {
        Ok(i) if (1..=crate::algebra::MAX_DIM).contains(&i) => Ok(i),
        _ => Err(FormError::Parse {
            pos,
            msg: format!("bad coordinate index in `{word}`"),
        }),
    }
}

/// Homogeneous partial form during parsing.
#[derive(Clone, Debug)]
struct Partial {
    k: usize,
    terms: BTreeMap<MultiIndex, CoeffFn>,
}

impl Partial {
    fn scalar(f: CoeffFn) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(MultiIndex::EMPTY, f);
        }
        Partial { k: 0, terms }
    }

    fn as_scalar(&self) -> Option<CoeffFn> {
        (self.k == 0).then(|| {
            self.terms
                .get(&MultiIndex::EMPTY)
                .cloned()
                .unwrap_or_default()
        })
    }

    fn add(mut self, o: Partial, pos: usize) -> Result<Partial, FormError> {
        let zero_self = self.terms.is_empty();
        if self.k != o.k && !zero_self && !o.terms.is_empty() {
            return Err(FormError::Parse {
                pos,
                msg: format!("cannot add a {}-form and a {}-form", self.k, o.k),
            });
        }
        if zero_self {
            self.k = o.k;
        }
        for (i, f) in o.terms {
            let g = self.terms.get(&i).map_or(f.clone(), |g| g.add(&f));
            if g.is_zero() {
                self.terms.remove(&i);
            } else {
                self.terms.insert(i, g);
            }
        }
        Ok(self)
    }

    fn neg(self) -> Partial {
        Partial {
            k: self.k,
            terms: self.terms.into_iter().map(|(i, f)| (i, f.neg())).collect(),
        }
    }

    fn wedge(self, o: Partial) -> Partial {
        let mut out = Partial {
            k: self.k + o.k,
            terms: BTreeMap::new(),
        };
        for (i, f) in &self.terms {
            for (j, g) in &o.terms {
                if let Some(s) = i.wedge_sign(*j) {
                    let h = f.mul(g);
                    let h = if s > 0 { h } else { h.neg() };
                    let k = out.k;
                    out = out
                        .add(
                            Partial {
                                k,
                                terms: BTreeMap::from([(i.union(*j), h)]),
                            },
                            0,
                        )
                        .unwrap();
                }
            }
        }
        out
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn expect(&mut self, c: char) -> Result<(), FormError> {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(FormError::Parse {
                pos: self.here(),
                msg: format!("expected `{c}`"),
            })
        }
    }

    fn expr(&mut self) -> Result<Partial, FormError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            let pos = self.here();
            self.pos += 1;
            let rhs = self.term()?;
            acc = acc.add(if c == '+' { rhs } else { rhs.neg() }, pos)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Partial, FormError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            let pos = self.here();
            self.pos += 1;
            let rhs = self.unary()?;
            if c == '*' {
                acc = acc.wedge(rhs);
            } else {
                let d = rhs
                    .as_scalar()
                    .and_then(|f| f.as_constant())
                    .filter(|c| !c.is_zero())
                    .ok_or(FormError::Parse {
                        pos,
                        msg: "division only by a nonzero constant".into(),
                    })?;
                let inv = Const::new(d.rational().recip());
                acc = Partial {
                    k: acc.k,
                    terms: acc
                        .terms
                        .into_iter()
                        .map(|(i, f)| (i, f.scale(&inv)))
                        .collect(),
                };
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Partial, FormError> {
        if self.peek() == Some(&Tok::Op('-')) {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        if self.peek() == Some(&Tok::Op('+')) {
            self.pos += 1;
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Partial, FormError> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Op('^')) {
            let pos = self.here();
            self.pos += 1;
            let e = match self.toks.get(self.pos) {
                Some((_, Tok::Num(s))) => s.parse::<u32>().map_err(|_| FormError::Parse {
                    pos,
                    msg: "exponent must be a nonnegative integer".into(),
                })?,
                _ => {
                    return Err(FormError::Parse {
                        pos,
                        msg: "exponent must be a nonnegative integer".into(),
                    })
                }
            };
            self.pos += 1;
            let f = base.as_scalar().ok_or(FormError::Parse {
                pos,
                msg: "only 0-forms can be raised to a power".into(),
            })?;
            return Ok(Partial::scalar(f.pow(e)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Partial, FormError> {
        let pos = self.here();
        let tok = self.peek().cloned().ok_or(FormError::Parse {
            pos,
            msg: "unexpected end of input".into(),
        })?;
        self.pos += 1;
        match tok {
            Tok::Num(s) => {
                let q = parse_rational(&s).ok_or(FormError::Parse {
                    pos,
                    msg: format!("bad number `{s}`"),
                })?;
                Ok(Partial::scalar(CoeffFn::rational(q)))
            }
            Tok::Coord(i) => Ok(Partial::scalar(CoeffFn::coord(i))),
            Tok::Diff(i) => Ok(Partial {
                k: 1,
                terms: BTreeMap::from([(MultiIndex::single(i), CoeffFn::one())]),
            }),
            Tok::Func(name) => {
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                let g = arg.as_scalar().ok_or(FormError::Parse {
                    pos,
                    msg: format!("argument of {name} must be a 0-form"),
                })?;
                Ok(Partial::scalar(if name == "sin" {
                    CoeffFn::sin(&g)
                } else {
                    CoeffFn::cos(&g)
                }))
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Op(c) => Err(FormError::Parse {
                pos,
                msg: format!("unexpected `{c}`"),
            }),
        }
    }
}

fn parse_partial(s: &str) -> Result<Partial, FormError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(FormError::Parse {
            pos: 0,
            msg: "empty form literal".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        len: s.len(),
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(FormError::Parse {
            pos: p.here(),
            msg: "trailing input".into(),
        });
    }
    Ok(out)
}

/// Parses a form literal. The ambient dimension is `n` if given (indices must fit),
/// otherwise the largest coordinate or differential index that appears.
pub fn parse_form(s: &str, n: Option<usize>) -> Result<Form, FormError> {
    let p = parse_partial(s)?;
    let used = p
        .terms
        .iter()
        .map(|(i, f)| i.max_index().max(f.max_var()))
        .max()
        .unwrap_or(0);
    let n = match n {
        Some(n) if used > n => {
            return Err(FormError::Parse {
                pos: 0,
                msg: format!("index {used} exceeds dimension {n}"),
            })
        }
        Some(n) => n,
        None => used.max(1),
    };
    if p.k > n {
        return Err(FormError::Parse {
            pos: 0,
            msg: format!("grade {} exceeds dimension {n}", p.k),
        });
    }
    Form::from_terms(n, p.k, p.terms)
}

/// Parses a scalar coefficient expression (no differentials).
pub fn parse_coeff(s: &str) -> Result<CoeffFn, FormError> {
    let p = parse_partial(s)?;
    p.as_scalar().ok_or(FormError::Parse {
        pos: 0,
        msg: "expected a function, found a form of positive grade".into(),
    })
}
