//! Certified lower bounds `omega(P) / |omega|^r` from trig test forms
//! `omega = sum_I sin(xi . x + phi_I) dx_I`, whose norms are bounded analytically by
//! `max(1, |xi|)^r`.
//!
//! For a fixed frequency the best phases are explicit: with
//! `Z_I = sum c prod_m xi_m i^j exp(i xi . p)` over the terms `c grad_mono e_I` at `p`,
//! `omega(P) = sum_I Im(exp(i phi_I) Z_I)`, maximized by `phi_I = pi/2 - arg Z_I`.
//! Frequencies are searched on a direction/magnitude grid and refined by golden section.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::algebra::MultiIndex;
use crate::chains::Chain;
use crate::forms::{CoeffFn, Const, Form, FormEvaluator, SampleSpec};
use crate::scalar::Scalar;

use super::NormError;

/// Search space for the dual family.
#[derive(Clone, Debug, PartialEq)]
pub struct DualFamilySpec {
    /// Log-spaced magnitudes per direction.
    pub magnitudes: usize,
    /// Largest magnitude searched (raised automatically to `4 pi / shortest pair distance`).
    pub max_frequency: f64,
    /// Golden-section iterations around the best grid magnitudes.
    pub refine_steps: usize,
    /// Cap on directions taken from pole-pair displacements.
    pub max_pair_directions: usize,
    pub extra_directions: Vec<Vec<f64>>,
}

impl Default for DualFamilySpec {
    fn default() -> Self {
        DualFamilySpec {
            magnitudes: 48,
            max_frequency: 64.0,
            refine_steps: 40,
            max_pair_directions: 256,
            extra_directions: vec![],
        }
    }
}

#[derive(Clone, Debug)]
pub struct LowerBound {
    pub value: f64,
    pub form: Form,
    pub frequency: Vec<f64>,
}

/// Flattened chain: `(support, idx, coeff, symmetric factor directions)`.
struct Flat {
    terms: Vec<(Vec<f64>, MultiIndex, f64, Vec<usize>)>,
}

impl Flat {
    fn z(&self, xi: &[f64]) -> BTreeMap<MultiIndex, (f64, f64)> {
        let mut out: BTreeMap<MultiIndex, (f64, f64)> = BTreeMap::new();
        for (p, idx, c, mono) in &self.terms {
            let amp: f64 = c * mono.iter().map(|&m| xi[m - 1]).product::<f64>();
            if amp == 0.0 {
                continue;
            }
            let theta: f64 =
                p.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>() + FRAC_PI_2 * mono.len() as f64;
            let e = out.entry(*idx).or_insert((0.0, 0.0));
            e.0 += amp * theta.cos();
            e.1 += amp * theta.sin();
        }
        out
    }

    fn objective(&self, xi: &[f64], r: usize) -> f64 {
        let total: f64 = self.z(xi).values().map(|(a, b)| a.hypot(*b)).sum();
        total / norm(xi).max(1.0).powi(r as i32)
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Lower bound for `|P|^r` with its witness form. Works for chains of any order; a chain of
/// several grades is bounded by its best single-grade component.
pub fn lower_bound<S: Scalar>(
    p: &Chain<S>,
    r: usize,
    family: &DualFamilySpec,
) -> Result<LowerBound, NormError> {
    let n = p.n();
    let pf = p.to_f64();
    let mut by_grade: BTreeMap<usize, Flat> = BTreeMap::new();
    for q in pf.poles() {
        for t in q.payload.terms() {
            by_grade
                .entry(t.idx.len())
                .or_insert_with(|| Flat { terms: vec![] })
                .terms
                .push((
                    q.at.coords().to_vec(),
                    t.idx,
                    t.coeff,
                    t.mono.factors().collect(),
                ));
        }
    }
    let mut out = LowerBound {
        value: 0.0,
        form: Form::zero(n, p.grade().unwrap_or(0)),
        frequency: vec![0.0; n],
    };
    for (grade, flat) in &by_grade {
        let xi = search(n, flat, r, family);
        let form = witness_form(n, *grade, flat, &xi);
        let value = certify(&form, &pf, r)?;
        if value > out.value {
            out = LowerBound {
                value,
                form,
                frequency: xi,
            };
        }
    }
    Ok(out)
}

/// Frequency maximizing the closed-form objective.
fn search(n: usize, flat: &Flat, r: usize, family: &DualFamilySpec) -> Vec<f64> {
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let mut u = vec![0.0; n];
        u[i] = 1.0;
        dirs.push(u);
        for j in i + 1..n {
            for s in [1.0, -1.0] {
                let mut u = vec![0.0; n];
                u[i] = std::f64::consts::FRAC_1_SQRT_2;
                u[j] = s * std::f64::consts::FRAC_1_SQRT_2;
                dirs.push(u);
            }
        }
    }
    let mut pts: Vec<&Vec<f64>> = flat.terms.iter().map(|t| &t.0).collect();
    pts.dedup();
    let mut shortest = f64::INFINITY;
    let mut pair_dirs = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d: Vec<f64> = pts[j]
                .iter()
                .zip(pts[i].iter())
                .map(|(a, b)| a - b)
                .collect();
            let len = norm(&d);
            if len > 0.0 {
                shortest = shortest.min(len);
                if pair_dirs < family.max_pair_directions {
                    dirs.push(d.iter().map(|c| c / len).collect());
                    pair_dirs += 1;
                }
            }
        }
    }
    dirs.extend(
        family
            .extra_directions
            .iter()
            .filter(|u| u.len() == n && norm(u) > 0.0)
            .map(|u| {
                let l = norm(u);
                u.iter().map(|c| c / l).collect::<Vec<f64>>()
            }),
    );

    let top = if shortest.is_finite() {
        family.max_frequency.max(4.0 * PI / shortest)
    } else {
        family.max_frequency
    };
    let g = family.magnitudes.max(2);
    let lo = 1e-2f64;
    let mut mags: Vec<f64> = (0..g)
        .map(|i| lo * (top / lo).powf(i as f64 / (g - 1) as f64))
        .collect();
    mags.push(1.0);
    mags.sort_by(f64::total_cmp);

    let scaled = |u: &[f64], t: f64| -> Vec<f64> { u.iter().map(|c| c * t).collect() };
    let mut best_xi = vec![0.0; n];
    let mut best = flat.objective(&best_xi, r);
    let mut seeds: Vec<(f64, usize, usize)> = Vec::new();
    for (di, u) in dirs.iter().enumerate() {
        for (mi, &t) in mags.iter().enumerate() {
            seeds.push((flat.objective(&scaled(u, t), r), di, mi));
        }
    }
    seeds.sort_by(|a, b| b.0.total_cmp(&a.0));
    for &(v, di, mi) in seeds.iter().take(4) {
        let u = &dirs[di];
        let (mut a, mut b) = (
            if mi > 0 { mags[mi - 1] } else { 0.0 },
            mags[(mi + 1).min(mags.len() - 1)],
        );
        let f = |t: f64| flat.objective(&scaled(u, t), r);
        let gr = (5f64.sqrt() - 1.0) / 2.0;
        let (mut c, mut d) = (b - gr * (b - a), a + gr * (b - a));
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..family.refine_steps {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = f(d);
            }
        }
        for (t, ft) in [(mags[mi], v), (c, fc), (d, fd)] {
            if ft > best {
                best = ft;
                best_xi = scaled(u, t);
            }
        }
    }
    best_xi
}

fn witness_form(n: usize, grade: usize, flat: &Flat, xi: &[f64]) -> Form {
    let z = flat.z(xi);
    let constant = xi.iter().all(|c| *c == 0.0);
    let mut terms = Vec::new();
    for (idx, (re, im)) in z {
        if re == 0.0 && im == 0.0 {
            continue;
        }
        let coeff = if constant {
            CoeffFn::int(if re >= 0.0 { 1 } else { -1 })
        } else {
            let phase = FRAC_PI_2 - im.atan2(re);
            let mut arg = CoeffFn::constant(Const::from_f64(phase).expect("finite phase"));
            for (i, c) in xi.iter().enumerate() {
                if *c != 0.0 {
                    arg = arg.add(
                        &CoeffFn::coord(i + 1)
                            .scale(&Const::from_f64(*c).expect("finite frequency")),
                    );
                }
            }
            CoeffFn::sin(&arg)
        };
        terms.push((idx, coeff));
    }
    Form::from_terms(n, grade, terms).unwrap_or_else(|_| Form::zero(n, grade))
}

/// Evaluates the witness on the chain and divides by its analytic norm bound.
fn certify(form: &Form, p: &Chain<f64>, r: usize) -> Result<f64, NormError> {
    if form.is_zero() {
        return Ok(0.0);
    }
    let value = FormEvaluator::new(form).eval_chain(p)?;
    let empty = SampleSpec {
        points: vec![],
        directions: vec![],
        steps: vec![],
    };
    let est = form.form_norm(r, &empty)?;
    Ok(value / est.natural())
}
