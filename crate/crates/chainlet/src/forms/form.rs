use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{CoeffFn, Const, FormError, SmoothMap};
use crate::algebra::{perp_basis, KVector, MultiIndex, SymMonomial, XElement};
use crate::chains::Chain;
use crate::scalar::{Rational, Scalar};

/// Differential `k`-form on `R^n` with symbolic coefficients `sum_I f_I dx_I`.
#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    n: usize,
    k: usize,
    terms: BTreeMap<MultiIndex, CoeffFn>,
}

impl Form {
    pub fn zero(n: usize, k: usize) -> Self {
        Form {
            n,
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        n: usize,
        k: usize,
        terms: impl IntoIterator<Item = (MultiIndex, CoeffFn)>,
    ) -> Result<Self, FormError> {
        if k > n {
            return Err(FormError::GradeViolation(format!(
                "grade {k} exceeds dimension {n}"
            )));
        }
        let mut out = Form::zero(n, k);
        for (i, f) in terms {
            if i.len() != k {
                return Err(FormError::GradeMismatch {
                    expected: k,
                    found: i.len(),
                });
            }
            if i.max_index() > n || f.max_var() > n {
                return Err(FormError::DimensionMismatch {
                    expected: n,
                    found: i.max_index().max(f.max_var()),
                });
            }
            out.add_term(i, f);
        }
        Ok(out)
    }

    /// `f` as a 0-form.
    pub fn function(n: usize, f: CoeffFn) -> Result<Self, FormError> {
        Self::from_terms(n, 0, [(MultiIndex::EMPTY, f)])
    }

    /// Constant basis form `dx_I`.
    pub fn basis(n: usize, idx: MultiIndex) -> Self {
        Self::from_terms(n, idx.len(), [(idx, CoeffFn::one())])
            .expect("basis index within dimension")
    }

    pub fn parse(s: &str, n: Option<usize>) -> Result<Self, FormError> {
        super::parse::parse_form(s, n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, idx: MultiIndex) -> CoeffFn {
        self.terms.get(&idx).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &CoeffFn)> {
        self.terms.iter().map(|(i, f)| (*i, f))
    }

    fn add_term(&mut self, i: MultiIndex, f: CoeffFn) {
        if f.is_zero() {
            return;
        }
        let g = match self.terms.get(&i) {
            Some(g) => g.add(&f),
            None => f,
        };
        if g.is_zero() {
            self.terms.remove(&i);
        } else {
            self.terms.insert(i, g);
        }
    }

    fn check_same(&self, o: &Form) -> Result<(), FormError> {
        if self.n != o.n {
            return Err(FormError::DimensionMismatch {
                expected: self.n,
                found: o.n,
            });
        }
        if self.k != o.k {
            return Err(FormError::GradeMismatch {
                expected: self.k,
                found: o.k,
            });
        }
        Ok(())
    }

    pub fn add(&self, o: &Form) -> Result<Form, FormError> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (i, f) in o.terms() {
            out.add_term(i, f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Form) -> Result<Form, FormError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Form {
        self.map_coeffs(|f| f.neg())
    }

    pub fn scale(&self, c: &Const) -> Form {
        self.map_coeffs(|f| f.scale(c))
    }

    /// Multiplies every coefficient by the function `g`.
    pub fn times_function(&self, g: &CoeffFn) -> Form {
        self.map_coeffs(|f| f.mul(g))
    }

    fn map_coeffs(&self, op: impl Fn(&CoeffFn) -> CoeffFn) -> Form {
        let mut out = Form::zero(self.n, self.k);
        for (i, f) in self.terms() {
            out.add_term(i, op(f));
        }
        out
    }

    /// Coefficient-level Grassmann wedge `(f dx_I) ^ (g dx_J) = fg dx_I ^ dx_J`.
    pub fn wedge(&self, o: &Form) -> Result<Form, FormError> {
        if self.n != o.n {
            return Err(FormError::DimensionMismatch {
                expected: self.n,
                found: o.n,
            });
        }
        if self.k + o.k > self.n {
            return Err(FormError::GradeViolation(format!(
                "wedge of grades {} + {} exceeds {}",
                self.k, o.k, self.n
            )));
        }
        let mut out = Form::zero(self.n, self.k + o.k);
        for (i, f) in self.terms() {
            for (j, g) in o.terms() {
                if let Some(s) = i.wedge_sign(j) {
                    let h = f.mul(g);
                    out.add_term(i.union(j), if s > 0 { h } else { h.neg() });
                }
            }
        }
        Ok(out)
    }

    /// Value `w(x; alpha)` at a point on a k-vector.
    pub fn eval_at<S: Scalar>(&self, x: &[S], alpha: &KVector<S>) -> Result<S, FormError> {
        if alpha.grade() != self.k {
            return Err(FormError::GradeMismatch {
                expected: self.k,
                found: alpha.grade(),
            });
        }
        let mut acc = S::zero();
        for (i, c) in alpha.terms() {
            if let Some(f) = self.terms.get(&i) {
                acc = acc + c.clone() * f.eval(x)?;
            }
        }
        Ok(acc)
    }

    /// Integral over a chain: sum over poles of coefficient derivatives contracted with payloads.
    pub fn eval<S: Scalar>(&self, p: &Chain<S>) -> Result<S, FormError> {
        FormEvaluator::new(self).eval_chain(p)
    }

    /// Directional derivative `D_u w`, exact on coefficients.
    pub fn dir_derivative<S: Scalar>(&self, u: &[S]) -> Result<Form, FormError> {
        if u.len() != self.n {
            return Err(FormError::DimensionMismatch {
                expected: self.n,
                found: u.len(),
            });
        }
        let u: Vec<Const> = u
            .iter()
            .map(|c| Const::new(c.to_rational().expect("finite direction")))
            .collect();
        Ok(self.map_coeffs(|f| {
            let mut acc = CoeffFn::zero();
            for (i, ui) in u.iter().enumerate() {
                if !ui.is_zero() {
                    acc = acc.add(&f.derivative(i + 1).scale(ui));
                }
            }
            acc
        }))
    }

    /// `d(f dx_I) = sum_i df/dx_i dx_i ^ dx_I`; requires `k < n`.
    pub fn exterior_d(&self) -> Result<Form, FormError> {
        if self.k >= self.n {
            return Err(FormError::GradeViolation(format!(
                "d of a top-degree form (k = n = {})",
                self.n
            )));
        }
        let mut out = Form::zero(self.n, self.k + 1);
        for (idx, f) in self.terms() {
            for i in 1..=self.n {
                let di = MultiIndex::single(i);
                let Some(s) = di.wedge_sign(idx) else {
                    continue;
                };
                let g = f.derivative(i);
                out.add_term(di.union(idx), if s > 0 { g } else { g.neg() });
            }
        }
        Ok(out)
    }

    /// `star w (p; alpha) = w(p; perp alpha)`.
    pub fn hodge_star(&self) -> Form {
        let mut out = Form::zero(self.n, self.n - self.k);
        for (idx, f) in self.terms() {
            // coefficient on J = I^c is sgn(J, J^c) f_I
            let (j, _) = perp_basis(idx, self.n);
            let (_, s) = perp_basis(j, self.n);
            out.add_term(j, if s > 0 { f.clone() } else { f.neg() });
        }
        out
    }

    /// Pullback `f* w (x; alpha) = w(f(x); f_* alpha)`.
    pub fn pullback(&self, map: &SmoothMap) -> Result<Form, FormError> {
        if map.cod() != self.n {
            return Err(FormError::DimensionMismatch {
                expected: self.n,
                found: map.cod(),
            });
        }
        let m = map.dom();
        if self.k > m {
            return Err(FormError::GradeViolation(format!(
                "pullback of a {}-form to dimension {m}",
                self.k
            )));
        }
        let mut out = Form::zero(m, self.k);
        for (idx, f) in self.terms() {
            let fc = f.substitute(map.components())?;
            let rows: Vec<usize> = idx.to_vec();
            for j in MultiIndex::all_of_grade(m, self.k) {
                let cols: Vec<usize> = j.to_vec();
                let minor: Vec<Vec<CoeffFn>> = rows
                    .iter()
                    .map(|&r| {
                        cols.iter()
                            .map(|&c| map.jacobian_entry(r, c).clone())
                            .collect()
                    })
                    .collect();
                let det = symbolic_det(&minor);
                if !det.is_zero() {
                    out.add_term(j, fc.mul(&det));
                }
            }
        }
        Ok(out)
    }

    /// Interior product `i_beta w (p; alpha) = w(p; beta ^ alpha)`.
    pub fn interior<S: Scalar>(&self, beta: &KVector<S>) -> Result<Form, FormError> {
        let beta = to_rational_kvector(beta, self.n)?;
        let m = beta.grade();
        if m > self.k {
            return Err(FormError::GradeViolation(format!(
                "interior product of a {m}-vector on a {}-form",
                self.k
            )));
        }
        let mut out = Form::zero(self.n, self.k - m);
        for j in MultiIndex::all_of_grade(self.n, self.k - m) {
            let w = beta
                .wedge(&KVector::basis(self.n, j))
                .map_err(FormError::Algebra)?;
            out.add_term(j, self.contract_coeffs(&w));
        }
        Ok(out)
    }

    /// Extrusion `ext_beta w (p; alpha) = w(p; alpha / beta)`.
    pub fn extrusion<S: Scalar>(&self, beta: &KVector<S>) -> Result<Form, FormError> {
        let beta = to_rational_kvector(beta, self.n)?;
        if beta.is_zero() {
            return Err(FormError::ExtrusionByZero);
        }
        let m = beta.grade();
        if self.k + m > self.n {
            return Err(FormError::GradeViolation(format!(
                "extrusion to grade {} in dimension {}",
                self.k + m,
                self.n
            )));
        }
        let mut out = Form::zero(self.n, self.k + m);
        for j in MultiIndex::all_of_grade(self.n, self.k + m) {
            let w = KVector::basis(self.n, j)
                .slant(&beta)
                .map_err(FormError::Algebra)?;
            out.add_term(j, self.contract_coeffs(&w));
        }
        Ok(out)
    }

    /// `sum_I w_I * alpha_I` as a function.
    fn contract_coeffs(&self, alpha: &KVector<Rational>) -> CoeffFn {
        let mut acc = CoeffFn::zero();
        for (i, c) in alpha.terms() {
            if let Some(f) = self.terms.get(&i) {
                acc = acc.add(&f.scale(&Const::new(c.clone())));
            }
        }
        acc
    }

    /// `star d star`, lowering the grade by one (zero on 0-forms).
    pub fn codifferential(&self) -> Result<Form, FormError> {
        if self.k == 0 {
            return Ok(Form::zero(self.n, 0));
        }
        Ok(self.hodge_star().exterior_d()?.hodge_star())
    }

    /// `d delta + delta d`.
    pub fn laplacian(&self) -> Result<Form, FormError> {
        let a = if self.k == 0 {
            Form::zero(self.n, 0)
        } else {
            self.codifferential()?.exterior_d()?
        };
        let b = if self.k == self.n {
            Form::zero(self.n, self.k)
        } else {
            self.exterior_d()?.codifferential()?
        };
        a.add(&b)
    }

    /// Highest coordinate index among the coefficients.
    pub fn max_var(&self) -> usize {
        self.terms.values().map(|f| f.max_var()).max().unwrap_or(0)
    }
}

fn to_rational_kvector<S: Scalar>(
    b: &KVector<S>,
    n: usize,
) -> Result<KVector<Rational>, FormError> {
    if b.n() != n {
        return Err(FormError::DimensionMismatch {
            expected: n,
            found: b.n(),
        });
    }
    Ok(b.map_scalars(|c| c.to_rational().expect("finite coefficient")))
}

fn symbolic_det(a: &[Vec<CoeffFn>]) -> CoeffFn {
    match a.len() {
        0 => CoeffFn::one(),
        1 => a[0][0].clone(),
        2 => a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0])),
        n => {
            let mut acc = CoeffFn::zero();
            for c in 0..n {
                if a[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<CoeffFn>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, f)| f.clone())
                            .collect()
                    })
                    .collect();
                let t = a[0][c].mul(&symbolic_det(&minor));
                acc = if c % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

/// Evaluates a form on poles, caching coefficient derivatives by `(index, monomial)`.
pub struct FormEvaluator<'a> {
    form: &'a Form,
    cache: RefCell<HashMap<(MultiIndex, SymMonomial), CoeffFn>>,
}

impl<'a> FormEvaluator<'a> {
    pub fn new(form: &'a Form) -> Self {
        FormEvaluator {
            form,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn form(&self) -> &Form {
        self.form
    }

    /// `d^mono f_idx`, memoized.
    pub fn derivative(&self, idx: MultiIndex, mono: &SymMonomial) -> CoeffFn {
        if mono.is_unit() {
            return self.form.coeff(idx);
        }
        let key = (idx, mono.clone());
        if let Some(f) = self.cache.borrow().get(&key) {
            return f.clone();
        }
        let f = self.form.coeff(idx).derivative_multi(mono.factors());
        self.cache.borrow_mut().insert(key, f.clone());
        f
    }

    /// Value on one pole `(x; payload)`: each term uses exactly `order` partial derivatives.
    pub fn eval_pole<S: Scalar>(&self, x: &[S], payload: &XElement<S>) -> Result<S, FormError> {
        let mut acc = S::zero();
        for t in payload.terms() {
            if t.idx.len() != self.form.k {
                return Err(FormError::GradeMismatch {
                    expected: self.form.k,
                    found: t.idx.len(),
                });
            }
            if !self.form.terms.contains_key(&t.idx) {
                continue;
            }
            let f = self.derivative(t.idx, &t.mono);
            if !f.is_zero() {
                acc = acc + t.coeff.clone() * f.eval(x)?;
            }
        }
        Ok(acc)
    }

    pub fn eval_chain<S: Scalar>(&self, p: &Chain<S>) -> Result<S, FormError> {
        if p.n() != self.form.n {
            return Err(FormError::DimensionMismatch {
                expected: self.form.n,
                found: p.n(),
            });
        }
        let mut acc = S::zero();
        for pole in p.poles() {
            acc = acc + self.eval_pole(pole.at.coords(), &pole.payload)?;
        }
        Ok(acc)
    }
}

/// How a form-norm entry was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMethod {
    /// True upper bound from the trig spectrum of every coefficient.
    AnalyticBound,
    /// Lower estimate: supremum over a finite sample of difference poles.
    Sampled,
}

/// `||w||_0 .. ||w||_r` with the method used.
#[derive(Clone, Debug, PartialEq)]
pub struct FormNormEstimate {
    pub r: usize,
    pub values: Vec<f64>,
    pub method: NormMethod,
    /// Set when some coefficient is not globally bounded (non-constant polynomial part).
    pub unbounded: bool,
}

impl FormNormEstimate {
    /// `|w|^r = max_j ||w||_j`.
    pub fn natural(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
}

/// Sample grid for sampled norm estimates.
#[derive(Clone, Debug)]
pub struct SampleSpec {
    pub points: Vec<Vec<f64>>,
    /// Unit directions.
    pub directions: Vec<Vec<f64>>,
    /// Step lengths `t`; a sample of order `j` uses `j` steps `t u`, normalized by `t^j`.
    pub steps: Vec<f64>,
}

impl SampleSpec {
    /// Regular grid of `m` points per axis on `[-half_width, half_width]^n`, basis and
    /// diagonal directions, and steps spanning several scales.
    pub fn grid(n: usize, half_width: f64, m: usize) -> Self {
        let m = m.max(2);
        let axis: Vec<f64> = (0..m)
            .map(|i| -half_width + 2.0 * half_width * i as f64 / (m - 1) as f64)
            .collect();
        let mut points = vec![vec![]];
        for _ in 0..n {
            points = points
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |a| {
                        let mut q = p.clone();
                        q.push(*a);
                        q
                    })
                })
                .collect();
        }
        let mut directions = Vec::new();
        for i in 0..n {
            let mut u = vec![0.0; n];
            u[i] = 1.0;
            directions.push(u);
        }
        for i in 0..n {
            for j in i + 1..n {
                for s in [1.0, -1.0] {
                    let mut u = vec![0.0; n];
                    u[i] = std::f64::consts::FRAC_1_SQRT_2;
                    u[j] = s * std::f64::consts::FRAC_1_SQRT_2;
                    directions.push(u);
                }
            }
        }
        SampleSpec {
            points,
            directions,
            steps: vec![1e-3, 0.1, 0.5, 1.0, 2.0],
        }
    }

    fn is_empty(&self) -> bool {
        self.points.is_empty() || self.directions.is_empty() || self.steps.is_empty()
    }
}

impl Form {
    /// Estimates `||w||_j` for `j = 0..=r`.
    ///
    /// When every coefficient has a trig spectrum with affine arguments, entries are analytic
    /// upper bounds `max_I sum amplitude |frequency|^j`. Otherwise each entry is the maximum of
    /// `|Delta^j_{t u} f_I(x)| / t^j` over the sample (a lower estimate).
    pub fn form_norm(&self, r: usize, sampler: &SampleSpec) -> Result<FormNormEstimate, FormError> {
        let spectra: Option<Vec<Vec<(f64, Vec<f64>)>>> = self
            .terms
            .values()
            .map(|f| f.trig_spectrum(self.n))
            .collect();
        if let Some(spectra) = spectra {
            let values = (0..=r)
                .map(|j| {
                    spectra
                        .iter()
                        .map(|s| {
                            s.iter()
                                .map(|(a, xi)| a * norm2(xi).powi(j as i32))
                                .sum::<f64>()
                        })
                        .fold(0.0, f64::max)
                })
                .collect();
            return Ok(FormNormEstimate {
                r,
                values,
                method: NormMethod::AnalyticBound,
                unbounded: false,
            });
        }
        self.form_norm_sampled(r, sampler)
    }

    /// Sampled lower estimates `max |Delta^j_{t u} f_I(x)| / t^j`, whatever the coefficient class.
    pub fn form_norm_sampled(
        &self,
        r: usize,
        sampler: &SampleSpec,
    ) -> Result<FormNormEstimate, FormError> {
        if sampler.is_empty() {
            return Err(FormError::EmptySample);
        }
        let mut values = vec![0.0f64; r + 1];
        for f in self.terms.values() {
            for x in &sampler.points {
                values[0] = values[0].max(f.eval_f64(x).abs());
                for j in 1..=r {
                    for u in &sampler.directions {
                        for &t in &sampler.steps {
                            let d = iterated_difference(f, x, u, t, j);
                            values[j] = values[j].max(d.abs() / t.powi(j as i32));
                        }
                    }
                }
            }
        }
        let unbounded = self.terms.values().any(|f| !f.is_trig_only());
        Ok(FormNormEstimate {
            r,
            values,
            method: NormMethod::Sampled,
            unbounded,
        })
    }

    /// Central-difference directional derivative with one Richardson step:
    /// `(4 D(h/2) - D(h)) / 3`, `D(h) = (w(x+hu) - w(x-hu)) / 2h`.
    pub fn fd_dir_derivative(
        &self,
        u: &[f64],
        x: &[f64],
        alpha: &KVector<f64>,
        h: f64,
    ) -> Result<f64, FormError> {
        let at = |s: f64| -> Result<f64, FormError> {
            let y: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + s * b).collect();
            self.eval_at(&y, alpha)
        };
        let central = |h: f64| -> Result<f64, FormError> { Ok((at(h)? - at(-h)?) / (2.0 * h)) };
        Ok((4.0 * central(h / 2.0)? - central(h)?) / 3.0)
    }
}

fn iterated_difference(f: &CoeffFn, x: &[f64], u: &[f64], t: f64, j: usize) -> f64 {
    // Delta^j_{tu} f(x) = sum_i (-1)^(j-i) C(j,i) f(x + i t u)
    let mut acc = 0.0;
    let mut binom = 1.0;
    for i in 0..=j {
        let y: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + i as f64 * t * b).collect();
        let sign = if (j - i).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc += sign * binom * f.eval_f64(&y);
        binom = binom * (j - i) as f64 / (i + 1) as f64;
    }
    acc
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(i, c)| {
                let dx: Vec<String> = i.iter().map(|j| format!("dx{j}")).collect();
                let dx = dx.join("*");
                match (c.as_constant(), dx.is_empty()) {
                    (_, true) => format!("({c})"),
                    (Some(k), false) if k.rational() == &Rational::from_integer(1.into()) => dx,
                    _ => format!("({c})*{dx}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
