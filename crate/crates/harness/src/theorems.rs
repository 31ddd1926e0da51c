//! Integral theorems on refined cells: fundamental theorem of calculus, Green, Gauss, curl,
//! star and change of variables. Each level checks the pole-level identity (exact) and the
//! distance of the integral to its classical value (convergent).

use chainlet::algebra::XElement;
use chainlet::chains::Chain;
use chainlet::forms::{Form, FormEvaluator, SmoothMap};
use chainlet::geometry::CubeCell;
use chainlet::scalar::{ArithmeticMode, Rational, Scalar};
use serde_json::Value;

use crate::gen::q;
use crate::report::{num, Classical, Reference, Report, Table};
use crate::{HarnessConfig, HarnessError};

/// Errors below this are treated as converged when checking inter-level ratios.
pub const ERROR_FLOOR: f64 = 1e-12;
/// Required inter-level error ratio.
pub const MAX_RATIO: f64 = 0.6;
/// Required integral error at the finest level.
pub const FINAL_ERROR: f64 = 1e-3;

/// What the right-hand form is paired with, pole by pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `w(bd P)`
    Boundary,
    /// `w(perp bd P)`
    PerpBoundary,
    /// `w(bd perp P)`
    BoundaryPerp,
    /// `w(perp P)`
    Perp,
}

impl Route {
    fn apply<S: Scalar>(self, a: &XElement<S>) -> XElement<S> {
        match self {
            Route::Boundary => a.boundary(),
            Route::PerpBoundary => a.boundary().perp(),
            Route::BoundaryPerp => a.perp().boundary(),
            Route::Perp => a.perp(),
        }
    }

    fn apply_chain<S: Scalar>(self, p: &Chain<S>) -> Chain<S> {
        match self {
            Route::Boundary => p.boundary(),
            Route::PerpBoundary => p.boundary().perp(),
            Route::BoundaryPerp => p.perp().boundary(),
            Route::Perp => p.perp(),
        }
    }
}

/// `lhs(P_N) = rhs(route(P_N))` on the level-`N` chain of a cube cell, compared with a classical
/// value. Boundary faces of the cell give a second, geometric route to the same integral.
#[derive(Clone, Debug)]
pub struct CellTheorem {
    pub name: String,
    pub description: String,
    pub corner: Vec<Rational>,
    pub edges: Vec<Vec<Rational>>,
    pub lhs: Form,
    pub rhs: Form,
    /// Pair with `perp P_N` instead of `P_N` (curl theorem on the normal field of a surface).
    pub pre_perp: bool,
    pub route: Route,
    /// Apply perp to boundary faces before pairing with `rhs` (flux integrals).
    pub face_perp: bool,
    pub classical: f64,
}

fn unit_cell(n: usize, k: usize) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    let c = CubeCell::<Rational>::unit(n, k);
    (c.corner, c.edges)
}

fn parse(s: &str, n: usize) -> Form {
    Form::parse(s, Some(n)).expect("built-in form literal")
}

impl CellTheorem {
    /// Stokes `int_J dw = int_{bd J} w` on the unit `k`-cube in `R^n`.
    pub fn stokes(
        name: &str,
        description: &str,
        n: usize,
        k: usize,
        w: &str,
        classical: f64,
    ) -> Result<Self, HarnessError> {
        let w = parse(w, n);
        let (corner, edges) = unit_cell(n, k);
        Ok(CellTheorem {
            name: name.into(),
            description: description.into(),
            corner,
            edges,
            lhs: w.exterior_d()?,
            rhs: w,
            pre_perp: false,
            route: Route::Boundary,
            face_perp: false,
            classical,
        })
    }

    /// Divergence theorem `int_J d*w = int_{perp bd J} w` on the unit cube.
    pub fn gauss(
        name: &str,
        description: &str,
        w: &str,
        classical: f64,
    ) -> Result<Self, HarnessError> {
        let w = parse(w, 3);
        let (corner, edges) = unit_cell(3, 3);
        Ok(CellTheorem {
            name: name.into(),
            description: description.into(),
            corner,
            edges,
            lhs: w.hodge_star().exterior_d()?,
            rhs: w,
            pre_perp: false,
            route: Route::PerpBoundary,
            face_perp: true,
            classical,
        })
    }

    /// Curl theorem `int_J *dw = int_{bd perp J} w` with `J = perp S`, `S` the unit square in
    /// `R^3`; then `bd perp J = bd S` and the value is the flux of `curl w` through `S`.
    pub fn curl(
        name: &str,
        description: &str,
        w: &str,
        classical: f64,
    ) -> Result<Self, HarnessError> {
        let w = parse(w, 3);
        let (corner, edges) = unit_cell(3, 2);
        Ok(CellTheorem {
            name: name.into(),
            description: description.into(),
            corner,
            edges,
            lhs: w.exterior_d()?.hodge_star(),
            rhs: w,
            pre_perp: true,
            route: Route::BoundaryPerp,
            face_perp: false,
            classical,
        })
    }

    /// Star theorem `int_J *w = int_{perp J} w` on the unit `k`-cube in `R^n`.
    pub fn star(
        name: &str,
        description: &str,
        n: usize,
        k: usize,
        w: &str,
        classical: f64,
    ) -> Result<Self, HarnessError> {
        let w = parse(w, n);
        let (corner, edges) = unit_cell(n, k);
        Ok(CellTheorem {
            name: name.into(),
            description: description.into(),
            corner,
            edges,
            lhs: w.hodge_star(),
            rhs: w,
            pre_perp: false,
            route: Route::Perp,
            face_perp: false,
            classical,
        })
    }

    fn cell<S: Scalar>(&self) -> Result<CubeCell<S>, HarnessError> {
        let conv = |v: &Vec<Rational>| v.iter().map(S::from_rational).collect::<Vec<S>>();
        Ok(CubeCell::new(
            conv(&self.corner),
            self.edges.iter().map(conv).collect(),
            1,
        )?)
    }

    fn k(&self) -> usize {
        self.edges.len()
    }

    fn has_faces(&self) -> bool {
        self.route != Route::Perp
    }
}

fn is_polynomial(w: &Form) -> bool {
    w.terms().all(|(_, f)| f.is_polynomial())
}

/// Running sum; compensated in float mode.
struct Acc<S> {
    sum: S,
    comp: f64,
}

impl<S: Scalar> Acc<S> {
    fn new() -> Self {
        Acc {
            sum: S::zero(),
            comp: 0.0,
        }
    }

    fn add(&mut self, x: S) {
        match S::MODE {
            ArithmeticMode::Rational => self.sum = self.sum.clone() + x,
            ArithmeticMode::Float => {
                let (s, v) = (self.sum.to_f64(), x.to_f64());
                let t = s + v;
                self.comp += if s.abs() >= v.abs() {
                    (s - t) + v
                } else {
                    (v - t) + s
                };
                self.sum = S::from_f64(t).unwrap_or_else(S::zero);
            }
        }
    }

    fn value(&self) -> S {
        match S::MODE {
            ArithmeticMode::Rational => self.sum.clone(),
            ArithmeticMode::Float => {
                S::from_f64(self.sum.to_f64() + self.comp).unwrap_or_else(S::zero)
            }
        }
    }
}

struct Streamed {
    poles: u64,
    lhs: f64,
    rhs: f64,
    /// Largest per-pole relative residual.
    pole_residual: f64,
}

/// Float route: one pole at a time, never materializing `P_N`.
fn stream_float(t: &CellTheorem, level: u32) -> Result<Streamed, HarnessError> {
    let cell = t.cell::<f64>()?;
    let (le, re) = (FormEvaluator::new(&t.lhs), FormEvaluator::new(&t.rhs));
    let (mut l, mut r) = (Acc::<f64>::new(), Acc::<f64>::new());
    let mut worst = 0.0f64;
    let mut poles = 0u64;
    let mut err = None;
    cell.for_each_pole(level, |x, a| {
        if err.is_some() {
            return;
        }
        let mut payload = XElement::from_kvector(a);
        if t.pre_perp {
            payload = payload.perp();
        }
        match (
            le.eval_pole(x, &payload),
            re.eval_pole(x, &t.route.apply(&payload)),
        ) {
            (Ok(a), Ok(b)) => {
                worst = worst.max((a - b).abs() / 1f64.max(a.abs()).max(b.abs()));
                l.add(a);
                r.add(b);
                poles += 1;
            }
            (Err(e), _) | (_, Err(e)) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(Streamed {
        poles,
        lhs: l.value(),
        rhs: r.value(),
        pole_residual: worst,
    })
}

/// Exact route through the chain API: `lhs(P_N) - rhs(route(P_N))` as a rational.
fn exact_residual(t: &CellTheorem, level: u32) -> Result<Rational, HarnessError> {
    let mut p = t.cell::<Rational>()?.to_chain(level)?;
    if t.pre_perp {
        p = p.perp();
    }
    Ok(t.lhs.eval(&p)? - t.rhs.eval(&t.route.apply_chain(&p))?)
}

/// `rhs` summed over the boundary faces of the cell at level `N`.
fn faces_value(t: &CellTheorem, level: u32) -> Result<f64, HarnessError> {
    let ev = FormEvaluator::new(&t.rhs);
    let mut acc = Acc::<f64>::new();
    let mut err = None;
    for face in t.cell::<f64>()?.boundary_faces() {
        face.for_each_pole(level, |x, a| {
            let mut payload = XElement::from_kvector(a);
            if t.face_perp {
                payload = payload.perp();
            }
            match ev.eval_pole(x, &payload) {
                Ok(v) => acc.add(v),
                Err(e) => err = Some(e),
            }
        })?;
    }
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(acc.value())
}

/// Ratio check with the convergence floor: `e_N <= 0.6 e_{N-1}` unless both are negligible.
pub fn ratio_ok(prev: f64, cur: f64) -> bool {
    (prev <= ERROR_FLOOR && cur <= ERROR_FLOOR) || cur <= MAX_RATIO * prev
}

fn ratio_value(prev: f64, cur: f64) -> Value {
    if prev > 0.0 {
        num(cur / prev)
    } else {
        Value::Null
    }
}

pub fn run_cell_theorem(t: &CellTheorem, cfg: &HarnessConfig) -> Result<Report, HarnessError> {
    let mut table = Table::new(&[
        "level",
        "poles",
        "lhs",
        "rhs",
        "pole_residual",
        "total_residual",
        "exact_residual",
        "boundary_value",
        "classical",
        "error",
        "error_ratio",
    ]);
    let exact_ok = is_polynomial(&t.lhs) && is_polynomial(&t.rhs);
    let mut errors = Vec::new();
    let mut identity_float = true;
    let mut identity_exact = true;
    let mut exact_levels = 0;
    let mut boundary_errors = Vec::new();
    for level in 0..=cfg.levels {
        let s = stream_float(t, level)?;
        let total = (s.lhs - s.rhs).abs() / 1f64.max(s.lhs.abs()).max(s.rhs.abs());
        identity_float &= s.pole_residual <= cfg.float_tol && total <= cfg.float_tol;
        let exact = if exact_ok && (1usize << (t.k() as u32 * level)) <= cfg.rational_pole_cap {
            let r = exact_residual(t, level)?;
            identity_exact &= r == Rational::from_i64(0);
            exact_levels += 1;
            Value::from(r.to_string())
        } else {
            Value::Null
        };
        let boundary = if t.has_faces() {
            let b = faces_value(t, level)?;
            boundary_errors.push((b - t.classical).abs());
            num(b)
        } else {
            Value::Null
        };
        let err = (s.lhs - t.classical).abs();
        let ratio = errors
            .last()
            .map(|&p| ratio_value(p, err))
            .unwrap_or(Value::Null);
        errors.push(err);
        table.push(vec![
            Value::from(level),
            Value::from(s.poles),
            num(s.lhs),
            num(s.rhs),
            num(s.pole_residual),
            num(total),
            exact,
            boundary,
            num(t.classical),
            num(err),
            ratio,
        ]);
    }
    let mut rep = Report::new(&t.name, &t.description, table);
    rep.classical = Some(Classical {
        value: t.classical,
        reference: Reference::Analytic,
    });
    rep.check(
        "identity_float",
        identity_float,
        format!("pole and total residuals <= {:e}", cfg.float_tol),
    );
    if exact_ok {
        rep.check(
            "identity_exact",
            identity_exact,
            format!("rational residual is 0 at {exact_levels} levels"),
        );
    } else {
        rep.notes
            .push("trigonometric coefficients: exact arithmetic not applicable".into());
    }
    let last = *errors.last().expect("at least level 0");
    rep.check(
        "final_error",
        last < FINAL_ERROR,
        format!("error {last:.3e} at N = {} (< {FINAL_ERROR:e})", cfg.levels),
    );
    let bad: Vec<u32> = (1..errors.len())
        .filter(|&i| !ratio_ok(errors[i - 1], errors[i]))
        .map(|i| i as u32)
        .collect();
    rep.check(
        "error_ratio",
        bad.is_empty(),
        if bad.is_empty() {
            let worst = (1..errors.len())
                .filter(|&i| errors[i - 1] > ERROR_FLOOR)
                .map(|i| errors[i] / errors[i - 1])
                .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))));
            match worst {
                Some(w) => format!("max observed e_N / e_(N-1) = {w:.4} (<= {MAX_RATIO})"),
                None => format!("error below {ERROR_FLOOR:e} at every level; ratio not observable"),
            }
        } else {
            format!("ratio above {MAX_RATIO} at levels {bad:?}")
        },
    );
    if let Some(&b) = boundary_errors.last() {
        rep.check(
            "boundary_error",
            b < FINAL_ERROR,
            format!("combinatorial boundary error {b:.3e} at N = {}", cfg.levels),
        );
    }
    Ok(rep)
}

/// `int_J f^* w = int_{f_* J} w` on the unit square.
#[derive(Clone, Debug)]
pub struct ChangeOfVariables {
    pub name: String,
    pub description: String,
    pub map: SmoothMap,
    pub w: Form,
    pub classical: f64,
}

pub fn run_change(c: &ChangeOfVariables, cfg: &HarnessConfig) -> Result<Report, HarnessError> {
    let mut table = Table::new(&[
        "level",
        "poles",
        "pullback_side",
        "pushforward_side",
        "residual",
        "exact_residual",
        "classical",
        "error",
        "error_ratio",
    ]);
    let pulled = c.w.pullback(&c.map)?;
    let exact_ok = is_polynomial(&pulled) && is_polynomial(&c.w);
    let square = CubeCell::<Rational>::unit(2, 2);
    let max_level = cfg.levels.min(7);
    let (mut errors, mut float_ok, mut exact_all) = (Vec::new(), true, true);
    for level in 0..=max_level {
        let p = square.to_chain(level)?;
        let pf = p.to_f64();
        let a = pulled.eval(&pf)?;
        let b = c.w.eval(&pf.pushforward(&c.map)?)?;
        let res = (a - b).abs() / 1f64.max(a.abs()).max(b.abs());
        float_ok &= res <= cfg.float_tol;
        let exact = if exact_ok && p.len() <= cfg.rational_pole_cap {
            let r = pulled.eval(&p)? - c.w.eval(&p.pushforward(&c.map)?)?;
            exact_all &= r == Rational::from_i64(0);
            Value::from(r.to_string())
        } else {
            Value::Null
        };
        let err = (a - c.classical).abs();
        let ratio = errors
            .last()
            .map(|&e| ratio_value(e, err))
            .unwrap_or(Value::Null);
        errors.push(err);
        table.push(vec![
            Value::from(level),
            Value::from(p.len()),
            num(a),
            num(b),
            num(res),
            exact,
            num(c.classical),
            num(err),
            ratio,
        ]);
    }
    let mut rep = Report::new(&c.name, &c.description, table);
    rep.classical = Some(Classical {
        value: c.classical,
        reference: Reference::Analytic,
    });
    rep.check(
        "identity_float",
        float_ok,
        format!("residual <= {:e}", cfg.float_tol),
    );
    if exact_ok {
        rep.check("identity_exact", exact_all, "rational residual is 0");
    }
    let last = *errors.last().expect("level 0");
    rep.check(
        "final_error",
        last < FINAL_ERROR,
        format!("error {last:.3e} at N = {max_level}"),
    );
    let bad: Vec<usize> = (1..errors.len())
        .filter(|&i| !ratio_ok(errors[i - 1], errors[i]))
        .collect();
    rep.check(
        "error_ratio",
        bad.is_empty(),
        format!("levels failing the ratio rule: {bad:?}"),
    );
    Ok(rep)
}

fn sin1() -> f64 {
    1f64.sin()
}

/// Fundamental theorem of calculus and Green's theorem, with a closed-form control.
pub fn stokes_theorems() -> Result<Vec<CellTheorem>, HarnessError> {
    Ok(vec![
        CellTheorem::stokes("ftc_x2", "int_0^1 (x^2)' dx = 1", 1, 1, "x1^2", 1.0)?,
        CellTheorem::stokes(
            "ftc_sin",
            "int_0^1 cos x dx = sin 1",
            1,
            1,
            "sin(x1)",
            sin1(),
        )?,
        CellTheorem::stokes(
            "green_x1dx2",
            "unit square, w = x1 dx2, area 1",
            2,
            2,
            "x1*dx2",
            1.0,
        )?,
        CellTheorem::stokes(
            "green_sin",
            "unit square, w = sin(x1) dx2, value sin 1",
            2,
            2,
            "sin(x1)*dx2",
            sin1(),
        )?,
        CellTheorem::stokes(
            "stokes_closed",
            "closed w = dx1 on the unit square, value 0",
            2,
            2,
            "dx1",
            0.0,
        )?,
    ])
}

pub fn star_theorems() -> Result<Vec<CellTheorem>, HarnessError> {
    Ok(vec![
        CellTheorem::star(
            "star_x1x2dx3",
            "unit square in R^3, *(x1 x2 dx3) = x1 x2 dx12, value 1/4",
            3,
            2,
            "x1*x2*dx3",
            0.25,
        )?,
        CellTheorem::star(
            "star_sin",
            "unit square in R^3, *(sin(x1) dx3), value 1 - cos 1",
            3,
            2,
            "sin(x1)*dx3",
            1.0 - 1f64.cos(),
        )?,
    ])
}

pub fn div_theorems() -> Result<Vec<CellTheorem>, HarnessError> {
    Ok(vec![
        CellTheorem::gauss(
            "gauss_x1dx1",
            "unit cube, F = x1 dx1, div F = 1",
            "x1*dx1",
            1.0,
        )?,
        CellTheorem::gauss(
            "gauss_sin",
            "unit cube, F = sin(x1) dx1, value sin 1",
            "sin(x1)*dx1",
            sin1(),
        )?,
        CellTheorem::gauss(
            "gauss_constant",
            "unit cube, constant F, net flux 0",
            "dx1 + 2*dx2 - dx3",
            0.0,
        )?,
    ])
}

pub fn curl_theorems() -> Result<Vec<CellTheorem>, HarnessError> {
    Ok(vec![
        CellTheorem::curl(
            "curl_x1dx2",
            "unit square in R^3, F = x1 dx2, flux of curl F = 1",
            "x1*dx2",
            1.0,
        )?,
        CellTheorem::curl(
            "curl_sin",
            "unit square in R^3, F = sin(x1) dx2, value sin 1",
            "sin(x1)*dx2",
            sin1(),
        )?,
    ])
}

pub fn change_theorems() -> Result<Vec<ChangeOfVariables>, HarnessError> {
    let map = |s: &str| SmoothMap::parse(s, 2).expect("built-in map literal");
    let dv = parse("dx1*dx2", 2);
    Ok(vec![
        ChangeOfVariables {
            name: "change_linear_area2".into(),
            description: "f = (x1 + x2, x2 - x1), w = dV, value det = 2".into(),
            map: map("x1 + x2, x2 - x1"),
            w: dv.clone(),
            classical: 2.0,
        },
        ChangeOfVariables {
            name: "change_identity".into(),
            description: "f = id, w = x1 x2 dV, value 1/4".into(),
            map: SmoothMap::identity(2),
            w: parse("x1*x2*dx1*dx2", 2),
            classical: 0.25,
        },
        ChangeOfVariables {
            name: "change_shear".into(),
            description: "f = (x1 + x2^2/4, x2), w = dV, unit Jacobian, value 1".into(),
            map: map("x1 + x2^2/4, x2"),
            w: dv,
            classical: 1.0,
        },
        ChangeOfVariables {
            name: "change_shear_weighted".into(),
            description: "f = (x1 + x2^2/4, x2), w = x1 dV, value 1/2 + 1/12".into(),
            map: map("x1 + x2^2/4, x2"),
            w: parse("x1*dx1*dx2", 2),
            classical: 7.0 / 12.0,
        },
    ])
}

/// Exact rational classical values where they exist, for tests.
pub fn exact_classical(name: &str) -> Option<Rational> {
    Some(match name {
        "ftc_x2" | "green_x1dx2" | "gauss_x1dx1" | "curl_x1dx2" | "change_shear" => q(1, 1),
        "stokes_closed" | "gauss_constant" => q(0, 1),
        "star_x1x2dx3" | "change_identity" => q(1, 4),
        "change_linear_area2" => q(2, 1),
        "change_shear_weighted" => q(7, 12),
        _ => return None,
    })
}
