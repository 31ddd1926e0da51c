use std::collections::BTreeMap;

use super::{Chain, ChainError, Point, Pole};
use crate::algebra::{KVector, XElement, XTerm};
use crate::forms::{Form, SampleSpec, SmoothMap};
use crate::scalar::Scalar;

/// `Delta_U^j (p; a) = (T_{u_1} - id) ... (T_{u_j} - id) (p; a)`, an order-0 chain with up to
/// `2^j` signed poles.
pub fn difference_chain<S: Scalar>(
    us: &[Vec<S>],
    p: &Point<S>,
    a: &KVector<S>,
) -> Result<Chain<S>, ChainError> {
    let n = p.dim();
    if a.n() != n {
        return Err(ChainError::DimensionMismatch {
            expected: n,
            found: a.n(),
        });
    }
    let mut signed = vec![(p.clone(), true)];
    for u in us {
        if u.len() != n {
            return Err(ChainError::DimensionMismatch {
                expected: n,
                found: u.len(),
            });
        }
        signed = signed
            .into_iter()
            .flat_map(|(q, s)| [(q.translate(u), s), (q, !s)])
            .collect();
    }
    let x = XElement::from_kvector(a);
    let neg = x.neg();
    Ok(Chain::canonical(
        n,
        signed
            .into_iter()
            .map(|(q, s)| (q, if s { x.clone() } else { neg.clone() }))
            .collect(),
    ))
}

/// Pointwise products of the Lambda part with a fixed k-vector `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    /// `alpha ^ b`
    Wedge,
    /// `alpha / b`
    Slant,
    /// `perp(alpha ^ b)`
    Cross,
    /// `perp(perp alpha ^ perp b)`
    Intersect,
    /// `pi_b(alpha)`
    Project,
}

impl ProductMode {
    pub fn apply<S: Scalar>(
        self,
        a: &KVector<S>,
        b: &KVector<S>,
    ) -> Result<KVector<S>, ChainError> {
        Ok(match self {
            ProductMode::Wedge => a.wedge(b)?,
            ProductMode::Slant => a.slant(b)?,
            ProductMode::Cross => a.cross(b)?,
            ProductMode::Intersect => a.intersect(b)?,
            ProductMode::Project => a.project_onto(b)?,
        })
    }
}

impl std::str::FromStr for ProductMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "wedge" => Ok(ProductMode::Wedge),
            "slant" => Ok(ProductMode::Slant),
            "cross" => Ok(ProductMode::Cross),
            "intersect" => Ok(ProductMode::Intersect),
            "project" => Ok(ProductMode::Project),
            o => Err(format!("unknown product `{o}`")),
        }
    }
}

/// Axis-aligned box; `None` leaves a side unbounded. `closed` decides whether faces belong to it.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisBox<S> {
    pub lo: Vec<Option<S>>,
    pub hi: Vec<Option<S>>,
    pub closed: bool,
}

impl<S: Scalar> AxisBox<S> {
    pub fn new(lo: Vec<S>, hi: Vec<S>, closed: bool) -> Self {
        AxisBox {
            lo: lo.into_iter().map(Some).collect(),
            hi: hi.into_iter().map(Some).collect(),
            closed,
        }
    }

    pub fn whole(n: usize) -> Self {
        AxisBox {
            lo: vec![None; n],
            hi: vec![None; n],
            closed: true,
        }
    }

    pub fn contains(&self, p: &Point<S>) -> bool {
        p.coords().iter().enumerate().all(|(i, x)| {
            let above = match &self.lo[i] {
                None => true,
                Some(l) => {
                    if self.closed {
                        x >= l
                    } else {
                        x > l
                    }
                }
            };
            let below = match &self.hi[i] {
                None => true,
                Some(h) => {
                    if self.closed {
                        x <= h
                    } else {
                        x < h
                    }
                }
            };
            above && below
        })
    }
}

/// Applies a linear map on `Lambda` to every term, keeping symmetric factors.
fn map_lambda<S: Scalar>(
    x: &XElement<S>,
    n_out: usize,
    f: impl Fn(&KVector<S>) -> Result<KVector<S>, ChainError>,
) -> Result<XElement<S>, ChainError> {
    let mut out = Vec::new();
    for t in x.terms() {
        let img = f(&KVector::basis_scaled(x.n(), t.idx, t.coeff.clone()))?;
        for (idx, c) in img.terms() {
            out.push(XTerm {
                mono: t.mono.clone(),
                idx,
                coeff: c.clone(),
            });
        }
    }
    Ok(XElement::from_terms(n_out, out))
}

/// Value of a grade-m form read as a k-vector field at `x`: `sum_I f_I(x) e_I`.
pub(crate) fn field_at<S: Scalar>(field: &Form, x: &[S]) -> Result<KVector<S>, ChainError> {
    let mut terms = Vec::new();
    for (idx, f) in field.terms() {
        terms.push((idx, f.eval(x)?));
    }
    Ok(KVector::from_terms(field.n(), field.grade(), terms)?)
}

impl<S: Scalar> Chain<S> {
    /// `T_u`: shifts every support point by `u`.
    pub fn translate(&self, u: &[S]) -> Result<Self, ChainError> {
        self.check_dim(u.len())?;
        let parts = self
            .poles
            .iter()
            .map(|p| (p.at.translate(u), p.payload.clone()))
            .collect();
        Ok(Self::canonical(self.n, parts))
    }

    pub fn boundary(&self) -> Self {
        self.map_payloads(self.n, |p| Ok(p.payload.boundary()))
            .expect("boundary is total")
    }

    /// `grad_u P`, raising every order by one.
    pub fn prederivative(&self, u: &[S]) -> Result<Self, ChainError> {
        self.check_dim(u.len())?;
        self.map_payloads(self.n, |p| Ok(p.payload.prederivative(u)?))
    }

    pub fn perp(&self) -> Self {
        self.map_payloads(self.n, |p| Ok(p.payload.perp()))
            .expect("perp is total")
    }

    /// `E_b P`: left wedge `b ^ alpha` at every pole.
    pub fn exterior_e(&self, b: &KVector<S>) -> Result<Self, ChainError> {
        self.check_dim(b.n())?;
        self.map_payloads(self.n, |p| Ok(p.payload.wedge_left(b)?))
    }

    /// `E_X P` for a k-vector field given as a form of position, evaluated at each support.
    pub fn exterior_e_field(&self, field: &Form) -> Result<Self, ChainError> {
        self.check_dim(field.n())?;
        self.map_payloads(self.n, |p| {
            let b = field_at(field, p.at.coords())?;
            Ok(p.payload.wedge_left(&b)?)
        })
    }

    /// Field prederivative: left Koszul action of `boundary(X)`. For a 1-vector it is `grad_X`.
    pub fn nabla_field(&self, x: &KVector<S>) -> Result<Self, ChainError> {
        self.check_dim(x.n())?;
        let dx = XElement::from_kvector(x).boundary();
        self.map_payloads(self.n, |p| Ok(dx.koszul_product(&p.payload)?))
    }

    /// Literal `boundary E_X P + E_X boundary P` on monopolar chains.
    pub fn magic_nabla(&self, x: &KVector<S>) -> Result<Self, ChainError> {
        self.require_order_zero("magic_nabla")?;
        let a = self.exterior_e(x)?.boundary();
        let b = self.boundary().exterior_e(x)?;
        a.add(&b)
    }

    /// Pointwise product of the Lambda part with `b`.
    pub fn product(&self, mode: ProductMode, b: &KVector<S>) -> Result<Self, ChainError> {
        self.check_dim(b.n())?;
        self.map_payloads(self.n, |p| {
            map_lambda(&p.payload, self.n, |a| mode.apply(a, b))
        })
    }

    /// Pointwise product with a k-vector field evaluated at each support.
    pub fn product_field(&self, mode: ProductMode, field: &Form) -> Result<Self, ChainError> {
        self.check_dim(field.n())?;
        self.map_payloads(self.n, |p| {
            let b = field_at(field, p.at.coords())?;
            map_lambda(&p.payload, self.n, |a| mode.apply(a, &b))
        })
    }

    /// Sum of the order-`j` parts of all payloads.
    pub fn vec(&self, j: usize) -> XElement<S> {
        let terms = self.poles.iter().flat_map(|p| {
            p.payload
                .terms()
                .iter()
                .filter(|t| t.mono.order() == j)
                .cloned()
        });
        XElement::from_terms(self.n, terms.collect::<Vec<_>>())
    }

    /// Grade-`k` part of `Vec^0(P)`.
    pub fn vec0(&self, k: usize) -> KVector<S> {
        self.vec(0).lambda_of_order(0, k)
    }

    /// Normalized linear contraction `sum (lambda p_i; lambda^k a_i) / lambda^k`.
    pub fn contract(&self, lambda: &S) -> Result<Self, ChainError> {
        if *lambda <= S::zero() {
            return Err(ChainError::InvalidParameter(format!(
                "contraction factor {lambda} must be positive"
            )));
        }
        self.require_order_zero("contract")?;
        if self.grade().is_none() && !self.is_zero() {
            return Err(ChainError::NotHomogeneous("contract"));
        }
        // lambda^k / lambda^k cancels, so only supports move
        let parts = self
            .poles
            .iter()
            .map(|p| (p.at.scale(lambda), p.payload.clone()))
            .collect();
        Ok(Self::canonical(self.n, parts))
    }

    /// `P|_U`: poles supported in the box.
    pub fn restrict(&self, region: &AxisBox<S>) -> Result<Self, ChainError> {
        self.check_dim(region.lo.len())?;
        self.check_dim(region.hi.len())?;
        Ok(Chain {
            n: self.n,
            poles: self
                .poles
                .iter()
                .filter(|p| region.contains(&p.at))
                .cloned()
                .collect(),
        })
    }

    /// Set function `Vec^0(P|_U)`.
    pub fn measure(&self, region: &AxisBox<S>) -> Result<XElement<S>, ChainError> {
        Ok(self.restrict(region)?.vec(0))
    }

    /// `phi P = sum (p_i; phi(p_i) a_i)` for a 0-form `phi`.
    pub fn scale_by_function(&self, phi: &Form) -> Result<Self, ChainError> {
        if phi.grade() != 0 {
            return Err(ChainError::GradeMismatch {
                expected: 0,
                found: phi.grade(),
            });
        }
        self.check_dim(phi.n())?;
        self.require_order_zero("scale_by_function")?;
        let f = phi.coeff(crate::algebra::MultiIndex::EMPTY);
        self.map_payloads(self.n, |p| Ok(p.payload.scale(&f.eval(p.at.coords())?)))
    }

    /// `f_* P`: supports through `f`, payloads through the Jacobian at each support.
    pub fn pushforward(&self, f: &SmoothMap) -> Result<Self, ChainError> {
        self.check_dim(f.dom())?;
        let mut parts = Vec::with_capacity(self.poles.len());
        for p in &self.poles {
            let y = f.apply(p.at.coords())?;
            let jac = f.jacobian(p.at.coords())?;
            parts.push((Point::new(y), SmoothMap::push_xelement(&jac, &p.payload)));
        }
        Ok(Self::canonical(f.cod(), parts))
    }

    /// `diamond P = perp boundary perp P`, dual to the codifferential.
    pub fn diamond(&self) -> Self {
        self.perp().boundary().perp()
    }

    /// `box P = boundary diamond P + diamond boundary P`, dual to the form Laplacian.
    pub fn box_laplacian(&self) -> Self {
        self.diamond()
            .boundary()
            .add(&self.boundary().diamond())
            .expect("same dimension")
    }

    /// Pointwise wedge of two monopolar chains; poles at distinct points annihilate.
    pub fn wedge_chain(&self, other: &Self) -> Result<Self, ChainError> {
        self.check_dim(other.n)?;
        self.require_order_zero("wedge_chain")?;
        other.require_order_zero("wedge_chain")?;
        let mut parts = Vec::new();
        for p in &self.poles {
            for q in other.poles.iter().filter(|q| q.at == p.at) {
                let a = p.payload.lambda_of_order(0, p.bidegree().1);
                let b = q.payload.lambda_of_order(0, q.bidegree().1);
                parts.push((p.at.clone(), XElement::from_kvector(&a.wedge(&b)?)));
            }
        }
        Ok(Self::canonical(self.n, parts))
    }

    /// `<P, Q> = sum over shared supports of <a_p, b_p>`.
    pub fn monopolar_inner(&self, other: &Self) -> Result<S, ChainError> {
        self.check_dim(other.n)?;
        self.require_order_zero("monopolar_inner")?;
        other.require_order_zero("monopolar_inner")?;
        if let (Some(k1), Some(k2)) = (self.grade(), other.grade()) {
            if k1 != k2 {
                return Err(ChainError::GradeMismatch {
                    expected: k1,
                    found: k2,
                });
            }
        }
        let theirs: BTreeMap<&Point<S>, &Pole<S>> =
            other.poles.iter().map(|q| (&q.at, q)).collect();
        let mut acc = S::zero();
        for p in &self.poles {
            if let Some(q) = theirs.get(&p.at) {
                let k = p.bidegree().1;
                acc = acc
                    + p.payload
                        .lambda_of_order(0, k)
                        .inner(&q.payload.lambda_of_order(0, k))?;
            }
        }
        Ok(acc)
    }

    /// `|P|_p = (sum M(a_i)^p)^(1/p)` on monopolar chains.
    pub fn lp_norm(&self, p: f64) -> Result<f64, ChainError> {
        if !(p >= 1.0) {
            return Err(ChainError::InvalidParameter(format!(
                "L^p exponent {p} must be >= 1"
            )));
        }
        self.require_order_zero("lp_norm")?;
        let s: f64 = self
            .poles
            .iter()
            .map(|q| q.payload.norm().to_f64().powf(p))
            .sum();
        Ok(s.powf(1.0 / p))
    }

    /// Geometric product `PQ = <P, Q> + P ^ Q`, returned as the pair.
    pub fn geometric_product(&self, other: &Self) -> Result<(S, Self), ChainError> {
        Ok((self.monopolar_inner(other)?, self.wedge_chain(other)?))
    }
}

/// Sampled estimate of the mapping norm `|f|_[r] = max_j ||f||_[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MappingNormSample {
    pub r: usize,
    /// `||f||_[j]` estimates, `j = 0..=r`.
    pub per_order: Vec<f64>,
    pub value: f64,
}

/// Samples `|f_* Delta_U^j (x; a)| / ||Delta_U^j (x; a)||_j` over the sample points, directions
/// (plus the principal singular direction of the Jacobian at each point), steps, and unit basis
/// `k`-vectors. Pushed chains are measured by their decomposition upper bracket.
pub fn mapping_norm(
    f: &SmoothMap,
    r: usize,
    k: usize,
    sampler: &SampleSpec,
) -> Result<MappingNormSample, ChainError> {
    if sampler.points.is_empty()
        || sampler.steps.is_empty()
        || (r > 0 && sampler.directions.is_empty())
    {
        return Err(ChainError::Form(crate::forms::FormError::EmptySample));
    }
    let n = f.dom();
    if k > n {
        return Err(ChainError::InvalidParameter(format!(
            "grade {k} exceeds dimension {n}"
        )));
    }
    let alphas: Vec<KVector<f64>> = crate::algebra::MultiIndex::all_of_grade(n, k)
        .into_iter()
        .map(|i| KVector::basis(n, i))
        .collect();
    let mut per_order = vec![0.0f64; r + 1];
    for x in &sampler.points {
        if x.len() != n {
            return Err(ChainError::DimensionMismatch {
                expected: n,
                found: x.len(),
            });
        }
        let p = Point::new(x.clone());
        let mut dirs = sampler.directions.clone();
        if let Some(v) = SmoothMap::principal_direction(&f.jacobian(x)?) {
            dirs.push(v);
        }
        for (j, best) in per_order.iter_mut().enumerate() {
            for a in &alphas {
                // order 0 ignores the direction, one dummy entry suffices
                let zero = [vec![0.0; n]];
                let dir_list: &[Vec<f64>] = if j == 0 { &zero } else { &dirs };
                let steps: &[f64] = if j == 0 {
                    &sampler.steps[..1]
                } else {
                    &sampler.steps
                };
                for u in dir_list {
                    for &t in steps {
                        let tu: Vec<f64> = u.iter().map(|c| c * t).collect();
                        let d = difference_chain(&vec![tu.clone(); j], &p, a)?;
                        let len = tu.iter().map(|c| c * c).sum::<f64>().sqrt();
                        let size = len.powi(j as i32) * a.mass();
                        if size == 0.0 {
                            continue;
                        }
                        let pushed = d.pushforward(f)?;
                        let upper = crate::norms::upper_bound(&pushed, j)
                            .map_err(|e| ChainError::InvalidParameter(e.to_string()))?
                            .cost();
                        *best = best.max(upper / size);
                    }
                }
            }
        }
    }
    let value = per_order.iter().cloned().fold(0.0, f64::max);
    Ok(MappingNormSample {
        r,
        per_order,
        value,
    })
}
