//! Primal/dual mesh pairs in the plane and the Hodge-sequence report: how close each dual
//! edge is to the perp of its primal edge, in direction, position and natural 1-norm.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::{KVector, XElement};
use crate::chains::{Chain, Point};
use crate::norms::{lower_bound, upper_bound, DualFamilySpec};
use crate::scalar::{Rational, Scalar};

use super::complex::SimplicialComplex;
use super::GeometryError;

type Q = Rational;

/// Primal edge `a -> b` matched with a dual polyline through dual vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct CellPair {
    pub edge: [usize; 2],
    pub dual: Vec<usize>,
}

/// Triangulated planar domain, dual vertices, and a bijection from primal edges to dual cells.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshPair {
    pub vertices: Vec<Vec<Q>>,
    pub triangles: Vec<([usize; 3], i32)>,
    pub dual_vertices: Vec<Vec<Q>>,
    pub pairs: Vec<CellPair>,
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn len_f64(v: &[Q]) -> f64 {
    v.iter().map(|c| c.to_f64().powi(2)).sum::<f64>().sqrt()
}

fn midpoint(a: &[Q], b: &[Q]) -> Vec<Q> {
    let half = Q::new(1.into(), 2.into());
    a.iter().zip(b).map(|(x, y)| (x + y) * &half).collect()
}

/// `perp(x e1 + y e2) = x e2 - y e1`.
fn perp2(v: &[Q]) -> Vec<Q> {
    vec![-v[1].clone(), v[0].clone()]
}

impl MeshPair {
    pub fn new(
        vertices: Vec<Vec<Q>>,
        triangles: Vec<([usize; 3], i32)>,
        dual_vertices: Vec<Vec<Q>>,
        pairs: Vec<CellPair>,
    ) -> Result<Self, GeometryError> {
        if vertices.iter().chain(&dual_vertices).any(|v| v.len() != 2) {
            return Err(GeometryError::Invalid(
                "mesh pairs are planar: every vertex needs 2 coordinates".into(),
            ));
        }
        let simplices = triangles.iter().map(|(t, s)| (t.to_vec(), *s)).collect();
        SimplicialComplex::new(vertices.clone(), simplices)?;
        let mut edges: BTreeSet<[usize; 2]> = BTreeSet::new();
        for (t, _) in &triangles {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                edges.insert([a.min(b), a.max(b)]);
            }
        }
        let mut paired: BTreeSet<[usize; 2]> = BTreeSet::new();
        for p in &pairs {
            let [a, b] = p.edge;
            if a == b || a >= vertices.len() || b >= vertices.len() {
                return Err(GeometryError::Invalid(format!("bad primal edge {a} {b}")));
            }
            if p.dual.len() < 2 || p.dual.iter().any(|&d| d >= dual_vertices.len()) {
                return Err(GeometryError::Invalid(format!(
                    "bad dual cell for edge {a} {b}"
                )));
            }
            let key = [a.min(b), a.max(b)];
            if !edges.contains(&key) {
                return Err(GeometryError::Bijection(format!(
                    "edge {a} {b} is not a mesh edge"
                )));
            }
            if !paired.insert(key) {
                return Err(GeometryError::Bijection(format!(
                    "edge {a} {b} paired twice"
                )));
            }
        }
        if let Some(e) = edges.difference(&paired).next() {
            return Err(GeometryError::Bijection(format!(
                "edge {} {} has no dual cell",
                e[0], e[1]
            )));
        }
        Ok(MeshPair {
            vertices,
            triangles,
            dual_vertices,
            pairs,
        })
    }

    fn edge_vector(&self, i: usize) -> Vec<Q> {
        let [a, b] = self.pairs[i].edge;
        sub(&self.vertices[b], &self.vertices[a])
    }

    fn dual_segments(&self, i: usize) -> Vec<(Vec<Q>, Vec<Q>)> {
        self.pairs[i]
            .dual
            .windows(2)
            .map(|w| {
                (
                    self.dual_vertices[w[0]].clone(),
                    self.dual_vertices[w[1]].clone(),
                )
            })
            .collect()
    }

    /// Longest primal edge.
    pub fn mesh_size(&self) -> f64 {
        (0..self.pairs.len())
            .map(|i| len_f64(&self.edge_vector(i)))
            .fold(0.0, f64::max)
    }

    /// `alpha = perp Vec^0(sigma)`.
    pub fn alpha(&self, i: usize) -> KVector<Q> {
        KVector::vector(&self.edge_vector(i)).perp()
    }

    /// `beta = Vec^0(tau)`, the end-to-end vector of the dual polyline.
    pub fn beta(&self, i: usize) -> KVector<Q> {
        let d = &self.pairs[i].dual;
        KVector::vector(&sub(
            &self.dual_vertices[d[d.len() - 1]],
            &self.dual_vertices[d[0]],
        ))
    }

    pub fn primal_barycenter(&self, i: usize) -> Vec<Q> {
        let [a, b] = self.pairs[i].edge;
        midpoint(&self.vertices[a], &self.vertices[b])
    }

    /// Length-weighted centroid of the dual polyline (its first vertex if it has no length).
    pub fn dual_barycenter(&self, i: usize) -> Vec<f64> {
        let mut total = 0.0;
        let mut acc = [0.0; 2];
        for (p, q) in self.dual_segments(i) {
            let l = len_f64(&sub(&q, &p));
            let m = midpoint(&p, &q);
            total += l;
            acc[0] += l * m[0].to_f64();
            acc[1] += l * m[1].to_f64();
        }
        if total == 0.0 {
            return self.dual_vertices[self.pairs[i].dual[0]]
                .iter()
                .map(|c| c.to_f64())
                .collect();
        }
        vec![acc[0] / total, acc[1] / total]
    }

    /// Perp of the primal edge refined into `2^refine` poles.
    pub fn perp_primal_chain(&self, i: usize, refine: u32) -> Chain<f64> {
        let [a, b] = self.pairs[i].edge;
        segment_chain(&self.vertices[a], &self.vertices[b], refine).perp()
    }

    /// Dual polyline refined into `2^refine` poles per segment.
    pub fn dual_chain(&self, i: usize, refine: u32) -> Chain<f64> {
        let parts: Vec<Chain<f64>> = self
            .dual_segments(i)
            .iter()
            .map(|(p, q)| segment_chain(p, q, refine))
            .collect();
        Chain::sum(2, &parts).expect("planar chains")
    }

    /// Natural-norm distance between a refined chain and its segments: each of the `2^R`
    /// pieces moves its mass `M(v) / 2^R` by `|x|` averaged over the piece, `|v| / 2^(R+2)`.
    fn refinement_tail(&self, i: usize, refine: u32) -> f64 {
        let tail = |v: &[Q]| {
            KVector::vector(v).mass().to_f64() * len_f64(v) / (1u64 << (refine + 2)) as f64
        };
        let dual: f64 = self
            .dual_segments(i)
            .iter()
            .map(|(p, q)| tail(&sub(q, p)))
            .sum();
        dual + tail(&self.edge_vector(i))
    }
}

fn segment_chain(a: &[Q], b: &[Q], refine: u32) -> Chain<f64> {
    let m = 1u64 << refine;
    let af: Vec<f64> = a.iter().map(|c| c.to_f64()).collect();
    let v: Vec<f64> = b
        .iter()
        .zip(a)
        .map(|(x, y)| x.to_f64() - y.to_f64())
        .collect();
    let piece = XElement::from_kvector(&KVector::vector(
        &v.iter().map(|c| c / m as f64).collect::<Vec<_>>(),
    ));
    let parts = (0..m).map(|j| {
        let t = (j as f64 + 0.5) / m as f64;
        (
            Point::new(af.iter().zip(&v).map(|(x, d)| x + t * d).collect()),
            piece.clone(),
        )
    });
    Chain::from_parts(2, parts.collect::<Vec<_>>()).expect("planar chain")
}

/// Which dual vertices a generated family uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualKind {
    /// Triangle circumcenters, joined across interior edges and to midpoints on the boundary.
    Circumcentric,
    /// Triangle centroids joined the same way; not orthogonal to the primal edges.
    Barycentric,
    /// Each edge rotated a quarter turn about its midpoint, so `beta = alpha` exactly.
    PerpTranslate,
}

impl std::str::FromStr for DualKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "circumcentric" => Ok(DualKind::Circumcentric),
            "barycentric" => Ok(DualKind::Barycentric),
            "perp" => Ok(DualKind::PerpTranslate),
            o => Err(format!(
                "unknown dual kind `{o}` (circumcentric|barycentric|perp)"
            )),
        }
    }
}

fn circumcenter(a: &[Q], b: &[Q], c: &[Q]) -> Vec<Q> {
    let two = Q::from_integer(2.into());
    let d = &two * (&a[0] * (&b[1] - &c[1]) + &b[0] * (&c[1] - &a[1]) + &c[0] * (&a[1] - &b[1]));
    let (sa, sb, sc) = (
        &a[0] * &a[0] + &a[1] * &a[1],
        &b[0] * &b[0] + &b[1] * &b[1],
        &c[0] * &c[0] + &c[1] * &c[1],
    );
    let ux = (&sa * (&b[1] - &c[1]) + &sb * (&c[1] - &a[1]) + &sc * (&a[1] - &b[1])) / &d;
    let uy = (&sa * (&c[0] - &b[0]) + &sb * (&a[0] - &c[0]) + &sc * (&b[0] - &a[0])) / &d;
    vec![ux, uy]
}

/// Unit square cut into an `m x m` grid, each square split along its rising diagonal.
pub fn square_grid_pair(m: usize, kind: DualKind) -> Result<MeshPair, GeometryError> {
    if m == 0 {
        return Err(GeometryError::Invalid(
            "grid needs at least one cell".into(),
        ));
    }
    let coord = |i: usize| Q::new((i as i64).into(), (m as i64).into());
    let vid = |i: usize, j: usize| j * (m + 1) + i;
    let mut vertices = Vec::new();
    for j in 0..=m {
        for i in 0..=m {
            vertices.push(vec![coord(i), coord(j)]);
        }
    }
    let mut triangles = Vec::new();
    for j in 0..m {
        for i in 0..m {
            triangles.push(([vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)], 1));
            triangles.push(([vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)], 1));
        }
    }
    let mut edge_tris: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
    for (ti, (t, _)) in triangles.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            edge_tris.entry([a.min(b), a.max(b)]).or_default().push(ti);
        }
    }
    let center = |ti: usize| {
        let t = triangles[ti].0;
        let (a, b, c) = (&vertices[t[0]], &vertices[t[1]], &vertices[t[2]]);
        match kind {
            DualKind::Circumcentric => circumcenter(a, b, c),
            _ => super::cells::barycenter(&[a.clone(), b.clone(), c.clone()]),
        }
    };
    let mut dual_vertices: Vec<Vec<Q>> = Vec::new();
    let mut dual_index: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    let mut intern = |p: Vec<Q>| -> usize {
        *dual_index.entry(p.clone()).or_insert_with(|| {
            dual_vertices.push(p);
            dual_vertices.len() - 1
        })
    };
    let mut pairs = Vec::new();
    for (edge, tris) in &edge_tris {
        let [a, b] = *edge;
        let v = sub(&vertices[b], &vertices[a]);
        let mid = midpoint(&vertices[a], &vertices[b]);
        let (p, q) = match kind {
            DualKind::PerpTranslate => {
                let h: Vec<Q> = perp2(&v)
                    .iter()
                    .map(|c| c / Q::from_integer(2.into()))
                    .collect();
                (
                    sub(&mid, &h),
                    mid.iter().zip(&h).map(|(x, y)| x + y).collect(),
                )
            }
            _ if tris.len() == 2 => (center(tris[0]), center(tris[1])),
            _ => (center(tris[0]), mid),
        };
        // orient the dual cell along perp of the edge
        let d = sub(&q, &p);
        let along = &d[0] * -&v[1] + &d[1] * &v[0];
        let (p, q) = if along < Q::from_integer(0.into()) {
            (q, p)
        } else {
            (p, q)
        };
        let (ip, iq) = (intern(p), intern(q));
        pairs.push(CellPair {
            edge: [a, b],
            dual: vec![ip, iq],
        });
    }
    MeshPair::new(vertices, triangles, dual_vertices, pairs)
}

/// `square_grid_pair(2^level)` for each level.
pub fn square_grid_family(levels: &[u32], kind: DualKind) -> Result<Vec<MeshPair>, GeometryError> {
    levels
        .iter()
        .map(|&l| square_grid_pair(1usize << l, kind))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct HodgeConfig {
    /// Each segment is refined into `2^refine` poles for the norm bracket.
    pub refine: u32,
    /// Dual family for the lower bracket; `None` skips lower bounds.
    pub family: Option<DualFamilySpec>,
    /// Largest final direction ratio accepted as convergence.
    pub final_ratio: f64,
}

impl Default for HodgeConfig {
    fn default() -> Self {
        HodgeConfig {
            refine: 4,
            family: Some(DualFamilySpec {
                magnitudes: 12,
                max_frequency: 64.0,
                refine_steps: 12,
                max_pair_directions: 4,
                extra_directions: vec![],
            }),
            final_ratio: 0.05,
        }
    }
}

/// Aggregated quantities of one mesh pair.
#[derive(Clone, Debug, PartialEq)]
pub struct HodgeLevel {
    pub level: usize,
    pub mesh_size: f64,
    pub pairs: usize,
    /// Pairs whose dual cell has `Vec^0 = 0`; excluded from the ratios.
    pub degenerate: usize,
    /// `sum M(beta - alpha) / sum M(beta)`.
    pub direction_ratio: f64,
    /// Largest distance between a primal barycenter and its dual cell's barycenter.
    pub max_barycenter_distance: f64,
    /// `sum lower |tau - perp sigma|^1 / sum M(tau)`; zero when lower bounds are skipped.
    pub bracket_lower: f64,
    /// `sum upper |tau - perp sigma|^1 / sum M(tau)`.
    pub bracket_upper: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HodgeVerdict {
    Hodge,
    NotHodge,
}

impl fmt::Display for HodgeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HodgeVerdict::Hodge => "HODGE",
            HodgeVerdict::NotHodge => "NOT-HODGE",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HodgeReport {
    pub levels: Vec<HodgeLevel>,
    pub verdict: HodgeVerdict,
    /// Why the verdict is NOT-HODGE (empty otherwise).
    pub reasons: Vec<String>,
}

fn level_stats(
    level: usize,
    mesh: &MeshPair,
    cfg: &HodgeConfig,
) -> Result<HodgeLevel, GeometryError> {
    let mut degenerate = 0;
    let (mut diff_mass, mut beta_mass, mut tau_mass) = (0.0, 0.0, 0.0);
    let (mut lower, mut upper) = (0.0, 0.0);
    let mut max_dist: f64 = 0.0;
    for i in 0..mesh.pairs.len() {
        let (a, b) = (mesh.alpha(i), mesh.beta(i));
        let mb = b.mass().to_f64();
        if mb == 0.0 {
            degenerate += 1;
            continue;
        }
        beta_mass += mb;
        diff_mass += b.sub(&a)?.mass().to_f64();
        let p = mesh.primal_barycenter(i);
        let q = mesh.dual_barycenter(i);
        max_dist =
            max_dist.max(((p[0].to_f64() - q[0]).powi(2) + (p[1].to_f64() - q[1]).powi(2)).sqrt());
        let tau = mesh.dual_chain(i, cfg.refine);
        tau_mass += tau.mass();
        let diff = tau.sub(&mesh.perp_primal_chain(i, cfg.refine))?;
        let tail = mesh.refinement_tail(i, cfg.refine);
        upper += upper_bound(&diff, 1)?.cost() + tail;
        if let Some(fam) = &cfg.family {
            lower += (lower_bound(&diff, 1, fam)?.value - tail).max(0.0);
        }
    }
    let ratio = |x: f64, m: f64| if m > 0.0 { x / m } else { 0.0 };
    Ok(HodgeLevel {
        level,
        mesh_size: mesh.mesh_size(),
        pairs: mesh.pairs.len(),
        degenerate,
        direction_ratio: ratio(diff_mass, beta_mass),
        max_barycenter_distance: max_dist,
        bracket_lower: ratio(lower, tau_mass),
        bracket_upper: ratio(upper, tau_mass),
    })
}

/// Per-level statistics and the verdict. HODGE needs strictly shrinking meshes, direction
/// ratios and upper brackets that never grow and strictly drop while positive, a final
/// direction ratio below `cfg.final_ratio`, and a final barycenter distance within the mesh size.
pub fn hodge_sequence_report(
    meshes: &[MeshPair],
    cfg: &HodgeConfig,
) -> Result<HodgeReport, GeometryError> {
    if meshes.is_empty() {
        return Err(GeometryError::Invalid("empty mesh sequence".into()));
    }
    let levels = meshes
        .iter()
        .enumerate()
        .map(|(i, m)| level_stats(i + 1, m, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let mut reasons = Vec::new();
    for w in levels.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.mesh_size >= a.mesh_size {
            reasons.push(format!("mesh size does not shrink at level {}", b.level));
        }
        for (name, x, y) in [
            ("direction ratio", a.direction_ratio, b.direction_ratio),
            ("upper bracket", a.bracket_upper, b.bracket_upper),
        ] {
            if y > x || (x > 0.0 && y >= x) {
                reasons.push(format!(
                    "{name} does not decrease at level {} ({x:.6} -> {y:.6})",
                    b.level
                ));
            }
        }
    }
    let last = levels.last().expect("nonempty");
    if last.direction_ratio >= cfg.final_ratio {
        reasons.push(format!(
            "final direction ratio {:.6} >= {}",
            last.direction_ratio, cfg.final_ratio
        ));
    }
    if last.max_barycenter_distance > last.mesh_size {
        reasons.push(format!(
            "final barycenter distance {:.6} exceeds mesh size {:.6}",
            last.max_barycenter_distance, last.mesh_size
        ));
    }
    let verdict = if reasons.is_empty() {
        HodgeVerdict::Hodge
    } else {
        HodgeVerdict::NotHodge
    };
    Ok(HodgeReport {
        levels,
        verdict,
        reasons,
    })
}
