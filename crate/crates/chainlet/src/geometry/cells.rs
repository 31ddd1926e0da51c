//! Cubes and simplices and their refinements into monopolar chains.

use crate::algebra::KVector;
use crate::chains::{Chain, Point};
use crate::scalar::Scalar;

use super::GeometryError;

fn wedge_all<S: Scalar>(n: usize, vs: &[Vec<S>]) -> Result<KVector<S>, GeometryError> {
    let mut acc = KVector::scalar(n, S::one());
    for v in vs {
        acc = acc.wedge(&KVector::vector(v))?;
    }
    Ok(acc)
}

fn signed<S: Scalar>(a: KVector<S>, sign: i32) -> KVector<S> {
    if sign < 0 {
        a.neg()
    } else {
        a
    }
}

/// Parallelepiped `corner + [0,1]^k . edges`, oriented by `sign * e_1 ^ ... ^ e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeCell<S> {
    pub corner: Vec<S>,
    pub edges: Vec<Vec<S>>,
    pub sign: i32,
}

impl<S: Scalar> CubeCell<S> {
    pub fn new(corner: Vec<S>, edges: Vec<Vec<S>>, sign: i32) -> Result<Self, GeometryError> {
        let n = corner.len();
        if edges.iter().any(|e| e.len() != n) {
            return Err(GeometryError::Invalid(
                "edge length differs from ambient dimension".into(),
            ));
        }
        if edges.len() > n {
            return Err(GeometryError::Degenerate(format!(
                "{} edges in dimension {n}",
                edges.len()
            )));
        }
        if sign != 1 && sign != -1 {
            return Err(GeometryError::Invalid(format!("orientation sign {sign}")));
        }
        let c = CubeCell {
            corner,
            edges,
            sign,
        };
        if c.kvector()?.is_zero() {
            return Err(GeometryError::Degenerate(
                "edges are linearly dependent".into(),
            ));
        }
        Ok(c)
    }

    /// Full-dimensional axis box `[lo, hi]`, positively oriented.
    pub fn axis_box(lo: &[S], hi: &[S]) -> Result<Self, GeometryError> {
        if lo.len() != hi.len() {
            return Err(GeometryError::Invalid(
                "box corners differ in dimension".into(),
            ));
        }
        let n = lo.len();
        let edges = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            hi[i].clone() - lo[i].clone()
                        } else {
                            S::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(lo.to_vec(), edges, 1)
    }

    /// `[0,1]^k` spanned by `e_1..e_k` inside `R^n`.
    pub fn unit(n: usize, k: usize) -> Self {
        let edges = (0..k)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { S::one() } else { S::zero() })
                    .collect()
            })
            .collect();
        Self::new(vec![S::zero(); n], edges, 1).expect("unit cube is nondegenerate")
    }

    pub fn n(&self) -> usize {
        self.corner.len()
    }

    pub fn k(&self) -> usize {
        self.edges.len()
    }

    /// Oriented k-vector of the whole cell.
    pub fn kvector(&self) -> Result<KVector<S>, GeometryError> {
        Ok(signed(wedge_all(self.n(), &self.edges)?, self.sign))
    }

    pub fn center(&self) -> Vec<S> {
        let half = S::one() / S::from_i64(2);
        let mut c = self.corner.clone();
        for e in &self.edges {
            for (x, d) in c.iter_mut().zip(e) {
                *x = x.clone() + d.clone() * half.clone();
            }
        }
        c
    }

    /// Calls `f(midpoint, k-vector)` for each of the `2^(kN)` subcubes without building a chain.
    pub fn for_each_pole(
        &self,
        level: u32,
        mut f: impl FnMut(&[S], &KVector<S>),
    ) -> Result<(), GeometryError> {
        let k = self.k();
        let m: u64 = 1u64 << level;
        let scale = S::one() / S::from_i64(m as i64).pow_u32(k as u32);
        let a = self.kvector()?.scale(&scale);
        let inv = S::one() / S::from_i64(2 * m as i64);
        let mut idx = vec![0u64; k];
        let mut x = vec![S::zero(); self.n()];
        loop {
            for (i, xi) in x.iter_mut().enumerate() {
                let mut v = self.corner[i].clone();
                for (j, e) in self.edges.iter().enumerate() {
                    v = v + e[i].clone() * S::from_i64(2 * idx[j] as i64 + 1) * inv.clone();
                }
                *xi = v;
            }
            f(&x, &a);
            let mut d = 0;
            while d < k {
                idx[d] += 1;
                if idx[d] < m {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
            if d == k {
                return Ok(());
            }
        }
    }

    /// Level-`N` approximation: one pole per subcube midpoint with the subcube's k-vector.
    pub fn to_chain(&self, level: u32) -> Result<Chain<S>, GeometryError> {
        let mut parts = Vec::new();
        self.for_each_pole(level, |x, a| {
            parts.push((
                Point::new(x.to_vec()),
                crate::algebra::XElement::from_kvector(a),
            ))
        })?;
        Ok(Chain::from_parts(self.n(), parts)?)
    }

    /// Oriented boundary faces: `sum_i (-1)^(i-1) (F_i^+ - F_i^-)`.
    pub fn boundary_faces(&self) -> Vec<CubeCell<S>> {
        let mut out = Vec::new();
        for i in 0..self.k() {
            let rest: Vec<Vec<S>> = self
                .edges
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, e)| e.clone())
                .collect();
            let s = if i % 2 == 0 { self.sign } else { -self.sign };
            let top: Vec<S> = self
                .corner
                .iter()
                .zip(&self.edges[i])
                .map(|(a, b)| a.clone() + b.clone())
                .collect();
            out.push(CubeCell {
                corner: top,
                edges: rest.clone(),
                sign: s,
            });
            out.push(CubeCell {
                corner: self.corner.clone(),
                edges: rest,
                sign: -s,
            });
        }
        out
    }
}

/// Affine simplex `[v_0, ..., v_k]` with orientation sign.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexCell<S> {
    pub vertices: Vec<Vec<S>>,
    pub sign: i32,
}

impl<S: Scalar> SimplexCell<S> {
    pub fn new(vertices: Vec<Vec<S>>, sign: i32) -> Result<Self, GeometryError> {
        if vertices.is_empty() {
            return Err(GeometryError::Invalid("simplex without vertices".into()));
        }
        let n = vertices[0].len();
        if vertices.iter().any(|v| v.len() != n) {
            return Err(GeometryError::Invalid(
                "vertices differ in dimension".into(),
            ));
        }
        if sign != 1 && sign != -1 {
            return Err(GeometryError::Invalid(format!("orientation sign {sign}")));
        }
        let s = SimplexCell { vertices, sign };
        if s.kvector()?.is_zero() {
            return Err(GeometryError::Degenerate(
                "affinely dependent vertices".into(),
            ));
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn k(&self) -> usize {
        self.vertices.len() - 1
    }

    /// `sign (v_1 - v_0) ^ ... ^ (v_k - v_0) / k!`.
    pub fn kvector(&self) -> Result<KVector<S>, GeometryError> {
        let v0 = &self.vertices[0];
        let edges: Vec<Vec<S>> = self.vertices[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(v0)
                    .map(|(a, b)| a.clone() - b.clone())
                    .collect()
            })
            .collect();
        let fact = (1..=self.k() as i64).product::<i64>();
        Ok(signed(wedge_all(self.n(), &edges)?, self.sign).scale(&(S::one() / S::from_i64(fact))))
    }

    pub fn barycenter(&self) -> Vec<S> {
        barycenter(&self.vertices)
    }

    /// Children of one barycentric subdivision step, oriented like the parent.
    pub fn subdivide(&self) -> Result<Vec<SimplexCell<S>>, GeometryError> {
        let k = self.k();
        let parent = self.kvector()?;
        let mut out = Vec::new();
        for perm in permutations(k + 1) {
            let verts: Vec<Vec<S>> = (0..=k)
                .map(|j| {
                    barycenter(
                        &perm[..=j]
                            .iter()
                            .map(|&i| self.vertices[i].clone())
                            .collect::<Vec<_>>(),
                    )
                })
                .collect();
            let mut child = SimplexCell {
                vertices: verts,
                sign: 1,
            };
            // children lie in the parent's plane, so their k-vectors are parallel to it
            if child.kvector()?.inner(&parent)? < S::zero() {
                child.sign = -1;
            }
            out.push(child);
        }
        Ok(out)
    }

    /// Depth-`N` barycentric subdivision, one pole per subsimplex at its barycenter.
    pub fn to_chain(&self, level: u32) -> Result<Chain<S>, GeometryError> {
        let mut cells = vec![self.clone()];
        for _ in 0..level {
            let mut next = Vec::with_capacity(cells.len() * (1..=self.k() + 1).product::<usize>());
            for c in &cells {
                next.extend(c.subdivide()?);
            }
            cells = next;
        }
        let mut parts = Vec::with_capacity(cells.len());
        for c in &cells {
            parts.push((
                Point::new(c.barycenter()),
                crate::algebra::XElement::from_kvector(&c.kvector()?),
            ));
        }
        Ok(Chain::from_parts(self.n(), parts)?)
    }
}

pub(crate) fn barycenter<S: Scalar>(vs: &[Vec<S>]) -> Vec<S> {
    let n = vs[0].len();
    let inv = S::one() / S::from_i64(vs.len() as i64);
    (0..n)
        .map(|i| vs.iter().fold(S::zero(), |acc, v| acc + v[i].clone()) * inv.clone())
        .collect()
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}
