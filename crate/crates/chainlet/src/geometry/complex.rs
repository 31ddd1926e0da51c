//! Oriented simplicial complexes of a single dimension.

use std::collections::BTreeMap;

use crate::chains::Chain;
use crate::scalar::Scalar;

use super::cells::SimplexCell;
use super::GeometryError;

/// Vertices plus oriented `k`-simplices given by vertex indices.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialComplex<S> {
    pub vertices: Vec<Vec<S>>,
    pub simplices: Vec<(Vec<usize>, i32)>,
}

/// Sorts `v` and returns the parity of the sorting permutation.
fn sort_with_sign(mut v: Vec<usize>) -> (Vec<usize>, i32) {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (v, sign)
}

impl<S: Scalar> SimplicialComplex<S> {
    /// Validates indices, nondegeneracy and orientation: each face shared by two simplices
    /// must be induced with opposite signs.
    pub fn new(
        vertices: Vec<Vec<S>>,
        simplices: Vec<(Vec<usize>, i32)>,
    ) -> Result<Self, GeometryError> {
        let n = vertices.first().map(|v| v.len()).unwrap_or(0);
        if vertices.iter().any(|v| v.len() != n) {
            return Err(GeometryError::Invalid(
                "vertices differ in dimension".into(),
            ));
        }
        let k = simplices.first().map(|s| s.0.len()).unwrap_or(1);
        for (s, _) in &simplices {
            if s.len() != k {
                return Err(GeometryError::Invalid(
                    "simplices of mixed dimension".into(),
                ));
            }
            if let Some(&bad) = s.iter().find(|&&i| i >= vertices.len()) {
                return Err(GeometryError::Invalid(format!(
                    "vertex index {bad} out of range"
                )));
            }
        }
        let c = SimplicialComplex {
            vertices,
            simplices,
        };
        for i in 0..c.simplices.len() {
            c.cell(i)?;
        }
        if k >= 2 {
            let mut seen: BTreeMap<Vec<usize>, Vec<i32>> = BTreeMap::new();
            for (face, s) in c.induced_faces() {
                seen.entry(face).or_default().push(s);
            }
            for (face, signs) in &seen {
                if signs.len() == 2 && signs[0] == signs[1] {
                    return Err(GeometryError::Orientation(format!(
                        "face {face:?} induced twice with the same sign"
                    )));
                }
                if signs.len() > 2 {
                    return Err(GeometryError::Orientation(format!(
                        "face {face:?} shared by {} simplices",
                        signs.len()
                    )));
                }
            }
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.vertices.first().map(|v| v.len()).unwrap_or(0)
    }

    pub fn cell(&self, i: usize) -> Result<SimplexCell<S>, GeometryError> {
        let (idx, sign) = &self.simplices[i];
        SimplexCell::new(
            idx.iter().map(|&j| self.vertices[j].clone()).collect(),
            *sign,
        )
    }

    /// `(sorted face, induced sign)` for every codimension-one face of every simplex.
    fn induced_faces(&self) -> Vec<(Vec<usize>, i32)> {
        let mut out = Vec::new();
        for (idx, sign) in &self.simplices {
            for omit in 0..idx.len() {
                let face: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != omit)
                    .map(|(_, &v)| v)
                    .collect();
                let (sorted, parity) = sort_with_sign(face);
                let alt = if omit % 2 == 0 { 1 } else { -1 };
                out.push((sorted, sign * alt * parity));
            }
        }
        out
    }

    /// The combinatorial boundary: faces whose induced signs do not cancel.
    pub fn boundary_complex(&self) -> Result<SimplicialComplex<S>, GeometryError> {
        let mut net: BTreeMap<Vec<usize>, i32> = BTreeMap::new();
        for (face, s) in self.induced_faces() {
            *net.entry(face).or_default() += s;
        }
        let simplices: Vec<(Vec<usize>, i32)> = net
            .into_iter()
            .filter(|(_, s)| *s != 0)
            .map(|(f, s)| (f, s.signum()))
            .collect();
        Ok(SimplicialComplex {
            vertices: self.vertices.clone(),
            simplices,
        })
    }

    /// Sum of the depth-`N` subdivision chains of all simplices.
    pub fn to_chain(&self, level: u32) -> Result<Chain<S>, GeometryError> {
        let mut parts = Vec::new();
        for i in 0..self.simplices.len() {
            parts.push(self.cell(i)?.to_chain(level)?);
        }
        Ok(Chain::sum(self.n(), &parts)?)
    }
}
