use crate::linalg::{axpy, Mat};
use crate::tolerances;

use super::Point;

/// An ordered list of `g`-orthonormal vectors at a common base point.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalFrame {
    pub base: Point,
    pub vectors: Vec<Vec<f64>>,
}

impl OrthonormalFrame {
    /// Modified Gram-Schmidt in the given order, with one re-orthogonalisation
    /// pass. Vectors whose residual norm falls below `TAU_RANK` are dropped.
    pub fn ordered(base: Point, g: &Mat<f64>, inputs: &[Vec<f64>]) -> Self {
        let mut vectors: Vec<Vec<f64>> = Vec::new();
        for v in inputs {
            if let Some(u) = orthonormalize_against(g, &vectors, v) {
                vectors.push(u);
            }
        }
        Self { base, vectors }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Largest `|g(e_i, e_j) − δ_ij|`.
    pub fn orthonormality_defect(&self, g: &Mat<f64>) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g.bilinear(a, b) - target).abs());
            }
        }
        worst
    }
}

fn residual(g: &Mat<f64>, basis: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for u in basis {
            let c = g.bilinear(u, &r);
            axpy(-c, u, &mut r);
        }
    }
    r
}

fn orthonormalize_against(g: &Mat<f64>, basis: &[Vec<f64>], v: &[f64]) -> Option<Vec<f64>> {
    let r = residual(g, basis, v);
    let len = g.bilinear(&r, &r).max(0.0).sqrt();
    (len >= tolerances::TAU_RANK).then(|| r.iter().map(|x| x / len).collect())
}

/// Gram-Schmidt that at every step picks the candidate with the largest
/// residual norm (ties go to the lowest index), stopping after `count`
/// vectors or when every residual is below `TAU_RANK`.
///
/// The result is a deterministic function of the inputs, which keeps frames
/// reproducible from point to point.
pub fn pivoted_gram_schmidt(g: &Mat<f64>, candidates: &[Vec<f64>], count: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut used = vec![false; candidates.len()];
    while basis.len() < count {
        let mut best: Option<(usize, f64, Vec<f64>)> = None;
        for (idx, c) in candidates.iter().enumerate() {
            if used[idx] {
                continue;
            }
            let r = residual(g, &basis, c);
            let len = g.bilinear(&r, &r).max(0.0).sqrt();
            // strict comparison keeps the lowest index on ties
            if best.as_ref().is_none_or(|(_, l, _)| len > *l * (1.0 + 1e-12)) {
                best = Some((idx, len, r));
            }
        }
        match best {
            Some((idx, len, r)) if len >= tolerances::TAU_RANK => {
                used[idx] = true;
                basis.push(r.iter().map(|x| x / len).collect());
            }
            _ => break,
        }
    }
    basis
}
