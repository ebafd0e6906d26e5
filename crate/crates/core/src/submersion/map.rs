use serde::{Deserialize, Serialize};

use crate::autodiff::{seed_axis, Scalar};
use crate::linalg::Mat;

/// Closed-form maps between charts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapExpr {
    /// Deletes the listed coordinates and keeps the rest in order.
    Drop { dim: usize, drop: Vec<usize> },
    /// `x ↦ M x`.
    Linear { matrix: Vec<Vec<f64>> },
    /// `(x₁..x₄) ↦ (√(x₁² + x₂²), x₃, x₄)`.
    PolarRadius,
    /// `x ↦ |x|` on `R^dim`.
    Radius { dim: usize },
    /// Hopf coordinates `(η, ξ₁, ξ₂) ↦ (θ, φ) = (2η, ξ₁ − ξ₂)`.
    Hopf,
    /// `(x₁..x₄) ↦ (x₂, x₃, x₄³)`, whose rank drops on `x₄ = 0`.
    CubicLast,
}

impl MapExpr {
    pub fn source_dim(&self) -> usize {
        match self {
            Self::Drop { dim, .. } | Self::Radius { dim } => *dim,
            Self::Linear { matrix } => matrix.first().map_or(0, Vec::len),
            Self::PolarRadius | Self::CubicLast => 4,
            Self::Hopf => 3,
        }
    }

    pub fn target_dim(&self) -> usize {
        match self {
            Self::Drop { dim, drop } => dim - drop.len(),
            Self::Linear { matrix } => matrix.len(),
            Self::PolarRadius | Self::CubicLast => 3,
            Self::Radius { .. } => 1,
            Self::Hopf => 2,
        }
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        match self {
            Self::Drop { drop, .. } => {
                x.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, &v)| v).collect()
            }
            Self::Linear { matrix } => matrix
                .iter()
                .map(|row| row.iter().zip(x).fold(S::zero(), |acc, (&m, &v)| acc + v.scale(m)))
                .collect(),
            Self::PolarRadius => vec![(x[0] * x[0] + x[1] * x[1]).sqrt(), x[2], x[3]],
            Self::Radius { .. } => vec![x.iter().fold(S::zero(), |acc, &v| acc + v * v).sqrt()],
            Self::Hopf => vec![x[0].scale(2.0), x[1] - x[2]],
            Self::CubicLast => vec![x[1], x[2], x[3] * x[3] * x[3]],
        }
    }

    /// `Dπ` at `x`, of shape `target_dim × source_dim`.
    pub fn jacobian<S: Scalar>(&self, x: &[S]) -> Mat<S> {
        let n = x.len();
        let mut jac = Mat::zeros(self.target_dim(), n);
        for col in 0..n {
            let d = self.eval(&seed_axis(x, col));
            for (row, v) in d.iter().enumerate() {
                jac[(row, col)] = v.eps;
            }
        }
        jac
    }
}
