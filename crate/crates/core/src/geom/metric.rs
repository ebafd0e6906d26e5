//! Closed-form metric fields, evaluated generically so they can be
//! differentiated to any fixed order.

use serde::{Deserialize, Serialize};

use crate::autodiff::Scalar;
use crate::linalg::Mat;
use crate::quaternion;

/// A metric field `x ↦ g_ij(x)` given by a closed-form expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricExpr {
    /// Flat metric `δ_ij`.
    Euclidean { dim: usize },
    /// Constant diagonal metric.
    Diagonal { diag: Vec<f64> },
    /// Round 2-sphere in polar coordinates `(θ, φ)`: `r²(dθ² + sin²θ dφ²)`.
    SpherePolar { radius: f64 },
    /// Round 3-sphere in Hopf coordinates `(η, ξ₁, ξ₂)`:
    /// `r²(dη² + cos²η dξ₁² + sin²η dξ₂²)`.
    SphereHopf { radius: f64 },
    /// Conformally flat `e^{2x₁} δ_ij`.
    ConformalExp { dim: usize },
    /// Quaternionic projective space in the affine chart `z ∈ Hᵐ`:
    /// `g(v,v) = (|v|²(1+|z|²) − |Σ z̄ᵢvᵢ|²) / (1+|z|²)²`.
    QuaternionicProjective { m: usize },
    /// `factor · inner`.
    Scaled { factor: f64, inner: Box<MetricExpr> },
}

impl MetricExpr {
    pub fn dim(&self) -> usize {
        match self {
            Self::Euclidean { dim } | Self::ConformalExp { dim } => *dim,
            Self::Diagonal { diag } => diag.len(),
            Self::SpherePolar { .. } => 2,
            Self::SphereHopf { .. } => 3,
            Self::QuaternionicProjective { m } => 4 * m,
            Self::Scaled { inner, .. } => inner.dim(),
        }
    }

    /// Metric components at `x`.
    pub fn eval<S: Scalar>(&self, x: &[S]) -> Mat<S> {
        match self {
            Self::Euclidean { dim } => Mat::identity(*dim),
            Self::Diagonal { diag } => {
                let mut g = Mat::zeros(diag.len(), diag.len());
                for (i, &d) in diag.iter().enumerate() {
                    g[(i, i)] = S::cst(d);
                }
                g
            }
            Self::SpherePolar { radius } => {
                let r2 = radius * radius;
                let s = x[0].sin();
                let mut g = Mat::zeros(2, 2);
                g[(0, 0)] = S::cst(r2);
                g[(1, 1)] = (s * s).scale(r2);
                g
            }
            Self::SphereHopf { radius } => {
                let r2 = radius * radius;
                let c = x[0].cos();
                let s = x[0].sin();
                let mut g = Mat::zeros(3, 3);
                g[(0, 0)] = S::cst(r2);
                g[(1, 1)] = (c * c).scale(r2);
                g[(2, 2)] = (s * s).scale(r2);
                g
            }
            Self::ConformalExp { dim } => {
                let f = (x[0] + x[0]).exp();
                Mat::identity(*dim).scaled(f)
            }
            Self::QuaternionicProjective { m } => quaternionic_projective(*m, x),
            Self::Scaled { factor, inner } => inner.eval(x).scaled(S::cst(*factor)),
        }
    }
}

fn quaternionic_projective<S: Scalar>(m: usize, x: &[S]) -> Mat<S> {
    let n = 4 * m;
    let mut norm2 = S::zero();
    for &xi in &x[..n] {
        norm2 += xi * xi;
    }
    let w = S::one() + norm2;
    // L maps v to Σ z̄ᵢ vᵢ ∈ H as a 4 × 4m real matrix.
    let mut l = Mat::zeros(4, n);
    for block in 0..m {
        let z = &x[4 * block..4 * block + 4];
        let zbar = [z[0], -z[1], -z[2], -z[3]];
        let lm = quaternion::left_mul_matrix(&zbar);
        for r in 0..4 {
            for c in 0..4 {
                l[(r, 4 * block + c)] = lm[(r, c)];
            }
        }
    }
    let ltl = l.transpose().mul(&l);
    let inv_w2 = S::one() / (w * w);
    Mat::from_fn(n, n, |i, j| {
        let delta = if i == j { w } else { S::zero() };
        (delta - ltl[(i, j)]) * inv_w2
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sphere_polar_at_sixty_degrees() {
        let g = MetricExpr::SpherePolar { radius: 1.0 }.eval(&[std::f64::consts::FRAC_PI_3, 0.0]);
        assert_abs_diff_eq!(g[(0, 0)], 1.0);
        assert_abs_diff_eq!(g[(1, 1)], 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(g[(0, 1)], 0.0);
    }

    #[test]
    fn projective_metric_is_flat_at_origin() {
        let g = MetricExpr::QuaternionicProjective { m: 2 }.eval(&[0.0; 8]);
        assert_eq!(g, Mat::identity(8));
    }

    #[test]
    fn projective_metric_radial_direction() {
        // With only z₁ = t·i nonzero, the quaternionic line H·z₁ is scaled by
        // 1/(1+t²)² and the orthogonal block by 1/(1+t²).
        let t = 0.7;
        let mut x = [0.0; 8];
        x[1] = t;
        let g = MetricExpr::QuaternionicProjective { m: 2 }.eval(&x);
        for i in 0..4 {
            assert_abs_diff_eq!(g[(i, i)], 1.0 / (1.0 + t * t).powi(2), epsilon = 1e-15);
            assert_abs_diff_eq!(g[(i + 4, i + 4)], 1.0 / (1.0 + t * t), epsilon = 1e-15);
        }
        assert!(g.asymmetry() < 1e-15);
    }
}
