//! Random anti-invariant frame data on `R^{4m}` with the standard
//! quaternionic structure, used to check the space-form summation formulas
//! for `c ≠ 0`, where no explicit submersion is available.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{axpy, dot, Mat};
use crate::quat::{model_curvature, SpaceFormModel, TripleExpr};

/// An orthonormal splitting `R^{4m} = V ⊕ H` with `J_α V ⊥ V`.
#[derive(Clone, Debug)]
pub struct AntiInvariantFrame {
    pub g: Mat<f64>,
    pub js: [Mat<f64>; 3],
    /// Orthonormal basis of `V`.
    pub us: Vec<Vec<f64>>,
    /// Orthonormal basis of `H = V^⊥`.
    pub xs: Vec<Vec<f64>>,
}

fn random_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// Removes the components along the orthonormal vectors `basis` and
/// normalizes. `None` when the remainder is too short.
fn orthonormalize(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    for _ in 0..2 {
        for b in basis {
            let k = dot(&v, b);
            axpy(-k, b, &mut v);
        }
    }
    let len = dot(&v, &v).sqrt();
    (len > 1e-6).then(|| v.into_iter().map(|x| x / len).collect())
}

impl AntiInvariantFrame {
    /// Random frame with `r = dim V ≤ m`.
    pub fn random<R: Rng>(m: usize, r: usize, rng: &mut R) -> Self {
        assert!(r >= 1 && r <= m, "need 1 ≤ r ≤ m");
        let n = 4 * m;
        let js = TripleExpr::Standard { m }.eval(&vec![0.0; n]);
        // Quaternionic Gram-Schmidt: each new vector is orthogonal to the
        // quaternionic lines of the previous ones.
        let mut lines: Vec<Vec<f64>> = Vec::new();
        let mut seeds: Vec<Vec<f64>> = Vec::new();
        while seeds.len() < r {
            if let Some(e) = orthonormalize(random_vector(n, rng), &lines) {
                lines.push(e.clone());
                for ja in &js {
                    lines.push(ja.mul_vec(&e));
                }
                seeds.push(e);
            }
        }
        // A random rotation inside V.
        let mut us: Vec<Vec<f64>> = Vec::new();
        while us.len() < r {
            let mut v = vec![0.0; n];
            for e in &seeds {
                axpy(rng.gen_range(-1.0..=1.0), e, &mut v);
            }
            if let Some(u) = orthonormalize(v, &us) {
                us.push(u);
            }
        }
        let mut basis = us.clone();
        let mut xs = Vec::new();
        while xs.len() < n - r {
            if let Some(x) = orthonormalize(random_vector(n, rng), &basis) {
                basis.push(x.clone());
                xs.push(x);
            }
        }
        Self { g: Mat::identity(n), js, us, xs }
    }

    pub fn dim(&self) -> usize {
        self.g.rows()
    }

    /// `max |g(J_α U_i, U_j)|`.
    pub fn anti_invariance_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for ja in &self.js {
            for u in &self.us {
                let ju = ja.mul_vec(u);
                for w in &self.us {
                    worst = worst.max(dot(&ju, w).abs());
                }
            }
        }
        worst
    }

    fn sectional_sum(&self, c: f64, frame: &[Vec<f64>], from: usize) -> f64 {
        let model = SpaceFormModel { c };
        let mut acc = 0.0;
        for i in from..frame.len() {
            for j in (i + 1)..frame.len() {
                acc += model_curvature(model, &self.g, &self.js, &frame[i], &frame[j], &frame[j], &frame[i]);
            }
        }
        acc
    }

    /// `|Σ_{2≤i<j≤r} R(U_i,U_j,U_j,U_i) − (c/8)(r−1)(r−2)|`.
    pub fn vertical_block_residual(&self, c: f64) -> f64 {
        let r = self.us.len() as f64;
        (self.sectional_sum(c, &self.us, 1) - c / 8.0 * (r - 1.0) * (r - 2.0)).abs()
    }

    /// `|Σ_{2≤i<j≤ℓ} R(X_i,X_j,X_j,X_i) − c/4((ℓ−1)(ℓ−2)/2 + 3 Σ_{2≤i<j≤ℓ} Σ_α g(C_αX_i,X_j)²)|`
    /// over the first `ell` horizontal vectors.
    pub fn horizontal_block_residual(&self, c: f64, ell: usize) -> f64 {
        let xs = &self.xs[..ell];
        let mut quaternionic = 0.0;
        for i in 1..ell {
            for j in (i + 1)..ell {
                for ja in &self.js {
                    // C_α X_i differs from J_α X_i by a vertical vector.
                    quaternionic += dot(&ja.mul_vec(&xs[i]), &xs[j]).powi(2);
                }
            }
        }
        let l = ell as f64;
        let formula = c / 4.0 * ((l - 1.0) * (l - 2.0) / 2.0 + 3.0 * quaternionic);
        (self.sectional_sum(c, xs, 1) - formula).abs()
    }

    /// `|τ − c/4[(ℓ+r)(ℓ+r−1) + 3Σ_αΣ_i(|C_αX_i|² + 2|B_αX_i|²)]|` with `τ`
    /// the full frame sum of the model curvature.
    pub fn tau_residual(&self, c: f64) -> f64 {
        let model = SpaceFormModel { c };
        let frame: Vec<&Vec<f64>> = self.us.iter().chain(&self.xs).collect();
        let mut tau = 0.0;
        for a in &frame {
            for b in &frame {
                tau += model_curvature(model, &self.g, &self.js, a, b, b, a);
            }
        }
        let mut quaternionic = 0.0;
        for ja in &self.js {
            for x in &self.xs {
                let jx = ja.mul_vec(x);
                let c_sq: f64 = self.xs.iter().map(|y| dot(&jx, y).powi(2)).sum();
                let b_sq: f64 = self.us.iter().map(|u| dot(&jx, u).powi(2)).sum();
                quaternionic += c_sq + 2.0 * b_sq;
            }
        }
        let n = self.dim() as f64;
        (tau - c / 4.0 * (n * (n - 1.0) + 3.0 * quaternionic)).abs()
    }
}

/// One synthetic configuration.
#[derive(Clone, Debug)]
pub struct SyntheticCase {
    pub c: f64,
    pub r: usize,
    pub ell: usize,
    pub frame: AntiInvariantFrame,
}

/// `count` configurations cycling through `r, ℓ ∈ 1..=6` and `c ∈ {−4, 4}`.
/// The ambient dimension is `4m` with `m = max(r, ⌈(r+ℓ)/4⌉)`; `ℓ` counts
/// the horizontal vectors entering the block formula.
pub fn synthetic_cases(count: usize, seed: u64) -> Vec<SyntheticCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let r = 1 + k % 6;
            let ell = 1 + (k / 6) % 6;
            let c = if (k / 36) % 2 == 0 { 4.0 } else { -4.0 };
            let m = r.max((r + ell).div_ceil(4));
            SyntheticCase { c, r, ell, frame: AntiInvariantFrame::random(m, r, &mut rng) }
        })
        .collect()
}
