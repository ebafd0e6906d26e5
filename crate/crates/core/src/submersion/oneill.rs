use serde::{Deserialize, Serialize};

use crate::autodiff::{seed_axis, Dual, Scalar};
use crate::error::{GeomError, GeomResult};
use crate::geom::{
    christoffel, covariant_derivative, pivoted_gram_schmidt, Christoffel, OrthonormalFrame, Point,
    TangentVector, VectorField,
};
use crate::linalg::{add, sub, Mat};
use crate::tolerances;

use super::SubmersionScenario;

/// Vertical and horizontal frames at a point together with the projectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitFrames {
    /// `U₁, …, U_r` spanning `ker dπ`.
    pub vertical: OrthonormalFrame,
    /// `X₁, …, X_ℓ` spanning the orthogonal complement.
    pub horizontal: OrthonormalFrame,
    pub projector_v: Mat<f64>,
    pub projector_h: Mat<f64>,
    /// `max |g_N(dπX_i, dπX_j) − δ_ij|`.
    pub isometry_defect: f64,
}

/// Everything needed to evaluate `𝒯` and `𝒜` at one point: metric,
/// Christoffel symbols, the projector fields and their first derivatives.
#[derive(Clone, Debug)]
pub struct OneillContext {
    pub x: Vec<f64>,
    pub g: Mat<f64>,
    pub g_inv: Mat<f64>,
    pub gamma: Christoffel<f64>,
    pub jacobian: Mat<f64>,
    pub p_h: Mat<f64>,
    pub p_v: Mat<f64>,
    /// `∂_k P_H` for each coordinate axis `k`.
    dp_h: Vec<Mat<f64>>,
}

impl OneillContext {
    pub fn new(s: &SubmersionScenario, x: &[f64]) -> GeomResult<Self> {
        let p = Point::new(x.to_vec());
        let g = s.total.metric_at(&p)?;
        let fx = s.map.eval(x);
        s.base.check_point(&fx)?;
        let jacobian: Mat<f64> = s.map.jacobian(x);
        let sv = jacobian.singular_values();
        let top = sv.first().copied().unwrap_or(0.0).max(1.0);
        let rank = sv.iter().filter(|&&v| v > tolerances::RANK_SINGULAR * top).count();
        if rank < s.ell() {
            return Err(GeomError::RankDeficient { rank, expected: s.ell() });
        }
        let rank_err = || GeomError::RankDeficient { rank, expected: s.ell() };
        let g_inv = g.inverse().ok_or(GeomError::NonFinite { what: "inverse metric" })?;
        let gamma = christoffel(&s.total.metric, x).ok_or(GeomError::NonFinite { what: "Christoffel symbols" })?;
        let p_h = s.projector_h(x).ok_or_else(rank_err)?;
        let p_v = Mat::identity(x.len()).sub(&p_h);
        let mut dp_h = Vec::with_capacity(x.len());
        for k in 0..x.len() {
            let d = s.projector_h(&seed_axis(x, k)).ok_or_else(rank_err)?;
            dp_h.push(d.map(|v: Dual<f64>| v.eps));
        }
        let ctx = Self { x: x.to_vec(), g, g_inv, gamma, jacobian, p_h, p_v, dp_h };
        if !ctx.p_h.is_finite_all() || ctx.dp_h.iter().any(|m| !m.is_finite_all()) {
            return Err(GeomError::NonFinite { what: "projector field" });
        }
        Ok(ctx)
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn vertical(&self, v: &[f64]) -> Vec<f64> {
        self.p_v.mul_vec(v)
    }

    pub fn horizontal(&self, v: &[f64]) -> Vec<f64> {
        self.p_h.mul_vec(v)
    }

    fn dp_h_along(&self, dir: &[f64]) -> Mat<f64> {
        let n = self.dim();
        let mut out = Mat::zeros(n, n);
        for (k, &d) in dir.iter().enumerate() {
            if d != 0.0 {
                out = out.add(&self.dp_h[k].scaled(d));
            }
        }
        out
    }

    /// `∇_dir (P f)` where `f` has constant components and `P` is the
    /// vertical or horizontal projector field.
    pub fn nabla_projected(&self, vertical: bool, dir: &[f64], f: &[f64]) -> Vec<f64> {
        let dp = self.dp_h_along(dir).mul_vec(f);
        let (pf, dpf) = if vertical {
            (self.vertical(f), dp.iter().map(|v| -v).collect())
        } else {
            (self.horizontal(f), dp)
        };
        add(&dpf, &self.gamma.contract(dir, &pf))
    }

    fn configuration(&self, dir: &[f64], f: &[f64]) -> Vec<f64> {
        let from_v = self.horizontal(&self.nabla_projected(true, dir, f));
        let from_h = self.vertical(&self.nabla_projected(false, dir, f));
        add(&from_v, &from_h)
    }

    /// `𝒯_E F = ℋ∇_{𝒱E}𝒱F + 𝒱∇_{𝒱E}ℋF`.
    pub fn t(&self, e: &[f64], f: &[f64]) -> Vec<f64> {
        self.configuration(&self.vertical(e), f)
    }

    /// `𝒜_E F = ℋ∇_{ℋE}𝒱F + 𝒱∇_{ℋE}ℋF`.
    pub fn a(&self, e: &[f64], f: &[f64]) -> Vec<f64> {
        self.configuration(&self.horizontal(e), f)
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.g.bilinear(u, v)
    }

    /// Frames by pivoted Gram-Schmidt of the projected coordinate basis.
    pub fn split(&self, s: &SubmersionScenario) -> GeomResult<SplitFrames> {
        let n = self.dim();
        let columns = |m: &Mat<f64>| -> Vec<Vec<f64>> {
            (0..n).map(|j| (0..n).map(|i| m[(i, j)]).collect()).collect()
        };
        let base = Point::new(self.x.clone());
        let vertical = pivoted_gram_schmidt(&self.g, &columns(&self.p_v), s.r());
        let horizontal = pivoted_gram_schmidt(&self.g, &columns(&self.p_h), s.ell());
        if vertical.len() < s.r() || horizontal.len() < s.ell() {
            return Err(GeomError::RankDeficient { rank: horizontal.len(), expected: s.ell() });
        }
        let g_base = s.base.metric_at(&Point::new(s.map.eval(&self.x)))?;
        let pushed: Vec<Vec<f64>> = horizontal.iter().map(|v| self.jacobian.mul_vec(v)).collect();
        let mut isometry_defect = 0.0_f64;
        for (i, a) in pushed.iter().enumerate() {
            for (j, b) in pushed.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                isometry_defect = isometry_defect.max((g_base.bilinear(a, b) - target).abs());
            }
        }
        if isometry_defect > tolerances::ISOMETRY {
            return Err(GeomError::NotRiemannian { defect: isometry_defect });
        }
        Ok(SplitFrames {
            vertical: OrthonormalFrame { base: base.clone(), vectors: vertical },
            horizontal: OrthonormalFrame { base, vectors: horizontal },
            projector_v: self.p_v.clone(),
            projector_h: self.p_h.clone(),
            isometry_defect,
        })
    }
}

/// Splits `T_pM` into vertical and horizontal parts with orthonormal frames.
pub fn split_at(s: &SubmersionScenario, p: &Point) -> GeomResult<SplitFrames> {
    OneillContext::new(s, p.coords())?.split(s)
}

/// Largest `|g(J_α U_i, U_j)|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AntiInvarianceReport {
    pub defect: f64,
    pub pass: bool,
}

/// Checks `J_α(ker dπ) ⊂ (ker dπ)^⊥` on the vertical frame.
pub fn check_anti_invariant(
    s: &SubmersionScenario,
    p: &Point,
    frames: &SplitFrames,
) -> GeomResult<AntiInvarianceReport> {
    let triple = s.quaternionic_triple()?;
    let js = triple.at(p)?;
    let g = s.total.metric_at(p)?;
    let mut defect = 0.0_f64;
    for ja in &js {
        for u in &frames.vertical.vectors {
            let ju = ja.mul_vec(u);
            for w in &frames.vertical.vectors {
                defect = defect.max(g.bilinear(&ju, w).abs());
            }
        }
    }
    Ok(AntiInvarianceReport { defect, pass: defect < tolerances::STRUCTURE })
}

fn check_vectors(p: &Point, vs: &[&TangentVector]) -> GeomResult<()> {
    for v in vs {
        if v.components.len() != p.dim() {
            return Err(GeomError::DimensionMismatch { expected: p.dim(), got: v.components.len() });
        }
        if v.base != *p {
            return Err(GeomError::Precondition("tangent vectors must share the base point".into()));
        }
    }
    Ok(())
}

/// `𝒯_E F` at `p`.
pub fn oneill_t_at(
    s: &SubmersionScenario,
    p: &Point,
    e: &TangentVector,
    f: &TangentVector,
) -> GeomResult<TangentVector> {
    check_vectors(p, &[e, f])?;
    let ctx = OneillContext::new(s, p.coords())?;
    Ok(TangentVector::new(p.clone(), ctx.t(&e.components, &f.components)))
}

/// `𝒜_E F` at `p`.
pub fn oneill_a_at(
    s: &SubmersionScenario,
    p: &Point,
    e: &TangentVector,
    f: &TangentVector,
) -> GeomResult<TangentVector> {
    check_vectors(p, &[e, f])?;
    let ctx = OneillContext::new(s, p.coords())?;
    Ok(TangentVector::new(p.clone(), ctx.a(&e.components, &f.components)))
}

/// The field `x ↦ P(x) F(x)` for an arbitrary extension `F`.
pub struct Projected<'a, F> {
    pub scenario: &'a SubmersionScenario,
    pub vertical: bool,
    pub inner: F,
}

impl<F: VectorField> VectorField for Projected<'_, F> {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let f = self.inner.eval(x);
        match self.scenario.projector_h(x) {
            Some(ph) => {
                let hf = ph.mul_vec(&f);
                if self.vertical {
                    sub(&f, &hf)
                } else {
                    hf
                }
            }
            None => vec![S::cst(f64::NAN); x.len()],
        }
    }
}

/// `𝒯_E F` or `𝒜_E F` computed with a caller-chosen smooth extension of `F`,
/// differentiated directly through dual numbers. Used to confirm that the
/// result does not depend on the extension.
pub fn configuration_with_extension<F: VectorField + Copy>(
    s: &SubmersionScenario,
    p: &Point,
    e: &[f64],
    f: F,
    along_vertical: bool,
) -> GeomResult<Vec<f64>> {
    let ctx = OneillContext::new(s, p.coords())?;
    let dir = if along_vertical { ctx.vertical(e) } else { ctx.horizontal(e) };
    let x = p.coords();
    let nan = || GeomError::NonFinite { what: "covariant derivative" };
    let dv = covariant_derivative(&s.total.metric, &Projected { scenario: s, vertical: true, inner: f }, x, &dir)
        .ok_or_else(nan)?;
    let dh = covariant_derivative(&s.total.metric, &Projected { scenario: s, vertical: false, inner: f }, x, &dir)
        .ok_or_else(nan)?;
    Ok(add(&ctx.horizontal(&dv), &ctx.vertical(&dh)))
}
