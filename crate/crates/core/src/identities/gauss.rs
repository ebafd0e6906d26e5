use crate::error::{GeomError, GeomResult};
use crate::geom::{Point, RiemannTensor};
use crate::linalg::{add, sub};
use crate::submersion::{assemble_sample, OneillContext, OneillSample, SubmersionScenario};
use crate::tolerances;

use super::intrinsic::{hat_curvature_intrinsic, star_curvature_lift};

/// Everything the identity checks need at one point: the assembled sample,
/// the evaluation context, the ambient curvature and the O'Neill tensors
/// applied to frame vectors.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    pub ctx: OneillContext,
    pub sample: OneillSample,
    pub riemann: RiemannTensor,
    /// `t_uu[i][j] = 𝒯_{U_i} U_j`.
    pub t_uu: Vec<Vec<Vec<f64>>>,
    /// `a_xx[i][j] = 𝒜_{X_i} X_j`.
    pub a_xx: Vec<Vec<Vec<f64>>>,
    /// `t_ux[k][i] = 𝒯_{U_k} X_i`.
    pub t_ux: Vec<Vec<Vec<f64>>>,
    /// `a_xu[i][k] = 𝒜_{X_i} U_k`.
    pub a_xu: Vec<Vec<Vec<f64>>>,
}

impl PointGeometry {
    pub fn new(s: &SubmersionScenario, p: &Point) -> GeomResult<Self> {
        let sample = assemble_sample(s, p)?;
        let ctx = OneillContext::new(s, p.coords())?;
        let riemann = s.total.curvature_at(p)?;
        let us = &sample.frames.vertical.vectors;
        let xs = &sample.frames.horizontal.vectors;
        let pairs = |outer: &[Vec<f64>], inner: &[Vec<f64>], f: &dyn Fn(&[f64], &[f64]) -> Vec<f64>| {
            outer.iter().map(|e| inner.iter().map(|w| f(e, w)).collect()).collect()
        };
        let t_uu = pairs(us, us, &|e, w| ctx.t(e, w));
        let a_xx = pairs(xs, xs, &|e, w| ctx.a(e, w));
        let t_ux = pairs(us, xs, &|e, w| ctx.t(e, w));
        let a_xu = pairs(xs, us, &|e, w| ctx.a(e, w));
        Ok(Self { ctx, sample, riemann, t_uu, a_xx, t_ux, a_xu })
    }

    pub fn r(&self) -> usize {
        self.sample.r()
    }

    pub fn ell(&self) -> usize {
        self.sample.ell()
    }

    pub fn us(&self) -> &[Vec<f64>] {
        &self.sample.frames.vertical.vectors
    }

    pub fn xs(&self) -> &[Vec<f64>] {
        &self.sample.frames.horizontal.vectors
    }

    fn g(&self, u: &[f64], v: &[f64]) -> f64 {
        self.ctx.inner(u, v)
    }

    /// `R̂(U_i,U_j,U_k,U_l)` with ambient curvature replaced by `ambient`.
    pub fn hat_with(&self, ambient: f64, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let t = &self.t_uu;
        ambient - self.g(&t[i][k], &t[j][l]) + self.g(&t[j][k], &t[i][l])
    }

    /// `R*(X_i,X_j,X_k,X_l)` with ambient curvature replaced by `ambient`.
    pub fn star_with(&self, ambient: f64, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let a = &self.a_xx;
        ambient - 2.0 * self.g(&a[i][j], &a[k][l]) + self.g(&a[j][k], &a[i][l])
            - self.g(&a[i][k], &a[j][l])
    }

    pub fn ambient(&self, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
        self.riemann.eval(x, y, z, w)
    }

    /// `R̂(U,V,W,F)` for arbitrary vertical vectors.
    pub fn hat_vectors(&self, u: &[f64], v: &[f64], w: &[f64], f: &[f64]) -> f64 {
        let c = &self.ctx;
        self.ambient(u, v, w, f) - self.g(&c.t(u, w), &c.t(v, f)) + self.g(&c.t(v, w), &c.t(u, f))
    }

    /// `R*(X,Y,Z,H)` for arbitrary horizontal vectors.
    pub fn star_vectors(&self, x: &[f64], y: &[f64], z: &[f64], h: &[f64]) -> f64 {
        let c = &self.ctx;
        self.ambient(x, y, z, h) - 2.0 * self.g(&c.a(x, y), &c.a(z, h)) + self.g(&c.a(y, z), &c.a(x, h))
            - self.g(&c.a(x, z), &c.a(y, h))
    }
}

fn check_indices(len: usize, idx: [usize; 4], what: &str) -> GeomResult<()> {
    if idx.iter().any(|&i| i >= len) {
        return Err(GeomError::Precondition(format!("{what} index out of range 0..{len}: {idx:?}")));
    }
    Ok(())
}

/// `R̂(U_i,U_j,U_k,U_l) = R(U_i,U_j,U_k,U_l) − g(𝒯_{U_i}U_k, 𝒯_{U_j}U_l) + g(𝒯_{U_j}U_k, 𝒯_{U_i}U_l)`.
pub fn hat_curvature_at(geo: &PointGeometry, i: usize, j: usize, k: usize, l: usize) -> GeomResult<f64> {
    check_indices(geo.r(), [i, j, k, l], "vertical")?;
    let u = geo.us();
    Ok(geo.hat_with(geo.ambient(&u[i], &u[j], &u[k], &u[l]), i, j, k, l))
}

/// `R*(X_i,X_j,X_k,X_l) = R(…) − 2g(𝒜_{X_i}X_j, 𝒜_{X_k}X_l) + g(𝒜_{X_j}X_k, 𝒜_{X_i}X_l) − g(𝒜_{X_i}X_k, 𝒜_{X_j}X_l)`.
pub fn star_curvature_at(geo: &PointGeometry, i: usize, j: usize, k: usize, l: usize) -> GeomResult<f64> {
    check_indices(geo.ell(), [i, j, k, l], "horizontal")?;
    let x = geo.xs();
    Ok(geo.star_with(geo.ambient(&x[i], &x[j], &x[k], &x[l]), i, j, k, l))
}

fn max_over_tuples(m: usize, mut f: impl FnMut(usize, usize, usize, usize) -> GeomResult<f64>) -> GeomResult<f64> {
    let mut worst = 0.0_f64;
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let v = f(i, j, k, l)?;
                    worst = if v.is_nan() { f64::INFINITY } else { worst.max(v) };
                }
            }
        }
    }
    Ok(worst)
}

/// Largest gap between the rearranged ambient formula for `R̂` and the
/// intrinsic curvature of the fibers.
pub fn gauss_vertical_residual(s: &SubmersionScenario, geo: &PointGeometry) -> GeomResult<f64> {
    let intrinsic = hat_curvature_intrinsic(s, &geo.ctx, geo.us())?;
    max_over_tuples(geo.r(), |i, j, k, l| Ok((hat_curvature_at(geo, i, j, k, l)? - intrinsic[i][j][k][l]).abs()))
}

/// Largest gap between the rearranged ambient formula for `R*` and the
/// curvature of `ℋ∇` corrected by the `𝒜` bracket term.
pub fn horizontal_residual(s: &SubmersionScenario, geo: &PointGeometry) -> GeomResult<f64> {
    let lift = star_curvature_lift(s, &geo.ctx, geo.xs(), &geo.a_xx)?;
    max_over_tuples(geo.ell(), |i, j, k, l| Ok((star_curvature_at(geo, i, j, k, l)? - lift[i][j][k][l]).abs()))
}

/// Largest gap between `R*` on the horizontal frame and the base-chart
/// curvature on the pushed-forward frame.
pub fn base_projection_residual(s: &SubmersionScenario, geo: &PointGeometry) -> GeomResult<f64> {
    let y = Point::new(s.map.eval(&geo.ctx.x));
    let base = s.base.curvature_at(&y)?;
    let pushed: Vec<Vec<f64>> = geo.xs().iter().map(|x| geo.ctx.jacobian.mul_vec(x)).collect();
    max_over_tuples(geo.ell(), |i, j, k, l| {
        let r_base = base.eval(&pushed[i], &pushed[j], &pushed[k], &pushed[l]);
        Ok((star_curvature_at(geo, i, j, k, l)? - r_base).abs())
    })
}

/// Contexts at `x + t·dir` for `t = h, −h, 2h, −2h`.
fn shifted_contexts(s: &SubmersionScenario, x: &[f64], dir: &[f64]) -> GeomResult<Vec<OneillContext>> {
    let h = tolerances::H_FIELD;
    [h, -h, 2.0 * h, -2.0 * h]
        .iter()
        .map(|&t| {
            let y: Vec<f64> = x.iter().zip(dir).map(|(a, d)| a + t * d).collect();
            OneillContext::new(s, &y)
        })
        .collect()
}

type TensorOp = fn(&OneillContext, &[f64], &[f64]) -> Vec<f64>;

/// `(∇_E 𝒦)(F, G)` for `𝒦 = 𝒯` or `𝒜`, with the ordinary derivative of the
/// component field taken by a fourth-order central stencil.
fn tensor_derivative(
    base: &OneillContext,
    shifted: &[OneillContext],
    op: TensorOp,
    e: &[f64],
    f: &[f64],
    g: &[f64],
) -> Vec<f64> {
    let h = tolerances::H_FIELD;
    let v: Vec<Vec<f64>> = shifted.iter().map(|c| op(c, f, g)).collect();
    let d: Vec<f64> = (0..f.len())
        .map(|i| (8.0 * (v[0][i] - v[1][i]) - (v[2][i] - v[3][i])) / (12.0 * h))
        .collect();
    let gamma = &base.gamma;
    let leibniz = add(&op(base, &gamma.contract(e, f), g), &op(base, f, &gamma.contract(e, g)));
    sub(&add(&d, &gamma.contract(e, &op(base, f, g))), &leibniz)
}

/// Largest defect of the mixed Codazzi identity
/// `R(X,V,Y,W) = −g((∇_X𝒯)(V,W), Y) − g((∇_V𝒜)(X,Y), W) + g(𝒯_V X, 𝒯_W Y) − g(𝒜_X V, 𝒜_Y W)`
/// over frame tuples.
pub fn mixed_codazzi_residual(s: &SubmersionScenario, geo: &PointGeometry) -> GeomResult<f64> {
    let ctx = &geo.ctx;
    let (us, xs) = (geo.us(), geo.xs());
    let t_op: TensorOp = |c, f, g| c.t(f, g);
    let a_op: TensorOp = |c, f, g| c.a(f, g);
    let along_x = xs.iter().map(|x| shifted_contexts(s, &ctx.x, x)).collect::<GeomResult<Vec<_>>>()?;
    let along_u = us.iter().map(|u| shifted_contexts(s, &ctx.x, u)).collect::<GeomResult<Vec<_>>>()?;
    let mut worst = 0.0_f64;
    for (i, x) in xs.iter().enumerate() {
        for (a, v) in us.iter().enumerate() {
            for (j, y) in xs.iter().enumerate() {
                let da = tensor_derivative(ctx, &along_u[a], a_op, v, x, y);
                for (b, w) in us.iter().enumerate() {
                    let dt = tensor_derivative(ctx, &along_x[i], t_op, x, v, w);
                    let rhs = -ctx.inner(&dt, y) - ctx.inner(&da, w)
                        + ctx.inner(&geo.t_ux[a][i], &geo.t_ux[b][j])
                        - ctx.inner(&geo.a_xu[i][a], &geo.a_xu[j][b]);
                    let lhs = geo.ambient(x, v, y, w);
                    let defect = (lhs - rhs).abs();
                    worst = if defect.is_nan() { f64::INFINITY } else { worst.max(defect) };
                }
            }
        }
    }
    Ok(worst)
}
