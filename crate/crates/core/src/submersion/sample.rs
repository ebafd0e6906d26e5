use serde::{Deserialize, Serialize};

use crate::error::GeomResult;
use crate::geom::Point;
use crate::linalg::{add, scale, Mat};
use crate::tolerances;

use super::{OneillContext, SplitFrames, SubmersionScenario};

/// Squared norms of the four blocks of `𝒯` and `𝒜`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FiberNorms {
    /// `Σ_{i,k} |𝒯_{U_k} X_i|²`.
    pub t_v: f64,
    /// `Σ_{j,k} |𝒯_{U_j} U_k|²`.
    pub t_h: f64,
    /// `Σ_{i,j} |𝒜_{X_i} X_j|²`.
    pub a_v: f64,
    /// `Σ_{i,k} |𝒜_{X_i} U_k|²`.
    pub a_h: f64,
}

/// Three-index table stored as nested vectors.
pub type Table3 = Vec<Vec<Vec<f64>>>;

/// Pointwise submersion geometry in the sample's frames.
#[derive(Clone, Debug)]
pub struct OneillSample {
    pub point: Point,
    pub frames: SplitFrames,
    /// `t[i][j][s] = g(𝒯_{U_i} U_j, X_s)`.
    pub t: Table3,
    /// `a[i][j][β] = g(𝒜_{X_i} X_j, U_β)`.
    pub a: Table3,
    /// `t_vert[k][i][j] = g(𝒯_{U_k} X_i, U_j)`.
    pub t_vert: Table3,
    /// `a_horiz[i][k][s] = g(𝒜_{X_i} U_k, X_s)`.
    pub a_horiz: Table3,
    /// `N = Σ_j 𝒯_{U_j} U_j`.
    pub n: Vec<f64>,
    /// `H = N / r`.
    pub h_mean: Vec<f64>,
    /// `|H|²`.
    pub mean_curvature_sq: f64,
    /// `δ(N) = Σ_i g(∇_{X_i} N, X_i)`.
    pub delta_n: f64,
    /// `b[α][i][k] = g(J_α X_i, U_k)`, when the scenario has a triple.
    pub b: Option<[Vec<Vec<f64>>; 3]>,
    /// `c[α][i][j] = g(J_α X_i, X_j)`, when the scenario has a triple.
    pub c: Option<[Vec<Vec<f64>>; 3]>,
    pub norms: FiberNorms,
}

impl OneillSample {
    pub fn r(&self) -> usize {
        self.frames.vertical.len()
    }

    pub fn ell(&self) -> usize {
        self.frames.horizontal.len()
    }

    pub fn u(&self, i: usize) -> &[f64] {
        &self.frames.vertical.vectors[i]
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.frames.horizontal.vectors[i]
    }

    /// `g(𝒯_{U_i} U_j, 𝒯_{U_k} U_l)`.
    pub fn tt(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        dot(&self.t[i][j], &self.t[k][l])
    }

    /// `g(𝒜_{X_i} X_j, 𝒜_{X_k} X_l)`.
    pub fn aa(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        dot(&self.a[i][j], &self.a[k][l])
    }

    /// `r²|H|² = Σ_s (Σ_i 𝒯_ii^s)²`.
    pub fn r2_h2(&self) -> f64 {
        let r = self.r() as f64;
        r * r * self.mean_curvature_sq
    }
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn coefficients(ctx: &OneillContext, v: &[f64], frame: &[Vec<f64>]) -> Vec<f64> {
    frame.iter().map(|e| ctx.inner(v, e)).collect()
}

/// Fourth-order central difference of `f` at 0 with step `h`.
pub fn central_derivative<F>(f: F, h: f64) -> GeomResult<Vec<f64>>
where
    F: Fn(f64) -> GeomResult<Vec<f64>>,
{
    let (p1, m1, p2, m2) = (f(h)?, f(-h)?, f(2.0 * h)?, f(-2.0 * h)?);
    Ok((0..p1.len())
        .map(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h))
        .collect())
}

/// `N(x) = Σ_j 𝒯_{U_j} U_j`, independent of the vertical frame.
pub fn mean_curvature_field(s: &SubmersionScenario, x: &[f64]) -> GeomResult<Vec<f64>> {
    let ctx = OneillContext::new(s, x)?;
    let frames = ctx.split(s)?;
    let mut n = vec![0.0; x.len()];
    for u in &frames.vertical.vectors {
        n = add(&n, &ctx.t(u, u));
    }
    Ok(n)
}

fn shifted(x: &[f64], dir: &[f64], t: f64) -> Vec<f64> {
    x.iter().zip(dir).map(|(a, d)| a + t * d).collect()
}

/// Fills every table, `N`, `H`, `δ(N)`, the B/C tables and the norms at `p`.
pub fn assemble_sample(s: &SubmersionScenario, p: &Point) -> GeomResult<OneillSample> {
    let x = p.coords();
    let ctx = OneillContext::new(s, x)?;
    let frames = ctx.split(s)?;
    let us = &frames.vertical.vectors;
    let xs = &frames.horizontal.vectors;
    let (r, ell) = (us.len(), xs.len());

    let t: Table3 = us.iter().map(|ui| us.iter().map(|uj| coefficients(&ctx, &ctx.t(ui, uj), xs)).collect()).collect();
    let a: Table3 = xs.iter().map(|xi| xs.iter().map(|xj| coefficients(&ctx, &ctx.a(xi, xj), us)).collect()).collect();
    let t_vert: Table3 = us.iter().map(|uk| xs.iter().map(|xi| coefficients(&ctx, &ctx.t(uk, xi), us)).collect()).collect();
    let a_horiz: Table3 = xs.iter().map(|xi| us.iter().map(|uk| coefficients(&ctx, &ctx.a(xi, uk), xs)).collect()).collect();

    let sq = |tab: &Table3| tab.iter().flatten().flatten().map(|v| v * v).sum::<f64>();
    let norms = FiberNorms { t_v: sq(&t_vert), t_h: sq(&t), a_v: sq(&a), a_h: sq(&a_horiz) };

    let mut n = vec![0.0; x.len()];
    for u in us {
        n = add(&n, &ctx.t(u, u));
    }
    let h_mean = scale(1.0 / r as f64, &n);
    let mean_curvature_sq = ctx.inner(&h_mean, &h_mean);

    let mut delta_n = 0.0;
    for xi in xs {
        let dn = central_derivative(|t| mean_curvature_field(s, &shifted(x, xi, t)), tolerances::H_FIELD)?;
        let nabla = add(&dn, &ctx.gamma.contract(xi, &n));
        delta_n += ctx.inner(&nabla, xi);
    }

    let (b, c) = match s.triple.as_ref() {
        Some(_) => {
            let js = s.quaternionic_triple()?.at(p)?;
            let table = |ja: &Mat<f64>, frame: &[Vec<f64>]| -> Vec<Vec<f64>> {
                xs.iter().map(|xi| coefficients(&ctx, &ja.mul_vec(xi), frame)).collect()
            };
            (
                Some([0, 1, 2].map(|al| table(&js[al], us))),
                Some([0, 1, 2].map(|al| table(&js[al], xs))),
            )
        }
        None => (None, None),
    };
    debug_assert_eq!(t.len(), r);
    debug_assert_eq!(a.len(), ell);

    Ok(OneillSample {
        point: p.clone(),
        frames,
        t,
        a,
        t_vert,
        a_horiz,
        n,
        h_mean,
        mean_curvature_sq,
        delta_n,
        b,
        c,
        norms,
    })
}

/// Structural flags read off a sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberFlags {
    pub totally_geodesic: bool,
    pub umbilical: bool,
    pub horizontal_integrable: bool,
}

fn max_abs(tab: &Table3) -> f64 {
    tab.iter().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

/// Totally geodesic (`𝒯 = 0`), umbilical (`𝒯(U,V) = g(U,V)H`) and
/// integrable-horizontal (`𝒜 = 0`) tests at `τ_flag`.
pub fn classify_fibers(sample: &OneillSample) -> FiberFlags {
    let tau = tolerances::TAU_FLAG;
    // g(H, X_s) = (1/r) Σ_k 𝒯_kk^s
    let r = sample.r() as f64;
    let mut umbilic_defect = 0.0_f64;
    for (i, row) in sample.t.iter().enumerate() {
        for (j, col) in row.iter().enumerate() {
            for (s_idx, &v) in col.iter().enumerate() {
                let trace_s: f64 = (0..sample.r()).map(|k| sample.t[k][k][s_idx]).sum();
                let expected = if i == j { trace_s / r } else { 0.0 };
                umbilic_defect = umbilic_defect.max((v - expected).abs());
            }
        }
    }
    FiberFlags {
        totally_geodesic: max_abs(&sample.t) < tau,
        umbilical: umbilic_defect < tau,
        horizontal_integrable: max_abs(&sample.a) < tau,
    }
}
