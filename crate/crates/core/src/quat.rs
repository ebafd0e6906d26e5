//! Almost quaternionic Hermitian structures `{J₁, J₂, J₃}` on a chart,
//! their parallelism defect, and the curvature tensor of a quaternionic
//! space form.

use nalgebra::{Matrix3, Vector3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autodiff::{seed_axis, Dual, Scalar};
use crate::error::{GeomError, GeomResult};
use crate::geom::{builtin_chart, christoffel, random_unit, sectional, MetricChart, Point};
use crate::linalg::Mat;
use crate::quaternion::{block_diagonal, left_mul_matrix, right_mul_matrix, IMAGINARY_UNITS};
use crate::tolerances;

/// Closed-form triple fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TripleExpr {
    /// Left multiplication by `i, j, k` on each quaternion block of `Hᵐ`.
    Standard { m: usize },
    /// `v ↦ v·ū_α` on each block, the structure induced on the affine chart
    /// of quaternionic projective space.
    RightConjugate { m: usize },
    /// Standard triple with `J₂` overwritten by `J₁`. Violates the axioms.
    Broken { m: usize },
    /// `A J A⁻¹` with `A(x) = I + ½ sin(x₁) E₁₁`. Satisfies the quaternion
    /// relations but is not Hermitian for the flat metric.
    Skewed { m: usize },
    /// `Q J Qᵀ` with `Q(x)` a rotation in the `(e₁, e₅)` plane by
    /// `θ(x) = 0.7 sin x₂ + 0.4 x₃`. Hermitian but not parallel. Needs `m ≥ 2`.
    Rotated { m: usize },
}

impl TripleExpr {
    pub fn dim(&self) -> usize {
        match self {
            Self::Standard { m }
            | Self::RightConjugate { m }
            | Self::Broken { m }
            | Self::Skewed { m }
            | Self::Rotated { m } => 4 * m,
        }
    }

    pub fn eval<S: Scalar>(&self, x: &[S]) -> [Mat<S>; 3] {
        let standard = |m: usize| {
            IMAGINARY_UNITS.map(|u| block_diagonal(&left_mul_matrix(&u.map(S::cst)), m))
        };
        match self {
            Self::Standard { m } => standard(*m),
            Self::RightConjugate { m } => IMAGINARY_UNITS.map(|u| {
                let conj = [u[0], -u[1], -u[2], -u[3]].map(S::cst);
                block_diagonal(&right_mul_matrix(&conj), *m)
            }),
            Self::Broken { m } => {
                let [j1, _, j3] = standard(*m);
                [j1.clone(), j1, j3]
            }
            Self::Skewed { m } => {
                let n = 4 * m;
                let mut a = Mat::identity(n);
                a[(0, 0)] = S::one() + x[0].sin().scale(0.5);
                let a_inv = a.inverse().expect("1 + ½ sin is positive");
                standard(*m).map(|j| a.mul(&j).mul(&a_inv))
            }
            Self::Rotated { m } => {
                let n = 4 * m;
                let theta = x[1].sin().scale(0.7) + x[2].scale(0.4);
                let (c, s) = (theta.cos(), theta.sin());
                let mut q = Mat::identity(n);
                q[(0, 0)] = c;
                q[(0, 4)] = -s;
                q[(4, 0)] = s;
                q[(4, 4)] = c;
                let qt = q.transpose();
                standard(*m).map(|j| q.mul(&j).mul(&qt))
            }
        }
    }
}

/// A triple of endomorphism fields on a chart of dimension `4m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuaternionicTriple {
    pub name: String,
    pub chart: MetricChart,
    pub expr: TripleExpr,
}

impl QuaternionicTriple {
    pub fn new(name: impl Into<String>, chart: MetricChart, expr: TripleExpr) -> GeomResult<Self> {
        let dim = chart.dim();
        if dim % 4 != 0 {
            return Err(GeomError::Precondition(format!(
                "chart `{}` has dimension {dim}, not a multiple of 4",
                chart.name
            )));
        }
        if expr.dim() != dim {
            return Err(GeomError::DimensionMismatch { expected: dim, got: expr.dim() });
        }
        Ok(Self { name: name.into(), chart, expr })
    }

    /// `[J₁, J₂, J₃]` at `p`.
    pub fn at(&self, p: &Point) -> GeomResult<[Mat<f64>; 3]> {
        self.chart.check_point(p.coords())?;
        Ok(self.expr.eval(p.coords()))
    }
}

const TRIPLE_NAMES: &[&str] =
    &["standard_h1", "standard_h2", "hp2", "broken_h1", "twisted_h1", "twisted_h2"];

pub fn builtin_triple_names() -> &'static [&'static str] {
    TRIPLE_NAMES
}

/// Built-in triples. `twisted_h1` and `twisted_h2` fail the parallelism
/// condition; `broken_h1` fails the axioms.
pub fn builtin_triple(name: &str) -> Option<QuaternionicTriple> {
    let (chart, expr) = match name {
        "standard_h1" => ("euclidean4", TripleExpr::Standard { m: 1 }),
        "standard_h2" => ("euclidean8", TripleExpr::Standard { m: 2 }),
        "hp2" => ("hp2_chart", TripleExpr::RightConjugate { m: 2 }),
        "broken_h1" => ("euclidean4", TripleExpr::Broken { m: 1 }),
        "twisted_h1" => ("euclidean4", TripleExpr::Skewed { m: 1 }),
        "twisted_h2" => ("euclidean8", TripleExpr::Rotated { m: 2 }),
        _ => return None,
    };
    QuaternionicTriple::new(name, builtin_chart(chart)?, expr).ok()
}

/// Outcome of [`check_structure_axioms`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    /// Largest entry of `J_α² + I`, `J_αJ_{α+1} ∓ J_{α+2}`.
    pub algebra_defect: f64,
    /// Largest entry of `J_αᵀ g J_α − g`.
    pub hermitian_defect: f64,
    pub max_defect: f64,
    pub pass: bool,
}

/// Quaternion relations and the Hermitian condition at `p`.
pub fn check_structure_axioms(triple: &QuaternionicTriple, p: &Point) -> GeomResult<AxiomReport> {
    let js = triple.at(p)?;
    let g = triple.chart.metric_at(p)?;
    let n = g.rows();
    let id = Mat::identity(n);
    let mut algebra = 0.0_f64;
    let mut hermitian = 0.0_f64;
    for a in 0..3 {
        let (b, c) = ((a + 1) % 3, (a + 2) % 3);
        algebra = algebra.max(js[a].mul(&js[a]).add(&id).max_abs());
        algebra = algebra.max(js[a].mul(&js[b]).sub(&js[c]).max_abs());
        algebra = algebra.max(js[b].mul(&js[a]).add(&js[c]).max_abs());
        hermitian = hermitian.max(js[a].transpose().mul(&g).mul(&js[a]).sub(&g).max_abs());
    }
    let max_defect = algebra.max(hermitian);
    Ok(AxiomReport {
        algebra_defect: algebra,
        hermitian_defect: hermitian,
        max_defect,
        pass: max_defect < tolerances::STRUCTURE,
    })
}

/// Least-squares fit of `∇_X J_α = ω_{α+2}(X) J_{α+1} − ω_{α+1}(X) J_{α+2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KahlerFitReport {
    /// `omega[α][k] = ω_{α+1}(∂_k)`.
    pub omega: [Vec<f64>; 3],
    /// Frobenius norm of the part of `∇J` the fit cannot explain, summed
    /// over the coordinate directions.
    pub residual: f64,
}

/// `(∇_k J)^a_b = ∂_k J^a_b + Γ^a_kc J^c_b − J^a_c Γ^c_kb` for each `α`.
pub fn covariant_derivative_of_triple(
    triple: &QuaternionicTriple,
    p: &Point,
) -> GeomResult<Vec<[Mat<f64>; 3]>> {
    triple.chart.metric_at(p)?;
    let x = p.coords();
    let n = x.len();
    let js = triple.expr.eval(x);
    let gamma = christoffel(&triple.chart.metric, x).ok_or(GeomError::NonFinite { what: "Christoffel symbols" })?;
    Ok((0..n)
        .map(|k| {
            let dj = triple.expr.eval(&seed_axis(x, k)).map(|m| m.map(|d: Dual<f64>| d.eps));
            let gk = Mat::from_fn(n, n, |a, c| gamma.get(a, k, c));
            [0, 1, 2].map(|a| dj[a].add(&gk.mul(&js[a])).sub(&js[a].mul(&gk)))
        })
        .collect())
}

fn frobenius_inner(a: &Mat<f64>, b: &Mat<f64>) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            acc += a[(i, j)] * b[(i, j)];
        }
    }
    acc
}

/// Fits the 1-forms `ω_α` of the quaternionic Kähler condition direction by
/// direction. A hyperkähler triple gives `ω = 0` and zero residual.
pub fn check_parallelism(triple: &QuaternionicTriple, p: &Point) -> GeomResult<KahlerFitReport> {
    let js = triple.at(p)?;
    let nabla = covariant_derivative_of_triple(triple, p)?;
    let n = nabla.len();
    // Unknowns (ω₁, ω₂, ω₃)(∂_k). Column u of the design maps ω_u to its
    // contribution in the three equations.
    let zero = Mat::zeros(n, n);
    let design: [[Mat<f64>; 3]; 3] = [
        [zero.clone(), js[2].scaled(-1.0), js[1].clone()],
        [js[2].clone(), zero.clone(), js[0].scaled(-1.0)],
        [js[1].scaled(-1.0), js[0].clone(), zero],
    ];
    let mut omega = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut residual_sq = 0.0;
    for (k, dj) in nabla.iter().enumerate() {
        let mut normal = Matrix3::zeros();
        let mut rhs = Vector3::zeros();
        for u in 0..3 {
            for v in 0..3 {
                normal[(u, v)] = (0..3).map(|e| frobenius_inner(&design[e][u], &design[e][v])).sum();
            }
            rhs[u] = (0..3).map(|e| frobenius_inner(&design[e][u], &dj[e])).sum();
        }
        let w = normal.lu().solve(&rhs).unwrap_or_else(Vector3::zeros);
        for u in 0..3 {
            omega[u][k] = w[u];
        }
        for e in 0..3 {
            let mut fit = Mat::zeros(n, n);
            for u in 0..3 {
                fit = fit.add(&design[e][u].scaled(w[u]));
            }
            let f = dj[e].sub(&fit).frobenius();
            residual_sq += f * f;
        }
    }
    Ok(KahlerFitReport { omega, residual: residual_sq.sqrt() })
}

/// Constant quaternionic sectional curvature `c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceFormModel {
    pub c: f64,
}

/// The space-form curvature tensor paired with `W`:
///
/// ```text
/// c/4 { g(Y,Z)g(X,W) − g(X,Z)g(Y,W)
///       + Σ_α [ g(J_αY,Z)g(J_αX,W) − g(J_αX,Z)g(J_αY,W) + 2g(J_αY,X)g(J_αZ,W) ] }
/// ```
pub fn model_curvature(
    model: SpaceFormModel,
    g: &Mat<f64>,
    j: &[Mat<f64>; 3],
    x: &[f64],
    y: &[f64],
    z: &[f64],
    w: &[f64],
) -> f64 {
    if model.c == 0.0 {
        return 0.0;
    }
    let mut acc = g.bilinear(y, z) * g.bilinear(x, w) - g.bilinear(x, z) * g.bilinear(y, w);
    for ja in j {
        let (jx, jy, jz) = (ja.mul_vec(x), ja.mul_vec(y), ja.mul_vec(z));
        acc += g.bilinear(&jy, z) * g.bilinear(&jx, w) - g.bilinear(&jx, z) * g.bilinear(&jy, w)
            + 2.0 * g.bilinear(&jy, x) * g.bilinear(&jz, w);
    }
    model.c / 4.0 * acc
}

/// Statistics of quaternionic sectional curvatures over sampled planes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CEstimate {
    pub mean: f64,
    /// `max − min` over all sampled planes.
    pub spread: f64,
    pub samples: usize,
}

/// Samples `K(X, J_αX)` for `planes` random unit `X` and each `α` at every
/// point. A quaternionic space form has zero spread.
pub fn estimate_c(
    chart: &MetricChart,
    triple: &QuaternionicTriple,
    points: &[Point],
    planes: usize,
    seed: u64,
) -> GeomResult<CEstimate> {
    if chart.dim() % 4 != 0 {
        return Err(GeomError::Precondition(format!(
            "chart `{}` has dimension {}, not a multiple of 4",
            chart.name,
            chart.dim()
        )));
    }
    if triple.chart.dim() != chart.dim() {
        return Err(GeomError::DimensionMismatch { expected: chart.dim(), got: triple.chart.dim() });
    }
    if points.is_empty() || planes == 0 {
        return Err(GeomError::Precondition("at least one point and one plane are required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(points.len() * planes * 3);
    for p in points {
        let axioms = check_structure_axioms(triple, p)?;
        if !axioms.pass {
            return Err(GeomError::Precondition(format!(
                "structure axioms fail at {:?} (defect {:e})",
                p.coords(),
                axioms.max_defect
            )));
        }
        let g = chart.metric_at(p)?;
        let r = chart.curvature_at(p)?;
        let js = triple.at(p)?;
        for _ in 0..planes {
            let x = random_unit(&g, &mut rng);
            for ja in &js {
                values.push(sectional(&g, &r, &x, &ja.mul_vec(&x))?);
            }
        }
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    Ok(CEstimate { mean, spread: hi - lo, samples: values.len() })
}

#[cfg(test)]
mod tests;
