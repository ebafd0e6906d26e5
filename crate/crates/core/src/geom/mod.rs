//! Chart-based Riemannian geometry: metrics, Levi-Civita connection and
//! curvature, all differentiated exactly through nested dual numbers.
//!
//! Curvature convention, used throughout the crate:
//! `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z` and
//! `R(X,Y,Z,W) = g(R(X,Y)Z, W)`, so the unit sphere has
//! `R(X,Y,Y,X) = +1` on orthonormal `X, Y`.

mod charts;
mod connection;
mod frame;
mod metric;

use serde::{Deserialize, Serialize};

pub use charts::{builtin_chart, builtin_chart_names};
pub use connection::{
    christoffel, covariant_derivative, directional_derivative, AffineField, Christoffel,
    ConstantField, RiemannTensor, VectorField,
};
pub use frame::{pivoted_gram_schmidt, OrthonormalFrame};
pub use metric::MetricExpr;

use crate::autodiff::Scalar;
use crate::error::{GeomError, GeomResult};
use crate::linalg::Mat;
use crate::tolerances;

/// A point given by its coordinates in some chart.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: impl Into<Vec<f64>>) -> Self {
        Self(coords.into())
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// A tangent vector in the coordinate basis of its base point's chart.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub base: Point,
    pub components: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: Point, components: impl Into<Vec<f64>>) -> Self {
        Self { base, components: components.into() }
    }

    /// The `i`-th coordinate basis vector `∂_i` at `base`.
    pub fn coordinate(base: &Point, i: usize) -> Self {
        let mut c = vec![0.0; base.dim()];
        c[i] = 1.0;
        Self { base: base.clone(), components: c }
    }
}

/// Region of coordinate space where a chart is valid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Everywhere,
    /// Closed coordinate box.
    Box { ranges: Vec<(f64, f64)> },
    /// `lo < x[axis] < hi`.
    Slab { axis: usize, lo: f64, hi: f64 },
    /// `x₁² + x₂² > 0`.
    OffAxis,
    /// `x ≠ 0`.
    Punctured,
    /// `lo ≤ |(x_a)_{a ∈ axes}| ≤ hi`.
    Shell { axes: Vec<usize>, lo: f64, hi: f64 },
    /// Intersection.
    All { parts: Vec<Domain> },
}

impl Domain {
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            Self::Everywhere => true,
            Self::Box { ranges } => {
                ranges.len() == x.len()
                    && ranges.iter().zip(x).all(|(&(lo, hi), &v)| lo <= v && v <= hi)
            }
            Self::Slab { axis, lo, hi } => x.get(*axis).is_some_and(|&v| *lo < v && v < *hi),
            Self::OffAxis => x.len() >= 2 && x[0] * x[0] + x[1] * x[1] > 1e-24,
            Self::Punctured => x.iter().map(|v| v * v).sum::<f64>() > 1e-24,
            Self::Shell { axes, lo, hi } => {
                axes.iter().all(|&a| a < x.len()) && {
                    let rho = axes.iter().map(|&a| x[a] * x[a]).sum::<f64>().sqrt();
                    *lo <= rho && rho <= *hi
                }
            }
            Self::All { parts } => parts.iter().all(|d| d.contains(x)),
        }
    }
}

/// A coordinate chart carrying a smooth metric field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricChart {
    pub name: String,
    pub metric: MetricExpr,
    pub domain: Domain,
}

impl MetricChart {
    pub fn new(name: impl Into<String>, metric: MetricExpr, domain: Domain) -> Self {
        Self { name: name.into(), metric, domain }
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// Same chart with the metric multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            name: format!("{}*{factor}", self.name),
            metric: MetricExpr::Scaled { factor, inner: Box::new(self.metric.clone()) },
            domain: self.domain.clone(),
        }
    }

    pub fn check_point(&self, p: &[f64]) -> GeomResult<()> {
        if p.len() != self.dim() {
            return Err(GeomError::DimensionMismatch { expected: self.dim(), got: p.len() });
        }
        if !self.domain.contains(p) {
            return Err(GeomError::OutOfDomain { chart: self.name.clone(), coords: p.to_vec() });
        }
        Ok(())
    }

    fn check_vector(&self, v: &TangentVector, p: &Point) -> GeomResult<()> {
        if v.components.len() != self.dim() {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim(),
                got: v.components.len(),
            });
        }
        if v.base != *p {
            return Err(GeomError::Precondition("tangent vectors must share the base point".into()));
        }
        Ok(())
    }

    /// Metric components at `p`, checked for symmetry and positive definiteness.
    pub fn metric_at(&self, p: &Point) -> GeomResult<Mat<f64>> {
        self.check_point(p.coords())?;
        let g: Mat<f64> = self.metric.eval(p.coords());
        if !g.is_finite_all() {
            return Err(GeomError::NonFinite { what: "metric" });
        }
        let min_eigenvalue = g.min_symmetric_eigenvalue();
        if min_eigenvalue <= tolerances::EPS_PD || g.asymmetry() > 1e-12 * g.max_abs().max(1.0) {
            return Err(GeomError::DegenerateMetric { chart: self.name.clone(), min_eigenvalue });
        }
        Ok(g)
    }

    /// Christoffel symbols `Γ^k_ij` at `p`.
    pub fn christoffel_at(&self, p: &Point) -> GeomResult<Christoffel<f64>> {
        self.metric_at(p)?;
        let gamma = christoffel(&self.metric, p.coords()).ok_or_else(|| {
            GeomError::DegenerateMetric { chart: self.name.clone(), min_eigenvalue: 0.0 }
        })?;
        if !gamma.is_finite_all() {
            return Err(GeomError::NonFinite { what: "Christoffel symbols" });
        }
        Ok(gamma)
    }

    /// `∇_X F` at the base point of `x`.
    pub fn covariant_derivative_at<F: VectorField>(
        &self,
        field: &F,
        x: &TangentVector,
    ) -> GeomResult<TangentVector> {
        self.check_vector(x, &x.base)?;
        self.christoffel_at(&x.base)?;
        let out = covariant_derivative(&self.metric, field, x.base.coords(), &x.components)
            .ok_or(GeomError::NonFinite { what: "covariant derivative" })?;
        if out.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::NonFinite { what: "covariant derivative" });
        }
        Ok(TangentVector::new(x.base.clone(), out))
    }

    /// Full all-lower Riemann tensor at `p`.
    pub fn curvature_at(&self, p: &Point) -> GeomResult<RiemannTensor> {
        self.metric_at(p)?;
        let r = RiemannTensor::compute(&self.metric, p.coords()).ok_or_else(|| {
            GeomError::DegenerateMetric { chart: self.name.clone(), min_eigenvalue: 0.0 }
        })?;
        if !r.is_finite() {
            return Err(GeomError::NonFinite { what: "Riemann tensor" });
        }
        Ok(r)
    }

    /// `R(X,Y,Z,W) = g(R(X,Y)Z, W)`.
    pub fn riemann_at(
        &self,
        p: &Point,
        x: &TangentVector,
        y: &TangentVector,
        z: &TangentVector,
        w: &TangentVector,
    ) -> GeomResult<f64> {
        for v in [x, y, z, w] {
            self.check_vector(v, p)?;
        }
        let r = self.curvature_at(p)?;
        Ok(r.eval(&x.components, &y.components, &z.components, &w.components))
    }

    /// Sectional curvature of `span{X, Y}`.
    pub fn sectional_at(&self, p: &Point, x: &TangentVector, y: &TangentVector) -> GeomResult<f64> {
        self.check_vector(x, p)?;
        self.check_vector(y, p)?;
        let g = self.metric_at(p)?;
        let r = self.curvature_at(p)?;
        sectional(&g, &r, &x.components, &y.components)
    }

    /// Metric Gram-Schmidt in input order; near-dependent vectors are dropped.
    pub fn gram_schmidt(&self, p: &Point, spanning: &[TangentVector]) -> GeomResult<OrthonormalFrame> {
        for v in spanning {
            self.check_vector(v, p)?;
        }
        let g = self.metric_at(p)?;
        let vectors: Vec<Vec<f64>> = spanning.iter().map(|v| v.components.clone()).collect();
        Ok(OrthonormalFrame::ordered(p.clone(), &g, &vectors))
    }
}

/// Sectional curvature from a precomputed metric and Riemann tensor.
pub fn sectional(g: &Mat<f64>, r: &RiemannTensor, x: &[f64], y: &[f64]) -> GeomResult<f64> {
    let gxx = g.bilinear(x, x);
    let gyy = g.bilinear(y, y);
    let gxy = g.bilinear(x, y);
    let gram = gxx * gyy - gxy * gxy;
    if gram < tolerances::EPS_PLANE {
        return Err(GeomError::DegeneratePlane { gram });
    }
    Ok(r.eval(x, y, y, x) / gram)
}

/// `g(u, v)` for a metric matrix.
pub fn inner<S: Scalar>(g: &Mat<S>, u: &[S], v: &[S]) -> S {
    g.bilinear(u, v)
}

/// `|v|_g`.
pub fn norm(g: &Mat<f64>, v: &[f64]) -> f64 {
    g.bilinear(v, v).max(0.0).sqrt()
}

/// A `g`-unit vector with components drawn uniformly from `[-1, 1]` before
/// normalisation.
/// `count` points drawn uniformly from `ranges`, keeping those `accept`
/// allows. Deterministic in `seed`; gives up after `1000·count` draws.
pub fn sample_in_box(
    name: &str,
    ranges: &[(f64, f64)],
    count: usize,
    seed: u64,
    accept: impl Fn(&[f64]) -> bool,
) -> GeomResult<Vec<Point>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..1000 * count.max(1) {
        if out.len() == count {
            break;
        }
        let x: Vec<f64> = ranges.iter().map(|&(lo, hi)| rand::Rng::gen_range(&mut rng, lo..=hi)).collect();
        if accept(&x) {
            out.push(Point::new(x));
        }
    }
    if out.len() < count {
        return Err(GeomError::Precondition(format!(
            "sampling box of `{name}` yielded only {} acceptable points",
            out.len()
        )));
    }
    Ok(out)
}

pub fn random_unit<R: rand::Rng + ?Sized>(g: &Mat<f64>, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..g.rows()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = norm(g, &v);
        if len > 1e-3 {
            return v.iter().map(|x| x / len).collect();
        }
    }
}

#[cfg(test)]
mod tests;
