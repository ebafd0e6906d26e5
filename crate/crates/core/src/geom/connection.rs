use crate::autodiff::{seed, seed_axis, tangents, Dual, Scalar};
use crate::linalg::Mat;

use super::MetricExpr;

/// A smooth vector field given in chart coordinates.
///
/// `eval` is generic so that the field can be pushed through dual numbers
/// for exact directional derivatives.
pub trait VectorField {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S>;
}

/// Field with constant coordinate components.
#[derive(Clone, Debug)]
pub struct ConstantField(pub Vec<f64>);

impl VectorField for ConstantField {
    fn eval<S: Scalar>(&self, _x: &[S]) -> Vec<S> {
        self.0.iter().map(|&c| S::cst(c)).collect()
    }
}

/// `F(x) = offset + A·x`.
#[derive(Clone, Debug)]
pub struct AffineField {
    pub offset: Vec<f64>,
    pub linear: Mat<f64>,
}

impl VectorField for AffineField {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let a: Mat<S> = Mat::from_f64(&self.linear);
        a.mul_vec(x).into_iter().zip(&self.offset).map(|(v, &o)| v + S::cst(o)).collect()
    }
}

impl<F: VectorField> VectorField for &F {
    fn eval<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        (*self).eval(x)
    }
}

/// Christoffel symbols `Γ^k_ij`, stored as `[k][i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> Christoffel<S> {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, k: usize, i: usize, j: usize) -> S {
        self.data[(k * self.n + i) * self.n + j]
    }

    /// `Γ(X, Y)^k = Γ^k_ij X^i Y^j`.
    pub fn contract(&self, x: &[S], y: &[S]) -> Vec<S> {
        let n = self.n;
        (0..n)
            .map(|k| {
                let mut acc = S::zero();
                for i in 0..n {
                    if x[i] == S::zero() {
                        continue;
                    }
                    let mut row = S::zero();
                    for j in 0..n {
                        row += self.get(k, i, j) * y[j];
                    }
                    acc += x[i] * row;
                }
                acc
            })
            .collect()
    }

    /// The matrix `(Γ_X)^k_j = Γ^k_ij X^i`.
    pub fn along(&self, x: &[S]) -> Mat<S> {
        let n = self.n;
        Mat::from_fn(n, n, |k, j| {
            let mut acc = S::zero();
            for i in 0..n {
                acc += self.get(k, i, j) * x[i];
            }
            acc
        })
    }

    pub fn is_finite_all(&self) -> bool {
        self.data.iter().all(Scalar::is_finite_all)
    }
}

/// Christoffel symbols of the Levi-Civita connection at `x`. `None` if the
/// metric is singular there.
pub fn christoffel<S: Scalar>(metric: &MetricExpr, x: &[S]) -> Option<Christoffel<S>> {
    let n = x.len();
    let g = metric.eval(x);
    let g_inv = g.inverse()?;
    // dg[l] = ∂_l g
    let dg: Vec<Mat<S>> = (0..n)
        .map(|l| metric.eval(&seed_axis(x, l)).map(|d: Dual<S>| d.eps))
        .collect();
    let mut lowered = vec![S::zero(); n * n * n];
    for l in 0..n {
        for i in 0..n {
            for j in 0..=i {
                let v = (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]).scale(0.5);
                lowered[(l * n + i) * n + j] = v;
                lowered[(l * n + j) * n + i] = v;
            }
        }
    }
    let mut data = vec![S::zero(); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in 0..=i {
                let mut acc = S::zero();
                for l in 0..n {
                    acc += g_inv[(k, l)] * lowered[(l * n + i) * n + j];
                }
                data[(k * n + i) * n + j] = acc;
                data[(k * n + j) * n + i] = acc;
            }
        }
    }
    Some(Christoffel { n, data })
}

/// `D F(x)[dir]`: the ordinary directional derivative of the components.
pub fn directional_derivative<S: Scalar, F: VectorField>(field: &F, x: &[S], dir: &[S]) -> Vec<S> {
    tangents(&field.eval(&seed(x, dir)))
}

/// `∇_X F` at `x` with `X = dir`.
pub fn covariant_derivative<S: Scalar, F: VectorField>(
    metric: &MetricExpr,
    field: &F,
    x: &[S],
    dir: &[S],
) -> Option<Vec<S>> {
    let gamma = christoffel(metric, x)?;
    let lifted = field.eval(&seed(x, dir));
    let value: Vec<S> = lifted.iter().map(|d| d.re).collect();
    let corr = gamma.contract(dir, &value);
    Some(lifted.iter().zip(corr).map(|(d, c)| d.eps + c).collect())
}

/// All-lower Riemann tensor `R_ijkl = R(∂_i, ∂_j, ∂_k, ∂_l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RiemannTensor {
    n: usize,
    data: Vec<f64>,
}

impl RiemannTensor {
    /// Evaluates the coordinate formula
    /// `R(∂_i,∂_j)∂_k = (∂_iΓ^l_jk − ∂_jΓ^l_ik + Γ^m_jk Γ^l_im − Γ^m_ik Γ^l_jm) ∂_l`
    /// with `∂Γ` from a second level of dual numbers.
    pub fn compute(metric: &MetricExpr, x: &[f64]) -> Option<Self> {
        let n = x.len();
        let g = metric.eval(x);
        let gamma = christoffel(metric, x)?;
        let mut dgamma = Vec::with_capacity(n);
        for m in 0..n {
            let gd = christoffel(metric, &seed_axis(x, m))?;
            dgamma.push(gd);
        }
        // op[l][k][i][j] = R^l_kij
        let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
        let mut op = vec![0.0; n * n * n * n];
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..i {
                        let mut v = dgamma[i].get(l, j, k).eps - dgamma[j].get(l, i, k).eps;
                        for m in 0..n {
                            v += gamma.get(m, j, k) * gamma.get(l, i, m)
                                - gamma.get(m, i, k) * gamma.get(l, j, m);
                        }
                        op[idx(l, k, i, j)] = v;
                        op[idx(l, k, j, i)] = -v;
                    }
                }
            }
        }
        let mut data = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for w in 0..n {
                        let mut acc = 0.0;
                        for l in 0..n {
                            acc += g[(w, l)] * op[idx(l, k, i, j)];
                        }
                        data[idx(i, j, k, w)] = acc;
                    }
                }
            }
        }
        Some(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.data[((i * n + j) * n + k) * n + l]
    }

    /// `R(X,Y,Z,W)`.
    pub fn eval(&self, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..n {
                    let xyz = xy * z[k];
                    if xyz == 0.0 {
                        continue;
                    }
                    let base = ((i * n + j) * n + k) * n;
                    let mut inner = 0.0;
                    for (l, &wl) in w.iter().enumerate() {
                        inner += self.data[base + l] * wl;
                    }
                    acc += xyz * inner;
                }
            }
        }
        acc
    }

    /// The vector `R(X,Y)Z` with its index raised by `g⁻¹`.
    pub fn operator(&self, g_inv: &Mat<f64>, x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let n = self.n;
        let lowered: Vec<f64> = (0..n)
            .map(|l| {
                let mut e = vec![0.0; n];
                e[l] = 1.0;
                self.eval(x, y, z, &e)
            })
            .collect();
        g_inv.mul_vec(&lowered)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}
