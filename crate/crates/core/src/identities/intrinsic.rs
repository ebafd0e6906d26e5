use crate::autodiff::{lift, seed, tangents, values, Dual, Scalar};
use crate::error::{GeomError, GeomResult};
use crate::geom::christoffel;
use crate::linalg::{add, dot, sub};
use crate::submersion::{OneillContext, SubmersionScenario};

/// `P(x)(∂_dir s + Γ_x(dir, s))` for the section `s(y) = P(y) w`, where `P`
/// is the vertical or horizontal projector field. This is the projected
/// connection `𝒱∇` or `ℋ∇` applied to the section along a constant field.
fn projected_connection<S: Scalar>(
    s: &SubmersionScenario,
    vertical: bool,
    dir: &[f64],
    w: &[f64],
    x: &[S],
) -> Option<Vec<S>> {
    let d: Vec<S> = lift(dir);
    let xd = seed(x, &d);
    let ph = s.projector_h(&xd)?;
    let wd: Vec<Dual<S>> = lift(w);
    let hw = ph.mul_vec(&wd);
    let section = if vertical { sub(&wd, &hw) } else { hw };
    let gamma = christoffel(&s.total.metric, x)?;
    let nabla = add(&tangents(&section), &gamma.contract(&d, &values(&section)));
    let h_nabla = ph.map(|v| v.re).mul_vec(&nabla);
    Some(if vertical { sub(&nabla, &h_nabla) } else { h_nabla })
}

fn second_derivative(
    s: &SubmersionScenario,
    ctx: &OneillContext,
    vertical: bool,
    e: &[f64],
    f: &[f64],
    w: &[f64],
) -> GeomResult<Vec<f64>> {
    let xe = seed(&ctx.x, e);
    let field = projected_connection(s, vertical, f, w, &xe)
        .ok_or(GeomError::NonFinite { what: "projected connection" })?;
    let nabla = add(&tangents(&field), &ctx.gamma.contract(e, &values(&field)));
    Ok(if vertical { ctx.vertical(&nabla) } else { ctx.horizontal(&nabla) })
}

/// Curvature `D_E D_F w − D_F D_E w` of the projected connection
/// `D = 𝒱∇` (or `ℋ∇`) at the context point, with `E`, `F` extended as
/// constant coordinate fields and `w` as `P(x) w`. Tensorial in `E`, `F`, `w`.
pub fn projected_curvature_operator(
    s: &SubmersionScenario,
    ctx: &OneillContext,
    vertical: bool,
    e: &[f64],
    f: &[f64],
    w: &[f64],
) -> GeomResult<Vec<f64>> {
    let ef = second_derivative(s, ctx, vertical, e, f, w)?;
    let fe = second_derivative(s, ctx, vertical, f, e, w)?;
    Ok(sub(&ef, &fe))
}

/// `R̂(U_i,U_j,U_k,U_l)` for every index tuple, as the curvature of the
/// induced connection on the fibers. Indexed `[i][j][k][l]`.
pub fn hat_curvature_intrinsic(
    s: &SubmersionScenario,
    ctx: &OneillContext,
    us: &[Vec<f64>],
) -> GeomResult<Vec<Vec<Vec<Vec<f64>>>>> {
    four_index(s, ctx, us, true, |_, _, _, _| 0.0)
}

/// `R*(X_i,X_j,X_k,X_l) = g(F(X_i,X_j)X_k, X_l) − 2g(𝒜_{X_i}X_j, 𝒜_{X_k}X_l)`
/// with `F` the curvature of `ℋ∇`. `a[i][j]` holds `𝒜_{X_i}X_j`.
pub fn star_curvature_lift(
    s: &SubmersionScenario,
    ctx: &OneillContext,
    xs: &[Vec<f64>],
    a: &[Vec<Vec<f64>>],
) -> GeomResult<Vec<Vec<Vec<Vec<f64>>>>> {
    four_index(s, ctx, xs, false, |i, j, k, l| -2.0 * ctx.inner(&a[i][j], &a[k][l]))
}

fn four_index(
    s: &SubmersionScenario,
    ctx: &OneillContext,
    frame: &[Vec<f64>],
    vertical: bool,
    correction: impl Fn(usize, usize, usize, usize) -> f64,
) -> GeomResult<Vec<Vec<Vec<Vec<f64>>>>> {
    let m = frame.len();
    let mut out = vec![vec![vec![vec![0.0; m]; m]; m]; m];
    for i in 0..m {
        for j in (i + 1)..m {
            for k in 0..m {
                let op = projected_curvature_operator(s, ctx, vertical, &frame[i], &frame[j], &frame[k])?;
                let lowered = ctx.g.mul_vec(&op);
                for l in 0..m {
                    let v = dot(&lowered, &frame[l]);
                    out[i][j][k][l] = v + correction(i, j, k, l);
                    out[j][i][k][l] = -v + correction(j, i, k, l);
                }
            }
        }
        for k in 0..m {
            for l in 0..m {
                out[i][i][k][l] = correction(i, i, k, l);
            }
        }
    }
    Ok(out)
}
