use serde::{Deserialize, Serialize};

use crate::error::GeomResult;
use crate::geom::Point;
use crate::linalg::Mat;
use crate::quat::{model_curvature, SpaceFormModel};
use crate::submersion::SubmersionScenario;

use super::gauss::PointGeometry;

/// Ricci and scalar curvatures of the vertical and horizontal
/// distributions, together with the ambient scalar curvature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionCurvatures {
    /// `R̂ic(U_i) = Σ_j R̂(U_i,U_j,U_j,U_i)`.
    pub hat_ric: Vec<f64>,
    /// `Ric*(X_i) = Σ_j R*(X_i,X_j,X_j,X_i)`.
    pub star_ric: Vec<f64>,
    pub hat_tau: f64,
    pub star_tau: f64,
    /// Ambient `τ` summed over the four frame blocks.
    pub ambient_tau: f64,
    /// `R̂ic` as a quadratic form in vertical frame coordinates.
    pub hat_ric_form: Vec<Vec<f64>>,
    /// `Ric*` as a quadratic form in horizontal frame coordinates.
    pub star_ric_form: Vec<Vec<f64>>,
}

impl DistributionCurvatures {
    /// `R̂ic(U)` for `U = Σ c_i U_i`.
    pub fn hat_ric_of(&self, coeffs: &[f64]) -> f64 {
        quadratic(&self.hat_ric_form, coeffs)
    }

    /// `Ric*(X)` for `X = Σ c_i X_i`.
    pub fn star_ric_of(&self, coeffs: &[f64]) -> f64 {
        quadratic(&self.star_ric_form, coeffs)
    }
}

fn quadratic(m: &[Vec<f64>], c: &[f64]) -> f64 {
    m.iter().zip(c).map(|(row, ci)| ci * row.iter().zip(c).map(|(v, cj)| v * cj).sum::<f64>()).sum()
}

/// Builds [`DistributionCurvatures`] from the Gauss-type formulas with the
/// ambient curvature supplied by `ambient`.
pub fn distribution_curvatures(
    geo: &PointGeometry,
    ambient: impl Fn(&[f64], &[f64], &[f64], &[f64]) -> f64,
) -> DistributionCurvatures {
    let (us, xs) = (geo.us(), geo.xs());
    let (r, ell) = (us.len(), xs.len());
    let hat_ric_form: Vec<Vec<f64>> = (0..r)
        .map(|a| {
            (0..r)
                .map(|b| (0..r).map(|j| geo.hat_with(ambient(&us[a], &us[j], &us[j], &us[b]), a, j, j, b)).sum())
                .collect()
        })
        .collect();
    let star_ric_form: Vec<Vec<f64>> = (0..ell)
        .map(|a| {
            (0..ell)
                .map(|b| (0..ell).map(|j| geo.star_with(ambient(&xs[a], &xs[j], &xs[j], &xs[b]), a, j, j, b)).sum())
                .collect()
        })
        .collect();
    let hat_ric: Vec<f64> = (0..r).map(|i| hat_ric_form[i][i]).collect();
    let star_ric: Vec<f64> = (0..ell).map(|i| star_ric_form[i][i]).collect();

    let block = |p: &[Vec<f64>], q: &[Vec<f64>]| -> f64 {
        p.iter().flat_map(|a| q.iter().map(move |b| (a, b))).map(|(a, b)| ambient(a, b, b, a)).sum()
    };
    let ambient_tau = block(us, us) + block(xs, us) + block(xs, xs) + block(us, xs);

    DistributionCurvatures {
        hat_tau: hat_ric.iter().sum(),
        star_tau: star_ric.iter().sum(),
        hat_ric,
        star_ric,
        ambient_tau,
        hat_ric_form,
        star_ric_form,
    }
}

/// Distribution curvatures computed twice: with the autodiff ambient
/// curvature and with the space-form tensor of constant `c`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionScalars {
    pub gauss_codazzi: DistributionCurvatures,
    pub space_form: DistributionCurvatures,
    /// Largest gap between the two routes over `R̂ic` and `Ric*` entries.
    pub route_discrepancy: f64,
}

/// Both routes for the distribution curvatures. Needs the scenario's
/// space-form constant and quaternionic triple.
pub fn distribution_scalars(s: &SubmersionScenario, geo: &PointGeometry) -> GeomResult<DistributionScalars> {
    let c = s.c()?;
    let js = s.quaternionic_triple()?.at(&Point::new(geo.ctx.x.clone()))?;
    let g: &Mat<f64> = &geo.ctx.g;
    let model = SpaceFormModel { c };
    let gauss_codazzi = distribution_curvatures(geo, |x, y, z, w| geo.ambient(x, y, z, w));
    let space_form = distribution_curvatures(geo, |x, y, z, w| model_curvature(model, g, &js, x, y, z, w));
    let route_discrepancy = gauss_codazzi
        .hat_ric
        .iter()
        .zip(&space_form.hat_ric)
        .chain(gauss_codazzi.star_ric.iter().zip(&space_form.star_ric))
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(DistributionScalars { gauss_codazzi, space_form, route_discrepancy })
}

/// `c/4 [(ℓ+r)(ℓ+r−1) + 3 Σ_α Σ_i (|C_αX_i|² + 2|B_αX_i|²)]` from the
/// sample's B/C tables.
fn tau_space_form(geo: &PointGeometry, c: f64) -> Option<f64> {
    let (b, cc) = (geo.sample.b.as_ref()?, geo.sample.c.as_ref()?);
    let n = (geo.r() + geo.ell()) as f64;
    let sq = |t: &Vec<Vec<f64>>| -> f64 { t.iter().flatten().map(|v| v * v).sum() };
    let quaternionic: f64 = (0..3).map(|al| sq(&cc[al]) + 2.0 * sq(&b[al])).sum();
    Some(c / 4.0 * (n * (n - 1.0) + 3.0 * quaternionic))
}

/// `|τ − c/4[(ℓ+r)(ℓ+r−1) + 3Σ_αΣ_i(|C_αX_i|² + 2|B_αX_i|²)]|` with `τ` from
/// the autodiff curvature.
pub fn tau_decomposition_residual(s: &SubmersionScenario, geo: &PointGeometry) -> GeomResult<f64> {
    let c = s.c()?;
    s.quaternionic_triple()?;
    let tau = distribution_curvatures(geo, |x, y, z, w| geo.ambient(x, y, z, w)).ambient_tau;
    let rhs = tau_space_form(geo, c).unwrap_or(f64::NAN);
    Ok((tau - rhs).abs())
}

/// `τ = τ̂ + τ* − r²|H|² + |𝒯^ℋ|² − 3|𝒜^𝒱|² + 2δ(N) − 2|𝒯^𝒱|² + 2|𝒜^ℋ|²`,
/// the ambient scalar curvature rebuilt from the distribution curvatures
/// and the O'Neill norms.
pub fn tau_from_gauss_codazzi(geo: &PointGeometry, dc: &DistributionCurvatures) -> f64 {
    let s = &geo.sample;
    let nm = s.norms;
    dc.hat_tau + dc.star_tau - s.r2_h2() + nm.t_h - 3.0 * nm.a_v + 2.0 * s.delta_n - 2.0 * nm.t_v + 2.0 * nm.a_h
}

/// Readings of the `3|C_{J_α}X₁|²` term on the constant side of the
/// master identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CReading {
    /// `3 Σ_α |C_{J_α}X₁|²`, first horizontal frame vector only.
    FixedX1,
    /// `3 Σ_α Σ_i |C_{J_α}X_i|²`.
    SummedOverFrame,
}

/// Both sides of the master identity
///
/// ```text
/// c/4((ℓ+r)(ℓ+r−1) + Σ_α(6Σ_i|B_αX_i|² + 3|C_αX₁|²))
///   = τ̂ + τ* + r²|H|² − |𝒯^ℋ|² + 3|𝒜^𝒱|² − 2δ(N) + 2|𝒯^𝒱|² − 2|𝒜^ℋ|²
/// ```
///
/// under both readings of the `C` term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MasterIdentity {
    pub lhs_fixed_x1: f64,
    pub lhs_summed: f64,
    pub rhs: f64,
    pub residual_fixed_x1: f64,
    pub residual_summed: f64,
}

impl MasterIdentity {
    pub fn lhs(&self, reading: CReading) -> f64 {
        match reading {
            CReading::FixedX1 => self.lhs_fixed_x1,
            CReading::SummedOverFrame => self.lhs_summed,
        }
    }

    pub fn residual(&self, reading: CReading) -> f64 {
        match reading {
            CReading::FixedX1 => self.residual_fixed_x1,
            CReading::SummedOverFrame => self.residual_summed,
        }
    }
}

/// `c/4((ℓ+r)(ℓ+r−1) + Σ_α(6Σ_i|B_αX_i|² + 3·C-term))` under `reading`.
pub fn master_constant(geo: &PointGeometry, c: f64, reading: CReading) -> Option<f64> {
    let (b, cc) = (geo.sample.b.as_ref()?, geo.sample.c.as_ref()?);
    let n = (geo.r() + geo.ell()) as f64;
    let mut acc = n * (n - 1.0);
    for al in 0..3 {
        let b_sq: f64 = b[al].iter().flatten().map(|v| v * v).sum();
        let c_sq: f64 = match reading {
            CReading::FixedX1 => cc[al][0].iter().map(|v| v * v).sum(),
            CReading::SummedOverFrame => cc[al].iter().flatten().map(|v| v * v).sum(),
        };
        acc += 6.0 * b_sq + 3.0 * c_sq;
    }
    Some(c / 4.0 * acc)
}

/// Evaluates the master identity; `dc` supplies `τ̂` and `τ*`.
pub fn master_identity(s: &SubmersionScenario, geo: &PointGeometry, dc: &DistributionCurvatures) -> GeomResult<MasterIdentity> {
    let c = s.c()?;
    s.quaternionic_triple()?;
    let sm = &geo.sample;
    let nm = sm.norms;
    let rhs = dc.hat_tau + dc.star_tau + sm.r2_h2() - nm.t_h + 3.0 * nm.a_v - 2.0 * sm.delta_n + 2.0 * nm.t_v
        - 2.0 * nm.a_h;
    let lhs_fixed_x1 = master_constant(geo, c, CReading::FixedX1).unwrap_or(f64::NAN);
    let lhs_summed = master_constant(geo, c, CReading::SummedOverFrame).unwrap_or(f64::NAN);
    Ok(MasterIdentity {
        lhs_fixed_x1,
        lhs_summed,
        rhs,
        residual_fixed_x1: (lhs_fixed_x1 - rhs).abs(),
        residual_summed: (lhs_summed - rhs).abs(),
    })
}
