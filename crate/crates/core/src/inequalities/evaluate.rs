use serde::{Deserialize, Serialize};

use crate::error::{GeomError, GeomResult};
use crate::geom::{OrthonormalFrame, Point};
use crate::identities::{distribution_curvatures, DistributionCurvatures, PointGeometry};
use crate::linalg::Mat;
use crate::submersion::{classify_fibers, OneillSample, SubmersionScenario};
use crate::tolerances;

use super::catalog::{CatalogEntry, EqualityCondition, Requirement, TheoremCatalog, TheoremId};

/// Which unit vectors play the roles of `U₁` and `X₁`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitChoice {
    /// Frame vector `i mod r` on the vertical side and `i mod ℓ` on the
    /// horizontal side.
    Frame(usize),
    /// Unit vectors given by coefficients in the sample's frames. The
    /// coefficient vectors need not be normalized.
    Random { vertical: Vec<f64>, horizontal: Vec<f64> },
}

impl Default for UnitChoice {
    fn default() -> Self {
        Self::Frame(0)
    }
}

/// Equality-case flags read off the O'Neill tables in a given frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityFlags {
    pub totally_geodesic: bool,
    pub umbilical: bool,
    pub horizontal_integrable: bool,
    /// `𝒯₁₁ˢ = 𝒯₂₂ˢ + … + 𝒯ᵣᵣˢ` and `𝒯₁ⱼˢ = 0` for `j ≥ 2`.
    pub chen_vertical: bool,
    /// `𝒜₁ⱼ^β = 0`.
    pub chen_horizontal: bool,
    /// `𝒯₁₁ = … = 𝒯ᵣᵣ` and `𝒯ᵢⱼ = 0` for `i ≠ j`.
    pub umbilical_diag: bool,
    /// `‖𝒜^ℋ‖ = ‖𝒯^ℋ‖`.
    pub norm_balance_th: bool,
    /// `‖𝒜^𝒱‖ = ‖𝒯^𝒱‖`.
    pub norm_balance_tv: bool,
}

impl EqualityFlags {
    pub fn condition(&self, cond: EqualityCondition) -> bool {
        match cond {
            EqualityCondition::TotallyGeodesic => self.totally_geodesic,
            EqualityCondition::HorizontalIntegrable => self.horizontal_integrable,
            EqualityCondition::ChenVertical => self.chen_vertical,
            EqualityCondition::ChenHorizontal => self.chen_horizontal,
            EqualityCondition::UmbilicalDiag => self.umbilical_diag,
            EqualityCondition::NormBalanceTH => self.norm_balance_th,
            EqualityCondition::NormBalanceTV => self.norm_balance_tv,
        }
    }
}

type Table3 = Vec<Vec<Vec<f64>>>;

fn flags_from_tables(sample: &OneillSample, t: &Table3, a: &Table3) -> EqualityFlags {
    let tau = tolerances::TAU_FLAG;
    let base = classify_fibers(sample);
    let r = t.len();
    let h_dim = t.first().and_then(|row| row.first()).map_or(0, Vec::len);

    let mut chen_vertical = true;
    for s in 0..h_dim {
        let tail: f64 = (1..r).map(|i| t[i][i][s]).sum();
        chen_vertical &= (t[0][0][s] - tail).abs() < tau;
        chen_vertical &= (1..r).all(|j| t[0][j][s].abs() < tau);
    }
    let chen_horizontal = a.first().map_or(true, |row| row.iter().flatten().all(|v| v.abs() < tau));

    let mut umbilical_diag = true;
    for i in 0..r {
        for j in 0..r {
            for s in 0..h_dim {
                let ok = if i == j { (t[i][i][s] - t[0][0][s]).abs() < tau } else { t[i][j][s].abs() < tau };
                umbilical_diag &= ok;
            }
        }
    }
    let nm = sample.norms;
    EqualityFlags {
        totally_geodesic: base.totally_geodesic,
        umbilical: base.umbilical,
        horizontal_integrable: base.horizontal_integrable,
        chen_vertical,
        chen_horizontal,
        umbilical_diag,
        norm_balance_th: (nm.a_h.sqrt() - nm.t_h.sqrt()).abs() < tau,
        norm_balance_tv: (nm.a_v.sqrt() - nm.t_v.sqrt()).abs() < tau,
    }
}

/// Flags in the sample's own frames.
pub fn equality_flags_at(sample: &OneillSample) -> EqualityFlags {
    flags_from_tables(sample, &sample.t, &sample.a)
}

/// Everything needed to evaluate any theorem at one point.
#[derive(Clone, Debug)]
pub struct TheoremContext {
    pub geo: PointGeometry,
    pub curvatures: DistributionCurvatures,
    pub c: f64,
    pub js: [Mat<f64>; 3],
    pub declared_totally_geodesic: bool,
    pub declared_integrable: bool,
}

impl TheoremContext {
    /// Fails with `NotApplicable` unless the scenario is declared
    /// anti-invariant and carries a quaternionic triple, and with
    /// `MissingC` when no space-form constant is declared.
    pub fn new(s: &SubmersionScenario, p: &Point) -> GeomResult<Self> {
        if s.triple.is_none() || !s.declared.anti_invariant {
            return Err(GeomError::NotApplicable {
                theorem: "all".into(),
                reason: format!("scenario `{}` is not an anti-invariant submersion", s.name),
            });
        }
        let c = s.c()?;
        let js = s.quaternionic_triple()?.at(p)?;
        let geo = PointGeometry::new(s, p)?;
        let curvatures = distribution_curvatures(&geo, |x, y, z, w| geo.ambient(x, y, z, w));
        Ok(Self {
            geo,
            curvatures,
            c,
            js,
            declared_totally_geodesic: s.declared.totally_geodesic_fibers,
            declared_integrable: s.declared.horizontal_integrable,
        })
    }

    pub fn requirement_met(&self, req: Requirement) -> bool {
        match req {
            Requirement::None => true,
            Requirement::TotallyGeodesicFibers => self.declared_totally_geodesic,
            Requirement::IntegrableHorizontal => self.declared_integrable,
        }
    }

    /// Pointwise terms in frames led by the chosen unit vectors.
    pub fn terms(&self, unit: &UnitChoice) -> GeomResult<Terms> {
        let geo = &self.geo;
        let ctx = &geo.ctx;
        let (us0, xs0) = (geo.us(), geo.xs());
        let (r, ell) = (us0.len(), xs0.len());
        let combine = |coeffs: &[f64], frame: &[Vec<f64>]| -> GeomResult<Vec<f64>> {
            if coeffs.len() != frame.len() {
                return Err(GeomError::DimensionMismatch { expected: frame.len(), got: coeffs.len() });
            }
            let mut v = vec![0.0; ctx.dim()];
            for (ci, e) in coeffs.iter().zip(frame) {
                crate::linalg::axpy(*ci, e, &mut v);
            }
            Ok(v)
        };
        let (u1, x1) = match unit {
            UnitChoice::Frame(i) => (us0[i % r].clone(), xs0[i % ell].clone()),
            UnitChoice::Random { vertical, horizontal } => (combine(vertical, us0)?, combine(horizontal, xs0)?),
        };
        let lead = |first: Vec<f64>, rest: &[Vec<f64>]| -> GeomResult<Vec<Vec<f64>>> {
            let inputs: Vec<Vec<f64>> = std::iter::once(first).chain(rest.iter().cloned()).collect();
            let frame = OrthonormalFrame::ordered(Point::new(ctx.x.clone()), &ctx.g, &inputs);
            if frame.len() != rest.len() {
                return Err(GeomError::Precondition("chosen unit vector is degenerate".into()));
            }
            Ok(frame.vectors)
        };
        let us = lead(u1, us0)?;
        let xs = lead(x1, xs0)?;

        let coeffs = |v: &[f64], frame: &[Vec<f64>]| -> Vec<f64> { frame.iter().map(|e| ctx.inner(v, e)).collect() };
        let t: Table3 = us.iter().map(|ui| us.iter().map(|uj| coeffs(&ctx.t(ui, uj), &xs)).collect()).collect();
        let a: Table3 = xs.iter().map(|xi| xs.iter().map(|xj| coeffs(&ctx.a(xi, xj), &us)).collect()).collect();

        let sample = &geo.sample;
        let flags = flags_from_tables(sample, &t, &a);
        let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
        let c_x1: [f64; 3] = [0, 1, 2].map(|al| sq(&coeffs(&self.js[al].mul_vec(&xs[0]), &xs)));
        let (b_total, c_total) = match (&sample.b, &sample.c) {
            (Some(b), Some(c)) => {
                let total = |tab: &[Vec<Vec<f64>>; 3]| tab.iter().flatten().flatten().map(|v| v * v).sum::<f64>();
                (total(b), total(c))
            }
            _ => (f64::NAN, f64::NAN),
        };

        let dc = &self.curvatures;
        let t_u1u1_h = ctx.inner(&ctx.t(&us[0], &us[0]), &sample.h_mean);
        let a_row_tail: f64 = a[0].iter().skip(1).map(|v| sq(v)).sum();
        Ok(Terms {
            r: r as f64,
            ell: ell as f64,
            c: self.c,
            hat_ric_u1: dc.hat_ric_of(&coeffs(&us[0], us0)),
            star_ric_x1: dc.star_ric_of(&coeffs(&xs[0], xs0)),
            hat_tau: dc.hat_tau,
            star_tau: dc.star_tau,
            t_u1u1_h,
            r2_h2: sample.r2_h2(),
            h2: sample.mean_curvature_sq,
            delta: sample.delta_n,
            t_v: sample.norms.t_v,
            t_h: sample.norms.t_h,
            a_v: sample.norms.a_v,
            a_h: sample.norms.a_h,
            a_row_tail,
            trace_a_sq: trace_sq(&a),
            b_total,
            c_total,
            c_x1,
            flags,
        })
    }
}

/// `Σ_β (Σ_i 𝒜_ii^β)²`.
fn trace_sq(a: &Table3) -> f64 {
    let dim_v = a.first().and_then(|row| row.first()).map_or(0, Vec::len);
    (0..dim_v).map(|b| (0..a.len()).map(|i| a[i][i][b]).sum::<f64>().powi(2)).sum()
}

/// Scalars entering the inequalities in a frame led by `U₁`, `X₁`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Terms {
    pub r: f64,
    pub ell: f64,
    pub c: f64,
    pub hat_ric_u1: f64,
    pub star_ric_x1: f64,
    pub hat_tau: f64,
    pub star_tau: f64,
    /// `g(𝒯_{U₁}U₁, H)`.
    pub t_u1u1_h: f64,
    pub r2_h2: f64,
    pub h2: f64,
    pub delta: f64,
    pub t_v: f64,
    pub t_h: f64,
    pub a_v: f64,
    pub a_h: f64,
    /// `Σ_β Σ_{s≥2} (𝒜_1s^β)²`.
    pub a_row_tail: f64,
    /// `Σ_β (Σ_i 𝒜_ii^β)²`.
    pub trace_a_sq: f64,
    /// `Σ_α Σ_i |B_αX_i|²`.
    pub b_total: f64,
    /// `Σ_α Σ_i |C_αX_i|²`.
    pub c_total: f64,
    /// `|C_αX₁|²` per `α`.
    pub c_x1: [f64; 3],
    pub flags: EqualityFlags,
}

impl Terms {
    fn q(&self) -> f64 {
        self.c / 4.0
    }

    fn c_x1_sum(&self) -> f64 {
        self.c_x1.iter().sum()
    }

    /// Space-form constant with the `C` term on `X₁`.
    fn k_fixed(&self) -> f64 {
        let n = self.r + self.ell;
        self.q() * (n * (n - 1.0) + 6.0 * self.b_total + 3.0 * self.c_x1_sum())
    }

    /// Space-form constant with the `C` term summed over the frame.
    fn k_summed(&self) -> f64 {
        let n = self.r + self.ell;
        self.q() * (n * (n - 1.0) + 6.0 * self.b_total + 3.0 * self.c_total)
    }

    fn tau_sum(&self) -> f64 {
        self.hat_tau + self.star_tau
    }
}

/// A reading of an ambiguous term and the slack it produces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlternativeSlack {
    pub reading: String,
    pub slack: f64,
}

/// Outcome of one inequality at one point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub id: TheoremId,
    pub point: Vec<f64>,
    pub unit: UnitChoice,
    pub lhs: f64,
    pub rhs: f64,
    /// Nonnegative exactly when the inequality holds.
    pub slack: f64,
    pub holds: bool,
    pub equality: bool,
    pub flags: EqualityFlags,
    pub equality_condition: EqualityCondition,
    pub equality_consistent: bool,
    pub tolerance: f64,
    pub alternatives: Vec<AlternativeSlack>,
}

/// `(lhs, rhs)` of `id` as stated, plus any alternative readings.
fn sides(id: TheoremId, t: &Terms) -> ((f64, f64), Vec<(String, (f64, f64))>) {
    use TheoremId as I;
    let q = t.q();
    let (r, l) = (t.r, t.ell);
    let k = t.k_fixed();
    let tau = t.tau_sum();
    let tr_term = 3.0 / l * t.trace_a_sq;
    let mut alt = Vec::new();
    let main = match id {
        I::T1 => (t.hat_ric_u1, q * (r - 1.0) - r * t.t_u1u1_h),
        I::T2 => (t.hat_tau, q * r * (r - 1.0) - t.r2_h2),
        I::T3 => (t.star_ric_x1, q * ((l - 1.0) + 3.0 * t.c_x1_sum())),
        I::T4 => (t.star_tau, q * (l * (l - 1.0) + 3.0 * t.c_total)),
        I::T5 => (t.hat_ric_u1, q * (r - 1.0) - 0.25 * t.r2_h2),
        I::T6 => {
            for (al, cx) in t.c_x1.iter().enumerate() {
                alt.push((format!("single_alpha_{}", al + 1), (2.0 * t.star_ric_x1, q * (2.0 * (l - 1.0) + 3.0 * cx))));
            }
            (2.0 * t.star_ric_x1, q * (2.0 * (l - 1.0) + 3.0 * t.c_x1_sum()))
        }
        I::T7 => {
            let rhs = t.hat_ric_u1 + t.star_ric_x1 + 0.25 * t.r2_h2 + 3.0 * t.a_row_tail - t.delta + t.t_v - t.a_h;
            let lhs_with = |c_term: f64| q * (l * r + l + r + t.b_total + 3.0 * c_term);
            for (al, cx) in t.c_x1.iter().enumerate() {
                alt.push((format!("single_alpha_{}", al + 1), (lhs_with(*cx), rhs)));
            }
            (lhs_with(t.c_x1_sum()), rhs)
        }
        I::T8a => (tau, k - t.r2_h2 + t.t_h + 2.0 * t.delta - 2.0 * t.t_v + 2.0 * t.a_h),
        I::T8b => (tau, k - t.r2_h2 + t.t_h - 3.0 * t.a_v + 2.0 * t.delta - 2.0 * t.t_v),
        I::C1a => (tau, k + 2.0 * t.a_h),
        I::C1b => (tau, k - 3.0 * t.a_v),
        I::T9a => (tau, k - t.r2_h2 + 2.0 * t.delta - 2.0 * t.t_v + 2.0 * t.a_h - 3.0 * t.a_v),
        I::T9b => (tau, k - t.r2_h2 + t.t_h + 2.0 * t.delta + 2.0 * t.a_h - 3.0 * t.a_v),
        I::C2a => (tau, k - t.r2_h2 + 2.0 * t.delta - 2.0 * t.t_v),
        I::C2b => (tau, k - t.r2_h2 + 2.0 * t.delta + t.t_h),
        I::T10 => {
            let ab = (t.a_h.sqrt()) * (t.t_h.sqrt());
            (k, tau + t.r2_h2 + 2.0 * t.t_v + 3.0 * t.a_v - 2.0 * t.delta - 2.0 * 2f64.sqrt() * ab)
        }
        I::T11 => {
            let ab = (t.a_v.sqrt()) * (t.t_v.sqrt());
            (k, tau + t.r2_h2 - t.t_h - 2.0 * t.delta - 2.0 * t.a_h + 2.0 * 6f64.sqrt() * ab)
        }
        I::T12 => (k, tau + r * (r - 1.0) * t.h2 + 3.0 * t.a_v - 2.0 * t.delta + 2.0 * t.t_v - 2.0 * t.a_h),
        I::T13 => {
            let rest = tau + t.r2_h2 - t.t_h - 2.0 * t.delta + 2.0 * t.t_v - 2.0 * t.a_h;
            alt.push(("squared_norm_a_v".to_string(), (k, rest + 3.0 / l * t.a_v)));
            (k, rest + tr_term)
        }
        I::C3 => {
            alt.push(("squared_norm_a_v".to_string(), (k, tau + 3.0 / l * t.a_v - 2.0 * t.a_h)));
            (k, tau + tr_term - 2.0 * t.a_h)
        }
    };
    // Theorems built on the space-form constant also report the reading
    // with the `C` term summed over the horizontal frame.
    if matches!(
        id,
        I::T8a | I::T8b | I::C1a | I::C1b | I::T9a | I::T9b | I::C2a | I::C2b | I::T10 | I::T11 | I::T12 | I::T13 | I::C3
    ) {
        let shift = t.k_summed() - k;
        let (lhs, rhs) = main;
        let summed = if matches!(id, I::T10 | I::T11 | I::T12 | I::T13 | I::C3) {
            (lhs + shift, rhs)
        } else {
            (lhs, rhs + shift)
        };
        alt.push(("c_term_summed_over_frame".to_string(), summed));
    }
    (main, alt)
}

/// Evaluates `entry` on precomputed terms. The requirement gate is the
/// caller's job.
pub fn verdict_from_terms(entry: &CatalogEntry, terms: &Terms, point: &[f64], unit: &UnitChoice) -> TheoremVerdict {
    let ((lhs, rhs), alts) = sides(entry.id, terms);
    let slack = entry.direction.slack(lhs, rhs);
    let tolerance =
        if entry.uses_delta { tolerances::TAU_SLACK_FIELD } else { tolerances::TAU_SLACK_ALGEBRAIC };
    let equality = slack.abs() < tolerances::TAU_EQ;
    let condition = terms.flags.condition(entry.equality);
    TheoremVerdict {
        id: entry.id,
        point: point.to_vec(),
        unit: unit.clone(),
        lhs,
        rhs,
        slack,
        holds: slack >= -tolerance,
        equality,
        flags: terms.flags,
        equality_condition: entry.equality,
        equality_consistent: equality == condition,
        tolerance,
        alternatives: alts
            .into_iter()
            .map(|(reading, (l, r))| AlternativeSlack { reading, slack: entry.direction.slack(l, r) })
            .collect(),
    }
}

/// Evaluates one catalog entry in a prepared context.
pub fn evaluate_with(ctx: &TheoremContext, entry: &CatalogEntry, unit: &UnitChoice) -> GeomResult<TheoremVerdict> {
    if !ctx.requirement_met(entry.requires) {
        return Err(GeomError::NotApplicable {
            theorem: entry.id.to_string(),
            reason: format!("requires {:?}", entry.requires),
        });
    }
    let terms = ctx.terms(unit)?;
    Ok(verdict_from_terms(entry, &terms, &ctx.geo.ctx.x, unit))
}

/// Evaluates theorem `id` at `p` with `U₁`, `X₁` taken as frame vector
/// `unit_choice`.
pub fn evaluate_theorem(
    id: TheoremId,
    s: &SubmersionScenario,
    p: &Point,
    unit_choice: usize,
) -> GeomResult<TheoremVerdict> {
    let catalog = TheoremCatalog::standard();
    let ctx = TheoremContext::new(s, p).map_err(|e| match e {
        GeomError::NotApplicable { reason, .. } => GeomError::NotApplicable { theorem: id.to_string(), reason },
        other => other,
    })?;
    evaluate_with(&ctx, catalog.get(id), &UnitChoice::Frame(unit_choice))
}
