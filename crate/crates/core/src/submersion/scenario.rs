use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::autodiff::Scalar;
use crate::error::{GeomError, GeomResult};
use crate::geom::{builtin_chart, sample_in_box, Domain, MetricChart, Point};
use crate::linalg::Mat;
use crate::quat::{builtin_triple, QuaternionicTriple, TripleExpr};

use super::MapExpr;

/// Structural properties a scenario is known to have.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScenarioFlags {
    pub anti_invariant: bool,
    pub totally_geodesic_fibers: bool,
    pub umbilical_fibers: bool,
    pub horizontal_integrable: bool,
}

/// A Riemannian submersion `π: total → base` given in charts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubmersionScenario {
    pub name: String,
    pub total: MetricChart,
    pub base: MetricChart,
    pub map: MapExpr,
    /// Name and field of the quaternionic triple on `total`, if any.
    pub triple: Option<(String, TripleExpr)>,
    /// Coordinate box for sampling.
    pub sampling_box: Vec<(f64, f64)>,
    /// Extra acceptance test for sampled points.
    pub sampling_filter: Domain,
    pub declared: ScenarioFlags,
    pub space_form_c: Option<f64>,
    /// Whether the scenario takes part in theorem verification.
    pub theorem_sweep: bool,
}

impl SubmersionScenario {
    /// Validates dimensions and wraps the parts into a scenario.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        total: MetricChart,
        base: MetricChart,
        map: MapExpr,
        triple: Option<(String, TripleExpr)>,
        sampling_box: Vec<(f64, f64)>,
        declared: ScenarioFlags,
        space_form_c: Option<f64>,
    ) -> GeomResult<Self> {
        let (n, k) = (total.dim(), base.dim());
        if k >= n {
            return Err(GeomError::Precondition(format!(
                "base dimension {k} must be smaller than total dimension {n}"
            )));
        }
        if map.source_dim() != n {
            return Err(GeomError::DimensionMismatch { expected: n, got: map.source_dim() });
        }
        if map.target_dim() != k {
            return Err(GeomError::DimensionMismatch { expected: k, got: map.target_dim() });
        }
        if sampling_box.len() != n {
            return Err(GeomError::DimensionMismatch { expected: n, got: sampling_box.len() });
        }
        if let Some((_, t)) = &triple {
            if t.dim() != n {
                return Err(GeomError::DimensionMismatch { expected: n, got: t.dim() });
            }
        }
        let theorem_sweep = triple.is_some() && space_form_c.is_some();
        Ok(Self {
            name: name.into(),
            total,
            base,
            map,
            triple,
            sampling_box,
            sampling_filter: Domain::Everywhere,
            declared,
            space_form_c,
            theorem_sweep,
        })
    }

    pub fn with_filter(mut self, filter: Domain) -> Self {
        self.sampling_filter = filter;
        self
    }

    /// Same submersion with both metrics multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            name: format!("{}*{factor}", self.name),
            total: self.total.scaled(factor),
            base: self.base.scaled(factor),
            ..self.clone()
        }
    }

    /// Fiber dimension `r`.
    pub fn r(&self) -> usize {
        self.total.dim() - self.base.dim()
    }

    /// Horizontal dimension `ℓ`.
    pub fn ell(&self) -> usize {
        self.base.dim()
    }

    pub fn quaternionic_triple(&self) -> GeomResult<QuaternionicTriple> {
        let (name, expr) = self.triple.as_ref().ok_or_else(|| GeomError::MissingStructure {
            scenario: self.name.clone(),
            what: "quaternionic triple",
        })?;
        QuaternionicTriple::new(name.clone(), self.total.clone(), expr.clone())
    }

    pub fn c(&self) -> GeomResult<f64> {
        self.space_form_c.ok_or_else(|| GeomError::MissingC { scenario: self.name.clone() })
    }

    /// Whether a point drawn from the box is acceptable for sampling.
    pub fn accepts(&self, x: &[f64]) -> bool {
        self.total.domain.contains(x)
            && self.sampling_filter.contains(x)
            && self.base.domain.contains(&self.map.eval(x))
    }

    /// `count` points drawn uniformly from the sampling box with rejection.
    /// Deterministic in `seed`.
    pub fn sample_points(&self, count: usize, seed: u64) -> GeomResult<Vec<Point>> {
        sample_in_box(&self.name, &self.sampling_box, count, seed, |x| self.accepts(x))
    }

    /// The `g`-orthogonal projector onto the horizontal space,
    /// `P_H = G⁻¹Jᵀ(JG⁻¹Jᵀ)⁻¹J` with `J = Dπ`. Smooth wherever `π` has full
    /// rank, so it can be differentiated through dual numbers.
    pub fn projector_h<S: Scalar>(&self, x: &[S]) -> Option<Mat<S>> {
        let jac = self.map.jacobian(x);
        let g_inv = self.total.metric.eval(x).inverse()?;
        let gj = g_inv.mul(&jac.transpose());
        let inner = jac.mul(&gj).inverse()?;
        Some(gj.mul(&inner).mul(&jac))
    }
}

const SCENARIO_NAMES: &[&str] =
    &["flat_linear_r1", "flat_linear_r2", "polar_circles", "hopf", "radial_spheres"];

/// Names accepted by [`builtin_scenario`].
pub fn builtin_scenario_names() -> &'static [&'static str] {
    SCENARIO_NAMES
}

fn chart(name: &str) -> MetricChart {
    builtin_chart(name).expect("built-in chart")
}

fn triple(name: &str) -> Option<(String, TripleExpr)> {
    builtin_triple(name).map(|t| (t.name, t.expr))
}

/// The built-in scenario catalog.
///
/// * `flat_linear_r1`: `R⁴ → R³` dropping `x₁`.
/// * `flat_linear_r2`: `R⁸ → R⁶` dropping `x₁, x₅`.
/// * `polar_circles`: `R⁴ ∖ {x₁ = x₂ = 0} → (0,∞) × R²`, circular fibers.
/// * `hopf`: `S³ → S²(½)`, not quaternionic.
/// * `radial_spheres`: `R³ ∖ 0 → (0,∞)`, round 2-sphere fibers. Engine checks only.
pub fn builtin_scenario(name: &str) -> Option<SubmersionScenario> {
    let all_true = ScenarioFlags {
        anti_invariant: true,
        totally_geodesic_fibers: true,
        umbilical_fibers: true,
        horizontal_integrable: true,
    };
    let s = match name {
        "flat_linear_r1" => SubmersionScenario::new(
            name,
            chart("euclidean4"),
            chart("euclidean3"),
            MapExpr::Drop { dim: 4, drop: vec![0] },
            triple("standard_h1"),
            vec![(-2.0, 2.0); 4],
            all_true,
            Some(0.0),
        ),
        "flat_linear_r2" => SubmersionScenario::new(
            name,
            chart("euclidean8"),
            chart("euclidean6"),
            MapExpr::Drop { dim: 8, drop: vec![0, 4] },
            triple("standard_h2"),
            vec![(-2.0, 2.0); 8],
            all_true,
            Some(0.0),
        ),
        "polar_circles" => SubmersionScenario::new(
            name,
            chart("euclidean4_off_axis"),
            chart("halfspace3"),
            MapExpr::PolarRadius,
            triple("standard_h1"),
            vec![(-3.0, 3.0), (-3.0, 3.0), (-2.0, 2.0), (-2.0, 2.0)],
            ScenarioFlags { totally_geodesic_fibers: false, ..all_true },
            Some(0.0),
        )
        .map(|s| s.with_filter(Domain::Shell { axes: vec![0, 1], lo: 0.5, hi: 3.0 })),
        "hopf" => SubmersionScenario::new(
            name,
            chart("sphere3"),
            chart("sphere2_half"),
            MapExpr::Hopf,
            None,
            vec![(0.2, 1.37), (0.0, 2.0 * PI), (0.0, 2.0 * PI)],
            ScenarioFlags {
                anti_invariant: false,
                totally_geodesic_fibers: true,
                umbilical_fibers: true,
                horizontal_integrable: false,
            },
            None,
        ),
        "radial_spheres" => SubmersionScenario::new(
            name,
            chart("euclidean3_punctured"),
            chart("euclidean1_positive"),
            MapExpr::Radius { dim: 3 },
            None,
            vec![(-2.0, 2.0); 3],
            ScenarioFlags {
                anti_invariant: false,
                totally_geodesic_fibers: false,
                umbilical_fibers: true,
                horizontal_integrable: true,
            },
            None,
        )
        .map(|s| s.with_filter(Domain::Shell { axes: vec![0, 1, 2], lo: 0.5, hi: 2.0 })),
        _ => return None,
    };
    s.ok()
}
