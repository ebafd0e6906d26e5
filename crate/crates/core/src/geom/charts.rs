use std::f64::consts::{FRAC_PI_2, PI};

use super::{Domain, MetricChart, MetricExpr};

const EUCLIDEAN_BOX: f64 = 100.0;

fn euclidean(name: &str, dim: usize) -> MetricChart {
    MetricChart::new(
        name,
        MetricExpr::Euclidean { dim },
        Domain::Box { ranges: vec![(-EUCLIDEAN_BOX, EUCLIDEAN_BOX); dim] },
    )
}

fn sphere2(name: &str, radius: f64) -> MetricChart {
    MetricChart::new(name, MetricExpr::SpherePolar { radius }, Domain::Slab { axis: 0, lo: 0.0, hi: PI })
}

const NAMES: &[&str] = &[
    "euclidean1_positive",
    "euclidean2",
    "euclidean3",
    "euclidean3_punctured",
    "euclidean4",
    "euclidean4_off_axis",
    "euclidean6",
    "euclidean8",
    "halfspace3",
    "sphere2",
    "sphere2_half",
    "sphere2_r2",
    "sphere3",
    "hp2_chart",
    "conformal2",
    "diag_4_1",
];

/// Names accepted by [`builtin_chart`].
pub fn builtin_chart_names() -> &'static [&'static str] {
    NAMES
}

/// Built-in charts by name.
///
/// `sphere2*` use polar coordinates `(θ, φ)`; `sphere3` uses Hopf
/// coordinates `(η, ξ₁, ξ₂)` on the unit 3-sphere; `hp2_chart` is the affine
/// chart `z ∈ H²` of quaternionic projective space.
pub fn builtin_chart(name: &str) -> Option<MetricChart> {
    let chart = match name {
        "euclidean1_positive" => MetricChart::new(
            name,
            MetricExpr::Euclidean { dim: 1 },
            Domain::Slab { axis: 0, lo: 0.0, hi: f64::INFINITY },
        ),
        "euclidean2" => euclidean(name, 2),
        "euclidean3" => euclidean(name, 3),
        "euclidean3_punctured" => MetricChart::new(
            name,
            MetricExpr::Euclidean { dim: 3 },
            Domain::All {
                parts: vec![
                    Domain::Box { ranges: vec![(-EUCLIDEAN_BOX, EUCLIDEAN_BOX); 3] },
                    Domain::Punctured,
                ],
            },
        ),
        "euclidean4" => euclidean(name, 4),
        "euclidean4_off_axis" => MetricChart::new(
            name,
            MetricExpr::Euclidean { dim: 4 },
            Domain::All {
                parts: vec![
                    Domain::Box { ranges: vec![(-EUCLIDEAN_BOX, EUCLIDEAN_BOX); 4] },
                    Domain::OffAxis,
                ],
            },
        ),
        "euclidean6" => euclidean(name, 6),
        "euclidean8" => euclidean(name, 8),
        "halfspace3" => MetricChart::new(
            name,
            MetricExpr::Euclidean { dim: 3 },
            Domain::Slab { axis: 0, lo: 0.0, hi: f64::INFINITY },
        ),
        "sphere2" => sphere2(name, 1.0),
        "sphere2_half" => sphere2(name, 0.5),
        "sphere2_r2" => sphere2(name, 2.0),
        "sphere3" => MetricChart::new(
            name,
            MetricExpr::SphereHopf { radius: 1.0 },
            Domain::Slab { axis: 0, lo: 0.0, hi: FRAC_PI_2 },
        ),
        "hp2_chart" => MetricChart::new(
            name,
            MetricExpr::QuaternionicProjective { m: 2 },
            Domain::Box { ranges: vec![(-EUCLIDEAN_BOX, EUCLIDEAN_BOX); 8] },
        ),
        "conformal2" => MetricChart::new(name, MetricExpr::ConformalExp { dim: 2 }, Domain::Everywhere),
        "diag_4_1" => {
            MetricChart::new(name, MetricExpr::Diagonal { diag: vec![4.0, 1.0] }, Domain::Everywhere)
        }
        _ => return None,
    };
    Some(chart)
}
