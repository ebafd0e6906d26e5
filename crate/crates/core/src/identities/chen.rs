use crate::error::{GeomError, GeomResult};

/// Validates a `t[i][j][s]` array of shape `r × r × ℓ`, symmetric in `(i, j)`.
fn shape(t: &[Vec<Vec<f64>>]) -> GeomResult<(usize, usize)> {
    let r = t.len();
    if r == 0 {
        return Err(GeomError::ShapeMismatch("empty array".into()));
    }
    let ell = t[0].first().map_or(0, Vec::len);
    if ell == 0 {
        return Err(GeomError::ShapeMismatch("empty slice dimension".into()));
    }
    for (i, row) in t.iter().enumerate() {
        if row.len() != r {
            return Err(GeomError::ShapeMismatch(format!("row {i} has length {}, expected {r}", row.len())));
        }
        for (j, col) in row.iter().enumerate() {
            if col.len() != ell {
                return Err(GeomError::ShapeMismatch(format!(
                    "entry ({i},{j}) has length {}, expected {ell}",
                    col.len()
                )));
            }
        }
    }
    for i in 0..r {
        for j in 0..i {
            for s in 0..ell {
                let (a, b) = (t[i][j][s], t[j][i][s]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(GeomError::ShapeMismatch(format!("array is not symmetric at ({i},{j},{s})")));
                }
            }
        }
    }
    Ok((r, ell))
}

fn lhs(t: &[Vec<Vec<f64>>]) -> f64 {
    t.iter().flatten().flatten().map(|v| v * v).sum()
}

/// Pieces shared by both forms, for slice `s`:
/// `(Σ_i t_ii, t_11 − Σ_{i≥2} t_ii, Σ_{j≥2} t_1j², Σ_{2≤i<j} (t_ii t_jj − t_ij²))`.
fn slice_terms(t: &[Vec<Vec<f64>>], s: usize) -> (f64, f64, f64, f64) {
    let r = t.len();
    let trace: f64 = (0..r).map(|i| t[i][i][s]).sum();
    let split = t[0][0][s] - (1..r).map(|i| t[i][i][s]).sum::<f64>();
    let first_row: f64 = (1..r).map(|j| t[0][j][s].powi(2)).sum();
    let mut minors = 0.0;
    for i in 1..r {
        for j in (i + 1)..r {
            minors += t[i][i][s] * t[j][j][s] - t[i][j][s].powi(2);
        }
    }
    (trace, split, first_row, minors)
}

/// `|Σ_s Σ_ij (t_ij^s)² − RHS|` for
///
/// ```text
/// RHS = ½ r²|H|² + ½ Σ_s (t_11^s − t_22^s − … − t_rr^s)²
///       + 2 Σ_s Σ_{j≥2} (t_1j^s)² − 2 Σ_s Σ_{2≤i<j} (t_ii^s t_jj^s − (t_ij^s)²)
/// ```
///
/// with `r²|H|² = Σ_s (Σ_i t_ii^s)²`. Holds for every symmetric array.
pub fn chen_frame_identity(t: &[Vec<Vec<f64>>]) -> GeomResult<f64> {
    let (_, ell) = shape(t)?;
    let mut rhs = 0.0;
    for s in 0..ell {
        let (trace, split, first_row, minors) = slice_terms(t, s);
        rhs += 0.5 * trace * trace + 0.5 * split * split + 2.0 * first_row - 2.0 * minors;
    }
    Ok((lhs(t) - rhs).abs())
}

/// The same identity in its commonly printed form, where the squared
/// split term carries neither the factor ½ nor the sum over `s` (only the
/// first slice enters). Kept to show that this form is wrong: it leaves a
/// residual of `0.5` on `diag(1,1,1)` with `ℓ = 1`.
pub fn chen_frame_identity_as_printed(t: &[Vec<Vec<f64>>]) -> GeomResult<f64> {
    let (_, ell) = shape(t)?;
    let mut rhs = 0.0;
    for s in 0..ell {
        let (trace, split, first_row, minors) = slice_terms(t, s);
        rhs += 0.5 * trace * trace + 2.0 * first_row - 2.0 * minors;
        if s == 0 {
            rhs += split * split;
        }
    }
    Ok((lhs(t) - rhs).abs())
}
