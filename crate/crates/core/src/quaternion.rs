//! Real 4×4 matrices of quaternion multiplication, with `q = q₀ + q₁i + q₂j + q₃k`
//! identified with `(q₀, q₁, q₂, q₃) ∈ R⁴`.

use crate::autodiff::Scalar;
use crate::linalg::Mat;

/// Unit imaginary quaternions `i, j, k`.
pub const IMAGINARY_UNITS: [[f64; 4]; 3] =
    [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];

/// Matrix of `q ↦ a·q`.
pub fn left_mul_matrix<S: Scalar>(a: &[S]) -> Mat<S> {
    let [a0, a1, a2, a3] = [a[0], a[1], a[2], a[3]];
    Mat::from_rows(&[
        vec![a0, -a1, -a2, -a3],
        vec![a1, a0, -a3, a2],
        vec![a2, a3, a0, -a1],
        vec![a3, -a2, a1, a0],
    ])
}

/// Matrix of `q ↦ q·b`.
pub fn right_mul_matrix<S: Scalar>(b: &[S]) -> Mat<S> {
    let [b0, b1, b2, b3] = [b[0], b[1], b[2], b[3]];
    Mat::from_rows(&[
        vec![b0, -b1, -b2, -b3],
        vec![b1, b0, b3, -b2],
        vec![b2, -b3, b0, b1],
        vec![b3, b2, -b1, b0],
    ])
}

/// Hamilton product.
pub fn mul(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    let v = left_mul_matrix(a).mul_vec(b);
    [v[0], v[1], v[2], v[3]]
}

/// Places copies of a 4×4 block on the diagonal of a `4m × 4m` matrix.
pub fn block_diagonal<S: Scalar>(block: &Mat<S>, m: usize) -> Mat<S> {
    let mut out = Mat::zeros(4 * m, 4 * m);
    for b in 0..m {
        for r in 0..4 {
            for c in 0..4 {
                out[(4 * b + r, 4 * b + c)] = block[(r, c)];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamilton_relations() {
        let [i, j, k] = IMAGINARY_UNITS;
        assert_eq!(mul(&i, &j), k);
        assert_eq!(mul(&j, &k), i);
        assert_eq!(mul(&k, &i), j);
        assert_eq!(mul(&j, &i), [0.0, 0.0, 0.0, -1.0]);
        assert_eq!(mul(&i, &i), [-1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn right_multiplication_matches_product() {
        let a = [0.3, -1.2, 0.5, 2.0];
        let b = [1.1, 0.4, -0.7, 0.2];
        let via_right = right_mul_matrix(&b).mul_vec(&a);
        let direct = mul(&a, &b);
        for t in 0..4 {
            assert!((via_right[t] - direct[t]).abs() < 1e-14);
        }
    }
}
