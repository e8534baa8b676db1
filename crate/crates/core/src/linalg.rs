//! Small dense linear algebra on fixed-size arrays.

use crate::scalar::{lit, Real, Scalar};

pub type Mat4<S> = [[S; 4]; 4];
pub type Mat3<T> = [[T; 3]; 3];

/// Inverse and determinant of a 4×4 matrix by Gauss-Jordan elimination with
/// partial pivoting on the value part. Returns `None` when a pivot vanishes.
pub fn invert4<T: Real, S: Scalar<T>>(m: &Mat4<S>) -> Option<(Mat4<S>, S)> {
    let mut a = *m;
    let mut inv: Mat4<S> =
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { S::cst(T::one()) } else { S::zero() }));
    let mut det = S::cst(T::one());
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if a[r][col].value().abs() > a[piv][col].value().abs() {
                piv = r;
            }
        }
        if a[piv][col].value() == T::zero() {
            return None;
        }
        if piv != col {
            a.swap(piv, col);
            inv.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det = det * p;
        let pinv = p.recip();
        for k in 0..4 {
            a[col][k] = a[col][k] * pinv;
            inv[col][k] = inv[col][k] * pinv;
        }
        for r in 0..4 {
            if r == col {
                continue;
            }
            let f = a[r][col];
            for k in 0..4 {
                a[r][k] = a[r][k] - f * a[col][k];
                inv[r][k] = inv[r][k] - f * inv[col][k];
            }
        }
    }
    Some((inv, det))
}

pub fn mat_mul4<T: Real>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut m = [[T::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                m[i][j] = m[i][j] + a[i][k] * b[k][j];
            }
        }
    }
    m
}

pub fn transpose<T: Copy, const N: usize>(a: &[[T; N]; N]) -> [[T; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

pub fn trace3<T: Real>(a: &Mat3<T>) -> T {
    a[0][0] + a[1][1] + a[2][2]
}

/// Frobenius square `Σ a_{ij}²`.
pub fn frob_sq<T: Real, const N: usize>(a: &[[T; N]; N]) -> T {
    a.iter().flatten().fold(T::zero(), |s, &v| s + v * v)
}

pub fn max_abs<T: Real, const N: usize>(a: &[[T; N]; N]) -> T {
    a.iter().flatten().fold(T::zero(), |m, &v| m.max(v.abs()))
}

/// Eigenvalues and eigenvectors (columns of the returned matrix) of a real
/// symmetric matrix by cyclic Jacobi rotations. Eigenvalues are sorted in
/// descending order.
pub fn sym_eigen<T: Real, const N: usize>(m: &[[T; N]; N]) -> ([T; N], [[T; N]; N]) {
    let mut a = *m;
    let mut v: [[T; N]; N] =
        std::array::from_fn(|i| std::array::from_fn(|j| if i == j { T::one() } else { T::zero() }));
    let scale = max_abs(m).max(T::min_positive_value());
    for _sweep in 0..64 {
        let mut off = T::zero();
        for p in 0..N {
            for q in p + 1..N {
                off = off + a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= T::epsilon() * lit::<T>(1e-3) * scale {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (lit::<T>(2.0) * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..N {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: [usize; N] = std::array::from_fn(|i| i);
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap_or(std::cmp::Ordering::Equal));
    let vals = std::array::from_fn(|k| a[order[k]][order[k]]);
    let vecs = std::array::from_fn(|r| std::array::from_fn(|k| v[r][order[k]]));
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet1;
    use approx::assert_relative_eq;

    #[test]
    fn inverse_of_known_matrix() {
        let m = [[2.0, 0.0, 0.0, 1.0], [0.0, 3.0, 0.0, 0.0], [0.0, 1.0, 1.0, 0.0], [1.0, 0.0, 0.0, 1.0]];
        let (inv, det) = invert4::<f64, f64>(&m).unwrap();
        assert_relative_eq!(det, 3.0, epsilon = 1e-14);
        let id = mat_mul4(&m, &inv);
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(id[i][j], if i == j { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = [[1.0, 2.0, 0.0, 0.0], [2.0, 4.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0; 4]];
        assert!(invert4::<f64, f64>(&m).is_none());
    }

    #[test]
    fn inverse_derivative_matches_formula() {
        // d(M⁻¹) = −M⁻¹ dM M⁻¹ along axis 0
        let base = [[2.0, 0.5, 0.0, 0.1], [0.0, 1.5, 0.2, 0.0], [0.3, 0.0, 1.0, 0.0], [0.0, 0.0, 0.4, 1.2]];
        let dm = [[0.1, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.2, 0.0, 0.0], [0.5, 0.0, 0.0, 0.0]];
        let jm: Mat4<Jet1<f64>> =
            std::array::from_fn(|i| std::array::from_fn(|j| Jet1 { val: base[i][j], grad: [dm[i][j], 0.0, 0.0, 0.0] }));
        let (inv, _) = invert4::<f64, Jet1<f64>>(&jm).unwrap();
        let (plain, _) = invert4::<f64, f64>(&base).unwrap();
        let d = mat_mul4(&mat_mul4(&plain, &dm), &plain);
        for i in 0..4 {
            for j in 0..4 {
                assert_relative_eq!(inv[i][j].grad[0], -d[i][j], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn jacobi_eigen_sorted() {
        let m = [[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, -1.0]];
        let (vals, vecs) = sym_eigen(&m);
        assert_relative_eq!(vals[0], 3.0, epsilon = 1e-14);
        assert_relative_eq!(vals[1], 1.0, epsilon = 1e-14);
        assert_relative_eq!(vals[2], -1.0, epsilon = 1e-14);
        for k in 0..3 {
            for i in 0..3 {
                let mv: f64 = (0..3).map(|j| m[i][j] * vecs[j][k]).sum();
                assert_relative_eq!(mv, vals[k] * vecs[i][k], epsilon = 1e-13);
            }
        }
    }
}
