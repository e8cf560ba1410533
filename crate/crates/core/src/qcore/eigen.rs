//! Hermitian eigenvalues via the real-symmetric embedding
//! `H = A + iB  ->  [[A, -B], [B, A]]`, diagonalized by cyclic Jacobi
//! rotations. Every eigenvalue of `H` appears twice in the embedding.

use super::Matrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix, ascending. The input is not checked.
pub fn hermitian_eigenvalues<T: Scalar>(h: &Matrix<T>) -> Vec<T> {
    let n = h.dim();
    let m = 2 * n;
    let mut a = vec![T::zero(); m * m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i * m + j] = z.re;
            a[(i + n) * m + j + n] = z.re;
            a[i * m + j + n] = -z.im;
            a[(i + n) * m + j] = z.im;
        }
    }
    let mut doubled = symmetric_eigenvalues(&mut a, m);
    doubled.sort_by(|x, y| x.partial_cmp(y).expect("NaN eigenvalue"));
    doubled.into_iter().step_by(2).collect()
}

/// Cyclic Jacobi on a dense symmetric `m x m` matrix (destroyed in place).
fn symmetric_eigenvalues<T: Scalar>(a: &mut [T], m: usize) -> Vec<T> {
    let two = T::lit(2.0);
    let scale = a.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()));
    if scale == T::zero() {
        return vec![T::zero(); m];
    }
    let stop = scale * T::epsilon() * T::lit(0.5);
    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..m {
            for q in (p + 1)..m {
                off = off.max(a[p * m + q].abs());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..m {
            for q in (p + 1)..m {
                let apq = a[p * m + q];
                if apq.abs() <= stop {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let theta = (aqq - app) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i * m + i]).collect()
}
