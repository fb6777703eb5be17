//! Cyclic Jacobi eigenvalue iteration for small real symmetric matrices.

use crate::Real;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a real symmetric `N×N` matrix, ascending.
///
/// Only the upper triangle is read; the lower triangle is assumed to mirror it.
pub fn symmetric_eigenvalues<T: Real, const N: usize>(mut a: [[T; N]; N]) -> [T; N] {
    for i in 0..N {
        for j in 0..i {
            a[i][j] = a[j][i];
        }
    }
    let scale = a
        .iter()
        .flatten()
        .fold(T::zero(), |m, x| m.max(x.abs()));
    if scale == T::zero() {
        return [T::zero(); N];
    }
    let threshold = T::epsilon() * T::epsilon() * scale * scale;

    for _ in 0..MAX_SWEEPS {
        let off: T = (0..N)
            .flat_map(|p| (p + 1..N).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off <= threshold {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] == T::zero() {
                    continue;
                }
                rotate(&mut a, p, q);
            }
        }
    }

    let mut ev: [T; N] = std::array::from_fn(|i| a[i][i]);
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate<T: Real, const N: usize>(a: &mut [[T; N]; N], p: usize, q: usize) {
    let two = T::lit(2.0);
    let theta = (a[q][q] - a[p][p]) / (two * a[p][q]);
    let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
    let c = T::one() / (t * t + T::one()).sqrt();
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
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let ev = symmetric_eigenvalues([[3.0, 0.0], [0.0, -1.0]]);
        assert_eq!(ev, [-1.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let (a, b, c) = (1.3f64, -0.7, 2.2);
        let ev = symmetric_eigenvalues([[a, b], [b, c]]);
        let mid = (a + c) / 2.0;
        let r = (((a - c) / 2.0).powi(2) + b * b).sqrt();
        assert!((ev[0] - (mid - r)).abs() < 1e-14);
        assert!((ev[1] - (mid + r)).abs() < 1e-14);
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        let m = [
            [4.0, 1.0, -2.0, 0.5],
            [1.0, -3.0, 0.25, 2.0],
            [-2.0, 0.25, 1.0, -1.0],
            [0.5, 2.0, -1.0, 0.0],
        ];
        let ev = symmetric_eigenvalues(m);
        let tr: f64 = ev.iter().sum();
        let fro: f64 = ev.iter().map(|x| x * x).sum();
        let fro_m: f64 = m.iter().flatten().map(|x| x * x).sum();
        assert!((tr - 2.0).abs() < 1e-12);
        assert!((fro - fro_m).abs() < 1e-11);
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(symmetric_eigenvalues([[0.0f32; 3]; 3]), [0.0; 3]);
    }
}
