//! Dense Hermitian eigensolver for the small matrices this crate deals in.
//!
//! Level schemes here have N ≤ 8 or so; a cyclic complex Jacobi iteration
//! converges to machine precision in a handful of sweeps at that size and
//! avoids dragging a LAPACK binding into the build.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending; `vectors` holds the corresponding
/// eigenvectors as columns. Each eigenvector's phase is fixed so that its
/// largest-magnitude component is real and positive.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Array1<f64>,
    pub vectors: Array2<C64>,
}

/// Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// The strict lower triangle is ignored; the input is taken to be Hermitian
/// with real diagonal. Panics if the matrix is not square.
pub fn eigh(matrix: &Array2<C64>) -> Eigh {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "eigh: matrix must be square");

    let mut a = matrix.clone();
    let mut v: Array2<C64> = Array2::eye(n);

    let norm: f64 = matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = 1e-30 * norm.max(f64::MIN_POSITIVE);

    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));

    let values = Array1::from_iter(order.iter().map(|&i| a[(i, i)].re));
    let mut vectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        // phase convention: largest component real positive
        let mut pivot = C64::new(1.0, 0.0);
        let mut best = 0.0;
        for r in 0..n {
            let m = v[(r, src)].norm();
            if m > best {
                best = m;
                pivot = v[(r, src)];
            }
        }
        let phase = if best > 0.0 { pivot.conj() / best } else { C64::new(1.0, 0.0) };
        for r in 0..n {
            vectors[(r, col)] = v[(r, src)] * phase;
        }
    }
    Eigh { values, vectors }
}

/// One Jacobi rotation annihilating the (p, q) off-diagonal entry.
fn rotate(a: &mut Array2<C64>, v: &mut Array2<C64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    let scale = a[(p, p)].re.abs() + a[(q, q)].re.abs();
    if mag <= f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
        return;
    }
    let phase = apq / mag; // e^{iφ}
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
    // smaller root of t² − 2τt − 1 = 0
    let t = if tau == 0.0 {
        1.0
    } else {
        -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = a.nrows();
    // A ← J† A J with J[p][p]=c, J[p][q]=−s·e^{iφ}, J[q][p]=s·e^{−iφ}, J[q][q]=c
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * s * phase.conj();
        a[(k, q)] = -akp * s * phase + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * s * phase;
        a[(q, k)] = -apk * s * phase.conj() + aqk * c;
    }
    // clean up the annihilated pair and enforce a real diagonal
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * s * phase.conj();
        v[(k, q)] = -vkp * s * phase + vkq * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn residual(m: &Array2<C64>, e: &Eigh) -> f64 {
        let n = m.nrows();
        let mut worst = 0.0_f64;
        for j in 0..n {
            for i in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..n {
                    acc += m[(i, k)] * e.vectors[(k, j)];
                }
                acc -= e.vectors[(i, j)] * e.values[j];
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    #[test]
    fn pauli_x_spectrum() {
        let m = array![
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ];
        let e = eigh(&m);
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(residual(&m, &e) < 1e-14);
    }

    #[test]
    fn complex_hermitian_residual() {
        // deterministic pseudo-random Hermitian fill
        let n = 5;
        let mut m: Array2<C64> = Array2::zeros((n, n));
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1_u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            m[(i, i)] = C64::new(next(), 0.0);
            for j in (i + 1)..n {
                let z = C64::new(next(), next());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        let e = eigh(&m);
        assert!(residual(&m, &e) < 1e-13);
        for j in 0..n - 1 {
            assert!(e.values[j] <= e.values[j + 1]);
        }
        // orthonormality
        for a in 0..n {
            for b in 0..n {
                let mut dot = C64::new(0.0, 0.0);
                for k in 0..n {
                    dot += e.vectors[(k, a)].conj() * e.vectors[(k, b)];
                }
                let target = if a == b { 1.0 } else { 0.0 };
                assert!((dot - target).norm() < 1e-13);
            }
        }
    }
}
