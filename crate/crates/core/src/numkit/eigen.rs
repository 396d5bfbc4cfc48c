use num_complex::Complex64;

use super::matrix::{ComplexMatrix, RealMatrix};
use crate::error::{Error, Result};

/// Sweep budget of the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `h[p][q]` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation that annihilates it.
pub fn hermitian_eigen(h: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    let residual = h.hermitian_residual();
    if !(residual < tol) {
        return Err(Error::NotHermitian { residual });
    }
    let n = h.n();
    let mut a = h.clone();
    // symmetrize so that the iteration sees an exactly Hermitian matrix
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let m = 0.5 * (a[(i, j)] + a[(j, i)].conj());
            a[(i, j)] = m;
            a[(j, i)] = m.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let frob = frobenius(&a);
    let threshold = f64::EPSILON * 1e-2 * frob;
    let mut converged = frob == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged || off_diagonal(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal(&a) > threshold {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new)] = v[(i, old)];
        }
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Convenience wrapper for real symmetric input.
pub fn symmetric_eigen(m: &RealMatrix, tol: f64) -> Result<(Vec<f64>, RealMatrix)> {
    let eig = hermitian_eigen(&m.to_complex()?, tol)?;
    let n = m.rows();
    let mut vecs = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            // real input keeps every rotation real
            vecs[(i, j)] = eig.eigenvectors[(i, j)].re;
        }
    }
    Ok((eig.eigenvalues, vecs))
}

/// 2-norm condition number `σ_max / σ_min` of a square matrix.
pub fn condition_number(t: &RealMatrix) -> Result<f64> {
    let tt = t.transpose().matmul(t)?.symmetrized();
    let (ev, _) = symmetric_eigen(&tt, f64::INFINITY)?;
    let max = ev.first().copied().unwrap_or(0.0);
    let min = ev.last().copied().unwrap_or(0.0);
    if !(min > 0.0) {
        return Ok(f64::INFINITY);
    }
    Ok((max / min).sqrt())
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.n();
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U = diag(1, conj(phase)) · [[c, s], [−s, c]]
    let pc = phase.conj();
    let u00 = Complex64::new(c, 0.0);
    let u01 = Complex64::new(s, 0.0);
    let u10 = -pc * s;
    let u11 = pc * c;

    // A ← A·U
    for i in 0..n {
        let x = a[(i, p)];
        let y = a[(i, q)];
        a[(i, p)] = x * u00 + y * u10;
        a[(i, q)] = x * u01 + y * u11;
    }
    // A ← U*·A
    for j in 0..n {
        let x = a[(p, j)];
        let y = a[(q, j)];
        a[(p, j)] = u00.conj() * x + u10.conj() * y;
        a[(q, j)] = u01.conj() * x + u11.conj() * y;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for i in 0..n {
        let x = v[(i, p)];
        let y = v[(i, q)];
        v[(i, p)] = x * u00 + y * u10;
        v[(i, q)] = x * u01 + y * u11;
    }
}

fn frobenius(a: &ComplexMatrix) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += a[(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

fn off_diagonal(a: &ComplexMatrix) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = hermitian_eigen(&ComplexMatrix::identity(2), 1e-9).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn reflection_spectrum() {
        let h = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let eig = hermitian_eigen(&h, 1e-9).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_by_one() {
        // i·A for the λ = (2) model: A = −2i on the single complex line.
        let a = c(0.0, -2.0);
        let h = ComplexMatrix::new(1, vec![c(0.0, 1.0) * a]).unwrap();
        let eig = hermitian_eigen(&h, 1e-9).unwrap();
        assert_eq!(eig.eigenvalues, vec![2.0]);
    }

    #[test]
    fn complex_off_diagonal() {
        // [[1, i], [−i, 1]] has characteristic polynomial (1 − μ)² − 1, roots 2 and 0.
        let h = ComplexMatrix::new(2, vec![c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)])
            .unwrap();
        let eig = hermitian_eigen(&h, 1e-9).unwrap();
        assert!((eig.eigenvalues[0] - 2.0).abs() < 1e-15);
        assert!(eig.eigenvalues[1].abs() < 1e-15);
        let hv = h.matmul(&eig.eigenvectors).unwrap();
        for k in 0..2 {
            for i in 0..2 {
                let d = hv[(i, k)] - eig.eigenvectors[(i, k)] * eig.eigenvalues[k];
                assert!(d.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = ComplexMatrix::new(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        assert!(matches!(
            hermitian_eigen(&h, 1e-9),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn condition_of_diagonal() {
        let t = RealMatrix::from_diagonal(&[2.0, -0.5, 1.0]);
        assert!((condition_number(&t).unwrap() - 4.0).abs() < 1e-12);
        let s = RealMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(condition_number(&s).unwrap() > 1e8);
    }
}
