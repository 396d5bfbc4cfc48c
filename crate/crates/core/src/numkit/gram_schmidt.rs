use super::matrix::{axpy, Cholesky, RealMatrix};
use crate::error::{check_len, Error, Result};

/// Orthonormalizes `vectors` in order against the inner product given by `gram`.
///
/// Each candidate is orthogonalized twice against the vectors already accepted,
/// which keeps the output orthonormal to working precision even when the gram
/// matrix is poorly conditioned.
pub fn gram_schmidt(vectors: &[Vec<f64>], gram: &RealMatrix, tol: f64) -> Result<Vec<Vec<f64>>> {
    check_spd(gram)?;
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        check_len(gram.rows(), v.len())?;
        let w = orthogonalize(v, &out, gram);
        let norm = gram.form(&w, &w).max(0.0).sqrt();
        if !(norm >= tol) {
            return Err(Error::DependentInput {
                index,
                residual: norm,
            });
        }
        out.push(w.iter().map(|x| x / norm).collect());
    }
    Ok(out)
}

/// Picks `count` orthonormal vectors spanning the same space as `candidates`,
/// always taking the candidate with the largest remaining residual next
/// (lowest index on ties).
pub(crate) fn pivoted_gram_schmidt(
    candidates: &[Vec<f64>],
    gram: &RealMatrix,
    count: usize,
    tol: f64,
) -> Result<Vec<Vec<f64>>> {
    check_spd(gram)?;
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut used = vec![false; candidates.len()];
    while out.len() < count {
        let mut best: Option<(usize, Vec<f64>, f64)> = None;
        for (i, c) in candidates.iter().enumerate() {
            if used[i] {
                continue;
            }
            let w = orthogonalize(c, &out, gram);
            let norm = gram.form(&w, &w).max(0.0).sqrt();
            if best.as_ref().is_none_or(|(_, _, b)| norm > *b) {
                best = Some((i, w, norm));
            }
        }
        let Some((i, w, norm)) = best else {
            return Err(Error::DegenerateMetric);
        };
        if !(norm >= tol) {
            return Err(Error::DependentInput {
                index: i,
                residual: norm,
            });
        }
        used[i] = true;
        out.push(w.iter().map(|x| x / norm).collect());
    }
    Ok(out)
}

fn orthogonalize(v: &[f64], basis: &[Vec<f64>], gram: &RealMatrix) -> Vec<f64> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        for q in basis {
            let c = gram.form(q, &w);
            axpy(&mut w, -c, q);
        }
    }
    w
}

/// Symmetric positive-definite test: symmetric to a relative 1e-12 and Cholesky succeeds.
pub fn is_spd(m: &RealMatrix) -> bool {
    check_spd(m).is_ok()
}

pub(crate) fn check_spd(m: &RealMatrix) -> Result<()> {
    if !m.is_square() || m.symmetry_residual() > 1e-12 * m.max_abs().max(1.0) {
        return Err(Error::DegenerateMetric);
    }
    Cholesky::factor(m).map(|_| ())
}

/// Maximum deviation of the pairwise inner products from the Kronecker delta.
pub fn orthonormality_residual(vectors: &[Vec<f64>], gram: &RealMatrix) -> f64 {
    let mut r: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            r = r.max((gram.form(a, b) - delta).abs());
        }
    }
    r
}
