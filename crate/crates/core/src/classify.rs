//! Classification of Kenmotsu Lie algebras.
//!
//! A Kenmotsu Lie algebra splits as `g = h ⊕ ℝξ` with `h = ξ^⊥` an abelian
//! ideal. On `h`, `D = ad_ξ` and `J = φ|_h` satisfy `[J, D] = 0` and
//! `D + Dᵗ = −2·Id`, so `A = D + Id` is skew and complex-linear for the complex
//! structure `J`. Then `i·A` is Hermitian on `(h, J)`, and an orthonormal
//! eigenbasis `e_j` with eigenvalues `λ_j` gives
//! `D e_j = −e_j − λ_j J e_j` and `D J e_j = −J e_j + λ_j e_j`, which are the
//! brackets of the model `g_λ`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{check_len, Error, Result};
use crate::kenmotsu::{verify_almost_contact, AlmostContactData, VerificationReport};
use crate::liealg::{pushforward, MetricLieAlgebra, Subspace};
use crate::model::{model_algebra, Lambda};
use crate::numkit::{
    axpy, dot, hermitian_eigen, max_abs, pivoted_gram_schmidt, unit_vector, ComplexMatrix,
    RealMatrix,
};

/// `D`, `J` and the orthonormal basis of `h` they are expressed in.
#[derive(Debug, Clone)]
pub struct RestrictedData {
    /// Gram-orthonormal basis of `h = ξ^⊥`, in input coordinates.
    pub h_basis: Vec<Vec<f64>>,
    /// Matrix of `x ↦ [ξ, x]` on `h_basis`.
    pub d: RealMatrix,
    /// Matrix of `φ` on `h_basis`.
    pub j: RealMatrix,
    pub report: VerificationReport,
}

impl RestrictedData {
    pub fn n(&self) -> usize {
        self.h_basis.len() / 2
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalForm {
    /// Sorted descending.
    pub lambdas: Vec<f64>,
    /// Columns are the input-basis coordinates of `ξ, e₁, Je₁, …, eₙ, Jeₙ`;
    /// maps model coordinates to input coordinates.
    #[serde(serialize_with = "ser_matrix")]
    pub basis_change: RealMatrix,
    /// Mismatch between the input and the reconstructed structure, see
    /// [`metric_distance`].
    pub residual: f64,
    /// `max ‖[ξ,e_j] + e_j + λ_j Je_j‖`, `‖[ξ,Je_j] + Je_j − λ_j e_j‖`.
    pub eigen_residual: f64,
}

fn ser_matrix<S: serde::Serializer>(m: &RealMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&m.to_rows(), s)
}

/// Gram-orthonormal basis of `ξ^⊥`.
pub fn reeb_complement(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    tol: f64,
) -> Result<Subspace> {
    let report = verify_almost_contact(alg, data, tol)?;
    if !report.pass() {
        return Err(Error::AlmostContactViolation(Box::new(report)));
    }
    let d = alg.dim();
    if d == 1 {
        return Subspace::new(1, Vec::new());
    }
    let xi = data.xi();
    let candidates: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            let mut v = unit_vector(d, k);
            let eta = alg.inner(&v, xi);
            axpy(&mut v, -eta, xi);
            v
        })
        .collect();
    // Numerical rank threshold; unrelated to the check tolerance, since in a
    // badly scaled basis legitimate candidates can have tiny norms.
    let scale = candidates.iter().map(|v| alg.norm(v)).fold(0.0, f64::max);
    let basis = pivoted_gram_schmidt(&candidates, alg.gram(), d - 1, f64::EPSILON * scale)
        .map_err(|_| Error::DegenerateMetric)?;
    Subspace::new(d, basis)
}

fn matrix_on_basis(
    alg: &MetricLieAlgebra,
    basis: &[Vec<f64>],
    f: impl Fn(&[f64]) -> Result<Vec<f64>>,
) -> Result<RealMatrix> {
    let k = basis.len();
    let mut m = RealMatrix::zeros(k, k);
    for (b, hb) in basis.iter().enumerate() {
        let image = f(hb)?;
        for (a, ha) in basis.iter().enumerate() {
            m[(a, b)] = alg.inner(ha, &image);
        }
    }
    Ok(m)
}

/// Extracts `D = ad_ξ|_h` and `J = φ|_h` and checks `J² = −Id`, `[J, D] = 0`,
/// `D + Dᵗ = −2·Id` and that `h` is abelian.
pub fn restricted_data(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    h: &Subspace,
    tol: f64,
) -> Result<RestrictedData> {
    check_len(alg.dim(), h.ambient_dim())?;
    let basis = h.basis().to_vec();
    let k = basis.len();
    let mut report = VerificationReport::new();
    if k == 0 {
        return Ok(RestrictedData {
            h_basis: basis,
            d: RealMatrix::zeros(1, 1),
            j: RealMatrix::zeros(1, 1),
            report,
        });
    }
    let xi = data.xi();
    let d = matrix_on_basis(alg, &basis, |x| alg.bracket(xi, x))?;
    let j = matrix_on_basis(alg, &basis, |x| data.phi().mul_vec(x))?;

    let j_square = j.matmul(&j)?.add(&RealMatrix::identity(k))?.max_abs();
    let commute = j.commutator(&d)?.max_abs();
    let normal = d
        .add(&d.transpose())?
        .add(&RealMatrix::identity(k).scale(2.0))?
        .max_abs();
    let mut abelian: f64 = 0.0;
    for a in 0..k {
        for b in (a + 1)..k {
            abelian = abelian.max(alg.norm(&alg.bracket(&basis[a], &basis[b])?));
        }
    }
    report.add("j_square", j_square, tol);
    report.add("j_commutes_d", commute, tol);
    report.add("d_plus_dt", normal, tol);
    report.add("h_abelian", abelian, tol);

    for (check, residual) in [
        ("j_square", j_square),
        ("j_commutes_d", commute),
        ("d_plus_dt", normal),
    ] {
        if !(residual < tol) {
            return Err(Error::KahlerViolation { check, residual });
        }
    }
    if !(abelian < tol) {
        return Err(Error::NonAbelianComplement { residual: abelian });
    }
    Ok(RestrictedData {
        h_basis: basis,
        d,
        j,
        report,
    })
}

/// Complex-orthonormal basis `u₁, Ju₁, …, uₙ, Juₙ` of `ℝ^{2n}`: each `u` is the
/// lowest-index standard vector whose component orthogonal to the previous
/// choices has norm at least `1/√(2n)`, normalized.
fn complex_basis(j: &RealMatrix) -> Vec<(Vec<f64>, Vec<f64>)> {
    let k = j.rows();
    let n = k / 2;
    let threshold = 1.0 / (k as f64).sqrt();
    let mut span: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut pairs = Vec::with_capacity(n);
    let project = |v: &mut Vec<f64>, span: &[Vec<f64>]| {
        for _ in 0..2 {
            for q in span {
                let c = dot(q, v);
                axpy(v, -c, q);
            }
        }
    };
    for _ in 0..n {
        let mut chosen = None;
        for idx in 0..k {
            let mut w = unit_vector(k, idx);
            project(&mut w, &span);
            let norm = dot(&w, &w).sqrt();
            if norm >= threshold {
                chosen = Some(w.iter().map(|x| x / norm).collect::<Vec<f64>>());
                break;
            }
        }
        let u = chosen
            .expect("an orthogonal complement of dimension ≥ 2 has a large standard component");
        span.push(u.clone());
        let mut ju = j.mul_vec(&u).expect("square");
        project(&mut ju, &span);
        let norm = dot(&ju, &ju).sqrt();
        let ju: Vec<f64> = ju.iter().map(|x| x / norm).collect();
        span.push(ju.clone());
        pairs.push((u, ju));
    }
    pairs
}

fn hermitian_part(h: &ComplexMatrix) -> ComplexMatrix {
    let n = h.n();
    let mut out = ComplexMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            out[(r, c)] = 0.5 * (h[(r, c)] + h[(c, r)].conj());
        }
    }
    out
}

/// Rotates an eigenvector so its largest-magnitude component is real positive.
fn fix_phase(v: &mut [Complex64]) {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let r = v[best].norm();
    if r > 0.0 {
        let phase = v[best].conj() / r;
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Relative entrywise distance between two structures on the same basis.
pub fn structure_distance(
    a: (&MetricLieAlgebra, &AlmostContactData),
    b: (&MetricLieAlgebra, &AlmostContactData),
) -> f64 {
    if a.0.dim() != b.0.dim() {
        return f64::INFINITY;
    }
    let rel = |x: &[f64], y: &[f64]| {
        let diff = x
            .iter()
            .zip(y)
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        diff / max_abs(x).max(1.0)
    };
    rel(a.0.structure(), b.0.structure())
        .max(rel(a.0.gram().data(), b.0.gram().data()))
        .max(rel(a.1.phi().data(), b.1.phi().data()))
        .max(rel(a.1.xi(), b.1.xi()))
}

/// Distance between two structures on the same basis `b₁, …, b_d`, measured
/// in the metric of `a` and normalized by the lengths of the basis vectors:
/// the maximum of `‖δ[bᵢ,bⱼ]‖ / (‖bᵢ‖‖bⱼ‖)`, `|δ⟨bᵢ,bⱼ⟩| / (‖bᵢ‖‖bⱼ‖)`,
/// `‖δφ bᵢ‖ / ‖bᵢ‖` and `‖δξ‖`.
///
/// In a badly scaled basis raw entries differ in size by up to the condition
/// number of the basis, so an entrywise distance over- or under-weights whole
/// directions. This measure is what the entrywise distance becomes in an
/// orthonormal basis, without re-expressing the (rounded) input in such a
/// basis, which would amplify its rounding error by the same condition number.
pub fn metric_distance(
    a: (&MetricLieAlgebra, &AlmostContactData),
    b: (&MetricLieAlgebra, &AlmostContactData),
) -> f64 {
    let d = a.0.dim();
    if b.0.dim() != d || a.1.dim() != d || b.1.dim() != d {
        return f64::INFINITY;
    }
    let g = a.0.gram();
    let len: Vec<f64> = (0..d).map(|i| g[(i, i)].sqrt()).collect();
    let norm = |x: &[f64], y: &[f64]| {
        let diff: Vec<f64> = x.iter().zip(y).map(|(p, q)| p - q).collect();
        g.form(&diff, &diff).max(0.0).sqrt()
    };
    let mut worst = norm(a.1.xi(), b.1.xi());
    let (pa, pb) = (a.1.phi(), b.1.phi());
    for i in 0..d {
        worst = worst.max(norm(&pa.column(i), &pb.column(i)) / len[i]);
        for j in 0..d {
            let scale = len[i] * len[j];
            worst = worst.max((g[(i, j)] - b.0.gram()[(i, j)]).abs() / scale);
            if i < j {
                worst = worst.max(norm(a.0.basis_bracket(i, j), b.0.basis_bracket(i, j)) / scale);
            }
        }
    }
    worst
}

/// Normal form `(λ, basis change)` of a Kenmotsu Lie algebra.
pub fn normal_form(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    tol: f64,
) -> Result<NormalForm> {
    let h = reeb_complement(alg, data, tol)?;
    let rd = restricted_data(alg, data, &h, tol)?;
    let dim = alg.dim();
    let n = rd.n();
    let xi = data.xi().to_vec();

    if n == 0 {
        let basis_change = RealMatrix::from_columns(&[xi])?;
        return finish(alg, data, Vec::new(), basis_change, 0.0, tol);
    }

    let k = 2 * n;
    let a = rd.d.add(&RealMatrix::identity(k))?;
    let pairs = complex_basis(&rd.j);
    // In the real basis (u₁, Ju₁, …) a complex-linear map has 2×2 blocks
    // [[x, −y], [y, x]] ↔ x + iy. Projecting each block onto that form (and
    // then onto Hermitian matrices) discards the rounding noise that the
    // gates above already bounded, instead of letting it bias λ.
    let images: Vec<(Vec<f64>, Vec<f64>)> = pairs
        .iter()
        .map(|(u, ju)| Ok((a.mul_vec(u)?, a.mul_vec(ju)?)))
        .collect::<Result<_>>()?;
    let mut m = ComplexMatrix::zeros(n);
    for (col, (au, aju)) in images.iter().enumerate() {
        for (row, (u, ju)) in pairs.iter().enumerate() {
            let x = 0.5 * (dot(u, au) + dot(ju, aju));
            let y = 0.5 * (dot(ju, au) - dot(u, aju));
            m[(row, col)] = Complex64::new(x, y);
        }
    }
    let herm = hermitian_part(&m.scale(Complex64::new(0.0, 1.0)));
    let eig = hermitian_eigen(&herm, tol).map_err(|e| match e {
        Error::NotHermitian { residual } => Error::KahlerViolation {
            check: "complex_skewness",
            residual,
        },
        other => other,
    })?;

    let lift = |coords: &[f64]| {
        let mut v = vec![0.0; dim];
        for (c, hb) in coords.iter().zip(&rd.h_basis) {
            axpy(&mut v, *c, hb);
        }
        v
    };
    let mut columns = vec![xi];
    for col in 0..n {
        let mut v = eig.eigenvectors.column(col);
        fix_phase(&mut v);
        let mut e = vec![0.0; k];
        let mut je = vec![0.0; k];
        for (z, (u, ju)) in v.iter().zip(&pairs) {
            // (a + ib)·u = a u + b Ju, and J(a u + b Ju) = a Ju − b u
            axpy(&mut e, z.re, u);
            axpy(&mut e, z.im, ju);
            axpy(&mut je, z.re, ju);
            axpy(&mut je, -z.im, u);
        }
        columns.push(lift(&e));
        columns.push(lift(&je));
    }
    let basis_change = RealMatrix::from_columns(&columns)?;
    let lambdas = eig.eigenvalues;
    let eigen_residual = lemma_residual(alg, data, &lambdas, &basis_change)?;
    finish(alg, data, lambdas, basis_change, eigen_residual, tol)
}

fn finish(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    lambdas: Vec<f64>,
    basis_change: RealMatrix,
    eigen_residual: f64,
    tol: f64,
) -> Result<NormalForm> {
    let mut nf = NormalForm {
        lambdas,
        basis_change,
        residual: f64::INFINITY,
        eigen_residual,
    };
    let (ra, rs) = reconstruct(&nf)?;
    nf.residual = metric_distance((alg, data), (&ra, &rs));
    if !(nf.residual < tol) {
        return Err(Error::ReconstructionMismatch {
            residual: nf.residual,
        });
    }
    Ok(nf)
}

/// Checks `D e_j = −e_j − λ_j Je_j` and `D Je_j = −Je_j + λ_j e_j` for the
/// columns of a basis change, with `D = ad_ξ`, measured in the metric.
pub fn lemma_residual(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    lambdas: &[f64],
    basis_change: &RealMatrix,
) -> Result<f64> {
    check_len(2 * lambdas.len() + 1, basis_change.cols())?;
    let xi = data.xi();
    let mut worst: f64 = 0.0;
    for (j, &l) in lambdas.iter().enumerate() {
        let e = basis_change.column(2 * j + 1);
        let je = basis_change.column(2 * j + 2);
        let mut r1 = alg.bracket(xi, &e)?;
        axpy(&mut r1, 1.0, &e);
        axpy(&mut r1, l, &je);
        let mut r2 = alg.bracket(xi, &je)?;
        axpy(&mut r2, 1.0, &je);
        axpy(&mut r2, -l, &e);
        worst = worst.max(alg.norm(&r1)).max(alg.norm(&r2));
    }
    Ok(worst)
}

/// Pushes the model `g_λ` forward along the stored basis change.
pub fn reconstruct(nf: &NormalForm) -> Result<(MetricLieAlgebra, AlmostContactData)> {
    let (ma, ms) = model_algebra(&Lambda::new(nf.lambdas.clone())?);
    pushforward(&ma, &ms, &nf.basis_change)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::is_ideal;
    use crate::rng::{random_invertible, SplitMix64};

    fn model(l: &[f64]) -> (MetricLieAlgebra, AlmostContactData) {
        model_algebra(&Lambda::new(l.to_vec()).unwrap())
    }

    #[test]
    fn metric_distance_ignores_basis_scaling() {
        let (a, s) = model(&[1.5]);
        assert_eq!(metric_distance((&a, &s), (&a, &s)), 0.0);
        let p = a.perturbed(0, 1, 2, 1e-3).unwrap();
        let base = metric_distance((&a, &s), (&p, &s));
        assert!((base - 1e-3).abs() < 1e-15, "{base}");

        let t = RealMatrix::from_diagonal(&[1e-2, 30.0, 0.5]);
        let (ta, ts) = pushforward(&a, &s, &t).unwrap();
        let (tp, tps) = pushforward(&p, &s, &t).unwrap();
        let scaled = metric_distance((&ta, &ts), (&tp, &tps));
        assert!((scaled - base).abs() < 1e-12, "{scaled} vs {base}");
    }

    #[test]
    fn reeb_complement_of_model() {
        let (a, s) = model(&[2.0, -1.0]);
        let h = reeb_complement(&a, &s, 1e-9).unwrap();
        assert_eq!(h.dim(), 4);
        for v in h.basis() {
            assert_eq!(v[0], 0.0);
        }
        assert!(is_ideal(&a, &h, 1e-9).unwrap().pass);

        let (a1, s1) = model(&[]);
        assert_eq!(reeb_complement(&a1, &s1, 1e-9).unwrap().dim(), 0);
    }

    #[test]
    fn reeb_complement_after_pushforward_is_ideal() {
        let (a, s) = model(&[0.5, 3.0]);
        let t = random_invertible(&mut SplitMix64::new(3), 5, 100.0).unwrap();
        let (pa, ps) = pushforward(&a, &s, &t).unwrap();
        let h = reeb_complement(&pa, &ps, 1e-9).unwrap();
        assert_eq!(h.dim(), 4);
        assert!(is_ideal(&pa, &h, 1e-9).unwrap().pass);
    }

    #[test]
    fn restricted_data_of_model() {
        let (a, s) = model(&[2.0]);
        let h = reeb_complement(&a, &s, 1e-9).unwrap();
        let rd = restricted_data(&a, &s, &h, 1e-9).unwrap();
        let expected = RealMatrix::from_rows(&[vec![-1.0, 2.0], vec![-2.0, -1.0]]).unwrap();
        assert_eq!(rd.d, expected);
        assert!(rd.report.pass());

        let (a, s) = model(&[0.0]);
        let h = reeb_complement(&a, &s, 1e-9).unwrap();
        let rd = restricted_data(&a, &s, &h, 1e-9).unwrap();
        assert_eq!(rd.d, RealMatrix::identity(2).scale(-1.0));
    }

    #[test]
    fn restricted_determinant_is_product_of_block_determinants() {
        let l = [1.5, -0.5, 3.0];
        let (a, s) = model(&l);
        let h = reeb_complement(&a, &s, 1e-9).unwrap();
        let rd = restricted_data(&a, &s, &h, 1e-9).unwrap();
        let expected: f64 = l.iter().map(|x| 1.0 + x * x).product();
        assert!((rd.d.determinant().unwrap() - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn kahler_violation_detected() {
        // ad_ξ without the −Id part: D + Dᵗ = 0
        let phi = model(&[1.0]).1;
        let a = MetricLieAlgebra::from_brackets(
            3,
            &[(0, 1, vec![0.0, 0.0, -1.0]), (0, 2, vec![0.0, 1.0, 0.0])],
            RealMatrix::identity(3),
        )
        .unwrap();
        let h = reeb_complement(&a, &phi, 1e-9).unwrap();
        assert!(matches!(
            restricted_data(&a, &phi, &h, 1e-9),
            Err(Error::KahlerViolation {
                check: "d_plus_dt",
                ..
            })
        ));
    }

    #[test]
    fn non_abelian_complement_detected() {
        let (a, s) = model(&[0.0, 0.0]);
        // add [e1, f1] = e2 on top of the model brackets
        let p = a.perturbed(1, 2, 3, 1.0).unwrap();
        let h = reeb_complement(&p, &s, 1e-9).unwrap();
        assert!(matches!(
            restricted_data(&p, &s, &h, 1e-9),
            Err(Error::NonAbelianComplement { .. })
        ));
    }

    #[test]
    fn normal_form_of_model_is_identity() {
        let (a, s) = model(&[3.0, 1.0]);
        let nf = normal_form(&a, &s, 1e-9).unwrap();
        assert_eq!(nf.lambdas, vec![3.0, 1.0]);
        assert!(
            nf.basis_change
                .sub(&RealMatrix::identity(5))
                .unwrap()
                .max_abs()
                < 1e-14
        );
        assert!(nf.residual < 1e-14);
    }

    #[test]
    fn normal_form_sorts_descending() {
        let (a, s) = model(&[-2.0, 4.0, 0.5]);
        let nf = normal_form(&a, &s, 1e-9).unwrap();
        assert_eq!(nf.lambdas, vec![4.0, 0.5, -2.0]);
    }

    #[test]
    fn normal_form_one_dimensional() {
        let (a, s) = model(&[]);
        let nf = normal_form(&a, &s, 1e-9).unwrap();
        assert!(nf.lambdas.is_empty());
        assert_eq!(nf.basis_change, RealMatrix::identity(1));
        let (ra, rs) = reconstruct(&nf).unwrap();
        assert_eq!((ra, rs), (a, s));
    }

    #[test]
    fn normal_form_after_pushforward() {
        let (a, s) = model(&[2.0]);
        let t = random_invertible(&mut SplitMix64::new(11), 3, 1e4).unwrap();
        let (pa, ps) = pushforward(&a, &s, &t).unwrap();
        let nf = normal_form(&pa, &ps, 1e-7).unwrap();
        assert!((nf.lambdas[0] - 2.0).abs() < 1e-7);
        assert!(nf.eigen_residual < 1e-7);
        let (ra, rs) = reconstruct(&nf).unwrap();
        assert!(structure_distance((&pa, &ps), (&ra, &rs)) < 1e-8);
    }

    #[test]
    fn swapping_blocks_keeps_spectrum() {
        let (a, s) = model(&[1.0, -3.0]);
        // exchange (e1, f1) with (e2, f2); φ is conjugated consistently by pushforward
        let mut t = RealMatrix::zeros(5, 5);
        for (from, to) in [(0, 0), (1, 3), (2, 4), (3, 1), (4, 2)] {
            t[(to, from)] = 1.0;
        }
        let (pa, ps) = pushforward(&a, &s, &t).unwrap();
        assert_eq!(
            normal_form(&pa, &ps, 1e-9).unwrap().lambdas,
            vec![1.0, -3.0]
        );
    }

    #[test]
    fn sign_of_lambda_is_an_invariant() {
        let p = normal_form(&model(&[1.5]).0, &model(&[1.5]).1, 1e-9).unwrap();
        let m = normal_form(&model(&[-1.5]).0, &model(&[-1.5]).1, 1e-9).unwrap();
        assert_eq!(p.lambdas, vec![1.5]);
        assert_eq!(m.lambdas, vec![-1.5]);
    }
}
