//! Almost contact metric axioms, the Kenmotsu condition and its consequences,
//! all checked on a metric Lie algebra.
//!
//! Every check is evaluated on the vectors of a gram-orthonormal frame (the
//! Gram–Schmidt orthonormalization of the input basis) and residual vectors are
//! measured by their largest frame coordinate. For inputs whose gram matrix is
//! the identity the frame is the input basis itself, so residuals are exactly
//! the basis-vector residuals; for other inputs they are the same quantities
//! in an orthonormal basis, which is what makes them comparable across
//! isomorphic structures.

use crate::connection::levi_civita_table;
use crate::error::{check_len, Error, Result};
use crate::liealg::{change_basis, MetricLieAlgebra};
use crate::numkit::{gram_schmidt, max_abs, unit_vector, RealMatrix};
pub use crate::report::{VerificationCheck, VerificationReport};

/// The pair `(φ, ξ)`; `η(x) = ⟨x, ξ⟩` is derived from the metric.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostContactData {
    phi: RealMatrix,
    xi: Vec<f64>,
}

impl AlmostContactData {
    pub fn new(phi: RealMatrix, xi: Vec<f64>) -> Result<Self> {
        if !phi.is_square() {
            return Err(Error::DimensionMismatch {
                expected: phi.rows(),
                found: phi.cols(),
            });
        }
        check_len(phi.rows(), xi.len())?;
        if xi.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidStructure("non-finite xi".into()));
        }
        Ok(Self { phi, xi })
    }

    pub fn phi(&self) -> &RealMatrix {
        &self.phi
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn scaled_phi(&self, s: f64) -> Self {
        Self {
            phi: self.phi.scale(s),
            xi: self.xi.clone(),
        }
    }
}

/// Gram-orthonormal frame of the input basis: columns of `frame` are the
/// frame vectors, `coords = frameᵀ·gram` maps input coordinates to frame ones.
pub(crate) fn orthonormal_frame(alg: &MetricLieAlgebra) -> Result<(RealMatrix, RealMatrix)> {
    let d = alg.dim();
    let basis: Vec<Vec<f64>> = (0..d).map(|i| unit_vector(d, i)).collect();
    let frame = RealMatrix::from_columns(&gram_schmidt(&basis, alg.gram(), f64::MIN_POSITIVE)?)?;
    let coords = frame.transpose().matmul(alg.gram())?;
    Ok((frame, coords))
}

/// The structure re-expressed in its orthonormal frame.
fn normalized(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
) -> Result<(MetricLieAlgebra, AlmostContactData)> {
    check_len(alg.dim(), data.dim())?;
    let (frame, coords) = orthonormal_frame(alg)?;
    change_basis(alg, data, &coords, &frame)
}

struct Frame<'a> {
    alg: &'a MetricLieAlgebra,
    data: &'a AlmostContactData,
}

impl Frame<'_> {
    fn d(&self) -> usize {
        self.alg.dim()
    }
    fn e(&self, i: usize) -> Vec<f64> {
        unit_vector(self.d(), i)
    }
    fn phi(&self, x: &[f64]) -> Vec<f64> {
        self.data.phi.mul_vec(x).expect("dims")
    }
    fn eta(&self, x: &[f64]) -> f64 {
        self.alg.inner(x, &self.data.xi)
    }
    fn ip(&self, x: &[f64], y: &[f64]) -> f64 {
        self.alg.inner(x, y)
    }
}

fn combine(terms: &[(f64, &[f64])]) -> Vec<f64> {
    let d = terms[0].1.len();
    let mut out = vec![0.0; d];
    for (s, v) in terms {
        crate::numkit::axpy(&mut out, *s, v);
    }
    out
}

fn almost_contact_checks(f: &Frame<'_>, tol: f64) -> VerificationReport {
    let d = f.d();
    let xi = &f.data.xi;
    let mut report = VerificationReport::new();
    report.add("unit_xi", (f.ip(xi, xi) - 1.0).abs(), tol);

    let mut sq: f64 = 0.0;
    for b in 0..d {
        let e = f.e(b);
        let r = combine(&[(1.0, &f.phi(&f.phi(&e))), (1.0, &e), (-f.eta(&e), xi)]);
        sq = sq.max(max_abs(&r));
    }
    report.add("phi_square", sq, tol);

    let mut compat: f64 = 0.0;
    for a in 0..d {
        let ea = f.e(a);
        let pa = f.phi(&ea);
        for b in 0..d {
            let eb = f.e(b);
            let r = f.ip(&pa, &f.phi(&eb)) - f.ip(&ea, &eb) + f.eta(&ea) * f.eta(&eb);
            compat = compat.max(r.abs());
        }
    }
    report.add("phi_compatibility", compat, tol);
    report
}

/// `⟨ξ,ξ⟩ = 1`, `φ²x = −x + η(x)ξ`, `⟨φx,φy⟩ = ⟨x,y⟩ − η(x)η(y)`.
pub fn verify_almost_contact(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    tol: f64,
) -> Result<VerificationReport> {
    if alg.dim().is_multiple_of(2) {
        return Err(Error::EvenDimension(alg.dim()));
    }
    let (na, nd) = normalized(alg, data)?;
    Ok(almost_contact_checks(
        &Frame {
            alg: &na,
            data: &nd,
        },
        tol,
    ))
}

/// Almost contact axioms plus `L_x(φy) − φ(L_x y) = ⟨φx,y⟩ξ − η(y)φx`.
pub fn verify_kenmotsu(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    tol: f64,
) -> Result<VerificationReport> {
    if alg.dim().is_multiple_of(2) {
        return Err(Error::EvenDimension(alg.dim()));
    }
    let (na, nd) = normalized(alg, data)?;
    let f = Frame {
        alg: &na,
        data: &nd,
    };
    let mut report = almost_contact_checks(&f, tol);
    if !report.pass() {
        return Err(Error::AlmostContactViolation(Box::new(report)));
    }
    let table = levi_civita_table(&na)?;
    let d = f.d();
    let mut worst: f64 = 0.0;
    for a in 0..d {
        let ea = f.e(a);
        let pa = f.phi(&ea);
        for b in 0..d {
            let eb = f.e(b);
            let lhs1 = table.apply(&ea, &f.phi(&eb))?;
            let lhs2 = f.phi(table.product(a, b));
            let r = combine(&[
                (1.0, &lhs1),
                (-1.0, &lhs2),
                (-f.ip(&pa, &eb), &nd.xi),
                (f.eta(&eb), &pa),
            ]);
            worst = worst.max(max_abs(&r));
        }
    }
    report.add("kenmotsu_condition", worst, tol);
    Ok(report)
}

/// The seven identities every Kenmotsu Lie algebra satisfies:
/// `φξ = 0`, `η∘φ = 0`, `φᵗ = −φ`, `L_xξ = x − η(x)ξ`, `[L_ξ, φ] = 0`,
/// `η(L_x y) = −⟨x,y⟩ + η(x)η(y)` and `dη = 0` (i.e. `η([x,y]) = 0`).
pub fn derived_identities(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    tol: f64,
) -> Result<VerificationReport> {
    let (na, nd) = normalized(alg, data)?;
    let f = Frame {
        alg: &na,
        data: &nd,
    };
    let table = levi_civita_table(&na)?;
    let d = f.d();
    let xi = &nd.xi;
    let mut report = VerificationReport::new();

    report.add("phi_xi_zero", max_abs(&f.phi(xi)), tol);

    let eta_phi = (0..d)
        .map(|b| f.eta(&f.phi(&f.e(b))).abs())
        .fold(0.0, f64::max);
    report.add("eta_phi_zero", eta_phi, tol);

    let mut skew: f64 = 0.0;
    let mut eta_l: f64 = 0.0;
    let mut d_eta: f64 = 0.0;
    for a in 0..d {
        let ea = f.e(a);
        for b in 0..d {
            let eb = f.e(b);
            skew = skew.max((f.ip(&f.phi(&ea), &eb) + f.ip(&ea, &f.phi(&eb))).abs());
            let l = table.product(a, b);
            eta_l = eta_l.max((f.eta(l) + f.ip(&ea, &eb) - f.eta(&ea) * f.eta(&eb)).abs());
            d_eta = d_eta.max(f.eta(na.basis_bracket(a, b)).abs());
        }
    }
    report.add("phi_skew", skew, tol);

    let mut l_xi: f64 = 0.0;
    let mut l_xi_phi: f64 = 0.0;
    for a in 0..d {
        let ea = f.e(a);
        let r = combine(&[(1.0, &table.apply(&ea, xi)?), (-1.0, &ea), (f.eta(&ea), xi)]);
        l_xi = l_xi.max(max_abs(&r));
        let r = combine(&[
            (1.0, &table.apply(xi, &f.phi(&ea))?),
            (-1.0, &f.phi(&table.apply(xi, &ea)?)),
        ]);
        l_xi_phi = l_xi_phi.max(max_abs(&r));
    }
    report.add("levi_civita_xi", l_xi, tol);
    report.add("l_xi_commutes_phi", l_xi_phi, tol);
    report.add("eta_levi_civita", eta_l, tol);
    report.add("d_eta_zero", d_eta, tol);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::koszul;
    use crate::model::{model_algebra, Lambda};

    fn model(l: &[f64]) -> (MetricLieAlgebra, AlmostContactData) {
        model_algebra(&Lambda::new(l.to_vec()).unwrap())
    }

    fn abelian_contact() -> (MetricLieAlgebra, AlmostContactData) {
        let phi = RealMatrix::from_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, -1.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        (
            MetricLieAlgebra::abelian(3).unwrap(),
            AlmostContactData::new(phi, vec![1.0, 0.0, 0.0]).unwrap(),
        )
    }

    #[test]
    fn model_is_almost_contact() {
        let (a, s) = model(&[2.0, -1.0]);
        let r = verify_almost_contact(&a, &s, 1e-9).unwrap();
        assert!(r.pass());
        assert_eq!(r.max_residual(), 0.0);
        assert_eq!(r.checks.len(), 3);
    }

    #[test]
    fn one_dimensional_is_degenerate_kenmotsu() {
        let a = MetricLieAlgebra::abelian(1).unwrap();
        let s = AlmostContactData::new(RealMatrix::zeros(1, 1), vec![1.0]).unwrap();
        assert!(verify_almost_contact(&a, &s, 1e-9).unwrap().pass());
        assert!(verify_kenmotsu(&a, &s, 1e-9).unwrap().pass());
        assert!(derived_identities(&a, &s, 1e-9).unwrap().pass());
    }

    #[test]
    fn scaled_phi_breaks_compatibility() {
        let (a, s) = model(&[2.0]);
        let r = verify_almost_contact(&a, &s.scaled_phi(1.001), 1e-9).unwrap();
        let c = r.get("phi_compatibility").unwrap();
        assert!(!c.pass);
        // 1.001² − 1
        assert!((c.residual - 2.001e-3).abs() < 1e-12);
        assert!(matches!(
            verify_kenmotsu(&a, &s.scaled_phi(1.001), 1e-9),
            Err(Error::AlmostContactViolation(_))
        ));
    }

    #[test]
    fn even_dimension_rejected() {
        let a = MetricLieAlgebra::abelian(2).unwrap();
        let s = AlmostContactData::new(RealMatrix::zeros(2, 2), vec![1.0, 0.0]).unwrap();
        assert!(matches!(
            verify_almost_contact(&a, &s, 1e-9),
            Err(Error::EvenDimension(2))
        ));
    }

    #[test]
    fn models_are_kenmotsu() {
        for l in [vec![], vec![2.0], vec![0.0, -3.0], vec![1.0, 1.0, -0.25]] {
            let (a, s) = model(&l);
            let r = verify_kenmotsu(&a, &s, 1e-12).unwrap();
            assert!(r.pass(), "{l:?}: {r}");
            assert!(r.get("kenmotsu_condition").unwrap().residual < 1e-12);
        }
    }

    #[test]
    fn abelian_is_not_kenmotsu() {
        let (a, s) = abelian_contact();
        assert!(verify_almost_contact(&a, &s, 1e-9).unwrap().pass());
        let r = verify_kenmotsu(&a, &s, 1e-9).unwrap();
        let c = r.get("kenmotsu_condition").unwrap();
        assert!(!c.pass);
        assert_eq!(c.residual, 1.0);
    }

    #[test]
    fn perturbed_bracket_is_detected() {
        let (a, s) = model(&[2.0]);
        let p = a.perturbed(0, 1, 2, 1e-3).unwrap();
        let r = verify_kenmotsu(&p, &s, 1e-9).unwrap();
        assert!(r.get("kenmotsu_condition").unwrap().residual >= 1e-4);
    }

    #[test]
    fn derived_identities_on_models() {
        for l in [vec![2.0], vec![0.5, -1.5, 4.0]] {
            let (a, s) = model(&l);
            let r = derived_identities(&a, &s, 1e-12).unwrap();
            assert_eq!(r.checks.len(), 7);
            assert!(r.pass(), "{r}");
        }
        let (a, _) = model(&[2.0]);
        let (e1, xi) = (unit_vector(3, 1), unit_vector(3, 0));
        assert_eq!(koszul(&a, &e1, &xi).unwrap(), vec![0.0, 1.0, 0.0]);
        let l11 = koszul(&a, &e1, &e1).unwrap();
        assert_eq!(a.inner(&l11, &xi), -1.0);
    }

    #[test]
    fn phi_on_reeb_complement_is_complex_structure() {
        let (a, s) = model(&[1.0, -2.0]);
        let phi2 = s.phi().matmul(s.phi()).unwrap();
        for b in 1..5 {
            let col = phi2.column(b);
            let mut expect = vec![0.0; 5];
            expect[b] = -1.0;
            assert!(col.iter().zip(&expect).all(|(x, y)| (x - y).abs() < 1e-10));
        }
        assert_eq!(a.inner(&s.phi().column(1), s.xi()), 0.0);
    }
}
