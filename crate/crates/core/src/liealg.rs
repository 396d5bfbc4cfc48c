//! Metric Lie algebras given by structure constants in a fixed basis.

use crate::error::{check_len, Error, Result};
use crate::kenmotsu::AlmostContactData;
use crate::numkit::{
    self, axpy, check_spd, condition_number, max_abs, unit_vector, Cholesky, RealMatrix,
    DEFAULT_TOL,
};
use crate::parallel::Execution;
use crate::report::VerificationCheck;

/// Largest supported dimension.
pub const MAX_DIM: usize = 129;

/// Condition estimate above which [`pushforward`] refuses a change of basis.
pub const MAX_CONDITION: f64 = 1e8;

/// A Lie algebra with an inner product, both expressed in a basis `b₀ … b_{d−1}`.
///
/// `structure[(i·d + j)·d + k]` is the `b_k`-coordinate of `[b_i, b_j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricLieAlgebra {
    dim: usize,
    structure: Vec<f64>,
    gram: RealMatrix,
}

impl MetricLieAlgebra {
    pub fn new(dim: usize, structure: Vec<f64>, gram: RealMatrix) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidStructure("dimension must be positive".into()));
        }
        if dim > MAX_DIM {
            return Err(Error::TooLarge { dim, max: MAX_DIM });
        }
        check_len(dim * dim * dim, structure.len())?;
        check_len(dim, gram.rows())?;
        check_len(dim, gram.cols())?;
        if structure.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidStructure(
                "non-finite structure constant".into(),
            ));
        }
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    let a = structure[(i * dim + j) * dim + k];
                    let b = structure[(j * dim + i) * dim + k];
                    if a != -b {
                        return Err(Error::InvalidStructure(format!(
                            "structure constants not antisymmetric at ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        check_spd(&gram)?;
        Ok(Self {
            dim,
            structure,
            gram,
        })
    }

    /// Builds an algebra from the brackets `[b_i, b_j] = v` for the listed pairs;
    /// mirrors are implied and unlisted pairs are zero.
    pub fn from_brackets(
        dim: usize,
        brackets: &[(usize, usize, Vec<f64>)],
        gram: RealMatrix,
    ) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::TooLarge { dim, max: MAX_DIM });
        }
        let mut structure = vec![0.0; dim * dim * dim];
        let mut seen = vec![false; dim * dim];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            for idx in [i, j] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            if i == j {
                return Err(Error::InvalidStructure(format!(
                    "bracket of b{i} with itself"
                )));
            }
            check_len(dim, v.len())?;
            let (lo, hi, sign) = if i < j { (i, j, 1.0) } else { (j, i, -1.0) };
            if std::mem::replace(&mut seen[lo * dim + hi], true) {
                return Err(Error::InvalidStructure(format!(
                    "duplicate bracket ({lo}, {hi})"
                )));
            }
            for k in 0..dim {
                structure[(lo * dim + hi) * dim + k] = sign * v[k];
                structure[(hi * dim + lo) * dim + k] = -sign * v[k];
            }
        }
        Self::new(dim, structure, gram)
    }

    pub fn abelian(dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; dim * dim * dim], RealMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &RealMatrix {
        &self.gram
    }

    pub fn structure(&self) -> &[f64] {
        &self.structure
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinates of `[b_i, b_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[f64] {
        let d = self.dim;
        &self.structure[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// Returns a copy with one structure constant (and its antisymmetric mirror) shifted by `delta`.
    pub fn perturbed(&self, i: usize, j: usize, k: usize, delta: f64) -> Result<Self> {
        let d = self.dim;
        for idx in [i, j, k] {
            if idx >= d {
                return Err(Error::IndexOutOfRange { index: idx, dim: d });
            }
        }
        if i == j {
            return Err(Error::InvalidStructure("diagonal brackets vanish".into()));
        }
        let mut s = self.structure.clone();
        s[(i * d + j) * d + k] += delta;
        s[(j * d + i) * d + k] -= delta;
        Self::new(d, s, self.gram.clone())
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        self.gram.form(x, y)
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.inner(x, x).max(0.0).sqrt()
    }

    /// `[x, y] = Σᵢⱼ xᵢ yⱼ [bᵢ, bⱼ]`.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim, x.len())?;
        check_len(self.dim, y.len())?;
        let mut out = vec![0.0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0.0 || i == j {
                    continue;
                }
                axpy(&mut out, xi * yj, self.basis_bracket(i, j));
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_x = [x, ·]`.
    pub fn ad(&self, x: &[f64]) -> Result<RealMatrix> {
        let cols = (0..self.dim)
            .map(|j| self.bracket(x, &unit_vector(self.dim, j)))
            .collect::<Result<Vec<_>>>()?;
        RealMatrix::from_columns(&cols)
    }

    /// Re-expresses the algebra in the basis `c_j = Σᵢ Tinv[i][j] bᵢ`, i.e.
    /// coordinates transform by `x ↦ T·x`. No conditioning guard.
    pub(crate) fn transformed(&self, t: &RealMatrix, tinv: &RealMatrix) -> Result<Self> {
        let d = self.dim;
        let c = &self.structure;
        // first slot
        let mut c1 = vec![0.0; d * d * d];
        for i in 0..d {
            for a in 0..d {
                let w = tinv[(a, i)];
                if w == 0.0 {
                    continue;
                }
                for b in 0..d {
                    let src = &c[(a * d + b) * d..(a * d + b + 1) * d];
                    axpy(&mut c1[(i * d + b) * d..(i * d + b + 1) * d], w, src);
                }
            }
        }
        let rows: Vec<Vec<f64>> = Execution::default().map(d, |i| {
            let mut block = vec![0.0; d * d];
            for j in (i + 1)..d {
                // second slot
                let mut v = vec![0.0; d];
                for b in 0..d {
                    let w = tinv[(b, j)];
                    if w != 0.0 {
                        axpy(&mut v, w, &c1[(i * d + b) * d..(i * d + b + 1) * d]);
                    }
                }
                // output index
                let out = t.mul_vec(&v).expect("square transform");
                block[j * d..(j + 1) * d].copy_from_slice(&out);
            }
            block
        });
        let mut s = vec![0.0; d * d * d];
        for i in 0..d {
            for j in (i + 1)..d {
                for k in 0..d {
                    let v = rows[i][j * d + k];
                    s[(i * d + j) * d + k] = v;
                    s[(j * d + i) * d + k] = -v;
                }
            }
        }
        let gram = tinv
            .transpose()
            .matmul(&self.gram)?
            .matmul(tinv)?
            .symmetrized();
        Self::new(d, s, gram)
    }
}

/// A linear subspace given by a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<f64>>,
}

impl Subspace {
    pub fn new(ambient: usize, basis: Vec<Vec<f64>>) -> Result<Self> {
        for v in &basis {
            check_len(ambient, v.len())?;
        }
        if !basis.is_empty() {
            let scale = basis.iter().map(|v| max_abs(v)).fold(0.0, f64::max);
            numkit::gram_schmidt(
                &basis,
                &RealMatrix::identity(ambient),
                1e-12 * scale.max(f64::MIN_POSITIVE),
            )?;
        }
        Ok(Self { ambient, basis })
    }

    pub fn whole(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| unit_vector(ambient, i)).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// Metric distance from `x` to the subspace under `gram`.
    fn distance(orthonormal: &[Vec<f64>], gram: &RealMatrix, x: &[f64]) -> f64 {
        let mut r = x.to_vec();
        for _ in 0..2 {
            for q in orthonormal {
                let c = gram.form(q, &r);
                axpy(&mut r, -c, q);
            }
        }
        gram.form(&r, &r).max(0.0).sqrt()
    }
}

/// Max over basis triples of `‖[bᵢ,[bⱼ,bₖ]] + [bⱼ,[bₖ,bᵢ]] + [bₖ,[bᵢ,bⱼ]]‖∞`.
pub fn jacobi_residual(alg: &MetricLieAlgebra) -> f64 {
    let d = alg.dim();
    let per_i = Execution::default().map(d, |i| {
        let mut worst: f64 = 0.0;
        let ei = unit_vector(d, i);
        for j in (i + 1)..d {
            let ej = unit_vector(d, j);
            for k in (j + 1)..d {
                let ek = unit_vector(d, k);
                let a = alg.bracket(&ei, alg.basis_bracket(j, k)).expect("dims");
                let b = alg.bracket(&ej, alg.basis_bracket(k, i)).expect("dims");
                let c = alg.bracket(&ek, alg.basis_bracket(i, j)).expect("dims");
                for m in 0..d {
                    worst = worst.max((a[m] + b[m] + c[m]).abs());
                }
            }
        }
        worst
    });
    per_i.into_iter().fold(0.0, f64::max)
}

/// Checks that `[g, S] ⊂ S`; the residual is the largest metric distance of
/// `[bᵢ, s]` from `S`.
pub fn is_ideal(alg: &MetricLieAlgebra, sub: &Subspace, tol: f64) -> Result<VerificationCheck> {
    check_len(alg.dim(), sub.ambient_dim())?;
    let d = alg.dim();
    let q = if sub.dim() == 0 {
        Vec::new()
    } else {
        numkit::gram_schmidt(sub.basis(), alg.gram(), f64::MIN_POSITIVE)?
    };
    let mut residual: f64 = 0.0;
    for i in 0..d {
        let ei = unit_vector(d, i);
        for s in sub.basis() {
            let r = alg.bracket(&ei, s)?;
            residual = residual.max(Subspace::distance(&q, alg.gram(), &r));
        }
    }
    Ok(VerificationCheck::new("is_ideal", residual, tol))
}

/// Checks `M[x,y] = [Mx,y] + [x,My]` on all basis pairs of `alg`.
pub fn is_derivation(
    alg: &MetricLieAlgebra,
    m: &RealMatrix,
    tol: f64,
) -> Result<VerificationCheck> {
    let d = alg.dim();
    check_len(d, m.rows())?;
    check_len(d, m.cols())?;
    let mut residual: f64 = 0.0;
    for i in 0..d {
        let ei = unit_vector(d, i);
        let mi = m.column(i);
        for j in (i + 1)..d {
            let ej = unit_vector(d, j);
            let mj = m.column(j);
            let lhs = m.mul_vec(alg.basis_bracket(i, j))?;
            let r1 = alg.bracket(&mi, &ej)?;
            let r2 = alg.bracket(&ei, &mj)?;
            for k in 0..d {
                residual = residual.max((lhs[k] - r1[k] - r2[k]).abs());
            }
        }
    }
    Ok(VerificationCheck::new("is_derivation", residual, tol))
}

/// The subalgebra spanned by `sub`, expressed in the given basis of `sub` with
/// the restricted inner product. Fails if `sub` is not closed under the bracket.
pub fn subalgebra(alg: &MetricLieAlgebra, sub: &Subspace, tol: f64) -> Result<MetricLieAlgebra> {
    check_len(alg.dim(), sub.ambient_dim())?;
    let k = sub.dim();
    if k == 0 {
        return Err(Error::InvalidStructure("empty subalgebra".into()));
    }
    let basis = sub.basis();
    let gram_s = RealMatrix::new(
        k,
        k,
        basis
            .iter()
            .flat_map(|a| basis.iter().map(move |b| alg.inner(a, b)))
            .collect(),
    )?
    .symmetrized();
    let chol = Cholesky::factor(&gram_s)?;
    let mut brackets = Vec::new();
    for a in 0..k {
        for b in (a + 1)..k {
            let r = alg.bracket(&basis[a], &basis[b])?;
            let rhs: Vec<f64> = basis.iter().map(|s| alg.inner(s, &r)).collect();
            let coords = chol.solve(&rhs)?;
            let mut proj = vec![0.0; alg.dim()];
            for (c, s) in coords.iter().zip(basis) {
                axpy(&mut proj, *c, s);
            }
            let diff: Vec<f64> = r.iter().zip(&proj).map(|(x, y)| x - y).collect();
            let off = alg.norm(&diff);
            if !(off < tol) {
                return Err(Error::InvalidStructure(format!(
                    "subspace is not closed under the bracket (residual {off:e})"
                )));
            }
            brackets.push((a, b, coords));
        }
    }
    MetricLieAlgebra::from_brackets(k, &brackets, gram_s)
}

/// Transports the structure along the linear map `T`: `[x,y]' = T[T⁻¹x, T⁻¹y]`,
/// `gram' = T⁻ᵀ·gram·T⁻¹`, `φ' = TφT⁻¹`, `ξ' = Tξ`.
pub fn pushforward(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    t: &RealMatrix,
) -> Result<(MetricLieAlgebra, AlmostContactData)> {
    let d = alg.dim();
    check_len(d, t.rows())?;
    check_len(d, t.cols())?;
    check_len(d, data.xi().len())?;
    let det = t.determinant()?;
    if !(det.abs() > DEFAULT_TOL) {
        return Err(Error::SingularMap);
    }
    let estimate = condition_number(t)?;
    if !(estimate <= MAX_CONDITION) {
        return Err(Error::IllConditioned {
            estimate,
            limit: MAX_CONDITION,
        });
    }
    let tinv = t.inverse()?;
    change_basis(alg, data, t, &tinv)
}

pub(crate) fn change_basis(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    t: &RealMatrix,
    tinv: &RealMatrix,
) -> Result<(MetricLieAlgebra, AlmostContactData)> {
    let alg2 = alg.transformed(t, tinv)?;
    let phi = t.matmul(data.phi())?.matmul(tinv)?;
    let xi = t.mul_vec(data.xi())?;
    Ok((alg2, AlmostContactData::new(phi, xi)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{model_algebra, Lambda};

    fn model(l: &[f64]) -> (MetricLieAlgebra, AlmostContactData) {
        model_algebra(&Lambda::new(l.to_vec()).unwrap())
    }

    #[test]
    fn model_brackets() {
        let (a, _) = model(&[2.0]);
        let e0 = unit_vector(3, 0);
        let e1 = unit_vector(3, 1);
        let f1 = unit_vector(3, 2);
        assert_eq!(a.bracket(&e0, &e1).unwrap(), vec![0.0, -1.0, -2.0]);
        assert_eq!(a.bracket(&e1, &f1).unwrap(), vec![0.0; 3]);
        let x = vec![0.3, -1.2, 2.5];
        assert!(max_abs(&a.bracket(&x, &x).unwrap()) < 1e-15);
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let (a, _) = model(&[2.0]);
        assert!(matches!(
            a.bracket(&[1.0, 0.0], &[0.0, 1.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_residual(&MetricLieAlgebra::abelian(4).unwrap()), 0.0);
        assert_eq!(jacobi_residual(&model(&[2.0, -0.5, 3.0]).0), 0.0);

        // [b0,b1] = b2, [b1,b2] = b0 is e(2):
        // [b0,[b1,b2]] + [b1,[b2,b0]] + [b2,[b0,b1]] = [b0,b0] + 0 + [b2,b2] = 0
        let e2 = MetricLieAlgebra::from_brackets(
            3,
            &[(0, 1, vec![0.0, 0.0, 1.0]), (1, 2, vec![1.0, 0.0, 0.0])],
            RealMatrix::identity(3),
        )
        .unwrap();
        assert_eq!(brute_jacobi(&e2), 0.0);
        assert_eq!(jacobi_residual(&e2), 0.0);

        // [b0,b1] = b2, [b1,b2] = b1:
        // [b0,[b1,b2]] + [b1,[b2,b0]] + [b2,[b0,b1]] = [b0,b1] + 0 + [b2,b2] = b2
        let bad = MetricLieAlgebra::from_brackets(
            3,
            &[(0, 1, vec![0.0, 0.0, 1.0]), (1, 2, vec![0.0, 1.0, 0.0])],
            RealMatrix::identity(3),
        )
        .unwrap();
        assert_eq!(brute_jacobi(&bad), 1.0);
        assert_eq!(jacobi_residual(&bad), 1.0);
    }

    fn brute_jacobi(a: &MetricLieAlgebra) -> f64 {
        let d = a.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let (ei, ej, ek) = (unit_vector(d, i), unit_vector(d, j), unit_vector(d, k));
                    let s1 = a.bracket(&ei, &a.bracket(&ej, &ek).unwrap()).unwrap();
                    let s2 = a.bracket(&ej, &a.bracket(&ek, &ei).unwrap()).unwrap();
                    let s3 = a.bracket(&ek, &a.bracket(&ei, &ej).unwrap()).unwrap();
                    for m in 0..d {
                        worst = worst.max((s1[m] + s2[m] + s3[m]).abs());
                    }
                }
            }
        }
        worst
    }

    #[test]
    fn ideal_examples() {
        let (a, _) = model(&[2.0]);
        let h = Subspace::new(3, vec![unit_vector(3, 1), unit_vector(3, 2)]).unwrap();
        let c = is_ideal(&a, &h, 1e-9).unwrap();
        assert!(c.pass);
        assert_eq!(c.residual, 0.0);
        assert!(is_ideal(&a, &Subspace::whole(3), 1e-9).unwrap().pass);
        let line = Subspace::new(3, vec![unit_vector(3, 1)]).unwrap();
        let c = is_ideal(&a, &line, 1e-9).unwrap();
        assert!(!c.pass);
        assert!((c.residual - 2.0).abs() < 1e-15);
    }

    #[test]
    fn derivation_examples() {
        let (a, _) = model(&[2.0]);
        assert!(
            is_derivation(&a, &RealMatrix::zeros(3, 3), 1e-9)
                .unwrap()
                .pass
        );
        let h = Subspace::new(3, vec![unit_vector(3, 1), unit_vector(3, 2)]).unwrap();
        let ah = subalgebra(&a, &h, 1e-9).unwrap();
        let any = RealMatrix::from_rows(&[vec![1.0, 7.0], vec![-3.0, 0.5]]).unwrap();
        assert!(is_derivation(&ah, &any, 1e-9).unwrap().pass);
        let d = RealMatrix::from_rows(&[vec![-1.0, 2.0], vec![-2.0, -1.0]]).unwrap();
        assert!(is_derivation(&ah, &d, 1e-9).unwrap().pass);
        // ad_{e0} is a derivation of the whole algebra (Jacobi identity).
        let ad = a.ad(&unit_vector(3, 0)).unwrap();
        assert!(is_derivation(&a, &ad, 1e-12).unwrap().pass);
        // the identity map is not: [x,y] ≠ 2[x,y]
        assert!(
            !is_derivation(&a, &RealMatrix::identity(3), 1e-9)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn non_closed_subalgebra_rejected() {
        let (a, _) = model(&[2.0]);
        let s = Subspace::new(3, vec![unit_vector(3, 0), unit_vector(3, 1)]).unwrap();
        assert!(subalgebra(&a, &s, 1e-9).is_err());
    }

    #[test]
    fn pushforward_identity_is_noop() {
        let (a, s) = model(&[2.0, -1.0]);
        let (a2, s2) = pushforward(&a, &s, &RealMatrix::identity(5)).unwrap();
        assert_eq!(a, a2);
        assert_eq!(s, s2);
    }

    #[test]
    fn pushforward_rejects_singular_and_ill_conditioned() {
        let (a, s) = model(&[1.0]);
        let sing = RealMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 1.0],
            vec![0.0, 1.0, 1.0],
        ])
        .unwrap();
        assert!(matches!(
            pushforward(&a, &s, &sing),
            Err(Error::SingularMap)
        ));
        let ill = RealMatrix::from_diagonal(&[1e5, 1.0, 1e-4]);
        assert!(matches!(
            pushforward(&a, &s, &ill),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn pushforward_matches_definition() {
        let (a, s) = model(&[1.5]);
        let t = RealMatrix::from_rows(&[
            vec![1.0, 0.5, 0.0],
            vec![0.0, 2.0, -1.0],
            vec![0.3, 0.0, 1.0],
        ])
        .unwrap();
        let tinv = t.inverse().unwrap();
        let (a2, _) = pushforward(&a, &s, &t).unwrap();
        let x = vec![0.2, -1.0, 0.7];
        let y = vec![1.1, 0.4, -0.3];
        let direct = t
            .mul_vec(
                &a.bracket(&tinv.mul_vec(&x).unwrap(), &tinv.mul_vec(&y).unwrap())
                    .unwrap(),
            )
            .unwrap();
        let via = a2.bracket(&x, &y).unwrap();
        for k in 0..3 {
            assert!((direct[k] - via[k]).abs() < 1e-13);
        }
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            MetricLieAlgebra::from_brackets(
                3,
                &[(0, 1, vec![1.0, 0.0, 0.0]), (1, 0, vec![0.0; 3])],
                RealMatrix::identity(3)
            ),
            Err(Error::InvalidStructure(_))
        ));
        assert!(matches!(
            MetricLieAlgebra::from_brackets(3, &[(0, 3, vec![0.0; 3])], RealMatrix::identity(3)),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            MetricLieAlgebra::abelian(MAX_DIM + 1),
            Err(Error::TooLarge { .. })
        ));
        let mut s = vec![0.0; 8];
        s[3] = 1.0; // [b0,b1] = b1 without its mirror
        assert!(MetricLieAlgebra::new(2, s, RealMatrix::identity(2)).is_err());
    }
}
