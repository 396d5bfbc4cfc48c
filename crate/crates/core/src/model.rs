//! The model groups `G_λ = ℝ × ℂⁿ` with product
//! `(t₁, z)·(t₂, z') = (t₁ + t₂, z_j + z'_j e^{−t₁(1 + iλ_j)})`.
//!
//! Basis order throughout is `(e₀, e₁, f₁, …, eₙ, fₙ)` and coordinates are
//! `(t, x₁, y₁, …, xₙ, yₙ)`.

use num_complex::Complex64;

use crate::error::{check_len, Error, Result};
use crate::kenmotsu::AlmostContactData;
use crate::liealg::{MetricLieAlgebra, MAX_DIM};
use crate::numkit::RealMatrix;

/// Default central-difference step for [`numeric_bracket_check`].
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// The spectrum `(λ₁, …, λₙ)` selecting a model.
#[derive(Debug, Clone, PartialEq)]
pub struct Lambda(Vec<f64>);

impl Lambda {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidStructure("non-finite lambda".into()));
        }
        let dim = 2 * values.len() + 1;
        if dim > MAX_DIM {
            return Err(Error::TooLarge { dim, max: MAX_DIM });
        }
        Ok(Self(values))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> usize {
        2 * self.0.len() + 1
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// `e^{−t(1 + iλ_j)}`
    ///
    /// The phase `−tλ_j` reaches tens of radians on the sampling box, where
    /// rounding the product alone would cost several ulps of the result; the
    /// product is therefore split exactly with an fma and the low part applied
    /// as a first-order rotation.
    fn twist(&self, j: usize, t: f64) -> Complex64 {
        let hi = -t * self.0[j];
        let lo = (-t).mul_add(self.0[j], -hi);
        let (s, c) = hi.sin_cos();
        Complex64::new(c - lo * s, s + lo * c) * (-t).exp()
    }
}

/// A point `(t, z₁, …, zₙ)` stored as `(t, x₁, y₁, …, xₙ, yₙ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelPoint {
    coords: Vec<f64>,
}

impl ModelPoint {
    pub fn new(t: f64, z: &[Complex64]) -> Result<Self> {
        let mut coords = Vec::with_capacity(2 * z.len() + 1);
        coords.push(t);
        for zj in z {
            coords.push(zj.re);
            coords.push(zj.im);
        }
        Self::from_coords(coords)
    }

    pub fn from_coords(coords: Vec<f64>) -> Result<Self> {
        if coords.len().is_multiple_of(2) {
            return Err(Error::EvenDimension(coords.len()));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidStructure(
                "non-finite point coordinate".into(),
            ));
        }
        Ok(Self { coords })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            coords: vec![0.0; 2 * n + 1],
        }
    }

    pub fn n(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn t(&self) -> f64 {
        self.coords[0]
    }

    pub fn z(&self, j: usize) -> Complex64 {
        Complex64::new(self.coords[2 * j + 1], self.coords[2 * j + 2])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn max_abs_diff(&self, other: &ModelPoint) -> f64 {
        if self.coords.len() != other.coords.len() {
            return f64::INFINITY;
        }
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Structure constants, metric and almost contact data of the Lie algebra of `G_λ`:
/// `[e₀, e_j] = −e_j − λ_j f_j`, `[e₀, f_j] = −f_j + λ_j e_j`, the rest zero;
/// orthonormal basis; `φ e₀ = 0`, `φ e_j = f_j`, `φ f_j = −e_j`; `ξ = e₀`.
pub fn model_algebra(lambda: &Lambda) -> (MetricLieAlgebra, AlmostContactData) {
    let d = lambda.dim();
    let mut brackets = Vec::with_capacity(2 * lambda.n());
    let mut phi = RealMatrix::zeros(d, d);
    for (j, &l) in lambda.values().iter().enumerate() {
        let e = 2 * j + 1;
        let f = 2 * j + 2;
        let mut be = vec![0.0; d];
        be[e] = -1.0;
        be[f] = -l;
        let mut bf = vec![0.0; d];
        bf[f] = -1.0;
        bf[e] = l;
        brackets.push((0, e, be));
        brackets.push((0, f, bf));
        phi[(f, e)] = 1.0;
        phi[(e, f)] = -1.0;
    }
    let alg = MetricLieAlgebra::from_brackets(d, &brackets, RealMatrix::identity(d))
        .expect("model structure is well formed");
    let mut xi = vec![0.0; d];
    xi[0] = 1.0;
    let data = AlmostContactData::new(phi, xi).expect("model contact data is well formed");
    (alg, data)
}

fn check_point(lambda: &Lambda, p: &ModelPoint) -> Result<()> {
    check_len(lambda.dim(), p.coords.len())
}

pub fn multiply(lambda: &Lambda, p: &ModelPoint, q: &ModelPoint) -> Result<ModelPoint> {
    check_point(lambda, p)?;
    check_point(lambda, q)?;
    let t1 = p.t();
    let mut coords = Vec::with_capacity(p.coords.len());
    coords.push(t1 + q.t());
    for j in 0..lambda.n() {
        let z = p.z(j) + q.z(j) * lambda.twist(j, t1);
        coords.push(z.re);
        coords.push(z.im);
    }
    ModelPoint::from_coords(coords)
}

/// `(t, z)⁻¹ = (−t, −z_j e^{t(1 + iλ_j)})`
pub fn inverse(lambda: &Lambda, p: &ModelPoint) -> Result<ModelPoint> {
    check_point(lambda, p)?;
    let t = p.t();
    let mut coords = Vec::with_capacity(p.coords.len());
    coords.push(-t);
    for j in 0..lambda.n() {
        let z = -p.z(j) * lambda.twist(j, -t);
        coords.push(z.re);
        coords.push(z.im);
    }
    ModelPoint::from_coords(coords)
}

/// Coordinate components of the left-invariant field `e₀ℓ`, `e_jℓ` or `f_jℓ` at `p`.
pub fn left_invariant_field(
    lambda: &Lambda,
    basis_index: usize,
    p: &ModelPoint,
) -> Result<Vec<f64>> {
    check_point(lambda, p)?;
    let d = lambda.dim();
    if basis_index >= d {
        return Err(Error::IndexOutOfRange {
            index: basis_index,
            dim: d,
        });
    }
    let mut v = vec![0.0; d];
    if basis_index == 0 {
        v[0] = 1.0;
        return Ok(v);
    }
    let j = (basis_index - 1) / 2;
    let t = p.t();
    let scale = (-t).exp();
    let (s, c) = (lambda.values()[j] * t).sin_cos();
    let (x, y) = (2 * j + 1, 2 * j + 2);
    if basis_index % 2 == 1 {
        v[x] = scale * c;
        v[y] = -scale * s;
    } else {
        v[x] = scale * s;
        v[y] = scale * c;
    }
    Ok(v)
}

/// `h₀ = dt² + e^{2t} Σ (dx_j² + dy_j²)` in coordinates at `p`.
pub fn metric_at(lambda: &Lambda, p: &ModelPoint) -> Result<RealMatrix> {
    check_point(lambda, p)?;
    let w = (2.0 * p.t()).exp();
    let mut diag = vec![w; lambda.dim()];
    diag[0] = 1.0;
    Ok(RealMatrix::from_diagonal(&diag))
}

/// Columns are the left-invariant frame evaluated at `p`.
pub fn frame_at(lambda: &Lambda, p: &ModelPoint) -> Result<RealMatrix> {
    let cols = (0..lambda.dim())
        .map(|k| left_invariant_field(lambda, k, p))
        .collect::<Result<Vec<_>>>()?;
    RealMatrix::from_columns(&cols)
}

/// Lie bracket of two left-invariant fields at `p`, computed from central
/// differences of their coordinate formulas and expressed in the frame at `p`.
pub fn numeric_bracket(
    lambda: &Lambda,
    a: usize,
    b: usize,
    p: &ModelPoint,
    h_step: f64,
) -> Result<Vec<f64>> {
    if !(h_step > 0.0) {
        return Err(Error::InvalidStructure(
            "finite-difference step must be positive".into(),
        ));
    }
    let d = lambda.dim();
    let x = left_invariant_field(lambda, a, p)?;
    let y = left_invariant_field(lambda, b, p)?;
    let jx = jacobian(lambda, a, p, h_step)?;
    let jy = jacobian(lambda, b, p, h_step)?;
    let v: Vec<f64> = jy
        .mul_vec(&x)?
        .iter()
        .zip(jx.mul_vec(&y)?)
        .map(|(u, w)| u - w)
        .collect();
    debug_assert_eq!(v.len(), d);
    frame_at(lambda, p)?.inverse()?.mul_vec(&v)
}

fn jacobian(lambda: &Lambda, index: usize, p: &ModelPoint, h: f64) -> Result<RealMatrix> {
    let d = lambda.dim();
    let mut jac = RealMatrix::zeros(d, d);
    for m in 0..d {
        let mut plus = p.coords.clone();
        let mut minus = p.coords.clone();
        plus[m] += h;
        minus[m] -= h;
        let fp = left_invariant_field(lambda, index, &ModelPoint::from_coords(plus)?)?;
        let fm = left_invariant_field(lambda, index, &ModelPoint::from_coords(minus)?)?;
        for k in 0..d {
            jac[(k, m)] = (fp[k] - fm[k]) / (2.0 * h);
        }
    }
    Ok(jac)
}

/// Largest deviation, over all basis pairs, of the finite-difference bracket
/// at `p` from the structure constants of [`model_algebra`].
pub fn numeric_bracket_check(lambda: &Lambda, p: &ModelPoint, h_step: f64) -> Result<f64> {
    let (alg, _) = model_algebra(lambda);
    let d = lambda.dim();
    let mut worst: f64 = 0.0;
    for a in 0..d {
        for b in (a + 1)..d {
            let num = numeric_bracket(lambda, a, b, p, h_step)?;
            for (x, y) in num.iter().zip(alg.basis_bracket(a, b)) {
                worst = worst.max((x - y).abs());
            }
        }
    }
    Ok(worst)
}
