//! Levi-Civita product of a left-invariant metric, curvature and Ricci tensor.
//!
//! Curvature convention: `R(x,y)z = L_x L_y z − L_y L_x z − L_{[x,y]} z`, and
//! `ric(x,y) = Σ_k ⟨R(u_k,x)y, u_k⟩` over an orthonormal frame. With these
//! conventions hyperbolic space has `ric = −(dim − 1)·h`.

use serde::Serialize;

use crate::error::{check_len, Result};
use crate::kenmotsu::orthonormal_frame;
use crate::liealg::MetricLieAlgebra;
use crate::numkit::{axpy, Cholesky, RealMatrix};
use crate::parallel::Execution;

/// `table[(i·d + j)·d + k]` is the `b_k`-coordinate of `L_{b_i} b_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeviCivitaTable {
    dim: usize,
    table: Vec<f64>,
}

impl LeviCivitaTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of `L_{b_i} b_j`.
    pub fn product(&self, i: usize, j: usize) -> &[f64] {
        let d = self.dim;
        &self.table[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// `L_x y` by bilinear extension.
    pub fn apply(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim, x.len())?;
        check_len(self.dim, y.len())?;
        let mut out = vec![0.0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj != 0.0 {
                    axpy(&mut out, xi * yj, self.product(i, j));
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `L_x`.
    pub fn operator(&self, x: &[f64]) -> Result<RealMatrix> {
        check_len(self.dim, x.len())?;
        let d = self.dim;
        let mut m = RealMatrix::zeros(d, d);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for j in 0..d {
                for (k, v) in self.product(i, j).iter().enumerate() {
                    m[(k, j)] += xi * v;
                }
            }
        }
        Ok(m)
    }

    pub fn max_abs(&self) -> f64 {
        crate::numkit::max_abs(&self.table)
    }
}

/// Solves `2⟨L_x y, z⟩ = ⟨[x,y],z⟩ + ⟨[z,x],y⟩ + ⟨[z,y],x⟩` for `L_x y`.
pub fn koszul(alg: &MetricLieAlgebra, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let d = alg.dim();
    check_len(d, x.len())?;
    check_len(d, y.len())?;
    let xy = alg.bracket(x, y)?;
    let gx = alg.gram().mul_vec(x)?;
    let gy = alg.gram().mul_vec(y)?;
    let gxy = alg.gram().mul_vec(&xy)?;
    let mut rhs = vec![0.0; d];
    for (k, r) in rhs.iter_mut().enumerate() {
        // [b_k, x] paired with y, [b_k, y] paired with x
        let mut s = gxy[k];
        for (a, &xa) in x.iter().enumerate() {
            if xa != 0.0 && a != k {
                s += xa * crate::numkit::dot(alg.basis_bracket(k, a), &gy);
            }
        }
        for (a, &ya) in y.iter().enumerate() {
            if ya != 0.0 && a != k {
                s += ya * crate::numkit::dot(alg.basis_bracket(k, a), &gx);
            }
        }
        *r = 0.5 * s;
    }
    Cholesky::factor(alg.gram())?.solve(&rhs)
}

/// Levi-Civita products of all basis pairs.
pub fn levi_civita_table(alg: &MetricLieAlgebra) -> Result<LeviCivitaTable> {
    let d = alg.dim();
    let chol = Cholesky::factor(alg.gram())?;
    // lowered[(i·d + j)·d + k] = ⟨[b_i, b_j], b_k⟩
    let lowered: Vec<f64> = (0..d * d)
        .flat_map(|ij| {
            let (i, j) = (ij / d, ij % d);
            alg.gram()
                .tr_mul_vec(alg.basis_bracket(i, j))
                .expect("square gram")
        })
        .collect();
    let low = |i: usize, j: usize, k: usize| lowered[(i * d + j) * d + k];
    let rows = Execution::default().map(d, |i| {
        let mut row = Vec::with_capacity(d * d);
        for j in 0..d {
            let rhs: Vec<f64> = (0..d)
                .map(|k| 0.5 * (low(i, j, k) + low(k, i, j) + low(k, j, i)))
                .collect();
            row.extend(chol.solve(&rhs).expect("dimension checked"));
        }
        row
    });
    Ok(LeviCivitaTable {
        dim: d,
        table: rows.concat(),
    })
}

/// `R(x,y)z = L_x L_y z − L_y L_x z − L_{[x,y]} z`.
pub fn curvature(
    table: &LeviCivitaTable,
    alg: &MetricLieAlgebra,
    x: &[f64],
    y: &[f64],
    z: &[f64],
) -> Result<Vec<f64>> {
    check_len(alg.dim(), table.dim())?;
    let lyz = table.apply(y, z)?;
    let lxz = table.apply(x, z)?;
    let a = table.apply(x, &lyz)?;
    let b = table.apply(y, &lxz)?;
    let c = table.apply(&alg.bracket(x, y)?, z)?;
    Ok(a.iter()
        .zip(&b)
        .zip(&c)
        .map(|((a, b), c)| a - b - c)
        .collect())
}

/// Ricci tensor in the input basis.
///
/// `Σ_k ⟨R(u_k,x)y, u_k⟩` over an orthonormal frame is the trace of
/// `z ↦ R(z,x)y`, which is evaluated here as a coordinate trace directly
/// from the product table.
pub fn ricci(alg: &MetricLieAlgebra) -> Result<RealMatrix> {
    let d = alg.dim();
    let table = levi_civita_table(alg)?;
    let t = |a: usize, b: usize, c: usize| table.product(a, b)[c];
    // τ_b = tr(L_{·} b) = Σ_m (L_{b_m} b_b)^m
    let tau: Vec<f64> = (0..d).map(|b| (0..d).map(|m| t(m, b, m)).sum()).collect();
    let rows = Execution::default().map(d, |i| {
        (0..d)
            .map(|j| {
                let w = table.product(i, j);
                let first: f64 = w.iter().zip(&tau).map(|(a, b)| a * b).sum();
                let mut second = 0.0;
                let mut third = 0.0;
                for m in 0..d {
                    for a in 0..d {
                        second += t(m, j, a) * t(i, a, m);
                    }
                    for (c, &cmi) in alg.basis_bracket(m, i).iter().enumerate() {
                        if cmi != 0.0 {
                            third += cmi * t(c, j, m);
                        }
                    }
                }
                first - second - third
            })
            .collect::<Vec<f64>>()
    });
    RealMatrix::new(d, d, rows.concat())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EinsteinFit {
    pub pass: bool,
    /// Best constant `c` in `ric ≈ c·gram`.
    pub constant: f64,
    /// `max |ric − c·gram|`.
    pub residual: f64,
}

/// Least-squares fit of `ric = c·gram`: `c = ⟨ric, gram⟩_F / ⟨gram, gram⟩_F`.
pub fn einstein_fit(ric: &RealMatrix, gram: &RealMatrix, tol: f64) -> Result<EinsteinFit> {
    check_len(gram.rows(), ric.rows())?;
    let num: f64 = ric.data().iter().zip(gram.data()).map(|(a, b)| a * b).sum();
    let den: f64 = gram.data().iter().map(|a| a * a).sum();
    let constant = num / den;
    let residual = ric.sub(&gram.scale(constant))?.max_abs();
    Ok(EinsteinFit {
        pass: residual < tol,
        constant,
        residual,
    })
}

pub fn einstein_check(alg: &MetricLieAlgebra, tol: f64) -> Result<EinsteinFit> {
    einstein_fit(&ricci(alg)?, alg.gram(), tol)
}

/// Einstein fit in a gram-orthonormal frame, where the metric is the identity.
///
/// The residual no longer scales with the size of the gram entries, so it can
/// be compared against an absolute tolerance whatever basis the input uses.
pub fn frame_einstein_check(alg: &MetricLieAlgebra, tol: f64) -> Result<EinsteinFit> {
    let (frame, coords) = orthonormal_frame(alg)?;
    let na = alg.transformed(&coords, &frame)?;
    einstein_fit(&ricci(&na)?, &RealMatrix::identity(alg.dim()), tol)
}

/// `max |⟨L_{b_i} b_j, b_k⟩ + ⟨b_j, L_{b_i} b_k⟩|` over basis triples.
pub fn metric_compatibility_residual(alg: &MetricLieAlgebra, table: &LeviCivitaTable) -> f64 {
    let d = alg.dim();
    let g = alg.gram();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let gl = g.tr_mul_vec(table.product(i, j)).expect("dims");
            for (k, glk) in gl.iter().enumerate() {
                let other: f64 = (0..d).map(|m| g[(j, m)] * table.product(i, k)[m]).sum();
                worst = worst.max((glk + other).abs());
            }
        }
    }
    worst
}

/// `max ‖L_{b_i} b_j − L_{b_j} b_i − [b_i, b_j]‖∞` over basis pairs.
pub fn torsion_residual(alg: &MetricLieAlgebra, table: &LeviCivitaTable) -> f64 {
    let d = alg.dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let (a, b, c) = (
                table.product(i, j),
                table.product(j, i),
                alg.basis_bracket(i, j),
            );
            for k in 0..d {
                worst = worst.max((a[k] - b[k] - c[k]).abs());
            }
        }
    }
    worst
}

/// `max ‖R(x,y)z + R(y,z)x + R(z,x)y‖∞` over basis triples.
pub fn bianchi_residual(alg: &MetricLieAlgebra, table: &LeviCivitaTable) -> Result<f64> {
    let d = alg.dim();
    let e = |i: usize| crate::numkit::unit_vector(d, i);
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            for k in (j + 1)..d {
                let (x, y, z) = (e(i), e(j), e(k));
                let a = curvature(table, alg, &x, &y, &z)?;
                let b = curvature(table, alg, &y, &z, &x)?;
                let c = curvature(table, alg, &z, &x, &y)?;
                for m in 0..d {
                    worst = worst.max((a[m] + b[m] + c[m]).abs());
                }
            }
        }
    }
    Ok(worst)
}
