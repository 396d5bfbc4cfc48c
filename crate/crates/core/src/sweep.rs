//! Seeded batch experiments over many random structures.
//!
//! Each case draws from its own [`SplitMix64::for_case`] stream, so results do
//! not depend on the execution strategy or thread count.

use num_complex::Complex64;

use crate::classify::{normal_form, structure_distance};
use crate::connection::{
    bianchi_residual, levi_civita_table, metric_compatibility_residual, ricci, torsion_residual,
};
use crate::error::Result;
use crate::kenmotsu::AlmostContactData;
use crate::liealg::{pushforward, MetricLieAlgebra};
use crate::model::{self, model_algebra, Lambda, ModelPoint};
use crate::numkit::{orthonormality_residual, RealMatrix};
use crate::parallel::Execution;
use crate::rng::{random_invertible, random_lambda, SplitMix64};

#[derive(Debug, Clone)]
pub struct EinsteinCase {
    pub lambdas: Vec<f64>,
    /// `max |ric + 2n·gram|`
    pub residual: f64,
}

/// Ricci tensors of `draws` random models `g_λ`, λ uniform on `[−5, 5]ⁿ`.
pub fn einstein_sweep(
    n: usize,
    draws: usize,
    seed: u64,
    exec: Execution,
) -> Vec<Result<EinsteinCase>> {
    exec.map(draws, |k| {
        let mut rng = SplitMix64::for_case(seed, k as u64);
        let lambdas = random_lambda(&mut rng, n);
        let (alg, _) = model_algebra(&Lambda::new(lambdas.clone())?);
        let target = alg.gram().scale(-2.0 * n as f64);
        let residual = ricci(&alg)?.sub(&target)?.max_abs();
        Ok(EinsteinCase { lambdas, residual })
    })
}

#[derive(Debug, Clone)]
pub struct RoundTripCase {
    /// Ground truth, sorted descending.
    pub expected: Vec<f64>,
    pub found: Vec<f64>,
    pub lambda_error: f64,
    /// Distance between the conjugated input and the reconstruction.
    pub residual: f64,
    pub eigen_residual: f64,
}

/// Conjugates `g_λ` by a random `T` with condition at most `cond_max` and classifies it.
pub fn classification_round_trip(
    lambdas: &[f64],
    rng: &mut SplitMix64,
    cond_max: f64,
    tol: f64,
) -> Result<RoundTripCase> {
    let lambda = Lambda::new(lambdas.to_vec())?;
    let (alg, data) = model_algebra(&lambda);
    let t = random_invertible(rng, lambda.dim(), cond_max)?;
    let (pa, ps) = pushforward(&alg, &data, &t)?;
    let nf = normal_form(&pa, &ps, tol)?;
    let mut expected = lambdas.to_vec();
    expected.sort_by(|a, b| b.total_cmp(a));
    let lambda_error = expected
        .iter()
        .zip(&nf.lambdas)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(RoundTripCase {
        expected,
        found: nf.lambdas,
        lambda_error,
        residual: nf.residual,
        eigen_residual: nf.eigen_residual,
    })
}

/// Round trips with λ drawn uniformly from `[−5, 5]ⁿ`.
pub fn classification_sweep(
    n: usize,
    cases: usize,
    seed: u64,
    cond_max: f64,
    tol: f64,
    exec: Execution,
) -> Vec<Result<RoundTripCase>> {
    classification_sweep_with(cases, seed, cond_max, tol, exec, |rng| {
        random_lambda(rng, n)
    })
}

/// Round trips with a caller-chosen spectrum generator.
pub fn classification_sweep_with<F>(
    cases: usize,
    seed: u64,
    cond_max: f64,
    tol: f64,
    exec: Execution,
    spectrum: F,
) -> Vec<Result<RoundTripCase>>
where
    F: Fn(&mut SplitMix64) -> Vec<f64> + Sync + Send,
{
    exec.map(cases, |k| {
        let mut rng = SplitMix64::for_case(seed, k as u64);
        let lambdas = spectrum(&mut rng);
        classification_round_trip(&lambdas, &mut rng, cond_max, tol)
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GroupAxiomStats {
    pub associativity: f64,
    pub inverse: f64,
    pub frame_orthonormality: f64,
}

fn random_point(rng: &mut SplitMix64, n: usize, box_size: f64) -> ModelPoint {
    let t = rng.uniform(-box_size, box_size);
    let z: Vec<Complex64> = (0..n)
        .map(|_| {
            let r = box_size * rng.next_f64().sqrt();
            let theta = rng.uniform(0.0, std::f64::consts::TAU);
            Complex64::from_polar(r, theta)
        })
        .collect();
    ModelPoint::new(t, &z).expect("finite sample")
}

/// Associativity, inverse and frame orthonormality of `G_λ` at `samples`
/// random triples with `n ∈ 1..=4`, `|t| ≤ 3`, `|z_j| ≤ 3`.
pub fn group_axiom_sweep(samples: usize, seed: u64, exec: Execution) -> Result<GroupAxiomStats> {
    let per = exec.map(samples, |k| -> Result<GroupAxiomStats> {
        let mut rng = SplitMix64::for_case(seed, k as u64);
        let n = 1 + (rng.next_u64() % 4) as usize;
        let lambda = Lambda::new(random_lambda(&mut rng, n))?;
        let p = random_point(&mut rng, n, 3.0);
        let q = random_point(&mut rng, n, 3.0);
        let r = random_point(&mut rng, n, 3.0);
        let left = model::multiply(&lambda, &model::multiply(&lambda, &p, &q)?, &r)?;
        let right = model::multiply(&lambda, &p, &model::multiply(&lambda, &q, &r)?)?;
        let e = ModelPoint::identity(n);
        let pinv = model::inverse(&lambda, &p)?;
        let inverse = model::multiply(&lambda, &p, &pinv)?
            .max_abs_diff(&e)
            .max(model::multiply(&lambda, &pinv, &p)?.max_abs_diff(&e));
        let metric = model::metric_at(&lambda, &p)?;
        let frame = model::frame_at(&lambda, &p)?;
        let cols: Vec<Vec<f64>> = (0..frame.cols()).map(|c| frame.column(c)).collect();
        Ok(GroupAxiomStats {
            associativity: left.max_abs_diff(&right),
            inverse,
            frame_orthonormality: orthonormality_residual(&cols, &metric),
        })
    });
    let mut acc = GroupAxiomStats::default();
    for s in per {
        let s = s?;
        acc.associativity = acc.associativity.max(s.associativity);
        acc.inverse = acc.inverse.max(s.inverse);
        acc.frame_orthonormality = acc.frame_orthonormality.max(s.frame_orthonormality);
    }
    Ok(acc)
}

/// Worst finite-difference bracket deviation over `points` random points,
/// each with its own random `λ` (`n ∈ 1..=3`).
pub fn bracket_fd_sweep(points: usize, seed: u64, h_step: f64, exec: Execution) -> Result<f64> {
    let per = exec.map(points, |k| -> Result<f64> {
        let mut rng = SplitMix64::for_case(seed, k as u64);
        let n = 1 + (rng.next_u64() % 3) as usize;
        let lambda = Lambda::new(random_lambda(&mut rng, n))?;
        let p = random_point(&mut rng, n, 3.0);
        model::numeric_bracket_check(&lambda, &p, h_step)
    });
    per.into_iter().try_fold(0.0f64, |m, r| Ok(m.max(r?)))
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConnectionStats {
    pub metric_compatibility: f64,
    pub torsion: f64,
    pub bianchi: f64,
}

/// Random model, possibly conjugated by a random `T` with condition at most `cond_max`.
pub fn random_structure(
    rng: &mut SplitMix64,
    n: usize,
    conjugate: bool,
    cond_max: f64,
) -> Result<(MetricLieAlgebra, AlmostContactData)> {
    let lambda = Lambda::new(random_lambda(rng, n))?;
    let (alg, data) = model_algebra(&lambda);
    if !conjugate {
        return Ok((alg, data));
    }
    let t = random_invertible(rng, lambda.dim(), cond_max)?;
    pushforward(&alg, &data, &t)
}

/// Levi-Civita identities on `cases` random structures (`n ∈ 1..=3`, every
/// other case conjugated).
pub fn connection_sweep(
    cases: usize,
    seed: u64,
    cond_max: f64,
    exec: Execution,
) -> Result<ConnectionStats> {
    let per = exec.map(cases, |k| -> Result<ConnectionStats> {
        let mut rng = SplitMix64::for_case(seed, k as u64);
        let n = 1 + (rng.next_u64() % 3) as usize;
        let (alg, _) = random_structure(&mut rng, n, k % 2 == 1, cond_max)?;
        let table = levi_civita_table(&alg)?;
        Ok(ConnectionStats {
            metric_compatibility: metric_compatibility_residual(&alg, &table),
            torsion: torsion_residual(&alg, &table),
            bianchi: bianchi_residual(&alg, &table)?,
        })
    });
    let mut acc = ConnectionStats::default();
    for s in per {
        let s = s?;
        acc.metric_compatibility = acc.metric_compatibility.max(s.metric_compatibility);
        acc.torsion = acc.torsion.max(s.torsion);
        acc.bianchi = acc.bianchi.max(s.bianchi);
    }
    Ok(acc)
}

/// Relative distance after a push forward and back.
pub fn pushforward_inverse_residual(
    alg: &MetricLieAlgebra,
    data: &AlmostContactData,
    t: &RealMatrix,
) -> Result<f64> {
    let (a1, s1) = pushforward(alg, data, t)?;
    let (a2, s2) = pushforward(&a1, &s1, &t.inverse()?)?;
    Ok(structure_distance((alg, data), (&a2, &s2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_and_parallel_agree() {
        let a: Vec<f64> = classification_sweep(2, 8, 5, 1e3, 1e-7, Execution::Sequential)
            .into_iter()
            .map(|r| r.unwrap().lambda_error)
            .collect();
        let b: Vec<f64> = classification_sweep(2, 8, 5, 1e3, 1e-7, Execution::Parallel)
            .into_iter()
            .map(|r| r.unwrap().lambda_error)
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn small_einstein_sweep() {
        for case in einstein_sweep(2, 5, 1, Execution::default()) {
            assert!(case.unwrap().residual < 1e-10);
        }
    }
}
