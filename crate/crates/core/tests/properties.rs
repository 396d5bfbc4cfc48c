use kenmotsu_lie::connection::frame_einstein_check;
use kenmotsu_lie::format::StructureFile;
use kenmotsu_lie::model::model_algebra;
use kenmotsu_lie::numkit::{
    gram_schmidt, hermitian_eigen, orthonormality_residual, ComplexMatrix, RealMatrix,
};
use kenmotsu_lie::rng::{random_invertible, SplitMix64};
use kenmotsu_lie::sweep::{pushforward_inverse_residual, random_structure};
use kenmotsu_lie::{normal_form, Lambda};
use num_complex::Complex64;
use proptest::prelude::*;

fn lambdas(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 0..=max_n)
}

/// `AᵀA + I`: symmetric positive definite with eigenvalues at least one.
fn spd(d: usize, entries: &[f64]) -> RealMatrix {
    let a = RealMatrix::new(d, d, entries.to_vec()).unwrap();
    a.transpose()
        .matmul(&a)
        .unwrap()
        .add(&RealMatrix::identity(d))
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_schmidt_orthonormalizes(d in 1usize..7, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let entries: Vec<f64> = (0..d * d).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let g = spd(d, &entries);
        let vectors: Vec<Vec<f64>> = random_invertible(&mut rng, d, 1e3).unwrap().to_rows();
        let q = gram_schmidt(&vectors, &g, 1e-9).unwrap();
        prop_assert_eq!(q.len(), d);
        prop_assert!(orthonormality_residual(&q, &g) < 1e-10);
    }

    #[test]
    fn hermitian_eigen_reconstructs(n in 1usize..=16, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(rng.uniform(-3.0, 3.0), 0.0);
            for j in i + 1..n {
                let z = Complex64::new(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
                data[i * n + j] = z;
                data[j * n + i] = z.conj();
            }
        }
        let h = ComplexMatrix::new(n, data).unwrap();
        let tol = 1e-9;
        let eig = hermitian_eigen(&h, tol).unwrap();
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let u = &eig.eigenvectors;
        let unitary = u.conj_transpose().matmul(u).unwrap();
        prop_assert!(unitary.max_abs_diff(&ComplexMatrix::identity(n)) < 10.0 * tol);
        let mut dd = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, &e) in eig.eigenvalues.iter().enumerate() {
            dd[i * n + i] = Complex64::new(e, 0.0);
        }
        let diag = ComplexMatrix::new(n, dd).unwrap();
        let back = u.matmul(&diag).unwrap().matmul(&u.conj_transpose()).unwrap();
        prop_assert!(back.max_abs_diff(&h) < 10.0 * tol);
    }

    #[test]
    fn pushforward_round_trip(values in lambdas(3), seed in any::<u64>()) {
        let lambda = Lambda::new(values).unwrap();
        let (alg, data) = model_algebra(&lambda);
        let mut rng = SplitMix64::new(seed);
        let t = random_invertible(&mut rng, lambda.dim(), 1e3).unwrap();
        // Unit determinant keeps both T and T⁻¹ clear of the singularity guard.
        let det = t.determinant().unwrap();
        let t = t.scale(det.abs().powf(-1.0 / lambda.dim() as f64));
        prop_assert!(pushforward_inverse_residual(&alg, &data, &t).unwrap() < 1e-9);
    }

    #[test]
    fn structure_files_round_trip_bit_exact(n in 0usize..4, seed in any::<u64>(), conjugate in any::<bool>()) {
        let mut rng = SplitMix64::new(seed);
        let (alg, data) = random_structure(&mut rng, n, conjugate, 1e4).unwrap();
        let file = StructureFile::from_structure(&alg, &data);
        let text = file.to_json();
        let parsed = StructureFile::parse(&text).unwrap();
        prop_assert!(parsed.bit_eq(&file));
        prop_assert_eq!(parsed.to_json(), text);
    }

    #[test]
    fn spectrum_is_basis_invariant(values in lambdas(3), seed in any::<u64>()) {
        let lambda = Lambda::new(values.clone()).unwrap();
        let (alg, data) = model_algebra(&lambda);
        let mut rng = SplitMix64::new(seed);
        let t = random_invertible(&mut rng, lambda.dim(), 1e2).unwrap();
        let (ca, cd) = kenmotsu_lie::pushforward(&alg, &data, &t).unwrap();
        let nf = normal_form(&ca, &cd, 1e-7).unwrap();
        let mut expected = values;
        expected.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(nf.lambdas.len(), expected.len());
        for (a, b) in nf.lambdas.iter().zip(&expected) {
            prop_assert!((a - b).abs() < 1e-8, "{:?} vs {:?}", nf.lambdas, expected);
        }
        prop_assert!(nf.residual < 1e-8);
    }

    #[test]
    fn models_are_einstein(values in lambdas(4)) {
        let lambda = Lambda::new(values).unwrap();
        let (alg, _) = model_algebra(&lambda);
        let fit = frame_einstein_check(&alg, 1e-9).unwrap();
        prop_assert!(fit.pass, "residual {}", fit.residual);
        prop_assert!((fit.constant + 2.0 * lambda.n() as f64).abs() < 1e-9);
    }
}
