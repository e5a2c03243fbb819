//! Dense complex linear algebra: Hermitian eigensolver, SVD, polar
//! decomposition, PSD square root and partial trace.

mod decomp;
mod eig;
mod matrix;
mod svd;

pub use decomp::{partial_trace, polar_unitary, psd_sqrt, Polar, Subsystem};
pub use eig::{hermitian_eig, HermitianEig};
pub use matrix::{complete_orthonormal, vec_inner, vec_norm, ComplexMatrix};
pub use svd::{svd, SvdResult};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::random::{gaussian_matrix, random_density, rng};
    use crate::scalar::C;

    type M = ComplexMatrix<f64>;

    fn re(x: f64) -> C<f64> {
        C::new(x, 0.0)
    }

    fn pauli_z() -> M {
        M::from_real_diag(&[1.0, -1.0])
    }

    fn random_hermitian(n: usize, seed: u64) -> M {
        let b = gaussian_matrix::<f64>(n, n, &mut rng(seed));
        &b + &b.adjoint()
    }

    fn unitary_residual(u: &M) -> f64 {
        u.isometry_residual().max(u.coisometry_residual())
    }

    #[test]
    fn eig_identity_and_pauli_z() {
        let e = hermitian_eig(&M::identity(2)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 1.0]);
        let e = hermitian_eig(&pauli_z()).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, -1.0]);
        assert_eq!(e.vector(0), vec![re(1.0), re(0.0)]);
    }

    #[test]
    fn eig_random_hermitian_reconstructs() {
        for seed in 0..20 {
            for n in [1, 2, 4, 7, 16] {
                let a = random_hermitian(n, seed);
                let e = hermitian_eig(&a).unwrap();
                let scale = a.tolerance_scale();
                assert!((&a - &e.reconstruct()).frobenius_norm() <= 1e-10 * scale);
                assert!(e.eigenvectors.isometry_residual() <= 1e-10);
                for k in 0..n {
                    let v = e.vector(k);
                    let av = a.apply_vec(&v);
                    let err: f64 = av
                        .iter()
                        .zip(&v)
                        .map(|(x, y)| (x - y * e.eigenvalues[k]).norm_sqr())
                        .sum::<f64>()
                        .sqrt();
                    assert!(err <= 1e-10 * scale, "eigenpair residual {err}");
                }
                assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn eig_phase_convention() {
        let a = random_hermitian(5, 99);
        let e = hermitian_eig(&a).unwrap();
        for k in 0..5 {
            let v = e.vector(k);
            let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let pivot = v
                .iter()
                .position(|z| z.norm() >= max * (1.0 - 1e-10))
                .unwrap();
            assert_eq!(v[pivot].im, 0.0);
            assert!(v[pivot].re > 0.0);
        }
    }

    #[test]
    fn eig_errors() {
        let mut a = M::identity(2);
        a[(0, 1)] = re(1.0);
        assert!(matches!(hermitian_eig(&a), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            hermitian_eig(&M::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        a[(0, 1)] = re(f64::NAN);
        assert_eq!(hermitian_eig(&a).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn eig_degenerate_projectors() {
        // diag(2,2,-1) conjugated by a random unitary: compare the rank-2 projector
        let u = crate::random::haar_unitary::<f64>(3, &mut rng(5));
        let d = M::from_real_diag(&[2.0, -1.0, 2.0]);
        let a = &(&u * &d) * &u.adjoint();
        let e = hermitian_eig(&a).unwrap();
        assert!((e.eigenvalues[0] - 2.0).abs() < 1e-12 && (e.eigenvalues[1] - 2.0).abs() < 1e-12);
        let proj = e.reconstruct_with(|x| if x > 0.0 { 1.0 } else { 0.0 });
        let expect = &(&u * &M::from_real_diag(&[1.0, 0.0, 1.0])) * &u.adjoint();
        assert!((&proj - &expect).frobenius_norm() < 1e-10);
    }

    #[test]
    fn svd_diagonal_cases() {
        let s = svd(&M::identity(3)).unwrap();
        assert_eq!(s.singulars, vec![1.0; 3]);
        let s = svd(&M::from_real_diag(&[3.0, 0.0])).unwrap();
        assert_eq!(s.singulars, vec![3.0, 0.0]);
        assert!(s.left.isometry_residual() < 1e-14);
        assert!(s.right.isometry_residual() < 1e-14);
    }

    #[test]
    fn svd_random_rectangular() {
        for seed in 0..20 {
            for (m, n) in [(3, 5), (5, 3), (1, 4), (4, 1), (6, 6), (16, 16)] {
                let a = gaussian_matrix::<f64>(m, n, &mut rng(seed));
                let s = svd(&a).unwrap();
                let scale = a.tolerance_scale();
                assert!((&a - &s.reconstruct()).frobenius_norm() <= 1e-10 * scale);
                assert!(s.left.isometry_residual() <= 1e-10);
                assert!(s.right.isometry_residual() <= 1e-10);
                assert!(s.singulars.windows(2).all(|w| w[0] >= w[1]));
                assert!(s.singulars.iter().all(|&x| x >= 0.0));
            }
        }
    }

    #[test]
    fn svd_rank_deficient() {
        let mut rng = rng(3);
        let x = gaussian_matrix::<f64>(5, 2, &mut rng);
        let y = gaussian_matrix::<f64>(2, 4, &mut rng);
        let a = &x * &y;
        let s = svd(&a).unwrap();
        assert!(s.singulars[2] < 1e-12 && s.singulars[3] < 1e-12);
        assert!((&a - &s.reconstruct()).frobenius_norm() <= 1e-10 * a.tolerance_scale());
        assert!(s.left.isometry_residual() <= 1e-10);
    }

    #[test]
    fn svd_singulars_match_eigs_of_gram() {
        let a = gaussian_matrix::<f64>(4, 4, &mut rng(11));
        let s = svd(&a).unwrap();
        let e = hermitian_eig(&(&a.adjoint() * &a)).unwrap();
        for (sv, ev) in s.singulars.iter().zip(&e.eigenvalues) {
            assert!((sv * sv - ev).abs() < 1e-10);
        }
    }

    #[test]
    fn polar_examples() {
        let u = crate::random::haar_unitary::<f64>(3, &mut rng(1));
        let p = polar_unitary(&u).unwrap();
        assert!((&p.stretch - &M::identity(3)).frobenius_norm() < 1e-12);
        assert!((&p.unitary - &u).frobenius_norm() < 1e-12);
        assert!(!p.degenerate);

        let p = polar_unitary(&M::identity(2).scale_real(0.5)).unwrap();
        assert!((&p.stretch - &M::identity(2).scale_real(0.5)).frobenius_norm() < 1e-14);
        assert!((&p.unitary - &M::identity(2)).frobenius_norm() < 1e-14);

        let p = polar_unitary(&M::from_real_diag(&[0.9, -0.4])).unwrap();
        assert!((&p.unitary - &M::from_real_diag(&[1.0, -1.0])).frobenius_norm() < 1e-14);
        assert!((&p.stretch - &M::from_real_diag(&[0.9, 0.4])).frobenius_norm() < 1e-14);
    }

    #[test]
    fn polar_random_and_degenerate() {
        for seed in 0..10 {
            let a = gaussian_matrix::<f64>(4, 4, &mut rng(seed));
            let p = polar_unitary(&a).unwrap();
            assert!(
                (&a - &(&p.stretch * &p.unitary)).frobenius_norm() <= 1e-10 * a.tolerance_scale()
            );
            assert!(unitary_residual(&p.unitary) <= 1e-10);
            let e = hermitian_eig(&p.stretch).unwrap();
            assert!(e.eigenvalues.iter().all(|&x| x >= -1e-10));
            // stretch^2 = a a^dagger
            let aa = &a * &a.adjoint();
            assert!(
                (&(&p.stretch * &p.stretch) - &aa).frobenius_norm() <= 1e-10 * aa.tolerance_scale()
            );
        }
        let p = polar_unitary(&M::from_real_diag(&[1.0, 0.0])).unwrap();
        assert!(p.degenerate);
        assert!(unitary_residual(&p.unitary) < 1e-12);
        assert!(polar_unitary(&M::zeros(2, 3)).is_err());
    }

    #[test]
    fn psd_sqrt_examples() {
        assert!((&psd_sqrt(&M::identity(3)).unwrap() - &M::identity(3)).frobenius_norm() < 1e-14);
        let r = psd_sqrt(&M::from_real_diag(&[4.0, 1.0])).unwrap();
        assert!((&r - &M::from_real_diag(&[2.0, 1.0])).frobenius_norm() < 1e-14);
        let v = [C::new(0.6, 0.0), C::new(0.0, 0.8)];
        let col = M::column_vector(&v);
        let proj = &col * &col.adjoint();
        assert!((&psd_sqrt(&proj).unwrap() - &proj).frobenius_norm() < 1e-12);
        let rho = random_density::<f64>(5, &mut rng(8));
        let r = psd_sqrt(&rho).unwrap();
        assert!((&(&r * &r) - &rho).frobenius_norm() < 1e-9);
        // tiny negative eigenvalues are clamped
        let near = M::from_real_diag(&[1.0, -5e-11]);
        assert_eq!(psd_sqrt(&near).unwrap()[(1, 1)], C::new(0.0, 0.0));
        assert!(matches!(
            psd_sqrt(&M::from_real_diag(&[1.0, -1e-6])),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let mut rng = rng(21);
        let rho = random_density::<f64>(2, &mut rng);
        let sigma = random_density::<f64>(3, &mut rng).scale_real(2.5);
        let prod = rho.kron(&sigma);
        let r = partial_trace(&prod, Subsystem::Second, (2, 3)).unwrap();
        assert!((&r - &rho.scale_real(2.5)).frobenius_norm() < 1e-12);
        let s = partial_trace(&prod, Subsystem::First, (2, 3)).unwrap();
        assert!((&s - &sigma).frobenius_norm() < 1e-12);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = M::column_vector(&[re(h), re(0.0), re(0.0), re(h)]);
        let bell = &psi * &psi.adjoint();
        let half = M::identity(2).scale_real(0.5);
        for side in [Subsystem::First, Subsystem::Second] {
            assert!(
                (&partial_trace(&bell, side, (2, 2)).unwrap() - &half).frobenius_norm() < 1e-15
            );
        }
        assert!(partial_trace(&bell, Subsystem::First, (2, 3)).is_err());
    }

    #[test]
    fn partial_trace_index_sum_oracle() {
        let a = random_density::<f64>(6, &mut rng(4));
        let pt = partial_trace(&a, Subsystem::Second, (2, 3)).unwrap();
        // direct sum via basis vectors <i|<m| a |j>|m>
        let mut expect = M::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                for m in 0..3 {
                    let mut bra = vec![re(0.0); 6];
                    bra[i * 3 + m] = re(1.0);
                    let mut ket = vec![re(0.0); 6];
                    ket[j * 3 + m] = re(1.0);
                    expect[(i, j)] += vec_inner(&bra, &a.apply_vec(&ket));
                }
            }
        }
        assert!((&pt - &expect).frobenius_norm() < 1e-14);
        assert!((pt.trace() - a.trace()).norm() < 1e-12);
    }

    #[test]
    fn f32_eigensolver() {
        let a = random_hermitian(4, 2).cast::<f32>();
        let e = hermitian_eig(&a).unwrap();
        assert!((&a - &e.reconstruct()).frobenius_norm() <= 1e-4 * a.tolerance_scale());
    }
}
