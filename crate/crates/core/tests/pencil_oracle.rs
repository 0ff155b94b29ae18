use bilap_core::numerics::{factor_inertia, smallest_eigenpair, BandedSymMatrix, DEFAULT_ZERO_TOL};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_banded(rng: &mut ChaCha8Rng, n: usize, b: usize, spd: bool) -> BandedSymMatrix {
    let mut m = BandedSymMatrix::zeros(n, b);
    for j in 0..n {
        for i in j..(j + b + 1).min(n) {
            let v: f64 = rng.gen_range(-1.0..1.0);
            m.set(i, j, v);
        }
    }
    if spd {
        // Strict diagonal dominance.
        for j in 0..n {
            m.set(j, j, 2.0 * b as f64 + 1.0 + rng.gen_range(0.0..1.0));
        }
    }
    m
}

fn to_na(m: &BandedSymMatrix) -> DMatrix<f64> {
    let d = m.to_dense();
    let n = m.order();
    DMatrix::from_fn(n, n, |i, j| d[i][j])
}

/// Full spectrum of the pencil through `L⁻¹ A L⁻ᵀ`.
fn dense_spectrum(a: &BandedSymMatrix, m: &BandedSymMatrix) -> Vec<f64> {
    let l = to_na(m).cholesky().expect("M is SPD").l();
    let linv = l.clone().try_inverse().unwrap();
    let c = &linv * to_na(a) * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut ev: Vec<f64> = c.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

#[test]
fn matches_dense_pencil_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rtol = 1e-10;
    let mut with_negative = 0;
    for case in 0..200 {
        let n = rng.gen_range(2..=12);
        let b = rng.gen_range(0..=3.min(n - 1));
        let a = random_banded(&mut rng, n, b, false);
        let m = random_banded(&mut rng, n, b, true);
        let spectrum = dense_spectrum(&a, &m);
        let got = smallest_eigenpair(&a, &m, rtol).unwrap();
        match got {
            None => assert!(spectrum[0] >= -1e-12, "case {case}: missed {}", spectrum[0]),
            Some(pair) => {
                with_negative += 1;
                let exact = spectrum[0];
                assert!(
                    (pair.value - exact).abs() <= rtol * exact.abs() + 1e-14,
                    "case {case}: {} vs {exact}",
                    pair.value
                );
                let ax = a.mul_vec(&pair.vector);
                let mx = m.mul_vec(&pair.vector);
                let res: f64 = ax.iter().zip(&mx).map(|(p, q)| (p - pair.value * q).powi(2)).sum::<f64>().sqrt();
                let norm: f64 = ax.iter().map(|p| p * p).sum::<f64>().sqrt();
                assert!(res <= 1e3 * rtol * norm, "case {case}: residual {res} vs {norm}");
                assert!((m.quad_form(&pair.vector) - 1.0).abs() < 1e-12);
            }
        }
    }
    assert!(with_negative > 100);
}

#[test]
fn six_by_six_tridiagonal_pencil() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let a = random_banded(&mut rng, 6, 3, false);
        let m = random_banded(&mut rng, 6, 3, true);
        let spectrum = dense_spectrum(&a, &m);
        if let Some(pair) = smallest_eigenpair(&a, &m, 1e-9).unwrap() {
            assert!((pair.value - spectrum[0]).abs() <= 1e-9 * spectrum[0].abs());
        }
    }
}

#[test]
fn inertia_counts_match_dense_signs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let b = rng.gen_range(0..=3.min(n - 1));
        let a = random_banded(&mut rng, n, b, false);
        let ev = to_na(&a).symmetric_eigen().eigenvalues;
        let neg = ev.iter().filter(|&&x| x < 0.0).count();
        match factor_inertia(&a, DEFAULT_ZERO_TOL) {
            Ok((_, t)) => {
                assert_eq!(t.total(), n);
                assert_eq!(t.negative, neg);
            }
            // Unpivoted LDLᵀ may break down on indefinite input; callers nudge the shift.
            Err(_) => {}
        }
    }
}
