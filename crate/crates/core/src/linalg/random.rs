//! Seeded random matrices and states.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::{vec_inner, vec_norm, ComplexMatrix, C64};

pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts N(0, 1/2).
pub fn complex_normal(rng: &mut Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix with i.i.d. standard complex normal entries.
pub fn random_gaussian_matrix(rows: usize, cols: usize, rng: &mut Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn random_hermitian(n: usize, rng: &mut Rng) -> ComplexMatrix {
    let g = random_gaussian_matrix(n, n, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Haar-random unitary of dimension `d`, deterministic per seed.
pub fn random_unitary(d: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(d, &mut seeded_rng(seed))
}

/// Haar-random unitary drawn from an existing generator.
///
/// QR of a Ginibre matrix by Gram-Schmidt with re-orthogonalization. The
/// triangular factor then has a positive real diagonal, which is the phase
/// convention that makes Q Haar distributed.
pub fn random_unitary_with(d: usize, rng: &mut Rng) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be positive");
    let g = random_gaussian_matrix(d, d, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = g.col(j);
        for _ in 0..2 {
            for q in &cols {
                let c = vec_inner(q, &v);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= c * y;
                }
            }
        }
        let n = vec_norm(&v);
        cols.push(v.iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_columns(d, &cols)
}

/// Haar-random pure state in C^d.
pub fn random_state(d: usize, rng: &mut Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| complex_normal(rng)).collect();
    let n = vec_norm(&v);
    v.iter().map(|z| z / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_to_machine_precision() {
        for d in 1..=8 {
            for seed in 0..20 {
                assert!(random_unitary(d, seed).unitarity_deviation() <= 1e-12);
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(random_unitary(3, 42), random_unitary(3, 42));
        assert_ne!(random_unitary(3, 42), random_unitary(3, 43));
    }

    #[test]
    fn haar_first_moment() {
        // E|U_00|^2 = 1/d for Haar measure
        let mut rng = seeded_rng(2024);
        let n = 10_000;
        let mean: f64 = (0..n).map(|_| random_unitary_with(2, &mut rng)[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() <= 0.02, "mean {mean}");
    }

    #[test]
    fn random_state_is_normalized() {
        let mut rng = seeded_rng(1);
        for d in 1..6 {
            assert!((vec_norm(&random_state(d, &mut rng)) - 1.0).abs() < 1e-14);
        }
    }
}
