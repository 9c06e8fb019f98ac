//! Entangling power: the largest entanglement entropy (base 2) a unitary
//! creates from a product of pure states, found by multistart search.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::bipartite::{reduced_state, BipartiteUnitary, Side};
use crate::error::{Error, Result};
use crate::linalg::random::random_state;
use crate::linalg::{hermitian_eig, kron_vec, normalized, seeded_rng, vec_norm, Rng, C64};

const NORM_TOL: f64 = 1e-9;

/// Von Neumann entropy of the reduced state, in bits.
pub fn entanglement_entropy(state: &[C64], d_a: usize, d_b: usize) -> Result<f64> {
    if d_a == 0 || d_b == 0 || state.len() != d_a * d_b {
        return Err(Error::Dimension(format!("state of length {} is not {d_a}x{d_b}", state.len())));
    }
    if state.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = vec_norm(state);
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Unnormalized { norm });
    }
    Ok(entropy_unchecked(state, d_a, d_b))
}

fn entropy_unchecked(state: &[C64], d_a: usize, d_b: usize) -> f64 {
    let kept = if d_a <= d_b { Side::A } else { Side::B };
    let rho = reduced_state(state, d_a, d_b, kept);
    let eig = hermitian_eig(&rho, 1e-8).expect("reduced state is Hermitian");
    eig.values.iter().filter(|&&p| p > 1e-15).map(|&p| -p * p.log2()).sum::<f64>().max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizationConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Initial step on the sphere.
    pub step: f64,
    /// Factor applied to the step after a rejected move.
    pub shrink: f64,
    /// Search stops once the step falls below this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizationConfig {
    fn default() -> Self {
        Self { restarts: 32, max_iters: 2000, step: 0.5, shrink: 0.85, tol: 1e-10, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglingPowerResult {
    pub value: f64,
    pub argmax_a: Vec<C64>,
    pub argmax_b: Vec<C64>,
    pub per_restart: Vec<f64>,
    /// Whether the winning restart reached the step tolerance.
    pub converged: bool,
}

struct RestartOutcome {
    value: f64,
    a: Vec<C64>,
    b: Vec<C64>,
    converged: bool,
}

fn perturb(v: &[C64], step: f64, rng: &mut Rng) -> Vec<C64> {
    let moved: Vec<C64> = v
        .iter()
        .map(|z| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            z + C64::new(re, im) * step
        })
        .collect();
    normalized(&moved)
}

fn climb(u: &BipartiteUnitary, cfg: &OptimizationConfig, seed: u64) -> RestartOutcome {
    let (d_a, d_b) = (u.d_a(), u.d_b());
    let mut rng = seeded_rng(seed);
    let eval = |a: &[C64], b: &[C64]| entropy_unchecked(&u.matrix().mul_vec(&kron_vec(a, b)), d_a, d_b);

    let mut a = random_state(d_a, &mut rng);
    let mut b = random_state(d_b, &mut rng);
    let mut value = eval(&a, &b);
    let mut step = cfg.step;
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        if step < cfg.tol {
            converged = true;
            break;
        }
        let a2 = perturb(&a, step, &mut rng);
        let b2 = perturb(&b, step, &mut rng);
        let v2 = eval(&a2, &b2);
        if v2 > value {
            a = a2;
            b = b2;
            value = v2;
            step = (step * 1.5).min(cfg.step);
        } else {
            step *= cfg.shrink;
        }
    }
    RestartOutcome { value, a, b, converged }
}

fn restart_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Multistart hill climbing over pairs of unit vectors. Restart `k` uses a
/// seed derived from `(cfg.seed, k)`, so adding restarts never lowers the
/// result. Ties go to the lowest restart.
pub fn entangling_power(u: &BipartiteUnitary, cfg: &OptimizationConfig) -> Result<EntanglingPowerResult> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidParams("restarts must be at least 1".into()));
    }
    let step_ok = cfg.step > 0.0 && cfg.step.is_finite();
    let shrink_ok = cfg.shrink > 0.0 && cfg.shrink < 1.0;
    if !step_ok || !shrink_ok || cfg.tol.is_nan() || cfg.tol <= 0.0 {
        return Err(Error::InvalidParams("need step > 0, 0 < shrink < 1 and tol > 0".into()));
    }
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts).map(|k| climb(u, cfg, restart_seed(cfg.seed, k))).collect();
    let per_restart: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
    let best = outcomes
        .into_iter()
        .reduce(|best, o| if o.value > best.value { o } else { best })
        .expect("at least one restart");
    Ok(EntanglingPowerResult {
        value: best.value,
        argmax_a: best.a,
        argmax_b: best.b,
        per_restart,
        converged: best.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::linalg::basis_vector;

    #[test]
    fn entropy_of_product_and_bell() {
        let prod = kron_vec(&basis_vector(2, 0), &basis_vector(3, 2));
        assert!(entanglement_entropy(&prod, 2, 3).unwrap().abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)];
        assert!((entanglement_entropy(&bell, 2, 2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_maximally_entangled_qutrits() {
        let c = C64::new(1.0 / 3f64.sqrt(), 0.0);
        let mut psi = vec![C64::new(0.0, 0.0); 9];
        for i in 0..3 {
            psi[i * 3 + i] = c;
        }
        assert!((entanglement_entropy(&psi, 3, 3).unwrap() - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn entropy_rejects_bad_input() {
        assert!(matches!(entanglement_entropy(&[C64::new(2.0, 0.0)], 1, 1), Err(Error::Unnormalized { .. })));
        assert!(matches!(entanglement_entropy(&[C64::new(1.0, 0.0)], 2, 1), Err(Error::Dimension(_))));
    }

    #[test]
    fn cnot_reaches_one_bit() {
        let cfg = OptimizationConfig { restarts: 8, ..Default::default() };
        let r = entangling_power(&gates::cnot(), &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-4, "{}", r.value);
        let out = gates::cnot().matrix().mul_vec(&kron_vec(&r.argmax_a, &r.argmax_b));
        assert!((entanglement_entropy(&out, 2, 2).unwrap() - r.value).abs() < 1e-12);
    }

    #[test]
    fn swap_and_identity_create_nothing() {
        let cfg = OptimizationConfig { restarts: 4, max_iters: 300, ..Default::default() };
        for u in [gates::swap(2), gates::identity(2, 3)] {
            assert!(entangling_power(&u, &cfg).unwrap().value < 1e-6);
        }
    }

    #[test]
    fn more_restarts_never_lower() {
        let u = gates::heisenberg(0.2).unwrap();
        let few =
            entangling_power(&u, &OptimizationConfig { restarts: 2, max_iters: 200, ..Default::default() }).unwrap();
        let many =
            entangling_power(&u, &OptimizationConfig { restarts: 6, max_iters: 200, ..Default::default() }).unwrap();
        assert!(many.value >= few.value);
        assert_eq!(&many.per_restart[..2], &few.per_restart[..]);
    }

    #[test]
    fn invalid_config() {
        let u = gates::cnot();
        assert!(entangling_power(&u, &OptimizationConfig { restarts: 0, ..Default::default() }).is_err());
        assert!(entangling_power(&u, &OptimizationConfig { shrink: 1.0, ..Default::default() }).is_err());
    }
}
