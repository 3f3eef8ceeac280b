//! Seeded generators for test curves, cuts, and permutations.
//!
//! Integer-frequency fourier curves are frequently closed by accident
//! (whole harmonics integrate to zero), so the curve generator resamples
//! until the endpoint is safely away from the origin.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curve_kernel::{CurveTable, FourierTerm, TurningCurve};
use crate::perm::Perm;
use crate::rearrange::Cuts;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random normalized fourier curve with the given winding number and
/// unit speed, guaranteed non-closed: ||gamma(1)|| >= 0.02 * speed.
pub fn random_curve(rng: &mut ChaCha8Rng, winding: i64) -> TurningCurve {
    loop {
        let n_terms = rng.gen_range(1..=3);
        let terms: Vec<FourierTerm> = (0..n_terms)
            .map(|_| FourierTerm {
                amp: rng.gen_range(0.2..0.9) / n_terms as f64,
                freq: rng.gen_range(1..=4) as f64,
                phase: rng.gen_range(0.0..std::f64::consts::TAU),
            })
            .collect();
        let curve = TurningCurve::from_fourier(1.0, winding, terms)
            .expect("positive speed")
            .normalize();
        let table = CurveTable::new(&curve, 1024).expect("normalized");
        if table.endpoint().norm() >= 0.02 {
            return curve;
        }
    }
}

/// Uniform random cuts in D_k (sorted uniforms).
pub fn random_cuts(rng: &mut ChaCha8Rng, k: usize) -> Cuts {
    let mut values: Vec<f64> = (0..k - 1).map(|_| rng.gen::<f64>()).collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Cuts::new(values).expect("sorted values in [0,1]")
}

/// Uniform random permutation of {1..k} (Fisher-Yates).
pub fn random_perm(rng: &mut ChaCha8Rng, k: usize) -> Perm {
    let mut map: Vec<usize> = (1..=k).collect();
    for i in (1..k).rev() {
        let j = rng.gen_range(0..=i);
        map.swap(i, j);
    }
    Perm::new(map).expect("shuffled identity")
}

/// Random permutation outside the cyclic-shift subgroup.
pub fn random_non_cyclic_perm(rng: &mut ChaCha8Rng, k: usize) -> Perm {
    assert!(k >= 3, "all of S_2 is cyclic");
    loop {
        let p = random_perm(rng, k);
        if !p.is_cyclic_shift() {
            return p;
        }
    }
}
