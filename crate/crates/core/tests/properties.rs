//! Cross-module invariants: quadrature consistency, winding-number
//! symmetries, exactness of the rearrangement bookkeeping, and the
//! exhaustive permutation checks.

use std::f64::consts::TAU;

use proptest::prelude::*;

use curveclose_core::gen;
use curveclose_core::perm::{
    build_reduction_plan, choose_reduction_index, compose, contract, cyclic_shift, Perm,
};
use curveclose_core::rearrange::{e3_closed_form, endpoint_map, rearranged, split, Cuts};
use curveclose_core::{winding_number, CurveTable, LoopSamples, TurningCurve, Vec2};

fn table(curve: &TurningCurve) -> CurveTable {
    CurveTable::new(curve, 4096).unwrap()
}

fn test_curve(seed: u64, m: i64) -> CurveTable {
    table(&gen::random_curve(&mut gen::rng(seed), m))
}

// ---------------------------------------------------------------------------
// curve_kernel invariants
// ---------------------------------------------------------------------------

#[test]
fn position_additive_over_subintervals() {
    let t = test_curve(1, 1);
    let mut rng = gen::rng(2);
    use rand::Rng;
    for _ in 0..200 {
        let a: f64 = rng.gen();
        let b: f64 = rng.gen();
        let (s1, s2) = if a <= b { (a, b) } else { (b, a) };
        let direct = t.position(s2).unwrap() - t.position(s1).unwrap();
        let chord = split(&t, &Cuts::new(vec![s1, s2]).unwrap()).unwrap()[1].chord;
        assert!((direct - chord).norm() < 1e-12);
    }
}

#[test]
fn finite_difference_speed_check() {
    let t = test_curve(3, 2);
    let mut rng = gen::rng(4);
    use rand::Rng;
    let h = 1e-5;
    for _ in 0..100 {
        let s: f64 = rng.gen_range(h..1.0 - h);
        let d = (t.position(s + h).unwrap() - t.position(s - h).unwrap()) * (1.0 / (2.0 * h));
        assert!(
            (d.norm() / t.speed() - 1.0).abs() <= 1e-3,
            "s = {s}, |d| = {}",
            d.norm()
        );
    }
}

fn e_loop(t: &CurveTable, n: usize) -> LoopSamples {
    let sigma = Perm::new(vec![1, 3, 2]).unwrap();
    let mut pts = Vec::with_capacity(n + 1);
    let mut params = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let s = i as f64 / n as f64;
        pts.push(endpoint_map(t, &sigma, &Cuts::two(0.0, s).unwrap()).unwrap());
        params.push(s);
    }
    let first = pts[0];
    *pts.last_mut().unwrap() = first;
    LoopSamples::new(pts, params).unwrap()
}

#[test]
fn winding_symmetries() {
    let t = test_curve(5, 1);
    let samples = e_loop(&t, 1024);
    let w = winding_number(&samples, Vec2::ZERO, 1e-12).unwrap();

    // Cyclic rotation of the sample list leaves the winding unchanged.
    for offset in [100, 377, 800] {
        let n = samples.points().len() - 1;
        let mut pts: Vec<Vec2> = (0..n)
            .map(|i| samples.points()[(i + offset) % n])
            .collect();
        pts.push(pts[0]);
        let params: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let rotated = LoopSamples::new(pts, params).unwrap();
        assert_eq!(winding_number(&rotated, Vec2::ZERO, 1e-12).unwrap(), w);
    }

    // Orientation reversal negates it.
    let mut pts: Vec<Vec2> = samples.points().to_vec();
    pts.reverse();
    let params: Vec<f64> = (0..pts.len())
        .map(|i| i as f64 / (pts.len() - 1) as f64)
        .collect();
    let reversed = LoopSamples::new(pts, params).unwrap();
    assert_eq!(winding_number(&reversed, Vec2::ZERO, 1e-12).unwrap(), -w);
}

#[test]
fn e_loop_circle_and_winding_minus_m() {
    for (seed, m) in [(10, 1), (11, 2), (12, 3), (13, -1), (14, -2)] {
        let t = test_curve(seed, m);
        let radius = t.endpoint().norm();
        let samples = e_loop(&t, 2048);
        for p in samples.points() {
            assert!(
                (p.norm() - radius).abs() <= 1e-6 * t.speed(),
                "m = {m}: point off the e-circle by {}",
                (p.norm() - radius).abs()
            );
        }
        assert_eq!(
            winding_number(&samples, Vec2::ZERO, 1e-12).unwrap(),
            -m,
            "m = {m}"
        );
    }
}

// ---------------------------------------------------------------------------
// rearrange invariants
// ---------------------------------------------------------------------------

#[test]
fn endpoint_map_agrees_with_rearranged_1000_random() {
    use rand::Rng;
    let curves: Vec<CurveTable> = (0..5).map(|i| test_curve(20 + i, 1 + (i as i64 % 3))).collect();
    let mut rng = gen::rng(99);
    for trial in 0..1000 {
        let t = &curves[trial % curves.len()];
        let k = rng.gen_range(2..=7);
        let sigma = gen::random_perm(&mut rng, k);
        let cuts = gen::random_cuts(&mut rng, k);
        let e = endpoint_map(t, &sigma, &cuts).unwrap();
        let r = rearranged(t, &sigma, &cuts).unwrap();
        assert!(
            (e - r.endpoint()).norm() <= 1e-9 * t.speed(),
            "trial {trial}: sigma {sigma}, gap {}",
            (e - r.endpoint()).norm()
        );
    }
}

#[test]
fn total_turning_preserved_exactly() {
    use rand::Rng;
    let mut rng = gen::rng(31);
    for m in [1_i64, 2, -1] {
        let t = test_curve(40 + m.unsigned_abs(), m);
        for _ in 0..50 {
            let k = rng.gen_range(2..=6);
            let sigma = gen::random_perm(&mut rng, k);
            let cuts = gen::random_cuts(&mut rng, k);
            let r = rearranged(&t, &sigma, &cuts).unwrap();
            assert_eq!(r.total_turning(), t.total_turning());
        }
    }
}

#[test]
fn endpoint_map_continuity_band() {
    use rand::Rng;
    let t = test_curve(50, 1);
    // Measured Lipschitz bound of theta over the grid.
    let n = 4096;
    let l_theta = (0..n)
        .map(|i| {
            let a = t.theta(i as f64 / n as f64);
            let b = t.theta((i + 1) as f64 / n as f64);
            (b - a).abs() * n as f64
        })
        .fold(0.0, f64::max);
    let mut rng = gen::rng(51);
    for _ in 0..200 {
        let k = rng.gen_range(2..=6);
        let sigma = gen::random_perm(&mut rng, k);
        let cuts = gen::random_cuts(&mut rng, k);
        let delta = 1e-4;
        let shifted: Vec<f64> = cuts
            .values()
            .iter()
            .map(|c| (c + rng.gen_range(-delta..delta)).clamp(0.0, 1.0))
            .collect();
        let mut shifted = shifted;
        shifted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let cuts2 = Cuts::new(shifted).unwrap();
        let e1 = endpoint_map(&t, &sigma, &cuts).unwrap();
        let e2 = endpoint_map(&t, &sigma, &cuts2).unwrap();
        let bound = (k as f64) * t.speed() * (1.0 + TAU * l_theta) * delta;
        assert!(
            (e1 - e2).norm() <= bound,
            "gap {} exceeds band {bound}",
            (e1 - e2).norm()
        );
    }
}

// ---------------------------------------------------------------------------
// perm invariants (exhaustive)
// ---------------------------------------------------------------------------

fn all_perms(k: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (1..=k).collect();
    permute(&mut items, 0, &mut out);
    out
}

fn permute(items: &mut Vec<usize>, i: usize, out: &mut Vec<Perm>) {
    if i == items.len() {
        out.push(Perm::new(items.clone()).unwrap());
        return;
    }
    for j in i..items.len() {
        items.swap(i, j);
        permute(items, i + 1, out);
        items.swap(i, j);
    }
}

#[test]
fn cyclic_shift_subgroup() {
    for k in 2..=7 {
        let shifts: Vec<Perm> = (0..k).map(|h| cyclic_shift(k, h).unwrap()).collect();
        assert_eq!(shifts.len(), k);
        for a in &shifts {
            assert!(a.is_cyclic_shift());
            for b in &shifts {
                assert!(compose(a, b).unwrap().is_cyclic_shift());
            }
        }
        // Exactly k elements of S_k are cyclic shifts.
        let count = all_perms(k).iter().filter(|p| p.is_cyclic_shift()).count();
        assert_eq!(count, k);
    }
}

#[test]
fn contract_always_bijection_k_le_6() {
    for k in 2..=6 {
        for sigma in all_perms(k) {
            for i in 1..=k {
                // Perm::new inside contract re-validates bijectivity.
                let c = contract(&sigma, i).unwrap();
                assert_eq!(c.k(), k - 1);
            }
        }
    }
}

#[test]
fn reduction_index_lemma_exhaustive_k_le_7() {
    for k in 4..=7 {
        for sigma in all_perms(k) {
            if sigma.at(1) != 1 || sigma.is_cyclic_shift() {
                continue;
            }
            let i = choose_reduction_index(&sigma).unwrap();
            let c = contract(&sigma, i).unwrap();
            assert!(!c.is_cyclic_shift(), "sigma {sigma} -> i={i} -> {c}");
            assert_eq!(c.at(1), 1, "sigma {sigma} -> i={i} -> {c}");
        }
    }
}

#[test]
fn reduction_plan_succeeds_for_all_non_cyclic_k_le_6() {
    for k in 3..=6 {
        for sigma in all_perms(k) {
            if sigma.is_cyclic_shift() {
                assert!(build_reduction_plan(&sigma).is_err());
                continue;
            }
            let plan = build_reduction_plan(&sigma).unwrap();
            assert_eq!(plan.induced.as_slice(), &[1, 3, 2], "sigma {sigma}");
            assert!(plan.q[0] < plan.q[1] && plan.q[1] < plan.q[2]);
            assert!(plan.q[2] <= k - 1);
            assert_eq!(plan.chain.len(), k - 3);
        }
    }
}

#[test]
fn inflate_boundary_matches_closed_form() {
    // Geometric consistency: on the boundary face l1 = 0 the inflated
    // family degenerates to the three-arc configuration, so the endpoint
    // under the working permutation equals the closed form.
    let t = test_curve(60, 1);
    let mut rng = gen::rng(61);
    for k in 4..=6 {
        for _ in 0..20 {
            let sigma = gen::random_non_cyclic_perm(&mut rng, k);
            let plan = build_reduction_plan(&sigma).unwrap();
            for i in 0..=16 {
                let s = i as f64 / 16.0;
                let cuts = plan.inflate(0.0, s).unwrap();
                let e = endpoint_map(&t, &plan.working, &cuts).unwrap();
                let cf = e3_closed_form(&t, s).unwrap();
                assert!(
                    (e - cf).norm() <= 1e-9 * t.speed(),
                    "sigma {sigma}, t = {s}: gap {}",
                    (e - cf).norm()
                );
            }
        }
    }
}

#[test]
fn inflate_is_continuous() {
    let mut rng = gen::rng(62);
    use rand::Rng;
    for k in [4, 5, 6, 8] {
        let sigma = gen::random_non_cyclic_perm(&mut rng, k);
        let plan = build_reduction_plan(&sigma).unwrap();
        // Each cut moves at most 1 + (k-3)/(k-2) < 2 per unit move of
        // (l1, l2): the affine offset plus the delta multiplier.
        let bound = 2.0;
        for _ in 0..200 {
            let l2: f64 = rng.gen();
            let l1: f64 = rng.gen_range(0.0..=l2);
            let d = 1e-7;
            let base = plan.inflate(l1, l2).unwrap();
            for (dl1, dl2) in [(d, 0.0), (0.0, d)] {
                let (m1, m2) = ((l1 + dl1).min(l2 + dl2), (l2 + dl2).min(1.0));
                let moved = plan.inflate(m1.min(m2), m2).unwrap();
                for (a, b) in base.values().iter().zip(moved.values()) {
                    assert!(
                        (a - b).abs() <= bound * d * (1.0 + 1e-9),
                        "k={k}: jump {} over step {d}",
                        (a - b).abs()
                    );
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// proptest: structural round trips
// ---------------------------------------------------------------------------

fn perm_of(k: usize) -> impl Strategy<Value = Perm> {
    Just(k).prop_perturb(move |k, mut rng| {
        let mut map: Vec<usize> = (1..=k).collect();
        for i in (1..k).rev() {
            let j = (rng.next_u32() as usize) % (i + 1);
            map.swap(i, j);
        }
        Perm::new(map).unwrap()
    })
}

fn perm_strategy(max_k: usize) -> impl Strategy<Value = Perm> {
    (2..=max_k).prop_flat_map(perm_of)
}

proptest! {
    #[test]
    fn perm_parse_display_round_trip(p in perm_strategy(9)) {
        let back = Perm::parse(&p.to_string()).unwrap();
        prop_assert_eq!(p, back);
    }

    #[test]
    fn perm_inverse_composes_to_identity(p in perm_strategy(9)) {
        let id = compose(&p.inverse(), &p).unwrap();
        prop_assert_eq!(id, Perm::identity(p.k()));
    }

    #[test]
    fn compose_is_associative(
        (a, b, c) in (2usize..=7).prop_flat_map(|k| (perm_of(k), perm_of(k), perm_of(k))),
    ) {
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn cuts_reject_bad_input(v in proptest::collection::vec(-0.5f64..1.5, 1..6)) {
        let sorted_in_range = v.iter().all(|x| (0.0..=1.0).contains(x))
            && v.windows(2).all(|w| w[0] <= w[1]);
        prop_assert_eq!(Cuts::new(v).is_ok(), sorted_in_range);
    }
}
