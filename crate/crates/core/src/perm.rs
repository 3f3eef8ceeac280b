//! Permutations of arc indices in one-line notation, the cyclic-shift
//! subgroup, index contraction when an arc degenerates, and the reduction
//! of any non-cyclic permutation to the three-arc transposition together
//! with the cut inflation that makes degenerate arcs proper again.

use std::fmt;

use crate::error::{CurveError, Result};
use crate::rearrange::Cuts;

/// A permutation of {1..k} in one-line notation: position j holds the
/// original arc id placed j-th in the rearranged curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let k = map.len();
        let mut seen = vec![false; k + 1];
        for &v in &map {
            if v < 1 || v > k || seen[v] {
                return Err(CurveError::NotAPermutation { k, values: map });
            }
            seen[v] = true;
        }
        Ok(Perm { map })
    }

    /// Parse whitespace-separated one-line notation, e.g. `"2 5 1 6 4 3"`.
    pub fn parse(text: &str) -> Result<Self> {
        let values: Vec<usize> = text
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| CurveError::NotAPermutation {
                    k: 0,
                    values: vec![],
                })
            })
            .collect::<Result<_>>()?;
        Perm::new(values)
    }

    pub fn identity(k: usize) -> Self {
        Perm {
            map: (1..=k).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.map.len()
    }

    /// Image of 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Perm { map: inv }
    }

    /// 1-based position holding value `v`.
    pub fn position_of(&self, v: usize) -> usize {
        self.map.iter().position(|&x| x == v).expect("valid value") + 1
    }

    /// True iff sigma is a cyclic shift z_h: successive images step by one
    /// modulo k.
    pub fn is_cyclic_shift(&self) -> bool {
        let k = self.map.len();
        self.map
            .windows(2)
            .all(|w| w[1] == w[0] % k + 1)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// z_h in one-line notation: [h+1, ..., k, 1, ..., h].
pub fn cyclic_shift(k: usize, h: usize) -> Result<Perm> {
    if h >= k {
        return Err(CurveError::IndexOutOfRange { i: h, k });
    }
    let map = (0..k).map(|i| (i + h) % k + 1).collect();
    Ok(Perm { map })
}

/// Composition with result(x) = sigma2(sigma1(x)).
pub fn compose(sigma2: &Perm, sigma1: &Perm) -> Result<Perm> {
    if sigma2.k() != sigma1.k() {
        return Err(CurveError::SizeMismatch(sigma2.k(), sigma1.k()));
    }
    let map = (1..=sigma1.k()).map(|x| sigma2.at(sigma1.at(x))).collect();
    Ok(Perm { map })
}

/// F_i: the permutation induced on k-1 arcs when the arc in rearranged
/// position i degenerates. Removes position i and value sigma(i),
/// relabeling both order-preservingly.
pub fn contract(sigma: &Perm, i: usize) -> Result<Perm> {
    let k = sigma.k();
    if i < 1 || i > k {
        return Err(CurveError::IndexOutOfRange { i, k });
    }
    if k < 2 {
        return Err(CurveError::IndexOutOfRange { i, k });
    }
    let pivot = sigma.at(i);
    let mut map = Vec::with_capacity(k - 1);
    for j in 1..k {
        let v = if j < i { sigma.at(j) } else { sigma.at(j + 1) };
        map.push(if v > pivot { v - 1 } else { v });
    }
    Ok(Perm { map })
}

/// The index i of the combinatorial reduction step: for sigma in
/// S_k \ Z_k with sigma(1) = 1 and k >= 4, contract(sigma, i) stays
/// non-cyclic and still fixes 1.
pub fn choose_reduction_index(sigma: &Perm) -> Result<usize> {
    let k = sigma.k();
    if k < 4 {
        return Err(CurveError::ReductionPrecondition(format!(
            "k = {k} < 4"
        )));
    }
    if sigma.at(1) != 1 {
        return Err(CurveError::ReductionPrecondition(format!(
            "sigma(1) = {} != 1",
            sigma.at(1)
        )));
    }
    if sigma.is_cyclic_shift() {
        return Err(CurveError::ReductionPrecondition(
            "sigma is a cyclic shift".into(),
        ));
    }
    let r = (1..=k)
        .find(|&j| sigma.at(j) != j)
        .expect("non-identity since non-cyclic");
    Ok(if r > 2 {
        1
    } else if sigma.at(2) != k {
        sigma.position_of(k)
    } else {
        3
    })
}

/// One recorded contraction: the arc at `position` of the working
/// permutation degenerates, collapsing original arc `arc_id`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainStep {
    pub position: usize,
    pub arc_id: usize,
}

/// Reduction of a non-cyclic permutation to the three-arc transposition.
///
/// `working` is sigma composed with the cyclic pre-shift z_h; the three
/// surviving arcs appear in `working` in the order (smallest, largest,
/// middle), so the induced permutation on them is exactly [1, 3, 2] and
/// the two-cut contraction argument applies verbatim to the inflated
/// family. Closure under `working` transfers to `sigma` with the same
/// cuts.
#[derive(Debug, Clone)]
pub struct ReductionPlan {
    pub sigma: Perm,
    pub pre_shift: usize,
    pub working: Perm,
    /// Contractions in ascending position order; they are applied
    /// rightmost-first so the recorded positions stay valid.
    pub chain: Vec<ChainStep>,
    /// Surviving original arc ids, ascending.
    pub survivors: [usize; 3],
    /// q_i = survivors_i - 1.
    pub q: [usize; 3],
    pub induced: Perm,
}

impl ReductionPlan {
    pub fn k(&self) -> usize {
        self.sigma.k()
    }

    /// Inflated cuts I[l1, l2]: the three proper arcs q_i+1 carry the
    /// intervals [0,l1], [l1,l2], [l2,1] and every collapsed arc is given
    /// width delta = min(l1, l2-l1, 1-l2)/(k-2). On the boundary of D3
    /// delta is zero and the degenerate configuration is reproduced
    /// exactly.
    pub fn inflate(&self, l1: f64, l2: f64) -> Result<Cuts> {
        if !(0.0 <= l1 && l1 <= l2 && l2 <= 1.0) {
            return Err(CurveError::OutsideD3(l1, l2));
        }
        let k = self.k();
        let delta = l1.min(l2 - l1).min(1.0 - l2) / (k - 2) as f64;
        let [q1, q2, q3] = self.q;
        let values = (1..k)
            .map(|j| {
                if j <= q1 {
                    j as f64 * delta
                } else if j <= q2 {
                    l1 + (j - (q1 + 1)) as f64 * delta
                } else if j <= q3 {
                    l2 + (j - (q2 + 1)) as f64 * delta
                } else {
                    1.0 - (k - j) as f64 * delta
                }
            })
            .collect();
        Cuts::new(values)
    }
}

/// Find the cyclic pre-shift and the surviving arc triple reducing
/// `sigma` to the transposition [1, 3, 2].
///
/// The search scans pre-shifts h = 0, 1, ... and, for the working
/// permutation tau = sigma . z_h, all position triples p1 < p2 < p3 with
/// tau(p1) < tau(p3) < tau(p2). Ties are broken deterministically:
/// largest tau(p2), then largest p3, then smallest p1, then smallest p2.
/// Existence for every non-cyclic sigma follows from the inductive
/// contraction argument; the chosen chain is verified against `contract`.
pub fn build_reduction_plan(sigma: &Perm) -> Result<ReductionPlan> {
    let k = sigma.k();
    if k < 3 {
        return Err(CurveError::ReductionPrecondition(format!("k = {k} < 3")));
    }
    if sigma.is_cyclic_shift() {
        return Err(CurveError::CyclicShift(sigma.to_string()));
    }
    for h in 0..k {
        let working = compose(sigma, &cyclic_shift(k, h)?)?;
        let mut best: Option<(usize, usize, usize)> = None;
        for p2 in 2..k {
            for p1 in 1..p2 {
                for p3 in (p2 + 1)..=k {
                    if working.at(p1) < working.at(p3) && working.at(p3) < working.at(p2) {
                        let better = match best {
                            None => true,
                            Some((b1, b2, b3)) => {
                                let cand = (
                                    working.at(p2),
                                    p3,
                                    std::cmp::Reverse(p1),
                                    std::cmp::Reverse(p2),
                                );
                                let cur = (
                                    working.at(b2),
                                    b3,
                                    std::cmp::Reverse(b1),
                                    std::cmp::Reverse(b2),
                                );
                                cand > cur
                            }
                        };
                        if better {
                            best = Some((p1, p2, p3));
                        }
                    }
                }
            }
        }
        if let Some((p1, p2, p3)) = best {
            let chain: Vec<ChainStep> = (1..=k)
                .filter(|&p| p != p1 && p != p2 && p != p3)
                .map(|p| ChainStep {
                    position: p,
                    arc_id: working.at(p),
                })
                .collect();
            let mut survivors = [working.at(p1), working.at(p2), working.at(p3)];
            survivors.sort_unstable();
            let q = [survivors[0] - 1, survivors[1] - 1, survivors[2] - 1];

            // Cross-check the chain against the contraction map: applying
            // F at the recorded positions, rightmost-first, must land on
            // [1, 3, 2].
            let mut reduced = working.clone();
            for step in chain.iter().rev() {
                reduced = contract(&reduced, step.position)?;
            }
            let induced = reduced;
            debug_assert_eq!(induced.as_slice(), &[1, 3, 2]);

            return Ok(ReductionPlan {
                sigma: sigma.clone(),
                pre_shift: h,
                working,
                chain,
                survivors,
                q,
                induced,
            });
        }
    }
    unreachable!("every non-cyclic permutation admits a reduction triple")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[usize]) -> Perm {
        Perm::new(v.to_vec()).unwrap()
    }

    #[test]
    fn cyclic_shift_one_line() {
        assert_eq!(cyclic_shift(3, 2).unwrap().as_slice(), &[3, 1, 2]);
        assert_eq!(cyclic_shift(5, 0).unwrap().as_slice(), &[1, 2, 3, 4, 5]);
        assert_eq!(cyclic_shift(4, 1).unwrap().as_slice(), &[2, 3, 4, 1]);
        assert!(cyclic_shift(4, 4).is_err());
    }

    #[test]
    fn cyclic_shift_detection() {
        assert!(p(&[2, 3, 1]).is_cyclic_shift());
        assert!(!p(&[1, 3, 2]).is_cyclic_shift());
        assert!(Perm::identity(6).is_cyclic_shift());
    }

    #[test]
    fn compose_convention() {
        let sigma = p(&[3, 1, 2]);
        assert_eq!(compose(&sigma, &Perm::identity(3)).unwrap(), sigma);
        assert_eq!(
            compose(&p(&[1, 3, 2]), &p(&[2, 3, 1])).unwrap().as_slice(),
            &[3, 2, 1]
        );
        assert_eq!(
            compose(&p(&[3, 5, 4, 1, 2]), &p(&[2, 4, 5, 1, 3]))
                .unwrap()
                .as_slice(),
            &[5, 1, 2, 3, 4]
        );
    }

    #[test]
    fn contract_reference_values() {
        assert_eq!(
            contract(&p(&[2, 4, 5, 1, 3]), 2).unwrap().as_slice(),
            &[2, 4, 1, 3]
        );
        assert_eq!(
            contract(&p(&[5, 1, 2, 4, 6, 3]), 4).unwrap().as_slice(),
            &[4, 1, 2, 5, 3]
        );
    }

    #[test]
    fn contract_is_not_a_homomorphism() {
        let s1 = p(&[2, 4, 5, 1, 3]);
        let s2 = p(&[3, 5, 4, 1, 2]);
        let lhs = compose(
            &contract(&s2, 2).unwrap(),
            &contract(&s1, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs.as_slice(), &[4, 2, 3, 1]);
        let rhs = contract(&compose(&s2, &s1).unwrap(), 2).unwrap();
        assert_eq!(rhs.as_slice(), &[4, 1, 2, 3]);
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn reduction_index_cases() {
        let s = p(&[1, 3, 2, 4]);
        assert_eq!(choose_reduction_index(&s).unwrap(), 4);
        assert_eq!(contract(&s, 4).unwrap().as_slice(), &[1, 3, 2]);

        let s = p(&[1, 2, 4, 3]);
        assert_eq!(choose_reduction_index(&s).unwrap(), 1);
        assert_eq!(contract(&s, 1).unwrap().as_slice(), &[1, 3, 2]);

        let s = p(&[1, 4, 3, 2]);
        assert_eq!(choose_reduction_index(&s).unwrap(), 3);
        assert_eq!(contract(&s, 3).unwrap().as_slice(), &[1, 3, 2]);
    }

    #[test]
    fn reduction_index_rejects_bad_input() {
        assert!(choose_reduction_index(&p(&[2, 1, 3, 4])).is_err());
        assert!(choose_reduction_index(&Perm::identity(5)).is_err());
        assert!(choose_reduction_index(&p(&[1, 3, 2])).is_err());
    }

    #[test]
    fn plan_six_arcs_reference() {
        let sigma = p(&[2, 5, 1, 6, 4, 3]);
        let plan = build_reduction_plan(&sigma).unwrap();
        assert_eq!(plan.pre_shift, 0);
        let positions: Vec<usize> = plan.chain.iter().map(|s| s.position).collect();
        assert_eq!(positions, vec![2, 3, 5]);
        let collapsed: Vec<usize> = plan.chain.iter().map(|s| s.arc_id).collect();
        assert_eq!(collapsed, vec![5, 1, 4]);
        assert_eq!(plan.survivors, [2, 3, 6]);
        assert_eq!(plan.q, [1, 2, 5]);
        assert_eq!(plan.induced.as_slice(), &[1, 3, 2]);
    }

    #[test]
    fn plan_trivial_three_arcs() {
        let plan = build_reduction_plan(&p(&[1, 3, 2])).unwrap();
        assert!(plan.chain.is_empty());
        assert_eq!(plan.q, [0, 1, 2]);
        assert_eq!(plan.pre_shift, 0);
    }

    #[test]
    fn plan_rejects_cyclic() {
        assert!(matches!(
            build_reduction_plan(&p(&[2, 3, 1])),
            Err(CurveError::CyclicShift(_))
        ));
    }

    #[test]
    fn inflate_reference_values() {
        let plan = build_reduction_plan(&p(&[2, 5, 1, 6, 4, 3])).unwrap();
        let cuts = plan.inflate(0.4, 0.7).unwrap();
        let expect = [0.075, 0.4, 0.7, 0.775, 0.85];
        for (c, e) in cuts.values().iter().zip(expect) {
            assert!((c - e).abs() < 1e-12, "{c} vs {e}");
        }
    }

    #[test]
    fn inflate_boundary_is_degenerate() {
        let plan = build_reduction_plan(&p(&[2, 5, 1, 6, 4, 3])).unwrap();
        let cuts = plan.inflate(0.0, 0.6).unwrap();
        assert_eq!(cuts.values(), &[0.0, 0.0, 0.6, 0.6, 0.6]);
        assert!(plan.inflate(0.7, 0.3).is_err());
    }

    #[test]
    fn parse_and_display() {
        let s = Perm::parse("2 5 1 6 4 3").unwrap();
        assert_eq!(s.to_string(), "2 5 1 6 4 3");
        assert!(Perm::parse("1 2 2").is_err());
        assert!(Perm::parse("0 1").is_err());
    }
}
