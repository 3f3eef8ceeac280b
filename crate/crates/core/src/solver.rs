//! Numerical engines that turn the existence proofs into algorithms.
//!
//! The proofs all share one shape: a continuous family of loops whose
//! boundary member has non-zero winding about the target point, so some
//! member must cross it. The solver realizes this as a discrete
//! bracketing method — sweep the family parameter, watch the winding
//! number change, bisect the bracket, then polish with damped Newton.

use rayon::prelude::*;

use crate::curve_kernel::{winding_number, CurveTable, LoopSamples};
use crate::error::{CurveError, Result};
use crate::geom::Vec2;
use crate::perm::{build_reduction_plan, Perm, ReductionPlan};
use crate::rearrange::{endpoint_map, tangent_mismatch, Cuts};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tunables of the sweep/bisect/Newton pipeline. Tolerances are relative
/// to the curve speed (i.e. the total length).
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Quadrature resolution used when a table must be built.
    pub resolution: usize,
    /// Number of h-grid intervals in the sweep.
    pub h_grid: usize,
    /// Bisection stops when the bracket is narrower than this.
    pub bisect_width: f64,
    /// Forward-difference step of the Newton Jacobian.
    pub fd_step: f64,
    /// Two solutions closer than this (L-inf in cut space) are one.
    pub dedupe: f64,
    /// Initial loop sample count; doubled until the angular-step
    /// invariant of `winding_number` holds.
    pub loop_samples: usize,
    /// Hard cap on loop samples.
    pub loop_samples_cap: usize,
    /// Success residual for the two-cut and C0 solvers, times speed.
    pub residual_tol: f64,
    /// Success residual for the k-arc solver, times speed.
    pub k_residual_tol: f64,
    /// Below this (times speed) a curve counts as already closed.
    pub closed_tol: f64,
    /// Newton iteration cap.
    pub newton_max: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            resolution: crate::curve_kernel::DEFAULT_RESOLUTION,
            h_grid: 256,
            bisect_width: 1e-6,
            fd_step: 1e-6,
            dedupe: 1e-3,
            loop_samples: 512,
            loop_samples_cap: 1 << 16,
            residual_tol: 1e-8,
            k_residual_tol: 1e-6,
            closed_tol: 1e-9,
            newton_max: 120,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Success,
    /// Input already closed (or target equal to gamma(1)): trivial cuts.
    Degenerate,
    /// Hypotheses hold but the target is unreachable (winding 0).
    Rejected,
    /// Hypotheses hold, so a solution exists, but numerics failed to
    /// pin it down.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Bisection,
    Newton,
    Grid,
    Degenerate,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Bisection => "bisection",
            Method::Newton => "newton",
            Method::Grid => "grid",
            Method::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub sigma: Perm,
    pub cuts: Cuts,
    /// Endpoint residual in length units.
    pub residual: f64,
    /// |exit - entry tangent angle| mod 2*pi of the rearranged curve.
    pub tangent_mismatch: f64,
    /// Properness margin: length of the shortest arc.
    pub margin: f64,
    pub iterations: usize,
    pub method: Method,
}

// ---------------------------------------------------------------------------
// Generic 2-D zero finder over the triangle {0 <= u <= v <= 1}
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
enum LoopStat {
    Winding(i64),
    /// Loop passes through (or numerically indistinguishably close to)
    /// the target.
    Crossed,
}

#[derive(Debug, Clone, Copy)]
struct LoopScan {
    stat: LoopStat,
    min_dist: f64,
    min_v: f64,
}

fn project(u: f64, v: f64) -> (f64, f64) {
    let v = v.clamp(0.0, 1.0);
    let u = u.clamp(0.0, v);
    (u, v)
}

/// Winding number of the loop v -> E(u, v), v in [u, 1], about `target`,
/// refining the sampling until the angular-step invariant holds. The loop
/// is closed by construction (both ends evaluate near gamma(1)); the last
/// sample is snapped onto the first.
fn scan_loop<F>(map: &F, u: f64, target: Vec2, cfg: &SolverConfig, speed: f64) -> Result<LoopScan>
where
    F: Fn(f64, f64) -> Result<Vec2> + Sync,
{
    let eps_on = 1e-9 * speed;
    let mut n = cfg.loop_samples;
    loop {
        let mut pts = Vec::with_capacity(n + 1);
        let mut params = Vec::with_capacity(n + 1);
        let mut min_dist = f64::INFINITY;
        let mut min_v = u;
        for i in 0..=n {
            let v = u + (1.0 - u) * i as f64 / n as f64;
            let p = map(u, v)?;
            let d = (p - target).norm();
            if d < min_dist {
                min_dist = d;
                min_v = v;
            }
            pts.push(p);
            params.push(v);
        }
        let first = pts[0];
        *pts.last_mut().unwrap() = first;
        let samples = LoopSamples::new(pts, params)?;
        match winding_number(&samples, target, eps_on) {
            Ok(w) => {
                return Ok(LoopScan {
                    stat: LoopStat::Winding(w),
                    min_dist,
                    min_v,
                })
            }
            Err(CurveError::PointOnLoop { .. }) => {
                return Ok(LoopScan {
                    stat: LoopStat::Crossed,
                    min_dist,
                    min_v,
                })
            }
            Err(CurveError::AngularStep { .. }) if n < cfg.loop_samples_cap => {
                n *= 2;
            }
            Err(CurveError::AngularStep { .. }) => {
                // Even the finest sampling subtends wide angles: the loop
                // hugs the target at the sample scale. Treat as a crossing
                // and let Newton decide.
                return Ok(LoopScan {
                    stat: LoopStat::Crossed,
                    min_dist,
                    min_v,
                });
            }
            Err(e) => return Err(e),
        }
    }
}

struct Candidate {
    u: f64,
    v: f64,
    iterations: usize,
}

/// Sweep the family parameter, collect winding-change brackets, bisect
/// each and return one Newton seed per bracket, smallest u first.
fn bracket_sweep<F>(
    map: &F,
    target: Vec2,
    cfg: &SolverConfig,
    speed: f64,
) -> Result<Vec<Candidate>>
where
    F: Fn(f64, f64) -> Result<Vec2> + Sync,
{
    let m = cfg.h_grid;
    let scans: Vec<Result<LoopScan>> = (0..=m)
        .into_par_iter()
        .map(|i| scan_loop(map, i as f64 / m as f64, target, cfg, speed))
        .collect();
    let scans: Vec<LoopScan> = scans.into_iter().collect::<Result<_>>()?;

    let mut out = Vec::new();
    let mut i = 0;
    while i < m {
        let a = scans[i];
        let b = scans[i + 1];
        let u_a = i as f64 / m as f64;
        let u_b = (i + 1) as f64 / m as f64;
        match (a.stat, b.stat) {
            (LoopStat::Crossed, _) => {
                out.push(Candidate {
                    u: u_a,
                    v: a.min_v,
                    iterations: 0,
                });
                i += 1;
            }
            (_, LoopStat::Crossed) if i + 1 == m => {
                out.push(Candidate {
                    u: u_b,
                    v: b.min_v,
                    iterations: 0,
                });
                i += 1;
            }
            (LoopStat::Winding(wa), LoopStat::Winding(wb)) if wa != wb => {
                out.push(bisect_bracket(map, target, cfg, speed, u_a, wa, u_b, wb)?);
                i += 1;
            }
            _ => {
                i += 1;
            }
        }
    }
    Ok(out)
}

fn bisect_bracket<F>(
    map: &F,
    target: Vec2,
    cfg: &SolverConfig,
    speed: f64,
    mut u_lo: f64,
    w_lo: i64,
    mut u_hi: f64,
    _w_hi: i64,
) -> Result<Candidate>
where
    F: Fn(f64, f64) -> Result<Vec2> + Sync,
{
    let mut best = None::<(f64, f64, f64)>; // (dist, u, v)
    let mut iterations = 0;
    while u_hi - u_lo > cfg.bisect_width {
        let mid = 0.5 * (u_lo + u_hi);
        let scan = scan_loop(map, mid, target, cfg, speed)?;
        iterations += 1;
        match scan.stat {
            LoopStat::Crossed => {
                return Ok(Candidate {
                    u: mid,
                    v: scan.min_v,
                    iterations,
                });
            }
            LoopStat::Winding(w) => {
                if best.map_or(true, |(d, _, _)| scan.min_dist < d) {
                    best = Some((scan.min_dist, mid, scan.min_v));
                }
                if w == w_lo {
                    u_lo = mid;
                } else {
                    u_hi = mid;
                }
            }
        }
    }
    let (u, v) = match best {
        Some((_, u, v)) => (u, v),
        None => {
            let mid = 0.5 * (u_lo + u_hi);
            let scan = scan_loop(map, mid, target, cfg, speed)?;
            (mid, scan.min_v)
        }
    };
    Ok(Candidate { u, v, iterations })
}

/// Damped Newton on (u, v) -> E(u, v) - target with a forward-difference
/// Jacobian, projected onto the triangle. Returns the polished point, its
/// residual, and the iteration count; convergence is pushed well below
/// the acceptance tolerance so downstream cross-checks have headroom.
fn newton_polish<F>(
    map: &F,
    target: Vec2,
    cfg: &SolverConfig,
    speed: f64,
    mut u: f64,
    mut v: f64,
) -> Result<(f64, f64, f64, usize)>
where
    F: Fn(f64, f64) -> Result<Vec2> + Sync,
{
    let goal = 1e-13 * speed;
    let mut res = (map(u, v)? - target).norm();
    let mut iterations = 0;
    for _ in 0..cfg.newton_max {
        if res <= goal {
            break;
        }
        iterations += 1;
        let r0 = map(u, v)? - target;
        let d = cfg.fd_step;
        // Step inward when a forward step would leave the triangle.
        let (du, su) = if u + d <= v { (d, 1.0) } else { (-d, -1.0) };
        let (dv, sv) = if v + d <= 1.0 { (d, 1.0) } else { (-d, -1.0) };
        let (pu, pv0) = project(u + du, v);
        let ju = (map(pu, pv0)? - target - r0) * (su / d);
        let (pu2, pv2) = project(u, v + dv);
        let jv = (map(pu2, pv2)? - target - r0) * (sv / d);
        let det = ju.x * jv.y - ju.y * jv.x;
        if det.abs() < 1e-18 {
            break;
        }
        // Solve J s = -r.
        let su_step = (-r0.x * jv.y + r0.y * jv.x) / det;
        let sv_step = (-r0.y * ju.x + r0.x * ju.y) / det;
        let norm = su_step.hypot(sv_step);
        let cap = if norm > 0.05 { 0.05 / norm } else { 1.0 };
        let mut lambda = cap;
        let mut accepted = false;
        for _ in 0..30 {
            let (nu, nv) = project(u + lambda * su_step, v + lambda * sv_step);
            let nres = (map(nu, nv)? - target).norm();
            if nres < res {
                u = nu;
                v = nv;
                res = nres;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok((u, v, res, iterations))
}

/// Coarse-to-fine grid refinement around a box, the fallback when Newton
/// stagnates.
fn grid_refine<F>(
    map: &F,
    target: Vec2,
    mut u0: f64,
    mut u1: f64,
    mut v0: f64,
    mut v1: f64,
) -> Result<(f64, f64, f64)>
where
    F: Fn(f64, f64) -> Result<Vec2> + Sync,
{
    let per_side = 48;
    let mut best = (f64::INFINITY, u0, v0);
    for _round in 0..6 {
        for i in 0..=per_side {
            for j in 0..=per_side {
                let (u, v) = project(
                    u0 + (u1 - u0) * i as f64 / per_side as f64,
                    v0 + (v1 - v0) * j as f64 / per_side as f64,
                );
                let d = (map(u, v)? - target).norm();
                if d < best.0 {
                    best = (d, u, v);
                }
            }
        }
        let wu = (u1 - u0) / per_side as f64 * 2.0;
        let wv = (v1 - v0) / per_side as f64 * 2.0;
        u0 = best.1 - wu;
        u1 = best.1 + wu;
        v0 = best.2 - wv;
        v1 = best.2 + wv;
    }
    Ok((best.1, best.2, best.0))
}

struct RawSolution {
    u: f64,
    v: f64,
    residual: f64,
    iterations: usize,
    method: Method,
}

/// Local minima of ||E - target|| on a coarse grid over the triangle
/// 0 <= u <= v <= 1. Winding brackets only see zeros that change the
/// loop winding between grid lines, so zeros appearing in pairs between
/// adjacent lines are invisible to the sweep; seeding Newton at every
/// grid local minimum recovers them. Scanned in a fixed order, so the
/// output is deterministic.
fn grid_local_minima<F>(map: &F, target: Vec2) -> Result<Vec<Candidate>>
where
    F: Fn(f64, f64) -> Result<Vec2> + Sync,
{
    let g = 64usize;
    let mut dist = vec![f64::INFINITY; (g + 1) * (g + 1)];
    for i in 0..=g {
        for j in i..=g {
            let (u, v) = (i as f64 / g as f64, j as f64 / g as f64);
            dist[i * (g + 1) + j] = (map(u, v)? - target).norm();
        }
    }
    let mut out = Vec::new();
    for i in 0..=g {
        for j in i..=g {
            let d = dist[i * (g + 1) + j];
            let mut is_min = true;
            'nbrs: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < ni || nj > g as i64 {
                        continue;
                    }
                    if dist[ni as usize * (g + 1) + nj as usize] < d {
                        is_min = false;
                        break 'nbrs;
                    }
                }
            }
            if is_min {
                out.push(Candidate {
                    u: i as f64 / g as f64,
                    v: j as f64 / g as f64,
                    iterations: 0,
                });
            }
        }
    }
    Ok(out)
}

/// Full pipeline for one map: sweep, bisect, polish every bracket,
/// dedupe. Candidates are processed in ascending u, so results are
/// deterministic.
fn solve_map<F>(
    map: &F,
    target: Vec2,
    cfg: &SolverConfig,
    speed: f64,
    tol: f64,
) -> Result<Vec<RawSolution>>
where
    F: Fn(f64, f64) -> Result<Vec2> + Sync,
{
    let mut candidates: Vec<(Candidate, bool)> = bracket_sweep(map, target, cfg, speed)?
        .into_iter()
        .map(|c| (c, false))
        .collect();
    // Grid minima are speculative seeds: unlike brackets they carry no
    // existence guarantee, so they only count when Newton actually
    // converges.
    candidates.extend(grid_local_minima(map, target)?.into_iter().map(|c| (c, true)));
    let mut out: Vec<RawSolution> = Vec::new();
    for (cand, speculative) in candidates {
        let (mut u, mut v, mut res, iters) =
            newton_polish(map, target, cfg, speed, cand.u, cand.v)?;
        let mut method = Method::Newton;
        let mut iterations = cand.iterations + iters;
        if res > tol && speculative {
            // A grid minimum that Newton cannot drive to zero is a
            // plain local minimum, not a missed root; drop it.
            continue;
        }
        if res > tol {
            let w = 2.0 / cfg.h_grid as f64;
            let (gu, gv, _gres) = grid_refine(map, target, u - w, u + w, v - w, v + w)?;
            let (nu, nv, nres, it2) = newton_polish(map, target, cfg, speed, gu, gv)?;
            if nres < res {
                u = nu;
                v = nv;
                res = nres;
                method = Method::Grid;
                iterations += it2;
            }
        }
        if out
            .iter()
            .all(|s| (s.u - u).abs().max((s.v - v).abs()) >= cfg.dedupe)
        {
            out.push(RawSolution {
                u,
                v,
                residual: res,
                iterations,
                method,
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Two-cut solver (three arcs, sigma = [1,3,2])
// ---------------------------------------------------------------------------

fn sigma3() -> Perm {
    Perm::new(vec![1, 3, 2]).expect("static permutation")
}

fn two_cut_map<'a>(table: &'a CurveTable) -> impl Fn(f64, f64) -> Result<Vec2> + Sync + 'a {
    let sigma = sigma3();
    move |u, v| {
        let (u, v) = project(u, v);
        endpoint_map(table, &sigma, &Cuts::two(u, v)?)
    }
}

fn degenerate_result(table: &CurveTable, residual: f64) -> SolveResult {
    SolveResult {
        status: SolveStatus::Degenerate,
        sigma: sigma3(),
        cuts: Cuts::two(0.0, 0.0).expect("static cuts"),
        residual,
        tangent_mismatch: tangent_mismatch(table.total_turning()),
        margin: 0.0,
        iterations: 0,
        method: Method::Degenerate,
    }
}

fn two_cut_result(
    table: &CurveTable,
    raw: RawSolution,
    tol: f64,
    target: Vec2,
) -> Result<SolveResult> {
    let cuts = Cuts::two(raw.u, raw.v)?;
    // Report the worse of the chord-sum residual and an independent
    // re-evaluation through the full sample path, so the number is sound
    // against either code path.
    let full = crate::rearrange::rearranged(table, &sigma3(), &cuts)?;
    let res_full = (full.endpoint() - full.start() - target).norm();
    let residual = raw.residual.max(res_full);
    let status = if residual <= tol {
        SolveStatus::Success
    } else {
        SolveStatus::Inconclusive
    };
    Ok(SolveResult {
        status,
        sigma: sigma3(),
        cuts: cuts.clone(),
        residual,
        tangent_mismatch: tangent_mismatch(table.total_turning()),
        margin: cuts.min_arc_length(),
        iterations: raw.iterations,
        method: raw.method,
    })
}

fn inconclusive(table: &CurveTable, sigma: Perm, k: usize) -> SolveResult {
    SolveResult {
        status: SolveStatus::Inconclusive,
        sigma,
        cuts: Cuts::new(vec![0.0; k - 1]).expect("zeros are valid cuts"),
        residual: f64::INFINITY,
        tangent_mismatch: tangent_mismatch(table.total_turning()),
        margin: 0.0,
        iterations: 0,
        method: Method::Grid,
    }
}

/// Theorem 3.1 realized: cuts (c1, c2) making the three-arc rearrangement
/// [1,3,2] a closed C^1 curve. Requires total turning 2*pi*m, m != 0.
pub fn solve_two_cut(table: &CurveTable, cfg: &SolverConfig) -> Result<SolveResult> {
    require_turning_multiple(table)?;
    let speed = table.speed();
    if table.endpoint().norm() <= cfg.closed_tol * speed {
        return Ok(degenerate_result(table, table.endpoint().norm()));
    }
    let map = two_cut_map(table);
    let tol = cfg.residual_tol * speed;
    let mut sols = solve_map(&map, Vec2::ZERO, cfg, speed, tol)?;
    if sols.is_empty() {
        return Ok(inconclusive(table, sigma3(), 3));
    }
    two_cut_result(table, sols.remove(0), tol, Vec2::ZERO)
}

/// The remark after Theorem 3.1: hit any target P the e-loop winds
/// around, not just the origin.
pub fn solve_two_cut_to_target(
    table: &CurveTable,
    target: Vec2,
    cfg: &SolverConfig,
) -> Result<SolveResult> {
    require_turning_multiple(table)?;
    let speed = table.speed();
    if (target - table.endpoint()).norm() <= cfg.closed_tol * speed {
        // e(h, h) = gamma(1) for every h: trivial cuts.
        return Ok(degenerate_result(table, (target - table.endpoint()).norm()));
    }
    let map = two_cut_map(table);
    // Hypothesis: the boundary loop (h = 0) must wind about the target.
    let scan = scan_loop(&map, 0.0, target, cfg, speed)?;
    if scan.stat == LoopStat::Winding(0) {
        let mut r = inconclusive(table, sigma3(), 3);
        r.status = SolveStatus::Rejected;
        r.residual = scan.min_dist;
        return Ok(r);
    }
    let tol = cfg.residual_tol * speed;
    let mut sols = solve_map(&map, target, cfg, speed, tol)?;
    if sols.is_empty() {
        return Ok(inconclusive(table, sigma3(), 3));
    }
    two_cut_result(table, sols.remove(0), tol, target)
}

/// All two-cut solutions, one per winding-change bracket of the h sweep,
/// deduplicated at config.dedupe.
pub fn find_all_two_cut(table: &CurveTable, cfg: &SolverConfig) -> Result<Vec<SolveResult>> {
    require_turning_multiple(table)?;
    let speed = table.speed();
    if table.endpoint().norm() <= cfg.closed_tol * speed {
        return Ok(vec![degenerate_result(table, table.endpoint().norm())]);
    }
    let map = two_cut_map(table);
    let tol = cfg.residual_tol * speed;
    let sols = solve_map(&map, Vec2::ZERO, cfg, speed, tol)?;
    sols.into_iter()
        .map(|raw| two_cut_result(table, raw, tol, Vec2::ZERO))
        .collect()
}

fn require_turning_multiple(table: &CurveTable) -> Result<i64> {
    match table.turning_multiple(1e-6) {
        Some(m) if m != 0 => Ok(m),
        _ => Err(CurveError::NotTurningMultiple(table.total_turning())),
    }
}

// ---------------------------------------------------------------------------
// C0 variant
// ---------------------------------------------------------------------------

/// The two hypotheses of the C0 closing lemma, evaluated on the table.
#[derive(Debug, Clone, Copy)]
pub struct C0Condition {
    pub holds: bool,
    /// ||gamma(1)||.
    pub lhs: f64,
    /// 2 |sin(theta(1)/2)| * max_radius.
    pub rhs: f64,
    /// |theta(1) - theta(0)| >= 2*pi.
    pub turning_large_enough: bool,
}

pub fn check_c0_condition(table: &CurveTable) -> C0Condition {
    let total = table.total_turning();
    let lhs = table.endpoint().norm();
    // sqrt(2(1 - cos theta(1))) = 2|sin(theta(1)/2)|; exactly zero for
    // turning multiples, where the factor otherwise floats in noise.
    let factor = if table.turning_multiple(1e-9).is_some() {
        0.0
    } else {
        2.0 * (0.5 * total).sin().abs()
    };
    let rhs = factor * table.max_radius();
    let turning_large_enough = total.abs() >= std::f64::consts::TAU - 1e-12;
    C0Condition {
        holds: lhs >= rhs && turning_large_enough,
        lhs,
        rhs,
        turning_large_enough,
    }
}

/// Two-cut closure without tangent matching at the closing point: the
/// same pipeline, with the tangent mismatch merely reported.
pub fn solve_c0(table: &CurveTable, cfg: &SolverConfig) -> Result<SolveResult> {
    let cond = check_c0_condition(table);
    if !cond.holds {
        return Err(CurveError::C0ConditionFails {
            lhs: cond.lhs,
            rhs: cond.rhs,
        });
    }
    let speed = table.speed();
    if table.endpoint().norm() <= cfg.closed_tol * speed {
        return Ok(degenerate_result(table, table.endpoint().norm()));
    }
    let map = two_cut_map(table);
    let tol = cfg.residual_tol * speed;
    let mut sols = solve_map(&map, Vec2::ZERO, cfg, speed, tol)?;
    if sols.is_empty() {
        return Ok(inconclusive(table, sigma3(), 3));
    }
    two_cut_result(table, sols.remove(0), tol, Vec2::ZERO)
}

// ---------------------------------------------------------------------------
// k-arc solver via the reduction plan and cut inflation
// ---------------------------------------------------------------------------

/// The full characterization: for sigma outside the cyclic-shift group,
/// find interior cuts closing the sigma-rearrangement, by solving on the
/// 2-parameter inflated family of the reduction plan.
pub fn solve_k(table: &CurveTable, sigma: &Perm, cfg: &SolverConfig) -> Result<SolveResult> {
    require_turning_multiple(table)?;
    let speed = table.speed();
    if table.endpoint().norm() <= cfg.closed_tol * speed {
        return Err(CurveError::ReductionPrecondition(
            "curve is already closed; the k-arc theorem assumes a non-closed input".into(),
        ));
    }
    // Cyclic shifts are rejected here (Lemma 4.2); build_reduction_plan
    // raises the error, and certify_zk_nonclosure provides the numeric
    // certificate on request.
    let plan = build_reduction_plan(sigma)?;
    let working = plan.working.clone();
    let map = |u: f64, v: f64| -> Result<Vec2> {
        let (u, v) = project(u, v);
        endpoint_map(table, &working, &plan.inflate(u, v)?)
    };
    let tol = cfg.k_residual_tol * speed;
    let sols = solve_map(&map, Vec2::ZERO, cfg, speed, tol)?;
    let raw = match sols.into_iter().next() {
        Some(r) => r,
        None => return Ok(inconclusive(table, sigma.clone(), sigma.k())),
    };
    let cuts = plan.inflate(raw.u, raw.v)?;
    // Closure must transfer from the working permutation back to sigma
    // (same cuts, cyclically rotated arc sequence).
    let res_working = endpoint_map(table, &plan.working, &cuts)?.norm();
    let res_sigma = endpoint_map(table, sigma, &cuts)?.norm();
    let full = crate::rearrange::rearranged(table, sigma, &cuts)?;
    let res_full = (full.endpoint() - full.start()).norm();
    let residual = res_working.max(res_sigma).max(res_full);
    let status = if residual <= tol {
        SolveStatus::Success
    } else {
        SolveStatus::Inconclusive
    };
    Ok(SolveResult {
        status,
        sigma: sigma.clone(),
        cuts: cuts.clone(),
        residual,
        tangent_mismatch: tangent_mismatch(table.total_turning()),
        margin: cuts.min_arc_length(),
        iterations: raw.iterations,
        method: raw.method,
    })
}

// ---------------------------------------------------------------------------
// Non-closure certificate for cyclic shifts
// ---------------------------------------------------------------------------

/// Numeric certificate of Lemma 4.2: over random cuts, ||e_{z_h}(C)||
/// never moves from ||gamma(1)||.
#[derive(Debug, Clone)]
pub struct ZkCertificate {
    pub k: usize,
    pub h: usize,
    pub samples: usize,
    pub min: f64,
    pub max: f64,
    pub gamma1_norm: f64,
    /// max - min <= 1e-6 * speed and min >= ||gamma(1)|| - 1e-6 * speed.
    pub holds: bool,
    /// Input was already closed, so the certificate is vacuous.
    pub degenerate: bool,
}

pub fn certify_zk_nonclosure(
    table: &CurveTable,
    k: usize,
    h: usize,
    grid_n: usize,
    seed: u64,
) -> Result<ZkCertificate> {
    require_turning_multiple(table)?;
    let z = crate::perm::cyclic_shift(k, h)?;
    let speed = table.speed();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min = f64::INFINITY;
    let mut max = 0.0_f64;
    for _ in 0..grid_n {
        let mut values: Vec<f64> = (0..k - 1).map(|_| rng.gen::<f64>()).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let e = endpoint_map(table, &z, &Cuts::new(values)?)?;
        min = min.min(e.norm());
        max = max.max(e.norm());
    }
    let gamma1_norm = table.endpoint().norm();
    let tol = 1e-6 * speed;
    Ok(ZkCertificate {
        k,
        h,
        samples: grid_n,
        min,
        max,
        gamma1_norm,
        holds: max - min <= tol && min >= gamma1_norm - tol,
        degenerate: gamma1_norm <= 1e-9 * speed,
    })
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// Winding of the loop t -> e(h, t) about the origin across an h grid;
/// `None` marks loops that pass through the origin.
#[derive(Debug, Clone)]
pub struct WindingProfile {
    pub h_values: Vec<f64>,
    pub winding: Vec<Option<i64>>,
    pub min_dist: Vec<f64>,
}

pub fn loop_winding_profile(
    table: &CurveTable,
    h_count: usize,
    cfg: &SolverConfig,
) -> Result<WindingProfile> {
    let map = two_cut_map(table);
    let speed = table.speed();
    let scans: Vec<Result<(f64, LoopScan)>> = (0..=h_count)
        .into_par_iter()
        .map(|i| {
            let h = i as f64 / h_count as f64;
            Ok((h, scan_loop(&map, h, Vec2::ZERO, cfg, speed)?))
        })
        .collect();
    let mut profile = WindingProfile {
        h_values: Vec::with_capacity(h_count + 1),
        winding: Vec::with_capacity(h_count + 1),
        min_dist: Vec::with_capacity(h_count + 1),
    };
    for r in scans {
        let (h, scan) = r?;
        profile.h_values.push(h);
        profile.winding.push(match scan.stat {
            LoopStat::Winding(w) => Some(w),
            LoopStat::Crossed => None,
        });
        profile.min_dist.push(scan.min_dist);
    }
    Ok(profile)
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub cuts: Cuts,
    pub residual: f64,
}

/// Budget for the direct D_k scan (number of endpoint evaluations).
pub const ORACLE_BUDGET: u128 = 200_000_000;

/// Exhaustive scan of the cut space for the best ||e_sigma(C)||: direct
/// over D_k for k <= 4, through the 2-D inflated family for larger k.
/// Deliberately independent of the solver pipeline.
pub fn oracle_grid(table: &CurveTable, sigma: &Perm, resolution: usize) -> Result<OracleResult> {
    let k = sigma.k();
    if k <= 4 {
        let dims = (k - 1) as u32;
        let points = (resolution as u128 + 1).pow(dims);
        if points > ORACLE_BUDGET {
            return Err(CurveError::ResolutionBudget {
                points,
                budget: ORACLE_BUDGET,
            });
        }
        let mut best: Option<(f64, Vec<f64>)> = None;
        let mut idx = vec![0usize; k - 1];
        loop {
            let values: Vec<f64> = idx.iter().map(|&i| i as f64 / resolution as f64).collect();
            if values.windows(2).all(|w| w[0] <= w[1]) {
                let e = endpoint_map(table, sigma, &Cuts::new(values.clone())?)?;
                let d = e.norm();
                if best.as_ref().map_or(true, |(b, _)| d < *b) {
                    best = Some((d, values));
                }
            }
            // odometer
            let mut carry = true;
            for slot in idx.iter_mut().rev() {
                if carry {
                    *slot += 1;
                    if *slot > resolution {
                        *slot = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
        let (residual, values) = best.expect("non-empty scan");
        Ok(OracleResult {
            cuts: Cuts::new(values)?,
            residual,
        })
    } else {
        let plan = build_reduction_plan(sigma)?;
        let points = (resolution as u128 + 1).pow(2);
        if points > ORACLE_BUDGET {
            return Err(CurveError::ResolutionBudget {
                points,
                budget: ORACLE_BUDGET,
            });
        }
        let mut best: Option<(f64, Cuts)> = None;
        for i in 0..=resolution {
            let l1 = i as f64 / resolution as f64;
            for j in i..=resolution {
                let l2 = j as f64 / resolution as f64;
                let cuts = plan.inflate(l1, l2)?;
                let d = endpoint_map(table, sigma, &cuts)?.norm();
                if best.as_ref().map_or(true, |(b, _)| d < *b) {
                    best = Some((d, cuts));
                }
            }
        }
        let (residual, cuts) = best.expect("non-empty scan");
        Ok(OracleResult { cuts, residual })
    }
}

/// Re-derive the reduction plan for external callers that need the
/// inflated family (the CLI oracle for k > 4 reports plan data).
pub fn plan_for(sigma: &Perm) -> Result<ReductionPlan> {
    build_reduction_plan(sigma)
}
