//! Cutting a curve into arcs and regluing them in a new order.
//!
//! Concatenation rigidly moves each arc so its start point and tangent
//! frame coincide with the previous arc's end point and frame. In the
//! plane the positive frame is determined by the tangent angle alone, so
//! gluing is a rotation by the angle difference plus a translation, and
//! the whole rearrangement is pure bookkeeping in theta-space.

use crate::curve_kernel::{CurveTable, LoopSamples, TurningCurve};
use crate::error::{CurveError, Result};
use crate::geom::{wrap_angle, Vec2};
use crate::perm::Perm;

/// Interior cut parameters (c_1, ..., c_{k-1}); c_0 = 0 and c_k = 1 are
/// implicit. Repeated values produce degenerate arcs, which is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct Cuts {
    values: Vec<f64>,
}

impl Cuts {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let ok = values.iter().all(|v| (0.0..=1.0).contains(v))
            && values.windows(2).all(|w| w[0] <= w[1]);
        if !ok {
            return Err(CurveError::InvalidCuts(values));
        }
        Ok(Cuts { values })
    }

    pub fn two(c1: f64, c2: f64) -> Result<Self> {
        Cuts::new(vec![c1, c2])
    }

    /// Arc count (one more than the number of interior cuts).
    pub fn k(&self) -> usize {
        self.values.len() + 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// c_{i} for i in 0..=k, including the implicit endpoints.
    pub fn at(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else if i == self.values.len() + 1 {
            1.0
        } else {
            self.values[i - 1]
        }
    }

    /// Entry parameter c_{arc-1} of 1-based arc index.
    pub fn lower(&self, arc: usize) -> f64 {
        self.at(arc - 1)
    }

    /// Exit parameter c_arc of 1-based arc index.
    pub fn upper(&self, arc: usize) -> f64 {
        self.at(arc)
    }

    /// Length of the shortest arc.
    pub fn min_arc_length(&self) -> f64 {
        (1..=self.k())
            .map(|a| self.upper(a) - self.lower(a))
            .fold(f64::INFINITY, f64::min)
    }
}

/// One arc of a split curve, with the data the endpoint map needs.
/// Degenerate arcs (zero-length interval) are valid: the chord vanishes
/// but the tangent direction is still carried.
#[derive(Debug, Clone, Copy)]
pub struct Arc {
    pub range: (f64, f64),
    pub entry_angle: f64,
    pub exit_angle: f64,
    pub chord: Vec2,
}

impl Arc {
    pub fn is_degenerate(&self) -> bool {
        self.range.0 == self.range.1
    }

    pub fn turning(&self) -> f64 {
        self.exit_angle - self.entry_angle
    }
}

/// Split the tabulated curve at the given cuts into k arcs covering [0,1].
pub fn split(table: &CurveTable, cuts: &Cuts) -> Result<Vec<Arc>> {
    (1..=cuts.k())
        .map(|a| {
            let (lo, hi) = (cuts.lower(a), cuts.upper(a));
            Ok(Arc {
                range: (lo, hi),
                entry_angle: table.theta(lo),
                exit_angle: table.theta(hi),
                chord: table.position(hi)? - table.position(lo)?,
            })
        })
        .collect()
}

/// A sampled composite curve produced by regluing arcs. Points, turning
/// angles, and arc-length parameters share indices; the parameter runs
/// from 0 to the summed arc length (1 for a full rearrangement).
#[derive(Debug, Clone)]
pub struct Composite {
    points: Vec<Vec2>,
    thetas: Vec<f64>,
    params: Vec<f64>,
    speed: f64,
    total_turning: f64,
}

impl Composite {
    /// One arc in its own frame: start at the origin with tangent angle 0.
    /// Samples are the quadrature grid nodes inside the interval plus the
    /// interpolated endpoints.
    pub fn from_arc(table: &CurveTable, lo: f64, hi: f64) -> Result<Composite> {
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(CurveError::InvalidCuts(vec![lo, hi]));
        }
        let n = table.resolution() as f64;
        let mut params_src = vec![lo];
        let first = (lo * n).floor() as usize + 1;
        let mut i = first;
        while (i as f64) < hi * n {
            let s = i as f64 / n;
            if s > lo {
                params_src.push(s);
            }
            i += 1;
        }
        if hi > lo {
            params_src.push(hi);
        }
        let origin = table.position(lo)?;
        let entry = table.theta(lo);
        let mut points = Vec::with_capacity(params_src.len());
        let mut thetas = Vec::with_capacity(params_src.len());
        let mut params = Vec::with_capacity(params_src.len());
        for &s in &params_src {
            points.push((table.position(s)? - origin).rotated(-entry));
            thetas.push(table.theta(s) - entry);
            params.push(s - lo);
        }
        Ok(Composite {
            points,
            thetas,
            params,
            speed: table.speed(),
            total_turning: table.theta(hi) - entry,
        })
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn start(&self) -> Vec2 {
        self.points[0]
    }

    pub fn endpoint(&self) -> Vec2 {
        *self.points.last().unwrap()
    }

    pub fn entry_angle(&self) -> f64 {
        self.thetas[0]
    }

    pub fn exit_angle(&self) -> f64 {
        *self.thetas.last().unwrap()
    }

    pub fn total_turning(&self) -> f64 {
        self.total_turning
    }

    /// Smallest |Delta| with Delta congruent to exit - entry angle mod 2*pi.
    pub fn tangent_mismatch(&self) -> f64 {
        tangent_mismatch(self.total_turning)
    }

    /// Frame-matching concatenation: `other` is rotated so its entry
    /// tangent continues this curve's exit tangent, translated to the
    /// endpoint, and appended (its duplicated first sample dropped).
    pub fn concat(mut self, other: &Composite) -> Result<Composite> {
        let rel = (self.speed - other.speed).abs() / self.speed.max(other.speed);
        if rel > 1e-12 {
            return Err(CurveError::SpeedMismatch(self.speed, other.speed));
        }
        let rot = self.exit_angle() - other.entry_angle();
        let base = self.endpoint();
        let theta_off = rot;
        let param_off = *self.params.last().unwrap();
        for ((p, th), u) in other
            .points
            .iter()
            .zip(&other.thetas)
            .zip(&other.params)
            .skip(1)
        {
            self.points.push(base + (*p - other.points[0]).rotated(rot));
            self.thetas.push(th + theta_off);
            self.params.push(u + param_off);
        }
        self.total_turning += other.total_turning;
        Ok(self)
    }

    /// Closed polyline of the samples; requires the endpoint to return to
    /// the start within `tol` and then snaps it exactly.
    pub fn loop_samples(&self, tol: f64) -> Result<LoopSamples> {
        let gap = (self.endpoint() - self.start()).norm();
        if gap > tol {
            return Err(CurveError::OpenLoop);
        }
        let mut pts = self.points.clone();
        let first = pts[0];
        *pts.last_mut().unwrap() = first;
        LoopSamples::new(pts, self.params.clone())
    }

    /// Resample the turning angle on a uniform grid of `n` intervals and
    /// rebuild a plain curve (normalized). The theta track of a composite
    /// is continuous by construction, so this is ordinary interpolation.
    pub fn to_turning_curve(&self, n: usize) -> Result<TurningCurve> {
        let total = *self.params.last().unwrap();
        let mut values = Vec::with_capacity(n + 1);
        let mut j = 0;
        for i in 0..=n {
            let u = total * i as f64 / n as f64;
            while j + 1 < self.params.len() - 1 && self.params[j + 1] < u {
                j += 1;
            }
            let (u0, u1) = (self.params[j], self.params[j + 1]);
            let f = if u1 > u0 { (u - u0) / (u1 - u0) } else { 0.0 };
            let f = f.clamp(0.0, 1.0);
            values.push(self.thetas[j] + (self.thetas[j + 1] - self.thetas[j]) * f);
        }
        Ok(TurningCurve::from_samples(self.speed, values)?.normalize())
    }
}

/// The rearranged curve r_{sigma,C}: arcs reglued in the order sigma,
/// renormalized to start at the origin with tangent angle 0. Its total
/// turning is set to the source curve's exactly — regluing permutes the
/// per-arc turnings, whose telescoping sum is theta(1) - theta(0).
pub fn rearranged(table: &CurveTable, sigma: &Perm, cuts: &Cuts) -> Result<Composite> {
    if sigma.k() != cuts.k() {
        return Err(CurveError::SigmaKMismatch(sigma.k(), cuts.k()));
    }
    let mut out: Option<Composite> = None;
    for j in 1..=sigma.k() {
        let a = sigma.at(j);
        let piece = Composite::from_arc(table, cuts.lower(a), cuts.upper(a))?;
        out = Some(match out {
            None => piece,
            Some(acc) => acc.concat(&piece)?,
        });
    }
    let mut out = out.expect("k >= 1");
    out.total_turning = table.total_turning();
    Ok(out)
}

/// The endpoint map e_sigma(C) evaluated by the O(k) chord sum, without
/// materializing samples: each arc contributes its chord rotated into the
/// running frame, alpha_1 = 0 and alpha advances by the arc's turning.
/// Degenerate arcs contribute nothing but still thread their tangent
/// through the bookkeeping.
pub fn endpoint_map(table: &CurveTable, sigma: &Perm, cuts: &Cuts) -> Result<Vec2> {
    if sigma.k() != cuts.k() {
        return Err(CurveError::SigmaKMismatch(sigma.k(), cuts.k()));
    }
    let mut alpha = 0.0;
    let mut e = Vec2::ZERO;
    for j in 1..=sigma.k() {
        let a = sigma.at(j);
        let (lo, hi) = (cuts.lower(a), cuts.upper(a));
        let (th_lo, th_hi) = (table.theta(lo), table.theta(hi));
        if hi > lo {
            let chord = table.position(hi)? - table.position(lo)?;
            e += chord.rotated(alpha - th_lo);
        }
        alpha += th_hi - th_lo;
    }
    Ok(e)
}

/// Closed form of the three-arc endpoint map on the boundary face
/// c_1 = 0: e(t) = Rot(-theta(t)) gamma(1). Only valid when the total
/// turning is a non-zero multiple of 2*pi, which is what collapses
/// Rot(theta(1)) to the identity.
pub fn e3_closed_form(table: &CurveTable, t: f64) -> Result<Vec2> {
    match table.turning_multiple(1e-6) {
        Some(m) if m != 0 => {}
        _ => return Err(CurveError::NotTurningMultiple(table.total_turning())),
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(CurveError::ParameterOutOfRange(t));
    }
    Ok(table.endpoint().rotated(-table.theta(t)))
}

/// Smallest absolute representative of a turning angle modulo 2*pi.
pub fn tangent_mismatch(total_turning: f64) -> f64 {
    wrap_angle(total_turning).abs()
}
