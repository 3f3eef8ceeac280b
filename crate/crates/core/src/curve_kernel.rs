//! Constant-speed planar curves represented by their turning angle.
//!
//! A curve is stored as the continuous lift theta(s) of its tangent
//! direction on [0,1] together with a speed c, so that
//! gamma'(s) = c (cos theta(s), sin theta(s)). Positions are recovered by
//! composite trapezoid quadrature on a uniform grid; the prefix table of
//! partial integrals is the workhorse shared by everything downstream.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{CurveError, Result};
use crate::geom::Vec2;

/// One sinusoidal term `amp * sin(2*pi*freq*s + phase)` of an analytic
/// turning angle. Frequencies need not be integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierTerm {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ThetaSpec {
    /// Uniform samples of theta on [0,1], both endpoints included.
    Samples { values: Vec<f64> },
    /// theta(s) = 2*pi*winding*s + sum of sinusoidal terms.
    Fourier {
        winding: i64,
        terms: Vec<FourierTerm>,
    },
}

/// A constant-speed planar curve over [0,1], stored via its turning angle.
///
/// The domain is [0,1], so `speed` equals the total arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct TurningCurve {
    speed: f64,
    theta: ThetaSpec,
    normalized: bool,
}

/// Minimum number of sample intervals for a sampled theta.
pub const MIN_SAMPLE_INTERVALS: usize = 64;

impl TurningCurve {
    pub fn from_samples(speed: f64, values: Vec<f64>) -> Result<Self> {
        if !(speed > 0.0) {
            return Err(CurveError::NonPositiveSpeed(speed));
        }
        if values.len() < MIN_SAMPLE_INTERVALS + 1 {
            return Err(CurveError::TooFewSamples(values.len()));
        }
        for (i, w) in values.windows(2).enumerate() {
            let jump = (w[1] - w[0]).abs();
            if !(jump < PI) {
                return Err(CurveError::BranchJump { index: i, jump });
            }
        }
        Ok(TurningCurve {
            speed,
            theta: ThetaSpec::Samples { values },
            normalized: false,
        })
    }

    pub fn from_fourier(speed: f64, winding: i64, terms: Vec<FourierTerm>) -> Result<Self> {
        if !(speed > 0.0) {
            return Err(CurveError::NonPositiveSpeed(speed));
        }
        Ok(TurningCurve {
            speed,
            theta: ThetaSpec::Fourier { winding, terms },
            normalized: false,
        })
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn theta_spec(&self) -> &ThetaSpec {
        &self.theta
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    fn theta_raw(&self, s: f64) -> f64 {
        match &self.theta {
            ThetaSpec::Samples { values } => {
                let n = values.len() - 1;
                let x = s * n as f64;
                let i = (x.floor() as usize).min(n - 1);
                let frac = x - i as f64;
                values[i] + (values[i + 1] - values[i]) * frac
            }
            ThetaSpec::Fourier { winding, terms } => {
                let mut th = TAU * *winding as f64 * s;
                for t in terms {
                    th += t.amp * (TAU * t.freq * s + t.phase).sin();
                }
                th
            }
        }
    }

    /// Turning angle at parameter s (after normalization, theta(0) = 0).
    pub fn theta_at(&self, s: f64) -> f64 {
        if self.normalized {
            // Samples are rewritten in `normalize`, the fourier offset is
            // subtracted on the fly.
            match &self.theta {
                ThetaSpec::Samples { .. } => self.theta_raw(s),
                ThetaSpec::Fourier { .. } => self.theta_raw(s) - self.theta_raw(0.0),
            }
        } else {
            self.theta_raw(s)
        }
    }

    /// Shift theta so theta(0) = 0; the start point (0,0) is implicit since
    /// positions are always integrated from 0. Idempotent.
    pub fn normalize(mut self) -> Self {
        if self.normalized {
            return self;
        }
        if let ThetaSpec::Samples { values } = &mut self.theta {
            let off = values[0];
            for v in values.iter_mut() {
                *v -= off;
            }
        }
        self.normalized = true;
        self
    }

    /// theta(1) - theta(0). Integer-frequency fourier terms contribute
    /// exactly zero, so fourier curves with such terms return exactly
    /// 2*pi*winding.
    pub fn total_turning(&self) -> f64 {
        match &self.theta {
            ThetaSpec::Samples { values } => values[values.len() - 1] - values[0],
            ThetaSpec::Fourier { winding, terms } => {
                let mut total = TAU * *winding as f64;
                for t in terms {
                    if t.freq.fract() != 0.0 {
                        total += t.amp * ((TAU * t.freq + t.phase).sin() - t.phase.sin());
                    }
                }
                total
            }
        }
    }

    /// The integer m with theta(1) - theta(0) = 2*pi*m, if within `tol`.
    pub fn turning_multiple(&self, tol: f64) -> Option<i64> {
        let total = self.total_turning();
        let m = (total / TAU).round();
        if (total - TAU * m).abs() <= tol {
            Some(m as i64)
        } else {
            None
        }
    }
}

/// Prefix table of trapezoid quadrature for one curve at a fixed resolution.
///
/// Positions at cut parameters are linearly interpolated between grid
/// nodes, which keeps every endpoint map continuous in the cuts.
#[derive(Debug, Clone)]
pub struct CurveTable {
    curve: TurningCurve,
    n: usize,
    prefix: Vec<Vec2>,
}

/// Default quadrature resolution (error O(N^-2)).
pub const DEFAULT_RESOLUTION: usize = 4096;

impl CurveTable {
    pub fn new(curve: &TurningCurve, n: usize) -> Result<Self> {
        if !curve.is_normalized() {
            return Err(CurveError::NotNormalized);
        }
        assert!(n >= 2, "resolution must be at least 2");
        let h = 1.0 / n as f64;
        let mut prefix = Vec::with_capacity(n + 1);
        let mut acc = Vec2::ZERO;
        prefix.push(acc);
        let mut prev = dir(curve.theta_at(0.0));
        for i in 1..=n {
            let cur = dir(curve.theta_at(i as f64 * h));
            acc += (prev + cur) * (0.5 * h * curve.speed);
            prefix.push(acc);
            prev = cur;
        }
        Ok(CurveTable {
            curve: curve.clone(),
            n,
            prefix,
        })
    }

    pub fn curve(&self) -> &TurningCurve {
        &self.curve
    }

    pub fn speed(&self) -> f64 {
        self.curve.speed
    }

    pub fn resolution(&self) -> usize {
        self.n
    }

    pub fn theta(&self, s: f64) -> f64 {
        self.curve.theta_at(s)
    }

    pub fn total_turning(&self) -> f64 {
        self.curve.total_turning()
    }

    pub fn turning_multiple(&self, tol: f64) -> Option<i64> {
        self.curve.turning_multiple(tol)
    }

    /// gamma(s) by linear interpolation of the prefix table.
    pub fn position(&self, s: f64) -> Result<Vec2> {
        if !(0.0..=1.0).contains(&s) {
            return Err(CurveError::ParameterOutOfRange(s));
        }
        let x = s * self.n as f64;
        let i = (x.floor() as usize).min(self.n - 1);
        let frac = x - i as f64;
        Ok(self.prefix[i] + (self.prefix[i + 1] - self.prefix[i]) * frac)
    }

    pub fn endpoint(&self) -> Vec2 {
        self.prefix[self.n]
    }

    /// max over grid nodes of ||gamma(s)||.
    pub fn max_radius(&self) -> f64 {
        self.prefix.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    pub fn grid_nodes(&self) -> impl Iterator<Item = (f64, Vec2)> + '_ {
        let n = self.n;
        self.prefix
            .iter()
            .enumerate()
            .map(move |(i, p)| (i as f64 / n as f64, *p))
    }
}

fn dir(theta: f64) -> Vec2 {
    let (s, c) = theta.sin_cos();
    Vec2::new(c, s)
}

/// Convenience wrappers matching the operation-level API.
pub fn position(curve: &TurningCurve, s: f64, resolution: usize) -> Result<Vec2> {
    CurveTable::new(curve, resolution)?.position(s)
}

pub fn max_radius(curve: &TurningCurve, resolution: usize) -> Result<f64> {
    Ok(CurveTable::new(curve, resolution)?.max_radius())
}

/// An ordered closed polyline of loop samples with their parameter values.
#[derive(Debug, Clone)]
pub struct LoopSamples {
    points: Vec<Vec2>,
    params: Vec<f64>,
}

impl LoopSamples {
    /// `points` must be exactly closed (first == last).
    pub fn new(points: Vec<Vec2>, params: Vec<f64>) -> Result<Self> {
        if points.len() < 2 || points.first() != points.last() {
            return Err(CurveError::OpenLoop);
        }
        assert_eq!(points.len(), params.len());
        Ok(LoopSamples { points, params })
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }
}

/// Default "point on loop" threshold as a fraction of the speed.
pub const DEFAULT_EPS_P_FACTOR: f64 = 1e-12;

/// Winding number of a sampled loop about `p`: sum of signed angle
/// increments divided by 2*pi, rounded to the nearest integer.
///
/// Every consecutive pair must subtend an angle < pi/2 as seen from `p`
/// (the caller resamples until that holds) and no sample may lie within
/// `eps` of `p`.
pub fn winding_number(samples: &LoopSamples, p: Vec2, eps: f64) -> Result<i64> {
    let mut total = 0.0;
    let pts = samples.points();
    let mut prev = pts[0] - p;
    let mut prev_norm = prev.norm();
    if prev_norm < eps {
        return Err(CurveError::PointOnLoop {
            dist: prev_norm,
            eps,
        });
    }
    for q in &pts[1..] {
        let cur = *q - p;
        let cur_norm = cur.norm();
        if cur_norm < eps {
            return Err(CurveError::PointOnLoop {
                dist: cur_norm,
                eps,
            });
        }
        let step = prev.cross(cur).atan2(prev.dot(cur));
        if step.abs() >= FRAC_PI_2 {
            return Err(CurveError::AngularStep { step: step.abs() });
        }
        total += step;
        prev = cur;
        prev_norm = cur_norm;
    }
    let _ = prev_norm;
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() >= 0.1 {
        return Err(CurveError::WindingResidual((turns - rounded).abs()));
    }
    Ok(rounded as i64)
}

// ---------------------------------------------------------------------------
// Curve JSON (version 1)
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CurveJson {
    version: u32,
    speed: f64,
    theta: ThetaSpec,
}

impl TurningCurve {
    pub fn to_json(&self) -> String {
        let doc = CurveJson {
            version: 1,
            speed: self.speed,
            theta: self.theta.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("curve serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CurveJson =
            serde_json::from_str(text).map_err(|e| CurveError::Json(e.to_string()))?;
        if doc.version != 1 {
            return Err(CurveError::Json(format!(
                "unsupported version {}",
                doc.version
            )));
        }
        match doc.theta {
            ThetaSpec::Samples { values } => TurningCurve::from_samples(doc.speed, values),
            ThetaSpec::Fourier { winding, terms } => {
                TurningCurve::from_fourier(doc.speed, winding, terms)
            }
        }
    }
}
