//! Certified path tracking: the rectangular tracker (fixed boxes around a
//! refined center) and the tilted tracker (boxes sheared along a
//! predictor-corrector segment), both with λ-scaled step control.

use crate::certify::{endpoint_enclosure, handoff_holds, PathCertificate, Segment};
use crate::error::{Error, Result};
use crate::interval::{box_centered, IntervalBox, RealInterval};
use crate::krawczyk::parametric_krawczyk_test;
use crate::linalg::{mid_inverse, PointMatrix};
use crate::system::Homotopy;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrackMode {
    Rect,
    Tilted,
}

impl std::str::FromStr for TrackMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rect" => Ok(TrackMode::Rect),
            "tilted" => Ok(TrackMode::Tilted),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for TrackMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TrackMode::Rect => "rect",
            TrackMode::Tilted => "tilted",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub mode: TrackMode,
    pub dt0: f64,
    pub r0: f64,
    pub lambda: f64,
    pub newton_iters: usize,
    pub newton_tol: f64,
    pub max_steps: usize,
    /// Consecutive rejections before giving up.
    pub max_failures: usize,
    pub min_dt: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        Self {
            mode: TrackMode::Tilted,
            dt0: 0.1,
            r0: 0.1,
            lambda: 3.0,
            newton_iters: 50,
            newton_tol: 1e-12,
            max_steps: 1_000_000,
            max_failures: 60,
            min_dt: 1e-14,
        }
    }
}

impl TrackerConfig {
    pub fn with_steps(mode: TrackMode, dt0: f64, r0: f64) -> Self {
        Self {
            mode,
            dt0,
            r0,
            ..Self::default()
        }
    }

    /// `dt0 / r0`.
    pub fn ratio(&self) -> f64 {
        self.dt0 / self.r0
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.dt0 > 0.0 && self.dt0 < 1.0) {
            return bad("dt0 must lie in (0, 1)");
        }
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return bad("r0 must be positive");
        }
        if !(self.lambda > 1.0 && self.lambda.is_finite()) {
            return bad("lambda must exceed 1");
        }
        if !(self.newton_tol > 0.0) || self.newton_iters == 0 {
            return bad("newton tolerance and iteration cap must be positive");
        }
        if self.max_steps == 0 || self.max_failures == 0 {
            return bad("step caps must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t0: f64,
    pub dt: f64,
    pub r: f64,
    pub accepted: bool,
    /// Residual norm of the Krawczyk test; `None` if preconditioning failed.
    pub residual_norm: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackState {
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    pub r: f64,
    pub x0: Vec<Complex64>,
    pub x1: Option<Vec<Complex64>>,
    pub step_log: Vec<StepRecord>,
    consecutive_failures: usize,
}

impl TrackState {
    pub fn new(x0: Vec<Complex64>, cfg: &TrackerConfig) -> Self {
        Self {
            t0: 0.0,
            t1: cfg.dt0.min(1.0),
            dt: cfg.dt0,
            r: cfg.r0,
            x0,
            x1: None,
            step_log: Vec::new(),
            consecutive_failures: 0,
        }
    }
}

/// Record the outcome of the test on `[t0, t1]` and rescale. On acceptance
/// the bracket advances to start at the old `t1`.
pub fn step_update(
    mut s: TrackState,
    accepted: bool,
    residual_norm: Option<f64>,
    cfg: &TrackerConfig,
) -> Result<TrackState> {
    s.step_log.push(StepRecord {
        t0: s.t0,
        dt: s.dt,
        r: s.r,
        accepted,
        residual_norm,
    });
    if accepted {
        s.dt *= cfg.lambda;
        s.r *= cfg.lambda;
        s.t0 = s.t1;
        s.consecutive_failures = 0;
    } else {
        s.dt /= cfg.lambda;
        s.r /= cfg.lambda;
        s.consecutive_failures += 1;
        if s.consecutive_failures >= cfg.max_failures || s.dt < cfg.min_dt {
            return Err(Error::StepUnderflow { t: s.t0, dt: s.dt });
        }
    }
    s.t1 = (s.t0 + s.dt).min(1.0);
    Ok(s)
}

fn norm_inf(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Newton's method on `H(·, t)`. Stops once the residual is at most
/// `newton_tol` or the update has stalled at rounding level.
pub fn newton_refine(h: &Homotopy, x: &[Complex64], t: f64, cfg: &TrackerConfig) -> Result<(Vec<Complex64>, f64)> {
    let mut x = x.to_vec();
    let mut f = h.eval_point(&x, t)?;
    let mut res = norm_inf(&f);
    for _ in 0..cfg.newton_iters {
        if res <= cfg.newton_tol {
            return Ok((x, res));
        }
        let j = h.jac_x_point(&x, t)?;
        let delta = j
            .lu()
            .and_then(|lu| lu.solve(&f))
            .map_err(|_| Error::SingularJacobian)?;
        for (xi, di) in x.iter_mut().zip(&delta) {
            *xi -= di;
        }
        f = h.eval_point(&x, t)?;
        res = norm_inf(&f);
        if !res.is_finite() {
            break;
        }
        if norm_inf(&delta) <= 4.0 * f64::EPSILON * (1.0 + norm_inf(&x)) {
            return Ok((x, res));
        }
    }
    if res <= cfg.newton_tol {
        Ok((x, res))
    } else {
        Err(Error::NoConvergence {
            residual: res,
            iterations: cfg.newton_iters,
        })
    }
}

/// One Euler step along `x' = −(∂ₓH)⁻¹ ∂ₜH`.
pub fn euler_predict(h: &Homotopy, x: &[Complex64], t0: f64, dt: f64) -> Result<Vec<Complex64>> {
    let j = h.jac_x_point(x, t0)?;
    let v = h.dt_point(x, t0)?;
    let d = j
        .lu()
        .and_then(|lu| lu.solve(&v))
        .map_err(|_| Error::SingularJacobian)?;
    Ok(x.iter().zip(&d).map(|(&a, &b)| a - b * dt).collect())
}

pub struct Preconditioned {
    pub x1: Vec<Complex64>,
    pub sheared: Homotopy,
    pub region: IntervalBox,
    pub time: RealInterval,
}

/// Predict and correct `x1 ≈ x(t1)`, then shear `h` along the segment from
/// `(t0, x0)` to `(t1, x1)`.
pub fn precondition(
    h: &Homotopy,
    x0: &[Complex64],
    r: f64,
    t0: f64,
    t1: f64,
    cfg: &TrackerConfig,
) -> Result<Preconditioned> {
    if !(t0 < t1) {
        return Err(Error::DegenerateTimeInterval { t0, t1 });
    }
    let guess = euler_predict(h, x0, t0, t1 - t0)?;
    let (x1, _) = newton_refine(h, &guess, t1, cfg)?;
    let sheared = h.apply_shear(x0, &x1, t0, t1)?;
    let region = box_centered(&vec![Complex64::new(0.0, 0.0); x0.len()], r)?;
    Ok(Preconditioned {
        x1,
        sheared,
        region,
        time: RealInterval::new(t0, t1)?,
    })
}

#[derive(Clone, Debug)]
pub struct TrackResult {
    pub final_point: Vec<Complex64>,
    pub final_residual: f64,
    pub certificate: PathCertificate,
    pub steps: Vec<StepRecord>,
}

impl TrackResult {
    pub fn accepted(&self) -> usize {
        self.steps.iter().filter(|s| s.accepted).count()
    }

    pub fn rejected(&self) -> usize {
        self.steps.len() - self.accepted()
    }

    /// Number of Krawczyk tests attempted (accepted + rejected).
    pub fn iterations(&self) -> usize {
        self.steps.len()
    }
}

fn inverse_at(h: &Homotopy, x: &[Complex64], t: f64) -> Result<PointMatrix> {
    let j = h.jac_x_point(x, t)?;
    mid_inverse(&j).map(|(y, _)| y).map_err(|_| Error::SingularJacobian)
}

/// Errors that reject a step instead of aborting the path.
fn recoverable(e: &Error) -> bool {
    matches!(
        e,
        Error::NoConvergence { .. } | Error::SingularJacobian | Error::NonFiniteEndpoint | Error::SingularMatrix
    )
}

struct Candidate {
    homotopy: Homotopy,
    segment: Segment,
    next_x0: Vec<Complex64>,
}

fn track(h: &Homotopy, start: &[Complex64], cfg: &TrackerConfig) -> Result<TrackResult> {
    cfg.validate()?;
    if start.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: start.len(),
        });
    }
    let h = h.unsheared();
    let (x0, _) = newton_refine(&h, start, 0.0, cfg)?;
    let mut y = inverse_at(&h, &x0, 0.0)?;
    let mut state = TrackState::new(x0, cfg);
    let mut segments: Vec<Segment> = Vec::new();
    let mut prev_end: Option<IntervalBox> = None;
    let mut last_h = h.clone();

    while state.t0 < 1.0 {
        if state.step_log.len() >= cfg.max_steps {
            return Err(Error::MaxStepsExceeded(cfg.max_steps));
        }
        let (t0, t1, r) = (state.t0, state.t1, state.r);
        let candidate: Result<Candidate> = match cfg.mode {
            TrackMode::Tilted => precondition(&h, &state.x0, r, t0, t1, cfg).map(|p| Candidate {
                segment: Segment {
                    t_lo: t0,
                    t_hi: t1,
                    region: p.region,
                    y: y.clone(),
                    center: vec![Complex64::new(0.0, 0.0); h.dim()],
                    shear_x0: Some(state.x0.clone()),
                    shear_x1: Some(p.x1.clone()),
                    recorded_residual_norm: f64::INFINITY,
                },
                homotopy: p.sheared,
                next_x0: p.x1,
            }),
            TrackMode::Rect => box_centered(&state.x0, r).map(|region| Candidate {
                segment: Segment {
                    t_lo: t0,
                    t_hi: t1,
                    region,
                    y: y.clone(),
                    center: state.x0.clone(),
                    shear_x0: None,
                    shear_x1: None,
                    recorded_residual_norm: f64::INFINITY,
                },
                homotopy: h.clone(),
                next_x0: state.x0.clone(),
            }),
        };
        let mut cand = match candidate {
            Ok(c) => Some(c),
            Err(e) if recoverable(&e) => None,
            Err(e) => return Err(e),
        };
        let mut residual_norm = None;
        let mut accepted = false;
        if let Some(c) = cand.as_mut() {
            let time = RealInterval::new(t0, t1)?;
            let v = parametric_krawczyk_test(&c.homotopy, &c.segment.center, &y, &c.segment.region, time);
            residual_norm = Some(v.residual_norm).filter(|r| r.is_finite());
            c.segment.recorded_residual_norm = v.residual_norm;
            accepted = v.passed()
                && match &prev_end {
                    Some(end) => handoff_holds(&c.homotopy, &c.segment, end).unwrap_or(false),
                    None => true,
                };
        }
        state = step_update(state, accepted, residual_norm, cfg)?;
        if accepted {
            let c = cand.expect("accepted steps have a candidate");
            prev_end = Some(endpoint_enclosure(&c.homotopy, &c.segment)?);
            let (x, _) = match newton_refine(&h, &c.next_x0, c.segment.t_hi, cfg) {
                Ok(v) => v,
                Err(e) if recoverable(&e) && cfg.mode == TrackMode::Tilted => (c.next_x0.clone(), f64::NAN),
                Err(e) => return Err(e),
            };
            state.x0 = x;
            state.x1 = c.segment.shear_x1.clone();
            y = inverse_at(&h, &state.x0, state.t0)?;
            last_h = c.homotopy;
            segments.push(c.segment);
        }
    }

    let guess = match last_h.shear() {
        Some(s) => s.point_at(1.0),
        None => state.x0.clone(),
    };
    let (final_point, _) = newton_refine(&h, &guess, 1.0, cfg)?;
    let final_residual = h.residual(&final_point, 1.0)?;
    let certificate = PathCertificate {
        system: h.system().clone(),
        p0: h.p0().to_vec(),
        p1: h.p1().to_vec(),
        mode: cfg.mode,
        segments,
        final_point: final_point.clone(),
        final_residual,
    };
    Ok(TrackResult {
        final_point,
        final_residual,
        certificate,
        steps: state.step_log,
    })
}

/// Track with boxes centered at refined points.
pub fn track_rect(h: &Homotopy, x0: &[Complex64], cfg: &TrackerConfig) -> Result<TrackResult> {
    track(
        h,
        x0,
        &TrackerConfig {
            mode: TrackMode::Rect,
            ..cfg.clone()
        },
    )
}

/// Track with boxes sheared along predicted segments.
pub fn track_tilted(h: &Homotopy, x0: &[Complex64], cfg: &TrackerConfig) -> Result<TrackResult> {
    track(
        h,
        x0,
        &TrackerConfig {
            mode: TrackMode::Tilted,
            ..cfg.clone()
        },
    )
}

/// Track in the mode named by `cfg.mode`.
pub fn track_path(h: &Homotopy, x0: &[Complex64], cfg: &TrackerConfig) -> Result<TrackResult> {
    track(h, x0, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{ParametricSystem, Term};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn newton(m: f64) -> Homotopy {
        let sys = ParametricSystem::new(
            1,
            1,
            vec![vec![
                Term::new(c(1.0), None, vec![2]),
                Term::new(c(-1.0 - m), None, vec![0]),
                Term::new(c(1.0), Some(0), vec![0]),
            ]],
        )
        .unwrap();
        Homotopy::new(sys, vec![c(0.0)], vec![c(m)]).unwrap()
    }

    /// x − a − b·t as x − a − p with p: 0 → b.
    fn linear(a: f64, b: f64) -> Homotopy {
        let sys = ParametricSystem::new(
            1,
            1,
            vec![vec![
                Term::new(c(1.0), None, vec![1]),
                Term::new(c(-a), None, vec![0]),
                Term::new(c(-1.0), Some(0), vec![0]),
            ]],
        )
        .unwrap();
        Homotopy::new(sys, vec![c(0.0)], vec![c(b)]).unwrap()
    }

    #[test]
    fn step_update_scales_and_advances() {
        let cfg = TrackerConfig::default();
        let s = TrackState::new(vec![c(0.0)], &cfg);
        let s = step_update(s, true, Some(0.1), &cfg).unwrap();
        assert_eq!(s.t0, 0.1);
        assert!((s.dt - 0.3).abs() < 1e-15);
        assert!((s.t1 - 0.4).abs() < 1e-15);
        let s = step_update(s, false, None, &cfg).unwrap();
        assert!((s.dt - 0.1).abs() < 1e-15);
        assert_eq!(s.t0, 0.1);
        assert_eq!(s.step_log.len(), 2);
    }

    #[test]
    fn repeated_rejection_underflows() {
        let cfg = TrackerConfig::default();
        let mut s = TrackState::new(vec![c(0.0)], &cfg);
        let mut err = None;
        for _ in 0..100 {
            match step_update(s.clone(), false, None, &cfg) {
                Ok(next) => s = next,
                Err(e) => {
                    err = Some(e);
                    break;
                }
            }
        }
        assert!(matches!(err, Some(Error::StepUnderflow { .. })));
    }

    #[test]
    fn newton_finds_sqrt2() {
        let h = newton(1.0);
        let cfg = TrackerConfig::default();
        let (x, res) = newton_refine(&h, &[c(1.5)], 1.0 - 0.5, &cfg).unwrap();
        // at t = 0.5: x² = 1.5
        assert!((x[0].re - 1.5f64.sqrt()).abs() < 1e-14);
        assert!(res <= 1e-12);
        let (x, _) = newton_refine(&h, &[c(2f64.sqrt())], 0.0, &cfg).unwrap();
        assert_eq!(x[0], c(2f64.sqrt()));
    }

    #[test]
    fn euler_matches_closed_form() {
        let h = newton(10.0);
        let x = euler_predict(&h, &[c(11f64.sqrt())], 0.0, 0.02).unwrap();
        let expect = 11f64.sqrt() - 0.1 / 11f64.sqrt();
        assert!((x[0].re - expect).abs() < 1e-14);
        let h = linear(0.5, 2.0);
        let x = euler_predict(&h, &[c(0.5 + 2.0 * 0.3)], 0.3, 0.1).unwrap();
        assert!((x[0].re - (0.5 + 2.0 * 0.4)).abs() < 1e-14);
    }

    #[test]
    fn tracks_linear_path_both_modes() {
        let h = linear(0.0, 1.0);
        for mode in [TrackMode::Rect, TrackMode::Tilted] {
            let cfg = TrackerConfig::with_steps(mode, 0.1, 0.1);
            let out = track_path(&h, &[c(0.0)], &cfg).unwrap();
            assert!((out.final_point[0].re - 1.0).abs() < 1e-12, "{mode}");
            assert!(out.accepted() <= 20);
            let segs = &out.certificate.segments;
            assert_eq!(segs[0].t_lo, 0.0);
            assert_eq!(segs.last().unwrap().t_hi, 1.0);
        }
    }

    #[test]
    fn rejects_invalid_config() {
        let h = linear(0.0, 1.0);
        let cfg = TrackerConfig {
            lambda: 1.0,
            ..TrackerConfig::default()
        };
        assert!(matches!(track_path(&h, &[c(0.0)], &cfg), Err(Error::InvalidConfig(_))));
    }
}
