//! Path certificates and an independent verifier.
//!
//! A certificate is a chain of segments. Segment `i` claims that its box,
//! translated along its shear line `s(t)` (if any), contains exactly one
//! solution of `H(·, t)` for every `t ∈ [t_lo, t_hi]`. The verifier re-runs
//! every Krawczyk test from the stored data and additionally checks:
//!
//! * the segments tile `[0, 1]` with bitwise-equal shared endpoints;
//! * hand-off: a tight enclosure of segment `i`'s solution at `t_hi` lies
//!   inside segment `i+1`'s region at the same time, so both segments
//!   certify the same solution;
//! * the final point lies in the last region at `t = 1` and its residual
//!   under `H(·, 1)` matches the stated value.

use crate::error::{check_dim, Error, Result};
use crate::interval::{IntervalBox, RealInterval};
use crate::krawczyk::{parametric_krawczyk_test, tighten_enclosure};
use crate::linalg::PointMatrix;
use crate::serial::{complex_vec, f64_str, opt_complex_vec};
use crate::system::{Homotopy, ParametricSystem};
use crate::tracker::TrackMode;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Krawczyk rounds used to tighten a segment's endpoint enclosure.
pub const HANDOFF_ROUNDS: usize = 8;

/// Relative tolerance when comparing recomputed and recorded residual norms.
pub const RESIDUAL_MATCH_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "f64_str")]
    pub t_lo: f64,
    #[serde(with = "f64_str")]
    pub t_hi: f64,
    /// `I` in segment coordinates (centered at `center`).
    #[serde(rename = "box")]
    pub region: IntervalBox,
    pub y: PointMatrix,
    /// The Krawczyk center `x`: the refined point in rect mode, zero in tilted mode.
    #[serde(with = "complex_vec")]
    pub center: Vec<Complex64>,
    #[serde(with = "opt_complex_vec")]
    pub shear_x0: Option<Vec<Complex64>>,
    #[serde(with = "opt_complex_vec")]
    pub shear_x1: Option<Vec<Complex64>>,
    #[serde(with = "f64_str")]
    pub recorded_residual_norm: f64,
}

impl Segment {
    pub fn time(&self) -> Result<RealInterval> {
        if !(self.t_lo < self.t_hi) {
            return Err(Error::MalformedCertificate(format!(
                "segment time interval [{}, {}] is empty or degenerate",
                self.t_lo, self.t_hi
            )));
        }
        RealInterval::new(self.t_lo, self.t_hi)
    }

    /// The homotopy this segment was tested against.
    pub fn homotopy(&self, base: &Homotopy) -> Result<Homotopy> {
        match (&self.shear_x0, &self.shear_x1) {
            (Some(a), Some(b)) => base.apply_shear(a, b, self.t_lo, self.t_hi),
            (None, None) => Ok(base.unsheared()),
            _ => Err(Error::MalformedCertificate("shear needs both endpoints".into())),
        }
    }

    fn check_shape(&self, n: usize) -> Result<()> {
        check_dim(n, self.region.dim())?;
        check_dim(n, self.center.len())?;
        check_dim(n, self.y.rows())?;
        check_dim(n, self.y.cols())?;
        for s in [&self.shear_x0, &self.shear_x1].into_iter().flatten() {
            check_dim(n, s.len())?;
        }
        if !self.region.is_finite() {
            return Err(Error::MalformedCertificate("non-finite box".into()));
        }
        Ok(())
    }
}

/// Absolute-coordinate enclosure of `box` at time `t` for a segment homotopy.
pub fn to_absolute(h: &Homotopy, b: &IntervalBox, t: f64) -> Result<IntervalBox> {
    match h.shear() {
        Some(s) => b.add_box(&s.enclose(RealInterval::point(t))?),
        None => Ok(b.clone()),
    }
}

/// Tight absolute enclosure of the segment's solution at `t_hi`.
pub fn endpoint_enclosure(h_seg: &Homotopy, seg: &Segment) -> Result<IntervalBox> {
    let e = tighten_enclosure(h_seg, &seg.region, seg.t_hi, &seg.y, HANDOFF_ROUNDS);
    to_absolute(h_seg, &e, seg.t_hi)
}

/// Whether an absolute enclosure at `next.t_lo` lies inside `next`'s region.
pub fn handoff_holds(h_next: &Homotopy, next: &Segment, prev_end: &IntervalBox) -> Result<bool> {
    let rel = match h_next.shear() {
        Some(s) => prev_end.sub_box(&s.enclose(RealInterval::point(next.t_lo))?)?,
        None => prev_end.clone(),
    };
    next.region.contains(&rel)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathCertificate {
    pub system: ParametricSystem,
    #[serde(with = "complex_vec")]
    pub p0: Vec<Complex64>,
    #[serde(with = "complex_vec")]
    pub p1: Vec<Complex64>,
    pub mode: TrackMode,
    pub segments: Vec<Segment>,
    #[serde(with = "complex_vec")]
    pub final_point: Vec<Complex64>,
    #[serde(with = "f64_str")]
    pub final_residual: f64,
}

impl PathCertificate {
    pub fn base_homotopy(&self) -> Result<Homotopy> {
        Homotopy::new(self.system.clone(), self.p0.clone(), self.p1.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentCheck {
    pub index: usize,
    pub existence: bool,
    pub uniqueness: bool,
    pub residual_norm: f64,
    pub residual_matches: bool,
    /// Hand-off into the next segment; `None` for the last one.
    pub handoff: Option<bool>,
    pub error: Option<String>,
}

impl SegmentCheck {
    pub fn passed(&self) -> bool {
        self.existence
            && self.uniqueness
            && self.residual_matches
            && self.handoff != Some(false)
            && self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub segments: Vec<SegmentCheck>,
    pub chain_issues: Vec<String>,
    pub final_residual_ok: bool,
    pub final_in_region: bool,
    /// Enclosure of the certified solution at `t = 1`.
    pub endpoint_enclosure: Option<IntervalBox>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.chain_issues.is_empty()
            && self.final_residual_ok
            && self.final_in_region
            && self.segments.iter().all(SegmentCheck::passed)
    }

    pub fn failed_segments(&self) -> Vec<usize> {
        self.segments.iter().filter(|s| !s.passed()).map(|s| s.index).collect()
    }
}

fn chain_issues(segs: &[Segment]) -> Vec<String> {
    let mut issues = Vec::new();
    if segs[0].t_lo != 0.0 {
        issues.push(format!("first segment starts at t = {}", segs[0].t_lo));
    }
    let last = segs[segs.len() - 1].t_hi;
    if last != 1.0 {
        issues.push(format!("last segment ends at t = {last}"));
    }
    for (i, w) in segs.windows(2).enumerate() {
        if w[0].t_hi.to_bits() != w[1].t_lo.to_bits() {
            issues.push(format!(
                "gap between segments {i} and {}: {} vs {}",
                i + 1,
                w[0].t_hi,
                w[1].t_lo
            ));
        }
    }
    issues
}

/// Replay every test recorded in `cert`.
pub fn verify(cert: &PathCertificate) -> Result<VerificationReport> {
    let n = cert.system.n();
    if cert.segments.is_empty() {
        return Err(Error::MalformedCertificate("certificate has no segments".into()));
    }
    check_dim(n, cert.final_point.len())?;
    for s in &cert.segments {
        s.check_shape(n)?;
        s.time()?;
    }
    let base = cert.base_homotopy()?;
    let homotopies: Vec<Result<Homotopy>> = cert.segments.par_iter().map(|s| s.homotopy(&base)).collect();

    let tests: Vec<(SegmentCheck, Option<IntervalBox>)> = cert
        .segments
        .par_iter()
        .zip(&homotopies)
        .enumerate()
        .map(|(index, (seg, h))| {
            let mut check = SegmentCheck {
                index,
                existence: false,
                uniqueness: false,
                residual_norm: f64::INFINITY,
                residual_matches: false,
                handoff: None,
                error: None,
            };
            let h = match h {
                Ok(h) => h,
                Err(e) => {
                    check.error = Some(e.to_string());
                    return (check, None);
                }
            };
            let t = RealInterval::new(seg.t_lo, seg.t_hi).expect("validated above");
            let v = parametric_krawczyk_test(h, &seg.center, &seg.y, &seg.region, t);
            check.existence = v.existence;
            check.uniqueness = v.uniqueness;
            check.residual_norm = v.residual_norm;
            let rec = seg.recorded_residual_norm;
            check.residual_matches = (v.residual_norm - rec).abs() <= RESIDUAL_MATCH_TOL * rec.abs().max(1.0);
            check.error = v.error.map(|e| e.to_string());
            let end = if v.existence && v.uniqueness {
                match endpoint_enclosure(h, seg) {
                    Ok(e) => Some(e),
                    Err(e) => {
                        check.error = Some(e.to_string());
                        None
                    }
                }
            } else {
                None
            };
            (check, end)
        })
        .collect();

    let mut segments = Vec::with_capacity(tests.len());
    let mut ends = Vec::with_capacity(tests.len());
    for (c, e) in tests {
        segments.push(c);
        ends.push(e);
    }
    let k = cert.segments.len();
    for i in 0..k - 1 {
        let ok = match (&ends[i], &homotopies[i + 1]) {
            (Some(end), Ok(h_next)) => handoff_holds(h_next, &cert.segments[i + 1], end).unwrap_or(false),
            _ => false,
        };
        segments[i].handoff = Some(ok);
    }

    let residual = base.residual(&cert.final_point, 1.0)?;
    let final_residual_ok = residual <= cert.final_residual;
    let last = &cert.segments[k - 1];
    let final_in_region = match &homotopies[k - 1] {
        Ok(h) => to_absolute(h, &last.region, 1.0)
            .and_then(|r| r.contains_point(&cert.final_point))
            .unwrap_or(false),
        Err(_) => false,
    };

    Ok(VerificationReport {
        segments,
        chain_issues: chain_issues(&cert.segments),
        final_residual_ok,
        final_in_region,
        endpoint_enclosure: if last.t_hi == 1.0 { ends[k - 1].clone() } else { None },
    })
}

pub fn serialize(cert: &PathCertificate) -> Vec<u8> {
    serde_json::to_vec_pretty(cert).expect("certificate serialization cannot fail")
}

pub fn deserialize(bytes: &[u8]) -> Result<PathCertificate> {
    Ok(serde_json::from_slice(bytes)?)
}
