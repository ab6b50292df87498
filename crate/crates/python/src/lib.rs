//! Python bindings: interval arithmetic, homotopies, the parametric Krawczyk
//! test, certified tracking and certificate verification.

use krawczyk_core::benchmarks::lowrank::LowrankStart;
use krawczyk_core::benchmarks::newton::gen_newton_homotopy;
use krawczyk_core::benchmarks::{self, BenchmarkSpec, Family};
use krawczyk_core::interval::box_centered;
use krawczyk_core::tracker::{self, TrackMode, TrackerConfig};
use krawczyk_core::{certify, Error, PointMatrix, Term};
use num_complex::Complex64;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;

fn err(e: Error) -> PyErr {
    match e {
        Error::DivisionByIntervalContainingZero => PyZeroDivisionError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

/// Closed real interval with outward-rounded arithmetic.
#[pyclass(frozen, from_py_object)]
#[derive(Clone, Copy)]
struct RealInterval(krawczyk_core::RealInterval);

#[pymethods]
impl RealInterval {
    #[new]
    #[pyo3(signature = (lo, hi=None))]
    fn new(lo: f64, hi: Option<f64>) -> PyResult<Self> {
        krawczyk_core::RealInterval::new(lo, hi.unwrap_or(lo))
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn lo(&self) -> f64 {
        self.0.lo()
    }

    #[getter]
    fn hi(&self) -> f64 {
        self.0.hi()
    }

    fn width(&self) -> f64 {
        self.0.width()
    }

    fn mid(&self) -> f64 {
        self.0.mid()
    }

    fn contains(&self, x: f64) -> bool {
        self.0.contains(x)
    }

    fn __add__(&self, o: &Self) -> Self {
        Self(self.0 + o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        Self(self.0 - o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        Self(self.0 * o.0)
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0.checked_div(&o.0).map(Self).map_err(err)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        Self(self.0.powi(e))
    }

    fn __repr__(&self) -> String {
        format!("RealInterval({:?}, {:?})", self.0.lo(), self.0.hi())
    }
}

/// Rectangular complex interval.
#[pyclass(frozen, from_py_object)]
#[derive(Clone, Copy)]
struct ComplexInterval(krawczyk_core::ComplexInterval);

#[pymethods]
impl ComplexInterval {
    #[new]
    fn new(re: RealInterval, im: RealInterval) -> Self {
        Self(krawczyk_core::ComplexInterval::new(re.0, im.0))
    }

    /// Square of half-width `r` around `z`.
    #[staticmethod]
    fn centered(z: Complex64, r: f64) -> Self {
        Self(krawczyk_core::ComplexInterval::centered(z, r))
    }

    #[getter]
    fn re(&self) -> RealInterval {
        RealInterval(self.0.re)
    }

    #[getter]
    fn im(&self) -> RealInterval {
        RealInterval(self.0.im)
    }

    fn mid(&self) -> Complex64 {
        self.0.mid()
    }

    fn radius(&self) -> f64 {
        self.0.radius()
    }

    fn contains(&self, z: Complex64) -> bool {
        self.0.contains_point(z)
    }

    fn __add__(&self, o: &Self) -> Self {
        Self(self.0 + o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        Self(self.0 - o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        Self(self.0 * o.0)
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0.checked_div(&o.0).map(Self).map_err(err)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        Self(self.0.powi(e))
    }

    fn __repr__(&self) -> String {
        format!(
            "ComplexInterval({:?}, {:?})",
            RealInterval(self.0.re).__repr__(),
            RealInterval(self.0.im).__repr__()
        )
    }
}

/// Straight-line parameter homotopy `F(x; (1 − t)·p0 + t·p1)`.
///
/// Each equation is a list of terms `(coeff, param_index or None, exponents)`.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Homotopy(krawczyk_core::Homotopy);

#[pymethods]
impl Homotopy {
    #[new]
    fn new(
        n: usize,
        m: usize,
        equations: Vec<Vec<(Complex64, Option<usize>, Vec<u32>)>>,
        p0: Vec<Complex64>,
        p1: Vec<Complex64>,
    ) -> PyResult<Self> {
        let eqs = equations
            .into_iter()
            .map(|eq| eq.into_iter().map(|(c, p, e)| Term::new(c, p, e)).collect())
            .collect();
        let sys = krawczyk_core::ParametricSystem::new(n, m, eqs).map_err(err)?;
        krawczyk_core::Homotopy::new(sys, p0, p1).map(Self).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn eval(&self, x: Vec<Complex64>, t: f64) -> PyResult<Vec<Complex64>> {
        self.0.eval_point(&x, t).map_err(err)
    }

    fn jacobian(&self, x: Vec<Complex64>, t: f64) -> PyResult<Vec<Vec<Complex64>>> {
        let j = self.0.jac_x_point(&x, t).map_err(err)?;
        Ok((0..j.rows())
            .map(|r| (0..j.cols()).map(|c| j.get(r, c)).collect())
            .collect())
    }

    fn residual(&self, x: Vec<Complex64>, t: f64) -> PyResult<f64> {
        self.0.residual(&x, t).map_err(err)
    }
}

#[pyclass(frozen, get_all)]
struct KrawczykResult {
    existence: bool,
    uniqueness: bool,
    residual_norm: f64,
    passed: bool,
}

/// Parametric Krawczyk test on the box of radius `r` around `x` over `[t_lo, t_hi]`.
/// `y` defaults to the inverse Jacobian at `(x, t_lo)`.
#[pyfunction]
#[pyo3(signature = (h, x, r, t_lo, t_hi=None, y=None))]
fn krawczyk_test(
    h: &Homotopy,
    x: Vec<Complex64>,
    r: f64,
    t_lo: f64,
    t_hi: Option<f64>,
    y: Option<Vec<Vec<Complex64>>>,
) -> PyResult<KrawczykResult> {
    let n = x.len();
    let y = match y {
        Some(rows) => PointMatrix::new(n, n, rows.into_iter().flatten().collect()).map_err(err)?,
        None => {
            krawczyk_core::linalg::mid_inverse(&h.0.jac_x_point(&x, t_lo).map_err(err)?)
                .map_err(err)?
                .0
        }
    };
    let t = krawczyk_core::RealInterval::new(t_lo, t_hi.unwrap_or(t_lo)).map_err(err)?;
    let i = box_centered(&x, r).map_err(err)?;
    let v = krawczyk_core::krawczyk::parametric_krawczyk_test(&h.0, &x, &y, &i, t);
    Ok(KrawczykResult {
        existence: v.existence,
        uniqueness: v.uniqueness,
        residual_norm: v.residual_norm,
        passed: v.passed(),
    })
}

#[pyclass(frozen, get_all)]
struct TrackResult {
    final_point: Vec<Complex64>,
    final_residual: f64,
    iterations: usize,
    accepted: usize,
    rejected: usize,
    /// Certificate as JSON.
    certificate: String,
}

/// Track the path starting at `x0` from `t = 0` to `t = 1` and certify it.
#[pyfunction]
#[pyo3(signature = (h, x0, mode="tilted", dt0=0.1, r0=0.1, lam=3.0))]
fn track(h: &Homotopy, x0: Vec<Complex64>, mode: &str, dt0: f64, r0: f64, lam: f64) -> PyResult<TrackResult> {
    let mode: TrackMode = mode.parse().map_err(err)?;
    let cfg = TrackerConfig {
        lambda: lam,
        ..TrackerConfig::with_steps(mode, dt0, r0)
    };
    let res = tracker::track_path(&h.0, &x0, &cfg).map_err(err)?;
    Ok(TrackResult {
        iterations: res.iterations(),
        accepted: res.accepted(),
        rejected: res.rejected(),
        final_residual: res.final_residual,
        certificate: String::from_utf8(certify::serialize(&res.certificate)).expect("JSON is UTF-8"),
        final_point: res.final_point,
    })
}

/// Replay a certificate (JSON text). Returns whether every check passed.
#[pyfunction]
fn verify_certificate(json: &str) -> PyResult<bool> {
    let cert = certify::deserialize(json.as_bytes()).map_err(err)?;
    certify::verify(&cert).map(|r| r.passed()).map_err(err)
}

/// `x² − (1 + m − m·t)` style test homotopy and its start point.
#[pyfunction]
fn newton_homotopy(m: f64) -> PyResult<(Homotopy, Vec<Complex64>)> {
    let (h, s) = gen_newton_homotopy(m).map_err(err)?;
    Ok((Homotopy(h), s))
}

/// Run a benchmark family; returns `report.json` as text and writes all
/// outputs to `out` when given.
#[pyfunction]
#[pyo3(signature = (family, size, mode="tilted", dt0=0.1, r0=0.1, lam=3.0, seed=42, out=None))]
#[allow(clippy::too_many_arguments)]
fn run_benchmark(
    family: &str,
    size: f64,
    mode: &str,
    dt0: f64,
    r0: f64,
    lam: f64,
    seed: u64,
    out: Option<std::path::PathBuf>,
) -> PyResult<String> {
    let n = size as usize;
    let family = match family {
        "newton" => Family::Newton { m: size },
        "random" => Family::Random { k: n },
        "katsura" => Family::Katsura { n },
        "lowrank" => Family::Lowrank {
            n,
            start: LowrankStart::Random,
        },
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    };
    let mut spec = BenchmarkSpec::new(family, mode.parse().map_err(err)?, dt0, r0, seed);
    spec.cfg.lambda = lam;
    let run = benchmarks::run_benchmark(&spec).map_err(err)?;
    if let Some(dir) = out {
        benchmarks::write_outputs(&run, &dir).map_err(err)?;
    }
    serde_json::to_string_pretty(&run.report).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pymodule]
fn krawczyk(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<RealInterval>()?;
    m.add_class::<ComplexInterval>()?;
    m.add_class::<Homotopy>()?;
    m.add_class::<KrawczykResult>()?;
    m.add_class::<TrackResult>()?;
    m.add_function(wrap_pyfunction!(krawczyk_test, m)?)?;
    m.add_function(wrap_pyfunction!(track, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(newton_homotopy, m)?)?;
    m.add_function(wrap_pyfunction!(run_benchmark, m)?)?;
    Ok(())
}
