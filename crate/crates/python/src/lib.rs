//! Python bindings: empirical distributions, region calibration, the
//! four-way decision rule, the SMO-trained SVM and selective metrics.

use abstain::datasets::{self, ScoreMixtureSpec, SpiralSpec};
use abstain::metrics;
use abstain::svm::{self, KernelParams, SmoSettings};
use abstain::testing::{CalibratedTester, Decision, TestConfig};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn decision_from_str(s: &str) -> PyResult<Decision> {
    match s {
        "class1" => Ok(Decision::Class1),
        "class2" => Ok(Decision::Class2),
        "uncertain_overlap" => Ok(Decision::UncertainOverlap),
        "uncertain_outlier" => Ok(Decision::UncertainOutlier),
        other => Err(value_err(format!("unknown decision {other:?}"))),
    }
}

#[pyclass(name = "EmpiricalDistribution")]
struct PyEmpiricalDistribution {
    inner: abstain::EmpiricalDistribution,
}

#[pymethods]
impl PyEmpiricalDistribution {
    #[new]
    #[pyo3(signature = (values, min_count = 1))]
    fn new(values: Vec<f64>, min_count: usize) -> PyResult<Self> {
        Ok(Self {
            inner: abstain::EmpiricalDistribution::from_samples(&values, min_count)
                .map_err(value_err)?,
        })
    }

    fn quantile(&self, p: f64) -> PyResult<f64> {
        self.inner.quantile(p).map_err(value_err)
    }

    fn ecdf(&self, t: f64) -> PyResult<f64> {
        self.inner.ecdf(t).map_err(value_err)
    }

    fn histogram(&self, bins: usize) -> PyResult<Vec<(f64, f64, usize)>> {
        self.inner.histogram(bins).map_err(value_err)
    }

    #[getter]
    fn count(&self) -> usize {
        self.inner.count()
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }
}

#[pyclass(name = "CalibratedTester")]
struct PyCalibratedTester {
    inner: CalibratedTester,
}

#[pymethods]
impl PyCalibratedTester {
    /// Calibrates acceptance regions from two per-class score samples.
    /// Pass either a common `alpha` or all four explicit quantile points.
    #[staticmethod]
    #[pyo3(signature = (scores1, scores2, alpha = None, points = None, min_count = 20))]
    fn calibrate(
        scores1: Vec<f64>,
        scores2: Vec<f64>,
        alpha: Option<f64>,
        points: Option<(f64, f64, f64, f64)>,
        min_count: usize,
    ) -> PyResult<Self> {
        let config = match (alpha, points) {
            (Some(a), None) => TestConfig::symmetric(a).map_err(value_err)?,
            (None, Some((q1_lo, q1_hi, q2_lo, q2_hi))) => {
                TestConfig::new(q1_lo, q1_hi, q2_lo, q2_hi).map_err(value_err)?
            }
            _ => return Err(value_err("pass exactly one of alpha= or points=")),
        };
        let d1 = abstain::EmpiricalDistribution::from_samples(&scores1, min_count)
            .map_err(value_err)?;
        let d2 = abstain::EmpiricalDistribution::from_samples(&scores2, min_count)
            .map_err(value_err)?;
        Ok(Self {
            inner: CalibratedTester::calibrate(&d1, &d2, config).map_err(value_err)?,
        })
    }

    fn decide(&self, t: f64) -> PyResult<String> {
        Ok(self.inner.decide(t).map_err(value_err)?.as_str().to_string())
    }

    fn decide_batch(&self, ts: Vec<f64>) -> PyResult<Vec<String>> {
        Ok(self
            .inner
            .decide_batch(&ts)
            .map_err(value_err)?
            .into_iter()
            .map(|d| d.as_str().to_string())
            .collect())
    }

    #[getter]
    fn region1(&self) -> (f64, f64) {
        (self.inner.region1.lower, self.inner.region1.upper)
    }

    #[getter]
    fn region2(&self) -> (f64, f64) {
        (self.inner.region2.lower, self.inner.region2.upper)
    }
}

#[pyclass(name = "SvmModel")]
struct PySvmModel {
    inner: abstain::SvmModel,
}

#[pymethods]
impl PySvmModel {
    #[staticmethod]
    #[pyo3(signature = (points, labels, gamma = 8.0, c = 1.0, tol = 1e-3, max_passes = 10_000, seed = 0))]
    fn train(
        points: Vec<(f64, f64)>,
        labels: Vec<f64>,
        gamma: f64,
        c: f64,
        tol: f64,
        max_passes: usize,
        seed: u64,
    ) -> PyResult<Self> {
        let pts: Vec<[f64; 2]> = points.iter().map(|&(x, y)| [x, y]).collect();
        let kernel = KernelParams::new(gamma).map_err(value_err)?;
        let settings = SmoSettings {
            c,
            tolerance: tol,
            max_passes,
            seed,
        };
        Ok(Self {
            inner: svm::train(&pts, &labels, kernel, settings).map_err(value_err)?,
        })
    }

    fn decision_function(&self, x: f64, y: f64) -> PyResult<f64> {
        self.inner.decision_function([x, y]).map_err(value_err)
    }

    fn decision_grid(
        &self,
        x_range: (f64, f64),
        y_range: (f64, f64),
        resolution: usize,
    ) -> PyResult<Vec<f64>> {
        Ok(self
            .inner
            .decision_grid(x_range, y_range, resolution)
            .map_err(value_err)?
            .values)
    }

    #[getter]
    fn converged(&self) -> bool {
        self.inner.converged
    }

    #[getter]
    fn n_support_vectors(&self) -> usize {
        self.inner.support_vectors.len()
    }

    #[getter]
    fn bias(&self) -> f64 {
        self.inner.bias
    }
}

/// Selective-classification metrics over decision strings; ratios with an
/// empty denominator come back as None.
#[pyfunction]
#[pyo3(signature = (decisions, truths, positive_class = 1))]
fn evaluate<'py>(
    py: Python<'py>,
    decisions: Vec<String>,
    truths: Vec<u8>,
    positive_class: u8,
) -> PyResult<Bound<'py, PyDict>> {
    let parsed: Vec<Decision> = decisions
        .iter()
        .map(|s| decision_from_str(s))
        .collect::<PyResult<_>>()?;
    let r = metrics::evaluate(&parsed, &truths, positive_class).map_err(value_err)?;
    let out = PyDict::new(py);
    out.set_item("total", r.total)?;
    out.set_item("abstained", r.abstained)?;
    out.set_item("abstained_overlap", r.abstained_overlap)?;
    out.set_item("abstained_outlier", r.abstained_outlier)?;
    out.set_item("tp", r.tp)?;
    out.set_item("fp", r.fp)?;
    out.set_item("tn", r.tn)?;
    out.set_item("fn", r.fn_)?;
    out.set_item("coverage", r.coverage)?;
    out.set_item("accuracy", r.accuracy)?;
    out.set_item("recall", r.recall)?;
    out.set_item("precision", r.precision)?;
    out.set_item("specificity", r.specificity)?;
    out.set_item("f1", r.f1)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (n_per_class = 200, turns = 1.75, noise_sigma = 0.05, radius_scale = 1.0, seed = 0))]
fn generate_spiral(
    n_per_class: usize,
    turns: f64,
    noise_sigma: f64,
    radius_scale: f64,
    seed: u64,
) -> PyResult<(Vec<(f64, f64)>, Vec<f64>)> {
    let spec = SpiralSpec::new(n_per_class, turns, noise_sigma, radius_scale, seed)
        .map_err(value_err)?;
    let (points, labels) = datasets::generate_spiral(&spec);
    Ok((points.iter().map(|p| (p[0], p[1])).collect(), labels))
}

#[pyfunction]
#[pyo3(signature = (mean1, mean2, sigma1, sigma2, n1, n2, outlier_fraction = 0.0, outlier_shift = 0.0, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn generate_scores(
    mean1: f64,
    mean2: f64,
    sigma1: f64,
    sigma2: f64,
    n1: usize,
    n2: usize,
    outlier_fraction: f64,
    outlier_shift: f64,
    seed: u64,
) -> PyResult<(Vec<f64>, Vec<u8>)> {
    let spec = ScoreMixtureSpec::new(
        mean1,
        mean2,
        sigma1,
        sigma2,
        n1,
        n2,
        outlier_fraction,
        outlier_shift,
        seed,
    )
    .map_err(value_err)?;
    Ok(datasets::generate_scores(&spec))
}

#[pymodule]
fn abstain_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEmpiricalDistribution>()?;
    m.add_class::<PyCalibratedTester>()?;
    m.add_class::<PySvmModel>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(generate_spiral, m)?)?;
    m.add_function(wrap_pyfunction!(generate_scores, m)?)?;
    Ok(())
}
