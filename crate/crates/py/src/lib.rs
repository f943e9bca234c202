//! Python bindings: `System` and `Product` wrap the core specs; clouds and
//! samples cross the boundary as lists of coordinate lists.

use isss::boxcount::fit_dimension;
use isss::cli::config::{emit, emit_product, parse_str, Config};
use isss::codespace::{stopping_set, word_ratio};
use isss::construct::{attractor_cloud, continuity_report, isss_cloud, orbit_cloud, sss_cloud, SystemSpec};
use isss::dimension::{dim_limit, spectral_dim};
use isss::geometry::PointCloud;
use isss::product::{attractor_product_gap, chaos_game, product_measure_check, product_system, ProductSpec};
use isss::IsssError;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(isss_py, Error, PyException, "Raised for invalid systems and failed computations.");

fn err(e: IsssError) -> PyErr {
    Error::new_err(e.to_string())
}

fn coords(cloud: &PointCloud) -> Vec<Vec<f64>> {
    cloud.points().iter().map(|p| p.coords().to_vec()).collect()
}

#[pyclass(name = "System", module = "isss_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySystem {
    spec: SystemSpec,
}

#[pymethods]
impl PySystem {
    /// Parse a JSON system description; product descriptions give their
    /// combined system.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec = match parse_str(text).map_err(err)? {
            Config::System(s) => s,
            Config::Product(p) => p.combined,
        };
        Ok(Self { spec })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| err(e.into()))?;
        Self::from_json(&text)
    }

    fn to_json(&self) -> PyResult<String> {
        emit(&self.spec).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.spec.dim()
    }

    #[getter]
    fn ratios(&self) -> Vec<f64> {
        self.spec.ratios().as_slice().to_vec()
    }

    #[getter]
    fn is_full_shift(&self) -> bool {
        self.spec.codespace.is_full_shift()
    }

    #[pyo3(signature = (tol = 1e-9))]
    fn spectral_dim(&self, tol: f64) -> PyResult<f64> {
        spectral_dim(&self.spec.codespace, &self.spec.ratios(), tol).map_err(err)
    }

    /// `[(k, s_k)]` for `k = 1..=kmax`.
    #[pyo3(signature = (kmax = 10, tol = 1e-9))]
    fn moran_sequence(&self, kmax: usize, tol: f64) -> PyResult<Vec<(usize, f64)>> {
        Ok(dim_limit(&self.spec.codespace, &self.spec.ratios(), kmax, tol).map_err(err)?.s_values)
    }

    /// `[(k, s_k, max(s_k, dim C))]`.
    #[pyo3(signature = (kmax = 10, tol = 1e-9))]
    fn continuity(&self, kmax: usize, tol: f64) -> PyResult<Vec<(usize, f64, f64)>> {
        Ok(continuity_report(&self.spec, kmax, tol).map_err(err)?.rows)
    }

    /// Stopping words as 1-based strings with their ratios.
    fn stopping_set(&self, delta: f64) -> PyResult<Vec<(String, f64)>> {
        let r = self.spec.ratios();
        let words = stopping_set(&self.spec.codespace, &r, delta).map_err(err)?;
        Ok(words.iter().map(|w| (w.to_string(), word_ratio(&r, w))).collect())
    }

    /// One of "attractor", "sss", "orbit", "isss".
    #[pyo3(signature = (resolution, kind = "isss"))]
    fn cloud(&self, resolution: f64, kind: &str) -> PyResult<Vec<Vec<f64>>> {
        let c = match kind {
            "attractor" => attractor_cloud(&self.spec, resolution),
            "sss" => sss_cloud(&self.spec, resolution),
            "orbit" => orbit_cloud(&self.spec, resolution),
            "isss" => isss_cloud(&self.spec, resolution),
            other => return Err(Error::new_err(format!("unknown cloud kind {other:?}"))),
        };
        Ok(coords(&c.map_err(err)?))
    }

    /// Box-count slope of the ISSS cloud over `deltas`, with the counts.
    fn box_dimension(&self, deltas: Vec<f64>, resolution: f64) -> PyResult<(f64, Vec<(f64, usize)>)> {
        let cloud = isss_cloud(&self.spec, resolution).map_err(err)?;
        let scan = fit_dimension(&cloud, &self.spec.ambient, &deltas).map_err(err)?;
        Ok((scan.fitted_slope, scan.rows))
    }

    /// `[(check, passed, worst_gap, tolerance)]` as reported by `isss verify`.
    #[pyo3(signature = (resolution = 1e-3))]
    fn verify(&self, resolution: f64) -> PyResult<Vec<(String, bool, f64, f64)>> {
        isss::cli::verification_rows(&self.spec, resolution).map_err(err)
    }

    #[pyo3(signature = (n, burn = 1000, seed = 0))]
    fn chaos_game(&self, py: Python<'_>, n: usize, burn: usize, seed: u64) -> PyResult<Vec<Vec<f64>>> {
        let spec = self.spec.clone();
        let sample = py.detach(move || chaos_game(&spec, n, burn, seed)).map_err(err)?;
        Ok(sample.points.iter().map(|p| p.coords().to_vec()).collect())
    }

    fn __repr__(&self) -> String {
        format!("System(dim={}, maps={}, full_shift={})", self.spec.dim(), self.spec.maps.len(), self.spec.codespace.is_full_shift())
    }
}

#[pyclass(name = "Product", module = "isss_py", frozen)]
struct PyProduct {
    spec: ProductSpec,
}

#[pymethods]
impl PyProduct {
    #[new]
    fn new(left: &PySystem, right: &PySystem) -> PyResult<Self> {
        Ok(Self { spec: product_system(&left.spec, &right.spec).map_err(err)? })
    }

    #[getter]
    fn combined(&self) -> PySystem {
        PySystem { spec: self.spec.combined.clone() }
    }

    #[getter]
    fn condensation_weight(&self) -> Option<f64> {
        self.spec.condensation_weight
    }

    fn to_json(&self) -> PyResult<String> {
        emit_product(&self.spec).map_err(err)
    }

    fn attractor_gap(&self, resolution: f64) -> PyResult<f64> {
        attractor_product_gap(&self.spec, resolution).map_err(err)
    }

    /// Largest z-score between the independent-pair and decomposition
    /// samplers over the mixed moments up to `max_order`.
    #[pyo3(signature = (n, seed = 0, max_order = 2))]
    fn measure_check(&self, py: Python<'_>, n: usize, seed: u64, max_order: u32) -> PyResult<f64> {
        let spec = &self.spec;
        Ok(py.detach(|| product_measure_check(spec, n, seed, max_order)).map_err(err)?.max_z)
    }
}

#[pymodule]
fn isss_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySystem>()?;
    m.add_class::<PyProduct>()?;
    m.add("Error", m.py().get_type::<Error>())?;
    Ok(())
}
