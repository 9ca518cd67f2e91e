//! Python bindings. Structured results come back as plain dicts and lists
//! (decoded from the same JSON the CLI emits); errors raise `TropvbError`
//! with `(code, message, witness)` arguments.

use std::sync::Arc;

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use ::tropvb::klyachko::{
    check_family, family_to_cocycle, space_iso, space_to_matroid_bundle, space_to_tuple, split_cocycle,
    tuple_to_space, DeltaKlyachkoSpace, FanAtlas, KlyachkoFamily, LineCocycle, RankNCocycle,
};
use ::tropvb::linear::{decompose_invertible, sn_convolve, Matrix, Permutation, SnSelection};
use ::tropvb::picard::{equivariant_picard, picard as picard_report, psi_kernel as kernel_of};
use ::tropvb::semiring::{Boolean, Tropical};
use ::tropvb::toric::{self as toric, corpus};
use ::tropvb::Error;

create_exception!(tropvb, TropvbError, PyException);

fn raise(e: impl Into<Error>) -> PyErr {
    let e = e.into();
    TropvbError::new_err((e.code(), e.to_string(), e.witness().to_string()))
}

fn to_py<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "Fan", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFan {
    atlas: Arc<FanAtlas>,
}

#[pymethods]
impl PyFan {
    /// Validates on construction.
    #[new]
    fn new(rank: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> PyResult<Self> {
        let atlas = FanAtlas::new(toric::Fan::new(rank, rays, cones)).map_err(raise)?;
        Ok(PyFan { atlas })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let fan: toric::Fan = from_json(text)?;
        Ok(PyFan {
            atlas: FanAtlas::new(fan).map_err(raise)?,
        })
    }

    /// One of `a2`, `p1`, `p2`, `p1xp1`, `f1`, `single_ray`, `singular_cone`.
    #[staticmethod]
    fn corpus(name: &str) -> PyResult<Self> {
        let fan = corpus::by_name(name).ok_or_else(|| PyValueError::new_err(format!("unknown fan {name:?}")))?;
        Ok(PyFan {
            atlas: FanAtlas::new(fan).map_err(raise)?,
        })
    }

    fn to_json(&self) -> String {
        self.atlas.fan().to_json()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.atlas.rank()
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.atlas.fan().rays.clone()
    }

    #[getter]
    fn cones(&self) -> Vec<Vec<usize>> {
        self.atlas.fan().cones.clone()
    }

    fn maximal_cones(&self) -> Vec<usize> {
        self.atlas.maximal().to_vec()
    }

    fn is_smooth(&self) -> bool {
        self.atlas.fan().is_smooth()
    }

    fn __repr__(&self) -> String {
        format!("Fan(rank={}, rays={}, cones={})", self.atlas.rank(), self.atlas.num_rays(), self.atlas.num_cones())
    }
}

#[pyclass(name = "Cone", frozen)]
struct PyCone {
    inner: toric::Cone,
}

#[pymethods]
impl PyCone {
    #[new]
    fn new(rank: usize, rays: Vec<Vec<i64>>) -> PyResult<Self> {
        Ok(PyCone {
            inner: toric::Cone::new(rank, rays).map_err(raise)?,
        })
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.inner.rays().to_vec()
    }

    fn dual(&self) -> PyResult<Self> {
        Ok(PyCone {
            inner: toric::dual_cone(&self.inner).map_err(raise)?,
        })
    }

    fn contains(&self, v: Vec<i64>) -> bool {
        self.inner.contains(&v)
    }

    fn faces(&self) -> PyResult<Vec<Vec<Vec<i64>>>> {
        let f = self.inner.faces().map_err(raise)?;
        Ok(f.iter().map(|c| c.rays().to_vec()).collect())
    }

    fn orbit_primes<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &toric::orbit_cone_primes(&self.inner).map_err(raise)?)
    }

    fn perp_lattice(&self) -> Vec<Vec<i64>> {
        self.inner.perp_lattice()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Cone({:?})", self.inner.rays())
    }
}

#[pyclass(name = "Family", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFamily {
    inner: KlyachkoFamily,
}

#[pymethods]
impl PyFamily {
    /// Representatives indexed by cone; validated.
    #[new]
    fn new(fan: &PyFan, reps: Vec<Vec<i64>>) -> PyResult<Self> {
        Ok(PyFamily {
            inner: KlyachkoFamily::from_vec(fan.atlas.clone(), reps).map_err(raise)?,
        })
    }

    #[staticmethod]
    fn from_ray_values(fan: &PyFan, values: Vec<i64>) -> PyResult<Self> {
        Ok(PyFamily {
            inner: KlyachkoFamily::from_ray_values(fan.atlas.clone(), &values).map_err(raise)?,
        })
    }

    #[staticmethod]
    fn from_character(fan: &PyFan, x: Vec<i64>) -> Self {
        PyFamily {
            inner: KlyachkoFamily::from_character(fan.atlas.clone(), &x),
        }
    }

    #[getter]
    fn reps(&self) -> Vec<Vec<i64>> {
        self.inner.reps().to_vec()
    }

    fn ray_values(&self) -> Vec<i64> {
        self.inner.ray_values()
    }

    fn is_trivial(&self) -> bool {
        self.inner.is_trivial()
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        Ok(PyFamily {
            inner: self.inner.mul(&other.inner).map_err(raise)?,
        })
    }

    fn inv(&self) -> Self {
        PyFamily { inner: self.inner.inv() }
    }

    /// Line cocycle on the maximal cones as a dict.
    #[pyo3(signature = (semiring = "tropical"))]
    fn to_cocycle<'py>(&self, py: Python<'py>, semiring: &str) -> PyResult<Bound<'py, PyAny>> {
        match semiring {
            "tropical" => to_py(py, &family_to_cocycle::<Tropical>(&self.inner)),
            "boolean" => to_py(py, &family_to_cocycle::<Boolean>(&self.inner)),
            other => Err(PyValueError::new_err(format!("unknown semiring {other:?}"))),
        }
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Family({:?})", self.inner.reps())
    }
}

#[pyclass(name = "Space", frozen)]
struct PySpace {
    inner: DeltaKlyachkoSpace,
}

#[pymethods]
impl PySpace {
    #[new]
    fn new(fan: &PyFan, rank: usize, jumps: Vec<Vec<i64>>) -> PyResult<Self> {
        Ok(PySpace {
            inner: DeltaKlyachkoSpace::new(fan.atlas.clone(), rank, jumps).map_err(raise)?,
        })
    }

    #[staticmethod]
    fn from_tuple(families: Vec<PyRef<'_, PyFamily>>) -> PyResult<Self> {
        let t: Vec<KlyachkoFamily> = families.iter().map(|f| f.inner.clone()).collect();
        Ok(PySpace {
            inner: tuple_to_space(&t).map_err(raise)?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn jumps(&self) -> Vec<Vec<i64>> {
        self.inner.jumps().to_vec()
    }

    fn to_tuple(&self) -> PyResult<Vec<PyFamily>> {
        let t = space_to_tuple(&self.inner).map_err(raise)?;
        Ok(t.into_iter().map(|inner| PyFamily { inner }).collect())
    }

    fn is_isomorphic(&self, other: &Self) -> PyResult<bool> {
        space_iso(&self.inner, &other.inner).map_err(raise)
    }

    fn filtration(&self, ray: usize, i: i64) -> Vec<usize> {
        self.inner.filtration(ray, i)
    }

    fn matroid<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &space_to_matroid_bundle(&self.inner))
    }
}

#[pyfunction]
fn validate_fan(text: &str) -> PyResult<()> {
    let fan: toric::Fan = from_json(text)?;
    toric::validate_fan(&fan).map_err(|v| raise(toric::ToricError::InvalidFan(v)))
}

#[pyfunction]
fn picard<'py>(py: Python<'py>, fan: &PyFan) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &picard_report(&fan.atlas).map_err(raise)?)
}

#[pyfunction]
fn picard_equivariant<'py>(py: Python<'py>, fan: &PyFan) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &equivariant_picard(&fan.atlas))
}

#[pyfunction]
fn psi_kernel(fan: &PyFan) -> Vec<Vec<i64>> {
    kernel_of(fan.atlas.fan()).basis
}

/// Class in `Pic` of the family, in the report's coordinates.
#[pyfunction]
fn forget(family: &PyFamily) -> PyResult<Vec<i64>> {
    let r = picard_report(family.inner.atlas()).map_err(raise)?;
    r.forget(&family.inner).map_err(raise)
}

#[pyfunction]
fn klyachko_check<'py>(py: Python<'py>, fan: &PyFan, reps: Vec<Vec<i64>>) -> PyResult<Bound<'py, PyAny>> {
    let map = reps.into_iter().enumerate().collect();
    to_py(py, &check_family(&fan.atlas, &map).map_err(raise)?)
}

/// Splits a rank-n tropical cocycle given as JSON; returns the classes of
/// the summands in `Pic`.
#[pyfunction]
#[pyo3(signature = (text, anchor = None))]
fn split_classes(text: &str, anchor: Option<usize>) -> PyResult<Vec<Vec<i64>>> {
    let v: serde_json::Value = from_json(text)?;
    let fan: toric::Fan = serde_json::from_value(v["fan"].clone()).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let atlas = FanAtlas::new(fan).map_err(raise)?;
    let c: RankNCocycle<Tropical> = RankNCocycle::from_json(atlas.clone(), &v).map_err(raise)?;
    let parts = split_cocycle(&c, anchor).map_err(raise)?;
    let r = picard_report(&atlas).map_err(raise)?;
    parts.iter().map(|l| r.classify(l).map(|k| k.class).map_err(raise)).collect()
}

/// Block-diagonal tropical cocycle of the given families, as JSON.
#[pyfunction]
fn direct_sum_json(families: Vec<PyRef<'_, PyFamily>>) -> PyResult<String> {
    let lines: Vec<LineCocycle<Tropical>> = families.iter().map(|f| family_to_cocycle(&f.inner)).collect();
    let c = RankNCocycle::direct_sum(&lines).map_err(raise)?;
    serde_json::to_string(&c).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Entries are `"p/q"` or `"-inf"` strings for tropical, 0/1 for boolean.
/// Returns `(permutation, diagonal)`.
#[pyfunction]
#[pyo3(signature = (rows, semiring = "tropical"))]
fn gl_decompose(rows: Vec<Vec<String>>, semiring: &str) -> PyResult<(Vec<usize>, Vec<String>)> {
    fn go<S: ::tropvb::semiring::Semiring + std::str::FromStr>(rows: Vec<Vec<String>>) -> PyResult<(Vec<usize>, Vec<String>)>
    where
        S::Err: std::fmt::Display,
    {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|x| x.parse::<S>().map_err(|e| PyValueError::new_err(e.to_string()))).collect())
            .collect::<PyResult<Vec<Vec<S>>>>()?;
        let m = Matrix::from_rows(parsed).map_err(raise)?;
        let g = decompose_invertible(&m).map_err(raise)?;
        Ok((g.perm.images().to_vec(), g.diag.iter().map(ToString::to_string).collect()))
    }
    match semiring {
        "tropical" => go::<Tropical>(rows),
        "boolean" => go::<Boolean>(rows),
        other => Err(PyValueError::new_err(format!("unknown semiring {other:?}"))),
    }
}

/// Convolution of two selections of `S_n`, as image lists.
#[pyfunction]
fn sn_product(a: Vec<usize>, b: Vec<usize>) -> PyResult<Vec<usize>> {
    let pa = Permutation::try_from(a).map_err(raise)?;
    let pb = Permutation::try_from(b).map_err(raise)?;
    let c = sn_convolve(&SnSelection::new(pa), &SnSelection::new(pb)).map_err(raise)?;
    Ok(c.sigma.images().to_vec())
}

#[pyfunction]
fn sn_antipode(a: Vec<usize>) -> PyResult<Vec<usize>> {
    let p = Permutation::try_from(a).map_err(raise)?;
    Ok(SnSelection::new(p).antipode().sigma.images().to_vec())
}

#[pymodule]
fn tropvb(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TropvbError", m.py().get_type::<TropvbError>())?;
    m.add_class::<PyFan>()?;
    m.add_class::<PyCone>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PySpace>()?;
    m.add_function(wrap_pyfunction!(validate_fan, m)?)?;
    m.add_function(wrap_pyfunction!(picard, m)?)?;
    m.add_function(wrap_pyfunction!(picard_equivariant, m)?)?;
    m.add_function(wrap_pyfunction!(psi_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(forget, m)?)?;
    m.add_function(wrap_pyfunction!(klyachko_check, m)?)?;
    m.add_function(wrap_pyfunction!(split_classes, m)?)?;
    m.add_function(wrap_pyfunction!(direct_sum_json, m)?)?;
    m.add_function(wrap_pyfunction!(gl_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(sn_product, m)?)?;
    m.add_function(wrap_pyfunction!(sn_antipode, m)?)?;
    Ok(())
}
