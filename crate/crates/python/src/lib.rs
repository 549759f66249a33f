//! Python bindings. Rationals cross the boundary as anything whose `str()`
//! parses as one: `int`, `"3/5"`, `fractions.Fraction`. Reports come back as
//! plain dicts.

use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use zetalab::bockstein::{self, EndoModule as CoreEndo};
use zetalab::gauge::{self, GaugeSpec, HodgeTable};
use zetalab::isocrystal::{slope_decomposition, IsocrystalCharPoly};
use zetalab::padic::{self, parse_rational, FpModule, Matrix, PAdicContext, RatPolynomial};
use zetalab::zeta;
use zetalab_cli::input::GaugeFile;

create_exception!(zetalab, ZetalabError, PyValueError);

fn err(e: impl std::fmt::Display) -> PyErr {
    ZetalabError::new_err(e.to_string())
}

fn rational(x: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    parse_rational(&x.str()?.to_string()).map_err(err)
}

fn matrix(rows: &Bound<'_, PyAny>) -> PyResult<Matrix> {
    let rows = rows
        .try_iter()?
        .map(|row| row?.try_iter()?.map(|x| rational(&x?)).collect::<PyResult<Vec<_>>>())
        .collect::<PyResult<Vec<_>>>()?;
    Matrix::from_rows(rows).map_err(err)
}

fn polynomial(coeffs: &Bound<'_, PyAny>) -> PyResult<RatPolynomial> {
    let c = coeffs.try_iter()?.map(|x| rational(&x?)).collect::<PyResult<Vec<_>>>()?;
    Ok(RatPolynomial::new(c))
}

fn context(p: u64, n: u32) -> PyResult<PAdicContext> {
    PAdicContext::new(p, n).map_err(err)
}

/// Serializes through JSON into Python objects.
fn to_python<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// `v_p(x)` for a nonzero rational.
#[pyfunction]
#[pyo3(signature = (x, p, n = 1))]
fn valuation(x: &Bound<'_, PyAny>, p: u64, n: u32) -> PyResult<i64> {
    padic::valuation(&rational(x)?, &context(p, n)?).map_err(err)
}

/// Frobenius slopes of `det(1 - t F^n)` given by ascending coefficients,
/// as `(slope, multiplicity)` pairs with the slope as a string.
#[pyfunction]
#[pyo3(signature = (coeffs, p, n = 1))]
fn newton_slopes(coeffs: &Bound<'_, PyAny>, p: u64, n: u32) -> PyResult<Vec<(String, usize)>> {
    let ctx = context(p, n)?;
    let ic = IsocrystalCharPoly::new(polynomial(coeffs)?, &ctx).map_err(err)?;
    Ok(slope_decomposition(&ic)
        .into_iter()
        .map(|d| (d.slope.to_string(), d.multiplicity))
        .collect())
}

/// Exponents on the diagonal of the p-local Smith form, and the kernel rank.
#[pyfunction]
fn p_local_snf(rows: &Bound<'_, PyAny>, p: u64) -> PyResult<(Vec<u32>, usize)> {
    let snf = padic::p_local_snf(&matrix(rows)?, &context(p, 1)?).map_err(err)?;
    Ok((snf.diagonal, snf.kernel_rank))
}

/// `Σ_{i<r} (-1)^{i+j} (r-i) h^{i,j}` for entries `(i, j, h)`.
#[pyfunction]
fn weighted_hodge_euler(entries: Vec<(i64, i64, u64)>, r: i64) -> i64 {
    let table = HodgeTable::from_entries(entries.into_iter().map(|(i, j, h)| ((i, j), h)));
    gauge::weighted_hodge_euler(&table, r)
}

/// A module `Z_p^free ⊕ ⊕ Z/p^{e_i}` (free generators first) with an endomorphism.
#[pyclass(frozen)]
struct EndoModule {
    ctx: PAdicContext,
    inner: CoreEndo,
}

#[pymethods]
impl EndoModule {
    #[new]
    #[pyo3(signature = (p, theta, torsion_exponents = Vec::new()))]
    fn new(p: u64, theta: &Bound<'_, PyAny>, torsion_exponents: Vec<u32>) -> PyResult<Self> {
        let ctx = context(p, 1)?;
        let theta = matrix(theta)?;
        if !theta.is_square() || torsion_exponents.len() > theta.rows() || torsion_exponents.contains(&0) {
            return Err(err("theta must be square with one positive exponent per torsion generator"));
        }
        let module = FpModule {
            free_rank: theta.rows() - torsion_exponents.len(),
            torsion_exponents,
        };
        let inner = CoreEndo::new(module.presentation(&ctx), theta, &ctx).map_err(err)?;
        Ok(EndoModule { ctx, inner })
    }

    fn structure(&self) -> String {
        self.inner.structure(&self.ctx).to_string()
    }

    fn pow(&self, k: usize) -> EndoModule {
        EndoModule {
            ctx: self.ctx.clone(),
            inner: self.inner.pow(k),
        }
    }

    /// `χ^l(Bock(M, θ))`, or `None` when undefined.
    fn bockstein_char(&self) -> Option<i64> {
        bockstein::bockstein_char(&self.inner, &self.ctx)
    }

    /// `(value, index)`: the stable characteristic and the power it was read from.
    fn stable_bockstein_char(&self) -> (i64, usize) {
        let s = bockstein::stable_bockstein_char(&self.inner, &self.ctx);
        (s.value, s.index)
    }

    fn stabilization_index(&self) -> usize {
        bockstein::stabilization_index(&self.inner, &self.ctx)
    }

    /// `-v_p` of the product of the nonzero eigenvalues.
    fn uk_valuation(&self) -> i64 {
        bockstein::uk_valuation(&self.inner, &self.ctx)
    }

    fn __repr__(&self) -> String {
        format!("EndoModule(p={}, {})", self.ctx.p(), self.structure())
    }
}

/// A gauge, read from the JSON input format.
#[pyclass(frozen)]
struct Gauge {
    inner: GaugeSpec,
}

#[pymethods]
impl Gauge {
    /// Every gauge of a JSON document, by name.
    #[staticmethod]
    fn load_all(text: &str) -> PyResult<Vec<(String, Gauge)>> {
        let file = GaugeFile::parse(text).map_err(err)?;
        Ok(file
            .gauges(None)
            .map_err(err)?
            .into_iter()
            .map(|(k, g)| (k, Gauge { inner: g }))
            .collect())
    }

    #[staticmethod]
    fn from_json(text: &str, name: &str) -> PyResult<Gauge> {
        let file = GaugeFile::parse(text).map_err(err)?;
        let mut all = file.gauges(Some(name)).map_err(err)?;
        Ok(Gauge {
            inner: all.remove(name).expect("selected by name"),
        })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.ctx().p()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.ctx().n()
    }

    /// Breuil–Kisin twist `M{i}`.
    fn twist(&self, i: i64) -> Gauge {
        Gauge {
            inner: self.inner.twist(i),
        }
    }

    fn shift(&self, k: i64) -> Gauge {
        Gauge {
            inner: self.inner.shift(k),
        }
    }

    fn direct_sum(&self, other: &Gauge) -> PyResult<Gauge> {
        Ok(Gauge {
            inner: self.inner.direct_sum(&other.inner).map_err(err)?,
        })
    }

    /// `{(i, j): h}`.
    fn hodge_table(&self) -> PyResult<Vec<((i64, i64), u64)>> {
        let t = self.inner.hodge_table().map_err(err)?;
        Ok(t.entries().iter().map(|(&k, &h)| (k, h)).collect())
    }

    /// `{degree: [coefficients as strings]}`.
    fn zeta_factors(&self) -> Vec<(i64, Vec<String>)> {
        zeta::zeta_from_gauge(&self.inner)
            .factors()
            .iter()
            .map(|(&j, p)| (j, p.coeffs().iter().map(|c| c.to_string()).collect()))
            .collect()
    }

    fn ord_at(&self, r: i64) -> i64 {
        zeta::ord_at(&zeta::zeta_from_gauge(&self.inner), r)
    }

    /// The normalized special value at `s = r`, as a string.
    fn special_value(&self, r: i64) -> String {
        zeta::special_value_limit(&zeta::zeta_from_gauge(&self.inner), r).to_string()
    }

    /// Both sides of the special-value formula at weight `r`.
    fn verify(&self, py: Python<'_>, r: i64) -> PyResult<Py<PyAny>> {
        to_python(py, &zeta::verify_theorem(&self.inner, r))
    }

    fn default_weights(&self) -> (i64, i64) {
        self.inner.default_weights()
    }

    fn __repr__(&self) -> String {
        format!("Gauge(p={}, n={}, summands={})", self.p(), self.n(), self.inner.summands().len())
    }
}

/// Artin–Tate reports for every surface of a JSON document.
#[pyfunction]
fn surfaces(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    let file = GaugeFile::parse(text).map_err(err)?;
    let out = PyList::empty(py);
    for (name, (g, data)) in file.surfaces(None).map_err(err)? {
        let rep = zeta::artin_tate_check(&g, &data).map_err(err)?;
        out.append((name, to_python(py, &rep)?))?;
    }
    Ok(out.into_any().unbind())
}

#[pymodule]
#[pyo3(name = "zetalab")]
fn zetalab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ZetalabError", m.py().get_type::<ZetalabError>())?;
    m.add_function(wrap_pyfunction!(valuation, m)?)?;
    m.add_function(wrap_pyfunction!(newton_slopes, m)?)?;
    m.add_function(wrap_pyfunction!(p_local_snf, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_hodge_euler, m)?)?;
    m.add_function(wrap_pyfunction!(surfaces, m)?)?;
    m.add_class::<EndoModule>()?;
    m.add_class::<Gauge>()?;
    Ok(())
}
