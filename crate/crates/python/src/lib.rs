//! Python bindings. Matrices cross the boundary as lists of lists of `int`.

use kneser_sandpile as ks;
use ks::{BigInt, BigIntMatrix};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: ks::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type Rows = Vec<Vec<BigInt>>;

fn to_matrix(rows: Vec<Vec<BigInt>>) -> PyResult<BigIntMatrix> {
    BigIntMatrix::from_rows(&rows).map_err(err)
}

/// Cokernel `Z^free_rank + Z_{d_1} + ... + Z_{d_k}`.
#[pyclass(name = "AbelianGroup", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyAbelianGroup(ks::AbelianGroupDecomposition);

#[pymethods]
impl PyAbelianGroup {
    #[getter]
    fn invariant_factors(&self) -> Vec<BigInt> {
        self.0.invariant_factors.clone()
    }

    #[getter]
    fn free_rank(&self) -> usize {
        self.0.free_rank
    }

    fn torsion_order(&self) -> BigInt {
        self.0.torsion_order()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("AbelianGroup({})", self.0)
    }
}

#[pyclass(name = "SmithForm", frozen, skip_from_py_object)]
pub struct PySmithForm(ks::SmithDecomposition);

#[pymethods]
impl PySmithForm {
    #[getter]
    fn diagonal(&self) -> Vec<BigInt> {
        self.0.diagonal.clone()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.0.rank
    }

    /// `(U, V)` with `U M V = S`, or `None` when not requested.
    #[getter]
    fn transforms(&self) -> Option<(Rows, Rows)> {
        self.0
            .transforms
            .as_ref()
            .map(|(u, v)| (u.to_rows(), v.to_rows()))
    }

    fn cokernel(&self) -> PyAbelianGroup {
        PyAbelianGroup(self.0.cokernel())
    }

    fn certify(&self, m: Vec<Vec<BigInt>>) -> PyResult<bool> {
        Ok(self.0.certify(&to_matrix(m)?))
    }

    fn __repr__(&self) -> String {
        let d: Vec<String> = self.0.diagonal.iter().map(ToString::to_string).collect();
        format!("SmithForm([{}])", d.join(", "))
    }
}

/// Multiplicities `e_i` of `p^i` among the Smith diagonal.
#[pyclass(name = "ElementaryDivisorProfile", frozen, eq, skip_from_py_object)]
#[derive(PartialEq)]
pub struct PyProfile(ks::ElementaryDivisorProfile);

#[pymethods]
impl PyProfile {
    #[getter]
    fn prime(&self) -> u64 {
        self.0.prime
    }

    #[getter]
    fn multiplicities(&self) -> Vec<usize> {
        self.0.multiplicities.clone()
    }

    #[getter]
    fn kernel_rank(&self) -> usize {
        self.0.kernel_rank
    }

    fn e(&self, i: usize) -> usize {
        self.0.e(i)
    }

    fn sylow_factors(&self) -> Vec<BigInt> {
        self.0.sylow_factors()
    }

    fn __repr__(&self) -> String {
        format!(
            "ElementaryDivisorProfile(p={}, e={:?}, kernel_rank={})",
            self.0.prime, self.0.multiplicities, self.0.kernel_rank
        )
    }
}

#[pyclass(name = "Filtration", frozen, skip_from_py_object)]
pub struct PyFiltration(ks::MbarFiltration);

#[pymethods]
impl PyFiltration {
    #[getter]
    fn prime(&self) -> u64 {
        self.0.prime
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.dims.clone()
    }

    #[getter]
    fn kernel_dim(&self) -> usize {
        self.0.kernel_dim
    }

    fn __repr__(&self) -> String {
        format!("Filtration(p={}, dims={:?})", self.0.prime, self.0.dims)
    }
}

#[pyclass(name = "Graph", frozen, skip_from_py_object)]
pub struct PyGraph(ks::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        ks::Graph::from_edges(vertex_count, edges)
            .map(PyGraph)
            .map_err(err)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.0.labels().iter().map(ToString::to_string).collect()
    }

    fn adjacency_matrix(&self) -> Vec<Vec<BigInt>> {
        ks::adjacency_matrix(&self.0).to_rows()
    }

    fn laplacian_matrix(&self) -> Vec<Vec<BigInt>> {
        ks::laplacian_matrix(&self.0).to_rows()
    }

    fn critical_group(&self) -> PyAbelianGroup {
        PyAbelianGroup(ks::critical_group(&ks::laplacian_matrix(&self.0)))
    }

    fn spanning_tree_count(&self) -> BigInt {
        ks::spanning_tree_count(&self.0)
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(v={}, e={})",
            self.0.vertex_count(),
            self.0.edge_count()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (m, transforms = false))]
fn smith_normal_form(m: Vec<Vec<BigInt>>, transforms: bool) -> PyResult<PySmithForm> {
    Ok(PySmithForm(ks::smith_normal_form(
        &to_matrix(m)?,
        transforms,
    )))
}

#[pyfunction]
fn cokernel(m: Vec<Vec<BigInt>>) -> PyResult<PyAbelianGroup> {
    Ok(PyAbelianGroup(ks::cokernel(&to_matrix(m)?)))
}

#[pyfunction]
fn determinant(m: Vec<Vec<BigInt>>) -> PyResult<BigInt> {
    ks::determinant(&to_matrix(m)?).map_err(err)
}

#[pyfunction]
fn kernel_dimension_mod(m: Vec<Vec<BigInt>>, p: u64, e: u32) -> PyResult<usize> {
    ks::kernel_dimension_mod(&to_matrix(m)?, p, e).map_err(err)
}

#[pyfunction]
fn kneser_graph(n: usize, k: usize) -> PyResult<PyGraph> {
    ks::kneser_graph(n, k).map(PyGraph).map_err(err)
}

#[pyfunction]
fn critical_group(laplacian: Vec<Vec<BigInt>>) -> PyResult<PyAbelianGroup> {
    Ok(PyAbelianGroup(ks::critical_group(&to_matrix(laplacian)?)))
}

#[pyfunction]
fn spanning_tree_count(g: &PyGraph) -> BigInt {
    ks::spanning_tree_count(&g.0)
}

#[pyfunction]
fn p_elementary_divisors(m: Vec<Vec<BigInt>>, p: u64) -> PyResult<PyProfile> {
    ks::p_elementary_divisors(&to_matrix(m)?, p)
        .map(PyProfile)
        .map_err(err)
}

#[pyfunction]
fn mbar_filtration(m: Vec<Vec<BigInt>>, p: u64, i_max: usize) -> PyResult<PyFiltration> {
    ks::mbar_filtration(&to_matrix(m)?, p, i_max)
        .map(PyFiltration)
        .map_err(err)
}

#[pyfunction]
fn verify_mdim_identity(profile: &PyProfile, filtration: &PyFiltration) -> PyResult<bool> {
    ks::verify_mdim_identity(&profile.0, &filtration.0).map_err(err)
}

/// Invariant factors of `K(KG(n,2))` from the closed form, trivial factors dropped.
#[pyfunction]
fn predicted_critical_group(n: u64) -> PyResult<Vec<BigInt>> {
    ks::predicted_critical_group(n)
        .map(|g| g.normalized())
        .map_err(err)
}

#[pyfunction]
fn predicted_elementary_divisors(n: u64, p: u64) -> PyResult<PyProfile> {
    ks::predicted_elementary_divisors(n, p)
        .map(PyProfile)
        .map_err(err)
}

/// Label of the case-analysis arm for `(n, p)`, e.g. `"Case 2a, a=2"`.
#[pyfunction]
fn select_branch(n: u64, p: u64) -> PyResult<String> {
    ks::select_branch(n, p).map(|b| b.to_string()).map_err(err)
}

#[pyfunction]
fn critical_group_order(n: u64) -> PyResult<BigInt> {
    ks::critical_group_order(n).map_err(err)
}

/// `(r, s, f, g)`: nonzero Laplacian eigenvalues and their multiplicities.
#[pyfunction]
fn spectral_data(n: u64) -> PyResult<(u64, u64, u64, u64)> {
    ks::spectral_data(n)
        .map(|sd| (sd.r, sd.s, sd.f, sd.g))
        .map_err(err)
}

/// `(v, k, lambda, mu)`.
#[pyfunction]
fn srg_parameters(n: u64) -> PyResult<(u64, u64, u64, u64)> {
    ks::srg_parameters(n)
        .map(|s| (s.v, s.k, s.lambda, s.mu))
        .map_err(err)
}

#[pyfunction]
fn valuation(m: BigInt, p: u64) -> PyResult<u32> {
    ks::valuation(&m, p).map_err(err)
}

#[pymodule]
pub fn pykneser(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAbelianGroup>()?;
    m.add_class::<PySmithForm>()?;
    m.add_class::<PyProfile>()?;
    m.add_class::<PyFiltration>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(cokernel, m)?)?;
    m.add_function(wrap_pyfunction!(determinant, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_dimension_mod, m)?)?;
    m.add_function(wrap_pyfunction!(kneser_graph, m)?)?;
    m.add_function(wrap_pyfunction!(critical_group, m)?)?;
    m.add_function(wrap_pyfunction!(spanning_tree_count, m)?)?;
    m.add_function(wrap_pyfunction!(p_elementary_divisors, m)?)?;
    m.add_function(wrap_pyfunction!(mbar_filtration, m)?)?;
    m.add_function(wrap_pyfunction!(verify_mdim_identity, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_critical_group, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_elementary_divisors, m)?)?;
    m.add_function(wrap_pyfunction!(select_branch, m)?)?;
    m.add_function(wrap_pyfunction!(critical_group_order, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_data, m)?)?;
    m.add_function(wrap_pyfunction!(srg_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(valuation, m)?)?;
    Ok(())
}
