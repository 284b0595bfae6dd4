//! Python bindings; see the `modcurves` crate for the underlying library.

use pyo3::prelude::*;

#[pymodule]
fn modcurves_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let _ = m;
    Ok(())
}
