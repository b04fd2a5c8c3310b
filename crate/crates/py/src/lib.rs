//! Python module `pylpg`: compress read collections, extract reads, and
//! compute the eBWT from the compressed form.

use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyString};

use lpg::builder::build;
use lpg::glex::glex;
use lpg::infbwt::infbwt;
use lpg::io::{decode_archive, encode_archive, parse_reads, ReadFormat};
use lpg::oracle::oracle_ebwt_reads;
use lpg::tree::{GrammarTree, LabelMode};
use lpg::{Error, ReadCollection};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        Error::OutOfRange { .. } => PyIndexError::new_err(e.to_string()),
        e => PyValueError::new_err(e.to_string()),
    }
}

fn label_mode(labels: &str) -> PyResult<LabelMode> {
    match labels {
        "fixed" => Ok(LabelMode::Fixed),
        "huffman" => Ok(LabelMode::Huffman),
        _ => Err(PyValueError::new_err(format!("labels must be 'fixed' or 'huffman', got {labels:?}"))),
    }
}

/// Accepts a list whose items are `str` or `bytes`.
fn collect_reads(reads: &Bound<'_, PyAny>) -> PyResult<ReadCollection> {
    let mut out = Vec::new();
    for item in reads.try_iter()? {
        let item = item?;
        if let Ok(s) = item.cast::<PyString>() {
            out.push(s.to_str()?.as_bytes().to_vec());
        } else if let Ok(b) = item.cast::<PyBytes>() {
            out.push(b.as_bytes().to_vec());
        } else {
            return Err(PyValueError::new_err("reads must be str or bytes"));
        }
    }
    ReadCollection::new(out).map_err(to_py)
}

/// A compressed read collection.
#[pyclass(module = "pylpg", frozen)]
pub struct Archive {
    gt: GrammarTree,
}

#[pymethods]
impl Archive {
    /// Compresses a list of reads (`str` or `bytes`).
    #[staticmethod]
    #[pyo3(signature = (reads, labels = "huffman"))]
    fn compress(reads: &Bound<'_, PyAny>, labels: &str) -> PyResult<Self> {
        let rc = collect_reads(reads)?;
        let gt = GrammarTree::encode(&build(&rc), label_mode(labels)?).map_err(to_py)?;
        Ok(Archive { gt })
    }

    /// Parses FASTA, FASTQ or one-read-per-line data and compresses it.
    #[staticmethod]
    #[pyo3(signature = (data, format = None, labels = "huffman"))]
    fn compress_text(data: &[u8], format: Option<&str>, labels: &str) -> PyResult<Self> {
        let format = format.map(str::parse::<ReadFormat>).transpose().map_err(to_py)?;
        let rc = parse_reads(data, format).map_err(to_py)?;
        let gt = GrammarTree::encode(&build(&rc), label_mode(labels)?).map_err(to_py)?;
        Ok(Archive { gt })
    }

    /// Loads an archive produced by `to_bytes` or the command-line tool.
    #[staticmethod]
    fn from_bytes(data: &[u8]) -> PyResult<Self> {
        Ok(Archive { gt: decode_archive(data).map_err(to_py)? })
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &encode_archive(&self.gt))
    }

    /// Read `j` (0-based).
    fn read<'py>(&self, py: Python<'py>, j: usize) -> PyResult<Bound<'py, PyBytes>> {
        Ok(PyBytes::new(py, &self.gt.extract_read(j).map_err(to_py)?))
    }

    fn reads<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyBytes>>> {
        let reads = self.gt.decode_reads().map_err(to_py)?;
        Ok(reads.iter().map(|r| PyBytes::new(py, r)).collect())
    }

    /// eBWT of the collection, sentinels rendered as `$`.
    fn ebwt<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyBytes>> {
        let trips = glex(&self.gt).map_err(to_py)?;
        let e = infbwt(&self.gt, &trips).map_err(to_py)?;
        Ok(PyBytes::new(py, &e.to_bytes(self.gt.alphabet())))
    }

    /// Grammar sizes as a dict: sigma, r, g, c, h, m, n.
    fn stats(&self) -> std::collections::BTreeMap<&'static str, u64> {
        let s = self.gt.stats();
        [("sigma", self.gt.sigma() as u64), ("r", s.r), ("g", s.g), ("c", s.c), ("h", s.h), ("m", s.m), ("n", s.n)]
            .into_iter()
            .collect()
    }

    fn __len__(&self) -> usize {
        self.gt.m()
    }

    fn __repr__(&self) -> String {
        let s = self.gt.stats();
        format!("Archive(reads={}, symbols={}, rules={})", s.m, s.n, s.r)
    }
}

/// eBWT computed directly by suffix sorting (small inputs only).
#[pyfunction]
fn oracle_ebwt<'py>(py: Python<'py>, reads: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyBytes>> {
    let rc = collect_reads(reads)?;
    let e = oracle_ebwt_reads(&rc).map_err(to_py)?;
    Ok(PyBytes::new(py, &e.to_bytes(rc.alphabet())))
}

#[pymodule]
fn pylpg(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Archive>()?;
    m.add_function(wrap_pyfunction!(oracle_ebwt, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_names() {
        assert_eq!(label_mode("fixed").unwrap(), LabelMode::Fixed);
        assert_eq!(label_mode("huffman").unwrap(), LabelMode::Huffman);
    }

    #[test]
    fn module_through_interpreter() {
        Python::initialize();
        Python::attach(|py| {
            let m = PyModule::new(py, "pylpg").unwrap();
            pylpg(&m).unwrap();
            let arc = m.getattr("Archive").unwrap().call_method1("compress", (vec!["AC", "AA"],)).unwrap();
            let e: Vec<u8> = arc.call_method0("ebwt").unwrap().extract().unwrap();
            assert_eq!(e, b"CAA$$A");
            let err = arc.call_method1("read", (9,)).unwrap_err();
            assert!(err.is_instance_of::<PyIndexError>(py));
            let bad = m.getattr("Archive").unwrap().call_method1("compress", (vec!["A$"],)).unwrap_err();
            assert!(bad.is_instance_of::<PyValueError>(py));
        });
    }
}
