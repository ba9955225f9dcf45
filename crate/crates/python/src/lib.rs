//! Python bindings. Bit sequences cross the boundary as strings of `0` and
//! `1`, probabilities as exact decimal strings such as `"0.3"`.

use adm_core::analysis::{self, rational_to_f64};
use adm_core::codec::{decode_block_framed, encode_block_framed, Frame};
use adm_core::{BackendId, BitSequence, Error, MatcherConfig, Prob};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Invariant(_) | Error::Underflow(_) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn prob(s: &str) -> PyResult<Prob> {
    s.parse().map_err(to_py)
}

fn bits(s: &str) -> PyResult<BitSequence> {
    s.parse().map_err(to_py)
}

fn backend(name: &str) -> PyResult<BackendId> {
    name.parse().map_err(to_py)
}

/// An ADM encoder and decoder for one configuration.
#[pyclass(frozen, module = "adm")]
struct Matcher {
    cfg: MatcherConfig,
}

#[pymethods]
impl Matcher {
    #[new]
    #[pyo3(signature = (p_src, p_code, n, backend="exact"))]
    fn new(p_src: &str, p_code: &str, n: usize, backend: &str) -> PyResult<Self> {
        let cfg = MatcherConfig::new(prob(p_src)?, prob(p_code)?, n, self::backend(backend)?).map_err(to_py)?;
        Ok(Matcher { cfg })
    }

    #[getter]
    fn n(&self) -> usize {
        self.cfg.n
    }

    #[getter]
    fn p_src(&self) -> String {
        self.cfg.p_src.to_string()
    }

    #[getter]
    fn p_code(&self) -> String {
        self.cfg.p_code.to_string()
    }

    #[getter]
    fn backend(&self) -> String {
        self.cfg.backend.to_string()
    }

    /// Encodes a block of exactly `n` source bits.
    fn encode(&self, py: Python<'_>, source: &str) -> PyResult<String> {
        let s = bits(source)?;
        let cfg = self.cfg;
        py.detach(|| adm_core::encode(&s, &cfg)).map(|c| c.to_string()).map_err(to_py)
    }

    /// Decodes a codeword. Returns the source block and the number of
    /// codeword bits the decoder read.
    fn decode(&self, py: Python<'_>, codeword: &str) -> PyResult<(String, usize)> {
        let c = bits(codeword)?;
        let cfg = self.cfg;
        let r = py.detach(|| adm_core::decode(&c, &cfg)).map_err(to_py)?;
        Ok((r.source_word.to_string(), r.consumed_bits))
    }

    /// Encodes one block into a self-describing frame.
    fn encode_framed(&self, source: &str) -> PyResult<Vec<u8>> {
        encode_block_framed(&bits(source)?, &self.cfg).map_err(to_py)
    }

    /// Decodes the frame at the start of `data`. Returns the source block
    /// and the number of bytes the frame took.
    fn decode_framed(&self, data: &[u8]) -> PyResult<(String, usize)> {
        let (s, used) = decode_block_framed(data, &self.cfg).map_err(to_py)?;
        Ok((s.to_string(), used))
    }

    fn __repr__(&self) -> String {
        format!(
            "Matcher(p_src='{}', p_code='{}', n={}, backend='{}')",
            self.cfg.p_src, self.cfg.p_code, self.cfg.n, self.cfg.backend
        )
    }
}

/// A complete codebook with its induced distributions.
#[pyclass(frozen, module = "adm")]
struct Codebook {
    inner: analysis::Codebook,
}

#[pymethods]
impl Codebook {
    /// `(source, codeword, p_y, p_z)` tuples in source order.
    fn entries(&self) -> Vec<(String, String, f64, f64)> {
        self.inner
            .entries
            .iter()
            .map(|e| (e.source.to_string(), e.codeword.to_string(), rational_to_f64(&e.p_y), rational_to_f64(&e.p_z)))
            .collect()
    }

    fn codewords(&self) -> Vec<String> {
        self.inner.entries.iter().map(|e| e.codeword.to_string()).collect()
    }

    fn informational_divergence(&self) -> f64 {
        self.inner.informational_divergence()
    }

    fn expected_length(&self) -> f64 {
        self.inner.expected_length()
    }

    fn coverage(&self) -> f64 {
        self.inner.coverage()
    }

    fn is_prefix_free(&self) -> bool {
        self.inner.is_prefix_free()
    }

    fn report(&self) -> MatchReport {
        MatchReport(self.inner.report())
    }

    fn __len__(&self) -> usize {
        self.inner.entries.len()
    }
}

/// Divergence, length and rate figures.
#[pyclass(frozen, module = "adm")]
struct MatchReport(analysis::MatchReport);

#[pymethods]
impl MatchReport {
    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }
    #[getter]
    fn kl_bits(&self) -> f64 {
        self.0.kl_bits
    }
    #[getter]
    fn expected_length(&self) -> f64 {
        self.0.expected_length
    }
    #[getter]
    fn normalized_kl(&self) -> f64 {
        self.0.normalized_kl
    }
    #[getter]
    fn rate(&self) -> f64 {
        self.0.rate
    }
    #[getter]
    fn kl_upper(&self) -> f64 {
        self.0.kl_upper
    }
    #[getter]
    fn stderr(&self) -> f64 {
        self.0.stderr
    }
    #[getter]
    fn rate_stderr(&self) -> f64 {
        self.0.rate_stderr
    }
    #[getter]
    fn trials(&self) -> usize {
        self.0.trials
    }

    fn __repr__(&self) -> String {
        let r = &self.0;
        format!(
            "MatchReport(n={}, kl_bits={}, expected_length={}, rate={}, stderr={}, trials={})",
            r.n, r.kl_bits, r.expected_length, r.rate, r.stderr, r.trials
        )
    }
}

/// Encodes every source block of length `n` on the exact backend.
#[pyfunction]
fn enumerate_codebook(py: Python<'_>, p_src: &str, p_code: &str, n: usize) -> PyResult<Codebook> {
    let cfg = MatcherConfig::exact(prob(p_src)?, prob(p_code)?, n);
    let inner = py.detach(|| analysis::enumerate_codebook(&cfg)).map_err(to_py)?;
    Ok(Codebook { inner })
}

/// Minimum-divergence code by exhaustive search, for `n <= 4`.
#[pyfunction]
fn optimal_codebook(py: Python<'_>, n: usize, p_src: &str, p_code: &str) -> PyResult<(Codebook, f64)> {
    let (ps, pc) = (prob(p_src)?, prob(p_code)?);
    let (inner, kl) = py.detach(|| analysis::optimal_codebook_bruteforce(n, ps, pc)).map_err(to_py)?;
    Ok((Codebook { inner }, kl))
}

#[pyfunction]
#[pyo3(signature = (p_src, p_code, n, trials, seed=0, backend="fixed"))]
fn monte_carlo(
    py: Python<'_>,
    p_src: &str,
    p_code: &str,
    n: usize,
    trials: usize,
    seed: u64,
    backend: &str,
) -> PyResult<MatchReport> {
    let cfg = MatcherConfig::new(prob(p_src)?, prob(p_code)?, n, self::backend(backend)?).map_err(to_py)?;
    py.detach(|| analysis::monte_carlo_report(&cfg, trials, seed)).map(MatchReport).map_err(to_py)
}

/// Binary entropy in bits.
#[pyfunction]
fn entropy(p: &str) -> PyResult<f64> {
    Ok(analysis::entropy(prob(p)?))
}

#[pyfunction]
fn kl_upper_bound(p_code: &str) -> PyResult<f64> {
    Ok(analysis::kl_upper_bound(prob(p_code)?))
}

#[pyfunction]
fn normalized_kl_bound(p_src: &str, p_code: &str, n: usize) -> PyResult<f64> {
    analysis::normalized_kl_bound(&MatcherConfig::exact(prob(p_src)?, prob(p_code)?, n)).map_err(to_py)
}

/// Checks `E[l] <= n H(P_S) + 2` for `p_code = 1/2` by enumeration. Returns
/// `(expected_length, bound, passed)`.
#[pyfunction]
fn compression_check(p_src: &str, n: usize) -> PyResult<(f64, f64, bool)> {
    let c = analysis::compression_check(&MatcherConfig::exact(prob(p_src)?, Prob::half(), n)).map_err(to_py)?;
    Ok((c.expected_length, c.bound, c.pass))
}

/// Decodes a stream of concatenated frames into one bit string.
#[pyfunction]
fn decode_frames(data: &[u8]) -> PyResult<String> {
    let mut out = BitSequence::new();
    for frame in Frame::parse_all(data).map_err(to_py)? {
        out.extend_from(&frame.decode().map_err(to_py)?.source_word);
    }
    Ok(out.to_string())
}

#[pymodule]
fn adm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Matcher>()?;
    m.add_class::<Codebook>()?;
    m.add_class::<MatchReport>()?;
    m.add_function(wrap_pyfunction!(enumerate_codebook, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_codebook, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(kl_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(normalized_kl_bound, m)?)?;
    m.add_function(wrap_pyfunction!(compression_check, m)?)?;
    m.add_function(wrap_pyfunction!(decode_frames, m)?)?;
    Ok(())
}
