//! Finite frames of ℝⁿ: construction, analysis and synthesis, optimal
//! bounds, coherence and spark.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fmt_float;
use crate::numerics::{self, dot, norm, Mat, Rng};

/// Tolerance on `‖x_j‖ = 1` for operations stated for unit vectors.
pub const UNIT_NORM_TOL: f64 = 1e-10;

/// Above this many n-subsets the spark check switches to sampling.
pub const EXHAUSTIVE_SPARK_LIMIT: u128 = 1_000_000;
const SAMPLED_SPARK_SUBSETS: usize = 10_000;
const SPARK_SAMPLING_SEED: u64 = 0x5eed_5a4c;

/// An ordered family of `m` vectors in ℝⁿ.
///
/// Row `j` of the analysis matrix is `x_j`. The frame operator, Gram
/// matrix and the spectrum of the frame operator are computed once at
/// construction.
#[derive(Clone, Debug)]
pub struct Frame {
    analysis: Mat,
    frame_operator: Mat,
    gram: Mat,
    spectrum: Vec<f64>,
}

/// Optimal frame bounds `0 < A ≤ B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    /// The step `2/(A+B)` that minimizes the linear iteration's contraction.
    pub fn optimal_step(&self) -> f64 {
        2.0 / (self.lower + self.upper)
    }
}

/// Outcome of a spark check.
#[derive(Clone, Debug, PartialEq)]
pub struct SparkReport {
    /// Every checked n-subset spans ℝⁿ.
    pub full_spark: bool,
    /// All `C(m, n)` subsets were checked; otherwise the verdict is
    /// probabilistic.
    pub exhaustive: bool,
    pub subsets_checked: usize,
    /// A dependent n-subset, when one was found.
    pub witness: Option<Vec<usize>>,
}

impl Frame {
    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::BadShape("a frame needs at least one vector".into()));
        }
        let analysis = Mat::from_rows(vectors)?;
        Self::from_analysis(analysis)
    }

    /// Build from an `m × n` matrix whose rows are the frame vectors.
    pub fn from_analysis(analysis: Mat) -> Result<Self> {
        if analysis.rows() == 0 || analysis.cols() == 0 {
            return Err(Error::BadShape(format!(
                "frame of {} vectors in dimension {}",
                analysis.rows(),
                analysis.cols()
            )));
        }
        let frame_operator = analysis.gram_cols();
        let gram = analysis.gram_rows();
        let spectrum = numerics::sym_eig(&frame_operator)?.values;
        Ok(Frame {
            analysis,
            frame_operator,
            gram,
            spectrum,
        })
    }

    /// Dimension `n` of the ambient space.
    pub fn dim(&self) -> usize {
        self.analysis.cols()
    }

    /// Number of vectors `m`.
    pub fn len(&self) -> usize {
        self.analysis.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn vector(&self, j: usize) -> &[f64] {
        self.analysis.row(j)
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.len()).map(move |j| self.vector(j))
    }

    pub fn analysis_matrix(&self) -> &Mat {
        &self.analysis
    }

    /// `S = Σ_j x_j x_jᵀ`.
    pub fn frame_operator(&self) -> &Mat {
        &self.frame_operator
    }

    /// `G_ij = ⟨x_i, x_j⟩`.
    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    /// Eigenvalues of the frame operator, ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Largest eigenvalue of the frame operator. Defined even when the
    /// vectors do not span.
    pub fn upper_bound(&self) -> f64 {
        *self.spectrum.last().unwrap()
    }

    /// Optimal bounds: extreme eigenvalues of the frame operator.
    pub fn bounds(&self) -> Result<FrameBounds> {
        let lower = self.spectrum[0];
        let upper = self.upper_bound();
        if !(lower > 1e-12 * upper) {
            return Err(Error::NotAFrame { lower, upper });
        }
        Ok(FrameBounds { lower, upper })
    }

    pub fn spans(&self) -> bool {
        self.bounds().is_ok()
    }

    /// `Θx = (⟨x, x_j⟩)_j`.
    pub fn analysis(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::BadShape(format!(
                "vector of length {} for a frame of dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(self.analysis.matvec(x))
    }

    /// `Θ*c = Σ_j c_j x_j`.
    pub fn synthesis(&self, c: &[f64]) -> Result<Vec<f64>> {
        if c.len() != self.len() {
            return Err(Error::BadShape(format!(
                "{} coefficients for a frame of {} vectors",
                c.len(),
                self.len()
            )));
        }
        Ok(self.analysis.matvec_t(c))
    }

    /// The sub-collection `(x_j)_{j ∈ indices}` in the given order.
    pub fn subframe(&self, indices: &[usize]) -> Result<Frame> {
        let rows: Vec<Vec<f64>> = indices.iter().map(|&j| self.vector(j).to_vec()).collect();
        Frame::from_vectors(&rows)
    }

    /// Rows `indices` of the analysis matrix as a matrix (possibly empty).
    pub fn rows_of(&self, indices: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(indices.len() * self.dim());
        for &j in indices {
            data.extend_from_slice(self.vector(j));
        }
        Mat::new(indices.len(), self.dim(), data).expect("rows of a valid frame")
    }

    /// Whether `(x_j)_{j ∈ indices}` spans ℝⁿ (singular-value rank test).
    pub fn spans_with(&self, indices: &[usize], tol: f64) -> bool {
        if indices.len() < self.dim() {
            return false;
        }
        numerics::rank(&self.rows_of(indices), tol).map_or(false, |r| r == self.dim())
    }

    /// `max_{i≠j} |⟨x_i,x_j⟩|` for unit-norm frames.
    pub fn coherence(&self) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::BadShape("coherence needs at least two vectors".into()));
        }
        self.check_unit_norm()?;
        let m = self.len();
        let mut best: f64 = 0.0;
        for i in 0..m {
            for j in (i + 1)..m {
                best = best.max(self.gram[(i, j)].abs());
            }
        }
        Ok(best)
    }

    pub fn check_unit_norm(&self) -> Result<()> {
        for j in 0..self.len() {
            let r = norm(self.vector(j));
            if (r - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::NotUnitNorm { index: j, norm: r });
            }
        }
        Ok(())
    }

    /// Largest entry of `|S - I|`.
    pub fn parseval_deviation(&self) -> f64 {
        self.frame_operator
            .max_abs_diff(&Mat::identity(self.dim()))
    }

    pub fn check_parseval(&self, tol: f64) -> Result<()> {
        let deviation = self.parseval_deviation();
        if deviation > tol {
            return Err(Error::NotParseval { deviation });
        }
        Ok(())
    }

    /// The canonical Parseval frame `(S^{-1/2} x_j)_j`.
    pub fn canonical_parseval(&self) -> Result<Frame> {
        self.bounds()?;
        let eig = numerics::sym_eig(&self.frame_operator)?;
        let n = self.dim();
        let mut inv_sqrt = Mat::zeros(n, n);
        for k in 0..n {
            let w = 1.0 / eig.values[k].sqrt();
            for i in 0..n {
                for j in 0..n {
                    inv_sqrt[(i, j)] += w * eig.vectors[(i, k)] * eig.vectors[(j, k)];
                }
            }
        }
        // Rows transform as x_j ↦ S^{-1/2} x_j; S^{-1/2} is symmetric.
        Frame::from_analysis(self.analysis.matmul(&inv_sqrt)?)
    }

    /// Check that every n-subset spans. Exhaustive up to
    /// [`EXHAUSTIVE_SPARK_LIMIT`] subsets, sampled beyond that.
    pub fn full_spark(&self) -> SparkReport {
        let (m, n) = (self.len(), self.dim());
        if m < n {
            return SparkReport {
                full_spark: false,
                exhaustive: true,
                subsets_checked: 0,
                witness: None,
            };
        }
        let total = binomial(m as u64, n as u64);
        if total <= EXHAUSTIVE_SPARK_LIMIT {
            let mut checked = 0;
            let mut subset: Vec<usize> = (0..n).collect();
            loop {
                checked += 1;
                if !self.subset_spans(&subset) {
                    return SparkReport {
                        full_spark: false,
                        exhaustive: true,
                        subsets_checked: checked,
                        witness: Some(subset),
                    };
                }
                if !next_combination(&mut subset, m) {
                    break;
                }
            }
            SparkReport {
                full_spark: true,
                exhaustive: true,
                subsets_checked: checked,
                witness: None,
            }
        } else {
            let mut rng = Rng::seed_from_u64(SPARK_SAMPLING_SEED);
            for checked in 1..=SAMPLED_SPARK_SUBSETS {
                let subset = random_subset(m, n, &mut rng);
                if !self.subset_spans(&subset) {
                    return SparkReport {
                        full_spark: false,
                        exhaustive: false,
                        subsets_checked: checked,
                        witness: Some(subset),
                    };
                }
            }
            SparkReport {
                full_spark: true,
                exhaustive: false,
                subsets_checked: SAMPLED_SPARK_SUBSETS,
                witness: None,
            }
        }
    }

    pub fn is_full_spark(&self) -> bool {
        self.full_spark().full_spark
    }

    /// `|det| > 1e-10 · Π ‖x_j‖` over an n-subset.
    fn subset_spans(&self, subset: &[usize]) -> bool {
        let sub = self.rows_of(subset);
        let scale: f64 = subset.iter().map(|&j| norm(self.vector(j))).product();
        if scale == 0.0 {
            return false;
        }
        numerics::det(&sub).map_or(false, |d| d.abs() > 1e-10 * scale)
    }

    /// Text serialization: `n m`, then one line of `n` floats per vector.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.dim(), self.len());
        for v in self.vectors() {
            let line: Vec<String> = v.iter().map(|x| fmt_float(*x)).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str, path: &Path) -> Result<Frame> {
        let parse_err = |line: usize, message: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty frame file".into()))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(parse_err(hline + 1, "header must be `n m`".into()));
        }
        let parse_count = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| parse_err(hline + 1, format!("bad count `{s}`: {e}")))
        };
        let n = parse_count(dims[0])?;
        let m = parse_count(dims[1])?;
        let mut rows = Vec::with_capacity(m);
        for (lno, line) in lines.by_ref().take(m) {
            let row = line
                .split_whitespace()
                .map(|tok| {
                    let v: f64 = tok
                        .parse()
                        .map_err(|e| parse_err(lno + 1, format!("bad float `{tok}`: {e}")))?;
                    if !v.is_finite() {
                        return Err(parse_err(lno + 1, format!("non-finite value `{tok}`")));
                    }
                    Ok(v)
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != n {
                return Err(parse_err(
                    lno + 1,
                    format!("expected {n} entries, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        if rows.len() != m {
            return Err(parse_err(
                text.lines().count(),
                format!("expected {m} vectors, found {}", rows.len()),
            ));
        }
        if let Some((lno, _)) = lines.next() {
            return Err(parse_err(lno + 1, "trailing data after frame vectors".into()));
        }
        Frame::from_vectors(&rows)
    }

    pub fn read(path: &Path) -> Result<Frame> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Frame::from_text(&text, path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// `m` i.i.d. uniform unit vectors in ℝⁿ.
pub fn random_unit_frame(n: usize, m: usize, rng: &mut Rng) -> Result<Frame> {
    if n == 0 || m < n {
        return Err(Error::BadShape(format!(
            "random frame needs m >= n >= 1, got n = {n}, m = {m}"
        )));
    }
    let vectors: Vec<Vec<f64>> = (0..m).map(|_| numerics::normal_unit_vector(n, rng)).collect();
    Frame::from_vectors(&vectors)
}

/// Standard basis of ℝⁿ.
pub fn orthonormal_basis(n: usize) -> Result<Frame> {
    if n == 0 {
        return Err(Error::BadShape("dimension must be at least 1".into()));
    }
    Frame::from_analysis(Mat::identity(n))
}

/// The `n+1` vector equiangular tight frame of ℝⁿ.
///
/// Each `e_j ∈ ℝ^{n+1}` is projected onto the complement of the all-ones
/// vector and normalized; coordinates are taken against the Gram–Schmidt
/// basis of `(e_1 − e_2, …, e_n − e_{n+1})`.
pub fn simplex_etf(n: usize) -> Result<Frame> {
    if n == 0 {
        return Err(Error::BadShape("dimension must be at least 1".into()));
    }
    let big = n + 1;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut v = vec![0.0; big];
        v[k] = 1.0;
        v[k + 1] = -1.0;
        for b in &basis {
            let c = dot(&v, b);
            numerics::axpy(-c, b, &mut v);
        }
        let r = norm(&v);
        basis.push(v.into_iter().map(|x| x / r).collect());
    }
    let shift = 1.0 / big as f64;
    let vectors: Vec<Vec<f64>> = (0..big)
        .map(|j| {
            let mut p = vec![-shift; big];
            p[j] += 1.0;
            let mut coords: Vec<f64> = basis.iter().map(|b| dot(&p, b)).collect();
            let r = norm(&coords);
            coords.iter_mut().for_each(|c| *c /= r);
            coords
        })
        .collect();
    Frame::from_vectors(&vectors)
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

/// Advance `subset` (sorted, values in `0..n`) to the next combination in
/// lexicographic order. Returns false after the last one.
pub(crate) fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in (i + 1)..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Uniform random `k`-subset of `0..n`, sorted.
pub(crate) fn random_subset(n: usize, k: usize, rng: &mut Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.below(n - i);
        pool.swap(i, j);
    }
    let mut s = pool[..k].to_vec();
    s.sort_unstable();
    s
}
