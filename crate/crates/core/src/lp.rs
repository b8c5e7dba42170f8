//! Standard-form sparse LP representation, residual/objective evaluation and
//! (eps, delta) certification.
//!
//! The LP is `min c^T x  s.t.  A x = b,  lo <= x <= hi` with `A` stored
//! column-major because the coordinate-descent solver touches one column per
//! step. Inequality rows are expected to arrive already converted to
//! equalities with slack variables (the encoders in [`crate::problems`] do
//! this). Box bounds live on the variables, not as rows of `A`; use
//! [`StandardFormLp::materialize_bounds`] to get the pure `x >= 0` form when
//! an explicit-row formulation is needed.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::norm_inf;

/// Tolerance for the box-bound precondition of [`StandardFormLp::certify`].
pub const BOUNDS_TOL: f64 = 1e-12;

/// Sparse matrix in compressed-sparse-column form with cached per-column
/// squared norms.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
    col_sq_norms: Vec<f64>,
    max_col_sq_norm: f64,
}

impl SparseMatrix {
    /// Builds from `(row, col, value)` triplets. Duplicate `(row, col)` pairs
    /// and out-of-range indices are rejected; explicit zeros are kept.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({r},{c}) out of range for {rows}x{cols} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidMatrix(format!("non-finite value at ({r},{c})")));
            }
        }
        let mut counts = vec![0usize; cols + 1];
        for &(_, c, _) in triplets {
            counts[c + 1] += 1;
        }
        for j in 0..cols {
            counts[j + 1] += counts[j];
        }
        let col_ptr = counts;
        let nnz = triplets.len();
        let mut row_idx = vec![0usize; nnz];
        let mut values = vec![0.0; nnz];
        let mut next = col_ptr.clone();
        for &(r, c, v) in triplets {
            let k = next[c];
            row_idx[k] = r;
            values[k] = v;
            next[c] += 1;
        }
        // Sort each column segment by row and reject duplicates.
        let mut col_sq_norms = vec![0.0; cols];
        let mut max_col_sq_norm = 0.0f64;
        for j in 0..cols {
            let (lo, hi) = (col_ptr[j], col_ptr[j + 1]);
            let mut seg: Vec<(usize, f64)> = row_idx[lo..hi]
                .iter()
                .copied()
                .zip(values[lo..hi].iter().copied())
                .collect();
            seg.sort_by_key(|&(r, _)| r);
            let mut sq = 0.0;
            for (k, &(r, v)) in seg.iter().enumerate() {
                if k > 0 && seg[k - 1].0 == r {
                    return Err(Error::InvalidMatrix(format!(
                        "duplicate entry at ({r},{j})"
                    )));
                }
                row_idx[lo + k] = r;
                values[lo + k] = v;
                sq += v * v;
            }
            col_sq_norms[j] = sq;
            max_col_sq_norm = max_col_sq_norm.max(sq);
        }
        Ok(Self {
            rows,
            cols,
            col_ptr,
            row_idx,
            values,
            col_sq_norms,
            max_col_sq_norm,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entries of column `j` as parallel `(rows, values)` slices.
    #[inline]
    pub fn col(&self, j: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.col_ptr[j], self.col_ptr[j + 1]);
        (&self.row_idx[lo..hi], &self.values[lo..hi])
    }

    #[inline]
    pub fn col_sq_norm(&self, j: usize) -> f64 {
        self.col_sq_norms[j]
    }

    #[inline]
    pub fn max_col_sq_norm(&self) -> f64 {
        self.max_col_sq_norm
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.col_sq_norms.iter().sum()
    }

    /// `A x` into a fresh vector.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.mul_vec_into(x, &mut out);
        out
    }

    /// `out = A x`.
    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        out.fill(0.0);
        for j in 0..self.cols {
            let xj = x[j];
            if xj != 0.0 {
                let (rows, vals) = self.col(j);
                for (&r, &v) in rows.iter().zip(vals) {
                    out[r] += v * xj;
                }
            }
        }
    }

    /// `A^T u` into a fresh vector.
    pub fn mul_transpose_vec(&self, u: &[f64]) -> Vec<f64> {
        debug_assert_eq!(u.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let (rows, vals) = self.col(j);
                rows.iter().zip(vals).map(|(&r, &v)| v * u[r]).sum()
            })
            .collect()
    }

    /// Recomputes column norms and compares against the cache. Exposed for
    /// the invariant tests.
    pub fn col_norm_cache_consistent(&self, rel_tol: f64) -> bool {
        (0..self.cols).all(|j| {
            let (_, vals) = self.col(j);
            let fresh: f64 = vals.iter().map(|v| v * v).sum();
            let cached = self.col_sq_norms[j];
            (fresh - cached).abs() <= rel_tol * fresh.max(1.0)
        })
    }

    /// Dense row-major copy; oracle-only, small matrices.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.rows * self.cols];
        for j in 0..self.cols {
            let (rows, vals) = self.col(j);
            for (&r, &v) in rows.iter().zip(vals) {
                out[r * self.cols + j] = v;
            }
        }
        out
    }
}

/// Optimization sense of the original problem. Maximize instances are stored
/// internally as minimize with negated cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Provenance of a reference objective used for delta certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKind {
    ExactOracle,
    DualBound,
    UserSupplied,
}

impl ReferenceKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReferenceKind::ExactOracle => "exact-oracle",
            ReferenceKind::DualBound => "dual-bound",
            ReferenceKind::UserSupplied => "user-supplied",
        }
    }
}

/// Measured feasibility / objective-gap certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxCertificate {
    /// Max-norm primal residual `||Ax - b||_inf`.
    pub eps: f64,
    /// Relative objective gap against the reference, when one was supplied.
    pub delta: Option<f64>,
    pub reference_kind: Option<ReferenceKind>,
}

/// Sparse LP in standard form with per-variable box bounds.
#[derive(Debug, Clone)]
pub struct StandardFormLp {
    matrix: SparseMatrix,
    rhs: Vec<f64>,
    /// Minimize-form cost; negated from the input when `sense` is Maximize.
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    sense: Sense,
}

impl StandardFormLp {
    /// Builds an LP with default bounds `[0, +inf)` on every variable.
    pub fn new(matrix: SparseMatrix, rhs: Vec<f64>, cost: Vec<f64>, sense: Sense) -> Result<Self> {
        if rhs.len() != matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "rhs has {} entries but matrix has {} rows",
                rhs.len(),
                matrix.rows()
            )));
        }
        if cost.len() != matrix.cols() {
            return Err(Error::DimensionMismatch(format!(
                "cost has {} entries but matrix has {} columns",
                cost.len(),
                matrix.cols()
            )));
        }
        let n = matrix.cols();
        let cost = match sense {
            Sense::Minimize => cost,
            Sense::Maximize => cost.iter().map(|c| -c).collect(),
        };
        Ok(Self {
            matrix,
            rhs,
            cost,
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            sense,
        })
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) -> Result<()> {
        if var >= self.num_cols() {
            return Err(Error::DimensionMismatch(format!(
                "variable {var} out of range"
            )));
        }
        if !(lower <= upper) {
            return Err(Error::BoundsViolation(format!(
                "variable {var}: lower {lower} > upper {upper}"
            )));
        }
        self.lower[var] = lower;
        self.upper[var] = upper;
        Ok(())
    }

    pub fn num_rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Cost vector of the internal minimize form.
    pub fn min_cost(&self) -> &[f64] {
        &self.cost
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn is_maximize(&self) -> bool {
        self.sense == Sense::Maximize
    }

    /// Objective value in the original sense.
    pub fn objective(&self, x: &[f64]) -> f64 {
        let v = crate::linalg::dot(&self.cost, x);
        match self.sense {
            Sense::Minimize => v,
            Sense::Maximize => -v,
        }
    }

    /// Objective value of the internal minimize form.
    pub fn internal_objective(&self, x: &[f64]) -> f64 {
        crate::linalg::dot(&self.cost, x)
    }

    /// Converts a minimize-form objective value back to the original sense.
    pub fn external_value(&self, internal: f64) -> f64 {
        match self.sense {
            Sense::Minimize => internal,
            Sense::Maximize => -internal,
        }
    }

    /// `A x - b` as a dense vector.
    pub fn residual(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.num_cols() {
            return Err(Error::DimensionMismatch(format!(
                "x has {} entries but LP has {} variables",
                x.len(),
                self.num_cols()
            )));
        }
        let mut r = self.matrix.mul_vec(x);
        for (ri, bi) in r.iter_mut().zip(&self.rhs) {
            *ri -= bi;
        }
        Ok(r)
    }

    pub fn clamp_to_bounds(&self, x: &mut [f64]) {
        for (xi, (&lo, &hi)) in x.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *xi = xi.clamp(lo, hi);
        }
    }

    fn check_bounds(&self, x: &[f64]) -> Result<()> {
        for (i, &xi) in x.iter().enumerate() {
            if xi < self.lower[i] - BOUNDS_TOL || xi > self.upper[i] + BOUNDS_TOL {
                return Err(Error::BoundsViolation(format!(
                    "x[{i}] = {xi} outside [{}, {}]",
                    self.lower[i], self.upper[i]
                )));
            }
        }
        Ok(())
    }

    /// Measures `(eps, delta)` for a candidate point. The point must respect
    /// the box bounds up to [`BOUNDS_TOL`]; the reference objective (in the
    /// original sense) must be nonzero when a delta is requested.
    pub fn certify(
        &self,
        x: &[f64],
        reference: Option<(f64, ReferenceKind)>,
    ) -> Result<ApproxCertificate> {
        if x.len() != self.num_cols() {
            return Err(Error::DimensionMismatch(format!(
                "x has {} entries but LP has {} variables",
                x.len(),
                self.num_cols()
            )));
        }
        self.check_bounds(x)?;
        let r = self.residual(x)?;
        let eps = norm_inf(&r);
        match reference {
            None => Ok(ApproxCertificate {
                eps,
                delta: None,
                reference_kind: None,
            }),
            Some((reference_objective, kind)) => {
                if reference_objective == 0.0 {
                    return Err(Error::ZeroReference);
                }
                let delta =
                    (self.objective(x) - reference_objective).abs() / reference_objective.abs();
                Ok(ApproxCertificate {
                    eps,
                    delta: Some(delta),
                    reference_kind: Some(kind),
                })
            }
        }
    }

    /// Rewrites finite bounds as explicit rows so every variable has bounds
    /// `[0, +inf)`:
    ///
    /// * `x_i <= hi` (finite) becomes `x_i + s = hi` with a fresh slack;
    /// * `x_i >= lo` with `lo > 0` becomes `x_i - s = lo`;
    /// * fixed variables (`lo == hi`) are substituted out entirely.
    ///
    /// Returns the pure-form LP together with the indices of the surviving
    /// original variables (in order), so solutions can be mapped back.
    pub fn materialize_bounds(&self) -> Result<(StandardFormLp, Vec<usize>)> {
        let n = self.num_cols();
        let m = self.num_rows();
        let mut rhs = self.rhs.clone();
        let mut kept: Vec<usize> = Vec::with_capacity(n);
        for i in 0..n {
            if self.lower[i] == self.upper[i] {
                let v = self.lower[i];
                if v != 0.0 {
                    let (rows, vals) = self.matrix.col(i);
                    for (&r, &a) in rows.iter().zip(vals) {
                        rhs[r] -= a * v;
                    }
                }
            } else {
                kept.push(i);
            }
        }

        let mut extra_rows = 0usize;
        for &i in &kept {
            if self.lower[i] > 0.0 {
                extra_rows += 1;
            }
            if self.upper[i].is_finite() {
                extra_rows += 1;
            }
        }
        let total_rows = m + extra_rows;
        let total_cols = kept.len() + extra_rows;

        let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
        let mut cost = Vec::with_capacity(total_cols);
        for (new_j, &i) in kept.iter().enumerate() {
            let (rows, vals) = self.matrix.col(i);
            for (&r, &a) in rows.iter().zip(vals) {
                triplets.push((r, new_j, a));
            }
            cost.push(self.cost[i]);
        }
        rhs.resize(total_rows, 0.0);
        let mut next_row = m;
        let mut next_col = kept.len();
        for (new_j, &i) in kept.iter().enumerate() {
            if self.lower[i] > 0.0 {
                triplets.push((next_row, new_j, 1.0));
                triplets.push((next_row, next_col, -1.0));
                rhs[next_row] = self.lower[i];
                cost.push(0.0);
                next_row += 1;
                next_col += 1;
            }
            if self.upper[i].is_finite() {
                triplets.push((next_row, new_j, 1.0));
                triplets.push((next_row, next_col, 1.0));
                rhs[next_row] = self.upper[i];
                cost.push(0.0);
                next_row += 1;
                next_col += 1;
            }
        }
        let matrix = SparseMatrix::from_triplets(total_rows, total_cols, &triplets)?;
        // `cost` above is already the internal minimize form; construct
        // directly so it is not negated a second time.
        let lp = StandardFormLp {
            matrix,
            rhs,
            cost,
            lower: vec![0.0; total_cols],
            upper: vec![f64::INFINITY; total_cols],
            sense: self.sense,
        };
        Ok((lp, kept))
    }

    // ---- text format -----------------------------------------------------
    //
    // Token stream, whitespace-separated, `#` starts a comment that runs to
    // end of line:
    //   m n nnz sense        (sense is `min` or `max`)
    //   b_0 .. b_{m-1}
    //   c_0 .. c_{n-1}       (costs in the original sense)
    //   row col value        (nnz triples, 0-indexed)
    //   lo hi                (n pairs; `inf` / `-inf` allowed)

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let sense = match self.sense {
            Sense::Minimize => "min",
            Sense::Maximize => "max",
        };
        let m = self.num_rows();
        let n = self.num_cols();
        writeln!(out, "{} {} {} {}", m, n, self.matrix.nnz(), sense).unwrap();
        writeln!(out, "{}", join_floats(&self.rhs)).unwrap();
        let external_cost: Vec<f64> = match self.sense {
            Sense::Minimize => self.cost.clone(),
            Sense::Maximize => self.cost.iter().map(|c| -c).collect(),
        };
        writeln!(out, "{}", join_floats(&external_cost)).unwrap();
        for j in 0..n {
            let (rows, vals) = self.matrix.col(j);
            for (&r, &v) in rows.iter().zip(vals) {
                writeln!(out, "{} {} {}", r, j, v).unwrap();
            }
        }
        for i in 0..n {
            writeln!(out, "{} {}", fmt_float(self.lower[i]), fmt_float(self.upper[i])).unwrap();
        }
        out
    }

    pub fn parse_text(input: &str) -> Result<Self> {
        Self::parse_text_named(input, "<string>")
    }

    fn parse_text_named(input: &str, path: &str) -> Result<Self> {
        let mut tokens = Tokens::new(input, path);
        let m = tokens.usize_token("row count")?;
        let n = tokens.usize_token("column count")?;
        let nnz = tokens.usize_token("nnz count")?;
        let sense = match tokens.token("sense")? {
            "min" => Sense::Minimize,
            "max" => Sense::Maximize,
            other => {
                return Err(tokens.error(format!("expected `min` or `max`, got `{other}`")));
            }
        };
        let mut rhs = Vec::with_capacity(m);
        for _ in 0..m {
            rhs.push(tokens.f64_token("rhs value")?);
        }
        let mut cost = Vec::with_capacity(n);
        for _ in 0..n {
            cost.push(tokens.f64_token("cost value")?);
        }
        let mut triplets = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let r = tokens.usize_token("entry row")?;
            let c = tokens.usize_token("entry column")?;
            let v = tokens.f64_token("entry value")?;
            triplets.push((r, c, v));
        }
        let matrix = SparseMatrix::from_triplets(m, n, &triplets)?;
        let mut lp = StandardFormLp::new(matrix, rhs, cost, sense)?;
        for i in 0..n {
            let lo = tokens.f64_token("lower bound")?;
            let hi = tokens.f64_token("upper bound")?;
            lp.set_bounds(i, lo, hi)?;
        }
        if let Some(tok) = tokens.next() {
            return Err(tokens.error(format!("trailing token `{tok}`")));
        }
        Ok(lp)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse_text_named(&text, &path.display().to_string())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn fmt_float(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

fn join_floats(vs: &[f64]) -> String {
    vs.iter().map(|v| fmt_float(*v)).collect::<Vec<_>>().join(" ")
}

struct Tokens<'a> {
    iter: std::iter::Peekable<std::str::Lines<'a>>,
    current: std::str::SplitWhitespace<'a>,
    line: usize,
    path: &'a str,
}

impl<'a> Tokens<'a> {
    fn new(input: &'a str, path: &'a str) -> Self {
        Self {
            iter: input.lines().peekable(),
            current: "".split_whitespace(),
            line: 0,
            path,
        }
    }

    fn next(&mut self) -> Option<&'a str> {
        loop {
            match self.current.next() {
                Some(tok) => return Some(tok),
                None => {
                    let line = self.iter.next()?;
                    self.line += 1;
                    let code = line.split('#').next().unwrap_or("");
                    self.current = code.split_whitespace();
                }
            }
        }
    }

    fn error(&self, msg: String) -> Error {
        Error::Parse {
            path: self.path.to_string(),
            line: self.line,
            msg,
        }
    }

    fn token(&mut self, what: &str) -> Result<&'a str> {
        self.next()
            .ok_or_else(|| self.error(format!("unexpected end of input, expected {what}")))
    }

    fn usize_token(&mut self, what: &str) -> Result<usize> {
        let tok = self.token(what)?;
        tok.parse()
            .map_err(|_| self.error(format!("expected {what}, got `{tok}`")))
    }

    fn f64_token(&mut self, what: &str) -> Result<f64> {
        let tok = self.token(what)?;
        tok.parse()
            .map_err(|_| self.error(format!("expected {what}, got `{tok}`")))
    }
}
