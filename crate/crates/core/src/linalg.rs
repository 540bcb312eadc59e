//! Dense exact linear algebra over `F_q`: rank, RREF, solve, kernels,
//! Kronecker products, Fold/Unfold, the trace pairing and matrix-code duals.
//!
//! Everything here is exact; there are no tolerance parameters. Matrices are
//! stored row-major with one `u16` encoding per entry. The elimination and
//! multiplication kernels switch to a bit-packed representation when `q = 2`;
//! the packed path is an internal optimization with the same results and the
//! same test surface as the generic path.

use crate::error::{Error, Result};
use crate::fq::{FqCtx, FqEl};
use rand::Rng;

/// Dense matrix over `F_q`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatFq {
    rows: usize,
    cols: usize,
    data: Vec<FqEl>,
}

impl MatFq {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatFq {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = MatFq::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<FqEl>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(MatFq { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<FqEl>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(MatFq {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn random<R: Rng + ?Sized>(ctx: &FqCtx, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| ctx.rand_el(rng)).collect();
        MatFq { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FqEl {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FqEl) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FqEl] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[FqEl] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> MatFq {
        let mut out = MatFq::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn add(&self, ctx: &FqCtx, other: &MatFq) -> Result<MatFq> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("matrix addition shape mismatch".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| ctx.add(a, b))
            .collect();
        Ok(MatFq {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, ctx: &FqCtx, s: FqEl) -> MatFq {
        let data = self.data.iter().map(|&a| ctx.mul(a, s)).collect();
        MatFq {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Vertical stack: self on top of other.
    pub fn vstack(&self, other: &MatFq) -> Result<MatFq> {
        if self.cols != other.cols {
            return Err(Error::Shape("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatFq {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// New matrix keeping only the listed columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> MatFq {
        let mut out = MatFq::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }
}

impl std::fmt::Debug for MatFq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "MatFq {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        if self.rows > 16 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

/// Matrix product over `F_q`.
pub fn mul(ctx: &FqCtx, a: &MatFq, b: &MatFq) -> Result<MatFq> {
    if a.cols != b.rows {
        return Err(Error::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    if ctx.q() == 2 {
        return Ok(mul_packed_f2(a, b));
    }
    let mut out = MatFq::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik == 0 {
                continue;
            }
            let brow = k * b.cols;
            let orow = i * b.cols;
            for j in 0..b.cols {
                let prod = ctx.mul(aik, b.data[brow + j]);
                out.data[orow + j] = ctx.add(out.data[orow + j], prod);
            }
        }
    }
    Ok(out)
}

fn mul_packed_f2(a: &MatFq, b: &MatFq) -> MatFq {
    let words = b.cols.div_ceil(64);
    let mut packed_b = vec![0u64; b.rows * words];
    for r in 0..b.rows {
        for c in 0..b.cols {
            if b.get(r, c) != 0 {
                packed_b[r * words + c / 64] |= 1 << (c % 64);
            }
        }
    }
    let mut out = MatFq::zeros(a.rows, b.cols);
    let mut acc = vec![0u64; words];
    for i in 0..a.rows {
        acc.iter_mut().for_each(|w| *w = 0);
        for k in 0..a.cols {
            if a.get(i, k) != 0 {
                let src = &packed_b[k * words..(k + 1) * words];
                for (w, s) in acc.iter_mut().zip(src) {
                    *w ^= s;
                }
            }
        }
        for c in 0..b.cols {
            out.set(i, c, ((acc[c / 64] >> (c % 64)) & 1) as FqEl);
        }
    }
    out
}

/// Matrix-vector product `A · x`.
pub fn mul_vec(ctx: &FqCtx, a: &MatFq, x: &[FqEl]) -> Result<Vec<FqEl>> {
    if a.cols != x.len() {
        return Err(Error::Shape("matrix-vector shape mismatch".into()));
    }
    let mut out = vec![0; a.rows];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0;
        for (k, &xv) in x.iter().enumerate() {
            acc = ctx.add(acc, ctx.mul(a.get(i, k), xv));
        }
        *o = acc;
    }
    Ok(out)
}

/// Row-vector times matrix `x · A`.
pub fn vec_mul(ctx: &FqCtx, x: &[FqEl], a: &MatFq) -> Result<Vec<FqEl>> {
    if a.rows != x.len() {
        return Err(Error::Shape("vector-matrix shape mismatch".into()));
    }
    let mut out = vec![0; a.cols];
    for (k, &xv) in x.iter().enumerate() {
        if xv == 0 {
            continue;
        }
        let arow = k * a.cols;
        for (j, o) in out.iter_mut().enumerate() {
            *o = ctx.add(*o, ctx.mul(xv, a.data[arow + j]));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Incremental row reduction
// ---------------------------------------------------------------------------

/// Maintains a row space in reduced row echelon form, one row at a time.
///
/// Rows are kept sorted by pivot column with pivot entries normalized to 1
/// and pivot columns eliminated from all other rows, so the accumulated rows
/// are exactly the nonzero rows of the RREF of everything fed in. Feeding
/// rows lazily keeps large stacked systems (like the stabilizer systems,
/// k'(mn−k') rows) out of memory, and callers that only need a rank bound
/// can stop early.
pub struct RowReducer<'a> {
    ctx: &'a FqCtx,
    ncols: usize,
    inner: ReducerImpl,
}

enum ReducerImpl {
    Generic {
        rows: Vec<Vec<FqEl>>,
        pivots: Vec<usize>,
    },
    PackedF2 {
        words: usize,
        rows: Vec<Vec<u64>>,
        pivots: Vec<usize>,
    },
}

impl<'a> RowReducer<'a> {
    pub fn new(ctx: &'a FqCtx, ncols: usize) -> Self {
        let inner = if ctx.q() == 2 {
            ReducerImpl::PackedF2 {
                words: ncols.div_ceil(64).max(1),
                rows: Vec::new(),
                pivots: Vec::new(),
            }
        } else {
            ReducerImpl::Generic {
                rows: Vec::new(),
                pivots: Vec::new(),
            }
        };
        RowReducer { ctx, ncols, inner }
    }

    pub fn rank(&self) -> usize {
        match &self.inner {
            ReducerImpl::Generic { pivots, .. } => pivots.len(),
            ReducerImpl::PackedF2 { pivots, .. } => pivots.len(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> &[usize] {
        match &self.inner {
            ReducerImpl::Generic { pivots, .. } => pivots,
            ReducerImpl::PackedF2 { pivots, .. } => pivots,
        }
    }

    /// Reduce `row` against the current basis and insert the residual if it
    /// is nonzero. Returns true when the rank grew.
    pub fn add_row(&mut self, row: &[FqEl]) -> bool {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        match &mut self.inner {
            ReducerImpl::Generic { rows, pivots } => {
                let ctx = self.ctx;
                let mut r = row.to_vec();
                for (i, &p) in pivots.iter().enumerate() {
                    let c = r[p];
                    if c != 0 {
                        let prow = &rows[i];
                        for (x, y) in r.iter_mut().zip(prow) {
                            *x = ctx.sub(*x, ctx.mul(c, *y));
                        }
                    }
                }
                let Some(lead) = r.iter().position(|&v| v != 0) else {
                    return false;
                };
                let inv = ctx.inv(r[lead]);
                for x in r.iter_mut() {
                    *x = ctx.mul(*x, inv);
                }
                // Eliminate the new pivot column from existing rows.
                for prow in rows.iter_mut() {
                    let c = prow[lead];
                    if c != 0 {
                        for (x, y) in prow.iter_mut().zip(&r) {
                            *x = ctx.sub(*x, ctx.mul(c, *y));
                        }
                    }
                }
                let at = pivots.partition_point(|&p| p < lead);
                pivots.insert(at, lead);
                rows.insert(at, r);
                true
            }
            ReducerImpl::PackedF2 {
                words,
                rows,
                pivots,
            } => {
                let mut r = vec![0u64; *words];
                for (c, &v) in row.iter().enumerate() {
                    if v != 0 {
                        r[c / 64] |= 1 << (c % 64);
                    }
                }
                add_row_packed(&mut r, rows, pivots)
            }
        }
    }

    /// True when `row` lies in the span of the rows added so far.
    pub fn contains(&self, row: &[FqEl]) -> bool {
        assert_eq!(row.len(), self.ncols);
        match &self.inner {
            ReducerImpl::Generic { rows, pivots } => {
                let ctx = self.ctx;
                let mut r = row.to_vec();
                for (i, &p) in pivots.iter().enumerate() {
                    let c = r[p];
                    if c != 0 {
                        for (x, y) in r.iter_mut().zip(&rows[i]) {
                            *x = ctx.sub(*x, ctx.mul(c, *y));
                        }
                    }
                }
                r.iter().all(|&v| v == 0)
            }
            ReducerImpl::PackedF2 { words, rows, .. } => {
                let mut r = vec![0u64; *words];
                for (c, &v) in row.iter().enumerate() {
                    if v != 0 {
                        r[c / 64] |= 1 << (c % 64);
                    }
                }
                for prow in rows {
                    let lead = leading_bit(prow).unwrap();
                    if (r[lead / 64] >> (lead % 64)) & 1 == 1 {
                        for (x, y) in r.iter_mut().zip(prow) {
                            *x ^= y;
                        }
                    }
                }
                r.iter().all(|&w| w == 0)
            }
        }
    }

    /// The accumulated RREF rows (nonzero rows only, sorted by pivot).
    pub fn basis_rows(&self) -> Vec<Vec<FqEl>> {
        match &self.inner {
            ReducerImpl::Generic { rows, .. } => rows.clone(),
            ReducerImpl::PackedF2 { rows, .. } => rows
                .iter()
                .map(|r| {
                    (0..self.ncols)
                        .map(|c| ((r[c / 64] >> (c % 64)) & 1) as FqEl)
                        .collect()
                })
                .collect(),
        }
    }

    /// Basis of the right kernel {x : M x = 0} of the accumulated row space,
    /// one vector per non-pivot column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<FqEl>> {
        let ctx = self.ctx;
        let pivots = self.pivots().to_vec();
        let rows = self.basis_rows();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for j in 0..self.ncols {
            if pivot_set.contains(&j) {
                continue;
            }
            let mut v = vec![0; self.ncols];
            v[j] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = ctx.neg(rows[i][j]);
            }
            out.push(v);
        }
        out
    }
}

fn add_row_packed(r: &mut Vec<u64>, rows: &mut Vec<Vec<u64>>, pivots: &mut Vec<usize>) -> bool {
    for (i, &p) in pivots.iter().enumerate() {
        if (r[p / 64] >> (p % 64)) & 1 == 1 {
            for (x, y) in r.iter_mut().zip(&rows[i]) {
                *x ^= y;
            }
        }
    }
    let Some(lead) = leading_bit(r) else {
        return false;
    };
    for prow in rows.iter_mut() {
        if (prow[lead / 64] >> (lead % 64)) & 1 == 1 {
            for (x, y) in prow.iter_mut().zip(r.iter()) {
                *x ^= y;
            }
        }
    }
    let at = pivots.partition_point(|&p| p < lead);
    pivots.insert(at, lead);
    rows.insert(at, std::mem::take(r));
    true
}

fn leading_bit(r: &[u64]) -> Option<usize> {
    for (w, &word) in r.iter().enumerate() {
        if word != 0 {
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// RREF, rank, solve, kernel
// ---------------------------------------------------------------------------

/// Reduced row echelon form with its pivot columns.
///
/// Pivot selection is leftmost nonzero column, first suitable row; the output
/// keeps the nonzero RREF rows on top and zero rows at the bottom, which makes
/// it deterministic (RREF itself is unique for a given row space).
pub fn rref(ctx: &FqCtx, a: &MatFq) -> (MatFq, Vec<usize>) {
    let mut red = RowReducer::new(ctx, a.cols);
    for r in 0..a.rows {
        red.add_row(a.row(r));
    }
    let pivots = red.pivots().to_vec();
    let rows = red.basis_rows();
    let mut out = MatFq::zeros(a.rows, a.cols);
    for (i, row) in rows.into_iter().enumerate() {
        out.data[i * a.cols..(i + 1) * a.cols].copy_from_slice(&row);
    }
    (out, pivots)
}

pub fn rank(ctx: &FqCtx, a: &MatFq) -> usize {
    let mut red = RowReducer::new(ctx, a.cols);
    for r in 0..a.rows {
        red.add_row(a.row(r));
    }
    red.rank()
}

/// Canonical solution of `A x = b` (free variables set to zero).
pub fn solve(ctx: &FqCtx, a: &MatFq, b: &[FqEl]) -> Result<Vec<FqEl>> {
    if b.len() != a.rows {
        return Err(Error::Shape("solve: rhs length mismatch".into()));
    }
    // RREF of the augmented matrix [A | b].
    let mut aug = MatFq::zeros(a.rows, a.cols + 1);
    for r in 0..a.rows {
        aug.data[r * (a.cols + 1)..r * (a.cols + 1) + a.cols].copy_from_slice(a.row(r));
        aug.set(r, a.cols, b[r]);
    }
    let (r, pivots) = rref(ctx, &aug);
    if pivots.contains(&a.cols) {
        return Err(Error::NoSolution);
    }
    let mut x = vec![0; a.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = r.get(i, a.cols);
    }
    Ok(x)
}

/// Basis of the right kernel `{x : A x = 0}`.
pub fn kernel(ctx: &FqCtx, a: &MatFq) -> Vec<Vec<FqEl>> {
    let mut red = RowReducer::new(ctx, a.cols);
    for r in 0..a.rows {
        red.add_row(a.row(r));
    }
    red.kernel_basis()
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(ctx: &FqCtx, a: &MatFq) -> Option<MatFq> {
    if a.rows != a.cols {
        return None;
    }
    let n = a.rows;
    let mut aug = MatFq::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug.set(r, c, a.get(r, c));
        }
        aug.set(r, n + r, 1);
    }
    let (rr, pivots) = rref(ctx, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut out = MatFq::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out.set(r, c, rr.get(r, n + c));
        }
    }
    Some(out)
}

// ---------------------------------------------------------------------------
// Fold / Unfold / vec / Kronecker / trace pairing
// ---------------------------------------------------------------------------

/// Fold a length-`mn` vector into an `m×n` matrix, `m` consecutive entries
/// per column: entry `v[i·m + j]` lands in row `j`, column `i`.
pub fn fold(m: usize, v: &[FqEl]) -> Result<MatFq> {
    if m == 0 || v.len() % m != 0 {
        return Err(Error::Shape(format!(
            "cannot fold length {} into {} rows",
            v.len(),
            m
        )));
    }
    let n = v.len() / m;
    let mut out = MatFq::zeros(m, n);
    for i in 0..n {
        for j in 0..m {
            out.set(j, i, v[i * m + j]);
        }
    }
    Ok(out)
}

/// Inverse of [`fold`]: read the matrix column by column.
pub fn unfold(a: &MatFq) -> Vec<FqEl> {
    let mut out = Vec::with_capacity(a.rows * a.cols);
    for i in 0..a.cols {
        for j in 0..a.rows {
            out.push(a.get(j, i));
        }
    }
    out
}

/// Column-stacking vectorization `vec(M)`.
///
/// As a flat sequence this equals [`unfold`] — `vec(M) = Unfold(M)^T` — the
/// two only differ in whether the result is used as a column or a row vector.
pub fn vec_col(a: &MatFq) -> Vec<FqEl> {
    unfold(a)
}

/// Kronecker product `A ⊗ B`: shape `(a.rows·b.rows) × (a.cols·b.cols)`.
pub fn kron(ctx: &FqCtx, a: &MatFq, b: &MatFq) -> MatFq {
    let mut out = MatFq::zeros(a.rows * b.rows, a.cols * b.cols);
    for i1 in 0..a.rows {
        for j1 in 0..a.cols {
            let s = a.get(i1, j1);
            if s == 0 {
                continue;
            }
            for i2 in 0..b.rows {
                for j2 in 0..b.cols {
                    out.set(
                        i1 * b.rows + i2,
                        j1 * b.cols + j2,
                        ctx.mul(s, b.get(i2, j2)),
                    );
                }
            }
        }
    }
    out
}

/// `Tr(M N^T)`, which equals the dot product of the unfoldings.
pub fn trace_pairing(ctx: &FqCtx, m: &MatFq, n: &MatFq) -> Result<FqEl> {
    if m.rows != n.rows || m.cols != n.cols {
        return Err(Error::Shape("trace pairing shape mismatch".into()));
    }
    let mut acc = 0;
    for (&a, &b) in m.data.iter().zip(&n.data) {
        acc = ctx.add(acc, ctx.mul(a, b));
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Matrix codes
// ---------------------------------------------------------------------------

/// `F_q`-basis of a matrix code: `dim` linearly independent `m×n` matrices.
#[derive(Clone, Debug)]
pub struct MatrixCodeBasis {
    gens: Vec<MatFq>,
}

impl MatrixCodeBasis {
    /// Validates that the generators are independent (rank of the unfolded stack).
    pub fn new(ctx: &FqCtx, gens: Vec<MatFq>) -> Result<Self> {
        if let Some(first) = gens.first() {
            let (m, n) = (first.rows(), first.cols());
            if gens.iter().any(|g| g.rows() != m || g.cols() != n) {
                return Err(Error::Shape("matrix code generators differ in shape".into()));
            }
            let mut red = RowReducer::new(ctx, m * n);
            for g in &gens {
                if !red.add_row(&unfold(g)) {
                    return Err(Error::Param(
                        "matrix code generators are linearly dependent".into(),
                    ));
                }
            }
        }
        Ok(MatrixCodeBasis { gens })
    }

    /// A basis holding possibly-dependent generators is rejected by `new`;
    /// this constructor skips the check for callers that already know.
    pub fn new_unchecked(gens: Vec<MatFq>) -> Self {
        MatrixCodeBasis { gens }
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn gens(&self) -> &[MatFq] {
        &self.gens
    }

    pub fn shape(&self) -> Option<(usize, usize)> {
        self.gens.first().map(|g| (g.rows(), g.cols()))
    }

    /// Generators transposed, i.e. a basis of `{Gᵀ : G ∈ C}`.
    pub fn transposed(&self) -> MatrixCodeBasis {
        MatrixCodeBasis {
            gens: self.gens.iter().map(|g| g.transpose()).collect(),
        }
    }
}

/// Basis of the dual matrix code under the trace pairing.
///
/// `dim(dual) = mn − k'` always, and the double dual spans the original code.
pub fn matrix_code_dual(ctx: &FqCtx, code: &MatrixCodeBasis, m: usize, n: usize) -> Vec<MatFq> {
    let mut red = RowReducer::new(ctx, m * n);
    for g in code.gens() {
        red.add_row(&unfold(g));
    }
    red.kernel_basis()
        .into_iter()
        .map(|v| fold(m, &v).expect("kernel vector has length mn"))
        .collect()
}
