//! Gabidulin and λ-Gabidulin codes: generator matrices, encoding, rank-error
//! decoding, and the samplers for supports, multipliers and rank-t errors.
//!
//! Decoding is linearized-polynomial reconstruction: solve the interpolation
//! system `V(yᵢ) = N(gᵢ)` with `qdeg(V) ≤ t` and `qdeg(N) < k + t`, then
//! extract the message polynomial as the left quotient `N = V ∘ f`. Any
//! received word within rank distance `t = ⌊(n−k)/2⌋` of a codeword decodes
//! to that (unique) codeword; everything else surfaces as `DecodeFailure`.
//! A λ-Gabidulin code decodes through its underlying Gabidulin code after
//! unscaling, correcting up to `⌊t/δ⌋` errors where `δ = rk(λ⁻¹)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::extmat::MatExt;
use crate::field::{ExtElem, Field};
use crate::fq::FqEl;
use crate::linalg::{self, MatFq};
use crate::qpoly::{self, QPoly};
use rand::Rng;

/// Gabidulin code `G(g, k)`: evaluations of q-polynomials of q-degree < k on
/// an `F_q`-independent support `g` of length `n ≤ m`.
#[derive(Clone)]
pub struct GabCode {
    field: Arc<Field>,
    g: Vec<ExtElem>,
    k: usize,
}

/// Outcome of a successful decode.
#[derive(Clone, Debug)]
pub struct Decoded {
    pub codeword: Vec<ExtElem>,
    pub error: Vec<ExtElem>,
    pub message: Vec<ExtElem>,
}

impl GabCode {
    pub fn new(field: Arc<Field>, g: Vec<ExtElem>, k: usize) -> Result<GabCode> {
        let n = g.len();
        if n > field.m() {
            return Err(Error::Param(format!(
                "support length n = {n} exceeds m = {}",
                field.m()
            )));
        }
        if k == 0 || k > n {
            return Err(Error::Param(format!("need 1 <= k <= n, got k = {k}")));
        }
        if field.rank_weight(&g) != n {
            return Err(Error::Param(
                "support coordinates are not F_q-linearly independent".into(),
            ));
        }
        Ok(GabCode { field, g, k })
    }

    /// Random code: support drawn by rejection until `F_q`-independent.
    pub fn random<R: Rng + ?Sized>(
        field: Arc<Field>,
        n: usize,
        k: usize,
        rng: &mut R,
    ) -> Result<GabCode> {
        let g = sample_support(&field, n, rng)?;
        GabCode::new(field, g, k)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn support(&self) -> &[ExtElem] {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Minimum rank distance `d = n − k + 1` (the MRD value).
    pub fn min_distance(&self) -> usize {
        self.n() - self.k + 1
    }

    /// Unique decoding radius `⌊(n−k)/2⌋`.
    pub fn t_max(&self) -> usize {
        (self.n() - self.k) / 2
    }

    /// The k×n generator matrix with entry `(i, j) = g_j^{q^i}`.
    pub fn gen_matrix(&self) -> MatExt {
        let f = &self.field;
        let mut rows = Vec::with_capacity(self.k);
        let mut row = self.g.clone();
        for i in 0..self.k {
            if i > 0 {
                row = row.iter().map(|x| f.frob(x, 1)).collect();
            }
            rows.push(row.clone());
        }
        MatExt::from_rows(rows).expect("rows share length n")
    }

    /// `msg · G`, identical to evaluating the q-polynomial with coefficients
    /// `msg` on the support.
    pub fn encode(&self, msg: &[ExtElem]) -> Result<Vec<ExtElem>> {
        if msg.len() != self.k {
            return Err(Error::Shape(format!(
                "message length {} != k = {}",
                msg.len(),
                self.k
            )));
        }
        let f = &self.field;
        let mut out = Vec::with_capacity(self.n());
        for gj in &self.g {
            let mut x = gj.clone();
            let mut acc = f.mul(&msg[0], &x);
            for mi in &msg[1..] {
                x = f.frob(&x, 1);
                acc = f.add(&acc, &f.mul(mi, &x));
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Decode a received word within rank distance `t_max` of a codeword.
    pub fn decode(&self, y: &[ExtElem]) -> Result<Decoded> {
        if y.len() != self.n() {
            return Err(Error::Shape(format!(
                "received word length {} != n = {}",
                y.len(),
                self.n()
            )));
        }
        let f = &self.field;
        let t = self.t_max();
        let k = self.k;
        let n = self.n();

        // Interpolation system over F_{q^m}: for each position i,
        //   sum_j v_j y_i^{q^j}  -  sum_l n_l g_i^{q^l}  =  0,
        // unknowns (v_0..v_t, n_0..n_{k+t-1}).
        let cols = (t + 1) + (k + t);
        let mut sys = MatExt::zeros(f, n, cols);
        for i in 0..n {
            let mut yq = y[i].clone();
            for j in 0..=t {
                if j > 0 {
                    yq = f.frob(&yq, 1);
                }
                sys.set(i, j, yq.clone());
            }
            let mut gq = self.g[i].clone();
            for l in 0..k + t {
                if l > 0 {
                    gq = f.frob(&gq, 1);
                }
                sys.set(i, t + 1 + l, f.neg(&gq));
            }
        }
        let kernel = sys.kernel(f);
        let Some(sol) = kernel.first() else {
            return Err(Error::DecodeFailure);
        };
        let v = QPoly::from_coeffs(f, sol[..=t].to_vec());
        let nn = QPoly::from_coeffs(f, sol[t + 1..].to_vec());
        if v.is_zero() {
            return Err(Error::DecodeFailure);
        }
        // N = V ∘ f_msg: the message polynomial is the left quotient.
        let (fpoly, rem) = qpoly::skew_divide_left(f, &nn, &v)?;
        if !rem.is_zero() {
            return Err(Error::DecodeFailure);
        }
        if fpoly.qdeg().is_some_and(|d| d >= k) {
            return Err(Error::DecodeFailure);
        }
        let mut message: Vec<ExtElem> = fpoly.coeffs().to_vec();
        message.resize(k, f.zero());
        let codeword = self.encode(&message)?;
        let error: Vec<ExtElem> = y
            .iter()
            .zip(&codeword)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        if f.rank_weight(&error) > t {
            return Err(Error::DecodeFailure);
        }
        Ok(Decoded {
            codeword,
            error,
            message,
        })
    }
}

/// λ-Gabidulin code `G_λ(g, k)`: columns of the Gabidulin generator scaled by
/// nonzero multipliers, generator `G·Diag(λ)`.
#[derive(Clone)]
pub struct LambdaGabCode {
    base: GabCode,
    lambda: Vec<ExtElem>,
    lambda_inv: Vec<ExtElem>,
    delta: usize,
}

impl LambdaGabCode {
    pub fn new(base: GabCode, lambda: Vec<ExtElem>) -> Result<LambdaGabCode> {
        if lambda.len() != base.n() {
            return Err(Error::Shape("multiplier length != n".into()));
        }
        if lambda.iter().any(|l| l.is_zero()) {
            return Err(Error::Param("multipliers must be nonzero".into()));
        }
        let f = base.field().clone();
        let lambda_inv: Vec<ExtElem> = lambda.iter().map(|l| f.inv(l).unwrap()).collect();
        let delta = f.rank_weight(&lambda_inv);
        Ok(LambdaGabCode {
            base,
            lambda,
            lambda_inv,
            delta,
        })
    }

    pub fn field(&self) -> &Arc<Field> {
        self.base.field()
    }

    pub fn base(&self) -> &GabCode {
        &self.base
    }

    pub fn lambda(&self) -> &[ExtElem] {
        &self.lambda
    }

    pub fn lambda_inv(&self) -> &[ExtElem] {
        &self.lambda_inv
    }

    /// `δ = rk(λ⁻¹)`.
    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn k(&self) -> usize {
        self.base.k()
    }

    /// Errors correctable through the base decoder: `⌊t/δ⌋`.
    pub fn correction_capacity(&self) -> usize {
        self.base.t_max() / self.delta
    }

    /// `gen_matrix(base) · Diag(λ)`.
    pub fn gen_matrix(&self) -> MatExt {
        let f = self.field().clone();
        let base = self.base.gen_matrix();
        let mut out = base.clone();
        for i in 0..out.rows() {
            for j in 0..out.cols() {
                out.set(i, j, f.mul(base.get(i, j), &self.lambda[j]));
            }
        }
        out
    }

    pub fn encode(&self, msg: &[ExtElem]) -> Result<Vec<ExtElem>> {
        let f = self.field().clone();
        let c = self.base.encode(msg)?;
        Ok(c
            .iter()
            .zip(&self.lambda)
            .map(|(ci, li)| f.mul(ci, li))
            .collect())
    }

    /// Unscale by `Δ⁻¹`, decode in the base code, rescale. The unscaled error
    /// has rank at most `δ · rk(e)`, so words within `⌊t/δ⌋` decode exactly.
    pub fn decode(&self, y: &[ExtElem]) -> Result<Decoded> {
        if y.len() != self.n() {
            return Err(Error::Shape("received word length != n".into()));
        }
        let f = self.field().clone();
        let unscaled: Vec<ExtElem> = y
            .iter()
            .zip(&self.lambda_inv)
            .map(|(yi, li)| f.mul(yi, li))
            .collect();
        let dec = self.base.decode(&unscaled)?;
        let codeword: Vec<ExtElem> = dec
            .codeword
            .iter()
            .zip(&self.lambda)
            .map(|(ci, li)| f.mul(ci, li))
            .collect();
        let error: Vec<ExtElem> = y
            .iter()
            .zip(&codeword)
            .map(|(a, b)| f.sub(a, b))
            .collect();
        Ok(Decoded {
            codeword,
            error,
            message: dec.message,
        })
    }
}

/// A rank-t error word: `rk_wt(e) = t` exactly.
#[derive(Clone, Debug)]
pub struct RankError {
    pub word: Vec<ExtElem>,
    pub t: usize,
}

/// Random support: an `F_q`-independent n-tuple via rejection (for `n = m`,
/// a random basis).
pub fn sample_support<R: Rng + ?Sized>(
    field: &Field,
    n: usize,
    rng: &mut R,
) -> Result<Vec<ExtElem>> {
    if n == 0 || n > field.m() {
        return Err(Error::Param(format!(
            "support length must satisfy 1 <= n <= m = {}",
            field.m()
        )));
    }
    loop {
        let g: Vec<ExtElem> = (0..n).map(|_| field.rand_el(rng)).collect();
        if field.rank_weight(&g) == n {
            return Ok(g);
        }
    }
}

/// Multiplier word λ with `rk(λ⁻¹) = delta` exactly: draw δ independent
/// elements, set every `λᵢ⁻¹` to a random nonzero element of their span, and
/// resample until the span of the word itself has dimension δ.
pub fn sample_lambda<R: Rng + ?Sized>(
    field: &Field,
    n: usize,
    delta: usize,
    rng: &mut R,
) -> Result<Vec<ExtElem>> {
    if delta == 0 || delta > n.min(field.m()) {
        return Err(Error::Param(format!(
            "delta must satisfy 1 <= delta <= min(n, m), got {delta}"
        )));
    }
    let q = field.q() as u64;
    loop {
        let mu = sample_support(field, delta, rng)?;
        let inv_word: Vec<ExtElem> = (0..n)
            .map(|_| loop {
                let mut acc = field.zero();
                for muj in &mu {
                    let c = field.fq().rand_el(rng);
                    acc = field.add(&acc, &field.scale(muj, c));
                }
                if !acc.is_zero() {
                    break acc;
                }
            })
            .collect();
        debug_assert!(q >= 2);
        if field.rank_weight(&inv_word) == delta {
            return Ok(inv_word
                .iter()
                .map(|x| field.inv(x).expect("nonzero by construction"))
                .collect());
        }
    }
}

/// Error word of rank weight exactly `t`: `e = β · B` with β a t-tuple of
/// independent elements and `B` a full-rank t×n matrix over `F_q`.
pub fn sample_error<R: Rng + ?Sized>(
    field: &Field,
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<RankError> {
    if t > n.min(field.m()) {
        return Err(Error::Param(format!(
            "error rank must satisfy 0 <= t <= min(m, n), got {t}"
        )));
    }
    if t == 0 {
        return Ok(RankError {
            word: vec![field.zero(); n],
            t: 0,
        });
    }
    let beta = sample_support(field, t, rng)?;
    let b = sample_full_rank_matrix(field.fq(), t, n, rng);
    let word: Vec<ExtElem> = (0..n)
        .map(|j| {
            let mut acc = field.zero();
            for (i, bi) in beta.iter().enumerate() {
                acc = field.add(&acc, &field.scale(bi, b.get(i, j)));
            }
            acc
        })
        .collect();
    debug_assert_eq!(field.rank_weight(&word), t);
    Ok(RankError { word, t })
}

/// Rank-`t` error directly in matrix form: `E = A · B` over `F_q` with both
/// factors full rank.
pub fn sample_error_matrix<R: Rng + ?Sized>(
    ctx: &crate::fq::FqCtx,
    m: usize,
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<MatFq> {
    if t > n.min(m) {
        return Err(Error::Param(format!(
            "error rank must satisfy 0 <= t <= min(m, n), got {t}"
        )));
    }
    if t == 0 {
        return Ok(MatFq::zeros(m, n));
    }
    let a = sample_full_rank_matrix(ctx, m, t, rng);
    let b = sample_full_rank_matrix(ctx, t, n, rng);
    let e = linalg::mul(ctx, &a, &b)?;
    debug_assert_eq!(linalg::rank(ctx, &e), t);
    Ok(e)
}

/// Uniform matrix resampled until it has full rank `min(rows, cols)`.
pub fn sample_full_rank_matrix<R: Rng + ?Sized>(
    ctx: &crate::fq::FqCtx,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> MatFq {
    loop {
        let m = MatFq::random(ctx, rows, cols, rng);
        if linalg::rank(ctx, &m) == rows.min(cols) {
            return m;
        }
    }
}

/// Rank weight of a word expressed over `F_q` (fold and take the rank).
pub fn rank_weight_expanded(ctx: &crate::fq::FqCtx, m: usize, v: &[FqEl]) -> Result<usize> {
    Ok(linalg::rank(ctx, &linalg::fold(m, v)?))
}
