//! The LGS-McEliece and LGS-Niederreiter encryption schemes: key generation,
//! encryption, decryption, size formulas, and bit-exact key/ciphertext
//! serialization.
//!
//! Key generation builds a secret λ-Gabidulin code over a random basis, draws
//! a stabilizer-filtered random `F_q`-subcode of dimension k', and publishes
//! either a basis of its matrix image (McEliece) or a systematic parity-check
//! matrix of its vector image (Niederreiter). No masking transformation is
//! applied on top of the subcode. All randomness flows from a 32-byte seed
//! through labeled subseeds ("basis", "support", "lambda", "p-matrix-i").

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldParams, QBasis};
use crate::fq::FqEl;
use crate::gabidulin::{self, GabCode, LambdaGabCode};
use crate::linalg::{self, MatFq};
use crate::registry::SchemeParams;
use crate::rng::Seed;
use crate::subcodes::{self, RandomSubcode};
use rand::Rng;

/// Secret key `(B, g, λ, k)` plus the field context and scheme parameters.
pub struct SecretKey {
    pub field: Arc<Field>,
    pub basis: QBasis,
    pub code: LambdaGabCode,
    pub params: SchemeParams,
}

/// McEliece-variant public key: a basis `(G_1, ..., G_{k'})` of the matrix
/// image of the subcode, plus the public error bound.
pub struct PublicKeyMcE {
    pub field: Arc<Field>,
    pub gens: Vec<MatFq>,
    pub t_pub: usize,
}

/// Niederreiter-variant public key: a systematic parity-check matrix of the
/// vector image of the subcode.
pub struct PublicKeyNied {
    pub field: Arc<Field>,
    pub h: MatFq,
    /// Pivot columns of the subcode generator RREF; the identity block of
    /// `h` occupies the complementary columns.
    pub pivots: Vec<usize>,
    pub t_pub: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiphertextMcE {
    pub y: MatFq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiphertextNied {
    pub s: Vec<FqEl>,
}

impl PublicKeyNied {
    pub fn k_prime(&self) -> usize {
        self.h.cols() - self.h.rows()
    }
}

fn keygen_common(params: &SchemeParams, seed: &Seed) -> Result<(SecretKey, RandomSubcode)> {
    params.validate()?;
    let (p, e) = params.p_e()?;
    let field = Arc::new(crate::field::make_field(p, e, params.m as u32)?);
    let n = params.n();

    let basis = QBasis::random(&field, &mut seed.subseed("basis").rng());
    let g = gabidulin::sample_support(&field, n, &mut seed.subseed("support").rng())?;
    let lambda = gabidulin::sample_lambda(
        &field,
        n,
        params.delta,
        &mut seed.subseed("lambda").rng(),
    )?;
    let code = LambdaGabCode::new(GabCode::new(field.clone(), g, params.k)?, lambda)?;
    debug_assert_eq!(code.delta(), params.delta);

    let gen_rows: Vec<Vec<crate::field::ExtElem>> = {
        let gm = code.gen_matrix();
        (0..params.k).map(|i| gm.row(i).to_vec()).collect()
    };
    let parent = subcodes::expanded_generator(&field, &basis, &gen_rows);
    let (sub, _retries) =
        subcodes::filtered_random_subcode(field.fq(), &parent, params.k_prime, field.m(), seed)?;

    Ok((
        SecretKey {
            field,
            basis,
            code,
            params: *params,
        },
        sub,
    ))
}

/// LGS-McEliece key generation.
pub fn keygen_mce(params: &SchemeParams, seed: &Seed) -> Result<(PublicKeyMcE, SecretKey)> {
    let (sk, sub) = keygen_common(params, seed)?;
    let m = sk.field.m();
    let gens: Result<Vec<MatFq>> = (0..sub.gen.rows())
        .map(|r| linalg::fold(m, sub.gen.row(r)))
        .collect();
    Ok((
        PublicKeyMcE {
            field: sk.field.clone(),
            gens: gens?,
            t_pub: params.t_pub(),
        },
        sk,
    ))
}

/// LGS-Niederreiter key generation.
pub fn keygen_nied(params: &SchemeParams, seed: &Seed) -> Result<(PublicKeyNied, SecretKey)> {
    let (sk, sub) = keygen_common(params, seed)?;
    let (h, pivots) = systematic_parity_check(sk.field.fq(), &sub.gen)?;
    Ok((
        PublicKeyNied {
            field: sk.field.clone(),
            h,
            pivots,
            t_pub: params.t_pub(),
        },
        sk,
    ))
}

/// Systematic parity-check matrix of the row space of `gen`: the identity
/// block sits on the non-pivot columns of the generator's RREF, the stored
/// block on the pivot columns.
pub fn systematic_parity_check(
    ctx: &crate::fq::FqCtx,
    gen: &MatFq,
) -> Result<(MatFq, Vec<usize>)> {
    let (rref, pivots) = linalg::rref(ctx, gen);
    let k = pivots.len();
    let ncols = gen.cols();
    let nonpivots: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut h = MatFq::zeros(ncols - k, ncols);
    for (r, &np) in nonpivots.iter().enumerate() {
        h.set(r, np, 1);
        for (j, &pc) in pivots.iter().enumerate() {
            h.set(r, pc, ctx.neg(rref.get(j, np)));
        }
    }
    Ok((h, pivots))
}

/// `Y = Σ xᵢ Gᵢ + E` with `rk(E) = t_pub`.
pub fn encrypt_mce<R: Rng + ?Sized>(
    pk: &PublicKeyMcE,
    x: &[FqEl],
    rng: &mut R,
) -> Result<CiphertextMcE> {
    let Some(first) = pk.gens.first() else {
        return Err(Error::Param("public key has no generators".into()));
    };
    let (m, n) = (first.rows(), first.cols());
    let e = gabidulin::sample_error_matrix(pk.field.fq(), m, n, pk.t_pub, rng)?;
    encrypt_mce_with_error(pk, x, &e)
}

/// Deterministic core of McEliece encryption; the error matrix is supplied
/// by the caller (tests use `E = 0`).
pub fn encrypt_mce_with_error(
    pk: &PublicKeyMcE,
    x: &[FqEl],
    e: &MatFq,
) -> Result<CiphertextMcE> {
    if x.len() != pk.gens.len() {
        return Err(Error::Shape(format!(
            "plaintext length {} != k' = {}",
            x.len(),
            pk.gens.len()
        )));
    }
    let ctx = pk.field.fq();
    let mut y = e.clone();
    for (xi, g) in x.iter().zip(&pk.gens) {
        if *xi != 0 {
            y = y.add(ctx, &g.scale(ctx, *xi))?;
        }
    }
    Ok(CiphertextMcE { y })
}

/// Contract through the secret basis, decode in the λ-Gabidulin code, and
/// express the recovered codeword in the public basis.
pub fn decrypt_mce(sk: &SecretKey, pk_gens: &[MatFq], ct: &CiphertextMcE) -> Result<Vec<FqEl>> {
    let field = &sk.field;
    let y_word = sk.basis.contract_mat(field, &ct.y)?;
    let dec = sk.code.decode(&y_word)?;
    let c_mat = sk.basis.expand_mat(field, &dec.codeword);
    // Solve Σ x_i G_i = C over F_q.
    let stack = MatFq::from_rows(pk_gens.iter().map(linalg::unfold).collect())?;
    linalg::solve(field.fq(), &stack.transpose(), &linalg::unfold(&c_mat))
}

/// `s = e · H̃ᵀ`; the plaintext is the rank-bounded error vector itself.
pub fn encrypt_nied(pk: &PublicKeyNied, e: &[FqEl]) -> Result<CiphertextNied> {
    let m = pk.field.m();
    if e.len() != pk.h.cols() {
        return Err(Error::Shape(format!(
            "error vector length {} != mn = {}",
            e.len(),
            pk.h.cols()
        )));
    }
    let folded = linalg::fold(m, e)?;
    if linalg::rank(pk.field.fq(), &folded) > pk.t_pub {
        return Err(Error::Param(format!(
            "error rank exceeds t_pub = {}",
            pk.t_pub
        )));
    }
    let s = linalg::mul_vec(pk.field.fq(), &pk.h, e)?;
    Ok(CiphertextNied { s })
}

/// Solve for any word with the given syndrome, contract, decode, and expand
/// the recovered error.
pub fn decrypt_nied(sk: &SecretKey, pk: &PublicKeyNied, ct: &CiphertextNied) -> Result<Vec<FqEl>> {
    let field = &sk.field;
    let y = linalg::solve(field.fq(), &pk.h, &ct.s)?;
    let y_word = sk.basis.contract_vec(field, &y)?;
    let dec = sk.code.decode(&y_word)?;
    Ok(sk.basis.expand_vec(field, &dec.error))
}

// ---------------------------------------------------------------------------
// Sizes
// ---------------------------------------------------------------------------

/// Bits per serialized `F_q` element.
pub fn bits_per_element(q: u32) -> u64 {
    (32 - (q - 1).leading_zeros()) as u64
}

/// Public-key and ciphertext sizes of the Niederreiter variant:
/// `k'(mn−k')·log2(q)` and `(mn−k')·log2(q)` bits.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SizeReport {
    pub pk_bits: u64,
    pub pk_bytes: u64,
    /// kB with 1 kB = 1000 bytes, for table comparison.
    pub pk_kb: f64,
    pub ct_bits: u64,
    pub ct_bytes: u64,
}

pub fn sizes(params: &SchemeParams) -> SizeReport {
    let w = bits_per_element(params.q);
    let mn = (params.m * params.n()) as u64;
    let kp = params.k_prime as u64;
    let pk_bits = kp * (mn - kp) * w;
    let ct_bits = (mn - kp) * w;
    let pk_bytes = pk_bits.div_ceil(8);
    let ct_bytes = ct_bits.div_ceil(8);
    SizeReport {
        pk_bits,
        pk_bytes,
        pk_kb: pk_bytes as f64 / 1000.0,
        ct_bits,
        ct_bytes,
    }
}

// ---------------------------------------------------------------------------
// Serialization: magic "LGS1", version, kind byte, field descriptor, payload
// ---------------------------------------------------------------------------

const MAGIC: &[u8; 4] = b"LGS1";
const VERSION: u8 = 1;

const KIND_PK_MCE: u8 = 1;
const KIND_PK_NIED: u8 = 2;
const KIND_SK: u8 = 3;
const KIND_CT_MCE: u8 = 4;
const KIND_CT_NIED: u8 = 5;

struct BitWriter {
    buf: Vec<u8>,
    acc: u64,
    nbits: u32,
}

impl BitWriter {
    fn new() -> Self {
        BitWriter {
            buf: Vec::new(),
            acc: 0,
            nbits: 0,
        }
    }

    /// Append the low `w` bits of `v`, little-endian within the byte stream.
    fn push(&mut self, v: u16, w: u32) {
        self.acc |= (v as u64) << self.nbits;
        self.nbits += w;
        while self.nbits >= 8 {
            self.buf.push((self.acc & 0xff) as u8);
            self.acc >>= 8;
            self.nbits -= 8;
        }
    }

    fn finish(mut self) -> Vec<u8> {
        if self.nbits > 0 {
            self.buf.push((self.acc & 0xff) as u8);
        }
        self.buf
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    acc: u64,
    nbits: u32,
}

impl<'a> BitReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        BitReader {
            bytes,
            pos: 0,
            acc: 0,
            nbits: 0,
        }
    }

    fn read(&mut self, w: u32) -> Result<u16> {
        while self.nbits < w {
            let b = *self
                .bytes
                .get(self.pos)
                .ok_or_else(|| Error::Format("bit stream truncated".into()))?;
            self.acc |= (b as u64) << self.nbits;
            self.nbits += 8;
            self.pos += 1;
        }
        let v = (self.acc & ((1u64 << w) - 1)) as u16;
        self.acc >>= w;
        self.nbits -= w;
        Ok(v)
    }

    fn consumed(&self) -> usize {
        self.pos
    }
}

struct Writer {
    buf: Vec<u8>,
}

impl Writer {
    fn new(kind: u8, field: &FieldParams) -> Self {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.push(VERSION);
        buf.push(kind);
        buf.extend_from_slice(&field.to_bytes());
        Writer { buf }
    }

    fn u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    fn packed(&mut self, q: u32, elements: impl Iterator<Item = FqEl>) {
        let w = bits_per_element(q) as u32;
        let mut bw = BitWriter::new();
        for e in elements {
            bw.push(e, w);
        }
        let packed = bw.finish();
        self.u32(packed.len() as u32);
        self.buf.extend_from_slice(&packed);
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn open(bytes: &'a [u8], expect_kind: u8) -> Result<(Reader<'a>, FieldParams)> {
        if bytes.len() < 6 || &bytes[..4] != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        if bytes[4] != VERSION {
            return Err(Error::Format(format!("unsupported version {}", bytes[4])));
        }
        if bytes[5] != expect_kind {
            return Err(Error::Format(format!(
                "unexpected object kind {} (wanted {expect_kind})",
                bytes[5]
            )));
        }
        let (field, used) = FieldParams::from_bytes(&bytes[6..])?;
        Ok((
            Reader {
                bytes,
                pos: 6 + used,
            },
            field,
        ))
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self
            .bytes
            .get(self.pos..self.pos + 4)
            .ok_or_else(|| Error::Format("truncated".into()))?;
        self.pos += 4;
        Ok(u32::from_le_bytes(b.try_into().unwrap()))
    }

    fn packed(&mut self, q: u32, count: usize) -> Result<Vec<FqEl>> {
        let len = self.u32()? as usize;
        let bytes = self
            .bytes
            .get(self.pos..self.pos + len)
            .ok_or_else(|| Error::Format("truncated".into()))?;
        self.pos += len;
        let w = bits_per_element(q) as u32;
        let mut br = BitReader::new(bytes);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let v = br.read(w)?;
            if v as u32 >= q {
                return Err(Error::Format("element encoding out of range".into()));
            }
            out.push(v);
        }
        if br.consumed() != len {
            return Err(Error::Format("trailing bytes in packed stream".into()));
        }
        Ok(out)
    }

    fn done(&self) -> Result<()> {
        if self.pos != self.bytes.len() {
            return Err(Error::Format("trailing bytes".into()));
        }
        Ok(())
    }
}

impl PublicKeyMcE {
    pub fn to_bytes(&self) -> Vec<u8> {
        let q = self.field.q();
        let (m, n) = (self.gens[0].rows(), self.gens[0].cols());
        let mut w = Writer::new(KIND_PK_MCE, self.field.params());
        w.u32(self.t_pub as u32);
        w.u32(self.gens.len() as u32);
        w.u32(n as u32);
        let _ = m;
        w.packed(
            q,
            self.gens
                .iter()
                .flat_map(|g| g.data().iter().copied().collect::<Vec<_>>()),
        );
        w.buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<PublicKeyMcE> {
        let (mut r, fp) = Reader::open(bytes, KIND_PK_MCE)?;
        let field = Arc::new(Field::from_params(fp)?);
        let q = field.q();
        let m = field.m();
        let t_pub = r.u32()? as usize;
        let kp = r.u32()? as usize;
        let n = r.u32()? as usize;
        let data = r.packed(q, kp * m * n)?;
        r.done()?;
        let gens: Result<Vec<MatFq>> = data
            .chunks(m * n)
            .map(|c| MatFq::from_data(m, n, c.to_vec()))
            .collect();
        Ok(PublicKeyMcE {
            field,
            gens: gens?,
            t_pub,
        })
    }
}

impl PublicKeyNied {
    pub fn to_bytes(&self) -> Vec<u8> {
        let q = self.field.q();
        let rows = self.h.rows();
        let kp = self.k_prime();
        let mut w = Writer::new(KIND_PK_NIED, self.field.params());
        w.u32(self.t_pub as u32);
        w.u32(kp as u32);
        w.u32(self.h.cols() as u32);
        let canonical = self.pivots.iter().copied().eq(0..kp);
        w.buf.push(u8::from(!canonical));
        if !canonical {
            for &p in &self.pivots {
                w.u32(p as u32);
            }
        }
        // Only the non-identity block: columns at the generator pivots.
        w.packed(
            q,
            (0..rows).flat_map(|r| {
                self.pivots
                    .iter()
                    .map(|&c| self.h.get(r, c))
                    .collect::<Vec<_>>()
            }),
        );
        w.buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<PublicKeyNied> {
        let (mut r, fp) = Reader::open(bytes, KIND_PK_NIED)?;
        let field = Arc::new(Field::from_params(fp)?);
        let q = field.q();
        let t_pub = r.u32()? as usize;
        let kp = r.u32()? as usize;
        let cols = r.u32()? as usize;
        let flagged = *r
            .bytes
            .get(r.pos)
            .ok_or_else(|| Error::Format("truncated".into()))?;
        r.pos += 1;
        let pivots: Vec<usize> = if flagged == 0 {
            (0..kp).collect()
        } else {
            (0..kp)
                .map(|_| r.u32().map(|v| v as usize))
                .collect::<Result<_>>()?
        };
        let rows = cols - kp;
        let block = r.packed(q, rows * kp)?;
        r.done()?;
        let nonpivots: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let mut h = MatFq::zeros(rows, cols);
        for row in 0..rows {
            h.set(row, nonpivots[row], 1);
            for (j, &pc) in pivots.iter().enumerate() {
                h.set(row, pc, block[row * kp + j]);
            }
        }
        Ok(PublicKeyNied {
            field,
            h,
            pivots,
            t_pub,
        })
    }

    /// Bytes beyond the `k'(mn−k')·log2 q` formula (header and, when the
    /// pivot set is not canonical, the pivot list).
    pub fn overhead_bytes(&self) -> usize {
        let formula = sizes_formula_bytes(self.field.q(), self.k_prime(), self.h.cols());
        self.to_bytes().len() - formula
    }
}

fn sizes_formula_bytes(q: u32, k_prime: usize, mn: usize) -> usize {
    let w = bits_per_element(q);
    ((k_prime as u64 * (mn - k_prime) as u64 * w).div_ceil(8)) as usize
}

impl SecretKey {
    pub fn to_bytes(&self) -> Vec<u8> {
        let q = self.field.q();
        let m = self.field.m();
        let mut w = Writer::new(KIND_SK, self.field.params());
        w.u32(self.params.q);
        w.u32(self.params.delta as u32);
        w.u32(self.params.m as u32);
        w.u32(self.params.k as u32);
        w.u32(self.params.k_prime as u32);
        let elems = self
            .basis
            .elements()
            .iter()
            .chain(self.code.base().support())
            .chain(self.code.lambda());
        w.packed(q, elems.flat_map(|e| e.coeffs().iter().copied()));
        let _ = m;
        w.buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<SecretKey> {
        let (mut r, fp) = Reader::open(bytes, KIND_SK)?;
        let field = Arc::new(Field::from_params(fp)?);
        let q = field.q();
        let m = field.m();
        let params = SchemeParams {
            q: r.u32()?,
            delta: r.u32()? as usize,
            m: r.u32()? as usize,
            k: r.u32()? as usize,
            k_prime: r.u32()? as usize,
        };
        if params.q != q || params.m != m {
            return Err(Error::Format("secret key parameters disagree with field".into()));
        }
        let n = params.n();
        let data = r.packed(q, (m + 2 * n) * m)?;
        r.done()?;
        let mut chunks = data.chunks(m);
        let mut take = |count: usize| -> Result<Vec<crate::field::ExtElem>> {
            (0..count)
                .map(|_| field.from_coeffs(chunks.next().unwrap().to_vec()))
                .collect()
        };
        let basis_elems = take(m)?;
        let g = take(n)?;
        let lambda = take(n)?;
        let basis = QBasis::new(&field, basis_elems)?;
        let code = LambdaGabCode::new(GabCode::new(field.clone(), g, params.k)?, lambda)?;
        if code.delta() != params.delta {
            return Err(Error::Format("multiplier rank disagrees with parameters".into()));
        }
        Ok(SecretKey {
            field,
            basis,
            code,
            params,
        })
    }
}

impl CiphertextMcE {
    pub fn to_bytes(&self, field: &Field) -> Vec<u8> {
        let mut w = Writer::new(KIND_CT_MCE, field.params());
        w.u32(self.y.rows() as u32);
        w.u32(self.y.cols() as u32);
        w.packed(field.q(), self.y.data().iter().copied());
        w.buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<(CiphertextMcE, FieldParams)> {
        let (mut r, fp) = Reader::open(bytes, KIND_CT_MCE)?;
        let rows = r.u32()? as usize;
        let cols = r.u32()? as usize;
        let q = {
            let p = fp.p as u64;
            p.pow(fp.e) as u32
        };
        let data = r.packed(q, rows * cols)?;
        r.done()?;
        Ok((
            CiphertextMcE {
                y: MatFq::from_data(rows, cols, data)?,
            },
            fp,
        ))
    }
}

impl CiphertextNied {
    pub fn to_bytes(&self, field: &Field) -> Vec<u8> {
        let mut w = Writer::new(KIND_CT_NIED, field.params());
        w.u32(self.s.len() as u32);
        w.packed(field.q(), self.s.iter().copied());
        w.buf
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<(CiphertextNied, FieldParams)> {
        let (mut r, fp) = Reader::open(bytes, KIND_CT_NIED)?;
        let len = r.u32()? as usize;
        let q = {
            let p = fp.p as u64;
            p.pow(fp.e) as u32
        };
        let s = r.packed(q, len)?;
        r.done()?;
        Ok((CiphertextNied { s }, fp))
    }
}
