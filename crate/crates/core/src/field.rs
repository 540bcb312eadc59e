//! The extension tower `F_q ⊆ F_{q^m}`: element arithmetic, Frobenius maps,
//! ordered `F_q`-bases with change-of-basis data, and the expansion maps
//! `φ_B^vec` / `φ_B^mat` together with their inverses.
//!
//! `F_{q^m}` is built directly over `F_q` (not over `F_p`), with the minimal
//! monic irreducible top modulus in the same canonical polynomial order used
//! for the base modulus, so field construction is deterministic.

use crate::error::{Error, Result};
use crate::fq::{FqCtx, FqEl};
use crate::linalg::{self, MatFq};
use rand::Rng;

/// Serializable description of the tower: `q = p^e`, top degree `m`, and the
/// two canonical moduli.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldParams {
    pub p: u32,
    pub e: u32,
    pub m: u32,
    /// Monic modulus of `F_q` over `F_p`, coefficients `c_0..c_e`.
    pub base_modulus: Vec<FqEl>,
    /// Monic modulus of `F_{q^m}` over `F_q`, coefficients `c_0..c_m`.
    pub top_modulus: Vec<FqEl>,
}

impl FieldParams {
    /// Canonical byte string used inside key files:
    /// `p, e, m` as little-endian u32, then both coefficient lists as u16.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.p.to_le_bytes());
        out.extend_from_slice(&self.e.to_le_bytes());
        out.extend_from_slice(&self.m.to_le_bytes());
        for &c in &self.base_modulus {
            out.extend_from_slice(&c.to_le_bytes());
        }
        for &c in &self.top_modulus {
            out.extend_from_slice(&c.to_le_bytes());
        }
        out
    }

    pub fn byte_len(&self) -> usize {
        12 + 2 * (self.base_modulus.len() + self.top_modulus.len())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<(FieldParams, usize)> {
        let u32_at = |i: usize| -> Result<u32> {
            bytes
                .get(i..i + 4)
                .map(|b| u32::from_le_bytes(b.try_into().unwrap()))
                .ok_or_else(|| Error::Format("field descriptor truncated".into()))
        };
        let p = u32_at(0)?;
        let e = u32_at(4)?;
        let m = u32_at(8)?;
        let need = 12 + 2 * ((e + 1) + (m + 1)) as usize;
        if bytes.len() < need {
            return Err(Error::Format("field descriptor truncated".into()));
        }
        let mut off = 12;
        let mut read_list = |len: usize| -> Vec<FqEl> {
            let v = bytes[off..off + 2 * len]
                .chunks(2)
                .map(|b| u16::from_le_bytes([b[0], b[1]]))
                .collect();
            off += 2 * len;
            v
        };
        let base_modulus = read_list((e + 1) as usize);
        let top_modulus = read_list((m + 1) as usize);
        Ok((
            FieldParams {
                p,
                e,
                m,
                base_modulus,
                top_modulus,
            },
            need,
        ))
    }
}

/// Element of `F_{q^m}`: coefficients on the power basis of the top modulus,
/// length exactly `m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElem {
    coeffs: Vec<FqEl>,
}

impl ExtElem {
    pub fn coeffs(&self) -> &[FqEl] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl std::fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ext{:?}", self.coeffs)
    }
}

/// Arithmetic context for the tower.
pub struct Field {
    params: FieldParams,
    fq: FqCtx,
    /// m×m matrix over F_q of x ↦ x^q on the power basis (columns are images).
    frob: MatFq,
}

/// Build the field tower `F_p ⊆ F_q ⊆ F_{q^m}` with canonical moduli.
pub fn make_field(p: u32, e: u32, m: u32) -> Result<Field> {
    if m == 0 {
        return Err(Error::Param("top extension degree m must be >= 1".into()));
    }
    let fq = FqCtx::new(p, e)?;
    let top_modulus = minimal_irreducible_fq(&fq, m as usize);
    let params = FieldParams {
        p,
        e,
        m,
        base_modulus: fq.base_modulus().to_vec(),
        top_modulus,
    };
    Field::from_parts(params, fq)
}

impl Field {
    /// Rebuild a field from a serialized descriptor, verifying both moduli
    /// against the canonical construction.
    pub fn from_params(params: FieldParams) -> Result<Field> {
        let rebuilt = make_field(params.p, params.e, params.m)?;
        if rebuilt.params != params {
            return Err(Error::Format(
                "field descriptor does not match the canonical moduli".into(),
            ));
        }
        Ok(rebuilt)
    }

    fn from_parts(params: FieldParams, fq: FqCtx) -> Result<Field> {
        let mut field = Field {
            params,
            fq,
            frob: MatFq::zeros(0, 0),
        };
        field.frob = field.build_frobenius_matrix();
        Ok(field)
    }

    fn build_frobenius_matrix(&self) -> MatFq {
        let m = self.m();
        // Column j is the power-basis expansion of (alpha^j)^q = (alpha^q)^j.
        let alpha_q = self.pow_u64(&self.gen(), self.fq.q() as u64);
        let mut col = self.one();
        let mut mat = MatFq::zeros(m, m);
        for j in 0..m {
            for i in 0..m {
                mat.set(i, j, col.coeffs[i]);
            }
            if j + 1 < m {
                col = self.mul(&col, &alpha_q);
            }
        }
        mat
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn fq(&self) -> &FqCtx {
        &self.fq
    }

    pub fn q(&self) -> u32 {
        self.fq.q()
    }

    pub fn m(&self) -> usize {
        self.params.m as usize
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem {
            coeffs: vec![0; self.m()],
        }
    }

    pub fn one(&self) -> ExtElem {
        self.from_fq(1)
    }

    /// The power-basis generator α (the class of x modulo the top modulus).
    pub fn gen(&self) -> ExtElem {
        let mut coeffs = vec![0; self.m()];
        if self.m() == 1 {
            // x ≡ -c_0 mod (x + c_0)
            coeffs[0] = self.fq.neg(self.params.top_modulus[0]);
        } else {
            coeffs[1] = 1;
        }
        ExtElem { coeffs }
    }

    pub fn from_fq(&self, c: FqEl) -> ExtElem {
        let mut coeffs = vec![0; self.m()];
        coeffs[0] = c;
        ExtElem { coeffs }
    }

    pub fn from_coeffs(&self, coeffs: Vec<FqEl>) -> Result<ExtElem> {
        if coeffs.len() != self.m() {
            return Err(Error::Shape(format!(
                "element needs {} coefficients, got {}",
                self.m(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c as u32 >= self.q()) {
            return Err(Error::Param("coefficient out of range for F_q".into()));
        }
        Ok(ExtElem { coeffs })
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.fq.add(x, y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.fq.sub(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtElem {
            coeffs: a.coeffs.iter().map(|&x| self.fq.neg(x)).collect(),
        }
    }

    /// Multiply by a base-field scalar.
    pub fn scale(&self, a: &ExtElem, c: FqEl) -> ExtElem {
        ExtElem {
            coeffs: a.coeffs.iter().map(|&x| self.fq.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let m = self.m();
        let fq = &self.fq;
        let mut prod = vec![0 as FqEl; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = fq.add(prod[i + j], fq.mul(x, y));
            }
        }
        // Reduce modulo the monic top modulus.
        for i in (m..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..m {
                let t = fq.mul(c, self.params.top_modulus[j]);
                prod[i - m + j] = fq.sub(prod[i - m + j], t);
            }
        }
        prod.truncate(m);
        ExtElem { coeffs: prod }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `F_q[x]`.
    pub fn inv(&self, a: &ExtElem) -> Result<ExtElem> {
        if a.is_zero() {
            return Err(Error::Param("inverse of zero in F_{q^m}".into()));
        }
        let fq = &self.fq;
        // r0 = top modulus, r1 = a; maintain t0, t1 with ti ≡ si·modulus + ti·a.
        let mut r0: Vec<FqEl> = self.params.top_modulus.clone();
        let mut r1: Vec<FqEl> = a.coeffs.clone();
        trim(&mut r0);
        trim(&mut r1);
        let mut t0: Vec<FqEl> = vec![0];
        let mut t1: Vec<FqEl> = vec![1];
        while !is_zero_poly(&r1) {
            let (quot, rem) = poly_divmod(fq, &r0, &r1);
            let t2 = poly_sub(fq, &t0, &poly_mul(fq, &quot, &t1));
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        // r0 = gcd (a unit since the modulus is irreducible and a != 0).
        debug_assert_eq!(r0.len(), 1);
        let scale = fq.inv(r0[0]);
        let mut coeffs: Vec<FqEl> = t0.iter().map(|&c| fq.mul(c, scale)).collect();
        coeffs.resize(self.m(), 0);
        Ok(ExtElem { coeffs })
    }

    pub fn pow_u64(&self, a: &ExtElem, mut n: u64) -> ExtElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// The i-th Frobenius power `x ↦ x^{q^i}`; `frob(x, m) = x`.
    pub fn frob(&self, a: &ExtElem, i: usize) -> ExtElem {
        let mut out = a.clone();
        for _ in 0..(i % self.m()) {
            out = ExtElem {
                coeffs: linalg::mul_vec(&self.fq, &self.frob, &out.coeffs)
                    .expect("frobenius matrix is m x m"),
            };
        }
        out
    }

    pub fn rand_el<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElem {
        ExtElem {
            coeffs: (0..self.m()).map(|_| self.fq.rand_el(rng)).collect(),
        }
    }

    pub fn rand_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElem {
        loop {
            let x = self.rand_el(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// `F_q`-dimension of the span of the coordinates of `word` (the rank
    /// weight); equals the rank of the matrix expansion in any basis.
    pub fn rank_weight(&self, word: &[ExtElem]) -> usize {
        let mut red = linalg::RowReducer::new(&self.fq, self.m());
        for x in word {
            red.add_row(&x.coeffs);
        }
        red.rank()
    }

    /// The power basis `(1, α, ..., α^{m-1})` as a QBasis.
    pub fn power_basis(&self) -> QBasis {
        let m = self.m();
        let mut elements = Vec::with_capacity(m);
        let mut acc = self.one();
        let alpha = self.gen();
        for j in 0..m {
            elements.push(acc.clone());
            if j + 1 < m {
                acc = self.mul(&acc, &alpha);
            }
        }
        QBasis {
            elements,
            to_coords: MatFq::identity(m),
            from_coords: MatFq::identity(m),
        }
    }
}

fn trim(f: &mut Vec<FqEl>) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

fn is_zero_poly(f: &[FqEl]) -> bool {
    f.iter().all(|&c| c == 0)
}

fn poly_mul(fq: &FqCtx, a: &[FqEl], b: &[FqEl]) -> Vec<FqEl> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fq.add(out[i + j], fq.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(fq: &FqCtx, a: &[FqEl], b: &[FqEl]) -> Vec<FqEl> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = fq.sub(x, y);
    }
    trim(&mut out);
    out
}

fn poly_divmod(fq: &FqCtx, a: &[FqEl], b: &[FqEl]) -> (Vec<FqEl>, Vec<FqEl>) {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    trim(&mut rem);
    if rem.len() <= db {
        return (vec![0], rem);
    }
    let mut quot = vec![0; rem.len() - db];
    let lead_inv = fq.inv(b[db]);
    while rem.len() > db && !(rem.len() == 1 && rem[0] == 0) {
        let top = rem.len() - 1;
        let c = fq.mul(rem[top], lead_inv);
        if c != 0 {
            quot[top - db] = c;
            for j in 0..=db {
                let t = fq.mul(c, b[j]);
                rem[top - db + j] = fq.sub(rem[top - db + j], t);
            }
        }
        rem.pop();
        trim(&mut rem);
        if rem.len() <= db {
            break;
        }
    }
    if rem.is_empty() {
        rem.push(0);
    }
    trim(&mut quot);
    if quot.is_empty() {
        quot.push(0);
    }
    (quot, rem)
}

/// Minimal monic irreducible polynomial of degree `m` over `F_q`, in the same
/// canonical order as the base modulus (coefficient vectors compared as
/// base-`q` integers, highest degree most significant).
fn minimal_irreducible_fq(fq: &FqCtx, m: usize) -> Vec<FqEl> {
    let q = fq.q() as u64;
    let mut counter = 0u64;
    loop {
        let mut coeffs = vec![0 as FqEl; m + 1];
        let mut v = counter;
        for c in coeffs.iter_mut().take(m) {
            *c = (v % q) as FqEl;
            v /= q;
        }
        assert!(v == 0, "no irreducible polynomial of degree {m} found");
        coeffs[m] = 1;
        if fq_poly_irreducible(fq, &coeffs) {
            return coeffs;
        }
        counter += 1;
    }
}

fn fq_poly_irreducible(fq: &FqCtx, f: &[FqEl]) -> bool {
    let d = f.len() - 1;
    if d == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    // x^(q^j) mod f by repeated q-th powering.
    let xq = |j: u64| -> Vec<FqEl> {
        let mut t = vec![0, 1];
        for _ in 0..j {
            t = fq_poly_pow_mod(fq, &t, fq.q() as u64, f);
        }
        t
    };
    let mut lhs = xq(d as u64);
    trim(&mut lhs);
    if lhs != vec![0, 1] {
        return false;
    }
    for r in crate::fq::prime_factors(d as u64) {
        let mut g = xq(d as u64 / r);
        if g.len() < 2 {
            g.resize(2, 0);
        }
        g[1] = fq.sub(g[1], 1);
        trim(&mut g);
        if fq_poly_gcd(fq, &g, f).len() != 1 {
            return false;
        }
    }
    true
}

fn fq_poly_mul_mod(fq: &FqCtx, a: &[FqEl], b: &[FqEl], modulus: &[FqEl]) -> Vec<FqEl> {
    let prod = poly_mul(fq, a, b);
    let (_, rem) = poly_divmod(fq, &prod, modulus);
    rem
}

fn fq_poly_pow_mod(fq: &FqCtx, a: &[FqEl], mut n: u64, modulus: &[FqEl]) -> Vec<FqEl> {
    let mut base = a.to_vec();
    let mut acc = vec![1];
    while n > 0 {
        if n & 1 == 1 {
            acc = fq_poly_mul_mod(fq, &acc, &base, modulus);
        }
        base = fq_poly_mul_mod(fq, &base, &base, modulus);
        n >>= 1;
    }
    acc
}

fn fq_poly_gcd(fq: &FqCtx, a: &[FqEl], b: &[FqEl]) -> Vec<FqEl> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !is_zero_poly(&b) {
        let (_, r) = poly_divmod(fq, &a, &b);
        a = b;
        b = r;
    }
    a
}

// ---------------------------------------------------------------------------
// Ordered bases and expansion maps
// ---------------------------------------------------------------------------

/// An ordered `F_q`-basis `B = (b_1, ..., b_m)` of `F_{q^m}` with
/// change-of-basis matrices.
#[derive(Clone, Debug)]
pub struct QBasis {
    elements: Vec<ExtElem>,
    /// Maps power-basis coordinates to B-coordinates.
    to_coords: MatFq,
    /// Inverse of `to_coords`.
    from_coords: MatFq,
}

impl QBasis {
    /// Build a basis from explicit elements, verifying independence.
    pub fn new(field: &Field, elements: Vec<ExtElem>) -> Result<QBasis> {
        let m = field.m();
        if elements.len() != m {
            return Err(Error::Param(format!("a basis needs {m} elements")));
        }
        let mut from_coords = MatFq::zeros(m, m);
        for (j, b) in elements.iter().enumerate() {
            for i in 0..m {
                from_coords.set(i, j, b.coeffs()[i]);
            }
        }
        let to_coords = linalg::inverse(field.fq(), &from_coords)
            .ok_or_else(|| Error::Param("basis elements are linearly dependent".into()))?;
        Ok(QBasis {
            elements,
            to_coords,
            from_coords,
        })
    }

    /// Uniformly random basis: rejection-resample until invertible.
    pub fn random<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> QBasis {
        loop {
            let elements: Vec<ExtElem> = (0..field.m()).map(|_| field.rand_el(rng)).collect();
            if let Ok(basis) = QBasis::new(field, elements) {
                return basis;
            }
        }
    }

    pub fn elements(&self) -> &[ExtElem] {
        &self.elements
    }

    pub fn to_coords(&self) -> &MatFq {
        &self.to_coords
    }

    pub fn from_coords(&self) -> &MatFq {
        &self.from_coords
    }

    /// `φ_B(x)`: coordinates of `x` on this basis.
    pub fn phi(&self, field: &Field, x: &ExtElem) -> Vec<FqEl> {
        linalg::mul_vec(field.fq(), &self.to_coords, x.coeffs()).expect("square system")
    }

    /// Inverse of `φ_B`.
    pub fn phi_inv(&self, field: &Field, coords: &[FqEl]) -> Result<ExtElem> {
        let v = linalg::mul_vec(field.fq(), &self.from_coords, coords)?;
        field.from_coeffs(v)
    }

    /// `φ_B^vec`: coordinate i of the word occupies positions i·m .. (i+1)·m.
    pub fn expand_vec(&self, field: &Field, word: &[ExtElem]) -> Vec<FqEl> {
        let mut out = Vec::with_capacity(word.len() * field.m());
        for x in word {
            out.extend(self.phi(field, x));
        }
        out
    }

    /// Inverse of `φ_B^vec`.
    pub fn contract_vec(&self, field: &Field, v: &[FqEl]) -> Result<Vec<ExtElem>> {
        let m = field.m();
        if v.len() % m != 0 {
            return Err(Error::Shape(format!(
                "expanded word length {} is not a multiple of m = {m}",
                v.len()
            )));
        }
        v.chunks(m).map(|c| self.phi_inv(field, c)).collect()
    }

    /// `φ_B^mat`: column i is the B-expansion of coordinate i.
    pub fn expand_mat(&self, field: &Field, word: &[ExtElem]) -> MatFq {
        let m = field.m();
        let mut out = MatFq::zeros(m, word.len());
        for (i, x) in word.iter().enumerate() {
            let col = self.phi(field, x);
            for (j, &c) in col.iter().enumerate() {
                out.set(j, i, c);
            }
        }
        out
    }

    /// Inverse of `φ_B^mat`.
    pub fn contract_mat(&self, field: &Field, mat: &MatFq) -> Result<Vec<ExtElem>> {
        if mat.rows() != field.m() {
            return Err(Error::Shape("matrix has wrong number of rows".into()));
        }
        (0..mat.cols())
            .map(|i| {
                let col: Vec<FqEl> = (0..mat.rows()).map(|j| mat.get(j, i)).collect();
                self.phi_inv(field, &col)
            })
            .collect()
    }
}
