//! The base field `F_q`, `q = p^e` a prime power with `q ≤ 2^16`.
//!
//! Elements are stored as integer encodings: an element `Σ aᵢ xⁱ` of
//! `F_p[x]/(f)` is encoded as the base-`p` integer `Σ aᵢ pⁱ`, so `F_p`
//! elements are just `0..p` and binary-field elements are coefficient
//! bitmasks. Multiplication and inversion go through discrete-log tables
//! built once per context; addition is an XOR for `p = 2` and digit-wise
//! otherwise.
//!
//! The modulus of `F_q` over `F_p` is the minimal monic irreducible
//! polynomial of degree `e`, where polynomials are ordered by their
//! coefficient vectors read as base-`p` integers (highest degree most
//! significant). This makes field construction deterministic across runs
//! and platforms.

use crate::error::{Error, Result};
use rand::Rng;

/// Encoded element of `F_q`. Valid encodings are `0..q`.
pub type FqEl = u16;

/// Arithmetic context for `F_q`.
pub struct FqCtx {
    p: u32,
    e: u32,
    q: u32,
    base_modulus: Vec<FqEl>,
    /// exp[i] = g^i for a fixed generator g, doubled so index sums need no reduction.
    exp: Vec<FqEl>,
    /// log[x] for x in 1..q; log[0] is a sentinel.
    log: Vec<u32>,
}

impl FqCtx {
    /// Build `F_q` with `q = p^e`.
    pub fn new(p: u32, e: u32) -> Result<FqCtx> {
        if !is_prime(p) {
            return Err(Error::Param(format!("p = {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::Param("extension exponent e must be >= 1".into()));
        }
        let q: u64 = (p as u64)
            .checked_pow(e)
            .ok_or_else(|| Error::Param("q = p^e overflows".into()))?;
        if q > 1 << 16 {
            return Err(Error::Param(format!("q = {q} exceeds the supported 2^16")));
        }
        let q = q as u32;
        let base_modulus = minimal_irreducible_fp(p, e);
        let mut ctx = FqCtx {
            p,
            e,
            q,
            base_modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        ctx.build_tables();
        Ok(ctx)
    }

    /// Rebuild a context from an explicit modulus, verifying it.
    pub fn with_modulus(p: u32, e: u32, base_modulus: &[FqEl]) -> Result<FqCtx> {
        let ctx = FqCtx::new(p, e)?;
        if ctx.base_modulus != base_modulus {
            return Err(Error::Format(
                "base modulus does not match the canonical one".into(),
            ));
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus of `F_q` over `F_p`, coefficients `c_0..c_e`.
    pub fn base_modulus(&self) -> &[FqEl] {
        &self.base_modulus
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        // Find a generator of F_q^* using raw polynomial arithmetic.
        let factors = prime_factors((self.q - 1) as u64);
        let mut gen = 0;
        for cand in 2..self.q.max(3) {
            if cand >= self.q {
                break;
            }
            let ok = factors
                .iter()
                .all(|&r| self.pow_raw(cand as FqEl, (self.q as u64 - 1) / r) != 1);
            if ok {
                gen = cand as FqEl;
                break;
            }
        }
        if self.q == 2 {
            gen = 1;
        }
        assert!(gen != 0, "no generator found for F_{q}");

        let order = q - 1;
        let mut exp = vec![0 as FqEl; 2 * order];
        let mut log = vec![u32::MAX; q];
        let mut acc: FqEl = 1;
        for (i, slot) in exp.iter_mut().enumerate().take(order) {
            *slot = acc;
            log[acc as usize] = i as u32;
            acc = self.mul_raw(acc, gen);
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        self.exp = exp;
        self.log = log;
    }

    #[inline]
    pub fn add(&self, a: FqEl, b: FqEl) -> FqEl {
        if self.p == 2 {
            a ^ b
        } else {
            self.add_slow(a, b)
        }
    }

    fn add_slow(&self, a: FqEl, b: FqEl) -> FqEl {
        let p = self.p as u32;
        let (mut a, mut b) = (a as u32, b as u32);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let d = (a % p + b % p) % p;
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out as FqEl
    }

    #[inline]
    pub fn neg(&self, a: FqEl) -> FqEl {
        if self.p == 2 {
            return a;
        }
        let p = self.p as u32;
        let mut a = a as u32;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.e {
            let d = (p - a % p) % p;
            out += d * place;
            place *= p;
            a /= p;
        }
        out as FqEl
    }

    #[inline]
    pub fn sub(&self, a: FqEl, b: FqEl) -> FqEl {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqEl, b: FqEl) -> FqEl {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: FqEl) -> FqEl {
        assert!(a != 0, "inverse of zero in F_q");
        let order = self.q - 1;
        self.exp[(order - self.log[a as usize]) as usize]
    }

    pub fn pow(&self, a: FqEl, n: u64) -> FqEl {
        if a == 0 {
            return if n == 0 { 1 } else { 0 };
        }
        let order = (self.q - 1) as u64;
        let idx = (self.log[a as usize] as u64 * (n % order)) % order;
        self.exp[idx as usize]
    }

    /// Uniform element of `F_q`.
    pub fn rand_el<R: Rng + ?Sized>(&self, rng: &mut R) -> FqEl {
        rng.gen_range(0..self.q) as FqEl
    }

    /// Uniform element of `F_q^*`.
    pub fn rand_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FqEl {
        rng.gen_range(1..self.q) as FqEl
    }

    /// Embed an integer `0..p` as an element of the prime subfield.
    pub fn from_int(&self, v: u32) -> FqEl {
        (v % self.p) as FqEl
    }

    // Raw (table-free) arithmetic used only while bootstrapping the tables.

    fn decode(&self, a: FqEl) -> Vec<u32> {
        let p = self.p;
        let mut v = a as u32;
        let mut out = vec![0u32; self.e as usize];
        for d in out.iter_mut() {
            *d = v % p;
            v /= p;
        }
        out
    }

    fn encode(&self, digits: &[u32]) -> FqEl {
        let p = self.p;
        let mut out = 0u32;
        for &d in digits.iter().rev() {
            out = out * p + d;
        }
        out as FqEl
    }

    fn mul_raw(&self, a: FqEl, b: FqEl) -> FqEl {
        let p = self.p as u64;
        let e = self.e as usize;
        let da = self.decode(a);
        let db = self.decode(b);
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // Reduce modulo the monic base modulus.
        let md: Vec<u64> = self
            .base_modulus
            .iter()
            .map(|&c| {
                let dg = self.decode(c);
                debug_assert!(self.e == 1 || dg[1..].iter().all(|&d| d == 0));
                dg[0] as u64
            })
            .collect();
        for i in (e..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..e {
                let idx = i - e + j;
                prod[idx] = (prod[idx] + p * p - c * md[j] % p) % p;
            }
        }
        let digits: Vec<u32> = prod[..e].iter().map(|&d| d as u32).collect();
        self.encode(&digits)
    }

    fn pow_raw(&self, a: FqEl, mut n: u64) -> FqEl {
        let mut base = a;
        let mut acc: FqEl = 1;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            n >>= 1;
        }
        acc
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Minimal monic irreducible polynomial of degree `e` over `F_p`,
/// coefficients `c_0..c_e` with `c_e = 1`, encoded as prime-subfield elements.
///
/// Polynomials are ordered by the base-`p` integer `Σ cᵢ pⁱ` of the
/// non-leading coefficients.
fn minimal_irreducible_fp(p: u32, e: u32) -> Vec<FqEl> {
    if e == 1 {
        // x itself is the minimal monic degree-1 polynomial.
        return vec![0, 1];
    }
    let e = e as usize;
    let mut counter = 0u64;
    loop {
        let mut coeffs = vec![0u32; e + 1];
        let mut v = counter;
        for c in coeffs.iter_mut().take(e) {
            *c = (v % p as u64) as u32;
            v /= p as u64;
        }
        assert!(v == 0, "no irreducible polynomial found (impossible)");
        coeffs[e] = 1;
        if fp_poly_irreducible(p, &coeffs) {
            return coeffs.iter().map(|&c| c as FqEl).collect();
        }
        counter += 1;
    }
}

/// Irreducibility of a monic degree-d polynomial over F_p:
/// x^(p^d) ≡ x mod f, and gcd(x^(p^(d/r)) − x, f) = 1 for every prime r | d.
fn fp_poly_irreducible(p: u32, f: &[u32]) -> bool {
    let d = f.len() - 1;
    if f[0] == 0 {
        // Divisible by x (degree > 1 here).
        return d == 1;
    }
    let xq = |j: u64| -> Vec<u32> {
        // x^(p^j) mod f by repeated p-th powering.
        let mut t = vec![0u32, 1]; // x
        for _ in 0..j {
            t = fp_poly_pow_mod(p, &t, p as u64, f);
        }
        t
    };
    // x^(p^d) == x mod f
    let mut lhs = xq(d as u64);
    let mut x = vec![0u32, 1];
    fp_poly_trim(&mut lhs);
    fp_poly_trim(&mut x);
    if lhs != x {
        return false;
    }
    for r in prime_factors(d as u64) {
        let mut g = xq(d as u64 / r);
        // g = g - x
        if g.len() < 2 {
            g.resize(2, 0);
        }
        g[1] = (g[1] + p - 1) % p;
        fp_poly_trim(&mut g);
        let gcd = fp_poly_gcd(p, &g, f);
        if gcd.len() != 1 {
            return false;
        }
    }
    true
}

fn fp_poly_trim(f: &mut Vec<u32>) {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
}

fn fp_poly_mul_mod(p: u32, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
    let p64 = p as u64;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let d = m.len() - 1;
    for i in (d..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..d {
            let idx = i - d + j;
            prod[idx] = (prod[idx] + p64 * p64 - c * m[j] as u64 % p64) % p64;
        }
    }
    let mut out: Vec<u32> = prod.iter().take(d.max(1)).map(|&c| c as u32).collect();
    fp_poly_trim(&mut out);
    out
}

fn fp_poly_pow_mod(p: u32, a: &[u32], mut n: u64, m: &[u32]) -> Vec<u32> {
    let mut base = a.to_vec();
    let mut acc = vec![1u32];
    while n > 0 {
        if n & 1 == 1 {
            acc = fp_poly_mul_mod(p, &acc, &base, m);
        }
        base = fp_poly_mul_mod(p, &base, &base, m);
        n >>= 1;
    }
    acc
}

fn fp_poly_rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let p64 = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let db = b.len() - 1;
    let lead_inv = fp_inv(p, b[db]);
    while r.len() > db {
        let c = *r.last().unwrap();
        let top = r.len() - 1;
        if c != 0 {
            let factor = c * lead_inv as u64 % p64;
            for j in 0..=db {
                let idx = top - db + j;
                r[idx] = (r[idx] + p64 * p64 - factor * b[j] as u64 % p64) % p64;
            }
        }
        r.pop();
        while r.len() > 1 && *r.last().unwrap() == 0 {
            r.pop();
        }
        if r.len() <= db {
            break;
        }
    }
    let mut out: Vec<u32> = r.iter().map(|&c| c as u32).collect();
    if out.is_empty() {
        out.push(0);
    }
    fp_poly_trim(&mut out);
    out
}

fn fp_poly_gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_poly_trim(&mut a);
    fp_poly_trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let r = fp_poly_rem(p, &a, &b);
        a = b;
        b = r;
    }
    // Normalize to monic so degree-0 gcds compare equal.
    let lead = *a.last().unwrap();
    if lead != 0 && lead != 1 {
        let inv = fp_inv(p, lead);
        for c in a.iter_mut() {
            *c = (*c as u64 * inv as u64 % p as u64) as u32;
        }
    }
    a
}

fn fp_inv(p: u32, a: u32) -> u32 {
    // Fermat: a^(p-2) mod p.
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut n = p as u64 - 2;
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        n >>= 1;
    }
    acc as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn f2_basics() {
        let f = FqCtx::new(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
        assert_eq!(f.inv(1), 1);
        assert_eq!(f.base_modulus(), &[0, 1]);
    }

    #[test]
    fn f8_field_axioms() {
        let f = FqCtx::new(2, 3).unwrap();
        assert_eq!(f.q(), 8);
        // x^3 + x + 1 is the minimal irreducible of degree 3 over F_2.
        assert_eq!(f.base_modulus(), &[1, 1, 0, 1]);
        for a in 0..8u16 {
            for b in 0..8u16 {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.add(a, b), f.add(b, a));
                for c in 0..8u16 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.pow(a, 7), 1);
            }
        }
    }

    #[test]
    fn f16_and_f9_orders() {
        let f16 = FqCtx::new(2, 4).unwrap();
        // x^4 + x + 1 comes before x^4 + x^3 + 1 in the canonical order.
        assert_eq!(f16.base_modulus(), &[1, 1, 0, 0, 1]);
        let f9 = FqCtx::new(3, 2).unwrap();
        assert_eq!(f9.q(), 9);
        for a in 1..9u16 {
            assert_eq!(f9.pow(a, 8), 1);
            assert_eq!(f9.mul(a, f9.inv(a)), 1);
        }
        // Odd characteristic negation.
        for a in 0..9u16 {
            assert_eq!(f9.add(a, f9.neg(a)), 0);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(FqCtx::new(4, 1).is_err());
        assert!(FqCtx::new(2, 0).is_err());
        assert!(FqCtx::new(2, 17).is_err());
    }

    #[test]
    fn large_field_spot_checks() {
        let f = FqCtx::new(2, 16).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        for _ in 0..200 {
            let a = f.rand_nonzero(&mut rng);
            let b = f.rand_nonzero(&mut rng);
            assert_eq!(f.mul(f.mul(a, b), f.inv(b)), a);
            assert_eq!(f.pow(a, (f.q() - 1) as u64), 1);
        }
    }

    #[test]
    fn odd_prime_field() {
        let f = FqCtx::new(251, 1).unwrap();
        for a in [1u16, 2, 100, 250] {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
        assert_eq!(f.add(250, 1), 0);
    }
}
