//! Scheme parameters and the built-in registry of named parameter sets
//! ("LGS-128-a" ... "LGS-256-f"), one per published table row, together with
//! the reported work factor and size columns for regression checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of an LGS instance. The code length always equals the
/// extension degree (`n = m`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeParams {
    pub q: u32,
    pub delta: usize,
    pub m: usize,
    pub k: usize,
    pub k_prime: usize,
}

impl SchemeParams {
    pub fn n(&self) -> usize {
        self.m
    }

    /// Public error bound `t_pub = ⌊(n−k) / 2δ⌋`.
    pub fn t_pub(&self) -> usize {
        (self.n() - self.k) / (2 * self.delta)
    }

    /// `(p, e)` with `q = p^e`.
    pub fn p_e(&self) -> Result<(u32, u32)> {
        let q = self.q;
        for p in 2..=q {
            if crate::fq::is_prime(p) && q % p == 0 {
                let mut e = 0;
                let mut v = q;
                while v % p == 0 {
                    v /= p;
                    e += 1;
                }
                if v != 1 {
                    return Err(Error::Param(format!("q = {q} is not a prime power")));
                }
                return Ok((p, e));
            }
        }
        Err(Error::Param(format!("q = {q} is not a prime power")))
    }

    pub fn validate(&self) -> Result<()> {
        self.p_e()?;
        let (m, k, kp, delta) = (self.m, self.k, self.k_prime, self.delta);
        if m == 0 || k == 0 || k >= m {
            return Err(Error::Param(format!("need 1 <= k < n = m, got k={k} m={m}")));
        }
        if delta == 0 || delta > m {
            return Err(Error::Param(format!("need 1 <= delta <= m, got {delta}")));
        }
        if kp == 0 || kp >= k * m {
            return Err(Error::Param(format!(
                "need 1 <= k' < km = {}, got k' = {kp}",
                k * m
            )));
        }
        if kp % m == 0 {
            return Err(Error::Param(format!("m = {m} must not divide k' = {kp}")));
        }
        if self.t_pub() == 0 {
            return Err(Error::Param(
                "t_pub = 0: no error can be corrected, increase n−k or decrease delta".into(),
            ));
        }
        Ok(())
    }
}

/// A registry entry: named parameters plus the published columns.
#[derive(Clone, Copy, Debug)]
pub struct NamedParams {
    pub name: &'static str,
    /// Target security level in bits (128, 192 or 256).
    pub level: u32,
    pub params: SchemeParams,
    /// Published overall work factor (log2).
    pub cf_bits: u32,
    /// Published public-key size in kB (1 kB = 1000 bytes).
    pub pk_kb: f64,
    /// Published ciphertext size in bytes.
    pub ct_bytes: u32,
}

macro_rules! row {
    ($name:literal, $level:literal, $q:literal, $delta:literal, $m:literal, $k:literal,
     $kp:literal, $cf:literal, $pk:literal, $ct:literal) => {
        NamedParams {
            name: $name,
            level: $level,
            params: SchemeParams {
                q: $q,
                delta: $delta,
                m: $m,
                k: $k,
                k_prime: $kp,
            },
            cf_bits: $cf,
            pk_kb: $pk,
            ct_bytes: $ct,
        }
    };
}

/// All published parameter sets, in table order.
pub const REGISTRY: &[NamedParams] = &[
    row!("LGS-128-a", 128, 2, 1, 38, 30, 1125, 131, 44.86, 40),
    row!("LGS-128-b", 128, 8, 1, 20, 14, 270, 135, 13.16, 49),
    row!("LGS-128-c", 128, 2, 1, 34, 24, 800, 131, 35.60, 45),
    row!("LGS-128-d", 128, 16, 1, 17, 11, 183, 142, 9.70, 53),
    row!("LGS-128-e", 128, 2, 1, 32, 18, 564, 137, 32.43, 58),
    row!("LGS-128-f", 128, 2, 2, 46, 30, 1360, 132, 128.52, 95),
    row!("LGS-128-g", 128, 8, 2, 30, 18, 528, 145, 73.66, 140),
    row!("LGS-192-a", 192, 8, 1, 27, 21, 557, 199, 35.93, 65),
    row!("LGS-192-b", 192, 16, 1, 23, 17, 381, 213, 28.19, 74),
    row!("LGS-192-c", 192, 2, 1, 39, 23, 880, 195, 70.51, 81),
    row!("LGS-192-d", 192, 16, 1, 21, 11, 221, 213, 24.31, 110),
    row!("LGS-192-e", 192, 2, 2, 62, 46, 2822, 196, 360.51, 128),
    row!("LGS-192-f", 192, 8, 2, 37, 25, 910, 203, 156.63, 173),
    row!("LGS-256-a", 256, 2, 1, 59, 49, 2881, 259, 216.07, 75),
    row!("LGS-256-b", 256, 2, 1, 47, 31, 1434, 260, 138.92, 97),
    row!("LGS-256-c", 256, 2, 1, 49, 35, 1695, 257, 149.58, 89),
    row!("LGS-256-d", 256, 8, 1, 27, 17, 447, 265, 47.27, 106),
    row!("LGS-256-e", 256, 16, 1, 24, 14, 324, 276, 40.82, 126),
    row!("LGS-256-f", 256, 8, 2, 44, 32, 1388, 269, 285.23, 206),
];

pub fn lookup(name: &str) -> Option<&'static NamedParams> {
    REGISTRY.iter().find(|r| r.name == name)
}

pub fn by_level(level: u32) -> impl Iterator<Item = &'static NamedParams> {
    REGISTRY.iter().filter(move |r| r.level == level)
}
