use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of the coefficient ring `W(F_{p^f}) / p^N`.
///
/// The ring is realised as `(Z / p^N)[x] / (m(x))` where `m` is a monic
/// integer polynomial of degree `f` whose reduction mod `p` is irreducible.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    p: u64,
    f: usize,
    precision: u32,
    /// `f + 1` coefficients, degree ascending, last one is 1.
    modulus: Vec<u64>,
    pn: u64,
}

/// Wire form of a descriptor, as it appears inside reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorRecord {
    pub p: u64,
    pub f: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub modulus: Vec<u64>,
}

impl RingDescriptor {
    /// Descriptor with the deterministic modulus: the smallest monic
    /// irreducible of degree `f` over `F_p`, coefficients compared from
    /// `x^{f-1}` down to the constant term.
    pub fn new(p: u64, f: usize, precision: u32) -> Result<Arc<Self>> {
        check_prime(p)?;
        if f == 0 {
            return Err(Error::InvalidDescriptor("residue degree must be >= 1".into()));
        }
        let modulus = smallest_irreducible(p, f)?;
        Self::build(p, f, precision, modulus)
    }

    /// Descriptor with an explicit modulus (degree ascending, monic, length `f + 1`).
    pub fn with_modulus(p: u64, precision: u32, modulus: Vec<u64>) -> Result<Arc<Self>> {
        check_prime(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidDescriptor("modulus must be monic of degree >= 1".into()));
        }
        let f = modulus.len() - 1;
        let reduced: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if !fp_poly::is_irreducible(&reduced, p) {
            return Err(Error::ReducibleModulus);
        }
        Self::build(p, f, precision, reduced)
    }

    pub fn from_record(rec: &DescriptorRecord) -> Result<Arc<Self>> {
        let d = Self::with_modulus(rec.p, rec.n, rec.modulus.clone())?;
        if d.f != rec.f {
            return Err(Error::InvalidDescriptor("f does not match modulus degree".into()));
        }
        Ok(d)
    }

    fn build(p: u64, f: usize, precision: u32, modulus: Vec<u64>) -> Result<Arc<Self>> {
        if precision == 0 {
            return Err(Error::InvalidDescriptor("precision N must be >= 1".into()));
        }
        let pn = checked_pow(p, precision)
            .filter(|&v| v < (1u64 << 62))
            .ok_or_else(|| Error::InvalidDescriptor(format!("p^N = {p}^{precision} overflows")))?;
        checked_pow(p, f as u32)
            .filter(|&v| v < (1u64 << 62))
            .ok_or_else(|| Error::InvalidDescriptor(format!("p^f = {p}^{f} overflows")))?;
        Ok(Arc::new(RingDescriptor { p, f, precision, modulus, pn }))
    }

    /// Same ring at a different precision.
    pub fn with_precision(&self, precision: u32) -> Result<Arc<Self>> {
        Self::build(self.p, self.f, precision, self.modulus.clone())
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn f(&self) -> usize {
        self.f
    }
    /// Precision exponent `N`.
    pub fn precision(&self) -> u32 {
        self.precision
    }
    /// `p^N`.
    pub fn pn(&self) -> u64 {
        self.pn
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    /// Size of the residue field, `p^f`.
    pub fn residue_size(&self) -> u64 {
        self.p.pow(self.f as u32)
    }

    pub fn record(&self) -> DescriptorRecord {
        DescriptorRecord { p: self.p, f: self.f, n: self.precision, modulus: self.modulus.clone() }
    }

    /// `p^k` for `k <= N` (and 0 beyond).
    pub fn p_pow(&self, k: u32) -> u64 {
        if k >= self.precision {
            0
        } else {
            self.p.pow(k)
        }
    }

    #[inline]
    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.pn {
            s - self.pn
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.pn - b
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        if self.pn <= (1u64 << 32) {
            (a * b) % self.pn
        } else {
            ((a as u128 * b as u128) % self.pn as u128) as u64
        }
    }

    #[inline]
    pub(crate) fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.pn - a
        }
    }

    /// Reduce a signed integer into `[0, p^N)`.
    pub(crate) fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.pn as i128) as u64
    }
}

impl fmt::Debug for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W(F_{}^{})/p^{} mod {:?}", self.p, self.f, self.precision, self.modulus)
    }
}

/// True when both handles name the same ring.
pub(crate) fn same_ring(a: &Arc<RingDescriptor>, b: &Arc<RingDescriptor>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    Ok(())
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

fn smallest_irreducible(p: u64, f: usize) -> Result<Vec<u64>> {
    let count = checked_pow(p, f as u32)
        .ok_or_else(|| Error::InvalidDescriptor("residue field too large".into()))?;
    for idx in 0..count {
        let mut m = Vec::with_capacity(f + 1);
        let mut t = idx;
        for _ in 0..f {
            m.push(t % p);
            t /= p;
        }
        m.push(1);
        if fp_poly::is_irreducible(&m, p) {
            return Ok(m);
        }
    }
    Err(Error::ReducibleModulus)
}

/// Dense polynomial helpers over `F_p`, degree ascending.
pub(crate) mod fp_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a % p, p - 2, p)
    }

    pub fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let mut m = m.to_vec();
        trim(&mut m);
        let dm = m.len() - 1;
        let lead_inv = inv(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let t = r[top] * lead_inv % p;
            if t != 0 {
                for i in 0..=dm {
                    let k = top - dm + i;
                    r[k] = (r[k] + p - t * m[i] % p) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(&r, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        trim(&mut x);
        let mut y = b.to_vec();
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Rabin's test.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let mut m = m.to_vec();
        trim(&mut m);
        if m.len() < 2 {
            return false;
        }
        let n = m.len() - 1;
        if n == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let xq = |k: usize| powmod(&x, (p as u128).pow(k as u32), &m, p);
        if sub(&xq(n), &x, p) != Vec::<u64>::new() {
            return false;
        }
        for l in super::prime_factors(n as u64) {
            let d = sub(&xq(n / l as usize), &x, p);
            let g = gcd(&m, &d, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}
