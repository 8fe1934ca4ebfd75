use std::fmt;
use std::sync::Arc;

use super::descriptor::{same_ring, RingDescriptor};
use super::ring::UnramifiedRingElem;
use super::Valuation;
use crate::error::{Error, Result};

/// Element `p^v * u` of `K = Frac(O_K)` with `u` a unit known modulo `p^rel`.
///
/// Zero is stored with the absolute precision `v` to which it is known
/// (the value is `0 mod p^v`). The descriptor's `N` caps the relative
/// precision of every result.
#[derive(Clone)]
pub struct ScaledFieldElem {
    unit: UnramifiedRingElem,
    v: i64,
    rel: u32,
    zero: bool,
}

impl ScaledFieldElem {
    /// Exact zero at the cap precision (known to absolute precision `N`).
    pub fn zero(desc: &Arc<RingDescriptor>) -> Self {
        Self::zero_to(desc, desc.precision() as i64)
    }

    /// Zero known modulo `p^abs`.
    pub fn zero_to(desc: &Arc<RingDescriptor>, abs: i64) -> Self {
        ScaledFieldElem { unit: UnramifiedRingElem::zero(desc), v: abs, rel: 0, zero: true }
    }

    pub fn one(desc: &Arc<RingDescriptor>) -> Self {
        ScaledFieldElem {
            unit: UnramifiedRingElem::one(desc),
            v: 0,
            rel: desc.precision(),
            zero: false,
        }
    }

    /// Embed an integral element known modulo `p^N`.
    pub fn from_ring(x: &UnramifiedRingElem) -> Self {
        let desc = x.descriptor();
        let n = desc.precision();
        match x.valuation() {
            Valuation::Infinite => Self::zero_to(desc, n as i64),
            Valuation::Finite(k) => {
                let unit = x.div_p_pow(k as u32).expect("valuation divides");
                ScaledFieldElem { unit, v: k, rel: n - k as u32, zero: false }
            }
        }
    }

    pub fn from_int(desc: &Arc<RingDescriptor>, k: i64) -> Self {
        if k == 0 {
            return Self::zero(desc);
        }
        let p = desc.p() as i64;
        let (mut k, mut v) = (k, 0i64);
        while k % p == 0 {
            k /= p;
            v += 1;
        }
        ScaledFieldElem {
            unit: UnramifiedRingElem::from_int(desc, k),
            v,
            rel: desc.precision(),
            zero: false,
        }
    }

    /// `num / den` for nonzero `den`.
    pub fn from_ratio(desc: &Arc<RingDescriptor>, num: i64, den: i64) -> Result<Self> {
        Self::from_int(desc, num).checked_div(&Self::from_int(desc, den))
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor> {
        self.unit.descriptor()
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn valuation(&self) -> Valuation {
        if self.zero {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.v)
        }
    }

    /// The exponent `v`; for zero, the absolute precision.
    pub fn exponent(&self) -> i64 {
        self.v
    }

    pub fn unit_part(&self) -> &UnramifiedRingElem {
        &self.unit
    }

    pub fn relative_precision(&self) -> u32 {
        self.rel
    }

    /// Largest `a` such that the value is known modulo `p^a`.
    pub fn absolute_precision(&self) -> i64 {
        if self.zero {
            self.v
        } else {
            self.v + self.rel as i64
        }
    }

    fn trunc_unit(u: UnramifiedRingElem, rel: u32) -> UnramifiedRingElem {
        let desc = u.descriptor().clone();
        if rel >= desc.precision() {
            return u;
        }
        let m = desc.p().pow(rel);
        let c = u.coeffs().iter().map(|&x| x % m).collect();
        UnramifiedRingElem::from_digits(&desc, c)
    }

    /// Normalise `p^base * s` where `s` is known modulo `p^width`.
    fn normalize(s: UnramifiedRingElem, base: i64, width: u32) -> Self {
        let desc = s.descriptor().clone();
        let width = width.min(desc.precision());
        let s = Self::trunc_unit(s, width);
        match s.valuation() {
            Valuation::Finite(k) if (k as u32) < width => {
                let unit = s.div_p_pow(k as u32).expect("valuation divides");
                let rel = width - k as u32;
                ScaledFieldElem { unit: Self::trunc_unit(unit, rel), v: base + k, rel, zero: false }
            }
            _ => Self::zero_to(&desc, base + width as i64),
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ring(self.descriptor(), other.descriptor()) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let abs = self.absolute_precision().min(other.absolute_precision());
        let lo = match (self.zero, other.zero) {
            (true, true) => return Self::zero_to(self.descriptor(), abs),
            (true, false) => other.v,
            (false, true) => self.v,
            (false, false) => self.v.min(other.v),
        };
        if abs <= lo {
            return Self::zero_to(self.descriptor(), abs);
        }
        let width = (abs - lo) as u32;
        let shifted = |x: &Self| -> UnramifiedRingElem {
            let k = x.v - lo;
            if x.zero || k >= width as i64 {
                UnramifiedRingElem::zero(x.descriptor())
            } else {
                x.unit.mul_p_pow(k as u32)
            }
        };
        let s = shifted(self).add_unchecked(&shifted(other));
        Self::normalize(s, lo, width)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        match (self.zero, other.zero) {
            (true, true) => Self::zero_to(self.descriptor(), self.v + other.v),
            (true, false) => Self::zero_to(self.descriptor(), self.v + other.v),
            (false, true) => Self::zero_to(self.descriptor(), self.v + other.v),
            (false, false) => {
                let rel = self.rel.min(other.rel);
                let unit = Self::trunc_unit(self.unit.mul_unchecked(&other.unit), rel);
                ScaledFieldElem { unit, v: self.v + other.v, rel, zero: false }
            }
        }
    }

    pub fn neg(&self) -> Self {
        ScaledFieldElem { unit: Self::trunc_unit(self.unit.neg(), self.rel), ..self.clone() }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.zero {
            return Err(Error::NonUnit);
        }
        let inv = self.unit.invert()?;
        Ok(ScaledFieldElem { unit: Self::trunc_unit(inv, self.rel), v: -self.v, rel: self.rel, zero: false })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inverse()?)
    }

    /// Multiply by `p^k` (`k` may be negative).
    pub fn mul_p_pow(&self, k: i64) -> Self {
        ScaledFieldElem { v: self.v + k, ..self.clone() }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul_unchecked(&Self::from_int(self.descriptor(), k))
    }

    /// Restore an integral element known to absolute precision `target`
    /// (at most the cap).
    pub fn to_integral(&self, target: u32) -> Result<UnramifiedRingElem> {
        let desc = self.descriptor();
        if self.absolute_precision() < target as i64 {
            return Err(Error::PrecisionInsufficient(format!(
                "value known to p^{}, need p^{target}",
                self.absolute_precision()
            )));
        }
        if self.zero {
            return Ok(UnramifiedRingElem::zero(desc));
        }
        if self.v < 0 {
            return Err(Error::Integrality(0));
        }
        Ok(self.unit.mul_p_pow(self.v as u32))
    }

    /// Equality of the two values modulo `p^k`.
    pub fn eq_mod(&self, other: &Self, k: i64) -> bool {
        let d = self.add_unchecked(&other.neg());
        match d.valuation() {
            Valuation::Infinite => d.absolute_precision() >= k,
            Valuation::Finite(v) => v >= k,
        }
    }

    /// Same value with the cap moved to a different descriptor of the same ring.
    pub fn with_descriptor(&self, desc: &Arc<RingDescriptor>) -> Result<Self> {
        let rel = self.rel.min(desc.precision());
        let unit = Self::trunc_unit(self.unit.to_precision(desc)?, rel);
        Ok(ScaledFieldElem { unit, v: self.v, rel, zero: self.zero })
    }

    pub(crate) fn map_unit(&self, f: impl FnOnce(&UnramifiedRingElem) -> UnramifiedRingElem) -> Self {
        if self.zero {
            return self.clone();
        }
        ScaledFieldElem { unit: Self::trunc_unit(f(&self.unit), self.rel), ..self.clone() }
    }
}

impl PartialEq for ScaledFieldElem {
    fn eq(&self, other: &Self) -> bool {
        let k = self.absolute_precision().min(other.absolute_precision());
        same_ring(self.descriptor(), other.descriptor()) && self.eq_mod(other, k)
    }
}

impl fmt::Debug for ScaledFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "O(p^{})", self.v)
        } else {
            write!(f, "p^{}*{:?}+O(p^{})", self.v, self.unit, self.absolute_precision())
        }
    }
}
