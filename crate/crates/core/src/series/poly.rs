use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, Serializer};

use super::TruncSeries1;
use crate::error::{Error, Result};
use crate::padic::{same_ring, RingDescriptor, UnramifiedRingElem};

/// Exact polynomial over `O_K / p^N`, trailing zeros trimmed.
#[derive(Clone)]
pub struct Poly {
    desc: Arc<RingDescriptor>,
    c: Vec<UnramifiedRingElem>,
}

impl Poly {
    pub fn new(desc: &Arc<RingDescriptor>, c: Vec<UnramifiedRingElem>) -> Self {
        let mut p = Poly { desc: desc.clone(), c };
        p.trim();
        p
    }

    pub fn from_ints(desc: &Arc<RingDescriptor>, c: &[i64]) -> Self {
        Self::new(desc, c.iter().map(|&v| UnramifiedRingElem::from_int(desc, v)).collect())
    }

    pub fn zero(desc: &Arc<RingDescriptor>) -> Self {
        Poly { desc: desc.clone(), c: Vec::new() }
    }

    pub fn one(desc: &Arc<RingDescriptor>) -> Self {
        Self::monomial(desc, 0, UnramifiedRingElem::one(desc))
    }

    pub fn x(desc: &Arc<RingDescriptor>) -> Self {
        Self::monomial(desc, 1, UnramifiedRingElem::one(desc))
    }

    pub fn monomial(desc: &Arc<RingDescriptor>, k: usize, a: UnramifiedRingElem) -> Self {
        let mut c = vec![UnramifiedRingElem::zero(desc); k];
        c.push(a);
        Self::new(desc, c)
    }

    /// The polynomial part `a_0 + ... + a_{D-1} X^{D-1}` of a series.
    pub fn from_series(s: &TruncSeries1<UnramifiedRingElem>) -> Self {
        Self::new(s.descriptor(), s.coeffs().to_vec())
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|a| a.is_zero()) {
            self.c.pop();
        }
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor> {
        &self.desc
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, k: usize) -> UnramifiedRingElem {
        self.c.get(k).cloned().unwrap_or_else(|| UnramifiedRingElem::zero(&self.desc))
    }

    pub fn coeffs(&self) -> &[UnramifiedRingElem] {
        &self.c
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|a| a.is_one())
    }

    /// Nonzero terms as `(degree, coefficient)`.
    pub fn terms(&self) -> Vec<(usize, UnramifiedRingElem)> {
        self.c.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(k, a)| (k, a.clone())).collect()
    }

    fn check(&self, o: &Self) -> Result<()> {
        if same_ring(&self.desc, &o.desc) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.c.len().max(o.c.len());
        Ok(Self::new(&self.desc, (0..n).map(|k| self.coeff(k).add_unchecked(&o.coeff(k))).collect()))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.c.len().max(o.c.len());
        Ok(Self::new(&self.desc, (0..n).map(|k| self.coeff(k).sub_unchecked(&o.coeff(k))).collect()))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(&self.desc));
        }
        let mut c = vec![UnramifiedRingElem::zero(&self.desc); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j].add_mul_assign(a, b);
                }
            }
        }
        Ok(Self::new(&self.desc, c))
    }

    pub fn scale(&self, a: &UnramifiedRingElem) -> Self {
        Self::new(&self.desc, self.c.iter().map(|x| x.mul_unchecked(a)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.desc, self.c.iter().map(|x| x.neg()).collect())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.desc);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.checked_mul(&b).unwrap();
            }
            e >>= 1;
            if e > 0 {
                b = b.checked_mul(&b).unwrap();
            }
        }
        r
    }

    /// `self(g(X))`, exactly.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check(g)?;
        let mut acc = Self::zero(&self.desc);
        for a in self.c.iter().rev() {
            acc = acc.checked_mul(g)?;
            acc = acc.checked_add(&Self::monomial(&self.desc, 0, a.clone()))?;
        }
        Ok(acc)
    }

    /// Exact quotient by `X^k`; fails if a lower coefficient is nonzero.
    pub fn div_x_pow(&self, k: usize) -> Result<Self> {
        if self.c.iter().take(k).any(|a| !a.is_zero()) {
            return Err(Error::Precondition(format!("polynomial not divisible by X^{k}")));
        }
        Ok(Self::new(&self.desc, self.c.iter().skip(k).cloned().collect()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(&self.desc, self.c.iter().enumerate().skip(1).map(|(k, a)| a.mul_int(k as i64)).collect())
    }

    pub fn eval(&self, x: &UnramifiedRingElem) -> UnramifiedRingElem {
        let mut acc = UnramifiedRingElem::zero(&self.desc);
        for a in self.c.iter().rev() {
            acc = acc.mul_unchecked(x).add_unchecked(a);
        }
        acc
    }

    /// Truncate to a series with `d` terms.
    pub fn to_series(&self, d: usize) -> TruncSeries1<UnramifiedRingElem> {
        TruncSeries1::from_coeffs(&self.desc, d, self.c.clone())
    }

    /// Map coefficients (e.g. through a ring embedding) into another ring.
    pub fn map_to(&self, desc: &Arc<RingDescriptor>, f: impl Fn(&UnramifiedRingElem) -> UnramifiedRingElem) -> Self {
        Self::new(desc, self.c.iter().map(f).collect())
    }

    pub fn coeff_lists(&self) -> Vec<Vec<u64>> {
        self.c.iter().map(|a| a.coeffs().to_vec()).collect()
    }
}

impl PartialEq for Poly {
    fn eq(&self, o: &Self) -> bool {
        same_ring(&self.desc, &o.desc) && self.c == o.c
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms.iter().map(|(k, a)| format!("{a:?}*X^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeff_lists().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_arithmetic() {
        let d = RingDescriptor::new(3, 1, 3).unwrap();
        let f = Poly::from_ints(&d, &[0, 3, 0, 1]);
        let ff = f.compose(&f).unwrap();
        assert_eq!(ff, Poly::from_ints(&d, &[0, 9, 0, 30, 0, 27, 0, 9, 0, 1]));
        assert_eq!(ff.degree(), Some(9));
        assert!(ff.is_monic());
        assert_eq!(f.div_x_pow(1).unwrap(), Poly::from_ints(&d, &[3, 0, 1]));
        assert!(f.div_x_pow(2).is_err());
        let two = UnramifiedRingElem::from_int(&d, 2);
        assert_eq!(f.eval(&two), UnramifiedRingElem::from_int(&d, 14));
        assert_eq!(f.pow(2), f.checked_mul(&f).unwrap());
        // 27 vanishes at N = 3.
        assert_eq!(Poly::from_ints(&d, &[1, 27]).degree(), Some(0));
    }
}
