use std::fmt;
use std::sync::Arc;

use smallvec::SmallVec;

use super::descriptor::{fp_poly, prime_factors, same_ring, RingDescriptor};
use crate::error::{Error, Result};

/// Element of the residue field `F_{p^f}`, as a polynomial of degree `< f`
/// in the generator.
#[derive(Clone)]
pub struct ResidueElem {
    desc: Arc<RingDescriptor>,
    c: SmallVec<[u64; 4]>,
}

impl ResidueElem {
    pub fn zero(desc: &Arc<RingDescriptor>) -> Self {
        ResidueElem { desc: desc.clone(), c: SmallVec::from_elem(0, desc.f()) }
    }

    pub fn one(desc: &Arc<RingDescriptor>) -> Self {
        let mut r = Self::zero(desc);
        r.c[0] = 1;
        r
    }

    pub fn from_coeffs(desc: &Arc<RingDescriptor>, coeffs: &[u64]) -> Self {
        let mut r = Self::zero(desc);
        let p = desc.p();
        let m: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
        let red = fp_poly::rem(&m, desc.modulus(), p);
        for (i, v) in red.into_iter().enumerate() {
            r.c[i] = v;
        }
        r
    }

    /// The element whose coefficients are the base-`p` digits of `idx`
    /// (constant term least significant).
    pub fn from_index(desc: &Arc<RingDescriptor>, mut idx: u64) -> Self {
        let mut r = Self::zero(desc);
        for i in 0..desc.f() {
            r.c[i] = idx % desc.p();
            idx /= desc.p();
        }
        r
    }

    pub fn index(&self) -> u64 {
        self.c.iter().rev().fold(0, |acc, &v| acc * self.desc.p() + v)
    }

    /// All `p^f` elements in index order.
    pub fn all(desc: &Arc<RingDescriptor>) -> impl Iterator<Item = ResidueElem> + '_ {
        (0..desc.residue_size()).map(move |i| ResidueElem::from_index(desc, i))
    }

    /// The same residue viewed through another descriptor of the same field.
    pub fn with_descriptor(&self, desc: &Arc<RingDescriptor>) -> Self {
        debug_assert!(desc.p() == self.desc.p() && desc.modulus() == self.desc.modulus());
        ResidueElem { desc: desc.clone(), c: self.c.clone() }
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor> {
        &self.desc
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&v| v == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ring(&self.desc, &other.desc) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.desc.p();
        let mut r = self.clone();
        for (a, b) in r.c.iter_mut().zip(other.c.iter()) {
            *a = (*a + b) % p;
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.desc.p();
        let mut r = self.clone();
        for (a, b) in r.c.iter_mut().zip(other.c.iter()) {
            *a = (*a + p - b) % p;
        }
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        let p = self.desc.p();
        let mut r = self.clone();
        for a in r.c.iter_mut() {
            *a = (p - *a) % p;
        }
        r
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let p = self.desc.p();
        let prod = fp_poly::mulmod(&self.c, &other.c, self.desc.modulus(), p);
        Ok(Self::from_coeffs(&self.desc, &prod))
    }

    pub fn pow(&self, e: u128) -> Self {
        let p = self.desc.p();
        let r = fp_poly::powmod(&self.c, e, self.desc.modulus(), p);
        Self::from_coeffs(&self.desc, &r)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroResidue);
        }
        Ok(self.pow(self.desc.residue_size() as u128 - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroResidue);
        }
        let mut ord = self.desc.residue_size() - 1;
        for l in prime_factors(ord) {
            while ord.is_multiple_of(l) && self.pow((ord / l) as u128).is_one() {
                ord /= l;
            }
        }
        Ok(ord)
    }

    /// Whether `self` is a `d`-th power in `F_{p^f}^*`.
    pub fn is_power(&self, d: u64) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroResidue);
        }
        let q1 = self.desc.residue_size() - 1;
        if d == 0 || !q1.is_multiple_of(d) {
            return Err(Error::NotDivisor(d, q1));
        }
        Ok(self.pow((q1 / d) as u128).is_one())
    }

    /// Smallest-index generator of `F_{p^f}^*`.
    pub fn primitive(desc: &Arc<RingDescriptor>) -> Self {
        let q1 = desc.residue_size() - 1;
        Self::all(desc)
            .skip(1)
            .find(|r| r.order().map(|o| o == q1).unwrap_or(false))
            .expect("finite field has a primitive element")
    }

    /// A generator of the subfield `F_{p^d}^*`, derived from [`Self::primitive`].
    pub fn subfield_generator(desc: &Arc<RingDescriptor>, d: usize) -> Result<Self> {
        if d == 0 || !desc.f().is_multiple_of(d) {
            return Err(Error::NotDivisor(d as u64, desc.f() as u64));
        }
        let q1 = desc.residue_size() - 1;
        let qd1 = desc.p().pow(d as u32) - 1;
        Ok(Self::primitive(desc).pow((q1 / qd1) as u128))
    }
}

impl PartialEq for ResidueElem {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.desc, &other.desc) && self.c == other.c
    }
}
impl Eq for ResidueElem {}

impl fmt::Debug for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c.as_slice())
    }
}

/// Decides whether `r` is a `d`-th power in `F_{p^f}^*` via `r^{(p^f-1)/d} = 1`.
pub fn residue_power_test(r: &ResidueElem, d: u64) -> Result<bool> {
    r.is_power(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_test_examples() {
        let d = RingDescriptor::new(3, 1, 1).unwrap();
        assert!(residue_power_test(&ResidueElem::from_index(&d, 1), 2).unwrap());
        assert!(!residue_power_test(&ResidueElem::from_index(&d, 2), 2).unwrap());
        let d5 = RingDescriptor::new(5, 1, 1).unwrap();
        assert!(residue_power_test(&ResidueElem::from_index(&d5, 4), 2).unwrap());
        assert_eq!(
            residue_power_test(&ResidueElem::zero(&d5), 2).unwrap_err(),
            Error::ZeroResidue
        );
    }

    #[test]
    fn power_test_matches_squaring_table() {
        for (p, f) in [(3u64, 2usize), (5, 1), (5, 2), (7, 1)] {
            let d = RingDescriptor::new(p, f, 1).unwrap();
            let squares: Vec<u64> = ResidueElem::all(&d)
                .skip(1)
                .map(|r| r.checked_mul(&r).unwrap().index())
                .collect();
            for r in ResidueElem::all(&d).skip(1) {
                assert_eq!(residue_power_test(&r, 2).unwrap(), squares.contains(&r.index()));
            }
        }
    }

    #[test]
    fn generators() {
        let d = RingDescriptor::new(3, 2, 1).unwrap();
        let g = ResidueElem::primitive(&d);
        assert_eq!(g.order().unwrap(), 8);
        let g1 = ResidueElem::subfield_generator(&d, 1).unwrap();
        assert_eq!(g1.order().unwrap(), 2);
        for r in ResidueElem::all(&d).skip(1) {
            assert!(r.checked_mul(&r.inverse().unwrap()).unwrap().is_one());
        }
    }
}
