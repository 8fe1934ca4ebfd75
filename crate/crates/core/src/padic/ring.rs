use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use super::descriptor::{same_ring, RingDescriptor};
use super::residue::ResidueElem;
use super::Valuation;
use crate::error::{Error, Result};

pub(crate) type Digits = SmallVec<[u64; 4]>;

/// Element of `O_K = W(F_{p^f})` known modulo `p^N`.
#[derive(Clone)]
pub struct UnramifiedRingElem {
    desc: Arc<RingDescriptor>,
    c: Digits,
}

impl UnramifiedRingElem {
    pub fn zero(desc: &Arc<RingDescriptor>) -> Self {
        UnramifiedRingElem { desc: desc.clone(), c: SmallVec::from_elem(0, desc.f()) }
    }

    pub fn one(desc: &Arc<RingDescriptor>) -> Self {
        Self::from_int(desc, 1)
    }

    pub fn from_int(desc: &Arc<RingDescriptor>, v: i64) -> Self {
        let mut r = Self::zero(desc);
        r.c[0] = desc.reduce_i128(v as i128);
        r
    }

    /// Polynomial representative `sum c_i x^i`, reduced by the modulus.
    pub fn from_coeffs(desc: &Arc<RingDescriptor>, coeffs: &[i64]) -> Self {
        let f = desc.f();
        let mut wide: SmallVec<[u64; 8]> =
            coeffs.iter().map(|&v| desc.reduce_i128(v as i128)).collect();
        if wide.len() < f {
            wide.resize(f, 0);
        }
        reduce_wide(desc, &mut wide);
        UnramifiedRingElem { desc: desc.clone(), c: wide[..f].iter().copied().collect() }
    }

    pub(crate) fn from_digits(desc: &Arc<RingDescriptor>, c: Digits) -> Self {
        debug_assert_eq!(c.len(), desc.f());
        UnramifiedRingElem { desc: desc.clone(), c }
    }

    /// Coefficient-wise lift of a residue (digits in `[0, p)`).
    pub fn lift_residue(desc: &Arc<RingDescriptor>, r: &ResidueElem) -> Self {
        UnramifiedRingElem { desc: desc.clone(), c: r.coeffs().iter().copied().collect() }
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

    pub fn residue(&self) -> ResidueElem {
        let p = self.desc.p();
        let r: Vec<u64> = self.c.iter().map(|&v| v % p).collect();
        ResidueElem::from_coeffs(&self.desc, &r)
    }

    pub fn is_unit(&self) -> bool {
        let p = self.desc.p();
        self.c.iter().any(|&v| v % p != 0)
    }

    /// Largest `v < N` with `p^v | self`, or `Infinite` when `self = 0 mod p^N`.
    pub fn valuation(&self) -> Valuation {
        let p = self.desc.p();
        let mut best: Option<u32> = None;
        for &v in self.c.iter() {
            if v == 0 {
                continue;
            }
            let mut k = 0;
            let mut t = v;
            while t % p == 0 {
                t /= p;
                k += 1;
            }
            best = Some(best.map_or(k, |b: u32| b.min(k)));
        }
        match best {
            Some(k) => Valuation::Finite(k as i64),
            None => Valuation::Infinite,
        }
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
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let d = &self.desc;
        let mut c = self.c.clone();
        for (a, &b) in c.iter_mut().zip(other.c.iter()) {
            *a = d.add(*a, b);
        }
        UnramifiedRingElem { desc: self.desc.clone(), c }
    }

    pub(crate) fn sub_unchecked(&self, other: &Self) -> Self {
        let d = &self.desc;
        let mut c = self.c.clone();
        for (a, &b) in c.iter_mut().zip(other.c.iter()) {
            *a = d.sub(*a, b);
        }
        UnramifiedRingElem { desc: self.desc.clone(), c }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let d = &self.desc;
        let f = d.f();
        if f == 1 {
            let mut c = self.c.clone();
            c[0] = d.mul(c[0], other.c[0]);
            return UnramifiedRingElem { desc: self.desc.clone(), c };
        }
        let mut wide: SmallVec<[u64; 8]> = SmallVec::from_elem(0, 2 * f - 1);
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                if b != 0 {
                    wide[i + j] = d.add(wide[i + j], d.mul(a, b));
                }
            }
        }
        reduce_wide(d, &mut wide);
        UnramifiedRingElem { desc: self.desc.clone(), c: wide[..f].iter().copied().collect() }
    }

    /// `self += a * b`, skipping descriptor checks.
    pub(crate) fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let d = &self.desc;
        if d.f() == 1 {
            self.c[0] = d.add(self.c[0], d.mul(a.c[0], b.c[0]));
        } else {
            let prod = a.mul_unchecked(b);
            for (x, &y) in self.c.iter_mut().zip(prod.c.iter()) {
                *x = d.add(*x, y);
            }
        }
    }

    pub fn neg(&self) -> Self {
        let d = &self.desc;
        let c = self.c.iter().map(|&v| d.neg(v)).collect();
        UnramifiedRingElem { desc: self.desc.clone(), c }
    }

    pub fn mul_int(&self, k: i64) -> Self {
        let d = &self.desc;
        let kk = d.reduce_i128(k as i128);
        let c = self.c.iter().map(|&v| d.mul(v, kk)).collect();
        UnramifiedRingElem { desc: self.desc.clone(), c }
    }

    pub fn mul_p_pow(&self, k: u32) -> Self {
        let pk = self.desc.p_pow(k);
        let d = &self.desc;
        let c = self.c.iter().map(|&v| d.mul(v, pk)).collect();
        UnramifiedRingElem { desc: self.desc.clone(), c }
    }

    /// Exact division by `p^k`. The top `k` digits of the result are unknown
    /// and come back as zero; callers account for the lost precision.
    pub fn div_p_pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Ok(self.clone());
        }
        if k >= self.desc.precision() {
            return Err(Error::PrecisionInsufficient(format!(
                "division by p^{k} at precision {}",
                self.desc.precision()
            )));
        }
        let pk = self.desc.p().pow(k);
        if self.c.iter().any(|&v| v % pk != 0) {
            return Err(Error::NonUnit);
        }
        let c = self.c.iter().map(|&v| v / pk).collect();
        Ok(UnramifiedRingElem { desc: self.desc.clone(), c })
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let mut r = Self::one(&self.desc);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_unchecked(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_unchecked(&b);
            }
        }
        r
    }

    /// Multiplicative inverse of a unit, by Newton iteration from the residue inverse.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let r = self.residue().inverse()?;
        let mut x = Self::lift_residue(&self.desc, &r);
        let two = Self::from_int(&self.desc, 2);
        let mut prec = 1u32;
        while prec < self.desc.precision() {
            x = x.mul_unchecked(&two.sub_unchecked(&self.mul_unchecked(&x)));
            prec *= 2;
        }
        debug_assert!(self.mul_unchecked(&x).is_one());
        Ok(x)
    }

    /// Same digits viewed at another precision of the same ring
    /// (truncating or zero-extending).
    pub fn to_precision(&self, target: &Arc<RingDescriptor>) -> Result<Self> {
        if target.p() != self.desc.p() || target.modulus() != self.desc.modulus() {
            return Err(Error::DescriptorMismatch);
        }
        let pn = target.pn();
        let c = self.c.iter().map(|&v| v % pn).collect();
        Ok(UnramifiedRingElem { desc: target.clone(), c })
    }

    /// Signed representative of the constant coefficient, in `(-p^N/2, p^N/2]`.
    pub fn centered_constant(&self) -> i64 {
        let pn = self.desc.pn();
        let v = self.c[0];
        if v > pn / 2 {
            v as i64 - pn as i64
        } else {
            v as i64
        }
    }

    /// Whether the element lies in `Z_p` (all non-constant coordinates vanish).
    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(|&v| v == 0)
    }
}

/// Reduce a coefficient vector of length up to `2f - 1` modulo the monic modulus.
pub(crate) fn reduce_wide(d: &RingDescriptor, wide: &mut [u64]) {
    let f = d.f();
    let m = d.modulus();
    for k in (f..wide.len()).rev() {
        let t = wide[k];
        if t == 0 {
            continue;
        }
        wide[k] = 0;
        for i in 0..f {
            if m[i] != 0 {
                let idx = k - f + i;
                wide[idx] = d.sub(wide[idx], d.mul(t, m[i]));
            }
        }
    }
}

/// Teichmüller representative of `r`: the unique lift with `x^{p^f} = x`.
pub fn teichmuller_lift(desc: &Arc<RingDescriptor>, r: &ResidueElem) -> UnramifiedRingElem {
    let q = desc.residue_size() as u128;
    let mut x = UnramifiedRingElem::lift_residue(desc, r);
    // Each application of x -> x^q gains at least one p-adic digit.
    for _ in 0..=desc.precision() {
        let y = x.pow(q);
        if y == x {
            break;
        }
        x = y;
    }
    x
}

impl PartialEq for UnramifiedRingElem {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.desc, &other.desc) && self.c == other.c
    }
}
impl Eq for UnramifiedRingElem {}

impl fmt::Debug for UnramifiedRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c.as_slice())
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&UnramifiedRingElem> for &UnramifiedRingElem {
            type Output = UnramifiedRingElem;
            fn $m(self, rhs: &UnramifiedRingElem) -> UnramifiedRingElem {
                self.$checked(rhs).expect("ring descriptor mismatch")
            }
        }
        impl $tr<UnramifiedRingElem> for UnramifiedRingElem {
            type Output = UnramifiedRingElem;
            fn $m(self, rhs: UnramifiedRingElem) -> UnramifiedRingElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&UnramifiedRingElem> for UnramifiedRingElem {
            type Output = UnramifiedRingElem;
            fn $m(self, rhs: &UnramifiedRingElem) -> UnramifiedRingElem {
                (&self).$m(rhs)
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &UnramifiedRingElem {
    type Output = UnramifiedRingElem;
    fn neg(self) -> UnramifiedRingElem {
        UnramifiedRingElem::neg(self)
    }
}
impl Neg for UnramifiedRingElem {
    type Output = UnramifiedRingElem;
    fn neg(self) -> UnramifiedRingElem {
        UnramifiedRingElem::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, f: usize, n: u32) -> Arc<RingDescriptor> {
        RingDescriptor::new(p, f, n).unwrap()
    }

    #[test]
    fn small_examples() {
        let d = ring(3, 1, 2);
        let five = UnramifiedRingElem::from_int(&d, 5);
        assert_eq!(&five + &five, UnramifiedRingElem::from_int(&d, 1));
        assert_eq!(&five + &UnramifiedRingElem::zero(&d), five);
        assert_eq!(
            UnramifiedRingElem::from_int(&d, 2).invert().unwrap(),
            UnramifiedRingElem::from_int(&d, 5)
        );
        assert!(UnramifiedRingElem::one(&d).invert().unwrap().is_one());
        assert_eq!(UnramifiedRingElem::from_int(&d, 3).invert().unwrap_err(), Error::NonUnit);
    }

    #[test]
    fn valuations() {
        let d = ring(3, 1, 3);
        assert_eq!(UnramifiedRingElem::from_int(&d, 6).valuation(), Valuation::Finite(1));
        assert_eq!(UnramifiedRingElem::from_int(&d, 1).valuation(), Valuation::Finite(0));
        assert_eq!(UnramifiedRingElem::zero(&d).valuation(), Valuation::Infinite);
        assert_eq!(UnramifiedRingElem::from_int(&d, 27).valuation(), Valuation::Infinite);
    }

    #[test]
    fn mismatch_is_reported() {
        let a = UnramifiedRingElem::one(&ring(3, 1, 2));
        let b = UnramifiedRingElem::one(&ring(3, 1, 3));
        assert_eq!(a.checked_add(&b).unwrap_err(), Error::DescriptorMismatch);
    }

    #[test]
    fn teichmuller_examples() {
        let d = ring(3, 1, 2);
        let lift = |v| teichmuller_lift(&d, &ResidueElem::from_index(&d, v));
        assert_eq!(lift(2), UnramifiedRingElem::from_int(&d, 8));
        assert_eq!(lift(1), UnramifiedRingElem::one(&d));
        let d5 = ring(5, 1, 2);
        assert_eq!(
            teichmuller_lift(&d5, &ResidueElem::from_index(&d5, 2)),
            UnramifiedRingElem::from_int(&d5, 7)
        );
    }

    #[test]
    fn teichmuller_roots_of_unity() {
        for (p, f, n) in [(3u64, 2usize, 6u32), (5, 2, 4), (3, 3, 5)] {
            let d = ring(p, f, n);
            let q1 = d.residue_size() as u128 - 1;
            for r in ResidueElem::all(&d).skip(1) {
                let w = teichmuller_lift(&d, &r);
                assert!(w.pow(q1).is_one());
                assert_eq!(w.residue(), r);
            }
        }
    }

    #[test]
    fn exhaustive_ring_axioms_small() {
        let d = ring(3, 2, 2);
        let elems: Vec<_> = (0..81u64)
            .step_by(7)
            .map(|i| UnramifiedRingElem::from_coeffs(&d, &[(i % 9) as i64, (i / 9) as i64]))
            .collect();
        for a in &elems {
            for b in &elems {
                assert_eq!(a * b, b * a);
                for c in &elems {
                    assert_eq!(&(a + b) * c, &(a * c) + &(b * c));
                    assert_eq!(&(a * b) * c, a * &(b * c));
                }
            }
        }
    }
}
