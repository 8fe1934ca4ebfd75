//! Truncated power series in one and two variables, and exact polynomials.

mod one;
mod poly;
mod two;

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::padic::{RingDescriptor, ScaledFieldElem, UnramifiedRingElem, Valuation};

pub use one::TruncSeries1;
pub use poly::Poly;
pub use two::{substitute2, TruncSeries2};

/// Which coefficient domain a series lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Integral,
    Scaled,
}

/// Coefficients usable in truncated series.
///
/// Implementations skip descriptor checks; series operations check the
/// descriptor once per call.
pub trait Coeff: Clone + fmt::Debug + Send + Sync + 'static {
    const DOMAIN: Domain;
    fn zero_of(desc: &Arc<RingDescriptor>) -> Self;
    fn one_of(desc: &Arc<RingDescriptor>) -> Self;
    fn from_integral(x: &UnramifiedRingElem) -> Self;
    fn descriptor(&self) -> &Arc<RingDescriptor>;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_int(&self, k: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn valuation(&self) -> Valuation;
    fn inv(&self) -> Result<Self>;
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }
    fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }
}

impl Coeff for UnramifiedRingElem {
    const DOMAIN: Domain = Domain::Integral;
    fn zero_of(desc: &Arc<RingDescriptor>) -> Self {
        UnramifiedRingElem::zero(desc)
    }
    fn one_of(desc: &Arc<RingDescriptor>) -> Self {
        UnramifiedRingElem::one(desc)
    }
    fn from_integral(x: &UnramifiedRingElem) -> Self {
        x.clone()
    }
    fn descriptor(&self) -> &Arc<RingDescriptor> {
        UnramifiedRingElem::descriptor(self)
    }
    fn add(&self, o: &Self) -> Self {
        self.add_unchecked(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_unchecked(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_unchecked(o)
    }
    fn neg(&self) -> Self {
        UnramifiedRingElem::neg(self)
    }
    fn mul_int(&self, k: i64) -> Self {
        UnramifiedRingElem::mul_int(self, k)
    }
    fn is_zero(&self) -> bool {
        UnramifiedRingElem::is_zero(self)
    }
    fn valuation(&self) -> Valuation {
        UnramifiedRingElem::valuation(self)
    }
    fn inv(&self) -> Result<Self> {
        self.invert()
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        UnramifiedRingElem::add_mul_assign(self, a, b)
    }
    fn is_unit(&self) -> bool {
        UnramifiedRingElem::is_unit(self)
    }
}

impl Coeff for ScaledFieldElem {
    const DOMAIN: Domain = Domain::Scaled;
    fn zero_of(desc: &Arc<RingDescriptor>) -> Self {
        ScaledFieldElem::zero(desc)
    }
    fn one_of(desc: &Arc<RingDescriptor>) -> Self {
        ScaledFieldElem::one(desc)
    }
    fn from_integral(x: &UnramifiedRingElem) -> Self {
        ScaledFieldElem::from_ring(x)
    }
    fn descriptor(&self) -> &Arc<RingDescriptor> {
        ScaledFieldElem::descriptor(self)
    }
    fn add(&self, o: &Self) -> Self {
        self.add_unchecked(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.add_unchecked(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_unchecked(o)
    }
    fn neg(&self) -> Self {
        ScaledFieldElem::neg(self)
    }
    fn mul_int(&self, k: i64) -> Self {
        ScaledFieldElem::mul_int(self, k)
    }
    fn is_zero(&self) -> bool {
        ScaledFieldElem::is_zero(self)
    }
    fn valuation(&self) -> Valuation {
        ScaledFieldElem::valuation(self)
    }
    fn inv(&self) -> Result<Self> {
        self.inverse()
    }
}

/// `a * b` truncated to `len` terms.
pub(crate) fn mul_trunc<C: Coeff>(a: &[C], b: &[C], len: usize, desc: &Arc<RingDescriptor>) -> Vec<C> {
    let mut out = vec![C::zero_of(desc); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if skip_zero::<C>(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !skip_zero::<C>(y) {
                out[i + j].add_mul_assign(x, y);
            }
        }
    }
    out
}

/// Zero terms can be skipped only when they are exact; scaled zeros still
/// carry precision information.
#[inline]
pub(crate) fn skip_zero<C: Coeff>(x: &C) -> bool {
    C::DOMAIN == Domain::Integral && x.is_zero()
}
