use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{mul_trunc, skip_zero, Coeff, Domain};
use crate::error::{Error, Result};
use crate::padic::{same_ring, RingDescriptor, ScaledFieldElem, UnramifiedRingElem, Valuation};

/// `a_0 + a_1 X + ... + a_{D-1} X^{D-1} + O(X^D)`.
#[derive(Clone)]
pub struct TruncSeries1<C: Coeff> {
    desc: Arc<RingDescriptor>,
    c: Vec<C>,
}

impl<C: Coeff> TruncSeries1<C> {
    pub fn zero(desc: &Arc<RingDescriptor>, d: usize) -> Self {
        TruncSeries1 { desc: desc.clone(), c: vec![C::zero_of(desc); d] }
    }

    pub fn one(desc: &Arc<RingDescriptor>, d: usize) -> Self {
        Self::monomial(desc, d, 0, C::one_of(desc))
    }

    /// The series `X`.
    pub fn x(desc: &Arc<RingDescriptor>, d: usize) -> Self {
        Self::monomial(desc, d, 1, C::one_of(desc))
    }

    pub fn monomial(desc: &Arc<RingDescriptor>, d: usize, k: usize, a: C) -> Self {
        let mut s = Self::zero(desc, d);
        if k < d {
            s.c[k] = a;
        }
        s
    }

    /// Series from explicit coefficients; terms of degree `>= d` are dropped
    /// and missing ones are zero.
    pub fn from_coeffs(desc: &Arc<RingDescriptor>, d: usize, coeffs: Vec<C>) -> Self {
        let mut c = coeffs;
        c.truncate(d);
        c.resize(d, C::zero_of(desc));
        TruncSeries1 { desc: desc.clone(), c }
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor> {
        &self.desc
    }

    /// Truncation degree `D`.
    pub fn trunc(&self) -> usize {
        self.c.len()
    }

    pub fn domain(&self) -> Domain {
        C::DOMAIN
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.c[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn set_coeff(&mut self, k: usize, a: C) {
        self.c[k] = a;
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    /// Index of the first nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.c.iter().position(|a| !a.is_zero())
    }

    /// Index of the first unit coefficient.
    pub fn first_unit(&self) -> Option<usize> {
        self.c.iter().position(|a| a.is_unit())
    }

    /// Same series known to fewer terms.
    pub fn truncate(&self, d: usize) -> Result<Self> {
        if d > self.trunc() {
            return Err(Error::Mismatch(format!("cannot extend truncation {} to {d}", self.trunc())));
        }
        Ok(TruncSeries1 { desc: self.desc.clone(), c: self.c[..d].to_vec() })
    }

    fn check(&self, o: &Self) -> Result<()> {
        if !same_ring(&self.desc, &o.desc) {
            return Err(Error::DescriptorMismatch);
        }
        if self.trunc() != o.trunc() {
            return Err(Error::Mismatch(format!("truncations {} and {}", self.trunc(), o.trunc())));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.zip(o, |a, b| a.add(b)))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.zip(o, |a, b| a.sub(b)))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn zip(&self, o: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let c = self.c.iter().zip(o.c.iter()).map(|(a, b)| f(a, b)).collect();
        TruncSeries1 { desc: self.desc.clone(), c }
    }

    pub(crate) fn mul_unchecked(&self, o: &Self) -> Self {
        let d = self.trunc().min(o.trunc());
        TruncSeries1 { desc: self.desc.clone(), c: mul_trunc(&self.c, &o.c, d, &self.desc) }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, a: &C) -> Self {
        self.map(|x| x.mul(a))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.map(|x| x.mul_int(k))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncSeries1<D> {
        TruncSeries1 { desc: self.desc.clone(), c: self.c.iter().map(f).collect() }
    }

    /// `self * X^k`, keeping the truncation.
    pub fn shift(&self, k: usize) -> Self {
        let d = self.trunc();
        let mut c = vec![C::zero_of(&self.desc); k.min(d)];
        c.extend(self.c.iter().take(d.saturating_sub(k)).cloned());
        TruncSeries1 { desc: self.desc.clone(), c }
    }

    /// `self^e` for `e >= 0`.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.desc, self.trunc());
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

    /// Multiplicative inverse of a series with unit constant term.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.trunc();
        let b0 = self.c[0].inv()?;
        let mut b = Vec::with_capacity(d);
        b.push(b0.clone());
        for k in 1..d {
            let mut s = C::zero_of(&self.desc);
            for j in 1..=k {
                if !skip_zero(&self.c[j]) {
                    s.add_mul_assign(&self.c[j], &b[k - j]);
                }
            }
            b.push(s.mul(&b0).neg());
        }
        Ok(TruncSeries1 { desc: self.desc.clone(), c: b })
    }

    fn require_no_constant(&self) -> Result<()> {
        if self.trunc() > 0 && !self.c[0].is_zero() {
            return Err(Error::NonZeroConstant);
        }
        Ok(())
    }

    /// `self(g(X))` for `g(0) = 0`, by Horner evaluation. The inner
    /// accumulator is multiplied by `g^k` afterwards, so it is only kept to
    /// `D - k` terms.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check(g)?;
        g.require_no_constant()?;
        Ok(self.compose_unchecked(g))
    }

    pub(crate) fn compose_unchecked(&self, g: &Self) -> Self {
        let d = self.trunc();
        let top = match self.c.iter().rposition(|a| !skip_zero(a)) {
            Some(t) => t,
            None => return Self::zero(&self.desc, d),
        };
        let mut acc = vec![self.c[top].clone()];
        for k in (0..top).rev() {
            let len = d - k;
            let mut next = mul_trunc(&acc, &g.c, len, &self.desc);
            if next.is_empty() {
                next.push(C::zero_of(&self.desc));
            }
            next[0] = next[0].add(&self.c[k]);
            acc = next;
        }
        acc.resize(d, C::zero_of(&self.desc));
        TruncSeries1 { desc: self.desc.clone(), c: acc }
    }

    /// Formal derivative; the result is known to `D - 1` terms.
    pub fn derivative(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(k, a)| a.mul_int(k as i64)).collect();
        TruncSeries1 { desc: self.desc.clone(), c }
    }

    /// Compositional inverse of `u X + ...` with `u` a unit, by Newton
    /// iteration `g <- g - (f(g) - X) / f'(g)`.
    pub fn reversion(&self) -> Result<Self> {
        let d = self.trunc();
        self.require_no_constant()?;
        if d < 2 {
            return Ok(self.clone());
        }
        if !self.c[1].is_unit() && !(C::DOMAIN == Domain::Scaled && !self.c[1].is_zero()) {
            return Err(Error::NonUnitLinear);
        }
        let u_inv = self.c[1].inv().map_err(|_| Error::NonUnitLinear)?;
        let x = Self::x(&self.desc, d);
        let df = self.derivative();
        let mut g = Self::monomial(&self.desc, d, 1, u_inv);
        let mut known = 2usize;
        while known < d {
            known = (2 * known).min(d);
            let fg = self.compose_unchecked(&g);
            let err = fg.zip(&x, |a, b| a.sub(b));
            let mut dfg = df.compose_unchecked(&g.truncate(d - 1).unwrap());
            dfg.c.push(C::zero_of(&self.desc));
            let step = err.mul_unchecked(&dfg.inverse()?);
            g = g.zip(&step, |a, b| a.sub(b));
        }
        // One more pass cleans up the top coefficient when D is not a power of two.
        let fg = self.compose_unchecked(&g);
        let err = fg.zip(&x, |a, b| a.sub(b));
        if !err.is_zero() {
            let mut dfg = df.compose_unchecked(&g.truncate(d - 1).unwrap());
            dfg.c.push(C::zero_of(&self.desc));
            let step = err.mul_unchecked(&dfg.inverse()?);
            g = g.zip(&step, |a, b| a.sub(b));
        }
        Ok(g)
    }
}

impl TruncSeries1<UnramifiedRingElem> {
    pub fn to_scaled(&self) -> TruncSeries1<ScaledFieldElem> {
        self.map(ScaledFieldElem::from_ring)
    }

    /// Coefficients as lists of `f` residues mod `p^N`, degree ascending.
    pub fn coeff_lists(&self) -> Vec<Vec<u64>> {
        self.c.iter().map(|a| a.coeffs().to_vec()).collect()
    }

    /// Text form: one coefficient per line, each as `f` space-separated integers.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for a in &self.c {
            let parts: Vec<String> = a.coeffs().iter().map(|v| v.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse [`Self::to_text`] output; the truncation is the number of lines.
    pub fn from_text(desc: &Arc<RingDescriptor>, text: &str) -> Result<Self> {
        let mut c = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let vals: Vec<i64> = line
                .split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Config(format!("bad coefficient line {line:?}: {e}")))?;
            if vals.len() != desc.f() {
                return Err(Error::Config(format!(
                    "coefficient line {line:?} has {} entries, expected f = {}",
                    vals.len(),
                    desc.f()
                )));
            }
            c.push(UnramifiedRingElem::from_coeffs(desc, &vals));
        }
        let d = c.len();
        Ok(Self::from_coeffs(desc, d, c))
    }

    /// Same coefficients reduced to a lower precision of the same ring.
    pub fn to_precision(&self, desc: &Arc<RingDescriptor>) -> Result<Self> {
        let c = self.c.iter().map(|a| a.to_precision(desc)).collect::<Result<_>>()?;
        Ok(TruncSeries1 { desc: desc.clone(), c })
    }
}

impl TruncSeries1<ScaledFieldElem> {
    /// Formal antiderivative with zero constant term; known to `D + 1` terms.
    pub fn integrate(&self) -> Self {
        let mut c = vec![ScaledFieldElem::zero(&self.desc)];
        for (k, a) in self.c.iter().enumerate() {
            let inv = ScaledFieldElem::from_int(&self.desc, k as i64 + 1).inverse().expect("k+1 != 0");
            c.push(a.mul_unchecked(&inv));
        }
        TruncSeries1 { desc: self.desc.clone(), c }
    }

    /// Integral image, requiring every coefficient to be known modulo `p^target`.
    pub fn to_integral(&self, target: u32) -> Result<TruncSeries1<UnramifiedRingElem>> {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(k, a)| {
                a.to_integral(target).map_err(|e| match e {
                    Error::Integrality(_) => Error::Integrality(k),
                    other => other,
                })
            })
            .collect::<Result<_>>()?;
        Ok(TruncSeries1 { desc: self.desc.clone(), c })
    }

    /// Smallest absolute precision among the coefficients.
    pub fn absolute_precision(&self) -> i64 {
        self.c.iter().map(|a| a.absolute_precision()).min().unwrap_or(i64::MAX)
    }

    /// Minimum valuation of the coefficients (negative means denominators).
    pub fn min_valuation(&self) -> Valuation {
        self.c.iter().map(|a| a.valuation()).min().unwrap_or(Valuation::Infinite)
    }

    /// Equality to absolute precision `k` coefficientwise.
    pub fn eq_mod(&self, o: &Self, k: i64) -> bool {
        self.trunc() == o.trunc() && self.c.iter().zip(&o.c).all(|(a, b)| a.eq_mod(b, k))
    }
}

impl<C: Coeff + PartialEq> PartialEq for TruncSeries1<C> {
    fn eq(&self, o: &Self) -> bool {
        same_ring(&self.desc, &o.desc) && self.c == o.c
    }
}

impl<C: Coeff> fmt::Debug for TruncSeries1<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if C::DOMAIN == Domain::Integral && a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{a:?}*X^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(X^{})", self.trunc())
    }
}

impl Serialize for TruncSeries1<UnramifiedRingElem> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TruncSeries1", 2)?;
        st.serialize_field("D", &self.trunc())?;
        st.serialize_field("coeffs", &self.coeff_lists())?;
        st.end()
    }
}

macro_rules! series_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<C: Coeff> $tr<&TruncSeries1<C>> for &TruncSeries1<C> {
            type Output = TruncSeries1<C>;
            fn $m(self, rhs: &TruncSeries1<C>) -> TruncSeries1<C> {
                self.$checked(rhs).expect("series mismatch")
            }
        }
    };
}
series_binop!(Add, add, checked_add);
series_binop!(Sub, sub, checked_sub);
series_binop!(Mul, mul, checked_mul);

impl<C: Coeff> Neg for &TruncSeries1<C> {
    type Output = TruncSeries1<C>;
    fn neg(self) -> TruncSeries1<C> {
        TruncSeries1::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = TruncSeries1<UnramifiedRingElem>;

    fn ring(n: u32) -> Arc<RingDescriptor> {
        RingDescriptor::new(3, 1, n).unwrap()
    }

    fn ints(desc: &Arc<RingDescriptor>, d: usize, v: &[i64]) -> S {
        S::from_coeffs(desc, d, v.iter().map(|&x| UnramifiedRingElem::from_int(desc, x)).collect())
    }

    #[test]
    fn basic_products() {
        let d = ring(4);
        let x = S::x(&d, 6);
        assert_eq!(&x * &x, ints(&d, 6, &[0, 0, 1]));
        assert_eq!(&x + &S::zero(&d, 6), x);
        assert!(x.checked_add(&S::x(&d, 7)).is_err());
    }

    #[test]
    fn compose_examples() {
        let d = ring(4);
        let sq = ints(&d, 8, &[0, 0, 1]);
        let g = ints(&d, 8, &[0, 1, 1]);
        assert_eq!(sq.compose(&g).unwrap(), ints(&d, 8, &[0, 0, 1, 2, 1]));
        assert_eq!(g.compose(&S::x(&d, 8)).unwrap(), g);
        assert_eq!(sq.compose(&S::one(&d, 8)).unwrap_err(), Error::NonZeroConstant);

        // (pX + X^p) o (pX + X^p) at p = 3: 9X + 3X^3 + (3X + X^3)^3.
        let f = ints(&d, 12, &[0, 3, 0, 1]);
        let expect = ints(&d, 12, &[0, 9, 0, 3 + 27, 0, 27, 0, 9, 0, 1]);
        assert_eq!(f.compose(&f).unwrap(), expect);
    }

    #[test]
    fn reversion_examples() {
        let d = ring(4);
        let x = S::x(&d, 5);
        assert_eq!(x.reversion().unwrap(), x);
        let f = ints(&d, 5, &[0, 1, 1]);
        assert_eq!(f.reversion().unwrap(), ints(&d, 5, &[0, 1, -1, 2, -5]));
        assert_eq!(ints(&d, 5, &[0, 3, 1]).reversion().unwrap_err(), Error::NonUnitLinear);
    }

    #[test]
    fn derivative_and_integral() {
        let d = ring(4);
        assert_eq!(ints(&d, 5, &[0, 0, 0, 1]).derivative(), ints(&d, 4, &[0, 0, 3]));
        let one = TruncSeries1::<ScaledFieldElem>::one(&d, 4);
        let xs = one.integrate();
        assert_eq!(xs.trunc(), 5);
        assert!(xs.eq_mod(&TruncSeries1::x(&d, 5), 3));
    }

    #[test]
    fn inverse_of_unit_series() {
        let d = ring(5);
        let f = ints(&d, 10, &[1, 1]);
        let inv = f.inverse().unwrap();
        assert_eq!(&f * &inv, S::one(&d, 10));
    }

    #[test]
    fn text_round_trip() {
        let d = RingDescriptor::new(3, 2, 3).unwrap();
        let f = S::from_coeffs(
            &d,
            4,
            vec![
                UnramifiedRingElem::zero(&d),
                UnramifiedRingElem::from_coeffs(&d, &[3, 1]),
                UnramifiedRingElem::from_coeffs(&d, &[25, 0]),
            ],
        );
        assert_eq!(S::from_text(&d, &f.to_text()).unwrap(), f);
    }
}
