use std::fmt;
use std::sync::Arc;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{mul_trunc, skip_zero, Coeff, TruncSeries1};
use crate::error::{Error, Result};
use crate::padic::{same_ring, RingDescriptor, UnramifiedRingElem};

/// `sum_{i+j<D} a_{ij} X^i Y^j`, stored row-major over the triangle.
#[derive(Clone)]
pub struct TruncSeries2<C: Coeff> {
    desc: Arc<RingDescriptor>,
    d: usize,
    c: Vec<C>,
}

#[inline]
fn row_start(d: usize, i: usize) -> usize {
    i * (2 * d - i + 1) / 2
}

impl<C: Coeff> TruncSeries2<C> {
    pub fn zero(desc: &Arc<RingDescriptor>, d: usize) -> Self {
        TruncSeries2 { desc: desc.clone(), d, c: vec![C::zero_of(desc); d * (d + 1) / 2] }
    }

    pub fn x(desc: &Arc<RingDescriptor>, d: usize) -> Self {
        let mut s = Self::zero(desc, d);
        if d > 1 {
            s.set(1, 0, C::one_of(desc));
        }
        s
    }

    pub fn y(desc: &Arc<RingDescriptor>, d: usize) -> Self {
        let mut s = Self::zero(desc, d);
        if d > 1 {
            s.set(0, 1, C::one_of(desc));
        }
        s
    }

    /// Build from a coefficient function on the triangle.
    pub fn from_fn(desc: &Arc<RingDescriptor>, d: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut c = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in 0..d - i {
                c.push(f(i, j));
            }
        }
        TruncSeries2 { desc: desc.clone(), d, c }
    }

    /// `g(X)` viewed as a series in `X, Y`.
    pub fn from_x(g: &TruncSeries1<C>) -> Self {
        let d = g.trunc();
        Self::from_fn(g.descriptor(), d, |i, j| if j == 0 { g.coeff(i).clone() } else { C::zero_of(g.descriptor()) })
    }

    /// `g(Y)` viewed as a series in `X, Y`.
    pub fn from_y(g: &TruncSeries1<C>) -> Self {
        let d = g.trunc();
        Self::from_fn(g.descriptor(), d, |i, j| if i == 0 { g.coeff(j).clone() } else { C::zero_of(g.descriptor()) })
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor> {
        &self.desc
    }

    pub fn trunc(&self) -> usize {
        self.d
    }

    pub fn coeff(&self, i: usize, j: usize) -> &C {
        &self.c[row_start(self.d, i) + j]
    }

    pub fn set(&mut self, i: usize, j: usize, a: C) {
        let k = row_start(self.d, i) + j;
        self.c[k] = a;
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }

    /// Row `i`: the coefficients `a_{i,0..D-i}`.
    pub fn row(&self, i: usize) -> &[C] {
        let s = row_start(self.d, i);
        &self.c[s..s + self.d - i]
    }

    fn check(&self, o: &Self) -> Result<()> {
        if !same_ring(&self.desc, &o.desc) {
            return Err(Error::DescriptorMismatch);
        }
        if self.d != o.d {
            return Err(Error::Mismatch(format!("truncations {} and {}", self.d, o.d)));
        }
        Ok(())
    }

    fn zip(&self, o: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| f(a, b)).collect();
        TruncSeries2 { desc: self.desc.clone(), d: self.d, c }
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

    pub(crate) fn mul_unchecked(&self, o: &Self) -> Self {
        let d = self.d;
        let mut out = Self::zero(&self.desc, d);
        for i1 in 0..d {
            for (j1, a) in self.row(i1).iter().enumerate() {
                if skip_zero(a) {
                    continue;
                }
                for i2 in 0..d - i1 - j1 {
                    let i = i1 + i2;
                    let base = row_start(d, i) + j1;
                    let lim = d - i - j1;
                    for (j2, b) in o.row(i2).iter().enumerate().take(lim) {
                        if !skip_zero(b) {
                            out.c[base + j2].add_mul_assign(a, b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, a: &C) -> Self {
        self.map(|x| x.mul(a))
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncSeries2<D> {
        TruncSeries2 { desc: self.desc.clone(), d: self.d, c: self.c.iter().map(f).collect() }
    }

    /// `F(Y, X)`.
    pub fn swap(&self) -> Self {
        Self::from_fn(&self.desc, self.d, |i, j| self.coeff(j, i).clone())
    }

    /// `F(X, 0)`.
    pub fn at_y_zero(&self) -> TruncSeries1<C> {
        let c = (0..self.d).map(|i| self.coeff(i, 0).clone()).collect();
        TruncSeries1::from_coeffs(&self.desc, self.d, c)
    }

    /// `F(0, Y)`.
    pub fn at_x_zero(&self) -> TruncSeries1<C> {
        TruncSeries1::from_coeffs(&self.desc, self.d, self.row(0).to_vec())
    }

    /// `(dF/dY)(X, 0)`, known to `D - 1` terms.
    pub fn d_dy_at_zero(&self) -> TruncSeries1<C> {
        let c = (0..self.d - 1).map(|i| self.coeff(i, 1).clone()).collect();
        TruncSeries1::from_coeffs(&self.desc, self.d - 1, c)
    }

    /// Homogeneous part of total degree `r`, as the coefficients `a_{i, r-i}`.
    pub fn homogeneous(&self, r: usize) -> Vec<C> {
        (0..=r).map(|i| self.coeff(i, r - i).clone()).collect()
    }

    /// `f(F(X, Y))` for `F(0, 0) = 0`.
    pub fn compose_outer(&self, f: &TruncSeries1<C>) -> Result<Self> {
        if !self.coeff(0, 0).is_zero() {
            return Err(Error::NonZeroConstant);
        }
        if f.trunc() != self.d || !same_ring(&self.desc, f.descriptor()) {
            return Err(Error::Mismatch("outer series truncation".into()));
        }
        let top = match f.coeffs().iter().rposition(|a| !skip_zero(a)) {
            Some(t) => t,
            None => return Ok(Self::zero(&self.desc, self.d)),
        };
        let mut acc = Self::zero(&self.desc, self.d);
        acc.c[0] = f.coeff(top).clone();
        for k in (0..top).rev() {
            acc = acc.mul_unchecked(self);
            acc.c[0] = acc.c[0].add(f.coeff(k));
        }
        Ok(acc)
    }

    /// `F(A(X, Y), B(X, Y))` for `A, B` without constant term.
    pub fn substitute(&self, a: &Self, b: &Self) -> Result<Self> {
        self.check(a)?;
        self.check(b)?;
        if !a.coeff(0, 0).is_zero() || !b.coeff(0, 0).is_zero() {
            return Err(Error::NonZeroConstant);
        }
        let d = self.d;
        let mut bpow = vec![one2(&self.desc, d)];
        for j in 1..d {
            let next = bpow[j - 1].mul_unchecked(b);
            bpow.push(next);
        }
        // Horner in A over the rows of F.
        let mut acc = Self::zero(&self.desc, d);
        for i in (0..d).rev() {
            let mut row = Self::zero(&self.desc, d);
            for (j, c) in self.row(i).iter().enumerate() {
                if !skip_zero(c) {
                    row = row.zip(&bpow[j].scale(c), |x, y| x.add(y));
                }
            }
            acc = acc.mul_unchecked(a).zip(&row, |x, y| x.add(y));
        }
        Ok(acc)
    }
}

fn one2<C: Coeff>(desc: &Arc<RingDescriptor>, d: usize) -> TruncSeries2<C> {
    let mut s = TruncSeries2::zero(desc, d);
    if d > 0 {
        s.c[0] = C::one_of(desc);
    }
    s
}

/// `F(g(X), h(X))` for `g(0) = h(0) = 0`.
pub fn substitute2<C: Coeff>(f: &TruncSeries2<C>, g: &TruncSeries1<C>, h: &TruncSeries1<C>) -> Result<TruncSeries1<C>> {
    let d = f.trunc();
    if g.trunc() != d || h.trunc() != d {
        return Err(Error::Mismatch(format!("substitute2 truncations {d}, {}, {}", g.trunc(), h.trunc())));
    }
    if !same_ring(f.descriptor(), g.descriptor()) || !same_ring(f.descriptor(), h.descriptor()) {
        return Err(Error::DescriptorMismatch);
    }
    if !g.coeff(0).is_zero() || !h.coeff(0).is_zero() {
        return Err(Error::NonZeroConstant);
    }
    let desc = f.descriptor();
    let mut hp: Vec<Vec<C>> = vec![TruncSeries1::<C>::one(desc, d).coeffs().to_vec()];
    for j in 1..d {
        // h^j vanishes below degree j; keep only what can contribute.
        let next = mul_trunc(&hp[j - 1], h.coeffs(), d, desc);
        hp.push(next);
    }
    let mut acc: Vec<C> = vec![C::zero_of(desc); d];
    for i in (0..d).rev() {
        let mut row = vec![C::zero_of(desc); d];
        for (j, c) in f.row(i).iter().enumerate() {
            if skip_zero(c) {
                continue;
            }
            for k in j..d {
                if !skip_zero(&hp[j][k]) {
                    row[k].add_mul_assign(c, &hp[j][k]);
                }
            }
        }
        let mut next = mul_trunc(&acc, g.coeffs(), d, desc);
        for (x, y) in next.iter_mut().zip(&row) {
            *x = x.add(y);
        }
        acc = next;
    }
    Ok(TruncSeries1::from_coeffs(desc, d, acc))
}

impl TruncSeries2<UnramifiedRingElem> {
    /// Coefficients row-major over `(i, j)` with `i + j < D`.
    pub fn coeff_lists(&self) -> Vec<Vec<u64>> {
        self.c.iter().map(|a| a.coeffs().to_vec()).collect()
    }
}

impl<C: Coeff + PartialEq> PartialEq for TruncSeries2<C> {
    fn eq(&self, o: &Self) -> bool {
        same_ring(&self.desc, &o.desc) && self.d == o.d && self.c == o.c
    }
}

impl<C: Coeff> fmt::Debug for TruncSeries2<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in 0..self.d {
            for (j, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "{a:?}*X^{i}Y^{j}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(deg {})", self.d)
    }
}

impl Serialize for TruncSeries2<UnramifiedRingElem> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TruncSeries2", 2)?;
        st.serialize_field("D", &self.d)?;
        st.serialize_field("coeffs", &self.coeff_lists())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S1 = TruncSeries1<UnramifiedRingElem>;
    type S2 = TruncSeries2<UnramifiedRingElem>;

    fn ring() -> Arc<RingDescriptor> {
        RingDescriptor::new(3, 1, 4).unwrap()
    }

    fn ints(desc: &Arc<RingDescriptor>, d: usize, v: &[i64]) -> S1 {
        S1::from_coeffs(desc, d, v.iter().map(|&x| UnramifiedRingElem::from_int(desc, x)).collect())
    }

    fn mult_law(desc: &Arc<RingDescriptor>, d: usize) -> S2 {
        let x = S2::x(desc, d);
        let y = S2::y(desc, d);
        let xy = x.checked_mul(&y).unwrap();
        x.checked_add(&y).unwrap().checked_add(&xy).unwrap()
    }

    #[test]
    fn substitute2_examples() {
        let d = ring();
        let g = ints(&d, 8, &[0, 1, 2, 0, 1]);
        let h = ints(&d, 8, &[0, 0, 5, 1]);
        let sum = S2::x(&d, 8).checked_add(&S2::y(&d, 8)).unwrap();
        assert_eq!(substitute2(&sum, &g, &h).unwrap(), &g + &h);
        let f = mult_law(&d, 8);
        assert_eq!(substitute2(&f, &S1::x(&d, 8), &S1::zero(&d, 8)).unwrap(), f.at_y_zero());
        assert_eq!(substitute2(&f, &S1::x(&d, 8), &S1::x(&d, 8)).unwrap(), ints(&d, 8, &[0, 2, 1]));
    }

    #[test]
    fn two_variable_products() {
        let d = ring();
        let f = mult_law(&d, 7);
        let sq = f.checked_mul(&f).unwrap();
        let via_outer = f.compose_outer(&ints(&d, 7, &[0, 0, 1])).unwrap();
        assert_eq!(sq, via_outer);
        assert_eq!(f.swap(), f);
        assert_eq!(f.d_dy_at_zero(), ints(&d, 6, &[1, 1]));
    }

    #[test]
    fn substitute_matches_associativity_of_multiplicative_law() {
        let d = ring();
        let f = mult_law(&d, 6);
        let x = S2::x(&d, 6);
        let y = S2::y(&d, 6);
        // F(F(X, Y), 0) = F(X, Y) and F(X, Y) with arguments swapped.
        assert_eq!(f.substitute(&f, &S2::zero(&d, 6)).unwrap(), f);
        assert_eq!(f.substitute(&y, &x).unwrap(), f);
    }
}
