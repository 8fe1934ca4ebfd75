use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{RingDescriptor, RingEmbedding, ScaledFieldElem, UnramifiedRingElem};
use crate::series::{substitute2, TruncSeries1, TruncSeries2};

type R = UnramifiedRingElem;

/// Default truncation for the associativity check at construction.
pub const ASSOC_CHECK_DEGREE: usize = 12;

/// A one-dimensional commutative formal group law `F(X, Y)` over `O_K`,
/// known to total degree `D` and precision `N`.
#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    f: TruncSeries2<R>,
    negation: OnceLock<TruncSeries1<R>>,
    log: OnceLock<TruncSeries1<ScaledFieldElem>>,
}

impl FormalGroupLaw {
    /// Validate the unit, commutativity and associativity axioms (the last
    /// to degree [`ASSOC_CHECK_DEGREE`]).
    pub fn new(f: TruncSeries2<R>) -> Result<Self> {
        let law = Self::new_unchecked(f);
        law.check_axioms(ASSOC_CHECK_DEGREE)?;
        Ok(law)
    }

    pub fn new_unchecked(f: TruncSeries2<R>) -> Self {
        FormalGroupLaw { f, negation: OnceLock::new(), log: OnceLock::new() }
    }

    /// The additive law `X + Y`.
    pub fn additive(desc: &Arc<RingDescriptor>, d: usize) -> Self {
        let f = TruncSeries2::x(desc, d).checked_add(&TruncSeries2::y(desc, d)).unwrap();
        Self::new_unchecked(f)
    }

    /// The multiplicative law `X + Y + XY`.
    pub fn multiplicative(desc: &Arc<RingDescriptor>, d: usize) -> Self {
        let x = TruncSeries2::x(desc, d);
        let y = TruncSeries2::y(desc, d);
        let f = x.checked_add(&y).unwrap().checked_add(&x.checked_mul(&y).unwrap()).unwrap();
        Self::new_unchecked(f)
    }

    pub fn series(&self) -> &TruncSeries2<R> {
        &self.f
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor> {
        self.f.descriptor()
    }

    pub fn trunc(&self) -> usize {
        self.f.trunc()
    }

    /// Check `F(X,0) = X`, `F(0,Y) = Y`, `F(X,Y) = F(Y,X)` to degree `D` and
    /// associativity to degree `min(D, assoc_degree)`.
    pub fn check_axioms(&self, assoc_degree: usize) -> Result<()> {
        let d = self.trunc();
        let desc = self.descriptor();
        if self.f.at_y_zero() != TruncSeries1::x(desc, d) {
            return Err(Error::Axiom("F(X, 0) != X".into()));
        }
        if self.f.at_x_zero() != TruncSeries1::x(desc, d) {
            return Err(Error::Axiom("F(0, Y) != Y".into()));
        }
        if self.f.swap() != self.f {
            return Err(Error::Axiom("F(X, Y) != F(Y, X)".into()));
        }
        if !associative(&self.f, assoc_degree.min(d)) {
            return Err(Error::Axiom("F(F(X,Y),Z) != F(X,F(Y,Z))".into()));
        }
        Ok(())
    }

    /// `x (+) y` for series without constant term.
    pub fn add_series(&self, x: &TruncSeries1<R>, y: &TruncSeries1<R>) -> Result<TruncSeries1<R>> {
        substitute2(&self.f, x, y)
    }

    /// The formal inverse `iota` with `F(X, iota(X)) = 0`.
    pub fn negation(&self) -> &TruncSeries1<R> {
        self.negation.get_or_init(|| {
            let d = self.trunc();
            let desc = self.descriptor();
            let x = TruncSeries1::x(desc, d);
            let mut iota = x.neg();
            // F(X, Y) = X + Y + (degree >= 2), so each pass fixes one more degree.
            for _ in 2..d {
                let r = substitute2(&self.f, &x, &iota).expect("same truncation");
                if r.is_zero() {
                    break;
                }
                iota = iota.checked_sub(&r).unwrap();
            }
            iota
        })
    }

    /// `lambda(X) = int_0^X dt / (dF/dY)(t, 0)`, over the scaled domain.
    pub fn logarithm(&self) -> &TruncSeries1<ScaledFieldElem> {
        self.log.get_or_init(|| {
            let dy = self.f.d_dy_at_zero();
            let inv = dy.inverse().expect("dF/dY(0,0) = 1");
            inv.to_scaled().integrate()
        })
    }

    /// `exp = lambda^{-1}`.
    pub fn exponential(&self) -> Result<TruncSeries1<ScaledFieldElem>> {
        self.logarithm().reversion()
    }

    /// `[n](X)` for `n >= 0` from the law alone.
    pub fn multiplication_series(&self, n: u64) -> TruncSeries1<R> {
        let d = self.trunc();
        let desc = self.descriptor();
        let x = TruncSeries1::x(desc, d);
        let mut acc = TruncSeries1::zero(desc, d);
        let mut base = x;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = substitute2(&self.f, &acc, &base).unwrap();
            }
            k >>= 1;
            if k > 0 {
                base = substitute2(&self.f, &base, &base).unwrap();
            }
        }
        acc
    }

    /// Whether `g` is an endomorphism to the law's truncation.
    pub fn is_endomorphism(&self, g: &TruncSeries1<R>) -> Result<bool> {
        let d = self.trunc();
        let g = if g.trunc() > d { g.truncate(d)? } else { g.clone() };
        if g.trunc() < d {
            return Err(Error::Mismatch("endomorphism candidate shorter than law".into()));
        }
        let lhs = self.f.compose_outer(&g)?;
        let gx = TruncSeries2::from_x(&g);
        let gy = TruncSeries2::from_y(&g);
        let rhs = self.f.substitute(&gx, &gy)?;
        Ok(lhs == rhs)
    }

    /// Same law with coefficients reduced to a lower precision and/or truncation.
    pub fn reduce(&self, desc: &Arc<RingDescriptor>, d: usize) -> Result<Self> {
        if d > self.trunc() {
            return Err(Error::Mismatch("cannot extend truncation".into()));
        }
        let mut err = None;
        let f = TruncSeries2::from_fn(desc, d, |i, j| {
            self.f.coeff(i, j).to_precision(desc).unwrap_or_else(|e| {
                err = Some(e);
                R::zero(desc)
            })
        });
        match err {
            Some(e) => Err(e),
            None => Ok(Self::new_unchecked(f)),
        }
    }

    /// Coefficient-wise image under an unramified embedding.
    pub fn base_change(&self, emb: &RingEmbedding) -> Self {
        let d = self.trunc();
        let f = TruncSeries2::from_fn(emb.target(), d, |i, j| emb.apply(self.f.coeff(i, j)));
        Self::new_unchecked(f)
    }

    pub fn record(&self) -> LawRecord {
        LawRecord { descriptor: self.descriptor().record(), series: self.f.clone() }
    }
}

/// Serialized form of a law.
#[derive(Clone, Debug, Serialize)]
pub struct LawRecord {
    pub descriptor: crate::padic::DescriptorRecord,
    pub series: TruncSeries2<R>,
}

/// Series in three variables truncated at total degree `d`, dense cube storage.
struct Series3 {
    d: usize,
    c: Vec<R>,
}

impl Series3 {
    fn zero(desc: &Arc<RingDescriptor>, d: usize) -> Self {
        Series3 { d, c: vec![R::zero(desc); d * d * d] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.d + j) * self.d + k
    }

    /// A two-variable series placed on the given pair of variables.
    fn embed(f: &TruncSeries2<R>, vars: (usize, usize), d: usize) -> Self {
        let desc = f.descriptor();
        let mut s = Self::zero(desc, d);
        for i in 0..d {
            for j in 0..d - i {
                let mut e = [0usize; 3];
                e[vars.0] += i;
                e[vars.1] += j;
                let k = s.idx(e[0], e[1], e[2]);
                s.c[k] = f.coeff(i, j).clone();
            }
        }
        s
    }

    fn var(desc: &Arc<RingDescriptor>, v: usize, d: usize) -> Self {
        let mut s = Self::zero(desc, d);
        if d > 1 {
            let mut e = [0usize; 3];
            e[v] = 1;
            let k = s.idx(e[0], e[1], e[2]);
            s.c[k] = R::one(desc);
        }
        s
    }

    fn terms(&self) -> Vec<(usize, usize, usize, &R)> {
        let d = self.d;
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d - i {
                for k in 0..d - i - j {
                    let a = &self.c[self.idx(i, j, k)];
                    if !a.is_zero() {
                        out.push((i, j, k, a));
                    }
                }
            }
        }
        out
    }

    fn mul(&self, o: &Self) -> Self {
        let desc = self.c[0].descriptor();
        let mut out = Self::zero(desc, self.d);
        let ta = self.terms();
        let tb = o.terms();
        for &(i1, j1, k1, a) in &ta {
            for &(i2, j2, k2, b) in &tb {
                if i1 + i2 + j1 + j2 + k1 + k2 < self.d {
                    let id = out.idx(i1 + i2, j1 + j2, k1 + k2);
                    out.c[id].add_mul_assign(a, b);
                }
            }
        }
        out
    }

    fn add_scaled(&mut self, o: &Self, a: &R) {
        for (x, y) in self.c.iter_mut().zip(&o.c) {
            if !y.is_zero() {
                x.add_mul_assign(y, a);
            }
        }
    }

    /// `F(A, B)`.
    fn substitute(f: &TruncSeries2<R>, a: &Self, b: &Self) -> Self {
        let d = a.d;
        let desc = f.descriptor();
        let mut bpow = vec![{
            let mut one = Self::zero(desc, d);
            one.c[0] = R::one(desc);
            one
        }];
        for j in 1..d {
            let next = bpow[j - 1].mul(b);
            bpow.push(next);
        }
        let mut acc = Self::zero(desc, d);
        for i in (0..d).rev() {
            let mut row = Self::zero(desc, d);
            for (j, c) in f.row(i).iter().enumerate().take(d - i) {
                if !c.is_zero() {
                    row.add_scaled(&bpow[j], c);
                }
            }
            acc = acc.mul(a);
            for (x, y) in acc.c.iter_mut().zip(&row.c) {
                *x = x.add_unchecked(y);
            }
        }
        acc
    }
}

fn associative(f: &TruncSeries2<R>, d: usize) -> bool {
    if d < 3 {
        return true;
    }
    let desc = f.descriptor();
    let f = if f.trunc() > d {
        TruncSeries2::from_fn(desc, d, |i, j| f.coeff(i, j).clone())
    } else {
        f.clone()
    };
    let fxy = Series3::embed(&f, (0, 1), d);
    let fyz = Series3::embed(&f, (1, 2), d);
    let x = Series3::var(desc, 0, d);
    let z = Series3::var(desc, 2, d);
    let left = Series3::substitute(&f, &fxy, &z);
    let right = Series3::substitute(&f, &x, &fyz);
    left.c == right.c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<RingDescriptor> {
        RingDescriptor::new(3, 1, 5).unwrap()
    }

    #[test]
    fn multiplicative_law_basics() {
        let d = ring();
        let law = FormalGroupLaw::new(FormalGroupLaw::multiplicative(&d, 10).series().clone()).unwrap();
        // iota = 1/(1+X) - 1 = -X + X^2 - X^3 + ...
        let iota = law.negation();
        for k in 1..10 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(*iota.coeff(k), R::from_int(&d, sign));
        }
        let two = law.multiplication_series(2);
        assert_eq!(two, TruncSeries1::from_coeffs(&d, 10, vec![R::zero(&d), R::from_int(&d, 2), R::one(&d)]));
        assert!(law.is_endomorphism(&two).unwrap());
        assert!(!law.is_endomorphism(&TruncSeries1::from_coeffs(&d, 10, vec![R::zero(&d), R::one(&d), R::one(&d)])).unwrap());
    }

    #[test]
    fn logarithm_of_multiplicative_law() {
        let d = ring();
        let law = FormalGroupLaw::multiplicative(&d, 8);
        let log = law.logarithm();
        for k in 1..8 {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            let expect = ScaledFieldElem::from_ratio(&d, sign, k as i64).unwrap();
            assert!(log.coeff(k).eq_mod(&expect, 3), "k={k}");
        }
        let add = FormalGroupLaw::additive(&d, 8);
        assert!(add.logarithm().eq_mod(&TruncSeries1::x(&d, 8), 4));
    }

    #[test]
    fn non_associative_series_is_rejected() {
        let d = ring();
        let mut f = FormalGroupLaw::multiplicative(&d, 6).series().clone();
        f.set(2, 1, R::one(&d));
        f.set(1, 2, R::one(&d));
        assert!(matches!(FormalGroupLaw::new(f), Err(Error::Axiom(_))));
    }
}
