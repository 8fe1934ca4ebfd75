use std::sync::Arc;

use serde::Serialize;

use super::newton::{newton_polygon_of, NewtonPolygon};
use crate::error::{Error, Result};
use crate::formal_group::{FormalGroupLaw, ModuleStructure};
use crate::padic::{reduce_wide, RingDescriptor, ResidueElem, UnramifiedRingElem, Valuation};
use crate::series::{Poly, TruncSeries1};
use crate::weierstrass::division_polynomial;

type R = UnramifiedRingElem;

/// Element `sum_{j<e} c_j z^j` of a torsion-field model; digits are stored
/// flat, `f` per coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LElem {
    v: Vec<u64>,
}

impl LElem {
    pub fn is_zero(&self) -> bool {
        self.v.iter().all(|&x| x == 0)
    }
}

/// `L = K(z) = O_K[X] / (P)` for the level-`n` division polynomial `P`,
/// certified Eisenstein-like (pure Newton polygon of slope `1/e`), so `z`
/// is a uniformizer and `v_L(sum c_j z^j) = min(e v_p(c_j) + j)`.
#[derive(Clone, Debug)]
pub struct TorsionFieldModel {
    desc: Arc<RingDescriptor>,
    n: u32,
    q: u64,
    e: usize,
    p_rel: Poly,
    polygon: NewtonPolygon,
    /// `-P_j`, flat.
    neg_low: Vec<u64>,
    /// `z^{e+t}` for `t < e - 1`, flat.
    table: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelSummary {
    pub n: u32,
    pub q: u64,
    pub e: usize,
    pub precision: u32,
    pub polygon: NewtonPolygon,
}

impl TorsionFieldModel {
    /// Level-`n` model of the torsion of `ms`.
    pub fn new(ms: &ModuleStructure, n: u32, dcap: usize) -> Result<Self> {
        let dp = division_polynomial(ms, n, dcap)?;
        Self::from_polynomial(dp.p_rel, n, dp.q)
    }

    /// Model from a monic polynomial whose polygon is pure of slope `1/deg`.
    pub fn from_polynomial(p_rel: Poly, n: u32, q: u64) -> Result<Self> {
        let desc = p_rel.descriptor().clone();
        let e = p_rel.degree().unwrap_or(0);
        if e == 0 || !p_rel.is_monic() {
            return Err(Error::Precondition("model polynomial must be monic of positive degree".into()));
        }
        let polygon = newton_polygon_of(&p_rel)?;
        if !polygon.is_pure() || polygon.vertices[0] != (0, 1) {
            return Err(Error::Polygon(format!("polygon {:?} is not pure of slope 1/{e}", polygon.vertices)));
        }
        let f = desc.f();
        let mut neg_low = vec![0u64; e * f];
        for j in 0..e {
            let c = p_rel.coeff(j).neg();
            neg_low[j * f..(j + 1) * f].copy_from_slice(c.coeffs());
        }
        let mut m = TorsionFieldModel { desc, n, q, e, p_rel, polygon, neg_low, table: Vec::new() };
        let mut cur = LElem { v: m.neg_low.clone() };
        let mut table = Vec::with_capacity(e.saturating_sub(1));
        for _ in 0..e.saturating_sub(1) {
            table.push(cur.v.clone());
            cur = m.mul_z(&cur);
        }
        m.table = table;
        Ok(m)
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor> {
        &self.desc
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    /// `q = p^h`.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Ramification index `[L : K]`.
    pub fn e(&self) -> usize {
        self.e
    }

    pub fn polynomial(&self) -> &Poly {
        &self.p_rel
    }

    pub fn polygon(&self) -> &NewtonPolygon {
        &self.polygon
    }

    /// Valuations at or above `N e` are invisible.
    pub fn valuation_cap(&self) -> i64 {
        self.desc.precision() as i64 * self.e as i64
    }

    pub fn summary(&self) -> ModelSummary {
        ModelSummary { n: self.n, q: self.q, e: self.e, precision: self.desc.precision(), polygon: self.polygon.clone() }
    }

    pub fn zero(&self) -> LElem {
        LElem { v: vec![0; self.e * self.desc.f()] }
    }

    pub fn constant(&self, a: &R) -> LElem {
        let mut x = self.zero();
        x.v[..self.desc.f()].copy_from_slice(a.coeffs());
        x
    }

    pub fn one(&self) -> LElem {
        self.constant(&R::one(&self.desc))
    }

    /// The class of `X`.
    pub fn z(&self) -> LElem {
        self.monomial(1)
    }

    /// `z^k`.
    pub fn monomial(&self, k: usize) -> LElem {
        let f = self.desc.f();
        if k < self.e {
            let mut x = self.zero();
            x.v[k * f] = 1;
            x
        } else if k - self.e < self.table.len() {
            LElem { v: self.table[k - self.e].clone() }
        } else {
            let mut x = LElem { v: self.table.last().cloned().unwrap_or_else(|| self.neg_low.clone()) };
            let start = if self.table.is_empty() { self.e } else { self.e + self.table.len() - 1 };
            for _ in start..k {
                x = self.mul_z(&x);
            }
            x
        }
    }

    pub fn from_coeffs(&self, c: &[R]) -> Result<LElem> {
        if c.len() > self.e {
            return Err(Error::Mismatch(format!("{} coefficients for degree {}", c.len(), self.e)));
        }
        let f = self.desc.f();
        let mut x = self.zero();
        for (j, a) in c.iter().enumerate() {
            x.v[j * f..(j + 1) * f].copy_from_slice(a.to_precision(&self.desc)?.coeffs());
        }
        Ok(x)
    }

    pub fn coeffs(&self, x: &LElem) -> Vec<R> {
        let f = self.desc.f();
        x.v.chunks(f).map(|c| R::from_digits(&self.desc, c.iter().copied().collect())).collect()
    }

    pub fn add(&self, a: &LElem, b: &LElem) -> LElem {
        let d = &self.desc;
        LElem { v: a.v.iter().zip(&b.v).map(|(&x, &y)| d.add(x, y)).collect() }
    }

    pub fn sub(&self, a: &LElem, b: &LElem) -> LElem {
        let d = &self.desc;
        LElem { v: a.v.iter().zip(&b.v).map(|(&x, &y)| d.sub(x, y)).collect() }
    }

    pub fn neg(&self, a: &LElem) -> LElem {
        let d = &self.desc;
        LElem { v: a.v.iter().map(|&x| d.neg(x)).collect() }
    }

    /// Product of an `O_K` digit vector into a wide accumulator slot.
    #[inline]
    fn acc_ok(&self, acc: &mut [u128], a: &[u64], b: &[u64]) {
        let pn = self.desc.pn() as u128;
        let small = self.desc.pn() <= 1u64 << 32;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    let t = x as u128 * y as u128;
                    acc[i + j] += if small { t } else { t % pn };
                }
            }
        }
    }

    /// Reduce a wide `O_K` slot (length `2f - 1`) into `f` digits.
    fn finish_ok(&self, acc: &[u128], out: &mut [u64]) {
        let pn = self.desc.pn() as u128;
        let mut w: Vec<u64> = acc.iter().map(|&x| (x % pn) as u64).collect();
        reduce_wide(&self.desc, &mut w);
        out.copy_from_slice(&w[..self.desc.f()]);
    }

    pub fn mul(&self, a: &LElem, b: &LElem) -> LElem {
        let f = self.desc.f();
        let e = self.e;
        let w = 2 * f - 1;
        let nzb: Vec<usize> = (0..e).filter(|&j| b.v[j * f..(j + 1) * f].iter().any(|&x| x != 0)).collect();
        let mut acc = vec![0u128; (2 * e - 1) * w];
        for ja in 0..e {
            let xa = &a.v[ja * f..(ja + 1) * f];
            if xa.iter().all(|&x| x == 0) {
                continue;
            }
            for &jb in &nzb {
                let s = (ja + jb) * w;
                self.acc_ok(&mut acc[s..s + w], xa, &b.v[jb * f..(jb + 1) * f]);
            }
        }
        let mut out = self.zero();
        let mut high = vec![0u64; f];
        let mut acc2 = vec![0u128; e * w];
        let mut any_high = false;
        for t in 0..e.saturating_sub(1) {
            let slot = &acc[(e + t) * w..(e + t + 1) * w];
            if slot.iter().all(|&x| x == 0) {
                continue;
            }
            self.finish_ok(slot, &mut high);
            if high.iter().all(|&x| x == 0) {
                continue;
            }
            any_high = true;
            let row = &self.table[t];
            for j in 0..e {
                self.acc_ok(&mut acc2[j * w..(j + 1) * w], &high, &row[j * f..(j + 1) * f]);
            }
        }
        let pn = self.desc.pn() as u128;
        let mut tmp = vec![0u128; w];
        for j in 0..e {
            for k in 0..w {
                tmp[k] = acc[j * w + k] % pn + if any_high { acc2[j * w + k] % pn } else { 0 };
            }
            self.finish_ok(&tmp, &mut out.v[j * f..(j + 1) * f]);
        }
        out
    }

    /// `z a`.
    pub fn mul_z(&self, a: &LElem) -> LElem {
        let f = self.desc.f();
        let e = self.e;
        let mut out = self.zero();
        out.v[f..].copy_from_slice(&a.v[..(e - 1) * f]);
        let top = &a.v[(e - 1) * f..];
        if top.iter().all(|&x| x == 0) {
            return out;
        }
        let w = 2 * f - 1;
        let mut acc = vec![0u128; w];
        let mut digits = vec![0u64; f];
        for j in 0..e {
            acc.iter_mut().for_each(|x| *x = 0);
            self.acc_ok(&mut acc, top, &self.neg_low[j * f..(j + 1) * f]);
            self.finish_ok(&acc, &mut digits);
            for k in 0..f {
                out.v[j * f + k] = self.desc.add(out.v[j * f + k], digits[k]);
            }
        }
        out
    }

    pub fn mul_const(&self, a: &LElem, c: &R) -> LElem {
        let f = self.desc.f();
        let w = 2 * f - 1;
        let mut out = self.zero();
        let mut acc = vec![0u128; w];
        for j in 0..self.e {
            acc.iter_mut().for_each(|x| *x = 0);
            self.acc_ok(&mut acc, &a.v[j * f..(j + 1) * f], c.coeffs());
            self.finish_ok(&acc, &mut out.v[j * f..(j + 1) * f]);
        }
        out
    }

    pub fn pow(&self, a: &LElem, mut k: u64) -> LElem {
        let mut r = self.one();
        let mut b = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = self.mul(&r, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    /// `v_L`, normalized by `v_L(z) = 1`.
    pub fn valuation(&self, a: &LElem) -> Valuation {
        let f = self.desc.f();
        let p = self.desc.p();
        let mut best: Option<i64> = None;
        for j in 0..self.e {
            let mut vj: Option<i64> = None;
            for &x in &a.v[j * f..(j + 1) * f] {
                if x == 0 {
                    continue;
                }
                let mut y = x;
                let mut v = 0;
                while y % p == 0 {
                    y /= p;
                    v += 1;
                }
                vj = Some(vj.map_or(v, |u: i64| u.min(v)));
            }
            if let Some(v) = vj {
                let val = self.e as i64 * v + j as i64;
                best = Some(best.map_or(val, |b: i64| b.min(val)));
            }
        }
        best.map_or(Valuation::Infinite, Valuation::Finite)
    }

    /// Residue of the constant coefficient (the residue of `a` in the
    /// residue field of `L`, which is that of `K`).
    pub fn residue(&self, a: &LElem) -> ResidueElem {
        let f = self.desc.f();
        let p = self.desc.p();
        let digits: Vec<u64> = a.v[..f].iter().map(|&x| x % p).collect();
        ResidueElem::from_coeffs(&self.desc, &digits)
    }

    /// Inverse of a unit, by Newton iteration from the residue inverse.
    pub fn inverse(&self, a: &LElem) -> Result<LElem> {
        let r = self.residue(a);
        if r.is_zero() {
            return Err(Error::NonUnit);
        }
        let r_inv = R::lift_residue(&self.desc, &r.inverse()?);
        let mut x = self.constant(&r_inv);
        let two = self.constant(&R::from_int(&self.desc, 2));
        // each step doubles the known v_L
        let mut known = 1i64;
        while known < self.valuation_cap() {
            x = self.mul(&x, &self.sub(&two, &self.mul(a, &x)));
            known *= 2;
        }
        if self.mul(a, &x) != self.one() {
            return Err(Error::NonConvergence("inverse in torsion field".into()));
        }
        Ok(x)
    }

    /// `sum_k s_k z^k`. The discarded tail has `v_L >= D`, so `D >= N e`
    /// is required for the result to be exact mod `p^N`.
    pub fn eval_series_at_z(&self, s: &TruncSeries1<R>) -> Result<LElem> {
        let need = self.valuation_cap() as usize;
        if s.trunc() < need {
            return Err(Error::InsufficientTruncation(format!(
                "series known to {} terms, level {} needs D >= N e = {need}; lower N or raise D",
                s.trunc(),
                self.n
            )));
        }
        let coeffs = s.coeffs();
        let top = coeffs.iter().rposition(|c| !c.is_zero());
        let Some(top) = top else { return Ok(self.zero()) };
        let mut acc = self.constant(&coeffs[top].to_precision(&self.desc)?);
        for k in (0..top).rev() {
            acc = self.mul_z(&acc);
            if !coeffs[k].is_zero() {
                acc = self.add(&acc, &self.constant(&coeffs[k].to_precision(&self.desc)?));
            }
        }
        Ok(acc)
    }

    /// `s(y)` for `v_L(y) >= 1`; the tail bound is `D v_L(y) >= N e`.
    pub fn eval_series(&self, s: &TruncSeries1<R>, y: &LElem) -> Result<LElem> {
        let vy = match self.valuation(y) {
            Valuation::Infinite => {
                return Ok(self.constant(&s.coeff(0).to_precision(&self.desc)?));
            }
            Valuation::Finite(v) => v,
        };
        if vy < 1 {
            return Err(Error::Precondition("series evaluated at a non-topologically-nilpotent element".into()));
        }
        if (s.trunc() as i64) * vy < self.valuation_cap() {
            return Err(Error::InsufficientTruncation(format!(
                "series known to {} terms; need D v_L(y) >= {}",
                s.trunc(),
                self.valuation_cap()
            )));
        }
        self.horner(s.coeffs(), y)
    }

    pub fn eval_poly(&self, p: &Poly, y: &LElem) -> Result<LElem> {
        self.horner(p.coeffs(), y)
    }

    fn horner(&self, c: &[R], y: &LElem) -> Result<LElem> {
        let Some(top) = c.iter().rposition(|a| !a.is_zero()) else { return Ok(self.zero()) };
        let mut acc = self.constant(&c[top].to_precision(&self.desc)?);
        for k in (0..top).rev() {
            acc = self.mul(&acc, y);
            if !c[k].is_zero() {
                acc = self.add(&acc, &self.constant(&c[k].to_precision(&self.desc)?));
            }
        }
        Ok(acc)
    }

    /// `F(x, y)` for `x, y` of positive valuation; the truncation of the law
    /// must reach `N e / min(v(x), v(y))`.
    pub fn eval_law(&self, law: &FormalGroupLaw, x: &LElem, y: &LElem) -> Result<LElem> {
        let vmin = match (self.valuation(x), self.valuation(y)) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.min(b),
            (Valuation::Finite(a), _) | (_, Valuation::Finite(a)) => a,
            _ => return Ok(self.zero()),
        };
        if vmin < 1 {
            return Err(Error::Precondition("law evaluated at a non-topologically-nilpotent element".into()));
        }
        let d = law.trunc();
        if (d as i64) * vmin < self.valuation_cap() {
            return Err(Error::InsufficientTruncation(format!(
                "law known to degree {d}; need D >= {}",
                (self.valuation_cap() + vmin - 1) / vmin
            )));
        }
        let series = law.series();
        let mut ypow = vec![self.one()];
        for j in 1..d {
            let next = self.mul(&ypow[j - 1], y);
            ypow.push(next);
        }
        let mut acc = self.zero();
        for i in (0..d).rev() {
            let mut row = self.zero();
            for (j, c) in series.row(i).iter().enumerate().take(d - i) {
                if !c.is_zero() {
                    row = self.add(&row, &self.mul_const(&ypow[j], &c.to_precision(&self.desc)?));
                }
            }
            acc = self.add(&self.mul(&acc, x), &row);
        }
        Ok(acc)
    }

    /// Same model with coefficients reduced to a lower precision.
    pub fn with_precision(&self, n: u32) -> Result<Self> {
        let low = self.desc.with_precision(n)?;
        let p = self.p_rel.map_to(&low, |c| c.to_precision(&low).unwrap());
        Self::from_polynomial(p, self.n, self.q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_group::ActionSource;

    fn lt(p: u64, f: usize, n_prec: u32, poly: &[i64]) -> ModuleStructure {
        let d = RingDescriptor::new(p, f, n_prec).unwrap();
        ModuleStructure::new(&d, 1, ActionSource::Polynomial(Poly::from_ints(&d, poly))).unwrap()
    }

    #[test]
    fn valuations() {
        let ms = lt(3, 1, 4, &[0, 3, 0, 1]);
        let m = TorsionFieldModel::new(&ms, 2, 800).unwrap();
        assert_eq!(m.e(), 6);
        let z = m.z();
        assert_eq!(m.valuation(&z), Valuation::Finite(1));
        let p = m.constant(&R::from_int(ms.descriptor(), 3));
        assert_eq!(m.valuation(&p), Valuation::Finite(6));
        let y = m.add(&m.mul(&p, &z), &m.mul(&z, &z));
        assert_eq!(m.valuation(&y), Valuation::Finite(2));
        assert_eq!(m.valuation(&m.zero()), Valuation::Infinite);
        // z^e = -p * unit
        assert_eq!(m.valuation(&m.pow(&z, 6)), Valuation::Finite(6));
        assert_eq!(m.valuation(&m.pow(&z, 13)), Valuation::Finite(13));
    }

    #[test]
    fn series_evaluation() {
        let ms = lt(3, 2, 3, &[0, 3, 0, 1]);
        let m = TorsionFieldModel::new(&ms, 2, 800).unwrap();
        let d = ms.descriptor();
        let big_d = m.valuation_cap() as usize;
        assert_eq!(m.eval_series_at_z(&TruncSeries1::x(d, big_d)).unwrap(), m.z());
        let p2 = ms.p_power_series(2, big_d).unwrap();
        assert!(m.eval_series_at_z(&p2).unwrap().is_zero());
        let p1 = ms.p_power_series(1, big_d).unwrap();
        let y = m.eval_series_at_z(&p1).unwrap();
        // a point of exact order p in a field with e = 6 has v_L = e / (q - 1) = 3
        assert_eq!(m.valuation(&y), Valuation::Finite(3));
        assert!(m.eval_series_at_z(&TruncSeries1::x(d, big_d - 1)).is_err());
    }

    #[test]
    fn arithmetic_consistency() {
        let ms = lt(3, 2, 4, &[0, 3, 0, 0, 0, 0, 0, 0, 0, 1]);
        let m = TorsionFieldModel::new(&ms, 1, 800).unwrap();
        let d = ms.descriptor();
        let a = m.from_coeffs(&[R::from_coeffs(d, &[1, 2]), R::from_int(d, 5), R::zero(d), R::from_coeffs(d, &[7, 1])]).unwrap();
        let b = m.add(&m.one(), &m.mul(&m.z(), &m.constant(&R::from_coeffs(d, &[2, 2]))));
        let c = m.monomial(5);
        assert_eq!(m.mul(&m.mul(&a, &b), &c), m.mul(&a, &m.mul(&b, &c)));
        assert_eq!(m.mul(&a, &m.add(&b, &c)), m.add(&m.mul(&a, &b), &m.mul(&a, &c)));
        assert_eq!(m.mul(&m.z(), &a), m.mul_z(&a));
        let bi = m.inverse(&b).unwrap();
        assert_eq!(m.mul(&b, &bi), m.one());
        assert_eq!(m.monomial(20), m.pow(&m.z(), 20));
        // P(z) = 0
        assert!(m.eval_poly(m.polynomial(), &m.z()).unwrap().is_zero());
    }
}
