//! Weierstrass preparation, the division of a series into components
//! `f = sum_i a_i([p](X)) X^i`, and division polynomials.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formal_group::ModuleStructure;
use crate::padic::{RingDescriptor, UnramifiedRingElem, Valuation};
use crate::series::{Poly, TruncSeries1};

type R = UnramifiedRingElem;

/// `f = P U` with `P` monic distinguished of degree `d` and `U` a unit.
///
/// The descriptor of `p` records the precision to which both are known;
/// `u` is exact on its own truncation.
#[derive(Clone, Debug, Serialize)]
pub struct WeierstrassData {
    pub p: Poly,
    pub u: TruncSeries1<R>,
    pub degree: usize,
}

impl WeierstrassData {
    pub fn precision(&self) -> u32 {
        self.p.descriptor().precision()
    }
}

fn first_unit_or_err(f: &TruncSeries1<R>) -> Result<usize> {
    f.first_unit().ok_or_else(|| {
        Error::InsufficientTruncation(format!("Weierstrass degree exceeds truncation {}", f.trunc()))
    })
}

/// Iterate `V <- f_high^{-1} (1 - (f_low V) div X^d)`; at the fixed point
/// `f V = P` is monic of degree `d`. Every pass gains one digit, and each
/// digit of `P` costs `d` terms of truncation.
fn prep_iterate(f: &TruncSeries1<R>, d: usize, digits: u32) -> Result<(Poly, TruncSeries1<R>)> {
    let desc = f.descriptor();
    let big_d = f.trunc();
    let len = big_d - d;
    let f_low: Vec<R> = f.coeffs()[..d].to_vec();
    let f_high = TruncSeries1::from_coeffs(desc, len, f.coeffs()[d..].to_vec());
    let inv_high = f_high.inverse()?;
    let mut v = inv_high.clone();
    for _ in 0..=digits {
        // (f_low * V) div X^d, to len terms
        let mut t = vec![R::zero(desc); len];
        for (i, a) in f_low.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.coeffs().iter().enumerate() {
                let k = i + j;
                if k >= d && k - d < len && !b.is_zero() {
                    t[k - d].add_mul_assign(a, b);
                }
            }
        }
        let mut rhs = TruncSeries1::<R>::one(desc, len);
        for (k, x) in t.into_iter().enumerate() {
            let cur = rhs.coeff(k).clone();
            rhs.set_coeff(k, cur.sub_unchecked(&x));
        }
        let next = inv_high.checked_mul(&rhs)?;
        if next == v {
            break;
        }
        v = next;
    }
    let mut pc = vec![R::zero(desc); d + 1];
    for (i, a) in f_low.iter().enumerate() {
        for (j, b) in v.coeffs().iter().enumerate().take(d - i) {
            pc[i + j].add_mul_assign(a, b);
        }
    }
    pc[d] = R::one(desc);
    Ok((Poly::new(desc, pc), v))
}

/// Weierstrass preparation of a truncated series. With `d` the first unit
/// index, `P` is determined to `min(N, floor(D/d) - 1)` digits and `U` to
/// `D - d * that` terms.
pub fn weierstrass_prep(f: &TruncSeries1<R>) -> Result<WeierstrassData> {
    let desc = f.descriptor();
    let d = first_unit_or_err(f)?;
    if d == 0 {
        return Ok(WeierstrassData { p: Poly::one(desc), u: f.clone(), degree: 0 });
    }
    let big_d = f.trunc();
    let n_eff = (desc.precision() as usize).min(big_d / d - 1);
    if n_eff == 0 {
        return Err(Error::InsufficientTruncation(format!(
            "truncation {big_d} leaves no digits for Weierstrass degree {d}"
        )));
    }
    let (p, v) = prep_iterate(f, d, n_eff as u32)?;
    let low = desc.with_precision(n_eff as u32)?;
    let u_len = (big_d - d * n_eff).max(1);
    let u = v.truncate(u_len)?.inverse()?.to_precision(&low)?;
    let p = p.map_to(&low, |c| c.to_precision(&low).unwrap());
    Ok(WeierstrassData { p, u, degree: d })
}

/// Exact preparation of a polynomial: `U` is then the polynomial quotient
/// `f / P`, checked to leave no remainder.
pub fn weierstrass_prep_poly(f: &Poly) -> Result<(Poly, Poly)> {
    let desc = f.descriptor();
    let n = desc.precision() as usize;
    let probe = f.to_series(f.degree().map_or(1, |k| k + 1));
    let d = first_unit_or_err(&probe)?;
    if d == 0 {
        return Ok((Poly::one(desc), f.clone()));
    }
    let big_d = d * (n + 2);
    let (p, _) = prep_iterate(&f.to_series(big_d), d, n as u32 + 1)?;
    let (q, r) = poly_divmod(f, &p)?;
    if !r.is_zero() {
        return Err(Error::NonConvergence("distinguished factor does not divide the polynomial".into()));
    }
    Ok((p, q))
}

/// Division by a monic polynomial.
pub fn poly_divmod(a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    if !b.is_monic() {
        return Err(Error::Precondition("divisor must be monic".into()));
    }
    let desc = a.descriptor();
    let db = b.degree().unwrap();
    let mut r: Vec<R> = a.coeffs().to_vec();
    if r.len() <= db {
        return Ok((Poly::zero(desc), a.clone()));
    }
    let mut q = vec![R::zero(desc); r.len() - db];
    for k in (db..r.len()).rev() {
        let c = r[k].clone();
        if c.is_zero() {
            continue;
        }
        q[k - db] = c.clone();
        for (j, bj) in b.coeffs().iter().enumerate() {
            r[k - db + j] = r[k - db + j].sub_unchecked(&c.mul_unchecked(bj));
        }
    }
    r.truncate(db);
    Ok((Poly::new(desc, q), Poly::new(desc, r)))
}

/// One step of the division by `[p]`: `f = sum a_i X^i + [p] g + p f1`
/// with constants `a_i`; `f1` carries one digit less. Holds modulo `X^t`, `t` the truncation of `g` and
/// `f1`: at most `D - q`, less when the unit of `[p]` is only partly known.
#[derive(Clone, Debug)]
pub struct DivisionStep {
    pub a: Vec<R>,
    pub g: TruncSeries1<R>,
    pub f1: TruncSeries1<R>,
}

/// Constants `a_i` are the digit lifts of the residues of the first `q`
/// coefficients; the rest of `f` is divided by the distinguished factor
/// `P` of `[p]`, and what `X^q - P` leaves behind is divisible by `p`.
pub fn division_step(f: &TruncSeries1<R>, pi_series: &TruncSeries1<R>, q: usize) -> Result<DivisionStep> {
    if pi_series.first_unit() != Some(q) {
        return Err(Error::Precondition(format!("[p] does not have Weierstrass degree {q}")));
    }
    if !pi_series.coeff(0).is_zero() {
        return Err(Error::NonZeroConstant);
    }
    let big_d = f.trunc().min(pi_series.trunc());
    if big_d <= q {
        return Err(Error::InsufficientTruncation(format!("need more than {q} terms")));
    }
    let prep = weierstrass_prep(&pi_series.truncate(big_d)?)?;
    let low = prep.p.descriptor().clone();
    let len = (big_d - q).min(prep.u.trunc());
    let f = f.truncate(big_d)?.to_precision(&low)?;
    let mut a = Vec::with_capacity(q);
    let mut r_low = vec![R::zero(&low); len];
    for i in 0..q {
        let c = f.coeff(i);
        let ai = R::lift_residue(&low, &c.residue());
        let rest = c.sub_unchecked(&ai);
        if i < len {
            r_low[i] = rest.div_p_pow(1)?;
        }
        a.push(ai);
    }
    let h = TruncSeries1::from_coeffs(&low, len, f.coeffs()[q..].to_vec());
    let u = prep.u.truncate(len)?;
    let g = h.checked_mul(&u.inverse()?)?;
    // (X^q - P) / p, degree < q
    let mut t = vec![R::zero(&low); len];
    for (i, c) in prep.p.coeffs().iter().enumerate().take(q) {
        if i < len {
            t[i] = c.neg().div_p_pow(1)?;
        }
    }
    let t = TruncSeries1::from_coeffs(&low, len, t);
    let f1 = TruncSeries1::from_coeffs(&low, len, r_low).checked_add(&t.checked_mul(&h)?)?;
    // dividing by p costs a digit
    let f1_desc = low.with_precision(low.precision().saturating_sub(1).max(1))?;
    let f1 = f1.to_precision(&f1_desc)?;
    Ok(DivisionStep { a, g, f1 })
}

/// Components `a_0, ..., a_{q-1}` of `f = sum_i a_i([p](X)) X^i`, valid on
/// the window `X^{q D'}` with `D' = floor(D/q)` terms per component.
#[derive(Clone, Debug, Serialize)]
pub struct PhiDecomposition {
    pub components: Vec<TruncSeries1<R>>,
    /// Terms per component.
    pub component_trunc: usize,
    /// The identity holds modulo `X^window`.
    pub window: usize,
    /// `p`-adic rounds performed.
    pub rounds: u32,
}

/// Decompose `f` along `{1, X, ..., X^{q-1}}` over the subring `{a([p](X))}`.
/// Each round solves the triangular system modulo `p` (the term
/// `X^i [p]^j` starts at degree `qj + i` mod `p`) and divides the residual
/// by `p`.
pub fn phi_basis_decompose(f: &TruncSeries1<R>, pi_series: &TruncSeries1<R>, q: usize) -> Result<PhiDecomposition> {
    let desc = f.descriptor().clone();
    if pi_series.first_unit() != Some(q) {
        return Err(Error::Precondition(format!("[p] does not have Weierstrass degree {q}")));
    }
    let big_d = f.trunc().min(pi_series.trunc());
    let dprime = big_d / q;
    if dprime == 0 {
        return Err(Error::InsufficientTruncation(format!("need at least {q} terms")));
    }
    let w = q * dprime;
    let pi = pi_series.truncate(w)?;
    let mut powers = vec![TruncSeries1::one(&desc, w)];
    for j in 1..dprime {
        let next = powers[j - 1].checked_mul(&pi)?;
        powers.push(next);
    }
    let lead = pi.coeff(q).residue();
    let lead_inv_pows: Vec<_> = {
        let inv = lead.inverse()?;
        let mut v = vec![crate::padic::ResidueElem::one(&desc)];
        for j in 1..dprime {
            v.push(v[j - 1].checked_mul(&inv)?);
        }
        v
    };
    let n = desc.precision();
    let mut comps = vec![vec![R::zero(&desc); dprime]; q];
    let mut r: Vec<R> = f.coeffs()[..w].to_vec();
    for round in 0..n {
        for k in 0..w {
            let (j, i) = (k / q, k % q);
            let res = r[k].residue();
            if res.is_zero() {
                continue;
            }
            let c = R::lift_residue(&desc, &res.checked_mul(&lead_inv_pows[j])?);
            // r -= c X^i [p]^j
            for (t, b) in powers[j].coeffs().iter().enumerate() {
                if t + i >= w {
                    break;
                }
                if !b.is_zero() {
                    r[t + i] = r[t + i].sub_unchecked(&c.mul_unchecked(b));
                }
            }
            comps[i][j] = comps[i][j].add_unchecked(&c.mul_p_pow(round));
        }
        for x in r.iter_mut() {
            *x = match x.valuation() {
                Valuation::Infinite => R::zero(&desc),
                _ => x.div_p_pow(1)?,
            };
        }
    }
    let components = comps.into_iter().map(|c| TruncSeries1::from_coeffs(&desc, dprime, c)).collect();
    Ok(PhiDecomposition { components, component_trunc: dprime, window: w, rounds: n })
}

/// `sum_i a_i([p](X)) X^i` modulo `X^window`.
pub fn phi_reconstruct(dec: &PhiDecomposition, pi_series: &TruncSeries1<R>) -> Result<TruncSeries1<R>> {
    let w = dec.window;
    let desc = pi_series.descriptor().clone();
    let pi = pi_series.truncate(w)?;
    let mut acc = TruncSeries1::zero(&desc, w);
    for (i, a) in dec.components.iter().enumerate() {
        let a_w = TruncSeries1::from_coeffs(&desc, w, a.coeffs().to_vec());
        let comp = a_w.compose(&pi)?.shift(i);
        acc = acc.checked_add(&comp)?;
    }
    Ok(acc)
}

/// The level-`n` division polynomial: the distinguished factor of
/// `Phi_n = ([p](Y)/Y)(Y = [p^{n-1}](X))`, whose roots are the points of
/// exact order `p^n`.
#[derive(Clone, Debug, Serialize)]
pub struct DivisionPolynomial {
    pub n: u32,
    /// `q = p^h`.
    pub q: u64,
    /// Monic distinguished, degree `q^{n-1}(q - 1)`.
    pub p_rel: Poly,
    pub unit: TruncSeries1<R>,
    /// Weierstrass degree of `[p^n]`.
    pub full_degree: usize,
    /// Truncation used for the series computations (0 when exact).
    pub trunc: usize,
}

impl DivisionPolynomial {
    pub fn degree(&self) -> usize {
        self.p_rel.degree().unwrap_or(0)
    }

    pub fn precision(&self) -> u32 {
        self.p_rel.descriptor().precision()
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor> {
        self.p_rel.descriptor()
    }
}

/// Default cap on the truncation used for series-valued `[p]`.
pub const DEFAULT_DCAP: usize = 800;

/// Division polynomial at level `n >= 1`. Exact when `[p]` is a polynomial;
/// otherwise computed from series at `D = (N + 1) e + 1`, refused above `dcap`.
pub fn division_polynomial(ms: &ModuleStructure, n: u32, dcap: usize) -> Result<DivisionPolynomial> {
    if n == 0 {
        return Err(Error::Precondition("level must be at least 1".into()));
    }
    let desc = ms.descriptor().clone();
    let p = desc.p();
    let h = ms
        .height(4)?
        .finite()
        .ok_or_else(|| Error::Precondition("infinite height: no torsion".into()))?;
    let q = p.pow(h);
    let e = q.checked_pow(n - 1).and_then(|x| x.checked_mul(q - 1)).ok_or_else(|| Error::Precondition("degree overflows".into()))? as usize;
    let full = e + q.pow(n - 1) as usize;
    if let Some(f) = ms.p_polynomial() {
        let mut inner = Poly::x(&desc);
        for _ in 1..n {
            inner = f.compose(&inner)?;
        }
        let phi = f.div_x_pow(1)?.compose(&inner)?;
        let (p_rel, u) = weierstrass_prep_poly(&phi)?;
        if p_rel.degree() != Some(e) {
            return Err(Error::NonConvergence(format!("division polynomial has degree {:?}, expected {e}", p_rel.degree())));
        }
        let full_poly = f.compose(&inner)?;
        let full_degree = full_poly.to_series(full + 1).first_unit().unwrap_or(0);
        let ud = u.degree().unwrap_or(0) + 1;
        return Ok(DivisionPolynomial { n, q, p_rel, unit: u.to_series(ud), full_degree, trunc: 0 });
    }
    let big_d = (desc.precision() as usize + 1) * e + 1;
    let big_d = big_d.max(full + 1);
    if big_d > dcap {
        return Err(Error::InsufficientTruncation(format!(
            "level {n} at N = {} needs truncation {big_d} > cap {dcap}; lower N or raise the cap",
            desc.precision()
        )));
    }
    let pser = ms.p_series(big_d)?;
    let mut inner = TruncSeries1::x(&desc, big_d);
    for _ in 1..n {
        inner = pser.compose(&inner)?;
    }
    let full_degree = pser.compose(&inner)?.first_unit().unwrap_or(0);
    let quot = TruncSeries1::from_coeffs(&desc, big_d - 1, pser.coeffs()[1..].to_vec());
    let phi = quot.compose(&inner.truncate(big_d - 1)?)?;
    let prep = weierstrass_prep(&phi)?;
    if prep.degree != e {
        return Err(Error::NonConvergence(format!("division polynomial has degree {}, expected {e}", prep.degree)));
    }
    Ok(DivisionPolynomial { n, q, p_rel: prep.p, unit: prep.u, full_degree, trunc: big_d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_group::{ActionSource, FrobeniusSeries};

    fn ints(d: &Arc<RingDescriptor>, len: usize, c: &[i64]) -> TruncSeries1<R> {
        TruncSeries1::from_coeffs(d, len, c.iter().map(|&v| R::from_int(d, v)).collect())
    }

    #[test]
    fn prep_examples() {
        let d = RingDescriptor::new(3, 1, 4).unwrap();
        let f = ints(&d, 20, &[0, 3, 0, 1]);
        let w = weierstrass_prep(&f).unwrap();
        assert_eq!(w.p, Poly::from_ints(w.p.descriptor(), &[0, 3, 0, 1]));
        assert!(w.u.coeffs().iter().enumerate().all(|(k, c)| if k == 0 { c.is_one() } else { c.is_zero() }));
        // (X^2 + 3)(1 + X) = 3 + 3X + X^2 + X^3
        let g = ints(&d, 20, &[3, 3, 1, 1]);
        let w = weierstrass_prep(&g).unwrap();
        assert_eq!(w.p, Poly::from_ints(w.p.descriptor(), &[3, 0, 1]));
        assert_eq!(w.u, ints(w.u.descriptor(), w.u.trunc(), &[1, 1]));
        let (p, u) = weierstrass_prep_poly(&Poly::from_ints(&d, &[3, 3, 1, 1])).unwrap();
        assert_eq!((p, u), (Poly::from_ints(&d, &[3, 0, 1]), Poly::from_ints(&d, &[1, 1])));
        let unit = ints(&d, 10, &[2, 1, 5]);
        let w = weierstrass_prep(&unit).unwrap();
        assert_eq!(w.degree, 0);
        assert_eq!(w.u, unit);
    }

    #[test]
    fn division_step_examples() {
        let d = RingDescriptor::new(3, 1, 4).unwrap();
        let pi = ints(&d, 20, &[0, 3, 0, 1]);
        let s = division_step(&ints(&d, 20, &[0, 0, 0, 1]), &pi, 3).unwrap();
        assert!(s.a.iter().all(|a| a.is_zero()));
        let t = s.g.trunc();
        assert!(t >= 8);
        assert_eq!(s.g, ints(s.g.descriptor(), t, &[1]));
        assert_eq!(s.f1, ints(s.f1.descriptor(), t, &[0, -1]));
        let s = division_step(&ints(&d, 20, &[0, 0, 1]), &pi, 3).unwrap();
        assert!(s.a[2].is_one() && s.a[0].is_zero() && s.a[1].is_zero());
        assert!(s.g.is_zero() && s.f1.is_zero());
        let s = division_step(&pi, &pi, 3).unwrap();
        assert!(s.a.iter().all(|a| a.is_zero()));
        assert_eq!(s.g, ints(s.g.descriptor(), s.g.trunc(), &[1]));
        assert!(s.f1.is_zero());
    }

    #[test]
    fn phi_decomposition_examples() {
        let d = RingDescriptor::new(3, 1, 4).unwrap();
        let pi = ints(&d, 27, &[0, 3, 0, 1]);
        let dec = phi_basis_decompose(&pi, &pi, 3).unwrap();
        assert_eq!(dec.components[0], ints(&d, 9, &[0, 1]));
        assert!(dec.components[1].is_zero() && dec.components[2].is_zero());
        let dec = phi_basis_decompose(&ints(&d, 27, &[0, 0, 1]), &pi, 3).unwrap();
        assert_eq!(dec.components[2], ints(&d, 9, &[1]));
        let f = ints(&d, 27, &(0..27).map(|k| (k * k * 7 + 3 * k + 1) % 81).collect::<Vec<_>>());
        let dec = phi_basis_decompose(&f, &pi, 3).unwrap();
        assert_eq!(phi_reconstruct(&dec, &pi).unwrap(), f);
    }

    #[test]
    fn division_polynomials_of_standard_series() {
        let d = RingDescriptor::new(3, 1, 4).unwrap();
        let ms = ModuleStructure::new(&d, 1, ActionSource::Polynomial(Poly::from_ints(&d, &[0, 3, 0, 1]))).unwrap();
        let dp1 = division_polynomial(&ms, 1, DEFAULT_DCAP).unwrap();
        assert_eq!(dp1.p_rel, Poly::from_ints(&d, &[3, 0, 1]));
        let dp2 = division_polynomial(&ms, 2, DEFAULT_DCAP).unwrap();
        assert_eq!(dp2.degree(), 6);
        assert_eq!(dp2.full_degree, 9);
        // Phi_2 = 3 + (3X + X^3)^2 is already distinguished
        let expect = Poly::from_ints(&d, &[3, 0, 9, 0, 6, 0, 1]);
        assert_eq!(dp2.p_rel, expect);
        let gm = FrobeniusSeries::multiplicative(&d).unwrap();
        let ms = ModuleStructure::new(&d, 1, ActionSource::Polynomial(gm.poly().clone())).unwrap();
        let dp = division_polynomial(&ms, 1, DEFAULT_DCAP).unwrap();
        assert_eq!(dp.p_rel, Poly::from_ints(&d, &[3, 3, 1]));
    }

    #[test]
    fn series_route_for_functional_equation_group() {
        let d = RingDescriptor::new(3, 1, 3).unwrap();
        let ms = ModuleStructure::new(&d, 1, ActionSource::Honda(vec![R::one(&d)])).unwrap();
        for (n, e) in [(1u32, 2usize), (2, 6)] {
            let dp = division_polynomial(&ms, n, DEFAULT_DCAP).unwrap();
            assert_eq!(dp.degree(), e);
            assert_eq!(dp.full_degree, 3usize.pow(n));
            assert_eq!(dp.p_rel.coeff(0).valuation(), Valuation::Finite(1));
            assert_eq!(dp.precision(), 3);
        }
        assert!(matches!(division_polynomial(&ms, 2, 20), Err(Error::InsufficientTruncation(_))));
    }
}
