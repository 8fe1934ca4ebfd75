//! Degree-by-degree solvers for series that commute with `[p]` or satisfy
//! a logarithm equation `lambda(g) = a * lambda(X)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::{RingDescriptor, ScaledFieldElem, UnramifiedRingElem, Valuation};
use crate::series::TruncSeries1;

/// `floor(log_p d)` for `d >= 1`.
pub fn floor_log(p: u64, d: usize) -> u32 {
    let mut k = 0;
    let mut t = p;
    while t <= d as u64 {
        k += 1;
        t = t.saturating_mul(p);
    }
    k
}

/// Extra `p`-adic digits carried by the solvers at truncation `d`.
pub fn guard_digits(p: u64, d: usize) -> u32 {
    2 + floor_log(p, d)
}

/// Coefficients of `g^e` for a fixed set of exponents, produced online:
/// the degree-`k` coefficient of every power `e >= 2` only needs
/// `g_1, ..., g_{k-1}` when `g(0) = 0`.
pub(crate) struct OnlinePowers {
    /// `(exponent, left factor, right factor)`; factor index 0 is `g` itself,
    /// index `i > 0` is node `i - 1`.
    nodes: Vec<(u64, usize, usize)>,
    coeffs: Vec<Vec<UnramifiedRingElem>>,
    lookup: BTreeMap<u64, usize>,
}

impl OnlinePowers {
    pub(crate) fn new(exponents: impl IntoIterator<Item = u64>) -> Self {
        let mut s = OnlinePowers { nodes: Vec::new(), coeffs: Vec::new(), lookup: BTreeMap::new() };
        let mut exps: Vec<u64> = exponents.into_iter().filter(|&e| e >= 2).collect();
        exps.sort_unstable();
        for e in exps {
            s.ensure(e);
        }
        s
    }

    fn slot(&mut self, e: u64) -> usize {
        if e == 1 {
            0
        } else {
            self.ensure(e) + 1
        }
    }

    fn ensure(&mut self, e: u64) -> usize {
        if let Some(&i) = self.lookup.get(&e) {
            return i;
        }
        let (a, b) = if e.is_multiple_of(2) { (e / 2, e / 2) } else { (e - 1, 1) };
        let sa = self.slot(a);
        let sb = self.slot(b);
        let idx = self.nodes.len();
        self.nodes.push((e, sa, sb));
        self.coeffs.push(Vec::new());
        self.lookup.insert(e, idx);
        idx
    }

    /// Push coefficient `k` of every node; `g` holds `g_0..g_{k-1}` (at least).
    pub(crate) fn advance(&mut self, g: &[UnramifiedRingElem], k: usize, desc: &Arc<RingDescriptor>) {
        for idx in 0..self.nodes.len() {
            let (e, sa, sb) = self.nodes[idx];
            let mut acc = UnramifiedRingElem::zero(desc);
            if (k as u64) >= e {
                let ea = self.exp_of(sa) as usize;
                let eb = self.exp_of(sb) as usize;
                for j in ea..=k - eb {
                    let x = self.get(sa, j, g);
                    if x.is_zero() {
                        continue;
                    }
                    let y = self.get(sb, k - j, g);
                    if !y.is_zero() {
                        acc.add_mul_assign(x, y);
                    }
                }
            }
            self.coeffs[idx].push(acc);
        }
    }

    fn exp_of(&self, slot: usize) -> u64 {
        if slot == 0 {
            1
        } else {
            self.nodes[slot - 1].0
        }
    }

    fn get<'a>(&'a self, slot: usize, j: usize, g: &'a [UnramifiedRingElem]) -> &'a UnramifiedRingElem {
        if slot == 0 {
            &g[j]
        } else {
            &self.coeffs[slot - 1][j]
        }
    }

    /// Coefficient `k` of `g^e` (already advanced past `k`).
    pub(crate) fn coeff(&self, e: u64, k: usize) -> &UnramifiedRingElem {
        &self.coeffs[self.lookup[&e]][k]
    }
}

/// Outcome of a degree-by-degree solve that may hit an integrality obstruction.
#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Solved(TruncSeries1<UnramifiedRingElem>),
    /// The first degree whose coefficient would not be integral.
    Obstructed(usize),
}

impl SolveOutcome {
    pub fn into_result(self) -> Result<TruncSeries1<UnramifiedRingElem>> {
        match self {
            SolveOutcome::Solved(s) => Ok(s),
            SolveOutcome::Obstructed(k) => Err(Error::Integrality(k)),
        }
    }

    pub fn is_solved(&self) -> bool {
        matches!(self, SolveOutcome::Solved(_))
    }
}

fn div_exact_p_pow(x: &UnramifiedRingElem, k: u32) -> Option<UnramifiedRingElem> {
    match x.valuation() {
        Valuation::Infinite => Some(UnramifiedRingElem::zero(x.descriptor())),
        Valuation::Finite(v) if v >= k as i64 => x.div_p_pow(k).ok(),
        _ => None,
    }
}

/// The unique `g = aX + ...` with `g(f(X)) = f(g(X))`, where `f = pX + ...`
/// is given by its nonzero terms (`f_0 = 0`, `f_1 = p`).
///
/// Works at the precision of the descriptor of `a`; the coefficient of
/// degree `k` is obtained from `g_k (p^k - p) = sum_{i>=2} f_i [X^k] g^i -
/// sum_{j<k} g_j [X^k] f^j`, so each degree divides by `p` once. Callers
/// supply guard digits (see [`guard_digits`]) and reduce afterwards.
pub fn commuting_series(f_terms: &[(usize, UnramifiedRingElem)], a: &UnramifiedRingElem, d: usize) -> SolveOutcome {
    let desc = a.descriptor().clone();
    debug_assert!(f_terms.iter().any(|(i, c)| *i == 1 && *c == UnramifiedRingElem::from_int(&desc, desc.p() as i64)));
    let zero = UnramifiedRingElem::zero(&desc);
    let mut g = vec![zero.clone(); d];
    if d < 2 {
        return SolveOutcome::Solved(TruncSeries1::from_coeffs(&desc, d, g));
    }
    g[1] = a.clone();
    let high: Vec<(usize, UnramifiedRingElem)> = f_terms.iter().filter(|(i, _)| *i >= 2 && *i < d).cloned().collect();
    let mut powers = OnlinePowers::new(high.iter().map(|(i, _)| *i as u64));
    // s accumulates sum_j g_j f^j for the g_j found so far.
    let mut s = vec![zero.clone(); d];
    let mut fpow = vec![zero.clone(); d];
    for (i, c) in f_terms {
        if *i < d {
            fpow[*i] = c.clone();
        }
    }
    let mul_by_f = |v: &[UnramifiedRingElem]| -> Vec<UnramifiedRingElem> {
        let mut out = vec![UnramifiedRingElem::zero(&desc); d];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, c) in f_terms {
                if j + i < d {
                    out[j + i].add_mul_assign(x, c);
                }
            }
        }
        out
    };
    let add_scaled = |s: &mut Vec<UnramifiedRingElem>, v: &[UnramifiedRingElem], c: &UnramifiedRingElem| {
        if c.is_zero() {
            return;
        }
        for (x, y) in s.iter_mut().zip(v) {
            if !y.is_zero() {
                x.add_mul_assign(y, c);
            }
        }
    };
    powers.advance(&g, 0, &desc);
    powers.advance(&g, 1, &desc);
    add_scaled(&mut s, &fpow, &g[1]);
    fpow = mul_by_f(&fpow);
    for k in 2..d {
        powers.advance(&g, k, &desc);
        let mut r = s[k].neg();
        for (i, c) in &high {
            if *i <= k {
                r.add_mul_assign(c, powers.coeff(*i as u64, k));
            }
        }
        let Some(q) = div_exact_p_pow(&r, 1) else {
            return SolveOutcome::Obstructed(k);
        };
        // p^{k-1} - 1 is a unit.
        let u = UnramifiedRingElem::from_int(&desc, 1).mul_p_pow(k as u32 - 1).sub_unchecked(&UnramifiedRingElem::one(&desc));
        let u_inv = u.invert().expect("p^{k-1} - 1 is a unit");
        g[k] = q.mul_unchecked(&u_inv);
        let gk = g[k].clone();
        add_scaled(&mut s, &fpow, &gk);
        if k + 1 < d {
            fpow = mul_by_f(&fpow);
        }
    }
    SolveOutcome::Solved(TruncSeries1::from_coeffs(&desc, d, g))
}

/// A logarithm `lambda = X + ...` written as `num_k / p^m` with integral
/// numerators, keeping only the nonzero terms.
#[derive(Clone, Debug)]
pub struct IntegralLog {
    desc: Arc<RingDescriptor>,
    m: u32,
    terms: Vec<(usize, UnramifiedRingElem)>,
    trunc: usize,
    known: u32,
}

impl IntegralLog {
    /// Clear denominators of a scaled logarithm. Every coefficient must be
    /// known to absolute precision `abs` (relative to its own scale); the
    /// numerators are returned over `desc` at precision `desc.N`.
    pub fn from_scaled(log: &TruncSeries1<ScaledFieldElem>, desc: &Arc<RingDescriptor>) -> Result<Self> {
        let mut m = 0i64;
        for a in log.coeffs() {
            if let Valuation::Finite(v) = a.valuation() {
                m = m.max(-v);
            }
        }
        let m = m as u32;
        let mut terms = Vec::new();
        let mut known = desc.precision() as i64;
        for (k, a) in log.coeffs().iter().enumerate() {
            known = known.min(a.absolute_precision() + m as i64);
            if a.is_zero() {
                continue;
            }
            let scaled = a.mul_p_pow(m as i64).with_descriptor(desc)?;
            let num = scaled.to_integral(0)?;
            if !num.is_zero() {
                terms.push((k, num));
            }
        }
        let known = known.max(0) as u32;
        Ok(IntegralLog { desc: desc.clone(), m, terms, trunc: log.trunc(), known })
    }

    /// Numerators given directly: `lambda_k = num_k / p^m`.
    pub fn from_terms(desc: &Arc<RingDescriptor>, m: u32, terms: Vec<(usize, UnramifiedRingElem)>, trunc: usize) -> Self {
        IntegralLog { desc: desc.clone(), m, terms, trunc, known: desc.precision() }
    }

    /// Precision of the solutions of [`log_equation_series`].
    pub fn output_precision(&self) -> u32 {
        self.known.min(self.desc.precision()).saturating_sub(self.m)
    }

    pub fn denominator_exponent(&self) -> u32 {
        self.m
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor> {
        &self.desc
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn terms(&self) -> &[(usize, UnramifiedRingElem)] {
        &self.terms
    }
}

/// Solve `lambda(g(X)) = a * lambda(X)` for `g = aX + ...`, to `d <= trunc`
/// terms. Values are correct to [`IntegralLog::output_precision`] digits;
/// the working precision must also be at least `2m + 1` for the higher
/// order error terms to vanish.
pub fn log_equation_series(log: &IntegralLog, a: &UnramifiedRingElem, d: usize) -> Result<SolveOutcome> {
    if d > log.trunc {
        return Err(Error::InsufficientTruncation(format!("logarithm known to {} terms, need {d}", log.trunc)));
    }
    let desc = log.desc.clone();
    let a = a.to_precision(&desc)?;
    let m = log.m;
    if m >= desc.precision() {
        return Err(Error::PrecisionInsufficient(format!(
            "denominators p^{m} exhaust precision {}",
            desc.precision()
        )));
    }
    let zero = UnramifiedRingElem::zero(&desc);
    let mut g = vec![zero.clone(); d];
    if d < 2 {
        return Ok(SolveOutcome::Solved(TruncSeries1::from_coeffs(&desc, d, g)));
    }
    g[1] = a.clone();
    let num_at: BTreeMap<usize, UnramifiedRingElem> = log.terms.iter().cloned().collect();
    let high: Vec<(usize, UnramifiedRingElem)> = log.terms.iter().filter(|(e, _)| *e >= 2 && *e < d).cloned().collect();
    let mut powers = OnlinePowers::new(high.iter().map(|(e, _)| *e as u64));
    powers.advance(&g, 0, &desc);
    powers.advance(&g, 1, &desc);
    for k in 2..d {
        powers.advance(&g, k, &desc);
        let mut r = match num_at.get(&k) {
            Some(nk) => a.mul_unchecked(nk),
            None => zero.clone(),
        };
        for (e, c) in &high {
            if *e <= k {
                r = r.sub_unchecked(&c.mul_unchecked(powers.coeff(*e as u64, k)));
            }
        }
        match div_exact_p_pow(&r, m) {
            Some(v) => g[k] = v,
            None => return Ok(SolveOutcome::Obstructed(k)),
        }
    }
    Ok(SolveOutcome::Solved(TruncSeries1::from_coeffs(&desc, d, g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Poly;

    #[test]
    fn online_powers_match_direct_powers() {
        let d = RingDescriptor::new(3, 1, 6).unwrap();
        let g: Vec<_> = (0..20i64).map(|k| UnramifiedRingElem::from_int(&d, if k == 0 { 0 } else { k * k + 1 })).collect();
        let gs = TruncSeries1::from_coeffs(&d, 20, g.clone());
        let mut pw = OnlinePowers::new([2, 9, 5]);
        for k in 0..20 {
            pw.advance(&g, k, &d);
        }
        for e in [2u64, 5, 9] {
            let direct = gs.pow(e);
            for k in 0..20 {
                assert_eq!(pw.coeff(e, k), direct.coeff(k), "e={e} k={k}");
            }
        }
    }

    #[test]
    fn teichmuller_action_on_standard_series_is_linear() {
        let d = RingDescriptor::new(3, 2, 6).unwrap();
        let f = Poly::from_ints(&d, &[0, 3, 0, 0, 0, 0, 0, 0, 0, 1]);
        let r = crate::padic::ResidueElem::primitive(&d);
        let w = crate::padic::teichmuller_lift(&d, &r);
        let g = commuting_series(&f.terms(), &w, 30).into_result().unwrap();
        assert_eq!(g, TruncSeries1::monomial(&d, 30, 1, w));
    }

    #[test]
    fn commuting_series_for_p_is_p_series() {
        let d = RingDescriptor::new(3, 1, 8).unwrap();
        let f = Poly::from_ints(&d, &[0, 3, 0, 1]);
        let three = UnramifiedRingElem::from_int(&d, 3);
        let g = commuting_series(&f.terms(), &three, 20).into_result().unwrap();
        // p^k - p loses one digit per degree; compare to precision N - 3.
        let low = d.with_precision(5).unwrap();
        assert_eq!(g.to_precision(&low).unwrap(), f.to_series(20).to_precision(&low).unwrap());
    }
}
