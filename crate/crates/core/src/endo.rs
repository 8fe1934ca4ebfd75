//! Endomorphism rings: which linear coefficients `a` admit an
//! endomorphism `aX + ...` over `O_K`, the residue degree of the field they
//! generate, and the automorphism of order `q - 1`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formal_group::{floor_log, log_equation_series, FormalGroupLaw, IntegralLog, SolveOutcome};
use crate::padic::{teichmuller_lift, RingDescriptor, ResidueElem, UnramifiedRingElem};
use crate::series::TruncSeries1;

type R = UnramifiedRingElem;

/// Linear coefficient of an endomorphism.
pub fn c_map(g: &TruncSeries1<R>) -> Result<R> {
    if !g.coeff(0).is_zero() {
        return Err(Error::NonZeroConstant);
    }
    Ok(if g.trunc() > 1 { g.coeff(1).clone() } else { R::zero(g.descriptor()) })
}

/// Smallest truncation accepted as evidence for an endomorphism.
pub fn min_endo_trunc(p: u64, h: u32) -> usize {
    4 * p.pow(h) as usize
}

/// An endomorphism known to `trunc` terms and `precision` digits; not a
/// proof beyond that window.
#[derive(Clone, Debug, Serialize)]
pub struct EndoCertificate {
    pub series: TruncSeries1<R>,
    pub trunc: usize,
    pub precision: u32,
    /// `g(F(X, Y)) = F(g(X), g(Y))` in the window.
    pub commutes: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndoOutcome {
    Endomorphism(EndoCertificate),
    /// First degree whose coefficient is not integral.
    Obstructed { degree: usize },
}

impl EndoOutcome {
    pub fn is_endomorphism(&self) -> bool {
        matches!(self, EndoOutcome::Endomorphism(c) if c.commutes)
    }
}

/// Digits available after clearing the denominators of the law's logarithm
/// to degree `d`.
pub fn effective_precision(law: &FormalGroupLaw, d: usize) -> u32 {
    let p = law.descriptor().p();
    law.descriptor().precision().saturating_sub(floor_log(p, d.saturating_sub(1).max(1)))
}

/// Solves `lambda(g) = a lambda(X)` with the law's own logarithm, to degree
/// `d`. Needs an effective precision of at least 3.
pub fn try_endomorphism(law: &FormalGroupLaw, a: &R, d: usize) -> Result<EndoOutcome> {
    if d > law.trunc() {
        return Err(Error::InsufficientTruncation(format!("law known to degree {}, need {d}", law.trunc())));
    }
    let desc = law.descriptor();
    let lam = law.logarithm().truncate(d)?;
    let log = IntegralLog::from_scaled(&lam, desc)?;
    let m = log.denominator_exponent();
    let n_eff = log.output_precision();
    if n_eff < 3 || desc.precision() < 2 * m + 1 {
        return Err(Error::PrecisionInsufficient(format!(
            "logarithm denominators p^{m} leave {n_eff} digits at N = {}; need N >= {}",
            desc.precision(),
            (2 * m + 1).max(m + 3)
        )));
    }
    match log_equation_series(&log, a, d)? {
        SolveOutcome::Obstructed(k) => Ok(EndoOutcome::Obstructed { degree: k }),
        SolveOutcome::Solved(g) => {
            let low = desc.with_precision(n_eff)?;
            let g = g.to_precision(&low)?;
            let commutes = law.reduce(&low, d)?.is_endomorphism(&g)?;
            Ok(EndoOutcome::Endomorphism(EndoCertificate { series: g, trunc: d, precision: n_eff, commutes }))
        }
    }
}

/// One tested linear coefficient.
#[derive(Clone, Debug, Serialize)]
pub struct EndoCandidate {
    /// Residue degree of the subfield the candidate generates (0 for `p`).
    pub degree: usize,
    /// Digits of the candidate.
    pub coefficient: Vec<u64>,
    pub endomorphism: bool,
    pub obstruction_degree: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EndoReport {
    pub height: u32,
    pub f: usize,
    pub candidates: Vec<EndoCandidate>,
    /// Residue degree of the field generated by `c(End)`.
    pub f_f: usize,
    pub full_height: bool,
    pub trunc: usize,
    pub precision: u32,
}

fn candidate(law: &FormalGroupLaw, degree: usize, a: &R, d: usize) -> Result<EndoCandidate> {
    let out = try_endomorphism(law, a, d)?;
    let obstruction_degree = match &out {
        EndoOutcome::Obstructed { degree } => Some(*degree),
        _ => None,
    };
    Ok(EndoCandidate { degree, coefficient: a.coeffs().to_vec(), endomorphism: out.is_endomorphism(), obstruction_degree })
}

/// Tests the Teichmuller generator of `F_{p^k}^*` for every `k | gcd(f, h)`,
/// largest first, plus `a = p`. The succeeding degrees must be closed
/// under divisors; `f_F` is the largest.
pub fn compute_endo_subfield(law: &FormalGroupLaw, h: u32, d: usize) -> Result<EndoReport> {
    let desc = law.descriptor();
    let p = desc.p();
    if d < min_endo_trunc(p, h) {
        return Err(Error::InsufficientTruncation(format!("endomorphism test needs D >= {}", min_endo_trunc(p, h))));
    }
    let f = desc.f();
    let g = gcd(f, h as usize);
    let mut candidates = Vec::new();
    for k in (1..=g).rev().filter(|k| g.is_multiple_of(*k)) {
        let w = teichmuller_lift(desc, &ResidueElem::subfield_generator(desc, k)?);
        candidates.push(candidate(law, k, &w, d)?);
    }
    candidates.push(candidate(law, 0, &R::from_int(desc, p as i64), d)?);
    let ok: Vec<usize> = candidates.iter().filter(|c| c.endomorphism && c.degree > 0).map(|c| c.degree).collect();
    let f_f = ok.iter().copied().max().unwrap_or(0);
    if f_f == 0 || ok.iter().any(|&k| (1..=k).any(|j| k % j == 0 && !ok.contains(&j))) {
        return Err(Error::NonConvergence(format!("succeeding subfield degrees {ok:?} are not divisor-closed")));
    }
    Ok(EndoReport {
        height: h,
        f,
        candidates,
        f_f,
        full_height: f_f == h as usize,
        trunc: d,
        precision: effective_precision(law, d),
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The automorphism `zeta X + ...` with `zeta` generating `mu_{q-1}`.
#[derive(Clone, Debug, Serialize)]
pub struct TauCertificate {
    pub zeta: Vec<u64>,
    pub order: u64,
    pub linear: Vec<u64>,
    /// `tau^{q-1} = X` in the window.
    pub iterate_is_identity: bool,
    pub trunc: usize,
    pub precision: u32,
}

/// `tau_infinity` for a group already known to have full height.
pub fn tau_infinity_check(law: &FormalGroupLaw, h: u32, full_height: bool, d: usize) -> Result<TauCertificate> {
    if !full_height {
        return Err(Error::Precondition("tau_infinity needs a full-height endomorphism ring".into()));
    }
    tau_infinity(law, h, d)?.ok_or_else(|| Error::NonConvergence("no endomorphism with linear term zeta".into()))
}

/// Searches for `tau_infinity` without consulting the endomorphism
/// report: `None` when `mu_{q-1}` is not in `O_K` or `zeta X` does not
/// extend to an endomorphism.
pub fn tau_infinity(law: &FormalGroupLaw, h: u32, d: usize) -> Result<Option<TauCertificate>> {
    let desc = law.descriptor();
    if !desc.f().is_multiple_of(h as usize) {
        return Ok(None);
    }
    let q = desc.p().pow(h);
    let zeta = teichmuller_lift(desc, &ResidueElem::subfield_generator(desc, h as usize)?);
    let cert = match try_endomorphism(law, &zeta, d)? {
        EndoOutcome::Endomorphism(c) if c.commutes => c,
        _ => return Ok(None),
    };
    let g = &cert.series;
    let mut it = g.clone();
    for _ in 1..q - 1 {
        it = g.compose(&it)?;
    }
    let low: Arc<RingDescriptor> = g.descriptor().clone();
    let iterate_is_identity = it == TruncSeries1::x(&low, d);
    Ok(Some(TauCertificate {
        zeta: zeta.coeffs().to_vec(),
        order: q - 1,
        linear: c_map(g)?.coeffs().to_vec(),
        iterate_is_identity,
        trunc: d,
        precision: cert.precision,
    }))
}
