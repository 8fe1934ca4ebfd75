use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::honda::honda_logarithm;
use super::law::FormalGroupLaw;
use super::solve::{commuting_series, floor_log, guard_digits, log_equation_series, IntegralLog, SolveOutcome};
use crate::error::{Error, Result};
use crate::padic::{teichmuller_lift, RingDescriptor, RingEmbedding, ResidueElem, UnramifiedRingElem};
use crate::series::{Poly, TruncSeries1};

type R = UnramifiedRingElem;

/// Where the `[a]`-series of a module come from.
#[derive(Clone, Debug)]
pub enum ActionSource {
    /// `[p]` is this polynomial; `[a]` commutes with it.
    Polynomial(Poly),
    /// Functional-equation logarithm with these parameters.
    Honda(Vec<R>),
    /// Any law: `[a]` solves `lambda([a]) = a lambda` with the law's own logarithm.
    Law(FormalGroupLaw),
}

/// A scalar of `O_F`. Integers and Teichmuller lifts (and sums and
/// products of them) are known exactly and are recomputed at whatever
/// precision a solver needs; a general element is only known to the
/// precision it carries, which costs output digits.
#[derive(Clone, Debug)]
pub enum Scalar {
    Int(i64),
    Teichmuller(ResidueElem),
    Sum(Box<Scalar>, Box<Scalar>),
    Product(Box<Scalar>, Box<Scalar>),
    Elem(R),
}

impl Scalar {
    pub fn value(&self, desc: &Arc<RingDescriptor>) -> R {
        match self {
            Scalar::Int(k) => R::from_int(desc, *k),
            Scalar::Teichmuller(r) => teichmuller_lift(desc, &r.with_descriptor(desc)),
            Scalar::Sum(a, b) => a.value(desc).add_unchecked(&b.value(desc)),
            Scalar::Product(a, b) => a.value(desc).mul_unchecked(&b.value(desc)),
            Scalar::Elem(a) => a.to_precision(desc).expect("same ring"),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Scalar::Int(_) | Scalar::Teichmuller(_) => true,
            Scalar::Sum(a, b) | Scalar::Product(a, b) => a.is_exact() && b.is_exact(),
            Scalar::Elem(_) => false,
        }
    }

    pub fn mul(&self, o: &Scalar, desc: &Arc<RingDescriptor>) -> Scalar {
        match (self, o) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a * b),
            (Scalar::Teichmuller(a), Scalar::Teichmuller(b)) => Scalar::Teichmuller(a.checked_mul(b).expect("same ring")),
            _ if self.is_exact() && o.is_exact() => Scalar::Product(Box::new(self.clone()), Box::new(o.clone())),
            _ => Scalar::Elem(self.value(desc).mul_unchecked(&o.value(desc))),
        }
    }

    pub fn add(&self, o: &Scalar, desc: &Arc<RingDescriptor>) -> Scalar {
        match (self, o) {
            (Scalar::Int(a), Scalar::Int(b)) => Scalar::Int(a + b),
            _ if self.is_exact() && o.is_exact() => Scalar::Sum(Box::new(self.clone()), Box::new(o.clone())),
            _ => Scalar::Elem(self.value(desc).add_unchecked(&o.value(desc))),
        }
    }
}

/// Height over `Z_p`, from the first unit coefficient of `[p]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Height {
    Finite(u32),
    /// No unit coefficient below the probed truncation.
    Infinite { truncation: usize },
}

impl Height {
    pub fn finite(self) -> Option<u32> {
        match self {
            Height::Finite(h) => Some(h),
            Height::Infinite { .. } => None,
        }
    }
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(h) => write!(f, "{h}"),
            Height::Infinite { truncation } => write!(f, "infinite (no unit coefficient below degree {truncation})"),
        }
    }
}

/// An `O_F`-module structure on a formal group, `O_F` the unramified
/// subring with residue field `F_{p^d}`, `d | f`. Generated by `[p]` and
/// `[omega]` for a Teichmuller generator `omega` of `mu_{p^d - 1}`.
#[derive(Clone, Debug)]
pub struct ModuleStructure {
    desc: Arc<RingDescriptor>,
    d: usize,
    source: ActionSource,
}

impl ModuleStructure {
    pub fn new(desc: &Arc<RingDescriptor>, d: usize, source: ActionSource) -> Result<Self> {
        if d == 0 || !desc.f().is_multiple_of(d) {
            return Err(Error::NotDivisor(d as u64, desc.f() as u64));
        }
        let ok = match &source {
            ActionSource::Polynomial(f) => crate::padic::same_ring(f.descriptor(), desc),
            ActionSource::Honda(u) => u.iter().all(|a| crate::padic::same_ring(a.descriptor(), desc)),
            ActionSource::Law(l) => crate::padic::same_ring(l.descriptor(), desc),
        };
        if !ok {
            return Err(Error::DescriptorMismatch);
        }
        Ok(ModuleStructure { desc: desc.clone(), d, source })
    }

    pub fn descriptor(&self) -> &Arc<RingDescriptor> {
        &self.desc
    }

    /// Residue degree of the scalar ring `O_F`.
    pub fn base_degree(&self) -> usize {
        self.d
    }

    pub fn source(&self) -> &ActionSource {
        &self.source
    }

    /// `[p]` as an exact polynomial, when it is one.
    pub fn p_polynomial(&self) -> Option<&Poly> {
        match &self.source {
            ActionSource::Polynomial(f) => Some(f),
            _ => None,
        }
    }

    /// Teichmuller generator of `mu_{p^d - 1}`.
    pub fn teichmuller_generator(&self) -> R {
        self.generator().value(&self.desc)
    }

    /// The same generator as an exact scalar.
    pub fn generator(&self) -> Scalar {
        Scalar::Teichmuller(ResidueElem::subfield_generator(&self.desc, self.d).expect("d divides f"))
    }

    /// `[p](X)` to `d` terms at full precision.
    pub fn p_series(&self, d: usize) -> Result<TruncSeries1<R>> {
        match &self.source {
            ActionSource::Polynomial(f) => Ok(f.to_series(d)),
            ActionSource::Law(l) if d <= l.trunc() => l.multiplication_series(self.desc.p()).truncate(d),
            _ => {
                self.action_series(&Scalar::Int(self.desc.p() as i64), d)?.into_result()
            }
        }
    }

    /// `[p^n](X)` to `d` terms.
    pub fn p_power_series(&self, n: u32, d: usize) -> Result<TruncSeries1<R>> {
        if let Some(f) = self.p_polynomial() {
            let mut acc = Poly::x(&self.desc);
            for _ in 0..n {
                acc = f.compose(&acc)?;
            }
            return Ok(acc.to_series(d));
        }
        let p = self.p_series(d)?;
        let mut acc = TruncSeries1::x(&self.desc, d);
        for _ in 0..n {
            acc = p.compose(&acc)?;
        }
        Ok(acc)
    }

    /// `[a](X)` to `d` terms, or the degree where no integral solution
    /// exists (`a` outside the scalar ring). The result may carry fewer
    /// digits than the module for [`ActionSource::Law`]; its descriptor
    /// records the precision actually known.
    pub fn action_series(&self, a: &Scalar, d: usize) -> Result<SolveOutcome> {
        let p = self.desc.p();
        if !a.is_exact() {
            let loss = floor_log(p, d.max(1)) + 1;
            let n = self.desc.precision();
            if n <= loss {
                return Err(Error::PrecisionInsufficient(format!("scalar known to {n} digits")));
            }
            let out = self.action_series_exact(a, d)?;
            let known = match &out {
                SolveOutcome::Solved(s) => s.descriptor().precision().min(n - loss),
                _ => n - loss,
            };
            return reduce_outcome(out, &self.desc.with_precision(known)?);
        }
        self.action_series_exact(a, d)
    }

    fn action_series_exact(&self, a: &Scalar, d: usize) -> Result<SolveOutcome> {
        let p = self.desc.p();
        let n = self.desc.precision();
        match &self.source {
            ActionSource::Polynomial(f) => {
                let w = self.desc.with_precision(n + guard_digits(p, d))?;
                let fw: Vec<(usize, R)> =
                    f.terms().into_iter().map(|(i, c)| Ok((i, c.to_precision(&w)?))).collect::<Result<_>>()?;
                let out = commuting_series(&fw, &a.value(&w), d);
                reduce_outcome(out, &self.desc)
            }
            ActionSource::Honda(u) => {
                let m = floor_log(p, d.saturating_sub(1).max(1));
                let mut w = (n + m).max(2 * m + 1) + 1;
                loop {
                    let wd = self.desc.with_precision(w)?;
                    let lam = honda_logarithm(&wd, u, d)?;
                    let log = IntegralLog::from_scaled(&lam, &wd)?;
                    if log.output_precision() >= n && w > 2 * log.denominator_exponent() {
                        let out = log_equation_series(&log, &a.value(&wd), d)?;
                        return reduce_outcome(out, &self.desc);
                    }
                    if w > n + 4 * m + 8 {
                        return Err(Error::PrecisionInsufficient("functional-equation logarithm".into()));
                    }
                    w += m + 1;
                }
            }
            ActionSource::Law(l) => {
                if d > l.trunc() {
                    return Err(Error::InsufficientTruncation(format!("law known to degree {}, need {d}", l.trunc())));
                }
                let lam = l.logarithm().truncate(d)?;
                let log = IntegralLog::from_scaled(&lam, &self.desc)?;
                let m = log.denominator_exponent();
                let out_n = log.output_precision();
                if out_n == 0 || n < 2 * m + 1 {
                    return Err(Error::PrecisionInsufficient(format!(
                        "logarithm denominators p^{m} leave no digits at N = {n}"
                    )));
                }
                let out = log_equation_series(&log, &a.value(&self.desc), d)?;
                reduce_outcome(out, &self.desc.with_precision(out_n)?)
            }
        }
    }

    /// Height over `Z_p`, probing `[p]` to degree `p^{h_max} + 1`.
    pub fn height(&self, h_max: u32) -> Result<Height> {
        let p = self.desc.p();
        let series = match &self.source {
            ActionSource::Polynomial(f) => {
                let d = f.degree().unwrap_or(0) + 1;
                f.to_series(d)
            }
            _ => {
                let bound = crate::padic::checked_pow(p, h_max)
                    .ok_or_else(|| Error::Precondition("probe bound overflows".into()))? as usize
                    + 1;
                self.p_series(bound)?
            }
        };
        match series.first_unit() {
            None => Ok(Height::Infinite { truncation: series.trunc() }),
            Some(k) => {
                let mut h = 0;
                let mut t = 1usize;
                while t < k {
                    t *= p as usize;
                    h += 1;
                }
                if t == k {
                    Ok(Height::Finite(h))
                } else {
                    Err(Error::HeightIndex(k))
                }
            }
        }
    }

    /// Height relative to the scalar ring (`h / d`).
    pub fn relative_height(&self, h_max: u32) -> Result<Option<u32>> {
        Ok(self.height(h_max)?.finite().map(|h| h / self.d as u32))
    }

    /// The same group with scalars extended to the residue degree `d2`, if
    /// `[omega]` exists for a generator of `mu_{p^{d2} - 1}`.
    pub fn with_base_degree(&self, d2: usize) -> Result<Option<Self>> {
        if d2 == 0 || !self.desc.f().is_multiple_of(d2) || !d2.is_multiple_of(self.d) {
            return Err(Error::NotDivisor(d2 as u64, self.desc.f() as u64));
        }
        let cand = ModuleStructure { desc: self.desc.clone(), d: d2, source: self.source.clone() };
        let w = cand.generator();
        let probe = self.desc.p().pow(d2 as u32) as usize + 2;
        let probe = match &self.source {
            ActionSource::Law(l) => probe.min(l.trunc()),
            _ => probe,
        };
        Ok(if cand.action_series(&w, probe)?.is_solved() { Some(cand) } else { None })
    }

    /// The structure over the scalar ring of residue degree `h` (height),
    /// when it exists inside `O_K`: the group then has relative height 1.
    pub fn full_height_structure(&self, h_max: u32) -> Result<Option<Self>> {
        let Some(h) = self.height(h_max)?.finite() else { return Ok(None) };
        let h = h as usize;
        if h == self.d {
            return Ok(Some(self.clone()));
        }
        if !h.is_multiple_of(self.d) || !self.desc.f().is_multiple_of(h) {
            return Ok(None);
        }
        self.with_base_degree(h)
    }

    /// Coefficient-wise image under an unramified embedding.
    pub fn base_change(&self, emb: &RingEmbedding) -> Result<Self> {
        let t = emb.target();
        let source = match &self.source {
            ActionSource::Polynomial(f) => ActionSource::Polynomial(f.map_to(t, |c| emb.apply(c))),
            ActionSource::Honda(u) => ActionSource::Honda(u.iter().map(|c| emb.apply(c)).collect()),
            ActionSource::Law(l) => ActionSource::Law(l.base_change(emb)),
        };
        ModuleStructure::new(t, self.d, source)
    }

    /// Check `[a]` is an endomorphism of `law`, `[a][b] = [ab]` and
    /// `F([a]X, [b]X) = [a+b]X` to the law's truncation.
    pub fn check_axioms(&self, law: &FormalGroupLaw, a: &Scalar, b: &Scalar) -> Result<()> {
        let d = law.trunc();
        let get = |x: &Scalar| -> Result<TruncSeries1<R>> {
            let s = self.action_series(x, d)?.into_result()?;
            let low = s.descriptor().clone();
            s.to_precision(&low)
        };
        let sa = get(a)?;
        let sb = get(b)?;
        let sab = get(&a.mul(b, &self.desc))?;
        let s_sum = get(&a.add(b, &self.desc))?;
        let low = [&sa, &sb, &sab, &s_sum].iter().map(|s| s.descriptor().precision()).min().unwrap();
        let low = low.min(law.descriptor().precision());
        let low = self.desc.with_precision(low)?;
        let cut = |s: &TruncSeries1<R>| s.to_precision(&low);
        let law_low = law.reduce(&low, d)?;
        let (sa, sb, sab, s_sum) = (cut(&sa)?, cut(&sb)?, cut(&sab)?, cut(&s_sum)?);
        if !law_low.is_endomorphism(&sa)? {
            return Err(Error::Axiom("[a] is not an endomorphism".into()));
        }
        if sa.compose(&sb)? != sab {
            return Err(Error::Axiom("[a][b] != [ab]".into()));
        }
        if law_low.add_series(&sa, &sb)? != s_sum {
            return Err(Error::Axiom("F([a]X, [b]X) != [a+b]X".into()));
        }
        Ok(())
    }
}

fn reduce_outcome(out: SolveOutcome, desc: &Arc<RingDescriptor>) -> Result<SolveOutcome> {
    Ok(match out {
        SolveOutcome::Solved(s) => SolveOutcome::Solved(s.to_precision(desc)?),
        o => o,
    })
}

/// Embedding of `O_K` into the unramified ring of residue degree `f_target`.
pub fn unramified_embedding(desc: &Arc<RingDescriptor>, f_target: usize) -> Result<RingEmbedding> {
    if f_target == 0 || !f_target.is_multiple_of(desc.f()) {
        return Err(Error::NotDivisor(desc.f() as u64, f_target as u64));
    }
    let dst = RingDescriptor::new(desc.p(), f_target, desc.precision())?;
    RingEmbedding::new(desc, &dst)
}

/// Base change of a law and its module structure to residue degree `f_target`.
pub fn base_change_unramified(
    law: &FormalGroupLaw,
    ms: &ModuleStructure,
    f_target: usize,
) -> Result<(FormalGroupLaw, ModuleStructure)> {
    let emb = unramified_embedding(law.descriptor(), f_target)?;
    Ok((law.base_change(&emb), ms.base_change(&emb)?))
}
