use std::sync::Arc;

use super::law::{FormalGroupLaw, ASSOC_CHECK_DEGREE};
use super::solve::floor_log;
use crate::error::{Error, Result};
use crate::padic::{Frobenius, RingDescriptor, ScaledFieldElem, UnramifiedRingElem};
use crate::series::{TruncSeries1, TruncSeries2};

type R = UnramifiedRingElem;

/// Logarithm of functional-equation type:
/// `lambda(X) = X + sum_i u_i (sigma^i lambda)(X^{p^i}) / p`,
/// where `sigma` is the Frobenius acting on coefficients. Only degrees
/// `p^k` are nonzero. Computed over `desc` (which may carry guard digits).
pub fn honda_logarithm(desc: &Arc<RingDescriptor>, u: &[R], d: usize) -> Result<TruncSeries1<ScaledFieldElem>> {
    let p = desc.p();
    let u: Vec<ScaledFieldElem> =
        u.iter().map(|a| a.to_precision(desc).map(|a| ScaledFieldElem::from_ring(&a))).collect::<Result<_>>()?;
    let frob = Frobenius::new(desc)?;
    let sigma = |x: &ScaledFieldElem, k: usize| x.map_unit(|a| frob.apply_pow(a, k));
    let inv_p = ScaledFieldElem::one(desc).mul_p_pow(-1);
    // lam[k] = coefficient of X^{p^k}
    let mut lam = vec![ScaledFieldElem::one(desc)];
    let mut deg = 1usize;
    while deg.saturating_mul(p as usize) < d {
        deg *= p as usize;
        let k = lam.len();
        let mut acc = ScaledFieldElem::zero(desc);
        for i in 1..=k.min(u.len()) {
            if u[i - 1].is_zero() {
                continue;
            }
            let t = u[i - 1].mul_unchecked(&sigma(&lam[k - i], i)).mul_unchecked(&inv_p);
            acc = acc.add_unchecked(&t);
        }
        lam.push(acc);
    }
    let mut c = vec![ScaledFieldElem::zero(desc); d];
    let mut deg = 1usize;
    for a in lam {
        if deg < d {
            c[deg] = a;
        }
        deg = deg.saturating_mul(p as usize);
    }
    Ok(TruncSeries1::from_coeffs(desc, d, c))
}

/// `F = lambda^{-1}(lambda(X) + lambda(Y))` for the functional-equation
/// logarithm with parameters `u`; coefficients are verified integral.
pub fn honda_group(desc: &Arc<RingDescriptor>, u: &[R], d: usize) -> Result<FormalGroupLaw> {
    let p = desc.p();
    let n = desc.precision();
    let m = floor_log(p, d.max(1));
    let mut w = n + 2 * m + 2;
    for _ in 0..4 {
        let wd = desc.with_precision(w)?;
        match try_build(desc, &wd, u, d) {
            Err(Error::PrecisionInsufficient(_)) => w += m + 2,
            other => return other,
        }
    }
    Err(Error::PrecisionInsufficient(format!("functional-equation law at N = {n}, D = {d}")))
}

fn try_build(desc: &Arc<RingDescriptor>, wd: &Arc<RingDescriptor>, u: &[R], d: usize) -> Result<FormalGroupLaw> {
    let lam = honda_logarithm(wd, u, d)?;
    let mu = lam.reversion()?;
    let s = TruncSeries2::from_x(&lam).checked_add(&TruncSeries2::from_y(&lam))?;
    let big = s.compose_outer(&mu)?;
    let n = desc.precision();
    let mut err = None;
    let f = TruncSeries2::from_fn(desc, d, |i, j| {
        let c = big.coeff(i, j);
        let r = c.to_integral(n).and_then(|x| x.to_precision(desc));
        r.unwrap_or_else(|e| {
            if err.is_none() {
                err = Some(match e {
                    Error::Integrality(_) => Error::Integrality(i + j),
                    e => e,
                });
            }
            R::zero(desc)
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    let law = FormalGroupLaw::new_unchecked(f);
    law.check_axioms(ASSOC_CHECK_DEGREE)?;
    Ok(law)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logarithm_coefficients() {
        let d = RingDescriptor::new(3, 1, 4).unwrap();
        let lam = honda_logarithm(&d, &[R::one(&d)], 12).unwrap();
        assert!(lam.coeff(3).eq_mod(&ScaledFieldElem::from_ratio(&d, 1, 3).unwrap(), 3));
        assert!(lam.coeff(9).eq_mod(&ScaledFieldElem::from_ratio(&d, 1, 9).unwrap(), 2));
        assert!(lam.coeff(2).is_zero());
    }

    #[test]
    fn functional_equation_laws_are_integral() {
        let d = RingDescriptor::new(3, 1, 3).unwrap();
        for u in [vec![1], vec![0, 1], vec![1, 1]] {
            let u: Vec<R> = u.into_iter().map(|k| R::from_int(&d, k)).collect();
            let law = honda_group(&d, &u, 12).unwrap();
            assert_eq!(law.trunc(), 12);
        }
        let add = honda_group(&d, &[], 8).unwrap();
        assert_eq!(add.series(), FormalGroupLaw::additive(&d, 8).series());
    }
}
