use std::sync::Arc;

use super::law::FormalGroupLaw;
use super::module::{ActionSource, ModuleStructure};
use super::solve::guard_digits;
use crate::error::{Error, Result};
use crate::padic::{Frobenius, RingDescriptor, UnramifiedRingElem, Valuation};
use crate::series::{Poly, TruncSeries2};

type R = UnramifiedRingElem;

/// A Lubin-Tate series over `O_F`, the subring of `O_K` with residue field
/// `F_{p^d}`: `f = pX + ...` with `f = X^{p^d} mod p`.
#[derive(Clone, Debug)]
pub struct FrobeniusSeries {
    poly: Poly,
    d: usize,
}

impl FrobeniusSeries {
    pub fn new(poly: Poly, d: usize) -> Result<Self> {
        let desc = poly.descriptor().clone();
        let p = desc.p();
        if d == 0 || !desc.f().is_multiple_of(d) {
            return Err(Error::NotDivisor(d as u64, desc.f() as u64));
        }
        let q = p.checked_pow(d as u32).ok_or_else(|| Error::Precondition("p^d overflows".into()))? as usize;
        if !poly.coeff(0).is_zero() {
            return Err(Error::Precondition("Frobenius series has a constant term".into()));
        }
        if poly.coeff(1) != R::from_int(&desc, p as i64) {
            return Err(Error::Precondition("linear coefficient of a Frobenius series must be p".into()));
        }
        for (k, c) in poly.terms() {
            let want_unit = k == q;
            let residue = c.residue();
            if want_unit && !residue.is_one() {
                return Err(Error::Precondition(format!("coefficient of X^{q} must be 1 mod p")));
            }
            if !want_unit && !residue.is_zero() {
                return Err(Error::Precondition(format!("coefficient of X^{k} must vanish mod p")));
            }
        }
        if poly.degree().unwrap_or(0) < q {
            return Err(Error::Precondition(format!("Frobenius series needs the term X^{q}")));
        }
        if d < desc.f() {
            let fr = Frobenius::new(&desc)?;
            for (k, c) in poly.terms() {
                if fr.apply_pow(&c, d) != c {
                    return Err(Error::Precondition(format!("coefficient of X^{k} does not lie in O_F")));
                }
            }
        }
        Ok(FrobeniusSeries { poly, d })
    }

    /// `pX + X^{p^d}`.
    pub fn standard(desc: &Arc<RingDescriptor>, d: usize) -> Result<Self> {
        let q = desc.p().pow(d as u32) as usize;
        let mut c = vec![R::zero(desc); q + 1];
        c[1] = R::from_int(desc, desc.p() as i64);
        c[q] = R::one(desc);
        Self::new(Poly::new(desc, c), d)
    }

    /// `(1 + X)^p - 1`, whose group is the multiplicative group.
    pub fn multiplicative(desc: &Arc<RingDescriptor>) -> Result<Self> {
        let one_plus_x = Poly::from_ints(desc, &[1, 1]);
        let f = one_plus_x.pow(desc.p()).checked_sub(&Poly::one(desc))?;
        Self::new(f, 1)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Residue degree `d` of `O_F`.
    pub fn base_degree(&self) -> usize {
        self.d
    }
}

/// The Lubin-Tate group of `f`: the unique `F = X + Y + ...` with
/// `f(F(X, Y)) = F(f(X), f(Y))`, built degree by degree, together with its
/// `O_F`-module structure (`[p] = f`).
pub fn lubin_tate_group(fs: &FrobeniusSeries, d: usize) -> Result<(FormalGroupLaw, ModuleStructure)> {
    let desc = fs.poly.descriptor().clone();
    let p = desc.p();
    let w = desc.with_precision(desc.precision() + guard_digits(p, d))?;
    let fw = fs.poly.map_to(&w, |c| c.to_precision(&w).unwrap());
    let mut big = TruncSeries2::<R>::x(&w, d).checked_add(&TruncSeries2::y(&w, d))?;
    for r in 2..d {
        let t = r + 1;
        let f_small = fw.to_series(t);
        let fr = TruncSeries2::from_fn(&w, t, |i, j| big.coeff(i, j).clone());
        let lhs = fr.compose_outer(&f_small)?;
        let rhs = fr.substitute(&TruncSeries2::from_x(&f_small), &TruncSeries2::from_y(&f_small))?;
        let denom = R::from_int(&w, 1).mul_p_pow(r as u32 - 1).sub_unchecked(&R::one(&w));
        let denom_inv = denom.invert()?;
        for i in 0..=r {
            let e = lhs.coeff(i, r - i).sub_unchecked(rhs.coeff(i, r - i));
            // E + p*Delta - p^r*Delta = 0 in degree r.
            let q = match e.valuation() {
                Valuation::Infinite => continue,
                Valuation::Finite(v) if v >= 1 => e.div_p_pow(1)?,
                _ => {
                    return Err(Error::NonConvergence(format!(
                        "degree-{r} error term is not divisible by p; not a Frobenius series"
                    )))
                }
            };
            let delta = q.mul_unchecked(&denom_inv);
            let cur = big.coeff(i, r - i).clone();
            big.set(i, r - i, cur.add_unchecked(&delta));
        }
    }
    let law = FormalGroupLaw::new_unchecked(big).reduce(&desc, d)?;
    // Post-hoc certificate at the target precision.
    let f_ser = fs.poly.to_series(d);
    let lhs = law.series().compose_outer(&f_ser)?;
    let rhs = law
        .series()
        .substitute(&TruncSeries2::from_x(&f_ser), &TruncSeries2::from_y(&f_ser))?;
    if lhs != rhs {
        return Err(Error::NonConvergence("f(F) != F(f, f) after the solve".into()));
    }
    law.check_axioms(super::law::ASSOC_CHECK_DEGREE)?;
    let ms = ModuleStructure::new(&desc, fs.d, ActionSource::Polynomial(fs.poly.clone()))?;
    Ok((law, ms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_series_examples() {
        let d = RingDescriptor::new(3, 1, 2).unwrap();
        let fs = FrobeniusSeries::standard(&d, 1).unwrap();
        let (law, _) = lubin_tate_group(&fs, 4).unwrap();
        let f = law.series();
        for (i, j) in [(2, 0), (1, 1), (0, 2)] {
            assert!(f.coeff(i, j).is_zero());
        }
        assert_eq!(*f.coeff(2, 1), R::from_int(&d, 8));
        assert_eq!(*f.coeff(1, 2), R::from_int(&d, 8));
        assert!(f.coeff(3, 0).is_zero());
    }

    #[test]
    fn multiplicative_series_gives_multiplicative_law() {
        for p in [3u64, 5] {
            let d = RingDescriptor::new(p, 1, 4).unwrap();
            let fs = FrobeniusSeries::multiplicative(&d).unwrap();
            let (law, ms) = lubin_tate_group(&fs, 10).unwrap();
            assert_eq!(law.series(), FormalGroupLaw::multiplicative(&d, 10).series());
            assert_eq!(ms.base_degree(), 1);
        }
    }

    #[test]
    fn invalid_series_are_rejected() {
        let d = RingDescriptor::new(3, 1, 3).unwrap();
        assert!(FrobeniusSeries::new(Poly::from_ints(&d, &[0, 3, 1]), 1).is_err());
        assert!(FrobeniusSeries::new(Poly::from_ints(&d, &[0, 1, 0, 1]), 1).is_err());
        assert!(FrobeniusSeries::new(Poly::from_ints(&d, &[0, 3, 0, 1]), 2).is_err());
        assert!(FrobeniusSeries::new(Poly::from_ints(&d, &[0, 3, 1, 1]), 1).is_err());
    }
}
