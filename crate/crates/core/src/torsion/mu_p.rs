use serde::Serialize;

use super::model::{LElem, TorsionFieldModel};
use crate::error::{Error, Result};
use crate::formal_group::unramified_embedding;
use crate::padic::{residue_power_test, teichmuller_lift, ResidueElem, UnramifiedRingElem, Valuation};

type R = UnramifiedRingElem;

/// Whether `zeta_p` lies in the level-one torsion field after an unramified
/// enlargement of degree `d`; equivalently whether `-p` has a `(p-1)`-th
/// root there.
#[derive(Clone, Debug, Serialize)]
pub struct MuPReport {
    pub member: bool,
    /// Smallest enlargement degree that worked.
    pub degree: Option<usize>,
    /// Residue degree over which the witness lives.
    pub residue_degree: Option<usize>,
    /// Coefficients of `y` in the basis `z^j`, digits per coefficient.
    pub witness: Option<Vec<Vec<u64>>>,
    /// `v_L(y^{p-1} + p)`.
    pub witness_valuation: Option<Valuation>,
    pub obstruction: Option<String>,
}

/// Writes `z^e = -p s` with `s` a unit, so `-p = z^e w` for `w = s^{-1}`.
/// A root `y = z^{e/(p-1)} t` of `y^{p-1} = -p` exists iff `t^{p-1} = w` is
/// solvable, which by Hensel depends only on the residue of `w`.
pub fn mu_p_membership(model: &TorsionFieldModel, d_max: usize) -> Result<MuPReport> {
    if model.level() != 1 {
        return Err(Error::Precondition("mu_p test runs on the level-one model".into()));
    }
    let desc = model.descriptor();
    let p = desc.p();
    let e = model.e();
    if !(e as u64).is_multiple_of(p - 1) {
        return Err(Error::Precondition(format!("p - 1 does not divide e = {e}")));
    }
    if desc.precision() < 3 {
        return Err(Error::PrecisionInsufficient("mu_p test needs N >= 3".into()));
    }
    for d in 1..=d_max.max(1) {
        let m = if d == 1 {
            model.clone()
        } else {
            let emb = unramified_embedding(desc, desc.f() * d)?;
            let pe = model.polynomial().map_to(emb.target(), |c| emb.apply(c));
            TorsionFieldModel::from_polynomial(pe, 1, model.q())?
        };
        if let Some(y) = try_root(&m)? {
            let y_pm1 = m.pow(&y, p - 1);
            let v = m.valuation(&m.add(&y_pm1, &m.constant(&R::from_int(m.descriptor(), p as i64))));
            return Ok(MuPReport {
                member: true,
                degree: Some(d),
                residue_degree: Some(m.descriptor().f()),
                witness: Some(m.coeffs(&y).iter().map(|c| c.coeffs().to_vec()).collect()),
                witness_valuation: Some(v),
                obstruction: None,
            });
        }
    }
    Ok(MuPReport {
        member: false,
        degree: None,
        residue_degree: None,
        witness: None,
        witness_valuation: None,
        obstruction: Some(format!("residue of -p / z^e is not a (p-1)-th power for enlargements up to degree {d_max}")),
    })
}

fn try_root(m: &TorsionFieldModel) -> Result<Option<LElem>> {
    let desc = m.descriptor();
    let p = desc.p();
    let e = m.e();
    let poly = m.polynomial();
    let s_coeffs: Vec<R> = (0..e).map(|j| poly.coeff(j).div_p_pow(1)).collect::<Result<_>>()?;
    let s = m.from_coeffs(&s_coeffs)?;
    let w = m.inverse(&s)?;
    let wr = m.residue(&w);
    if !residue_power_test(&wr, p - 1)? {
        return Ok(None);
    }
    let r0 = ResidueElem::all(desc)
        .find(|r| r.pow(p as u128 - 1) == wr)
        .ok_or_else(|| Error::NonConvergence("residue root not found".into()))?;
    // Newton for t^{p-1} = w; the derivative (p-1) t^{p-2} is a unit
    let mut t = m.constant(&teichmuller_lift(desc, &r0));
    let pm1 = m.constant(&R::from_int(desc, p as i64 - 1));
    let mut known = 1i64;
    while known <= 2 * m.valuation_cap() {
        let f = m.sub(&m.pow(&t, p - 1), &w);
        if f.is_zero() {
            break;
        }
        let df = m.mul(&pm1, &m.pow(&t, p - 2));
        t = m.sub(&t, &m.mul(&f, &m.inverse(&df)?));
        known *= 2;
    }
    if !m.sub(&m.pow(&t, p - 1), &w).is_zero() {
        return Err(Error::NonConvergence("Hensel lift of the (p-1)-th root".into()));
    }
    Ok(Some(m.mul(&m.monomial(e / (p as usize - 1)), &t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_group::{ActionSource, FrobeniusSeries, ModuleStructure};
    use crate::padic::RingDescriptor;
    use crate::series::Poly;
    use crate::weierstrass::DEFAULT_DCAP;

    fn check(r: &MuPReport, prec: u32, e: usize) {
        assert!(r.member);
        // exact up to the one digit lost dividing by p
        assert!(r.witness_valuation.unwrap() >= Valuation::Finite((prec as i64 - 1) * e as i64));
    }

    #[test]
    fn multiplicative() {
        let d = RingDescriptor::new(3, 1, 4).unwrap();
        let fs = FrobeniusSeries::multiplicative(&d).unwrap();
        let ms = ModuleStructure::new(&d, 1, ActionSource::Polynomial(fs.poly().clone())).unwrap();
        let m = TorsionFieldModel::new(&ms, 1, DEFAULT_DCAP).unwrap();
        let r = mu_p_membership(&m, 1).unwrap();
        check(&r, 4, 2);
        assert_eq!(r.degree, Some(1));
    }

    #[test]
    fn height_two() {
        let d = RingDescriptor::new(3, 1, 3).unwrap();
        let mut c = vec![0; 10];
        c[1] = 3;
        c[9] = 1;
        let ms = ModuleStructure::new(&d, 1, ActionSource::Polynomial(Poly::from_ints(&d, &c))).unwrap();
        let m = TorsionFieldModel::new(&ms, 1, DEFAULT_DCAP).unwrap();
        let r = mu_p_membership(&m, 2).unwrap();
        check(&r, 3, 8);
        // z^8 = -3 makes y = z^4 a witness already
        assert_eq!(r.degree, Some(1));
    }

    #[test]
    fn needs_enlargement() {
        // X^4 + 5 * 2: -5 / z^4 has residue 1/2 = 3, a fourth power only in F_{5^4}
        let d = RingDescriptor::new(5, 1, 3).unwrap();
        let p = Poly::from_ints(&d, &[10, 0, 0, 0, 1]);
        let m = TorsionFieldModel::from_polynomial(p, 1, 5).unwrap();
        let r = mu_p_membership(&m, 3).unwrap();
        assert!(!r.member);
        assert!(r.obstruction.is_some());
        let r = mu_p_membership(&m, 4).unwrap();
        assert_eq!((r.degree, r.residue_degree), (Some(4), Some(4)));
        check(&r, 3, 4);
    }
}
