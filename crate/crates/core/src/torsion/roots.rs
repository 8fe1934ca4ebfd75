use std::collections::HashSet;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::model::{LElem, TorsionFieldModel};
use super::newton::{newton_polygon, ser_ratio};
use crate::error::{Error, Result};
use crate::formal_group::{ActionSource, ModuleStructure, Scalar};
use crate::padic::{teichmuller_lift, ResidueElem, Valuation};

/// `v_L(beta - alpha)` over the other roots `beta` of the model polynomial,
/// for `alpha = z`; the same multiset for every root since the polynomial
/// is irreducible.
#[derive(Clone, Debug, Serialize)]
pub struct DistanceProfile {
    /// `(distance, multiplicity)`, smallest first.
    pub distances: Vec<(Distance, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Distance(#[serde(serialize_with = "ser_ratio")] pub Ratio<i64>);

impl DistanceProfile {
    pub fn max(&self) -> Ratio<i64> {
        self.distances.last().map_or(Ratio::from_integer(0), |d| d.0 .0)
    }

    /// Lower bound for `v_L(P(y))` when `y` agrees with a root to `v_L >= k`.
    pub fn bound(&self, k: i64) -> Ratio<i64> {
        let k = Ratio::from_integer(k);
        self.distances.iter().fold(k, |acc, (s, m)| acc + k.min(s.0) * Ratio::from_integer(*m as i64))
    }
}

/// Distances from `z` to the other roots, from the polygon of `P(X + z) / X`.
pub fn distance_profile(model: &TorsionFieldModel) -> Result<DistanceProfile> {
    let e = model.e();
    let c: Vec<LElem> = model.polynomial().coeffs().iter().map(|a| model.constant(a)).collect();
    // Horner in L[X]: acc <- acc (X + z) + c_k
    let mut acc = vec![c[e].clone()];
    for k in (0..e).rev() {
        let mut next = Vec::with_capacity(acc.len() + 1);
        next.push(model.add(&model.mul_z(&acc[0]), &c[k]));
        for i in 1..acc.len() {
            next.push(model.add(&acc[i - 1], &model.mul_z(&acc[i])));
        }
        next.push(acc[acc.len() - 1].clone());
        acc = next;
    }
    if !acc[0].is_zero() {
        return Err(Error::Precondition("z is not a root of the model polynomial".into()));
    }
    let pts: Vec<(usize, Valuation)> = (1..=e).map(|i| (i - 1, model.valuation(&acc[i]))).collect();
    let np = newton_polygon(&pts, model.valuation_cap())?;
    let distances = np.root_valuations().into_iter().map(|(v, m)| (Distance(v), m)).collect();
    Ok(DistanceProfile { distances })
}

/// Number of roots of the model polynomial lying in `L` itself.
#[derive(Clone, Debug, Serialize)]
pub struct RootCount {
    pub e: usize,
    pub profile: DistanceProfile,
    /// Digits `t_1 .. t_m` that separate distinct roots.
    pub depth: usize,
    /// `ceil(bound(m + 1))`, the valuation that certifies a root class.
    pub required_valuation: i64,
    pub evaluations: usize,
    pub roots: usize,
}

/// Counts roots in `L` by walking Teichmuller digit expansions
/// `y = sum_{i=1}^m t_i z^i`. A prefix survives when `v_L(P(y))` reaches
/// the bound forced by a root agreeing with it; at depth `m = floor(max
/// distance)` a survivor is within `m + 1` of a root, and Krasner's lemma
/// puts that root in `L`.
pub fn count_roots(model: &TorsionFieldModel) -> Result<RootCount> {
    let profile = distance_profile(model)?;
    let depth = profile.max().floor().to_integer().max(1) as usize;
    let cap = model.valuation_cap();
    let required = profile.bound(depth as i64 + 1).ceil().to_integer();
    if required > cap {
        let e = model.e() as i64;
        return Err(Error::PrecisionInsufficient(format!(
            "root certification needs v_L >= {required}, model sees {cap}; use N >= {}",
            (required + e - 1) / e
        )));
    }
    let desc = model.descriptor();
    let digits: Vec<LElem> = ResidueElem::all(desc).map(|r| model.constant(&teichmuller_lift(desc, &r))).collect();
    let poly = model.polynomial();
    let mut frontier = vec![model.zero()];
    let mut evaluations = 0;
    for i in 1..=depth {
        let zi = model.monomial(i);
        let need = profile.bound(i as i64 + 1).ceil().to_integer();
        let cands: Vec<LElem> = frontier
            .iter()
            .flat_map(|y| digits.iter().map(|t| model.add(y, &model.mul(t, &zi))).collect::<Vec<_>>())
            .collect();
        evaluations += cands.len();
        frontier = cands
            .into_par_iter()
            .filter_map(|y| {
                let v = model.eval_poly(poly, &y).map(|r| model.valuation(&r));
                match v {
                    Ok(Valuation::Finite(v)) if v < need => None,
                    Ok(_) => Some(Ok(y)),
                    Err(e) => Some(Err(e)),
                }
            })
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(RootCount { e: model.e(), profile, depth, required_valuation: required, evaluations, roots: frontier.len() })
}

/// Enumeration of `{[a](z) : a = sum_{i<n} w_i p^i}` in the level-`n` model.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionEnumeration {
    pub size: usize,
    pub annihilated: bool,
    pub distinct: usize,
}

impl TorsionEnumeration {
    pub fn holds(&self) -> bool {
        self.annihilated && self.distinct == self.size
    }
}

/// Digit representatives of `O_F / p^n` for the scalar ring of `ms`.
pub fn digit_scalars(ms: &ModuleStructure, n: u32) -> Vec<Scalar> {
    let desc = ms.descriptor();
    let sub = ms.base_degree();
    let digits: Vec<ResidueElem> = ResidueElem::all(desc)
        .filter(|r| r.pow(desc.p().pow(sub as u32) as u128) == *r)
        .collect();
    let mut out = vec![Scalar::Int(0)];
    for i in 0..n {
        let pi = Scalar::Int(desc.p().pow(i) as i64);
        out = out
            .iter()
            .flat_map(|a| {
                let pi = &pi;
                digits.iter().map(move |w| {
                    if w.is_zero() {
                        a.clone()
                    } else {
                        a.add(&Scalar::Teichmuller(w.clone()).mul(pi, desc), desc)
                    }
                })
            })
            .collect();
    }
    out
}

/// Applies `[p]` to a point of the model, exactly when `[p]` is a polynomial.
pub fn apply_p(ms: &ModuleStructure, model: &TorsionFieldModel, y: &LElem) -> Result<LElem> {
    if let Some(f) = ms.p_polynomial() {
        return model.eval_poly(f, y);
    }
    let d = model.valuation_cap() as usize;
    let s = ms.p_series(d)?;
    model.eval_series(&s.to_precision(model.descriptor())?, y)
}

/// `[a](z)` for every digit scalar `a` of `O_F / p^n`; each must be killed
/// by `[p^n]` and all must differ.
pub fn enumerate_torsion(ms: &ModuleStructure, model: &TorsionFieldModel) -> Result<TorsionEnumeration> {
    let n = model.level();
    let d = model.valuation_cap() as usize;
    let scalars = digit_scalars(ms, n);
    let points = scalars
        .par_iter()
        .map(|a| {
            if let Scalar::Int(0) = a {
                return Ok(model.zero());
            }
            let s = ms.action_series(a, d)?.into_result()?;
            if s.descriptor().precision() < model.descriptor().precision() {
                return Err(Error::PrecisionInsufficient(format!(
                    "[a] known to {} digits, model carries {}",
                    s.descriptor().precision(),
                    model.descriptor().precision()
                )));
            }
            model.eval_series_at_z(&s.to_precision(model.descriptor())?)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut annihilated = true;
    for y in &points {
        let mut t = y.clone();
        for _ in 0..n {
            t = apply_p(ms, model, &t)?;
        }
        annihilated &= t.is_zero();
    }
    let distinct = points.iter().collect::<HashSet<_>>().len();
    Ok(TorsionEnumeration { size: points.len(), annihilated, distinct })
}

/// Whether `K(z)` contains all of `F[p^n]`.
#[derive(Clone, Debug, Serialize)]
pub struct AssumptionCertificate {
    pub n: u32,
    pub e: usize,
    pub precision: u32,
    pub root_count: RootCount,
    /// Present when a full-height scalar structure exists over `O_K`.
    pub enumeration: Option<TorsionEnumeration>,
    pub holds: bool,
}

/// Decides whether the level-`n` torsion field is generated by one point.
/// The root count decides it for any group; with a full-height structure
/// the orbit enumeration must agree, otherwise this is an error.
pub fn assumption_check(ms: &ModuleStructure, model: &TorsionFieldModel) -> Result<AssumptionCertificate> {
    let root_count = count_roots(model)?;
    let holds = root_count.roots == model.e();
    let full = match ms.source() {
        ActionSource::Law(_) => None,
        _ => ms.full_height_structure(4)?,
    };
    let enumeration = match full {
        Some(fs) => Some(enumerate_torsion(&fs, model)?),
        None => None,
    };
    if let Some(en) = &enumeration {
        if en.holds() != holds {
            return Err(Error::NonConvergence(format!(
                "root count {} of {} disagrees with orbit enumeration ({} distinct of {}, annihilated {})",
                root_count.roots,
                model.e(),
                en.distinct,
                en.size,
                en.annihilated
            )));
        }
    }
    Ok(AssumptionCertificate {
        n: model.level(),
        e: model.e(),
        precision: model.descriptor().precision(),
        root_count,
        enumeration,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_group::FrobeniusSeries;
    use crate::padic::RingDescriptor;
    use crate::series::Poly;
    use crate::weierstrass::DEFAULT_DCAP;

    fn model(ms: &ModuleStructure, n: u32) -> TorsionFieldModel {
        TorsionFieldModel::new(ms, n, DEFAULT_DCAP).unwrap()
    }

    #[test]
    fn multiplicative_level_one() {
        let d = RingDescriptor::new(3, 1, 3).unwrap();
        let fs = FrobeniusSeries::multiplicative(&d).unwrap();
        let ms = ModuleStructure::new(&d, 1, ActionSource::Polynomial(fs.poly().clone())).unwrap();
        let m = model(&ms, 1);
        let prof = distance_profile(&m).unwrap();
        // zeta - zeta^2 has the valuation of zeta - 1
        assert_eq!(prof.distances, vec![(Distance(Ratio::from_integer(1)), 1)]);
        let cert = assumption_check(&ms, &m).unwrap();
        assert!(cert.holds);
        assert_eq!(cert.root_count.roots, 2);
        let en = cert.enumeration.unwrap();
        assert_eq!((en.size, en.distinct), (3, 3));
    }

    #[test]
    fn height_two_over_w9() {
        let d = RingDescriptor::new(3, 2, 2).unwrap();
        let mut c = vec![0; 10];
        c[1] = 3;
        c[9] = 1;
        let ms = ModuleStructure::new(&d, 1, ActionSource::Polynomial(Poly::from_ints(&d, &c))).unwrap();
        let cert = assumption_check(&ms, &model(&ms, 1)).unwrap();
        assert!(cert.holds);
        assert_eq!(cert.enumeration.unwrap().distinct, 9);
    }

    #[test]
    fn height_two_over_z3_fails() {
        let d = RingDescriptor::new(3, 1, 2).unwrap();
        let mut c = vec![0; 10];
        c[1] = 3;
        c[9] = 1;
        let ms = ModuleStructure::new(&d, 1, ActionSource::Polynomial(Poly::from_ints(&d, &c))).unwrap();
        let cert = assumption_check(&ms, &model(&ms, 1)).unwrap();
        assert!(!cert.holds);
        assert!(cert.enumeration.is_none());
        // only [+-1](z)
        assert_eq!(cert.root_count.roots, 2);
    }
}
