use serde::Serialize;

use super::model::TorsionFieldModel;
use crate::error::{Error, Result};
use crate::formal_group::{FormalGroupLaw, ModuleStructure, Scalar};
use crate::padic::{ResidueElem, Valuation};

/// One automorphism `sigma_u : z -> [u](z)` and its lower-numbering index
/// `i(sigma_u) = v_L(sigma_u(z) - z)`.
#[derive(Clone, Debug, Serialize)]
pub struct BreakRow {
    /// `u` lies in `U_k` but not `U_{k+1}` (`k = None` for `u = 1`).
    pub k: Option<u32>,
    /// Teichmuller digit `w` of `u = w` (`k = 0`) or `u = 1 + p^k w`.
    pub digit: Vec<u64>,
    pub index: Valuation,
    pub expected: Valuation,
    /// `v_L(F([u](z), i(z)))`, when the law was supplied deep enough.
    pub via_law: Option<Valuation>,
}

impl BreakRow {
    pub fn ok(&self) -> bool {
        self.index == self.expected && self.via_law.is_none_or(|v| v == self.index)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BreakTable {
    pub n: u32,
    pub q: u64,
    pub e: usize,
    pub rows: Vec<BreakRow>,
}

impl BreakTable {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(BreakRow::ok)
    }

    /// The distinct indices, i.e. the jumps of the lower filtration.
    pub fn jumps(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.rows.iter().filter_map(|r| r.index.finite()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Break table of `K(F[p^n]) / K` for a full-height structure: for every
/// digit `w`, `u = w` (`w != 1`) and `u = 1 + p^k w` (`1 <= k < n`), plus
/// `u = 1`. The expected index of `u` in `U_k - U_{k+1}` is `q^k`.
///
/// With `law`, each index is cross-checked as `v_L(F([u](z), i(z)))`; this
/// needs a law truncation of at least `N e`.
pub fn ramification_breaks(
    ms: &ModuleStructure,
    model: &TorsionFieldModel,
    law: Option<&FormalGroupLaw>,
) -> Result<BreakTable> {
    let desc = ms.descriptor();
    let p = desc.p();
    let h = ms.height(4)?.finite().ok_or_else(|| Error::Precondition("infinite height".into()))?;
    if ms.base_degree() != h as usize {
        return Err(Error::Precondition(format!(
            "scalar degree {} is not the height {h}: Galois action is not realized by [u]",
            ms.base_degree()
        )));
    }
    let q = p.pow(h);
    let n = model.level();
    let d = model.valuation_cap() as usize;
    if let Some(l) = law {
        if l.trunc() < d {
            return Err(Error::InsufficientTruncation(format!("law known to degree {}, need {d}", l.trunc())));
        }
    }
    let digits: Vec<ResidueElem> = ResidueElem::all(desc)
        .filter(|r| !r.is_zero() && r.pow(q as u128) == *r)
        .collect();
    let z = model.z();
    let inv_z = match law {
        Some(l) => Some(model.eval_series_at_z(&l.negation().truncate(d)?)?),
        None => None,
    };
    let mut reps: Vec<(Option<u32>, Vec<u64>, Scalar)> = vec![(None, vec![1], Scalar::Int(1))];
    for w in &digits {
        if !w.is_one() {
            reps.push((Some(0), w.coeffs().to_vec(), Scalar::Teichmuller(w.clone())));
        }
    }
    for k in 1..n {
        for w in &digits {
            let u = Scalar::Int(1).add(&Scalar::Int(p.pow(k) as i64).mul(&Scalar::Teichmuller(w.clone()), desc), desc);
            reps.push((Some(k), w.coeffs().to_vec(), u));
        }
    }
    let mut rows = Vec::with_capacity(reps.len());
    for (k, digit, u) in reps {
        let s = ms.action_series(&u, d)?.into_result()?;
        if s.descriptor().precision() < desc.precision() {
            return Err(Error::PrecisionInsufficient("[u] lost digits; raise N".into()));
        }
        let image = model.eval_series_at_z(&s.to_precision(desc)?)?;
        let index = model.valuation(&model.sub(&image, &z));
        let via_law = match (law, &inv_z) {
            (Some(l), Some(iz)) => Some(model.valuation(&model.eval_law(l, &image, iz)?)),
            _ => None,
        };
        let expected = match k {
            None => Valuation::Infinite,
            Some(k) => Valuation::Finite(q.pow(k) as i64),
        };
        rows.push(BreakRow { k, digit, index, expected, via_law });
    }
    Ok(BreakTable { n, q, e: model.e(), rows })
}
