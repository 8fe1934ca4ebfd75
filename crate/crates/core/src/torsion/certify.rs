use num_rational::Ratio;
use serde::Serialize;

use super::newton::{newton_polygon_of, NewtonPolygon};
use crate::error::{Error, Result};
use crate::formal_group::ModuleStructure;
use crate::weierstrass::{division_polynomial, DivisionPolynomial};

/// `K(z)/K` is totally ramified of degree `e = q^{n-1}(q - 1)`: the
/// division polynomial has a pure polygon of slope `-1/e`, which makes it
/// Eisenstein-like, hence irreducible.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeCertificate {
    pub n: u32,
    pub q: u64,
    pub e: usize,
    pub precision: u32,
    /// Truncation of the series route (0 when the polynomial is exact).
    pub truncation: usize,
    pub polygon: NewtonPolygon,
}

pub fn certify_torsion_degree(ms: &ModuleStructure, n: u32, dcap: usize) -> Result<DegreeCertificate> {
    certify_division_polynomial(&division_polynomial(ms, n, dcap)?)
}

pub fn certify_division_polynomial(dp: &DivisionPolynomial) -> Result<DegreeCertificate> {
    let e = (dp.q - 1) * dp.q.pow(dp.n - 1);
    let polygon = newton_polygon_of(&dp.p_rel)?;
    if !polygon.is_pure() {
        return Err(Error::Polygon(format!("level {} polygon has {} slopes", dp.n, polygon.segments.len())));
    }
    let seg = &polygon.segments[0];
    if seg.slope != Ratio::new(-1, e as i64) || seg.length as u64 != e {
        return Err(Error::Polygon(format!("level {} slope {} over length {}, expected -1/{e}", dp.n, seg.slope, seg.length)));
    }
    Ok(DegreeCertificate { n: dp.n, q: dp.q, e: e as usize, precision: dp.precision(), truncation: dp.trunc, polygon })
}

/// `#F[p^n] = |O_F / p^n|^{h/d}`, checked as Weierstrass degree of `[p^n]`.
#[derive(Clone, Debug, Serialize)]
pub struct CountCertificate {
    pub n: u32,
    pub weierstrass_degree: u64,
    /// `d`, residue degree of the scalar ring.
    pub scalar_degree: usize,
    pub relative_height: u32,
    pub module_order: u64,
}

pub fn torsion_count(ms: &ModuleStructure, n: u32, dcap: usize) -> Result<CountCertificate> {
    let d = ms.base_degree();
    let h = ms.height(4)?.finite().ok_or_else(|| Error::Precondition("infinite height: no torsion".into()))?;
    if !(h as usize).is_multiple_of(d) {
        return Err(Error::Precondition(format!("scalar degree {d} does not divide height {h}")));
    }
    let hr = h / d as u32;
    let p = ms.descriptor().p();
    let module_order = p
        .checked_pow(d as u32 * n * hr)
        .ok_or_else(|| Error::Precondition("torsion order overflows".into()))?;
    let weierstrass_degree = if n == 0 { 1 } else { division_polynomial(ms, n, dcap)?.full_degree as u64 };
    let cert = CountCertificate { n, weierstrass_degree, scalar_degree: d, relative_height: hr, module_order };
    if weierstrass_degree != module_order {
        return Err(Error::NonConvergence(format!(
            "Weierstrass degree {weierstrass_degree} of [p^{n}] differs from module order {module_order}"
        )));
    }
    Ok(cert)
}
