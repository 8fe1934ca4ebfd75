//! Named groups used by the verification suites and the command line.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_group::{honda_group, lubin_tate_group, ActionSource, FormalGroupLaw, FrobeniusSeries, ModuleStructure};
use crate::padic::{RingDescriptor, UnramifiedRingElem};
use crate::series::Poly;

type R = UnramifiedRingElem;

/// How a group is specified. Coefficients are integers, so every spec
/// makes sense over any `W(F_{p^f})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    /// `[p] = (1 + X)^p - 1`.
    Multiplicative { p: u64, f: usize },
    /// `[p]` given by integer coefficients, scalars of residue degree `d`.
    LubinTate { p: u64, f: usize, d: usize, coeffs: Vec<i64> },
    /// Functional-equation group with integer parameters `u_1, u_2, ...`.
    Honda { p: u64, f: usize, u: Vec<i64> },
}

impl GroupSpec {
    /// `pX + X^{p^d}` over `W(F_{p^f})`.
    pub fn standard(p: u64, f: usize, d: usize) -> Self {
        let q = p.pow(d as u32) as usize;
        let mut coeffs = vec![0; q + 1];
        coeffs[1] = p as i64;
        coeffs[q] = 1;
        GroupSpec::LubinTate { p, f, d, coeffs }
    }

    pub fn p(&self) -> u64 {
        match self {
            GroupSpec::Multiplicative { p, .. } | GroupSpec::LubinTate { p, .. } | GroupSpec::Honda { p, .. } => *p,
        }
    }

    pub fn f(&self) -> usize {
        match self {
            GroupSpec::Multiplicative { f, .. } | GroupSpec::LubinTate { f, .. } | GroupSpec::Honda { f, .. } => *f,
        }
    }

    /// The same spec read over `W(F_{p^f})`.
    pub fn with_f(&self, f: usize) -> Self {
        let mut s = self.clone();
        match &mut s {
            GroupSpec::Multiplicative { f: g, .. } | GroupSpec::LubinTate { f: g, .. } | GroupSpec::Honda { f: g, .. } => *g = f,
        }
        s
    }

    pub fn descriptor(&self, n: u32) -> Result<Arc<RingDescriptor>> {
        RingDescriptor::new(self.p(), self.f(), n)
    }

    fn frobenius_series(&self, desc: &Arc<RingDescriptor>) -> Result<Option<FrobeniusSeries>> {
        Ok(match self {
            GroupSpec::Multiplicative { .. } => Some(FrobeniusSeries::multiplicative(desc)?),
            GroupSpec::LubinTate { d, coeffs, .. } => Some(FrobeniusSeries::new(Poly::from_ints(desc, coeffs), *d)?),
            GroupSpec::Honda { .. } => None,
        })
    }

    fn honda_params(desc: &Arc<RingDescriptor>, u: &[i64]) -> Vec<R> {
        u.iter().map(|&k| R::from_int(desc, k)).collect()
    }

    /// Module structure at precision `n`.
    pub fn module(&self, n: u32) -> Result<ModuleStructure> {
        let desc = self.descriptor(n)?;
        match self {
            GroupSpec::Honda { u, .. } => ModuleStructure::new(&desc, 1, ActionSource::Honda(Self::honda_params(&desc, u))),
            _ => {
                let fs = self.frobenius_series(&desc)?.expect("polynomial spec");
                ModuleStructure::new(&desc, fs.base_degree(), ActionSource::Polynomial(fs.poly().clone()))
            }
        }
    }

    /// The law at precision `n`, truncated at total degree `d`.
    pub fn law(&self, n: u32, d: usize) -> Result<FormalGroupLaw> {
        let desc = self.descriptor(n)?;
        match self {
            GroupSpec::Multiplicative { .. } => Ok(FormalGroupLaw::multiplicative(&desc, d)),
            GroupSpec::LubinTate { .. } => Ok(lubin_tate_group(&self.frobenius_series(&desc)?.expect("polynomial spec"), d)?.0),
            GroupSpec::Honda { u, .. } => honda_group(&desc, &Self::honda_params(&desc, u), d),
        }
    }

    /// Checks the parameters without building anything.
    pub fn validate(&self) -> Result<()> {
        let p = self.p();
        if self.f() == 0 {
            return Err(Error::Config("f must be positive".into()));
        }
        match self {
            GroupSpec::LubinTate { d, f, .. } if *d == 0 || f % d != 0 => {
                Err(Error::Config(format!("scalar degree d = {d} must divide f = {f}")))
            }
            GroupSpec::Honda { u, .. } if u.is_empty() => Err(Error::Config("honda group needs at least one u".into())),
            _ => RingDescriptor::new(p, self.f(), 1).map(|_| ()).map_err(|e| Error::Config(e.to_string())),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Multiplicative { p, f } => write!(fm, "multiplicative p={p} f={f}"),
            GroupSpec::LubinTate { p, f, d, coeffs } => write!(fm, "lubin_tate p={p} f={f} d={d} [p]={coeffs:?}"),
            GroupSpec::Honda { p, f, u } => write!(fm, "honda p={p} f={f} u={u:?}"),
        }
    }
}

/// A named member of the standard corpus.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusGroup {
    pub name: &'static str,
    pub spec: GroupSpec,
}

/// The multiplicative and `pX + X^p` groups at `p = 3, 5`, `pX + X^9` over
/// `W(F_9)`, and the functional-equation group with `u = (0, 1)` over
/// `Z_3` and `W(F_9)`.
pub fn standard_corpus() -> Vec<CorpusGroup> {
    vec![
        CorpusGroup { name: "gm3", spec: GroupSpec::Multiplicative { p: 3, f: 1 } },
        CorpusGroup { name: "gm5", spec: GroupSpec::Multiplicative { p: 5, f: 1 } },
        CorpusGroup { name: "lt3", spec: GroupSpec::standard(3, 1, 1) },
        CorpusGroup { name: "lt5", spec: GroupSpec::standard(5, 1, 1) },
        CorpusGroup { name: "lt9", spec: GroupSpec::standard(3, 2, 2) },
        CorpusGroup { name: "honda3", spec: GroupSpec::Honda { p: 3, f: 1, u: vec![0, 1] } },
        CorpusGroup { name: "honda9", spec: GroupSpec::Honda { p: 3, f: 2, u: vec![0, 1] } },
    ]
}
