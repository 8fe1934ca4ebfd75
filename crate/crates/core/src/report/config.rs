use std::collections::BTreeMap;
use std::fs;

use serde::Serialize;

use crate::corpus::{standard_corpus, GroupSpec};
use crate::error::{Error, Result};
use crate::formal_group::ActionSource;

/// Which group(s) a run covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Multiplicative,
    LubinTate,
    Honda,
    /// `[p]` read from the file named by `coeffs`.
    Custom,
    /// Every group of the standard corpus.
    Corpus,
}

/// Validated run parameters. Built from `key = value` lines; later sources
/// override earlier ones key by key.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub p: u64,
    pub f: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub group: GroupKind,
    pub u: Vec<i64>,
    pub d: usize,
    pub coeffs: Option<String>,
    pub nmax: u32,
    pub dcap: usize,
    pub jobs: usize,
    pub seed: u64,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 3,
            f: 1,
            n: 3,
            group: GroupKind::LubinTate,
            u: vec![0, 1],
            d: 1,
            coeffs: None,
            nmax: 2,
            dcap: crate::weierstrass::DEFAULT_DCAP,
            jobs: 0,
            seed: 0,
            out: None,
        }
    }
}

pub const KEYS: [&str; 12] = ["p", "f", "N", "group", "u", "d", "coeffs", "nmax", "dcap", "jobs", "seed", "out"];

/// `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn int_list(key: &str, v: &str) -> Result<Vec<i64>> {
    v.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(|s| num(key, s)).collect()
}

impl RunConfig {
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "p" => self.p = num(key, v)?,
            "f" => self.f = num(key, v)?,
            "N" => self.n = num(key, v)?,
            "group" => {
                self.group = match v {
                    "multiplicative" => GroupKind::Multiplicative,
                    "lubin_tate" => GroupKind::LubinTate,
                    "honda" => GroupKind::Honda,
                    "custom" => GroupKind::Custom,
                    "corpus" => GroupKind::Corpus,
                    _ => return Err(Error::Config(format!("unknown group {v:?}"))),
                }
            }
            "u" => self.u = int_list(key, v)?,
            "d" => self.d = num(key, v)?,
            "coeffs" => self.coeffs = Some(v.to_string()),
            "nmax" => self.nmax = num(key, v)?,
            "dcap" => self.dcap = num(key, v)?,
            "jobs" => self.jobs = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "out" => self.out = Some(v.to_string()),
            _ => return Err(Error::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn apply(&mut self, pairs: &BTreeMap<String, String>) -> Result<()> {
        for (k, v) in pairs {
            self.set(k, v)?;
        }
        Ok(())
    }

    /// The groups this run covers, named.
    pub fn groups(&self) -> Result<Vec<(String, GroupSpec)>> {
        let single = |spec: GroupSpec| -> Result<Vec<(String, GroupSpec)>> {
            spec.validate()?;
            Ok(vec![(format!("{spec}"), spec)])
        };
        match self.group {
            GroupKind::Corpus => Ok(standard_corpus().into_iter().map(|g| (g.name.to_string(), g.spec)).collect()),
            GroupKind::Multiplicative => single(GroupSpec::Multiplicative { p: self.p, f: self.f }),
            GroupKind::LubinTate => single(GroupSpec::standard(self.p, self.f, self.d)),
            GroupKind::Honda => single(GroupSpec::Honda { p: self.p, f: self.f, u: self.u.clone() }),
            GroupKind::Custom => {
                let path = self.coeffs.as_ref().ok_or_else(|| Error::Config("custom group needs coeffs = <file>".into()))?;
                let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{path}: {e}")))?;
                let coeffs = int_list("coeffs", &text.lines().filter(|l| !l.trim_start().starts_with('#')).collect::<Vec<_>>().join(" "))?;
                single(GroupSpec::LubinTate { p: self.p, f: self.f, d: self.d, coeffs })
            }
        }
    }

    /// Refuses levels whose torsion evaluations would need a truncation above
    /// `dcap`, before anything expensive runs.
    pub fn check_feasible(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config("N must be at least 2".into()));
        }
        for (name, spec) in self.groups()? {
            let ms = spec.module(self.n).map_err(|e| Error::Config(format!("{name}: {e}")))?;
            let h = ms
                .height(4)
                .map_err(|e| Error::Config(format!("{name}: {e}")))?
                .finite()
                .ok_or_else(|| Error::Config(format!("{name}: infinite height")))?;
            let q = spec.p().pow(h);
            let series_route = !matches!(ms.source(), ActionSource::Polynomial(_));
            for lvl in 1..=self.nmax {
                let e = (q - 1) * q.pow(lvl - 1);
                let need = if series_route { (self.n as u64 + 1) * e + 1 } else { self.n as u64 * e };
                if need > self.dcap as u64 {
                    return Err(Error::Infeasible(format!(
                        "{name}: level {lvl} has e = {e}; N = {} needs truncation {need} > dcap = {}",
                        self.n, self.dcap
                    )));
                }
            }
        }
        Ok(())
    }
}
