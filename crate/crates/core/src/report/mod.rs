//! Verification suites and the JSON report they produce.

mod config;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{parse_pairs, GroupKind, RunConfig, KEYS};

use crate::corpus::GroupSpec;
use crate::endo::{compute_endo_subfield, min_endo_trunc, tau_infinity};
use crate::error::{Error, Result};
use crate::formal_group::{floor_log, FormalGroupLaw, ASSOC_CHECK_DEGREE};
use crate::matrix::{build_phi_zeta, commutant_dimension, relations_exhaustive, unit_quotient_order};
use crate::padic::{RingDescriptor, UnramifiedRingElem};
use crate::series::{Poly, TruncSeries1, TruncSeries2};
use crate::torsion::{
    assumption_check, certify_torsion_degree, mu_p_membership, ramification_breaks, torsion_count, TorsionFieldModel,
};
use crate::weierstrass::{phi_basis_decompose, phi_reconstruct};

pub const SCHEMA_VERSION: u32 = 1;

/// One asserted statement with its inputs and what was observed.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub group: String,
    pub statement: String,
    pub inputs: Value,
    pub observed: Value,
    pub pass: bool,
    /// Effective truncation and precision.
    pub trunc: usize,
    pub precision: u32,
    pub error: Option<String>,
}

/// What a single check returns when it runs to completion.
pub struct Outcome {
    pub observed: Value,
    pub pass: bool,
    pub trunc: usize,
    pub precision: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub id: String,
    pub group: String,
    pub millis: u128,
}

/// Per-group view of the three predicates that must agree.
#[derive(Clone, Debug, Default, Serialize)]
pub struct GroupSummary {
    pub name: String,
    pub spec: String,
    pub height: Option<u32>,
    pub f_f: Option<usize>,
    pub full_height: Option<bool>,
    /// Whether `K(z)` contains all torsion, per level.
    pub assumption: Vec<Option<bool>>,
    pub tau_infinity: Option<bool>,
    pub consistent: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub groups: Vec<GroupSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub timings: Vec<Timing>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// The report without timings, for byte-level comparison.
    pub fn to_json_stable(&self) -> String {
        let mut v = serde_json::to_value(self).expect("serializable");
        v["timings"] = Value::Array(Vec::new());
        serde_json::to_string_pretty(&v).expect("serializable")
    }

    /// One line per check.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            s.push_str(&format!("{status} {:<10} {:<28} {}", c.group, c.id, c.observed));
            if let Some(e) = &c.error {
                s.push_str(&format!("  [{e}]"));
            }
            s.push('\n');
        }
        for g in &self.summary.groups {
            s.push_str(&format!(
                "{:<10} h={} f_F={} full_height={} assumption={} tau={} consistent={}\n",
                g.name,
                opt(&g.height),
                opt(&g.f_f),
                opt(&g.full_height),
                g.assumption.iter().map(opt).collect::<Vec<_>>().join(","),
                opt(&g.tau_infinity),
                opt(&g.consistent)
            ));
        }
        s.push_str(&format!("{} checks, {} passed, {} failed\n", self.summary.checks, self.summary.passed, self.summary.failed));
        s
    }
}

fn opt<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or("-".into(), |v| v.to_string())
}

/// Which suites a command runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Suites {
    pub torsion: bool,
    pub endo: bool,
    pub matrices: bool,
    pub division: bool,
}

impl Suites {
    pub const ALL: Suites = Suites { torsion: true, endo: true, matrices: true, division: true };
    pub const TORSION: Suites = Suites { torsion: true, endo: false, matrices: false, division: false };
    pub const ENDO: Suites = Suites { torsion: false, endo: true, matrices: false, division: false };
    pub const MATRICES: Suites = Suites { torsion: false, endo: false, matrices: true, division: false };
}

struct Recorder {
    group: String,
    checks: Vec<CheckRecord>,
    timings: Vec<Timing>,
}

impl Recorder {
    fn new(group: &str) -> Self {
        Recorder { group: group.to_string(), checks: Vec::new(), timings: Vec::new() }
    }

    /// Runs `f`; an error becomes a failed record, never an abort.
    fn run<T>(
        &mut self,
        id: &str,
        statement: &str,
        inputs: Value,
        f: impl FnOnce() -> Result<(Outcome, T)>,
    ) -> Option<T> {
        let t0 = Instant::now();
        let r = f();
        self.timings.push(Timing { id: id.into(), group: self.group.clone(), millis: t0.elapsed().as_millis() });
        let (rec, out) = match r {
            Ok((o, t)) => (
                CheckRecord {
                    id: id.into(),
                    group: self.group.clone(),
                    statement: statement.into(),
                    inputs,
                    observed: o.observed,
                    pass: o.pass,
                    trunc: o.trunc,
                    precision: o.precision,
                    error: None,
                },
                Some(t),
            ),
            Err(e) => (
                CheckRecord {
                    id: id.into(),
                    group: self.group.clone(),
                    statement: statement.into(),
                    inputs,
                    observed: Value::Null,
                    pass: false,
                    trunc: 0,
                    precision: 0,
                    error: Some(e.to_string()),
                },
                None,
            ),
        };
        self.checks.push(rec);
        out
    }
}

fn outcome(observed: Value, pass: bool, trunc: usize, precision: u32) -> Outcome {
    Outcome { observed, pass, trunc, precision }
}

/// Precision at which the endomorphism tests run: the run's `N`, raised
/// until the logarithm's denominators leave at least three digits.
pub fn endo_precision(p: u64, h: u32, n: u32) -> (usize, u32) {
    let d = min_endo_trunc(p, h);
    let m = floor_log(p, d - 1);
    (d, n.max(2 * m + 1).max(m + 3))
}

fn group_suite(name: &str, spec: &GroupSpec, cfg: &RunConfig, suites: Suites) -> (Vec<CheckRecord>, Vec<Timing>, GroupSummary) {
    let mut rec = Recorder::new(name);
    let mut sum = GroupSummary { name: name.into(), spec: spec.to_string(), ..Default::default() };
    let n = cfg.n;
    let ms = rec.run("module.height", "height of the group over Z_p", json!({"N": n}), || {
        let ms = spec.module(n)?;
        let h = ms.height(4)?.finite().ok_or_else(|| Error::Precondition("infinite height".into()))?;
        Ok((outcome(json!({"height": h, "scalar_degree": ms.base_degree()}), true, 0, n), (ms, h)))
    });
    let Some((ms, h)) = ms else { return (rec.checks, rec.timings, sum) };
    sum.height = Some(h);
    let q = spec.p().pow(h);
    let full = ms.full_height_structure(4).ok().flatten();

    rec.run("law.axioms", "identity, commutativity and associativity of F", json!({"N": n, "D": 12}), || {
        let law = spec.law(n, 12)?;
        law.check_axioms(ASSOC_CHECK_DEGREE)?;
        Ok((outcome(json!({"assoc_degree": ASSOC_CHECK_DEGREE}), true, 12, n), ()))
    });

    if suites.torsion || suites.endo {
        for lvl in 1..=cfg.nmax {
            if suites.torsion {
                rec.run(
                    &format!("torsion.degree.n{lvl}"),
                    "K(z)/K totally ramified of degree q^(n-1)(q-1)",
                    json!({"n": lvl, "N": n}),
                    || {
                        let c = certify_torsion_degree(&ms, lvl, cfg.dcap)?;
                        Ok((outcome(json!({"e": c.e, "polygon": c.polygon.vertices}), true, c.truncation, c.precision), ()))
                    },
                );
                rec.run(
                    &format!("torsion.count.n{lvl}"),
                    "Weierstrass degree of [p^n] equals |O_F/p^n|^(h/d)",
                    json!({"n": lvl, "N": n}),
                    || {
                        let c = torsion_count(&ms, lvl, cfg.dcap)?;
                        Ok((outcome(serde_json::to_value(&c).unwrap(), c.weierstrass_degree == c.module_order, 0, n), ()))
                    },
                );
                if full.is_some() {
                    rec.run(
                        &format!("units.order.n{lvl}"),
                        "#(U_0/U_n) equals the torsion degree",
                        json!({"q": q, "n": lvl}),
                        || {
                            let e = (q - 1) * q.pow(lvl - 1);
                            let o = unit_quotient_order(q, lvl)?;
                            Ok((outcome(json!({"order": o, "e": e}), o == e, 0, n), ()))
                        },
                    );
                }
            }
            let a = rec.run(
                &format!("torsion.assumption.n{lvl}"),
                "K(z) contains every point of F[p^n]",
                json!({"n": lvl, "N": n}),
                || {
                    let model = TorsionFieldModel::new(&ms, lvl, cfg.dcap)?;
                    let c = assumption_check(&ms, &model)?;
                    let obs = json!({
                        "holds": c.holds,
                        "roots": c.root_count.roots,
                        "e": c.e,
                        "enumeration": c.enumeration,
                    });
                    Ok((outcome(obs, true, model.valuation_cap() as usize, c.precision), c.holds))
                },
            );
            sum.assumption.push(a);
        }
    }

    if suites.torsion {
        if let Some(fs) = &full {
            for lvl in 1..=cfg.nmax {
                rec.run(
                    &format!("torsion.breaks.n{lvl}"),
                    "v_L([u](z) - z) = q^k for u in U_k - U_(k+1)",
                    json!({"n": lvl, "N": n}),
                    || {
                        let model = TorsionFieldModel::new(fs, lvl, cfg.dcap)?;
                        let t = ramification_breaks(fs, &model, None)?;
                        let obs = json!({"jumps": t.jumps(), "rows": t.rows.len()});
                        Ok((outcome(obs, t.ok(), model.valuation_cap() as usize, n), ()))
                    },
                );
            }
        }
        rec.run("torsion.mu_p", "zeta_p lies in K^ur(F[p])", json!({"N": n, "d_max": h}), || {
            let model = TorsionFieldModel::new(&ms, 1, cfg.dcap)?;
            let r = mu_p_membership(&model, h as usize)?;
            let e = model.e() as i64;
            let ok = r.member && r.witness_valuation.is_some_and(|v| v >= crate::padic::Valuation::Finite((n as i64 - 2) * e));
            let obs = json!({"member": r.member, "degree": r.degree, "witness_valuation": r.witness_valuation});
            Ok((outcome(obs, ok, 0, n), ()))
        });
    }

    if suites.endo {
        let (d, ne) = endo_precision(spec.p(), h, n);
        let law = rec.run("endo.law", "law built for endomorphism tests", json!({"N": ne, "D": d}), || {
            let law = spec.law(ne, d)?;
            Ok((outcome(json!({"trunc": d}), true, d, ne), law))
        });
        if let Some(law) = law {
            let r = rec.run("endo.subfield", "residue degree f_F of c(End)", json!({"N": ne, "D": d, "h": h}), || {
                let r = compute_endo_subfield(&law, h, d)?;
                let obs = json!({"f_F": r.f_f, "full_height": r.full_height, "candidates": r.candidates.iter().map(|c| json!({"degree": c.degree, "endomorphism": c.endomorphism, "obstruction": c.obstruction_degree})).collect::<Vec<_>>()});
                Ok((outcome(obs, true, d, r.precision), (r.f_f, r.full_height)))
            });
            if let Some((f_f, fh)) = r {
                sum.f_f = Some(f_f);
                sum.full_height = Some(fh);
            }
            sum.tau_infinity = rec.run("endo.tau", "tau = zeta X + ... with tau^(q-1) = X", json!({"N": ne, "D": d}), || {
                let t = tau_infinity(&law, h, d)?;
                let exists = t.as_ref().is_some_and(|t| t.iterate_is_identity);
                let ok = t.as_ref().is_none_or(|t| t.iterate_is_identity);
                let prec = t.as_ref().map_or(ne, |t| t.precision);
                Ok((outcome(json!({"exists": exists, "order": q - 1}), ok, d, prec), exists))
            });
        }
        if suites.torsion || !sum.assumption.is_empty() {
            let legs = (sum.assumption.clone(), sum.full_height, sum.tau_infinity);
            sum.consistent = rec.run(
                "equivalence",
                "torsion generated by one point <=> full height <=> tau exists",
                json!({"nmax": cfg.nmax}),
                || {
                    let (a, fh, tau) = legs;
                    let a: Option<Vec<bool>> = a.into_iter().collect();
                    let (Some(a), Some(fh), Some(tau)) = (a, fh, tau) else {
                        return Err(Error::Precondition("a leg of the equivalence failed to compute".into()));
                    };
                    let same_levels = a.iter().all(|&x| x == a[0]);
                    let ok = same_levels && a.first().is_none_or(|&x| x == fh) && fh == tau;
                    Ok((outcome(json!({"assumption": a, "full_height": fh, "tau": tau}), ok, 0, n), ok))
                },
            );
        }
    }
    (rec.checks, rec.timings, sum)
}

fn global_suite(cfg: &RunConfig, suites: Suites) -> (Vec<CheckRecord>, Vec<Timing>) {
    let mut rec = Recorder::new("global");
    if suites.matrices {
        rec.run("matrices.commutant", "dim of the commutant of phi([zeta]) is n^2 m", json!({"m": "1..4", "n": "1..4", "p": 3}), || {
            let mut rows = Vec::new();
            let mut ok = true;
            for m in 1..=4 {
                for nb in 1..=4 {
                    let r = commutant_dimension(&build_phi_zeta(m, nb, 3)?, 3);
                    ok &= r.dimension == r.bound && r.lifts_mod_p2;
                    rows.push(json!([m, nb, r.dimension]));
                }
            }
            Ok((outcome(Value::Array(rows), ok, 0, 1), ()))
        });
        rec.run("matrices.relations", "circulant <=> commutes with the cyclic permutation", json!({"m": "1..3", "p": 3}), || {
            let mut obs = Vec::new();
            let mut ok = true;
            for m in 1..=3 {
                let (total, bad) = relations_exhaustive(m, 3);
                ok &= bad == 0;
                obs.push(json!({"m": m, "checked": total, "disagreements": bad}));
            }
            Ok((outcome(Value::Array(obs), ok, 0, 1), ()))
        });
    }
    if suites.division {
        rec.run(
            "division.seeded",
            "f = sum a_i([p](X)) X^i reconstructs exactly; 0 decomposes to 0",
            json!({"seed": cfg.seed, "cases": 25, "p": 3, "N": 4}),
            || {
                let r = division_round_trips(cfg.seed, 25)?;
                Ok((outcome(json!({"reconstructed": r, "cases": 25}), r == 25, 0, 4), ()))
            },
        );
    }
    (rec.checks, rec.timings)
}

/// Seeded random series at `p = 3`, `q` alternating `3, 9`, `D = 9q`,
/// `N = 4`; counts exact reconstructions (the zero series included as a
/// separate requirement).
pub fn division_round_trips(seed: u64, cases: usize) -> Result<usize> {
    let desc = RingDescriptor::new(3, 1, 4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut good = 0;
    for i in 0..cases {
        let q = if i % 2 == 0 { 3 } else { 9 };
        let d = 9 * q;
        let mut c = vec![0i64; q + 1];
        c[1] = 3;
        c[q] = 1;
        let pi = Poly::from_ints(&desc, &c).to_series(d);
        let f = TruncSeries1::from_coeffs(&desc, d, (0..d).map(|_| UnramifiedRingElem::from_int(&desc, rng.gen_range(0..81))).collect());
        let dec = phi_basis_decompose(&f, &pi, q)?;
        let back = phi_reconstruct(&dec, &pi)?;
        let zero = phi_basis_decompose(&TruncSeries1::zero(&desc, d), &pi, q)?;
        if back == f.truncate(dec.window)? && zero.components.iter().all(|a| a.is_zero()) {
            good += 1;
        }
    }
    Ok(good)
}

/// Runs the selected suites over every group of the configuration.
pub fn run(cfg: &RunConfig, suites: Suites) -> Result<VerificationReport> {
    cfg.check_feasible()?;
    let groups = cfg.groups()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let (per_group, global) = pool.install(|| {
        rayon::join(
            || {
                groups
                    .par_iter()
                    .map(|(name, spec)| group_suite(name, spec, cfg, suites))
                    .collect::<Vec<_>>()
            },
            || global_suite(cfg, suites),
        )
    });
    let mut checks = Vec::new();
    let mut timings = Vec::new();
    let mut groups_summary = Vec::new();
    for (c, t, s) in per_group {
        checks.extend(c);
        timings.extend(t);
        groups_summary.push(s);
    }
    checks.extend(global.0);
    timings.extend(global.1);
    let passed = checks.iter().filter(|c| c.pass).count();
    let summary = Summary { checks: checks.len(), passed, failed: checks.len() - passed, groups: groups_summary };
    Ok(VerificationReport { schema_version: SCHEMA_VERSION, config: cfg.clone(), checks, summary, timings })
}

/// `F(X, Y)` as text, terms up to total degree `max_deg`, constants
/// shown as signed integers when they are rational.
pub fn render_law(law: &FormalGroupLaw, max_deg: usize) -> String {
    render_series2(law.series(), max_deg)
}

pub fn render_series2(s: &TruncSeries2<UnramifiedRingElem>, max_deg: usize) -> String {
    let mut terms = Vec::new();
    for t in 1..s.trunc().min(max_deg + 1) {
        for i in (0..=t).rev() {
            let c = s.coeff(i, t - i);
            if c.is_zero() {
                continue;
            }
            let mono = match (i, t - i) {
                (0, j) => var("Y", j),
                (i, 0) => var("X", i),
                (i, j) => format!("{}{}", var("X", i), var("Y", j)),
            };
            let coef = if c.is_rational() { c.centered_constant().to_string() } else { format!("{:?}", c.coeffs()) };
            terms.push(match coef.as_str() {
                "1" => mono,
                "-1" => format!("-{mono}"),
                _ => format!("{coef}{mono}"),
            });
        }
    }
    let mut out = terms.join(" + ").replace("+ -", "- ");
    let more = (max_deg + 1..s.trunc()).any(|t| (0..=t).any(|i| !s.coeff(i, t - i).is_zero()));
    if more {
        out.push_str(" + ...");
    }
    out
}

fn var(v: &str, k: usize) -> String {
    if k == 1 {
        v.to_string()
    } else {
        format!("{v}^{k}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicative_renders() {
        let d = RingDescriptor::new(3, 1, 3).unwrap();
        let law = FormalGroupLaw::multiplicative(&d, 6);
        assert_eq!(render_law(&law, 5), "X + Y + XY");
    }

    #[test]
    fn seeded_division() {
        assert_eq!(division_round_trips(7, 4).unwrap(), 4);
    }

    #[test]
    fn infeasible_config_is_refused() {
        let mut c = RunConfig::default();
        c.apply(&parse_pairs("f=2\nd=2\nN=12").unwrap()).unwrap();
        assert!(matches!(run(&c, Suites::ALL), Err(Error::Infeasible(_))));
    }

    #[test]
    fn small_verify_passes_and_is_deterministic() {
        let mut c = RunConfig::default();
        c.apply(&parse_pairs("p=3\nN=3\nnmax=2\njobs=2").unwrap()).unwrap();
        let r = run(&c, Suites::ALL).unwrap();
        assert!(r.all_pass(), "{}", r.render());
        let r2 = run(&c, Suites::ALL).unwrap();
        assert_eq!(r.to_json_stable(), r2.to_json_stable());
    }
}
