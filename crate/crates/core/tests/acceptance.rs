//! One line per acceptance criterion, then a single assertion over all of them.

mod common;

use std::time::{Duration, Instant};

use fglab::corpus::{standard_corpus, GroupSpec};
use fglab::endo::{compute_endo_subfield, tau_infinity};
use fglab::formal_group::{base_change_unramified, ModuleStructure};
use fglab::matrix::{build_phi_zeta, commutant_dimension, relations_exhaustive, unit_quotient_order};
use fglab::padic::{RingDescriptor, Valuation};
use fglab::report::{division_round_trips, endo_precision};
use fglab::series::{Poly, TruncSeries1};
use fglab::torsion::{
    assumption_check, certify_torsion_degree, mu_p_membership, newton_polygon_of, ramification_breaks, torsion_count,
    TorsionFieldModel,
};
use fglab::weierstrass::{division_polynomial, phi_basis_decompose, DEFAULT_DCAP};
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

const N: u32 = 3;

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn e_of(q: u64, n: u32) -> usize {
    ((q - 1) * q.pow(n - 1)) as usize
}

fn height(ms: &ModuleStructure) -> Result<u32, String> {
    ms.height(4).map_err(|e| e.to_string())?.finite().ok_or("infinite height".into())
}

fn within(t0: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let el = t0.elapsed();
    if el > limit {
        return Err(format!("{what} took {el:?}, limit {limit:?}"));
    }
    Ok(())
}

fn degree_law() -> Outcome {
    let t0 = Instant::now();
    let mut seen = Vec::new();
    for g in standard_corpus() {
        let ms = g.spec.module(N).map_err(|e| e.to_string())?;
        let q = g.spec.p().pow(height(&ms)?);
        for n in 1..=2 {
            let c = certify_torsion_degree(&ms, n, DEFAULT_DCAP).map_err(|e| format!("{} n={n}: {e}", g.name))?;
            let e = e_of(q, n);
            let v = &c.polygon.vertices;
            if c.e != e || v.len() != 2 || v[0] != (0, 1) || v[1] != (e, 0) {
                return Err(format!("{} n={n}: e={} vertices {:?}", g.name, c.e, v));
            }
            seen.push(format!("{}:{}", g.name, e));
        }
    }
    within(t0, Duration::from_secs(120), "degree law")?;
    Ok(format!("pure slopes 1/e, {}", seen.join(" ")))
}

fn cardinality() -> Outcome {
    let mut seen = Vec::new();
    for g in standard_corpus() {
        let ms = g.spec.module(N).map_err(|e| e.to_string())?;
        let h = height(&ms)?;
        for n in 1..=2 {
            let c = torsion_count(&ms, n, DEFAULT_DCAP).map_err(|e| e.to_string())?;
            let want = g.spec.p().pow(n * h);
            if c.weierstrass_degree != want {
                return Err(format!("{} n={n}: degree {} != {want}", g.name, c.weierstrass_degree));
            }
        }
        seen.push(format!("{}:{}", g.name, g.spec.p().pow(2 * h)));
    }
    Ok(format!("|F[p^2]| {}", seen.join(" ")))
}

fn division() -> Outcome {
    let good = division_round_trips(20_251_019, 25).map_err(|e| e.to_string())?;
    let desc = RingDescriptor::new(3, 1, 4).map_err(|e| e.to_string())?;
    let mut zero_ok = true;
    for q in [3usize, 9] {
        let mut c = vec![0i64; q + 1];
        c[1] = 3;
        c[q] = 1;
        let pi = Poly::from_ints(&desc, &c).to_series(9 * q);
        let dec = phi_basis_decompose(&TruncSeries1::zero(&desc, 9 * q), &pi, q).map_err(|e| e.to_string())?;
        zero_ok &= dec.components.iter().all(|a| a.is_zero());
    }
    check(good == 25 && zero_ok, format!("{good}/25 exact reconstructions, zero decomposes to zero: {zero_ok}"))
}

fn breaks() -> Outcome {
    let t0 = Instant::now();
    let n_prec = 11;
    if n_prec * 72 > DEFAULT_DCAP as u32 {
        return Err("N * 72 exceeds the cap".into());
    }
    let ms = GroupSpec::standard(3, 2, 2).module(n_prec).map_err(|e| e.to_string())?;
    let model = TorsionFieldModel::new(&ms, 2, DEFAULT_DCAP).map_err(|e| e.to_string())?;
    let t = ramification_breaks(&ms, &model, None).map_err(|e| e.to_string())?;
    let rows_ok = t.rows.iter().all(|r| match r.k {
        Some(k) => r.index == Valuation::Finite(9i64.pow(k)),
        None => r.index == Valuation::Infinite,
    });
    let ks: Vec<_> = t.rows.iter().filter_map(|r| r.k).collect();
    within(t0, Duration::from_secs(600), "breaks")?;
    check(
        t.ok() && rows_ok && ks.contains(&0) && ks.contains(&1) && t.jumps() == vec![1, 9],
        format!("e = {}, {} representatives, jumps {:?}, {:?}", t.e, t.rows.len(), t.jumps(), t0.elapsed()),
    )
}

struct Legs {
    name: &'static str,
    h: u32,
    f_f: usize,
    full: bool,
    assumption: Vec<bool>,
    tau: bool,
}

fn legs(name: &'static str, spec: &GroupSpec) -> Result<Legs, String> {
    let ms = spec.module(N).map_err(|e| e.to_string())?;
    let h = height(&ms)?;
    let mut assumption = Vec::new();
    for n in 1..=2 {
        let model = TorsionFieldModel::new(&ms, n, DEFAULT_DCAP).map_err(|e| e.to_string())?;
        assumption.push(assumption_check(&ms, &model).map_err(|e| format!("{name} n={n}: {e}"))?.holds);
    }
    let (d, ne) = endo_precision(spec.p(), h, N);
    let law = spec.law(ne, d).map_err(|e| e.to_string())?;
    let r = compute_endo_subfield(&law, h, d).map_err(|e| e.to_string())?;
    let tau = tau_infinity(&law, h, d).map_err(|e| e.to_string())?;
    let tau = match tau {
        Some(t) if !t.iterate_is_identity => return Err(format!("{name}: tau^(q-1) != X")),
        t => t.is_some(),
    };
    Ok(Legs { name, h, f_f: r.f_f, full: r.full_height, assumption, tau })
}

fn equivalence(all: &[Legs]) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for l in all {
        let agree = l.assumption.iter().all(|&a| a == l.full) && l.full == l.tau;
        ok &= agree;
        parts.push(format!("{}={}", l.name, if agree { l.full.to_string() } else { format!("{:?}/{}/{}", l.assumption, l.full, l.tau) }));
    }
    check(ok, parts.join(" "))
}

fn unit_orders(all: &[Legs]) -> Outcome {
    let mut parts = Vec::new();
    for l in all.iter().filter(|l| l.full) {
        let spec = &standard_corpus().into_iter().find(|g| g.name == l.name).unwrap().spec;
        let ms = spec.module(N).map_err(|e| e.to_string())?;
        let q = spec.p().pow(l.h);
        for n in 1..=2 {
            let o = unit_quotient_order(q, n).map_err(|e| e.to_string())?;
            let e = certify_torsion_degree(&ms, n, DEFAULT_DCAP).map_err(|e| e.to_string())?.e as u64;
            if o != e {
                return Err(format!("{} n={n}: order {o} != degree {e}", l.name));
            }
        }
        parts.push(l.name);
    }
    check(!parts.is_empty(), format!("full-height groups {}", parts.join(" ")))
}

fn commutants() -> Outcome {
    for m in 1..=4 {
        for n in 1..=4 {
            let r = commutant_dimension(&build_phi_zeta(m, n, 3).map_err(|e| e.to_string())?, 3);
            if r.dimension != n * n * m || !r.lifts_mod_p2 {
                return Err(format!("m={m} n={n}: dimension {}", r.dimension));
            }
        }
    }
    let mut total = 0;
    for m in 1..=3 {
        let (t, bad) = relations_exhaustive(m, 3);
        if bad != 0 {
            return Err(format!("m={m}: {bad} disagreements"));
        }
        total += t;
    }
    Ok(format!("n^2 m for m, n <= 4; {total} matrices over F_3 agree"))
}

fn mu_p() -> Outcome {
    let np = 5;
    let mut parts = Vec::new();
    for (name, spec, d_max) in [
        ("gm3", GroupSpec::Multiplicative { p: 3, f: 1 }, 1),
        ("gm5", GroupSpec::Multiplicative { p: 5, f: 1 }, 1),
        ("honda3", GroupSpec::Honda { p: 3, f: 1, u: vec![0, 1] }, 2),
        ("lt9", GroupSpec::standard(3, 2, 2), 2),
    ] {
        let ms = spec.module(np).map_err(|e| e.to_string())?;
        let model = TorsionFieldModel::new(&ms, 1, DEFAULT_DCAP).map_err(|e| e.to_string())?;
        let r = mu_p_membership(&model, d_max).map_err(|e| e.to_string())?;
        let floor = Valuation::Finite((np as i64 - 2) * model.e() as i64);
        if !r.member || r.witness_valuation.is_none_or(|v| v < floor) {
            return Err(format!("{name}: {r:?}"));
        }
        parts.push(format!("{name}:d={}", r.degree.unwrap_or(0)));
    }
    Ok(parts.join(" "))
}

/// Polygons and degrees for every group over `Z_p`; `f_F` where the base
/// field already realizes it. A group with `f < h` and `f_F = f` can gain
/// endomorphisms over the larger ring, so its `f_F` is reported only.
fn base_change(all: &[Legs]) -> Outcome {
    let mut parts = Vec::new();
    for g in standard_corpus().into_iter().filter(|g| g.spec.f() == 1) {
        let ms = g.spec.module(N).map_err(|e| e.to_string())?;
        let law = g.spec.law(N, 10).map_err(|e| e.to_string())?;
        let (_, ms2) = base_change_unramified(&law, &ms, 2).map_err(|e| e.to_string())?;
        for n in 1..=2 {
            let a = division_polynomial(&ms, n, DEFAULT_DCAP).map_err(|e| e.to_string())?;
            let b = division_polynomial(&ms2, n, DEFAULT_DCAP).map_err(|e| e.to_string())?;
            let (pa, pb) = (newton_polygon_of(&a.p_rel).map_err(|e| e.to_string())?, newton_polygon_of(&b.p_rel).map_err(|e| e.to_string())?);
            if pa.vertices != pb.vertices || a.degree() != b.degree() || a.full_degree != b.full_degree {
                return Err(format!("{} n={n}: {:?} vs {:?}", g.name, pa.vertices, pb.vertices));
            }
        }
        let before = all.iter().find(|l| l.name == g.name).unwrap();
        let h = before.h;
        let (d, ne) = endo_precision(g.spec.p(), h, N);
        let law2 = g.spec.with_f(2).law(ne, d).map_err(|e| e.to_string())?;
        let after = compute_endo_subfield(&law2, h, d).map_err(|e| e.to_string())?.f_f;
        if before.f_f == h as usize {
            if after != before.f_f {
                return Err(format!("{}: f_F {} -> {after}", g.name, before.f_f));
            }
            parts.push(format!("{}:f_F={after}", g.name));
        } else {
            parts.push(format!("{}:f_F {}->{after} (not applicable)", g.name, before.f_f));
        }
    }
    Ok(format!("polygons and degrees unchanged; {}", parts.join(" ")))
}

fn kernel_suites() -> Outcome {
    let t0 = Instant::now();
    common::run_reversion(100)?;
    common::run_log_exp(100)?;
    common::run_compose(100)?;
    within(t0, Duration::from_secs(30), "property suites")?;
    Ok(format!("3 x 100 seeded cases at D = 12, N = 6 in {:?}", t0.elapsed()))
}

fn main() {
    let corpus = standard_corpus();
    let all_legs: Result<Vec<Legs>, String> = corpus.par_iter().map(|g| legs(g.name, &g.spec)).collect();
    let with_legs = |f: fn(&[Legs]) -> Outcome| all_legs.as_ref().map_err(|e| e.clone()).and_then(|l| f(l));

    let plain: Vec<Criterion> = vec![
        (1, "degree law", degree_law),
        (2, "torsion cardinality", cardinality),
        (3, "division algorithm", division),
        (4, "ramification breaks", breaks),
        (7, "commutant dimensions", commutants),
        (8, "mu_p membership", mu_p),
        (10, "kernel round-trips", kernel_suites),
    ];
    let mut results: Vec<(u32, &str, Outcome)> = plain.into_par_iter().map(|(i, name, f)| (i, name, f())).collect();
    results.push((5, "three-way equivalence", with_legs(equivalence)));
    results.push((6, "unit quotient order", with_legs(unit_orders)));
    results.push((9, "base-change invariance", with_legs(base_change)));
    results.sort_by_key(|r| r.0);

    let mut failed = Vec::new();
    for (i, name, r) in &results {
        match r {
            Ok(msg) => println!("criterion {i:>2} PASS  {name}: {msg}"),
            Err(msg) => {
                println!("criterion {i:>2} FAIL  {name}: {msg}");
                failed.push(*i);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
