#![allow(dead_code)]

use std::sync::Arc;

use fglab::formal_group::{lubin_tate_group, FormalGroupLaw, FrobeniusSeries};
use fglab::padic::{RingDescriptor, UnramifiedRingElem};
use fglab::series::{Poly, TruncSeries1};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

pub type R = UnramifiedRingElem;

pub const SEED: u64 = 0x5eed;
pub const D: usize = 12;
pub const N: u32 = 6;

pub fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

pub fn desc(p: u64, f: usize, n: u32) -> Arc<RingDescriptor> {
    RingDescriptor::new(p, f, n).unwrap()
}

pub fn ring_elem(desc: &Arc<RingDescriptor>, digits: &[i64]) -> R {
    R::from_coeffs(desc, &digits[..desc.f()])
}

pub fn series(desc: &Arc<RingDescriptor>, d: usize, coeffs: &[i64]) -> TruncSeries1<R> {
    TruncSeries1::from_coeffs(desc, d, coeffs.iter().take(d).map(|&k| R::from_int(desc, k)).collect())
}

/// `X`-adic coefficients, constant term zero.
pub fn no_constant() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-500i64..500, D).prop_map(|mut v| {
        v[0] = 0;
        v
    })
}

/// Constant term zero, linear term a unit mod 3.
pub fn admissible() -> impl Strategy<Value = Vec<i64>> {
    (no_constant(), 0i64..100).prop_map(|(mut v, u)| {
        v[1] = 3 * u + 1 + (u % 2);
        v
    })
}

/// `[p] = pX + p(a_2 X^2 + ... + a_{p-1} X^{p-1}) + X^p` at `p` in {3, 5}.
pub fn lubin_tate_params() -> impl Strategy<Value = (u64, Vec<i64>)> {
    prop_oneof![Just(3u64), Just(5u64)].prop_flat_map(|p| (Just(p), prop::collection::vec(-40i64..40, p as usize - 2)))
}

pub fn lubin_tate_law(p: u64, a: &[i64]) -> FormalGroupLaw {
    let d = desc(p, 1, N);
    let mut c = vec![0i64; p as usize + 1];
    c[1] = p as i64;
    for (i, &ai) in a.iter().enumerate() {
        c[i + 2] = p as i64 * ai;
    }
    c[p as usize] = 1;
    let fs = FrobeniusSeries::new(Poly::from_ints(&d, &c), 1).unwrap();
    lubin_tate_group(&fs, D).unwrap().0
}

pub fn reversion_round_trip(v: &[i64]) -> Result<(), TestCaseError> {
    let d = desc(3, 1, N);
    let f = series(&d, D, v);
    let g = f.reversion().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let x = TruncSeries1::x(&d, D);
    prop_assert_eq!(f.compose(&g).unwrap(), x.clone());
    prop_assert_eq!(g.compose(&f).unwrap(), x);
    Ok(())
}

pub fn compose_associative(a: &[i64], b: &[i64], c: &[i64]) -> Result<(), TestCaseError> {
    let d = desc(3, 1, N);
    let (f, g, h) = (series(&d, D, a), series(&d, D, b), series(&d, D, c));
    let left = f.compose(&g).unwrap().compose(&h).unwrap();
    let right = f.compose(&g.compose(&h).unwrap()).unwrap();
    prop_assert_eq!(left, right);
    Ok(())
}

/// `exp(log X) = X` and `log(exp X) = X`. The exponential's degree-`j`
/// coefficient has valuation at least `-j/(p-1)`, so that coefficient of
/// either composite is owed `N - floor(j/(p-1))` digits.
pub fn log_exp_round_trip(p: u64, a: &[i64]) -> Result<(), TestCaseError> {
    let law = lubin_tate_law(p, a);
    let d = law.descriptor().clone();
    let log = law.logarithm();
    let exp = law.exponential().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let x = TruncSeries1::x(&d, D).to_scaled();
    for (name, s) in [("exp(log X)", exp.compose(log).unwrap()), ("log(exp X)", log.compose(&exp).unwrap())] {
        for j in 0..D {
            let owed = N as i64 - (j as u64 / (p - 1)) as i64;
            let c = s.coeff(j);
            prop_assert!(c.absolute_precision() >= owed, "{} degree {}: {} digits", name, j, c.absolute_precision());
            prop_assert!(c.eq_mod(x.coeff(j), owed), "{} degree {}: {:?}", name, j, c);
        }
    }
    Ok(())
}

pub fn run_reversion(cases: u32) -> Result<(), String> {
    TestRunner::new(config(cases)).run(&admissible(), |v| reversion_round_trip(&v)).map_err(|e| e.to_string())
}

pub fn run_log_exp(cases: u32) -> Result<(), String> {
    TestRunner::new(config(cases)).run(&lubin_tate_params(), |(p, a)| log_exp_round_trip(p, &a)).map_err(|e| e.to_string())
}

pub fn run_compose(cases: u32) -> Result<(), String> {
    TestRunner::new(config(cases))
        .run(&(no_constant(), no_constant(), no_constant()), |(a, b, c)| compose_associative(&a, &b, &c))
        .map_err(|e| e.to_string())
}
