mod common;

use common::*;
use fglab::corpus::{standard_corpus, GroupSpec};
use fglab::endo::{compute_endo_subfield, try_endomorphism, c_map, EndoOutcome};
use fglab::formal_group::{base_change_unramified, lubin_tate_group, FrobeniusSeries, Height, Scalar};
use fglab::padic::{ResidueElem, teichmuller_lift, Valuation};
use fglab::report::endo_precision;
use fglab::series::{Poly, TruncSeries1};
use fglab::torsion::{newton_polygon_of, TorsionFieldModel};
use fglab::weierstrass::{division_polynomial, phi_basis_decompose, phi_reconstruct, weierstrass_prep, PhiDecomposition, DEFAULT_DCAP};
use proptest::prelude::*;

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn module_axioms(a in -20i64..20, b in -20i64..20, t in 1u64..9) {
        let d = desc(3, 2, 5);
        let fs = FrobeniusSeries::standard(&d, 2).unwrap();
        let (law, ms) = lubin_tate_group(&fs, 10).unwrap();
        let w = Scalar::Teichmuller(ResidueElem::from_index(&d, t));
        prop_assert!(ms.check_axioms(&law, &Scalar::Int(a), &Scalar::Int(b)).is_ok());
        prop_assert!(ms.check_axioms(&law, &w, &Scalar::Int(b)).is_ok());
        let s = ms.action_series(&w, 10).unwrap().into_result().unwrap();
        prop_assert_eq!(c_map(&s).unwrap(), teichmuller_lift(s.descriptor(), &ResidueElem::from_index(s.descriptor(), t)));
    }

    /// `f = P U`, `P` monic distinguished, `U(0)` a unit.
    #[test]
    fn weierstrass_preparation(v in prop::collection::vec(-300i64..300, 14), k in 1usize..5, u in 1i64..50) {
        let d = desc(3, 1, 5);
        let mut v = v;
        for c in v.iter_mut().take(k) {
            *c *= 3;
        }
        v[k] = 3 * u + 1;
        let f = series(&d, 14, &v);
        let w = weierstrass_prep(&f).unwrap();
        prop_assert_eq!(w.degree, k);
        prop_assert!(w.p.is_monic() && w.p.degree() == Some(k));
        prop_assert!(w.p.coeffs()[..k].iter().all(|c| !c.is_unit()));
        prop_assert!(w.u.coeff(0).is_unit());
        let pu = w.p.to_series(w.u.trunc()).checked_mul(&w.u).unwrap();
        prop_assert_eq!(pu, f.truncate(w.u.trunc()).unwrap().to_precision(&w.u.descriptor().clone()).unwrap());
    }

    /// Decomposition inverts reconstruction both ways.
    #[test]
    fn phi_decomposition_two_sided(v in prop::collection::vec(0i64..81, 27), nine in any::<bool>()) {
        let d = desc(3, 1, 4);
        let q = if nine { 9 } else { 3 };
        let mut c = vec![0i64; q + 1];
        c[1] = 3;
        c[q] = 1;
        let pi = Poly::from_ints(&d, &c).to_series(9 * q);
        let dp = 9;
        let components: Vec<_> = (0..q).map(|i| series(&d, dp, &v.iter().cycle().skip(i).take(dp).copied().collect::<Vec<_>>())).collect();
        let dec = PhiDecomposition { components: components.clone(), component_trunc: dp, window: q * dp, rounds: 0 };
        let f = phi_reconstruct(&dec, &pi).unwrap();
        let again = phi_basis_decompose(&f, &pi, q).unwrap();
        prop_assert_eq!(&again.components, &components);
        prop_assert_eq!(phi_reconstruct(&again, &pi).unwrap(), f);
    }

    #[test]
    fn model_valuation_is_additive(a in prop::collection::vec(-9i64..9, 4), b in prop::collection::vec(-9i64..9, 4), i in 0usize..4, j in 0usize..4) {
        let ms = GroupSpec::standard(3, 1, 1).module(4).unwrap();
        let model = TorsionFieldModel::new(&ms, 2, DEFAULT_DCAP).unwrap();
        let d = model.descriptor().clone();
        let mk = |c: &[i64], s: usize| {
            let x = model.from_coeffs(&c.iter().map(|&k| fglab::padic::UnramifiedRingElem::from_int(&d, k)).collect::<Vec<_>>()).unwrap();
            model.mul(&x, &model.monomial(s))
        };
        let (x, y) = (mk(&a, i), mk(&b, j));
        if let (Valuation::Finite(vx), Valuation::Finite(vy)) = (model.valuation(&x), model.valuation(&y)) {
            if vx + vy < model.valuation_cap() {
                prop_assert_eq!(model.valuation(&model.mul(&x, &y)), Valuation::Finite(vx + vy));
            }
        }
    }
}

#[test]
fn lubin_tate_height_is_scalar_degree() {
    for (p, f, d) in [(3, 1, 1), (3, 2, 2), (5, 1, 1), (3, 3, 3)] {
        let ms = GroupSpec::standard(p, f, d).module(3).unwrap();
        assert_eq!(ms.height(4).unwrap(), Height::Finite(d as u32));
    }
}

/// Degrees of the division polynomials telescope to the torsion order.
#[test]
fn division_degrees_telescope() {
    for g in standard_corpus() {
        let ms = g.spec.module(3).unwrap();
        let h = ms.height(4).unwrap().finite().unwrap();
        let q = g.spec.p().pow(h) as usize;
        let total: usize = (1..=2).map(|n| division_polynomial(&ms, n, DEFAULT_DCAP).unwrap().degree()).sum();
        assert_eq!(total + 1, q * q, "{}", g.name);
    }
}

#[test]
fn base_change_keeps_polygons() {
    for g in standard_corpus().into_iter().filter(|g| g.spec.f() == 1) {
        let ms = g.spec.module(3).unwrap();
        let law = g.spec.law(3, 10).unwrap();
        let (law2, ms2) = base_change_unramified(&law, &ms, 2).unwrap();
        assert!(law2.check_axioms(8).is_ok());
        for n in 1..=2 {
            let a = newton_polygon_of(&division_polynomial(&ms, n, DEFAULT_DCAP).unwrap().p_rel).unwrap();
            let b = newton_polygon_of(&division_polynomial(&ms2, n, DEFAULT_DCAP).unwrap().p_rel).unwrap();
            assert_eq!(a.vertices, b.vertices, "{} n={n}", g.name);
        }
    }
}

/// The same `f_F` at two working sizes, and the successful coefficients
/// are closed under sums and products.
#[test]
fn endo_subfield_is_stable_and_closed() {
    for spec in [GroupSpec::standard(3, 2, 2), GroupSpec::Honda { p: 3, f: 1, u: vec![0, 1] }] {
        let (d, n) = endo_precision(3, 2, 3);
        let a = compute_endo_subfield(&spec.law(n, d).unwrap(), 2, d).unwrap();
        let b = compute_endo_subfield(&spec.law(n + 1, d + 6).unwrap(), 2, d + 6).unwrap();
        assert_eq!(a.f_f, b.f_f, "{spec}");
    }
    let spec = GroupSpec::standard(3, 2, 2);
    let (d, n) = endo_precision(3, 2, 3);
    let law = spec.law(n, d).unwrap();
    let desc = law.descriptor().clone();
    let w = teichmuller_lift(&desc, &ResidueElem::primitive(&desc));
    let samples = [w.clone(), w.pow(3), w.checked_add(&w.pow(2)).unwrap(), w.checked_mul(&w.pow(5)).unwrap().checked_add(&fglab::padic::UnramifiedRingElem::from_int(&desc, 3)).unwrap()];
    for a in &samples {
        match try_endomorphism(&law, a, d).unwrap() {
            EndoOutcome::Endomorphism(c) => {
                assert!(c.commutes);
                assert_eq!(c_map(&c.series).unwrap(), a.to_precision(c.series.descriptor()).unwrap());
            }
            EndoOutcome::Obstructed { degree } => panic!("{a:?} obstructed at {degree}"),
        }
    }
}

#[test]
fn unramified_scalar_is_not_an_endomorphism_of_gm() {
    let spec = GroupSpec::Multiplicative { p: 3, f: 2 };
    let (d, n) = endo_precision(3, 1, 3);
    let law = spec.law(n, d).unwrap();
    let desc = law.descriptor().clone();
    let w = teichmuller_lift(&desc, &ResidueElem::primitive(&desc));
    assert!(matches!(try_endomorphism(&law, &w, d).unwrap(), EndoOutcome::Obstructed { .. }));
    let x = TruncSeries1::x(&desc, d);
    assert!(law.is_endomorphism(&x).unwrap());
}
