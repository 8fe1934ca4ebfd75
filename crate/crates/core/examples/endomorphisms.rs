//! Which Teichmuller scalars act on the law, and the order q-1 automorphism.
use fglab::corpus::GroupSpec;
use fglab::endo::{compute_endo_subfield, tau_infinity};
use fglab::report::endo_precision;

fn main() -> fglab::Result<()> {
    for (name, spec) in [
        ("lt9", GroupSpec::standard(3, 2, 2)),
        ("honda3", GroupSpec::Honda { p: 3, f: 1, u: vec![0, 1] }),
        ("honda9", GroupSpec::Honda { p: 3, f: 2, u: vec![0, 1] }),
    ] {
        let (d, n) = endo_precision(3, 2, 3);
        let law = spec.law(n, d)?;
        let r = compute_endo_subfield(&law, 2, d)?;
        for c in &r.candidates {
            println!("{name}: degree {} endomorphism={} obstruction={:?}", c.degree, c.endomorphism, c.obstruction_degree);
        }
        let tau = tau_infinity(&law, 2, d)?;
        println!("{name}: f_F={} full height={} tau^(q-1) = X: {:?}", r.f_f, r.full_height, tau.map(|t| t.iterate_is_identity));
    }
    Ok(())
}
