//! Does K(z) contain every p^n-torsion point? Yes for lt9, no for the
//! height-2 group over Z_3.
use fglab::corpus::GroupSpec;
use fglab::torsion::{assumption_check, TorsionFieldModel};
use fglab::weierstrass::DEFAULT_DCAP;

fn main() -> fglab::Result<()> {
    let groups = [
        ("lt9", GroupSpec::standard(3, 2, 2)),
        ("honda3", GroupSpec::Honda { p: 3, f: 1, u: vec![0, 1] }),
    ];
    for (name, spec) in groups {
        let ms = spec.module(3)?;
        for n in 1..=2 {
            let model = TorsionFieldModel::new(&ms, n, DEFAULT_DCAP)?;
            let c = assumption_check(&ms, &model)?;
            println!(
                "{name} n={n}: e={} roots in K(z)={} holds={} enumeration={:?}",
                c.e, c.root_count.roots, c.holds, c.enumeration.map(|e| e.distinct)
            );
        }
    }
    Ok(())
}
