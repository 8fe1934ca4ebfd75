//! Is zeta_p in the maximal unramified extension of K(F[p])?
use fglab::corpus::GroupSpec;
use fglab::torsion::{mu_p_membership, TorsionFieldModel};
use fglab::weierstrass::DEFAULT_DCAP;

fn main() -> fglab::Result<()> {
    let groups = [
        ("G_m, p=3", GroupSpec::Multiplicative { p: 3, f: 1 }),
        ("G_m, p=5", GroupSpec::Multiplicative { p: 5, f: 1 }),
        ("height 2, p=3", GroupSpec::Honda { p: 3, f: 1, u: vec![0, 1] }),
    ];
    for (name, spec) in groups {
        let model = TorsionFieldModel::new(&spec.module(5)?, 1, DEFAULT_DCAP)?;
        let r = mu_p_membership(&model, 2)?;
        println!("{name}: member={} after degree {:?}, v_L(y^(p-1) + p) = {:?}", r.member, r.degree, r.witness_valuation);
    }
    Ok(())
}
