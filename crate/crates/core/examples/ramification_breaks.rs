//! Lower ramification breaks of K(F[9^2])/K for pX + X^9 over W(F_9).
use fglab::corpus::GroupSpec;
use fglab::torsion::{ramification_breaks, TorsionFieldModel};
use fglab::weierstrass::DEFAULT_DCAP;

fn main() -> fglab::Result<()> {
    let ms = GroupSpec::standard(3, 2, 2).module(11)?;
    let model = TorsionFieldModel::new(&ms, 2, DEFAULT_DCAP)?;
    let t = ramification_breaks(&ms, &model, None)?;
    for r in &t.rows {
        println!("k={:?} digit={:?} v_L([u]z - z)={} expected={}", r.k, r.digit, r.index, r.expected);
    }
    println!("jumps {:?}, all rows agree: {}", t.jumps(), t.ok());
    Ok(())
}
