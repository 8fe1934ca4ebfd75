//! Arithmetic in W(F_9) mod 3^5: Teichmuller lifts, inverses, Frobenius.
use fglab::padic::{teichmuller_lift, Frobenius, ResidueElem, RingDescriptor, ScaledFieldElem, UnramifiedRingElem};

fn main() -> fglab::Result<()> {
    let desc = RingDescriptor::new(3, 2, 5)?;
    println!("{desc:?}");

    let g = ResidueElem::primitive(&desc);
    let w = teichmuller_lift(&desc, &g);
    println!("omega = {w:?}, order of residue = {}", g.order()?);
    println!("omega^8 == 1: {}", w.pow(8).is_one());

    let x = UnramifiedRingElem::from_coeffs(&desc, &[2, 1]);
    let y = x.invert()?;
    println!("x = {x:?}, x^-1 = {y:?}, x*x^-1 = {:?}", x.checked_mul(&y)?);

    let frob = Frobenius::new(&desc)?;
    println!("sigma(omega) = omega^3: {}", frob.apply(&w) == w.pow(3));

    // 1/3 has valuation -1 and keeps its relative precision
    let third = ScaledFieldElem::from_ratio(&desc, 1, 3)?;
    println!("1/3: valuation {}, relative precision {}", third.valuation(), third.relative_precision());
    Ok(())
}
