//! Lubin-Tate law for [3] = 3X + X^3 and its module structure.
use fglab::formal_group::{lubin_tate_group, FrobeniusSeries, ASSOC_CHECK_DEGREE};
use fglab::padic::RingDescriptor;
use fglab::report::render_law;

fn main() -> fglab::Result<()> {
    let desc = RingDescriptor::new(3, 1, 6)?;
    let fs = FrobeniusSeries::standard(&desc, 1)?;
    let (law, ms) = lubin_tate_group(&fs, 12)?;
    law.check_axioms(ASSOC_CHECK_DEGREE)?;
    println!("F = {}", render_law(&law, 5));
    println!("height {}", ms.height(4)?);
    println!("[3](X) = {:?}", ms.p_series(10)?);
    println!("[-1](X) = {:?}", law.negation());
    Ok(())
}
