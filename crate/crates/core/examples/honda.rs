//! A height-2 group over Z_3 from the functional equation with u = (0, 1).
use fglab::formal_group::{honda_group, honda_logarithm, ActionSource, ModuleStructure, ASSOC_CHECK_DEGREE};
use fglab::padic::{RingDescriptor, UnramifiedRingElem};
use fglab::report::render_law;

fn main() -> fglab::Result<()> {
    let desc = RingDescriptor::new(3, 1, 5)?;
    let u: Vec<_> = [0, 1].iter().map(|&k| UnramifiedRingElem::from_int(&desc, k)).collect();
    println!("log = {:?}", honda_logarithm(&desc, &u, 19)?);
    let law = honda_group(&desc, &u, 12)?;
    law.check_axioms(ASSOC_CHECK_DEGREE)?;
    println!("F = {}", render_law(&law, 4));
    let ms = ModuleStructure::new(&desc, 1, ActionSource::Honda(u))?;
    println!("height {}", ms.height(4)?);
    Ok(())
}
