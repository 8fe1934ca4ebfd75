//! Truncated power series: composition, reversion, log/exp of G_m.
use fglab::formal_group::FormalGroupLaw;
use fglab::padic::RingDescriptor;
use fglab::series::TruncSeries1;

fn main() -> fglab::Result<()> {
    let desc = RingDescriptor::new(3, 1, 6)?;
    let d = 10;
    // g = X + X^2 - 2X^3
    let g = TruncSeries1::from_coeffs(&desc, d, [0, 1, 1, -2].iter().map(|&k| fglab::padic::UnramifiedRingElem::from_int(&desc, k)).collect());
    let r = g.reversion()?;
    println!("g      = {g:?}");
    println!("g^-1   = {r:?}");
    println!("g(g^-1) = {:?}", g.compose(&r)?);

    let law = FormalGroupLaw::multiplicative(&desc, d);
    let log = law.logarithm();
    let exp = law.exponential()?;
    println!("log_Gm = {log:?}");
    println!("exp(log) = {:?}", exp.compose(log)?);
    Ok(())
}
