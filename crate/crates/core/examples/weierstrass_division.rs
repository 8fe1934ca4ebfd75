//! Weierstrass preparation and decomposition along powers of X over [p].
use fglab::padic::{RingDescriptor, UnramifiedRingElem};
use fglab::series::{Poly, TruncSeries1};
use fglab::weierstrass::{phi_basis_decompose, phi_reconstruct, weierstrass_prep};

fn main() -> fglab::Result<()> {
    let desc = RingDescriptor::new(3, 1, 4)?;
    // 3 + 3X + X^2 + X^5 has Weierstrass degree 2
    let f = TruncSeries1::from_coeffs(&desc, 12, [3, 3, 1, 0, 0, 1].iter().map(|&k| UnramifiedRingElem::from_int(&desc, k)).collect());
    let w = weierstrass_prep(&f)?;
    println!("P = {:?}\nU = {:?}", w.p, w.u);

    let q = 3;
    let pi = Poly::from_ints(&desc, &[0, 3, 0, 1]).to_series(9 * q);
    let g = TruncSeries1::from_coeffs(&desc, 9 * q, (0..9 * q as i64).map(|k| UnramifiedRingElem::from_int(&desc, k * k + 1)).collect());
    let dec = phi_basis_decompose(&g, &pi, q)?;
    for (i, a) in dec.components.iter().enumerate() {
        println!("a_{i} = {a:?}");
    }
    let back = phi_reconstruct(&dec, &pi)?;
    println!("exact on X^{}: {}", dec.window, back == g.truncate(dec.window)?);
    Ok(())
}
