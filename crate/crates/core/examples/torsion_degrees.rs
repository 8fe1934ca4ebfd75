//! Division polynomials and Newton polygons over the standard corpus.
use fglab::corpus::standard_corpus;
use fglab::torsion::{certify_torsion_degree, torsion_count};
use fglab::weierstrass::DEFAULT_DCAP;

fn main() -> fglab::Result<()> {
    for g in standard_corpus() {
        let ms = g.spec.module(3)?;
        for n in 1..=2 {
            let c = certify_torsion_degree(&ms, n, DEFAULT_DCAP)?;
            let k = torsion_count(&ms, n, DEFAULT_DCAP)?;
            println!(
                "{:<7} n={n} e={:<3} vertices={:?} |F[p^n]|={}",
                g.name, c.e, c.polygon.vertices, k.weierstrass_degree
            );
        }
    }
    Ok(())
}
