//! Commutants of the block matrices phi([zeta]) over Z/3 and Z/9.
use fglab::matrix::{build_phi_zeta, check_relations, commutant_dimension, cyclic_permutation, relations_exhaustive, Matrix};

fn main() -> fglab::Result<()> {
    for m in 1..=4 {
        let dims: Vec<_> = (1..=4).map(|n| build_phi_zeta(m, n, 3).map(|s| commutant_dimension(&s, 3).dimension)).collect::<Result<_, _>>()?;
        println!("m={m}: commutant dimensions for n=1..4: {dims:?}");
    }
    let a = cyclic_permutation(3, 3);
    println!("A^3 = I: {}", a.pow(3) == Matrix::identity(3, 3));
    let y = Matrix::from_rows(vec![vec![1, 2, 0], vec![0, 1, 2], vec![2, 0, 1]], 3)?;
    println!("{:?}", check_relations(&y));
    for m in 1..=3 {
        let (total, bad) = relations_exhaustive(m, 3);
        println!("m={m}: {total} matrices, {bad} disagreements");
    }
    Ok(())
}
