//! The block matrix of `[zeta]` on a torsion basis, its commutant, and
//! order bookkeeping for unit quotients.

use serde::Serialize;

use crate::error::{Error, Result};

/// Square matrix over `Z / modulus`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matrix {
    pub size: usize,
    pub modulus: u64,
    pub rows: Vec<Vec<u64>>,
}

impl Matrix {
    pub fn zero(size: usize, modulus: u64) -> Self {
        Matrix { size, modulus, rows: vec![vec![0; size]; size] }
    }

    pub fn identity(size: usize, modulus: u64) -> Self {
        let mut m = Self::zero(size, modulus);
        for i in 0..size {
            m.rows[i][i] = 1 % modulus;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, modulus: u64) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::Mismatch("matrix is not square".into()));
        }
        let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x % modulus).collect()).collect();
        Ok(Matrix { size, modulus, rows })
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        let n = self.size;
        let md = self.modulus as u128;
        let mut out = Self::zero(n, self.modulus);
        for i in 0..n {
            for k in 0..n {
                let a = self.rows[i][k] as u128;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.rows[i][j] = ((out.rows[i][j] as u128 + a * o.rows[k][j] as u128) % md) as u64;
                }
            }
        }
        out
    }

    pub fn pow(&self, mut k: u64) -> Matrix {
        let mut r = Self::identity(self.size, self.modulus);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            k >>= 1;
        }
        r
    }
}

/// `m x m` cyclic permutation: `e_j -> e_{j+1}`, first row `(0, ..., 0, 1)`.
pub fn cyclic_permutation(m: usize, modulus: u64) -> Matrix {
    let mut a = Matrix::zero(m, modulus);
    for i in 0..m {
        a.rows[i][(i + m - 1) % m] = 1 % modulus;
    }
    a
}

/// `phi([zeta])`: `n x n` blocks, the cyclic permutation on the diagonal.
#[derive(Clone, Debug, Serialize)]
pub struct BlockMatrixSpec {
    /// `f_F / f_pi`.
    pub m: usize,
    /// `h / f_F`.
    pub n: usize,
    pub matrix: Matrix,
}

impl BlockMatrixSpec {
    pub fn relative_height(&self) -> usize {
        self.m * self.n
    }
}

pub fn build_phi_zeta(m: usize, n: usize, modulus: u64) -> Result<BlockMatrixSpec> {
    if m == 0 || n == 0 {
        return Err(Error::Precondition("block sizes must be positive".into()));
    }
    let a = cyclic_permutation(m, modulus);
    let mut big = Matrix::zero(m * n, modulus);
    for b in 0..n {
        for i in 0..m {
            for j in 0..m {
                big.rows[b * m + i][b * m + j] = a.rows[i][j];
            }
        }
    }
    Ok(BlockMatrixSpec { m, n, matrix: big })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub commutes: bool,
    pub circulant: bool,
}

impl RelationCheck {
    pub fn agree(&self) -> bool {
        self.commutes == self.circulant
    }
}

/// `AY = YA` for the cyclic permutation `A`, and separately whether
/// `y_{1,1+i} = y_{2,2+i} = ...` for every shift `i`.
pub fn check_relations(y: &Matrix) -> RelationCheck {
    let m = y.size;
    let a = cyclic_permutation(m, y.modulus);
    let commutes = a.mul(y) == y.mul(&a);
    let circulant = (0..m).all(|i| (0..m).all(|r| y.rows[r][(r + i) % m] == y.rows[0][i]));
    RelationCheck { commutes, circulant }
}

/// Every `m x m` matrix over `F_p`; returns (matrices checked, disagreements).
pub fn relations_exhaustive(m: usize, p: u64) -> (u64, u64) {
    let cells = (m * m) as u32;
    let total = p.pow(cells);
    let mut bad = 0;
    for idx in 0..total {
        let mut k = idx;
        let mut rows = vec![vec![0; m]; m];
        for c in 0..m * m {
            rows[c / m][c % m] = k % p;
            k /= p;
        }
        let y = Matrix { size: m, modulus: p, rows };
        if !check_relations(&y).agree() {
            bad += 1;
        }
    }
    (total, bad)
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutantReport {
    pub m: usize,
    pub n: usize,
    pub dimension: usize,
    /// `n^2 m`.
    pub bound: usize,
    /// The unit-pivot rank modulo `p^2` equals the rank modulo `p`, and
    /// nothing survives beyond it.
    pub lifts_mod_p2: bool,
}

/// Unit-pivot rank of a matrix over `Z / p^k`, and whether the leftover
/// block vanishes (so the rank is the same over the fraction field).
fn unit_rank(mut rows: Vec<Vec<u64>>, p: u64, pk: u64) -> (usize, bool) {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else { continue };
        rows.swap(rank, piv);
        let inv = inverse_mod(rows[rank][c], pk);
        for x in rows[rank].iter_mut() {
            *x = (*x as u128 * inv as u128 % pk as u128) as u64;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] as u128;
                for j in 0..cols {
                    let sub = f * rows[rank][j] as u128 % pk as u128;
                    rows[r][j] = ((rows[r][j] as u128 + pk as u128 - sub) % pk as u128) as u64;
                }
            }
        }
        rank += 1;
    }
    let clean = rows[rank..].iter().all(|r| r.iter().all(|&x| x == 0));
    (rank, clean)
}

fn inverse_mod(a: u64, m: u64) -> u64 {
    let (mut t, mut nt, mut r, mut nr) = (0i128, 1i128, m as i128, a as i128);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    t.rem_euclid(m as i128) as u64
}

/// Dimension of `{X : X phi = phi X}`. Unknowns `x_{ij}` are ordered
/// reverse-lexicographically (column index first).
pub fn commutant_dimension(spec: &BlockMatrixSpec, p: u64) -> CommutantReport {
    let h = spec.relative_height();
    let phi = |i: usize, j: usize| spec.matrix.rows[i][j];
    let var = |i: usize, j: usize| j * h + i;
    let system = |pk: u64| {
        let mut rows = Vec::with_capacity(h * h);
        for i in 0..h {
            for j in 0..h {
                // (X phi - phi X)_{ij} = sum_k x_{ik} phi_{kj} - phi_{ik} x_{kj}
                let mut row = vec![0u64; h * h];
                for k in 0..h {
                    row[var(i, k)] = (row[var(i, k)] + phi(k, j)) % pk;
                    row[var(k, j)] = (row[var(k, j)] + pk - phi(i, k) % pk) % pk;
                }
                rows.push(row);
            }
        }
        rows
    };
    let (rank, _) = unit_rank(system(p), p, p);
    let (rank2, clean2) = unit_rank(system(p * p), p, p * p);
    CommutantReport {
        m: spec.m,
        n: spec.n,
        dimension: h * h - rank,
        bound: spec.n * spec.n * spec.m,
        lifts_mod_p2: rank2 == rank && clean2,
    }
}

/// `#(U_0 / U_n) = (q - 1) q^{n-1}` for a residue field of size `q`.
pub fn unit_quotient_order(q: u64, n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    q.checked_pow(n - 1)
        .and_then(|x| x.checked_mul(q - 1))
        .ok_or_else(|| Error::Precondition("order overflows".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        assert_eq!(build_phi_zeta(1, 1, 9).unwrap().matrix.rows, vec![vec![1]]);
        assert_eq!(build_phi_zeta(2, 1, 9).unwrap().matrix.rows, vec![vec![0, 1], vec![1, 0]]);
        let s = build_phi_zeta(3, 2, 9).unwrap();
        assert_eq!(s.matrix.pow(3), Matrix::identity(6, 9));
        assert_eq!(s.matrix.rows[0], vec![0, 0, 1, 0, 0, 0]);
        assert!(s.matrix.rows[0][3..].iter().chain(&s.matrix.rows[4][..3]).all(|&x| x == 0));
    }

    #[test]
    fn relations() {
        let y = Matrix::identity(2, 3);
        assert_eq!(check_relations(&y), RelationCheck { commutes: true, circulant: true });
        let y = Matrix::from_rows(vec![vec![1, 2], vec![2, 1]], 9).unwrap();
        assert!(check_relations(&y).commutes);
        let y = Matrix::from_rows(vec![vec![1, 2], vec![3, 4]], 9).unwrap();
        assert_eq!(check_relations(&y), RelationCheck { commutes: false, circulant: false });
        assert_eq!(relations_exhaustive(2, 3), (81, 0));
    }

    #[test]
    fn dimensions() {
        let r = commutant_dimension(&build_phi_zeta(2, 2, 9).unwrap(), 3);
        assert_eq!((r.dimension, r.bound), (8, 8));
        assert!(r.lifts_mod_p2);
        assert_eq!(commutant_dimension(&build_phi_zeta(1, 3, 9).unwrap(), 3).dimension, 9);
        assert_eq!(commutant_dimension(&build_phi_zeta(3, 1, 9).unwrap(), 3).dimension, 3);
    }

    #[test]
    fn unit_orders() {
        assert_eq!(unit_quotient_order(9, 2).unwrap(), 72);
        assert_eq!(unit_quotient_order(3, 1).unwrap(), 2);
        assert_eq!(unit_quotient_order(25, 3).unwrap(), 15000);
    }
}
