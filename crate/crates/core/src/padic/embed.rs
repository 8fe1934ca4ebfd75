use std::sync::Arc;

use super::descriptor::RingDescriptor;
use super::residue::ResidueElem;
use super::ring::UnramifiedRingElem;
use crate::error::{Error, Result};

/// Evaluate an integer polynomial (degree ascending) at `x`.
fn eval_int_poly(coeffs: &[u64], x: &UnramifiedRingElem) -> UnramifiedRingElem {
    let desc = x.descriptor();
    let mut acc = UnramifiedRingElem::zero(desc);
    for &c in coeffs.iter().rev() {
        acc = acc.mul_unchecked(x).add_unchecked(&UnramifiedRingElem::from_int(desc, c as i64));
    }
    acc
}

fn eval_residue_poly(coeffs: &[u64], x: &ResidueElem) -> ResidueElem {
    let desc = x.descriptor();
    let mut acc = ResidueElem::zero(desc);
    for &c in coeffs.iter().rev() {
        let cc = ResidueElem::from_coeffs(desc, &[c]);
        acc = acc.checked_mul(x).unwrap().checked_add(&cc).unwrap();
    }
    acc
}

/// Hensel-lift a simple residue root of the integer polynomial `m`.
pub(crate) fn lift_root(
    desc: &Arc<RingDescriptor>,
    m: &[u64],
    root: &ResidueElem,
) -> Result<UnramifiedRingElem> {
    let deriv: Vec<u64> = m.iter().enumerate().skip(1).map(|(i, &c)| c * i as u64).collect();
    let mut x = UnramifiedRingElem::lift_residue(desc, root);
    let mut steps = 0;
    loop {
        let v = eval_int_poly(m, &x);
        if v.is_zero() {
            return Ok(x);
        }
        let dv = eval_int_poly(&deriv, &x).invert().map_err(|_| {
            Error::NonConvergence("residue root is not simple".into())
        })?;
        x = x.sub_unchecked(&v.mul_unchecked(&dv));
        steps += 1;
        if steps > 64 {
            return Err(Error::NonConvergence("Hensel lifting".into()));
        }
    }
}

/// The Frobenius automorphism of `W(F_{p^f})`: the ring map lifting `x -> x^p`.
#[derive(Clone, Debug)]
pub struct Frobenius {
    /// `sigma(alpha)^i` for `i < f`, where `alpha` is the class of the generator.
    images: Vec<UnramifiedRingElem>,
}

impl Frobenius {
    pub fn new(desc: &Arc<RingDescriptor>) -> Result<Self> {
        let f = desc.f();
        let mut gen = vec![0u64; f.max(2)];
        gen[1] = 1;
        let alpha = ResidueElem::from_coeffs(desc, &gen);
        let beta = lift_root(desc, desc.modulus(), &alpha.pow(desc.p() as u128))?;
        let mut images = Vec::with_capacity(f);
        let mut acc = UnramifiedRingElem::one(desc);
        for _ in 0..f {
            images.push(acc.clone());
            acc = acc.mul_unchecked(&beta);
        }
        Ok(Frobenius { images })
    }

    pub fn apply(&self, x: &UnramifiedRingElem) -> UnramifiedRingElem {
        apply_images(&self.images, x, x.descriptor())
    }

    /// `sigma^k(x)`.
    pub fn apply_pow(&self, x: &UnramifiedRingElem, k: usize) -> UnramifiedRingElem {
        let mut y = x.clone();
        for _ in 0..k % x.descriptor().f() {
            y = self.apply(&y);
        }
        y
    }
}

fn apply_images(
    images: &[UnramifiedRingElem],
    x: &UnramifiedRingElem,
    target: &Arc<RingDescriptor>,
) -> UnramifiedRingElem {
    let mut acc = UnramifiedRingElem::zero(target);
    for (&c, img) in x.coeffs().iter().zip(images) {
        if c != 0 {
            acc = acc.add_unchecked(&img.mul_int(c as i64));
        }
    }
    acc
}

/// The embedding `W(F_{p^f}) -> W(F_{p^{f'}})` for `f | f'`, sending the
/// generator to the Hensel lift of the smallest-index residue root of its
/// minimal polynomial.
#[derive(Clone, Debug)]
pub struct RingEmbedding {
    src: Arc<RingDescriptor>,
    dst: Arc<RingDescriptor>,
    images: Vec<UnramifiedRingElem>,
}

impl RingEmbedding {
    pub fn new(src: &Arc<RingDescriptor>, dst: &Arc<RingDescriptor>) -> Result<Self> {
        if src.p() != dst.p() {
            return Err(Error::DescriptorMismatch);
        }
        if !dst.f().is_multiple_of(src.f()) {
            return Err(Error::NotDivisor(src.f() as u64, dst.f() as u64));
        }
        if dst.precision() > src.precision() {
            return Err(Error::PrecisionInsufficient(
                "target precision exceeds source precision".into(),
            ));
        }
        let m = src.modulus();
        let root = ResidueElem::all(dst)
            .find(|r| eval_residue_poly(m, r).is_zero())
            .ok_or(Error::ReducibleModulus)?;
        let gamma = lift_root(dst, m, &root)?;
        let mut images = Vec::with_capacity(src.f());
        let mut acc = UnramifiedRingElem::one(dst);
        for _ in 0..src.f() {
            images.push(acc.clone());
            acc = acc.mul_unchecked(&gamma);
        }
        Ok(RingEmbedding { src: src.clone(), dst: dst.clone(), images })
    }

    pub fn source(&self) -> &Arc<RingDescriptor> {
        &self.src
    }

    pub fn target(&self) -> &Arc<RingDescriptor> {
        &self.dst
    }

    pub fn apply(&self, x: &UnramifiedRingElem) -> UnramifiedRingElem {
        apply_images(&self.images, x, &self.dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::teichmuller_lift;

    #[test]
    fn frobenius_is_a_ring_map_lifting_p_power() {
        let d = RingDescriptor::new(3, 2, 5).unwrap();
        let fr = Frobenius::new(&d).unwrap();
        let xs: Vec<_> = (0..20i64)
            .map(|i| UnramifiedRingElem::from_coeffs(&d, &[i * 7 + 1, i * i + 2]))
            .collect();
        for a in &xs {
            assert_eq!(fr.apply(a).residue(), a.residue().pow(3));
            assert_eq!(fr.apply_pow(a, 2), *a);
            for b in &xs {
                assert_eq!(fr.apply(&(a * b)), &fr.apply(a) * &fr.apply(b));
            }
        }
        for r in ResidueElem::all(&d) {
            let w = teichmuller_lift(&d, &r);
            assert_eq!(fr.apply(&w), w.pow(3));
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let s = RingDescriptor::new(3, 2, 4).unwrap();
        let t = RingDescriptor::new(3, 4, 4).unwrap();
        let e = RingEmbedding::new(&s, &t).unwrap();
        let xs: Vec<_> = (0..12i64)
            .map(|i| UnramifiedRingElem::from_coeffs(&s, &[i * 5 + 2, 3 * i + 1]))
            .collect();
        for a in &xs {
            for b in &xs {
                assert_eq!(e.apply(&(a * b)), &e.apply(a) * &e.apply(b));
                assert_eq!(e.apply(&(a + b)), &e.apply(a) + &e.apply(b));
            }
        }
        let z = RingDescriptor::new(3, 1, 4).unwrap();
        let e1 = RingEmbedding::new(&z, &s).unwrap();
        let seven = UnramifiedRingElem::from_int(&z, 7);
        assert_eq!(e1.apply(&seven), UnramifiedRingElem::from_int(&s, 7));
        assert!(RingEmbedding::new(&s, &RingDescriptor::new(3, 3, 4).unwrap()).is_err());
    }
}
