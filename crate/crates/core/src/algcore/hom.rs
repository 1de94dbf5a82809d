use super::FiniteAlgebra;
use crate::modring::{axpy, ReducedMatrix, RingElem};

/// A `k`-linear map given by the images of the source basis (ambient
/// vectors of the target).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    pub images: Vec<Vec<RingElem>>,
}

impl Homomorphism {
    pub fn new(images: Vec<Vec<RingElem>>) -> Self {
        Homomorphism { images }
    }

    pub fn identity(a: &FiniteAlgebra) -> Self {
        Homomorphism::new(a.basis_vectors())
    }

    pub fn apply(&self, src: &FiniteAlgebra, v: &[RingElem]) -> Vec<RingElem> {
        let ring = src.ring();
        let dim = self.images.first().map_or(0, Vec::len);
        let mut out = vec![0; dim];
        for (i, img) in self.images.iter().enumerate() {
            axpy(ring, &mut out, src.coefficient(v, i), img);
        }
        out
    }

    /// `other ∘ self`.
    pub fn then(&self, mid: &FiniteAlgebra, other: &Homomorphism) -> Homomorphism {
        Homomorphism::new(self.images.iter().map(|v| other.apply(mid, v)).collect())
    }

    /// Checks linearity on torsion, equivariance for every operation on all
    /// basis tuples, and preservation of constants.
    pub fn verify(&self, src: &FiniteAlgebra, tgt: &FiniteAlgebra) -> Result<(), String> {
        if src.ring() != tgt.ring() || src.sig() != tgt.sig() {
            return Err("source and target differ in ring or signature".into());
        }
        if self.images.len() != src.rank() {
            return Err(format!("{} images for a rank-{} source", self.images.len(), src.rank()));
        }
        let ring = src.ring();
        for (i, img) in self.images.iter().enumerate() {
            if !tgt.is_vector(img) {
                return Err(format!("image of basis element {i} is not an element of the target"));
            }
            let d = ring.order_scalar(src.orders()[i]);
            if !ring.is_field_ext() && img.iter().any(|&x| ring.mul(d, x) != 0) {
                return Err(format!("image of basis element {i} has order not dividing {}", src.orders()[i]));
            }
        }
        let r = src.rank();
        for (o, name, arity) in src.sig().ops() {
            let count = r.pow(arity as u32);
            let mut t = vec![0usize; arity];
            for _ in 0..count {
                let mut lhs = self.apply(src, src.table(o, &t));
                lhs.resize(tgt.rank(), 0);
                let imgs: Vec<&[RingElem]> = t.iter().map(|&i| self.images[i].as_slice()).collect();
                let rhs = tgt.apply(o, &imgs);
                if lhs != rhs {
                    return Err(format!("not equivariant for '{name}' at basis tuple {t:?}"));
                }
                for k in (0..arity).rev() {
                    t[k] += 1;
                    if t[k] < r {
                        break;
                    }
                    t[k] = 0;
                }
            }
        }
        Ok(())
    }

    pub fn image(&self, tgt: &FiniteAlgebra) -> ReducedMatrix {
        ReducedMatrix::reduce_unchecked(tgt.ring(), tgt.rank(), self.images.clone())
    }

    pub fn is_surjective(&self, tgt: &FiniteAlgebra) -> bool {
        self.image(tgt).size() == tgt.size()
    }

    /// Linear bijectivity (a verified homomorphism is then an isomorphism).
    pub fn is_bijective(&self, src: &FiniteAlgebra, tgt: &FiniteAlgebra) -> bool {
        src.size() == tgt.size() && self.is_surjective(tgt)
    }
}

#[cfg(test)]
mod tests {
    use super::super::testalg::*;
    use super::*;

    #[test]
    fn identity_verifies() {
        let a = a1();
        let id = Homomorphism::identity(&a);
        assert!(id.verify(&a, &a).is_ok());
        assert!(id.is_bijective(&a, &a));
    }

    #[test]
    fn broken_map_rejected() {
        let a = a1();
        // swap r and t: mul(t,t) = 0 but mul(r,r) = x
        let m = Homomorphism::new(vec![a.basis_vector(0), a.basis_vector(2), a.basis_vector(1)]);
        assert!(m.verify(&a, &a).is_err());
    }
}
