//! Embeddings between the fixed binary fields.
//!
//! F_{2^l} sits inside F_{2^m} (l | m) by sending its generator to the least
//! root, as an integer bit pattern, of its modulus in F_{2^m}.

use std::cell::RefCell;
use std::collections::HashMap;

use super::unipoly::{roots, UniPoly};
use crate::polyring::BinaryField;

/// Cache of generator images. Deterministic; one per computation.
#[derive(Default, Debug)]
pub struct Tower {
    images: RefCell<HashMap<(u32, u32), u128>>,
}

impl Tower {
    /// Image of the generator of `from` in `to`.
    pub fn generator_image(&self, from: BinaryField, to: BinaryField) -> u128 {
        let key = (from.degree(), to.degree());
        if let Some(&v) = self.images.borrow().get(&key) {
            return v;
        }
        assert!(to.degree().is_multiple_of(from.degree()), "F_2^{} is not a subfield of F_2^{}", key.0, key.1);
        let v = if from.degree() == 1 {
            1
        } else if from == to {
            from.generator()
        } else {
            let m = from.modulus();
            let coeffs = (0..=from.degree()).map(|i| m >> i & 1).collect();
            *roots(&UniPoly::new(to, coeffs)).first().expect("a modulus splits in its extensions")
        };
        self.images.borrow_mut().insert(key, v);
        v
    }

    pub fn embed(&self, a: u128, from: BinaryField, to: BinaryField) -> u128 {
        if from == to || a <= 1 {
            return a;
        }
        let beta = self.generator_image(from, to);
        let mut acc = 0u128;
        for i in (0..from.degree()).rev() {
            acc = to.mul(acc, beta) ^ (a >> i & 1);
        }
        acc
    }

    /// Preimage of `c` under the embedding of `to` into `from`, if `c` lies
    /// in that subfield.
    pub fn descend(&self, c: u128, from: BinaryField, to: BinaryField) -> Option<u128> {
        if from == to || c <= 1 {
            return Some(c);
        }
        let d = to.degree();
        let beta = self.generator_image(to, from);
        // columns γ^i as F₂-vectors; eliminate while tracking combinations
        let mut rows: Vec<(u128, u128)> = Vec::new();
        let mut p = 1u128;
        for i in 0..d {
            let mut v = p;
            let mut comb = 1u128 << i;
            for &(rv, rc) in &rows {
                if v & (1u128 << (127 - rv.leading_zeros())) != 0 {
                    v ^= rv;
                    comb ^= rc;
                }
            }
            if v != 0 {
                rows.push((v, comb));
                rows.sort_by_key(|r| r.0.leading_zeros());
            }
            p = from.mul(p, beta);
        }
        let mut v = c;
        let mut comb = 0u128;
        for &(rv, rc) in &rows {
            if v & (1u128 << (127 - rv.leading_zeros())) != 0 {
                v ^= rv;
                comb ^= rc;
            }
        }
        (v == 0).then_some(comb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_is_a_ring_map() {
        let tower = Tower::default();
        let f4 = BinaryField::new(2).unwrap();
        let f16 = BinaryField::new(4).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let ea = tower.embed(a, f4, f16);
                let eb = tower.embed(b, f4, f16);
                assert_eq!(tower.embed(f4.mul(a, b), f4, f16), f16.mul(ea, eb));
                assert_eq!(tower.embed(a ^ b, f4, f16), ea ^ eb);
            }
        }
    }

    #[test]
    fn descend_inverts_embed() {
        let tower = Tower::default();
        let f8 = BinaryField::new(3).unwrap();
        let f64_ = BinaryField::new(6).unwrap();
        for a in 0..8 {
            assert_eq!(tower.descend(tower.embed(a, f8, f64_), f64_, f8), Some(a));
        }
        let outside = (0..64).filter(|&c| tower.descend(c, f64_, f8).is_none()).count();
        assert_eq!(outside, 56);
    }
}
