//! Exact arithmetic in `Z/p` for an odd prime `p`.
//!
//! Everything downstream leans on two operations: `half`, the inverse of
//! doubling (well defined because `p` is odd), and affine maps `x -> ax + b`
//! with `a != 0`, which are exactly the color-set symmetries used by the
//! palette classification.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("affine coefficient must be nonzero")]
    ZeroAlpha,
}

/// An odd prime modulus. The inverse of 2 is computed once at construction
/// since halving is the hottest operation in palette enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Prime {
    value: u32,
    inv2: u32,
}

impl Prime {
    pub fn new(value: u32) -> Result<Self, ModError> {
        if value < 3 || value % 2 == 0 || !is_prime(value) {
            return Err(ModError::NotOddPrime(value));
        }
        // (p+1)/2 doubles to p+1 = 1 mod p.
        Ok(Prime {
            value,
            inv2: (value + 1) / 2,
        })
    }

    pub fn get(self) -> u32 {
        self.value
    }

    pub fn inv2(self) -> u32 {
        self.inv2
    }

    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.value as i64) as u32
    }

    /// All residues 0..p.
    pub fn residues(self) -> impl Iterator<Item = Residue> {
        (0..self.value).map(move |v| Residue {
            value: v,
            modulus: self,
        })
    }

    pub fn residue(self, x: i64) -> Residue {
        Residue {
            value: self.reduce(x),
            modulus: self,
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A canonically reduced element of `Z/p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Residue {
    value: u32,
    modulus: Prime,
}

impl Residue {
    pub fn get(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Prime {
        self.modulus
    }

    fn check(self, other: Residue) -> Result<(), ModError> {
        if self.modulus != other.modulus {
            return Err(ModError::ModulusMismatch(
                self.modulus.value,
                other.modulus.value,
            ));
        }
        Ok(())
    }

    pub fn add(self, other: Residue) -> Result<Residue, ModError> {
        self.check(other)?;
        Ok(self.modulus.residue(self.value as i64 + other.value as i64))
    }

    pub fn sub(self, other: Residue) -> Result<Residue, ModError> {
        self.check(other)?;
        Ok(self.modulus.residue(self.value as i64 - other.value as i64))
    }

    pub fn mul(self, other: Residue) -> Result<Residue, ModError> {
        self.check(other)?;
        Ok(self.modulus.residue(self.value as i64 * other.value as i64))
    }
}

/// `half(a, b)` is the unique `r` with `2r = a + b (mod p)`.
pub fn half(a: Residue, b: Residue) -> Result<Residue, ModError> {
    a.check(b)?;
    let p = a.modulus;
    Ok(p.residue((a.value as i64 + b.value as i64) * p.inv2 as i64))
}

/// Raw version of [`half`] on `u32` values, used by the enumeration loops.
#[inline]
pub fn half_raw(p: Prime, a: u32, b: u32) -> u32 {
    ((a as u64 + b as u64) * p.inv2 as u64 % p.value as u64) as u32
}

/// Bijection `x -> alpha * x + beta` of `Z/p`, `alpha != 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineMap {
    alpha: Residue,
    beta: Residue,
}

impl AffineMap {
    pub fn new(alpha: Residue, beta: Residue) -> Result<Self, ModError> {
        alpha.check(beta)?;
        if alpha.value == 0 {
            return Err(ModError::ZeroAlpha);
        }
        Ok(AffineMap { alpha, beta })
    }

    pub fn identity(p: Prime) -> Self {
        AffineMap {
            alpha: p.residue(1),
            beta: p.residue(0),
        }
    }

    pub fn alpha(self) -> Residue {
        self.alpha
    }

    pub fn beta(self) -> Residue {
        self.beta
    }

    pub fn modulus(self) -> Prime {
        self.alpha.modulus
    }

    pub fn apply(self, x: Residue) -> Result<Residue, ModError> {
        self.alpha.check(x)?;
        Ok(self
            .alpha
            .modulus
            .residue(self.alpha.value as i64 * x.value as i64 + self.beta.value as i64))
    }

    #[inline]
    pub fn apply_raw(self, x: u32) -> u32 {
        let p = self.alpha.modulus;
        ((self.alpha.value as u64 * x as u64 + self.beta.value as u64) % p.value as u64) as u32
    }

    /// `self . other` (apply `other` first).
    pub fn compose(self, other: AffineMap) -> Result<AffineMap, ModError> {
        self.alpha.check(other.alpha)?;
        let p = self.alpha.modulus;
        let alpha = p.residue(self.alpha.value as i64 * other.alpha.value as i64);
        let beta = p.residue(self.alpha.value as i64 * other.beta.value as i64 + self.beta.value as i64);
        AffineMap::new(alpha, beta)
    }

    pub fn inverse(self) -> AffineMap {
        let p = self.alpha.modulus;
        // Fermat inverse; p is small.
        let mut inv = 1u64;
        let mut base = self.alpha.value as u64;
        let mut e = p.value as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                inv = inv * base % p.value as u64;
            }
            base = base * base % p.value as u64;
            e >>= 1;
        }
        let alpha = p.residue(inv as i64);
        let beta = p.residue(-(inv as i64) * self.beta.value as i64);
        AffineMap { alpha, beta }
    }

    /// Elementwise image of a residue set, returned sorted.
    pub fn image(self, set: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = set.iter().map(|&x| self.apply_raw(x)).collect();
        out.sort_unstable();
        out
    }

    /// Every one of the `p(p-1)` affine bijections of `Z/p`.
    pub fn all(p: Prime) -> impl Iterator<Item = AffineMap> {
        (1..p.get()).flat_map(move |a| {
            (0..p.get()).map(move |b| AffineMap {
                alpha: p.residue(a as i64),
                beta: p.residue(b as i64),
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p11() -> Prime {
        Prime::new(11).unwrap()
    }

    #[test]
    fn prime_construction() {
        assert!(Prime::new(3).is_ok());
        assert!(Prime::new(13).is_ok());
        assert_eq!(Prime::new(2), Err(ModError::NotOddPrime(2)));
        assert_eq!(Prime::new(9), Err(ModError::NotOddPrime(9)));
        assert_eq!(Prime::new(4), Err(ModError::NotOddPrime(4)));
        assert_eq!(Prime::new(1), Err(ModError::NotOddPrime(1)));
    }

    #[test]
    fn half_examples() {
        let p = p11();
        // 2*1 = 2 and 6+7 = 13 = 2 mod 11
        assert_eq!(half(p.residue(6), p.residue(7)).unwrap().get(), 1);
        assert_eq!(half(p.residue(5), p.residue(5)).unwrap().get(), 5);
        assert_eq!(half(p.residue(0), p.residue(8)).unwrap().get(), 4);
    }

    #[test]
    fn half_modulus_mismatch() {
        let p = p11();
        let q = Prime::new(7).unwrap();
        assert_eq!(
            half(p.residue(1), q.residue(1)),
            Err(ModError::ModulusMismatch(11, 7))
        );
    }

    #[test]
    fn half_total_exhaustive() {
        // 2*half(a,b) = a+b and symmetry, for all small odd primes
        for pv in [3u32, 5, 7, 11, 13] {
            let p = Prime::new(pv).unwrap();
            for a in 0..pv {
                for b in 0..pv {
                    let h = half_raw(p, a, b);
                    assert_eq!((2 * h) % pv, (a + b) % pv);
                    assert_eq!(h, half_raw(p, b, a));
                }
            }
        }
    }

    #[test]
    fn affine_examples() {
        let p = p11();
        let f = AffineMap::new(p.residue(7), p.residue(6)).unwrap();
        assert_eq!(f.apply(p.residue(4)).unwrap().get(), 1);
        let id = AffineMap::identity(p);
        assert_eq!(id.apply(p.residue(9)).unwrap().get(), 9);
        let g = AffineMap::new(p.residue(9), p.residue(9)).unwrap();
        assert_eq!(g.apply(p.residue(1)).unwrap().get(), 7);
        assert_eq!(g.apply(p.residue(4)).unwrap().get(), 1);
    }

    #[test]
    fn affine_image_examples() {
        let p = p11();
        let f = AffineMap::new(p.residue(7), p.residue(6)).unwrap();
        assert_eq!(f.image(&[0, 4, 6, 7, 8]), vec![0, 1, 4, 6, 7]);
        let id = AffineMap::identity(p);
        assert_eq!(id.image(&[1, 4, 6, 7, 8]), vec![1, 4, 6, 7, 8]);
        // x -> 4(b-a)(x-1)+a at (a,b) = (0,1) is x -> 4x - 4
        let g = AffineMap::new(p.residue(4), p.residue(7)).unwrap();
        assert_eq!(g.image(&[1, 4, 6, 7, 8]), vec![0, 1, 2, 6, 9]);
    }

    #[test]
    fn affine_group_law() {
        let p = p11();
        for f in AffineMap::all(p) {
            let inv = f.inverse();
            let comp = f.compose(inv).unwrap();
            assert_eq!(comp, AffineMap::identity(p));
            for x in 0..11 {
                let y = f.apply_raw(x);
                assert_eq!(inv.apply_raw(y), x);
            }
        }
    }

    #[test]
    fn half_commutes_with_affine() {
        // f(half(a,b)) = half(f(a), f(b)) for all f, a, b; exhaustive at p = 11 and 13
        for pv in [11u32, 13] {
            let p = Prime::new(pv).unwrap();
            for f in AffineMap::all(p) {
                for a in 0..pv {
                    for b in 0..pv {
                        let lhs = f.apply_raw(half_raw(p, a, b));
                        let rhs = half_raw(p, f.apply_raw(a), f.apply_raw(b));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}
