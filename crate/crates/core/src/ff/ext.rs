use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{factor, is_irreducible, PrimeField, UniPoly};
use crate::error::{Error, Result};

/// `F_p[x] / (modulus)` with `modulus` monic irreducible of degree `d`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtField {
    modulus: UniPoly,
}

/// An element of an [`ExtField`], stored as a reduced polynomial in `x`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtElem {
    pub field: ExtField,
    pub value: UniPoly,
}

impl ExtField {
    pub fn new(modulus: &UniPoly) -> Result<Self> {
        if !is_irreducible(modulus) {
            return Err(Error::InvalidInput(format!("modulus {} is not irreducible", modulus)));
        }
        Ok(ExtField { modulus: modulus.monic() })
    }

    /// A field of degree `d` with a pseudo-random irreducible modulus.
    pub fn random(base: PrimeField, d: usize, seed: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        loop {
            let mut c: Vec<u64> = (0..d).map(|_| rng.gen_range(0..base.p())).collect();
            c.push(1);
            let m = UniPoly::from_coeffs(base, c);
            if is_irreducible(&m) {
                return ExtField { modulus: m };
            }
        }
    }

    pub fn base(&self) -> PrimeField {
        self.modulus.field()
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn elem(&self, v: &UniPoly) -> ExtElem {
        ExtElem { field: self.clone(), value: v.rem(&self.modulus).unwrap() }
    }

    pub fn from_base(&self, a: u64) -> UniPoly {
        UniPoly::constant(self.base(), a)
    }

    /// The class of `x`, a root of the modulus.
    pub fn generator(&self) -> UniPoly {
        UniPoly::t(self.base()).rem(&self.modulus).unwrap()
    }

    pub fn random_elem(&self, rng: &mut ChaCha20Rng) -> UniPoly {
        let p = self.base().p();
        UniPoly::from_coeffs(self.base(), (0..self.degree()).map(|_| rng.gen_range(0..p)).collect())
    }

    pub fn add(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.add(b)
    }

    pub fn sub(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.sub(b)
    }

    pub fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a.mul(b).rem(&self.modulus).unwrap()
    }

    pub fn pow(&self, a: &UniPoly, e: u128) -> UniPoly {
        a.pow_mod(e, &self.modulus).unwrap()
    }

    /// `a^p`.
    pub fn frobenius(&self, a: &UniPoly) -> UniPoly {
        self.pow(a, self.base().p() as u128)
    }

    pub fn inv(&self, a: &UniPoly) -> Result<UniPoly> {
        if a.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        let q = (self.base().p() as u128).pow(self.degree() as u32);
        Ok(self.pow(a, q - 2))
    }

    /// Evaluate a polynomial over `F_p` at an element of this field.
    pub fn eval(&self, f: &UniPoly, a: &UniPoly) -> UniPoly {
        let base = self.base();
        let mut acc = UniPoly::zero(base);
        for &c in f.coeffs().iter().rev() {
            acc = self.mul(&acc, a).add(&UniPoly::constant(base, c));
        }
        acc
    }
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} = F_{}[x]/({})", self.base().p(), self.degree(), self.base().p(), self.modulus)
    }
}

impl ExtElem {
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Evaluate `f` (over `F_p`) at this element.
    pub fn eval(&self, f: &UniPoly) -> UniPoly {
        self.field.eval(f, &self.value)
    }

    pub fn conjugate(&self) -> ExtElem {
        ExtElem { field: self.field.clone(), value: self.field.frobenius(&self.value) }
    }

    /// Text form with `x` for the generator.
    pub fn to_text(&self) -> String {
        self.value.to_text().replace('t', "x")
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self.to_text(), self.field)
    }
}

/// One root per irreducible factor of degree at most `dmax`, with its degree.
pub fn ext_roots(f: &UniPoly, dmax: usize, seed: u64) -> Result<Vec<(ExtElem, usize)>> {
    let fac = factor(f, seed)?;
    let mut out = Vec::new();
    for (g, _) in fac.factors {
        let d = g.degree().unwrap();
        if d > dmax {
            continue;
        }
        let field = ExtField { modulus: g };
        let root = field.elem(&field.generator());
        out.push((root, d));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn footnote_gcd_roots_live_in_quadratic_extension() {
        let f = PrimeField::new(113).unwrap();
        let g = UniPoly::from_i64s(f, &[1, 42, 1]);
        let roots = ext_roots(&g, 4, 0).unwrap();
        assert_eq!(roots.len(), 1);
        let (alpha, d) = &roots[0];
        assert_eq!(*d, 2);
        assert!(alpha.eval(&g).is_zero());
        let beta = alpha.conjugate();
        assert_ne!(beta.value, alpha.value);
        assert!(beta.eval(&g).is_zero());
    }

    #[test]
    fn rational_root() {
        let f = PrimeField::new(13).unwrap();
        let g = UniPoly::from_i64s(f, &[-1, 1]);
        let roots = ext_roots(&g, 1, 0).unwrap();
        assert_eq!(roots[0].1, 1);
        assert_eq!(roots[0].0.value, UniPoly::one(f));
    }

    #[test]
    fn random_field_inverse() {
        let f = PrimeField::new(7).unwrap();
        let k = ExtField::random(f, 5, 11);
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = k.random_elem(&mut rng);
            if a.is_zero() {
                continue;
            }
            assert_eq!(k.mul(&a, &k.inv(&a).unwrap()), UniPoly::one(f));
        }
    }
}
