use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::PrimeField;
use crate::error::{Error, Result};

/// Dense univariate polynomial over `F_p`, lowest degree first.
///
/// The coefficient vector never ends in a zero, so the zero polynomial is the
/// empty vector and `degree()` returns `None` for it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: PrimeField,
    c: Vec<u64>,
}

impl UniPoly {
    pub fn zero(field: PrimeField) -> Self {
        UniPoly { field, c: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, a: u64) -> Self {
        Self::from_coeffs(field, vec![a])
    }

    /// The variable `t`.
    pub fn t(field: PrimeField) -> Self {
        Self::from_coeffs(field, vec![0, 1])
    }

    /// `a * t^k`.
    pub fn monomial(field: PrimeField, a: u64, k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = a;
        Self::from_coeffs(field, c)
    }

    /// `t - a`.
    pub fn linear_root(field: PrimeField, a: u64) -> Self {
        Self::from_coeffs(field, vec![field.neg(field.reduce(a)), 1])
    }

    pub fn from_coeffs(field: PrimeField, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x = field.reduce(*x);
        }
        let mut f = UniPoly { field, c };
        f.trim();
        f
    }

    pub fn from_i64s(field: PrimeField, c: &[i64]) -> Self {
        Self::from_coeffs(field, c.iter().map(|&x| field.from_i64(x)).collect())
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.field.p()
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    /// Leading coefficient, zero for the zero polynomial.
    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let f = self.field;
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Self::from_coeffs(f, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let f = self.field;
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Self::from_coeffs(f, c)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        UniPoly { field: f, c: self.c.iter().map(|&x| f.neg(x)).collect() }
    }

    pub fn scale(&self, a: u64) -> Self {
        let f = self.field;
        let a = f.reduce(a);
        Self::from_coeffs(f, self.c.iter().map(|&x| f.mul(x, a)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let p = self.p();
        let n = self.c.len() + other.c.len() - 1;
        // residues are < 2^31, so 4 products fit in a u64 before reduction
        let mut acc = vec![0u64; n];
        let mut pending = vec![0u8; n];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                let k = i + j;
                acc[k] += a * b;
                pending[k] += 1;
                if pending[k] == 3 {
                    acc[k] %= p;
                    pending[k] = 0;
                }
            }
        }
        Self::from_coeffs(self.field, acc)
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        UniPoly { field: self.field, c }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `f(t)^(p^k)`, which over `F_p` is `f(t^(p^k))`.
    pub fn frobenius_twist(&self, k: u32) -> Result<Self> {
        if self.is_constant() {
            return Ok(self.clone());
        }
        let q = (self.p() as u128).pow(k);
        let deg = self.degree().unwrap() as u128 * q;
        if deg > (1u128 << 32) {
            return Err(Error::DegreeBudgetExceeded { needed: deg, budget: 1 << 32 });
        }
        let q = q as usize;
        let mut c = vec![0; self.degree().unwrap() * q + 1];
        for (i, &a) in self.c.iter().enumerate() {
            c[i * q] = a;
        }
        Ok(UniPoly { field: self.field, c })
    }

    /// Quotient and remainder with `self = q * d + r`, `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        self.check(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field;
        let dd = d.c.len() - 1;
        if self.c.len() < d.c.len() {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv = f.inv(d.lead())?;
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len() - dd];
        for k in (0..q.len()).rev() {
            let top = r[k + dd];
            if top == 0 {
                continue;
            }
            let coef = f.mul(top, inv);
            q[k] = coef;
            for (j, &b) in d.c.iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(coef, b));
            }
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(f, q), Self::from_coeffs(f, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact division; errors if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput("division is not exact".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        match other.divrem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => other.is_zero(),
        }
    }

    /// Scale to leading coefficient one. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        self.check(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        if self.c.len() <= 1 {
            return Self::zero(f);
        }
        let c = (1..self.c.len()).map(|i| f.mul(f.reduce(i as u64), self.c[i])).collect();
        Self::from_coeffs(f, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        let x = f.reduce(x);
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.check(g);
        let mut acc = Self::zero(self.field);
        for &a in self.c.iter().rev() {
            acc = acc.mul(g).add(&Self::constant(self.field, a));
        }
        acc
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Result<Self> {
        let mut base = self.rem(m)?;
        let mut acc = Self::one(self.field).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// Largest `k` with `(t - c)^k | self`.
    pub fn valuation_at(&self, c: u64) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.field;
        let c = f.reduce(c);
        let mut k = 0;
        let mut cur = self.c.clone();
        loop {
            // synthetic division by (t - c)
            let n = cur.len();
            let mut q = vec![0u64; n - 1];
            let mut carry = 0u64;
            for i in (0..n).rev() {
                let v = f.add(cur[i], f.mul(carry, c));
                if i == 0 {
                    carry = v;
                } else {
                    q[i - 1] = v;
                    carry = v;
                }
            }
            if carry != 0 || n == 1 {
                return Ok(k);
            }
            k += 1;
            cur = q;
        }
    }

    /// Valuation at `t = 0`, i.e. the number of trailing zero coefficients.
    pub fn v_t(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.c.iter().take_while(|&&x| x == 0).count())
    }

    /// Remove every factor `t` and `t - 1`; returns `(v_t, v_{t-1}, rest)`.
    pub fn strip_zero_one(&self) -> Result<(usize, usize, Self)> {
        let v0 = self.v_t()?;
        let g = UniPoly { field: self.field, c: self.c[v0..].to_vec() };
        let v1 = g.valuation_at(1)?;
        let lin = Self::linear_root(self.field, 1);
        let g = g.exact_div(&lin.pow(v1 as u64))?;
        Ok((v0, v1, g))
    }

    /// Canonical text form `c0 + c1*t + c2*t^2`, zero terms omitted.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            parts.push(match i {
                0 => format!("{a}"),
                1 => format!("{a}*t"),
                _ => format!("{a}*t^{i}"),
            });
        }
        parts.join(" + ")
    }

    /// Inverse of [`UniPoly::to_text`]. Terms may appear in any order and repeat.
    pub fn parse(field: PrimeField, s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse polynomial '{s}'"));
        let mut c: Vec<u64> = Vec::new();
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero(field));
        }
        for term in s.split('+') {
            let term = term.trim();
            let (coef, exp) = match term.split_once('*') {
                None => (term, 0usize),
                Some((a, var)) => {
                    let var = var.trim();
                    let e = if var == "t" {
                        1
                    } else if let Some(e) = var.strip_prefix("t^") {
                        e.trim().parse().map_err(|_| bad())?
                    } else {
                        return Err(bad());
                    };
                    (a.trim(), e)
                }
            };
            let a: u64 = coef.parse().map_err(|_| bad())?;
            if c.len() <= exp {
                c.resize(exp + 1, 0);
            }
            c[exp] = field.add(c[exp], field.reduce(a));
        }
        Ok(Self::from_coeffs(field, c))
    }

    /// Coefficients as a JSON array, lowest degree first.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.c.clone())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] mod {}", self.to_text(), self.p())
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: Self) -> UniPoly {
        UniPoly::add(self, rhs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: Self) -> UniPoly {
        UniPoly::sub(self, rhs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: Self) -> UniPoly {
        UniPoly::mul(self, rhs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn gcd_shared_root() {
        let f = fp(13);
        let a = UniPoly::from_i64s(f, &[-1, 0, 1]);
        let b = UniPoly::from_i64s(f, &[-1, 1]);
        assert_eq!(a.gcd(&b), b);
    }

    #[test]
    fn exact_divrem() {
        let f = fp(13);
        let a = UniPoly::from_i64s(f, &[0, 2, 0, 1]);
        let b = UniPoly::from_i64s(f, &[1, 1]);
        let (q, r) = a.mul(&b).divrem(&b).unwrap();
        assert_eq!(q, a);
        assert!(r.is_zero());
        assert_eq!(a.divrem(&UniPoly::zero(f)), Err(Error::DivisionByZero));
    }

    #[test]
    fn zero_degree_is_sentinel() {
        let f = fp(7);
        assert_eq!(UniPoly::zero(f).degree(), None);
        assert_eq!(UniPoly::one(f).degree(), Some(0));
        assert_eq!(UniPoly::from_i64s(f, &[1, 7, 14]).degree(), Some(0));
    }

    #[test]
    fn valuation() {
        let f = fp(13);
        // 5 t^4 (t + 1)
        let g = UniPoly::from_i64s(f, &[0, 0, 0, 0, 5, 5]);
        assert_eq!(g.valuation_at(0).unwrap(), 4);
        assert_eq!(g.valuation_at(12).unwrap(), 1);
        assert_eq!(g.valuation_at(3).unwrap(), 0);
        assert_eq!(UniPoly::from_i64s(f, &[-1, 1]).valuation_at(1).unwrap(), 1);
        assert!(UniPoly::zero(f).valuation_at(0).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let f = fp(29);
        let g = UniPoly::from_i64s(f, &[12, 0, 3, 1]);
        assert_eq!(g.to_text(), "12 + 3*t^2 + 1*t^3");
        assert_eq!(UniPoly::parse(f, &g.to_text()).unwrap(), g);
        assert_eq!(UniPoly::parse(f, "0").unwrap(), UniPoly::zero(f));
        assert!(UniPoly::parse(f, "3*x").is_err());
    }

    #[test]
    fn compose_and_twist() {
        let f = fp(5);
        let g = UniPoly::from_i64s(f, &[1, 1]);
        assert_eq!(g.pow(5), g.frobenius_twist(1).unwrap());
        let h = UniPoly::from_i64s(f, &[2, 0, 1]);
        assert_eq!(h.compose(&g), UniPoly::from_i64s(f, &[3, 2, 1]));
    }

    #[test]
    fn strip_zero_one() {
        let f = fp(13);
        let core = UniPoly::from_i64s(f, &[3, 1, 1]);
        let lin = UniPoly::from_i64s(f, &[-1, 1]);
        let g = core.shift(3).mul(&lin.pow(2));
        let (a, b, rest) = g.strip_zero_one().unwrap();
        assert_eq!((a, b), (3, 2));
        assert_eq!(rest, core);
    }
}
