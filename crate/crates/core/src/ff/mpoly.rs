use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{BinomTable, ExtField, PrimeField, UniPoly};
use crate::error::{Error, Result};

/// Sparse polynomial in `x_1..x_r` over `F_p`. No zero coefficient is stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, u64>,
}

impl MultiPoly {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        MultiPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: PrimeField, nvars: usize, a: u64) -> Self {
        let mut f = Self::zero(field, nvars);
        f.add_term(vec![0; nvars], a);
        f
    }

    /// The variable `x_{i+1}` (zero based index).
    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut f = Self::zero(field, nvars);
        f.add_term(e, 1);
        f
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, u64)>>(field: PrimeField, nvars: usize, it: I) -> Self {
        let mut f = Self::zero(field, nvars);
        for (e, a) in it {
            f.add_term(e, a);
        }
        f
    }

    /// Add `a * x^e` in place.
    pub fn add_term(&mut self, e: Vec<u32>, a: u64) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        let a = self.field.reduce(a);
        if a == 0 {
            return;
        }
        let f = self.field;
        let mut remove = false;
        self.terms
            .entry(e.clone())
            .and_modify(|c| {
                *c = f.add(*c, a);
                remove = *c == 0;
            })
            .or_insert(a);
        if remove {
            self.terms.remove(&e);
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &u64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> u64 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    /// Total degree, `None` for zero.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| e.iter().map(|&x| x as u64).sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().map(|&x| x as u64).sum::<u64>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.field, o.field, "polynomials over different fields");
        assert_eq!(self.nvars, o.nvars, "variable counts differ");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        let mut out = self.clone();
        for (e, &a) in &o.terms {
            out.add_term(e.clone(), a);
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.p() - 1)
    }

    pub fn scale(&self, a: u64) -> Self {
        let f = self.field;
        let a = f.reduce(a);
        if a == 0 {
            return Self::zero(f, self.nvars);
        }
        MultiPoly {
            field: f,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.clone(), f.mul(c, a))).collect(),
        }
    }

    /// Predicted size of a product, used for budget checks.
    pub fn product_size_bound(&self, o: &Self) -> u128 {
        self.terms.len() as u128 * o.terms.len() as u128
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let f = self.field;
        let mut acc: HashMap<Vec<u32>, u64> = HashMap::with_capacity(self.terms.len().max(o.terms.len()));
        for (e1, &a) in &self.terms {
            for (e2, &b) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                let c = acc.entry(e).or_insert(0);
                *c = f.add(*c, f.mul(a, b));
            }
        }
        MultiPoly { field: f, nvars: self.nvars, terms: acc.into_iter().filter(|(_, c)| *c != 0).collect() }
    }

    /// `self^(p^k)`: exponents scale by `p^k`, coefficients are fixed by Frobenius.
    pub fn frobenius_twist(&self, k: u32) -> Self {
        let q = (self.field.p() as u32).pow(k);
        MultiPoly {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, &c)| (e.iter().map(|&x| x * q).collect(), c)).collect(),
        }
    }

    /// Evaluate at a point of `F_p^r`.
    pub fn eval(&self, x: &[u64]) -> u64 {
        assert_eq!(x.len(), self.nvars);
        let f = self.field;
        self.terms.iter().fold(0, |acc, (e, &c)| {
            let m = e.iter().zip(x).fold(c, |m, (&k, &xi)| f.mul(m, f.pow(xi, k as u64)));
            f.add(acc, m)
        })
    }

    /// Evaluate at a point whose coordinates lie in an extension field.
    pub fn eval_ext(&self, k: &ExtField, x: &[UniPoly]) -> UniPoly {
        assert_eq!(x.len(), self.nvars);
        let mut acc = UniPoly::zero(self.field);
        for (e, &c) in &self.terms {
            let mut m = UniPoly::constant(self.field, c);
            for (&ei, xi) in e.iter().zip(x) {
                if ei > 0 {
                    m = k.mul(&m, &k.pow(xi, ei as u128));
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    /// Substitute a univariate polynomial for every variable.
    pub fn substitute(&self, x: &[UniPoly]) -> UniPoly {
        assert_eq!(x.len(), self.nvars);
        let mut acc = UniPoly::zero(self.field);
        for (e, &c) in &self.terms {
            let mut m = UniPoly::constant(self.field, c);
            for (&ei, xi) in e.iter().zip(x) {
                if ei > 0 {
                    m = m.mul(&xi.pow(ei as u64));
                }
            }
            acc = acc.add(&m);
        }
        acc
    }

    /// Multiplicity of the linear form `x_{j2} - x_{j1}` (zero based indices) as a
    /// factor: the least `k` for which the `y^k` coefficient of
    /// `self(.., x_{j2} = x_{j1} + y, ..)` is a nonzero polynomial.
    pub fn linear_form_valuation(&self, j1: usize, j2: usize) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if j1 == j2 || j1 >= self.nvars || j2 >= self.nvars {
            return Err(Error::IndexOutOfRange(format!("pair ({j1}, {j2})")));
        }
        let f = self.field;
        let maxe = self.terms.keys().map(|e| e[j2]).max().unwrap_or(0);
        let tab = BinomTable::new(f, (f.p() - 1) as usize);
        for k in 0..=maxe {
            let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
            for (e, &c) in &self.terms {
                if e[j2] < k {
                    continue;
                }
                let b = tab.binom(e[j2] as i64, k as i64);
                if b == 0 {
                    continue;
                }
                let mut ne = e.clone();
                ne[j1] += e[j2] - k;
                ne[j2] = 0;
                let slot = acc.entry(ne).or_insert(0);
                *slot = f.add(*slot, f.mul(c, b));
            }
            if acc.values().any(|&v| v != 0) {
                return Ok(k as u64);
            }
        }
        unreachable!("the top y-coefficient of a nonzero polynomial is nonzero")
    }

    /// JSON list of `{exponents, coefficient}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(
            self.terms
                .iter()
                .map(|(e, c)| serde_json::json!({"exponents": e, "coefficient": c}))
                .collect::<Vec<_>>(),
        )
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mon: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                    .collect();
                if mon.is_empty() {
                    format!("{c}")
                } else {
                    format!("{c}*{}", mon.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_form_cubed() {
        let f = PrimeField::new(11).unwrap();
        let x1 = MultiPoly::var(f, 3, 0);
        let x2 = MultiPoly::var(f, 3, 1);
        let x3 = MultiPoly::var(f, 3, 2);
        let d = x1.sub(&x2);
        let h = d.mul(&d).mul(&d).mul(&x3);
        assert_eq!(h.linear_form_valuation(0, 1).unwrap(), 3);
        assert_eq!(h.linear_form_valuation(1, 0).unwrap(), 3);
        assert_eq!(h.linear_form_valuation(0, 2).unwrap(), 0);
    }

    #[test]
    fn frobenius_matches_power() {
        let f = PrimeField::new(5).unwrap();
        let g = MultiPoly::var(f, 2, 0).add(&MultiPoly::var(f, 2, 1).scale(3));
        let mut pw = MultiPoly::constant(f, 2, 1);
        for _ in 0..5 {
            pw = pw.mul(&g);
        }
        assert_eq!(pw, g.frobenius_twist(1));
    }

    #[test]
    fn cancellation_removes_terms() {
        let f = PrimeField::new(7).unwrap();
        let g = MultiPoly::var(f, 2, 0);
        assert!(g.sub(&g).is_zero());
        assert_eq!(g.add(&g).term_count(), 1);
    }
}
