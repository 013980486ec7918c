//! Square-free, distinct-degree and equal-degree factorization over `F_p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{PrimeField, UniPoly};
use crate::error::{Error, Result};

/// `unit * prod(factor^multiplicity)`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(UniPoly, u32)>,
}

impl Factorization {
    /// Multiply everything back together.
    pub fn expand(&self, field: PrimeField) -> UniPoly {
        let mut acc = UniPoly::constant(field, self.unit);
        for (g, e) in &self.factors {
            acc = acc.mul(&g.pow(*e as u64));
        }
        acc
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}", self.unit);
        for (g, e) in &self.factors {
            if *e == 1 {
                s.push_str(&format!(" * ({})", g.to_text()));
            } else {
                s.push_str(&format!(" * ({})^{}", g.to_text(), e));
            }
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "unit": self.unit,
            "factors": self.factors.iter().map(|(g, e)| serde_json::json!({
                "factor": g.to_text(),
                "coeffs": g.to_json(),
                "multiplicity": e,
            })).collect::<Vec<_>>(),
        })
    }
}

fn sort_key(g: &UniPoly) -> (usize, Vec<u64>) {
    (g.degree().unwrap_or(0), g.coeffs().iter().rev().copied().collect())
}

fn pth_root(f: &UniPoly) -> UniPoly {
    let p = f.p() as usize;
    let c: Vec<u64> = f.coeffs().iter().step_by(p).copied().collect();
    UniPoly::from_coeffs(f.field(), c)
}

/// Square-free decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i` and each `g_i` square-free and pairwise coprime.
pub fn square_free(f: &UniPoly) -> Vec<(UniPoly, u32)> {
    let field = f.field();
    let one = UniPoly::one(field);
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = f.monic();
    let mut c = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c).expect("gcd divides");
    let mut i = 1u32;
    while w != one {
        let y = w.gcd(&c);
        let z = w.exact_div(&y).expect("gcd divides");
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w).expect("gcd divides");
    }
    if c != one {
        let p = field.p() as u32;
        for (g, e) in square_free(&pth_root(&c)) {
            out.push((g, e * p));
        }
    }
    out
}

/// Number of distinct roots in the algebraic closure, i.e. the degree of the radical.
pub fn distinct_root_count(f: &UniPoly) -> Result<usize> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(square_free(f).iter().map(|(g, _)| g.degree().unwrap()).sum())
}

/// Precomputed `x^(i p) mod h` for fast `g -> g^p mod h`.
struct Frobenius {
    h: UniPoly,
    rows: Vec<Vec<u64>>,
}

impl Frobenius {
    fn new(h: &UniPoly) -> Self {
        let field = h.field();
        let n = h.degree().unwrap();
        let xp = UniPoly::t(field).pow_mod(field.p() as u128, h).unwrap();
        let mut rows = Vec::with_capacity(n);
        let mut cur = UniPoly::one(field);
        for _ in 0..n {
            let mut row = cur.coeffs().to_vec();
            row.resize(n, 0);
            rows.push(row);
            cur = cur.mul(&xp).rem(h).unwrap();
        }
        Frobenius { h: h.clone(), rows }
    }

    fn apply(&self, g: &UniPoly) -> UniPoly {
        let field = self.h.field();
        let p = field.p();
        let n = self.rows.len();
        let g = g.rem(&self.h).unwrap();
        let mut acc = vec![0u64; n];
        for (i, &a) in g.coeffs().iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (slot, &b) in acc.iter_mut().zip(&self.rows[i]) {
                *slot = (*slot + a * b) % p;
            }
        }
        UniPoly::from_coeffs(field, acc)
    }
}

/// Distinct-degree split of a monic square-free polynomial.
fn distinct_degree(h: &UniPoly) -> Vec<(usize, UniPoly)> {
    let field = h.field();
    let x = UniPoly::t(field);
    let mut out = Vec::new();
    let frob = Frobenius::new(h);
    let mut rest = h.clone();
    let mut cur = frob.apply(&x);
    let mut d = 1;
    while rest.degree().unwrap() >= 2 * d {
        let g = rest.gcd(&cur.sub(&x));
        if g.degree().unwrap() > 0 {
            rest = rest.exact_div(&g).unwrap();
            out.push((d, g));
        }
        d += 1;
        cur = frob.apply(&cur);
    }
    if rest.degree().unwrap() > 0 {
        out.push((rest.degree().unwrap(), rest));
    }
    out
}

/// Split a product of distinct monic irreducibles of degree `d`.
fn equal_degree(g: &UniPoly, d: usize, rng: &mut ChaCha20Rng, out: &mut Vec<UniPoly>) {
    let field = g.field();
    let n = g.degree().unwrap();
    if n == d {
        out.push(g.clone());
        return;
    }
    let p = field.p();
    let one = UniPoly::one(field);
    loop {
        let a = UniPoly::from_coeffs(field, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let u0 = g.gcd(&a);
        let u = if u0.degree().unwrap() > 0 {
            u0
        } else {
            // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
            let mut norm = a.clone();
            let mut conj = a.clone();
            for _ in 1..d {
                conj = conj.pow_mod(p as u128, g).unwrap();
                norm = norm.mul(&conj).rem(g).unwrap();
            }
            let b = norm.pow_mod(((p - 1) / 2) as u128, g).unwrap();
            g.gcd(&b.sub(&one))
        };
        let du = u.degree().unwrap();
        if du > 0 && du < n {
            let v = g.exact_div(&u).unwrap();
            equal_degree(&u, d, rng, out);
            equal_degree(&v, d, rng, out);
            return;
        }
    }
}

/// Complete factorization; the seed drives the equal-degree splitting only,
/// so the factor multiset does not depend on it.
pub fn factor(f: &UniPoly, seed: u64) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let field = f.field();
    let unit = f.lead();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (g, e) in square_free(f) {
        for (d, part) in distinct_degree(&g) {
            let mut pieces = Vec::new();
            equal_degree(&part, d, &mut rng, &mut pieces);
            factors.extend(pieces.into_iter().map(|q| (q, e)));
        }
    }
    factors.sort_by_key(|(g, e)| (sort_key(g), *e));
    let out = Factorization { unit, factors };
    debug_assert_eq!(out.expand(field), *f);
    Ok(out)
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &UniPoly) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let h = f.monic();
    let x = UniPoly::t(h.field());
    let frob = Frobenius::new(&h);
    let mut powers = Vec::with_capacity(n + 1);
    let mut cur = x.clone();
    powers.push(cur.clone());
    for _ in 0..n {
        cur = frob.apply(&cur);
        powers.push(cur.clone());
    }
    if powers[n].sub(&x).rem(&h).unwrap() != UniPoly::zero(h.field()) {
        return false;
    }
    let mut m = n;
    let mut q = 2;
    let mut primes = Vec::new();
    while q * q <= m {
        if m % q == 0 {
            primes.push(q);
            while m % q == 0 {
                m /= q;
            }
        }
        q += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    primes.iter().all(|&q| h.gcd(&powers[n / q].sub(&x)).degree() == Some(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn footnote_p29() {
        let f = fp(29);
        let a = UniPoly::from_i64s(f, &[12, 1, 1]);
        let b = UniPoly::from_i64s(f, &[17, 17, 1]);
        let g = a.mul(&b).scale(12);
        let fac = factor(&g, 7).unwrap();
        assert_eq!(fac.unit, 12);
        assert_eq!(fac.factors, vec![(a, 1), (b, 1)]);
    }

    #[test]
    fn linear_times_unit() {
        let f = fp(13);
        let g = UniPoly::from_i64s(f, &[3, 3]);
        let fac = factor(&g, 1).unwrap();
        assert_eq!(fac.unit, 3);
        assert_eq!(fac.factors, vec![(UniPoly::from_i64s(f, &[1, 1]), 1)]);
    }

    #[test]
    fn multiplicities_including_pth_powers() {
        let f = fp(5);
        let a = UniPoly::from_i64s(f, &[1, 1]);
        let b = UniPoly::from_i64s(f, &[2, 0, 1]);
        let g = a.pow(7).mul(&b.pow(2)).scale(3);
        let fac = factor(&g, 99).unwrap();
        assert_eq!(fac.expand(f), g);
        assert_eq!(fac.factors, vec![(a.clone(), 7), (b.clone(), 2)]);
        assert!(is_irreducible(&b));
        assert!(!is_irreducible(&a.mul(&a)));
    }

    #[test]
    fn quadratic_fixed_point() {
        let f = fp(7);
        // t^2 + 1 is irreducible mod 7
        let g = UniPoly::from_i64s(f, &[1, 0, 1]);
        let fac = factor(&g, 3).unwrap();
        assert_eq!(fac.factors, vec![(g.clone(), 1)]);
        assert!(is_irreducible(&g));
    }

    #[test]
    fn x_to_p_minus_x_splits() {
        let f = fp(11);
        let mut c = vec![0i64; 12];
        c[11] = 1;
        c[1] = -1;
        let g = UniPoly::from_i64s(f, &c);
        let fac = factor(&g, 5).unwrap();
        assert_eq!(fac.factors.len(), 11);
        assert!(fac.factors.iter().all(|(q, e)| q.degree() == Some(1) && *e == 1));
        assert_eq!(distinct_root_count(&g).unwrap(), 11);
    }
}
