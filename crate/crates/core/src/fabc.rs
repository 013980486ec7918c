//! The family `f(a,b,c) = sum_{i+j=c} C(a,i) C(b,j) t^i` over `F_p`, its
//! valuation laws and stripping identities, and the operator `D_{p^k}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{BinomTable, MultiPoly, PrimeField, UniPoly};

/// Admissible parameters: `a, b < p` and `c <= a + b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FabcParams {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub p: u64,
}

impl FabcParams {
    pub fn new(a: u64, b: u64, c: u64, p: u64) -> Result<Self> {
        let q = FabcParams { a, b, c, p };
        q.check()?;
        Ok(q)
    }

    pub fn check(&self) -> Result<()> {
        let FabcParams { a, b, c, p } = *self;
        if a >= p || b >= p || c > a + b {
            return Err(Error::ParamOutOfRange(format!("f({a},{b},{c}) over F_{p} needs a,b < p and c <= a+b")));
        }
        Ok(())
    }
}

/// `f(a,b,c)` without range checks: negative or too large `c` gives zero.
pub fn fabc_raw(field: PrimeField, a: u64, b: u64, c: i64) -> UniPoly {
    if c < 0 || c as u64 > a + b {
        return UniPoly::zero(field);
    }
    let c = c as u64;
    let tab = BinomTable::new(field, (a.max(b) as usize).min(field.p() as usize - 1));
    let lo = c.saturating_sub(b);
    let hi = a.min(c);
    let mut co = vec![0u64; hi as usize + 1];
    for i in lo..=hi {
        co[i as usize] = field.mul(tab.binom(a as i64, i as i64), tab.binom(b as i64, (c - i) as i64));
    }
    UniPoly::from_coeffs(field, co)
}

pub fn fabc(q: &FabcParams) -> Result<UniPoly> {
    q.check()?;
    let field = PrimeField::new(q.p)?;
    Ok(fabc_raw(field, q.a, q.b, q.c as i64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Profile {
    pub degree: u64,
    pub v_t: u64,
    pub v_t1: u64,
}

/// Degree, `v_t` and `v_{t-1}` from the closed-form laws.
pub fn fabc_profile(q: &FabcParams) -> Result<Profile> {
    q.check()?;
    let FabcParams { a, b, c, p } = *q;
    let v_t1 = if a + b > p - 1 && c + (p - 1) >= a + b && c <= p - 1 { a + b - (p - 1) } else { 0 };
    Ok(Profile { degree: a.min(c), v_t: c.saturating_sub(b), v_t1 })
}

/// The same three numbers read off the constructed polynomial.
pub fn fabc_profile_direct(q: &FabcParams) -> Result<Profile> {
    let f = fabc(q)?;
    Ok(Profile {
        degree: f.degree().ok_or(Error::ZeroPolynomial)? as u64,
        v_t: f.valuation_at(0)? as u64,
        v_t1: f.valuation_at(1)? as u64,
    })
}

/// `f(a,b,c) = sign * t^s1 * (t-1)^s2 * f(reduced)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Stripped {
    pub sign: i8,
    pub s1: u64,
    pub s2: u64,
    pub reduced: FabcParams,
}

impl Stripped {
    pub fn rebuild(&self) -> Result<UniPoly> {
        let field = PrimeField::new(self.reduced.p)?;
        let core = fabc(&self.reduced)?;
        let mut out = core.shift(self.s1 as usize).mul(&UniPoly::linear_root(field, 1).pow(self.s2));
        if self.sign < 0 {
            out = out.neg();
        }
        Ok(out)
    }
}

/// Remove the powers of `t` and then of `t-1`.
pub fn strip(q: &FabcParams) -> Result<Stripped> {
    q.check()?;
    let p = q.p;
    let (mut a, mut b, mut c) = (q.a, q.b, q.c);
    let mut s1 = 0;
    if c > b {
        s1 = c - b;
        (a, b, c) = (b, a, a + b - c);
    }
    let mut s2 = 0;
    let mut sign = 1i8;
    if a + b > p - 1 && c + (p - 1) >= a + b && c <= p - 1 {
        s2 = a + b - (p - 1);
        if (a + c) % 2 == 1 {
            sign = -1;
        }
        (a, b, c) = (c + (p - 1) - (a + b), p - 1 - c, p - 1 - b);
    }
    Ok(Stripped { sign, s1, s2, reduced: FabcParams { a, b, c, p } })
}

/// Checks the coprimality hypotheses and returns the gcd of `f(a,b,c)` and
/// `f(a,b,c-1)`, which is 1 when they hold.
pub fn coprime_shift(q: &FabcParams) -> Result<(bool, UniPoly)> {
    q.check()?;
    let FabcParams { a, b, c, p } = *q;
    let ok = a > 0 && b > 0 && c > 0 && c <= b && (a + b <= p - 1 || c + p <= a + b + 1);
    if !ok {
        return Err(Error::HypothesisNotMet(format!(
            "f({a},{b},{c}) over F_{p}: need a,b,c > 0, c <= b and (a+b <= p-1 or c <= a+b-p+1)"
        )));
    }
    let field = PrimeField::new(p)?;
    let g = fabc_raw(field, a, b, c as i64).gcd(&fabc_raw(field, a, b, c as i64 - 1));
    Ok((g.is_constant(), g))
}

/// True iff `f` has no repeated roots other than 0 and 1.
pub fn separable_away_from_01(f: &UniPoly) -> Result<bool> {
    let (_, _, rest) = f.strip_zero_one()?;
    Ok(rest.gcd(&rest.derivative()).is_constant())
}

/// Cheap necessary condition for `f(p1)` and `f(p2)` to be proportional.
/// `false` certifies that they are not; `true` is inconclusive.
pub fn proportionality_obstruction(p1: &FabcParams, p2: &FabcParams) -> Result<bool> {
    p1.check()?;
    p2.check()?;
    if p1.p != p2.p {
        return Err(Error::FieldMismatch(p1.p, p2.p));
    }
    let m = [p1.a, p1.b, p1.c, p1.a + p1.b - p1.c].into_iter().min().unwrap();
    if m < 3 {
        return Err(Error::HypothesisNotMet(format!("min(a1, b1, c1, a1+b1-c1) = {m} < 3")));
    }
    if p1.a + p1.b != p2.a + p2.b {
        return Ok(false);
    }
    let p = p1.p as i64;
    let md = |x: i64| x.rem_euclid(p);
    let mut s1 = vec![md(p1.a as i64), md(p1.c as i64), md(p2.c as i64 - p2.b as i64 - 1)];
    let mut s2 = vec![md(p2.a as i64), md(p2.c as i64), md(p1.c as i64 - p1.b as i64 - 1)];
    s1.sort_unstable();
    s1.dedup();
    s2.sort_unstable();
    s2.dedup();
    Ok(s1 == s2)
}

/// `C(c,d) * floor(d/p) == C(c,d-p) * (1 + floor((c-d)/p))` mod p, for `c >= d >= p`.
/// Returns both sides.
pub fn choose_p_less_sides(c: u64, d: u64, field: &PrimeField) -> Result<(u64, u64)> {
    let p = field.p();
    if !(c >= d && d >= p) {
        return Err(Error::HypothesisNotMet(format!("need c >= d >= p, got c={c}, d={d}, p={p}")));
    }
    let lhs = field.mul(crate::ff::binomial_mod_p(c, d, field), field.reduce(d / p));
    let rhs = field.mul(crate::ff::binomial_mod_p(c, d - p, field), field.reduce(1 + (c - d) / p));
    Ok((lhs, rhs))
}

/// Coefficients that can be multiplied by an integer, for `D_{p^k}`.
pub trait CoeffRing: Clone {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn mul_int(&self, n: u64) -> Self;
}

impl CoeffRing for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.field(), self.nvars())
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn mul_int(&self, n: u64) -> Self {
        self.scale(self.field().reduce(n))
    }
}

impl CoeffRing for UniPoly {
    fn zero_like(&self) -> Self {
        UniPoly::zero(self.field())
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn mul_int(&self, n: u64) -> Self {
        self.scale(self.field().reduce(n))
    }
}

/// `D_{p^k}(sum a_i x^i) = sum floor(i/p^k) a_i x^(i-p^k)` on a coefficient list,
/// lowest degree first. Trailing zeros are trimmed.
pub fn dpk_coeffs<C: CoeffRing>(f: &[C], p: u64, k: u32) -> Vec<C> {
    let q = p.pow(k) as usize;
    let mut out: Vec<C> = f.iter().skip(q).enumerate().map(|(j, a)| a.mul_int(((j + q) / q) as u64)).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// `D_{p^k}` on a polynomial over `F_p`.
pub fn dpk(f: &UniPoly, k: u32) -> UniPoly {
    let field = f.field();
    let q = (field.p() as usize).pow(k);
    let co: Vec<u64> =
        f.coeffs().iter().skip(q).enumerate().map(|(j, &a)| field.mul(a, field.reduce(((j + q) / q) as u64))).collect();
    UniPoly::from_coeffs(field, co)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn golden_values() {
        let f = fp(13);
        assert_eq!(fabc(&FabcParams::new(3, 3, 1, 13).unwrap()).unwrap(), UniPoly::from_i64s(f, &[3, 3]));
        let g = fabc(&FabcParams::new(5, 5, 9, 13).unwrap()).unwrap();
        assert_eq!(g, UniPoly::from_i64s(f, &[0, 0, 0, 0, 5, 5]));
        assert_eq!(g.valuation_at(0).unwrap(), 4);
        assert!(fabc(&FabcParams { a: 13, b: 1, c: 1, p: 13 }).is_err());
        assert_eq!(fabc(&FabcParams::new(7, 4, 0, 13).unwrap()).unwrap(), UniPoly::one(f));
    }

    #[test]
    fn derivative_law() {
        let f = fp(13);
        let d = fabc_raw(f, 5, 5, 9).derivative();
        assert_eq!(d, fabc_raw(f, 4, 5, 8).scale(5));
    }

    #[test]
    fn profiles() {
        let q = FabcParams::new(5, 5, 9, 13).unwrap();
        assert_eq!(fabc_profile(&q).unwrap(), Profile { degree: 5, v_t: 4, v_t1: 0 });
        let q = FabcParams::new(11, 3, 12, 13).unwrap();
        assert_eq!(fabc_profile(&q).unwrap().v_t1, 2);
        assert_eq!(fabc_profile(&q).unwrap(), fabc_profile_direct(&q).unwrap());
    }

    #[test]
    fn strip_identities() {
        let q = FabcParams::new(11, 3, 12, 13).unwrap();
        let s = strip(&q).unwrap();
        assert_eq!(s.rebuild().unwrap(), fabc(&q).unwrap());
        let q = FabcParams::new(4, 5, 3, 13).unwrap();
        let s = strip(&q).unwrap();
        assert_eq!((s.s1, s.s2, s.reduced), (0, 0, q));
        // p = 13 = 6 mod 7: phi_3 = f(5,5,9) strips to f((3p-4)/7, (3p-4)/7, (p-6)/7)
        let s = strip(&FabcParams::new(5, 5, 9, 13).unwrap()).unwrap();
        assert_eq!((s.s1, s.reduced.a, s.reduced.b, s.reduced.c), (4, 5, 5, 1));
    }

    #[test]
    fn coprime_cases() {
        assert!(coprime_shift(&FabcParams::new(4, 6, 3, 13).unwrap()).unwrap().0);
        assert!(coprime_shift(&FabcParams::new(12, 12, 1, 13).unwrap()).unwrap().0);
        assert!(matches!(coprime_shift(&FabcParams::new(4, 2, 3, 13).unwrap()), Err(Error::HypothesisNotMet(_))));
    }

    #[test]
    fn separability() {
        let f = fp(13);
        assert!(separable_away_from_01(&UniPoly::from_i64s(f, &[0, 0, 0, 0, 5, 5])).unwrap());
        let sq = UniPoly::linear_root(f, 2).pow(2);
        assert!(!separable_away_from_01(&sq).unwrap());
    }

    #[test]
    fn proportionality() {
        for p in [29u64, 43, 71] {
            let a = (p - 1) / 7;
            if a < 3 {
                continue;
            }
            let x = FabcParams::new(2 * a, 2 * a, a, p).unwrap();
            let y = FabcParams::new(3 * a, 3 * a, a, p).unwrap();
            assert!(!proportionality_obstruction(&x, &y).unwrap());
            assert!(proportionality_obstruction(&x, &x).unwrap());
        }
        let x = FabcParams::new(8, 8, 4, 29).unwrap();
        let y = FabcParams::new(12, 12, 4, 29).unwrap();
        assert!(!proportionality_obstruction(&x, &y).unwrap());
    }

    #[test]
    fn dpk_examples() {
        let f = fp(5);
        let g = UniPoly::from_i64s(f, &[0, 2, 0, 1]);
        assert_eq!(dpk(&g, 0), UniPoly::from_i64s(f, &[2, 0, 3]));
        // x^5 (x+1) + 3  ->  x + 1
        let x1 = UniPoly::from_i64s(f, &[1, 1]);
        let h = x1.shift(5).add(&UniPoly::constant(f, 3));
        assert_eq!(dpk(&h, 1), x1);
        // f2^p f3 with deg f3 < p goes to (f2')^p f3
        let f2 = UniPoly::from_i64s(f, &[2, 0, 1]);
        let f3 = UniPoly::from_i64s(f, &[1, 4, 2]);
        let lhs = dpk(&f2.pow(5).mul(&f3), 1);
        assert_eq!(lhs, f2.derivative().pow(5).mul(&f3));
        let mp = MultiPoly::var(f, 2, 0);
        let co = vec![mp.clone(), mp.clone(), mp.clone(), mp.clone(), mp.clone(), mp.clone(), mp.clone()];
        let d = dpk_coeffs(&co, 5, 1);
        assert_eq!(d.len(), 2);
        assert_eq!(d[1], mp);
    }

    #[test]
    fn choose_p_less() {
        let f = fp(13);
        let (l, r) = choose_p_less_sides(30, 17, &f).unwrap();
        assert_eq!(l, r);
    }
}
