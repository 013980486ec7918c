//! Monodromy data `(m, r, a)` of cyclic covers of the projective line.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A validated monodromy datum for `Z/m`. Labels are kept as residues in `1..m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DatumJson", into = "DatumJson")]
pub struct Datum {
    m: u64,
    a: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct DatumJson {
    m: u64,
    r: usize,
    a: Vec<u64>,
}

impl TryFrom<DatumJson> for Datum {
    type Error = Error;
    fn try_from(j: DatumJson) -> Result<Self> {
        if j.r != j.a.len() {
            return Err(Error::InvalidInput(format!("r = {} but {} labels given", j.r, j.a.len())));
        }
        Datum::new(j.m, j.a)
    }
}

impl From<Datum> for DatumJson {
    fn from(d: Datum) -> Self {
        DatumJson { m: d.m, r: d.a.len(), a: d.a }
    }
}

impl Datum {
    /// Validate `(m, a)`; `r` is the length of `a`.
    pub fn new(m: u64, a: Vec<u64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(format!("degree m = {m} must be at least 2")));
        }
        if a.len() < 3 {
            return Err(Error::InvalidInput(format!("need at least 3 branch points, got {}", a.len())));
        }
        for (i, &x) in a.iter().enumerate() {
            if x % m == 0 {
                return Err(Error::ZeroLabel(i + 1));
            }
            if x >= m {
                return Err(Error::InvalidInput(format!("label a({}) = {x} not in 1..{}", i + 1, m - 1)));
            }
        }
        let g = a.iter().fold(m, |g, &x| gcd(g, x));
        if g != 1 {
            return Err(Error::NotGenerating(g));
        }
        let s: u64 = a.iter().sum();
        if s % m != 0 {
            return Err(Error::SumNonzero(s));
        }
        Ok(Datum { m, a })
    }

    /// Same as [`Datum::new`] but with an explicit branch count to cross-check.
    pub fn validate(m: u64, r: usize, a: Vec<u64>) -> Result<Self> {
        if r != a.len() {
            return Err(Error::InvalidInput(format!("r = {r} but {} labels given", a.len())));
        }
        Self::new(m, a)
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn r(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    /// The text form `m:r:a1,...,ar`.
    pub fn to_text(&self) -> String {
        let a: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        format!("{}:{}:{}", self.m, self.a.len(), a.join(","))
    }

    /// Reorder the labels; `perm[k]` is the old index placed at position `k`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Datum { m: self.m, a: perm.iter().map(|&k| self.a[k]).collect() }
    }

    /// Least tuple over the unit group and all reorderings.
    pub fn canonicalize(&self) -> Self {
        let mut best: Option<Vec<u64>> = None;
        for u in 1..self.m {
            if gcd(u, self.m) != 1 {
                continue;
            }
            let mut t: Vec<u64> = self.a.iter().map(|&x| x * u % self.m).collect();
            t.sort_unstable();
            if best.as_ref().map_or(true, |b| t < *b) {
                best = Some(t);
            }
        }
        Datum { m: self.m, a: best.expect("1 is a unit") }
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        self.canonicalize() == other.canonicalize()
    }

    /// `f(i) = -1 + sum_k <-i a(k)/m>`, with `f(0) = 0`.
    pub fn signature(&self) -> Signature {
        let m = self.m;
        let mut f = vec![0u64; m as usize];
        for i in 1..m {
            let s: u64 = self.a.iter().map(|&x| (m - (i * x) % m) % m).sum();
            // s is a positive multiple of m since the labels generate
            f[i as usize] = s / m - 1;
        }
        Signature { m, r: self.r(), f }
    }

    /// Genus from Riemann-Hurwitz: `2g - 2 = -2m + sum (m - gcd(a(i), m))`.
    pub fn genus(&self) -> u64 {
        let ram: u64 = self.a.iter().map(|&x| self.m - gcd(x, self.m)).sum();
        (ram + 2 - 2 * self.m) / 2
    }

    /// Reduce modulo a divisor `m1` and drop the labels that vanish.
    pub fn quotient(&self, m1: u64) -> Result<Self> {
        if m1 < 2 || self.m % m1 != 0 {
            return Err(Error::InvalidInput(format!("{m1} is not a divisor of {} that is at least 2", self.m)));
        }
        let a: Vec<u64> = self.a.iter().map(|x| x % m1).filter(|&x| x != 0).collect();
        if a.len() < 3 {
            return Err(Error::QuotientDegenerate(a.len()));
        }
        Datum::new(m1, a)
    }

    /// Smallest `i` with `f(m-i) = 1` and `f(i) + f(m-i) >= 2`.
    pub fn find_tau_signature_one(&self) -> Option<u64> {
        let sig = self.signature();
        (1..self.m).find(|&i| sig.f(self.m - i) == 1 && sig.g(i) >= 2)
    }

    pub fn hypothesis_cases(&self) -> HypothesisCases {
        let r = self.r() as u64;
        let m = self.m;
        let s: u64 = self.a.iter().sum();
        let sum_clause = [m, 2 * m, (r - 2) * m, (r - 1) * m].contains(&s);
        let divisor_witness = (2..=m).filter(|d| m % d == 0).find(|&d| {
            let c = self.a.iter().filter(|&&x| x % d == 0).count() as u64;
            c + 4 == r || c + 5 == r
        });
        HypothesisCases { branch_count: r == 4 || r == 5, label_sum: sum_clause, divisor_witness }
    }

    /// Glue the last branch point of `self` to the first of `other`.
    pub fn clutch(&self, other: &Self) -> Result<Clutched> {
        let m = self.m;
        if other.m != m {
            return Err(Error::InvalidInput(format!("degrees differ: {} and {}", m, other.m)));
        }
        let last = *self.a.last().expect("r >= 3");
        let first = other.a[0];
        if (last + first) % m != 0 {
            return Err(Error::NotAdmissible(last, first, m));
        }
        let mut a = self.a[..self.a.len() - 1].to_vec();
        a.extend_from_slice(&other.a[1..]);
        let datum = Datum::new(m, a)?;
        Ok(Clutched { datum, epsilon: gcd(last, m) - 1 })
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl FromStr for Datum {
    type Err = Error;

    /// Parses `m:r:a1,...,ar` or the JSON object form.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("datum json: {e}")));
        }
        let bad = || Error::InvalidInput(format!("datum `{s}` is not of the form m:r:a1,...,ar"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let m: u64 = parts[0].trim().parse().map_err(|_| bad())?;
        let r: usize = parts[1].trim().parse().map_err(|_| bad())?;
        let a = parts[2]
            .split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Datum::validate(m, r, a)
    }
}

/// The signature `f(0..m)` of a datum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    m: u64,
    r: usize,
    f: Vec<u64>,
}

impl Signature {
    pub fn m(&self) -> u64 {
        self.m
    }

    /// `f(i)`, index taken mod m.
    pub fn f(&self, i: u64) -> u64 {
        self.f[(i % self.m) as usize]
    }

    /// `g(i) = f(i) + f(m-i)`.
    pub fn g(&self, i: u64) -> u64 {
        self.f(i) + self.f(self.m - i % self.m)
    }

    pub fn values(&self) -> &[u64] {
        &self.f
    }

    pub fn total(&self) -> u64 {
        self.f.iter().sum()
    }

    /// `f(1),...,f(m-1)` comma separated.
    pub fn to_text(&self) -> String {
        self.f[1..].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// A Frobenius orbit `[i, pi, p^2 i, ...]` in `Z/m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub members: Vec<u64>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn first(&self) -> u64 {
        self.members[0]
    }

    /// `g` on the orbit; it does not depend on the member.
    pub fn g(&self, sig: &Signature) -> u64 {
        sig.g(self.members[0])
    }
}

/// Orbits of `{1..m-1}` under multiplication by `p`, ordered by least member.
pub fn frobenius_orbits(m: u64, p: u64) -> Result<Vec<Orbit>> {
    if gcd(m, p) != 1 {
        return Err(Error::PDividesM(p, m));
    }
    let mut seen = vec![false; m as usize];
    let mut out = Vec::new();
    for i in 1..m {
        if seen[i as usize] {
            continue;
        }
        let mut members = Vec::new();
        let mut x = i;
        while !seen[x as usize] {
            seen[x as usize] = true;
            members.push(x);
            x = x * (p % m) % m;
        }
        out.push(Orbit { members });
    }
    Ok(out)
}

/// The orbit through `i`.
pub fn orbit_of(m: u64, p: u64, i: u64) -> Result<Orbit> {
    if gcd(m, p) != 1 {
        return Err(Error::PDividesM(p, m));
    }
    let i = i % m;
    let mut members = vec![i];
    let mut x = i * (p % m) % m;
    while x != i {
        members.push(x);
        x = x * (p % m) % m;
    }
    Ok(Orbit { members })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCases {
    /// `r` is 4 or 5.
    pub branch_count: bool,
    /// `sum a(i)` is one of `m, 2m, (r-2)m, (r-1)m`.
    pub label_sum: bool,
    /// Least divisor `1 < m1 | m` dividing exactly `r-4` or `r-5` labels.
    pub divisor_witness: Option<u64>,
}

impl HypothesisCases {
    pub fn any(&self) -> bool {
        self.branch_count || self.label_sum || self.divisor_witness.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Clutched {
    pub datum: Datum,
    pub epsilon: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Datum {
        s.parse().unwrap()
    }

    #[test]
    fn validation_errors() {
        assert!(Datum::new(7, vec![3, 1, 1, 2]).is_ok());
        assert_eq!(Datum::new(7, vec![3, 1, 1, 3]), Err(Error::SumNonzero(8)));
        assert_eq!(Datum::new(6, vec![2, 2, 2]), Err(Error::NotGenerating(2)));
        assert_eq!(Datum::new(6, vec![2, 0, 4]), Err(Error::ZeroLabel(2)));
    }

    #[test]
    fn signature_and_genus() {
        let x = d("7:4:3,1,1,2");
        let sig = x.signature();
        assert_eq!(sig.to_text(), "2,1,1,1,1,0");
        // read at conjugate characters this is the listing 0,1,1,1,1,2
        let conj: Vec<u64> = (1..7).map(|i| sig.f(7 - i)).collect();
        assert_eq!(conj, vec![0, 1, 1, 1, 1, 2]);
        assert_eq!(x.genus(), 6);
        for m in [5u64, 7, 11, 13] {
            let y = Datum::new(m, vec![1, 1, m - 2]).unwrap();
            assert_eq!(y.genus(), (m - 1) / 2);
            assert_eq!(y.signature().total(), y.genus());
        }
    }

    #[test]
    fn signature_matches_entry_degrees() {
        // sum_k floor(p <i a(k)/m>) = p (f(m-i) + 1) - (f(-p i) + 1)
        let x = d("7:4:3,1,1,2");
        let sig = x.signature();
        for p in [13u64, 29, 31, 17] {
            for i in 1..7u64 {
                let s: u64 = x.a().iter().map(|&a| p * (i * a % 7) / 7).sum();
                let pi = p * i % 7;
                assert_eq!(s + sig.f(7 - pi) + 1, p * (sig.f(7 - i) + 1), "p={p} i={i}");
            }
        }
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(d("7:4:3,2,1,1").canonicalize(), d("7:4:1,1,2,3").canonicalize());
        assert!(d("7:4:1,6,3,4").equivalent(&d("7:4:2,5,6,1")));
        assert_eq!(d("5:4:1,1,1,2").canonicalize(), d("5:4:1,1,1,2"));
    }

    #[test]
    fn orbits() {
        let o = frobenius_orbits(7, 13).unwrap();
        let ms: Vec<Vec<u64>> = o.iter().map(|x| x.members.clone()).collect();
        assert_eq!(ms, vec![vec![1, 6], vec![2, 5], vec![3, 4]]);
        assert_eq!(frobenius_orbits(7, 29).unwrap().len(), 6);
        assert_eq!(frobenius_orbits(7, 3).unwrap()[0].members, vec![1, 3, 2, 6, 4, 5]);
        assert_eq!(frobenius_orbits(7, 14), Err(Error::PDividesM(14, 7)));
    }

    #[test]
    fn quotients() {
        assert_eq!(d("6:4:1,1,1,3").quotient(3).unwrap(), d("3:3:1,1,1"));
        assert_eq!(d("15:4:3,5,6,1").quotient(5).unwrap(), d("5:3:3,1,1"));
        assert_eq!(d("7:4:3,1,1,2").quotient(7).unwrap(), d("7:4:3,1,1,2"));
        assert_eq!(d("6:4:3,3,1,5").quotient(3), Err(Error::QuotientDegenerate(2)));
    }

    #[test]
    fn tau_and_cases() {
        let x = d("7:4:3,1,1,2");
        assert_eq!(x.find_tau_signature_one(), Some(2));
        let h = x.hypothesis_cases();
        assert!(h.branch_count && h.label_sum);
        assert!(d("7:6:1,1,1,1,1,2").hypothesis_cases().label_sum);
        assert_eq!(d("9:6:3,3,3,1,1,7").hypothesis_cases().divisor_witness, None);
        assert_eq!(d("3:3:1,1,1").find_tau_signature_one(), None);
    }

    #[test]
    fn clutching() {
        let c = d("7:4:3,1,1,2").clutch(&d("7:4:5,1,3,5")).unwrap();
        assert_eq!(c.datum, d("7:6:3,1,1,1,3,5"));
        assert_eq!(c.epsilon, 0);
        assert!(matches!(d("7:4:3,1,1,2").clutch(&d("7:4:1,1,2,3")), Err(Error::NotAdmissible(..))));
        let e = d("6:4:1,1,1,3").clutch(&d("6:4:3,1,1,1")).unwrap();
        assert_eq!(e.epsilon, 2);
    }

    #[test]
    fn json_roundtrip() {
        let x = d("7:4:3,1,1,2");
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"m":7,"r":4,"a":[3,1,1,2]}"#);
        assert_eq!(s.parse::<Datum>().unwrap(), x);
    }
}
