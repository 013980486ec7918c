//! Newton polygons, mu-ordinary polygons per Frobenius orbit, the stratum
//! census for `r = 4` families with `m` in `{5, 7}`, and prime surveys.

use std::fmt;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ff::{self, ExtElem, PrimeField, UniPoly};
use crate::hassewitt::{phi_specialized_at, OrbitContext, DEFAULT_TERM_BUDGET};
use crate::monodromy::{frobenius_orbits, Datum, Orbit, Signature};

pub type Slope = Ratio<u64>;

/// A multiset of slopes in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NewtonPolygon {
    parts: Vec<(Slope, u64)>,
}

impl NewtonPolygon {
    pub fn new(parts: impl IntoIterator<Item = (Slope, u64)>) -> Result<Self> {
        let mut v: Vec<(Slope, u64)> = Vec::new();
        for (s, k) in parts {
            if s > Slope::from_integer(1) {
                return Err(Error::InvalidInput(format!("slope {s} outside [0, 1]")));
            }
            if k > 0 {
                v.push((s, k));
            }
        }
        v.sort();
        let mut out: Vec<(Slope, u64)> = Vec::new();
        for (s, k) in v {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += k,
                _ => out.push((s, k)),
            }
        }
        Ok(NewtonPolygon { parts: out })
    }

    pub fn empty() -> Self {
        NewtonPolygon::default()
    }

    /// `(a/b)^k` shorthand.
    pub fn slope(n: u64, d: u64, k: u64) -> Self {
        NewtonPolygon::new([(Slope::new(n, d), k)]).expect("slope in range")
    }

    pub fn parts(&self) -> &[(Slope, u64)] {
        &self.parts
    }

    pub fn multiplicity(&self, s: Slope) -> u64 {
        self.parts.iter().find(|(x, _)| *x == s).map_or(0, |(_, k)| *k)
    }

    pub fn height(&self) -> u64 {
        self.parts.iter().map(|(_, k)| k).sum()
    }

    pub fn slope_sum(&self) -> Slope {
        self.parts.iter().fold(Slope::from_integer(0), |acc, (s, k)| acc + s * *k)
    }

    pub fn is_symmetric(&self) -> bool {
        self.parts.iter().all(|(s, k)| self.multiplicity(Slope::from_integer(1) - s) == *k)
    }

    pub fn sum(&self, other: &Self) -> Self {
        NewtonPolygon::new(self.parts.iter().chain(&other.parts).copied()).expect("valid parts")
    }

    /// Grouped text, e.g. `(0,1)^4 + (1/2,1/2)^2`; falls back to `s^k` for
    /// slopes without a symmetric partner.
    pub fn to_text(&self) -> String {
        if self.parts.is_empty() {
            return "()".into();
        }
        let half = Slope::new(1, 2);
        let mut out = Vec::new();
        if self.is_symmetric() {
            for (s, k) in &self.parts {
                if *s < half {
                    out.push(format!("({},{})^{}", s, Slope::from_integer(1) - s, k));
                } else if *s == half {
                    if k % 2 == 0 {
                        out.push(format!("(1/2,1/2)^{}", k / 2));
                    } else {
                        out.push(format!("(1/2)^{k}"));
                    }
                }
            }
        } else {
            for (s, k) in &self.parts {
                out.push(format!("({s})^{k}"));
            }
        }
        out.join(" + ")
    }
}

impl NewtonPolygon {
    /// Inverse of [`NewtonPolygon::to_text`].
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "()" || s.is_empty() {
            return Ok(NewtonPolygon::empty());
        }
        let bad = || Error::InvalidInput(format!("bad polygon text: {s}"));
        let mut parts = Vec::new();
        for item in s.split(" + ") {
            let (body, k) = item.rsplit_once('^').ok_or_else(bad)?;
            let k: u64 = k.trim().parse().map_err(|_| bad())?;
            let body = body.trim().strip_prefix('(').and_then(|b| b.strip_suffix(')')).ok_or_else(bad)?;
            for sl in body.split(',') {
                let r: Slope = sl.trim().parse().map_err(|_| bad())?;
                parts.push((r, k));
            }
        }
        NewtonPolygon::new(parts)
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NewtonPolygon({})", self.to_text())
    }
}

impl<'de> Deserialize<'de> for NewtonPolygon {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        NewtonPolygon::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_text())
    }
}

pub fn polygon_sum(a: &NewtonPolygon, b: &NewtonPolygon) -> NewtonPolygon {
    a.sum(b)
}

/// Slopes 0 and 1, each with multiplicity `eps`.
pub fn ord_polygon(eps: u64) -> NewtonPolygon {
    NewtonPolygon::new([(Slope::from_integer(0), eps), (Slope::from_integer(1), eps)]).expect("valid")
}

/// `lambda_j = #{tau in O : f(tau) >= g + 1 - j} / l`, `j = 1..g`, each `l` times.
pub fn mu_ordinary_orbit(orbit: &Orbit, sig: &Signature) -> NewtonPolygon {
    let l = orbit.len() as u64;
    let g = orbit.g(sig);
    let parts = (1..=g).map(|j| {
        let c = orbit.members.iter().filter(|&&t| sig.f(t) + j >= g + 1).count() as u64;
        (Slope::new(c, l), l)
    });
    NewtonPolygon::new(parts).expect("slopes in range")
}

/// Single slope `sum f / (l g)` with multiplicity `l g`.
pub fn basic_orbit(orbit: &Orbit, sig: &Signature) -> NewtonPolygon {
    let l = orbit.len() as u64;
    let g = orbit.g(sig);
    if g == 0 {
        return NewtonPolygon::empty();
    }
    let s: u64 = orbit.members.iter().map(|&t| sig.f(t)).sum();
    NewtonPolygon::slope(s, l * g, l * g)
}

pub fn mu_ordinary(d: &Datum, p: u64) -> Result<NewtonPolygon> {
    let sig = d.signature();
    Ok(frobenius_orbits(d.m(), p)?.iter().fold(NewtonPolygon::empty(), |acc, o| acc.sum(&mu_ordinary_orbit(o, &sig))))
}

pub fn basic(d: &Datum, p: u64) -> Result<NewtonPolygon> {
    let sig = d.signature();
    Ok(frobenius_orbits(d.m(), p)?.iter().fold(NewtonPolygon::empty(), |acc, o| acc.sum(&basic_orbit(o, &sig))))
}

/// Dimension of the ambient PEL moduli space: `sum f(tau) f(tau*)` over
/// unordered pairs, `f (f + 1) / 2` at a self-dual character.
pub fn shimura_dim(d: &Datum) -> u64 {
    let m = d.m();
    let sig = d.signature();
    (1..m)
        .map(|t| {
            let s = m - t;
            if t < s {
                sig.f(t) * sig.f(s)
            } else if t == s {
                sig.f(t) * (sig.f(t) + 1) / 2
            } else {
                0
            }
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StratumKind {
    MuOrdinary,
    W2,
    W3,
    Basic,
    Nu,
}

impl fmt::Display for StratumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StratumKind::MuOrdinary => "mu-ordinary",
            StratumKind::W2 => "w2",
            StratumKind::W3 => "w3",
            StratumKind::Basic => "basic",
            StratumKind::Nu => "nu",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumLabel {
    pub kind: StratumKind,
    /// `p mod m`.
    pub class: u64,
    pub polygon: NewtonPolygon,
}

/// The family with `m = 7` whose strata carry the `w2` / `w3` labels.
pub fn m7_family() -> Datum {
    Datum::new(7, vec![3, 1, 1, 2]).expect("valid datum")
}

/// The specialized `phi_2` and `phi_3` of the `m = 7` family.
pub fn m7_phis(p: u64) -> Result<(UniPoly, UniPoly)> {
    let field = PrimeField::new(p)?;
    let d = m7_family();
    let m = 7;
    if p % m == 0 {
        return Err(Error::PDividesM(p, m));
    }
    Ok((phi_specialized_at(&d, field, 2, 1, 1)?, phi_specialized_at(&d, field, 3, 1, 1)?))
}

fn m7_polygons(p: u64) -> Result<(NewtonPolygon, NewtonPolygon, NewtonPolygon)> {
    let d = m7_family();
    let sig = d.signature();
    let mu = mu_ordinary(&d, p)?;
    let orbits = frobenius_orbits(7, p)?;
    // nu swaps the orbit through 2 to its basic polygon
    let nu = orbits.iter().fold(NewtonPolygon::empty(), |acc, o| {
        let part = if o.members.contains(&2) || o.members.contains(&5) {
            basic_orbit(o, &sig)
        } else {
            mu_ordinary_orbit(o, &sig)
        };
        acc.sum(&part)
    });
    Ok((mu, nu, basic(&d, p)?))
}

/// Stratum of the curve at `alpha` in the `m = 7` family, for `p = +-1 mod 7`.
pub fn classify_m7(p: u64, alpha: &ExtElem) -> Result<StratumLabel> {
    let class = p % 7;
    if class != 1 && class != 6 {
        return Err(Error::WrongCongruenceClass(p, "p must be 1 or 6 mod 7".into()));
    }
    if alpha.field.base().p() != p {
        return Err(Error::FieldMismatch(alpha.field.base().p(), p));
    }
    let k = &alpha.field;
    if alpha.value == k.from_base(0) || alpha.value == k.from_base(1) {
        return Err(Error::InvalidInput("alpha must avoid 0 and 1".into()));
    }
    let (phi2, phi3) = m7_phis(p)?;
    let z2 = alpha.eval(&phi2).is_zero();
    let z3 = alpha.eval(&phi3).is_zero();
    let (mu, nu, beta) = m7_polygons(p)?;
    let (kind, polygon) = match (z2, z3) {
        (false, false) => (StratumKind::MuOrdinary, mu),
        (false, true) => (StratumKind::W2, nu),
        (true, false) => (StratumKind::W3, nu),
        (true, true) => (StratumKind::Basic, beta),
    };
    Ok(StratumLabel { kind, class, polygon })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumReport {
    pub label: StratumKind,
    pub dim: u64,
    /// `None` when the available certificates do not decide.
    pub nonempty: Option<bool>,
    pub certificate: String,
    pub polygon: Option<NewtonPolygon>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub datum: String,
    pub p: u64,
    pub class: u64,
    /// Entries were specialized exactly rather than by closed form.
    pub exact: bool,
    pub strata: Vec<StratumReport>,
}

impl CensusRecord {
    pub fn stratum(&self, kind: StratumKind) -> Option<&StratumReport> {
        self.strata.iter().find(|s| s.label == kind)
    }

    pub fn csv_header() -> &'static str {
        "datum,p,class,label,dim,nonempty,certificate"
    }

    pub fn to_csv(&self) -> String {
        self.strata
            .iter()
            .map(|s| {
                let ne = match s.nonempty {
                    Some(true) => "true",
                    Some(false) => "false",
                    None => "unknown",
                };
                format!("{},{},{},{},{},{},\"{}\"", self.datum, self.p, self.class, s.label, s.dim, ne, s.certificate.replace('"', "'"))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Square-free part of `f` after removing the roots 0 and 1.
fn radical_off01(f: &UniPoly) -> Result<UniPoly> {
    let (_, _, rest) = f.strip_zero_one()?;
    Ok(ff::square_free(&rest).into_iter().fold(UniPoly::one(f.field()), |acc, (g, _)| acc.mul(&g)).monic())
}

fn deg(f: &UniPoly) -> usize {
    f.degree().unwrap_or(0)
}

/// One vanishing condition per orbit pair `O u O*` on which the polygon can move.
struct Condition {
    b0: u64,
    orbit: Vec<u64>,
    poly: Option<UniPoly>,
    profile: Option<crate::hassewitt::H1Profile>,
}

fn conditions(d: &Datum, p: u64, budget: u64) -> Result<Vec<Condition>> {
    let m = d.m();
    let sig = d.signature();
    let orbits = frobenius_orbits(m, p)?;
    let mut seen = vec![false; m as usize];
    let mut out = Vec::new();
    for o in &orbits {
        if seen[o.first() as usize] {
            continue;
        }
        let mut pair: Vec<u64> = o.members.clone();
        for &t in &o.members {
            if !pair.contains(&(m - t)) {
                pair.push(m - t);
            }
        }
        for &t in &pair {
            seen[t as usize] = true;
        }
        if !pair.iter().any(|&t| sig.f(t) * sig.f(m - t) > 0) {
            continue;
        }
        pair.sort();
        let cands = OrbitContext::candidates(d, p);
        let Some(&b0) = cands.iter().find(|b| pair.contains(b)) else {
            out.push(Condition { b0: 0, orbit: pair, poly: None, profile: None });
            continue;
        };
        let ctx = OrbitContext::new(d, p, b0)?;
        let (poly, profile) = match ctx.h1(budget) {
            Ok(h) => (Some(h), None),
            Err(Error::DegreeBudgetExceeded { .. }) => (None, ctx.h1_profile().ok()),
            Err(e) => return Err(e),
        };
        out.push(Condition { b0, orbit: pair, poly, profile });
    }
    Ok(out)
}

fn check_census_input(d: &Datum, p: u64) -> Result<()> {
    if d.r() != 4 || !(d.m() == 5 || d.m() == 7) {
        return Err(Error::UnsupportedFamily(format!("census covers r = 4 and m in {{5, 7}}, got {}", d.to_text())));
    }
    PrimeField::new(p)?;
    if p % d.m() == 0 {
        return Err(Error::PDividesM(p, d.m()));
    }
    Ok(())
}

fn is_m7_family(d: &Datum) -> bool {
    let mut a = d.a().to_vec();
    a.sort();
    d.m() == 7 && a == [1, 1, 2, 3]
}

/// Nonemptiness of the strata of `d` at `p` on the family, with certificates.
pub fn census(d: &Datum, p: u64) -> Result<CensusRecord> {
    census_with_budget(d, p, DEFAULT_TERM_BUDGET)
}

pub fn census_with_budget(d: &Datum, p: u64, budget: u64) -> Result<CensusRecord> {
    check_census_input(d, p)?;
    let m = d.m();
    let class = p % m;
    let dim = shimura_dim(d);
    let mu = mu_ordinary(d, p)?;
    let conds = conditions(d, p, budget)?;
    let mut strata = vec![StratumReport {
        label: StratumKind::MuOrdinary,
        dim,
        nonempty: Some(true),
        certificate: "open dense: vanishing conditions are nonzero polynomials".into(),
        polygon: Some(mu.clone()),
    }];
    let exact = p <= 3 * m;
    if is_m7_family(d) && (class == 1 || class == 6) {
        let (phi2, phi3) = m7_phis(p)?;
        let r2 = radical_off01(&phi2)?;
        let r3 = radical_off01(&phi3)?;
        let g = r2.gcd(&r3);
        let (_, nu, beta) = m7_polygons(p)?;
        let text = |f: &UniPoly| if deg(f) == 0 { "1".to_string() } else { f.to_text() };
        strata.push(StratumReport {
            label: StratumKind::W2,
            dim: 1,
            nonempty: Some(deg(&r3) > deg(&g)),
            certificate: format!("deg rad(phi3) = {}, deg gcd = {}", deg(&r3), deg(&g)),
            polygon: Some(nu.clone()),
        });
        strata.push(StratumReport {
            label: StratumKind::W3,
            dim: 1,
            nonempty: Some(deg(&r2) > deg(&g)),
            certificate: format!("deg rad(phi2) = {}, deg gcd = {}", deg(&r2), deg(&g)),
            polygon: Some(nu),
        });
        strata.push(StratumReport {
            label: StratumKind::Basic,
            dim: 0,
            nonempty: Some(deg(&g) > 0),
            certificate: format!("gcd = {}", text(&g)),
            polygon: Some(beta),
        });
        return Ok(CensusRecord { datum: d.to_text(), p, class, exact, strata });
    }
    let (label, sdim, polygon) = if is_m7_family(d) {
        (StratumKind::Basic, 1, Some(basic(d, p)?))
    } else {
        (StratumKind::Nu, dim.saturating_sub(1), None)
    };
    let report = decide_nu(&conds)?;
    strata.push(StratumReport { label, dim: sdim, nonempty: report.0, certificate: report.1, polygon });
    Ok(CensusRecord { datum: d.to_text(), p, class, exact, strata })
}

/// A point where exactly one condition vanishes.
fn decide_nu(conds: &[Condition]) -> Result<(Option<bool>, String)> {
    if conds.is_empty() {
        return Ok((Some(false), "no orbit with a moving polygon".into()));
    }
    if conds.len() == 1 {
        let c = &conds[0];
        if let Some(h) = &c.poly {
            let r = radical_off01(h)?;
            return Ok((Some(deg(&r) > 0), format!("B0 = {}: deg rad(h1 off 0,1) = {}", c.b0, deg(&r))));
        }
        if let Some(pr) = &c.profile {
            let ok = pr.value_at_one != 0 && pr.v_t < pr.degree;
            let cert = format!("B0 = {}: h1(1) = {}, v_t = {}, deg = {}", c.b0, pr.value_at_one, pr.v_t, pr.degree);
            return Ok((if ok { Some(true) } else { None }, cert));
        }
        return Ok((None, format!("orbit {:?}: no usable base character", c.orbit)));
    }
    let mut rads = Vec::new();
    for c in conds {
        match &c.poly {
            Some(h) => rads.push(radical_off01(h)?),
            None => return Ok((None, format!("orbit {:?}: h1 over budget", c.orbit))),
        }
    }
    let mut certs = Vec::new();
    let mut any = false;
    for (k, r) in rads.iter().enumerate() {
        let mut own = r.clone();
        for (i, o) in rads.iter().enumerate() {
            if i != k {
                own = own.exact_div(&own.gcd(o))?;
            }
        }
        certs.push(format!("B0 = {}: {} private roots", conds[k].b0, deg(&own)));
        any |= deg(&own) > 0;
    }
    Ok((Some(any), certs.join("; ")))
}

/// Primes `p = class mod m` in increasing order, skipping `p | m`.
pub fn primes_in_class(m: u64, class: u64, count: usize) -> Vec<u64> {
    (3u64..)
        .filter(|&p| p % m == class % m && m % p != 0 && ff::is_prime_u64(p))
        .take(count)
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Survey {
    pub datum: String,
    pub class: u64,
    pub count: usize,
    /// Primes where the lowest listed stratum is nonempty.
    pub last_nonempty: usize,
    pub records: Vec<CensusRecord>,
}

impl Survey {
    pub fn from_records(d: &Datum, class: u64, count: usize, records: Vec<CensusRecord>) -> Self {
        let last_nonempty =
            records.iter().filter(|r| r.strata.last().and_then(|s| s.nonempty) == Some(true)).count();
        Survey { datum: d.to_text(), class: class % d.m(), count, last_nonempty, records }
    }
}

/// Census at each prime on `workers` threads, in the order given.
pub fn prime_survey_primes(d: &Datum, primes: &[u64], workers: usize) -> Result<Vec<CensusRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    pool.install(|| primes.par_iter().map(|&p| census(d, p)).collect())
}

/// Census over the first `count` primes in `class` mod `m`.
pub fn prime_survey(d: &Datum, class: u64, count: usize, workers: usize) -> Result<Survey> {
    if d.r() != 4 || !(d.m() == 5 || d.m() == 7) {
        return Err(Error::UnsupportedFamily(d.to_text()));
    }
    let primes = primes_in_class(d.m(), class, count);
    let records = prime_survey_primes(d, &primes, workers)?;
    Ok(Survey::from_records(d, class, count, records))
}

/// For `p = -1 mod m`, `m` odd and two equal labels: the specialized entries of
/// every orbit `{tau, tau*}` with `f = (1, 1)` vanish at `t = -1`.
pub fn supersingular_minus_one(d: &Datum, p: u64) -> Result<bool> {
    Ok(minus_one_values(d, p)?.iter().all(|(_, v)| *v == 0))
}

/// `(tau, phi_tau(-1))` for the orbits checked by [`supersingular_minus_one`].
pub fn minus_one_values(d: &Datum, p: u64) -> Result<Vec<(u64, u64)>> {
    let m = d.m();
    if d.r() != 4 {
        return Err(Error::UnsupportedFamily(d.to_text()));
    }
    if m % 2 == 0 {
        return Err(Error::HypothesisNotMet("m must be odd".into()));
    }
    let field = PrimeField::new(p)?;
    if p % m != m - 1 {
        return Err(Error::HypothesisNotMet(format!("p = {p} is not -1 mod {m}")));
    }
    let a = d.a();
    let pair = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).find(|&(i, j)| a[i] == a[j]);
    let Some((i, j)) = pair else {
        return Err(Error::HypothesisNotMet("labels are pairwise distinct".into()));
    };
    let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
    let dd = d.permuted(&[rest[0], i, j, rest[1]]);
    let sig = dd.signature();
    let mut out = Vec::new();
    for t in 1..m {
        if sig.f(t) == 1 && sig.f(m - t) == 1 {
            let phi = phi_specialized_at(&dd, field, t, 1, 1)?;
            out.push((t, phi.eval(p - 1)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i64]) -> UniPoly {
        UniPoly::from_i64s(PrimeField::new(p).unwrap(), c)
    }

    #[test]
    fn family_polygons_by_class() {
        let d = m7_family();
        let half = |k: u64| NewtonPolygon::slope(1, 2, 2 * k);
        let ord = ord_polygon;
        for (p, want) in [
            (3u64, NewtonPolygon::slope(1, 6, 6).sum(&NewtonPolygon::slope(5, 6, 6))),
            (13, ord(4).sum(&half(2))),
            (29, ord(6)),
            (11, ord(3).sum(&NewtonPolygon::slope(1, 3, 3)).sum(&NewtonPolygon::slope(2, 3, 3))),
        ] {
            let mu = mu_ordinary(&d, p).unwrap();
            assert_eq!(mu, want, "p = {p}");
            assert_eq!(mu.height(), 2 * d.genus());
            assert_eq!(mu.slope_sum(), Slope::from_integer(d.genus()));
        }
        assert_eq!(basic(&d, 3).unwrap(), half(6));
        assert_eq!(basic(&d, 29).unwrap(), ord(2).sum(&half(4)));
    }

    #[test]
    fn text_form() {
        let p = ord_polygon(4).sum(&NewtonPolygon::slope(1, 2, 4));
        assert_eq!(p.to_text(), "(0,1)^4 + (1/2,1/2)^2");
        assert_eq!(NewtonPolygon::parse(&p.to_text()).unwrap(), p);
        let q = NewtonPolygon::slope(1, 3, 3);
        assert_eq!(NewtonPolygon::parse(&q.to_text()).unwrap(), q);
        assert_eq!(ord_polygon(0), NewtonPolygon::empty());
    }

    #[test]
    fn census_p13() {
        let r = census(&m7_family(), 13).unwrap();
        let ne: Vec<_> = r.strata.iter().map(|s| (s.label, s.dim, s.nonempty)).collect();
        assert_eq!(
            ne,
            vec![
                (StratumKind::MuOrdinary, 2, Some(true)),
                (StratumKind::W2, 1, Some(false)),
                (StratumKind::W3, 1, Some(false)),
                (StratumKind::Basic, 0, Some(true)),
            ]
        );
        assert_eq!(r.stratum(StratumKind::Basic).unwrap().certificate, "gcd = 1 + 1*t");
    }

    #[test]
    fn census_basic_by_gcd() {
        let r = census(&m7_family(), 29).unwrap();
        assert_eq!(r.stratum(StratumKind::Basic).unwrap().nonempty, Some(false));
        let r = census(&m7_family(), 113).unwrap();
        let b = r.stratum(StratumKind::Basic).unwrap();
        assert_eq!(b.nonempty, Some(true));
        assert_eq!(b.certificate, format!("gcd = {}", poly(113, &[1, 42, 1]).to_text()));
    }

    #[test]
    fn classify_at_roots() {
        let f = PrimeField::new(13).unwrap();
        let k = ff::ExtField::new(&poly(13, &[0, 1])).unwrap_or_else(|_| ff::ExtField::random(f, 1, 1));
        let alpha = k.elem(&k.from_base(12));
        assert_eq!(classify_m7(13, &alpha).unwrap().kind, StratumKind::Basic);
        let alpha = k.elem(&k.from_base(5));
        assert_eq!(classify_m7(13, &alpha).unwrap().kind, StratumKind::MuOrdinary);
        assert!(matches!(classify_m7(11, &alpha), Err(Error::WrongCongruenceClass(..)) | Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn minus_one_cases() {
        assert!(supersingular_minus_one(&m7_family(), 13).unwrap());
        assert!(supersingular_minus_one(&Datum::new(5, vec![1, 1, 1, 2]).unwrap(), 19).unwrap());
        let d = Datum::new(11, vec![1, 2, 3, 5]).unwrap();
        assert!(matches!(supersingular_minus_one(&d, 43), Err(Error::HypothesisNotMet(_))));
    }

    #[test]
    fn classes_survey_order() {
        assert_eq!(primes_in_class(7, 1, 3), vec![29, 43, 71]);
        assert!(primes_in_class(7, 1, 0).is_empty());
    }

    #[test]
    fn generic_m5() {
        let d = Datum::new(5, vec![1, 1, 1, 2]).unwrap();
        for p in [17u64, 19, 29, 31] {
            let r = census(&d, p).unwrap();
            assert_eq!(r.strata.len(), 2);
            assert_eq!(r.strata[1].nonempty, Some(true), "p = {p}: {:?}", r.strata[1]);
        }
        assert!(matches!(census(&Datum::new(11, vec![1, 2, 3, 5]).unwrap(), 47), Err(Error::UnsupportedFamily(_))));
    }
}
