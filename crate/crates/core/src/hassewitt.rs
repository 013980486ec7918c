//! Hasse-Witt and psi entries of cyclic covers, chains of entry matrices along a
//! Frobenius orbit, the composites `h0` and `h1`, and divisor multiplicities.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fabc::fabc_raw;
use crate::ff::{self, BinomTable, ExtElem, ExtField, Factorization, MultiPoly, PrimeField, UniPoly};
use crate::monodromy::{gcd, Datum, Signature};

/// Default cap on terms of multivariate composites and on dense degrees.
pub const DEFAULT_TERM_BUDGET: u64 = 10_000_000;

/// `b_k = floor(p <tau a(k) / m>)`.
pub fn entry_b(d: &Datum, p: u64, tau: u64) -> Vec<u64> {
    let m = d.m();
    d.a().iter().map(|&a| p * (tau % m * a % m) / m).collect()
}

fn binoms(field: PrimeField) -> BinomTable {
    BinomTable::new(field, field.p() as usize - 1)
}

/// `f(b_1..b_r; N) = sum_{n_1+..+n_r=N} prod C(b_k, n_k) x^n`, all `b_k < p`.
pub fn f_multi(field: PrimeField, b: &[u64], n: i64) -> MultiPoly {
    let r = b.len();
    let total: u64 = b.iter().sum();
    let mut out = MultiPoly::zero(field, r);
    if n < 0 || n as u64 > total {
        return out;
    }
    let tab = binoms(field);
    let mut suffix = vec![0u64; r + 1];
    for k in (0..r).rev() {
        suffix[k] = suffix[k + 1] + b[k];
    }
    let mut e = vec![0u32; r];
    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        rem: u64,
        c: u64,
        b: &[u64],
        suffix: &[u64],
        e: &mut Vec<u32>,
        tab: &BinomTable,
        field: PrimeField,
        out: &mut MultiPoly,
    ) {
        let r = b.len();
        if k == r - 1 {
            e[k] = rem as u32;
            out.add_term(e.clone(), field.mul(c, tab.binom(b[k] as i64, rem as i64)));
            return;
        }
        let lo = rem.saturating_sub(suffix[k + 1]);
        let hi = b[k].min(rem);
        for nk in lo..=hi {
            e[k] = nk as u32;
            let c2 = field.mul(c, tab.binom(b[k] as i64, nk as i64));
            rec(k + 1, rem - nk, c2, b, suffix, e, tab, field, out);
        }
    }
    rec(0, n as u64, 1, b, &suffix, &mut e, &tab, field, &mut out);
    out
}

/// Elementary symmetric polynomial of degree `deg` in the variables other than `skip`.
fn elementary_without(field: PrimeField, r: usize, skip: usize, deg: usize) -> MultiPoly {
    let vars: Vec<usize> = (0..r).filter(|&k| k != skip).collect();
    let mut out = MultiPoly::zero(field, r);
    if deg > vars.len() {
        return out;
    }
    let n = vars.len();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != deg {
            continue;
        }
        let mut e = vec![0u32; r];
        for (i, &v) in vars.iter().enumerate() {
            if mask >> i & 1 == 1 {
                e[v] = 1;
            }
        }
        out.add_term(e, 1);
    }
    out
}

/// Coefficient of `x^(j'-1)` in `prod_{l != k} (x - x_l)`.
pub fn q_coeff(field: PrimeField, r: usize, k: usize, jp: usize) -> MultiPoly {
    let deg = r - jp;
    let e = elementary_without(field, r, k, deg);
    if deg % 2 == 1 {
        e.neg()
    } else {
        e
    }
}

fn check_index(name: &str, v: usize, hi: u64) -> Result<()> {
    if v == 0 || v as u64 > hi {
        return Err(Error::IndexOutOfRange(format!("{name} = {v} not in 1..={hi}")));
    }
    Ok(())
}

/// Entry `(j', j)` of the Hasse-Witt block at the character `tau`: an
/// `f(p tau*) x f(tau*)` matrix.
pub fn phi_entry(d: &Datum, field: PrimeField, tau: u64, jp: usize, j: usize) -> Result<MultiPoly> {
    let m = d.m();
    let p = field.p();
    let sig = d.signature();
    let tau = tau % m;
    if tau == 0 {
        return Err(Error::IndexOutOfRange("character index 0".into()));
    }
    check_index("j", j, sig.f(m - tau))?;
    check_index("j'", jp, sig.f(m - p % m * tau % m))?;
    let b = entry_b(d, p, tau);
    let s: u64 = b.iter().sum();
    let n = s as i64 - (j as i64 * p as i64 - jp as i64);
    let f = f_multi(field, &b, n);
    Ok(if n % 2 != 0 { f.neg() } else { f })
}

/// Whether the psi formula applies at `tau`.
pub fn psi_defined(d: &Datum, p: u64, tau: u64) -> bool {
    let m = d.m();
    let sig = d.signature();
    gcd(tau, m) == 1 && (sig.f(m - p % m * tau % m) == 0 || sig.f(m - tau) == sig.g(tau))
}

/// Entry `(j', j)` of the psi block at `tau`: an `f(p tau) x f(tau*)` matrix.
pub fn psi_entry(d: &Datum, field: PrimeField, tau: u64, jp: usize, j: usize) -> Result<MultiPoly> {
    let m = d.m();
    let p = field.p();
    let r = d.r();
    let sig = d.signature();
    let tau = tau % m;
    if tau == 0 || !psi_defined(d, p, tau) {
        return Err(Error::PsiHypothesisNotMet(format!(
            "tau = {tau}: need gcd(tau, m) = 1 and f(p tau*) = 0 or f(tau*) = g(tau)"
        )));
    }
    check_index("j", j, sig.f(m - tau))?;
    check_index("j'", jp, sig.f(p % m * tau % m))?;
    if jp > r {
        return Err(Error::IndexOutOfRange(format!("j' = {jp} > r = {r}")));
    }
    let b = entry_b(d, p, tau);
    let s: u64 = b.iter().sum();
    let n = s as i64 - j as i64 * p as i64;
    let mut acc = MultiPoly::zero(field, r);
    for k in 0..r {
        if b[k] == 0 {
            continue;
        }
        let mut bk = b.clone();
        bk[k] -= 1;
        let rk = f_multi(field, &bk, n);
        if rk.is_zero() {
            continue;
        }
        let q = q_coeff(field, r, k, jp);
        acc = acc.add(&rk.mul(&q).scale(b[k]));
    }
    // psi = -sum b_k r_k q_k with r_k carrying (-1)^N
    Ok(if n % 2 == 0 { acc.neg() } else { acc })
}

/// Keep the monomials maximizing `v_{x1} - v_{x4}` and set `x2 = t, x3 = 1, x4 = 0`.
pub fn specialize_infty(f: &MultiPoly) -> Result<UniPoly> {
    if f.nvars() != 4 {
        return Err(Error::UnsupportedFamily(format!("specialization needs r = 4, got {}", f.nvars())));
    }
    let field = f.field();
    let best = f.terms().map(|(e, _)| e[0] as i64 - e[3] as i64).max();
    let Some(best) = best else {
        return Ok(UniPoly::zero(field));
    };
    let mut co: Vec<u64> = Vec::new();
    for (e, &c) in f.terms() {
        if e[0] as i64 - e[3] as i64 != best || e[3] != 0 {
            continue;
        }
        let k = e[1] as usize;
        if co.len() <= k {
            co.resize(k + 1, 0);
        }
        co[k] = field.add(co[k], c);
    }
    Ok(UniPoly::from_coeffs(field, co))
}

/// Permutation of the four branch points so that `b2 + b3 <= b1 + b4` at `tau`.
/// `perm[k]` is the old index placed at position `k`.
pub fn order_permutation(d: &Datum, p: u64, tau: u64) -> Vec<usize> {
    if d.r() != 4 {
        return (0..d.r()).collect();
    }
    let b = entry_b(d, p, tau);
    if b[1] + b[2] <= b[0] + b[3] {
        vec![0, 1, 2, 3]
    } else {
        vec![1, 0, 3, 2]
    }
}

/// `c(b; N) = min { c : b_1 + .. + b_c > N }`, one based; `None` if no prefix exceeds `N`.
pub fn c_index(b: &[u64], n: i64) -> Option<usize> {
    let mut acc = 0i64;
    for (i, &x) in b.iter().enumerate() {
        acc += x as i64;
        if acc > n {
            return Some(i + 1);
        }
    }
    None
}

/// Closed-form specialized `phi(j', j)` for `r = 4`, from the branch order of `d`.
pub fn phi_closed(d: &Datum, field: PrimeField, tau: u64, jp: usize, j: usize) -> UniPoly {
    let p = field.p();
    let b = entry_b(d, p, tau);
    let s: u64 = b.iter().sum();
    let n = s as i64 - p as i64 * j as i64;
    let f = fabc_raw(field, b[1], b[2], n + jp as i64 - b[0] as i64);
    f.scale(field.sign(n + jp as i64))
}

/// Closed-form specialized `psi(j', j)` for `r = 4`, `j' in {1, 2}`.
pub fn psi_closed(d: &Datum, field: PrimeField, tau: u64, jp: usize, j: usize) -> Result<UniPoly> {
    let p = field.p();
    let b = entry_b(d, p, tau);
    let s: u64 = b.iter().sum();
    let n = s as i64 - p as i64 * j as i64;
    let sg = field.sign(n);
    match jp {
        1 => Ok(fabc_raw(field, b[1], b[2], n - b[0] as i64).shift(1).scale(field.mul(sg, field.reduce(b[3])))),
        2 => {
            let c = field.reduce(s + field.p() - b[0] % p + 1);
            Ok(fabc_raw(field, b[1], b[2], n - b[0] as i64 + 1).scale(field.mul(sg, c)))
        }
        _ => Err(Error::IndexOutOfRange(format!("j' = {jp} must be 1 or 2 when r = 4"))),
    }
}

/// Specialized `phi_tau(j', j)(t)` in the branch order of `d`: the closed form
/// for `p > 3m`, exact extraction from the multivariate entry otherwise.
pub fn phi_specialized_at(d: &Datum, field: PrimeField, tau: u64, jp: usize, j: usize) -> Result<UniPoly> {
    if d.r() != 4 {
        return Err(Error::UnsupportedFamily(format!("specialization needs r = 4, got {}", d.r())));
    }
    if field.p() <= 3 * d.m() {
        return specialize_infty(&phi_entry(d, field, tau, jp, j)?);
    }
    let m = d.m();
    let tau = tau % m;
    if tau == 0 {
        return Err(Error::IndexOutOfRange("character index 0".into()));
    }
    let sig = d.signature();
    check_index("j", j, sig.f(m - tau))?;
    check_index("j'", jp, sig.f(m - field.p() % m * tau % m))?;
    Ok(phi_closed(d, field, tau, jp, j))
}

pub fn psi_specialized_at(d: &Datum, field: PrimeField, tau: u64, jp: usize, j: usize) -> Result<UniPoly> {
    if d.r() != 4 {
        return Err(Error::UnsupportedFamily(format!("specialization needs r = 4, got {}", d.r())));
    }
    if field.p() <= 3 * d.m() {
        return specialize_infty(&psi_entry(d, field, tau, jp, j)?);
    }
    let m = d.m();
    let tau = tau % m;
    if tau == 0 || !psi_defined(d, field.p(), tau) {
        return Err(Error::PsiHypothesisNotMet(format!("tau = {tau}")));
    }
    let sig = d.signature();
    check_index("j", j, sig.f(m - tau))?;
    check_index("j'", jp, sig.f(field.p() % m * tau % m))?;
    psi_closed(d, field, tau, jp, j)
}

/// The four kinds of chain steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    Phi,
    PhiDual,
    Psi,
    PsiDual,
}

impl Kind {
    pub fn is_psi(self) -> bool {
        matches!(self, Kind::Psi | Kind::PsiDual)
    }
}

/// One step `A_i` of a chain: which block, at which character, and its shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub kind: Kind,
    pub tau: u64,
    pub rows: usize,
    pub cols: usize,
}

/// A matrix stored row major as nested vectors.
pub type Matrix<T> = Vec<Vec<T>>;

#[derive(Clone, Debug)]
pub struct Chain {
    pub steps: Vec<Step>,
    pub matrices: Vec<Matrix<MultiPoly>>,
}

#[derive(Clone, Debug)]
pub struct SpecializedChain {
    pub perm: Vec<usize>,
    pub i0: usize,
    pub steps: Vec<Step>,
    pub matrices: Vec<Matrix<UniPoly>>,
}

/// Orbit data around a base character `B0` with `f(m - B0) = 1`.
#[derive(Clone, Debug)]
pub struct OrbitContext {
    datum: Datum,
    ordered: Datum,
    perm: Vec<usize>,
    field: PrimeField,
    b0: u64,
    sig: Signature,
    chars: Vec<u64>,
}

impl OrbitContext {
    pub fn new(datum: &Datum, p: u64, b0: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let m = datum.m();
        if m % p == 0 {
            return Err(Error::PDividesM(p, m));
        }
        let b0 = b0 % m;
        if b0 == 0 || gcd(b0, m) != 1 {
            return Err(Error::HypothesisNotMet(format!("B0 = {b0} is not a unit mod {m}")));
        }
        let sig = datum.signature();
        if sig.f(m - b0) != 1 {
            return Err(Error::HypothesisNotMet(format!("f(m - B0) = f({}) = {} is not 1", m - b0, sig.f(m - b0))));
        }
        let mut chars = vec![b0];
        let mut c = b0 * (p % m) % m;
        while c != b0 {
            chars.push(c);
            c = c * (p % m) % m;
        }
        chars.push(b0);
        let perm = order_permutation(datum, p, b0);
        let ordered = datum.permuted(&perm);
        Ok(OrbitContext { datum: datum.clone(), ordered, perm, field, b0, sig, chars })
    }

    /// Candidate base characters, those with `i0 = 1` first, then by index.
    pub fn candidates(datum: &Datum, p: u64) -> Vec<u64> {
        let m = datum.m();
        let sig = datum.signature();
        let mut c: Vec<u64> = (1..m).filter(|&b| gcd(b, m) == 1 && sig.f(m - b) == 1).collect();
        c.sort_by_key(|&b| (sig.f(m - b * (p % m) % m) != 1, b));
        c
    }

    /// The first candidate from [`OrbitContext::candidates`].
    pub fn auto(datum: &Datum, p: u64) -> Result<Self> {
        match Self::candidates(datum, p).first() {
            Some(&b0) => Self::new(datum, p, b0),
            None => Err(Error::HypothesisNotMet("no unit B0 with f(m - B0) = 1".into())),
        }
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    /// The datum with its branch points reordered for specialization.
    pub fn ordered(&self) -> &Datum {
        &self.ordered
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn b0(&self) -> u64 {
        self.b0
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Orbit length `l`.
    pub fn l(&self) -> usize {
        self.chars.len() - 1
    }

    /// `c_i = p^i B0 mod m`, for `i = 0..=l`.
    pub fn chars(&self) -> &[u64] {
        &self.chars
    }

    /// `f(p^i tau0*)`.
    pub fn fstar(&self, i: usize) -> u64 {
        let m = self.datum.m();
        self.sig.f(m - self.chars[i % self.l()])
    }

    /// `d(i)`.
    pub fn dim(&self, i: usize) -> usize {
        let fs = self.fstar(i);
        if fs >= 1 {
            fs as usize
        } else {
            self.sig.f(self.chars[i % self.l()]) as usize
        }
    }

    /// `i0 = min { i >= 1 : f(p^i tau0*) = 1 }`; at most `l`.
    pub fn i0(&self) -> usize {
        (1..=self.l()).find(|&i| self.fstar(i) == 1).expect("f(p^l tau0*) = f(tau0*) = 1")
    }

    pub fn step(&self, i: usize) -> Step {
        let m = self.datum.m();
        let c = self.chars[i % self.l()];
        let (a, b) = (self.fstar(i) >= 1, self.fstar(i + 1) >= 1);
        let (kind, tau) = match (a, b) {
            (true, true) => (Kind::Phi, c),
            (false, false) => (Kind::PhiDual, m - c),
            (true, false) => (Kind::Psi, c),
            (false, true) => (Kind::PsiDual, m - c),
        };
        Step { kind, tau, rows: self.dim(i + 1), cols: self.dim(i) }
    }

    pub fn steps(&self) -> Vec<Step> {
        (0..self.l()).map(|i| self.step(i)).collect()
    }

    /// Multivariate entry of a chain step in the original branch order.
    pub fn step_entry(&self, st: &Step, jp: usize, j: usize) -> Result<MultiPoly> {
        if st.kind.is_psi() {
            psi_entry(&self.datum, self.field, st.tau, jp, j)
        } else {
            phi_entry(&self.datum, self.field, st.tau, jp, j)
        }
    }

    pub fn phi_entry(&self, tau: u64, jp: usize, j: usize) -> Result<MultiPoly> {
        phi_entry(&self.datum, self.field, tau, jp, j)
    }

    pub fn psi_entry(&self, tau: u64, jp: usize, j: usize) -> Result<MultiPoly> {
        psi_entry(&self.datum, self.field, tau, jp, j)
    }

    pub fn build_chain(&self) -> Result<Chain> {
        let steps = self.steps();
        let mut matrices = Vec::with_capacity(steps.len());
        for st in &steps {
            let mut mat = Vec::with_capacity(st.rows);
            for jp in 1..=st.rows {
                let mut row = Vec::with_capacity(st.cols);
                for j in 1..=st.cols {
                    row.push(self.step_entry(st, jp, j)?);
                }
                mat.push(row);
            }
            matrices.push(mat);
        }
        Ok(Chain { steps, matrices })
    }

    /// Specialized `phi_tau(j', j)(t)` in the reordered coordinates.
    pub fn phi_specialized(&self, tau: u64, jp: usize, j: usize) -> Result<UniPoly> {
        phi_specialized_at(&self.ordered, self.field, tau, jp, j)
    }

    pub fn psi_specialized(&self, tau: u64, jp: usize, j: usize) -> Result<UniPoly> {
        psi_specialized_at(&self.ordered, self.field, tau, jp, j)
    }

    fn require_r4(&self) -> Result<()> {
        if self.datum.r() != 4 {
            return Err(Error::UnsupportedFamily(format!("specialization needs r = 4, got {}", self.datum.r())));
        }
        Ok(())
    }

    fn step_specialized(&self, st: &Step, jp: usize, j: usize) -> Result<UniPoly> {
        if st.kind.is_psi() {
            self.psi_specialized(st.tau, jp, j)
        } else {
            self.phi_specialized(st.tau, jp, j)
        }
    }

    /// Specialized matrices `A_0(t) .. A_{i0-1}(t)`.
    pub fn specialized_chain(&self) -> Result<SpecializedChain> {
        self.require_r4()?;
        let i0 = self.i0();
        let steps: Vec<Step> = (0..i0).map(|i| self.step(i)).collect();
        let mut matrices = Vec::with_capacity(i0);
        for st in &steps {
            let mut mat = Vec::with_capacity(st.rows);
            for jp in 1..=st.rows {
                let mut row = Vec::with_capacity(st.cols);
                for j in 1..=st.cols {
                    row.push(self.step_specialized(st, jp, j)?);
                }
                mat.push(row);
            }
            matrices.push(mat);
        }
        Ok(SpecializedChain { perm: self.perm.clone(), i0, steps, matrices })
    }

    /// Dense `h1(t)`; fails when its degree bound exceeds `budget`.
    pub fn h1(&self, budget: u64) -> Result<UniPoly> {
        let ch = self.specialized_chain()?;
        let p = self.p() as u128;
        let mut bound: u128 = 0;
        for mat in &ch.matrices {
            let md = mat.iter().flatten().filter_map(|f| f.degree()).max().unwrap_or(0) as u128;
            bound = bound.saturating_mul(p).saturating_add(md);
        }
        if bound > budget as u128 {
            return Err(Error::DegreeBudgetExceeded { needed: bound + 1, budget });
        }
        let mut v: Vec<UniPoly> = vec![UniPoly::one(self.field)];
        for (k, mat) in ch.matrices.iter().enumerate() {
            if k > 0 {
                v = v.iter().map(|x| x.frobenius_twist(1)).collect::<Result<_>>()?;
            }
            v = mat
                .iter()
                .map(|row| row.iter().zip(&v).fold(UniPoly::zero(self.field), |acc, (a, x)| acc.add(&a.mul(x))))
                .collect();
        }
        Ok(v.into_iter().next().expect("d(i0) = 1"))
    }

    /// Degree, `v_t` and `h1(1)` without expanding `h1`.
    pub fn h1_profile(&self) -> Result<H1Profile> {
        let ch = self.specialized_chain()?;
        h1_profile_of(&ch, self.field)
    }

    /// Multivariate `h0` as the sum over index paths `J` of `prod R_{J,i}^{p^(l-1-i)}`.
    pub fn h0(&self, budget: u64) -> Result<MultiPoly> {
        let chain = self.build_chain()?;
        let l = self.l();
        let p = self.p();
        check_exponent_room(p, l, &chain)?;
        let r = self.datum.r();
        let mut total = MultiPoly::zero(self.field, r);
        let dims: Vec<usize> = (0..=l).map(|i| if i == 0 || i == l { 1 } else { self.dim(i) }).collect();
        let mut jv = vec![1usize; l + 1];
        loop {
            let mut prod = MultiPoly::constant(self.field, r, 1);
            for i in 0..l {
                let e = &chain.matrices[i][jv[i + 1] - 1][jv[i] - 1];
                let tw = e.frobenius_twist((l - 1 - i) as u32);
                let need = prod.product_size_bound(&tw);
                if need > budget as u128 {
                    return Err(Error::DegreeBudgetExceeded { needed: need, budget });
                }
                prod = prod.mul(&tw);
                if prod.is_zero() {
                    break;
                }
            }
            total = total.add(&prod);
            if total.term_count() as u64 > budget {
                return Err(Error::DegreeBudgetExceeded { needed: total.term_count() as u128, budget });
            }
            // next J, odometer over the interior indices
            let mut i = 1;
            loop {
                if i >= l {
                    return Ok(total);
                }
                if jv[i] < dims[i] {
                    jv[i] += 1;
                    break;
                }
                jv[i] = 1;
                i += 1;
            }
        }
    }

    /// `h0` by step-by-step sigma-linear composition; used as a cross-check.
    pub fn h0_composed(&self, budget: u64) -> Result<MultiPoly> {
        let chain = self.build_chain()?;
        check_exponent_room(self.p(), self.l(), &chain)?;
        let r = self.datum.r();
        let mut v = vec![MultiPoly::constant(self.field, r, 1)];
        for (k, mat) in chain.matrices.iter().enumerate() {
            if k > 0 {
                v = v.iter().map(|x| x.frobenius_twist(1)).collect();
            }
            let mut nv = Vec::with_capacity(mat.len());
            for row in mat {
                let mut acc = MultiPoly::zero(self.field, r);
                for (a, x) in row.iter().zip(&v) {
                    let need = a.product_size_bound(x);
                    if need > budget as u128 {
                        return Err(Error::DegreeBudgetExceeded { needed: need, budget });
                    }
                    acc = acc.add(&a.mul(x));
                }
                nv.push(acc);
            }
            v = nv;
        }
        Ok(v.into_iter().next().expect("d(l) = 1"))
    }

    /// `t_i' = max(0, b_{j1} + b_{j2} - (p-3))` with `b` taken at `c_i` or `-c_i`.
    pub fn t_prime(&self, i: usize, j1: usize, j2: usize) -> u64 {
        let m = self.datum.m();
        let c = self.chars[i % self.l()];
        let tau = if self.fstar(i) >= 1 { c } else { m - c };
        let b = entry_b(&self.datum, self.p(), tau);
        (b[j1] + b[j2] + 3).saturating_sub(self.p())
    }

    /// `sum_i p^(l-1-i) t_i'` for the pair of zero based branch indices.
    pub fn divisor_bound(&self, j1: usize, j2: usize) -> Result<u128> {
        let r = self.datum.r();
        if j1 == j2 || j1 >= r || j2 >= r {
            return Err(Error::IndexOutOfRange(format!("pair ({j1}, {j2})")));
        }
        let l = self.l();
        let p = self.p() as u128;
        Ok((0..l).fold(0u128, |acc, i| acc * p + self.t_prime(i, j1, j2) as u128))
    }

    /// Upper bound for `v_{x_{j2} - x_{j1}}(h0)`: the `y`-adic valuation of `h0`
    /// restricted to a random line `x_{j2} = x_{j1} + y` through a point of `F_{p^k}`.
    /// The true multiplicity never exceeds the returned value.
    pub fn divisor_valuation_on_line(&self, j1: usize, j2: usize, k: usize, seed: u64) -> Result<u64> {
        let r = self.datum.r();
        if j1 == j2 || j1 >= r || j2 >= r {
            return Err(Error::IndexOutOfRange(format!("pair ({j1}, {j2})")));
        }
        let chain = self.build_chain()?;
        let kf = ExtField::random(self.field, k, seed);
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let alpha: Vec<UniPoly> = (0..r).map(|_| kf.random_elem(&mut rng)).collect();
        let mut v: Vec<YPoly> = vec![vec![kf.from_base(1)]];
        for (s, mat) in chain.matrices.iter().enumerate() {
            if s > 0 {
                v = v.iter().map(|x| y_twist(&kf, x, self.p() as usize)).collect();
            }
            let mut nv = Vec::with_capacity(mat.len());
            for row in mat {
                let mut acc: YPoly = Vec::new();
                for (a, x) in row.iter().zip(&v) {
                    let ay = restrict_to_line(&kf, a, &alpha, j1, j2);
                    acc = y_add(&kf, &acc, &y_mul(&kf, &ay, x));
                }
                nv.push(acc);
            }
            v = nv;
        }
        let h = &v[0];
        match h.iter().position(|c| !c.is_zero()) {
            Some(i) => Ok(i as u64),
            None => Err(Error::ZeroPolynomial),
        }
    }
}

fn check_exponent_room(p: u64, l: usize, chain: &Chain) -> Result<()> {
    let maxe = chain
        .matrices
        .iter()
        .flatten()
        .flatten()
        .flat_map(|f| f.terms().map(|(e, _)| e.iter().copied().max().unwrap_or(0)).collect::<Vec<_>>())
        .max()
        .unwrap_or(0) as u128;
    let need = (p as u128).pow(l.saturating_sub(1) as u32) * maxe.max(1) * 2;
    if need > u32::MAX as u128 {
        return Err(Error::DegreeBudgetExceeded { needed: need, budget: u32::MAX as u64 });
    }
    Ok(())
}

/// Exact multiplicity of `x_{j2} - x_{j1}` in `h` (zero based indices).
pub fn divisor_multiplicity(h: &MultiPoly, j1: usize, j2: usize) -> Result<u64> {
    h.linear_form_valuation(j1, j2)
}

/// Polynomials in `y` with coefficients in an extension field.
type YPoly = Vec<UniPoly>;

fn y_trim(mut a: YPoly) -> YPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn y_add(k: &ExtField, a: &YPoly, b: &YPoly) -> YPoly {
    let n = a.len().max(b.len());
    let z = k.from_base(0);
    y_trim((0..n).map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect())
}

fn y_mul(k: &ExtField, a: &YPoly, b: &YPoly) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.from_base(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = k.add(&out[i + j], &k.mul(x, y));
            }
        }
    }
    y_trim(out)
}

/// `a^p`: Frobenius on coefficients, `y -> y^p`.
fn y_twist(k: &ExtField, a: &YPoly, p: usize) -> YPoly {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.from_base(0); (a.len() - 1) * p + 1];
    for (i, c) in a.iter().enumerate() {
        out[i * p] = k.frobenius(c);
    }
    out
}

/// Restrict `f` to `x_s = alpha_s` for `s != j2` and `x_{j2} = alpha_{j1} + y`.
fn restrict_to_line(k: &ExtField, f: &MultiPoly, alpha: &[UniPoly], j1: usize, j2: usize) -> YPoly {
    use std::collections::BTreeMap;
    let field = f.field();
    let mut by_e: BTreeMap<u32, UniPoly> = BTreeMap::new();
    let mut pows: Vec<Vec<UniPoly>> = alpha.iter().map(|a| vec![k.from_base(1), a.clone()]).collect();
    for (e, &c) in f.terms() {
        let mut v = k.from_base(c);
        for (s, &es) in e.iter().enumerate() {
            if s == j2 || es == 0 {
                continue;
            }
            while pows[s].len() <= es as usize {
                let nx = k.mul(pows[s].last().unwrap(), &alpha[s]);
                pows[s].push(nx);
            }
            v = k.mul(&v, &pows[s][es as usize]);
        }
        let slot = by_e.entry(e[j2]).or_insert_with(|| k.from_base(0));
        *slot = k.add(slot, &v);
    }
    let maxe = by_e.keys().copied().max().unwrap_or(0) as usize;
    let tab = BinomTable::new(field, field.p() as usize - 1);
    let a = &alpha[j1];
    let mut apow = vec![k.from_base(1)];
    for _ in 0..maxe {
        let nx = k.mul(apow.last().unwrap(), a);
        apow.push(nx);
    }
    let mut out = vec![k.from_base(0); maxe + 1];
    for (&e, s) in &by_e {
        for i in 0..=e as usize {
            let b = tab.binom(e as i64, i as i64);
            if b == 0 {
                continue;
            }
            let term = k.mul(s, &apow[e as usize - i]);
            out[i] = k.add(&out[i], &term.scale(b));
        }
    }
    y_trim(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H1Profile {
    pub i0: usize,
    pub degree: u128,
    pub v_t: u128,
    pub value_at_one: u64,
}

fn coeff_mats(ch: &SpecializedChain) -> Vec<Vec<Matrix<u64>>> {
    // per step, per digit d: the matrix of t^d coefficients
    ch.matrices
        .iter()
        .map(|mat| {
            let maxd = mat.iter().flatten().filter_map(|f| f.degree()).max().unwrap_or(0);
            (0..=maxd).map(|d| mat.iter().map(|row| row.iter().map(|f| f.coeff(d)).collect()).collect()).collect()
        })
        .collect()
}

fn mat_vec(field: PrimeField, a: &Matrix<u64>, v: &[u64]) -> Vec<u64> {
    a.iter().map(|row| row.iter().zip(v).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))).collect()
}

/// Row reduce to a basis of the span.
fn span_basis(field: PrimeField, rows: Vec<Vec<u64>>, dim: usize) -> Vec<Vec<u64>> {
    let mut basis: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut r in rows {
        for (b, &pc) in basis.iter().zip(&pivots) {
            if r[pc] != 0 {
                let f = r[pc];
                for c in 0..dim {
                    r[c] = field.sub(r[c], field.mul(f, b[c]));
                }
            }
        }
        if let Some(pc) = (0..dim).find(|&c| r[c] != 0) {
            let inv = field.inv(r[pc]).expect("nonzero");
            for x in r.iter_mut() {
                *x = field.mul(*x, inv);
            }
            for b in basis.iter_mut() {
                if b[pc] != 0 {
                    let f = b[pc];
                    for c in 0..dim {
                        b[c] = field.sub(b[c], field.mul(f, r[c]));
                    }
                }
            }
            basis.push(r);
            pivots.push(pc);
        }
        if basis.len() == dim {
            break;
        }
    }
    basis
}

/// Degree, valuation and value at one of `h1` from base-`p` digits: the
/// coefficient of `t^(sum_i e_i p^(i0-1-i))` is `(A_{i0-1}[e] .. A_0[e])`.
pub fn h1_profile_of(ch: &SpecializedChain, field: PrimeField) -> Result<H1Profile> {
    let n = ch.matrices.len();
    let p = field.p() as u128;
    for mat in &ch.matrices {
        if mat.iter().flatten().filter_map(|f| f.degree()).any(|d| d as u128 >= p) {
            return Err(Error::InvalidInput("entry degree reaches p; digit expansion does not apply".into()));
        }
    }
    let cm = coeff_mats(ch);
    // spans[k]: row vectors u with u = w A_{n-1}[e] .. A_k[e] for some digits, span taken
    let mut spans: Vec<Vec<Vec<u64>>> = vec![Vec::new(); n + 1];
    spans[n] = vec![vec![1]];
    for k in (0..n).rev() {
        let dim = ch.steps[k].cols;
        let mut rows = Vec::new();
        for w in &spans[k + 1] {
            for a in &cm[k] {
                let u: Vec<u64> = (0..dim)
                    .map(|c| w.iter().enumerate().fold(0, |acc, (r, &x)| field.add(acc, field.mul(x, a[r][c]))))
                    .collect();
                rows.push(u);
            }
        }
        spans[k] = span_basis(field, rows, dim);
    }
    let alive = |k: usize, v: &[u64]| -> bool {
        spans[k].iter().any(|w| w.iter().zip(v).fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y))) != 0)
    };
    if spans[0].is_empty() || !alive(0, &[1]) {
        return Err(Error::ZeroPolynomial);
    }
    let walk = |largest: bool| -> u128 {
        let mut v = vec![1u64];
        let mut e: u128 = 0;
        for k in 0..n {
            let digits: Vec<usize> =
                if largest { (0..cm[k].len()).rev().collect() } else { (0..cm[k].len()).collect() };
            let mut chosen = None;
            for d in digits {
                let nv = mat_vec(field, &cm[k][d], &v);
                if alive(k + 1, &nv) {
                    chosen = Some((d, nv));
                    break;
                }
            }
            let (d, nv) = chosen.expect("feasible by the span invariant");
            e = e * p + d as u128;
            v = nv;
        }
        e
    };
    let degree = walk(true);
    let v_t = walk(false);
    let mut v = vec![1u64];
    for mat in &ch.matrices {
        let a1: Matrix<u64> = mat.iter().map(|row| row.iter().map(|f| f.eval(1)).collect()).collect();
        v = mat_vec(field, &a1, &v);
    }
    Ok(H1Profile { i0: ch.i0, degree, v_t, value_at_one: v[0] })
}

/// A point off `{0, 1}` where `h1` vanishes, with the irreducible factor it is a root of.
#[derive(Clone, Debug)]
pub struct Witness {
    pub root: ExtElem,
    pub degree: usize,
    pub factor: UniPoly,
    pub h1_factorization: Factorization,
}

/// Factor `h1` away from `t` and `t - 1` and return a root of the first
/// irreducible factor of degree at most `dmax`.
pub fn nonordinary_witness(ctx: &OrbitContext, dmax: usize, seed: u64, budget: u64) -> Result<Option<Witness>> {
    let h = ctx.h1(budget)?;
    let (_, _, rest) = h.strip_zero_one()?;
    let fac = ff::factor(&h, seed)?;
    if rest.is_constant() {
        return Ok(None);
    }
    for (g, _) in &fac.factors {
        let d = g.degree().unwrap_or(0);
        if d == 0 || d > dmax || g == &UniPoly::t(ctx.field()) || g == &UniPoly::linear_root(ctx.field(), 1) {
            continue;
        }
        let roots = ff::ext_roots(g, d, seed)?;
        if let Some((root, deg)) = roots.into_iter().next() {
            return Ok(Some(Witness { root, degree: deg, factor: g.clone(), h1_factorization: fac.clone() }));
        }
    }
    Ok(None)
}

/// Number of distinct roots of `h1` off `{0, 1}`.
pub fn witness_count(ctx: &OrbitContext, budget: u64) -> Result<usize> {
    let h = ctx.h1(budget)?;
    let (_, _, rest) = h.strip_zero_one()?;
    ff::distinct_root_count(&rest)
}

/// For every character with `f(tau*) != 0`, every `1 <= j <= f(tau*)` and
/// `0 <= j' <= 2`: whether `c_tau(s_tau - pj + j')` lies in `{2, 3}`.
pub fn c23_holds(d: &Datum, p: u64) -> bool {
    let m = d.m();
    let sig = d.signature();
    (1..m).filter(|&t| sig.f(m - t) != 0).all(|t| {
        let b = entry_b(d, p, t);
        let s: i64 = b.iter().sum::<u64>() as i64;
        (1..=sig.f(m - t) as i64).all(|j| {
            (0..=2).all(|jp| matches!(c_index(&b, s - p as i64 * j + jp), Some(2) | Some(3)))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Datum {
        s.parse().unwrap()
    }

    #[test]
    fn golden_p13_specialized() {
        let x = d("7:4:3,1,1,2");
        let f = PrimeField::new(13).unwrap();
        let phi2 = specialize_infty(&phi_entry(&x, f, 2, 1, 1).unwrap()).unwrap();
        let phi3 = specialize_infty(&phi_entry(&x, f, 3, 1, 1).unwrap()).unwrap();
        assert_eq!(phi2.to_text(), "3 + 3*t");
        assert_eq!(phi3.to_text(), "5*t^4 + 5*t^5");
        assert_eq!(phi_closed(&x, f, 2, 1, 1), phi2);
        assert_eq!(phi_closed(&x, f, 3, 1, 1), phi3);
    }

    #[test]
    fn golden_p29_factors() {
        let x = d("7:4:3,1,1,2");
        let ctx = OrbitContext::new(&x, 29, 2).unwrap();
        let f = ctx.field();
        let want = UniPoly::from_i64s(f, &[12, 1, 1])
            .mul(&UniPoly::from_i64s(f, &[17, 17, 1]))
            .scale(12);
        assert_eq!(ctx.phi_specialized(2, 1, 1).unwrap(), want);
        let exact = specialize_infty(&ctx.phi_entry(2, 1, 1).unwrap()).unwrap();
        assert_eq!(exact, want);
    }

    #[test]
    fn out_of_range_n_is_zero() {
        let f = PrimeField::new(13).unwrap();
        assert!(f_multi(f, &[1, 2, 3], -1).is_zero());
        assert!(f_multi(f, &[1, 2, 3], 7).is_zero());
        assert_eq!(f_multi(f, &[1, 2, 3], 6).term_count(), 1);
    }

    #[test]
    fn q_at_jp_one_is_signed_product() {
        let f = PrimeField::new(13).unwrap();
        let q = q_coeff(f, 4, 3, 1);
        assert_eq!(q.term_count(), 1);
        assert_eq!(q.coeff(&[1, 1, 1, 0]), 12);
    }

    #[test]
    fn chain_shapes_and_kinds() {
        let x = d("7:4:3,1,1,2");
        let ctx = OrbitContext::new(&x, 29, 2).unwrap();
        assert_eq!(ctx.l(), 1);
        assert_eq!(ctx.steps(), vec![Step { kind: Kind::Phi, tau: 2, rows: 1, cols: 1 }]);
        let ctx = OrbitContext::new(&x, 3, 2).unwrap();
        assert_eq!(ctx.l(), 6);
        for (i, st) in ctx.steps().iter().enumerate() {
            assert_eq!((st.rows, st.cols), (ctx.dim(i + 1), ctx.dim(i)));
            assert_eq!(st.kind.is_psi(), (ctx.fstar(i) >= 1) != (ctx.fstar(i + 1) >= 1));
        }
    }

    #[test]
    fn h1_at_i0_one_is_phi() {
        let x = d("7:4:3,1,1,2");
        let ctx = OrbitContext::new(&x, 29, 2).unwrap();
        assert_eq!(ctx.i0(), 1);
        let h = ctx.h1(DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(h, ctx.phi_specialized(2, 1, 1).unwrap());
        let pr = ctx.h1_profile().unwrap();
        assert_eq!(pr.degree, h.degree().unwrap() as u128);
        assert_eq!(pr.v_t, h.v_t().unwrap() as u128);
        assert_eq!(pr.value_at_one, h.eval(1));
    }

    #[test]
    fn profile_matches_dense_for_longer_chains() {
        let x = d("7:4:3,1,1,2");
        for p in [23u64, 37, 43] {
            for b0 in OrbitContext::candidates(&x, p) {
                let ctx = OrbitContext::new(&x, p, b0).unwrap();
                let h = ctx.h1(1 << 22).unwrap();
                let pr = ctx.h1_profile().unwrap();
                assert_eq!(pr.degree, h.degree().unwrap() as u128, "p={p} b0={b0}");
                assert_eq!(pr.v_t, h.v_t().unwrap() as u128);
                assert_eq!(pr.value_at_one, h.eval(1));
            }
        }
    }

    #[test]
    fn h0_two_ways() {
        let x = d("5:4:1,1,1,2");
        for p in [11u64, 19] {
            for b0 in OrbitContext::candidates(&x, p) {
                let ctx = OrbitContext::new(&x, p, b0).unwrap();
                if ctx.l() > 2 {
                    continue;
                }
                let a = ctx.h0(1 << 24).unwrap();
                let b = ctx.h0_composed(1 << 24).unwrap();
                assert_eq!(a, b);
                assert!(a.is_homogeneous());
            }
        }
    }

    #[test]
    fn line_valuation_bounds_exact() {
        let x = d("5:4:1,1,1,2");
        let ctx = OrbitContext::auto(&x, 11).unwrap();
        let h = ctx.h0(1 << 24).unwrap();
        for j1 in 0..4 {
            for j2 in j1 + 1..4 {
                let exact = divisor_multiplicity(&h, j1, j2).unwrap();
                assert_eq!(exact, divisor_multiplicity(&h, j2, j1).unwrap());
                let line = ctx.divisor_valuation_on_line(j1, j2, 4, 7).unwrap();
                assert!(line >= exact);
                assert!(exact as u128 <= ctx.divisor_bound(j1, j2).unwrap() || p_small(&ctx));
            }
        }
    }

    fn p_small(ctx: &OrbitContext) -> bool {
        ctx.p() < 20 * ctx.datum().m()
    }

    #[test]
    fn psi_hypothesis_enforced() {
        let x = d("7:4:3,1,1,2");
        let f = PrimeField::new(29).unwrap();
        // p = 1 mod 7 and f(2*) = f(5) = 1, f(2) = 1 = g - 1: not covered
        assert!(matches!(psi_entry(&x, f, 2, 1, 1), Err(Error::PsiHypothesisNotMet(_))));
    }
}
