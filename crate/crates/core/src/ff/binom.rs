use super::PrimeField;

/// `C(n, k) mod p` for `n, k < p`, by the multiplicative formula.
fn small_binom(field: &PrimeField, n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = field.mul(num, n - i);
        den = field.mul(den, i + 1);
    }
    field.mul(num, field.inv(den).expect("k < p"))
}

/// `C(n, k) mod p` by Lucas' theorem on base-`p` digits. `k > n` gives 0.
pub fn binomial_mod_p(n: u64, k: u64, field: &PrimeField) -> u64 {
    if k > n {
        return 0;
    }
    let p = field.p();
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        acc = field.mul(acc, small_binom(field, nd, kd));
        n /= p;
        k /= p;
    }
    acc
}

/// Factorial tables for repeated binomials modulo one prime.
#[derive(Clone, Debug)]
pub struct BinomTable {
    field: PrimeField,
    fact: Vec<u64>,
    inv_fact: Vec<u64>,
}

impl BinomTable {
    /// Tables up to `min(limit, p - 1)`.
    pub fn new(field: PrimeField, limit: usize) -> Self {
        let n = limit.min(field.p() as usize - 1);
        let mut fact = vec![1u64; n + 1];
        for i in 1..=n {
            fact[i] = field.mul(fact[i - 1], i as u64);
        }
        let mut inv_fact = vec![1u64; n + 1];
        inv_fact[n] = field.inv(fact[n]).expect("n < p");
        for i in (1..=n).rev() {
            inv_fact[i - 1] = field.mul(inv_fact[i], i as u64);
        }
        BinomTable { field, fact, inv_fact }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// `C(n, k) mod p`; uses the tables for digits inside range and Lucas otherwise.
    pub fn binom(&self, n: i64, k: i64) -> u64 {
        if n < 0 || k < 0 || k > n {
            return 0;
        }
        let (n, k) = (n as u64, k as u64);
        let p = self.field.p();
        if n < p && (n as usize) < self.fact.len() {
            let f = &self.field;
            return f.mul(self.fact[n as usize], f.mul(self.inv_fact[k as usize], self.inv_fact[(n - k) as usize]));
        }
        let (mut n, mut k) = (n, k);
        let mut acc = 1u64;
        while k > 0 || n > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            let d = if (nd as usize) < self.fact.len() {
                let f = &self.field;
                f.mul(self.fact[nd as usize], f.mul(self.inv_fact[kd as usize], self.inv_fact[(nd - kd) as usize]))
            } else {
                small_binom(&self.field, nd, kd)
            };
            acc = self.field.mul(acc, d);
            n /= p;
            k /= p;
        }
        acc
    }
}
