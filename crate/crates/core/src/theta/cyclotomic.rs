//! Elements of `ℤ[ζ_M]`, stored as coefficient vectors in `1, ζ, …, ζ^{M−1}`
//! and compared after reduction modulo the cyclotomic polynomial `Φ_M`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Coefficients of `Φ_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: usize) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache poisoned").get(&m) {
        return p.clone();
    }
    assert!(m >= 1, "modulus must be positive");
    // x^m − 1 divided by Φ_d for the proper divisors d of m
    let mut num = vec![0i64; m + 1];
    num[0] = -1;
    num[m] = 1;
    for d in (1..m).filter(|d| m % d == 0) {
        num = exact_div(&num, &cyclotomic_polynomial(d));
    }
    let p = Arc::new(num);
    cache.lock().expect("cache poisoned").insert(m, p.clone());
    p
}

/// Quotient of `a` by the monic polynomial `b`, which must divide it.
fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let da = rem.len() - 1;
    let mut q = vec![0i64; da - db + 1];
    for k in (0..=da - db).rev() {
        let c = rem[k + db];
        q[k] = c;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// An element of `ℤ[ζ_M]`.
#[derive(Debug, Clone)]
pub struct CyclotomicInteger {
    modulus: usize,
    coeffs: Vec<i64>,
}

impl CyclotomicInteger {
    pub fn zero(m: usize) -> Self {
        CyclotomicInteger { modulus: m, coeffs: vec![0; m] }
    }

    pub fn one(m: usize) -> Self {
        Self::root(m, 0)
    }

    /// `ζ_M^k`.
    pub fn root(m: usize, k: i64) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[k.rem_euclid(m as i64) as usize] = 1;
        z
    }

    pub fn from_coeffs(m: usize, coeffs: &[i64]) -> Self {
        let mut z = Self::zero(m);
        for (k, c) in coeffs.iter().enumerate() {
            z.coeffs[k % m] += c;
        }
        z
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.modulus, o.modulus, "moduli differ");
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicInteger { modulus: self.modulus, coeffs }
    }

    pub fn neg(&self) -> Self {
        CyclotomicInteger { modulus: self.modulus, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.modulus, o.modulus, "moduli differ");
        let m = self.modulus;
        let mut out = vec![0i64; m];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, b) in o.coeffs.iter().enumerate().filter(|(_, b)| **b != 0) {
                out[(i + j) % m] += a * b;
            }
        }
        CyclotomicInteger { modulus: m, coeffs: out }
    }

    /// Multiplication by `ζ^k`.
    pub fn rotate(&self, k: i64) -> Self {
        let m = self.modulus;
        let s = k.rem_euclid(m as i64) as usize;
        let mut out = vec![0i64; m];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[(i + s) % m] = *c;
        }
        CyclotomicInteger { modulus: m, coeffs: out }
    }

    pub fn scale(&self, s: i64) -> Self {
        CyclotomicInteger { modulus: self.modulus, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Canonical remainder modulo `Φ_M`, of length `φ(M)`.
    pub fn reduced(&self) -> Vec<i64> {
        let p = cyclotomic_polynomial(self.modulus);
        let dp = p.len() - 1;
        let mut r = self.coeffs.clone();
        for k in (dp..r.len()).rev() {
            let c = r[k];
            if c != 0 {
                for (j, pj) in p.iter().enumerate() {
                    r[k - dp + j] -= c * pj;
                }
            }
        }
        r.truncate(dp);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    /// If `self = ζ^k` for some `k`, returns `k`.
    pub fn root_exponent(&self) -> Option<i64> {
        let red = self.reduced();
        (0..self.modulus as i64).find(|&k| Self::root(self.modulus, k).reduced() == red)
    }

    /// A representative with nonnegative coefficients, written as the
    /// multiset of exponents `k` of its summands `ζ^k`. For `M = 1` negative
    /// values have no such form and come back empty.
    pub fn exponents(&self) -> Vec<u64> {
        let m = self.modulus;
        if let Some(k) = self.root_exponent() {
            return vec![k as u64];
        }
        let mut c = self.coeffs.clone();
        if m % 2 == 0 {
            // −ζ^k = ζ^{k+M/2}
            for k in 0..m {
                if c[k] < 0 {
                    c[(k + m / 2) % m] -= c[k];
                    c[k] = 0;
                }
            }
        } else if m > 1 {
            // Σ_j ζ^j = 0
            let low = (*c.iter().min().expect("nonempty")).min(0);
            for x in c.iter_mut() {
                *x -= low;
            }
        }
        let mut out = Vec::new();
        for (k, &n) in c.iter().enumerate() {
            for _ in 0..n.max(0) {
                out.push(k as u64);
            }
        }
        out
    }

    pub fn from_exponents(m: usize, exps: &[u64]) -> Self {
        let mut z = Self::zero(m);
        for &e in exps {
            z.coeffs[(e as usize) % m] += 1;
        }
        z
    }

    /// Complex value with `ζ = exp(2πi/M)`.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let m = self.modulus as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| num_complex::Complex64::from_polar(c as f64, 2.0 * std::f64::consts::PI * k as f64 / m))
            .sum()
    }
}

impl PartialEq for CyclotomicInteger {
    fn eq(&self, o: &Self) -> bool {
        self.modulus == o.modulus && self.reduced() == o.reduced()
    }
}

impl Eq for CyclotomicInteger {}
