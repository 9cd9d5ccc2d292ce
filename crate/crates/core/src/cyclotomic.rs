//! Exact arithmetic in Z[ζ_M], stored as group-ring vectors over Z[x]/(x^M − 1)
//! and compared after reduction modulo the cyclotomic polynomial Φ_M.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::gfq::divisors;

/// Integer coefficients of Φ_M, lowest degree first.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^M − 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in divisors(m as u32) {
        if d as u64 == m {
            continue;
        }
        num = exact_div(&num, &cyclotomic_poly(d as u64));
    }
    cache.lock().unwrap().insert(m, num.clone());
    num
}

/// Division by a monic polynomial that is known to be exact.
fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u64,
    coeffs: Vec<BigInt>,
}

impl Cyclotomic {
    pub fn zero(order: u64) -> Cyclotomic {
        assert!(order > 0, "cyclotomic order must be positive");
        Cyclotomic { order, coeffs: vec![BigInt::zero(); order as usize] }
    }

    pub fn from_int(order: u64, n: impl Into<BigInt>) -> Cyclotomic {
        let mut z = Cyclotomic::zero(order);
        z.coeffs[0] = n.into();
        z
    }

    /// ζ_M^k.
    pub fn root(order: u64, k: i64) -> Cyclotomic {
        let mut z = Cyclotomic::zero(order);
        z.coeffs[k.rem_euclid(order as i64) as usize] = BigInt::one();
        z
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Adds c·ζ^k in place.
    pub fn add_term(&mut self, k: i64, c: impl Into<BigInt>) {
        let i = k.rem_euclid(self.order as i64) as usize;
        self.coeffs[i] += c.into();
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.order, other.order, "mismatched cyclotomic orders");
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> Cyclotomic {
        let c = c.into();
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|a| a * &c).collect() }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.order, other.order, "mismatched cyclotomic orders");
        let m = self.order as usize;
        let mut out = vec![BigInt::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out[(i + j) % m] += a * b;
            }
        }
        Cyclotomic { order: self.order, coeffs: out }
    }

    /// Re-expresses the element in Z[ζ_N] for a multiple N of the order.
    pub fn lift(&self, order: u64) -> Cyclotomic {
        assert!(order % self.order == 0, "target order must be a multiple");
        let s = (order / self.order) as usize;
        let mut z = Cyclotomic::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            z.coeffs[i * s] = a.clone();
        }
        z
    }

    /// Canonical representative: remainder modulo Φ_M, degree below φ(M).
    pub fn reduced(&self) -> Vec<BigInt> {
        let phi = cyclotomic_poly(self.order);
        let d = phi.len() - 1;
        let mut r = self.coeffs.clone();
        r.resize(r.len().max(d), BigInt::zero());
        for k in (d..r.len()).rev() {
            let c = r[k].clone();
            if c.is_zero() {
                continue;
            }
            for (i, p) in phi.iter().enumerate() {
                r[k - d + i] -= &c * p;
            }
        }
        r.truncate(d);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(Zero::is_zero)
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        let r = self.reduced();
        r[1..].iter().all(Zero::is_zero).then(|| r[0].clone())
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        let l = self.order.lcm(&other.order);
        self.lift(l).reduced() == other.lift(l).reduced()
    }
}

impl Eq for Cyclotomic {}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.reduced();
        let mut terms = Vec::new();
        for (k, c) in r.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let mag = c.abs();
            let body = match (k, mag.is_one()) {
                (0, _) => mag.to_string(),
                (_, true) => format!("z^{k}"),
                (_, false) => format!("{mag}*z^{k}"),
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (sign, body)) in terms.iter().enumerate() {
            match (i, *sign) {
                (0, "-") => write!(f, "-{body}")?,
                (0, _) => write!(f, "{body}")?,
                (_, s) => write!(f, " {s} {body}")?,
            }
        }
        write!(f, " (z = zeta_{})", self.order)
    }
}
