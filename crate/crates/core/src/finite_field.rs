//! Exact arithmetic in finite fields F_q with q = p^k, deterministic element
//! enumeration and multiplicative-order queries.
//!
//! Extension fields are represented by coordinate vectors over F_p modulo the
//! lexicographically smallest monic irreducible polynomial of degree k, so two
//! constructions of the same (p, k) are byte-identical.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Enumeration-safety cap on the field cardinality.
pub const CARDINALITY_CAP: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeOutOfRange,
    #[error("cardinality {0} exceeds the cap {CARDINALITY_CAP}")]
    CardinalityCap(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("multiplicative order of zero is undefined")]
    ZeroElement,
    #[error("cannot parse field spec {0:?}; expected \"p\" or \"p^k\"")]
    BadSpecString(String),
}

/// A finite field F_q, q = p^k. The modulus is the full little-endian
/// coefficient vector (length k+1, monic) of the reduction polynomial;
/// it is empty for prime fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    pub modulus: Vec<u64>,
}

/// An element of F_q as a length-k coordinate vector over F_p
/// (coefficients of 1, x, ..., x^{k-1}).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElement {
    pub coords: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// --- dense little-endian polynomial arithmetic over F_p ---

fn poly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert!(*m.last().unwrap() == 1, "modulus must be monic");
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for i in 0..dm {
            let t = (lead * m[i]) % p;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    poly_trim(&mut a);
    poly_trim(&mut b);
    while !b.is_empty() {
        // make b monic so poly_rem applies
        let lead = *b.last().unwrap();
        if lead != 1 {
            let inv = mod_inv(lead, p);
            for c in b.iter_mut() {
                *c = (*c * inv) % p;
            }
        }
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: p prime, a != 0
    mod_pow(a, p - 2, p)
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// x^(p^reps) mod m, by repeated exponentiation to the p-th power.
fn frobenius_power(m: &[u64], p: u64, reps: u32) -> Vec<u64> {
    let mut x = vec![0, 1]; // the polynomial x
    for _ in 0..reps {
        x = poly_powmod(&x, p, m, p);
    }
    x
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = (f.len() - 1) as u32;
    if k == 1 {
        return true;
    }
    // f irreducible iff x^{p^k} = x mod f and gcd(x^{p^{k/l}} - x, f) = 1
    // for every prime l dividing k.
    let xq = frobenius_power(f, p, k);
    let mut diff = xq.clone();
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = (diff[1] + p - 1) % p;
    poly_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    let mut rem = k;
    let mut l = 2;
    while l <= rem {
        if rem % l == 0 {
            let xe = frobenius_power(f, p, k / l);
            let mut d = xe;
            if d.len() < 2 {
                d.resize(2, 0);
            }
            d[1] = (d[1] + p - 1) % p;
            poly_trim(&mut d);
            let g = poly_gcd(&d, f, p);
            if g.len() != 1 {
                return false;
            }
            while rem % l == 0 {
                rem /= l;
            }
        }
        l += 1;
    }
    true
}

/// Smallest monic irreducible of degree k over F_p, ordered by the
/// mixed-radix rank of the lower coefficient vector (c_0 + c_1 p + ...).
fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let mut lower = vec![0u64; k];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
        // increment the mixed-radix counter
        let mut i = 0;
        loop {
            lower[i] += 1;
            if lower[i] < p {
                break;
            }
            lower[i] = 0;
            i += 1;
            assert!(i < k, "no irreducible polynomial found (impossible)");
        }
    }
}

impl FieldSpec {
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NonPrime(p));
        }
        if k < 1 {
            return Err(FieldError::DegreeOutOfRange);
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q.checked_mul(p).ok_or(FieldError::CardinalityCap(u64::MAX))?;
            if q > CARDINALITY_CAP {
                return Err(FieldError::CardinalityCap(q));
            }
        }
        let modulus = if k == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, k)
        };
        Ok(FieldSpec { p, k, q, modulus })
    }

    /// Parse "p" or "p^k".
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let bad = || FieldError::BadSpecString(s.to_string());
        match s.split_once('^') {
            None => {
                let p: u64 = s.trim().parse().map_err(|_| bad())?;
                FieldSpec::new(p, 1)
            }
            Some((ps, ks)) => {
                let p: u64 = ps.trim().parse().map_err(|_| bad())?;
                let k: u32 = ks.trim().parse().map_err(|_| bad())?;
                FieldSpec::new(p, k)
            }
        }
    }

    /// Construct F_q for a prime power q, inferring (p, k).
    pub fn from_q(q: u64) -> Result<Self, FieldError> {
        if q < 2 {
            return Err(FieldError::NonPrime(q));
        }
        let mut p = 2;
        while p * p <= q {
            if q % p == 0 {
                let mut k = 0u32;
                let mut m = q;
                while m % p == 0 {
                    m /= p;
                    k += 1;
                }
                if m != 1 {
                    return Err(FieldError::NonPrime(q));
                }
                return FieldSpec::new(p, k);
            }
            p += 1;
        }
        FieldSpec::new(q, 1) // q itself prime
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coords: vec![0; self.k as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        let mut coords = vec![0; self.k as usize];
        coords[0] = 1;
        FieldElement { coords }
    }

    /// Canonical scalar embedding of a residue mod p.
    pub fn scalar(&self, c: u64) -> FieldElement {
        let mut coords = vec![0; self.k as usize];
        coords[0] = c % self.p;
        FieldElement { coords }
    }

    /// The i-th element in the deterministic enumeration order
    /// (mixed-radix little-endian over the coordinates), 0 <= i < q.
    pub fn element_from_rank(&self, mut i: u64) -> FieldElement {
        debug_assert!(i < self.q);
        let mut coords = vec![0; self.k as usize];
        for c in coords.iter_mut() {
            *c = i % self.p;
            i /= self.p;
        }
        FieldElement { coords }
    }

    pub fn rank_of(&self, x: &FieldElement) -> u64 {
        let mut r = 0u64;
        for &c in x.coords.iter().rev() {
            r = r * self.p + c;
        }
        r
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.element_from_rank(i))
    }

    pub fn is_zero(&self, x: &FieldElement) -> bool {
        x.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coords }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        let coords = a.coords.iter().map(|&x| (self.p - x) % self.p).collect();
        FieldElement { coords }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        if self.k == 1 {
            return FieldElement {
                coords: vec![a.coords[0] * b.coords[0] % self.p],
            };
        }
        let prod = poly_mul(&a.coords, &b.coords, self.p);
        let mut red = poly_rem(&prod, &self.modulus, self.p);
        red.resize(self.k as usize, 0);
        FieldElement { coords: red }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.q - 2))
    }

    /// Order of x in the multiplicative group; x must be nonzero.
    pub fn element_order(&self, x: &FieldElement) -> Result<u64, FieldError> {
        if self.is_zero(x) {
            return Err(FieldError::ZeroElement);
        }
        let mut e = self.q - 1;
        for l in prime_factors(self.q - 1) {
            while e % l == 0 && self.is_zero(&self.sub(&self.pow(x, e / l), &self.one())) {
                e /= l;
            }
        }
        Ok(e)
    }

    /// Spec string "p" or "p^k".
    pub fn spec_string(&self) -> String {
        if self.k == 1 {
            format!("{}", self.p)
        } else {
            format!("{}^{}", self.p, self.k)
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "[{}]", self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Precomputed rank-indexed arithmetic tables for fast exhaustive
/// enumeration. Element i is `FieldSpec::element_from_rank(i)`.
pub struct FieldTable {
    pub q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    neg: Vec<u16>,
}

impl FieldTable {
    pub fn new(spec: &FieldSpec) -> Self {
        let q = spec.q as usize;
        assert!(q <= 4096, "field table limited to q <= 4096");
        let elems: Vec<FieldElement> = spec.elements().collect();
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for i in 0..q {
            for j in i..q {
                let s = spec.rank_of(&spec.add(&elems[i], &elems[j])) as u16;
                let m = spec.rank_of(&spec.mul(&elems[i], &elems[j])) as u16;
                add[i * q + j] = s;
                add[j * q + i] = s;
                mul[i * q + j] = m;
                mul[j * q + i] = m;
            }
        }
        let mut inv = vec![0u16; q];
        let mut neg = vec![0u16; q];
        for i in 0..q {
            neg[i] = spec.rank_of(&spec.neg(&elems[i])) as u16;
            if i != 0 {
                inv[i] = spec.rank_of(&spec.inv(&elems[i]).unwrap()) as u16;
            }
        }
        FieldTable { q, add, mul, inv, neg }
    }

    #[inline(always)]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline(always)]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline(always)]
    pub fn inv(&self, a: u16) -> u16 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    #[inline(always)]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline(always)]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }
}
