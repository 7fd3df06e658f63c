//! Prime fields F_p (p odd, p < 2^31) and explicit extensions F_{p^k}.
//!
//! Extension elements are stored dense in the power basis of a monic
//! irreducible modulus over F_p. There are no towers: F_{p^{km}} is built
//! directly over F_p, and embeddings between fields are computed on demand
//! (see [`crate::poly::Embedding`]).
//!
//! Elements are small `Copy` values tagged with a fingerprint of their
//! field. Arithmetic goes through the [`Field`] context; the `checked_*`
//! methods report mixed-field operands as [`Error::FieldMismatch`], the
//! plain methods only debug-assert it.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree over F_p.
pub const MAX_EXT_DEGREE: usize = 24;

/// Seed used by [`Field::extension`] when choosing the defining polynomial.
pub const DEFAULT_FIELD_SEED: u64 = 0x5eed_f1e1d;

const LAZY_REDUCTION_BOUND: u64 = 1 << 20;

pub(crate) fn is_prime(n: u64) -> bool {
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

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Dense polynomials over F_p as plain coefficient vectors (low to high,
/// no trailing zeros). Only what the field layer itself needs: the
/// irreducibility test and inversion modulo the defining polynomial.
pub(crate) mod fp_poly {
    use super::{inv_mod, pow_mod};

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(out)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    /// Returns (quotient, remainder).
    pub fn divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = trim(a.to_vec());
        if r.len() < m.len() {
            return (Vec::new(), r);
        }
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p).expect("nonzero leading coefficient");
        let mut q = vec![0u64; r.len() - dm];
        while r.len() > dm && !r.is_empty() {
            let shift = r.len() - 1 - dm;
            let c = r[r.len() - 1] * lead_inv % p;
            q[shift] = c;
            for (j, &mj) in m.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - c * mj % p) % p;
            }
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        divrem(a, m, p).1
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[1], m, p);
        let mut base = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&l) => {
                let li = inv_mod(l, p).expect("nonzero");
                a.iter().map(|&x| x * li % p).collect()
            }
        }
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        monic(&x, p)
    }

    /// x^(p^j) mod m, by j successive p-th powers.
    pub fn x_pow_p_iter(j: usize, m: &[u64], p: u64) -> Vec<u64> {
        let mut h = rem(&[0, 1], m, p);
        for _ in 0..j {
            h = powmod(&h, p, m, p);
        }
        h
    }

    /// Rabin's test: f monic of degree k is irreducible iff
    /// x^(p^k) = x mod f and gcd(x^(p^(k/r)) - x, f) = 1 for primes r | k.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let f = trim(f.to_vec());
        if f.len() < 2 {
            return false;
        }
        let k = f.len() - 1;
        if k == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let mut n = k;
        let mut primes = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                primes.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        for r in primes {
            let h = x_pow_p_iter(k / r, &f, p);
            let g = gcd(&sub(&h, &x, p), &f, p);
            if g.len() != 1 {
                return false;
            }
        }
        let h = x_pow_p_iter(k, &f, p);
        sub(&h, &rem(&x, &f, p), p).is_empty()
    }

    /// Inverse of a modulo m (extended Euclid), if gcd(a, m) = 1.
    pub fn inv_mod_poly(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        let (mut r0, mut r1) = (trim(m.to_vec()), rem(a, m, p));
        let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s = sub(&s0, &mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.len() != 1 {
            return None;
        }
        let c = inv_mod(r0[0], p)?;
        let out: Vec<u64> = s0.iter().map(|&x| x * c % p).collect();
        Some(rem(&out, m, p))
    }

    #[allow(dead_code)]
    pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
        a.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
    }

    #[allow(dead_code)]
    pub fn pow_scalar(x: u64, e: u64, p: u64) -> u64 {
        pow_mod(x, e, p)
    }
}

/// Returns a monic irreducible polynomial of degree `k` over F_p
/// (coefficients low to high), found by seeded random trial.
pub fn find_irreducible(p: u64, k: usize, seed: u64) -> Result<Vec<u64>> {
    if p < 3 || p >= 1 << 31 || !is_prime(p) {
        return Err(Error::BadPrime(p));
    }
    if k == 0 || k > MAX_EXT_DEGREE {
        return Err(Error::BadDegree(k));
    }
    if k == 1 {
        return Ok(vec![0, 1]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 8) ^ k as u64);
    loop {
        let mut f: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        f.push(1);
        if f[0] != 0 && fp_poly::is_irreducible(&f, p) {
            return Ok(f);
        }
    }
}

/// JSON shape of a field: `{"p": .., "k": .., "modulus": [low..high]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub k: usize,
    pub modulus: Vec<u64>,
}

struct FieldInner {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    /// (p - m_j) mod p for the low k coefficients of the modulus.
    neg_modulus: [u64; MAX_EXT_DEGREE],
    order: u128,
    tag: u32,
}

/// A finite field F_q, q = p^k. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}{:?}", self.0.p, self.0.k, self.0.modulus)
        }
    }
}

/// An element of some [`Field`]: `len` coefficients over F_p in the power
/// basis, tagged with the owning field's fingerprint.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe {
    c: [u32; MAX_EXT_DEGREE],
    len: u8,
    tag: u32,
}

impl Fe {
    pub fn coeffs(&self) -> &[u32] {
        &self.c[..self.len as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs().iter().all(|&c| c == 0)
    }

    /// True when the element lies in the prime field.
    pub fn is_prime_field_element(&self) -> bool {
        self.coeffs()[1..].iter().all(|&c| c == 0)
    }

    pub fn to_u64_vec(&self) -> Vec<u64> {
        self.coeffs().iter().map(|&c| c as u64).collect()
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 1 {
            write!(f, "{}", self.c[0])
        } else {
            let parts: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
            write!(f, "{}", parts.join(":"))
        }
    }
}

fn fingerprint(p: u64, k: usize, modulus: &[u64]) -> u32 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for x in std::iter::once(p).chain(std::iter::once(k as u64)).chain(modulus.iter().copied()) {
        h ^= x;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    (h ^ (h >> 32)) as u32
}

fn field_cache() -> &'static Mutex<HashMap<(u64, usize), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Field> {
        Field::extension(p, 1)
    }

    /// F_{p^k} with the defining polynomial chosen by
    /// [`find_irreducible`] under [`DEFAULT_FIELD_SEED`]. Repeated calls
    /// return the same field.
    pub fn extension(p: u64, k: usize) -> Result<Field> {
        if let Some(f) = field_cache().lock().expect("field cache").get(&(p, k)) {
            return Ok(f.clone());
        }
        let modulus = find_irreducible(p, k, DEFAULT_FIELD_SEED)?;
        let field = Field::from_parts(p, modulus)?;
        field_cache()
            .lock()
            .expect("field cache")
            .insert((p, k), field.clone());
        Ok(field)
    }

    /// F_p[t]/(modulus); the modulus must be monic irreducible.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Field> {
        if p < 3 || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        let modulus = fp_poly::trim(modulus.into_iter().map(|c| c % p).collect());
        if modulus.len() < 2 || modulus.last() != Some(&1) || !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus);
        }
        Field::from_parts(p, modulus)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field> {
        let f = Field::with_modulus(d.p, d.modulus.clone())?;
        if f.degree() != d.k {
            return Err(Error::ReducibleModulus);
        }
        Ok(f)
    }

    fn from_parts(p: u64, modulus: Vec<u64>) -> Result<Field> {
        if p < 3 || p >= 1 << 31 || !is_prime(p) {
            return Err(Error::BadPrime(p));
        }
        let k = modulus.len() - 1;
        if k == 0 || k > MAX_EXT_DEGREE {
            return Err(Error::BadDegree(k));
        }
        let mut order: u128 = 1;
        for _ in 0..k {
            order = order
                .checked_mul(p as u128)
                .ok_or(Error::FieldTooLarge { p, k })?;
        }
        let mut neg_modulus = [0u64; MAX_EXT_DEGREE];
        for j in 0..k {
            neg_modulus[j] = (p - modulus[j] % p) % p;
        }
        let tag = fingerprint(p, k, &modulus);
        Ok(Field(Arc::new(FieldInner {
            p,
            k,
            modulus,
            neg_modulus,
            order,
            tag,
        })))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Extension degree k over F_p.
    pub fn degree(&self) -> usize {
        self.0.k
    }

    /// q = p^k.
    pub fn order(&self) -> u128 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.0.p,
            k: self.0.k,
            modulus: self.0.modulus.clone(),
        }
    }

    pub fn contains(&self, a: &Fe) -> bool {
        a.tag == self.0.tag && a.len as usize == self.0.k
    }

    fn raw(&self) -> Fe {
        Fe {
            c: [0; MAX_EXT_DEGREE],
            len: self.0.k as u8,
            tag: self.0.tag,
        }
    }

    pub fn zero(&self) -> Fe {
        self.raw()
    }

    pub fn one(&self) -> Fe {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> Fe {
        let mut e = self.raw();
        e.c[0] = (n % self.0.p) as u32;
        e
    }

    pub fn from_i64(&self, n: i64) -> Fe {
        let p = self.0.p as i64;
        self.from_u64(n.rem_euclid(p) as u64)
    }

    /// Element with the given power-basis coefficients (low to high);
    /// shorter inputs are zero-padded.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Fe> {
        if coeffs.len() > self.0.k {
            return Err(Error::FieldMismatch);
        }
        let mut e = self.raw();
        for (i, &c) in coeffs.iter().enumerate() {
            e.c[i] = (c % self.0.p) as u32;
        }
        Ok(e)
    }

    /// The class of t in F_p[t]/(modulus).
    pub fn generator(&self) -> Fe {
        if self.0.k == 1 {
            // t = -m_0 when the modulus is t + m_0
            return self.from_u64(self.0.neg_modulus[0]);
        }
        let mut e = self.raw();
        e.c[1] = 1;
        e
    }

    /// Bijection {0..q} -> F_q via base-p digits (low digit = constant term).
    pub fn element(&self, mut index: u128) -> Fe {
        let mut e = self.raw();
        let p = self.0.p as u128;
        for i in 0..self.0.k {
            e.c[i] = (index % p) as u32;
            index /= p;
        }
        e
    }

    pub fn index_of(&self, a: &Fe) -> u128 {
        let p = self.0.p as u128;
        a.coeffs().iter().rev().fold(0u128, |acc, &c| acc * p + c as u128)
    }

    /// All q elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.0.order).map(move |i| self.element(i))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        let mut e = self.raw();
        for i in 0..self.0.k {
            e.c[i] = rng.gen_range(0..self.0.p) as u32;
        }
        e
    }

    #[inline]
    fn check(&self, a: &Fe) {
        debug_assert!(self.contains(a), "element {:?} not in {:?}", a, self);
    }

    fn same(&self, a: &Fe, b: &Fe) -> Result<()> {
        if self.contains(a) && self.contains(b) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    #[inline]
    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        self.check(a);
        self.check(b);
        let p = self.0.p as u32;
        let mut e = *a;
        for i in 0..self.0.k {
            let s = a.c[i] as u64 + b.c[i] as u64;
            e.c[i] = (s % p as u64) as u32;
        }
        e
    }

    #[inline]
    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        self.check(a);
        self.check(b);
        let p = self.0.p;
        let mut e = *a;
        for i in 0..self.0.k {
            e.c[i] = ((a.c[i] as u64 + p - b.c[i] as u64) % p) as u32;
        }
        e
    }

    #[inline]
    pub fn neg(&self, a: &Fe) -> Fe {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        self.check(a);
        self.check(b);
        let p = self.0.p;
        let k = self.0.k;
        if k == 1 {
            let mut e = *a;
            e.c[0] = (a.c[0] as u64 * b.c[0] as u64 % p) as u32;
            return e;
        }
        let lazy = p < LAZY_REDUCTION_BOUND;
        let mut acc = [0u64; 2 * MAX_EXT_DEGREE];
        for i in 0..k {
            let ai = a.c[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..k {
                let t = acc[i + j] + ai * b.c[j] as u64;
                acc[i + j] = if lazy { t } else { t % p };
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = acc[i] % p;
            if c == 0 {
                continue;
            }
            for j in 0..k {
                let t = acc[i - k + j] + c * self.0.neg_modulus[j];
                acc[i - k + j] = if lazy { t } else { t % p };
            }
        }
        let mut e = self.raw();
        for i in 0..k {
            e.c[i] = (acc[i] % p) as u32;
        }
        e
    }

    #[inline]
    pub fn square(&self, a: &Fe) -> Fe {
        self.mul(a, a)
    }

    pub fn scale(&self, a: &Fe, s: u64) -> Fe {
        self.mul(a, &self.from_u64(s))
    }

    pub fn pow(&self, a: &Fe, mut e: u128) -> Fe {
        let mut acc = self.one();
        let mut base = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &Fe) -> Result<Fe> {
        if !self.contains(a) {
            return Err(Error::FieldMismatch);
        }
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.0.p;
        if self.0.k == 1 {
            return Ok(self.from_u64(inv_mod(a.c[0] as u64, p).expect("nonzero")));
        }
        let inv = fp_poly::inv_mod_poly(&fp_poly::trim(a.to_u64_vec()), &self.0.modulus, p)
            .ok_or(Error::DivisionByZero)?;
        self.from_coeffs(&inv)
    }

    pub fn div(&self, a: &Fe, b: &Fe) -> Result<Fe> {
        self.same(a, b)?;
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn checked_add(&self, a: &Fe, b: &Fe) -> Result<Fe> {
        self.same(a, b)?;
        Ok(self.add(a, b))
    }

    pub fn checked_sub(&self, a: &Fe, b: &Fe) -> Result<Fe> {
        self.same(a, b)?;
        Ok(self.sub(a, b))
    }

    pub fn checked_mul(&self, a: &Fe, b: &Fe) -> Result<Fe> {
        self.same(a, b)?;
        Ok(self.mul(a, b))
    }

    /// a^(p^j), by repeated p-th powering.
    pub fn frobenius(&self, a: &Fe, j: usize) -> Fe {
        if self.0.k == 1 {
            return *a;
        }
        let mut x = *a;
        for _ in 0..(j % self.0.k) {
            x = self.pow(&x, self.0.p as u128);
        }
        x
    }

    /// Inverse Frobenius a^(1/p).
    pub fn frobenius_inverse(&self, a: &Fe) -> Fe {
        self.frobenius(a, self.0.k - 1)
    }

    /// Norm to F_p: the product of the k Galois conjugates.
    pub fn norm(&self, a: &Fe) -> u64 {
        let mut acc = *a;
        let mut conj = *a;
        for _ in 1..self.0.k {
            conj = self.pow(&conj, self.0.p as u128);
            acc = self.mul(&acc, &conj);
        }
        debug_assert!(acc.is_prime_field_element());
        acc.c[0] as u64
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, -1 otherwise.
    /// Equal to a^((q-1)/2), evaluated as the Legendre symbol of the norm.
    pub fn quadratic_character(&self, a: &Fe) -> i8 {
        if a.is_zero() {
            return 0;
        }
        let n = self.norm(a);
        if pow_mod(n, (self.0.p - 1) / 2, self.0.p) == 1 {
            1
        } else {
            -1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_in_f5() {
        let f = Field::prime(5).unwrap();
        assert_eq!(f.inv(&f.from_u64(2)).unwrap(), f.from_u64(3));
        assert_eq!(f.inv(&f.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn fermat_in_f7() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.pow(&f.from_u64(3), 6), f.one());
    }

    #[test]
    fn f25_with_t_squared_plus_two() {
        // -2 = 3 is not a square mod 5
        let squares: Vec<u64> = (0..5).map(|x| x * x % 5).collect();
        assert!(!squares.contains(&3));
        let f = Field::with_modulus(5, vec![2, 0, 1]).unwrap();
        let t = f.generator();
        assert_eq!(f.mul(&t, &t), f.from_u64(3));
        assert_eq!(f.frobenius(&t, 1), f.scale(&t, 4));
        assert_eq!(f.frobenius(&t, 2), t);
    }

    #[test]
    fn quadratic_character_mod_7() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.quadratic_character(&f.zero()), 0);
        assert_eq!(f.quadratic_character(&f.from_u64(2)), 1);
        assert_eq!(f.quadratic_character(&f.from_u64(3)), -1);
    }

    #[test]
    fn character_agrees_with_power_definition() {
        let f = Field::extension(3, 3).unwrap();
        let e = (f.order() - 1) / 2;
        for a in f.elements().skip(1) {
            let v = f.pow(&a, e);
            let expected = if v == f.one() { 1 } else { -1 };
            assert_eq!(f.quadratic_character(&a), expected);
        }
    }

    #[test]
    fn character_sums_vanish() {
        for (p, k) in [(3, 1), (5, 2), (7, 3), (3, 6), (31, 2)] {
            let f = Field::extension(p, k).unwrap();
            let s: i64 = f.elements().map(|a| f.quadratic_character(&a) as i64).sum();
            assert_eq!(s, 0, "p={p} k={k}");
        }
    }

    #[test]
    fn find_irreducible_small_cases() {
        assert_eq!(find_irreducible(7, 1, 1).unwrap(), vec![0, 1]);
        let f = find_irreducible(5, 2, 9).unwrap();
        for x in 0..5 {
            assert_ne!(fp_poly::eval(&f, x, 5), 0);
        }
        let f = find_irreducible(3, 3, 9).unwrap();
        // gcd(x^27 - x, f) = f and gcd(x^3 - x, f) = 1
        let x27 = fp_poly::x_pow_p_iter(3, &f, 3);
        assert!(fp_poly::sub(&x27, &[0, 1], 3).is_empty());
        let x3 = fp_poly::x_pow_p_iter(1, &f, 3);
        assert_eq!(fp_poly::gcd(&fp_poly::sub(&x3, &[0, 1], 3), &f, 3), vec![1]);
        // determinism
        assert_eq!(find_irreducible(3, 3, 9).unwrap(), f);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::prime(2), Err(Error::BadPrime(2))));
        assert!(matches!(Field::prime(9), Err(Error::BadPrime(9))));
        assert!(matches!(Field::extension(5, 0), Err(Error::BadDegree(0))));
        assert!(matches!(
            Field::with_modulus(5, vec![1, 0, 1]),
            Err(Error::ReducibleModulus)
        ));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = Field::prime(5).unwrap();
        let b = Field::prime(7).unwrap();
        let c = Field::extension(5, 2).unwrap();
        assert_eq!(a.checked_add(&a.one(), &b.one()), Err(Error::FieldMismatch));
        assert_eq!(c.checked_mul(&c.one(), &a.one()), Err(Error::FieldMismatch));
        assert_eq!(a.inv(&b.one()), Err(Error::FieldMismatch));
    }

    #[test]
    fn element_index_roundtrip() {
        let f = Field::extension(5, 3).unwrap();
        for i in [0u128, 1, 7, 124] {
            assert_eq!(f.index_of(&f.element(i)), i);
        }
    }

    #[test]
    fn large_prime_multiplication() {
        let p = 2_147_483_647u64;
        let f = Field::extension(p, 2).unwrap();
        let a = f.from_coeffs(&[p - 1, p - 2]).unwrap();
        let b = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &b), f.one());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn fields() -> Vec<Field> {
            vec![
                Field::prime(5).unwrap(),
                Field::prime(31).unwrap(),
                Field::extension(5, 2).unwrap(),
                Field::extension(3, 5).unwrap(),
                Field::extension(7, 4).unwrap(),
            ]
        }

        proptest! {
            #[test]
            fn ring_axioms(seed in any::<u64>(), which in 0usize..5) {
                let f = &fields()[which];
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
                prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                if !a.is_zero() {
                    prop_assert_eq!(f.mul(&f.inv(&a).unwrap(), &a), f.one());
                }
                // x^q = x
                prop_assert_eq!(f.pow(&a, f.order()), a);
            }

            #[test]
            fn frobenius_is_automorphism(seed in any::<u64>(), which in 0usize..5) {
                let f = &fields()[which];
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (a, b) = (f.random(&mut rng), f.random(&mut rng));
                prop_assert_eq!(f.frobenius(&f.add(&a, &b), 1), f.add(&f.frobenius(&a, 1), &f.frobenius(&b, 1)));
                prop_assert_eq!(f.frobenius(&f.mul(&a, &b), 1), f.mul(&f.frobenius(&a, 1), &f.frobenius(&b, 1)));
                let mut x = a;
                for _ in 0..f.degree() {
                    x = f.frobenius(&x, 1);
                }
                prop_assert_eq!(x, a);
                prop_assert_eq!(f.frobenius_inverse(&f.frobenius(&a, 1)), a);
            }

            #[test]
            fn character_is_multiplicative(seed in any::<u64>(), which in 0usize..5) {
                let f = &fields()[which];
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let (a, b) = (f.random(&mut rng), f.random(&mut rng));
                prop_assert_eq!(
                    f.quadratic_character(&f.mul(&a, &b)),
                    f.quadratic_character(&a) * f.quadratic_character(&b)
                );
            }
        }
    }
}
