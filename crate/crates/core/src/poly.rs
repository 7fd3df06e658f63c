//! Dense univariate polynomials over a finite field.
//!
//! Besides ring arithmetic this module houses the pieces the curve code
//! leans on: square-free parts in characteristic p, distinct-degree and
//! Cantor–Zassenhaus factorization, root finding in freshly built
//! extensions, field embeddings, and determinants of polynomial matrices
//! by evaluation and interpolation.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Fe, Field, FieldDescriptor, MAX_EXT_DEGREE};
use crate::linalg;

/// Default crossover (in coefficients) from schoolbook to Karatsuba.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// Seed for the randomized equal-degree splitting when the caller has none.
pub const DEFAULT_SPLIT_SEED: u64 = 0xc0ffee;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    c: Vec<Fe>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

fn trim(c: &mut Vec<Fe>) {
    while c.last().is_some_and(Fe::is_zero) {
        c.pop();
    }
}

fn schoolbook(field: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(x, y));
        }
    }
    out
}

fn karatsuba(field: &Field, a: &[Fe], b: &[Fe], threshold: usize) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let threshold = threshold.max(2);
    if a.len() < threshold || b.len() < threshold {
        return schoolbook(field, a, b);
    }
    let n = a.len().max(b.len());
    let m = n / 2;
    let pad = |s: &[Fe]| {
        let mut v = s.to_vec();
        v.resize(n, field.zero());
        v
    };
    let (a, b) = (pad(a), pad(b));
    let (a0, a1) = a.split_at(m);
    let (b0, b1) = b.split_at(m);
    let z0 = karatsuba(field, a0, b0, threshold);
    let z2 = karatsuba(field, a1, b1, threshold);
    let sum = |x: &[Fe], y: &[Fe]| -> Vec<Fe> {
        (0..x.len().max(y.len()))
            .map(|i| {
                let u = x.get(i).copied().unwrap_or(field.zero());
                let v = y.get(i).copied().unwrap_or(field.zero());
                field.add(&u, &v)
            })
            .collect()
    };
    let mut z1 = karatsuba(field, &sum(a0, a1), &sum(b0, b1), threshold);
    for (i, x) in z0.iter().enumerate() {
        z1[i] = field.sub(&z1[i], x);
    }
    for (i, x) in z2.iter().enumerate() {
        z1[i] = field.sub(&z1[i], x);
    }
    let mut out = vec![field.zero(); 2 * n - 1];
    for (i, x) in z0.iter().enumerate() {
        out[i] = field.add(&out[i], x);
    }
    for (i, x) in z1.iter().enumerate() {
        out[i + m] = field.add(&out[i + m], x);
    }
    for (i, x) in z2.iter().enumerate() {
        out[i + 2 * m] = field.add(&out[i + 2 * m], x);
    }
    out
}

impl Poly {
    pub fn new(field: &Field, mut c: Vec<Fe>) -> Poly {
        debug_assert!(c.iter().all(|x| field.contains(x)));
        trim(&mut c);
        Poly { field: field.clone(), c }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: Fe) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// x - r
    pub fn linear(field: &Field, r: &Fe) -> Poly {
        Poly::new(field, vec![field.neg(r), field.one()])
    }

    /// Coefficients given as integers (prime-field values), low to high.
    pub fn from_u64s(field: &Field, c: &[u64]) -> Poly {
        Poly::new(field, c.iter().map(|&x| field.from_u64(x)).collect())
    }

    pub fn from_i64s(field: &Field, c: &[i64]) -> Poly {
        Poly::new(field, c.iter().map(|&x| field.from_i64(x)).collect())
    }

    /// Product of (x - r) over the given roots.
    pub fn from_roots(field: &Field, roots: &[Fe]) -> Poly {
        roots
            .iter()
            .fold(Poly::one(field), |acc, r| acc.mul(&Poly::linear(field, r)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.c
    }

    /// Coefficient of x^i, zero when out of range.
    pub fn coeff(&self, i: usize) -> Fe {
        self.c.get(i).copied().unwrap_or(self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<Fe> {
        self.c.last().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect();
        Poly::new(f, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.c.len().max(other.c.len());
        let c = (0..n).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect();
        Poly::new(f, c)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|x| self.field.neg(x)).collect())
    }

    pub fn scale(&self, s: &Fe) -> Poly {
        Poly::new(&self.field, self.c.iter().map(|x| self.field.mul(x, s)).collect())
    }

    /// Multiplication by x^n.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.field.zero(); n];
        c.extend_from_slice(&self.c);
        Poly::new(&self.field, c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.mul_with_threshold(other, KARATSUBA_THRESHOLD)
    }

    pub fn mul_schoolbook(&self, other: &Poly) -> Poly {
        Poly::new(&self.field, schoolbook(&self.field, &self.c, &other.c))
    }

    pub fn mul_with_threshold(&self, other: &Poly, threshold: usize) -> Poly {
        debug_assert!(self.field == other.field);
        Poly::new(&self.field, karatsuba(&self.field, &self.c, &other.c, threshold))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(self.mul(other))
    }

    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        if self.field != d.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let lead_inv = f.inv(&d.c[dd])?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = f.mul(&r[i], &lead_inv);
            if coef.is_zero() {
                continue;
            }
            q[i - dd] = coef;
            for (j, dj) in d.c.iter().enumerate() {
                r[i - dd + j] = f.sub(&r[i - dd + j], &f.mul(&coef, dj));
            }
        }
        r.truncate(dd);
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, x)| f.mul(x, &f.from_u64(i as u64)))
            .collect();
        Poly::new(f, c)
    }

    pub fn eval(&self, x: &Fe) -> Fe {
        let f = &self.field;
        self.c
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&self.field.inv(&l).expect("nonzero lead")),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u128) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m).expect("nonzero modulus")
    }

    pub fn powmod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field).rem(m).expect("nonzero modulus");
        let mut base = self.rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    /// f^((p-1)/2) for the field characteristic p, by binary powering.
    pub fn half_power(&self) -> Poly {
        self.pow(((self.field.characteristic() - 1) / 2) as u128)
    }

    /// The polynomial r with r(x)^p = self(x); requires self' = 0.
    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let c = self
            .c
            .iter()
            .step_by(p)
            .map(|x| f.frobenius_inverse(x))
            .collect();
        Poly::new(f, c)
    }

    /// Monic product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.monic();
        if f.is_constant() {
            return Ok(f);
        }
        let d = f.derivative();
        if d.is_zero() {
            return f.pth_root().squarefree_part();
        }
        let mut g = f.gcd(&d);
        let w = f.div_exact(&g)?;
        loop {
            let h = g.gcd(&w);
            if h.is_constant() {
                break;
            }
            g = g.div_exact(&h)?;
        }
        if g.is_constant() {
            return Ok(w);
        }
        Ok(w.mul(&g.pth_root().squarefree_part()?).monic())
    }

    /// x^(q^j) mod m via j successive q-th powers.
    fn frobenius_mod(&self, m: &Poly) -> Poly {
        self.powmod(self.field.order(), m)
    }

    /// Distinct-degree factorization of a monic square-free polynomial:
    /// pairs (d, product of all irreducible factors of degree d).
    pub fn distinct_degree_factorization(&self) -> Vec<(usize, Poly)> {
        let field = &self.field;
        let mut f = self.monic();
        let mut out = Vec::new();
        let x = Poly::x(field);
        let mut h = x.rem(&f).unwrap_or_else(|_| Poly::zero(field));
        let mut d = 0;
        while f.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.frobenius_mod(&f);
            let g = f.gcd(&h.sub(&x));
            if !g.is_constant() {
                f = f.div_exact(&g).expect("gcd divides");
                h = h.rem(&f).expect("nonzero");
                out.push((d, g));
            }
        }
        if let Some(deg) = f.degree() {
            if deg > 0 {
                out.push((deg, f));
            }
        }
        out
    }

    /// Cantor–Zassenhaus splitting of a monic square-free polynomial whose
    /// irreducible factors all have degree d.
    pub fn equal_degree_factorization<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Vec<Poly> {
        let n = self.degree().unwrap_or(0);
        if n <= d {
            return vec![self.monic()];
        }
        let field = &self.field;
        let half = (field.order() - 1) / 2;
        loop {
            let a = Poly::new(field, (0..n).map(|_| field.random(rng)).collect());
            if a.is_constant() {
                continue;
            }
            // a * a^q * ... * a^(q^(d-1)) lies in the F_q-span where the
            // quadratic character splits the factors
            let mut conj = a.rem(self).expect("nonzero");
            let mut t = conj.clone();
            for _ in 1..d {
                conj = conj.frobenius_mod(self);
                t = t.mulmod(&conj, self);
            }
            let b = t.powmod(half, self).sub(&Poly::one(field));
            let g = self.gcd(&b);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let other = self.div_exact(&g).expect("gcd divides");
                let mut out = g.equal_degree_factorization(d, rng);
                out.extend(other.equal_degree_factorization(d, rng));
                return out;
            }
        }
    }

    /// Irreducible monic factors with multiplicities, sorted by degree
    /// then coefficients.
    pub fn factor(&self, seed: u64) -> Result<Vec<(Poly, usize)>> {
        let rad = self.squarefree_part()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (d, g) in rad.distinct_degree_factorization() {
            for p in g.equal_degree_factorization(d, &mut rng) {
                let mut e = 0;
                let mut rest = self.clone();
                while let Ok(q) = rest.div_exact(&p) {
                    rest = q;
                    e += 1;
                }
                out.push((p, e));
            }
        }
        out.sort_by(|a, b| cmp_polys(&a.0, &b.0));
        Ok(out)
    }

    /// Roots lying in the coefficient field itself, with multiplicities,
    /// sorted by value.
    pub fn roots_in_field(&self, seed: u64) -> Result<Vec<(Fe, usize)>> {
        let rad = self.squarefree_part()?;
        let field = &self.field;
        if rad.is_constant() {
            return Ok(Vec::new());
        }
        let x = Poly::x(field);
        let xq = x.frobenius_mod(&rad);
        let lin = rad.gcd(&xq.sub(&x));
        if lin.is_constant() {
            return Ok(Vec::new());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for l in lin.equal_degree_factorization(1, &mut rng) {
            let r = field.neg(&l.coeff(0));
            let mut e = 0;
            let mut rest = self.clone();
            let lf = Poly::linear(field, &r);
            while let Ok(q) = rest.div_exact(&lf) {
                rest = q;
                e += 1;
            }
            out.push((r, e));
        }
        out.sort();
        Ok(out)
    }

    /// Coefficientwise image under an embedding.
    pub fn embed(&self, emb: &Embedding) -> Poly {
        Poly::new(&emb.dst, self.c.iter().map(|x| emb.embed(x)).collect())
    }

    /// Pulls coefficients back into the embedding's source field.
    pub fn descend(&self, emb: &Embedding) -> Result<Poly> {
        let c = self
            .c
            .iter()
            .map(|x| emb.descend(x).ok_or(Error::NotInSubfield))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(&emb.src, c))
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            field: self.field.descriptor(),
            coeffs: self.c.iter().map(Fe::to_u64_vec).collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Poly> {
        let field = Field::from_descriptor(&j.field)?;
        let c = j
            .coeffs
            .iter()
            .map(|v| field.from_coeffs(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(&field, c))
    }
}

/// Orders polynomials by degree, then by coefficient vectors from the top.
pub fn cmp_polys(a: &Poly, b: &Poly) -> Ordering {
    a.c.len()
        .cmp(&b.c.len())
        .then_with(|| a.c.iter().rev().cmp(b.c.iter().rev()))
}

/// JSON form: field descriptor header plus coefficient arrays low to high.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub field: FieldDescriptor,
    pub coeffs: Vec<Vec<u64>>,
}

/// A field homomorphism F_{p^a} -> F_{p^b}, a | b, sending the source
/// generator to a fixed root of its modulus in the target.
#[derive(Clone)]
pub struct Embedding {
    src: Field,
    dst: Field,
    /// Images of 1, t, t^2, ... of the source power basis.
    basis: Vec<Fe>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({:?} -> {:?})", self.src, self.dst)
    }
}

impl Embedding {
    pub fn new(src: &Field, dst: &Field) -> Result<Embedding> {
        if src.characteristic() != dst.characteristic() || dst.degree() % src.degree() != 0 {
            return Err(Error::FieldMismatch);
        }
        if src == dst {
            let mut basis = vec![dst.one()];
            let t = dst.generator();
            for i in 1..src.degree() {
                basis.push(dst.mul(&basis[i - 1], &t));
            }
            return Ok(Embedding {
                src: src.clone(),
                dst: dst.clone(),
                basis,
            });
        }
        let mut basis = vec![dst.one()];
        if src.degree() > 1 {
            let m = Poly::from_u64s(dst, src.modulus());
            let roots = m.roots_in_field(DEFAULT_SPLIT_SEED)?;
            let theta = roots.first().ok_or(Error::ReducibleModulus)?.0;
            for i in 1..src.degree() {
                basis.push(dst.mul(&basis[i - 1], &theta));
            }
        }
        Ok(Embedding {
            src: src.clone(),
            dst: dst.clone(),
            basis,
        })
    }

    pub fn source(&self) -> &Field {
        &self.src
    }

    pub fn target(&self) -> &Field {
        &self.dst
    }

    pub fn embed(&self, a: &Fe) -> Fe {
        debug_assert!(self.src.contains(a));
        a.coeffs()
            .iter()
            .zip(&self.basis)
            .fold(self.dst.zero(), |acc, (&c, b)| {
                self.dst.add(&acc, &self.dst.scale(b, c as u64))
            })
    }

    /// Preimage of `b`, if it lies in the image of the source field.
    pub fn descend(&self, b: &Fe) -> Option<Fe> {
        if !self.dst.contains(b) {
            return None;
        }
        let fp = Field::prime(self.src.characteristic()).ok()?;
        let rows = self.dst.degree();
        let a: linalg::Matrix = (0..rows)
            .map(|r| {
                self.basis
                    .iter()
                    .map(|e| fp.from_u64(e.coeffs()[r] as u64))
                    .collect()
            })
            .collect();
        let rhs: Vec<Fe> = b.coeffs().iter().map(|&c| fp.from_u64(c as u64)).collect();
        let x = linalg::solve(&fp, &a, &rhs)?;
        let coeffs: Vec<u64> = x.iter().map(|e| e.coeffs()[0] as u64).collect();
        self.src.from_coeffs(&coeffs).ok()
    }
}

/// F_{q^m} for q = |field| (built directly over F_p) with the canonical
/// embedding of `field` into it.
pub fn extend(field: &Field, m: usize) -> Result<(Field, Embedding)> {
    let k = field.degree() * m;
    if k > MAX_EXT_DEGREE {
        return Err(Error::BadDegree(k));
    }
    let big = Field::extension(field.characteristic(), k)?;
    let emb = Embedding::new(field, &big)?;
    Ok((big, emb))
}

/// One root of a polynomial, living in F_{q^degree}.
#[derive(Debug, Clone)]
pub struct Root {
    pub value: Fe,
    pub field: Field,
    /// Degree of the minimal polynomial over the coefficient field.
    pub degree: usize,
    pub multiplicity: usize,
    pub min_poly: Poly,
}

#[derive(Debug, Clone)]
pub struct RootList {
    /// Every conjugate of every resolved irreducible factor.
    pub roots: Vec<Root>,
    /// (degree, multiplicity) of irreducible factors above the search bound.
    pub unresolved: Vec<(usize, usize)>,
    /// Number of distinct roots in the algebraic closure.
    pub distinct_in_closure: usize,
}

impl RootList {
    pub fn resolved_degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Roots in the coefficient field itself.
    pub fn rational(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.degree == 1)
    }
}

/// Finds roots of `f` over extensions of degree at most `max_degree`.
pub fn roots(f: &Poly, max_degree: usize, seed: u64) -> Result<RootList> {
    let distinct_in_closure = f.squarefree_part()?.degree().unwrap_or(0);
    let field = f.field();
    let mut out = Vec::new();
    let mut unresolved = Vec::new();
    for (p, e) in f.factor(seed)? {
        let d = p.degree().expect("nonconstant factor");
        if d > max_degree || field.degree() * d > MAX_EXT_DEGREE {
            unresolved.push((d, e));
            continue;
        }
        let (big, emb) = match extend(field, d) {
            Ok(v) => v,
            Err(_) => {
                unresolved.push((d, e));
                continue;
            }
        };
        for (value, _) in p.embed(&emb).roots_in_field(seed)? {
            out.push(Root {
                value,
                field: big.clone(),
                degree: d,
                multiplicity: e,
                min_poly: p.clone(),
            });
        }
    }
    out.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| a.value.cmp(&b.value)));
    Ok(RootList {
        roots: out,
        unresolved,
        distinct_in_closure,
    })
}

/// Interpolating polynomial through (x_i, y_i), x_i distinct (Newton form).
pub fn interpolate(field: &Field, xs: &[Fe], ys: &[Fe]) -> Result<Poly> {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = field.sub(&coef[i], &coef[i - 1]);
            let den = field.sub(&xs[i], &xs[i - j]);
            coef[i] = field.div(&num, &den)?;
        }
    }
    let mut acc = Poly::zero(field);
    for i in (0..n).rev() {
        acc = acc
            .mul(&Poly::linear(field, &xs[i]))
            .add(&Poly::constant(field, coef[i]));
    }
    Ok(acc)
}

/// det(M) for a square matrix of polynomials, given an upper bound on its
/// degree, by evaluation at bound+1 points and interpolation. When the
/// coefficient field has too few points the computation moves to an
/// extension and the result is pulled back.
pub fn det_poly_matrix(m: &[Vec<Poly>], degree_bound: usize) -> Result<Poly> {
    let n = m.len();
    if n == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: m[0].len(),
        });
    }
    let field = m[0][0].field().clone();
    if m.iter().flatten().any(|e| e.field() != &field) {
        return Err(Error::FieldMismatch);
    }
    let needed = degree_bound as u128 + 1;
    let mut ext = 1;
    while field.order().checked_pow(ext as u32).map_or(false, |q| q < needed) {
        ext += 1;
    }
    let (work, emb) = if ext == 1 {
        (field.clone(), None)
    } else {
        let (big, emb) = extend(&field, ext)?;
        (big, Some(emb))
    };
    let lifted: Vec<Vec<Poly>> = match &emb {
        None => m.to_vec(),
        Some(e) => m.iter().map(|row| row.iter().map(|x| x.embed(e)).collect()).collect(),
    };
    let xs: Vec<Fe> = (0..needed).map(|i| work.element(i)).collect();
    let ys = xs
        .par_iter()
        .map(|x| {
            let a: linalg::Matrix = lifted
                .iter()
                .map(|row| row.iter().map(|e| e.eval(x)).collect())
                .collect();
            linalg::det(&work, &a)
        })
        .collect::<Result<Vec<_>>>()?;
    let d = interpolate(&work, &xs, &ys)?;
    match &emb {
        None => Ok(d),
        Some(e) => d
            .descend(e)
            .map_err(|_| Error::Internal("determinant coefficients outside the base field".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn basic_arithmetic() {
        let k = f(5);
        let a = Poly::from_i64s(&k, &[1, 1]);
        let b = Poly::from_i64s(&k, &[-1, 1]);
        assert_eq!(a.mul(&b), Poly::from_u64s(&k, &[4, 0, 1]));
        let x5 = Poly::x(&k).pow(5);
        assert!(x5.derivative().is_zero());
        let k7 = f(7);
        let g = Poly::from_u64s(&k7, &[1, 2, 0, 1]);
        assert_eq!(g.eval(&k7.from_u64(3)), k7.from_u64(6));
    }

    #[test]
    fn division_errors() {
        let k = f(5);
        let a = Poly::from_u64s(&k, &[1, 0, 1]);
        assert_eq!(a.divrem(&Poly::zero(&k)).unwrap_err(), Error::ZeroPolynomial);
        assert_eq!(a.div_exact(&Poly::from_u64s(&k, &[1, 1])).unwrap_err(), Error::InexactDivision);
        let b = Poly::from_u64s(&f(7), &[1]);
        assert_eq!(a.divrem(&b).unwrap_err(), Error::FieldMismatch);
    }

    #[test]
    fn half_power_examples() {
        let k = f(5);
        assert_eq!(Poly::x(&k).half_power(), Poly::x(&k).pow(2));
        // x(x-1)(x-2) = x^3 + 2x^2 + 2x over F_5
        let g = Poly::from_roots(&k, &[k.from_u64(0), k.from_u64(1), k.from_u64(2)]);
        assert_eq!(g, Poly::from_u64s(&k, &[0, 2, 2, 1]));
        assert_eq!(g.half_power().coeff(4), k.from_u64(3));
    }

    #[test]
    fn squarefree_examples() {
        let k = f(7);
        let r = |v| k.from_u64(v);
        let a = Poly::from_roots(&k, &[r(1), r(1), r(2)]);
        assert_eq!(a.squarefree_part().unwrap(), Poly::from_roots(&k, &[r(1), r(2)]));
        let k5 = f(5);
        let x5 = Poly::x(&k5).pow(5);
        assert_eq!(x5.squarefree_part().unwrap(), Poly::x(&k5));
        // (x-1)^5 (x-2)^2 (x-3) mixes both cases
        let b = Poly::from_roots(
            &k5,
            &[1, 1, 1, 1, 1, 2, 2, 3].map(|v| k5.from_u64(v)),
        );
        assert_eq!(
            b.squarefree_part().unwrap(),
            Poly::from_roots(&k5, &[1, 2, 3].map(|v| k5.from_u64(v)))
        );
        let sq = Poly::from_u64s(&k, &[1, 0, 1]);
        assert_eq!(sq.squarefree_part().unwrap(), sq);
    }

    #[test]
    fn roots_examples() {
        let k = f(7);
        let r = roots(&Poly::from_i64s(&k, &[-1, 0, 1]), 1, 1).unwrap();
        let vals: Vec<Fe> = r.roots.iter().map(|x| x.value).collect();
        assert_eq!(vals, vec![k.from_u64(1), k.from_u64(6)]);
        assert_eq!(r.distinct_in_closure, 2);

        // discriminant 12 = 2 is a non-residue mod 5
        assert!(!(0..5u64).any(|x| x * x % 5 == 2));
        let k5 = f(5);
        let g = Poly::from_u64s(&k5, &[1, 4, 1]);
        let r = roots(&g, 2, 1).unwrap();
        assert_eq!(r.rational().count(), 0);
        assert_eq!(r.roots.len(), 2);
        assert_eq!(r.distinct_in_closure, 2);
        for root in &r.roots {
            assert_eq!(root.field.order(), 25);
            let (_, emb) = extend(&k5, 2).unwrap();
            assert!(g.embed(&emb).eval(&root.value).is_zero());
        }

        let h = Poly::from_roots(&k, &[k.from_u64(3), k.from_u64(3)]).mul(&Poly::from_u64s(&k, &[1, 0, 1]));
        let r = roots(&h, 2, 1).unwrap();
        assert_eq!(r.distinct_in_closure, 3);
        assert_eq!(r.roots[0].value, k.from_u64(3));
        assert_eq!(r.roots[0].multiplicity, 2);
        assert_eq!(r.roots.iter().filter(|x| x.degree == 2).count(), 2);
        assert_eq!(r.resolved_degree(), 4);
        // brute force over F_49
        let (big, emb) = extend(&k, 2).unwrap();
        let hb = h.embed(&emb);
        let brute: Vec<Fe> = big.elements().filter(|x| hb.eval(x).is_zero()).collect();
        assert_eq!(brute.len(), 3);

        let r = roots(&h, 1, 1).unwrap();
        assert_eq!(r.unresolved, vec![(2, 1)]);
    }

    #[test]
    fn embedding_roundtrip() {
        let small = Field::extension(3, 2).unwrap();
        let (big, emb) = extend(&small, 3).unwrap();
        assert_eq!(big.degree(), 6);
        for a in small.elements() {
            for b in small.elements().take(3) {
                assert_eq!(emb.embed(&small.mul(&a, &b)), big.mul(&emb.embed(&a), &emb.embed(&b)));
            }
            assert_eq!(emb.descend(&emb.embed(&a)), Some(a));
        }
        assert_eq!(emb.descend(&big.generator()), None);
    }

    #[test]
    fn det_poly_matrix_examples() {
        let k = f(5);
        let m = vec![vec![Poly::from_u64s(&k, &[1, 2, 3])]];
        assert_eq!(det_poly_matrix(&m, 2).unwrap(), m[0][0]);
        let x = Poly::x(&k);
        let one = Poly::one(&k);
        let m = vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]];
        assert_eq!(det_poly_matrix(&m, 2).unwrap(), Poly::from_i64s(&k, &[-1, 0, 1]));
        // degree bound 6 over F_5 forces a lift
        let m3 = vec![
            vec![x.pow(2), one.clone(), x.clone()],
            vec![one.clone(), x.pow(2), one.clone()],
            vec![x.clone(), one.clone(), x.pow(2)],
        ];
        let d = det_poly_matrix(&m3, 6).unwrap();
        assert_eq!(d.field(), &k);
        assert_eq!(d, cofactor_det(&m3));
        assert!(matches!(
            det_poly_matrix(&[vec![x.clone(), one.clone()]], 2),
            Err(Error::NotSquare { .. })
        ));
    }

    /// Independent oracle: Laplace expansion along the first row.
    pub(crate) fn cofactor_det(m: &[Vec<Poly>]) -> Poly {
        let n = m.len();
        let field = m[0][0].field().clone();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = Poly::zero(&field);
        for j in 0..n {
            let minor: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
                .collect();
            let term = m[0][j].mul_schoolbook(&cofactor_det(&minor));
            acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn random_poly(field: &Field, rng: &mut ChaCha8Rng, deg: usize) -> Poly {
            Poly::new(field, (0..=deg).map(|_| field.random(rng)).collect())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(100))]

            #[test]
            fn gcd_divides_both(seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let k = Field::extension(5, 2).unwrap();
                let c = random_poly(&k, &mut rng, 2);
                let a = random_poly(&k, &mut rng, 4).mul(&c);
                let b = random_poly(&k, &mut rng, 3).mul(&c);
                prop_assume!(!a.is_zero() && !b.is_zero());
                let g = a.gcd(&b);
                prop_assert!(a.div_exact(&g).is_ok());
                prop_assert!(b.div_exact(&g).is_ok());
                prop_assert_eq!(g.lead(), Some(k.one()));
                prop_assert!(c.is_zero() || g.degree() >= c.degree());
            }

            #[test]
            fn karatsuba_matches_schoolbook(seed in any::<u64>(), da in 0usize..80, db in 0usize..80) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let k = Field::prime(7).unwrap();
                let a = random_poly(&k, &mut rng, da);
                let b = random_poly(&k, &mut rng, db);
                prop_assert_eq!(a.mul_with_threshold(&b, 4), a.mul_schoolbook(&b));
                prop_assert_eq!(a.mul(&b), a.mul_schoolbook(&b));
            }

            #[test]
            fn roots_evaluate_to_zero(seed in any::<u64>(), deg in 1usize..7) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let k = Field::prime(5).unwrap();
                let mut g = random_poly(&k, &mut rng, deg);
                prop_assume!(!g.is_zero() && g.degree().unwrap() > 0);
                g = g.monic();
                let r = roots(&g, 3, seed).unwrap();
                for root in &r.roots {
                    let (_, emb) = extend(&k, root.degree).unwrap();
                    prop_assert!(g.embed(&emb).eval(&root.value).is_zero());
                }
                if r.unresolved.is_empty() {
                    prop_assert_eq!(r.resolved_degree(), g.degree().unwrap());
                }
                // closure count against exhaustive evaluation over F_5, F_25, F_125
                let mut seen = 0;
                for m in 1..=3usize {
                    let (big, emb) = extend(&k, m).unwrap();
                    let gb = g.embed(&emb);
                    let new = big.elements().filter(|x| gb.eval(x).is_zero()).filter(|x| {
                        // count only roots of exact degree m
                        (1..m).filter(|d| m % d == 0).all(|d| big.frobenius(x, d) != *x)
                    }).count();
                    seen += new;
                }
                let covered: usize = r.roots.iter().filter(|x| x.degree <= 3).count();
                prop_assert_eq!(seen, covered);
                if r.unresolved.iter().all(|(d, _)| *d > 3) && r.unresolved.is_empty() {
                    prop_assert_eq!(seen, r.distinct_in_closure);
                }
            }

            #[test]
            fn det_matches_cofactor(seed in any::<u64>(), n in 1usize..5, which in 0usize..2) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let k = Field::prime([5, 7][which]).unwrap();
                let m: Vec<Vec<Poly>> = (0..n).map(|_| (0..n).map(|_| random_poly(&k, &mut rng, 3)).collect()).collect();
                prop_assert_eq!(det_poly_matrix(&m, 3 * n).unwrap(), cofactor_det(&m));
            }
        }
    }
}
