//! Hyperelliptic curves by branch locus, their Cartier–Manin matrices,
//! p-rank, a-number, and the non-ordinarity determinant as a polynomial
//! in one moving branch point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Fe, Field, FieldDescriptor};
use crate::linalg::{self, Matrix};
use crate::poly::{det_poly_matrix, Embedding, Poly};

/// A point of the projective line over a finite field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(Fe),
    Infinity,
}

impl ProjPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<Fe> {
        match self {
            ProjPoint::Finite(x) => Some(*x),
            ProjPoint::Infinity => None,
        }
    }

    /// Parses `inf`, an integer, or colon-separated power-basis coefficients.
    pub fn parse(field: &Field, token: &str) -> Result<ProjPoint> {
        let t = token.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(ProjPoint::Infinity);
        }
        if t.contains(':') {
            let c = t
                .split(':')
                .map(|s| s.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad coefficient in {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            if c.len() != field.degree() {
                return Err(Error::Parse(format!("{t:?} needs {} coefficients", field.degree())));
            }
            return Ok(ProjPoint::Finite(field.from_coeffs(&c)?));
        }
        let n: i64 = t.parse().map_err(|_| Error::Parse(format!("bad branch point {t:?}")))?;
        Ok(ProjPoint::Finite(field.from_i64(n)))
    }

    pub fn token(&self) -> String {
        match self {
            ProjPoint::Finite(x) => x.to_string(),
            ProjPoint::Infinity => "inf".to_string(),
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// A finite set of distinct points of P^1, kept sorted (finite points in
/// coefficient order, then infinity).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchLocus {
    field: Field,
    points: Vec<ProjPoint>,
}

impl BranchLocus {
    pub fn new(field: &Field, points: Vec<ProjPoint>) -> Result<BranchLocus> {
        for p in &points {
            if let ProjPoint::Finite(x) = p {
                if !field.contains(x) {
                    return Err(Error::FieldMismatch);
                }
            }
        }
        let mut sorted = points;
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Repeated(w[0].token()));
        }
        Ok(BranchLocus {
            field: field.clone(),
            points: sorted,
        })
    }

    /// Comma-separated tokens, as accepted by [`ProjPoint::parse`].
    pub fn parse(field: &Field, s: &str) -> Result<BranchLocus> {
        let pts = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| ProjPoint::parse(field, t))
            .collect::<Result<Vec<_>>>()?;
        BranchLocus::new(field, pts)
    }

    pub fn from_finite(field: &Field, xs: &[Fe], with_infinity: bool) -> Result<BranchLocus> {
        let mut pts: Vec<ProjPoint> = xs.iter().map(|&x| ProjPoint::Finite(x)).collect();
        if with_infinity {
            pts.push(ProjPoint::Infinity);
        }
        BranchLocus::new(field, pts)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn has_infinity(&self) -> bool {
        self.points.last() == Some(&ProjPoint::Infinity)
    }

    pub fn finite_points(&self) -> Vec<Fe> {
        self.points.iter().filter_map(ProjPoint::finite).collect()
    }

    /// |B|/2 - 1 for even |B| >= 2.
    pub fn genus(&self) -> Option<usize> {
        let n = self.points.len();
        (n >= 2 && n % 2 == 0).then(|| n / 2 - 1)
    }

    pub fn tokens(&self) -> Vec<String> {
        self.points.iter().map(ProjPoint::token).collect()
    }

    /// Image under a Möbius transformation.
    pub fn transform(&self, m: &Mobius) -> Result<BranchLocus> {
        if m.field != self.field {
            return Err(Error::FieldMismatch);
        }
        BranchLocus::new(&self.field, self.points.iter().map(|p| m.apply(p)).collect())
    }

    /// Image under a field embedding.
    pub fn embed(&self, emb: &Embedding) -> Result<BranchLocus> {
        if emb.source() != &self.field {
            return Err(Error::FieldMismatch);
        }
        let pts = self
            .points
            .iter()
            .map(|p| match p {
                ProjPoint::Finite(x) => ProjPoint::Finite(emb.embed(x)),
                ProjPoint::Infinity => ProjPoint::Infinity,
            })
            .collect();
        BranchLocus::new(emb.target(), pts)
    }
}

/// x -> (a x + b) / (c x + d) with ad - bc != 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mobius {
    field: Field,
    pub a: Fe,
    pub b: Fe,
    pub c: Fe,
    pub d: Fe,
}

impl Mobius {
    pub fn new(field: &Field, a: Fe, b: Fe, c: Fe, d: Fe) -> Result<Mobius> {
        if field.sub(&field.mul(&a, &d), &field.mul(&b, &c)).is_zero() {
            return Err(Error::Degenerate("Möbius map with ad - bc = 0".into()));
        }
        Ok(Mobius {
            field: field.clone(),
            a,
            b,
            c,
            d,
        })
    }

    /// x -> (x - z)/(x - w), sending z to 0 and w to infinity; w may be
    /// infinity, giving x -> x - z.
    pub fn zero_infinity(field: &Field, z: &Fe, w: &ProjPoint) -> Result<Mobius> {
        match w {
            ProjPoint::Infinity => Mobius::new(field, field.one(), field.neg(z), field.zero(), field.one()),
            ProjPoint::Finite(w) => Mobius::new(field, field.one(), field.neg(z), field.one(), field.neg(w)),
        }
    }

    pub fn identity(field: &Field) -> Mobius {
        Mobius {
            field: field.clone(),
            a: field.one(),
            b: field.zero(),
            c: field.zero(),
            d: field.one(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let k = &self.field;
        match p {
            ProjPoint::Infinity => {
                if self.c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(k.div(&self.a, &self.c).expect("nonzero"))
                }
            }
            ProjPoint::Finite(x) => {
                let num = k.add(&k.mul(&self.a, x), &self.b);
                let den = k.add(&k.mul(&self.c, x), &self.d);
                match k.div(&num, &den) {
                    Ok(v) => ProjPoint::Finite(v),
                    Err(_) => ProjPoint::Infinity,
                }
            }
        }
    }
}

/// y^2 = f(x) with f monic square-free of degree 2g+1, obtained from a
/// branch locus by a Möbius map sending one branch point to infinity.
#[derive(Debug, Clone)]
pub struct HyperellipticModel {
    locus: BranchLocus,
    f: Poly,
    map: Mobius,
    genus: usize,
}

impl HyperellipticModel {
    pub fn locus(&self) -> &BranchLocus {
        &self.locus
    }

    pub fn field(&self) -> &Field {
        self.locus.field()
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn map(&self) -> &Mobius {
        &self.map
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn descriptor(&self) -> CurveDescriptor {
        CurveDescriptor {
            field: self.field().descriptor(),
            branch_locus: self.locus.tokens(),
            genus: self.genus,
        }
    }
}

/// Normalizes with the smallest finite point sent to infinity when
/// infinity is not already a branch point.
pub fn normalize_model(b: &BranchLocus) -> Result<HyperellipticModel> {
    let b0 = if b.has_infinity() {
        ProjPoint::Infinity
    } else {
        *b.points().first().ok_or_else(|| Error::InvalidLocus("empty".into()))?
    };
    normalize_model_at(b, &b0)
}

/// Normalizes with the chosen branch point `b0` sent to infinity.
///
/// For finite b0 the map is x -> 1/(c (x - b0)) with c the product of
/// (b0 - b) over the other finite branch points, so the model is
/// isomorphic to the original curve over F_q and not a quadratic twist.
pub fn normalize_model_at(b: &BranchLocus, b0: &ProjPoint) -> Result<HyperellipticModel> {
    let n = b.len();
    if n % 2 != 0 || n < 4 {
        return Err(Error::InvalidLocus(format!("need an even number >= 4 of branch points, got {n}")));
    }
    if !b.contains(b0) {
        return Err(Error::InvalidLocus(format!("{b0} is not a branch point")));
    }
    let k = b.field();
    let genus = n / 2 - 1;
    let (map, roots) = match b0 {
        ProjPoint::Infinity => (Mobius::identity(k), b.finite_points()),
        ProjPoint::Finite(z) => {
            let others: Vec<Fe> = b.finite_points().into_iter().filter(|x| x != z).collect();
            let c = others.iter().fold(k.one(), |acc, x| k.mul(&acc, &k.sub(z, x)));
            let map = Mobius {
                field: k.clone(),
                a: k.zero(),
                b: k.one(),
                c,
                d: k.neg(&k.mul(&c, z)),
            };
            let mut roots: Vec<Fe> = others
                .iter()
                .map(|x| k.inv(&k.mul(&c, &k.sub(x, z))).expect("distinct points"))
                .collect();
            if b.has_infinity() {
                roots.push(k.zero());
            }
            (map, roots)
        }
    };
    let f = Poly::from_roots(k, &roots);
    debug_assert_eq!(f.degree(), Some(2 * genus + 1));
    Ok(HyperellipticModel {
        locus: b.clone(),
        f,
        map,
        genus,
    })
}

/// The g x g matrix with (i, j) entry c_{ip-j}, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartierMatrix {
    field: Field,
    pub entries: Matrix,
}

impl CartierMatrix {
    pub fn genus(&self) -> usize {
        self.entries.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.field, &self.entries)
    }

    pub fn det(&self) -> Fe {
        if self.entries.is_empty() {
            return self.field.one();
        }
        linalg::det(&self.field, &self.entries).expect("square")
    }

    /// Rank of A^(σ^(g-1)) ... A^(σ) A.
    pub fn semilinear_rank(&self) -> usize {
        let g = self.genus();
        if g == 0 {
            return 0;
        }
        let k = &self.field;
        let mut acc = self.entries.clone();
        for j in 1..g {
            acc = linalg::mul(k, &linalg::twist(k, &self.entries, j), &acc);
        }
        linalg::rank(k, &acc)
    }
}

fn read_entries(field: &Field, h: &Poly, g: usize, p: usize) -> Matrix {
    (1..=g)
        .map(|i| {
            (1..=g)
                .map(|j| h.coeff(i * p - j))
                .map(|c| if field.contains(&c) { c } else { field.zero() })
                .collect()
        })
        .collect()
}

pub fn cartier_matrix(c: &HyperellipticModel) -> CartierMatrix {
    let k = c.field();
    let h = c.f.half_power();
    CartierMatrix {
        field: k.clone(),
        entries: read_entries(k, &h, c.genus, k.characteristic() as usize),
    }
}

pub fn a_number(c: &HyperellipticModel) -> usize {
    c.genus - cartier_matrix(c).rank()
}

pub fn p_rank(c: &HyperellipticModel) -> usize {
    cartier_matrix(c).semilinear_rank()
}

pub fn is_ordinary(c: &HyperellipticModel) -> bool {
    !cartier_matrix(c).det().is_zero()
}

/// Genus, p-rank, a-number and label of one hyperelliptic curve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInvariants {
    pub genus: usize,
    pub p_rank: usize,
    pub a_number: usize,
    pub label: String,
}

pub fn invariants(c: &HyperellipticModel) -> Result<CurveInvariants> {
    let m = cartier_matrix(c);
    let g = c.genus;
    let f = m.semilinear_rank();
    let a = g - m.rank();
    Ok(CurveInvariants {
        genus: g,
        p_rank: f,
        a_number: a,
        label: group_scheme_label(g, f, a)?.to_string(),
    })
}

pub fn locus_invariants(b: &BranchLocus) -> Result<CurveInvariants> {
    invariants(&normalize_model(b)?)
}

/// Det_g with the last branch point as the variable t: the determinant
/// of the Cartier–Manin matrix of y^2 = (x - t) prod (x - λ_i), a
/// polynomial of degree at most g(p-1)/2 in t.
pub fn detg_marked(field: &Field, lambdas: &[Fe]) -> Result<Poly> {
    let mut sorted = lambdas.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Repeated(w[0].to_string()));
    }
    detg_polynomial(field, lambdas)
}

/// The same determinant without the distinctness check, for evaluating
/// Det_g on the diagonal.
pub fn detg_polynomial(field: &Field, lambdas: &[Fe]) -> Result<Poly> {
    let n = lambdas.len();
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidLocus(format!("need 2g >= 2 fixed points, got {n}")));
    }
    let g = n / 2;
    let p = field.characteristic() as usize;
    let base = Poly::from_roots(field, lambdas);
    // f = x P(x) - t P(x), stored by powers of x with coefficients in F_q[t]
    let f: Vec<Poly> = (0..=n + 1)
        .map(|r| {
            let shifted = if r > 0 { base.coeff(r - 1) } else { field.zero() };
            Poly::new(field, vec![shifted, field.neg(&base.coeff(r))])
        })
        .collect();
    let h = bivariate_pow(field, &f, (p - 1) / 2);
    let zero = Poly::zero(field);
    let m: Vec<Vec<Poly>> = (1..=g)
        .map(|i| (1..=g).map(|j| h.get(i * p - j).unwrap_or(&zero).clone()).collect())
        .collect();
    det_poly_matrix(&m, g * (p - 1) / 2)
}

fn bivariate_mul(field: &Field, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

fn bivariate_pow(field: &Field, f: &[Poly], mut e: usize) -> Vec<Poly> {
    let mut acc = vec![Poly::one(field)];
    let mut base = f.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = bivariate_mul(field, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = bivariate_mul(field, &base, &base);
        }
    }
    acc
}

/// The local-local part of a p-torsion group scheme, as far as it is
/// determined by its p-rank deficit and a-number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LocalPart {
    Trivial,
    M,
    M2,
    N,
    Q,
    Unknown { dim: usize, a: usize },
}

/// (Z/p + mu_p)^f plus a local-local part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PTorsionLabel {
    pub genus: usize,
    pub p_rank: usize,
    pub a_number: usize,
    pub local: LocalPart,
}

impl PTorsionLabel {
    pub fn is_unknown(&self) -> bool {
        matches!(self.local, LocalPart::Unknown { .. })
    }
}

impl fmt::Display for PTorsionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.p_rank {
            0 => {}
            1 => parts.push("Z/p+mu_p".to_string()),
            r => parts.push(format!("(Z/p+mu_p)^{r}")),
        }
        match self.local {
            LocalPart::Trivial => {}
            LocalPart::M => parts.push("M".into()),
            LocalPart::M2 => parts.push("M^2".into()),
            LocalPart::N => parts.push("N".into()),
            LocalPart::Q => parts.push("Q".into()),
            LocalPart::Unknown { dim, a } => parts.push(format!("Unknown(f={},a={a},local_dim={dim})", self.p_rank)),
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

pub fn group_scheme_label(g: usize, f: usize, a: usize) -> Result<PTorsionLabel> {
    if f > g || a > g - f || (f < g && a == 0) {
        return Err(Error::InconsistentInvariants { g, f, a });
    }
    let local = match (g - f, a) {
        (0, _) => LocalPart::Trivial,
        (1, 1) => LocalPart::M,
        (2, 2) => LocalPart::M2,
        (2, 1) => LocalPart::N,
        (3, 1) => LocalPart::Q,
        (dim, a) => LocalPart::Unknown { dim, a },
    };
    Ok(PTorsionLabel {
        genus: g,
        p_rank: f,
        a_number: a,
        local,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDescriptor {
    pub field: FieldDescriptor,
    pub branch_locus: Vec<String>,
    pub genus: usize,
}

impl CurveDescriptor {
    pub fn locus(&self) -> Result<BranchLocus> {
        let field = Field::from_descriptor(&self.field)?;
        let pts = self
            .branch_locus
            .iter()
            .map(|t| ProjPoint::parse(&field, t))
            .collect::<Result<Vec<_>>>()?;
        BranchLocus::new(&field, pts)
    }
}
