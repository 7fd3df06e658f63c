//! Constructions of curves with prescribed p-torsion, run as seeded searches
//! over finite fields. A failed search is a value (`success: false`), not an
//! error; errors are reserved for violated preconditions.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cartier::{self, BranchLocus, LocalPart, Mobius, ProjPoint};
use crate::cover::{self, CoverSpec, CoverSpecJson, InvariantReport};
use crate::ff::{Fe, Field, FieldDescriptor, MAX_EXT_DEGREE};
use crate::poly::{self, Embedding, Poly};
use crate::{Error, Result};

mod grow;

pub use grow::{construct_with_n, construct_with_q, extend_genus2_with_elliptic, extend_with_group_scheme};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_DRAWS: usize = 200;
pub const DEFAULT_TOWER_CAP: usize = 12;

/// Draw limit, seed and the largest extension degree k of F_{p^k} in which
/// random values are drawn or roots are looked for. Fields built afterwards
/// for bookkeeping (square roots in explicit models, composita) may exceed
/// the cap up to the arithmetic limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_draws: usize,
    pub seed: u64,
    pub tower_cap: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_draws: DEFAULT_DRAWS,
            seed: DEFAULT_SEED,
            tower_cap: DEFAULT_TOWER_CAP,
        }
    }
}

impl SearchBudget {
    pub fn new(max_draws: usize, seed: u64) -> SearchBudget {
        SearchBudget {
            max_draws,
            seed,
            ..SearchBudget::default()
        }
    }

    pub fn with_tower_cap(mut self, cap: usize) -> SearchBudget {
        self.tower_cap = cap;
        self
    }

    fn cap(&self) -> usize {
        self.tower_cap.clamp(1, MAX_EXT_DEGREE)
    }

    /// Independent seed for a named sub-search.
    pub fn child(&self, tag: &str) -> SearchBudget {
        SearchBudget {
            seed: mix_seed(self.seed, tag),
            ..*self
        }
    }

    fn rng(&self, tag: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(mix_seed(self.seed, tag))
    }
}

fn mix_seed(seed: u64, tag: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(tag.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("32-byte digest"))
}

/// Outcome of a construction, with enough provenance to replay it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionResult {
    pub construction: String,
    pub params: BTreeMap<String, u64>,
    pub success: bool,
    pub budget: SearchBudget,
    /// Draws consumed, sub-searches included.
    pub draws: usize,
    /// Index of the accepted draw in the final search loop.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accepted_draw: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDescriptor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<CoverSpecJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<InvariantReport>,
    pub trace: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl ConstructionResult {
    fn new(construction: &str, params: &[(&str, u64)], budget: &SearchBudget) -> ConstructionResult {
        ConstructionResult {
            construction: construction.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            success: false,
            budget: *budget,
            draws: 0,
            accepted_draw: None,
            field: None,
            spec: None,
            report: None,
            trace: Vec::new(),
            failure: None,
        }
    }

    fn fail(mut self, why: impl Into<String>) -> ConstructionResult {
        self.success = false;
        self.failure = Some(why.into());
        self
    }

    fn accept(mut self, spec: &CoverSpec, report: InvariantReport, draw: usize) -> ConstructionResult {
        self.success = true;
        self.accepted_draw = Some(draw);
        self.field = Some(spec.field().descriptor());
        self.spec = Some(spec.to_json());
        self.report = Some(report);
        self
    }

    /// The constructed cover, if any.
    pub fn cover(&self) -> Result<Option<CoverSpec>> {
        self.spec.as_ref().map(CoverSpec::from_json).transpose()
    }

    /// A hyperelliptic branch locus for the constructed curve: the locus
    /// itself for n = 1, the explicit fibre model for n = 2.
    pub fn hyperelliptic_locus(&self) -> Result<BranchLocus> {
        let spec = self
            .cover()?
            .ok_or_else(|| Error::Precondition(format!("{} produced no curve", self.construction)))?;
        match spec.n() {
            1 => Ok(spec.loci()[0].clone()),
            2 => Ok(cover::hyperelliptic_fibre_model(&spec)?.locus),
            n => Err(Error::Precondition(format!("no explicit hyperelliptic model for n = {n}"))),
        }
    }
}

/// Errors that mean "this draw was unlucky" rather than "the request is bad".
fn is_retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::Repeated(_) | Error::Degenerate(_) | Error::InvalidCover(_) | Error::DivisionByZero
    )
}

type Candidate = (CoverSpec, Vec<String>);

/// Runs `attempt` for each draw index until a strongly disjoint candidate
/// satisfies `accept`.
fn search_loop<A, P>(mut res: ConstructionResult, draws: usize, mut attempt: A, accept: P) -> Result<ConstructionResult>
where
    A: FnMut(usize) -> Result<Option<Candidate>>,
    P: Fn(&CoverSpec, &InvariantReport) -> bool,
{
    let mut last = String::from("no candidate produced");
    for draw in 0..draws {
        res.draws += 1;
        let (spec, trace) = match attempt(draw) {
            Ok(Some(c)) => c,
            Ok(None) => continue,
            Err(e) if is_retryable(&e) => {
                last = e.to_string();
                continue;
            }
            Err(e) => return Err(e),
        };
        if !cover::validate_strongly_disjoint(&spec).strongly_disjoint {
            last = "candidate not strongly disjoint".into();
            continue;
        }
        let report = cover::invariant_report(&spec)?;
        if accept(&spec, &report) {
            res.trace.extend(trace);
            return Ok(res.accept(&spec, report, draw));
        }
        last = format!("draw {draw} rejected: labels {:?}", report.labels);
    }
    let why = format!("budget of {draws} draws exhausted ({last})");
    Ok(res.fail(why))
}

/// Smallest k ≤ cap with p^k ≥ 4 * points.
fn draw_field(p: u64, points: usize, cap: usize) -> Result<Field> {
    let mut k = 1;
    while k < cap && (p as u128).pow(k as u32) < 4 * points as u128 {
        k += 1;
    }
    Field::extension(p, k)
}

/// `count` distinct uniform elements avoiding `avoid`.
fn draw_distinct<R: Rng>(field: &Field, rng: &mut R, count: usize, avoid: &[Fe]) -> Option<Vec<Fe>> {
    if field.order() < (count + avoid.len()) as u128 {
        return None;
    }
    let mut out: Vec<Fe> = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        if tries > 64 * (count + 1) {
            return None;
        }
        let x = field.random(rng);
        if !avoid.contains(&x) && !out.contains(&x) {
            out.push(x);
        }
    }
    Some(out)
}

/// Roots of a polynomial in the smallest extension F_{q^L} (Lq ≤ cap)
/// holding `need` of them outside `exclude`.
struct Lifted {
    emb: Embedding,
    roots: Vec<Fe>,
}

fn lift_roots(det: &Poly, exclude: &[Fe], need: usize, cap: usize, seed: u64) -> Result<Option<Lifted>> {
    let field = det.field();
    if det.is_zero() || det.degree() == Some(0) {
        return Ok(None);
    }
    let mut degrees = Vec::new();
    for (f, _) in det.factor(seed)? {
        let d = f.degree().expect("nonconstant factor");
        if d == 1 && exclude.contains(&field.neg(&f.monic().coeff(0))) {
            continue;
        }
        degrees.push(d);
    }
    let k = field.degree();
    for l in 1..=(cap / k).max(1) {
        if k * l > cap.max(k) {
            break;
        }
        let available: usize = degrees.iter().filter(|d| l % **d == 0).sum();
        if available < need {
            continue;
        }
        let (big, emb) = poly::extend(field, l)?;
        debug_assert_eq!(emb.target(), &big);
        let excl: Vec<Fe> = exclude.iter().map(|x| emb.embed(x)).collect();
        let roots: Vec<Fe> = det
            .embed(&emb)
            .roots_in_field(seed)?
            .into_iter()
            .map(|(r, _)| r)
            .filter(|r| !excl.contains(r))
            .take(need)
            .collect();
        if roots.len() == need {
            return Ok(Some(Lifted { emb, roots }));
        }
    }
    Ok(None)
}

fn fmt_points(xs: &[Fe]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn locus_with_infinity(field: &Field, xs: &[Fe]) -> Result<BranchLocus> {
    BranchLocus::from_finite(field, xs, true)
}

// ---------------------------------------------------------------------------
// Non-ordinary extensions and Igusa's count

/// One root of the marked determinant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootRecord {
    pub value: String,
    pub field: FieldDescriptor,
    pub degree: usize,
    pub multiplicity: usize,
}

/// Values t making the curve branched at {λ, t, ∞} non-ordinary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonordinaryRoots {
    pub degree: usize,
    /// Roots t ∉ {0, λ_i} over extensions of degree ≤ the tower cap.
    pub roots: Vec<RootRecord>,
    /// (degree, multiplicity) of factors beyond the tower cap.
    pub unresolved: Vec<(usize, usize)>,
    /// Distinct roots in the closure, excluding 0 and the λ_i.
    pub distinct_count: usize,
    /// deg_t Det_g = 0: the λ are not generic.
    pub degenerate: bool,
}

pub fn nonordinary_extensions(field: &Field, lambdas: &[Fe], budget: &SearchBudget) -> Result<NonordinaryRoots> {
    let det = cartier::detg_marked(field, lambdas)?;
    let degree = det.degree().unwrap_or(0);
    if degree == 0 {
        return Ok(NonordinaryRoots {
            degree,
            roots: Vec::new(),
            unresolved: Vec::new(),
            distinct_count: 0,
            degenerate: true,
        });
    }
    let mut special: Vec<Fe> = lambdas.to_vec();
    special.push(field.zero());
    special.sort();
    special.dedup();
    let sqfree = det.squarefree_part()?.degree().unwrap_or(0);
    let hits = special.iter().filter(|z| det.eval(z).is_zero()).count();
    let max_degree = (budget.cap() / field.degree()).max(1);
    let list = poly::roots(&det, max_degree, budget.seed)?;
    let roots = list
        .roots
        .iter()
        .filter(|r| r.degree > 1 || !special.contains(&r.value))
        .map(|r| RootRecord {
            value: r.value.to_string(),
            field: r.field.descriptor(),
            degree: r.degree,
            multiplicity: r.multiplicity,
        })
        .collect();
    Ok(NonordinaryRoots {
        degree,
        roots,
        unresolved: list.unresolved,
        distinct_count: sqfree - hits,
        degenerate: false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IgusaReport {
    pub p: u64,
    /// Distinct supersingular Legendre values in the closure.
    pub count: usize,
    /// gcd(D, D') is constant.
    pub squarefree: bool,
    pub degree: usize,
    /// Coefficients of D = Det_1(0, 1; t), low to high.
    pub polynomial: Vec<u64>,
    /// The roots, all of which lie in F_{p^2}.
    pub roots: Vec<String>,
}

pub fn igusa_count(p: u64) -> Result<IgusaReport> {
    if p < 5 {
        return Err(Error::Precondition(format!("igusa count needs p >= 5, got {p}")));
    }
    let fp = Field::prime(p)?;
    let det = cartier::detg_marked(&fp, &[fp.zero(), fp.one()])?;
    let degree = det.degree().unwrap_or(0);
    let g = det.gcd(&det.derivative());
    let count = det.squarefree_part()?.degree().unwrap_or(0);
    let (_, emb) = poly::extend(&fp, 2)?;
    let roots = det
        .embed(&emb)
        .roots_in_field(poly::DEFAULT_SPLIT_SEED)?
        .into_iter()
        .map(|(r, _)| r.to_string())
        .collect();
    Ok(IgusaReport {
        p,
        count,
        squarefree: g.degree() == Some(0),
        degree,
        polynomial: det.coeffs().iter().map(|c| c.coeffs()[0] as u64).collect(),
        roots,
    })
}

// ---------------------------------------------------------------------------
// M^n assemblies

struct MtoN {
    n: usize,
    g: usize,
    g1: usize,
    case2: bool,
}

impl MtoN {
    fn plan(p: u64, g: usize, n: usize) -> Result<MtoN> {
        if n < 2 || n > cover::MAX_N {
            return Err(Error::Precondition(format!("n must be in 2..={}, got {n}", cover::MAX_N)));
        }
        if p < 2 * n as u64 + 1 {
            return Err(Error::Precondition(format!("need p >= 2n+1 = {}, got {p}", 2 * n + 1)));
        }
        let step = 1usize << (n - 2);
        if g < (n - 1) * step + 1 || (g - 1) % step != 0 {
            return Err(Error::Precondition(format!(
                "need g = 1 + l*2^(n-2) with l >= n-1 for n = {n}, got g = {g}"
            )));
        }
        let l = (g - 1) / step;
        let case2 = l % 2 == n % 2;
        let g1 = if case2 { (l + 2 - n) / 2 } else { (l + 3 - n) / 2 };
        let points = 2 * g1 + n + if case2 { 2 } else { 1 };
        let genus = (step * points + 1) as i64 - (1i64 << n);
        if genus != g as i64 {
            return Err(Error::Internal(format!("genus bookkeeping gives {genus}, expected {g}")));
        }
        Ok(MtoN { n, g, g1, case2 })
    }

    fn prank_floor(&self) -> usize {
        if self.case2 {
            self.n * self.g1 - 1
        } else {
            self.n * (self.g1 - 1)
        }
    }

    fn attempt<R: Rng>(&self, p: u64, cap: usize, seed: u64, rng: &mut R) -> Result<Option<Candidate>> {
        let n = self.n;
        let g1 = self.g1;
        let base = draw_field(p, 2 * g1 + n + 2, cap)?;
        let Some(lambdas) = draw_distinct(&base, rng, 2 * g1, &[]) else {
            return Ok(None);
        };
        let mut trace = vec![format!(
            "case {}: g1 = {g1}, lambda base over F_{p}^{} = [{}]",
            if self.case2 { 2 } else { 1 },
            base.degree(),
            fmt_points(&lambdas)
        )];
        if !self.case2 {
            let det = cartier::detg_marked(&base, &lambdas)?;
            let Some(lift) = lift_roots(&det, &lambdas, n, cap, seed)? else {
                return Ok(None);
            };
            let big = lift.emb.target().clone();
            let lam: Vec<Fe> = lambdas.iter().map(|x| lift.emb.embed(x)).collect();
            trace.push(format!("eta over F_{p}^{} = [{}]", big.degree(), fmt_points(&lift.roots)));
            let loci = lift
                .roots
                .iter()
                .map(|eta| {
                    let mut pts = lam.clone();
                    pts.push(*eta);
                    locus_with_infinity(&big, &pts)
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Some((CoverSpec::new(&big, loci, None)?, trace)));
        }
        // lambda_{2g1+1} on D_{g1}, then eta_i on D_{g1+1} over the longer base
        let det1 = cartier::detg_marked(&base, &lambdas)?;
        let Some(first) = lift_roots(&det1, &lambdas, 1, cap, seed)? else {
            return Ok(None);
        };
        let f1 = first.emb.target().clone();
        let mut lam: Vec<Fe> = lambdas.iter().map(|x| first.emb.embed(x)).collect();
        lam.push(first.roots[0]);
        let Some(extra) = draw_distinct(&f1, rng, 1, &lam) else {
            return Ok(None);
        };
        lam.push(extra[0]);
        trace.push(format!(
            "lambda_{} = {} (root of Det_{g1}), lambda_{} = {} over F_{p}^{}",
            2 * g1 + 1,
            lam[2 * g1],
            2 * g1 + 2,
            lam[2 * g1 + 1],
            f1.degree()
        ));
        let det2 = cartier::detg_marked(&f1, &lam)?;
        let Some(second) = lift_roots(&det2, &lam, n - 1, cap, seed)? else {
            return Ok(None);
        };
        let big = second.emb.target().clone();
        let lam: Vec<Fe> = lam.iter().map(|x| second.emb.embed(x)).collect();
        trace.push(format!("eta over F_{p}^{} = [{}]", big.degree(), fmt_points(&second.roots)));
        let mut loci = second
            .roots
            .iter()
            .map(|eta| {
                let mut pts = lam.clone();
                pts.push(*eta);
                locus_with_infinity(&big, &pts)
            })
            .collect::<Result<Vec<_>>>()?;
        loci.push(locus_with_infinity(&big, &lam[..2 * g1 + 1])?);
        Ok(Some((CoverSpec::new(&big, loci, None)?, trace)))
    }

    /// Every designated quotient C_i contains M, with the genus and p-rank
    /// bookkeeping of the recipe.
    fn accepts(&self, report: &InvariantReport) -> bool {
        let singles_m = (1..=self.n).all(|i| {
            report
                .row(&[i])
                .and_then(|r| r.scheme)
                .is_some_and(|l| l.local == LocalPart::M)
        });
        singles_m && report.genus == self.g && report.p_rank >= self.prank_floor() && report.a_number >= self.n
    }
}

fn m_to_n(name: &str, p: u64, g: usize, n: usize, budget: &SearchBudget, extra: impl Fn(&InvariantReport) -> bool) -> Result<ConstructionResult> {
    let plan = MtoN::plan(p, g, n)?;
    let mut res = ConstructionResult::new(name, &[("p", p), ("g", g as u64), ("n", n as u64)], budget);
    res.trace.push(format!(
        "g = 1 + l*2^(n-2), case {}, g1 = {}, p-rank floor {}",
        if plan.case2 { 2 } else { 1 },
        plan.g1,
        plan.prank_floor()
    ));
    let mut rng = budget.rng(name);
    let cap = budget.cap();
    let seed = budget.seed;
    search_loop(
        res,
        budget.max_draws,
        |_| plan.attempt(p, cap, seed, &mut rng),
        |_, r| plan.accepts(r) && extra(r),
    )
}

/// A cover with n quotients each containing M, so that Jac(X)[p] ⊇ M^n.
pub fn construct_m_to_n(p: u64, g: usize, n: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    m_to_n("m-to-n", p, g, n, budget, |_| true)
}

/// A hyperelliptic curve of genus g with p-rank g-2 and a-number 2.
pub fn construct_hyperelliptic_a2(p: u64, g: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    if g < 2 || p < 5 {
        return Err(Error::Precondition(format!("a2 needs g >= 2 and p >= 5, got g = {g}, p = {p}")));
    }
    m_to_n("a2", p, g, 2, budget, move |r| {
        r.hyperelliptic && (r.genus, r.p_rank, r.a_number) == (g, g - 2, 2)
    })
}

/// A hyperelliptic curve of odd genus g ≥ 5 with a-number at least 3.
pub fn construct_hyperelliptic_a3(p: u64, g: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    if g < 5 || g % 2 == 0 || p < 7 {
        return Err(Error::Precondition(format!(
            "a3 needs odd g >= 5 and p >= 7, got g = {g}, p = {p}"
        )));
    }
    m_to_n("a3", p, g, 3, budget, |r| {
        let pairs_rational = [[1, 2], [1, 3], [2, 3]]
            .iter()
            .all(|s| r.row(s).is_some_and(|row| row.branch_locus.len() == 2));
        r.hyperelliptic && pairs_rational
    })
}

/// Glues two a-number-2 curves along one or two shared branch points to
/// get genus g ≥ 7 with a-number at least 4.
pub fn construct_a4(p: u64, g: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    if g < 7 || p < 5 {
        return Err(Error::Precondition(format!("a4 needs g >= 7 and p >= 5, got g = {g}, p = {p}")));
    }
    let mut res = ConstructionResult::new("a4", &[("p", p), ("g", g as u64)], budget);
    let odd = g % 2 == 1;
    let g1 = if odd { (g - 1) / 2 } else { g / 2 };
    let first_genus = if odd { g1 - 1 } else { g1 - 2 };
    res.trace.push(format!(
        "{} case: g1 = {g1}, a-number 2 curves of genus {first_genus} and 2",
        if odd { "odd" } else { "even" }
    ));
    let r1 = construct_hyperelliptic_a2(p, first_genus, &budget.child("phi1"))?;
    let r2 = construct_hyperelliptic_a2(p, 2, &budget.child("phi2"))?;
    res.draws += r1.draws + r2.draws;
    for (tag, r) in [("phi1", &r1), ("phi2", &r2)] {
        if !r.success {
            let why = format!("{tag}: {}", r.failure.clone().unwrap_or_default());
            return Ok(res.fail(why));
        }
    }
    let l1 = r1.hyperelliptic_locus()?;
    let l2 = r2.hyperelliptic_locus()?;
    let k = lcm(l1.field().degree(), l2.field().degree());
    let mut k_big = k;
    while (p as u128).pow(k_big as u32) < 16 * (l1.len() + l2.len()) as u128 && k_big * 2 <= MAX_EXT_DEGREE {
        k_big *= 2;
    }
    let big = Field::extension(p, k_big)?;
    let l1 = l1.embed(&Embedding::new(l1.field(), &big)?)?;
    let l2 = l2.embed(&Embedding::new(l2.field(), &big)?)?;
    // shared points: ∞ (even), or 0 and ∞ (odd)
    let pin = |l: &BranchLocus| -> Result<BranchLocus> {
        let pts = l.finite_points();
        let w = ProjPoint::Finite(pts[pts.len() - 1]);
        let z = if odd { pts[0] } else { big.zero() };
        let m = if odd {
            Mobius::zero_infinity(&big, &z, &w)?
        } else {
            let w = pts[pts.len() - 1];
            Mobius::new(&big, big.zero(), big.one(), big.one(), big.neg(&w))?
        };
        l.transform(&m)
    };
    let l1 = pin(&l1)?;
    let l2 = pin(&l2)?;
    res.trace.push(format!("phi1 locus [{}]", l1.tokens().join(",")));
    res.trace.push(format!("phi2 locus [{}] over F_{p}^{k_big}", l2.tokens().join(",")));
    let shared = if odd { 2 } else { 1 };
    let mut rng = budget.rng("a4");
    search_loop(
        res,
        budget.max_draws,
        |_| {
            let a = big.random(&mut rng);
            if a.is_zero() {
                return Ok(None);
            }
            let b = if odd { big.zero() } else { big.random(&mut rng) };
            let m = Mobius::new(&big, a, b, big.zero(), big.one())?;
            let moved = l2.transform(&m)?;
            let common = moved.points().iter().filter(|x| l1.contains(x)).count();
            if common != shared {
                return Ok(None);
            }
            let note = format!("phi2 moved by x -> {a}*x + {b}");
            Ok(Some((CoverSpec::new(&big, vec![l1.clone(), moved], None)?, vec![note])))
        },
        |_, r| r.genus == g && r.a_number >= 4,
    )
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

// ---------------------------------------------------------------------------
// Single-curve searches

/// Next combination of `k` indices out of `n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Searches genus-g loci {0, 1, λ_3..λ_2g, t, ∞} over F_{p^k}, k rising up
/// to the cap, for p-rank f (and a-number a if given). Below the ordinary
/// stratum, t runs over the rational roots of Det_g, so every candidate is
/// already non-ordinary.
fn find_curve(name: &str, p: u64, g: usize, f: usize, a: Option<usize>, budget: &SearchBudget) -> Result<ConstructionResult> {
    if g == 0 || f > g {
        return Err(Error::Precondition(format!("need 0 <= f <= g, g >= 1; got g = {g}, f = {f}")));
    }
    if let Some(a) = a {
        cartier::group_scheme_label(g, f, a)?;
    }
    let mut params = vec![("p", p), ("g", g as u64), ("f", f as u64)];
    if let Some(a) = a {
        params.push(("a", a as u64));
    }
    let mut res = ConstructionResult::new(name, &params, budget);
    let fp = Field::prime(p)?;
    let free = 2 * g - 2;
    let mut k = 1;
    let least = if f == g { 4 * (2 * g + 2) } else { 2 * g + 1 };
    while (p as u128).pow(k as u32) < least as u128 {
        k += 1;
    }
    let cap = budget.cap();
    if k > cap {
        return Ok(res.fail(format!("F_{p}^{k} needed for {} branch points exceeds the tower cap", 2 * g + 2)));
    }
    let mut rng = budget.rng(name);
    let mut remaining = budget.max_draws;
    let matches = |locus: &BranchLocus| -> Result<Option<cartier::CurveInvariants>> {
        let inv = cartier::locus_invariants(locus)?;
        Ok((inv.p_rank == f && a.is_none_or(|a| inv.a_number == a)).then_some(inv))
    };
    while k <= cap && remaining > 0 {
        let levels_left = cap - k + 1;
        let mut allot = remaining.div_ceil(levels_left);
        let field = Field::extension(p, k)?;
        let pool: Vec<Fe> = if field.order() <= 1 << 16 {
            field.elements().filter(|x| !x.is_zero() && *x != field.one()).collect()
        } else {
            Vec::new()
        };
        let exhaustive = !pool.is_empty() && binomial(pool.len(), free) <= allot as u128;
        let mut combo: Vec<usize> = (0..free).collect();
        let mut first = true;
        let emb = Embedding::new(&fp, &field)?;
        let base = [emb.embed(&fp.zero()), emb.embed(&fp.one())];
        res.trace.push(format!(
            "F_{p}^{k}: {} draws, {}",
            allot,
            if exhaustive { "exhaustive" } else { "random" }
        ));
        while allot > 0 {
            let lam: Vec<Fe> = if exhaustive {
                if !first && !next_combination(&mut combo, pool.len()) {
                    break;
                }
                first = false;
                combo.iter().map(|&i| pool[i]).collect()
            } else {
                match draw_distinct(&field, &mut rng, free, &base) {
                    Some(v) => v,
                    None => break,
                }
            };
            allot -= 1;
            remaining -= 1;
            res.draws += 1;
            let mut fixed = base.to_vec();
            fixed.extend_from_slice(&lam);
            let ts: Vec<Fe> = if f == g {
                draw_distinct(&field, &mut rng, 1, &fixed).unwrap_or_default()
            } else {
                let det = cartier::detg_marked(&field, &fixed)?;
                if det.degree().unwrap_or(0) == 0 {
                    continue;
                }
                det.roots_in_field(budget.seed)?
                    .into_iter()
                    .map(|(t, _)| t)
                    .filter(|t| !fixed.contains(t))
                    .collect()
            };
            for t in ts {
                let mut pts = fixed.clone();
                pts.push(t);
                let locus = locus_with_infinity(&field, &pts)?;
                if let Some(inv) = matches(&locus)? {
                    let spec = CoverSpec::new(&field, vec![locus], None)?;
                    let report = cover::invariant_report(&spec)?;
                    res.trace.push(format!("found label {} with t = {t}", inv.label));
                    let draw = res.draws - 1;
                    return Ok(res.accept(&spec, report, draw));
                }
            }
        }
        k += 1;
    }
    let why = format!("no genus-{g} curve with p-rank {f}{} within budget", a.map(|a| format!(", a-number {a}")).unwrap_or_default());
    Ok(res.fail(why))
}

/// A genus-2 curve with the given p-rank and a-number.
pub fn find_genus2_with(p: u64, f: usize, a: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    find_curve("genus2", p, 2, f, Some(a), budget)
}

/// A hyperelliptic curve of genus g with the given p-rank and a-number.
pub fn find_curve_with(p: u64, g: usize, f: usize, a: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    find_curve("curve", p, g, f, Some(a), budget)
}

/// A hyperelliptic curve of genus g with p-rank exactly f.
pub fn find_prank_f(p: u64, g: usize, f: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    find_curve("prank", p, g, f, None, budget)
}

// ---------------------------------------------------------------------------
// Experiments

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinaryCompletion {
    pub experiment: bool,
    /// First μ making {Λ, μ, ∞} ordinary.
    pub mu: Option<String>,
    pub field: Option<FieldDescriptor>,
    pub tried: usize,
}

/// Looks for μ ∉ Λ with the curve branched at {Λ, μ, ∞} ordinary, over
/// F_q, F_{q^2}, ... up to the tower cap. Finding none is not a proof.
pub fn probe_ordinary_completion(field: &Field, lambdas: &[Fe], budget: &SearchBudget) -> Result<OrdinaryCompletion> {
    if lambdas.is_empty() || lambdas.len() % 2 != 0 {
        return Err(Error::Precondition(format!("need 2r >= 2 values, got {}", lambdas.len())));
    }
    BranchLocus::from_finite(field, lambdas, true)?;
    let mut tried = 0;
    let mut m = 1;
    while field.degree() * m <= budget.cap() && tried < budget.max_draws {
        let (big, emb) = poly::extend(field, m)?;
        let lam: Vec<Fe> = lambdas.iter().map(|x| emb.embed(x)).collect();
        for mu in big.elements() {
            if tried >= budget.max_draws {
                break;
            }
            if lam.contains(&mu) {
                continue;
            }
            tried += 1;
            let mut pts = lam.clone();
            pts.push(mu);
            let model = cartier::normalize_model(&locus_with_infinity(&big, &pts)?)?;
            if cartier::is_ordinary(&model) {
                return Ok(OrdinaryCompletion {
                    experiment: true,
                    mu: Some(mu.to_string()),
                    field: Some(big.descriptor()),
                    tried,
                });
            }
        }
        m *= 2;
    }
    Ok(OrdinaryCompletion {
        experiment: true,
        mu: None,
        field: None,
        tried,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RexactRow {
    pub lambdas: Vec<String>,
    pub p_rank: usize,
    pub a_number: usize,
    pub ordinary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RexactReport {
    pub experiment: bool,
    pub p: u64,
    pub supersingular: Vec<String>,
    pub tested: usize,
    pub ordinary_hits: usize,
    pub rows: Vec<RexactRow>,
}

/// Genus-2 curves branched at {0, 1, ∞, λ1, λ2, λ3} for triples of
/// supersingular Legendre values.
pub fn probe_rexact(p: u64, budget: &SearchBudget) -> Result<RexactReport> {
    if p < 7 {
        return Err(Error::Precondition(format!("need p >= 7 for three supersingular values, got {p}")));
    }
    let fp = Field::prime(p)?;
    let (f2, emb) = poly::extend(&fp, 2)?;
    let det = cartier::detg_marked(&fp, &[fp.zero(), fp.one()])?;
    let ss: Vec<Fe> = det
        .embed(&emb)
        .roots_in_field(poly::DEFAULT_SPLIT_SEED)?
        .into_iter()
        .map(|(r, _)| r)
        .collect();
    if ss.len() < 3 {
        return Err(Error::Precondition(format!("only {} supersingular values", ss.len())));
    }
    let mut rows = Vec::new();
    let mut c = vec![0, 1, 2];
    loop {
        if rows.len() >= budget.max_draws {
            break;
        }
        let trip: Vec<Fe> = c.iter().map(|&i| ss[i]).collect();
        let mut pts = vec![f2.zero(), f2.one()];
        pts.extend_from_slice(&trip);
        let inv = cartier::locus_invariants(&locus_with_infinity(&f2, &pts)?)?;
        rows.push(RexactRow {
            lambdas: trip.iter().map(|x| x.to_string()).collect(),
            p_rank: inv.p_rank,
            a_number: inv.a_number,
            ordinary: inv.p_rank == 2,
        });
        if !next_combination(&mut c, ss.len()) {
            break;
        }
    }
    Ok(RexactReport {
        experiment: true,
        p,
        supersingular: ss.iter().map(|x| x.to_string()).collect(),
        tested: rows.len(),
        ordinary_hits: rows.iter().filter(|r| r.ordinary).count(),
        rows,
    })
}
