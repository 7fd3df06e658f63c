//! (Z/2)^n covers of the projective line given by n branch loci.
//!
//! The cover X is the normalized fibre product of the double covers
//! C_i -> P^1 branched at B_i. Its 2^n - 1 index-two quotients C_S are
//! double covers branched at B_S, the points lying in an odd number of
//! the B_i with i in S.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartier::{self, BranchLocus, LocalPart, PTorsionLabel, ProjPoint};
use crate::error::{Error, Result};
use crate::ff::{Fe, Field, FieldDescriptor};
use crate::poly::{self, Poly};

pub const MAX_N: usize = 6;

/// A nonempty subset of {1..n} as a bitmask; bit i-1 stands for i.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubsetIndex(pub u32);

impl SubsetIndex {
    pub fn new(mask: u32, n: usize) -> Result<SubsetIndex> {
        if mask == 0 || mask >= 1 << n {
            return Err(Error::Precondition(format!("subset mask {mask} outside 1..2^{n}")));
        }
        Ok(SubsetIndex(mask))
    }

    pub fn from_members(members: &[usize], n: usize) -> Result<SubsetIndex> {
        let mut mask = 0u32;
        for &i in members {
            if i == 0 || i > n {
                return Err(Error::Precondition(format!("index {i} outside 1..={n}")));
            }
            mask |= 1 << (i - 1);
        }
        SubsetIndex::new(mask, n)
    }

    pub fn all(n: usize) -> impl Iterator<Item = SubsetIndex> {
        (1..(1u32 << n)).map(SubsetIndex)
    }

    /// 1-based members.
    pub fn members(&self) -> Vec<usize> {
        (0..32).filter(|i| self.0 >> i & 1 == 1).map(|i| i + 1).collect()
    }

    /// Parity of the sum of h_i over i in S.
    pub fn pairs_oddly_with(&self, h: u32) -> bool {
        (self.0 & h).count_ones() % 2 == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    field: Field,
    loci: Vec<BranchLocus>,
    label: Option<String>,
}

impl CoverSpec {
    pub fn new(field: &Field, loci: Vec<BranchLocus>, label: Option<String>) -> Result<CoverSpec> {
        let n = loci.len();
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidCover(format!("n = {n} outside 1..={MAX_N}")));
        }
        for (i, b) in loci.iter().enumerate() {
            if b.field() != field {
                return Err(Error::FieldMismatch);
            }
            if b.is_empty() || b.len() % 2 != 0 {
                return Err(Error::InvalidCover(format!("B_{} has {} points; need a nonempty even set", i + 1, b.len())));
            }
        }
        Ok(CoverSpec {
            field: field.clone(),
            loci,
            label,
        })
    }

    /// One comma-separated locus per entry.
    pub fn parse(field: &Field, loci: &[&str], label: Option<String>) -> Result<CoverSpec> {
        let loci = loci
            .iter()
            .map(|s| BranchLocus::parse(field, s))
            .collect::<Result<Vec<_>>>()?;
        CoverSpec::new(field, loci, label)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.loci.len()
    }

    pub fn loci(&self) -> &[BranchLocus] {
        &self.loci
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> CoverSpec {
        self.label = Some(label.into());
        self
    }

    /// B, the union of all B_i, sorted.
    pub fn union(&self) -> Vec<ProjPoint> {
        let set: BTreeSet<ProjPoint> = self.loci.iter().flat_map(|b| b.points().iter().copied()).collect();
        set.into_iter().collect()
    }

    /// The bitmask {i : b in B_i}.
    pub fn membership(&self, b: &ProjPoint) -> u32 {
        self.loci
            .iter()
            .enumerate()
            .filter(|(_, l)| l.contains(b))
            .fold(0, |m, (i, _)| m | 1 << i)
    }

    pub fn to_json(&self) -> CoverSpecJson {
        CoverSpecJson {
            field: self.field.descriptor(),
            loci: self.loci.iter().map(BranchLocus::tokens).collect(),
            label: self.label.clone(),
        }
    }

    pub fn from_json(j: &CoverSpecJson) -> Result<CoverSpec> {
        let field = Field::from_descriptor(&j.field)?;
        let loci = j
            .loci
            .iter()
            .map(|pts| {
                let pts = pts
                    .iter()
                    .map(|t| ProjPoint::parse(&field, t))
                    .collect::<Result<Vec<_>>>()?;
                BranchLocus::new(&field, pts)
            })
            .collect::<Result<Vec<_>>>()?;
        CoverSpec::new(&field, loci, j.label.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpecJson {
    pub field: FieldDescriptor,
    pub loci: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// B_S: points lying in an odd number of B_i, i in S. May be empty.
pub fn quotient_branch_points(spec: &CoverSpec, s: SubsetIndex) -> Vec<ProjPoint> {
    spec.union()
        .into_iter()
        .filter(|b| (spec.membership(b) & s.0).count_ones() % 2 == 1)
        .collect()
}

pub fn quotient_branch_locus(spec: &CoverSpec, s: SubsetIndex) -> BranchLocus {
    BranchLocus::new(spec.field(), quotient_branch_points(spec, s)).expect("subset of distinct points")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessCheck {
    pub strongly_disjoint: bool,
    /// First pair (in mask order) with B_S = B_T, as 1-based member lists.
    pub collision: Option<(Vec<usize>, Vec<usize>)>,
}

pub fn validate_strongly_disjoint(spec: &CoverSpec) -> DisjointnessCheck {
    let sets: Vec<(SubsetIndex, Vec<ProjPoint>)> = SubsetIndex::all(spec.n())
        .map(|s| (s, quotient_branch_points(spec, s)))
        .collect();
    for (i, (s, bs)) in sets.iter().enumerate() {
        for (t, bt) in &sets[i + 1..] {
            if bs == bt {
                return DisjointnessCheck {
                    strongly_disjoint: false,
                    collision: Some((s.members(), t.members())),
                };
            }
        }
    }
    DisjointnessCheck {
        strongly_disjoint: true,
        collision: None,
    }
}

fn require_disjoint(spec: &CoverSpec) -> Result<()> {
    let c = validate_strongly_disjoint(spec);
    match c.collision {
        None => Ok(()),
        Some((s, t)) => Err(Error::InvalidCover(format!("not strongly disjoint: B_{s:?} = B_{t:?}"))),
    }
}

/// g_S = |B_S|/2 - 1 (B_S is nonempty and even for a strongly disjoint spec).
pub fn quotient_genus(spec: &CoverSpec, s: SubsetIndex) -> usize {
    (quotient_branch_points(spec, s).len() / 2).saturating_sub(1)
}

/// Genus of X by Riemann–Hurwitz, checked against the sum of quotient genera.
pub fn genus_total(spec: &CoverSpec) -> Result<usize> {
    require_disjoint(spec)?;
    let n = spec.n();
    let sum: usize = SubsetIndex::all(n).map(|s| quotient_genus(spec, s)).sum();
    if n == 1 {
        return Ok(sum);
    }
    let b = spec.union().len() as i64;
    let rh = (1i64 << (n - 2)) * b - (1i64 << n) + 1;
    if rh != sum as i64 {
        return Err(Error::Internal(format!("Riemann–Hurwitz gives {rh}, quotient genera sum to {sum}")));
    }
    Ok(sum)
}

/// Genus of X/<h> for a nonzero h in (Z/2)^n: the sum of g_S over S with
/// h in H_S, i.e. sum_{i in S} h_i even.
pub fn quotient_genus_by_element(spec: &CoverSpec, h: u32) -> Result<usize> {
    let n = spec.n();
    if h == 0 || h >= 1 << n {
        return Err(Error::Precondition(format!("element {h:#b} is not a nonzero vector of length {n}")));
    }
    Ok(SubsetIndex::all(n)
        .filter(|s| !s.pairs_oddly_with(h))
        .map(|s| quotient_genus(spec, s))
        .sum())
}

/// Some involution h with X/<h> of genus zero.
pub fn hyperelliptic_involution(spec: &CoverSpec) -> Option<u32> {
    (1..(1u32 << spec.n())).find(|&h| quotient_genus_by_element(spec, h) == Ok(0))
}

pub fn is_hyperelliptic(spec: &CoverSpec) -> bool {
    hyperelliptic_involution(spec).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientRow {
    pub subset: Vec<usize>,
    pub branch_locus: Vec<String>,
    pub genus: usize,
    pub p_rank: usize,
    pub a_number: usize,
    pub label: String,
    #[serde(skip)]
    pub scheme: Option<PTorsionLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub n: usize,
    pub quotients: Vec<QuotientRow>,
    pub genus: usize,
    pub p_rank: usize,
    pub a_number: usize,
    /// Labels of the positive-genus quotients, sorted.
    pub labels: Vec<String>,
    pub hyperelliptic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta_p_rank: Option<usize>,
}

impl InvariantReport {
    /// Number of quotients whose local-local part is `part`.
    pub fn count_local(&self, part: LocalPart) -> usize {
        self.quotients
            .iter()
            .filter(|r| r.scheme.is_some_and(|l| l.local == part))
            .count()
    }

    pub fn row(&self, members: &[usize]) -> Option<&QuotientRow> {
        self.quotients.iter().find(|r| r.subset == members)
    }
}

/// Per-quotient invariants through the Cartier–Manin matrix and their sums.
pub fn invariant_report(spec: &CoverSpec) -> Result<InvariantReport> {
    let genus = genus_total(spec)?;
    let rows = SubsetIndex::all(spec.n())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| {
            let b = quotient_branch_locus(spec, s);
            let g = b.genus().unwrap_or(0);
            let (f, a) = if g == 0 {
                (0, 0)
            } else {
                let m = cartier::normalize_model(&b)?;
                let cm = cartier::cartier_matrix(&m);
                (cm.semilinear_rank(), g - cm.rank())
            };
            let scheme = cartier::group_scheme_label(g, f, a)?;
            Ok(QuotientRow {
                subset: s.members(),
                branch_locus: b.tokens(),
                genus: g,
                p_rank: f,
                a_number: a,
                label: scheme.to_string(),
                scheme: Some(scheme),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut labels: Vec<String> = rows.iter().filter(|r| r.genus > 0).map(|r| r.label.clone()).collect();
    labels.sort();
    Ok(InvariantReport {
        n: spec.n(),
        genus,
        p_rank: rows.iter().map(|r| r.p_rank).sum(),
        a_number: rows.iter().map(|r| r.a_number).sum(),
        quotients: rows,
        labels,
        hyperelliptic: is_hyperelliptic(spec),
        zeta_p_rank: None,
    })
}

/// An explicit hyperelliptic model of X for n = 2 when some quotient C_T
/// has genus zero.
#[derive(Debug, Clone)]
pub struct HyperellipticFibre {
    /// The involution h with X/<h> = C_T.
    pub involution: u32,
    /// Branch locus of X -> C_T = P^1, possibly over a quadratic extension.
    pub locus: BranchLocus,
}

/// With B_T = {e1, e2}, put u = (x - e1)/(x - e2) (or x - e1 when e2 is
/// infinity), so that C_T is s^2 = u. X -> C_T is branched over the points
/// of C_T above b with inertia <h>, i.e. s = ±sqrt(u(b)).
pub fn hyperelliptic_fibre_model(spec: &CoverSpec) -> Result<HyperellipticFibre> {
    if spec.n() != 2 {
        return Err(Error::Precondition("explicit hyperelliptic model needs n = 2".into()));
    }
    require_disjoint(spec)?;
    let h = hyperelliptic_involution(spec)
        .ok_or_else(|| Error::Precondition("no quotient of genus zero".into()))?;
    let t = SubsetIndex::all(2).find(|s| !s.pairs_oddly_with(h)).expect("n = 2");
    let bt = quotient_branch_points(spec, t);
    let (e1, e2) = (bt[0], bt[1]);
    let k = spec.field();
    let u = |b: &ProjPoint| -> Fe {
        match (b, e1, e2) {
            (ProjPoint::Infinity, _, _) => k.one(),
            (ProjPoint::Finite(x), ProjPoint::Finite(a), ProjPoint::Infinity) => k.sub(x, &a),
            (ProjPoint::Finite(x), ProjPoint::Finite(a), ProjPoint::Finite(c)) => {
                k.div(&k.sub(x, &a), &k.sub(x, &c)).expect("b differs from e2")
            }
            _ => unreachable!("e1 < e2 in sorted order, so e1 is finite"),
        }
    };
    let us: Vec<Fe> = spec
        .union()
        .iter()
        .filter(|b| spec.membership(b) == h)
        .map(u)
        .collect();
    let need_ext = us.iter().any(|x| k.quadratic_character(x) != 1);
    let (work, emb) = if need_ext {
        let (big, emb) = poly::extend(k, 2)?;
        (big, Some(emb))
    } else {
        (k.clone(), None)
    };
    let mut pts = Vec::new();
    for x in &us {
        let xe = emb.as_ref().map_or(*x, |e| e.embed(x));
        let sq = Poly::new(&work, vec![work.neg(&xe), work.zero(), work.one()]);
        for (r, _) in sq.roots_in_field(poly::DEFAULT_SPLIT_SEED)? {
            pts.push(ProjPoint::Finite(r));
        }
    }
    Ok(HyperellipticFibre {
        involution: h,
        locus: BranchLocus::new(&work, pts)?,
    })
}
