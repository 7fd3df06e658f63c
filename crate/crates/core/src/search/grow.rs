//! Growing a hyperelliptic curve C of genus g' into a (Z/2)^2 cover X of
//! genus 2g'-1+s with C = X/<h>, so that Jac(X)[p] contains Jac(C)[p].

use super::*;

fn aggregate_local(r: &InvariantReport) -> Option<LocalPart> {
    cartier::group_scheme_label(r.genus, r.p_rank, r.a_number)
        .ok()
        .map(|l| l.local)
}

/// A field containing `field` with room for `points` branch points.
fn roomy(field: &Field, points: usize) -> Result<(Field, Embedding)> {
    let mut m = 1;
    while field.order().saturating_pow(m as u32) < 4 * points as u128 && field.degree() * m * 2 <= MAX_EXT_DEGREE {
        m *= 2;
    }
    poly::extend(field, m)
}

/// B_12 = B_0. Even s: B_1 = B_0 ∪ η, B_2 = η. Odd s: one point λ of B_0
/// moves to B_2, B_1 = B_0 - λ ∪ η, B_2 = λ ∪ η. s = 0 splits B_0 into
/// 2g' points and a pair.
fn grow<P>(name: &str, c: &BranchLocus, s: usize, budget: &SearchBudget, extra: P) -> Result<ConstructionResult>
where
    P: Fn(&InvariantReport) -> bool,
{
    let gp = match c.genus() {
        Some(g) if g >= 1 => g,
        _ => {
            return Err(Error::Precondition(format!(
                "need a curve of genus >= 1, got {} branch points",
                c.len()
            )))
        }
    };
    let inv = cartier::locus_invariants(c)?;
    let g = 2 * gp - 1 + s;
    let p = c.field().characteristic();
    let mut res = ConstructionResult::new(name, &[("p", p), ("g", g as u64), ("s", s as u64)], budget);
    res.trace.push(format!(
        "extend genus {gp} curve ({}) by s = {s} to genus {g}",
        inv.label
    ));
    let (big, emb) = roomy(c.field(), c.len() + s)?;
    let b0 = c.embed(&emb)?;
    let pts = b0.points().to_vec();
    let finite = b0.finite_points();
    let len = pts.len();
    let mut pairs: Vec<(usize, usize)> = (0..len).flat_map(|i| (i + 1..len).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| (len - 1 - j, len - 1 - i));
    let mut rng = budget.rng(name);
    let draws = if s == 0 { budget.max_draws.min(pairs.len()) } else { budget.max_draws };
    search_loop(
        res,
        draws,
        |draw| {
            let (b1, b2, note) = if s == 0 {
                let (i, j) = pairs[draw];
                let b2 = vec![pts[i], pts[j]];
                let b1: Vec<ProjPoint> = pts.iter().filter(|x| !b2.contains(x)).copied().collect();
                (b1, b2, format!("B_2 = {{{}, {}}}", pts[i], pts[j]))
            } else {
                let Some(eta) = draw_distinct(&big, &mut rng, s, &finite) else {
                    return Ok(None);
                };
                let eta: Vec<ProjPoint> = eta.into_iter().map(ProjPoint::Finite).collect();
                let note = format!(
                    "eta = [{}]",
                    eta.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                );
                if s % 2 == 1 {
                    let moved = pts[len - 1 - draw % len];
                    let mut b1: Vec<ProjPoint> = pts.iter().filter(|x| **x != moved).copied().collect();
                    b1.extend_from_slice(&eta);
                    let mut b2 = vec![moved];
                    b2.extend_from_slice(&eta);
                    (b1, b2, format!("{note}, moved {moved}"))
                } else {
                    let mut b1 = pts.clone();
                    b1.extend_from_slice(&eta);
                    (b1, eta, note)
                }
            };
            let loci = vec![BranchLocus::new(&big, b1)?, BranchLocus::new(&big, b2)?];
            Ok(Some((CoverSpec::new(&big, loci, None)?, vec![note])))
        },
        |_, r| {
            let keeps_c = r
                .row(&[1, 2])
                .is_some_and(|row| (row.genus, row.p_rank, row.a_number) == (inv.genus, inv.p_rank, inv.a_number));
            keeps_c && r.genus == g && (s > 2 || r.hyperelliptic) && extra(r)
        },
    )
}

/// The curve C as the quotient X/<h> of a genus 2g'-1+s cover X.
pub fn extend_with_group_scheme(c: &BranchLocus, s: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    if s == 0 {
        return Err(Error::Precondition("s must be at least 1".into()));
    }
    grow("extend", c, s, budget, |_| true)
}

/// For a genus-2 curve C branched at B_0: B_1 = B_0 and B_2 a 4-subset of
/// B_0 whose elliptic curve is ordinary, giving genus 3 with
/// Jac(X)[p] = Jac(C)[p] + (Z/p + mu_p).
pub fn extend_genus2_with_elliptic(c: &BranchLocus, budget: &SearchBudget) -> Result<ConstructionResult> {
    if c.genus() != Some(2) {
        return Err(Error::Precondition(format!("need a genus-2 curve, got {} branch points", c.len())));
    }
    let inv = cartier::locus_invariants(c)?;
    let p = c.field().characteristic();
    let mut res = ConstructionResult::new("extend-genus3", &[("p", p), ("g", 3)], budget);
    res.trace.push(format!("genus 2 curve ({}) plus an ordinary elliptic quotient", inv.label));
    let pts = c.points().to_vec();
    let mut subset = vec![0, 1, 2, 3];
    let mut subsets = vec![subset.clone()];
    while next_combination(&mut subset, pts.len()) {
        subsets.push(subset.clone());
    }
    let field = c.field().clone();
    search_loop(
        res,
        budget.max_draws.min(subsets.len()),
        |draw| {
            let b2: Vec<ProjPoint> = subsets[draw].iter().map(|&i| pts[i]).collect();
            let note = format!(
                "B_2 = {{{}}}",
                b2.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            );
            let loci = vec![c.clone(), BranchLocus::new(&field, b2)?];
            Ok(Some((CoverSpec::new(&field, loci, None)?, vec![note])))
        },
        |_, r| {
            let ordinary = r.row(&[2]).is_some_and(|row| row.genus == 1 && row.p_rank == 1);
            let keeps_c = r
                .row(&[1])
                .is_some_and(|row| (row.p_rank, row.a_number) == (inv.p_rank, inv.a_number));
            ordinary && keeps_c && r.genus == 3
        },
    )
}

fn wrap(name: &str, p: u64, g: usize, budget: &SearchBudget, prior: &ConstructionResult, mut r: ConstructionResult) -> ConstructionResult {
    let mut trace = prior.trace.clone();
    trace.append(&mut r.trace);
    r.trace = trace;
    r.draws += prior.draws;
    r.construction = name.to_string();
    r.params = [("p".to_string(), p), ("g".to_string(), g as u64)].into_iter().collect();
    r.budget = *budget;
    r
}

fn level_failure(name: &str, p: u64, g: usize, budget: &SearchBudget, level: usize, inner: &ConstructionResult) -> ConstructionResult {
    let mut r = ConstructionResult::new(name, &[("p", p), ("g", g as u64)], budget);
    r.draws = inner.draws;
    r.trace = inner.trace.clone();
    r.fail(format!(
        "level g = {level}: {}",
        inner.failure.clone().unwrap_or_else(|| "failed".into())
    ))
}

/// A hyperelliptic curve of genus g ≥ 2 whose p-torsion contains N, by
/// doubling from genus 2 and 3.
pub fn construct_with_n(p: u64, g: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    if g < 2 {
        return Err(Error::Precondition(format!("N needs g >= 2, got {g}")));
    }
    with_n(p, g, budget)
}

fn with_n(p: u64, g: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    let name = "with-n";
    match g {
        2 => {
            let r = find_genus2_with(p, 0, 1, budget)?;
            let empty = ConstructionResult::new(name, &[], budget);
            Ok(wrap(name, p, g, budget, &empty, r))
        }
        3 => {
            let mut spent = ConstructionResult::new(name, &[("p", p), ("g", 3)], budget);
            for attempt in 0..4 {
                let base = find_genus2_with(p, 0, 1, &budget.child(&format!("genus2-{attempt}")))?;
                spent.draws += base.draws;
                if !base.success {
                    return Ok(level_failure(name, p, g, budget, 2, &base));
                }
                spent.trace.extend(base.trace.iter().cloned());
                let c = base.hyperelliptic_locus()?;
                let r = extend_genus2_with_elliptic(&c, budget)?;
                if r.success {
                    return Ok(wrap(name, p, g, budget, &spent, r));
                }
                spent.draws += r.draws;
            }
            Ok(spent.fail("no ordinary elliptic quotient over four genus-2 N-curves"))
        }
        _ => {
            let gp = g / 2;
            let s = g + 1 - 2 * gp;
            let base = with_n(p, gp, &budget.child(&format!("level-{gp}")))?;
            if !base.success {
                return Ok(level_failure(name, p, g, budget, gp, &base));
            }
            let c = base.hyperelliptic_locus()?;
            let r = grow(name, &c, s, budget, |r| aggregate_local(r) == Some(LocalPart::N))?;
            Ok(wrap(name, p, g, budget, &base, r))
        }
    }
}

/// g = 2g' - 1 + s with g' ≥ 3 not a power of two; s ∈ {1, 2} when
/// possible, otherwise s = 0.
fn q_step(g: usize) -> (usize, usize) {
    if g % 2 == 0 {
        return (g / 2, 1);
    }
    let down = (g - 1) / 2;
    if down >= 3 && !down.is_power_of_two() {
        (down, 2)
    } else {
        ((g + 1) / 2, 0)
    }
}

/// A hyperelliptic curve of genus g ≥ 3, g not a power of two, whose
/// p-torsion contains Q, grown from a genus-3 curve with p-rank 0 and
/// a-number 1.
pub fn construct_with_q(p: u64, g: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    if g < 3 || g.is_power_of_two() {
        return Err(Error::Precondition(format!("Q needs g >= 3 not a power of two, got {g}")));
    }
    with_q(p, g, budget)
}

fn with_q(p: u64, g: usize, budget: &SearchBudget) -> Result<ConstructionResult> {
    let name = "with-q";
    if g == 3 {
        let r = find_curve_with(p, 3, 0, 1, budget)?;
        let empty = ConstructionResult::new(name, &[], budget);
        return Ok(wrap(name, p, g, budget, &empty, r));
    }
    let (gp, s) = q_step(g);
    let base = with_q(p, gp, &budget.child(&format!("level-{gp}")))?;
    if !base.success {
        return Ok(level_failure(name, p, g, budget, gp, &base));
    }
    let c = base.hyperelliptic_locus()?;
    let r = grow(name, &c, s, budget, |r| aggregate_local(r) == Some(LocalPart::Q))?;
    Ok(wrap(name, p, g, budget, &base, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_steps() {
        for g in [5, 6, 7, 9, 10, 11, 12, 13, 14, 15, 17, 18, 20] {
            let (gp, s) = q_step(g);
            assert_eq!(2 * gp - 1 + s, g);
            assert!(gp >= 3 && !gp.is_power_of_two() && s <= 2, "g = {g}");
        }
    }

    #[test]
    fn genus_formula() {
        let f = Field::extension(5, 2).unwrap();
        let c = BranchLocus::parse(&f, "0,1,2,3,4,inf").unwrap();
        for s in 1..=3 {
            let r = extend_with_group_scheme(&c, s, &SearchBudget::new(100, 4)).unwrap();
            assert!(r.success, "s = {s}: {:?}", r.failure);
            let rep = r.report.unwrap();
            assert_eq!(rep.genus, 3 + s);
            assert_eq!(rep.hyperelliptic, s <= 2);
            let row = rep.row(&[1, 2]).unwrap();
            assert_eq!(row.branch_locus.len(), 6);
        }
    }

    #[test]
    fn n_pipeline_small() {
        let b = SearchBudget::new(10_000, 5).with_tower_cap(4);
        for g in [2, 3, 4] {
            let r = construct_with_n(5, g, &b).unwrap();
            assert!(r.success, "g = {g}: {:?}", r.failure);
            let rep = r.report.unwrap();
            assert_eq!(rep.genus, g);
            assert!(rep.hyperelliptic);
            assert!(rep.labels.iter().any(|l| l.ends_with('N')), "{:?}", rep.labels);
        }
    }

    #[test]
    fn q_precondition() {
        let b = SearchBudget::default();
        assert!(matches!(construct_with_q(7, 4, &b), Err(Error::Precondition(_))));
        assert!(matches!(construct_with_q(7, 2, &b), Err(Error::Precondition(_))));
        assert!(matches!(extend_with_group_scheme(
            &BranchLocus::parse(&Field::prime(7).unwrap(), "0,1,2,inf").unwrap(), 0, &b),
            Err(Error::Precondition(_))));
    }
}
