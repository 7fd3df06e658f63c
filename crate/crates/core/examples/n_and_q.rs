//! Genus-2 curves with Jac[p] = N, the genus-3 extension by an ordinary
//! elliptic curve, and the doubling recursion for N and Q.

use ptorsion::search::{self, SearchBudget};

fn main() -> ptorsion::Result<()> {
    let budget = SearchBudget::new(10_000, search::DEFAULT_SEED).with_tower_cap(4);
    let r = search::find_genus2_with(5, 0, 1, &budget)?;
    let c = r.hyperelliptic_locus()?;
    println!("N-curve over F_5^{}: {{{}}}", c.field().degree(), c.tokens().join(","));

    let x = search::extend_genus2_with_elliptic(&c, &budget)?;
    let rep = x.report.as_ref().expect("extension succeeded");
    println!("genus 3: labels {:?}", rep.labels);

    let y = search::extend_with_group_scheme(&c, 2, &budget)?;
    let rep = y.report.as_ref().expect("extension succeeded");
    println!("s = 2: genus {}, labels {:?}", rep.genus, rep.labels);

    for g in 2..=6 {
        let r = search::construct_with_n(5, g, &budget)?;
        let rep = r.report.as_ref().expect("N pipeline");
        println!("with N, g = {g}: (f, a) = ({}, {}), {} draws", rep.p_rank, rep.a_number, r.draws);
    }
    let q = search::construct_with_q(7, 5, &budget.with_tower_cap(4))?;
    match &q.report {
        Some(rep) => println!("with Q, g = 5: labels {:?}", rep.labels),
        None => println!("with Q, g = 5: {:?}", q.failure),
    }
    Ok(())
}
