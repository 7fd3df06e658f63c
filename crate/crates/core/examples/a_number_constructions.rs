//! Covers whose p-torsion contains M^n: hyperelliptic curves with
//! a-number 2 and 3, and genus >= 7 curves with a-number at least 4.

use ptorsion::search::{self, ConstructionResult, SearchBudget};

fn show(r: &ConstructionResult) {
    match (&r.report, r.success) {
        (Some(rep), true) => println!(
            "{} {:?}: (g, f, a) = ({}, {}, {}), labels {:?}, hyperelliptic {}, {} draws",
            r.construction, r.params, rep.genus, rep.p_rank, rep.a_number, rep.labels, rep.hyperelliptic, r.draws
        ),
        _ => println!("{} {:?}: failed: {:?}", r.construction, r.params, r.failure),
    }
}

fn main() -> ptorsion::Result<()> {
    let budget = SearchBudget::default();
    show(&search::construct_hyperelliptic_a2(5, 4, &budget)?);
    show(&search::construct_m_to_n(7, 3, 2, &budget)?);
    show(&search::construct_hyperelliptic_a3(7, 5, &budget)?);
    show(&search::construct_m_to_n(11, 13, 4, &budget)?);
    show(&search::construct_a4(5, 7, &budget)?);
    let r = search::construct_hyperelliptic_a2(7, 3, &budget)?;
    for line in &r.trace {
        println!("  {line}");
    }
    Ok(())
}
