//! A (Z/2)^3 cover, its quotient curves and aggregate invariants.

use ptorsion::cover::{self, CoverSpec};
use ptorsion::Field;

fn main() -> ptorsion::Result<()> {
    let f = Field::prime(13)?;
    let spec = CoverSpec::parse(&f, &["0,1,2,inf", "0,1,3,4", "1,2,4,7"], None)?;
    let check = cover::validate_strongly_disjoint(&spec);
    println!("strongly disjoint: {}", check.strongly_disjoint);
    let report = cover::invariant_report(&spec)?;
    for row in &report.quotients {
        println!(
            "S = {:?}: B_S = {{{}}}, genus {}, f = {}, a = {}, {}",
            row.subset,
            row.branch_locus.join(","),
            row.genus,
            row.p_rank,
            row.a_number,
            row.label
        );
    }
    println!(
        "X: genus {}, p-rank {}, a-number {}, hyperelliptic {}",
        report.genus, report.p_rank, report.a_number, report.hyperelliptic
    );
    Ok(())
}
