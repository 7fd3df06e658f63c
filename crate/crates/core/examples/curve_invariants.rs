//! Cartier–Manin matrix, p-rank, a-number and p-torsion label of
//! hyperelliptic curves given by their branch points.

use ptorsion::cartier::{self, BranchLocus};
use ptorsion::Field;

fn show(field: &Field, branch: &str) -> ptorsion::Result<()> {
    let locus = BranchLocus::parse(field, branch)?;
    let model = cartier::normalize_model(&locus)?;
    let m = cartier::cartier_matrix(&model);
    let inv = cartier::invariants(&model)?;
    println!("p = {}, B = {{{branch}}}", field.characteristic());
    for row in &m.entries {
        println!("  [{}]", row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    }
    println!(
        "  genus {} p-rank {} a-number {} label {}",
        inv.genus, inv.p_rank, inv.a_number, inv.label
    );
    Ok(())
}

fn main() -> ptorsion::Result<()> {
    show(&Field::prime(5)?, "0,1,2,inf")?;
    show(&Field::prime(7)?, "0,1,6,inf")?;
    show(&Field::prime(5)?, "0,1,2,3,4,inf")?;
    show(&Field::prime(7)?, "0,1,2,3,4,5")?;
    Ok(())
}
