//! Det_g(λ; t): the values t making a one-point extension non-ordinary,
//! and Igusa's count of supersingular Legendre values.

use ptorsion::cartier;
use ptorsion::search::{self, SearchBudget};
use ptorsion::Field;

fn main() -> ptorsion::Result<()> {
    let f = Field::prime(7)?;
    let d = cartier::detg_marked(&f, &[f.zero(), f.one()])?;
    println!("Det_1(0,1; t) over F_7: {:?}", d.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());

    let f25 = Field::extension(5, 2)?;
    let lambdas: Vec<_> = (1..=4).map(|i| f25.element(3 * i + 1)).collect();
    let r = search::nonordinary_extensions(&f25, &lambdas, &SearchBudget::default())?;
    println!("genus 2 over F_25: degree {}, {} distinct values", r.degree, r.distinct_count);
    for root in &r.roots {
        println!("  t = {} (degree {})", root.value, root.degree);
    }

    for p in [5, 7, 11, 13] {
        let ig = search::igusa_count(p)?;
        println!("p = {p}: {} supersingular λ, squarefree {}", ig.count, ig.squarefree);
    }
    Ok(())
}
