//! Searches for prescribed p-rank and the two open-question probes.

use ptorsion::search::{self, SearchBudget};
use ptorsion::Field;

fn main() -> ptorsion::Result<()> {
    let budget = SearchBudget::new(20_000, search::DEFAULT_SEED).with_tower_cap(4);
    for (g, f) in [(2, 2), (2, 1), (3, 1), (3, 0)] {
        let r = search::find_prank_f(5, g, f, &budget)?;
        println!("p = 5, g = {g}, f = {f}: success {} after {} draws", r.success, r.draws);
    }

    let f = Field::prime(5)?;
    let oc = search::probe_ordinary_completion(&f, &[f.zero(), f.one()], &budget)?;
    println!("ordinary completion of {{0, 1, ∞}}: {:?} after {} tries", oc.mu, oc.tried);

    for p in [7, 11, 13] {
        let r = search::probe_rexact(p, &budget)?;
        println!("p = {p}: {} triples, {} ordinary", r.tested, r.ordinary_hits);
    }
    Ok(())
}
