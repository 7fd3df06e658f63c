//! Point counts and L-polynomials as an independent check: L(X) is the
//! product of the L(C_S) and the p-rank is deg(L mod p).

use ptorsion::cartier::BranchLocus;
use ptorsion::cover::CoverSpec;
use ptorsion::zeta;
use ptorsion::Field;

fn main() -> ptorsion::Result<()> {
    let f = Field::prime(11)?;
    let curve = BranchLocus::parse(&f, "0,1,3,5,8,inf")?;
    let l = zeta::locus_l_polynomial(&curve)?;
    println!("L(T) = {:?}, p-rank {}", l.coeffs, zeta::p_rank_from_zeta(&l, 11));

    let f9 = Field::extension(3, 2)?;
    let spec = CoverSpec::parse(&f9, &["0,1,2,inf", "0,1,0:1,1:1"], None)?;
    let r = zeta::verify_decomposition(&spec, zeta::DEFAULT_GENUS_CAP)?;
    println!(
        "genus {}: N = {:?}, L match {}, p-rank zeta {:?} vs cartier {:?}, {:?}",
        r.genus, r.counts, r.l_product_match, r.p_rank_zeta, r.p_rank_sum, r.status
    );
    Ok(())
}
