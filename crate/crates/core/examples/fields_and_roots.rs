//! Extension fields, factorization and roots over extensions.

use ptorsion::poly::{self, Poly};
use ptorsion::Field;

fn main() -> ptorsion::Result<()> {
    let f9 = Field::extension(3, 2)?;
    println!("F_9 modulus {:?}, generator {}", f9.modulus(), f9.generator());

    let fp = Field::prime(7)?;
    // x^4 + 1 splits into quadratics over F_7
    let f = Poly::from_i64s(&fp, &[1, 0, 0, 0, 1]);
    for (factor, e) in f.factor(poly::DEFAULT_SPLIT_SEED)? {
        println!("factor {:?} ^ {e}", factor.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    }
    let r = poly::roots(&f, 2, poly::DEFAULT_SPLIT_SEED)?;
    for root in &r.roots {
        println!("root {} in F_7^{}", root.value, root.degree);
    }
    println!("distinct roots in the closure: {}", r.distinct_in_closure);
    Ok(())
}
