//! Complexity, local factors, singular products and the archimedean factor
//! for a few classical systems of affine-linear forms.

use kronecker::linforms::{
    admissible_witness, beta_infinity_mc, complexity, local_factor, singular_product, size_norm,
    AffineSystem,
};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let systems = [
        ("twin primes", AffineSystem::from_rows(&[(&[1], 0), (&[1], 2)])?),
        ("prime triple", AffineSystem::from_rows(&[(&[1], 0), (&[1], 2), (&[1], 6)])?),
        ("3-term AP", AffineSystem::from_rows(&[(&[1, 0], 0), (&[1, 1], 0), (&[1, 2], 0)])?),
        ("4-term AP", AffineSystem::from_rows(&[(&[1, 0], 0), (&[1, 1], 0), (&[1, 2], 0), (&[1, 3], 0)])?),
        ("x, y, x+y", AffineSystem::from_rows(&[(&[1, 0], 0), (&[0, 1], 0), (&[1, 1], 0)])?),
    ];
    for (name, s) in &systems {
        let betas: Vec<String> = [2, 3, 5].iter().map(|&p| local_factor(s, p).map(|b| b.to_string())).collect::<Result<_, _>>()?;
        println!(
            "{name:>12}: complexity {}, size {}, beta_2,3,5 = {}, S(10^4) = {}",
            complexity(s)?,
            size_norm(s, 100)?,
            betas.join(", "),
            singular_product(s, 10_000)?.to_decimal(8)
        );
    }

    let bad = AffineSystem::from_rows(&[(&[1], 0), (&[1], 2), (&[1], 4)])?;
    println!("n, n+2, n+4 at p = 3: witness {:?}, beta {}", admissible_witness(&bad, 3)?, local_factor(&bad, 3)?);

    let ap3 = &systems[2].1;
    let v = beta_infinity_mc(ap3, 100, 200_000, 1)?;
    println!("3-AP volume in [-100, 100]^2: {:.0} +- {:.0} (exact 12500)", v.estimate, v.std_error);
    Ok(())
}
