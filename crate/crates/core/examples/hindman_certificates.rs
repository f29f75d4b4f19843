//! Finite-sum sets, dilation blocks and monochromatic sub-IP certificates.

use std::collections::BTreeMap;

use kronecker::ramsey::{
    dilation_blocks_with, finite_sums, partial_sums_delta, refine_sub_ip, sub_ip_search,
    verify_blocks, DilationStrategy,
};
use kronecker::sets::NumberSet;

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gens = [1, 2, 4, 8, 16];
    let family = finite_sums(&gens)?;
    println!("FS{gens:?} has {} elements", family.sums().len());

    let ps = partial_sums_delta(&[3, 1, 4, 1, 5])?;
    println!("partial sums {:?}, differences inside FS: {}", ps.partial_sums, ps.contained);

    let xs: Vec<u64> = (1..=12).collect();
    for strategy in [DilationStrategy::PrefixPigeonhole, DilationStrategy::ResidueGrouping] {
        let bf = dilation_blocks_with(&xs, 3, 2, strategy)?;
        println!("{strategy:?}: blocks {:?}, y = {:?}", bf.blocks(), bf.quotients(3).unwrap());
    }

    // 2-coloring by binary digit sum parity
    let coloring: BTreeMap<u64, u32> = family.sums().iter().map(|&v| (v, v.count_ones() % 2)).collect();
    for depth in 1..=3 {
        match sub_ip_search(&family, &coloring, depth)? {
            Some(bf) => println!(
                "depth {depth}: blocks {:?} sums {:?} verified {}",
                bf.blocks(),
                bf.sums(),
                verify_blocks(&family, bf.blocks(), &coloring, depth)
            ),
            None => println!("depth {depth}: no monochromatic family"),
        }
    }

    let odds: Vec<u64> = (0..10).map(|i| 2 * i + 1).collect();
    let even = |n: u64| n.is_multiple_of(2);
    let mult5 = |n: u64| n.is_multiple_of(5);
    let sets: [&dyn NumberSet; 2] = [&even, &mult5];
    let nested = refine_sub_ip(&odds, &sets, 2)?.expect("nested family");
    println!("nested in evens then multiples of 5: {:?} -> {:?}", nested.blocks(), nested.sums());
    Ok(())
}
