//! Runs the two combinatorial invariant generators at n = 2 and checks the
//! output against the fixed catalogs. Pass `--full` to also generate at
//! n = 3, which enumerates a few hundred thousand polynomials. Run with
//! `cargo run --example generate_invariants [-- --full]`.

use agreetensor::invariants::{
    catalog, first_nonvanishing_homogeneous, generate_mixn_invariants, generate_qin_invariants,
};
use agreetensor::models::{sample_params, SampleOptions};
use agreetensor::{Family, Result};

fn main() -> Result<()> {
    let full = std::env::args().any(|a| a == "--full");

    let qi2 = generate_qin_invariants(2)?;
    println!("single-coefficient generator at n=2: {} polynomials", qi2.len());
    let mix2 = generate_mixn_invariants(2)?;
    println!("mixture generator at n=2: {} polynomials", mix2.len());

    // Both generated lists are sorted in the canonical polynomial order, and
    // the canonical form fixes each polynomial's overall sign, so membership
    // up to sign is a plain binary search.
    for (label, generated, family) in [
        ("qI", &qi2, Family::HomQI),
        ("mix", &mix2, Family::HomMix),
    ] {
        for known in catalog(family, 2)? {
            assert!(
                generated.binary_search(&known).is_ok(),
                "{label} generator missed a catalog member: {known}"
            );
        }
        println!("{label} generator output contains all ten catalog members");
    }

    println!("\nfirst three generated qI polynomials:");
    for p in &qi2[..3] {
        println!("  {p}");
    }
    println!("last generated mix polynomial:");
    println!("  {}", mix2[mix2.len() - 1]);

    // Everything generated vanishes exactly on sampled model points.
    let opts = SampleOptions::default();
    for (label, generated, family) in [
        ("qI", &qi2, Family::HomQI),
        ("mix", &mix2, Family::HomMix),
    ] {
        for seed in 0..5u64 {
            let p = sample_params(family, 2, seed, &opts)?.materialize()?;
            assert!(first_nonvanishing_homogeneous(generated, p.as_tensor())?.is_none());
        }
        println!("{label} generator output vanishes on 5 sampled points");
    }

    if full {
        println!("\ngenerating at n=3 (this takes a little while)...");
        let qi3 = generate_qin_invariants(3)?;
        println!("single-coefficient generator at n=3: {} polynomials", qi3.len());
        let mix3 = generate_mixn_invariants(3)?;
        println!("mixture generator at n=3: {} polynomials", mix3.len());
    } else {
        println!("\n(skipping n=3; pass --full to generate it)");
    }
    Ok(())
}
