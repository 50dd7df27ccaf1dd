//! Runs both default kappa sweeps and writes them as CSV files under the
//! system temp directory. The pairwise-quasi-independence sweep walks a
//! logarithmic cube of agreement weights; the pairwise-mixture sweep walks
//! the step-1/10 weight simplex. Run with `cargo run --example kappa_sweep`.

use agreetensor::agreement::{
    default_gamma_grid, sweep_pmix, sweep_pqi, sweep_to_csv, PMIX_SWEEP_COORDS, PQI_SWEEP_COORDS,
};
use agreetensor::Result;

fn main() -> Result<()> {
    let dir = std::env::temp_dir();

    let grid = default_gamma_grid();
    println!(
        "gamma grid: {} points from {} to {}",
        grid.len(),
        grid[0],
        grid[grid.len() - 1]
    );

    let pqi = sweep_pqi(2, None, &grid)?;
    let csv = sweep_to_csv(&PQI_SWEEP_COORDS, &pqi);
    let path = dir.join("sweep_pqi_n2.csv");
    std::fs::write(&path, &csv)?;
    println!("pQI sweep (n=2): {} records -> {}", pqi.len(), path.display());
    for line in csv.lines().take(4) {
        println!("  {line}");
    }

    // The same grid at a different n changes the kappa values but not the
    // record layout.
    let pqi5 = sweep_pqi(5, None, &grid)?;
    assert_eq!(pqi.len(), pqi5.len());
    let five = dir.join("sweep_pqi_n5.csv");
    std::fs::write(&five, sweep_to_csv(&PQI_SWEEP_COORDS, &pqi5))?;
    println!("pQI sweep (n=5): {} records -> {}", pqi5.len(), five.display());

    let pmix = sweep_pmix(2)?;
    let csv = sweep_to_csv(&PMIX_SWEEP_COORDS, &pmix);
    let path = dir.join("sweep_pmix.csv");
    std::fs::write(&path, &csv)?;
    println!("pMix sweep: {} records -> {}", pmix.len(), path.display());
    for line in csv.lines().take(4) {
        println!("  {line}");
    }

    // The mixture kappas depend only on the weights, so the sweep is
    // byte-identical at every n.
    let pmix5 = sweep_pmix(5)?;
    assert_eq!(sweep_to_csv(&PMIX_SWEEP_COORDS, &pmix), sweep_to_csv(&PMIX_SWEEP_COORDS, &pmix5));
    println!("pMix sweep at n=5 is byte-identical to n=2");

    // Every defined kappa in both sweeps stays inside [0, 1]: positive
    // agreement weights never produce negative chance-corrected agreement.
    let all = pqi.iter().chain(pqi5.iter()).chain(pmix.iter());
    for rec in all {
        if let Some(ks) = rec.kappas {
            assert!(ks.iter().all(|k| (0.0..=1.0).contains(k)));
        }
    }
    println!("all kappas lie in [0, 1]");
    Ok(())
}
