//! Checks the closed-form pairwise kappas of the two pairwise-agreement
//! models under uniform marginal vectors against the direct computation
//! (materialize, marginalize, chance-correct). Both sides are exact
//! rationals, so equality is literal. Run with
//! `cargo run --example closed_form_kappa`.

use agreetensor::agreement::{kappa_pmix_uniform, kappa_pqi_uniform, pairwise_kappas};
use agreetensor::models::{uniform_vec as uniform, ModelParams};
use agreetensor::scalar::{Rat, Scalar};
use agreetensor::Result;

fn r(num: i64, den: i64) -> Rat {
    Rat::from_ratio(num, den)
}

fn main() -> Result<()> {
    // Pairwise quasi-independence at n = 2 with all three weights 3: the
    // closed form gives exactly 2/3 on every pair.
    let spot = kappa_pqi_uniform(2, &r(3, 1), &r(3, 1), &r(3, 1))?;
    println!(
        "pQI n=2, weights (3,3,3): kappa = ({}, {}, {})",
        spot.kappa12.format_number(),
        spot.kappa13.format_number(),
        spot.kappa23.format_number()
    );
    assert_eq!(spot.kappa12, r(2, 3));

    for n in [2usize, 3, 5] {
        let (g12, g13, g23) = (r(2, 1), r(3, 1), r(3, 2));
        let closed = kappa_pqi_uniform(n, &g12, &g13, &g23)?;
        let direct = pairwise_kappas(
            &ModelParams::PairQI {
                a: uniform(n),
                b: uniform(n),
                c: uniform(n),
                gamma12: g12,
                gamma13: g13,
                gamma23: g23,
            }
            .materialize()?,
        )?;
        assert_eq!(closed.kappa12, direct.kappa12);
        assert_eq!(closed.kappa13, direct.kappa13);
        assert_eq!(closed.kappa23, direct.kappa23);
        println!(
            "pQI n={n}, weights (2,3,3/2): closed form equals direct computation, kappa12 = {}",
            closed.kappa12.format_number()
        );
    }

    // Pairwise mixture: kappa12 = alpha12 + alpha123 with no n anywhere.
    let (a0, a12, a13, a23, a123) = (r(2, 5), r(1, 10), r(1, 5), r(1, 10), r(1, 5));
    let closed = kappa_pmix_uniform(&a12, &a13, &a23, &a123);
    for n in [2usize, 3, 5] {
        let direct = pairwise_kappas(
            &ModelParams::PairMix {
                alpha0: a0.clone(),
                alpha12: a12.clone(),
                alpha13: a13.clone(),
                alpha23: a23.clone(),
                alpha123: a123.clone(),
                a: uniform(n),
                b: uniform(n),
                c: uniform(n),
            }
            .materialize()?,
        )?;
        assert_eq!(closed.kappa12, direct.kappa12);
        assert_eq!(closed.kappa13, direct.kappa13);
        assert_eq!(closed.kappa23, direct.kappa23);
    }
    println!(
        "pMix: kappa = (a12+a123, a13+a123, a23+a123) = ({}, {}, {}) for every n",
        closed.kappa12.format_number(),
        closed.kappa13.format_number(),
        closed.kappa23.format_number()
    );
    Ok(())
}
