//! Builds one parameter point per family, materializes each into a
//! probability tensor, and prints the exact entries. Run with
//! `cargo run --example materialize_models`.

use agreetensor::models::{params_to_json, ModelParams};
use agreetensor::scalar::{Rat, Scalar};
use agreetensor::tensor::write_tensor_text;
use agreetensor::Result;

fn r(num: i64, den: i64) -> Rat {
    Rat::from_ratio(num, den)
}

fn main() -> Result<()> {
    let points: Vec<ModelParams<Rat>> = vec![
        ModelParams::QI {
            a: vec![r(1, 4), r(3, 4)],
            b: vec![r(2, 5), r(3, 5)],
            c: vec![r(1, 2), r(1, 2)],
            gamma: vec![r(5, 1), r(1, 2)],
        },
        ModelParams::HomQI {
            a: vec![r(1, 3), r(1, 3), r(1, 3)],
            b: vec![r(1, 3), r(1, 3), r(1, 3)],
            c: vec![r(1, 3), r(1, 3), r(1, 3)],
            gamma: r(3, 1),
        },
        ModelParams::PairQI {
            a: vec![r(1, 10), r(1, 10), r(4, 5)],
            b: vec![r(1, 15), r(2, 15), r(4, 5)],
            c: vec![r(1, 6), r(1, 6), r(2, 3)],
            gamma12: r(2, 1),
            gamma13: r(3, 1),
            gamma23: r(3, 2),
        },
        ModelParams::Mix {
            alpha: r(1, 2),
            a: vec![r(1, 2), r(1, 2)],
            b: vec![r(1, 2), r(1, 2)],
            c: vec![r(1, 2), r(1, 2)],
            d: vec![r(1, 2), r(1, 2)],
        },
        ModelParams::HomMix {
            alpha: r(7, 10),
            a: vec![r(1, 5), r(2, 5), r(2, 5)],
            b: vec![r(1, 2), r(1, 4), r(1, 4)],
            c: vec![r(1, 3), r(1, 3), r(1, 3)],
        },
        ModelParams::PairMix {
            alpha0: r(1, 2),
            alpha12: r(1, 10),
            alpha13: r(1, 10),
            alpha23: r(1, 10),
            alpha123: r(1, 5),
            a: vec![r(1, 2), r(1, 2)],
            b: vec![r(1, 2), r(1, 2)],
            c: vec![r(1, 2), r(1, 2)],
        },
    ];

    for params in &points {
        let tensor = params.materialize()?;
        println!("== {} (n = {}) ==", params.family(), params.n());
        println!("parameters: {}", params_to_json(params));
        println!("tensor:\n{}", write_tensor_text(tensor.as_tensor()));
        let total: Rat = tensor
            .as_tensor()
            .values()
            .iter()
            .fold(Scalar::zero(), |acc: Rat, v| acc + v.clone());
        assert_eq!(total, Scalar::one());
    }

    // The same point renormalizes projectively: scaling every toric weight
    // leaves the tensor unchanged.
    let scaled = ModelParams::HomQI {
        a: vec![r(7, 3), r(7, 3), r(7, 3)],
        b: vec![r(1, 3), r(1, 3), r(1, 3)],
        c: vec![r(1, 3), r(1, 3), r(1, 3)],
        gamma: r(3, 1),
    }
    .materialize()?;
    let unit = ModelParams::HomQI {
        a: vec![r(1, 3), r(1, 3), r(1, 3)],
        b: vec![r(1, 3), r(1, 3), r(1, 3)],
        c: vec![r(1, 3), r(1, 3), r(1, 3)],
        gamma: r(3, 1),
    }
    .materialize()?;
    assert_eq!(scaled.as_tensor(), unit.as_tensor());
    println!("projective scaling of toric weights leaves the tensor unchanged: ok");
    Ok(())
}
