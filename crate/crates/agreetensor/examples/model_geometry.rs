//! Geometric relations between the model families: the Hadamard
//! factorization of the toric models, membership in the linear varieties
//! they sit inside, the exact parameter transfer embedding the mixture
//! model into the diagonal-coefficient one, and the two witness points
//! separating them. Run with `cargo run --example model_geometry`.

use agreetensor::geometry::{
    boundary_counterexample, h_point, hadamard, is_perfect_agreement, mix_to_qi,
    variety_membership, BoundaryDirection, LinearVarietyId, PERFECT_AGREEMENT_REASON,
};
use agreetensor::models::uniform_vec;
use agreetensor::tensor::write_tensor_text;
use agreetensor::{ModelParams, ProbabilityTensor, Rat, Result, Scalar, Tensor};

fn r(num: i64, den: i64) -> Rat {
    Rat::from_ratio(num, den)
}

fn main() -> Result<()> {
    // The diagonal-coefficient model is the independence model rescaled
    // entrywise by a diagonal bump: materializing directly and taking the
    // normalized Hadamard product give the same tensor.
    let a = vec![r(1, 4), r(3, 4)];
    let b = vec![r(2, 5), r(3, 5)];
    let c = vec![r(1, 2), r(1, 2)];
    let gamma = vec![r(5, 1), r(5, 1)];
    let independence = Tensor::from_fn(2, |i, j, k| {
        a[i - 1].clone() * b[j - 1].clone() * c[k - 1].clone()
    });
    let bump = h_point(&gamma);
    let product = ProbabilityTensor::from_unnormalized(hadamard(&independence, &bump)?)?;
    let direct = ModelParams::QI {
        a: a.clone(),
        b,
        c,
        gamma: gamma.clone(),
    }
    .materialize()?;
    assert_eq!(product.as_tensor(), direct.as_tensor());
    println!("QI point = independence point (*) diagonal bump, exactly");

    // The bump tensors generate the linear varieties the toric models live
    // in: equal off-diagonal entries, with or without diagonal constraints.
    let h = h_point(&[r(2, 1), r(3, 1)]);
    assert!(variety_membership(&h, LinearVarietyId::H));
    assert!(!variety_membership(&h, LinearVarietyId::Hhat));
    let flat = h_point(&[r(5, 1), r(5, 1)]);
    assert!(variety_membership(&flat, LinearVarietyId::Hhat));
    println!("bump with gamma=(2,3) lies in H; equal gammas land in the all-equal subvariety");

    // Exact transfer: an interior mixture point is also a
    // diagonal-coefficient point, with explicit parameters.
    let mix = ModelParams::Mix {
        alpha: r(1, 2),
        a: uniform_vec(2),
        b: uniform_vec(2),
        c: uniform_vec(2),
        d: uniform_vec(2),
    };
    let qi = mix_to_qi(&mix)?;
    println!("\nmixture point transferred into the diagonal-coefficient family:");
    println!("{}", agreetensor::models::params_to_json(&qi));
    assert_eq!(
        mix.materialize()?.as_tensor(),
        qi.materialize()?.as_tensor()
    );
    println!("materializations agree entry for entry");

    // The transfer needs an interior point: alpha = 0 has no preimage.
    let boundary = ModelParams::Mix {
        alpha: Rat::zero(),
        a: uniform_vec(2),
        b: uniform_vec(2),
        c: uniform_vec(2),
        d: uniform_vec(2),
    };
    println!("alpha = 0 is rejected: {}", mix_to_qi(&boundary).unwrap_err());

    // The containment is strict in both directions; each witness point lies
    // in one family and provably outside the other.
    for direction in [BoundaryDirection::MixNotInQI, BoundaryDirection::QINotInMix] {
        let (point, report) = boundary_counterexample(direction, 3)?;
        println!("\nwitness for {direction}:");
        print!("{}", write_tensor_text(point.as_tensor()));
        print!("{}", report.to_text());
        assert!(report.verify(point.as_tensor()));
    }

    // The first witness is the perfect-agreement tensor, reachable from the
    // mixture family only as a limit.
    let (perfect, _) = boundary_counterexample(BoundaryDirection::MixNotInQI, 3)?;
    assert!(is_perfect_agreement(perfect.as_tensor()));
    println!("\nthe mixture witness is the perfect-agreement point ({PERFECT_AGREEMENT_REASON})");
    Ok(())
}
