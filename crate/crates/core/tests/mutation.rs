//! Corrupting any single coefficient of the shared `f1` expansion must break
//! at least one step of the proof chain.

use pedlab_core::dissection::{ChainInputs, ProofChain, SeriesBasis};
use pedlab_core::Execution;

fn failing_steps(chain: &ProofChain, inputs: &ChainInputs, index: usize, delta: i64) -> usize {
    let corrupted = ChainInputs {
        basis: SeriesBasis::from_f1(inputs.basis.f1().perturbed(index, delta)),
        ..inputs.clone()
    };
    chain
        .run_with(&corrupted, Execution::Sequential)
        .iter()
        .filter(|o| !o.passed())
        .count()
}

#[test]
fn every_single_corruption_is_caught_at_small_order() {
    let chain = ProofChain {
        order: 40,
        oracle_limit: 10,
        families: vec![(1, 10)],
    };
    let inputs = chain.prepare().unwrap();
    assert!(chain
        .run_with(&inputs, Execution::Sequential)
        .iter()
        .all(|o| o.passed()));
    for index in 0..chain.basis_order() {
        for delta in [1, -1, 24] {
            assert!(
                failing_steps(&chain, &inputs, index, delta) > 0,
                "corruption {delta:+} at q^{index} went unnoticed"
            );
        }
    }
}

#[test]
fn sampled_corruptions_are_caught_at_default_order() {
    let chain = ProofChain::default();
    let inputs = chain.prepare().unwrap();
    for index in (0..chain.basis_order())
        .step_by(97)
        .chain([1, 2, 5, 399, 2004])
    {
        assert!(failing_steps(&chain, &inputs, index, 1) > 0, "q^{index}");
    }
}

#[test]
fn corruption_below_order_breaks_a_congruence_step() {
    // beyond the exact five-dissection check, a +1 in f1 below the chain
    // order also breaks one of the modular identities
    let chain = ProofChain {
        order: 60,
        oracle_limit: 5,
        families: vec![],
    };
    let inputs = chain.prepare().unwrap();
    for index in 1..60 {
        let corrupted = ChainInputs {
            basis: SeriesBasis::from_f1(inputs.basis.f1().perturbed(index, 1)),
            ..inputs.clone()
        };
        let failed: Vec<_> = chain
            .run_with(&corrupted, Execution::Sequential)
            .into_iter()
            .filter(|o| !o.passed())
            .map(|o| o.label)
            .collect();
        assert!(
            failed.iter().any(|l| !l.starts_with("five-dissection")),
            "q^{index}: only {failed:?}"
        );
    }
}
