//! Analysis inputs are immutable values, so shared readers must agree
//! with the sequential result; independent synthesis calls must produce
//! byte-identical circuits regardless of scheduling.

use std::thread;

use kinv::chains::{decrease, inversion_power};
use kinv::synth::synthesize_over;
use kinv::{Basis, FunctionSystem, Limits};

fn shared_system() -> FunctionSystem {
    FunctionSystem::from_tables(
        3,
        2,
        vec![
            vec![0, 1, 2, 1, 2, 0, 2, 0, 1], // (x1 + x2) mod 3
            vec![2, 1, 0, 1, 1, 0, 0, 0, 0], // 2 - max(x1, x2)
        ],
    )
    .unwrap()
}

#[test]
fn concurrent_readers_agree_with_sequential_results() {
    let limits = Limits::default();
    let sys = shared_system();
    let basis = Basis::post(3).unwrap();
    let (d_seq, _) = decrease(&sys, &limits).unwrap();
    let u_seq = inversion_power(&sys.members()[0], &limits).unwrap().0;
    let circuit = synthesize_over(&sys, &basis, &limits).unwrap();

    thread::scope(|scope| {
        for _ in 0..8 {
            scope.spawn(|| {
                assert_eq!(decrease(&sys, &limits).unwrap().0, d_seq);
                assert_eq!(
                    inversion_power(&sys.members()[0], &limits).unwrap().0,
                    u_seq
                );
                assert_eq!(circuit.realized_system(&limits).unwrap(), sys);
            });
        }
    });
}

#[test]
fn synthesis_is_deterministic_across_threads() {
    let limits = Limits::default();
    let sys = shared_system();
    let basis = Basis::lukasiewicz(3).unwrap();
    let canonical = synthesize_over(&sys, &basis, &limits)
        .unwrap()
        .to_canonical_json();

    thread::scope(|scope| {
        for _ in 0..4 {
            scope.spawn(|| {
                let again = synthesize_over(&sys, &basis, &limits)
                    .unwrap()
                    .to_canonical_json();
                assert_eq!(again, canonical);
            });
        }
    });
}
