//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its runtime (run with `--nocapture` to see them).
//!
//! Every expected number here is either a definition read off a table,
//! a closed-form worst-case value, or a quantity the brute-force oracle
//! recomputes independently inside the test.

use std::time::{Duration, Instant};

use kinv::chains::{decrease, inversion_power};
use kinv::circuit::{check_weight_bound, Circuit, CircuitBuilder, NodeRef};
use kinv::oracle::{
    decrease_bruteforce, inversion_power_bruteforce, scan_single_functions, scan_systems,
    SplitMix64,
};
use kinv::synth::{
    bounds, ceil_log, clamp_system, compute_partition, shannon_value, synthesize, t_value,
    BaseKind, LevelPartition,
};
use kinv::{Basis, FunctionSystem, KFunction, KValue, Limits, NamedFunction};

const LIMITS: Limits = Limits { max_points: 4096 };

fn finish(criterion: u32, started: Instant, budget: Duration, summary: &str) {
    let elapsed = started.elapsed();
    assert!(
        elapsed < budget,
        "criterion {criterion} took {elapsed:?}, budget {budget:?}"
    );
    println!("acceptance criterion {criterion}: PASS ({summary}; {elapsed:?})");
}

fn negation_pair() -> FunctionSystem {
    // {¬x, ¬y} at k = 2
    FunctionSystem::from_tables(2, 2, vec![vec![1, 1, 0, 0], vec![1, 0, 1, 0]]).unwrap()
}

/// Every function of P_k(n), in table order.
fn all_functions(k: u32, n: u32) -> Vec<KFunction> {
    let len = (k as usize).pow(n);
    let space = (k as u64).pow(len as u32);
    let mut table = vec![0 as KValue; len];
    let mut out = Vec::with_capacity(space as usize);
    for _ in 0..space {
        out.push(KFunction::new(k, n, table.clone()).unwrap());
        for j in (0..len).rev() {
            if table[j] + 1 < k as KValue {
                table[j] += 1;
                break;
            }
            table[j] = 0;
        }
    }
    out
}

#[test]
fn criterion_1_negation_pair_exact_complexity() {
    let started = Instant::now();
    let sys = negation_pair();
    let (d, witness) = decrease(&sys, &LIMITS).unwrap();
    assert_eq!(d, 2);
    assert!(witness.verify_decrease(&sys).unwrap());
    assert_eq!(decrease_bruteforce(&sys).unwrap(), 2);

    let basis = Basis::post(2).unwrap();
    let b = bounds(&sys, &basis, &LIMITS).unwrap();
    assert_eq!((b.lower, b.upper, b.exact), (2, 2, Some(2)));

    // achievable: a synthesized circuit realizes the system with 2 ω-gates
    let circuit = kinv::synth::synthesize_over(&sys, &basis, &LIMITS).unwrap();
    assert_eq!(circuit.inversion_weight(), 2);
    assert_eq!(circuit.realized_system(&LIMITS).unwrap(), sys);

    finish(
        1,
        started,
        Duration::from_secs(1),
        "d = 2, exact complexity 2 over B_P",
    );
}

#[test]
fn criterion_2_classical_boolean_worst_cases() {
    let started = Instant::now();
    for n in 1..=3u32 {
        let report = scan_single_functions(2, n).unwrap();
        let t = t_value(2, n as u64).unwrap();
        let expected_max = n.div_ceil(2); // ⌈n/2⌉
        assert_eq!(t - 1, expected_max as u64);
        assert_eq!(report.max_decrease, expected_max);
        assert_eq!(
            shannon_value(2, n as u64, None, BaseKind::Post).unwrap(),
            ceil_log(2, t) as u64
        );
    }
    finish(
        2,
        started,
        Duration::from_secs(5),
        "Boolean n ≤ 3 worst cases match ⌈n/2⌉",
    );
}

#[test]
fn criterion_3_single_function_scans() {
    let started = Instant::now();
    let r = scan_single_functions(3, 1).unwrap();
    assert_eq!(r.scanned, 27);
    assert_eq!(r.max_decrease as u64, t_value(3, 1).unwrap() - 1); // = 2
    assert_eq!(r.max_decrease, 2);

    let r = scan_single_functions(3, 2).unwrap();
    assert_eq!(r.scanned, 19683);
    assert_eq!(r.max_decrease as u64, t_value(3, 2).unwrap() - 1); // = 3
    assert_eq!(r.max_decrease, 3);
    assert_eq!(r.histogram.values().sum::<u64>(), 19683);
    // the extremal witness re-verifies through the DP
    assert_eq!(decrease(&r.extremal, &LIMITS).unwrap().0, 3);

    finish(
        3,
        started,
        Duration::from_secs(60),
        "P_3(1) and P_3(2) scans hit T(k,n)-1",
    );
}

#[test]
fn criterion_4_system_scans() {
    let started = Instant::now();
    let r = scan_systems(3, 1, 2).unwrap();
    assert_eq!(r.scanned, 729);
    assert_eq!(r.max_decrease, 2); // (k-1)·n

    let r = scan_systems(2, 2, 2).unwrap();
    assert_eq!(r.scanned, 256);
    assert_eq!(r.max_decrease, 2); // (k-1)·n, witnessed by the {¬x, ¬y} pair
    assert_eq!(decrease(&r.extremal, &LIMITS).unwrap().0, 2);

    finish(
        4,
        started,
        Duration::from_secs(30),
        "system scans reach (k-1)·n",
    );
}

/// The synthesis round-trip instances: every unary k=3 function and
/// every binary k=2 function, over both standard bases.
fn round_trip_instances() -> Vec<(FunctionSystem, Basis, u64)> {
    let mut out = Vec::new();
    for f in all_functions(3, 1) {
        let sys = FunctionSystem::single(f).unwrap();
        out.push((sys.clone(), Basis::post(3).unwrap(), 2));
        out.push((sys, Basis::lukasiewicz(3).unwrap(), 3));
    }
    for f in all_functions(2, 2) {
        let sys = FunctionSystem::single(f).unwrap();
        out.push((sys.clone(), Basis::post(2).unwrap(), 2));
        out.push((sys, Basis::lukasiewicz(2).unwrap(), 2));
    }
    out
}

#[test]
fn criterion_5_synthesis_round_trip_optimality() {
    let started = Instant::now();
    let mut count = 0;
    for (sys, basis, u_b) in round_trip_instances() {
        let omega = &basis.omegas()[0];
        let circuit = synthesize(&sys, omega, &LIMITS).unwrap();
        assert_eq!(
            circuit.realized_system(&LIMITS).unwrap(),
            sys,
            "realized table differs for {:?} over {}",
            sys.members()[0].table(),
            omega.name()
        );
        let (d, _) = decrease(&sys, &LIMITS).unwrap();
        let expected = ceil_log(u_b, d as u64 + 1) as usize;
        assert_eq!(
            circuit.inversion_weight(),
            expected,
            "ω-count differs for {:?} over {}",
            sys.members()[0].table(),
            omega.name()
        );
        assert!(circuit.validate(&basis).is_empty());
        assert!(check_weight_bound(&circuit, &basis, &LIMITS).unwrap());
        count += 1;
    }
    finish(
        5,
        started,
        Duration::from_secs(60),
        &format!("{count} synthesize/verify round trips at exact optimum"),
    );
}

#[test]
fn criterion_6_oracle_equivalence() {
    let started = Instant::now();

    // exhaustive: all unary functions for k ∈ {2,3,4} and all binary k=2
    let mut checked = 0u64;
    for (k, n) in [(2u32, 1u32), (3, 1), (4, 1), (2, 2)] {
        for f in all_functions(k, n) {
            let sys = FunctionSystem::single(f.clone()).unwrap();
            assert_eq!(
                decrease(&sys, &LIMITS).unwrap().0,
                decrease_bruteforce(&sys).unwrap()
            );
            assert_eq!(
                inversion_power(&f, &LIMITS).unwrap().0,
                inversion_power_bruteforce(&f).unwrap()
            );
            checked += 1;
        }
    }

    // 1000 seeded random instances with k^n ≤ 12
    let shapes: &[(u32, u32)] = &[
        (2, 1),
        (2, 2),
        (2, 3),
        (3, 1),
        (3, 2),
        (4, 1),
        (5, 1),
        (6, 1),
        (7, 1),
        (8, 1),
        (9, 1),
        (10, 1),
        (11, 1),
        (12, 1),
    ];
    let mut rng = SplitMix64::new(0);
    for _ in 0..1000 {
        let (k, n) = shapes[rng.below(shapes.len() as u64) as usize];
        let len = (k as usize).pow(n);
        let m = 1 + rng.below(3) as usize;
        let tables: Vec<Vec<KValue>> = (0..m)
            .map(|_| (0..len).map(|_| rng.below(k as u64) as KValue).collect())
            .collect();
        let sys = FunctionSystem::from_tables(k, n, tables).unwrap();
        assert_eq!(
            decrease(&sys, &LIMITS).unwrap().0,
            decrease_bruteforce(&sys).unwrap()
        );
        let f = &sys.members()[0];
        assert_eq!(
            inversion_power(f, &LIMITS).unwrap().0,
            inversion_power_bruteforce(f).unwrap()
        );
        checked += 1;
    }

    finish(
        6,
        started,
        Duration::from_secs(120),
        &format!("DP equals brute force on {checked} instances"),
    );
}

/// A random monotone table: random values pushed upward along covering
/// predecessors, which preserves order by construction.
fn random_monotone_table(rng: &mut SplitMix64, k: u32, n: u32) -> Vec<KValue> {
    let len = (k as usize).pow(n);
    let mut table: Vec<KValue> = (0..len).map(|_| rng.below(k as u64) as KValue).collect();
    let mut stride = vec![1usize; n as usize];
    for j in (0..(n as usize).saturating_sub(1)).rev() {
        stride[j] = stride[j + 1] * k as usize;
    }
    for idx in 0..len {
        for j in 0..n as usize {
            let digit = (idx / stride[j]) % k as usize;
            if digit > 0 {
                table[idx] = table[idx].max(table[idx - stride[j]]);
            }
        }
    }
    table
}

fn random_nonmonotone(rng: &mut SplitMix64, k: u32, q: u32) -> KFunction {
    let len = (k as usize).pow(q);
    loop {
        let table: Vec<KValue> = (0..len).map(|_| rng.below(k as u64) as KValue).collect();
        let f = KFunction::new(k, q, table).unwrap();
        if !f.is_monotone() {
            return f;
        }
    }
}

fn random_circuit(rng: &mut SplitMix64) -> (Circuit, Basis) {
    let k = 2 + rng.below(2) as u32; // 2 or 3
    let n = 1 + rng.below(2) as u32; // 1 or 2
    let q = 1 + rng.below(2) as u32;
    let omega = NamedFunction::new("w", random_nonmonotone(rng, k, q)).unwrap();
    let basis = Basis::new(k, vec![omega.clone()]).unwrap();

    let mut b = CircuitBuilder::new(k).unwrap();
    let mut pool: Vec<NodeRef> = (1..=n)
        .map(|i| b.add_input(format!("x{i}")).unwrap())
        .collect();
    let gates = 1 + rng.below(8) as usize;
    for _ in 0..gates {
        let pick =
            |rng: &mut SplitMix64, pool: &[NodeRef]| pool[rng.below(pool.len() as u64) as usize];
        let r = if rng.below(3) == 0 {
            let args: Vec<NodeRef> = (0..q).map(|_| pick(rng, &pool)).collect();
            b.add_omega(&omega, args).unwrap()
        } else {
            let arity = rng.below(3) as u32; // 0, 1, or 2
            let args: Vec<NodeRef> = (0..arity).map(|_| pick(rng, &pool)).collect();
            let table = random_monotone_table(rng, k, arity);
            b.add_monotone(KFunction::new(k, arity, table).unwrap(), args)
                .unwrap()
        };
        pool.push(r);
    }
    let outputs: Vec<NodeRef> = (0..=rng.below(2))
        .map(|_| pool[rng.below(pool.len() as u64) as usize])
        .collect();
    (b.finish(outputs).unwrap(), basis)
}

#[test]
fn criterion_7_weight_bound_property_suite() {
    let started = Instant::now();
    let mut rng = SplitMix64::new(7);
    for i in 0..500 {
        let (circuit, basis) = random_circuit(&mut rng);
        assert!(
            check_weight_bound(&circuit, &basis, &LIMITS).unwrap(),
            "random circuit {i} violates the weight bound"
        );
    }
    finish(
        7,
        started,
        Duration::from_secs(60),
        "500 random circuits satisfy the bound",
    );
}

#[test]
fn criterion_8_named_negation_profiles() {
    let started = Instant::now();
    for k in 2..=6u32 {
        let post = KFunction::post_negation(k).unwrap();
        let luk = KFunction::lukasiewicz_negation(k).unwrap();
        assert_eq!(
            decrease(&FunctionSystem::single(post.clone()).unwrap(), &LIMITS)
                .unwrap()
                .0,
            1
        );
        assert_eq!(inversion_power(&post, &LIMITS).unwrap().0, 2);
        assert_eq!(
            decrease(&FunctionSystem::single(luk.clone()).unwrap(), &LIMITS)
                .unwrap()
                .0,
            k - 1
        );
        assert_eq!(inversion_power(&luk, &LIMITS).unwrap().0, k);
    }
    finish(
        8,
        started,
        Duration::from_secs(5),
        "post and Łukasiewicz profiles for k ≤ 6",
    );
}

/// Mirrors the synthesis recursion, collecting the partition built at
/// every level together with the system it was built for.
fn collect_partitions(
    sys: &FunctionSystem,
    omega: &NamedFunction,
    s: u32,
    out: &mut Vec<(FunctionSystem, LevelPartition)>,
) {
    let (d, _) = decrease(sys, &LIMITS).unwrap();
    if d == 0 {
        return;
    }
    let r = ceil_log(s as u64, d as u64 + 1);
    let partition = compute_partition(sys, s, r, &LIMITS)
        .unwrap()
        .bind_omega(omega, &LIMITS)
        .unwrap();
    for i in 0..partition.s() {
        let clamped = clamp_system(sys, &partition, i, &LIMITS).unwrap();
        collect_partitions(&clamped, omega, s, out);
    }
    out.push((sys.clone(), partition));
}

#[test]
fn criterion_9_partition_invariants() {
    let started = Instant::now();
    let mut total = 0usize;
    for (sys, basis, _) in round_trip_instances() {
        let omega = &basis.omegas()[0];
        let (s, _) = inversion_power(omega.func(), &LIMITS).unwrap();
        let mut partitions = Vec::new();
        collect_partitions(&sys, omega, s, &mut partitions);
        for (owner, partition) in &partitions {
            // disjoint cover, down-closure, and within-class decrease
            partition.verify(owner).unwrap();
            // within-class decrease below threshold, checked directly
            for class in partition.classes() {
                if class.is_empty() {
                    continue;
                }
                let mut mask = vec![false; owner.points()];
                for &i in class {
                    mask[i] = true;
                }
                let (d, _) = kinv::chains::decrease_within(owner, &mask, &LIMITS).unwrap();
                assert!((d as u64) < partition.threshold());
            }
            // β-chain: increasing by construction, strictly decreasing in ω
            let levels = partition.levels().unwrap();
            assert_eq!(levels.len(), partition.s());
            assert!(levels.windows(2).all(|w| w[0] > w[1]));
        }
        total += partitions.len();
    }
    finish(
        9,
        started,
        Duration::from_secs(60),
        &format!("{total} level partitions pass all four checks"),
    );
}
