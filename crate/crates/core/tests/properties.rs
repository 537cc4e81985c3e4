use proptest::prelude::*;

use tm_universality::behaviour::frontier_rows;
use tm_universality::busy_beaver::halt_statistics;
use tm_universality::emulation::{direct_evolution, CoarseGrainedEvolution};
use tm_universality::scoring::{compare_groups, delta, delta_f64, BeliefParameter};
use tm_universality::transform::{decode_tape, encode_tape, injective_count, BlockTransform};
use tm_universality::{
    decode_rule, encode_rule, rule_space_size, run, step, StepOutcome, Symbol, TapeConfiguration, Topology,
};

fn tape(k: u32, max_len: usize) -> impl Strategy<Value = Vec<Symbol>> {
    prop::collection::vec((0..k as u8).prop_map(Symbol), 0..max_len)
}

fn rule(n: u32, k: u32) -> impl Strategy<Value = u128> {
    0..rule_space_size(n, k).unwrap()
}

proptest! {
    #[test]
    fn rule_numbers_round_trip(r in rule(2, 3)) {
        let m = decode_rule(2, 3, r).unwrap();
        prop_assert_eq!(encode_rule(&m), r);
        prop_assert_eq!(m.rule_number(), r);
        let text = m.to_string();
        prop_assert_eq!(text.parse::<tm_universality::TuringMachine>().unwrap(), m);
    }

    #[test]
    fn halting_entries_never_move(r in rule(3, 2)) {
        let m = decode_rule(3, 2, r).unwrap();
        for ins in m.table() {
            prop_assert_eq!(ins.next_state.is_halt(), ins.direction == tm_universality::Move::Stay);
        }
    }

    #[test]
    fn transform_round_trip(k in 2u32..=3, b in 1u32..=3, pick in any::<u64>(), cells in tape(3, 40)) {
        let count = injective_count(k, b).unwrap() as u64;
        // walk ids until an injective map turns up
        let mut id = u128::from(pick % count);
        let t = loop {
            let t = BlockTransform::from_id(k, b, id).unwrap();
            if t.is_injective() {
                break t;
            }
            id += 1;
        };
        let cells: Vec<Symbol> = cells.into_iter().map(|s| Symbol(s.0 % k as u8)).collect();
        let encoded = encode_tape(&t, &cells);
        prop_assert_eq!(encoded.len(), cells.len() * b as usize);
        prop_assert_eq!(decode_tape(&t, &encoded).unwrap(), cells);
        prop_assert_eq!(BlockTransform::from_id(k, b, t.id()).unwrap(), t);
    }

    #[test]
    fn head_moves_at_most_one_cell(r in rule(2, 3), input in tape(3, 6), steps in 0u64..60) {
        let m = decode_rule(2, 3, r).unwrap();
        let d = run(&m, &TapeConfiguration::with_input(&input), steps).unwrap();
        prop_assert_eq!(d.rows.len() as u64, steps + 1);
        prop_assert!(d.rows.iter().all(|row| row.len() == d.width()));
        for w in d.head_positions.windows(2) {
            prop_assert!((w[1] - w[0]).abs() <= 1);
        }
        prop_assert!(d.head_positions.iter().all(|&h| d.window.0 <= h && h <= d.window.1));
    }

    #[test]
    fn step_is_deterministic(r in rule(2, 3), input in tape(3, 6)) {
        let m = decode_rule(2, 3, r).unwrap();
        let c = TapeConfiguration::with_input(&input);
        prop_assert_eq!(step(&m, &c).unwrap(), step(&m, &c).unwrap());
    }

    #[test]
    fn statistics_ignore_tape_padding(r in rule(2, 2), extra in 0usize..8) {
        let m = decode_rule(2, 2, r).unwrap();
        let plain = run(&m, &TapeConfiguration::blank(Topology::TwoWay), 50).unwrap();
        let padded_tape = TapeConfiguration::from_symbols(&vec![Symbol::BLANK; extra], -(extra as i64) / 2, 0, Topology::TwoWay).unwrap();
        let padded = run(&m, &padded_tape, 50).unwrap();
        prop_assert_eq!(plain.outcome, padded.outcome);
        if plain.outcome.is_halted() {
            prop_assert_eq!(halt_statistics(&plain).unwrap(), halt_statistics(&padded).unwrap());
        }
    }

    #[test]
    fn canonical_form_ignores_window_padding(r in rule(2, 3), input in tape(3, 5), left in 0i64..4, right in 0i64..4) {
        let m = decode_rule(2, 3, r).unwrap();
        let d = run(&m, &TapeConfiguration::with_input(&input), 4).unwrap();
        let wide = d.padded(d.window.0 - left, d.window.1 + right).unwrap();
        let a = CoarseGrainedEvolution::from_diagram(&d, 4).unwrap();
        let b = CoarseGrainedEvolution::from_diagram(&wide, 4).unwrap();
        prop_assert_eq!(a.canonical(), b.canonical());
        prop_assert_eq!(a.digest(), direct_evolution(&m, &input, 4).unwrap().digest());
    }

    #[test]
    fn frontier_rows_idempotent(r in rule(2, 3), input in tape(3, 5), steps in 0u64..80) {
        let m = decode_rule(2, 3, r).unwrap();
        let d = run(&m, &TapeConfiguration::with_input(&input), steps).unwrap();
        let f = frontier_rows(&d);
        prop_assert_eq!(&f.rows[0], &d.rows[0]);
        prop_assert!(f.rows.len() <= d.rows.len());
        prop_assert_eq!(frontier_rows(&f), f);
    }

    #[test]
    fn more_steps_keep_a_halt(r in rule(2, 2), input in tape(2, 5), short in 1u64..30, more in 0u64..30) {
        let m = decode_rule(2, 2, r).unwrap();
        let c = TapeConfiguration::with_input(&input);
        let a = run(&m, &c, short).unwrap();
        if a.outcome.is_halted() {
            let b = run(&m, &c, short + more).unwrap();
            prop_assert_eq!(a.outcome, b.outcome);
            prop_assert_eq!(a.final_row(), &b.final_row()[..a.width()]);
        }
    }

    #[test]
    fn delta_increasing_and_concave(x in 0u64..1_000_000, a in 0.01f64..=1.0) {
        let a = BeliefParameter::new(a).unwrap();
        let (d0, d1, d2) = (delta(x, a), delta(x + 1, a), delta(x + 2, a));
        prop_assert!((0.0..1.0).contains(&d0));
        prop_assert!(d1 > d0);
        // second differences near 1e6 fall below one ulp of Δ
        prop_assert!(d1 - d0 >= d2 - d1 - 4.0 * f64::EPSILON);
        prop_assert_eq!(delta_f64(x as f64, a), d0);
    }

    #[test]
    fn verdict_invariant_under_scaling(
        bb in prop::collection::vec(0u64..100, 1..20),
        rnd in prop::collection::vec(0u64..100, 1..20),
        c in 1u64..50,
    ) {
        let a = BeliefParameter::default();
        let base = compare_groups(&bb, &rnd, a).unwrap();
        let scale = |v: &[u64]| v.iter().map(|x| x * c).collect::<Vec<_>>();
        let scaled = compare_groups(&scale(&bb), &scale(&rnd), a).unwrap();
        prop_assert_eq!(base.verdict, scaled.verdict);
        let s = &base.busy_beaver;
        prop_assert!(s.min <= s.q1 && s.q1 <= s.median && s.median <= s.q3 && s.q3 <= s.max);
    }
}

#[test]
fn window_is_hull_of_head_and_input() {
    let m = decode_rule(2, 2, 0).unwrap();
    // halts at once, window is the input extent
    let d = run(&m, &TapeConfiguration::with_input(&[Symbol(1), Symbol(0), Symbol(1)]), 10).unwrap();
    assert_eq!(d.window, (0, 2));
    assert!(matches!(step(&m, &TapeConfiguration::blank(Topology::TwoWay)).unwrap(), StepOutcome::Halted(_)));
}
