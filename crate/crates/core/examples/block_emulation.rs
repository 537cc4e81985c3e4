//! Coarse-grained emulation step by step.
//!
//! Part one checks that a machine emulates itself under the identity
//! transform. Part two encodes a tape with block length 3, runs bb(2,3)
//! for 6 steps, keeps every 3rd row, decodes, and looks the result up
//! among the direct 2-step runs of a sample of (2,3) machines.

use std::collections::HashMap;

use rayon::prelude::*;

use tm_universality::busy_beaver::registry_machine;
use tm_universality::emulation::{coarse_grained_run, direct_evolution, find_emulations, is_trivial};
use tm_universality::transform::{encode_tape, enumerate_transforms, BlockTransform};
use tm_universality::{run, sample_machines, Symbol, TapeConfiguration, Topology};

fn show(rows: &[Vec<Symbol>]) -> String {
    rows.iter().map(|r| r.iter().map(|s| s.to_digit()).collect::<String>()).collect::<Vec<_>>().join(" / ")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bb = registry_machine(2, 3)?;
    let initial = vec![Symbol(1), Symbol(0), Symbol(2)];

    let mut candidates = sample_machines(2, 3, 200, 7)?;
    candidates.push(bb.clone());
    let records = find_emulations(&bb, &candidates, &[BlockTransform::identity(3)], &initial, 5)?;
    println!("identity transform: bb(2,3) matches {} of {} candidates", records.len(), candidates.len());
    assert!(records.iter().any(|r| r.emulated_rule == bb.rule_number()));

    let m = 2;
    let transforms = enumerate_transforms(3, 3, true)?;
    let pool = sample_machines(2, 3, 20_000, 11)?;
    let index: HashMap<_, _> = pool
        .par_iter()
        .filter_map(|c| direct_evolution(c, &initial, m).ok().map(|e| (e.canonical(), c)))
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    // first transform whose decoded run changes at every emulated step and
    // is reproduced by some sampled machine
    let (t, evolution, machine) = transforms
        .iter()
        .find_map(|t| match coarse_grained_run(&bb, t, &initial, m) {
            Ok(Ok(e)) if e.rows.windows(2).all(|w| w[0] != w[1]) => index.get(&e.canonical()).map(|c| (t, e, *c)),
            _ => None,
        })
        .ok_or("no transform found")?;
    assert!(!is_trivial(&evolution));

    println!("\ntransform {t} (id {})", t.id());
    let encoded = encode_tape(t, &initial);
    let raw = run(&bb, &TapeConfiguration::from_symbols(&encoded, 0, 0, Topology::TwoWay)?, 3 * m)?;
    let raw = raw.padded(raw.window.0.min(0), raw.window.1.max(encoded.len() as i64 - 1))?;
    println!("encoded input {}", show(&[encoded]));
    println!(
        "emulator rows 0, 3, 6 on a blank background: {}",
        show(&[raw.rows[0].clone(), raw.rows[3].clone(), raw.rows[6].clone()])
    );
    println!("decoded evolution (window {:?}): {}", evolution.window, show(&evolution.rows));
    let direct = direct_evolution(machine, &initial, m)?;
    println!(
        "rule {} = {} runs (window {:?}): {}",
        machine.rule_number(),
        machine.to_standard(),
        direct.window,
        show(&direct.rows)
    );
    Ok(())
}
