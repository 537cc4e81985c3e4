//! Compressed-length histogram, frontier rows and computed function of a
//! Busy Beaver over consecutive binary inputs.
//!
//! The head starts on the least significant digit. On the leftmost digit
//! bb(3,2) halts at step 1 on every input.
//!
//! cargo run --release --example behaviour -- [n] [first] [last] [steps] [out_dir]

use tm_universality::behaviour::{frontier_rows, input_configuration, HeadStart};
use tm_universality::harness::{run_behaviour_experiment, BehaviourConfig, MachineSpec};
use tm_universality::run;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: u64| args.get(i).map(|s| s.parse()).transpose().map(|v| v.unwrap_or(default));
    let n = arg(0, 3)? as u32;
    let config = BehaviourConfig {
        n,
        k: 2,
        machine: MachineSpec::Registry,
        first_input: arg(1, 1)?,
        last_input: arg(2, 200)?,
        steps: arg(3, 1000)?,
        head: HeadStart::LeastSignificant,
        seed: 0,
        dump_inputs: vec![1],
    };
    let exp = run_behaviour_experiment(&config)?;

    let mut lengths: Vec<usize> = exp.samples.iter().map(|s| s.compressed_length).collect();
    lengths.sort_unstable();
    let halted = exp.samples.iter().filter(|s| s.outcome.is_halted()).count();
    println!("bb({n},2) = {}", exp.machine.to_standard());
    println!(
        "{} inputs, {halted} halted, compressed lengths {}..={}",
        lengths.len(),
        lengths[0],
        lengths[lengths.len() - 1]
    );
    for mode in &exp.modes {
        println!("  mode {:?}: {} samples", mode.lengths, mode.samples);
    }

    let d = run(&exp.machine, &input_configuration(1, config.head)?, config.steps)?;
    println!("frontier rows for input 1: {} of {}", frontier_rows(&d).rows.len(), d.rows.len());

    for p in exp.function.iter().take(8) {
        println!("  f({}) = {} [{}]", p.input, p.output, p.outcome.label());
    }
    if let Some(dir) = args.get(4) {
        for path in exp.bundle()?.write_to(dir.as_ref())? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
