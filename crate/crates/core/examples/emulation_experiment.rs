//! Busy Beaver vs random emulators in the (2,3) space.
//!
//! cargo run --release --example emulation_experiment -- [out_dir]

use tm_universality::harness::{run_emulation_experiment, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut config = ExperimentConfig::new(2, 3);
    config.block_sizes = vec![2, 3];
    config.candidate_sample = 500;
    config.random_emulators = 30;
    config.bb_trials = 30;
    config.steps = 3;
    config.seed = 2024;

    let started = std::time::Instant::now();
    let exp = run_emulation_experiment(&config)?;
    for (name, cmp) in [("raw", &exp.raw), ("distinct", &exp.distinct)] {
        println!(
            "{name:>8}: bb mean {:.2} median {:.1} | random mean {:.2} median {:.1} | verdict {} | Δ(bb)={:.4} Δ(rnd)={:.4}",
            cmp.busy_beaver.mean,
            cmp.busy_beaver.median,
            cmp.random.mean,
            cmp.random.median,
            cmp.verdict,
            cmp.delta_busy_beaver_mean,
            cmp.delta_random_mean
        );
    }
    println!("elapsed {:.1?}", started.elapsed());
    if let Some(dir) = std::env::args().nth(1) {
        for path in exp.bundle()?.write_to(dir.as_ref())? {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
