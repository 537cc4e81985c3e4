//! Exhaustive Busy Beaver search over a small rule space.
//!
//! cargo run --release --example bb_search -- [n] [k] [cutoff]

use std::time::Instant;

use tm_universality::busy_beaver::bb_search;
use tm_universality::{decode_rule, rule_space_size};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let n = args.first().copied().unwrap_or(2) as u32;
    let k = args.get(1).copied().unwrap_or(2) as u32;
    let cutoff = args.get(2).copied().unwrap_or(1000);

    println!("({n},{k}): {} machines, cutoff {cutoff}", rule_space_size(n, k)?);
    let started = Instant::now();
    let record = bb_search(n, k, cutoff)?;
    println!("searched in {:.2?} on {} threads", started.elapsed(), rayon::current_num_threads());
    println!("S = {}  sigma = {}", record.s_steps, record.sigma);
    println!("halted {}, still running at cutoff {}", record.halted, record.unresolved);
    for &rule in record.champions_steps.iter().take(4) {
        println!("  steps champion {rule}: {}", decode_rule(n, k, rule)?.to_standard());
    }
    for &rule in record.champions_sigma.iter().take(4) {
        println!("  sigma champion {rule}: {}", decode_rule(n, k, rule)?.to_standard());
    }
    Ok(())
}
