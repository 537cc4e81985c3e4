//! Re-run every shipped Busy Beaver champion and check its recorded values.

use tm_universality::busy_beaver::{blank_tape_statistics, registry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for ((n, k), entry) in registry() {
        let cutoff = entry.steps + 1;
        for (machine, champion) in entry.machines()? {
            let stats = blank_tape_statistics(&machine, cutoff)?.ok_or("champion did not halt")?;
            let ok = stats.sigma == champion.sigma && stats.steps == champion.steps;
            println!(
                "bb({n},{k}) {:<40} sigma {:>5} steps {:>9}  {}",
                champion.table,
                stats.sigma,
                stats.steps,
                if ok { "ok" } else { "MISMATCH" }
            );
        }
        entry.verify(cutoff)?;
        println!("  source: {}", entry.source);
    }
    Ok(())
}
