//! The universality score and a two-group comparison.

use tm_universality::scoring::{compare_groups, delta, BeliefParameter};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for a in [1.0, 0.5, 0.1] {
        let belief = BeliefParameter::new(a)?;
        let row: Vec<String> =
            [0u64, 1, 2, 5, 10, 100, 1000].iter().map(|&x| format!("{:.4}", delta(x, belief))).collect();
        println!("a={a:<4} Δ(0,1,2,5,10,100,1000) = {}", row.join(" "));
    }
    let cmp = compare_groups(&[12, 30, 7, 19, 25], &[0, 3, 1, 8, 2], BeliefParameter::default())?;
    for g in [&cmp.busy_beaver, &cmp.random] {
        println!(
            "{:<12} min {} q1 {} median {} q3 {} max {} mean {:.2}",
            g.label, g.min, g.q1, g.median, g.q3, g.max, g.mean
        );
    }
    println!(
        "verdict {}  Δ(bb mean)={:.4}  Δ(random mean)={:.4}",
        cmp.verdict, cmp.delta_busy_beaver_mean, cmp.delta_random_mean
    );
    Ok(())
}
