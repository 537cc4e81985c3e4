//! Decode a rule number, run it and print the space-time diagram.
//!
//! cargo run --release --example simulate -- [n k rule [input [steps]]]

use tm_universality::harness::parse_digits;
use tm_universality::{decode_rule, run, step, StepOutcome, TapeConfiguration, TuringMachine};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let machine = match args.get(..3) {
        Some([n, k, rule]) => decode_rule(n.parse()?, k.parse()?, rule.parse()?)?,
        _ => TuringMachine::from_standard("1RB2LB1RH_2LA2RB1LB")?,
    };
    let input = parse_digits(args.get(3).map_or("", String::as_str), machine.symbols())?;
    let steps: u64 = args.get(4).map_or(Ok(60), |s| s.parse())?;

    println!("{}", machine);
    println!("standard notation {}", machine.to_standard());

    // single steps by hand
    let mut config = TapeConfiguration::with_input(&input);
    for t in 1..=3 {
        match step(&machine, &config)? {
            StepOutcome::Running(next) => {
                println!("step {t}: state {} head {}", next.state.0, next.head);
                config = next;
            }
            StepOutcome::Halted(last) => {
                println!("step {t}: halted with head {}", last.head);
                break;
            }
            StepOutcome::FellOffTape(_) => break,
        }
    }

    let d = run(&machine, &TapeConfiguration::with_input(&input), steps)?;
    println!("window {:?}, outcome {:?}", d.window, d.outcome);
    for (row, head) in d.rows.iter().zip(&d.head_positions) {
        let cells: String = row
            .iter()
            .enumerate()
            .map(|(i, s)| if d.window.0 + i as i64 == *head { '*' } else { s.to_digit() })
            .collect();
        println!("{cells}");
    }
    Ok(())
}
