//! `tmu`: command-line driver over the tm_universality library.
//!
//! Exit codes: 0 on success, 2 for usage errors, 3 for runtime errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tm_universality::behaviour::HeadStart;
use tm_universality::busy_beaver::{bb_search, registry_lookup};
use tm_universality::emulation::search_emulations;
use tm_universality::harness::{
    parse_digits, run_behaviour_experiment, run_emulation_experiment, BehaviourConfig, ExperimentConfig, MachineSpec,
};
use tm_universality::scoring::{compare_groups, delta, BeliefParameter};
use tm_universality::transform::{enumerate_transforms, BlockTransform};
use tm_universality::{run, sample_machines, seed, TapeConfiguration, Topology};

#[derive(Parser)]
#[command(name = "tmu", version, about = "Small Turing machines, Busy Beavers and block emulation")]
struct Cli {
    /// Root seed for sampled quantities (overrides a config file's seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for result files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exhaustive Busy Beaver search, printed as JSON.
    BbSearch {
        n: u32,
        k: u32,
        #[arg(long, default_value_t = 1000)]
        cutoff: u64,
        /// Look up the shipped registry instead of searching.
        #[arg(long)]
        registry: bool,
    },
    /// Runs one machine and prints its space-time diagram.
    Run {
        #[command(flatten)]
        machine: MachineArgs,
        /// Initial tape digits, head on the first one.
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 100)]
        steps: u64,
        /// Tape unbounded to the right only.
        #[arg(long)]
        one_way: bool,
    },
    /// Lists block transforms of one block size.
    Transforms {
        k: u32,
        b: u32,
        /// Include non-injective maps.
        #[arg(long)]
        all: bool,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Searches emulations of candidates by one emulator.
    Emulate {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long, default_value_t = 2)]
        block_size: u32,
        /// Emulated steps.
        #[arg(long, default_value_t = 3)]
        steps: u64,
        /// Initial tape digits.
        #[arg(long)]
        initial: String,
        /// Random candidates drawn with the root seed.
        #[arg(long, default_value_t = 1000)]
        sample: usize,
        /// Add the emulator itself to the candidates.
        #[arg(long)]
        include_self: bool,
    },
    /// Compressed-length histogram over binary inputs.
    Behaviour {
        #[command(flatten)]
        machine: MachineArgs,
        #[arg(long, default_value_t = 1)]
        first: u64,
        #[arg(long, default_value_t = 200)]
        last: u64,
        #[arg(long, default_value_t = 1000)]
        steps: u64,
        #[arg(long, value_enum, default_value_t = Head::Msd)]
        head: Head,
    },
    /// Busy Beaver vs random emulators experiment from a TOML config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Universality score of an emulation count, or a group comparison.
    Score {
        #[arg(long, required_unless_present = "bb")]
        x: Option<u64>,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Comma-separated Busy Beaver counts.
        #[arg(long, requires = "random", value_delimiter = ',')]
        bb: Option<Vec<u64>>,
        /// Comma-separated random-group counts.
        #[arg(long, value_delimiter = ',')]
        random: Option<Vec<u64>>,
    },
}

#[derive(Args)]
struct MachineArgs {
    n: u32,
    k: u32,
    /// Table notation such as 1RB1LB_1LA1RH.
    #[arg(long, conflicts_with = "rule")]
    table: Option<String>,
    /// Rule number; defaults to the registry champion when neither is given.
    #[arg(long)]
    rule: Option<u64>,
}

impl MachineArgs {
    fn spec(&self) -> MachineSpec {
        match (&self.table, self.rule) {
            (Some(table), _) => MachineSpec::Table { table: table.clone() },
            (None, Some(rule)) => MachineSpec::Rule { rule },
            (None, None) => MachineSpec::Registry,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Head {
    Msd,
    Lsd,
}

type Failure = Box<dyn std::error::Error + Send + Sync>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("tmu: {e}");
            return ExitCode::from(3);
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tmu: {e}");
            ExitCode::from(3)
        }
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_bundle(files: &tm_universality::harness::Bundle, dir: &Path) -> Result<(), Failure> {
    for path in files.write_to(dir)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let root = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::BbSearch { n, k, cutoff, registry } => {
            let record = if *registry { registry_lookup(*n, *k)? } else { bb_search(*n, *k, *cutoff)? };
            print_json(&record)
        }
        Command::Run { machine, input, steps, one_way } => {
            let m = machine.spec().resolve(machine.n, machine.k)?;
            let symbols = parse_digits(input, machine.k)?;
            let topology = if *one_way { Topology::OneWayRight } else { Topology::TwoWay };
            let tape = TapeConfiguration::from_symbols(&symbols, 0, 0, topology)?;
            let d = run(&m, &tape, *steps)?;
            if let Some(dir) = &cli.out {
                std::fs::create_dir_all(dir)?;
                let ext = if machine.k <= 2 { "pbm" } else { "pgm" };
                let path = dir.join(format!("diagram.{ext}"));
                let mut img = Vec::new();
                d.write_pnm(&mut img, machine.k)?;
                std::fs::write(&path, img)?;
                eprintln!("wrote {}", path.display());
            }
            print!("{d}");
            println!(
                "# {} rule={} window={}..={} outcome={}",
                m.to_standard(),
                m.rule_number(),
                d.window.0,
                d.window.1,
                d.outcome.label()
            );
            Ok(())
        }
        Command::Transforms { k, b, all, count } => {
            let ts = enumerate_transforms(*k, *b, !*all)?;
            let mut out = std::io::stdout().lock();
            if *count {
                writeln!(out, "{}", ts.len())?;
            } else {
                for t in &ts {
                    writeln!(out, "{}\t{t}", t.id())?;
                }
            }
            Ok(())
        }
        Command::Emulate { machine, block_size, steps, initial, sample, include_self } => {
            let emulator = machine.spec().resolve(machine.n, machine.k)?;
            let initial = parse_digits(initial, machine.k)?;
            let mut candidates =
                sample_machines(machine.n, machine.k, *sample, seed::derive_seed(root, "cli/emulate"))?;
            if *include_self {
                candidates.push(emulator.clone());
            }
            let transforms: Vec<BlockTransform> = enumerate_transforms(machine.k, *block_size, true)?;
            let found = search_emulations(&emulator, &candidates, &transforms, &initial, *steps)?;
            let mut w = csv::Writer::from_writer(std::io::stdout().lock());
            w.write_record(["transform_id", "emulated_rule", "digest"])?;
            for r in &found.records {
                w.write_record([r.transform_id.to_string(), r.emulated_rule.to_string(), r.evolution_digest.clone()])?;
            }
            w.flush()?;
            eprintln!(
                "{} records, {} trivial, {} decode failures over {} transforms",
                found.records.len(),
                found.trivial_filtered,
                found.decode_failures,
                transforms.len()
            );
            Ok(())
        }
        Command::Behaviour { machine, first, last, steps, head } => {
            let config = BehaviourConfig {
                n: machine.n,
                k: machine.k,
                machine: machine.spec(),
                first_input: *first,
                last_input: *last,
                steps: *steps,
                head: match head {
                    Head::Msd => HeadStart::MostSignificant,
                    Head::Lsd => HeadStart::LeastSignificant,
                },
                seed: root,
                dump_inputs: Vec::new(),
            };
            let bundle = run_behaviour_experiment(&config)?.bundle()?;
            match &cli.out {
                Some(dir) => write_bundle(&bundle, dir),
                None => {
                    std::io::stdout().write_all(bundle.get("behaviour.csv").expect("bundle has behaviour.csv"))?;
                    Ok(())
                }
            }
        }
        Command::Experiment { config } => {
            let mut config = ExperimentConfig::load(config)?;
            if let Some(s) = cli.seed {
                config.seed = s;
            }
            if let Some(dir) = &cli.out {
                config.output_dir = Some(dir.clone());
            }
            let bundle = run_emulation_experiment(&config)?.bundle()?;
            match &config.output_dir {
                Some(dir) => write_bundle(&bundle, dir),
                None => {
                    std::io::stdout().write_all(bundle.get("summary.json").expect("bundle has summary.json"))?;
                    Ok(())
                }
            }
        }
        Command::Score { x, a, bb, random } => {
            let a = BeliefParameter::new(*a)?;
            match (bb, random) {
                (Some(bb), Some(rnd)) => print_json(&compare_groups(bb, rnd, a)?),
                _ => {
                    println!("{}", delta(x.expect("clap requires x"), a));
                    Ok(())
                }
            }
        }
    }
}
