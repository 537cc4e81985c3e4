//! Experiment orchestration and result files.
//!
//! Every random draw comes from a stream derived from the root seed and a
//! purpose label (see [`crate::seed`]):
//!
//! | label                         | stream                                |
//! |-------------------------------|---------------------------------------|
//! | `random-emulators`            | rule numbers of the random emulators  |
//! | `trial/<group>/<i>/initial`   | initial tape of trial `i`             |
//! | `trial/<group>/<i>/candidates`| candidate sample of trial `i`         |
//!
//! `<group>` is `bb` or `random`. Results are computed fully in memory
//! before anything is written, and each file is written to a temporary
//! name and renamed into place.

use std::fmt::Write as _;
use std::io::Write as _;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::behaviour::{self, BehaviourSample, FunctionPoint, HeadStart, Mode};
use crate::busy_beaver::registry_machine;
use crate::emulation::{count_emulations, search_emulations, EmulationRecord};
use crate::error::{Error, Result};
use crate::machine::{decode_rule, sample_machines, Symbol, TuringMachine};
use crate::scoring::{compare_groups, delta, BeliefParameter, Comparison};
use crate::seed::{derive_seed, labelled_rng};
use crate::simulate::run;
use crate::transform::{enumerate_transforms, BlockTransform};

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Where a machine comes from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum MachineSpec {
    /// The registry's step champion for the space.
    #[default]
    Registry,
    /// Compact table notation, e.g. `1RB1LB_1LA1RH`.
    Table {
        table: String,
    },
    Rule {
        rule: u64,
    },
}

impl MachineSpec {
    pub fn resolve(&self, n: u32, k: u32) -> Result<TuringMachine> {
        let m = match self {
            MachineSpec::Registry => registry_machine(n, k)?,
            MachineSpec::Table { table } => TuringMachine::from_standard(table)?,
            MachineSpec::Rule { rule } => decode_rule(n, k, u128::from(*rule))?,
        };
        if (m.states(), m.symbols()) != (n, k) {
            return Err(Error::Config(format!("machine is in ({},{}), expected ({n},{k})", m.states(), m.symbols())));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialPolicy {
    /// Uniform over the non-all-blank patterns of this many cells.
    Random { length: usize },
    /// Digit string used for every trial.
    Explicit { tape: String },
}

impl Default for InitialPolicy {
    fn default() -> Self {
        InitialPolicy::Random { length: 6 }
    }
}

impl InitialPolicy {
    fn draw(&self, k: u32, root: u64, label: &str) -> Result<Vec<Symbol>> {
        match self {
            InitialPolicy::Explicit { tape } => parse_digits(tape, k),
            InitialPolicy::Random { length } => {
                let mut rng = labelled_rng(root, label);
                loop {
                    let tape: Vec<Symbol> = (0..*length).map(|_| Symbol(rng.gen_range(0..k as u8))).collect();
                    if tape.iter().any(|s| !s.is_blank()) {
                        return Ok(tape);
                    }
                }
            }
        }
    }
}

pub fn parse_digits(text: &str, k: u32) -> Result<Vec<Symbol>> {
    text.trim()
        .chars()
        .map(|c| match Symbol::from_digit(c) {
            Some(s) if u32::from(s.0) < k => Ok(s),
            _ => Err(Error::Parse(format!("`{c}` is not a symbol below {k}"))),
        })
        .collect()
}

fn digits(tape: &[Symbol]) -> String {
    tape.iter().map(|s| s.to_digit()).collect()
}

fn default_sample() -> usize {
    1000
}
fn default_random_emulators() -> usize {
    30
}
fn default_bb_trials() -> usize {
    30
}
fn default_block_sizes() -> Vec<u32> {
    vec![2, 3, 4]
}
fn default_steps() -> u64 {
    3
}

/// Emulation experiment settings, read from TOML.
///
/// ```toml
/// n = 2
/// k = 3
/// candidate_sample = 500
/// block_sizes = [2, 3]
/// steps = 3
/// seed = 7
/// emulator = { source = "registry" }
/// initial = { policy = "random", length = 6 }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n: u32,
    pub k: u32,
    #[serde(default)]
    pub emulator: MachineSpec,
    /// Candidate machines drawn per trial.
    #[serde(default = "default_sample")]
    pub candidate_sample: usize,
    #[serde(default = "default_random_emulators")]
    pub random_emulators: usize,
    /// Repetitions of the Busy Beaver emulator, each with a fresh initial
    /// tape and candidate sample.
    #[serde(default = "default_bb_trials")]
    pub bb_trials: usize,
    /// Append each trial's emulator to its candidate sample.
    #[serde(default)]
    pub include_emulator: bool,
    #[serde(default = "default_block_sizes")]
    pub block_sizes: Vec<u32>,
    /// Emulated steps `m`.
    #[serde(default = "default_steps")]
    pub steps: u64,
    #[serde(default)]
    pub initial: InitialPolicy,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub belief: BeliefParameter,
    #[serde(default, skip_serializing)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(n: u32, k: u32) -> Self {
        ExperimentConfig {
            n,
            k,
            emulator: MachineSpec::Registry,
            candidate_sample: default_sample(),
            random_emulators: default_random_emulators(),
            bb_trials: default_bb_trials(),
            include_emulator: false,
            block_sizes: default_block_sizes(),
            steps: default_steps(),
            initial: InitialPolicy::default(),
            seed: 0,
            belief: BeliefParameter::default(),
            output_dir: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        crate::machine::rule_space_size(self.n, self.k)?;
        if self.candidate_sample == 0 {
            return Err(Error::Config("candidate_sample must be at least 1".into()));
        }
        if self.bb_trials == 0 {
            return Err(Error::Config("bb_trials must be at least 1".into()));
        }
        if self.random_emulators == 0 {
            return Err(Error::Config("random_emulators must be at least 1".into()));
        }
        if self.block_sizes.is_empty() || self.block_sizes.iter().any(|b| !(1..=4).contains(b)) {
            return Err(Error::Config("block_sizes must be a non-empty subset of 1..=4".into()));
        }
        if self.steps == 0 {
            return Err(Error::Config("steps must be at least 1".into()));
        }
        match &self.initial {
            InitialPolicy::Random { length: 0 } => {
                return Err(Error::Config("initial length must be at least 1".into()))
            }
            InitialPolicy::Explicit { tape } => {
                parse_digits(tape, self.k)?;
            }
            _ => {}
        }
        Ok(())
    }

    /// First 16 hex digits of SHA-256 over the JSON form of the settings
    /// (the output directory is excluded).
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    BusyBeaver,
    Random,
}

impl Group {
    pub fn label(self) -> &'static str {
        match self {
            Group::BusyBeaver => "bb",
            Group::Random => "random",
        }
    }
}

/// One emulator run against one candidate sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub group: Group,
    pub index: usize,
    pub emulator_rule: u128,
    pub initial: Vec<Symbol>,
    pub records: Vec<EmulationRecord>,
    pub raw: u64,
    pub distinct: u64,
    pub trivial_filtered: u64,
    pub decode_failures: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmulationExperiment {
    pub config: ExperimentConfig,
    pub trials: Vec<Trial>,
    pub raw: Comparison,
    pub distinct: Comparison,
}

/// Runs the Busy Beaver trials and one trial per random emulator.
pub fn run_emulation_experiment(config: &ExperimentConfig) -> Result<EmulationExperiment> {
    config.validate()?;
    let (n, k) = (config.n, config.k);
    let bb = config.emulator.resolve(n, k)?;
    let transforms: Vec<BlockTransform> = config
        .block_sizes
        .iter()
        .map(|&b| enumerate_transforms(k, b, true))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let randoms = sample_machines(n, k, config.random_emulators, derive_seed(config.seed, "random-emulators"))?;

    let mut plan: Vec<(Group, usize, &TuringMachine)> =
        (0..config.bb_trials).map(|i| (Group::BusyBeaver, i, &bb)).collect();
    plan.extend(randoms.iter().enumerate().map(|(i, m)| (Group::Random, i, m)));

    let trials: Vec<Trial> = plan
        .par_iter()
        .map(|&(group, index, emulator)| {
            let label = format!("trial/{}/{index}", group.label());
            let initial = config.initial.draw(k, config.seed, &format!("{label}/initial"))?;
            let mut candidates = sample_machines(
                n,
                k,
                config.candidate_sample,
                derive_seed(config.seed, &format!("{label}/candidates")),
            )?;
            if config.include_emulator {
                candidates.push(emulator.clone());
            }
            let search = search_emulations(emulator, &candidates, &transforms, &initial, config.steps)?;
            Ok(Trial {
                group,
                index,
                emulator_rule: emulator.rule_number(),
                initial,
                raw: count_emulations(&search.records, false),
                distinct: count_emulations(&search.records, true),
                trivial_filtered: search.trivial_filtered,
                decode_failures: search.decode_failures,
                records: search.records,
            })
        })
        .collect::<Result<_>>()?;

    let counts = |g: Group, distinct: bool| -> Vec<u64> {
        trials.iter().filter(|t| t.group == g).map(|t| if distinct { t.distinct } else { t.raw }).collect()
    };
    let raw = compare_groups(&counts(Group::BusyBeaver, false), &counts(Group::Random, false), config.belief)?;
    let distinct = compare_groups(&counts(Group::BusyBeaver, true), &counts(Group::Random, true), config.belief)?;
    Ok(EmulationExperiment { config: config.clone(), trials, raw, distinct })
}

/// Comment lines opening every CSV file.
fn csv_header(seed: u64, config_hash: &str) -> String {
    format!("# tool={TOOL} version={VERSION}\n# seed={seed}\n# config_hash={config_hash}\n")
}

fn csv_body<F>(columns: &[&str], fill: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns).map_err(|e| Error::Io(e.to_string()))?;
    fill(&mut w).map_err(|e| Error::Io(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Named file contents of a result bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub files: Vec<(String, Vec<u8>)>,
}

impl Bundle {
    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, b)| b.as_slice())
    }

    /// Writes every file under `dir`, each through a temporary file that
    /// is renamed into place once complete.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut staged = Vec::new();
        for (name, bytes) in &self.files {
            let target = dir.join(name);
            if let Some(parent) = target.parent() {
                std::fs::create_dir_all(parent)?;
            }
            let mut tmp = tempfile::NamedTempFile::new_in(target.parent().unwrap_or(dir))?;
            tmp.write_all(bytes)?;
            tmp.flush()?;
            staged.push((tmp, target));
        }
        let mut written = Vec::new();
        for (tmp, target) in staged {
            tmp.persist(&target).map_err(|e| Error::Io(e.to_string()))?;
            written.push(target);
        }
        Ok(written)
    }
}

#[derive(Serialize)]
struct ExperimentSummary<'a> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    config_hash: String,
    config: &'a ExperimentConfig,
    transforms_per_block_size: Vec<(u32, usize)>,
    raw: &'a Comparison,
    distinct: &'a Comparison,
}

impl EmulationExperiment {
    pub fn bundle(&self) -> Result<Bundle> {
        let config = &self.config;
        let hash = config.hash();
        let header = csv_header(config.seed, &hash);
        let nk = f64::from(config.n * config.k);

        let emulations = csv_body(
            &[
                "kind",
                "group",
                "trial",
                "emulator_rule",
                "transform_id",
                "block_size",
                "emulated_rule",
                "initial_condition",
                "m",
                "digest",
                "trivial_filtered_count",
            ],
            |w| {
                for t in &self.trials {
                    let group = t.group.label();
                    let trial = t.index.to_string();
                    for r in &t.records {
                        w.write_record([
                            "match",
                            group,
                            &trial,
                            &r.emulator_rule.to_string(),
                            &r.transform_id.to_string(),
                            &r.block_size.to_string(),
                            &r.emulated_rule.to_string(),
                            &r.initial_digits(),
                            &r.m.to_string(),
                            &r.evolution_digest,
                            "",
                        ])?;
                    }
                    w.write_record([
                        "summary",
                        group,
                        &trial,
                        &t.emulator_rule.to_string(),
                        "",
                        "",
                        "",
                        &digits(&t.initial),
                        &config.steps.to_string(),
                        "",
                        &t.trivial_filtered.to_string(),
                    ])?;
                }
                Ok(())
            },
        )?;

        let counts = csv_body(
            &[
                "group",
                "trial",
                "emulator_rule",
                "initial_condition",
                "raw_count",
                "distinct_count",
                "trivial_filtered",
                "decode_failures",
                "delta_raw",
                "delta_distinct",
                "delta_distinct_per_nk",
            ],
            |w| {
                for t in &self.trials {
                    let d_raw = delta(t.raw, config.belief);
                    let d_distinct = delta(t.distinct, config.belief);
                    w.write_record([
                        t.group.label().to_string(),
                        t.index.to_string(),
                        t.emulator_rule.to_string(),
                        digits(&t.initial),
                        t.raw.to_string(),
                        t.distinct.to_string(),
                        t.trivial_filtered.to_string(),
                        t.decode_failures.to_string(),
                        format!("{d_raw:.12}"),
                        format!("{d_distinct:.12}"),
                        format!("{:.12}", d_distinct / nk),
                    ])?;
                }
                Ok(())
            },
        )?;

        let per_size = config
            .block_sizes
            .iter()
            .map(|&b| Ok((b, crate::transform::injective_count(config.k, b)? as usize)))
            .collect::<Result<Vec<_>>>()?;
        let summary = ExperimentSummary {
            tool: TOOL,
            version: VERSION,
            seed: config.seed,
            config_hash: hash,
            config,
            transforms_per_block_size: per_size,
            raw: &self.raw,
            distinct: &self.distinct,
        };
        let mut json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
        json.push('\n');

        Ok(Bundle {
            files: vec![
                ("emulations.csv".into(), format!("{header}{emulations}").into_bytes()),
                ("counts.csv".into(), format!("{header}{counts}").into_bytes()),
                ("summary.json".into(), json.into_bytes()),
            ],
        })
    }
}

/// Settings of a behaviour run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BehaviourConfig {
    pub n: u32,
    pub k: u32,
    pub machine: MachineSpec,
    pub first_input: u64,
    pub last_input: u64,
    pub steps: u64,
    pub head: HeadStart,
    pub seed: u64,
    /// Inputs whose diagrams are dumped as portable images.
    pub dump_inputs: Vec<u64>,
}

impl BehaviourConfig {
    pub fn inputs(&self) -> RangeInclusive<u64> {
        self.first_input..=self.last_input
    }

    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BehaviourExperiment {
    pub config: BehaviourConfig,
    pub machine: TuringMachine,
    pub samples: Vec<BehaviourSample>,
    pub function: Vec<FunctionPoint>,
    pub modes: Vec<Mode>,
    pub dumps: Vec<(u64, Vec<u8>)>,
}

pub fn run_behaviour_experiment(config: &BehaviourConfig) -> Result<BehaviourExperiment> {
    if config.first_input == 0 || config.steps == 0 {
        return Err(Error::Config("inputs start at 1 and steps must be at least 1".into()));
    }
    let machine = config.machine.resolve(config.n, config.k)?;
    let samples = behaviour::behaviour_histogram(&machine, config.inputs(), config.steps, config.head)?;
    let function = behaviour::computed_function(&machine, config.inputs(), config.steps, config.head)?;
    let modes = behaviour::default_modes(&samples);
    let mut dumps = Vec::new();
    for &i in &config.dump_inputs {
        let d = run(&machine, &behaviour::input_configuration(i, config.head)?, config.steps)?;
        let mut img = Vec::new();
        d.write_pnm(&mut img, config.k)?;
        dumps.push((i, img));
    }
    Ok(BehaviourExperiment { config: config.clone(), machine, samples, function, modes, dumps })
}

#[derive(Serialize)]
struct BehaviourSummary<'a> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    config_hash: String,
    config: &'a BehaviourConfig,
    machine: String,
    compressor: &'static str,
    mode_rule: &'static str,
    modes: &'a [Mode],
    halted: usize,
    cutoff: usize,
}

impl BehaviourExperiment {
    pub fn bundle(&self) -> Result<Bundle> {
        let hash = self.config.hash();
        let header = csv_header(self.config.seed, &hash);
        let histogram = csv_body(&["input", "outcome", "steps", "compressed_length"], |w| {
            for s in &self.samples {
                w.write_record([
                    s.input_index.to_string(),
                    s.outcome.label().to_string(),
                    s.steps_run.to_string(),
                    s.compressed_length.to_string(),
                ])?;
            }
            Ok(())
        })?;
        let function = csv_body(&["input", "output", "outcome"], |w| {
            for p in &self.function {
                w.write_record([p.input.to_string(), p.output.clone(), p.outcome.label().to_string()])?;
            }
            Ok(())
        })?;
        let halted = self.samples.iter().filter(|s| s.outcome.is_halted()).count();
        let summary = BehaviourSummary {
            tool: TOOL,
            version: VERSION,
            seed: self.config.seed,
            config_hash: hash,
            config: &self.config,
            machine: self.machine.to_standard(),
            compressor: behaviour::COMPRESSOR,
            mode_rule: "width-4 bins holding >= 5% of samples, split by empty bins",
            modes: &self.modes,
            halted,
            cutoff: self.samples.len() - halted,
        };
        let mut json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
        json.push('\n');
        let mut files = vec![
            ("behaviour.csv".to_string(), format!("{header}{histogram}").into_bytes()),
            ("function.csv".to_string(), format!("{header}{function}").into_bytes()),
            ("behaviour.json".to_string(), json.into_bytes()),
        ];
        let ext = if self.config.k <= 2 { "pbm" } else { "pgm" };
        for (i, img) in &self.dumps {
            let mut name = String::new();
            write!(name, "diagrams/input_{i}.{ext}").expect("string write");
            files.push((name, img.clone()));
        }
        Ok(Bundle { files })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_defaults_and_validation() {
        let c = ExperimentConfig::from_toml("n = 2\nk = 3\n").unwrap();
        assert_eq!(c.block_sizes, vec![2, 3, 4]);
        assert_eq!(c.candidate_sample, 1000);
        assert_eq!(c.initial, InitialPolicy::Random { length: 6 });
        assert!(ExperimentConfig::from_toml("n = 2\nk = 3\nblock_sizes = [5]\n").is_err());
        assert!(ExperimentConfig::from_toml("n = 2\nk = 3\ncandidate_sample = 0\n").is_err());
        assert!(ExperimentConfig::from_toml("n = 2\nk = 3\nbelief = 0.0\n").is_err());
        assert!(ExperimentConfig::from_toml("n = 2\nk = 3\nunknown = 1\n").is_err());
        let c = ExperimentConfig::from_toml(
            "n = 2\nk = 3\nemulator = { source = \"table\", table = \"1RB2LB1RH_2LA2RB1LB\" }\ninitial = { policy = \"explicit\", tape = \"0102\" }\n",
        )
        .unwrap();
        assert_eq!(c.initial.draw(3, 0, "x").unwrap().len(), 4);
        assert!(ExperimentConfig::from_toml("n = 2\nk = 3\ninitial = { policy = \"explicit\", tape = \"0103\" }\n")
            .is_err());
    }

    #[test]
    fn hash_tracks_settings_not_output_dir() {
        let a = ExperimentConfig::new(2, 3);
        let mut b = a.clone();
        b.output_dir = Some("elsewhere".into());
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn random_initial_is_never_blank() {
        let p = InitialPolicy::Random { length: 1 };
        for i in 0..50 {
            let t = p.draw(2, 3, &format!("l{i}")).unwrap();
            assert_eq!(t, vec![Symbol(1)]);
        }
    }

    #[test]
    fn spec_resolution() {
        assert!(MachineSpec::Registry.resolve(7, 2).is_err());
        assert!(MachineSpec::Table { table: "1RB1LB_1LA1RH".into() }.resolve(2, 3).is_err());
        assert_eq!(MachineSpec::Rule { rule: 5 }.resolve(2, 2).unwrap().rule_number(), 5);
    }

    #[test]
    fn bundle_files_are_staged_then_renamed() {
        let dir = tempfile::tempdir().unwrap();
        let b = Bundle { files: vec![("a.csv".into(), b"x\n".to_vec()), ("sub/b.txt".into(), b"y".to_vec())] };
        let written = b.write_to(dir.path()).unwrap();
        assert_eq!(written.len(), 2);
        assert_eq!(std::fs::read(dir.path().join("sub/b.txt")).unwrap(), b"y");
        let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
        assert_eq!(leftovers, 2);
    }
}
