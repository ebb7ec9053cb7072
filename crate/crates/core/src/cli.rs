//! Command-line front end.
//!
//! Exit status is 0 on success, 1 on usage or configuration errors and 2
//! when an internal invariant is violated.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ProtocolSpec, ResolvedRun, RunConfig};
use crate::error::{Error, Result};
use crate::hypergraph::{
    exact_coloring, greedy_cover, union_jack, validate_cover, ColorStats, Hypergraph, IndependenceCover,
    DEFAULT_EXACT_LIMIT,
};
use crate::protocol::{derive_paper_params, CaseStudy, ProverModel, StateSpec, Verification};
use crate::stabilizer::{
    analytic_pass_probability, ClassChecker, CorrectableSet, Ensemble, MixedState, NoisyState, ANALYTIC_QUBIT_LIMIT,
};
use crate::state::{build_state, fidelity, sample_noisy_state, MeasurementSampler, NoiseModel, StateVector};
use crate::stats::{completeness_bound, trial_rng, FrequencyEstimate};

/// Trials processed per parallel batch before results are written.
const BATCH: u64 = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "hgverify", version, about = "Hypergraph-state verification workbench")]
pub struct Cli {
    /// Master seed; every trial derives its own stream from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    /// Directory for output files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for trial fan-out (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Color a hypergraph and report the independence cover.
    Color {
        /// Edge-list file or `union-jack:L`.
        hypergraph: String,
        #[arg(long, conflicts_with = "greedy")]
        exact: bool,
        #[arg(long)]
        greedy: bool,
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        vertex_limit: usize,
    },
    /// Dump the amplitudes of a register state.
    State {
        hypergraph: String,
        /// State spec JSON, e.g. `{"kind":"z_error","qubits":[0]}`.
        #[arg(long)]
        spec: Option<String>,
    },
    /// Run one color-class test repeatedly.
    Test {
        hypergraph: String,
        #[arg(long)]
        class: usize,
        /// Cover JSON (as written by `color`); default is the generator
        /// cover or a greedy coloring.
        #[arg(long)]
        cover: Option<PathBuf>,
        /// State spec JSON.
        #[arg(long, conflicts_with_all = ["mixed", "noise"])]
        state: Option<String>,
        /// Use the maximally mixed state.
        #[arg(long, conflicts_with = "noise")]
        mixed: bool,
        /// Noise model JSON applied to `|H⟩`.
        #[arg(long)]
        noise: Option<String>,
        /// Correctable set JSON, e.g. `{"mode":"weight","t":1}`.
        #[arg(long)]
        correctable: Option<String>,
    },
    /// Run a protocol configuration; writes transcripts.jsonl and summary.csv.
    Protocol {
        config: PathBuf,
        /// Skip the per-trial transcript file.
        #[arg(long)]
        summary_only: bool,
    },
    /// Print the full-scale protocol parameters.
    Params {
        #[arg(long = "n")]
        n: u64,
        #[arg(long)]
        gamma: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        k: u64,
    },
    /// Quick internal consistency checks.
    Selftest,
}

pub fn main() -> i32 {
    run(std::env::args_os(), &mut std::io::stdout())
}

/// Parses `args` and executes, writing reports to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => 2,
        _ => 1,
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    if let Some(t) = cli.threads {
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let seed = cli.seed.unwrap_or(0);
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Color {
            hypergraph,
            exact,
            vertex_limit,
            ..
        } => {
            let h = load_hypergraph(hypergraph)?.0;
            let report = cmd_color(&h, *exact, *vertex_limit)?;
            if let Some(dir) = out {
                write_file(dir, "cover.json", &to_json(&report)?)?;
            }
            let text = match cli.format {
                Format::Json => to_json(&report)?,
                Format::Csv => {
                    let mut s = String::from("vertex,class\n");
                    for v in 0..h.num_vertices() {
                        let c = report.cover.class_of(v).map(|c| c.to_string()).unwrap_or_default();
                        let _ = writeln!(s, "{v},{c}");
                    }
                    s
                }
            };
            emit(stdout, &text)
        }
        Command::State { hypergraph, spec } => {
            let h = load_hypergraph(hypergraph)?.0;
            let spec: StateSpec = match spec {
                Some(s) => parse_arg("--spec", s)?,
                None => StateSpec::Hypergraph {},
            };
            let state = spec.build(&h)?;
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&state.to_json_dump())? + "\n",
                Format::Csv => {
                    let mut s = String::from("basis,re,im\n");
                    for (x, a) in state.amplitudes().iter().enumerate() {
                        let bits: String = (0..h.num_vertices()).map(|q| if x >> q & 1 == 1 { '1' } else { '0' }).collect();
                        let _ = writeln!(s, "{bits},{},{}", a.re, a.im);
                    }
                    s
                }
            };
            if let Some(dir) = out {
                write_file(dir, "state.json", &(serde_json::to_string(&state.to_json_dump())? + "\n"))?;
            }
            emit(stdout, &text)
        }
        Command::Test {
            hypergraph,
            class,
            cover,
            state,
            mixed,
            noise,
            correctable,
        } => {
            let (h, generated) = load_hypergraph(hypergraph)?;
            let cover = match cover {
                Some(path) => load_cover(path)?,
                None => generated.unwrap_or_else(|| greedy_cover(&h)),
            };
            let source = if *mixed {
                TestSource::MaximallyMixed
            } else if let Some(n) = noise {
                TestSource::Noisy(parse_arg("--noise", n)?)
            } else {
                let spec: StateSpec = match state {
                    Some(s) => parse_arg("--state", s)?,
                    None => StateSpec::Hypergraph {},
                };
                TestSource::Pure(spec)
            };
            let correctable: CorrectableSet = match correctable {
                Some(s) => parse_arg("--correctable", s)?,
                None => CorrectableSet::Zero,
            };
            let trials = cli.trials.unwrap_or(1000);
            let (report, outcomes) = cmd_test(&h, &cover, *class, &source, &correctable, trials, seed)?;
            if let Some(dir) = out {
                let mut s = String::from("trial,passed,flagged\n");
                for (t, (passed, flagged)) in outcomes.iter().enumerate() {
                    let f: Vec<String> = flagged.iter().map(|v| v.to_string()).collect();
                    let _ = writeln!(s, "{t},{},{}", u8::from(*passed), f.join(";"));
                }
                write_file(dir, "outcomes.csv", &s)?;
                write_file(dir, "summary.json", &to_json(&report)?)?;
            }
            let text = match cli.format {
                Format::Json => to_json(&report)?,
                Format::Csv => format!(
                    "class,trials,passes,frequency,wilson_lo,wilson_hi,analytic\n{},{},{},{},{},{},{}\n",
                    report.class,
                    report.trials,
                    report.passes,
                    report.frequency,
                    report.wilson.0,
                    report.wilson.1,
                    report.analytic.map(|a| a.to_string()).unwrap_or_default()
                ),
            };
            emit(stdout, &text)
        }
        Command::Protocol { config, summary_only } => {
            let dir = out.unwrap_or(Path::new("."));
            let report = cmd_protocol(
                config,
                dir,
                ProtocolOverrides {
                    seed: cli.seed,
                    trials: cli.trials,
                    transcripts: !summary_only,
                },
            )?;
            let text = match cli.format {
                Format::Json => to_json(&report)?,
                Format::Csv => {
                    let lo_hi = report.acceptance.interval;
                    format!(
                        "kind,trials,accepted,frequency,wilson_lo,wilson_hi,reference\n{},{},{},{},{},{},{}\n",
                        report.kind,
                        report.acceptance.trials,
                        report.acceptance.successes,
                        report.acceptance.estimate,
                        lo_hi.0,
                        lo_hi.1,
                        report.reference.map(|r| r.to_string()).unwrap_or_default()
                    )
                }
            };
            emit(stdout, &text)
        }
        Command::Params { n, gamma, r, k } => {
            let rows = cmd_params(*n, *gamma, *r, *k)?;
            let text = match cli.format {
                Format::Json => to_json(&rows)?,
                Format::Csv => {
                    let mut s = String::from("name,exact,approx\n");
                    for row in &rows {
                        let _ = writeln!(s, "{},{},{:e}", row.name, row.exact, row.approx);
                    }
                    s
                }
            };
            if let Some(dir) = out {
                write_file(dir, "params.json", &to_json(&rows)?)?;
            }
            emit(stdout, &text)
        }
        Command::Selftest => {
            let results = selftest();
            let mut text = String::new();
            for (name, ok) in &results {
                let _ = writeln!(text, "[{}] {name}", if *ok { "PASS" } else { "FAIL" });
            }
            emit(stdout, &text)?;
            let failed: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Error::Invariant(format!("selftest failed: {}", failed.join(", "))))
            }
        }
    }
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<()> {
    stdout.write_all(text.as_bytes())?;
    stdout.flush()?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), content)?;
    Ok(())
}

fn parse_arg<T: serde::de::DeserializeOwned>(flag: &str, text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de)
        .map_err(|e| Error::Config(format!("{flag}: field `{}`: {}", e.path(), e.inner())))
}

/// `union-jack:L` or an edge-list file. Generated hypergraphs come with
/// their cover.
pub fn load_hypergraph(source: &str) -> Result<(Hypergraph, Option<IndependenceCover>)> {
    if let Some(l) = source.strip_prefix("union-jack:") {
        let cells = l
            .parse()
            .map_err(|_| Error::Config(format!("bad Union Jack size `{l}`")))?;
        let (h, c) = union_jack(cells)?;
        return Ok((h, Some(c)));
    }
    let text = fs::read_to_string(source).map_err(|e| Error::Config(format!("{source}: {e}")))?;
    Ok((Hypergraph::parse(&text)?, None))
}

/// Accepts either a bare cover or the `color` report containing one.
pub fn load_cover(path: &Path) -> Result<IndependenceCover> {
    let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let inner = value.get("cover").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, Serialize)]
pub struct ColorReport {
    pub cover: IndependenceCover,
    pub stats: ColorStats,
}

pub fn cmd_color(h: &Hypergraph, exact: bool, vertex_limit: usize) -> Result<ColorReport> {
    let cover = if exact {
        exact_coloring(h, vertex_limit)?
    } else {
        greedy_cover(h)
    };
    validate_cover(h, &cover).map_err(|e| Error::Invariant(format!("colorer produced an invalid cover: {e}")))?;
    let mut stats = cover.stats();
    if exact {
        stats.gamma = Some(stats.m);
    }
    Ok(ColorReport { cover, stats })
}

#[derive(Clone, Debug)]
pub enum TestSource {
    Pure(StateSpec),
    MaximallyMixed,
    Noisy(NoiseModel),
}

#[derive(Clone, Debug, Serialize)]
pub struct TestReport {
    pub class: usize,
    pub trials: u64,
    pub passes: u64,
    pub frequency: f64,
    pub wilson: (f64, f64),
    /// Exact pass probability when the register is small enough.
    pub analytic: Option<f64>,
}

/// Returns the summary plus `(passed, flagged vertices)` per trial.
/// `(passed, flagged vertices)` for one trial.
pub type TrialOutcome = (bool, Vec<usize>);

pub fn cmd_test(
    h: &Hypergraph,
    cover: &IndependenceCover,
    class: usize,
    source: &TestSource,
    correctable: &CorrectableSet,
    trials: u64,
    seed: u64,
) -> Result<(TestReport, Vec<TrialOutcome>)> {
    validate_cover(h, cover)?;
    if class >= cover.num_classes() {
        return Err(Error::param(format!(
            "class index {class} out of range for {} classes",
            cover.num_classes()
        )));
    }
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let checker = ClassChecker::from_cover(h, cover, class)?;
    let n = h.num_vertices();
    let small = n <= ANALYTIC_QUBIT_LIMIT;
    let (pure, analytic): (Option<StateVector>, Option<f64>) = match source {
        TestSource::Pure(spec) => {
            let s = spec.build(h)?;
            let a = if small {
                Some(analytic_pass_probability(&s, h, cover, class, correctable)?)
            } else {
                None
            };
            (Some(s), a)
        }
        TestSource::MaximallyMixed => {
            let a = if small {
                Some(analytic_pass_probability(&Ensemble::maximally_mixed(n), h, cover, class, correctable)?)
            } else {
                None
            };
            (None, a)
        }
        TestSource::Noisy(noise) => {
            noise.validate(n)?;
            let a = if small {
                match NoisyState::new(h, noise) {
                    Ok(rho) => Some(analytic_pass_probability(&rho as &dyn MixedState, h, cover, class, correctable)?),
                    Err(Error::TooLarge { .. }) => None,
                    Err(e) => return Err(e),
                }
            } else {
                None
            };
            (None, a)
        }
    };
    let sampler = pure.as_ref().map(|s| MeasurementSampler::new(s, checker.basis())).transpose()?;

    let outcomes: Vec<(bool, Vec<usize>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let outcome = match (&sampler, source) {
                (Some(sm), _) => checker.outcome(sm.sample(&mut rng), correctable),
                (None, TestSource::MaximallyMixed) => {
                    let member = StateVector::basis(n, rng.gen_range(0..1usize << n));
                    checker.run(&member, correctable, &mut rng)?
                }
                (None, TestSource::Noisy(noise)) => {
                    let member = sample_noisy_state(h, noise, &mut rng)?;
                    checker.run(&member, correctable, &mut rng)?
                }
                (None, TestSource::Pure(_)) => unreachable!("pure states use the sampler"),
            };
            Ok((outcome.passed, outcome.syndrome.flagged()))
        })
        .collect::<Result<_>>()?;
    let passes = outcomes.iter().filter(|o| o.0).count() as u64;
    let est = FrequencyEstimate::new(passes, trials)?;
    Ok((
        TestReport {
            class,
            trials,
            passes,
            frequency: est.estimate,
            wilson: est.interval,
            analytic,
        },
        outcomes,
    ))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ProtocolOverrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub transcripts: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProtocolReport {
    pub kind: &'static str,
    pub seed: u64,
    pub acceptance: FrequencyEstimate,
    /// Reference value for the acceptance frequency: `1/(6k+1)` for a
    /// single bad copy, the completeness bound for an honest verification
    /// run, absent otherwise.
    pub reference: Option<f64>,
    pub threshold: Option<f64>,
    pub mean_accepted_fidelity: Option<f64>,
    /// Frequency of accepting a target with fidelity below `1 − δ`.
    pub joint_bad_acceptance: FrequencyEstimate,
    /// `1 − 1/(Nυ)` for verification runs.
    pub fidelity_bound: Option<f64>,
}

/// One trial's row data: decision, counter values, target fidelity.
struct Row {
    accepted: bool,
    counters: Vec<u64>,
    extra: Option<bool>,
    fidelity: f64,
    json: Option<String>,
}

pub fn cmd_protocol(config: &Path, out_dir: &Path, overrides: ProtocolOverrides) -> Result<ProtocolReport> {
    let cfg = RunConfig::from_file(config)?;
    let base = config.parent().unwrap_or(Path::new("."));
    let mut run = cfg.resolve(base)?;
    if let Some(s) = overrides.seed {
        run.config.seed = s;
    }
    if let Some(t) = overrides.trials {
        if t == 0 {
            return Err(Error::Config("--trials must be at least 1".into()));
        }
        run.config.trials = t;
    }
    run_protocol(&run, out_dir, overrides.transcripts)
}

pub fn run_protocol(run: &ResolvedRun, out_dir: &Path, transcripts: bool) -> Result<ProtocolReport> {
    let cfg = &run.config;
    let (h, cover) = (&run.hypergraph, &run.cover);
    fs::create_dir_all(out_dir)?;
    let mut tfile = if transcripts {
        Some(BufWriter::new(fs::File::create(out_dir.join("transcripts.jsonl"))?))
    } else {
        None
    };
    let mut summary = BufWriter::new(fs::File::create(out_dir.join("summary.csv"))?);

    enum Runner {
        Case(CaseStudy),
        Verify(Verification),
    }
    let runner = match &cfg.protocol {
        ProtocolSpec::CaseStudy { k } => Runner::Case(CaseStudy::new(h, cover, *k, &cfg.prover, &cfg.correctable)?),
        ProtocolSpec::Verification { params } => {
            Runner::Verify(Verification::new(h, cover, params, &cfg.prover, &cfg.correctable)?)
        }
    };

    let header = match &runner {
        Runner::Case(_) => "trial,decision,passed_g0,passed_g1,passed_g2,bad_on_computation,target_fidelity".to_string(),
        Runner::Verify(v) => {
            let t = v.run_trial(cfg.seed, 0)?;
            let mut cols = vec!["trial".to_string(), "decision".to_string()];
            cols.extend(t.counters().map(|(g, c)| format!("K_{}_{}", c.vertex, g)));
            cols.push("target_fidelity".into());
            cols.join(",")
        }
    };
    writeln!(summary, "{header}")?;

    let mut accepted = 0u64;
    let mut bad = 0u64;
    let mut fid_sum = 0.0;
    let mut start = 0;
    while start < cfg.trials {
        let end = (start + BATCH).min(cfg.trials);
        let rows: Vec<Row> = (start..end)
            .into_par_iter()
            .map(|t| -> Result<Row> {
                match &runner {
                    Runner::Case(cs) => {
                        let tr = cs.run_trial(cfg.seed, t)?;
                        let mut counters = vec![0u64; 3];
                        for b in &tr.tests {
                            counters[b.group] += u64::from(b.outcome.passed);
                        }
                        Ok(Row {
                            accepted: tr.accepted,
                            counters,
                            extra: tr.bad_on_computation,
                            fidelity: tr.target_fidelity,
                            json: transcripts.then(|| serde_json::to_string(&tr)).transpose()?,
                        })
                    }
                    Runner::Verify(v) => {
                        let tr = v.run_trial(cfg.seed, t)?;
                        if !tr.is_consistent() {
                            return Err(Error::Invariant(format!("trial {t}: counters disagree with outcomes")));
                        }
                        Ok(Row {
                            accepted: tr.accepted,
                            counters: tr.counters().map(|(_, c)| c.passes).collect(),
                            extra: None,
                            fidelity: tr.target_fidelity,
                            json: transcripts.then(|| serde_json::to_string(&tr)).transpose()?,
                        })
                    }
                }
            })
            .collect::<Result<_>>()?;
        for (i, row) in rows.into_iter().enumerate() {
            let t = start + i as u64;
            if let (Some(f), Some(json)) = (tfile.as_mut(), &row.json) {
                writeln!(f, "{json}")?;
            }
            let mut line = format!("{t},{}", if row.accepted { "accept" } else { "reject" });
            for c in &row.counters {
                let _ = write!(line, ",{c}");
            }
            if matches!(runner, Runner::Case(_)) {
                let _ = write!(line, ",{}", row.extra.map(|b| b.to_string()).unwrap_or_default());
            }
            let _ = write!(line, ",{}", row.fidelity);
            writeln!(summary, "{line}")?;
            if row.accepted {
                accepted += 1;
                fid_sum += row.fidelity;
                if row.fidelity < 1.0 - cfg.delta {
                    bad += 1;
                }
            }
        }
        start = end;
    }
    if let Some(f) = tfile.as_mut() {
        f.flush()?;
    }
    summary.flush()?;

    let acceptance = FrequencyEstimate::new(accepted, cfg.trials)?;
    let mean_accepted_fidelity = (accepted > 0).then(|| fid_sum / accepted as f64);
    let joint_bad_acceptance = FrequencyEstimate::new(bad, cfg.trials)?;
    let report = match (&runner, &cfg.protocol) {
        (Runner::Case(cs), _) => ProtocolReport {
            kind: "case_study",
            seed: cfg.seed,
            acceptance,
            reference: match cfg.prover {
                ProverModel::SingleBadCopy { .. } => Some(1.0 / cs.registers() as f64),
                ProverModel::Honest {} => Some(1.0),
                _ => None,
            },
            threshold: None,
            mean_accepted_fidelity,
            joint_bad_acceptance,
            fidelity_bound: None,
        },
        (Runner::Verify(_), ProtocolSpec::Verification { params }) => {
            let k_min = (0..params.upsilon).map(|j| params.group_size(j)).min().unwrap_or(1);
            ProtocolReport {
                kind: "verification",
                seed: cfg.seed,
                acceptance,
                reference: match cfg.prover {
                    ProverModel::Honest {} => Some(completeness_bound(
                        params.upsilon as u64,
                        params.qubits_per_register as u64,
                        params.epsilon,
                        params.r,
                        k_min,
                    )?),
                    _ => None,
                },
                threshold: Some(params.threshold()),
                mean_accepted_fidelity,
                joint_bad_acceptance,
                fidelity_bound: Some(1.0 - 1.0 / (params.qubits_per_register * params.upsilon) as f64),
            }
        }
        (Runner::Verify(_), _) => unreachable!("runner matches protocol"),
    };
    fs::write(out_dir.join("aggregate.json"), to_json(&report)?)?;
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamRow {
    pub name: &'static str,
    pub exact: String,
    pub approx: f64,
}

pub fn cmd_params(n: u64, gamma: u64, r: u64, k: u64) -> Result<Vec<ParamRow>> {
    let p = derive_paper_params(n, gamma, r, k)?;
    Ok(p.table()
        .into_iter()
        .map(|(name, exact, approx)| ParamRow { name, exact, approx })
        .collect())
}

/// Small end-to-end checks, each independent of the others.
pub fn selftest() -> Vec<(&'static str, bool)> {
    fn check(f: impl FnOnce() -> Result<bool>) -> bool {
        f().unwrap_or(false)
    }
    vec![
        (
            "stabilizers fix the Union Jack state",
            check(|| {
                let (h, _) = union_jack(1)?;
                let s = build_state(&h)?;
                for i in 0..h.num_vertices() {
                    let g = crate::state::stabilizer_g(&s, &h, i)?;
                    if (fidelity(&g, &s)? - 1.0).abs() > 1e-10 {
                        return Ok(false);
                    }
                }
                Ok(true)
            }),
        ),
        (
            "simulator matches the dense oracle",
            check(|| {
                let h = Hypergraph::parse("4\n0 1 2\n2 3")?;
                let s = build_state(&h)?;
                let o = crate::oracle::hypergraph_state(&h)?;
                Ok(s.amplitudes().iter().zip(&o).all(|(a, b)| (a - b).norm() < 1e-12))
            }),
        ),
        (
            "corrupted state fails its class test",
            check(|| {
                let (h, cover) = union_jack(1)?;
                let spec = StateSpec::ZError { qubits: vec![cover.classes[0][0]] };
                let p = analytic_pass_probability(&spec.build(&h)?, &h, &cover, 0, &CorrectableSet::Zero)?;
                Ok(p.abs() < 1e-12)
            }),
        ),
        (
            "seed derivation is stable",
            crate::stats::derive_seed(0, 0) == 0xE220_A839_7B1D_CDAF,
        ),
        (
            "parameter arithmetic",
            check(|| {
                let p = derive_paper_params(10, 3, 10, 1)?;
                Ok(p.upsilon == 3 && p.table()[6].1 == "500000000")
            }),
        ),
    ]
}
