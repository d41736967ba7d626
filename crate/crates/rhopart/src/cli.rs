//! Command-line surface: sampling, exact laws, enumeration oracles,
//! deletion chains, and the statistical experiments, with reproducible
//! seeded configuration.
//!
//! Exit codes: 0 success, 1 verdict failure, 2 usage/parse error, 3 guard
//! violation. Seeds are always explicit flags; there is deliberately no
//! environment fallback.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::composition::{constrained_compositions, Composition};
use crate::counting::{count_partitions_of_shape, enumerate_partitions};
use crate::error::{Error, Result};
use crate::experiments::{
    block_count_clt, chain_record_clt, ctime_jump_clt, BlockCountClt, ChainRecordClt,
    CtimeJumpClt, Tolerances,
};
use crate::freq::FrequencyModel;
use crate::laws::{
    decrement_matrix, formation_probability_fixed_h, formation_probability_monte_carlo,
    shape_probability_fixed_h, shape_probability_monte_carlo, shape_probability_product, PMethod,
};
use crate::rho::{ConstraintSeq, RealConstraintSeq};
use crate::samplers::{deletion_kernel, deletion_step, paintbox_sample, sample_partition};
use crate::stream::RandomStream;
use crate::verify::{run_verify, VerifyConfig, VerifyLevel};

/// Fully resolved run configuration, embedded verbatim in every output
/// file. Deserialization rejects unknown keys, so configs round-trip
/// exactly.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_t_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl RunConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "rhopart",
    version,
    about = "Constrained random partitions: samplers, exact laws, experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Sample partitions and dump them (text: one canonical partition per
    /// line; csv: paintbox traces as index,value,replaced,block).
    Sample(SampleArgs),
    /// Exact laws: shape probability, formation probability, decrement
    /// matrices. JSON output.
    Exact(ExactArgs),
    /// Enumerate all constrained partitions of [n] and cross-check the
    /// closed-form shape counts.
    Enumerate(EnumerateArgs),
    /// Walk the deletion kernel from a starting composition.
    DeleteChain(DeleteChainArgs),
    /// Block-count central-limit experiment.
    Clt(CltArgs),
    /// Continuous-time jump-count experiment (real-valued rho allowed).
    Ctime(CtimeArgs),
    /// Chain-record counts on the unit cube.
    ChainRecords(ChainRecordsArgs),
    /// Run the full invariant/oracle suite and print a verdict table.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct SampleArgs {
    /// Constraint sequence, e.g. ";1" or "1,2;1".
    #[arg(long)]
    rho: String,
    /// Frequency model, e.g. "iid:uniform" or "fixed:0.5,0.25;geom=0.5".
    #[arg(long)]
    model: String,
    /// Ground-set size of each sample.
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    reps: u64,
    #[arg(long)]
    seed: u64,
    /// sequential | paintbox
    #[arg(long, default_value = "sequential")]
    method: String,
    /// text | csv (csv requires --method paintbox)
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[arg(long)]
    rho: String,
    #[arg(long)]
    model: String,
    /// Composition, e.g. "2,1".
    #[arg(long)]
    lambda: String,
    /// auto | fixed-h | product | monte-carlo
    #[arg(long, default_value = "auto")]
    method: String,
    #[arg(long, default_value_t = 100_000)]
    reps: u64,
    /// Required for monte-carlo evaluation.
    #[arg(long)]
    seed: Option<u64>,
    /// Also evaluate the formation-sequence probability of lambda.
    #[arg(long)]
    formation: bool,
    /// Emit decrement-matrix rows up to this size for each block index of
    /// lambda (beta-residual models only).
    #[arg(long)]
    decrement_n_max: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    rho: String,
    #[arg(long)]
    n: u64,
    /// Restrict the listing to one shape, e.g. "2,1".
    #[arg(long)]
    shape: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DeleteChainArgs {
    #[arg(long)]
    rho: String,
    /// Starting composition, e.g. "3,3,2".
    #[arg(long)]
    lambda: String,
    /// Number of deletion steps (default: down to the empty composition).
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    seed: u64,
    /// Include the exact transition law at every visited state.
    #[arg(long)]
    show_kernel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CltArgs {
    #[arg(long)]
    rho: String,
    #[arg(long)]
    model: String,
    /// Comma-separated ground-set sizes, e.g. "1000000".
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<u64>,
    #[arg(long, default_value_t = 10_000)]
    reps: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Tolerance overrides (JSON file; defaults match configs/tolerances.json).
    #[arg(long)]
    tolerances: Option<PathBuf>,
    /// Dump raw per-replicate block counts (columns n,replicate,blocks).
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CtimeArgs {
    /// Real-valued constraint sequence, e.g. "0.5;0.5".
    #[arg(long)]
    rho: String,
    #[arg(long)]
    model: String,
    /// Horizons given as log T, e.g. "10" for T = e^10.
    #[arg(long, value_delimiter = ',')]
    log_t_list: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    reps: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    tolerances: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChainRecordsArgs {
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<u64>,
    #[arg(long, default_value_t = 1_000)]
    reps: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    tolerances: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = ";1")]
    rho: String,
    #[arg(long, default_value = "iid:uniform")]
    model: String,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// quick | full
    #[arg(long, default_value = "quick")]
    level: String,
    #[arg(long)]
    tolerances: Option<PathBuf>,
    /// Write the JSON report here (the verdict table always goes to
    /// stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Entry point for the binary: parse std::env args, run, map errors to
/// exit codes.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_output(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(content.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn load_tolerances(path: &Option<PathBuf>) -> Result<Tolerances> {
    match path {
        Some(p) => Tolerances::from_file(p),
        None => Ok(Tolerances::default()),
    }
}

fn run(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Sample(args) => cmd_sample(args),
        Cmd::Exact(args) => cmd_exact(args),
        Cmd::Enumerate(args) => cmd_enumerate(args),
        Cmd::DeleteChain(args) => cmd_delete_chain(args),
        Cmd::Clt(args) => cmd_clt(args),
        Cmd::Ctime(args) => cmd_ctime(args),
        Cmd::ChainRecords(args) => cmd_chain_records(args),
        Cmd::Verify(args) => cmd_verify(args),
    }
}

fn cmd_sample(args: SampleArgs) -> Result<i32> {
    let rho = ConstraintSeq::parse(&args.rho)?;
    let model = FrequencyModel::parse(&args.model)?;
    if args.n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let config = RunConfig {
        command: "sample".into(),
        rho: Some(rho.to_string()),
        model: Some(model.to_string()),
        n: Some(args.n),
        reps: Some(args.reps),
        seed: Some(args.seed),
        method: Some(args.method.clone()),
        format: Some(args.format.clone()),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..RunConfig::default()
    };
    let master = RandomStream::new(args.seed);
    let mut body = String::new();
    body.push_str(&format!("# config: {}\n", config.to_json()));
    match (args.method.as_str(), args.format.as_str()) {
        ("sequential", "text") => {
            for rep in 0..args.reps {
                let mut stream = master.substream(rep);
                let p = sample_partition(&model, &rho, args.n as usize, &mut stream)?;
                body.push_str(&p.to_string());
                body.push('\n');
            }
        }
        ("paintbox", "text") => {
            for rep in 0..args.reps {
                let mut stream = master.substream(rep);
                let t = paintbox_sample(&model, &rho, args.n as usize, &mut stream)?;
                body.push_str(&t.partition.to_string());
                body.push('\n');
            }
        }
        ("paintbox", "csv") => {
            body.push_str("rep,index,value,replaced,block\n");
            for rep in 0..args.reps {
                let mut stream = master.substream(rep);
                let t = paintbox_sample(&model, &rho, args.n as usize, &mut stream)?;
                for i in 0..t.values.len() {
                    body.push_str(&format!(
                        "{},{},{},{},{}\n",
                        rep,
                        i + 1,
                        t.values[i],
                        u8::from(t.replaced[i]),
                        t.partition.block_of(i + 1)
                    ));
                }
            }
        }
        ("sequential", "csv") => {
            return Err(Error::InvalidParameter(
                "csv output is for paintbox traces; use --method paintbox".into(),
            ));
        }
        (m, f) => {
            return Err(Error::InvalidParameter(format!(
                "unknown method/format combination `{m}`/`{f}`"
            )));
        }
    }
    write_output(args.out.as_deref(), &body)?;
    Ok(0)
}

fn cmd_exact(args: ExactArgs) -> Result<i32> {
    let rho = ConstraintSeq::parse(&args.rho)?;
    let model = FrequencyModel::parse(&args.model)?;
    let lambda = Composition::parse(&args.lambda)?;
    let config = RunConfig {
        command: "exact".into(),
        rho: Some(rho.to_string()),
        model: Some(model.to_string()),
        lambda: Some(lambda.to_string()),
        method: Some(args.method.clone()),
        reps: Some(args.reps),
        seed: args.seed,
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..RunConfig::default()
    };

    let method = match args.method.as_str() {
        "auto" => {
            if model.deterministic_h_prefix(1).is_some() {
                "fixed-h"
            } else if model.has_beta_residuals() {
                "product"
            } else {
                "monte-carlo"
            }
        }
        m @ ("fixed-h" | "product" | "monte-carlo") => m,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown method `{other}` (auto | fixed-h | product | monte-carlo)"
            )))
        }
    };

    let mut diagnostics = BTreeMap::<String, serde_json::Value>::new();
    diagnostics.insert(
        "d".into(),
        count_partitions_of_shape(&lambda, &rho)?.to_string().into(),
    );
    let l = lambda.num_parts();
    let p_value = match method {
        "fixed-h" => {
            let h = model
                .deterministic_h_prefix(l)
                .ok_or_else(|| {
                    Error::InvalidModel(format!(
                        "method fixed-h needs a deterministic tail-mass model, got {model}"
                    ))
                })??;
            diagnostics.insert("h_prefix".into(), serde_json::to_value(&h)?);
            shape_probability_fixed_h(&lambda, &rho, &h)?
        }
        "product" => shape_probability_product(&lambda, &rho, &model)?,
        "monte-carlo" => {
            let seed = args.seed.ok_or_else(|| {
                Error::InvalidParameter("--seed is required for monte-carlo evaluation".into())
            })?;
            let mut stream = RandomStream::new(seed);
            let est = shape_probability_monte_carlo(
                &lambda,
                &rho,
                &model,
                args.reps,
                &mut stream,
                PMethod::ShapeFrequency,
            )?;
            diagnostics.insert("std_error".into(), est.std_error.into());
            diagnostics.insert("reps".into(), est.reps.into());
            est.value
        }
        _ => unreachable!(),
    };

    let mut result = serde_json::Map::new();
    result.insert("config".into(), serde_json::to_value(&config)?);
    result.insert("composition".into(), lambda.to_string().into());
    result.insert("rho".into(), rho.to_string().into());
    result.insert("model".into(), model.to_string().into());
    result.insert("p".into(), p_value.into());
    result.insert("method".into(), method.into());

    if args.formation {
        let q = match model.deterministic_h_prefix(l.saturating_sub(1)) {
            Some(h) => formation_probability_fixed_h(&lambda, &rho, &h?)?,
            None => {
                let seed = args.seed.ok_or_else(|| {
                    Error::InvalidParameter(
                        "--seed is required for monte-carlo formation evaluation".into(),
                    )
                })?;
                let mut stream = RandomStream::with_stream(seed, 1);
                let est = formation_probability_monte_carlo(
                    &lambda,
                    &rho,
                    &model,
                    args.reps,
                    &mut stream,
                )?;
                diagnostics.insert("q_std_error".into(), est.std_error.into());
                est.value
            }
        };
        result.insert("q".into(), q.into());
    }
    if let Some(n_max) = args.decrement_n_max {
        if !model.has_beta_residuals() {
            return Err(Error::InvalidModel(
                "decrement matrices need a beta-residual model".into(),
            ));
        }
        let mut mats = Vec::new();
        for k in 1..=l.max(1) {
            let (a, b) = model.residual_beta_at(k).expect("beta residuals");
            let m = decrement_matrix(rho.get(k), a, b, n_max)?;
            let rows: Vec<Vec<f64>> = (1..=n_max).map(|n| m.row(n).to_vec()).collect();
            mats.push(serde_json::json!({
                "block": k,
                "rho_k": rho.get(k),
                "a": a,
                "b": b,
                "rows": rows,
                "max_row_sum_deviation": m.max_row_sum_deviation(),
                "max_pascal_residual": m.max_pascal_residual(),
            }));
        }
        result.insert("decrement".into(), mats.into());
    }
    result.insert(
        "diagnostics".into(),
        serde_json::Value::Object(diagnostics.into_iter().collect()),
    );
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(result))?;
    text.push('\n');
    write_output(args.out.as_deref(), &text)?;
    Ok(0)
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<i32> {
    let rho = ConstraintSeq::parse(&args.rho)?;
    let shape_filter = args.shape.as_deref().map(Composition::parse).transpose()?;
    let config = RunConfig {
        command: "enumerate".into(),
        rho: Some(rho.to_string()),
        n: Some(args.n),
        lambda: shape_filter.as_ref().map(|s| s.to_string()),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..RunConfig::default()
    };
    let all = enumerate_partitions(args.n, &rho)?;
    let mut by_shape: BTreeMap<Composition, Vec<String>> = BTreeMap::new();
    for p in &all {
        by_shape.entry(p.shape()).or_default().push(p.to_string());
    }
    let mut shapes = Vec::new();
    let mut consistent = true;
    for shape in constrained_compositions(args.n, &rho) {
        if let Some(filter) = &shape_filter {
            if &shape != filter {
                continue;
            }
        }
        let listed = by_shape.get(&shape).cloned().unwrap_or_default();
        let formula = count_partitions_of_shape(&shape, &rho)?;
        consistent &= formula == listed.len() as u128;
        shapes.push(serde_json::json!({
            "shape": shape.to_string(),
            "count_formula": formula.to_string(),
            "count_enumerated": listed.len(),
            "partitions": listed,
        }));
    }
    let output = serde_json::json!({
        "config": config,
        "total_partitions": all.len(),
        "shapes": shapes,
        "counts_consistent": consistent,
    });
    let mut text = serde_json::to_string_pretty(&output)?;
    text.push('\n');
    write_output(args.out.as_deref(), &text)?;
    Ok(if consistent { 0 } else { 1 })
}

fn cmd_delete_chain(args: DeleteChainArgs) -> Result<i32> {
    let rho = ConstraintSeq::parse(&args.rho)?;
    let start = Composition::parse(&args.lambda)?;
    start.check_constrained(&rho)?;
    let config = RunConfig {
        command: "delete-chain".into(),
        rho: Some(rho.to_string()),
        lambda: Some(start.to_string()),
        steps: args.steps,
        seed: Some(args.seed),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..RunConfig::default()
    };
    let steps = args.steps.unwrap_or(start.total());
    let mut stream = RandomStream::new(args.seed);
    let mut states = vec![start.to_string()];
    let mut kernels = Vec::new();
    let mut current = start;
    for _ in 0..steps {
        if current.is_empty() {
            break;
        }
        if args.show_kernel {
            let kernel = deletion_kernel(&current, &rho)?;
            kernels.push(serde_json::json!({
                "from": current.to_string(),
                "transitions": kernel
                    .iter()
                    .map(|(to, p)| serde_json::json!({"to": to.to_string(), "prob": p}))
                    .collect::<Vec<_>>(),
            }));
        }
        current = deletion_step(&current, &rho, &mut stream)?;
        states.push(current.to_string());
    }
    let mut output = serde_json::json!({
        "config": config,
        "states": states,
    });
    if args.show_kernel {
        output["kernels"] = kernels.into();
    }
    let mut text = serde_json::to_string_pretty(&output)?;
    text.push('\n');
    write_output(args.out.as_deref(), &text)?;
    Ok(0)
}

fn report_output(
    out: Option<&Path>,
    config: &RunConfig,
    report: &crate::experiments::ExperimentReport,
) -> Result<i32> {
    let mut value = serde_json::to_value(report)?;
    value["config_resolved"] = serde_json::to_value(config)?;
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    write_output(out, &text)?;
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_clt(args: CltArgs) -> Result<i32> {
    let rho = ConstraintSeq::parse(&args.rho)?;
    let model = FrequencyModel::parse(&args.model)?;
    let tolerances = load_tolerances(&args.tolerances)?;
    let config = RunConfig {
        command: "clt".into(),
        rho: Some(rho.to_string()),
        model: Some(model.to_string()),
        n_list: Some(args.n_list.clone()),
        reps: Some(args.reps),
        seed: Some(args.seed),
        threads: Some(args.threads),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..RunConfig::default()
    };
    let outcome = block_count_clt(&BlockCountClt {
        model,
        rho,
        n_list: args.n_list,
        reps: args.reps,
        seed: args.seed,
        threads: args.threads,
        tolerances,
    })?;
    if let Some(csv_path) = &args.csv {
        let mut csv = format!("# config: {}\n", config.to_json());
        csv.push_str("n,replicate,blocks\n");
        for (n, counts) in &outcome.raw {
            for (i, k) in counts.iter().enumerate() {
                csv.push_str(&format!("{n},{i},{k}\n"));
            }
        }
        write_output(Some(csv_path), &csv)?;
    }
    report_output(args.out.as_deref(), &config, &outcome.report)
}

fn cmd_ctime(args: CtimeArgs) -> Result<i32> {
    let rho = RealConstraintSeq::parse(&args.rho)?;
    let model = FrequencyModel::parse(&args.model)?;
    let tolerances = load_tolerances(&args.tolerances)?;
    let config = RunConfig {
        command: "ctime".into(),
        rho: Some(rho.to_string()),
        model: Some(model.to_string()),
        log_t_list: Some(args.log_t_list.clone()),
        reps: Some(args.reps),
        seed: Some(args.seed),
        threads: Some(args.threads),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..RunConfig::default()
    };
    let report = ctime_jump_clt(&CtimeJumpClt {
        model,
        rho,
        horizons: args.log_t_list.iter().map(|&x| x.exp()).collect(),
        reps: args.reps,
        seed: args.seed,
        threads: args.threads,
        tolerances,
    })?;
    report_output(args.out.as_deref(), &config, &report)
}

fn cmd_chain_records(args: ChainRecordsArgs) -> Result<i32> {
    let tolerances = load_tolerances(&args.tolerances)?;
    let config = RunConfig {
        command: "chain-records".into(),
        dimension: Some(args.d),
        n_list: Some(args.n_list.clone()),
        reps: Some(args.reps),
        seed: Some(args.seed),
        threads: Some(args.threads),
        out: args.out.as_ref().map(|p| p.display().to_string()),
        ..RunConfig::default()
    };
    let report = chain_record_clt(&ChainRecordClt {
        dimension: args.d,
        n_list: args.n_list,
        reps: args.reps,
        seed: args.seed,
        threads: args.threads,
        tolerances,
    })?;
    report_output(args.out.as_deref(), &config, &report)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let level = match args.level.as_str() {
        "quick" => VerifyLevel::Quick,
        "full" => VerifyLevel::Full,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown level `{other}` (quick | full)"
            )))
        }
    };
    let cfg = VerifyConfig {
        rho: ConstraintSeq::parse(&args.rho)?,
        model: FrequencyModel::parse(&args.model)?,
        seed: args.seed,
        threads: args.threads,
        level,
        tolerances: load_tolerances(&args.tolerances)?,
    };
    let report = run_verify(&cfg)?;
    print!("{}", report.table());
    if let Some(out) = &args.out {
        let mut text = report.to_json_pretty();
        text.push('\n');
        write_output(Some(out), &text)?;
    }
    Ok(if report.pass { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_round_trips_and_rejects_unknown_keys() {
        let config = RunConfig {
            command: "clt".into(),
            rho: Some(";1".into()),
            model: Some("iid:uniform".into()),
            n_list: Some(vec![1000]),
            reps: Some(10),
            seed: Some(42),
            threads: Some(2),
            ..RunConfig::default()
        };
        let json = config.to_json();
        assert_eq!(RunConfig::from_json(&json).unwrap(), config);
        let with_unknown = json.replace("\"command\"", "\"mystery\":1,\"command\"");
        assert!(RunConfig::from_json(&with_unknown).is_err());
    }
}
