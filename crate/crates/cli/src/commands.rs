use std::fs::File;
use std::io::BufReader;

use gossipsim_core::harness::HarnessError;
use gossipsim_core::{
    comparison_table, default_tr, find_optimal_tr, load_edge_list, save_edge_list, sweep_tr, BaParams, ExperimentSpec,
    GraphError, Protocol, RunResult, SimConfig, SimError, Topology, Variant,
};
use serde::Serialize;

use crate::output::{self, emit, float, note};
use crate::{BaArgs, CliError, ExperimentArgs, GenerateArgs, OutputFormat, RunArgs, SweepArgs, TableArgs};

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::InvalidParams(_) | GraphError::NoNodeOfDegree(_) | GraphError::NodeOutOfRange { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Graph(g) => g.into(),
            SimError::InvalidConfig(msg) => CliError::Usage(msg),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::InvalidSpec(msg) => CliError::Usage(msg),
            HarnessError::Graph(g) => g.into(),
            HarnessError::Sim(s) => s.into(),
            HarnessError::Metrics(m) => CliError::Failed(m.to_string()),
        }
    }
}

/// Explicit `--m`/`--m0` are taken as given; the defaults shrink to fit
/// graphs smaller than the default core.
fn ba_params(n: usize, ba: &BaArgs, seed: u64) -> Result<BaParams, CliError> {
    let m = ba.m.unwrap_or(2);
    let mut params = BaParams::new(n, m, seed).with_core(ba.m0.unwrap_or(m + 1));
    if ba.m.is_none() && ba.m0.is_none() {
        params = params.fitted_to(n);
    }
    params.validate()?;
    Ok(params)
}

fn with_pool<T: Send>(jobs: Option<u64>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match jobs {
        None => Ok(f()),
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j as usize)
                .build()
                .map_err(|e| CliError::Failed(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn experiment_spec(n: usize, ba: &BaArgs, args: &ExperimentArgs) -> Result<ExperimentSpec, CliError> {
    let params = ba_params(n, ba, args.seed.seed)?;
    Ok(ExperimentSpec::new(params, args.runs as usize, args.seed.seed)
        .graph_mode(args.graph_mode.into())
        .initiator(args.initiator))
}

pub fn generate(args: GenerateArgs) -> Result<(), CliError> {
    let params = ba_params(args.n, &args.ba, args.seed.seed)?;
    let graph = gossipsim_core::generate_ba(&params)?;
    let mut body = Vec::new();
    save_edge_list(&graph, &mut body).map_err(|e| CliError::Failed(e.to_string()))?;
    let body = String::from_utf8(body).expect("edge lists are ASCII");
    emit(args.out.as_deref(), &body)?;
    note(
        args.out.as_deref(),
        &format!(
            "nodes={} edges={} max_degree={}",
            graph.node_count(),
            graph.edge_count(),
            graph.max_degree()
        ),
    );
    Ok(())
}

#[derive(Serialize)]
struct RunReport<'a> {
    protocol: Protocol,
    tr: Option<u32>,
    seed: u64,
    #[serde(flatten)]
    result: &'a RunResult,
}

pub fn run(args: RunArgs) -> Result<(), CliError> {
    let topology = match &args.graph {
        Some(path) => {
            let file =
                File::open(path).map_err(|e| CliError::Failed(format!("cannot read {}: {e}", path.display())))?;
            let graph = load_edge_list(BufReader::new(file))
                .map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
            Topology::new(graph).map_err(|e| CliError::Failed(e.to_string()))?
        }
        None => {
            let n = args.n.expect("clap requires --n without --graph");
            Topology::generate(&ba_params(n, &args.ba, args.seed.seed)?)?
        }
    };
    let n = topology.graph.node_count();
    let variant: Variant = args.protocol.with_tr(args.tr.unwrap_or_else(|| default_tr(n)));
    let cfg = SimConfig {
        variant,
        initiator: args.initiator,
        max_rounds: args.max_rounds,
        seed: args.seed.seed,
    };
    let result = topology.run(&cfg)?;

    let body = match args.out.format {
        OutputFormat::Csv => output::rounds_csv(&result.rounds),
        OutputFormat::Json => output::json(&RunReport {
            protocol: args.protocol,
            tr: variant.transition_round(),
            seed: args.seed.seed,
            result: &result,
        })?,
    };
    let out = args.out.out.as_deref();
    emit(out, &body)?;
    note(
        out,
        &format!(
            "summary protocol={} tr={} initiator={} initiator_degree={} rounds={} completed={} total_calls={} mean_round_cost={} normalized_cost={}",
            args.protocol,
            variant.transition_round().map_or("-".into(), |t| t.to_string()),
            result.initiator.map_or("-".into(), |v| v.to_string()),
            result.initiator_degree.map_or("-".into(), |d| d.to_string()),
            result.total_rounds,
            result.completed,
            result.total_calls,
            result.mean_round_cost.map_or("-".into(), float),
            result.normalized_cost.map_or("-".into(), float),
        ),
    );
    Ok(())
}

pub fn sweep(args: SweepArgs) -> Result<(), CliError> {
    if !args.protocol.has_transition() {
        return Err(CliError::Usage(format!(
            "sweep needs fptp or adaptive-fptp, not {}",
            args.protocol
        )));
    }
    let tr_max = args.tr_max.unwrap_or_else(|| 2 * default_tr(args.n));
    if args.tr_min > tr_max {
        return Err(CliError::Usage(format!(
            "--tr-min {} exceeds --tr-max {tr_max}",
            args.tr_min
        )));
    }
    let spec = experiment_spec(args.n, &args.ba, &args.experiment)?;
    let rows = with_pool(args.experiment.jobs, || {
        sweep_tr(&spec, args.protocol, args.tr_min..=tr_max)
    })??;
    let best = find_optimal_tr(&rows);

    let body = match args.out.format {
        OutputFormat::Csv => output::sweep_csv(&rows),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct SweepReport<'a> {
                n: usize,
                protocol: Protocol,
                runs: usize,
                optimal_tr: Option<u32>,
                rows: &'a [gossipsim_core::SweepRow],
            }
            output::json(&SweepReport {
                n: args.n,
                protocol: args.protocol,
                runs: spec.runs,
                optimal_tr: best,
                rows: &rows,
            })?
        }
    };
    let out = args.out.out.as_deref();
    emit(out, &body)?;
    note(
        out,
        &format!("optimal_tr={}", best.map_or("-".into(), |t| t.to_string())),
    );
    Ok(())
}

pub fn table(args: TableArgs) -> Result<(), CliError> {
    if let Some(&bad) = args.sizes.iter().find(|&&n| n < 2) {
        return Err(CliError::Usage(format!("size {bad} is below 2 nodes")));
    }
    let smallest = *args.sizes.iter().min().expect("clap requires --sizes");
    let spec = experiment_spec(smallest, &args.ba, &args.experiment)?;
    let rows = with_pool(args.experiment.jobs, || comparison_table(&spec, &args.sizes))??;
    let body = match args.out.format {
        OutputFormat::Csv => output::table_csv(&rows),
        OutputFormat::Json => output::json(&rows)?,
    };
    emit(args.out.out.as_deref(), &body)
}
