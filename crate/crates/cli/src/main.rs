//! `latentlab` command-line tool.
//!
//! Exit codes: 0 success, 2 usage or invalid input, 3 computation failure,
//! 4 environment (I/O, port binding). Failures print one JSON object on
//! stderr: `{"error": {"kind", "message", "exit_code"}}`.

mod args;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use args::{Cli, Command, DataArgs, FitArgs, FitFormat, GenerateArgs, ServeArgs, SplitArgs, StabilityArgs,
    StabilityFormat, StandinsArgs};
use clap::Parser;
use latentlab_core::datagen::example_dataset;
use latentlab_core::datasets::{
    builtin_standin, builtin_standins, load_csv, save_csv, sidecar_path, to_csv_string, Dataset, DatasetMetadata,
    SplitSpec, STANDIN_NAMES,
};
use latentlab_core::evaluation::{coefficient_stability, run_experiment, ExperimentConfig};
use latentlab_core::preprocessing::apply_noise;
use latentlab_core::{Error, Execution};
use latentlab_service::ServiceConfig;

#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            kind: "usage",
            message: message.into(),
        }
    }

    fn environment(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            kind: "environment",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let message = err.to_string();
        let (code, kind) = match err {
            e if e.is_computational() => (3, "computation"),
            Error::Leakage => (3, "computation"),
            Error::Io(_) => (4, "environment"),
            _ => (2, "invalid_input"),
        };
        Failure { code, kind, message }
    }
}

type CmdResult = Result<(), Failure>;

fn emit(out: Option<&Path>, content: &str) -> CmdResult {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::environment(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::environment(e.to_string()))
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> CmdResult {
    let cfg = args.example.config(args.seed, args.noise.spec());
    if let Some(e) = cfg.field_errors().first() {
        return Err(Failure::usage(format!("--{}: {}", e.field.replace('_', "-"), e.message)));
    }
    let ds = example_dataset(&cfg)?;
    match &args.out {
        Some(path) => save_csv(&ds, path).map_err(|e| Failure::environment(e.to_string())),
        None => emit(None, &to_csv_string(&ds)),
    }
}

fn load_data(args: &DataArgs) -> Result<Dataset, Failure> {
    let ds = if let Some(path) = &args.source.data {
        if !path.is_file() {
            return Err(Failure::usage(format!("dataset file not found: {}", path.display())));
        }
        let explicit = (args.feature_unit.is_some() || args.target_transform.is_some()).then(|| {
            let base = if sidecar_path(path).is_file() {
                std::fs::read_to_string(sidecar_path(path))
                    .ok()
                    .and_then(|s| serde_json::from_str::<DatasetMetadata>(&s).ok())
                    .unwrap_or_default()
            } else {
                DatasetMetadata::default()
            };
            DatasetMetadata {
                feature_unit: args.feature_unit.map(Into::into).unwrap_or(base.feature_unit),
                target_transform: args.target_transform.map(Into::into).unwrap_or(base.target_transform),
                ..base
            }
        });
        load_csv(path, explicit.as_ref())?
    } else if let Some(name) = &args.source.builtin {
        builtin_standin(name).ok_or_else(|| {
            Failure::usage(format!("unknown builtin `{name}` (available: {})", STANDIN_NAMES.join(", ")))
        })?
    } else {
        let cfg = args.example.config(args.example_seed, None);
        if let Some(e) = cfg.field_errors().first() {
            return Err(Failure::usage(format!("--{}: {}", e.field.replace('_', "-"), e.message)));
        }
        example_dataset(&cfg)?
    };
    match args.noise.spec() {
        Some(noise) => {
            let (x, y) = apply_noise(ds.x(), ds.y(), &noise)?;
            Ok(ds.with_data(x, y)?)
        }
        None => Ok(ds),
    }
}

fn split_spec(args: &SplitArgs) -> Result<SplitSpec, Failure> {
    let spec = match &args.forced_groups {
        Some(groups) => SplitSpec {
            mode: args.mode.into(),
            ..SplitSpec::forced(groups.clone(), args.seed)
        },
        None => SplitSpec::new(args.mode.into(), args.seed),
    }
    .with_train_fraction(args.train_fraction);
    spec.validate()?;
    Ok(spec)
}

fn cmd_fit(args: FitArgs) -> CmdResult {
    let ds = load_data(&args.data)?;
    let spec = split_spec(&args.split)?;
    let cfg = ExperimentConfig::new(args.model.method.into(), args.model.hyperparameters(), args.model.standardize);
    cfg.hyperparameters.validate_for(cfg.method)?;
    let report = run_experiment(&ds, &spec, &cfg)?;
    let text = match args.format {
        FitFormat::Json => report.to_json() + "\n",
        FitFormat::PredictionsCsv => report.predictions_csv(),
        FitFormat::CoefficientsCsv => report.coefficients_csv(),
    };
    emit(args.out.as_deref(), &text)
}

fn cmd_stability(args: StabilityArgs) -> CmdResult {
    if args.repeats < 2 {
        return Err(Failure::usage(format!("--repeats must be at least 2, got {}", args.repeats)));
    }
    let ds = load_data(&args.data)?;
    let spec = split_spec(&args.split)?;
    let cfg = ExperimentConfig::new(args.model.method.into(), args.model.hyperparameters(), args.model.standardize);
    cfg.hyperparameters.validate_for(cfg.method)?;
    let execution = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let report = coefficient_stability(&ds, &spec, &cfg, args.repeats, execution)?;
    let text = match args.format {
        StabilityFormat::Csv => report.to_csv(args.layout.into()),
        StabilityFormat::SpreadCsv => report.spread_csv(),
        StabilityFormat::Json => report.to_json() + "\n",
    };
    emit(args.out.as_deref(), &text)
}

fn cmd_serve(args: ServeArgs) -> CmdResult {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .try_init();
    let config = ServiceConfig {
        bind: args.bind,
        port: args.port,
        upload_limit: args.upload_limit,
        handle_ttl: Duration::from_secs(args.handle_ttl),
        cors_origin: args.cors_origin,
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::environment(e.to_string()))?;
    runtime.block_on(async {
        let listener = latentlab_service::bind(&config)
            .await
            .map_err(|e| Failure::environment(format!("cannot bind {}:{}: {e}", config.bind, config.port)))?;
        let addr = listener.local_addr().map_err(|e| Failure::environment(e.to_string()))?;
        println!("listening on http://{addr}");
        let _ = std::io::stdout().flush();
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        latentlab_service::serve(listener, &config, shutdown)
            .await
            .map_err(|e| Failure::environment(e.to_string()))
    })
}

fn cmd_standins(args: StandinsArgs) -> CmdResult {
    let sets = builtin_standins();
    match &args.export {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Failure::environment(e.to_string()))?;
            for ds in &sets {
                save_csv(ds, dir.join(format!("{}.csv", ds.name()))).map_err(|e| Failure::environment(e.to_string()))?;
            }
            Ok(())
        }
        None => {
            let list: Vec<_> = sets.iter().map(|d| d.descriptor()).collect();
            emit(None, &(serde_json::to_string_pretty(&list).expect("descriptors serialize") + "\n"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Stability(a) => cmd_stability(a),
        Command::Serve(a) => cmd_serve(a),
        Command::Standins(a) => cmd_standins(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let body = serde_json::json!({
                "error": {"kind": f.kind, "message": f.message, "exit_code": f.code}
            });
            eprintln!("{body}");
            ExitCode::from(f.code)
        }
    }
}
