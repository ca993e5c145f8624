use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use super::manifest::{manifest_path, RunManifest};
use super::{
    AugmentArgs, AugmentMethod, Cli, Command, EdgeArg, EvalArgs, GenKind, PositivityArg,
    ReturnKindArg, StylizeArgs, SwitchingArArgs, WindowArgs,
};
use crate::datagen::io::{self, Column};
use crate::datagen::{
    augment_flip, augment_jitter, augment_time_warp, gen_switching_ar1,
    generate_stylized_dataset, generate_stylized_dataset_lenient, sliding_windows,
    train_test_split, ContentStrategy, GenerationConfig, ShockConfig, SwitchingArConfig,
    WindowDataset,
};
use crate::error::{Error, Result};
use crate::features::{EdgePolicy, FeatureConfig, PositivityPolicy, TrendConfig};
use crate::losses::LossWeights;
use crate::metrics::{evaluate, EvalConfig, PrMetricConfig};
use crate::optimizer::OptimizerConfig;
use crate::series::ReturnKind;
use crate::{par, rng};

pub(super) fn dispatch(command: Command, quiet: bool) -> Result<()> {
    let summary = match command {
        Command::Gen(GenKind::SwitchingAr1(args)) => gen_switching(&args)?,
        Command::Window(args) => window(&args)?,
        Command::Stylize(args) => stylize(&args)?,
        Command::Augment(args) => augment(&args)?,
        Command::Eval(args) => eval(&args)?,
        Command::Replay { manifest } => return replay(&manifest, quiet),
    };
    if !quiet {
        println!("{summary}");
    }
    Ok(())
}

fn replay(path: &Path, quiet: bool) -> Result<()> {
    let manifest = RunManifest::read(path)?;
    let args = std::iter::once("tsstyle".to_string()).chain(manifest.to_args());
    let cli = Cli::try_parse_from(args)
        .map_err(|e| Error::InvalidConfig(format!("manifest {}: {}", path.display(), e.kind())))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(Error::InvalidConfig("a manifest cannot replay another manifest".into()));
    }
    dispatch(cli.command, quiet || cli.quiet)
}

fn value_name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn gen_switching(args: &SwitchingArArgs) -> Result<String> {
    let cfg = SwitchingArConfig {
        a10: args.a10,
        a11: args.a11,
        a20: args.a20,
        a21: args.a21,
        horizon: args.t,
        switch_fraction: args.switch_fraction,
        noise_std: args.noise_std,
        seed: args.seed,
        initial: None,
    };
    let series = gen_switching_ar1(&cfg)?;
    io::write_series_csv(&args.out, &series)?;

    let mut m = RunManifest::new("gen switching-ar1");
    m.set("t", args.t)
        .set("a10", args.a10)
        .set("a11", args.a11)
        .set("a20", args.a20)
        .set("a21", args.a21)
        .set("switch-fraction", args.switch_fraction)
        .set("noise-std", args.noise_std)
        .set("seed", args.seed)
        .set("out", args.out.display());
    m.write(&manifest_path(&args.out))?;
    Ok(format!(
        "wrote {} values to {} (switch at t={})",
        series.len(),
        args.out.display(),
        cfg.switch_time()
    ))
}

fn window(args: &WindowArgs) -> Result<String> {
    let column: Column = args.column.parse().expect("infallible");
    let series = io::ingest_csv(&args.input, &column)?;
    let windows = sliding_windows(&series, args.w).map_err(|e| match e {
        Error::SeriesTooShort { .. } => Error::InvalidConfig(format!("{e} for window size {}", args.w)),
        e => e,
    })?;
    let (train, test) = train_test_split(&windows, args.train)?;
    let train_path = PathBuf::from(format!("{}.train.csv", args.out_prefix));
    let test_path = PathBuf::from(format!("{}.test.csv", args.out_prefix));
    io::write_windows(&train_path, &train)?;
    io::write_windows(&test_path, &test)?;

    let mut m = RunManifest::new("window");
    m.set("in", args.input.display())
        .set("column", &args.column)
        .set("w", args.w)
        .set("train", args.train)
        .set("out-prefix", &args.out_prefix);
    m.write(&PathBuf::from(format!("{}.manifest", args.out_prefix)))?;
    Ok(format!(
        "wrote {} train and {} test windows of length {} to {}.{{train,test}}.csv",
        train.len(),
        test.len(),
        args.w + 1,
        args.out_prefix
    ))
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => a == b,
    }
}

fn stylize(args: &StylizeArgs) -> Result<String> {
    if args.n == 0 {
        return Err(Error::InvalidConfig("--n must be positive".into()));
    }
    let weights = LossWeights::new(args.alpha, args.beta, args.gamma)?;
    let optimizer = OptimizerConfig {
        iterations: args.iterations,
        base_lr: args.base_lr,
        rms_decay: args.rms_decay,
        rms_epsilon: args.rms_epsilon,
        return_best: args.return_best,
    };
    optimizer.validate()?;
    let features = FeatureConfig {
        tau_max: args.tau_max,
        return_kind: match args.return_kind {
            ReturnKindArg::Log => ReturnKind::Log,
            ReturnKindArg::Simple => ReturnKind::Simple,
        },
        positivity_policy: match args.positivity_policy {
            PositivityArg::Error => PositivityPolicy::Error,
            PositivityArg::AffineRescale => PositivityPolicy::AffineRescale,
        },
    };
    let trend = TrendConfig {
        window: args.trend_window,
        edge_policy: match args.edge_policy {
            EdgeArg::Shrink => EdgePolicy::Shrink,
            EdgeArg::Reflect => EdgePolicy::Reflect,
        },
    };

    let style = io::read_windows(&args.style)?;
    let len = style.window_len().ok_or(Error::EmptyDataset)?;
    features.check_for_len(len)?;
    if trend.window == 0 || trend.window.is_multiple_of(2) || trend.window > len {
        return Err(Error::WindowTooLarge { window: trend.window, len });
    }

    let mut m = RunManifest::new("stylize");
    let content = if args.perturb {
        let base = io::read_windows(&args.content)?;
        let defaults = ShockConfig::default_for(&base, rng::derive_seed(args.seed, u64::MAX))?;
        let shock = ShockConfig {
            amplitude: args.shock_amp.map_or(defaults.amplitude, |s| (s.0, s.1)),
            shift: args.shock_shift.map_or(defaults.shift, |s| (s.0, s.1)),
            seed: defaults.seed,
        };
        m.set("shock-amp", format!("{}:{}", shock.amplitude.0, shock.amplitude.1))
            .set("shock-shift", format!("{}:{}", shock.shift.0, shock.shift.1));
        base.check_compatible(&style)?;
        ContentStrategy::Perturbed(shock).resolve(&base)?
    } else if same_file(&args.content, &args.style) {
        ContentStrategy::InSample.resolve(&style)?
    } else {
        ContentStrategy::External(args.content.clone()).resolve(&style)?
    };

    let cfg = GenerationConfig {
        n: args.n,
        weights,
        optimizer,
        features,
        trend,
        seed: args.seed,
    };
    let (out, failed) = par::with_jobs(args.jobs, || {
        if args.skip_errors {
            generate_stylized_dataset_lenient(&content, &style, &cfg)
        } else {
            generate_stylized_dataset(&content, &style, &cfg).map(|ds| (ds, Vec::new()))
        }
    })?;
    for e in &failed {
        eprintln!("warning: {e}");
    }
    io::write_windows(&args.out, &out)?;

    m.set("content", args.content.display())
        .set("style", args.style.display())
        .set("n", args.n)
        .set("alpha", args.alpha)
        .set("beta", args.beta)
        .set("gamma", args.gamma)
        .set("iterations", args.iterations)
        .set("base-lr", args.base_lr)
        .set("rms-decay", args.rms_decay)
        .set("rms-epsilon", args.rms_epsilon)
        .set("return-best", args.return_best)
        .set("tau-max", args.tau_max)
        .set("return-kind", value_name(&args.return_kind))
        .set("positivity-policy", value_name(&args.positivity_policy))
        .set("trend-window", args.trend_window)
        .set("edge-policy", value_name(&args.edge_policy))
        .set("perturb", args.perturb)
        .set("skip-errors", args.skip_errors)
        .set("seed", args.seed)
        .set("out", args.out.display());
    m.write(&manifest_path(&args.out))?;
    Ok(format!(
        "wrote {} stylized windows to {} ({} failed)",
        out.len(),
        args.out.display(),
        failed.len()
    ))
}

fn augment(args: &AugmentArgs) -> Result<String> {
    let input = io::read_windows(&args.input)?;
    let windows = par::try_map_range(input.len(), |i| {
        let w = &input.windows()[i];
        let mut r = rng::from_seed(rng::derive_seed(args.seed, i as u64));
        match args.method {
            AugmentMethod::Jitter => augment_jitter(w, args.sigma, &mut r),
            AugmentMethod::Flip => Ok(augment_flip(w)),
            AugmentMethod::Timewarp => augment_time_warp(w, args.knots, args.warp_std, &mut r),
        }
    })?;
    let out = WindowDataset::new(windows, input.meta().to_vec())?;
    io::write_windows(&args.out, &out)?;

    let mut m = RunManifest::new("augment");
    m.set("in", args.input.display())
        .set("method", value_name(&args.method))
        .set("sigma", args.sigma)
        .set("knots", args.knots)
        .set("warp-std", args.warp_std)
        .set("seed", args.seed)
        .set("out", args.out.display());
    m.write(&manifest_path(&args.out))?;
    Ok(format!(
        "wrote {} {}-augmented windows to {}",
        out.len(),
        value_name(&args.method),
        args.out.display()
    ))
}

fn eval(args: &EvalArgs) -> Result<String> {
    let real_train = io::read_windows(&args.real_train)?;
    let real_test = io::read_windows(&args.real_test)?;
    let synth = io::read_windows(&args.synth)?;
    let cfg = EvalConfig {
        pr: PrMetricConfig { k: args.k },
        ridge: args.ridge,
        augment_level: args.augment_level,
    };
    let report = par::with_jobs(args.jobs, || evaluate(&real_train, &real_test, &synth, &cfg))?;

    let summary = report
        .fields()
        .iter()
        .map(|(k, v)| format!("{k}={v:.4}"))
        .collect::<Vec<_>>()
        .join(" ");
    match &args.out {
        Some(path) => {
            let json = matches!(
                path.extension().and_then(|e| e.to_str()),
                Some("json") | Some("jsonl")
            );
            let body = if json {
                format!("{}\n", report.to_json_line())
            } else {
                report.to_csv()
            };
            fs::write(path, body)?;
            let mut m = RunManifest::new("eval");
            m.set("real-train", args.real_train.display())
                .set("real-test", args.real_test.display())
                .set("synth", args.synth.display())
                .set("k", args.k)
                .set("ridge", args.ridge)
                .set_opt("augment-level", args.augment_level)
                .set("out", path.display());
            m.write(&manifest_path(path))?;
        }
        None => println!("{}", report.to_json_line()),
    }
    Ok(summary)
}
