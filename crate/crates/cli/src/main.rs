use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use growthlab::census::check_group_bounds;
use growthlab_cli::config::{Budgets, GeneratorConfig, GroupConfig, VarietyConfig, VarietyKind};
use growthlab_cli::runner::Context;
use growthlab_cli::{list_presets, run, Experiment, ExperimentConfig, EXIT_CONFIG};

#[derive(Parser)]
#[command(name = "growthlab", version, about = "Growth, escape and point-count experiments in finite classical groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// SL, Sp, SO_odd, SO_even_plus or SU_twisted
    #[arg(long, default_value = "SL")]
    group: String,
    #[arg(long, default_value_t = 1)]
    rank: u32,
    #[arg(long, default_value_t = 5)]
    q: u64,
    /// usual or block
    #[arg(long, default_value = "usual")]
    embedding: String,
    /// standard, symmetric or whole
    #[arg(long, default_value = "standard")]
    generators: String,
    #[arg(long)]
    radius: Option<u32>,
    /// Largest group order that may be enumerated.
    #[arg(long, default_value_t = 2_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for JSON/CSV reports; stdout only when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Varieties to track: torus, nonregular, group.
    #[arg(long = "variety", value_delimiter = ',')]
    varieties: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Group summary and order bounds.
    Info(GroupArgs),
    /// Exhaustive point counts against D*q^d.
    Census(GroupArgs),
    /// Escape lengths on sampled (V, x) instances.
    Escape {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, default_value_t = 100)]
        instances: usize,
    },
    /// Ball sizes |A^m| and tracked intersections.
    Growth {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long)]
        certificate_m: Option<u32>,
    },
    Diameter(GroupArgs),
    /// Exponents ln|A^m ∩ V| / ln|A^m|.
    Concentration(GroupArgs),
    /// A^3 = G for a set above 3q^(δ-r/3).
    NpCheck(GroupArgs),
    /// Torus conjugates and involved tori.
    Tori {
        #[command(flatten)]
        g: GroupArgs,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        k: Vec<u32>,
        #[arg(long, default_value_t = 1)]
        m: u32,
    },
    /// Recurrences for C1 and the main inequality on a measured profile.
    Ledger(GroupArgs),
    /// Run every experiment of a TOML config.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a config and list every violated invariant.
    Validate { config: PathBuf },
    /// Built-in families, generator presets, varieties and experiments.
    Presets,
}

fn single(g: &GroupArgs, experiment: Experiment) -> ExperimentConfig {
    let varieties = g
        .varieties
        .iter()
        .map(|name| {
            let kind = match name.as_str() {
                "torus" => VarietyKind::Torus,
                "nonregular" => VarietyKind::Nonregular,
                _ => VarietyKind::Group,
            };
            VarietyConfig { name: name.clone(), kind }
        })
        .collect();
    ExperimentConfig {
        group: GroupConfig { family: g.group.clone(), rank: g.rank, q: g.q, embedding: g.embedding.clone() },
        generators: GeneratorConfig { preset: g.generators.clone(), matrices: Vec::new() },
        budgets: Budgets { max_order: g.budget, threads: g.threads, ..Budgets::default() },
        seed: g.seed,
        output: g.out.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
        varieties,
        experiments: vec![experiment],
    }
}

fn execute(config: ExperimentConfig, text: &str, out: Option<PathBuf>) -> ExitCode {
    let diags = config.validate();
    if !diags.is_empty() {
        for d in &diags {
            eprintln!("{d}");
        }
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    match run(&config, text, out.as_deref()) {
        Ok((manifest, outputs)) => {
            for o in &outputs {
                println!("{}", serde_json::to_string_pretty(&o.report).unwrap());
            }
            if outputs.is_empty() {
                println!("{}", serde_json::to_string_pretty(&manifest).unwrap());
            }
            ExitCode::from(manifest.exit_code as u8)
        }
        Err(e) => {
            eprintln!("cannot write reports: {e}");
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}

fn oneshot(g: GroupArgs, e: Experiment) -> ExitCode {
    let config = single(&g, e);
    let text = toml::to_string(&config).expect("config serializes");
    execute(config, &text, g.out)
}

fn default_varieties(mut g: GroupArgs, names: &[&str]) -> GroupArgs {
    if g.varieties.is_empty() {
        g.varieties = names.iter().map(|s| s.to_string()).collect();
    }
    g
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Info(g) => {
            let config = single(&g, Experiment::Diameter);
            let diags = config.validate();
            if !diags.is_empty() {
                diags.iter().for_each(|d| eprintln!("{d}"));
                return ExitCode::from(EXIT_CONFIG as u8);
            }
            let ctx = match Context::new(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(EXIT_CONFIG as u8);
                }
            };
            let info = serde_json::json!({
                "summary": ctx.spec.summary(),
                "generators": ctx.gens.len(),
                "order_bounds": check_group_bounds(&ctx.spec),
            });
            println!("{}", serde_json::to_string_pretty(&info).unwrap());
            ExitCode::SUCCESS
        }
        Command::Census(g) => {
            let g = default_varieties(g, &["torus", "nonregular"]);
            let v = g.varieties.clone();
            oneshot(g, Experiment::Census { varieties: v })
        }
        Command::Escape { g, instances } => {
            let v = g.varieties.clone();
            oneshot(g, Experiment::Escape { varieties: v, instances })
        }
        Command::Growth { g, certificate_m } => {
            let (v, radius) = (g.varieties.clone(), g.radius);
            oneshot(g, Experiment::Growth { varieties: v, radius, certificate_m })
        }
        Command::Diameter(g) => oneshot(g, Experiment::Diameter),
        Command::Concentration(g) => {
            let g = default_varieties(g, &["torus"]);
            let (variety, radius) = (g.varieties[0].clone(), g.radius);
            oneshot(g, Experiment::Concentration { variety, radius })
        }
        Command::NpCheck(g) => oneshot(g, Experiment::NpCheck),
        Command::Tori { g, k, m } => oneshot(g, Experiment::InvolvedTori { k, m, fibre_samples: 3 }),
        Command::Ledger(g) => {
            let v = g.varieties.clone();
            oneshot(g, Experiment::Ledger { varieties: v })
        }
        Command::Run { config, out, threads } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("{}: {e}", config.display());
                    return ExitCode::from(EXIT_CONFIG as u8);
                }
            };
            let mut cfg = match ExperimentConfig::from_toml(&text) {
                Ok(c) => c,
                Err(d) => {
                    eprintln!("{d}");
                    return ExitCode::from(EXIT_CONFIG as u8);
                }
            };
            if let Some(t) = threads {
                cfg.budgets.threads = t;
            }
            let dir = out.unwrap_or_else(|| config.parent().unwrap_or(std::path::Path::new(".")).join(&cfg.output));
            execute(cfg, &text, Some(dir))
        }
        Command::Validate { config } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("{}: {e}", config.display());
                    return ExitCode::from(EXIT_CONFIG as u8);
                }
            };
            let diags = match ExperimentConfig::from_toml(&text) {
                Ok(c) => c.validate(),
                Err(d) => vec![d],
            };
            if diags.is_empty() {
                println!("ok");
                ExitCode::SUCCESS
            } else {
                diags.iter().for_each(|d| println!("{d}"));
                ExitCode::from(EXIT_CONFIG as u8)
            }
        }
        Command::Presets => {
            println!("{}", serde_json::to_string_pretty(&list_presets()).unwrap());
            ExitCode::SUCCESS
        }
    }
}
