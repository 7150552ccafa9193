//! Executes the experiments of a config and persists one JSON report and one
//! CSV table per experiment, plus a manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use growthlab::census::{check_group_bounds, check_point_upper, torus_conjugate_census, CensusReport, Scope};
use growthlab::enumerate::{enumerate_group, EnumMethod, Limits};
use growthlab::escape::{escape, random_element, sample_instances};
use growthlab::growth::{
    ball_sizes, concentration_profile, diameter, growth_certificate, involved_tori_experiment, np_candidate_set, np_check,
};
use growthlab::ledger::{c1, c2, main_inequality_report, verify_recurrences, DEFAULT_D_GRID};
use growthlab::varieties::VarietySpec;
use growthlab::{Error, GenSet, GroupSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{Experiment, ExperimentConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// A checked bound failed.
    Fail,
    /// A budget ran out; the report holds whatever was computed.
    Truncated,
    /// Bad input discovered while running (e.g. generators not generating).
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentOutput {
    pub experiment: String,
    pub status: Status,
    pub report: Value,
    #[serde(skip)]
    pub csv: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ManifestEntry {
    pub experiment: String,
    pub status: Status,
    pub json: String,
    pub csv: String,
    pub runtime_ms: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub config_sha256: String,
    pub seed: u64,
    pub group: String,
    pub generators: String,
    pub versions: Value,
    pub threads: usize,
    pub entries: Vec<ManifestEntry>,
    pub exit_code: i32,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub fn config_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().fold(String::new(), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

/// Exit code for a set of statuses: a failed bound outranks an exhausted
/// budget, which outranks a runtime input error.
pub fn exit_code(statuses: impl IntoIterator<Item = Status>) -> i32 {
    let mut code = EXIT_PASS;
    for s in statuses {
        let c = match s {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
            Status::Truncated => EXIT_BUDGET,
            Status::Error => EXIT_CONFIG,
        };
        let rank = |c: i32| match c {
            EXIT_FAIL => 3,
            EXIT_BUDGET => 2,
            EXIT_CONFIG => 1,
            _ => 0,
        };
        if rank(c) > rank(code) {
            code = c;
        }
    }
    code
}

pub struct Context<'a> {
    pub config: &'a ExperimentConfig,
    pub spec: GroupSpec,
    pub gens: GenSet,
    pub limits: Limits,
}

impl<'a> Context<'a> {
    pub fn new(config: &'a ExperimentConfig) -> Result<Context<'a>, Error> {
        let spec = config.spec()?;
        let gens = config.generators(&spec)?;
        let b = &config.budgets;
        let limits = Limits::elements(b.max_order as usize).threads(b.threads);
        Ok(Context { config, spec, gens, limits })
    }

    fn variety(&self, name: &str) -> Result<VarietySpec, Error> {
        self.config.variety(&self.spec, name)
    }

    fn group_points(&self) -> Result<Vec<growthlab::Matrix>, Error> {
        enumerate_group(&self.spec, EnumMethod::BfsClosure, self.config.budgets.max_order as usize)
    }

    fn radius(&self, r: Option<u32>) -> u32 {
        r.unwrap_or(self.config.budgets.max_radius).min(self.config.budgets.max_radius)
    }
}

fn header(ctx: &Context, name: &str, status: Status) -> Value {
    json!({
        "experiment": name,
        "group": ctx.spec.label(),
        "generators": ctx.gens.label,
        "generator_count": ctx.gens.len(),
        "seed": ctx.config.seed,
        "status": status,
    })
}

fn census_csv(rows: &[CensusReport]) -> String {
    let mut out = String::from("target,check,formula,count,bound,satisfied,method\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{:?}",
            csv(&r.target),
            csv(&r.check),
            csv(&r.formula),
            csv(&r.count),
            csv(&r.bound),
            r.satisfied,
            r.method
        )
        .unwrap();
    }
    out
}

fn csv(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

type Body = (Value, String, bool);

fn run_census(ctx: &Context, varieties: &[String]) -> Result<Body, Error> {
    let mut rows = vec![check_group_bounds(&ctx.spec)];
    for name in varieties {
        let v = ctx.variety(name)?;
        rows.push(check_point_upper(&v, &ctx.spec, Scope::Group, ctx.config.budgets.max_order as usize)?);
    }
    let pass = rows.iter().all(|r| r.satisfied);
    Ok((json!({ "rows": rows }), census_csv(&rows), pass))
}

fn run_escape(ctx: &Context, varieties: &[String], instances: usize) -> Result<Body, Error> {
    let f = &ctx.spec.field;
    let pairs = if varieties.is_empty() {
        sample_instances(&ctx.spec, &ctx.gens, instances, ctx.config.seed)?
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed);
        let mut out = Vec::new();
        for name in varieties {
            let v = ctx.variety(name)?;
            for _ in 0..instances {
                out.push((v.clone(), random_element(f, &ctx.gens, 40, &mut rng)));
            }
        }
        out
    };
    let mut rows = Vec::new();
    let mut table = String::from("index,variety,k,bound_k,word_length,status\n");
    let mut pass = true;
    for (i, (v, x)) in pairs.iter().enumerate() {
        let (row, line) = match escape(&ctx.spec, &ctx.gens, v, x, &ctx.limits) {
            Ok(r) => {
                let line = format!("{i},{},{},{},{},escaped", csv(&v.label), r.k, r.bound_k, r.word.len());
                (serde_json::to_value(&r).unwrap(), line)
            }
            Err(Error::NoEscapePossible) => (
                json!({ "variety": v.label, "status": "skipped", "reason": "the orbit of x lies in V" }),
                format!("{i},{},,,,skipped", csv(&v.label)),
            ),
            Err(e @ Error::BoundViolated { .. }) => {
                pass = false;
                (json!({ "variety": v.label, "status": "violated", "error": e.to_string() }), format!("{i},{},,,,violated", csv(&v.label)))
            }
            Err(e) => return Err(e),
        };
        rows.push(row);
        table.push_str(&line);
        table.push('\n');
    }
    Ok((json!({ "check": "k <= d+1 if D = 1, else k <= 2*D^(d+1)", "rows": rows }), table, pass))
}

fn run_growth(ctx: &Context, varieties: &[String], radius: Option<u32>, cert_m: Option<u32>) -> Result<Body, Error> {
    let tracked = varieties.iter().map(|n| ctx.variety(n)).collect::<Result<Vec<_>, _>>()?;
    let profile = ball_sizes(&ctx.spec, &ctx.gens, ctx.radius(radius), &tracked, &ctx.limits)?;
    let cert = cert_m.map(|m| growth_certificate(&ctx.spec, &ctx.gens, m, &ctx.limits)).transpose()?;
    let csv = profile.to_csv();
    Ok((json!({ "profile": profile, "certificate": cert }), csv, true))
}

fn run_diameter(ctx: &Context) -> Result<Body, Error> {
    let d = diameter(&ctx.spec, &ctx.gens, &ctx.limits)?;
    let order: f64 = ctx.spec.order().to_string().parse().unwrap_or(f64::INFINITY);
    let envelope = order.ln().powi(3);
    let ok = (d as f64) <= envelope;
    let csv = format!("diameter,order,log_order_cubed,within\n{d},{},{envelope:.3},{ok}\n", ctx.spec.order());
    Ok((json!({ "diameter": d, "order": ctx.spec.order().to_string(), "log_order_cubed": envelope, "within": ok }), csv, ok))
}

fn run_concentration(ctx: &Context, variety: &str, radius: Option<u32>) -> Result<Body, Error> {
    let v = ctx.variety(variety)?;
    let p = concentration_profile(&ctx.spec, &ctx.gens, &v, ctx.radius(radius), &ctx.limits)?;
    let pass = p.rows.iter().all(|r| r.within_caps);
    let csv = p.to_csv();
    Ok((json!({ "check": "|A^m ∩ V| <= min(|A^m|, D*q^d)", "profile": p }), csv, pass))
}

fn run_np(ctx: &Context) -> Result<Body, Error> {
    let all = ctx.group_points()?;
    let (set, how) = np_candidate_set(&ctx.spec, &ctx.gens, &ctx.limits)?;
    let v = np_check(&ctx.spec, &set, &all)?;
    let csv = format!(
        "set,set_size,threshold,applicable,square_size,holds\n{},{},{},{},{},{}\n",
        csv(&how),
        v.set_size,
        v.threshold_approx,
        v.applicable,
        v.square_size.map(|s| s.to_string()).unwrap_or_default(),
        v.holds.map(|s| s.to_string()).unwrap_or_default()
    );
    let pass = v.holds != Some(false);
    Ok((json!({ "set": how, "verdict": v }), csv, pass))
}

fn run_tori(ctx: &Context, ks: &[u32], m: u32, samples: usize) -> Result<Body, Error> {
    let all = ctx.group_points()?;
    let census = torus_conjugate_census(&ctx.spec, &all)?;
    let mut pass = census.all_ok();
    let mut reports = Vec::new();
    let mut table = String::from("k,tori,involved,case,split_regular,elliptic_regular,max_fibre,fibre_bound,fibres_hold\n");
    for &k in ks {
        let r = involved_tori_experiment(&ctx.spec, &ctx.gens, k, m, &all, samples, &ctx.limits)?;
        let hold = r.fibres.iter().all(|f| f.holds);
        pass &= hold;
        let max_fibre = r.fibres.iter().map(|f| f.max_fibre).max();
        let bound = r.fibres.iter().map(|f| f.bound).min();
        writeln!(
            table,
            "{k},{},{},{},{},{},{},{},{hold}",
            r.tori,
            r.involved,
            r.case,
            r.split_regular,
            r.elliptic_regular,
            max_fibre.map(|x| x.to_string()).unwrap_or_default(),
            bound.map(|x| x.to_string()).unwrap_or_default()
        )
        .unwrap();
        reports.push(r);
    }
    Ok((json!({ "census": census.reports(), "involved": reports }), table, pass))
}

fn run_ledger(ctx: &Context, varieties: &[String]) -> Result<Body, Error> {
    let spec = &ctx.spec;
    let rec = verify_recurrences(spec.delta, &DEFAULT_D_GRID, spec.delta.max(1))?;
    let mut pass = rec.all_pass;
    let mut table = String::from("check,target,holds,detail\n");
    writeln!(table, "recurrences,delta={},{},{} checks", spec.delta, rec.all_pass, rec.checks.len()).unwrap();
    let c2v = c2(1, spec.delta, spec.iota, spec.n as u64)?;
    let mut main = Vec::new();
    if !varieties.is_empty() {
        let tracked = varieties.iter().map(|n| ctx.variety(n)).collect::<Result<Vec<_>, _>>()?;
        let radius = c2v.to_string().parse::<u32>().unwrap_or(u32::MAX).min(ctx.config.budgets.max_radius);
        let profile = ball_sizes(spec, &ctx.gens, radius, &tracked, &ctx.limits)?;
        for v in &tracked {
            let c1v = c1(v.dim, &v.degree, spec.delta)?;
            let r = main_inequality_report(&profile, v, spec)?;
            pass &= r.holds;
            writeln!(
                table,
                "main_inequality,{},{},lhs={} c1={} ball_c2={} vacuous={}",
                csv(&v.label),
                r.holds,
                r.lhs,
                csv(&c1v.to_string()),
                r.ball_c2,
                r.vacuous
            )
            .unwrap();
            main.push(r);
        }
    }
    Ok((json!({ "recurrences": rec, "c2": c2v.to_string(), "main_inequality": main }), table, pass))
}

pub fn run_experiment(ctx: &Context, e: &Experiment) -> ExperimentOutput {
    let body = match e {
        Experiment::Census { varieties } => run_census(ctx, varieties),
        Experiment::Escape { varieties, instances } => run_escape(ctx, varieties, *instances),
        Experiment::Growth { varieties, radius, certificate_m } => run_growth(ctx, varieties, *radius, *certificate_m),
        Experiment::Diameter => run_diameter(ctx),
        Experiment::Concentration { variety, radius } => run_concentration(ctx, variety, *radius),
        Experiment::NpCheck => run_np(ctx),
        Experiment::InvolvedTori { k, m, fibre_samples } => run_tori(ctx, k, *m, *fibre_samples),
        Experiment::Ledger { varieties } => run_ledger(ctx, varieties),
    };
    let name = e.name();
    match body {
        Ok((value, csv, pass)) => {
            let status = if pass { Status::Pass } else { Status::Fail };
            let mut report = header(ctx, name, status);
            report["result"] = value;
            ExperimentOutput { experiment: name.into(), status, report, csv }
        }
        Err(err) => failed_output(ctx, name, &err),
    }
}

fn failed_output(ctx: &Context, name: &str, err: &Error) -> ExperimentOutput {
    let status = if err.is_budget() {
        Status::Truncated
    } else if err.is_bound_violation() {
        Status::Fail
    } else {
        Status::Error
    };
    let mut report = header(ctx, name, status);
    report["truncated"] = json!(status == Status::Truncated);
    report["error"] = json!(err.to_string());
    let csv = format!("status,error\n{},{}\n", serde_json::to_value(status).unwrap().as_str().unwrap(), csv(&err.to_string()));
    ExperimentOutput { experiment: name.into(), status, report, csv }
}

/// Runs every experiment in order, writing reports under `out` if given.
pub fn run(config: &ExperimentConfig, config_text: &str, out: Option<&Path>) -> std::io::Result<(Manifest, Vec<ExperimentOutput>)> {
    let hash = config_hash(config_text);
    let ctx = match Context::new(config) {
        Ok(c) => c,
        Err(e) => {
            let manifest = Manifest {
                config_sha256: hash,
                seed: config.seed,
                group: String::new(),
                generators: String::new(),
                versions: versions(),
                threads: config.budgets.threads,
                entries: Vec::new(),
                exit_code: if e.is_budget() { EXIT_BUDGET } else { EXIT_CONFIG },
            };
            if let Some(dir) = out {
                fs::create_dir_all(dir)?;
                let mut m = serde_json::to_value(&manifest).unwrap();
                m["error"] = json!(e.to_string());
                fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&m).unwrap() + "\n")?;
            }
            return Ok((manifest, Vec::new()));
        }
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
    }
    let start = Instant::now();
    let wall = config.budgets.wall_clock_secs;
    let mut entries = Vec::new();
    let mut outputs = Vec::new();
    for (i, e) in config.experiments.iter().enumerate() {
        let t = Instant::now();
        let o = if start.elapsed().as_secs() >= wall {
            let err = Error::BudgetExceeded { what: "wall clock (s)".into(), needed: start.elapsed().as_secs().to_string(), budget: wall };
            failed_output(&ctx, e.name(), &err)
        } else {
            run_experiment(&ctx, e)
        };
        let stem = format!("{:02}_{}", i + 1, o.experiment);
        if let Some(dir) = out {
            fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&o.report).unwrap() + "\n")?;
            fs::write(dir.join(format!("{stem}.csv")), &o.csv)?;
        }
        entries.push(ManifestEntry {
            experiment: o.experiment.clone(),
            status: o.status,
            json: format!("{stem}.json"),
            csv: format!("{stem}.csv"),
            runtime_ms: t.elapsed().as_millis(),
        });
        outputs.push(o);
    }
    let manifest = Manifest {
        config_sha256: hash,
        seed: config.seed,
        group: ctx.spec.label(),
        generators: ctx.gens.label.clone(),
        versions: versions(),
        threads: config.budgets.threads,
        exit_code: exit_code(entries.iter().map(|e| e.status)),
        entries,
    };
    if let Some(dir) = out {
        fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest).unwrap() + "\n")?;
    }
    Ok((manifest, outputs))
}

fn versions() -> Value {
    json!({ "growthlab": env!("CARGO_PKG_VERSION") })
}
