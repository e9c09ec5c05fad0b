//! `tva`: batch front-end for toroidal vertex algebra computations.

mod cache;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use toroidal_core::axioms;
use toroidal_core::config::{Loaded, SessionConfig};
use toroidal_core::error::{ConfigError, LieError};
use toroidal_core::lie::{validate_lie_spec, LieSpec};
use toroidal_core::suite::{self, Report};
use toroidal_core::vacuum::Mode;
use toroidal_core::{exec, LocalityOrder, StateVector, TorIndex};

use cache::ResultCache;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_CAP: u8 = 4;

#[derive(Parser)]
#[command(name = "tva", version, about = "Exact toroidal vertex algebra computations")]
struct Cli {
    /// Session configuration file.
    #[arg(long, global = true, default_value = "tva.json")]
    config: PathBuf,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Persistent result cache file.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Refuse suite runs estimated above this many cells.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Run mutation testing instead of the plain suite.
    #[arg(long, global = true)]
    mutate: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the Lie algebra file: antisymmetry, Jacobi, symmetric invariant form.
    Validate,
    /// Apply a mode `a(n0, n)` to a state.
    #[command(allow_negative_numbers = true)]
    Act { basis: String, n0: i64, n: String, state: String },
    /// The product `u_{(m0, m)} v`.
    #[command(allow_negative_numbers = true)]
    Product { u: String, m0: i64, m: String, v: String },
    /// Mode table of `Y(u)` over the configured window.
    Field { u: String },
    /// Minimal locality order of `Y(u)` and `Y(v)` on the window.
    Locality { u: String, v: String },
    /// Run the axiom suite.
    Axioms,
    /// Build the vacuum ideal and check its vertex algebra structure.
    V0 {
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        max_degree: Option<i64>,
    },
    /// Summarize a JSON report, optionally converting it to CSV.
    Report {
        path: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Config(ConfigError),
    Budget { estimate: u64, budget: u64 },
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        CliError::Config(e.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Budget { estimate, budget } => {
                write!(f, "refusing to run: estimated {estimate} coefficient cells exceeds the budget of {budget}")
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        exec::set_jobs(j);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Budget { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.cmd {
        Cmd::Report { path, csv } => return report(path, csv.as_deref()),
        Cmd::Validate => return validate(cli),
        _ => {}
    }
    let loaded = SessionConfig::from_path(&cli.config)?.load()?;
    let cache_path = cli.cache.clone().or_else(|| loaded.config.cache.path.clone().map(|p| loaded.config.base_dir.join(p)));
    let mut cache = match cache_path {
        Some(p) => Some(ResultCache::open(&p).map_err(|e| CliError::Usage(format!("cache {}: {e}", p.display())))?),
        None => None,
    };
    let code = match &cli.cmd {
        Cmd::Act { basis, n0, n, state } => act(&loaded, basis, *n0, n, state, cache.as_mut())?,
        Cmd::Product { u, m0, m, v } => product(&loaded, u, *m0, m, v, cache.as_mut())?,
        Cmd::Field { u } => field(&loaded, u)?,
        Cmd::Locality { u, v } => locality(&loaded, u, v)?,
        Cmd::Axioms if cli.mutate => mutate(cli, &loaded)?,
        Cmd::Axioms => axioms_cmd(cli, &loaded, cache.as_mut())?,
        Cmd::V0 { depth, max_degree } => v0(&loaded, *depth, *max_degree)?,
        Cmd::Report { .. } | Cmd::Validate => unreachable!(),
    };
    if let Some(c) = cache {
        c.save().map_err(|e| CliError::Usage(format!("writing cache: {e}")))?;
    }
    Ok(code)
}

fn validate(cli: &Cli) -> Result<u8, CliError> {
    let config = SessionConfig::from_path(&cli.config)?;
    let text = config.lie_json()?;
    let spec: LieSpec = serde_json::from_str(&text).map_err(|e| ConfigError::from_json(config.lie.clone(), e))?;
    let report = validate_lie_spec(&spec)?;
    match &report.violation {
        None => {
            println!("{}", json!({"valid": true}));
            Ok(0)
        }
        Some(v) => {
            println!("{}", json!({"valid": false, "violation": v, "message": v.to_string()}));
            Ok(EXIT_FAIL)
        }
    }
}

fn parse_index(s: &str, rank: usize) -> Result<TorIndex, CliError> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad torus index `{s}`")))?;
    if parts.len() != rank {
        return Err(CliError::Usage(format!("torus index `{s}` has {} entries but rank is {rank}", parts.len())));
    }
    Ok(TorIndex::from(parts))
}

fn parse_state(l: &Loaded, s: &str) -> Result<StateVector, CliError> {
    l.session.parse_state(s).map_err(|e| CliError::Config(e.into()))
}

fn print_state(l: &Loaded, v: &StateVector) {
    let lie = l.session.lie();
    println!("{}", v.display(lie));
    println!("{}", v.to_json(lie));
}

fn cached(cache: Option<&mut ResultCache>, l: &Loaded, key: &Value, compute: impl FnOnce() -> Result<Value, CliError>) -> Result<Value, CliError> {
    let Some(c) = cache else { return compute() };
    let k = ResultCache::key(&[&l.lie_json, &l.config.rank.to_string(), &l.config.level, &key.to_string()]);
    if let Some(v) = c.get(&k) {
        return Ok(v.clone());
    }
    let v = compute()?;
    c.insert(k, v.clone());
    Ok(v)
}

fn act(l: &Loaded, basis: &str, n0: i64, n: &str, state: &str, cache: Option<&mut ResultCache>) -> Result<u8, CliError> {
    let s = &l.session;
    let a = s.lie().index(basis).map_err(|e| CliError::Config(e.into()))?;
    let n = parse_index(n, s.rank())?;
    let w = parse_state(l, state)?;
    let key = json!(["act", basis, n0, n.as_slice(), state]);
    let out = cached(cache, l, &key, || Ok(s.module().act(&Mode::new(a, n0, n.clone()), &w).to_json(s.lie())))?;
    print_state(l, &from_json(l, &out)?);
    Ok(0)
}

fn from_json(l: &Loaded, v: &Value) -> Result<StateVector, CliError> {
    StateVector::from_json(l.session.lie(), l.session.rank(), v).map_err(|e| CliError::Usage(format!("cache entry: {e}")))
}

fn product(l: &Loaded, u: &str, m0: i64, m: &str, v: &str, cache: Option<&mut ResultCache>) -> Result<u8, CliError> {
    let s = &l.session;
    let m = parse_index(m, s.rank())?;
    let (us, vs) = (parse_state(l, u)?, parse_state(l, v)?);
    let key = json!(["product", u, m0, m.as_slice(), v]);
    let out = cached(cache, l, &key, || {
        s.product(&us, m0, &m, &vs).map(|x| x.to_json(s.lie())).map_err(|e| CliError::Usage(e.to_string()))
    })?;
    print_state(l, &from_json(l, &out)?);
    Ok(0)
}

fn field(l: &Loaded, u: &str) -> Result<u8, CliError> {
    let s = &l.session;
    let us = parse_state(l, u)?;
    for idx in l.window.indices() {
        for w in &l.window.states {
            let x = s.y_mode(&us, idx.m0, &idx.m, w).map_err(|e| CliError::Usage(e.to_string()))?;
            println!("({};{}) {} -> {}", idx.m0, idx.m, w.display(s.lie()), x.display(s.lie()));
        }
    }
    Ok(0)
}

fn locality(l: &Loaded, u: &str, v: &str) -> Result<u8, CliError> {
    let s = &l.session;
    let (fu, fv) = (s.field_of(&parse_state(l, u)?), s.field_of(&parse_state(l, v)?));
    let bound = l.config.window.locality_bound;
    match s.engine().locality_order(&fu, &fv, &l.window, bound).map_err(|e| CliError::Usage(e.to_string()))? {
        LocalityOrder::Order(k) => {
            println!("{}", json!({"order": k}));
            Ok(0)
        }
        LocalityOrder::ExceedsBound => {
            println!("{}", json!({"order": null, "bound": bound}));
            Ok(EXIT_CAP)
        }
    }
}

fn check_budget(cli: &Cli, l: &Loaded) -> Result<(), CliError> {
    let budget = cli.budget.unwrap_or(l.config.budget);
    let estimate = l.estimate();
    if estimate > budget {
        return Err(CliError::Budget { estimate, budget });
    }
    Ok(())
}

fn write_outputs(l: &Loaded, json_text: &str, csv_text: Option<String>) -> Result<(), CliError> {
    let out = &l.config.outputs;
    let write = |p: &Path, text: &str| std::fs::write(p, text).map_err(|e| CliError::Usage(format!("writing {}: {e}", p.display())));
    match &out.json {
        Some(p) => write(&l.config.base_dir.join(p), json_text)?,
        None => println!("{json_text}"),
    }
    if let (Some(p), Some(csv)) = (&out.csv, csv_text) {
        write(&l.config.base_dir.join(p), &csv)?;
    }
    Ok(())
}

fn axioms_cmd(cli: &Cli, l: &Loaded, cache: Option<&mut ResultCache>) -> Result<u8, CliError> {
    check_budget(cli, l)?;
    let s = &l.session;
    let plan = l.plan();
    let jobs = suite::plan_jobs(s, &plan);
    let prefix = [l.lie_json.clone(), l.config.rank.to_string(), l.config.level.clone(), serde_json::to_string(&l.config.window).unwrap(), serde_json::to_string(&l.config.suite).unwrap()];
    let keys: Vec<String> = jobs
        .iter()
        .map(|j| {
            let jk = j.key(s.lie());
            let parts: Vec<&str> = prefix.iter().map(String::as_str).chain([jk.as_str()]).collect();
            ResultCache::key(&parts)
        })
        .collect();
    let hits: Vec<Option<Vec<axioms::Finding>>> =
        keys.iter().map(|k| cache.as_ref().and_then(|c| c.get(k)).and_then(|v| serde_json::from_value(v.clone()).ok())).collect();
    let todo: Vec<usize> = (0..jobs.len()).filter(|&i| hits[i].is_none()).collect();
    let computed = exec::map(&todo, |&i| suite::run_job(s, &plan, &jobs[i]));
    let mut fresh = todo.iter().zip(computed);
    let mut findings = Vec::new();
    let mut new_entries = Vec::new();
    for (i, hit) in hits.into_iter().enumerate() {
        let fs = match hit {
            Some(fs) => fs,
            None => {
                let (_, fs) = fresh.next().expect("computed job");
                new_entries.push((keys[i].clone(), serde_json::to_value(&fs).unwrap()));
                fs
            }
        };
        findings.extend(fs);
    }
    if let Some(c) = cache {
        for (k, v) in new_entries {
            c.insert(k, v);
        }
    }
    let report = Report { findings };
    for f in &report.findings {
        let status = serde_json::to_value(f.status).unwrap();
        eprintln!("{:<5} {:<26} {}", status.as_str().unwrap_or("?"), f.identity, f.subject);
    }
    write_outputs(l, &serde_json::to_string_pretty(&report.to_json()).unwrap(), Some(report.to_csv()))?;
    let failed = report.failures().count();
    eprintln!("{} findings, {} failed", report.findings.len(), failed);
    Ok(if report.passed() {
        0
    } else if report.findings.iter().all(|f| f.passed() || f.status == axioms::Status::CapExceeded) {
        EXIT_CAP
    } else {
        EXIT_FAIL
    })
}

fn mutate(cli: &Cli, l: &Loaded) -> Result<u8, CliError> {
    check_budget(cli, l)?;
    let s = &l.session;
    let outcomes = suite::run_mutations(s, &l.plan(), &suite::all_mutations(s.lie()));
    for o in &outcomes {
        let by = o.va_finding.as_ref().map(|f| f.identity.as_str()).unwrap_or(if o.lie_detected { "lie_validation" } else { "-" });
        eprintln!("{:<9} {:<44} {}", if o.detected() { "detected" } else { "MISSED" }, o.description, by);
    }
    let text = serde_json::to_string_pretty(&Value::Array(outcomes.iter().map(|o| o.to_json()).collect())).unwrap();
    match &l.config.outputs.mutations {
        Some(p) => {
            let p = l.config.base_dir.join(p);
            std::fs::write(&p, text).map_err(|e| CliError::Usage(format!("writing {}: {e}", p.display())))?;
        }
        None => println!("{text}"),
    }
    Ok(if outcomes.iter().all(|o| o.detected()) { 0 } else { EXIT_FAIL })
}

fn v0(l: &Loaded, depth: Option<usize>, max_degree: Option<i64>) -> Result<u8, CliError> {
    let s = &l.session;
    let plan = l.config.suite.v0.unwrap_or(suite::V0Plan { depth: 2, max_degree: 2 });
    let depth = depth.unwrap_or(plan.depth);
    let max_degree = max_degree.unwrap_or(plan.max_degree);
    if depth == 0 {
        return Err(CliError::Usage("depth must be at least 1".into()));
    }
    let sub = s.build_v0(depth, max_degree, &l.window).map_err(|e| CliError::Usage(e.to_string()))?;
    let lie = s.lie();
    let graded: Vec<Value> = sub
        .graded
        .iter()
        .map(|g| json!({"degree": g.degree, "dim": g.dim_in_box, "pbw_count": g.pbw_count}))
        .collect();
    let basis: Vec<String> = if depth == 1 {
        sub.basis.rows().map(|r| r.display(lie).to_string()).collect()
    } else {
        Vec::new()
    };
    let pts = l.window.tor_points();
    let samples: Vec<StateVector> = std::iter::once(StateVector::vacuum())
        .chain((0..lie.dim()).flat_map(|a| pts.iter().map(move |m| (a, m.clone()))).map(|(a, m)| s.module().act(&Mode::new(a, -1, m), &StateVector::vacuum())))
        .collect();
    let findings = axioms::check_v0(s, depth, max_degree, &l.window, &samples);
    let report = Report { findings };
    let out = json!({
        "graded": graded,
        "dimensions_match": sub.dimensions_match(),
        "tails_absent": sub.tails_absent,
        "basis": basis,
        "findings": report.to_json(),
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}

fn report(path: &Path, csv: Option<&Path>) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.display().to_string(), source: e })?;
    let findings: Vec<axioms::Finding> = serde_json::from_str(&text).map_err(|e| ConfigError::from_json(path.display().to_string(), e))?;
    let report = Report { findings };
    let mut by_id: std::collections::BTreeMap<&str, (usize, usize)> = Default::default();
    for f in &report.findings {
        let e = by_id.entry(f.identity.as_str()).or_default();
        e.0 += 1;
        e.1 += (!f.passed()) as usize;
    }
    for (id, (n, bad)) in &by_id {
        println!("{id:<26} {n:>4} checked {bad:>4} failed");
    }
    if let Some(p) = csv {
        std::fs::write(p, report.to_csv()).map_err(|e| CliError::Usage(format!("writing {}: {e}", p.display())))?;
    }
    Ok(if report.passed() { 0 } else { EXIT_FAIL })
}
