//! Command line front end: argument parsing, layered configuration, a JSON-lines
//! result cache, and rendering in human, JSON or CSV form.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fabc::{self, FabcParams};
use crate::ff::PrimeField;
use crate::hassewitt::{self, OrbitContext, DEFAULT_TERM_BUDGET};
use crate::monodromy::{frobenius_orbits, Datum};
use crate::strata::{self, CensusRecord};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const ENV_CACHE_DIR: &str = "CYCLIC_HW_CACHE_DIR";
pub const ENV_WORKERS: &str = "CYCLIC_HW_WORKERS";
pub const ENV_CONFIG: &str = "CYCLIC_HW_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Output {
    Human,
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "cyclic-hw", version, about = "Hasse-Witt data and strata of cyclic covers of the line")]
pub struct Cli {
    /// Seed for randomized factoring; required by commands that factor.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest extension degree searched for roots.
    #[arg(long, global = true)]
    pub dmax: Option<usize>,
    /// Cap on multivariate terms and dense degrees.
    #[arg(long, global = true)]
    pub term_budget: Option<u64>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(short = 'o', long, global = true, value_enum)]
    pub output: Option<Output>,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// key=value file merged under the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Monodromy datum utilities.
    Datum {
        #[command(subcommand)]
        action: DatumCmd,
    },
    /// Total mu-ordinary polygon.
    MuOrd {
        datum: String,
        #[arg(short)]
        p: u64,
    },
    /// Hasse-Witt entries and chain composites.
    Hw {
        #[command(subcommand)]
        action: HwCmd,
    },
    /// A point of the family that is not mu-ordinary.
    Witness {
        datum: String,
        #[arg(short)]
        p: u64,
        #[arg(long)]
        b0: Option<u64>,
    },
    /// Stratum nonemptiness at one prime.
    Census {
        datum: String,
        #[arg(short)]
        p: u64,
    },
    /// Census over the first primes of a congruence class.
    Survey {
        datum: String,
        #[arg(long)]
        class: u64,
        #[arg(long)]
        count: usize,
    },
    /// Clutch two data and compose their mu-ordinary polygons.
    Clutch {
        datum1: String,
        datum2: String,
        #[arg(short)]
        p: u64,
    },
    /// The polynomials f(a,b,c).
    Fabc {
        #[command(subcommand)]
        action: Option<FabcCmd>,
        #[command(flatten)]
        args: FabcArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum DatumCmd {
    Validate { datum: String },
    Canon { datum: String },
    Signature { datum: String },
    Genus { datum: String },
    Orbits {
        datum: String,
        #[arg(short)]
        p: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct EntryArgs {
    pub datum: String,
    #[arg(short)]
    pub p: u64,
    #[arg(long)]
    pub tau: u64,
    #[arg(long)]
    pub j: usize,
    #[arg(long)]
    pub jp: usize,
    /// Specialize to x = (inf, t, 1, 0).
    #[arg(long)]
    pub specialize: bool,
}

#[derive(Args, Debug, Clone)]
pub struct ChainArgs {
    pub datum: String,
    #[arg(short)]
    pub p: u64,
    #[arg(long)]
    pub b0: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum HwCmd {
    Phi(EntryArgs),
    Psi(EntryArgs),
    H1 {
        #[command(flatten)]
        chain: ChainArgs,
        /// Degree, v_t and h1(1) only, without expanding h1.
        #[arg(long)]
        profile: bool,
        /// Also factor h1 (needs --seed).
        #[arg(long)]
        factor: bool,
    },
    H0 {
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// Chain kinds and shapes.
    Chain {
        #[command(flatten)]
        chain: ChainArgs,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct FabcArgs {
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub b: Option<u64>,
    #[arg(long)]
    pub c: Option<u64>,
    #[arg(short)]
    pub p: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum FabcCmd {
    /// Remove the factors t and t-1.
    Strip(FabcArgs),
    /// Degree and valuations at 0 and 1.
    Profile(FabcArgs),
}

/// Settings after merging defaults, config file, environment and flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub dmax: usize,
    pub term_budget: u64,
    pub workers: usize,
    pub output: Output,
    pub cache_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: None, dmax: 4, term_budget: DEFAULT_TERM_BUDGET, workers: 4, output: Output::Human, cache_dir: None }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| Error::InvalidInput(format!("bad value for {key}: {v}")))
}

impl RunConfig {
    /// Apply `key = value` lines; `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::InvalidInput(format!("config line {}: expected key=value", n + 1)));
            };
            let (k, v) = (k.trim(), v.trim());
            match k {
                "seed" => self.seed = Some(parse_num(k, v)?),
                "dmax" => self.dmax = parse_num(k, v)?,
                "term_budget" => self.term_budget = parse_num(k, v)?,
                "workers" => self.workers = parse_num(k, v)?,
                "output" => {
                    self.output = Output::from_str(v, true).map_err(|_| Error::InvalidInput(format!("bad output {v}")))?
                }
                "cache_dir" => self.cache_dir = Some(PathBuf::from(v)),
                _ => return Err(Error::InvalidInput(format!("unknown config key {k}"))),
            }
        }
        Ok(())
    }

    pub fn apply_env(&mut self, env: &HashMap<String, String>) -> Result<()> {
        if let Some(v) = env.get(ENV_CACHE_DIR) {
            self.cache_dir = Some(PathBuf::from(v));
        }
        if let Some(v) = env.get(ENV_WORKERS) {
            self.workers = parse_num(ENV_WORKERS, v)?;
        }
        Ok(())
    }

    pub fn apply_flags(&mut self, cli: &Cli) {
        if cli.seed.is_some() {
            self.seed = cli.seed;
        }
        if let Some(d) = cli.dmax {
            self.dmax = d;
        }
        if let Some(b) = cli.term_budget {
            self.term_budget = b;
        }
        if let Some(w) = cli.workers {
            self.workers = w;
        }
        if let Some(o) = cli.output {
            self.output = o;
        }
        if cli.cache_dir.is_some() {
            self.cache_dir = cli.cache_dir.clone();
        }
    }

    /// Defaults, then the config file, then the environment, then flags.
    pub fn resolve(cli: &Cli, env: &HashMap<String, String>) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let path = cli.config.clone().or_else(|| env.get(ENV_CONFIG).map(PathBuf::from));
        if let Some(path) = path {
            let text = fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            cfg.apply_file_text(&text)?;
        }
        cfg.apply_env(env)?;
        cfg.apply_flags(cli);
        if cfg.term_budget == 0 {
            return Err(Error::InvalidInput("term_budget must be at least 1".into()));
        }
        Ok(cfg)
    }

    fn require_seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| Error::InvalidInput("this command factors polynomials and needs --seed".into()))
    }
}

/// Append-only JSON-lines store keyed by a content hash.
pub struct Cache {
    path: PathBuf,
    entries: HashMap<String, Value>,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join("cache.jsonl");
        let mut entries = HashMap::new();
        if let Ok(f) = fs::File::open(&path) {
            for line in BufReader::new(f).lines() {
                let line = line.map_err(|e| Error::Io(e.to_string()))?;
                // torn trailing lines are skipped
                if let Ok(Value::Object(mut o)) = serde_json::from_str::<Value>(&line) {
                    if let (Some(Value::String(k)), Some(v)) = (o.remove("key"), o.remove("value")) {
                        entries.insert(k, v);
                    }
                }
            }
        }
        Ok(Cache { path, entries })
    }

    pub fn key(datum: &str, p: u64, command: &str) -> String {
        let mut h = Sha256::new();
        h.update(format!("{datum}\n{p}\n{command}\n{VERSION}").as_bytes());
        hex::encode(h.finalize())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn put(&mut self, key: String, value: Value) -> Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(|e| Error::Io(format!("{}: {e}", self.path.display())))?;
        let line = serde_json::to_string(&json!({ "key": key, "value": value })).expect("json");
        writeln!(f, "{line}").map_err(|e| Error::Io(e.to_string()))?;
        self.entries.insert(key, value);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A rendered result: structured value plus its human text and optional CSV.
struct Rendered {
    value: Value,
    human: String,
    csv: Option<String>,
}

impl Rendered {
    fn new(value: Value, human: String) -> Self {
        Rendered { value, human, csv: None }
    }

    fn emit(self, out: Output) -> Result<String> {
        match out {
            Output::Human => Ok(self.human),
            Output::Json => Ok(serde_json::to_string(&self.value).expect("json")),
            Output::Csv => {
                self.csv.ok_or_else(|| Error::InvalidInput("csv output is available for census and survey".into()))
            }
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn parse_datum(s: &str) -> Result<Datum> {
    s.parse()
}

fn context(d: &Datum, p: u64, b0: Option<u64>) -> Result<OrbitContext> {
    match b0 {
        Some(b) => OrbitContext::new(d, p, b),
        None => OrbitContext::auto(d, p),
    }
}

fn chain_meta(ctx: &OrbitContext) -> Value {
    json!({
        "datum": ctx.datum().to_text(),
        "p": ctx.p(),
        "b0": ctx.b0(),
        "l": ctx.l(),
        "i0": ctx.i0(),
        "perm": ctx.perm(),
    })
}

fn census_cached(d: &Datum, p: u64, cache: &mut Option<Cache>) -> Result<CensusRecord> {
    let key = Cache::key(&d.to_text(), p, "census");
    if let Some(v) = cache.as_ref().and_then(|c| c.get(&key)) {
        if let Ok(r) = serde_json::from_value::<CensusRecord>(v.clone()) {
            return Ok(r);
        }
    }
    let r = strata::census(d, p)?;
    if let Some(c) = cache.as_mut() {
        c.put(key, to_value(&r))?;
    }
    Ok(r)
}

fn census_human(r: &CensusRecord) -> String {
    let mut s = format!("{} p={} (class {} mod m)\n", r.datum, r.p, r.class);
    for st in &r.strata {
        let ne = match st.nonempty {
            Some(true) => "nonempty",
            Some(false) => "empty",
            None => "undecided",
        };
        s.push_str(&format!("  {:<12} dim {}  {:<9}  {}", st.label.to_string(), st.dim, ne, st.certificate));
        if let Some(pg) = &st.polygon {
            s.push_str(&format!("  [{pg}]"));
        }
        s.push('\n');
    }
    s.trim_end().to_string()
}

fn fabc_params(a: &FabcArgs) -> Result<FabcParams> {
    let need = |x: Option<u64>, n: &str| x.ok_or_else(|| Error::InvalidInput(format!("missing --{n}")));
    FabcParams::new(need(a.a, "a")?, need(a.b, "b")?, need(a.c, "c")?, need(a.p, "p")?)
}

fn run_command(cmd: &Command, cfg: &RunConfig) -> Result<Rendered> {
    let mut cache = match &cfg.cache_dir {
        Some(d) => Some(Cache::open(d)?),
        None => None,
    };
    match cmd {
        Command::Datum { action } => match action {
            DatumCmd::Validate { datum } => {
                let d = parse_datum(datum)?;
                Ok(Rendered::new(json!({"valid": true, "datum": to_value(&d)}), format!("valid {}", d.to_text())))
            }
            DatumCmd::Canon { datum } => {
                let d = parse_datum(datum)?.canonicalize();
                Ok(Rendered::new(to_value(&d), d.to_text()))
            }
            DatumCmd::Signature { datum } => {
                let s = parse_datum(datum)?.signature();
                Ok(Rendered::new(json!(s.values()[1..]), s.to_text()))
            }
            DatumCmd::Genus { datum } => {
                let g = parse_datum(datum)?.genus();
                Ok(Rendered::new(json!(g), g.to_string()))
            }
            DatumCmd::Orbits { datum, p } => {
                let d = parse_datum(datum)?;
                let sig = d.signature();
                let orbits = frobenius_orbits(d.m(), *p)?;
                let rows: Vec<Value> = orbits
                    .iter()
                    .map(|o| json!({"members": o.members, "f": o.members.iter().map(|&t| sig.f(t)).collect::<Vec<_>>()}))
                    .collect();
                let human = orbits
                    .iter()
                    .map(|o| {
                        let f: Vec<String> = o.members.iter().map(|&t| sig.f(t).to_string()).collect();
                        let m: Vec<String> = o.members.iter().map(|t| t.to_string()).collect();
                        format!("{{{}}} f=({})", m.join(","), f.join(","))
                    })
                    .collect::<Vec<_>>()
                    .join("\n");
                Ok(Rendered::new(Value::Array(rows), human))
            }
        },
        Command::MuOrd { datum, p } => {
            let d = parse_datum(datum)?;
            let mu = strata::mu_ordinary(&d, *p)?;
            Ok(Rendered::new(json!({"datum": d.to_text(), "p": p, "mu": mu.to_text()}), mu.to_text()))
        }
        Command::Hw { action } => run_hw(action, cfg, &mut cache),
        Command::Witness { datum, p, b0 } => {
            let seed = cfg.require_seed()?;
            let d = parse_datum(datum)?;
            let ctx = context(&d, *p, *b0)?;
            let w = hassewitt::nonordinary_witness(&ctx, cfg.dmax, seed, cfg.term_budget)?;
            let mut meta = chain_meta(&ctx);
            let human = match &w {
                Some(w) => {
                    meta["witness"] = json!({
                        "root": w.root.to_text(),
                        "field_modulus": w.root.field.modulus().to_text(),
                        "degree": w.degree,
                        "factor": w.factor.to_text(),
                        "h1_factorization": w.h1_factorization.to_json(),
                    });
                    format!(
                        "root {} of {} in F_{}^{} (modulus {})",
                        w.root.to_text(),
                        w.factor.to_text(),
                        p,
                        w.degree,
                        w.root.field.modulus().to_text()
                    )
                }
                None => {
                    meta["witness"] = Value::Null;
                    format!("no factor of h1 of degree <= {} off t, t-1", cfg.dmax)
                }
            };
            Ok(Rendered::new(meta, human))
        }
        Command::Census { datum, p } => {
            let d = parse_datum(datum)?;
            let r = census_cached(&d, *p, &mut cache)?;
            let csv = format!("{}\n{}", CensusRecord::csv_header(), r.to_csv());
            Ok(Rendered { value: to_value(&r), human: census_human(&r), csv: Some(csv) })
        }
        Command::Survey { datum, class, count } => {
            let d = parse_datum(datum)?;
            let survey = match cache.as_mut() {
                None => strata::prime_survey(&d, *class, *count, cfg.workers)?,
                Some(c) => {
                    // cached records are reused, the rest computed in parallel
                    let primes = strata::primes_in_class(d.m(), *class, *count);
                    let key = |p: u64| Cache::key(&d.to_text(), p, "census");
                    let cached = |c: &Cache, p: u64| {
                        c.get(&key(p)).and_then(|v| serde_json::from_value::<CensusRecord>(v.clone()).ok())
                    };
                    let missing: Vec<u64> = primes.iter().copied().filter(|&p| cached(c, p).is_none()).collect();
                    for r in strata::prime_survey_primes(&d, &missing, cfg.workers)? {
                        c.put(key(r.p), to_value(&r))?;
                    }
                    let records = primes.iter().map(|&p| cached(c, p).expect("just stored")).collect();
                    strata::Survey::from_records(&d, *class, *count, records)
                }
            };
            let mut csv = String::from(CensusRecord::csv_header());
            for r in &survey.records {
                csv.push('\n');
                csv.push_str(&r.to_csv());
            }
            let lowest = survey.records.first().and_then(|r| r.strata.last()).map(|s| s.label.to_string());
            let human = format!(
                "{}/{} {}-nonempty",
                survey.last_nonempty,
                survey.count,
                lowest.unwrap_or_else(|| "basic".into())
            );
            Ok(Rendered { value: to_value(&survey), human, csv: Some(csv) })
        }
        Command::Clutch { datum1, datum2, p } => {
            let d1 = parse_datum(datum1)?;
            let d2 = parse_datum(datum2)?;
            let c = d1.clutch(&d2)?;
            let u1 = strata::mu_ordinary(&d1, *p)?;
            let u2 = strata::mu_ordinary(&d2, *p)?;
            let composed = u1.sum(&u2).sum(&strata::ord_polygon(c.epsilon));
            let u3 = strata::mu_ordinary(&c.datum, *p)?;
            let value = json!({
                "datum": c.datum.to_text(),
                "epsilon": c.epsilon,
                "mu1": u1.to_text(),
                "mu2": u2.to_text(),
                "composed": composed.to_text(),
                "mu_clutched": u3.to_text(),
                "agrees": composed == u3,
            });
            let human = format!(
                "{} eps={}\ncomposed {}\nmu       {}{}",
                c.datum.to_text(),
                c.epsilon,
                composed,
                u3,
                if composed == u3 { "" } else { "  (differ: pair not balanced at p)" }
            );
            Ok(Rendered::new(value, human))
        }
        Command::Fabc { action, args } => match action {
            None => {
                let q = fabc_params(args)?;
                let f = fabc::fabc(&q)?;
                Ok(Rendered::new(f.to_json(), f.to_text()))
            }
            Some(FabcCmd::Strip(a)) => {
                let s = fabc::strip(&fabc_params(a)?)?;
                let r = s.reduced;
                let human = format!(
                    "{}t^{} (t-1)^{} f({},{},{})",
                    if s.sign < 0 { "-" } else { "" },
                    s.s1,
                    s.s2,
                    r.a,
                    r.b,
                    r.c
                );
                Ok(Rendered::new(to_value(&s), human))
            }
            Some(FabcCmd::Profile(a)) => {
                let pr = fabc::fabc_profile(&fabc_params(a)?)?;
                Ok(Rendered::new(to_value(&pr), format!("deg {} v_t {} v_t-1 {}", pr.degree, pr.v_t, pr.v_t1)))
            }
        },
    }
}

fn run_hw(action: &HwCmd, cfg: &RunConfig, cache: &mut Option<Cache>) -> Result<Rendered> {
    match action {
        HwCmd::Phi(e) | HwCmd::Psi(e) => {
            let is_psi = matches!(action, HwCmd::Psi(_));
            let d = parse_datum(&e.datum)?;
            let field = PrimeField::new(e.p)?;
            if e.specialize {
                let perm = hassewitt::order_permutation(&d, e.p, e.tau);
                let dd = d.permuted(&perm);
                let f = if is_psi {
                    hassewitt::psi_specialized_at(&dd, field, e.tau, e.jp, e.j)?
                } else {
                    hassewitt::phi_specialized_at(&dd, field, e.tau, e.jp, e.j)?
                };
                Ok(Rendered::new(json!({"perm": perm, "poly": f.to_json(), "text": f.to_text()}), f.to_text()))
            } else {
                let f = if is_psi {
                    hassewitt::psi_entry(&d, field, e.tau, e.jp, e.j)?
                } else {
                    hassewitt::phi_entry(&d, field, e.tau, e.jp, e.j)?
                };
                if f.term_count() as u64 > cfg.term_budget {
                    return Err(Error::DegreeBudgetExceeded { needed: f.term_count() as u128, budget: cfg.term_budget });
                }
                Ok(Rendered::new(f.to_json(), format!("{f:?}")))
            }
        }
        HwCmd::H1 { chain, profile, factor } => {
            let d = parse_datum(&chain.datum)?;
            let ctx = context(&d, chain.p, chain.b0)?;
            let mut meta = chain_meta(&ctx);
            if *profile {
                let pr = ctx.h1_profile()?;
                meta["profile"] = to_value(&pr);
                let human = format!("deg {} v_t {} h1(1) {}", pr.degree, pr.v_t, pr.value_at_one);
                return Ok(Rendered::new(meta, human));
            }
            let h = ctx.h1(cfg.term_budget)?;
            meta["h1"] = h.to_json();
            let mut human = h.to_text();
            if *factor {
                let fac = crate::ff::factor(&h, cfg.require_seed()?)?;
                meta["factorization"] = fac.to_json();
                human = fac.to_text();
            }
            Ok(Rendered::new(meta, human))
        }
        HwCmd::H0 { chain } => {
            let d = parse_datum(&chain.datum)?;
            let ctx = context(&d, chain.p, chain.b0)?;
            let key = Cache::key(&d.to_text(), chain.p, &format!("h0 b0={} budget={}", ctx.b0(), cfg.term_budget));
            let poly = match cache.as_ref().and_then(|c| c.get(&key)) {
                Some(v) => v.clone(),
                None => {
                    let h = ctx.h0(cfg.term_budget)?;
                    let v = h.to_json();
                    if let Some(c) = cache.as_mut() {
                        c.put(key, v.clone())?;
                    }
                    v
                }
            };
            let terms = poly.as_array().map_or(0, |a| a.len());
            let mut meta = chain_meta(&ctx);
            meta["h0"] = poly;
            Ok(Rendered::new(meta, format!("h0 with {terms} terms (use -o json for the terms)")))
        }
        HwCmd::Chain { chain } => {
            let d = parse_datum(&chain.datum)?;
            let ctx = context(&d, chain.p, chain.b0)?;
            let steps = ctx.steps();
            let mut meta = chain_meta(&ctx);
            meta["steps"] = to_value(&steps);
            let human = steps
                .iter()
                .enumerate()
                .map(|(i, s)| format!("A_{i}: {:?} tau={} {}x{}", s.kind, s.tau, s.rows, s.cols))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Rendered::new(meta, human))
        }
    }
}

/// Run a parsed command line and return what it prints.
pub fn run(cli: &Cli, env: &HashMap<String, String>) -> Result<String> {
    let cfg = RunConfig::resolve(cli, env)?;
    run_command(&cli.command, &cfg)?.emit(cfg.output)
}

/// Parse `args` (program name first) and run; `Err` carries the exit status and message.
pub fn run_args<I, S>(args: I, env: &HashMap<String, String>) -> std::result::Result<String, (i32, String)>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            return Err((code, e.to_string()));
        }
    };
    run(&cli, env).map_err(|e| {
        let msg = json!({"error": e.code(), "message": e.to_string()});
        (e.exit_code(), msg.to_string())
    })
}

/// Entry point used by the binary.
pub fn main_entry() -> i32 {
    let env: HashMap<String, String> = std::env::vars().collect();
    match run_args(std::env::args_os(), &env) {
        Ok(out) => {
            println!("{out}");
            0
        }
        Err((0, msg)) => {
            print!("{msg}");
            0
        }
        Err((code, msg)) => {
            eprintln!("{msg}");
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> String {
        let mut v = vec!["cyclic-hw"];
        v.extend_from_slice(args);
        run_args(v, &HashMap::new()).unwrap()
    }

    #[test]
    fn datum_commands() {
        assert_eq!(run_ok(&["datum", "signature", "7:4:3,1,1,2"]), "2,1,1,1,1,0");
        assert_eq!(run_ok(&["datum", "genus", "7:4:3,1,1,2"]), "6");
        assert_eq!(run_ok(&["datum", "orbits", "7:4:3,1,1,2", "-p", "13"]).lines().count(), 3);
    }

    #[test]
    fn specialized_entry() {
        let out = run_ok(&["hw", "phi", "7:4:3,1,1,2", "-p", "13", "--tau", "2", "--j", "1", "--jp", "1", "--specialize"]);
        assert_eq!(out, "3 + 3*t");
    }

    #[test]
    fn exit_codes() {
        let e = run_args(["cyclic-hw", "datum", "genus", "7:4:3,1,1,3"], &HashMap::new()).unwrap_err();
        assert_eq!(e.0, 4);
        let e = run_args(["cyclic-hw", "witness", "7:4:3,1,1,2", "-p", "29"], &HashMap::new()).unwrap_err();
        assert_eq!(e.0, 4);
        assert!(e.1.contains("invalid_input"));
        let e = run_args(["cyclic-hw", "hw", "h0", "7:4:3,1,1,2", "-p", "29", "--term-budget", "5"], &HashMap::new())
            .unwrap_err();
        assert_eq!(e.0, 3);
        let e = run_args(["cyclic-hw", "hw", "h1", "7:4:3,1,1,2", "-p", "29", "--b0", "1"], &HashMap::new()).unwrap_err();
        assert_eq!(e.0, 2);
    }

    #[test]
    fn config_layers() {
        let cli = Cli::try_parse_from(["cyclic-hw", "--workers", "3", "datum", "genus", "5:4:1,1,1,2"]).unwrap();
        let mut env = HashMap::new();
        env.insert(ENV_WORKERS.to_string(), "7".to_string());
        env.insert(ENV_CACHE_DIR.to_string(), "/tmp/x".to_string());
        let cfg = RunConfig::resolve(&cli, &env).unwrap();
        assert_eq!(cfg.workers, 3);
        assert_eq!(cfg.cache_dir, Some(PathBuf::from("/tmp/x")));
        let mut cfg = RunConfig::default();
        cfg.apply_file_text("seed = 9 # comment\n\noutput=json\n").unwrap();
        assert_eq!((cfg.seed, cfg.output), (Some(9), Output::Json));
        assert!(cfg.apply_file_text("nonsense").is_err());
    }

    #[test]
    fn fabc_commands() {
        assert_eq!(run_ok(&["fabc", "--a", "3", "--b", "3", "--c", "1", "-p", "13"]), "3 + 3*t");
        assert_eq!(run_ok(&["fabc", "strip", "--a", "5", "--b", "5", "--c", "9", "-p", "13"]), "t^4 (t-1)^0 f(5,5,1)");
    }
}
