//! The `cubeseeker` command line.
//!
//! Every subcommand prints its result to stdout. With `--out FILE` the result
//! goes to `FILE` instead and a manifest lands next to it in
//! `FILE.manifest.json`; `replay` reruns such a manifest and checks the
//! output hashes.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bounds::{self, PairPoint};
use crate::builtin;
use crate::error::{Error, Result};
use crate::explorer::{self, SearchParams, SearchRecord};
use crate::geometry::{CoupleConfig, Cube};
use crate::manifest::{manifest_path, RunManifest};
use crate::objective::{check_condition, f_ratio, gap_volume, is_tame, ConditionMode};
use crate::optimizer::{self, OptimizeOptions};
use crate::rational::{self, Rational};

#[derive(Parser, Debug)]
#[command(name = "cubeseeker", version, about = "Certified cube ratios for grid couples")]
pub struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Accept decimals like 0.24 and convert them exactly.
    #[arg(long, global = true)]
    pub allow_decimal: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Volumes, condition, f(W) and tameness of one couple.
    Eval(EvalArgs),
    /// Certified enclosure of sup f.
    Optimize(OptimizeArgs),
    /// Brackets for sigma, sweeps and pair transformations.
    Bounds(BoundsArgs),
    /// Optimize every qualifying labeling of a small grid.
    Enumerate(EnumerateArgs),
    /// Seeded random search for couples with small sup f.
    Search(SearchArgs),
    /// Rerun a manifest and compare output hashes.
    Replay(ReplayArgs),
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct EvalArgs {
    /// JSON file or built-in: holzman, halfhalf:d, slab:a:d
    pub config: String,
    /// Cube as `c0,c1,...:side`.
    #[arg(long)]
    pub cube: Option<String>,
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long, default_value = "strict")]
    pub mode: ConditionMode,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct OptimizeArgs {
    pub config: String,
    #[arg(long, default_value = "1e-6")]
    pub eps: String,
    /// Exhaustive scan over cubes on the refined grid instead of branch and bound.
    #[arg(long)]
    pub grid_only: bool,
    /// Refinement factor for `--grid-only`.
    #[arg(long, default_value_t = 1)]
    pub subdivision: u64,
    #[arg(long, default_value_t = optimizer::DEFAULT_MAX_ITERATIONS)]
    pub max_iterations: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub tau: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// CSV sweep over tau: `start:stop:step`, both ends inclusive.
    #[arg(long)]
    pub sweep: Option<String>,
    /// Apply the pair transformation to `(tau, s)` with `--theta`.
    #[arg(long)]
    pub transform: bool,
    /// Pair `((2-3s)/(4-4s), s/2)`.
    #[arg(long)]
    pub corollary: bool,
    #[arg(long)]
    pub s: Option<String>,
    #[arg(long)]
    pub theta: Option<String>,
    /// JSONL store with search records to use as empirical upper bounds.
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Use only this record from `--records`.
    #[arg(long)]
    pub record: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 2)]
    pub m: u64,
    #[arg(long, default_value = "1/2")]
    pub tau: String,
    #[arg(long, default_value = "strict")]
    pub mode: ConditionMode,
    #[arg(long, default_value = "1e-6")]
    pub eps: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SearchArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value = "1/2")]
    pub tau: String,
    #[arg(long, default_value = "strict")]
    pub mode: ConditionMode,
    #[arg(long)]
    pub budget: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "1e-6")]
    pub eps: String,
    /// Extra couples (files or built-ins) to score with the samples.
    #[arg(long)]
    pub inject: Vec<String>,
    #[arg(long)]
    pub low_gap_bias: bool,
    /// Timestamp written into the records; defaults to now.
    #[arg(long)]
    pub timestamp: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write the outputs here instead of their recorded paths.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// Parse, run and map the outcome to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("cubeseeker: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| Error::Input(format!("cannot start {} threads: {e}", cli.threads)))?;
    let ctx = Ctx { allow_decimal: cli.allow_decimal };
    pool.install(|| ctx.dispatch(cli.command))
}

struct Ctx {
    allow_decimal: bool,
}

/// Where a command's result goes.
struct Sink {
    manifest: RunManifest,
    out: Option<PathBuf>,
}

impl Sink {
    fn new(cmd: &Command, out: Option<PathBuf>) -> Result<Self> {
        let value = serde_json::to_value(cmd)?;
        let (name, params) = match value {
            serde_json::Value::Object(map) if map.len() == 1 => map.into_iter().next().unwrap(),
            other => ("unknown".to_string(), other),
        };
        Ok(Sink { manifest: RunManifest::new(&name, params), out })
    }

    fn input(&mut self, path: &Path) -> Result<()> {
        self.manifest.add_input(path)
    }

    fn finish(mut self, text: &str) -> Result<()> {
        match &self.out {
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
            }
            Some(path) => {
                fs::write(path, text)?;
                self.manifest.add_output(path)?;
                self.manifest.write(&manifest_path(path))?;
            }
        }
        Ok(())
    }
}

fn json_line<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

impl Ctx {
    fn rat(&self, text: &str) -> Result<Rational> {
        rational::parse(text, self.allow_decimal)
    }

    fn need(&self, v: &Option<String>, flag: &str) -> Result<Rational> {
        match v {
            Some(t) => self.rat(t),
            None => Err(Error::Input(format!("--{flag} is required here"))),
        }
    }

    fn config(&self, spec: &str, sink: &mut Sink) -> Result<CoupleConfig> {
        if let Some(c) = builtin::named(spec) {
            return c;
        }
        let path = Path::new(spec);
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read config '{spec}': {e}")))?;
        sink.input(path)?;
        CoupleConfig::from_json_str(&text)
    }

    fn dispatch(&self, cmd: Command) -> Result<()> {
        match &cmd {
            Command::Eval(a) => self.eval(&cmd, a),
            Command::Optimize(a) => self.optimize(&cmd, a),
            Command::Bounds(a) => self.bounds(&cmd, a),
            Command::Enumerate(a) => self.enumerate(&cmd, a),
            Command::Search(a) => {
                // pin the timestamp so the manifest replays byte for byte
                let mut a = a.clone();
                a.timestamp.get_or_insert_with(explorer::now);
                self.search(&Command::Search(a.clone()), &a)
            }
            Command::Replay(a) => self.replay(a),
        }
    }

    fn eval(&self, cmd: &Command, a: &EvalArgs) -> Result<()> {
        let mut sink = Sink::new(cmd, a.out.clone())?;
        let cfg = self.config(&a.config, &mut sink)?;
        let mut report = json!({
            "d": cfg.spec().d(),
            "m": cfg.spec().m(),
            "vol_plus": rational::format(cfg.vol_plus()),
            "vol_minus": rational::format(cfg.vol_minus()),
            "vol_gap": rational::format(&gap_volume(&cfg)),
            "tame": is_tame(&cfg),
        });
        if let Some(t) = &a.tau {
            let tau = self.rat(t)?;
            report["condition"] = json!({
                "tau": rational::format(&tau),
                "mode": a.mode,
                "holds": check_condition(&cfg, &tau, a.mode),
            });
        }
        if let Some(c) = &a.cube {
            let w = Cube::parse(c, self.allow_decimal)?;
            report["cube"] = json!(w.to_string());
            report["f"] = json!(rational::format(&f_ratio(&cfg, &w)?));
        }
        sink.finish(&json_line(&report)?)
    }

    fn optimize(&self, cmd: &Command, a: &OptimizeArgs) -> Result<()> {
        let mut sink = Sink::new(cmd, a.out.clone())?;
        let cfg = self.config(&a.config, &mut sink)?;
        if a.grid_only {
            let (value, witness) = optimizer::optimize_grid_aligned(&cfg, a.subdivision)?;
            let report = json!({
                "value": rational::format(&value),
                "witness": witness,
                "subdivision": a.subdivision,
            });
            return sink.finish(&json_line(&report)?);
        }
        let eps = self.rat(&a.eps)?;
        let opts = OptimizeOptions::new(eps).with_max_iterations(a.max_iterations);
        let v = optimizer::optimize_certified_with(&cfg, &opts)?;
        sink.finish(&json_line(&v)?)?;
        if !v.converged {
            return Err(Error::Unconverged(format!(
                "width {} after {} iterations",
                rational::decimal_string(&v.width(), 12),
                v.iterations
            )));
        }
        Ok(())
    }

    fn load_records(&self, a: &BoundsArgs, sink: &mut Sink) -> Result<Vec<SearchRecord>> {
        let Some(path) = &a.records else {
            if a.record.is_some() {
                return Err(Error::Input("--record needs --records".into()));
            }
            return Ok(Vec::new());
        };
        sink.input(path)?;
        let all = explorer::read_records(path)?;
        match &a.record {
            Some(id) => all
                .into_iter()
                .find(|r| &r.id == id)
                .map(|r| vec![r])
                .ok_or_else(|| Error::Input(format!("no record {id} in {}", path.display()))),
            None => Ok(all),
        }
    }

    fn bounds(&self, cmd: &Command, a: &BoundsArgs) -> Result<()> {
        let mut sink = Sink::new(cmd, a.out.clone())?;
        if a.transform {
            let p = PairPoint::new(self.need(&a.tau, "tau")?, self.need(&a.s, "s")?)?;
            let q = bounds::transform_pair(&p, &self.need(&a.theta, "theta")?)?;
            return sink.finish(&json_line(&q)?);
        }
        if a.corollary {
            let q = bounds::corollary_half(&self.need(&a.s, "s")?)?;
            return sink.finish(&json_line(&q)?);
        }
        let records = self.load_records(a, &mut sink)?;
        let explicit = a.record.is_some();
        if let Some(range) = &a.sweep {
            let taus = self.sweep(range)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["tau", "phi_lower", "upper", "empirical", "record"])
                .map_err(csv_err)?;
            for tau in taus {
                let b = bracket(&tau, a.d, &records, explicit)?;
                let (emp, id) = match &b.empirical {
                    Some(e) => (
                        rational::decimal_string(&rational::ceil_decimal(&e.value, bounds::DEFAULT_DIGITS), bounds::DEFAULT_DIGITS),
                        e.record.clone(),
                    ),
                    None => (String::new(), String::new()),
                };
                w.write_record([
                    rational::format(&b.tau),
                    rational::decimal_string(&b.lower, bounds::DEFAULT_DIGITS),
                    rational::format(&b.upper),
                    emp,
                    id,
                ])
                .map_err(csv_err)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
            let csv = String::from_utf8(bytes).expect("csv output is utf-8");
            return sink.finish(&csv);
        }
        let tau = self.need(&a.tau, "tau")?;
        let b = bracket(&tau, a.d, &records, explicit)?;
        sink.finish(&json_line(&b)?)
    }

    fn sweep(&self, range: &str) -> Result<Vec<Rational>> {
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(Error::Input(format!("sweep '{range}' must be start:stop:step")));
        };
        let (start, stop, step) = (self.rat(start)?, self.rat(stop)?, self.rat(step)?);
        if !rational::is_positive(&start) || !rational::is_positive(&step) || stop < start {
            return Err(Error::Input(format!(
                "sweep '{range}' needs 0 < start <= stop and step > 0"
            )));
        }
        let count = ((&stop - &start) / &step).floor();
        if count > rational::int(1_000_000) {
            return Err(Error::Input(format!("sweep '{range}' has more than 10^6 points")));
        }
        let mut out = Vec::new();
        let mut t = start;
        while t <= stop {
            out.push(t.clone());
            t += &step;
        }
        Ok(out)
    }

    fn enumerate(&self, cmd: &Command, a: &EnumerateArgs) -> Result<()> {
        let sink = Sink::new(cmd, a.out.clone())?;
        let tau = self.rat(&a.tau)?;
        let eps = self.rat(&a.eps)?;
        let summary = if a.m == 2 {
            explorer::enumerate_halfcell(a.d, &tau, a.mode, &eps)?
        } else {
            explorer::enumerate_grid(a.d, a.m, &tau, a.mode, &eps)?
        };
        sink.finish(&json_line(&summary)?)?;
        if summary.unconverged > 0 {
            return Err(Error::Unconverged(format!("{} couples hit the iteration cap", summary.unconverged)));
        }
        Ok(())
    }

    fn search(&self, cmd: &Command, a: &SearchArgs) -> Result<()> {
        let mut sink = Sink::new(cmd, a.out.clone())?;
        let mut p = SearchParams::new(a.d, a.m, self.rat(&a.tau)?, a.mode, a.budget, a.seed, self.rat(&a.eps)?);
        p.low_gap_bias = a.low_gap_bias;
        p.timestamp = a.timestamp.clone().unwrap_or_else(explorer::now);
        for spec in &a.inject {
            p.inject.push(self.config(spec, &mut sink)?);
        }
        let records = explorer::random_search(&p)?;
        let mut text = String::new();
        for r in &records {
            text.push_str(&serde_json::to_string(r)?);
            text.push('\n');
        }
        sink.finish(&text)
    }

    fn replay(&self, a: &ReplayArgs) -> Result<()> {
        let m = RunManifest::read(&a.manifest)?;
        m.check_inputs()?;
        let mut wrapped = serde_json::Map::new();
        wrapped.insert(m.command.clone(), m.params.clone());
        let mut cmd: Command = serde_json::from_value(serde_json::Value::Object(wrapped))
            .map_err(|e| Error::Input(format!("{}: {e}", a.manifest.display())))?;
        if matches!(cmd, Command::Replay(_)) {
            return Err(Error::Input("a manifest cannot replay another replay".into()));
        }
        let target = |old: &Option<PathBuf>| -> Option<PathBuf> {
            match (&a.out_dir, old) {
                (Some(dir), Some(p)) => Some(dir.join(p.file_name().unwrap_or(p.as_os_str()))),
                _ => old.clone(),
            }
        };
        let out = match &mut cmd {
            Command::Eval(x) => { x.out = target(&x.out); x.out.clone() }
            Command::Optimize(x) => { x.out = target(&x.out); x.out.clone() }
            Command::Bounds(x) => { x.out = target(&x.out); x.out.clone() }
            Command::Enumerate(x) => { x.out = target(&x.out); x.out.clone() }
            Command::Search(x) => { x.out = target(&x.out); x.out.clone() }
            Command::Replay(_) => unreachable!(),
        };
        self.dispatch(cmd)?;
        if let (Some(path), Some(want)) = (out, m.outputs.first()) {
            let got = crate::manifest::hash_file(&path)?;
            if got != want.sha256 {
                return Err(Error::Inconsistent(format!(
                    "{} differs from the recorded output {}",
                    path.display(),
                    want.path.display()
                )));
            }
            eprintln!("replay: {} matches {}", path.display(), want.sha256);
        }
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.into())
}

/// Bracket for `(τ, d)`. With several records, the lowest `hi` among those
/// that apply is used; an explicitly chosen record must apply.
fn bracket(tau: &Rational, d: usize, records: &[SearchRecord], explicit: bool) -> Result<bounds::SigmaBracket> {
    if explicit {
        return bounds::sigma_bracket(tau, d, records.first());
    }
    let best = records
        .iter()
        .filter(|r| r.config.spec().d() <= d && check_condition(&r.config, tau, ConditionMode::Weak))
        .min_by(|x, y| x.certified.hi.cmp(&y.certified.hi).then_with(|| x.id.cmp(&y.id)));
    bounds::sigma_bracket(tau, d, best)
}
