use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use unibranch_core::branching::{canonical_decomposition, Setting};
use unibranch_core::chars::{MultChar, Torus};
use unibranch_core::group::{cache::CACHE_ENV, k_order, Named, DEFAULT_BUDGET};
use unibranch_core::verify::{all_passed, run_suite, Suite, VerifyConfig};

/// Branching of principal series of unramified U(1,1) to K, on finite quotients K/K_N.
#[derive(Parser, Debug)]
#[command(name = "unibranch", version)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Residue characteristic (an odd prime).
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// A non-square unit modulo p; E = F(sqrt(epsilon)).
    #[arg(long, global = true, default_value_t = 2)]
    epsilon: u64,
    /// Truncation level: groups are taken modulo K_N.
    #[arg(long = "N", visible_alias = "level", global = true, default_value_t = 2)]
    n: u32,
    /// Refuse to enumerate groups larger than this.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Cache directory for enumerated groups and classes (also read from UNIBRANCH_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Write records here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orders of K/K_m, named subgroups and the class count of K/K_N.
    Enumerate,
    /// Decomposition certificates for V_chi^{K_N}.
    Branch {
        /// trivial, delta-ext, depth1-first, or comma-separated exponents.
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        chi: Option<String>,
        /// Every character of T_0/T_N.
        #[arg(long)]
        all: bool,
    },
    /// Run a verification suite; one record per checked claim.
    Verify {
        /// double-cosets, intertwining-dims, sd-irreducible, normalizers, hensel,
        /// orbits, near-identity, identification or structural.
        suite: Suite,
        /// Random trials for the hensel suite.
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

impl RunArgs {
    fn config(&self) -> VerifyConfig {
        let mut cfg = VerifyConfig::new(self.p, self.epsilon, self.n);
        cfg.budget = self.budget;
        cfg.cache_dir = self
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        cfg
    }
}

/// Records go to `--out` or standard output, one JSON object per line.
struct Sink {
    lines: Vec<String>,
}

impl Sink {
    fn push(&mut self, value: &impl serde::Serialize) -> Result<()> {
        self.lines.push(serde_json::to_string(value)?);
        Ok(())
    }

    fn flush(self, out: Option<&PathBuf>) -> Result<()> {
        let mut text = self.lines.join("\n");
        text.push('\n');
        match out {
            Some(path) => {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)?;
                }
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))
            }
            None => Ok(std::io::stdout().lock().write_all(text.as_bytes())?),
        }
    }
}

fn select_chi(torus: &Torus, selector: &str) -> Result<MultChar> {
    let first = |pred: &dyn Fn(&MultChar) -> bool| torus.characters().find(|c| pred(c));
    let found = match selector {
        "trivial" => Some(torus.trivial()),
        "delta-ext" => {
            let delta = torus.delta();
            first(&|c| torus.central_character(c).is_ok_and(|t| t == delta))
        }
        "depth1-first" => first(&|c| {
            let prof = torus.depth_profile(c);
            prof.minimal && prof.depth == 1
        }),
        exps => {
            let parsed = exps
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .with_context(|| format!("unknown character selector {exps:?}"))?;
            Some(MultChar::from_exponents(torus.structure(), &parsed)?)
        }
    };
    found.with_context(|| format!("no character matches {selector:?} at this level"))
}

fn enumerate(run: &RunArgs, sink: &mut Sink) -> Result<bool> {
    let cfg = run.config();
    let level = cfg.level_at(run.n)?;
    let ctx = level.ctx();
    let orders: Vec<_> = (1..=run.n)
        .map(|m| Ok(json!({ "m": m, "order": k_order(&ctx.at_level(m)?) })))
        .collect::<Result<_>>()?;
    let mut names = vec![
        Named::Borel,
        Named::Torus0,
        Named::Center,
        Named::UnipotentK,
        Named::CenterUnipotent,
    ];
    names.extend((1..=run.n).map(Named::BorelFilt));
    names.extend((1..run.n).map(Named::Filtration));
    let subgroups = names
        .into_iter()
        .map(|name| Ok(json!({ "name": name.to_string(), "order": level.subgroup(name)?.order() })))
        .collect::<Result<Vec<_>>>()?;
    let consistent = level.order() as u64 == k_order(ctx);
    sink.push(&json!({
        "schema": 1,
        "record": "enumerate",
        "p": run.p,
        "epsilon": run.epsilon,
        "level": run.n,
        "order": level.order(),
        "orders": orders,
        "subgroups": subgroups,
        "classes": level.classes().count(),
        "order_matches_formula": consistent,
    }))?;
    Ok(consistent)
}

fn branch(run: &RunArgs, chi: Option<&str>, all: bool, sink: &mut Sink) -> Result<bool> {
    let setting = Setting::new(run.config().level_at(run.n)?)?;
    let torus = setting.torus();
    let chars: Vec<MultChar> = if all {
        torus.characters().collect()
    } else {
        vec![select_chi(torus, chi.unwrap_or("trivial"))?]
    };
    let mut ok = true;
    for c in &chars {
        match canonical_decomposition(&setting, c) {
            Ok(dec) => {
                ok &= dec.certificate.passed;
                sink.push(&dec.certificate)?;
            }
            Err(e) => {
                ok = false;
                sink.push(&json!({ "schema": 1, "record": "error", "chi": c.record(), "error": e.to_string() }))?;
            }
        }
    }
    Ok(ok)
}

fn verify(run: &RunArgs, suite: Suite, trials: u32, seed: u64, sink: &mut Sink) -> Result<bool> {
    let mut cfg = run.config();
    cfg.trials = trials;
    cfg.seed = seed;
    let lines = run_suite(suite, &cfg)?;
    if lines.is_empty() {
        bail!("suite {suite} checked nothing at level {}", run.n);
    }
    for l in &lines {
        sink.push(l)?;
    }
    Ok(all_passed(&lines))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink = Sink { lines: Vec::new() };
    let outcome = match &cli.command {
        Command::Enumerate => enumerate(&cli.run, &mut sink),
        Command::Branch { chi, all } => branch(&cli.run, chi.as_deref(), *all, &mut sink),
        Command::Verify { suite, trials, seed } => verify(&cli.run, *suite, *trials, *seed, &mut sink),
    };
    let passed = match outcome.and_then(|ok| sink.flush(cli.run.out.as_ref()).map(|_| ok)) {
        Ok(ok) => ok,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
