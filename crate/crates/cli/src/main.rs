use std::io::Write;
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sgps_core::error::{Error, Result};
use sgps_core::jsonl;
use sgps_core::monoid::OrderedMonoid;
use sgps_core::properties::{decide_baer, decide_generalized, decide_quasi_baer, ClassKind};
use sgps_core::ring::{builtin, enumerate_endomorphisms, Caps, FiniteRing, Side, CATALOG};
use sgps_core::sgps::SkewContext;
use sgps_core::spec::Spec;
use sgps_core::verify::{
    counterexample_search, verify_corollaries, verify_prop34, verify_prop35, verify_prop36, verify_thm37,
    Outcome, SearchProperty, TheoremReport, VerifyConfig, DEFAULT_BUDGET,
};

/// Environment variable holding default caps, e.g. `subsets=16,ideals=16`.
const CAPS_ENV: &str = "SGPS_CAPS";

#[derive(Parser)]
#[command(name = "sgps", about = "Annihilator classes of finite rings and their skew generalized power series rings")]
struct Cli {
    #[arg(long, value_enum, default_value_t = OutputMode::Text, global = true)]
    output: OutputMode,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Text,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect builtin or spec-file rings and decide their classes.
    Ring {
        #[command(subcommand)]
        command: RingCommand,
    },
    /// Run a bounded verification harness.
    Verify(VerifyArgs),
    /// Scan a catalog for class separations and Armendariz failures.
    Search(SearchArgs),
}

#[derive(Subcommand)]
enum RingCommand {
    /// List the builtin catalog.
    List,
    /// Print tables, idempotents and endomorphisms.
    Show {
        #[arg(long)]
        ring: String,
    },
    /// Decide annihilator classes.
    Check {
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value_t = ClassArg::All)]
        class: ClassArg,
        #[arg(long, value_enum, default_value_t = SideArg::Right)]
        side: SideArg,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Baer,
    QuasiBaer,
    GenBaer,
    GenQuasiBaer,
    All,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Right,
    Left,
    Both,
}

impl SideArg {
    fn sides(self) -> Vec<Side> {
        match self {
            SideArg::Right => vec![Side::Right],
            SideArg::Left => vec![Side::Left],
            SideArg::Both => vec![Side::Right, Side::Left],
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Statement {
    Prop34,
    #[value(name = "prop35-1")]
    Prop35Baer,
    #[value(name = "prop35-2")]
    Prop35QuasiBaer,
    #[value(name = "prop36-1")]
    Prop36Baer,
    #[value(name = "prop36-2")]
    Prop36QuasiBaer,
    #[value(name = "thm37-baer")]
    Thm37Baer,
    #[value(name = "thm37-quasibaer")]
    Thm37QuasiBaer,
    Corollaries,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    statement: Statement,
    #[arg(long)]
    ring: String,
    /// `nat:natural`, `nat:trivial`, `int:natural`, `natK:product`, ...
    #[arg(long)]
    monoid: Option<String>,
    /// Index into the endomorphism list of `ring show`; 0 is the identity.
    #[arg(long, default_value_t = 0)]
    sigma: usize,
    /// Box side: exponents with coordinates in [0, N).
    #[arg(long = "box", default_value_t = 2)]
    box_n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Comma-separated ring names or spec files; defaults to the builtin catalog.
    #[arg(long)]
    catalog: Option<String>,
    /// Comma-separated subset of classes, asymmetry, armendariz.
    #[arg(long)]
    properties: Option<String>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

/// Records produced so far and the exit code they imply.
struct Run {
    records: Vec<Value>,
    code: i32,
}

fn caps_from_env() -> Result<Caps> {
    match std::env::var(CAPS_ENV) {
        Ok(text) => Caps::parse(&text),
        Err(_) => Ok(Caps::default()),
    }
}

/// A spec file when `name` is an existing path, a builtin name otherwise.
fn load_ring(name: &str, caps: &Caps) -> Result<(FiniteRing, Option<OrderedMonoid>)> {
    let path = Path::new(name);
    if path.is_file() {
        let spec = Spec::load(path, caps)?;
        return Ok((spec.ring, spec.monoid));
    }
    builtin(name, caps)
        .map(|r| (r, None))
        .map_err(|e| match e {
            Error::Spec(msg) => Error::Spec(format!(
                "{msg}; expected a spec file or one of zn:N, gf4, prod:A,B, matK:A, utK:A (catalog: {})",
                CATALOG.join(" ")
            )),
            other => other,
        })
}

fn cmd_ring(command: RingCommand, caps: &Caps, run: &mut Run) -> Result<()> {
    match command {
        RingCommand::List => {
            for name in CATALOG {
                let ring = builtin(name, caps)?;
                run.records.push(json!({
                    "record": "ring",
                    "name": name,
                    "order": ring.order(),
                }));
            }
        }
        RingCommand::Show { ring } => {
            let (ring, _) = load_ring(&ring, caps)?;
            run.records.push(json!({
                "record": "ring_tables",
                "ring": ring.label(),
                "order": ring.order(),
                "zero": ring.zero(),
                "one": ring.one(),
                "add": ring.add_table(),
                "mul": ring.mul_table(),
            }));
            run.records.push(json!({
                "record": "idempotents",
                "ring": ring.label(),
                "idempotents": ring.idempotents(),
            }));
            let images: Vec<Vec<usize>> = enumerate_endomorphisms(&ring, caps)?
                .iter()
                .map(|s| s.image())
                .collect();
            run.records.push(json!({
                "record": "endomorphisms",
                "ring": ring.label(),
                "images": images,
            }));
        }
        RingCommand::Check { ring, class, side } => {
            let (ring, _) = load_ring(&ring, caps)?;
            let classes = match class {
                ClassArg::All => vec![ClassArg::Baer, ClassArg::QuasiBaer, ClassArg::GenBaer, ClassArg::GenQuasiBaer],
                c => vec![c],
            };
            for c in classes {
                for &s in &side.sides() {
                    let verdict = match c {
                        ClassArg::Baer => decide_baer(&ring, s, caps)?,
                        ClassArg::QuasiBaer => decide_quasi_baer(&ring, s, caps)?,
                        ClassArg::GenBaer => decide_generalized(&ring, ClassKind::Baer, s, caps)?,
                        ClassArg::GenQuasiBaer => decide_generalized(&ring, ClassKind::QuasiBaer, s, caps)?,
                        ClassArg::All => unreachable!("expanded above"),
                    };
                    verdict.recheck(&ring)?;
                    run.records.extend(verdict.records());
                }
            }
        }
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs, caps: &Caps, run: &mut Run) -> Result<()> {
    let (ring, spec_monoid) = load_ring(&args.ring, caps)?;
    let monoid = match &args.monoid {
        Some(m) => OrderedMonoid::parse(m)?,
        None => spec_monoid.unwrap_or_else(OrderedMonoid::nat),
    };
    let endos = enumerate_endomorphisms(&ring, caps)?;
    let sigma = endos.get(args.sigma).cloned().ok_or_else(|| {
        let options: Vec<String> = endos
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{i}={:?}", s.image()))
            .collect();
        Error::Spec(format!(
            "sigma {} out of range; valid selectors: {}",
            args.sigma,
            options.join(" ")
        ))
    })?;
    if args.statement == Statement::Corollaries && args.sigma != 0 {
        return Err(Error::Spec("the corollaries are untwisted; use --sigma 0".into()));
    }
    let ring = Arc::new(ring);
    let cfg = VerifyConfig {
        support_box: monoid.exponent_box(args.box_n),
        budget: args.budget,
        seed: args.seed,
        samples: args.samples,
        caps: *caps,
    };
    let reports: Vec<TheoremReport> = if args.statement == Statement::Corollaries {
        verify_corollaries(&ring, args.box_n, &cfg)?
    } else {
        let ctx = SkewContext::with_sigma(Arc::clone(&ring), monoid, sigma)?;
        vec![match args.statement {
            Statement::Prop34 => verify_prop34(&ctx, &cfg)?,
            Statement::Prop35Baer => verify_prop35(&ctx, ClassKind::Baer, &cfg)?,
            Statement::Prop35QuasiBaer => verify_prop35(&ctx, ClassKind::QuasiBaer, &cfg)?,
            Statement::Prop36Baer => verify_prop36(&ctx, ClassKind::Baer, &cfg)?,
            Statement::Prop36QuasiBaer => verify_prop36(&ctx, ClassKind::QuasiBaer, &cfg)?,
            Statement::Thm37Baer => verify_thm37(&ctx, ClassKind::Baer, &cfg)?,
            Statement::Thm37QuasiBaer => verify_thm37(&ctx, ClassKind::QuasiBaer, &cfg)?,
            Statement::Corollaries => unreachable!("handled above"),
        }]
    };
    for r in &reports {
        run.records.extend(r.records());
    }
    run.code = if reports.iter().any(|r| r.outcome == Outcome::Fail) {
        5
    } else if reports.iter().any(|r| r.outcome == Outcome::HypothesisNotMet) {
        4
    } else {
        0
    };
    Ok(())
}

fn cmd_search(args: SearchArgs, caps: &Caps, run: &mut Run) -> Result<()> {
    let names: Vec<String> = match &args.catalog {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect(),
        None => CATALOG.iter().map(|s| s.to_string()).collect(),
    };
    // Product names contain commas, so a component that does not resolve on
    // its own is joined onto the previous name.
    let mut rings: Vec<FiniteRing> = Vec::new();
    let mut pending = String::new();
    for name in names {
        let candidate = if pending.is_empty() { name.clone() } else { format!("{pending},{name}") };
        match load_ring(&candidate, caps) {
            Ok((r, _)) => {
                rings.push(r);
                pending.clear();
            }
            Err(Error::Spec(_)) if candidate.starts_with("prod:") => pending = candidate,
            Err(e) => return Err(e),
        }
    }
    if !pending.is_empty() {
        load_ring(&pending, caps)?;
    }
    let properties = match &args.properties {
        Some(list) => list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(SearchProperty::parse)
            .collect::<Result<Vec<_>>>()?,
        None => SearchProperty::ALL.to_vec(),
    };
    let outcome = counterexample_search(&rings, &properties, caps, args.budget);
    run.records.extend(outcome.findings.iter().map(|f| f.record()));
    match outcome.error {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Text lines are a rendering of the JSON records, nothing more.
fn text_line(record: &Value) -> String {
    let Some(obj) = record.as_object() else {
        return record.to_string();
    };
    let kind = obj.get("record").map(text_value).unwrap_or_default();
    let fields: Vec<String> = obj
        .iter()
        .filter(|(k, v)| k.as_str() != "record" && !v.is_null())
        .map(|(k, v)| format!("{k}={}", text_value(v)))
        .collect();
    format!("{kind}: {}", fields.join(" "))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut run = Run {
        records: Vec::new(),
        code: 0,
    };
    let result = caps_from_env().and_then(|caps| match cli.command {
        Command::Ring { command } => cmd_ring(command, &caps, &mut run),
        Command::Verify(args) => cmd_verify(args, &caps, &mut run),
        Command::Search(args) => cmd_search(args, &caps, &mut run),
    });
    if let Err(e) = &result {
        run.code = e.exit_code();
        if cli.output == OutputMode::Jsonl {
            run.records.push(jsonl::error_record(e));
        }
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let written = match cli.output {
        OutputMode::Jsonl => out.write_all(jsonl::render(run.records, run.code).as_bytes()),
        OutputMode::Text => {
            let mut text = String::new();
            for r in &run.records {
                text.push_str(&text_line(r));
                text.push('\n');
            }
            if let Err(e) = &result {
                eprintln!("error: {e}");
            }
            out.write_all(text.as_bytes())
        }
    };
    if written.is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(run.code as u8)
}
