use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rspin::origami::Origami;
use rspin::spin::{count_by_arf, orbit, orbit_partition, ChainSpin};
use rspin::suites::{self, Check};
use rspin::thurston_veech::{prototype, prototype_checks, validate_partition};

const SCHEMA: &str = "rspin-report/1";

#[derive(Parser)]
#[command(name = "rspin", version, about = "r-spin structures on square-tiled surfaces")]
struct Cli {
    /// Print the machine-readable JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Number of r-spin structures in genus g, split by Arf invariant
    Count {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        r: i64,
    },
    /// Build the prototype origami of a stratum component
    Prototype(PrototypeArgs),
    /// Orbits of the twist action on chain values
    Orbit(OrbitArgs),
    /// Turning number and class of a curve on an origami file
    Winding {
        /// Origami file: square count, then sigma_h and sigma_v in cycle notation
        #[arg(long)]
        origami: PathBuf,
        /// Steps such as "1:B:T 2:L:R", squares numbered from 1
        #[arg(long)]
        curve: String,
    },
    /// Run a verification suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct PrototypeArgs {
    /// Zero orders, comma separated (e.g. 4 or 2,2)
    #[arg(long, value_delimiter = ',', required = true)]
    kappa: Vec<usize>,
    /// Arf invariant, only for even gcd
    #[arg(long)]
    arf: Option<u8>,
    /// Expected genus, checked against the partition
    #[arg(long)]
    g: Option<usize>,
    /// Write the origami file here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long)]
    g: usize,
    #[arg(long)]
    r: i64,
    /// Partition all r^(2g) states into orbits
    #[arg(long, conflicts_with = "start")]
    all: bool,
    /// Values on c_1..c_{2g}, comma separated (default all zero)
    #[arg(long, value_delimiter = ',')]
    start: Option<Vec<i64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Relations,
    Johnson,
    Oracle,
    Gcd,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    /// Genus (johnson: restrict to this genus; gcd: ambient genus)
    #[arg(long)]
    g: Option<usize>,
    /// Modulus for the johnson suite
    #[arg(long)]
    s: Option<i64>,
    /// Random trials (oracle, gcd)
    #[arg(long)]
    trials: Option<usize>,
}

struct Report {
    command: &'static str,
    inputs: Value,
    outputs: Value,
    checks: Vec<Check>,
    text: Vec<String>,
}

impl Report {
    fn new(command: &'static str, inputs: Value) -> Self {
        Report { command, inputs, outputs: json!({}), checks: Vec::new(), text: Vec::new() }
    }
}

fn run(cli: &Cli) -> rspin::Result<Report> {
    match &cli.command {
        Command::Count { g, r } => {
            let c = count_by_arf(*g, *r)?;
            let mut rep = Report::new("count", json!({ "g": g, "r": r }));
            rep.outputs = json!({
                "total": c.total.to_string(),
                "even": c.even.map(|v| v.to_string()),
                "odd": c.odd.map(|v| v.to_string()),
                "enumerated": c.enumerated,
            });
            rep.text.push(format!("genus {g}, r = {r}: {} structures", c.total));
            match (c.even, c.odd) {
                (Some(e), Some(o)) => rep.text.push(format!("Arf 0: {e}\nArf 1: {o}")),
                _ => rep.text.push("r odd: no Arf invariant".into()),
            }
            if c.enumerated {
                rep.text.push("closed form checked by enumeration".into());
            }
            Ok(rep)
        }
        Command::Prototype(a) => {
            let g = validate_partition(&a.kappa)?;
            if let Some(want) = a.g {
                if want != g {
                    return Err(rspin::Error::Partition(format!("{:?} has genus {g}, not {want}", a.kappa)));
                }
            }
            let p = prototype(&a.kappa, a.arf)?;
            let o = &p.built.origami;
            let text = o.to_text();
            if let Some(path) = &a.out {
                std::fs::write(path, &text).map_err(|e| rspin::Error::Parameter(format!("cannot write {}: {e}", path.display())))?;
            }
            let mut rep = Report::new("prototype", json!({ "kappa": a.kappa, "arf": a.arf, "g": g, "out": a.out.as_ref().map(|p| p.display().to_string()) }));
            rep.outputs = json!({
                "template": p.system.name,
                "case": p.choice.case,
                "squares": o.n(),
                "stratum": o.stratum(),
                "genus": o.genus(),
                "spin_modulus": o.spin_modulus(),
                "b_windings": p.b_windings,
                "arf_from_cores": p.arf_from_cores,
                "origami": text,
            });
            rep.checks = prototype_checks(&p).into_iter().map(|(name, pass)| check(name, pass, "")).collect();
            rep.text.push(format!("template {} (case {}), {} squares, stratum {:?}, genus {}", p.system.name, p.choice.case, o.n(), o.stratum(), o.genus()));
            if a.out.is_none() {
                rep.text.push(text.trim_end().to_string());
            }
            Ok(rep)
        }
        Command::Orbit(a) => {
            let mut rep = Report::new("orbit", json!({ "g": a.g, "r": a.r, "all": a.all, "start": a.start }));
            if a.all {
                let sizes = orbit_partition(a.g, a.r)?;
                rep.text.push(format!("{} orbits, sizes {:?}", sizes.len(), sizes));
                rep.outputs = json!({ "orbits": sizes.len(), "sizes": sizes });
            } else {
                let start = a.start.clone().unwrap_or_else(|| vec![0; 2 * a.g]);
                let s = ChainSpin::from_chain_values(a.r, a.g, &start)?;
                let orb = orbit(&s)?;
                let arf = if a.r % 2 == 0 { Some(s.arf_from_chain()?) } else { None };
                rep.text.push(format!("orbit of {:?}: {} states", &s.values[1..], orb.len()));
                if let Some(v) = arf {
                    rep.text.push(format!("Arf {v}"));
                }
                rep.outputs = json!({ "c0": s.values[0], "size": orb.len(), "arf": arf });
            }
            Ok(rep)
        }
        Command::Winding { origami, curve } => {
            let text = std::fs::read_to_string(origami).map_err(|e| rspin::Error::Parse(format!("cannot read {}: {e}", origami.display())))?;
            let o = Origami::parse(&text)?;
            let c = o.parse_curve(curve)?;
            let t = o.turning_number(&c)?;
            let w = o.winding_number(&c)?;
            let h = o.homology_class(&c);
            let mut rep = Report::new("winding", json!({ "origami": origami.display().to_string(), "curve": curve }));
            rep.outputs = json!({ "turning": t, "winding": w.value, "modulus": w.modulus, "class": h.coords });
            rep.text.push(format!("turning {t}, winding {} mod {}, class {h}", w.value, w.modulus));
            Ok(rep)
        }
        Command::Verify(a) => {
            let (name, checks, inputs) = match a.suite {
                Suite::Relations => ("relations", suites::relations_suite(cli.seed)?, json!({ "suite": "relations" })),
                Suite::Johnson => {
                    let gs: Vec<usize> = a.g.map_or(vec![3, 4, 5], |g| vec![g]);
                    let mut pairs = suites::johnson_pairs(&gs);
                    if let Some(s) = a.s {
                        let g = a.g.ok_or_else(|| rspin::Error::Parameter("--s needs --g".into()))?;
                        rspin::johnson::contract(&rspin::johnson::Wedge3::zero(g), s)?;
                        pairs = vec![(g, s)];
                    }
                    ("johnson", suites::johnson_suite(&pairs)?, json!({ "suite": "johnson", "pairs": pairs }))
                }
                Suite::Oracle => {
                    let trials = a.trials.unwrap_or(500);
                    ("oracle", suites::oracle_suite(cli.seed, trials)?, json!({ "suite": "oracle", "trials": trials }))
                }
                Suite::Gcd => {
                    let (g, trials) = (a.g.unwrap_or(5), a.trials.unwrap_or(100));
                    ("gcd", suites::gcd_suite(cli.seed, g, trials)?, json!({ "suite": "gcd", "g": g, "trials": trials }))
                }
            };
            let mut rep = Report::new("verify", inputs);
            rep.text.push(format!("suite {name}: {} checks", checks.len()));
            rep.checks = checks;
            Ok(rep)
        }
    }
}

fn check(name: String, pass: bool, detail: &str) -> Check {
    Check { name, pass, detail: detail.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = run(&cli);
    let ms = start.elapsed().as_millis() as u64;
    match result {
        Ok(rep) => {
            let pass = rep.checks.iter().all(|c| c.pass);
            if cli.json {
                let v = json!({
                    "schema": SCHEMA,
                    "command": rep.command,
                    "seed": cli.seed,
                    "inputs": rep.inputs,
                    "outputs": rep.outputs,
                    "checks": rep.checks,
                    "pass": pass,
                    "timing": { "elapsed_ms": ms },
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("report serializes"));
            } else {
                for l in &rep.text {
                    println!("{l}");
                }
                for c in &rep.checks {
                    let detail = if c.detail.is_empty() { String::new() } else { format!("  ({})", c.detail) };
                    println!("{} {}{detail}", if c.pass { "ok  " } else { "FAIL" }, c.name);
                }
                if !rep.checks.is_empty() {
                    println!("{}", if pass { "all checks passed" } else { "some checks failed" });
                }
                println!("seed {}", cli.seed);
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if cli.json {
                let v = json!({
                    "schema": SCHEMA,
                    "seed": cli.seed,
                    "error": e.to_string(),
                    "pass": false,
                });
                println!("{}", serde_json::to_string_pretty(&v).expect("report serializes"));
            }
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
