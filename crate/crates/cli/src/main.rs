//! Command-line front end: classify jigsaw groups, reduce points, run the
//! census, and render tessellation figures.
//!
//! Exit codes: 0 on any definite verdict, 1 on parse errors, 2 on invalid
//! jigsaws (with the failing gluing named), 3 when the verdict is
//! inconclusive.

mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use jigsaw_core::cuspset::{
    build_cover, classify_group_with, reduce_point_traced, PointVerdict, StepAction, Verdict,
};
use jigsaw_core::exact::ExtendedRational;
use jigsaw_core::jigsaw::{self, JigsawError, SetMode};
use jigsaw_core::{JigsawGroup, TileType};
use num_rational::BigRational;

#[derive(Parser)]
#[command(name = "jigsaw", version, about = "Exact-arithmetic hyperbolic jigsaw groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify the group of a jigsaw spec (arithmetic / pseudomodular /
    /// specials / inconclusive) and print a JSON report.
    Classify {
        /// Path to a spec JSON file (omit with --weierstrass).
        spec: Option<PathBuf>,
        /// Single-tile Weierstrass mode: three rationals k1 k2 k3.
        #[arg(long, num_args = 3, value_names = ["K1", "K2", "K3"])]
        weierstrass: Option<Vec<String>>,
        /// Extra developing levels for the killer-interval cover.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Reduction step budget (0 = automatic).
        #[arg(long, default_value_t = 0)]
        budget: usize,
        /// Include wall-clock timing in the report (breaks byte determinism).
        #[arg(long)]
        timing: bool,
    },
    /// Reduce a rational point to a cusp or special, printing each step.
    Reduce {
        /// Spec file followed by the point ("355/113", "7", "inf"); with
        /// --weierstrass only the point is given.
        #[arg(value_names = ["SPEC", "POINT"], allow_hyphen_values = true)]
        args: Vec<String>,
        #[arg(long, num_args = 3, value_names = ["K1", "K2", "K3"])]
        weierstrass: Option<Vec<String>>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        budget: usize,
    },
    /// Enumerate all jigsaws over an integral set up to a size and classify
    /// each one.
    Census {
        /// Comma-separated integral tile values, e.g. "1,2" for S(1,2).
        set: String,
        max_size: usize,
        /// Admit a singleton set without a self-matching side.
        #[arg(long)]
        allow_singleton: bool,
    },
    /// Render the developed triangulation as SVG.
    Svg {
        spec: Option<PathBuf>,
        #[arg(long, num_args = 3, value_names = ["K1", "K2", "K3"])]
        weierstrass: Option<Vec<String>>,
        /// Window a b (rationals) on the real axis.
        #[arg(long, num_args = 2, value_names = ["A", "B"], allow_hyphen_values = true)]
        window: Vec<String>,
        /// Crossing depth of the development.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Output file (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

enum CliError {
    Parse(String),
    Invalid(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 1,
            CliError::Invalid(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Invalid(m) => m,
        }
    }
}

impl From<JigsawError> for CliError {
    fn from(e: JigsawError) -> Self {
        match e {
            JigsawError::Parse(_) => CliError::Parse(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let x = ExtendedRational::parse(s)
        .ok_or_else(|| CliError::Parse(format!("cannot parse rational '{s}'")))?;
    x.to_rational()
        .ok_or_else(|| CliError::Parse(format!("'{s}' must be finite")))
}

fn load_group(
    spec: &Option<PathBuf>,
    weierstrass: &Option<Vec<String>>,
) -> Result<JigsawGroup, CliError> {
    if let Some(ks) = weierstrass {
        let k: Vec<BigRational> =
            ks.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
        return Ok(jigsaw::weierstrass(k[0].clone(), k[1].clone(), k[2].clone())?);
    }
    let Some(path) = spec else {
        return Err(CliError::Parse("either a spec file or --weierstrass is required".into()));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let spec = jigsaw::parse_spec(&text)?;
    Ok(jigsaw::group(jigsaw::assemble(spec)?))
}

fn parse_set(set: &str) -> Result<Vec<TileType>, CliError> {
    let mut tiles = Vec::new();
    for part in set.split(',') {
        let n: u64 = part
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("bad integral tile value '{part}'")))?;
        if n == 0 {
            return Err(CliError::Parse("tile values must be ≥ 1".into()));
        }
        tiles.push(TileType::delta(n));
    }
    tiles.sort();
    tiles.dedup();
    Ok(tiles)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.cmd {
        Cmd::Classify { spec, weierstrass, depth, budget, timing } => {
            let g = load_group(&spec, &weierstrass)?;
            let t0 = Instant::now();
            let r = classify_group_with(&g, depth, budget);
            let elapsed = timing.then(|| t0.elapsed().as_millis());
            println!(
                "{}",
                serde_json::to_string_pretty(&report::report_json(&r, elapsed))
                    .expect("report serializes")
            );
            Ok(if r.verdict == Verdict::Inconclusive { 3 } else { 0 })
        }
        Cmd::Reduce { args, weierstrass, depth, budget } => {
            let (spec, point) = match (&args[..], &weierstrass) {
                ([point], Some(_)) => (None, point.clone()),
                ([spec, point], None) => (Some(PathBuf::from(spec)), point.clone()),
                _ => {
                    return Err(CliError::Parse(
                        "expected SPEC and POINT, or POINT with --weierstrass".into(),
                    ))
                }
            };
            let g = load_group(&spec, &weierstrass)?;
            let x = ExtendedRational::parse(&point)
                .ok_or_else(|| CliError::Parse(format!("cannot parse point '{point}'")))?;
            let cover = build_cover(&g, depth);
            let (verdict, trace) = reduce_point_traced(&g, &cover, &x, budget);
            for (i, step) in trace.iter().enumerate() {
                let action = match &step.action {
                    StepAction::Translate { periods } => format!("T^({periods}·L)"),
                    StepAction::Killer { center, witness } => {
                        format!("killer interval about {center}, witness {witness:?}")
                    }
                    StepAction::Uncovered => "uncovered point: ray classification".to_string(),
                };
                println!(
                    "step {:>3}: {} (den {}) -> {} via {}",
                    i + 1,
                    step.before,
                    step.before.denom(),
                    step.after,
                    action
                );
            }
            match verdict {
                PointVerdict::Cusp { word } => {
                    println!("verdict: cusp");
                    println!("word length: {}", word.len());
                    let img = g.evaluate(&word).apply(&x);
                    println!("word({x}) = {img}");
                    Ok(0)
                }
                PointVerdict::Special { witness, .. } => {
                    let fixed = witness
                        .rational_fixed_points()
                        .expect("special witnesses are hyperbolic");
                    let pts: Vec<String> = fixed.iter().map(|p| p.to_string()).collect();
                    println!("verdict: special");
                    println!("witness: {witness:?}");
                    println!("witness fixed points: {}", pts.join(", "));
                    Ok(0)
                }
                PointVerdict::Unknown { steps } => {
                    println!("verdict: unknown (after {steps} steps)");
                    Ok(3)
                }
            }
        }
        Cmd::Census { set, max_size, allow_singleton } => {
            let tiles = parse_set(&set)?;
            let mode =
                if allow_singleton { SetMode::WeierstrassSingleton } else { SetMode::Standard };
            if !jigsaw::validate_set(&tiles, mode) {
                return Err(CliError::Invalid(format!(
                    "'{set}' is not a valid jigsaw set (try --allow-singleton)"
                )));
            }
            let jigsaws = jigsaw::census(&tiles, max_size)?;
            let mut counts: std::collections::BTreeMap<&'static str, usize> =
                std::collections::BTreeMap::new();
            println!("{:<6} {:<12} {:<8} {:<16} {}", "size", "signature", "L", "verdict", "key");
            for j in &jigsaws {
                let key = j.canonical_key();
                let g = jigsaw::group(j.clone());
                let r = jigsaw_core::classify_group(&g);
                let verdict = report::verdict_str(r.verdict);
                *counts.entry(verdict).or_insert(0) += 1;
                let sig: Vec<String> = r
                    .signature
                    .iter()
                    .map(|(t, m)| format!("{}^{m}", report::tile_str(t)))
                    .collect();
                println!(
                    "{:<6} {:<12} {:<8} {:<16} {}",
                    j.size(),
                    sig.join("·"),
                    r.length,
                    verdict,
                    key
                );
            }
            let footer: Vec<String> = counts.iter().map(|(v, n)| format!("{v}: {n}")).collect();
            println!("total: {} | {}", jigsaws.len(), footer.join(" | "));
            Ok(0)
        }
        Cmd::Svg { spec, weierstrass, window, depth, output } => {
            let g = load_group(&spec, &weierstrass)?;
            if window.len() != 2 {
                return Err(CliError::Parse("--window needs two rationals".into()));
            }
            let a = parse_rational(&window[0])?;
            let b = parse_rational(&window[1])?;
            if a > b {
                return Err(CliError::Parse("--window bounds must be ordered".into()));
            }
            let report = g.jigsaw().is_integral().then(|| classify_group_with(&g, 3, 0));
            let doc = svg::render(&g, &svg::SvgOptions { window: (a, b), depth }, report.as_ref());
            match output {
                Some(path) => std::fs::write(&path, doc).map_err(|e| {
                    CliError::Parse(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{doc}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
