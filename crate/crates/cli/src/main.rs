use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bifset_core::rational::RationalFunction;
use bifset_core::report::{bifurcation_superset, AnalyzeOptions, ProbeOptions};
use bifset_core::svg::render_svg;
use bifset_core::values::Settings;
use bifset_core::Error;
use clap::{Args, Parser, Subcommand};

/// Newton-polytope bounds for the bifurcation set of a rational function.
#[derive(Parser, Debug)]
#[command(name = "bifset", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify faces, check hypotheses and assemble the bifurcation superset.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["f", "num"]))]
struct AnalyzeArgs {
    /// The function, e.g. "(x^2+y)/(x+y)" or a polynomial.
    #[arg(long, conflicts_with_all = ["num", "den"])]
    f: Option<String>,
    /// Numerator polynomial.
    #[arg(long)]
    num: Option<String>,
    /// Denominator polynomial (defaults to 1).
    #[arg(long, requires = "num")]
    den: Option<String>,
    /// Comma-separated variable names.
    #[arg(long, value_delimiter = ',', default_value = "x,y")]
    vars: Vec<String>,
    /// Write the JSON report here ("-" for standard output).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write an SVG of the Newton polytopes here (two variables only).
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Sample the Milnor set numerically and compare with the superset.
    #[arg(long)]
    probe: bool,
    #[arg(long, value_delimiter = ',', default_value = "10,30,100,300")]
    radii: Vec<f64>,
    /// Random starts per radius and for numeric searches.
    #[arg(long, default_value_t = 64)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    vanish_tol: f64,
    #[arg(long, default_value_t = 1e-4)]
    margin_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    dedupe_tol: f64,
}

fn write_output(path: &Path, text: &str) -> std::io::Result<()> {
    if path == Path::new("-") {
        print!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text)
    }
}

fn analyze(args: &AnalyzeArgs) -> Result<ExitCode, Error> {
    let f = match (&args.f, &args.num) {
        (Some(text), _) => RationalFunction::parse(text, &args.vars)?,
        (None, Some(num)) => RationalFunction::parse_parts(num, args.den.as_deref().unwrap_or("1"), &args.vars)?,
        (None, None) => unreachable!("clap requires an input"),
    };
    let options = AnalyzeOptions {
        settings: Settings {
            vanish_tol: args.vanish_tol,
            margin_tol: args.margin_tol,
            dedupe_tol: args.dedupe_tol,
            seed: args.seed,
            starts: args.starts,
        },
        probe: args.probe.then(|| ProbeOptions { radii: args.radii.clone(), starts: args.starts, seed: args.seed }),
    };
    let report = bifurcation_superset(&f, &options)?;
    let json_to_stdout = args.json.as_deref() == Some(Path::new("-"));
    if json_to_stdout {
        eprint!("{}", report.to_text());
    } else {
        print!("{}", report.to_text());
    }
    let io = |e: std::io::Error| Error::InvalidInput(format!("cannot write output: {e}"));
    if let Some(path) = &args.json {
        write_output(path, &report.to_json()).map_err(io)?;
    }
    if let Some(path) = &args.svg {
        write_output(path, &render_svg(&report)?).map_err(io)?;
    }
    Ok(if report.hypothesis_refuted() { ExitCode::from(3) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze(args) => match analyze(args) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
