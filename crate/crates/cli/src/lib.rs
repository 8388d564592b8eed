//! Command line driver: fixtures in, deterministic reports out.

pub mod commands;
pub mod error;
pub mod fixture;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{value_parser, Arg, ArgMatches};

use commands::{registry, Command, Context, Options};
use error::CliError;
use report::RunReport;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

fn cli(commands: &[Box<dyn Command>]) -> clap::Command {
    let common = [
        Arg::new("fixture").help("Fixture file, file without .json, or directory holding fixture.json"),
        Arg::new("element")
            .long("element")
            .visible_alias("mc")
            .value_name("NAME")
            .help("Twisting element: a name from `elements` or a generator"),
        Arg::new("second-element").long("second-element").value_name("NAME"),
        Arg::new("max-arity")
            .long("max-arity")
            .value_name("N")
            .value_parser(value_parser!(usize)),
        Arg::new("report")
            .long("report")
            .value_name("PATH")
            .help("Write the machine-readable report here (`-` for stdout)"),
        Arg::new("seed")
            .long("seed")
            .value_name("N")
            .value_parser(value_parser!(u64))
            .help("Run the randomized suite from this seed"),
        Arg::new("count")
            .long("count")
            .value_name("N")
            .value_parser(value_parser!(u64))
            .help("Number of random instances"),
    ];
    let mut app = clap::Command::new("linfty")
        .about("Exact computations with curved L∞-algebras, modules and resolutions")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for c in commands {
        let mut sub = clap::Command::new(c.name()).about(c.about()).args(common.iter().cloned());
        if c.writes_output() {
            sub = sub.arg(Arg::new("output").long("output").short('o').value_name("PATH"));
        }
        app = app.subcommand(sub);
    }
    app.version(env!("CARGO_PKG_VERSION"))
}

fn options(m: &ArgMatches, writes_output: bool) -> Options {
    Options {
        fixture: m.get_one::<String>("fixture").map(PathBuf::from),
        element: m.get_one::<String>("element").cloned(),
        second_element: m.get_one::<String>("second-element").cloned(),
        max_arity: m.get_one::<usize>("max-arity").copied(),
        seed: m.get_one::<u64>("seed").copied(),
        count: m.get_one::<u64>("count").copied(),
        output: writes_output
            .then(|| m.get_one::<String>("output").map(PathBuf::from))
            .flatten(),
    }
}

/// The arguments echoed into the report: everything after the subcommand
/// except the report destination, so reports do not depend on where they
/// are written.
fn echo(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--report" {
            skip = true;
        } else if !a.starts_with("--report=") {
            out.push(a.clone());
        }
    }
    out
}

/// Parses `argv` (program name first) and runs the command.
pub fn execute<I, T>(argv: I) -> Result<(RunReport, Option<String>), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let commands = registry();
    let matches = cli(&commands)
        .try_get_matches_from(&argv)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (name, sub) = matches.subcommand().expect("a subcommand is required");
    let command = commands.iter().find(|c| c.name() == name).expect("registered");
    let opts = options(sub, command.writes_output());
    let fixture = opts.fixture.as_deref().map(fixture::load).transpose()?;
    let ctx = Context { options: opts, fixture };
    let rest: Vec<String> = argv.iter().skip(2).map(|a| a.to_string_lossy().into_owned()).collect();
    let mut report = RunReport::new(name, echo(&rest));
    command.run(&ctx, &mut report)?;
    Ok((report, sub.get_one::<String>("report").cloned()))
}

/// Runs the CLI and returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    // help and version are not errors
    if let Err(e) = cli(&registry()).try_get_matches_from(&argv) {
        if matches!(
            e.kind(),
            clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion
                | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
        ) {
            let _ = e.print();
            return if e.kind() == clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                EXIT_INPUT
            } else {
                EXIT_PASS
            };
        }
    }
    let start = Instant::now();
    match execute(argv) {
        Ok((report, destination)) => {
            match destination.as_deref() {
                Some("-") => print!("{}", report.to_json()),
                Some(path) => {
                    if let Err(e) = std::fs::write(path, report.to_json()) {
                        eprintln!("error: {path}: {e}");
                        return EXIT_INPUT;
                    }
                    print!("{}", report.to_human(start.elapsed()));
                }
                None => print!("{}", report.to_human(start.elapsed())),
            }
            if report.passed {
                EXIT_PASS
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}
