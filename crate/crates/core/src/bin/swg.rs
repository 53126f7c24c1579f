//! Command-line front end: `swg <subcommand> [--config FILE] [--out FILE] [--key value ...]`.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Arg, ArgMatches, Command as Cli};

use swgalerkin::config::{parse_config, parse_key_values, Command, KeyValues, RunConfig, Subcommand};
use swgalerkin::experiments::{run_convergence, run_energy_check, run_eps_comparison, run_stability_probe};
use swgalerkin::{report, superacc, Error};

fn cli() -> Cli {
    let mut app = Cli::new("swg")
        .about("Galerkin finite element experiments for the shallow-water systems")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true);
    for sub in Subcommand::ALL {
        let mut c = Cli::new(sub.name())
            .about(sub.about())
            .arg(
                Arg::new("config")
                    .long("config")
                    .value_name("FILE")
                    .help("key = value file; flags override its entries"),
            )
            .arg(
                Arg::new("out")
                    .long("out")
                    .value_name("FILE")
                    .help("CSV destination [default: standard output]"),
            );
        for spec in sub.schema() {
            let help = match spec.default {
                Some(d) => format!("{} [default: {d}]", spec.help),
                None => format!("{} [required]", spec.help),
            };
            c = c.arg(Arg::new(spec.key).long(spec.key).value_name("VALUE").help(help));
        }
        app = app.subcommand(c);
    }
    app
}

fn resolve(sub: Subcommand, m: &ArgMatches) -> swgalerkin::Result<RunConfig> {
    let file = match m.get_one::<String>("config") {
        Some(path) => parse_key_values(&fs::read_to_string(path)?)?,
        None => KeyValues::new(),
    };
    let flags: KeyValues = sub
        .schema()
        .iter()
        .filter_map(|s| m.get_one::<String>(s.key).map(|v| (s.key.to_string(), v.clone())))
        .collect();
    parse_config(sub, &file, &flags, m.get_one::<String>("out").map(PathBuf::from))
}

fn run(cfg: &RunConfig) -> swgalerkin::Result<Vec<u8>> {
    let mut buf = Vec::new();
    match &cfg.command {
        Command::Converge(c) => report::write_convergence(&mut buf, cfg, &run_convergence(c)?)?,
        Command::Superacc { ns } => report::write_superacc(&mut buf, cfg, &superacc::standard_suite(ns)?)?,
        Command::Stability(c) => report::write_stability(&mut buf, cfg, &run_stability_probe(c)?)?,
        Command::CompareEps { config, .. } => report::write_eps(&mut buf, cfg, &run_eps_comparison(config)?)?,
        Command::EnergyCheck(c) => report::write_energy(&mut buf, cfg, &run_energy_check(c)?)?,
    }
    Ok(buf)
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (name, m) = matches.subcommand().expect("subcommand is required");
    let sub: Subcommand = name.parse().expect("subcommands come from the schema");
    let cfg = match resolve(sub, m) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("swg {name}: {e}");
            return ExitCode::from(2);
        }
    };
    let out = match run(&cfg) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("swg {name}: {e}");
            return ExitCode::FAILURE;
        }
    };
    let written = match &cfg.output {
        Some(path) => fs::write(path, &out),
        None => io::stdout().lock().write_all(&out),
    };
    if let Err(e) = written {
        eprintln!("swg {name}: {}", Error::from(e));
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
