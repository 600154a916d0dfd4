//! Batch driver behind the `pointerlab` binary.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid flags or parameters,
//! 3 invariant breach during a run, 4 self-test failure.

pub mod args;
pub mod commands;
pub mod output;
pub mod selftest;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

pub use args::Cli;
use args::Command;
use commands::CommandOutput;
use output::{params_digest, sibling, write_atomic, RunManifest};

use crate::error::Error;

pub const EXIT_IO: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_INVARIANT: u8 = 3;
pub const EXIT_SELFTEST: u8 = 4;

/// Maps a library error onto the process exit status.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_)
        | Error::TruncationTooSmall { .. }
        | Error::Scenario { .. }
        | Error::Dimension(_) => EXIT_INVALID,
        Error::Io(_) | Error::Json(_) => EXIT_IO,
        _ => EXIT_INVARIANT,
    }
}

/// Parses `args` (including the program name) and runs.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    ExitCode::from(run(cli))
}

pub fn run(cli: Cli) -> u8 {
    if cli.selftest {
        let mut ok = true;
        for check in selftest::run_selftest() {
            println!("{} {}: {}", if check.passed { "PASS" } else { "FAIL" }, check.name, check.detail);
            ok &= check.passed;
        }
        return if ok { 0 } else { EXIT_SELFTEST };
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand or --selftest is required (see --help)");
        return EXIT_INVALID;
    };
    let start = Instant::now();
    let (result, output_args) = match &command {
        Command::Kitten(a) => (commands::kitten(a), &a.output),
        Command::Pointer(a) => (commands::pointer(a), &a.output),
        Command::Lindblad(a) => (commands::lindblad(a), &a.output),
        Command::Twobody(a) => (commands::twobody(a), &a.output),
    };
    let result = result.and_then(|out| emit(&out, output_args, start));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: &CommandOutput, args: &args::OutputArgs, start: Instant) -> crate::Result<()> {
    let digest = params_digest(out.subcommand, &out.params, out.seed);
    let header = vec![
        format!("pointerlab {} {}", env!("CARGO_PKG_VERSION"), out.subcommand),
        format!("manifest_digest: sha256:{digest}"),
        format!("units: {}", out.units),
    ];
    let Some(path) = &args.out else {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        if args.json {
            serde_json::to_writer_pretty(&mut lock, &out.table.to_json(&digest))?;
            writeln!(lock)?;
        } else {
            lock.write_all(out.table.to_csv(&header).as_bytes())?;
        }
        return Ok(());
    };
    let mut outputs = vec![path.display().to_string()];
    write_atomic(path, out.table.to_csv(&header).as_bytes())?;
    if args.json {
        let json_path = sibling(path, ".json");
        write_atomic(&json_path, &serde_json::to_vec_pretty(&out.table.to_json(&digest))?)?;
        outputs.push(json_path.display().to_string());
    }
    let manifest = RunManifest {
        subcommand: out.subcommand.to_string(),
        params: out.params.clone(),
        seed: out.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        threads: rayon::current_num_threads(),
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs,
        digest,
    };
    write_atomic(&sibling(path, ".manifest.json"), &serde_json::to_vec_pretty(&manifest)?)?;
    Ok(())
}
