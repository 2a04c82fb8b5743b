//! The `hedonic` command-line front end.
//!
//! Exit status is 0 on success, 1 when an analysis cannot produce a result
//! (an undefined score, an empty window) and 2 for usage and I/O errors.

mod args;
mod commands;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;

pub use args::{Cli, Command};

use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANALYSIS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UndefinedScore | Error::EmptyWindow { .. } | Error::Precondition(_) => EXIT_ANALYSIS,
        _ => EXIT_USAGE,
    }
}

/// Reads a `key=value` file into flags. `key=true` becomes a bare flag and
/// `key=false` is dropped.
pub fn config_args(text: &str) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("expected `key=value`, got `{line}`"),
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key == "config" {
            return Err(Error::Parse {
                line: i + 1,
                message: "config files cannot include other config files".into(),
            });
        }
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => out.push(format!("--{key}={value}").into()),
        }
    }
    Ok(out)
}

fn find_config(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = s.strip_prefix("--config=") {
            return Some(v.into());
        }
    }
    None
}

/// Splices config-file flags in right after the subcommand so that
/// explicit flags, which come later, take precedence.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = find_config(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let extra = config_args(&text)?;
    let at = args
        .iter()
        .position(|a| Command::NAMES.contains(&a.to_string_lossy().as_ref()))
        .map_or(args.len(), |i| i + 1);
    let mut out = args[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status. Errors are reported on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| commands::execute(&cli)),
            Err(e) => Err(Error::invalid(format!("cannot start {n} workers: {e}"))),
        },
        None => commands::execute(&cli),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
