//! Command-line driver for the `sensespace` pipeline.
//!
//! Exit status is 0 on success, 2 on usage errors (bad flags, bad config
//! file, invalid parameter values) and 1 on data errors, which are reported
//! as `file:line: message` when the problem has a location.

pub mod args;
pub mod config;
mod run;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::Path;

use clap::{ArgAction, CommandFactory, FromArgMatches};

use args::Cli;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

pub fn command() -> clap::Command {
    Cli::command().mut_subcommands(|s| s.args_override_self(true))
}

/// Value of the last `--config` flag after the subcommand, if any.
fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut found = None;
    let mut it = args.iter().skip(2);
    while let Some(a) = it.next() {
        if a == "--" {
            break;
        }
        if a == "--config" {
            found = it.next().cloned();
        } else if let Some(v) = a.to_str().and_then(|s| s.strip_prefix("--config=")) {
            found = Some(v.into());
        }
    }
    found
}

/// Insert the flags from the subcommand's `--config` file right after the
/// subcommand name, so that flags given on the command line (which come
/// later and override earlier occurrences) take precedence.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let cmd = command();
    let Some(sub) = args.get(1).and_then(|s| s.to_str()).and_then(|s| cmd.find_subcommand(s)) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: cannot read config: {e}", path.display())))?;
    let entries = config::parse_config(&text)
        .map_err(|e| CliError::Usage(format!("{}:{}: {}", path.display(), e.line, e.message)))?;

    let mut injected: Vec<OsString> = Vec::new();
    for entry in entries {
        let at = |m: String| CliError::Usage(format!("{}:{}: {m}", path.display(), entry.line));
        let arg = sub
            .get_arguments()
            .find(|a| a.get_long() == Some(entry.key.as_str()) && !matches!(a.get_id().as_str(), "config" | "help"))
            .ok_or_else(|| at(format!("unknown key {:?} for {}", entry.key, sub.get_name())))?;
        match arg.get_action() {
            ArgAction::SetTrue => match entry.value.as_str() {
                "true" => injected.push(format!("--{}", entry.key).into()),
                "false" => {}
                v => return Err(at(format!("{} expects true or false, got {v:?}", entry.key))),
            },
            _ => injected.push(format!("--{}={}", entry.key, entry.value).into()),
        }
    }
    let mut out = Vec::with_capacity(args.len() + injected.len());
    out.extend(args[..2].iter().cloned());
    out.extend(injected);
    out.extend(args[2..].iter().cloned());
    Ok(out)
}

/// Run the driver on `args` (including the program name). Returns the exit
/// status.
pub fn main_with<W: Write, E: Write>(args: Vec<OsString>, stdout: &mut W, stderr: &mut E) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return e.exit_code();
        }
    };
    let cli = match command()
        .try_get_matches_from(args)
        .and_then(|mut m| Cli::from_arg_matches_mut(&mut m))
    {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{rendered}")
            } else {
                write!(stderr, "{rendered}")
            };
            return code;
        }
    };
    match run::run(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
