//! `--config FILE` support.
//!
//! The file holds `key = value` lines (blank lines and `#` comments are
//! skipped). Each entry becomes `--key=value` and is spliced in right after
//! the subcommand name, ahead of the user's own flags; since every subcommand
//! lets a repeated flag override itself, explicit flags win.

use std::ffi::OsString;
use std::path::Path;

use crate::args::COMMANDS;
use crate::error::CliError;

pub fn parse_config(text: &str, origin: &str) -> Result<Vec<OsString>, CliError> {
    let mut flags = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{origin}:{}: expected key = value, got {line:?}", n + 1)))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key == "config" || key.starts_with('-') {
            return Err(CliError::Config(format!("{origin}:{}: bad key {key:?}", n + 1)));
        }
        flags.push(OsString::from(format!("--{key}={}", value.trim())));
    }
    Ok(flags)
}

/// Finds the value of `--config` on the raw command line.
fn config_path(args: &[OsString]) -> Result<Option<OsString>, CliError> {
    let mut found = None;
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            let v = it.next().ok_or_else(|| CliError::Config("--config needs a file".into()))?;
            found = Some(v.clone());
        } else if let Some(v) = s.strip_prefix("--config=") {
            found = Some(OsString::from(v));
        }
    }
    Ok(found)
}

/// Returns `args` with the config-file flags inserted after the subcommand.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let flags = parse_config(&text, &path.display().to_string())?;
    let Some(pos) = args.iter().position(|a| COMMANDS.contains(&a.to_string_lossy().as_ref())) else {
        // no subcommand: let clap report it
        return Ok(args);
    };
    let mut out = args[..=pos].to_vec();
    out.extend(flags);
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}
