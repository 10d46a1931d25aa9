//! `--config` support: the file's flags are spliced into the argument list
//! right after the subcommand token, so any flag the user typed later wins.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::{Map, Value};

use crate::args::SUBCOMMANDS;

/// Global flags that take a value.
const VALUED_GLOBALS: [&str; 2] = ["--out-dir", "--config"];

/// Returns `argv` with the flags of the `--config` file (if any) inserted.
pub fn expand_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = find_config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    let Value::Object(mut doc) = doc else {
        bail!("config {} must hold a JSON object", path.display());
    };
    // A run manifest carries its flags under `params_json`.
    let (command, flags) = match doc.remove("params_json") {
        Some(Value::Object(params)) => (doc.get("command").and_then(Value::as_str).map(str::to_owned), params),
        Some(_) => bail!("config {}: params_json must be an object", path.display()),
        None => (None, doc),
    };
    let injected = flags_from_map(&flags)?;

    let mut out = argv;
    let pos = match subcommand_position(&out) {
        Some(p) => {
            if let Some(c) = &command {
                if out[p].to_str() != Some(c.as_str()) {
                    bail!("manifest was written by `{c}`, not `{}`", out[p].to_string_lossy());
                }
            }
            p
        }
        None => {
            let Some(c) = command else {
                bail!("no subcommand given and the config names none");
            };
            out.push(c.into());
            out.len() - 1
        }
    };
    out.splice(pos + 1..pos + 1, injected);
    Ok(out)
}

fn find_config_path(argv: &[OsString]) -> Option<std::path::PathBuf> {
    let mut it = argv.iter().skip(1);
    let mut found = None;
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            found = it.next().map(|p| Path::new(p).to_path_buf());
        } else if let Some(rest) = s.strip_prefix("--config=") {
            found = Some(Path::new(rest).to_path_buf());
        }
    }
    found
}

/// Index of the first positional token naming a subcommand.
fn subcommand_position(argv: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let s = argv[i].to_string_lossy();
        if VALUED_GLOBALS.contains(&s.as_ref()) {
            i += 2;
            continue;
        }
        if SUBCOMMANDS.contains(&s.as_ref()) {
            return Some(i);
        }
        if !s.starts_with('-') {
            return None;
        }
        i += 1;
    }
    None
}

/// Turns `{"K": 10, "physical": true, "method": "series"}` into flags.
fn flags_from_map(map: &Map<String, Value>) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (key, value) in map {
        let flag = format!("--{key}");
        match value {
            Value::Bool(true) => out.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => {
                out.push(flag.into());
                out.push(n.to_string().into());
            }
            Value::String(s) => {
                out.push(flag.into());
                out.push(s.into());
            }
            Value::Array(items) => {
                let parts = items
                    .iter()
                    .map(|v| match v {
                        Value::Number(n) => Ok(n.to_string()),
                        Value::String(s) => Ok(s.clone()),
                        _ => bail!("config key `{key}`: list entries must be numbers or strings"),
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push(flag.into());
                out.push(parts.join(",").into());
            }
            Value::Object(_) => bail!("config key `{key}` cannot be an object"),
        }
    }
    Ok(out)
}
