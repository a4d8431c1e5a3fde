use std::ffi::OsString;
use std::path::Path;

use crate::args::Command;
use crate::error::CliError;

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter();
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

fn flag_values(key: &str, value: &toml::Value) -> Result<Vec<String>, CliError> {
    let flag = format!("--{}", key.replace('_', "-"));
    let scalar = |v: &toml::Value| -> Result<String, CliError> {
        match v {
            toml::Value::String(s) => Ok(s.clone()),
            toml::Value::Integer(i) => Ok(i.to_string()),
            toml::Value::Float(f) => Ok(f.to_string()),
            other => Err(CliError::Input(format!("config key {key:?}: unsupported value {other}"))),
        }
    };
    Ok(match value {
        toml::Value::Boolean(true) => vec![flag],
        toml::Value::Boolean(false) => Vec::new(),
        toml::Value::Array(items) => {
            let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
            let sep = if matches!(key, "include" | "named") { ";" } else { "," };
            vec![flag, parts.join(sep)]
        }
        other => vec![flag, scalar(other)?],
    })
}

/// Reads the `--config` file, if any, and splices its entries in as flags
/// directly after the subcommand name, so that flags typed by the user come
/// later and win.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Input(format!("reading config {}: {e}", Path::new(&path).display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Input(format!("parsing config {}: {e}", Path::new(&path).display())))?;
    let mut injected = Vec::new();
    for (key, value) in &table {
        if key == "config" {
            return Err(CliError::Input("config files cannot include other config files".into()));
        }
        injected.extend(flag_values(key, value)?.into_iter().map(OsString::from));
    }
    let Some(pos) = argv
        .iter()
        .position(|a| Command::NAMES.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(argv);
    };
    let mut out = argv[..=pos].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splices_after_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "q = 4\nobject = \"partial\"\nu = [0, 1]\n").unwrap();
        let argv: Vec<OsString> = ["colorcount", "count", "--config", path.to_str().unwrap(), "--q", "2"]
            .iter()
            .map(OsString::from)
            .collect();
        let out: Vec<String> = expand(argv).unwrap().into_iter().map(|s| s.into_string().unwrap()).collect();
        assert_eq!(&out[..2], &["colorcount", "count"]);
        let q_positions: Vec<usize> = out.iter().enumerate().filter(|(_, a)| *a == "--q").map(|(i, _)| i).collect();
        assert_eq!(q_positions.len(), 2);
        assert_eq!(out[q_positions[0] + 1], "4");
        assert_eq!(out[q_positions[1] + 1], "2");
        assert!(out.windows(2).any(|w| w[0] == "--u" && w[1] == "0,1"));
    }
}
