//! `key = value` configuration files. Keys are flag names without the leading dashes;
//! anything given on the command line wins.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use clap::Parser;

use crate::{Cli, Opts};

const BOOLEAN_KEYS: [&str; 2] = ["json", "csv"];
const VALUE_KEYS: [&str; 12] = [
    "p",
    "r",
    "n",
    "k",
    "j",
    "t-max",
    "max-deg",
    "max-weight",
    "pages",
    "weight",
    "model",
    "out",
];

fn file_args(command: &str, path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut args = vec!["loopalg".to_string(), command.to_string()];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("{}:{}: expected `key = value`", path.display(), lineno + 1);
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if BOOLEAN_KEYS.contains(&key.as_str()) {
            match value {
                "true" | "yes" | "1" => args.push(format!("--{key}")),
                "false" | "no" | "0" => {}
                _ => bail!(
                    "{}:{}: {key} takes true or false",
                    path.display(),
                    lineno + 1
                ),
            }
        } else if VALUE_KEYS.contains(&key.as_str()) {
            args.push(format!("--{key}"));
            args.push(value.to_string());
        } else {
            bail!("{}:{}: unknown key {key}", path.display(), lineno + 1);
        }
    }
    Ok(args)
}

/// Options from the command line, with gaps filled from the config file if one was given.
pub fn merged(cli: &Cli) -> Result<Opts> {
    let Some(path) = &cli.opts.config else {
        return Ok(cli.opts.clone());
    };
    let args = file_args(cli.command.name(), path)?;
    let file = Cli::try_parse_from(&args)
        .map_err(|e| {
            let first = e.to_string().lines().next().unwrap_or_default().to_string();
            anyhow::anyhow!("{}: {first}", path.display())
        })?
        .opts;
    let cmd = cli.opts.clone();
    let json = cmd.json || (file.json && !cmd.csv);
    let csv = cmd.csv || (file.csv && !cmd.json);
    Ok(Opts {
        p: cmd.p.or(file.p),
        r: cmd.r.or(file.r),
        n: cmd.n.or(file.n),
        k: cmd.k.or(file.k),
        j: cmd.j.or(file.j),
        t_max: cmd.t_max.or(file.t_max),
        max_deg: cmd.max_deg.or(file.max_deg),
        max_weight: cmd.max_weight.or(file.max_weight),
        pages: cmd.pages.or(file.pages),
        weight: cmd.weight.or(file.weight),
        model: cmd.model.or(file.model),
        json,
        csv,
        out: cmd.out.or(file.out),
        config: cmd.config,
    })
}
