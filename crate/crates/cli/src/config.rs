//! Argument normalisation and INI config merging.
//!
//! A config file is flat INI: keys in `[global]` (or before any section) are
//! global flags, keys in `[heat]`, `[norm]`, `[indices]`, … apply to that
//! command, and `[norm.lp]`-style sections to a nested command. Every key is
//! the long flag name without dashes. Config values are spliced in ahead of the
//! command-line flags, so explicit flags win.

use std::path::Path;

use anyhow::{Context, Result};
use ini::Ini;

pub const SEED_ENV: &str = "NUSOB_SEED";
pub const THREADS_ENV: &str = "NUSOB_THREADS";

/// Rewrites single-dash long flags (`-delta 4/5`) to `--delta 4/5`. Single
/// letters (`-N`, `-p`) are left for clap's short flags and negative numbers
/// are untouched.
pub fn normalize_dashes<I: IntoIterator<Item = String>>(args: I) -> Vec<String> {
    let mut out = Vec::new();
    let mut passthrough = false;
    for a in args {
        if passthrough {
            out.push(a);
            continue;
        }
        if a == "--" {
            passthrough = true;
            out.push(a);
            continue;
        }
        let b = a.as_bytes();
        let long_single = b.len() > 2 && b[0] == b'-' && b[1].is_ascii_alphabetic() && {
            let name = a[1..].split('=').next().unwrap_or("");
            name.len() > 1 && name.bytes().all(|c| c.is_ascii_alphanumeric() || c == b'-' || c == b'_')
        };
        out.push(if long_single { format!("-{a}") } else { a });
    }
    out
}

fn section_tokens(ini: &Ini, section: Option<&str>, skip: &[&str]) -> Vec<String> {
    let Some(props) = ini.section(section) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (k, v) in props.iter() {
        if skip.contains(&k) || k == "config" {
            continue;
        }
        match v.trim() {
            "true" => out.push(format!("--{k}")),
            "false" => {}
            v => out.push(format!("--{k}={v}")),
        }
    }
    out
}

/// Splices config-file flags into `argv`. `path` is the command chain, e.g.
/// `["indices", "embed"]`. Seed and thread keys are dropped when their
/// environment override is set.
pub fn merge(argv: &[String], file: &Path, path: &[&str]) -> Result<Vec<String>> {
    let ini = Ini::load_from_file(file).with_context(|| format!("config: cannot read {}", file.display()))?;
    let mut skip = Vec::new();
    if std::env::var_os(SEED_ENV).is_some() {
        skip.push("seed");
    }
    if std::env::var_os(THREADS_ENV).is_some() {
        skip.push("threads");
    }
    let mut global = section_tokens(&ini, None, &skip);
    global.extend(section_tokens(&ini, Some("global"), &skip));

    let mut local = Vec::new();
    for depth in 1..=path.len() {
        local.extend(section_tokens(&ini, Some(&path[..depth].join(".")), &skip));
    }

    // Position of the innermost subcommand token.
    let mut at = 0;
    let mut want = path.iter();
    let mut next = want.next();
    for (i, a) in argv.iter().enumerate().skip(1) {
        match next {
            Some(name) if a == name => {
                at = i;
                next = want.next();
            }
            None => break,
            _ => {}
        }
    }
    let mut out = vec![argv[0].clone()];
    out.extend(global);
    out.extend_from_slice(&argv[1..=at]);
    out.extend(local);
    out.extend_from_slice(&argv[at + 1..]);
    Ok(out)
}
