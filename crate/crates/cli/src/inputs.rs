//! Resolving command-line arguments to switches and diagrams.
//!
//! An argument names, in order of preference: an existing file, a file in
//! the asset directory (with or without its `.switch`/`.gauss` extension),
//! or — for diagrams only — an inline Gauss code.

use std::fs;
use std::path::{Path, PathBuf};

use doodle_core::diagram::GaussError;
use doodle_core::switch::SwitchError;
use doodle_core::{FiniteDoodleSwitch, GaussCode};
use thiserror::Error;

pub const ASSET_DIR_VAR: &str = "DOODLE_ASSET_DIR";

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no switch file named {0:?}")]
    MissingSwitch(String),
    #[error("{name}: {source}")]
    Switch {
        name: String,
        #[source]
        source: SwitchError,
    },
    #[error("{name}: {source}")]
    Diagram {
        name: String,
        #[source]
        source: GaussError,
    },
}

pub fn asset_dir() -> PathBuf {
    std::env::var_os(ASSET_DIR_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(doodle_core::assets::DIR))
}

fn locate(arg: &str, extension: &str) -> Option<PathBuf> {
    let direct = Path::new(arg);
    if direct.is_file() {
        return Some(direct.to_path_buf());
    }
    let dir = asset_dir();
    [dir.join(arg), dir.join(format!("{arg}.{extension}"))]
        .into_iter()
        .find(|p| p.is_file())
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// A loaded input together with the name used for it in reports.
#[derive(Debug, Clone)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

/// Reads the raw text of a switch file.
pub fn switch_text(arg: &str) -> Result<(String, String), InputError> {
    let path = locate(arg, "switch").ok_or_else(|| InputError::MissingSwitch(arg.to_string()))?;
    Ok((stem(&path), read(&path)?))
}

pub fn load_switch(arg: &str) -> Result<Named<FiniteDoodleSwitch>, InputError> {
    let (name, text) = switch_text(arg)?;
    let value = FiniteDoodleSwitch::from_text(&text).map_err(|source| InputError::Switch {
        name: name.clone(),
        source,
    })?;
    Ok(Named { name, value })
}

/// The given switches, or `T`, `Tprime`, `Tdoubleprime` when none are given.
pub fn load_switches(args: &[String]) -> Result<Vec<Named<FiniteDoodleSwitch>>, InputError> {
    if args.is_empty() {
        return ["T", "Tprime", "Tdoubleprime"].iter().map(|a| load_switch(a)).collect();
    }
    args.iter().map(|a| load_switch(a)).collect()
}

pub fn load_diagram(arg: &str) -> Result<Named<GaussCode>, InputError> {
    let (name, text) = match locate(arg, "gauss") {
        Some(path) => (stem(&path), read(&path)?),
        None => (arg.to_string(), arg.to_string()),
    };
    let value = GaussCode::parse(&text).map_err(|source| InputError::Diagram {
        name: name.clone(),
        source,
    })?;
    Ok(Named { name, value })
}

pub fn load_diagrams(args: &[String]) -> Result<Vec<Named<GaussCode>>, InputError> {
    args.iter().map(|a| load_diagram(a)).collect()
}
