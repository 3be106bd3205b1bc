use std::fmt;
use std::fs;
use std::path::Path;

use l0_affine::{wire, L0Error, ProbSpace};
use serde_json::Value;

/// Anything that makes the input unusable; always exit code 2.
#[derive(Debug)]
pub enum InputError {
    Io(String, std::io::Error),
    Json(String, serde_json::Error),
    Invalid(L0Error),
    Usage(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(path, e) => write!(f, "{path}: {e}"),
            InputError::Json(path, e) => write!(f, "{path}: invalid JSON: {e}"),
            InputError::Invalid(e) => {
                // lead with the variant name so scripts can match on it
                let debug = format!("{e:?}");
                let name = debug
                    .split(|c: char| !c.is_alphanumeric())
                    .next()
                    .unwrap_or_default();
                write!(f, "{name}: {e}")
            }
            InputError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<L0Error> for InputError {
    fn from(e: L0Error) -> Self {
        InputError::Invalid(e)
    }
}

pub fn read_json(path: &Path) -> Result<Value, InputError> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| InputError::Io(name.clone(), e))?;
    serde_json::from_str(&text).map_err(|e| InputError::Json(name, e))
}

pub fn read_space(path: Option<&Path>) -> Result<ProbSpace, InputError> {
    let path = path.ok_or_else(|| InputError::Usage("--space FILE is required".into()))?;
    Ok(wire::space_from_json(&read_json(path)?)?)
}

pub fn field<'a>(v: &'a Value, key: &str, path: &Path) -> Result<&'a Value, InputError> {
    v.get(key)
        .ok_or_else(|| InputError::Usage(format!("{}: missing \"{key}\"", path.display())))
}
