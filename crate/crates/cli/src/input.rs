//! File loading with readable errors.

use std::path::Path;

use cpc_core::analysis::PartitionTags;
use cpc_core::{ClassicalCode, OperationalGraph};
use serde::de::DeserializeOwned;

use crate::bundle::CodeBundle;
use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))
}

/// Parses JSON; syntax and type errors name the line and quote it.
pub fn parse_json<T: DeserializeOwned>(text: &str, origin: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| {
        let line = e.line();
        let context = text
            .lines()
            .nth(line.saturating_sub(1))
            .map(|l| format!("\n  {line} | {}", l.trim_end()))
            .unwrap_or_default();
        CliError::Data(format!("{origin}:{line}:{}: {e}{context}", e.column()))
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    parse_json(&read_text(path)?, &path.display().to_string())
}

/// A classical code from a JSON file, or a built-in name.
pub fn classical_code(spec: &str) -> CliResult<ClassicalCode> {
    let path = Path::new(spec);
    if path.exists() {
        return read_json(path);
    }
    ClassicalCode::builtin(spec).map_err(|_| {
        CliError::Data(format!(
            "{spec:?} is neither a readable file nor a built-in code ({})",
            cpc_core::classical::BUILTIN_NAMES.join(", ")
        ))
    })
}

/// Graph and tags from a bundle, or a bare graph (without tags).
pub fn graph_input(path: &Path) -> CliResult<(OperationalGraph, Option<PartitionTags>)> {
    let text = read_text(path)?;
    let origin = path.display().to_string();
    let value: serde_json::Value = parse_json(&text, &origin)?;
    if value.get("graph").is_some() {
        let bundle: CodeBundle = parse_json(&text, &origin)?;
        bundle.verify()?;
        Ok((bundle.graph, Some(bundle.tags)))
    } else {
        Ok((parse_json(&text, &origin)?, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_errors_carry_line_context() {
        let text = "{\n  \"name\": \"x\",\n  \"k\": oops\n}";
        let err = parse_json::<ClassicalCode>(text, "code.json").unwrap_err().to_string();
        assert!(err.starts_with("code.json:3:"), "{err}");
        assert!(err.contains("3 |   \"k\": oops"), "{err}");
    }

    #[test]
    fn builtin_names_resolve() {
        assert_eq!(classical_code("hamming-7-4-3-bit").unwrap().k(), 4);
        assert!(matches!(classical_code("no-such-code"), Err(CliError::Data(_))));
    }
}
