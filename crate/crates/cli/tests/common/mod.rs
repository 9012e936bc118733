#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

use serde_json::Value;

pub const PARAMS: [&str; 6] = ["--alpha", "0.03", "--beta", "0.05", "--gamma", "0.07"];
pub const UNIFORM: [&str; 6] = [
    "--p1",
    "0.3333333333333333",
    "--p2",
    "0.3333333333333333",
    "--p3",
    "0.3333333333333334",
];

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Run {
    pub fn json(&self) -> Value {
        assert_eq!(self.code, 0, "exit {}: {}", self.code, self.stderr);
        serde_json::from_str(&self.stdout).expect("stdout is JSON")
    }

    /// Stdout with the wall-clock line removed.
    pub fn stable(&self) -> String {
        self.stdout
            .lines()
            .filter(|l| !l.trim_start().starts_with("\"duration_ms\""))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

pub fn overlapdim(args: &[&str], threads: Option<usize>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_overlapdim"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("OVERLAPDIM_THREADS", n.to_string()),
        None => cmd.env_remove("OVERLAPDIM_THREADS"),
    };
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn args<'a>(parts: &[&[&'a str]]) -> Vec<&'a str> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

pub fn validate(doc: &Value) -> Result<(), String> {
    let command = doc["command"].as_str().ok_or("no command field")?;
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(format!("{command}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}
