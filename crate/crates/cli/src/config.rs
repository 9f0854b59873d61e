//! Optional JSON config file mirroring the command-line flags, plus the
//! grid mini-syntax shared by several flags. Flags always win over the
//! config file.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;

#[derive(Debug, Default)]
pub struct Config(serde_json::Map<String, Value>);

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let value: Value =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        match value {
            Value::Object(map) => Ok(Self(map)),
            _ => bail!("config {} must be a JSON object", path.display()),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Number(n)) => Ok(n.as_f64()),
            Some(Value::String(s)) => Ok(Some(s.parse()?)),
            Some(other) => bail!("config key {key}: expected a number, got {other}"),
        }
    }

    pub fn u64(&self, key: &str) -> Result<Option<u64>> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Number(n)) => n
                .as_u64()
                .map(Some)
                .with_context(|| format!("config key {key}: expected a nonnegative integer")),
            Some(Value::String(s)) => Ok(Some(s.parse()?)),
            Some(other) => bail!("config key {key}: expected an integer, got {other}"),
        }
    }

    /// Grids may be written as the same string the flag takes, a single
    /// number, or a JSON array of numbers.
    pub fn grid(&self, key: &str) -> Result<Option<String>> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Number(n)) => Ok(Some(n.to_string())),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(Value::Array(items)) => {
                let parts: Result<Vec<String>> = items
                    .iter()
                    .map(|v| match v {
                        Value::Number(n) => Ok(n.to_string()),
                        _ => bail!("config key {key}: array entries must be numbers"),
                    })
                    .collect();
                Ok(Some(parts?.join(",")))
            }
            Some(other) => bail!("config key {key}: expected a grid, got {other}"),
        }
    }

    pub fn string(&self, key: &str) -> Result<Option<String>> {
        match self.0.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(other) => bail!("config key {key}: expected a string, got {other}"),
        }
    }
}

/// `a,b,c` | `lo:hi:count` (inclusive, count >= 2) | single value.
pub fn parse_f64_grid(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        bail!("empty grid");
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            bail!("range grid must be lo:hi:count, got {text}");
        }
        let lo: f64 = parts[0].trim().parse()?;
        let hi: f64 = parts[1].trim().parse()?;
        let count: usize = parts[2].trim().parse()?;
        if count < 2 {
            bail!("range grid needs at least 2 points");
        }
        let step = (hi - lo) / (count - 1) as f64;
        return Ok((0..count).map(|i| lo + step * i as f64).collect());
    }
    text.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(Into::into))
        .collect()
}

/// `a,b,c` | `lo:hi:step` (inclusive) | single value.
pub fn parse_u32_grid(text: &str) -> Result<Vec<u32>> {
    let text = text.trim();
    if text.is_empty() {
        bail!("empty grid");
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            bail!("range grid must be lo:hi:step, got {text}");
        }
        let lo: u32 = parts[0].trim().parse()?;
        let hi: u32 = parts[1].trim().parse()?;
        let step: u32 = parts[2].trim().parse()?;
        if step == 0 || hi < lo {
            bail!("range grid needs hi >= lo and step >= 1");
        }
        let mut out: Vec<u32> = (lo..=hi).step_by(step as usize).collect();
        if *out.last().unwrap() != hi {
            out.push(hi); // always include the endpoint
        }
        return Ok(out);
    }
    text.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(Into::into))
        .collect()
}
