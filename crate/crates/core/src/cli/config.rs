//! Job files: one `key = value` pair per line, `#` starts a comment.
//!
//! ```text
//! field      = mixed 2 2            # required
//! extension  = eisenstein 2 -2      # optional, default: trivial
//! precision  = 12                   # >= 4
//! r_max      = 4                    # >= 1
//! n_max      = 16                   # >= 1
//! suite      = all                  # unit-groups | ramification | tate | lcft | all
//! format     = text                 # text | json
//! seed       = 7                    # optional, enables random samples
//! level      = 6                    # optional, truncation level for `cohomology`
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{parse_extension_steps, Extension, ExtensionSpec};
use crate::localfield::{parse_field_spec, FieldSpec};

pub const DEFAULT_PRECISION: usize = 12;
pub const PRECISION_ENV: &str = "LCFT_PRECISION";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    UnitGroups,
    Ramification,
    Tate,
    Lcft,
    All,
}

impl Suite {
    pub fn includes(self, s: Suite) -> bool {
        self == Suite::All || self == s
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "unit-groups" => Ok(Suite::UnitGroups),
            "ramification" => Ok(Suite::Ramification),
            "tate" => Ok(Suite::Tate),
            "lcft" => Ok(Suite::Lcft),
            "all" => Ok(Suite::All),
            _ => Err(format!(
                "unknown suite '{s}' (expected unit-groups, ramification, tate, lcft or all)"
            )),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::UnitGroups => "unit-groups",
            Suite::Ramification => "ramification",
            Suite::Tate => "tate",
            Suite::Lcft => "lcft",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (expected text or json)")),
        }
    }
}

/// A validated job.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub field_text: String,
    pub extension_text: String,
    pub field: FieldSpec,
    pub extension: ExtensionSpec,
    pub precision: usize,
    pub r_max: usize,
    pub n_max: usize,
    pub suite: Suite,
    pub format: Format,
    pub seed: Option<u64>,
    pub level: Option<usize>,
}

/// Values given on the command line or in the environment.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision: Option<usize>,
    pub r_max: Option<usize>,
    pub suite: Option<Suite>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

const KEYS: [&str; 9] = [
    "field",
    "extension",
    "precision",
    "r_max",
    "n_max",
    "suite",
    "format",
    "seed",
    "level",
];

struct Entry {
    value: String,
    line: usize,
    col: usize,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn number<T: FromStr>(e: &Entry, key: &str) -> Result<T> {
    e.value.parse::<T>().map_err(|_| {
        parse_err(
            e.line,
            e.col,
            format!("{key} must be a non-negative integer, got '{}'", e.value),
        )
    })
}

fn entries(text: &str) -> Result<BTreeMap<String, Entry>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some(eq) = body.find('=') else {
            let col = body.len() - body.trim_start().len() + 1;
            return Err(parse_err(line, col, "expected 'key = value'"));
        };
        let key = body[..eq].trim();
        let key_col = body[..eq].len() - body[..eq].trim_start().len() + 1;
        if !KEYS.contains(&key) {
            return Err(parse_err(line, key_col, format!("unknown key '{key}'")));
        }
        let rest = &body[eq + 1..];
        let lead = rest.len() - rest.trim_start().len();
        let col = body[..eq + 1 + lead].chars().count() + 1;
        let value = rest.trim().to_string();
        if value.is_empty() {
            return Err(parse_err(line, col, format!("empty value for '{key}'")));
        }
        if out.insert(key.to_string(), Entry { value, line, col }).is_some() {
            return Err(parse_err(line, key_col, format!("duplicate key '{key}'")));
        }
    }
    Ok(out)
}

impl JobSpec {
    /// Parse and validate a job file; `ov` takes precedence over the file.
    pub fn parse(text: &str, ov: &Overrides) -> Result<JobSpec> {
        let map = entries(text)?;
        let field_e = map
            .get("field")
            .ok_or_else(|| Error::Validation("missing required key 'field'".into()))?;
        let field = parse_field_spec(&field_e.value, field_e.line, field_e.col)?;
        let (extension_text, extension) = match map.get("extension") {
            Some(e) => (e.value.clone(), parse_extension_steps(&e.value, e.line, e.col)?),
            None => (String::new(), ExtensionSpec::trivial()),
        };
        let file_precision = map
            .get("precision")
            .map(|e| number::<usize>(e, "precision"))
            .transpose()?;
        let precision = ov.precision.or(file_precision).unwrap_or(DEFAULT_PRECISION);
        let r_max = match ov.r_max {
            Some(r) => r,
            None => map.get("r_max").map(|e| number(e, "r_max")).transpose()?.unwrap_or(4),
        };
        let n_max = map.get("n_max").map(|e| number(e, "n_max")).transpose()?.unwrap_or(16);
        let suite = match (ov.suite, map.get("suite")) {
            (Some(s), _) => s,
            (None, Some(e)) => e.value.parse().map_err(|m: String| parse_err(e.line, e.col, m))?,
            (None, None) => Suite::All,
        };
        let format = match (ov.format, map.get("format")) {
            (Some(f), _) => f,
            (None, Some(e)) => e.value.parse().map_err(|m: String| parse_err(e.line, e.col, m))?,
            (None, None) => Format::Text,
        };
        let seed = match ov.seed {
            Some(s) => Some(s),
            None => map.get("seed").map(|e| number(e, "seed")).transpose()?,
        };
        let level = map.get("level").map(|e| number(e, "level")).transpose()?;
        let job = JobSpec {
            field_text: field_e.value.clone(),
            extension_text,
            field,
            extension,
            precision,
            r_max,
            n_max,
            suite,
            format,
            seed,
            level,
        };
        job.validate()?;
        Ok(job)
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision < 4 {
            return Err(Error::Validation(format!(
                "precision must be at least 4, got {}",
                self.precision
            )));
        }
        if self.r_max < 1 {
            return Err(Error::Validation("r_max must be at least 1".into()));
        }
        if self.n_max < 1 {
            return Err(Error::Validation("n_max must be at least 1".into()));
        }
        if self.level == Some(0) {
            return Err(Error::Validation("level must be at least 1".into()));
        }
        Ok(())
    }

    /// Build the field and the extension; validates Eisenstein data.
    pub fn build(&self) -> Result<Extension> {
        let base = self.field.build(self.precision)?;
        self.extension.build(&base)
    }

    pub fn bounds(&self) -> crate::lcft::Bounds {
        crate::lcft::Bounds {
            r_max: self.r_max,
            n_max: self.n_max,
        }
    }
}
