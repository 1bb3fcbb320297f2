//! Text form of extension towers.
//!
//! ```text
//! tower := step (";" step)*
//! step  := "unram" f | "eisenstein" coeff+
//! ```
//!
//! Eisenstein digit coordinates refer to the residue field of the maximal
//! unramified subextension.

use serde::{Deserialize, Serialize};

use super::Extension;
use crate::error::{Error, Result};
use crate::localfield::{tokenize, CoeffSpec, Cursor, Field};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    Unram(usize),
    Eisenstein(Vec<CoeffSpec>),
}

/// A tower normalized to one unramified step followed by at most one
/// Eisenstein step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    pub steps: Vec<Step>,
    pub f: usize,
    pub eisenstein: Vec<CoeffSpec>,
}

impl ExtensionSpec {
    pub fn from_steps(steps: Vec<Step>) -> Result<Self> {
        let mut f = 1usize;
        let mut eisenstein = Vec::new();
        for s in &steps {
            match s {
                Step::Unram(d) => {
                    if *d == 0 {
                        return Err(Error::Validation("unramified step of degree 0".into()));
                    }
                    f *= d;
                }
                Step::Eisenstein(c) => {
                    if !eisenstein.is_empty() {
                        return Err(Error::Unsupported("towers with more than one Eisenstein step".into()));
                    }
                    if c.is_empty() {
                        return Err(Error::Validation("Eisenstein step without coefficients".into()));
                    }
                    eisenstein = c.clone();
                }
            }
        }
        Ok(ExtensionSpec { steps, f, eisenstein })
    }

    pub fn trivial() -> Self {
        ExtensionSpec {
            steps: Vec::new(),
            f: 1,
            eisenstein: Vec::new(),
        }
    }

    pub fn build(&self, base: &Field) -> Result<Extension> {
        Extension::new(base, self.f, &self.eisenstein)
    }
}

/// Parse `;`-separated tower steps; errors carry `line` and columns offset by `col0`.
pub fn parse_extension_steps(text: &str, line: usize, col0: usize) -> Result<ExtensionSpec> {
    let mut steps = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        let toks = tokenize(part, line, col0 + offset)?;
        offset += part.chars().count() + 1;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor::new(&toks, line, col0 + offset - 1);
        let step = match c.word("'unram' or 'eisenstein'")?.as_str() {
            "unram" => {
                let f = c.int("residue degree")?;
                if f < 1 {
                    return Err(Error::Validation(format!("unramified degree {f} must be positive")));
                }
                Step::Unram(f as usize)
            }
            "eisenstein" => {
                let cs = c.coeffs()?;
                if cs.is_empty() {
                    return Err(c.err("expected Eisenstein coefficients"));
                }
                Step::Eisenstein(cs)
            }
            other => {
                return Err(Error::Parse {
                    line,
                    column: toks[0].1,
                    message: format!("unknown tower step '{other}'"),
                });
            }
        };
        if !c.done() {
            return Err(c.err("unexpected trailing input"));
        }
        steps.push(step);
    }
    ExtensionSpec::from_steps(steps)
}
