//! On-disk formats: JSON code files and single-line CSV vector files.
//!
//! A code file records everything needed to rebuild a `CodeInstance`
//! deterministically — the field, the shape, the construction recipe, and
//! the explicit lines and points — with all field elements as decimal
//! integers. Loading revalidates every configuration invariant, so a
//! tampered file is rejected rather than producing a corrupt code.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::code::CodeInstance;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::geometry::{Configuration, Line, Point};

/// How the configuration was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    /// Intersections of a line family with a transversal family.
    Grid,
    /// Independently sampled points on each line.
    Random,
}

impl std::fmt::Display for Construction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Construction::Grid => write!(f, "grid"),
            Construction::Random => write!(f, "random"),
        }
    }
}

/// The serialized form of a code: field order, shape, construction tag and
/// seed, lines as [a, b, c], optional grid lines, and the n×m points as
/// [x, y] pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub construction: Construction,
    pub seed: u64,
    pub lines: Vec<[u64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_lines: Option<Vec<[u64; 3]>>,
    pub points: Vec<Vec<[u64; 2]>>,
}

impl CodeFile {
    /// Serializes a built code together with its construction recipe.
    pub fn from_code(code: &CodeInstance, construction: Construction, seed: u64) -> CodeFile {
        let config = code.config();
        let line_triple = |l: &Line| [l.a().value(), l.b().value(), l.c().value()];
        CodeFile {
            q: code.spec().order(),
            n: config.n(),
            m: config.m(),
            d: code.d(),
            construction,
            seed,
            lines: config.lines().iter().map(line_triple).collect(),
            grid_lines: config.grid_lines().map(|g| g.iter().map(line_triple).collect()),
            points: config
                .points()
                .iter()
                .map(|row| row.iter().map(|p| [p.x().value(), p.y().value()]).collect())
                .collect(),
        }
    }

    /// Rebuilds the code, re-running every validation: primality of q,
    /// canonical field elements, shape consistency, general position, the
    /// grid consistency when grid lines are recorded, and the generator
    /// matrix rank. The construction tag must match the recorded data.
    pub fn to_code(&self) -> Result<CodeInstance> {
        let spec = FieldSpec::new(self.q)?;
        if self.lines.len() != self.n {
            return Err(Error::Parameter(format!(
                "{} lines recorded but n = {}",
                self.lines.len(),
                self.n
            )));
        }
        if self.points.len() != self.n || self.points.iter().any(|row| row.len() != self.m) {
            return Err(Error::Parameter(format!(
                "points must form an {}×{} array",
                self.n, self.m
            )));
        }
        match (self.construction, &self.grid_lines) {
            (Construction::Grid, None) => {
                return Err(Error::Parameter(
                    "construction \"grid\" requires the grid_lines field".into(),
                ));
            }
            (Construction::Random, Some(_)) => {
                return Err(Error::Parameter(
                    "construction \"random\" must not carry grid_lines".into(),
                ));
            }
            _ => {}
        }
        if let Some(grid) = &self.grid_lines {
            if grid.len() != self.m {
                return Err(Error::Parameter(format!(
                    "{} grid lines recorded but m = {}",
                    grid.len(),
                    self.m
                )));
            }
        }
        let parse_line = |triple: &[u64; 3]| -> Result<Line> {
            Line::new(spec.element(triple[0])?, spec.element(triple[1])?, spec.element(triple[2])?)
        };
        let lines: Vec<Line> = self.lines.iter().map(parse_line).collect::<Result<_>>()?;
        let grid_lines: Option<Vec<Line>> = match &self.grid_lines {
            Some(grid) => Some(grid.iter().map(parse_line).collect::<Result<_>>()?),
            None => None,
        };
        let mut points = Vec::with_capacity(self.n);
        for row in &self.points {
            let mut parsed = Vec::with_capacity(self.m);
            for &[x, y] in row {
                parsed.push(Point::new(spec.element(x)?, spec.element(y)?)?);
            }
            points.push(parsed);
        }
        let config = Configuration::from_parts(lines, points, grid_lines)?;
        CodeInstance::build(config, self.d)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<CodeFile> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<CodeFile> {
        CodeFile::from_json(&std::fs::read_to_string(path)?)
    }
}

/// One CSV line of decimal integers, newline-terminated — the vector file
/// format shared by codewords, received words, and coefficient vectors.
pub fn format_vector(entries: &[FieldElement]) -> String {
    let mut out = String::new();
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&e.value().to_string());
    }
    out.push('\n');
    out
}

/// Parses a single CSV line of decimal integers into field elements,
/// rejecting malformed integers and values outside [0, q).
pub fn parse_vector(spec: FieldSpec, s: &str) -> Result<Vec<FieldElement>> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Err(Error::ParseVector("empty vector".into()));
    }
    trimmed
        .split(',')
        .map(|token| {
            let token = token.trim();
            let value: u64 = token
                .parse()
                .map_err(|_| Error::ParseVector(format!("bad integer {token:?}")))?;
            spec.element(value)
        })
        .collect()
}
