//! Gaussian state files.
//!
//! Text form, one keyword per line; numbers may wrap across lines and `#`
//! starts a comment:
//!
//! ```text
//! label thermal n=1
//! n 1
//! mean 0 0
//! cov
//! 3 0
//! 0 3
//! ```
//!
//! Quadratures are ordered `q1 p1 q2 p2 ...` in shot-noise units (vacuum
//! covariance = identity) and `cov` is row-major. The json form carries the
//! same fields: `{"label": "...", "n": 1, "mean": [0, 0], "cov": [[3, 0], [0, 3]]}`.

use std::path::Path;

use gaussfid::{CovarianceMatrix, GaussianState, Tolerances};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Unvalidated file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: usize,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_state(state: &GaussianState, label: Option<&str>) -> Self {
        let v = state.cov().matrix();
        StateFile {
            label: label.map(str::to_owned),
            n: state.modes(),
            mean: state.mean().iter().copied().collect(),
            cov: v.row_iter().map(|r| r.iter().copied().collect()).collect(),
        }
    }

    pub fn mean_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.mean)
    }

    pub fn cov_matrix(&self) -> DMatrix<f64> {
        let d = 2 * self.n;
        DMatrix::from_fn(d, d, |i, j| self.cov[i][j])
    }

    pub fn to_state(&self, tol: Tolerances) -> gaussfid::Result<GaussianState> {
        let cov = CovarianceMatrix::with_tolerances(self.cov_matrix(), tol)?;
        GaussianState::new(self.mean_vector(), cov)
    }

    /// Text serialization with 17 significant digits, so parsing it back is exact.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(label) = &self.label {
            out.push_str(&format!("label {label}\n"));
        }
        out.push_str(&format!("n {}\n", self.n));
        out.push_str("mean");
        for x in &self.mean {
            out.push_str(&format!(" {x:.16e}"));
        }
        out.push_str("\ncov\n");
        for row in &self.cov {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize") + "\n"
    }
}

pub fn read_state_file(path: &Path) -> Result<StateFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    let is_json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    if is_json {
        parse_json(&text, path)
    } else {
        parse_text(&text, path)
    }
}

/// Read and validate a state file.
pub fn parse_state(path: &Path, tol: Tolerances) -> Result<GaussianState, CliError> {
    read_state_file(path)?
        .to_state(tol)
        .map_err(|source| CliError::Invalid {
            path: path.to_owned(),
            source,
        })
}

fn parse_json(text: &str, path: &Path) -> Result<StateFile, CliError> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let err = |message: String| CliError::Parse {
        path: path.to_owned(),
        line: 1,
        message,
    };
    if file.n == 0 {
        return Err(err("n must be at least 1".into()));
    }
    let d = 2 * file.n;
    if file.mean.len() != d {
        return Err(err(format!("mean has {} entries, expected {d}", file.mean.len())));
    }
    if file.cov.len() != d {
        return Err(err(format!("cov has {} rows, expected {d}", file.cov.len())));
    }
    if let Some((i, row)) = file.cov.iter().enumerate().find(|(_, r)| r.len() != d) {
        return Err(err(format!("cov row {} has {} entries, expected {d}", i + 1, row.len())));
    }
    Ok(file)
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Mean,
    Cov,
}

struct TextParser<'a> {
    path: &'a Path,
    label: Option<String>,
    n: Option<usize>,
    mean: Vec<f64>,
    cov: Vec<f64>,
    section: Section,
}

impl TextParser<'_> {
    fn error(&self, line: usize, message: impl Into<String>) -> CliError {
        CliError::Parse {
            path: self.path.to_owned(),
            line,
            message: message.into(),
        }
    }

    fn numbers<'t>(
        &mut self,
        line: usize,
        tokens: impl Iterator<Item = &'t str>,
    ) -> Result<(), CliError> {
        for token in tokens {
            let value: f64 = token
                .parse()
                .map_err(|_| self.error(line, format!("{} entry {token:?} is not a number", self.section_name())))?;
            let d = 2 * self.n.unwrap_or(0);
            let (target, limit) = match self.section {
                Section::Mean => (&mut self.mean, d),
                Section::Cov => (&mut self.cov, d * d),
                Section::None => return Err(self.error(line, format!("unexpected token {token:?}"))),
            };
            if target.len() == limit {
                return Err(self.error(line, format!("too many {} entries, expected {limit}", self.section_name())));
            }
            target.push(value);
        }
        Ok(())
    }

    fn section_name(&self) -> &'static str {
        match self.section {
            Section::Mean => "mean",
            Section::Cov => "cov",
            Section::None => "header",
        }
    }
}

fn parse_text(text: &str, path: &Path) -> Result<StateFile, CliError> {
    let mut p = TextParser {
        path,
        label: None,
        n: None,
        mean: Vec::new(),
        cov: Vec::new(),
        section: Section::None,
    };
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let head = tokens.next().expect("non-empty line has a token");
        match head {
            "label" => {
                p.label = Some(content["label".len()..].trim().to_owned());
                p.section = Section::None;
            }
            "n" => {
                if p.n.is_some() {
                    return Err(p.error(line, "n given twice"));
                }
                let value = tokens.next().ok_or_else(|| p.error(line, "n needs a value"))?;
                let n: usize = value
                    .parse()
                    .ok()
                    .filter(|n| *n > 0)
                    .ok_or_else(|| p.error(line, format!("n must be a positive integer, got {value:?}")))?;
                if tokens.next().is_some() {
                    return Err(p.error(line, "n takes a single value"));
                }
                p.n = Some(n);
                p.section = Section::None;
            }
            "mean" | "cov" => {
                if p.n.is_none() {
                    return Err(p.error(line, format!("{head} before n")));
                }
                let (section, filled) = if head == "mean" {
                    (Section::Mean, !p.mean.is_empty())
                } else {
                    (Section::Cov, !p.cov.is_empty())
                };
                if filled {
                    return Err(p.error(line, format!("{head} given twice")));
                }
                p.section = section;
                p.numbers(line, tokens)?;
            }
            _ => p.numbers(line, content.split_whitespace())?,
        }
    }

    let end = last_line.max(1);
    let n = p.n.ok_or_else(|| p.error(end, "missing n"))?;
    let d = 2 * n;
    if p.mean.len() != d {
        return Err(p.error(end, format!("mean has {} entries, expected {d}", p.mean.len())));
    }
    if p.cov.len() != d * d {
        return Err(p.error(end, format!("cov has {} entries, expected {}", p.cov.len(), d * d)));
    }
    Ok(StateFile {
        label: p.label,
        n,
        mean: p.mean,
        cov: p.cov.chunks(d).map(<[f64]>::to_vec).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<StateFile, CliError> {
        parse_text(text, Path::new("test.state"))
    }

    fn line_of(err: CliError) -> usize {
        match err {
            CliError::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn parses_wrapped_numbers_and_comments() {
        let file = parse("# vacuum\nlabel vac\nn 1\nmean\n0\n0  # origin\ncov 1 0\n0 1\n").unwrap();
        assert_eq!(file.label.as_deref(), Some("vac"));
        assert_eq!(file.mean, vec![0.0, 0.0]);
        assert_eq!(file.cov, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn reports_the_offending_line() {
        assert_eq!(line_of(parse("n 1\nmean 0 x\ncov 1 0 0 1\n").unwrap_err()), 2);
        assert_eq!(line_of(parse("mean 0 0\n").unwrap_err()), 1);
        assert_eq!(line_of(parse("n 1\nmean 0 0\ncov 1 0 0 1 5\n").unwrap_err()), 3);
        assert_eq!(line_of(parse("n 1\nmean 0 0\ncov 1 0\n").unwrap_err()), 3);
        assert_eq!(line_of(parse("n 0\n").unwrap_err()), 1);
    }

    #[test]
    fn json_shape_is_checked() {
        let bad = parse_json(r#"{"n": 1, "mean": [0], "cov": [[1, 0], [0, 1]]}"#, Path::new("x.json"));
        assert!(matches!(bad, Err(CliError::Parse { .. })));
        let good = parse_json(r#"{"n": 1, "mean": [0, 0], "cov": [[1, 0], [0, 1]]}"#, Path::new("x.json"));
        assert_eq!(good.unwrap().label, None);
    }

    #[test]
    fn text_round_trip_is_exact() {
        let file = StateFile {
            label: Some("odd".into()),
            n: 1,
            mean: vec![0.1, -1.0 / 3.0],
            cov: vec![vec![std::f64::consts::E, 0.3], vec![0.3, 1.0 + f64::EPSILON]],
        };
        assert_eq!(parse(&file.to_text()).unwrap(), file);
        assert_eq!(parse_json(&file.to_json(), Path::new("x.json")).unwrap(), file);
    }
}
