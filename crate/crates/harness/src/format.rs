//! Line-oriented tableau files.
//!
//! ```text
//! # classical RK4
//! s 4 explicit
//! c 0 1/2 1/2 1
//! a 0 0 0 0
//! a 1/2 0 0 0
//! a 0 1/2 0 0
//! a 0 0 1 0
//! b 1/6 1/3 1/3 1/6
//! ```
//!
//! Entries are `p/q` rationals, integers or decimal literals. A file whose
//! entries are all rational loads as an exact tableau.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use psrk::tableau::{ExactCoefficients, ExactTableau, MethodKind, TableauError};
use psrk::{ButcherTableau, Rational};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone)]
enum Entry {
    Exact(Rational),
    Float(f64),
}

impl Entry {
    fn to_f64(&self) -> f64 {
        match self {
            Entry::Exact(r) => r.to_f64(),
            Entry::Float(x) => *x,
        }
    }
}

struct Line<'a> {
    number: usize,
    /// (1-based column, token)
    tokens: Vec<(usize, &'a str)>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in body.char_indices().chain([(body.len(), ' ')]) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push((body[..s].chars().count() + 1, &body[s..pos]));
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
        })
        .collect()
}

fn parse_entry(token: &str) -> std::result::Result<Entry, String> {
    let is_decimal = token.contains(['.', 'e', 'E']) && !token.contains('/');
    if is_decimal {
        match token.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Entry::Float(x)),
            _ => Err(format!("`{token}` is not a finite decimal")),
        }
    } else {
        token.parse::<Rational>().map(Entry::Exact).map_err(|e| e.to_string())
    }
}

struct Parser<'a> {
    path: Option<&'a Path>,
    lines: std::vec::IntoIter<Line<'a>>,
    last_line: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> HarnessError {
        HarnessError::Parse {
            path: self.path.map(Path::to_path_buf),
            line,
            column,
            message: message.into(),
        }
    }

    fn next_line(&mut self, key: &str) -> Result<Line<'a>> {
        let line = self
            .lines
            .next()
            .ok_or_else(|| self.error(self.last_line + 1, 1, format!("expected `{key}` line, found end of file")))?;
        self.last_line = line.number;
        if line.tokens[0].1 != key {
            return Err(self.error(
                line.number,
                line.tokens[0].0,
                format!("expected `{key}`, found `{}`", line.tokens[0].1),
            ));
        }
        Ok(line)
    }

    fn entries(&mut self, key: &str, s: usize) -> Result<Vec<Entry>> {
        let line = self.next_line(key)?;
        let values = &line.tokens[1..];
        if values.len() != s {
            let column = values.get(s).map_or_else(|| line.tokens.last().unwrap().0, |t| t.0);
            return Err(self.error(
                line.number,
                column,
                format!("`{key}` line needs {s} entries, found {}", values.len()),
            ));
        }
        values
            .iter()
            .map(|&(col, tok)| parse_entry(tok).map_err(|msg| self.error(line.number, col, msg)))
            .collect()
    }
}

/// Parses tableau text; `name` becomes the tableau name and `path` (if any)
/// is attached to errors.
pub fn parse_tableau(text: &str, name: &str, path: Option<&Path>) -> Result<ButcherTableau> {
    let mut p = Parser {
        path,
        lines: tokenize(text).into_iter(),
        last_line: 0,
    };
    let header = p.next_line("s")?;
    let (s, kind) = match header.tokens.as_slice() {
        [_, (scol, stok), (kcol, ktok)] => {
            let s: usize = stok
                .parse()
                .ok()
                .filter(|&s| s > 0)
                .ok_or_else(|| p.error(header.number, *scol, format!("`{stok}` is not a positive stage count")))?;
            let kind = match *ktok {
                "explicit" => MethodKind::Explicit,
                "implicit" => MethodKind::Implicit,
                other => {
                    return Err(p.error(
                        header.number,
                        *kcol,
                        format!("expected `explicit` or `implicit`, found `{other}`"),
                    ))
                }
            };
            (s, kind)
        }
        _ => {
            return Err(p.error(header.number, 1, "header must read `s <stages> <explicit|implicit>`"));
        }
    };
    let c = p.entries("c", s)?;
    let a = (0..s).map(|_| p.entries("a", s)).collect::<Result<Vec<_>>>()?;
    let b = p.entries("b", s)?;
    if let Some(extra) = p.lines.next() {
        return Err(p.error(extra.number, extra.tokens[0].0, "unexpected content after `b` line"));
    }

    let tag = |source: TableauError| HarnessError::Tableau {
        path: path.map(Path::to_path_buf),
        source,
    };
    let floats = |v: &[Entry]| v.iter().map(Entry::to_f64).collect::<Vec<_>>();
    let tab = ButcherTableau::with_kind(
        name,
        kind,
        a.iter().map(|row| floats(row)).collect(),
        floats(&b),
        floats(&c),
    )
    .map_err(tag)?;

    let exact = |v: &[Entry]| {
        v.iter()
            .map(|e| match e {
                Entry::Exact(r) => Some(r.clone()),
                Entry::Float(_) => None,
            })
            .collect::<Option<Vec<_>>>()
    };
    let coeffs = (|| {
        Some(ExactCoefficients {
            a: a.iter().map(|row| exact(row)).collect::<Option<Vec<_>>>()?,
            b: exact(&b)?,
            c: exact(&c)?,
        })
    })();
    match coeffs {
        // Rational files whose exact row sums are off by less than the float
        // tolerance keep the float tableau.
        Some(coeffs) if coeffs.row_sum_violation().is_none() => {
            ButcherTableau::from_exact(name, Some(kind), coeffs).map_err(tag)
        }
        _ => Ok(tab),
    }
}

/// Renders a tableau in the file format: exact rationals as `p/q`, anything
/// else as the shortest decimal that reads back to the same double.
pub fn format_tableau(tab: &ButcherTableau) -> String {
    let mut out = String::new();
    let s = tab.stages();
    writeln!(out, "# {}", tab.name()).unwrap();
    writeln!(out, "s {s} {}", tab.kind().as_str()).unwrap();
    let mut line = |key: &str, entries: Vec<String>| {
        writeln!(out, "{key} {}", entries.join(" ")).unwrap();
    };
    match tab.exact() {
        Some(ExactTableau::Rational(e)) => {
            let text = |v: &[Rational]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
            line("c", text(&e.c));
            for row in &e.a {
                line("a", text(row));
            }
            line("b", text(&e.b));
        }
        _ => {
            let text = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>();
            line("c", text(tab.c()));
            for row in tab.a_rows() {
                line("a", text(row));
            }
            line("b", text(tab.b()));
        }
    }
    out
}

/// Loads a tableau file; the tableau is named after the file stem.
pub fn load_tableau(path: impl AsRef<Path>) -> Result<ButcherTableau> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path.file_stem().map_or_else(|| "unnamed".into(), |s| s.to_string_lossy());
    parse_tableau(&text, &name, Some(path))
}

pub fn save_tableau(tab: &ButcherTableau, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_tableau(tab)).map_err(|source| HarnessError::Io {
        path: PathBuf::from(path),
        source,
    })
}
