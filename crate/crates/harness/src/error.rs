use std::path::PathBuf;

use psrk::integrate::IntegrateError;
use psrk::tableau::TableauError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{}line {line}, column {column}: {message}", path_prefix(.path))]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}{source}", path_prefix(.path))]
    Tableau {
        path: Option<PathBuf>,
        #[source]
        source: TableauError,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("moving-average window [{start}, {end}] holds {count} samples; need at least 2")]
    EmptyWindow { start: f64, end: f64, count: usize },
    #[error("{context}: {source}")]
    Integrate {
        context: String,
        #[source]
        source: IntegrateError,
    },
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn path_prefix(path: &Option<PathBuf>) -> String {
    match path {
        Some(p) => format!("{}: ", p.display()),
        None => String::new(),
    }
}

impl From<TableauError> for HarnessError {
    fn from(source: TableauError) -> Self {
        HarnessError::Tableau { path: None, source }
    }
}

impl HarnessError {
    /// Process exit code: 2 for bad input, 1 for failures while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Parse { .. }
            | HarnessError::Tableau { .. }
            | HarnessError::InvalidArgument(_)
            | HarnessError::EmptyWindow { .. } => 2,
            HarnessError::Integrate { .. } | HarnessError::Io { .. } | HarnessError::Csv(_) => 1,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        HarnessError::InvalidArgument(msg.into())
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let parse = HarnessError::Parse {
            path: None,
            line: 3,
            column: 7,
            message: "bad entry".into(),
        };
        assert_eq!(parse.exit_code(), 2);
        assert_eq!(parse.to_string(), "line 3, column 7: bad entry");
        let io = HarnessError::Io {
            path: "x.tab".into(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "gone"),
        };
        assert_eq!(io.exit_code(), 1);
        let run = HarnessError::Integrate {
            context: "gl4".into(),
            source: IntegrateError::InvalidArgument("h"),
        };
        assert_eq!(run.exit_code(), 1);
    }

    #[test]
    fn tableau_errors_name_the_file() {
        let e = HarnessError::Tableau {
            path: Some("m/AC36.tab".into()),
            source: TableauError::RowSum { row: 2, residual: 0.5 },
        };
        assert!(e.to_string().starts_with("m/AC36.tab: row 2"));
    }
}
