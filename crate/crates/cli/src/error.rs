use std::fmt;
use std::path::Path;

use lrc_core::Error;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Format(String),
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    /// Attaches the file name to parse and I/O errors from the core.
    pub fn in_file(path: &Path, e: Error) -> Self {
        match e {
            Error::Io(io) => CliError::io(path, io),
            Error::Parse { .. } => CliError::Format(format!("{}: {e}", path.display())),
            other => CliError::Core(other),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_input_error() => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Format(_) => "format",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                Error::EmptyGraph => "empty_graph",
                Error::Parse { .. } => "format",
                Error::NodeOutOfRange(_) => "node_out_of_range",
                Error::NotAnEdge(..) => "not_an_edge",
                Error::IsolatedNode(_) => "isolated_node",
                Error::Disconnected => "disconnected",
                Error::BruteForceLimit(_) => "brute_force_limit",
                Error::NoEdges => "no_edges",
                Error::InsufficientData(_) => "insufficient_data",
                Error::DegenerateData(_) => "degenerate_data",
                Error::InvalidSbm(_) => "invalid_sbm",
                Error::InvalidGrid(_) => "invalid_grid",
                Error::EmptySet => "empty_set",
                Error::NodeSetMismatch(_) => "node_set_mismatch",
                Error::EmptyCover => "empty_cover",
                Error::Io(_) => "io",
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Format(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Core(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
