use thiserror::Error;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("config {path}: {message}")]
    Config { path: String, message: String },

    #[error("{context}{source}")]
    Core {
        context: String,
        #[source]
        source: coherent_keyrate::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("nothing to plot: need at least two rows")]
    EmptyData,
}

pub type CliResult<T> = Result<T, CliError>;

impl From<coherent_keyrate::Error> for CliError {
    fn from(source: coherent_keyrate::Error) -> Self {
        CliError::Core {
            context: String::new(),
            source,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(source: std::io::Error) -> Self {
        CliError::Io {
            path: "<stdout>".into(),
            source,
        }
    }
}

impl CliError {
    /// Prefixes a core error with where it came from, e.g. a file name.
    pub fn in_context(context: impl Into<String>, source: coherent_keyrate::Error) -> Self {
        CliError::Core {
            context: format!("{}: ", context.into()),
            source,
        }
    }

    /// 2 for statistics or states no quantum system can produce, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        use coherent_keyrate::Error as E;
        match self {
            CliError::Core { source, .. } if source.is_infeasible() => EXIT_INFEASIBLE,
            CliError::Core {
                source: E::TraceNotOne { .. },
                ..
            } => EXIT_INFEASIBLE,
            _ => EXIT_USAGE,
        }
    }
}
