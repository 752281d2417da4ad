use gbqpe::groebner::GroebnerError;
use gbqpe::hf_builder::HfError;
use gbqpe::polyring::PolyError;
use gbqpe::qblock::QBlockError;
use gbqpe::quotient::QuotientError;
use gbqpe::rootfind::RootError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Resource(_) => 4,
            CliError::Numeric(_) => 5,
        }
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<GroebnerError> for CliError {
    fn from(e: GroebnerError) -> Self {
        match e {
            GroebnerError::ResourceLimit { .. } => CliError::Resource(e.to_string()),
            GroebnerError::EmptyIdeal => CliError::Usage(e.to_string()),
            _ => CliError::Parse(e.to_string()),
        }
    }
}

impl From<HfError> for CliError {
    fn from(e: HfError) -> Self {
        match e {
            HfError::Groebner(g) => g.into(),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<QuotientError> for CliError {
    fn from(e: QuotientError) -> Self {
        match e {
            QuotientError::Poly(p) => p.into(),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<RootError> for CliError {
    fn from(e: RootError) -> Self {
        match e {
            RootError::UnknownVariable(_) => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<QBlockError> for CliError {
    fn from(e: QBlockError) -> Self {
        match e {
            QBlockError::Capacity { .. } => CliError::Resource(e.to_string()),
            QBlockError::DimensionMismatch { .. } | QBlockError::NoBits => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}
