use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        limit: u128,
    },
    #[error("composition of differentials is nonzero: {0}")]
    CompositionNonzero(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("unsupported group shape: {0}")]
    UnsupportedGroupShape(String),
    #[error("invalid scenario: {0}")]
    ScenarioInvalid(String),
    #[error("unknown chart format `{0}`")]
    UnknownFormat(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }

    pub(crate) fn budget(what: impl Into<String>, needed: u128, limit: u128) -> Self {
        Error::BudgetExceeded {
            what: what.into(),
            needed,
            limit,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
