use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element not in domain: {0}")]
    UnknownElement(String),

    #[error("unknown relation symbol: {0}")]
    UnknownSymbol(String),

    #[error("duplicate element identifier: {0}")]
    DuplicateElement(String),

    #[error("pair [{0:?}, {1:?}] references an element outside the domain")]
    PairOutsideDomain(String, String),

    #[error("signature mismatch: {left:?} vs {right:?}")]
    SignatureMismatch { left: Vec<String>, right: Vec<String> },

    #[error("{what} bound exceeded ({value} > {bound}); raise the bound to override")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("syntax error at line {line}, column {column}: {message} (expected one of: {})", expected.join(", "))]
    Syntax {
        line: usize,
        column: usize,
        message: String,
        expected: Vec<String>,
    },

    #[error("unbound free variable: {0}")]
    UnboundVariable(String),

    #[error("formula has free variables outside {{{allowed}}}: {extra:?}")]
    ExtraFreeVariables { allowed: String, extra: Vec<String> },

    #[error("only positive-existential FO³ is compilable: {0}")]
    NotCompilable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("structure is not in class {class}: {detail}")]
    ClassViolation { class: String, detail: String },

    #[error("oracle not function-preserving at type {0}")]
    NotFunctionPreserving(String),

    #[error("oracle not m-bounded at type {0}")]
    NotBounded(String),

    #[error("invalid structure file: {0}")]
    Json(#[from] serde_json::Error),
}
