//! Command line front end: input documents, command dispatch and reports.

pub mod document;
pub mod expr;
pub mod report;

pub use document::InputDocument;
pub use expr::{parse_expr, parse_extension, Expr};
pub use report::{run, Command, Options, Report};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InputError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("z used without a declared extension")]
    UndeclaredExtension,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid input document: {0}")]
    Document(String),
}

impl InputError {
    pub(crate) fn syntax(line: usize, column: usize, message: String) -> Self {
        InputError::Syntax { line, column, message }
    }

    /// Prefixes document errors with the field they came from.
    pub(crate) fn within(self, field: &str) -> Self {
        match self {
            InputError::Syntax { line, column, message } => InputError::Syntax {
                line,
                column,
                message: format!("{message} (in {field})"),
            },
            InputError::Document(m) => InputError::Document(format!("{field}: {m}")),
            other => other,
        }
    }

    /// Process exit code for input errors.
    pub fn exit_code(&self) -> i32 {
        1
    }
}
