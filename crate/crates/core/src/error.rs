use thiserror::Error;

/// Every failure the engine can surface. Stage failures carry enough text to
/// be printed verbatim by the CLI.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("tower has no algebraic generator")]
    NoAlgebraicGenerator,
    #[error("irrational constant outside the tower: {0}")]
    UnsupportedExtension(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("duplicate equation for `{0}`")]
    DuplicateEquation(String),
    #[error("Groebner budget of {0} reduction steps exhausted")]
    BudgetExhausted(u64),
    #[error("empty variety (ideal is the unit ideal)")]
    EmptyVariety,
    #[error("not a realization: {0}")]
    NotARealization(String),
    #[error("fiber ideal is not zero-dimensional")]
    InfiniteFiber,
    #[error("elimination failed: {0}")]
    EliminationFailed(String),
    #[error("primitive element search exhausted after {0} draws")]
    PrimitiveSearchExhausted(usize),
    #[error("suitable evaluation search exhausted: {0}")]
    EvaluationSearchExhausted(String),
    #[error("expression is not in the field tower: {0}")]
    NotInTower(String),
    #[error("tower has degree one; witness construction is vacuous")]
    DegreeOneExtension,
    #[error("component is not linear")]
    NonLinearComponent,
    #[error("component coefficient outside the identifiable field: {0}")]
    CoefficientsOutsideField(String),
    #[error("singular substitution (Jacobian determinant vanishes)")]
    SingularSubstitution,
    #[error("no polynomial realization (failing step: {0})")]
    NoPolynomialRealization(String),
    #[error("no realization over the identifiable field: {0}")]
    NoFRealization(String),
    #[error("no line component over the identifiable field")]
    NoLine,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
