use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("q = {0} is not an odd prime")]
    BadField(u64),

    #[error("operands belong to different coefficient fields (q = {0} vs q = {1})")]
    FieldMismatch(u64, u64),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("operation requires a monic polynomial, got {0}")]
    NotMonic(String),

    #[error("discriminant {0} is not square-free")]
    NotSquarefree(String),

    #[error("discriminant degree {0} below the minimum {1} for this parity")]
    DegreeTooSmall(usize, usize),

    #[error("direct even-parity L-polynomial is gated to genus <= {max}, requested g = {g}")]
    EvenDirectGated { g: usize, max: usize },

    #[error("functional-equation symmetry check is defined for odd-degree discriminants only")]
    EvenParityUnsupported,

    #[error("delta jet of order {have} cannot supply derivative order {need}")]
    JetOrderTooSmall { have: usize, need: usize },

    #[error("root finder failed to converge after {0} iterations")]
    RootsDiverged(usize),

    #[error("series cutoff {cutoff} too small, need at least {need}")]
    CutoffTooSmall { cutoff: usize, need: usize },

    #[error("h = {h} must be g-1 or g (g = {g})")]
    BadComponentRange { h: usize, g: usize },

    #[error(
        "ensemble sweep refused: estimated {estimate} symbol evaluations exceeds budget {budget}"
    )]
    BudgetExceeded { estimate: u128, budget: u128 },

    #[error("division by zero in Q(sqrt q): denominator evaluates to 0")]
    QuadDivisionByZero,
}

pub type Result<T> = std::result::Result<T, Error>;
