use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval ({a}, {b})")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("integral diverges: {0}")]
    Divergence(String),
    #[error("quadrature did not converge, achieved error {achieved:e}")]
    Nonconvergence { achieved: f64 },
    #[error("not representable in the function family: {0}")]
    Representation(String),
    #[error("weight vanishes at sample point {0}")]
    ZeroDensity(f64),
    #[error("zero mass: {0}")]
    ZeroMass(String),
    #[error("major subsets overlap: cube ({0}, {1}) and cube ({2}, {3})")]
    Disjointness(i32, u64, i32, u64),
    #[error("cube count {0} exceeds the limit")]
    CubeOverflow(u64),
    #[error("bisection failed: {0}")]
    Bisection(String),
    #[error("complementary function is unbounded (linear Young function)")]
    UnboundedComplementary,
    #[error("Hoelder precondition fails at t = {t} (ratio {ratio})")]
    Precondition { t: f64, ratio: f64 },
    #[error("empty family")]
    EmptyFamily,
    #[error("kernel evaluated on the diagonal x = y = {0}")]
    Diagonal(f64),
    #[error("evaluation point {0} touches the support")]
    SupportTouch(f64),
    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
