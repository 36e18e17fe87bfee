//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("map format: {0}")]
    MapFormat(String),
    #[error("map has no free cells")]
    EmptyWorld,
    #[error("robot radius must be non-negative, got {0}")]
    NegativeRadius(f64),
    #[error("cell ({x}, {y}) is outside the map")]
    OutOfBounds { x: i32, y: i32 },
    #[error("cell ({x}, {y}) is not traversable")]
    Blocked { x: i32, y: i32 },
    #[error("polyline must contain at least one point")]
    EmptyPolyline,
    #[error("polyline vertices must sit on cell centers, got ({x}, {y})")]
    OffCenter { x: f64, y: f64 },
    #[error("curves do not share the junction point")]
    JunctionMismatch,
    #[error("curves do not share endpoints")]
    EndpointMismatch,
    #[error("configurations are anchored at different bases")]
    BaseMismatch,
    #[error("tether length {length:.3} exceeds the limit {limit:.3}")]
    Inadmissible { length: f64, limit: f64 },
    #[error("unreachable goals (input indices): {0:?}")]
    Unreachable(Vec<usize>),
    #[error("search budget exceeded after {0} nodes")]
    BudgetExceeded(usize),
    #[error("scenario: {0}")]
    Scenario(String),
    #[error("internal: {0}")]
    Internal(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, PlanError>;
