//! Exact integer helpers and arithmetic in `Q(√d)`.

mod isqrt;
mod quad;
mod square_free;

pub use isqrt::{is_perfect_square, isqrt};
pub use quad::QuadRat;
pub use square_free::{square_free_probe, SquareFreeStatus, DEFAULT_SQUARE_FREE_BOUND};
