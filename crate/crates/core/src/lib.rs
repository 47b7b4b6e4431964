pub mod classical;
pub mod error;
pub mod format;
pub mod gegenbauer;
pub mod jacobi;
pub mod lattice;
pub mod lift;
pub mod linalg;
pub mod ortho;
pub mod series;
pub mod special;
pub mod verify;
pub mod weil;

pub use error::{Error, Result};
pub use series::{int, rat, LaurentSeries, Rational, TruncationRegion};
