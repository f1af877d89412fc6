pub mod barcode;
pub mod cli;
pub mod complex;
pub mod cone;
pub mod cross;
pub mod error;
pub mod filtered;
mod grid;
pub mod io;
pub mod matrix;
pub mod novikov;
pub mod persistence;
pub mod plot;
pub mod random;
pub mod suite;

pub use error::{Error, ErrorClass, Result};
pub use novikov::{Exponent, NovikovScalar, Precision, Valuation};
