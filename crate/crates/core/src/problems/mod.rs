//! Problem generators: seeded random systems, Lorenz filter systems and blurring
//! operators.

pub mod blur;
pub mod filter;
pub mod lorenz;
pub mod random;
