//! Exact noncommutative computer algebra for the Heisenberg double of the
//! kappa-Poincare algebra and its kappa-deformed phase space.

pub mod ncalg;
pub mod scalars;
pub mod hopf;
pub mod kappa;
pub mod numrep;
pub mod report;
