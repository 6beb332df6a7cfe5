//! Numerical building blocks shared by the forward and inverse solvers.

pub mod interp;
pub mod lowk;
pub mod ode;
pub mod quad;
