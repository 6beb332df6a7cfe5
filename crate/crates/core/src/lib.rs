//! Direct and inverse acoustics of a lossless duct with circular cross
//! sections, modelled on the human vocal tract.
//!
//! The forward problem maps a radius profile `r(x)` on `[0, ℓ]` to the
//! absolute pressure `|P(k, ℓ)|` at the open end. The inverse problem goes
//! back from `|P|` to every radius profile compatible with it: a unique
//! candidate when `r′(ℓ) ≥ 0`, and up to `M + 1` candidates otherwise, where
//! `M` counts the eligible resonances of the reconstructed Jost function.
//!
//! Three independent inversion routes are provided: the Gel'fand–Levitan
//! integral equation ([`gelfand_levitan`]), the Marchenko integral equation
//! ([`marchenko`]) and a time-domain layer-stripping scheme ([`time_domain`]).

// Guards are written `!(x > 0.0)` on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod candidates;
pub mod cli;
pub mod consts;
pub mod direct;
pub mod ducts;
pub mod error;
pub mod gelfand_levitan;
pub mod grid;
pub mod io;
pub mod marchenko;
pub mod numerics;
pub mod profile;
pub mod spectral;
pub mod spectrum;
pub mod time_domain;

pub use consts::{k_from_frequency, PhysicalConstants};
pub use error::{Error, Result};
pub use grid::Grid1D;
pub use profile::{AreaFunction, PotentialProfile, RadiusProfile};
pub use spectrum::PressureSpectrum;
