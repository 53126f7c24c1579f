//! Galerkin finite elements in one space dimension for the shallow-water
//! system and its symmetric variant.
//!
//! The crate is organized bottom-up:
//!
//! * [`mesh`]: uniform and quasiuniform partitions of `[0, 1]`;
//! * [`quadrature`], [`banded`], [`space`]: Gauss rules, banded SPD solvers,
//!   B-spline spaces and their Gram matrices;
//! * [`projection`]: finite element functions and `L²` projections;
//! * [`superacc`]: superaccuracy diagnostics of the piecewise-linear projection;
//! * [`system`], [`presets`]: the semidiscrete ODE systems and manufactured
//!   solutions;
//! * [`integrators`]: explicit Runge–Kutta time stepping with blowup detection;
//! * [`experiments`], [`report`], [`config`]: convergence sweeps, stability
//!   probes, the small-amplitude comparison, CSV output and run configuration.

pub mod banded;
pub mod config;
pub mod error;
pub mod experiments;
pub mod integrators;
pub mod mesh;
pub mod presets;
pub mod projection;
pub mod quadrature;
pub mod report;
pub mod space;
pub mod superacc;
pub mod system;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/meshes-and-spaces.md")]
    mod meshes_and_spaces {}
    #[doc = include_str!("../../../book/src/projection.md")]
    mod projection {}
    #[doc = include_str!("../../../book/src/superaccuracy.md")]
    mod superaccuracy {}
    #[doc = include_str!("../../../book/src/systems.md")]
    mod systems {}
    #[doc = include_str!("../../../book/src/time-stepping.md")]
    mod time_stepping {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
    #[doc = include_str!("../../../book/src/numerical-notes.md")]
    mod numerical_notes {}
}
