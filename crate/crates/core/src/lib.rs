//! A classical laboratory for QAOA MAX-CUT energies used as graph-structure
//! probes.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] – simple graphs, named families, graph6, neighbourhood counts
//!   and the degree-preserving swap walk.
//! * [`sim`] – dense state-vector QAOA for any integer diagonal cost.
//! * [`closed_form`] – analytic level-1 / level-2 energies.
//! * [`upoly`] – the uncut polynomial of labelled multigraphs, its identities
//!   and the QAOA light-cone gadget.
//! * [`dynamics`] – angle-averaged first and second order density matrices.
//! * [`wcsp`] – single-constraint WCSP instances with identical QAOA energies.
//! * [`experiments`] – seeded Monte Carlo drivers (gaps, decoupling, moments,
//!   landscapes, walks, separation scans).

pub mod closed_form;
pub mod dynamics;
mod error;
pub mod experiments;
pub mod graph;
pub mod sim;
pub mod stats;
pub mod upoly;
pub mod wcsp;

pub use error::{Error, Result};
pub use graph::Graph;
pub use sim::{AngleSchedule, DiagonalCost, PureState};
