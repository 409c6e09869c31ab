//! Probability-aware parking selection: the parking MDP, closed-form
//! strategy values, dynamic-probability cascades, connected-user observation
//! error, lookahead policies and a seeded simulation harness.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cascade;
pub mod closed_form;
pub mod error;
pub mod harness;
pub mod ingest;
pub mod mc;
pub mod model;
pub mod observer;
pub mod policies;
pub mod seeds;
pub mod simulator;

pub use error::{Error, Result};
pub use model::{LotIndex, ParkingNetwork};
