//! Simulation library for a multi-antenna cognitive-radio link that shares
//! spectrum with a primary radio.
//!
//! A frame of `N` symbols is split into three stages:
//!
//! * environment learning ([`learning`]): both cognitive terminals listen to
//!   the primary transmitter and estimate the noise subspace of their
//!   interference channel from a sample covariance;
//! * channel training ([`training`]): the transmitter sends an orthogonal
//!   training block through the learned beamformers and the receiver forms
//!   an LMMSE estimate of the effective channel;
//! * data transmission ([`capacity`]): the ergodic-capacity lower bound is
//!   evaluated by water-filling over the estimated channel's eigenmodes.
//!
//! [`allocation`] solves for the power split between training and data in
//! closed form and searches the time split between the three stages.
//! [`experiments`] runs the named experiments and writes CSV tables.
//!
//! Monte Carlo loops run on rayon when the `parallel` feature (default) is
//! enabled; every trial draws from its own counter-derived generator so
//! parallel and sequential runs agree bit for bit.

pub mod allocation;
pub mod capacity;
pub mod channel_model;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod learning;
pub mod linalg;
pub mod rng;
pub mod training;

pub use error::{Error, Result};

/// Dense complex matrix used for every channel, covariance and basis.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
