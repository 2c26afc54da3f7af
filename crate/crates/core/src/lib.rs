//! Gaze-based attention scoring for serious-game sessions.
//!
//! Raw gaze records are cleaned into [`ingest::LevelSession`]s, classified
//! into screen quadrants and object AoIs, summarised as transition matrices
//! and engagement periods, and turned into a level-adaptive score that can
//! be validated against in-game accuracy. Everything here needs only
//! `alloc`; file formats and the command line live in the `gazescore`
//! crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod ingest;
pub mod params;
pub mod pipeline;
pub mod scoring;
pub mod spatial;
pub mod synth;
pub mod temporal;
pub mod transitions;
pub mod validation;
