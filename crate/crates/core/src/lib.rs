//! Box-ball system on a finite window with implicit empty boxes on both sides.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`config`]: ball configurations, their walk lifts, records, excursions and
//!   the carrier operator `T` (both the carrier pass and the reflection of the
//!   walk about its running minimum).
//! - [`soliton`]: soliton identification (per-excursion run removal and a
//!   single-pass run-length stack) and the pairing of solitons across one step.
//! - [`slots`]: slot configurations, slot enumeration anchored at a record,
//!   soliton components, flows through a record and the component shift law.
//! - [`reconstruct`]: rebuilding configurations from components.
//! - [`measures`]: samplers for invariant ensembles, Palm re-centering and
//!   density estimators.
//! - [`speeds`]: the explicit, interaction and vertical speed systems.
//! - [`trajectory`]: exact tracking of tagged solitons and records and the
//!   empirical speed estimates built on top of it.

#![no_std]

extern crate alloc;

pub mod config;
pub mod error;
pub mod measures;
pub mod reconstruct;
pub mod slots;
pub mod soliton;
pub mod speeds;
pub mod trajectory;

pub use config::{BallConfig, Excursion, RecordIndex, WalkLift};
pub use error::{Error, Result};
pub use soliton::{Soliton, SolitonSet};
