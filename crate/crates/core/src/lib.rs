//! Exact inversion complexity for functions and systems of k-valued logic.
//!
//! A circuit basis here is the set M of all monotone functions (free) plus a
//! list of designated non-monotone functions ω_1..ω_p of weight 1. The
//! library computes the two combinatorial measures that govern how many
//! weighted gates are needed — the decrease `d(F)` of a system and the
//! inversion power `u(f)` of a function — derives matching lower/upper
//! bounds on the non-monotone gate count, and constructively synthesizes
//! circuits that meet the upper bound. Brute-force oracles validate the
//! dynamic programs and the closed-form worst-case values at small sizes.
//!
//! Modules:
//!
//! * [`kfunc`] — value tables, the componentwise order on E_k^n,
//!   monotonicity and jump predicates, named standard functions.
//! * [`chains`] — decrease and inversion power by longest-path DP with
//!   explicit witness chains.
//! * [`circuit`] — gate-level IR over monotone-plus-ω bases, evaluation,
//!   gate surgery, canonical JSON serialization.
//! * [`synth`] — level partitions, clamped systems, connectors, selector
//!   fragments, the full synthesis procedure, and worst-case formulas.
//! * [`oracle`] — exhaustive chain enumeration and function-space scans.
//!
//! ```
//! use kinv::{Basis, FunctionSystem, KFunction, Limits};
//! use kinv::synth::{bounds, synthesize_over};
//!
//! let limits = Limits::default();
//! // the order-reversing negation over E_3 drops twice along 0 < 1 < 2
//! let f = FunctionSystem::single(KFunction::lukasiewicz_negation(3)?)?;
//! let basis = Basis::post(3)?;
//!
//! let b = bounds(&f, &basis, &limits)?;
//! assert_eq!((b.d_f, b.exact), (2, Some(2)));
//!
//! let circuit = synthesize_over(&f, &basis, &limits)?;
//! assert_eq!(circuit.inversion_weight(), 2);
//! assert_eq!(circuit.realized_system(&limits)?, f);
//! # Ok::<(), kinv::Error>(())
//! ```

pub mod chains;
pub mod circuit;
pub mod error;
pub mod kfunc;
pub mod oracle;
pub mod synth;

pub use error::{Error, Result};
pub use kfunc::{Basis, FunctionSystem, KFunction, KValue, NamedFunction, Point};

/// Size guard for analysis operations.
///
/// Every analysis walks all k^n points of the domain (often quadratically),
/// so work explodes with n. Operations that scale this way take a `Limits`
/// and refuse domains larger than `max_points`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of domain points k^n an analysis may touch.
    pub max_points: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_points: 4096 }
    }
}

impl Limits {
    pub fn with_max_points(max_points: u64) -> Self {
        Limits { max_points }
    }

    pub(crate) fn check(&self, points: u64) -> Result<()> {
        if points > self.max_points {
            return Err(Error::SizeGuard {
                points,
                limit: self.max_points,
            });
        }
        Ok(())
    }
}
