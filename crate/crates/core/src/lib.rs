//! Group-valued invariants of classical, virtual and welded links presented as
//! braid closures.

pub mod braid;
pub mod error;
pub mod freegroup;
pub mod homcount;
pub mod markov;
pub mod matrix;
pub mod present;
pub mod reps;

pub use braid::{BraidLetter, BraidWord, Theory};
pub use error::{Error, Result};
pub use freegroup::{Ambient, Automorphism, Endomorphism, GeneratorId, Letter, Word};
pub use homcount::{count_homs, fingerprint, Fingerprint, FiniteGroupTable, HomCountOptions};
pub use matrix::{smith_normal_form, IntegerMatrix, SmithForm};
pub use present::{abelian_invariants, tietze_simplify, AbelianInvariants, Presentation};
pub use reps::{RepKind, Representation};
