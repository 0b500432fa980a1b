//! Computing with finite quandles.
//!
//! A quandle is an idempotent, left-distributive structure with unique left
//! division; every finite quandle is given here by its multiplication table
//! over the elements `0..n`. The crate revolves around the displacement group
//! `Dis(Q)`, generated by the compositions `L_a ∘ L_b⁻¹` of left translations:
//! a quandle embeds into an affine (Alexander) quandle exactly when `Dis(Q)`
//! is abelian and semiregular, and it is affine exactly when in addition its
//! columns are balanced on each orbit.
//!
//! What lives where:
//!
//! - [`perm`]: dense permutations and the tiny generated permutation groups
//!   the recognition procedures work with.
//! - [`abelian`]: finite abelian groups in invariant-factor form, their
//!   endomorphisms and automorphisms, subgroups, quotients, multitransversals.
//! - [`quandle`]: the multiplication-table object, validation, translations,
//!   orbits, mediality, occurrence counts, and a brute-force isomorphism
//!   oracle.
//! - [`constructions`]: affine quandles `Aff(A, f)`, projection quandles,
//!   semiregular extensions `Ext(A, f, d̄)`, affine meshes, and the inverse
//!   direction: representing a quandle with abelian semiregular displacement
//!   group as an extension, plus the embedding of a quasi-affine quandle into
//!   an affine one.
//! - [`recognition`]: the affine / quasi-affine decision procedures and two
//!   independent oracles (definition-level affine search, congruence-based
//!   abelianness).
//! - [`isomorphism`]: the isomorphism criterion for indecomposable semiregular
//!   extensions, its balanced shortcut, and the specialization to affine
//!   quandles.
//! - [`enumeration`]: counting and listing quasi-affine quandles of a given
//!   order up to isomorphism, with closed forms and a brute-force quandle
//!   enumerator for cross-checks.

pub mod abelian;
pub mod constructions;
pub mod enumeration;
pub mod isomorphism;
pub mod perm;
pub mod quandle;
pub mod recognition;

#[cfg(test)]
pub(crate) mod testutil;

pub use abelian::{FiniteAbelianGroup, GroupMap, Subgroup};
pub use constructions::ExtensionDescriptor;
pub use perm::{PermGroup, Permutation};
pub use quandle::FiniteQuandle;
pub use recognition::RecognitionReport;
