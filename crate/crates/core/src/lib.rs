//! Exact combinatorics of polyptych lattices.
//!
//! A polyptych lattice is a finite family of integer lattices ("charts") glued
//! by piecewise-linear bijections. This crate provides the classical polyhedral
//! kernel ([`polyhedra`]), the lattices themselves ([`lattice`]), their points
//! and canonical semialgebras ([`points`]), PL polytopes ([`polytopes`]), strict
//! dual pairs ([`duality`]), built-in families ([`families`]) and the
//! detropicalization algebras with their valuations ([`detrop`]).
//!
//! All arithmetic is exact. Enumeration-heavy routines run on rayon when the
//! `parallel` feature is enabled (the default); output order never depends on
//! scheduling.

pub mod detrop;
pub mod duality;
pub mod error;
pub mod families;
pub mod lattice;
pub mod par;
pub mod points;
pub mod polyhedra;
pub mod polytopes;

pub use error::{Error, Result};
