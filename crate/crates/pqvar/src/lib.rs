//! Exact invariants of product-quotient varieties.
//!
//! The library computes, in exact arithmetic throughout:
//!
//! * resolution data of cyclic quotient singularities — valuations of the
//!   extra rays, the monomial ideals cutting out pluricanonical stalk
//!   conditions, and the exponent where their powers stabilize
//!   ([`toric`], [`singularity`]);
//! * invariant pluricanonical monomial counts on quotients of products of
//!   curves, giving plurigenera, Hodge invariants, Calabi–Yau screening,
//!   canonical volume and minimality ([`curve`], [`model`], [`engine`]);
//! * branching-data candidates for group actions on curves ([`classify`]).
//!
//! All field arithmetic runs over cyclotomic numbers with exact rational
//! coefficients ([`cyclotomic`]); nothing is floating point.

pub mod classify;
pub mod config;
pub mod curve;
pub mod cyclotomic;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod model;
pub mod report;
pub mod series;
pub mod singularity;
pub mod toric;

pub use error::{Error, Result};
