//! Hyperelliptic curves with many automorphisms.
//!
//! A library reproducing the classification of all complex hyperelliptic
//! curves with many automorphisms (18 families) and deciding, for each one,
//! whether its jacobian has complex multiplication.  Three independent
//! methods are implemented:
//!
//! * the representation-theoretic criterion of Streit (vanishing of the
//!   trivial multiplicity in Sym^2 of the action on holomorphic
//!   differentials),
//! * integrality of the j-invariant of a genus-1 quotient,
//! * a criterion on characteristic polynomials of Frobenius at several
//!   good primes of a small quotient.
//!
//! The building blocks are exact: rational polynomial arithmetic
//! ([`poly`]), cyclotomic number fields ([`numfield`]), the curve catalog
//! and classification engine ([`curves`]), character computations
//! ([`streit`]), quotient equations ([`quotient`]), finite-field point
//! counting ([`count`]) and the CM verdict assembly ([`cmcrit`]).

pub mod cmcrit;
pub mod count;
pub mod curves;
pub mod numfield;
pub mod poly;
pub mod quotient;
pub mod streit;
