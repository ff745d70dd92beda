//! Clopen graphs on Baire space as finite-prefix oracles: ordinal notations
//! below ε₀, the ordinal-descent graph family with its decision procedure,
//! well-founded tree ranks with an adversary game for lower bounds, and a
//! universal ⊲-labeled tree with its embedding algorithm.

pub mod clopen;
pub mod embed;
pub mod hierarchy;
pub mod ordinal;
pub mod rank;
pub mod seqspace;
pub mod universal;
pub mod verify;
