//! DNA sequence abstractions: doublet and base window statistics, correlation
//! bit-strings, adjacency matrices with Hamiltonian path search, and truth
//! tables over base disjunctions.

pub mod binarizer;
pub mod golden;
pub mod graphkit;
pub mod kmerstats;
pub mod logickit;
pub mod pipeline;
pub mod seqio;
