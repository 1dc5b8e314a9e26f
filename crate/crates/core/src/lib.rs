//! The P4 Pisot numeration system and the ternary word fixed by
//! `0 → 01, 1 → 21, 2 → 0`, with finite verification of its combinatorial
//! properties.

pub mod acceptance;
pub mod analysis;
pub mod assets;
pub mod automata;
pub mod learner;
pub mod linrep;
pub mod numeration;
pub mod report;
pub mod word;
