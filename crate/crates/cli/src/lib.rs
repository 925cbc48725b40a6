//! IO companion for the synthesis core: QDIMACS parsing and printing, ASCII
//! AIGER emission and reading, run statistics, PAR-2 benchmarking, and the
//! standalone vector verifier behind `skolem verify`.

pub mod aiger;
pub mod bench;
pub mod qdimacs;
pub mod runner;
pub mod stats;
pub mod verify;
