pub mod arith;
pub mod cli;
pub mod descent;
pub mod gaussint;
pub mod oracles;
pub mod report;
pub mod sieve;
pub mod solver;
pub mod triples;
