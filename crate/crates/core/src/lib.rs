pub mod basechange;
pub mod checkers;
pub mod dg;
pub mod field;
pub mod linalg;
pub mod perf;
pub mod resolve;
