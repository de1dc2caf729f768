pub mod arith;
pub mod builders;
pub mod circuit;
pub mod io;
pub mod lowering;
pub mod report;
pub mod resources;
pub mod revsim;
pub mod statevector;
