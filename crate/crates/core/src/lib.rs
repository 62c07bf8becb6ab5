pub mod catalog;
pub mod chowlattice;
pub mod exactalg;
pub mod harness;
pub mod projector;
