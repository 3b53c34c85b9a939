pub mod fd_algebra;
pub mod mor;
pub mod presentation;
pub mod repsearch;
pub mod scalar;
pub mod structure;
pub mod workspace;
