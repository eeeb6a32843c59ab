pub mod blowup;
pub mod cli;
pub mod constructions;
pub mod enumerate;
pub mod exact;
pub mod graph;
pub mod spectral;
pub mod verify;
