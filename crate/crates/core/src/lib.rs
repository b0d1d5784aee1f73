pub mod budget;
pub mod chains;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod game;
pub mod generators;
pub mod graph;
pub mod optimal;
pub mod rng;
pub mod workbench;
