//! Instance generation, and the plain-text instance and solution formats.

mod format;
mod generate;

pub use format::{
    parse_fasta, parse_instance, parse_solution, serialize_instance, serialize_solution,
};
pub use generate::{gen_planted, gen_random, PlantedSpec};
