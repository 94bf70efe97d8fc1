pub mod laurent;
pub mod diagram;
pub mod alexander;
pub mod solid_torus;
pub mod bounds;
pub mod catalog;
pub mod pathways;
