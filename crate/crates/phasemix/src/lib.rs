//! Configuration, file formats and scenario runners for phasemix-core.
pub mod config;
pub mod error;
pub mod gmsh;
pub mod plate;
pub mod scenario;
pub mod series;
pub mod verify;
pub mod vtk;
