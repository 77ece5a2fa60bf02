pub mod catalog;
pub mod cli;
pub mod config;
pub mod curvature;
pub mod embedding;
pub mod error;
pub mod fd;
pub mod geometry;
pub mod killing;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod scale_factor;
pub mod tensor;
pub mod verify;
