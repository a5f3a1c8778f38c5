pub mod error;
pub mod geometry;
pub mod environment;
pub mod grid;
pub mod planners;
pub mod bug2d;
pub mod adversarial;
pub mod harness;
