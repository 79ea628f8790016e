pub mod cores;
pub mod dynamics;
pub mod experiments;
pub mod graphgen;
