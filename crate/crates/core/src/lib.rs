pub mod cli;
pub mod collapse_map;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod plane_map;
pub mod square_map;
pub mod strips;
pub mod verify;

pub use error::{Error, Result};
