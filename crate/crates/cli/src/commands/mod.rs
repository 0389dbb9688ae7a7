pub mod bounds;
pub mod lowerbound;
pub mod simulate;
pub mod verify;
