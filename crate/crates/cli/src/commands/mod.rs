pub mod experiment;
pub mod gen;
pub mod solve;
pub mod validate;
pub mod verify;
