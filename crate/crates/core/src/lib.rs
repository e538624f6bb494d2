pub mod code;
pub mod fiber;
pub mod geometry;
pub mod gf;
pub mod linalg;
pub mod oracle;
pub mod recovery;
pub mod rm;
pub mod rng;
pub mod sim;
