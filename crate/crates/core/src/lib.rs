pub mod bwg;
pub mod garden;
pub mod hb;
pub mod hunt;
pub mod pencil;
pub mod poly;
