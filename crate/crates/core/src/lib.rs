pub mod expr;
pub mod field;
pub mod tower;
pub mod series;
pub mod qde;
pub mod qre;
pub mod rep;
pub mod cli;
