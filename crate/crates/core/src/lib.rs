pub mod cf;
pub mod cli;
pub mod decide;
pub mod gamma;
pub mod pwl;
pub mod term;
