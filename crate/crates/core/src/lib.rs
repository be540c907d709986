pub mod axioms;
pub mod harness;
pub mod history;
pub mod rational;
pub mod schemes;
