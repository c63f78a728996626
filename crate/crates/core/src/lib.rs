pub mod chain;
pub mod cli;
pub mod characters;
pub mod fibring;
pub mod groups;
pub mod ring;
pub mod twisted;
pub mod value;
pub mod novikov;
pub mod qcalc;
pub mod random;
pub mod suites;
