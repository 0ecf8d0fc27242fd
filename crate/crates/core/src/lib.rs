pub mod classifier;
pub mod families;
pub mod graph;
pub mod group;
pub mod partition;
pub mod perm;
pub mod quotient;
