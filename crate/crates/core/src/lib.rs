//! Tree-like tableaux: the insertion algorithm, the bijections with permutations
//! and lattice paths, occupied-corner statistics with their generating
//! polynomials, and the projection of tableaux onto PASEP states.

pub mod classes;
pub mod insertion;
pub mod pasep;
pub mod perm;
pub mod poly;
mod ser;
pub mod stats;
pub mod symmetric;
pub mod tableau;
pub mod verify;

pub use insertion::{decode, encode, generate_all, insert_point, InsertionCode, PointTrace};
pub use pasep::PasepState;
pub use tableau::{BorderWord, Cell, Corner, Edge, Tableau, TableauError};
