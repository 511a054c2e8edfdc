//! Heun-class operators, their isomonodromic deformations and the Painlevé
//! equations, in exact rational arithmetic.

pub mod polyalg;
pub mod sing_analysis;
pub mod heun_class;
pub mod deformation;
pub mod isomonodromy;
pub mod painleve_catalog;
pub mod numerics;
pub mod cli;
