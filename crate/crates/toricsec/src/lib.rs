//! Exact polyhedral machinery for secant varieties of Segre-Veronese
//! varieties: the polytope P(a,b), its facet structure, normality,
//! Gorenstein/Q-Gorenstein classification, singular locus components, and a
//! symbolic cumulant subsystem for the underlying toric structure.

pub mod classify;
pub mod cumulants;
pub mod exact;
pub mod normality;
pub mod poly;
pub mod polytope;
pub mod segre_veronese;
pub mod singular;
