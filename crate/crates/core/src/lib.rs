pub mod algebra;
pub mod coxeter;
pub mod geometry;
pub mod group;
pub mod homology;
pub mod simplicial;
pub mod pipeline;
