#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod constructions;
pub mod error;
pub mod field;
pub mod geometry;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod search;
pub mod spectral;
pub mod tdgraph;
