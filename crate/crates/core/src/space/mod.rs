//! Exact base spaces: points, threshold maps, dense sequences, clopen
//! intervals of the Cantor set, and the surjection onto `[0,1]`.

mod cantor;
mod lambda;
mod point;
mod sequence;
mod threshold;

pub use cantor::{cylinder_index, cylinder_left, cylinder_right, ClopenInterval, CylinderRange};
pub use lambda::{lambda, lambda_map, lambda_min_preimage, min_preimage};
pub use point::{DyadicPoint, Point, Space, TernaryPoint, MAX_DEPTH};
pub use sequence::{block_position, mesh_cell, DenseSequence, MeshCoverage};
pub use threshold::{chi_apply, ThresholdMap};
