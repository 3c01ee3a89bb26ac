//! Hyperbolic Voronoi workbench: constructive machinery for Voronoi
//! complexes of discrete-group orbits in `H^3`, weak-simplicity checking,
//! epsilon-thick nets, dual graphs with oriented-edge bookkeeping,
//! four-coloring-based edge pruning, and the closed-form rank/volume bounds.

pub mod bounds;
pub mod coloring;
pub mod dual_graph;
pub mod hyperbolic;
pub mod polytope;
pub mod thick_net;
pub mod voronoi;

pub use hyperbolic::{
    apply, bisector_halfspace, dist, is_degenerate_quadruple, HalfSpace, KernelError,
    LorentzIsometry, MinkowskiPoint, TAU_GEOM, TAU_NORM, TAU_RANK,
};
pub use polytope::{
    convex_hull_finite, enclose_compact, intersect, reduce_irredundant, truncate_to_compact,
    ConvexPolyhedron, Face, PolytopeError,
};
