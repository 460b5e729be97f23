//! Maximum r-robustness of simple digraphs.
//!
//! Two independent engines compute `r_max(D)`, the largest `r` for which every
//! pair of nonempty disjoint vertex subsets contains an `r`-reachable set:
//!
//! * [`exhaustive`] enumerates all such pairs;
//! * [`milp`] builds a mixed-integer linear program whose optimum is `r_max`,
//!   and [`bnb`] solves it by branch and bound over the LP relaxations from [`lp`].
//!
//! [`generators`] draws seeded random graphs, [`compute`] applies the
//! conventions for graphs with fewer than two vertices and dispatches to an
//! engine, and [`bench`] times both engines over a grid of random graphs.

pub mod bench;
pub mod bnb;
pub mod compute;
pub mod edge_list;
pub mod error;
pub mod exhaustive;
pub mod generators;
pub mod graph;
pub mod lp;
pub mod milp;

pub use error::{Error, Result};
pub use graph::{Digraph, LaplacianMatrix, NodeSet};
