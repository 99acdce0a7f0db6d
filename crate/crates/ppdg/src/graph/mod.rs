//! Control flow graph, postdominators, control and data dependences, and the
//! program dependence graph assembled from them.

mod cfg;
mod control;
mod dot;
mod pdg;
mod postdom;
mod reaching;

pub use cfg::{build_cfg, Branch, Cfg, CfgNode};
pub use control::{control_dependences, ControlDep, PdgSource};
pub use pdg::{build_pdg, pdg_for, Pdg};
pub use postdom::{compute_postdominators, PostDomTree};
pub use reaching::{reaching_definitions, DefUse};
