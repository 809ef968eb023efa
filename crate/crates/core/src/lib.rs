//! Turing machines compiled to generalized shifts and then to exact,
//! area-preserving, piecewise-affine maps of the square Cantor set, with a
//! halting-equivalence harness on top and numerics for the contact mapping
//! torus that suspends such a map.

pub mod cantor;
pub mod fixtures;
pub mod format;
pub mod gshift;
pub mod orbit;
pub mod radix;
pub mod reeb;
pub mod render;
pub mod tape;
pub mod tm;

pub use cantor::{
    compile_blockmap, decode_point, encode_point, halt_region, verify_blockmap, CantorBlock,
    CantorPoint, PiecewiseBlockMap, VerificationReport,
};
pub use format::Mode;
pub use gshift::{compile_tm, BiSequence, Conjugation, GeneralizedShift, Window};
pub use radix::RadixRational;
pub use tape::{SymbolIndex, Tape};
pub use tm::{Configuration, Move, RunResult, StateIndex, TuringMachine};
pub use orbit::{
    build_experiment, run_orbit, verify_equivalence, viscous_budget, Experiment, ExperimentSpec,
    OrbitOutcome, Verdict, ViscousBudget,
};
