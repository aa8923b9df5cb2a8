//! Fixed benchmark fixtures shared by the criterion benches.

use fcurp_core::experiment::{generate, GenParams};
use fcurp_core::{build_path_table, derive_constants, Instance, PathTable};

/// Default-layout Dubins instance with `n_targets` targets.
pub fn dubins_instance(n_targets: usize, seed: u64) -> Instance {
    generate(&GenParams { n_targets, seed, ..GenParams::default() }).expect("default parameters generate")
}

pub fn table(inst: &Instance) -> PathTable {
    build_path_table(inst, derive_constants(inst)).expect("generated instances are valid")
}
