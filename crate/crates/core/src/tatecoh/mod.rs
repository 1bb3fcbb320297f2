//! Tate cohomology of finite groups with coefficients in finitely generated
//! modules, from the normalized complete complex, with a cyclic fast path,
//! induced modules and long exact sequences.

mod complex;
mod exact;
mod group;
mod module;
#[cfg(test)]
mod tests;

pub use complex::{
    apply_differential, check_complex, cochain_blocks, complete_differential, map_cochain, tate_cohomology,
    tate_cohomology_cyclic, tate_cohomology_general, tate_cohomology_in_window, tate_group, TateGroup, DEFAULT_WINDOW,
};
pub use exact::{long_exact_check, shapiro_check, LongExactReport, NodeCheck, ShapiroReport};
pub use group::{FiniteGroup, Subgroup};
pub use module::{induced_module, GModule};
