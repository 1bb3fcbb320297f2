//! Exact integer linear algebra: Smith normal form, finitely generated
//! abelian groups, quotients and homomorphisms.

mod group;
mod lattice;
mod matrix;
mod snf;

#[cfg(test)]
pub(crate) use group::bigs;
pub use group::{from_moduli, iso_check, subgroup_of, AbHom, FinAbGroup, GroupShape};
pub use lattice::{kernel_mod, Lattice};
pub use matrix::Matrix;
pub use snf::{cokernel_invariants, snf, Snf};

use num_bigint::BigInt;

use crate::IntMatrix;

/// `Z^rows / column-lattice(m)`.
pub fn cokernel(m: &IntMatrix) -> FinAbGroup {
    FinAbGroup::cokernel(m)
}

/// `amb / <gens>`, generators written on `amb`'s presentation generators.
pub fn subgroup_quotient(amb: &FinAbGroup, gens: &[Vec<BigInt>]) -> FinAbGroup {
    amb.subgroup_quotient(gens)
}
