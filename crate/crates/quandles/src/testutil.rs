//! Shared fixtures for the unit tests.

use crate::abelian::{FiniteAbelianGroup, GroupMap};
use crate::constructions::{affine_quandle, semiregular_extension, ExtensionDescriptor};
use crate::quandle::FiniteQuandle;

/// The affine quandle over `Z_4` with `f = -1`, i.e. `x * y = 2x - y mod 4`.
pub(crate) fn aff_z4_neg() -> FiniteQuandle {
    let a = FiniteAbelianGroup::cyclic(4);
    affine_quandle(&a, &GroupMap::scalar(&a, -1)).unwrap().0
}

/// An 8-element 2-reductive medial quandle whose columns are balanced on
/// every orbit although its displacement group is not semiregular.
pub(crate) fn balanced_non_quasi_affine_8() -> FiniteQuandle {
    FiniteQuandle::from_table(vec![
        vec![0, 1, 2, 3, 4, 5, 6, 7],
        vec![0, 1, 2, 3, 4, 5, 6, 7],
        vec![1, 0, 2, 3, 5, 4, 7, 6],
        vec![1, 0, 2, 3, 5, 4, 7, 6],
        vec![1, 0, 3, 2, 4, 5, 7, 6],
        vec![1, 0, 3, 2, 4, 5, 7, 6],
        vec![0, 1, 3, 2, 5, 4, 6, 7],
        vec![0, 1, 3, 2, 5, 4, 6, 7],
    ])
    .expect("the table is a quandle")
}

/// The 3-element quotient of `Aff(Z_4, -1)` by the congruence with blocks
/// `{0,2}, {1}, {3}`: not quasi-affine, but its displacement group is tiny.
pub(crate) fn quotient_of_aff_z4() -> FiniteQuandle {
    FiniteQuandle::from_table(vec![vec![0, 2, 1], vec![0, 1, 2], vec![0, 1, 2]])
        .expect("the quotient is a quandle")
}

/// `Ext(A, f, d)` over a cyclic group with a scalar automorphism.
pub(crate) fn cyclic_extension(m: usize, f: i64, d: &[usize]) -> FiniteQuandle {
    let a = FiniteAbelianGroup::cyclic(m);
    let constants = d.iter().map(|&x| if m == 1 { vec![] } else { vec![x % m] }).collect();
    let desc = ExtensionDescriptor::new(a.clone(), GroupMap::scalar(&a, f), constants).unwrap();
    semiregular_extension(&desc).0
}
