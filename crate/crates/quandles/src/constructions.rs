//! Building quandles from algebraic data, and going back.
//!
//! Forward direction: affine quandles `Aff(A, f)` with `a * b = (1-f)(a) +
//! f(b)`, projection quandles, semiregular extensions `Ext(A, f, d̄)` on
//! `I × A` with
//!
//! ```text
//! (i, a) * (j, b) = (j, (1-f)(a) + f(b) + d_i - d_j)
//! ```
//!
//! and sums of affine meshes. Backward direction: a quandle whose
//! displacement group is abelian and semiregular is isomorphic to an
//! indecomposable semiregular extension over that group
//! ([`extension_representation`]), and padding the constant tuple to a
//! multitransversal embeds any such quandle into an affine one
//! ([`quasi_affine_embedding`]).
//!
//! Built tables order elements fiber-major: `(i, a) ↦ i·|A| + rank(a)`, with
//! tuples ranked lexicographically.

use std::collections::HashMap;

use thiserror::Error;

use crate::abelian::{
    multitransversal_multiplicity, Element, FiniteAbelianGroup, GroupMap, Subgroup,
};
use crate::perm::{is_abelian_generators, PermGroup, Permutation};
use crate::quandle::FiniteQuandle;

/// The data of a semiregular extension: an abelian group `A`, an
/// automorphism `f`, and a tuple `d̄ = (d_0, …, d_{k-1})` of elements of `A`,
/// one per fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionDescriptor {
    group: FiniteAbelianGroup,
    automorphism: GroupMap,
    constants: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("f is not an automorphism of the given group")]
    NotAutomorphism,
    #[error("the constant tuple must be non-empty")]
    EmptyConstants,
    #[error("constant {index} is not an element of the group")]
    InvalidConstant { index: usize },
}

impl ExtensionDescriptor {
    pub fn new(
        group: FiniteAbelianGroup,
        automorphism: GroupMap,
        constants: Vec<Element>,
    ) -> Result<Self, DescriptorError> {
        if !(automorphism.is_automorphism() && automorphism.source() == &group) {
            return Err(DescriptorError::NotAutomorphism);
        }
        if constants.is_empty() {
            return Err(DescriptorError::EmptyConstants);
        }
        for (index, d) in constants.iter().enumerate() {
            if !group.contains(d) {
                return Err(DescriptorError::InvalidConstant { index });
            }
        }
        Ok(ExtensionDescriptor {
            group,
            automorphism,
            constants,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn automorphism(&self) -> &GroupMap {
        &self.automorphism
    }

    pub fn constants(&self) -> &[Element] {
        &self.constants
    }

    /// Number of fibers `k`.
    pub fn fiber_count(&self) -> usize {
        self.constants.len()
    }

    /// Order of the built quandle, `k · |A|`.
    pub fn order(&self) -> usize {
        self.fiber_count() * self.group.order()
    }

    /// `Im(1 - f)`, the translation part of the displacement group.
    pub fn displacement_image(&self) -> Subgroup {
        self.automorphism
            .one_minus()
            .expect("automorphism is an endomorphism")
            .image()
    }

    /// The fibers are exactly the orbits iff `Im(1-f)` together with all
    /// differences `d_i - d_j` generates `A`.
    pub fn is_indecomposable(&self) -> bool {
        let mut gens = self.displacement_image().generators().to_vec();
        let base = &self.constants[0];
        for d in &self.constants[1..] {
            gens.push(self.group.sub(d, base));
        }
        Subgroup::generated(&self.group, &gens).is_full()
    }

    /// True iff `d̄` is a multitransversal of `A / Im(1-f)`; among
    /// indecomposable extensions this characterizes the affine ones.
    pub fn is_balanced(&self) -> bool {
        self.multiplicity().is_some()
    }

    /// Multiplicity of `d̄` as a multitransversal of `A / Im(1-f)`, if it is
    /// one.
    pub fn multiplicity(&self) -> Option<usize> {
        multitransversal_multiplicity(&self.constants, &self.displacement_image())
    }

    /// Rank of the pair `(i, a)` in the built table.
    pub fn index_of(&self, fiber: usize, a: &[usize]) -> usize {
        fiber * self.group.order() + self.group.index_of(a)
    }

    /// Inverse of [`Self::index_of`].
    pub fn coords_of(&self, index: usize) -> (usize, Element) {
        let size = self.group.order();
        (index / size, self.group.element_at(index % size))
    }
}

/// The affine quandle `Aff(A, f)` with `a * b = (1-f)(a) + f(b)`, together
/// with the element list (rank `i` of the table is `elements[i]`).
pub fn affine_quandle(
    a: &FiniteAbelianGroup,
    f: &GroupMap,
) -> Result<(FiniteQuandle, Vec<Element>), DescriptorError> {
    if !(f.is_automorphism() && f.source() == a) {
        return Err(DescriptorError::NotAutomorphism);
    }
    let g = f.one_minus().expect("endomorphism");
    let elements = a.elements();
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|x| {
            let gx = g.apply(x);
            elements
                .iter()
                .map(|y| a.index_of(&a.add(&gx, &f.apply(y))))
                .collect()
        })
        .collect();
    let q = FiniteQuandle::from_table(table).expect("affine tables are quandles");
    Ok((q, elements))
}

/// The projection quandle on `k` elements: `x * y = y`.
pub fn projection_quandle(k: usize) -> FiniteQuandle {
    assert!(k >= 1);
    let table = (0..k).map(|_| (0..k).collect()).collect();
    FiniteQuandle::from_table(table).expect("projection tables are quandles")
}

/// The semiregular extension `Ext(A, f, d̄)` as a table on `k · |A|`
/// elements, fiber-major, plus the coordinates of each element.
pub fn semiregular_extension(desc: &ExtensionDescriptor) -> (FiniteQuandle, Vec<(usize, Element)>) {
    let a = &desc.group;
    let f = &desc.automorphism;
    let g = f.one_minus().expect("endomorphism");
    let n = desc.order();
    let coords: Vec<(usize, Element)> = (0..n).map(|idx| desc.coords_of(idx)).collect();
    let table: Vec<Vec<usize>> = coords
        .iter()
        .map(|(i, x)| {
            let gx = g.apply(x);
            coords
                .iter()
                .map(|(j, y)| {
                    let mut v = a.add(&gx, &f.apply(y));
                    v = a.add(&v, &a.sub(&desc.constants[*i], &desc.constants[*j]));
                    desc.index_of(*j, &v)
                })
                .collect()
        })
        .collect();
    let q = FiniteQuandle::from_table(table).expect("semiregular extensions are quandles");
    (q, coords)
}

/// A heterogeneous affine structure over the index set `0..fibers`: groups
/// `A_i`, homomorphisms `φ_{i,j} : A_i → A_j`, and constants `c_{i,j} ∈ A_j`.
#[derive(Clone, Debug)]
pub struct AffineMesh {
    pub groups: Vec<FiniteAbelianGroup>,
    /// `maps[i][j]` is `φ_{i,j}`.
    pub maps: Vec<Vec<GroupMap>>,
    /// `constants[i][j]` is `c_{i,j}`, an element of `A_j`.
    pub constants: Vec<Vec<Element>>,
}

/// The mesh axiom that failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeshViolation {
    #[error("mesh tables have inconsistent shapes")]
    Shape,
    #[error("M1 fails at fiber {i}: 1 - φ_{{{i},{i}}} is not an automorphism")]
    M1 { i: usize },
    #[error("M2 fails at fiber {i}: c_{{{i},{i}}} is non-zero")]
    M2 { i: usize },
    #[error("M3 fails: φ_{{{j},{k}}} φ_{{{i},{j}}} != φ_{{{jp},{k}}} φ_{{{i},{jp}}}")]
    M3 { i: usize, j: usize, jp: usize, k: usize },
    #[error("M4 fails: φ_{{{j},{k}}}(c_{{{i},{j}}}) != φ_{{{k},{k}}}(c_{{{i},{k}}} - c_{{{j},{k}}})")]
    M4 { i: usize, j: usize, k: usize },
}

impl AffineMesh {
    pub fn fibers(&self) -> usize {
        self.groups.len()
    }

    /// Checks the mesh axioms M1–M4, naming the first that fails.
    pub fn validate(&self) -> Result<(), MeshViolation> {
        let n = self.fibers();
        if self.maps.len() != n
            || self.constants.len() != n
            || self.maps.iter().any(|r| r.len() != n)
            || self.constants.iter().any(|r| r.len() != n)
        {
            return Err(MeshViolation::Shape);
        }
        for i in 0..n {
            for j in 0..n {
                let phi = &self.maps[i][j];
                if phi.source() != &self.groups[i]
                    || phi.target() != &self.groups[j]
                    || !self.groups[j].contains(&self.constants[i][j])
                {
                    return Err(MeshViolation::Shape);
                }
            }
        }
        for i in 0..n {
            if !self.maps[i][i]
                .one_minus()
                .map_or(false, |g| g.is_automorphism())
            {
                return Err(MeshViolation::M1 { i });
            }
            if self.constants[i][i] != self.groups[i].zero() {
                return Err(MeshViolation::M2 { i });
            }
        }
        for i in 0..n {
            for j in 0..n {
                for jp in 0..n {
                    for k in 0..n {
                        let left = self.maps[j][k].compose(&self.maps[i][j]);
                        let right = self.maps[jp][k].compose(&self.maps[i][jp]);
                        if left != right {
                            return Err(MeshViolation::M3 { i, j, jp, k });
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.maps[j][k].apply(&self.constants[i][j]);
                    let diff =
                        self.groups[k].sub(&self.constants[i][k], &self.constants[j][k]);
                    let right = self.maps[k][k].apply(&diff);
                    if left != right {
                        return Err(MeshViolation::M4 { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// The sum of the mesh: `a * b = c_{i,j} + φ_{i,j}(a) + (1 - φ_{j,j})(b)`
    /// for `a ∈ A_i`, `b ∈ A_j`, on the disjoint union ordered fiber-major.
    pub fn sum(&self) -> Result<FiniteQuandle, MeshViolation> {
        self.validate()?;
        let n = self.fibers();
        let offsets: Vec<usize> = {
            let mut acc = 0;
            let mut v = Vec::with_capacity(n);
            for g in &self.groups {
                v.push(acc);
                acc += g.order();
            }
            v
        };
        let total: usize = self.groups.iter().map(|g| g.order()).sum();
        let coords: Vec<(usize, Element)> = (0..n)
            .flat_map(|i| {
                self.groups[i]
                    .elements()
                    .into_iter()
                    .map(move |a| (i, a))
            })
            .collect();
        let one_minus_diag: Vec<GroupMap> = (0..n)
            .map(|j| self.maps[j][j].one_minus().expect("endomorphism"))
            .collect();
        let table: Vec<Vec<usize>> = coords
            .iter()
            .map(|(i, a)| {
                coords
                    .iter()
                    .map(|(j, b)| {
                        let aj = &self.groups[*j];
                        let mut v = aj.add(&self.constants[*i][*j], &self.maps[*i][*j].apply(a));
                        v = aj.add(&v, &one_minus_diag[*j].apply(b));
                        offsets[*j] + aj.index_of(&v)
                    })
                    .collect()
            })
            .collect();
        debug_assert_eq!(table.len(), total);
        Ok(FiniteQuandle::from_table(table).expect("mesh sums are quandles"))
    }
}

/// The mesh of an extension: every fiber carries `A`, every `φ_{i,j}` is
/// `1 - f`, and `c_{i,j} = d_i - d_j`. Its sum equals the extension table.
pub fn mesh_of_extension(desc: &ExtensionDescriptor) -> AffineMesh {
    let n = desc.fiber_count();
    let a = desc.group().clone();
    let phi = desc
        .automorphism()
        .one_minus()
        .expect("automorphism is an endomorphism");
    AffineMesh {
        groups: vec![a.clone(); n],
        maps: vec![vec![phi; n]; n],
        constants: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| a.sub(&desc.constants()[i], &desc.constants()[j]))
                    .collect()
            })
            .collect(),
    }
}

/// Why a quandle admits no semiregular-extension representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum NotRepresentable {
    #[error("the displacement group is not abelian (quandle is not medial)")]
    NotMedial,
    #[error("the displacement group is not semiregular")]
    NotSemiregular,
}

/// A verified representation of a quandle as an indecomposable semiregular
/// extension over its displacement group.
#[derive(Clone, Debug)]
pub struct ExtensionRepresentation {
    pub descriptor: ExtensionDescriptor,
    /// Least orbit representatives indexing the fibers.
    pub transversal: Vec<usize>,
    /// Bijection sending the extension's table index to the quandle element:
    /// `(i, α) ↦ α(t_i)`.
    pub iso: Permutation,
}

/// Represents a medial quandle with semiregular displacement group as an
/// indecomposable extension: `A` is the displacement group in abstract form,
/// `f` is conjugation by `L_0`, and `d_x = L_x ∘ L_0⁻¹` over the orbit
/// transversal. The returned isomorphism is checked exhaustively.
pub fn extension_representation(
    q: &FiniteQuandle,
) -> Result<ExtensionRepresentation, NotRepresentable> {
    let n = q.order();
    let gens = q.dis_generators(0);
    if !is_abelian_generators(&gens) {
        return Err(NotRepresentable::NotMedial);
    }
    let dis = PermGroup::generate(&gens, n);
    if !dis.is_semiregular() {
        return Err(NotRepresentable::NotSemiregular);
    }
    let structure = dis.abelian_structure().expect("generators commute");
    let a = structure.group.clone();

    // f(α) = L_0 ∘ α ∘ L_0⁻¹; conjugation leaves the displacement group
    // invariant, and in a medial quandle it does not depend on the base
    // point.
    let l0 = q.left_translation(0);
    let l0_inv = l0.inverse();
    let matrix: Vec<Vec<i64>> = {
        let columns: Vec<Element> = (0..a.rank())
            .map(|j| {
                let gen = structure
                    .perm_of(&a.unit(j))
                    .expect("unit tuple corresponds to a group element");
                let conj = l0.compose(gen).compose(&l0_inv);
                structure
                    .tuple_of(&conj)
                    .expect("conjugate stays in the displacement group")
                    .clone()
            })
            .collect();
        (0..a.rank())
            .map(|i| (0..a.rank()).map(|j| columns[j][i] as i64).collect())
            .collect()
    };
    let f = GroupMap::new(a.clone(), a.clone(), matrix).expect("conjugation is linear");
    debug_assert!(f.is_automorphism());

    let transversal = q.orbit_transversal();
    let constants: Vec<Element> = transversal
        .iter()
        .map(|&x| {
            let d = q.left_translation(x).compose(&l0_inv);
            structure
                .tuple_of(&d)
                .expect("L_x ∘ L_0⁻¹ lies in the displacement group")
                .clone()
        })
        .collect();
    let descriptor =
        ExtensionDescriptor::new(a, f, constants).expect("representation data is valid");
    debug_assert!(descriptor.is_indecomposable());

    let images: Vec<usize> = (0..descriptor.order())
        .map(|idx| {
            let (i, tuple) = descriptor.coords_of(idx);
            structure
                .perm_of(&tuple)
                .expect("tuple corresponds to a group element")
                .apply(transversal[i])
        })
        .collect();
    let iso = Permutation::from_images(images).expect("the evaluation map is a bijection");

    // Exhaustive isomorphism check against the built extension table.
    let (ext, _) = semiregular_extension(&descriptor);
    for u in 0..n {
        for v in 0..n {
            assert_eq!(
                iso.apply(ext.op(u, v)),
                q.op(iso.apply(u), iso.apply(v)),
                "representation map must be an isomorphism"
            );
        }
    }
    Ok(ExtensionRepresentation {
        descriptor,
        transversal,
        iso,
    })
}

/// A quasi-affine quandle embedded into an affine superquandle.
#[derive(Clone, Debug)]
pub struct QuasiAffineEmbedding {
    /// The affine quandle `Ext(A, f, ē)` with `ē` a multitransversal padding
    /// of the representation's constants.
    pub superquandle: FiniteQuandle,
    pub descriptor: ExtensionDescriptor,
    /// `injection[x]` is the index of `x` inside the superquandle.
    pub injection: Vec<usize>,
}

/// Embeds a quasi-affine quandle into an affine quandle of order at most
/// `|Q|²` by padding each deficient coset of `Im(1-f)` with its least
/// representative until all cosets reach the maximal multiplicity.
pub fn quasi_affine_embedding(q: &FiniteQuandle) -> Result<QuasiAffineEmbedding, NotRepresentable> {
    let rep = extension_representation(q)?;
    let desc = &rep.descriptor;
    let a = desc.group();
    let s = desc.displacement_image();
    let cosets = s.cosets();
    let mut counts = vec![0usize; cosets.len()];
    let rep_index: HashMap<Element, usize> = cosets
        .iter()
        .enumerate()
        .map(|(i, c)| (c[0].clone(), i))
        .collect();
    for d in desc.constants() {
        counts[rep_index[&s.coset_rep(d)]] += 1;
    }
    let target = *counts.iter().max().unwrap();

    let mut padded = desc.constants().to_vec();
    for (i, coset) in cosets.iter().enumerate() {
        for _ in counts[i]..target {
            padded.push(coset[0].clone());
        }
    }
    let padded_desc = ExtensionDescriptor::new(a.clone(), desc.automorphism().clone(), padded)
        .expect("padding preserves validity");
    assert!(
        padded_desc.is_balanced(),
        "padded constants form a multitransversal"
    );
    let (superquandle, _) = semiregular_extension(&padded_desc);
    assert!(superquandle.order() <= q.order() * q.order());

    // The original fibers keep their indices, so the inclusion is the
    // inverse of the representation bijection.
    let inv = rep.iso.inverse();
    let injection: Vec<usize> = (0..q.order()).map(|x| inv.apply(x)).collect();
    for x in 0..q.order() {
        for y in 0..q.order() {
            assert_eq!(
                superquandle.op(injection[x], injection[y]),
                injection[q.op(x, y)],
                "inclusion must be a homomorphism"
            );
        }
    }
    Ok(QuasiAffineEmbedding {
        superquandle,
        descriptor: padded_desc,
        injection,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("the constant tuple is not a multitransversal")]
    NotMultitransversal,
    #[error("the selected sub-tuple is not a transversal")]
    SubTupleNotTransversal,
}

/// A verified isomorphism `Ext(A, f, d|_J) × Proj(m) → Ext(A, f, d̄)` for a
/// balanced tuple of multiplicity `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDecomposition {
    pub factor: ExtensionDescriptor,
    pub projection_size: usize,
    /// Index map from the product table to the extension table.
    pub iso: Permutation,
}

/// Splits a balanced extension into a transversal extension times a
/// projection quandle, via `((i, a), u) ↦ (ξ(i, u), a + c_{i,u})` where
/// `ξ(i, u)` enumerates the fibers sharing the coset of `d_i` and
/// `(1-f)(c_{i,u}) = d_i - d_{ξ(i,u)}`.
pub fn product_decomposition(
    desc: &ExtensionDescriptor,
    sub: &[usize],
) -> Result<ProductDecomposition, DecompositionError> {
    let a = desc.group();
    let s = desc.displacement_image();
    let Some(mult) = desc.multiplicity() else {
        return Err(DecompositionError::NotMultitransversal);
    };
    let coset_count = a.order() / s.order();
    let reps: Vec<Element> = sub
        .iter()
        .map(|&i| s.coset_rep(&desc.constants()[i]))
        .collect();
    {
        let mut distinct = reps.clone();
        distinct.sort();
        distinct.dedup();
        if sub.len() != coset_count || distinct.len() != coset_count {
            return Err(DecompositionError::SubTupleNotTransversal);
        }
    }

    // ξ(i, u): the u-th fiber whose constant shares the coset of d_i.
    let members: Vec<Vec<usize>> = sub
        .iter()
        .map(|&i| {
            let target = s.coset_rep(&desc.constants()[i]);
            (0..desc.fiber_count())
                .filter(|&l| s.coset_rep(&desc.constants()[l]) == target)
                .collect()
        })
        .collect();
    debug_assert!(members.iter().all(|m| m.len() == mult));

    // Witnesses c_{i,u} with (1-f)(c) = d_i - d_{ξ(i,u)}.
    let one_minus = desc.automorphism().one_minus().expect("endomorphism");
    let witness = |diff: &Element| -> Element {
        a.elements()
            .into_iter()
            .find(|c| &one_minus.apply(c) == diff)
            .expect("differences within a coset lie in Im(1-f)")
    };

    let factor = ExtensionDescriptor::new(
        a.clone(),
        desc.automorphism().clone(),
        sub.iter().map(|&i| desc.constants()[i].clone()).collect(),
    )
    .expect("sub-tuple descriptor is valid");
    let (factor_table, _) = semiregular_extension(&factor);
    let product = factor_table.direct_product(&projection_quandle(mult));
    let (ext, _) = semiregular_extension(desc);

    let size = a.order();
    let mut images = Vec::with_capacity(product.order());
    for pos in 0..sub.len() {
        for rank in 0..size {
            let elem = a.element_at(rank);
            for u in 0..mult {
                let target_fiber = members[pos][u];
                let diff = a.sub(&desc.constants()[sub[pos]], &desc.constants()[target_fiber]);
                let shifted = a.add(&elem, &witness(&diff));
                images.push(desc.index_of(target_fiber, &shifted));
            }
        }
    }
    let iso = Permutation::from_images(images).expect("decomposition map is a bijection");
    for x in 0..product.order() {
        for y in 0..product.order() {
            assert_eq!(
                iso.apply(product.op(x, y)),
                ext.op(iso.apply(x), iso.apply(y)),
                "decomposition map must be an isomorphism"
            );
        }
    }
    Ok(ProductDecomposition {
        factor,
        projection_size: mult,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::brute_force_isomorphism;
    use crate::testutil::{aff_z4_neg, balanced_non_quasi_affine_8, quotient_of_aff_z4};

    fn z(m: usize) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(m)
    }

    fn ext(m: usize, f: i64, d: &[usize]) -> ExtensionDescriptor {
        let a = z(m);
        let constants = d
            .iter()
            .map(|&x| if m == 1 { vec![] } else { vec![x % m] })
            .collect();
        ExtensionDescriptor::new(a.clone(), GroupMap::scalar(&a, f), constants).unwrap()
    }

    #[test]
    fn affine_tables() {
        let (one, _) = affine_quandle(&z(1), &GroupMap::identity(&z(1))).unwrap();
        assert_eq!(one.order(), 1);

        let q = aff_z4_neg();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(q.op(x, y), (2 * x + 8 - y) % 4);
            }
        }

        let a = z(6);
        let (q6, _) = affine_quandle(&a, &GroupMap::scalar(&a, -1)).unwrap();
        assert_eq!(q6.orbits(), vec![vec![0, 2, 4], vec![1, 3, 5]]);
    }

    #[test]
    fn rejects_non_automorphism() {
        let a = z(4);
        assert_eq!(
            affine_quandle(&a, &GroupMap::scalar(&a, 2)).unwrap_err(),
            DescriptorError::NotAutomorphism
        );
    }

    #[test]
    fn extension_examples() {
        // Ext(Z_2, 1, (0,1)) ≅ Aff(Z_4, -1).
        let (e, _) = semiregular_extension(&ext(2, 1, &[0, 1]));
        assert!(brute_force_isomorphism(&e, &aff_z4_neg()).is_some());

        // Ext(Z_3, 2, (0,0)) ≅ Aff(Z_6, -1).
        let a6 = z(6);
        let (q6, _) = affine_quandle(&a6, &GroupMap::scalar(&a6, -1)).unwrap();
        let (e6, _) = semiregular_extension(&ext(3, 2, &[0, 0]));
        assert!(brute_force_isomorphism(&e6, &q6).is_some());

        // Ext(Z_1, 1, (0,0,0,0)) is the projection quandle.
        let (p, _) = semiregular_extension(&ext(1, 1, &[0, 0, 0, 0]));
        assert_eq!(p.table(), projection_quandle(4).table());
    }

    #[test]
    fn extension_fibers_are_affine_subquandles() {
        let desc = ext(3, 1, &[0, 1]);
        let (q, coords) = semiregular_extension(&desc);
        // Fiber products stay in the fiber and restrict to Aff(A, f).
        for (idx, (i, _)) in coords.iter().enumerate() {
            for (jdx, (j, _)) in coords.iter().enumerate() {
                if i == j {
                    assert_eq!(q.op(idx, jdx) / 3, *i);
                }
            }
        }
        // Indecomposable: fibers are the orbits.
        assert!(desc.is_indecomposable());
        assert_eq!(q.orbits().len(), desc.fiber_count());
    }

    #[test]
    fn indecomposability_judgments() {
        assert!(!ext(3, 1, &[0]).is_indecomposable());
        assert!(ext(3, 1, &[0, 1]).is_indecomposable());
        assert!(ext(1, 1, &[0, 0, 0]).is_indecomposable());
        // 1 - f onto: always indecomposable regardless of constants.
        assert!(ext(3, 2, &[0, 0]).is_indecomposable());
    }

    #[test]
    fn balancedness_and_multiplicity() {
        assert_eq!(ext(2, 1, &[0, 1]).multiplicity(), Some(1));
        assert_eq!(ext(2, 1, &[0, 0, 1, 1]).multiplicity(), Some(2));
        assert_eq!(ext(2, 1, &[0, 0, 1]).multiplicity(), None);
        assert_eq!(ext(3, 1, &[0, 1]).multiplicity(), None);
    }

    #[test]
    fn one_fiber_mesh_collapses_to_affine() {
        // (A, φ, 0) with 1 - φ an automorphism sums to Aff(A, 1 - φ).
        let a = z(5);
        let phi = GroupMap::scalar(&a, 3);
        let mesh = AffineMesh {
            groups: vec![a.clone()],
            maps: vec![vec![phi.clone()]],
            constants: vec![vec![a.zero()]],
        };
        let sum = mesh.sum().unwrap();
        let (aff, _) = affine_quandle(&a, &phi.one_minus().unwrap()).unwrap();
        assert_eq!(sum.table(), aff.table());
    }

    #[test]
    fn mesh_of_extension_matches_extension_table() {
        for desc in [ext(2, 1, &[0, 1]), ext(3, 2, &[0, 0]), ext(4, 3, &[0, 1, 2])] {
            let mesh = mesh_of_extension(&desc);
            assert!(mesh.validate().is_ok());
            let (direct, _) = semiregular_extension(&desc);
            assert_eq!(mesh.sum().unwrap().table(), direct.table());
        }
        // c_{0,1} = d_0 - d_1 = 1 over Z_2.
        let mesh = mesh_of_extension(&ext(2, 1, &[0, 1]));
        assert_eq!(mesh.constants[0][1], vec![1]);
    }

    #[test]
    fn mesh_axiom_violations_are_named() {
        let a = z(4);
        let phi = GroupMap::scalar(&a, 2);
        // M1–M3 hold with φ ≡ multiplication by 2, but c_{0,1} = 1, c_{1,0} = 0
        // breaks M4 at (i, j, k) = (0, 1, 0).
        let mesh = AffineMesh {
            groups: vec![a.clone(), a.clone()],
            maps: vec![vec![phi.clone(), phi.clone()], vec![phi.clone(), phi.clone()]],
            constants: vec![vec![vec![0], vec![1]], vec![vec![0], vec![0]]],
        };
        assert_eq!(mesh.validate(), Err(MeshViolation::M4 { i: 0, j: 1, k: 0 }));

        // Identity diagonal maps break M1.
        let id_mesh = AffineMesh {
            groups: vec![a.clone()],
            maps: vec![vec![GroupMap::identity(&a)]],
            constants: vec![vec![a.zero()]],
        };
        assert_eq!(id_mesh.validate(), Err(MeshViolation::M1 { i: 0 }));
    }

    #[test]
    fn representation_of_affine_quandle() {
        let rep = extension_representation(&aff_z4_neg()).unwrap();
        let desc = &rep.descriptor;
        assert_eq!(desc.group(), &z(2));
        assert_eq!(desc.fiber_count(), 2);
        assert!(desc.automorphism().is_identity());
        let mut d = desc.constants().to_vec();
        d.sort();
        assert_eq!(d, vec![vec![0], vec![1]]);
    }

    #[test]
    fn representation_of_projection_is_trivial() {
        let rep = extension_representation(&projection_quandle(5)).unwrap();
        assert_eq!(rep.descriptor.group(), &FiniteAbelianGroup::trivial());
        assert_eq!(rep.descriptor.fiber_count(), 5);
    }

    #[test]
    fn representation_failures() {
        assert_eq!(
            extension_representation(&balanced_non_quasi_affine_8()).unwrap_err(),
            NotRepresentable::NotSemiregular
        );
        assert_eq!(
            extension_representation(&quotient_of_aff_z4()).unwrap_err(),
            NotRepresentable::NotSemiregular
        );
    }

    #[test]
    fn conjugation_is_base_point_independent_on_medial_quandles() {
        for q in [
            aff_z4_neg(),
            semiregular_extension(&ext(3, 1, &[0, 1])).0,
            semiregular_extension(&ext(2, 1, &[0, 0, 1])).0,
        ] {
            let dis = q.displacement_group();
            for alpha in dis.elements() {
                let base: Vec<Permutation> = (0..q.order())
                    .map(|x| {
                        let lx = q.left_translation(x);
                        lx.compose(alpha).compose(&lx.inverse())
                    })
                    .collect();
                assert!(base.windows(2).all(|w| w[0] == w[1]));
            }
        }
    }

    #[test]
    fn embedding_pads_to_a_multitransversal() {
        let (q, _) = semiregular_extension(&ext(2, 1, &[0, 0, 1]));
        let emb = quasi_affine_embedding(&q).unwrap();
        assert_eq!(emb.superquandle.order(), 8);
        assert!(emb.descriptor.is_balanced());

        let (q3, _) = semiregular_extension(&ext(3, 1, &[0, 1]));
        let emb3 = quasi_affine_embedding(&q3).unwrap();
        assert_eq!(emb3.superquandle.order(), 9);

        // Already affine: nothing to pad.
        let emb_aff = quasi_affine_embedding(&aff_z4_neg()).unwrap();
        assert_eq!(emb_aff.superquandle.order(), 4);
    }

    #[test]
    fn product_decomposition_examples() {
        // Multiplicity 1: the factor is the extension itself.
        let d = ext(2, 1, &[0, 1]);
        let p = product_decomposition(&d, &[0, 1]).unwrap();
        assert_eq!(p.projection_size, 1);

        // Ext(Z_2, 1, (0,0,1,1)) ≅ Ext(Z_2, 1, (0,1)) × Proj(2).
        let d = ext(2, 1, &[0, 0, 1, 1]);
        let p = product_decomposition(&d, &[0, 2]).unwrap();
        assert_eq!(p.projection_size, 2);
        assert_eq!(p.factor.constants(), &[vec![0], vec![1]]);

        // 1 - f onto: any tuple is balanced with a single coset.
        let d = ext(5, 2, &[0, 3, 1]);
        let p = product_decomposition(&d, &[0]).unwrap();
        assert_eq!(p.projection_size, 3);

        // Errors.
        assert_eq!(
            product_decomposition(&ext(2, 1, &[0, 0, 1]), &[0, 2]),
            Err(DecompositionError::NotMultitransversal)
        );
        assert_eq!(
            product_decomposition(&ext(2, 1, &[0, 1]), &[0]),
            Err(DecompositionError::SubTupleNotTransversal)
        );
    }
}
