//! Dense permutations on `{0, …, n−1}` and finitely generated permutation
//! groups.
//!
//! Everything here is sized for the groups that show up around finite
//! quandles: a displacement group acting semiregularly has at most `n`
//! elements, so groups are materialized as plain sorted vectors and closure
//! runs a pair queue over compositions. Mappings act on the left throughout:
//! `compose(p, q)` sends `x` to `p(q(x))`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::abelian::{decompose_abelian, Element, FiniteAbelianGroup};

/// A permutation in one-line notation: `images[x]` is the image of `x`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

/// The image list passed to [`Permutation::from_images`] was not a bijection.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("images do not form a permutation of 0..{degree}")]
pub struct InvalidPermutation {
    pub degree: usize,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from one-line notation, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, InvalidPermutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            if y >= n || seen[y] {
                return Err(InvalidPermutation { degree: n });
            }
            seen[y] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds the permutation from a list of disjoint cycles on `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Self {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for i in 0..cycle.len() {
                images[cycle[i]] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Composition acting on the left: the result maps `x` to `self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    pub fn fixed_point_count(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x == y)
            .count()
    }

    /// Order of the permutation in the symmetric group.
    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.images)
    }
}

/// Closure would have materialized more elements than the requested cap.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("generated group exceeds the cap of {cap} elements")]
pub struct CapExceeded {
    pub cap: usize,
}

/// A finitely generated permutation group with all elements materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![Permutation::identity(degree)],
        }
    }

    /// The group generated by `generators`, materialized in sorted order.
    pub fn generate(generators: &[Permutation], degree: usize) -> Self {
        Self::generate_capped(generators, degree, None).expect("no cap given")
    }

    /// Pair-queue closure under composition. Inverses arise as powers, so
    /// products alone suffice; both orders of each unordered pair are taken,
    /// which is redundant for the abelian groups of interest but keeps the
    /// contract unconditional. Fails as soon as the element count would
    /// exceed `cap`.
    pub fn generate_capped(
        generators: &[Permutation],
        degree: usize,
        cap: Option<usize>,
    ) -> Result<Self, CapExceeded> {
        for g in generators {
            assert_eq!(g.degree(), degree, "generator degree mismatch");
        }
        let mut elements: Vec<Permutation> = Vec::new();
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();

        let push = |p: Permutation,
                        elements: &mut Vec<Permutation>,
                        seen: &mut HashSet<Permutation>,
                        queue: &mut VecDeque<(usize, usize)>|
         -> Result<bool, CapExceeded> {
            if seen.contains(&p) {
                return Ok(false);
            }
            if let Some(cap) = cap {
                if elements.len() >= cap {
                    return Err(CapExceeded { cap });
                }
            }
            seen.insert(p.clone());
            elements.push(p);
            let t = elements.len() - 1;
            for i in 0..=t {
                queue.push_back((i, t));
            }
            Ok(true)
        };

        push(
            Permutation::identity(degree),
            &mut elements,
            &mut seen,
            &mut queue,
        )?;
        for g in generators {
            push(g.clone(), &mut elements, &mut seen, &mut queue)?;
        }
        while let Some((i, j)) = queue.pop_front() {
            let ij = elements[i].compose(&elements[j]);
            push(ij, &mut elements, &mut seen, &mut queue)?;
            let ji = elements[j].compose(&elements[i]);
            push(ji, &mut elements, &mut seen, &mut queue)?;
        }
        elements.sort();
        Ok(PermGroup {
            degree,
            generators: generators.to_vec(),
            elements,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All group elements in sorted one-line order.
    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_abelian(&self) -> bool {
        is_abelian_generators(if self.generators.is_empty() {
            &self.elements
        } else {
            &self.generators
        })
    }

    /// True iff no non-identity element fixes a point.
    pub fn is_semiregular(&self) -> bool {
        self.elements
            .iter()
            .all(|p| p.is_identity() || p.fixed_point_count() == 0)
    }

    /// Orbits of the natural action, sorted by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of_generators(&self.elements, self.degree)
    }

    /// Invariant-factor structure of an abelian permutation group, together
    /// with the bijection between permutations and residue tuples.
    pub fn abelian_structure(&self) -> Result<PermAbelianStructure, NotAbelian> {
        if !self.is_abelian() {
            return Err(NotAbelian);
        }
        let dec = decompose_abelian(
            &self.elements,
            |a: &Permutation, b: &Permutation| a.compose(b),
            &Permutation::identity(self.degree),
        );
        Ok(PermAbelianStructure {
            group: dec.group,
            to_tuple: dec.tuple_of,
            to_perm: dec.value_of,
        })
    }
}

/// Group passed to [`PermGroup::abelian_structure`] was not abelian.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("permutation group is not abelian")]
pub struct NotAbelian;

/// Abstract structure of an abelian permutation group: an isomorphic
/// [`FiniteAbelianGroup`] plus the element bijection realizing it.
#[derive(Clone, Debug)]
pub struct PermAbelianStructure {
    pub group: FiniteAbelianGroup,
    to_tuple: HashMap<Permutation, Element>,
    to_perm: HashMap<Element, Permutation>,
}

impl PermAbelianStructure {
    /// Residue tuple of a group element.
    pub fn tuple_of(&self, p: &Permutation) -> Option<&Element> {
        self.to_tuple.get(p)
    }

    /// Permutation corresponding to a residue tuple.
    pub fn perm_of(&self, a: &[usize]) -> Option<&Permutation> {
        self.to_perm.get(a)
    }
}

/// A group is abelian iff its generators commute pairwise.
pub fn is_abelian_generators(generators: &[Permutation]) -> bool {
    for (i, p) in generators.iter().enumerate() {
        for q in &generators[i + 1..] {
            if p.compose(q) != q.compose(p) {
                return false;
            }
        }
    }
    true
}

/// Checks semiregularity of the group generated by `generators` without
/// materializing it first: every generator and every new closure element is
/// rejected early if it fixes some but not all points.
pub fn is_semiregular_generated(generators: &[Permutation], degree: usize) -> bool {
    let bad = |p: &Permutation| {
        let f = p.fixed_point_count();
        f > 0 && f < degree
    };
    if generators.iter().any(bad) {
        return false;
    }
    let mut elements: Vec<Permutation> = vec![Permutation::identity(degree)];
    let mut seen: HashSet<Permutation> = elements.iter().cloned().collect();
    for g in generators {
        if seen.insert(g.clone()) {
            elements.push(g.clone());
        }
    }
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for j in 0..elements.len() {
        for i in 0..=j {
            queue.push_back((i, j));
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        let p = elements[i].compose(&elements[j]);
        if seen.contains(&p) {
            continue;
        }
        if bad(&p) {
            return false;
        }
        seen.insert(p.clone());
        elements.push(p);
        let t = elements.len() - 1;
        for l in 0..=t {
            queue.push_back((l, t));
        }
    }
    true
}

/// Orbits of the group generated by `generators` on `0..degree`, as a
/// partition sorted by least element.
pub fn orbits_of_generators(generators: &[Permutation], degree: usize) -> Vec<Vec<usize>> {
    let mut assigned = vec![false; degree];
    let mut orbits = Vec::new();
    for start in 0..degree {
        if assigned[start] {
            continue;
        }
        let mut orbit = vec![start];
        assigned[start] = true;
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            for g in generators {
                let y = g.apply(x);
                if !assigned[y] {
                    assigned[y] = true;
                    orbit.push(y);
                    frontier.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn translation(n: usize, a: usize) -> Permutation {
        Permutation::from_images((0..n).map(|x| (x + a) % n).collect()).unwrap()
    }

    /// Left translations of the affine quandle over Z_4 with f = -1,
    /// i.e. x * y = 2x - y mod 4.
    fn aff_z4_neg_translation(x: usize) -> Permutation {
        Permutation::from_images((0..4).map(|y| (2 * x + 4 - y) % 4).collect()).unwrap()
    }

    #[test]
    fn compose_identity_and_cycles() {
        let id = Permutation::identity(4);
        let q = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]);
        assert_eq!(id.compose(&q), q);
        let c = Permutation::from_cycles(3, &[&[0, 1, 2]]);
        assert_eq!(c.compose(&c), Permutation::from_cycles(3, &[&[0, 2, 1]]));
    }

    #[test]
    fn displacement_of_affine_quandle_is_translation() {
        // L_1 ∘ L_0⁻¹ in Aff(Z_4, -1) is x ↦ x + 2.
        let l0 = aff_z4_neg_translation(0);
        let l1 = aff_z4_neg_translation(1);
        let d = l1.compose(&l0.inverse());
        assert_eq!(d, translation(4, 2));
    }

    #[test]
    fn fixed_points() {
        assert_eq!(Permutation::identity(5).fixed_point_count(), 5);
        assert_eq!(
            Permutation::from_cycles(4, &[&[0, 1]]).fixed_point_count(),
            2
        );
    }

    #[test]
    fn inverse_round_trip() {
        let p = Permutation::from_images(vec![2, 0, 3, 1, 4]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(p.inverse().compose(&p).is_identity());
    }

    #[test]
    fn from_images_rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3]).is_err());
    }

    #[test]
    fn closure_of_identity_is_trivial() {
        let g = PermGroup::generate(&[Permutation::identity(3)], 3);
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn closure_of_four_cycle() {
        let c = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]);
        let g = PermGroup::generate(&[c], 4);
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        assert!(g.is_semiregular());
    }

    #[test]
    fn closure_of_displacement_generators_of_aff_z6() {
        // In Aff(Z_6, -1) the displacement group is the translations by
        // the image of 1 - f = multiplication by 2, so it has 3 elements.
        let l = |x: usize| {
            Permutation::from_images((0..6).map(|y| (2 * x + 6 - y) % 6).collect()).unwrap()
        };
        let l0inv = l(0).inverse();
        let gens: Vec<Permutation> = (0..6).map(|x| l(x).compose(&l0inv)).collect();
        let mut distinct = gens.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 3);
        let g = PermGroup::generate(&gens, 6);
        assert_eq!(g.order(), 3);
    }

    #[test]
    fn cap_semantics() {
        let c = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]);
        assert!(PermGroup::generate_capped(&[c.clone()], 4, Some(4)).is_ok());
        assert_eq!(
            PermGroup::generate_capped(&[c], 4, Some(3)),
            Err(CapExceeded { cap: 3 })
        );
    }

    #[test]
    fn closure_is_closed_under_composition() {
        let gens = vec![
            Permutation::from_cycles(6, &[&[0, 1], &[2, 3]]),
            Permutation::from_cycles(6, &[&[2, 3], &[4, 5]]),
        ];
        let g = PermGroup::generate(&gens, 6);
        for p in g.elements() {
            for q in g.elements() {
                assert!(g.contains(&p.compose(q)));
            }
        }
    }

    #[test]
    fn semiregular_group_order_equals_orbit_size() {
        let gens: Vec<Permutation> = vec![translation(6, 2)];
        let g = PermGroup::generate(&gens, 6);
        assert!(g.is_semiregular());
        for orbit in g.orbits() {
            assert_eq!(g.order(), orbit.len());
        }
    }

    #[test]
    fn orbit_partitions() {
        assert_eq!(
            PermGroup::trivial(3).orbits(),
            vec![vec![0], vec![1], vec![2]]
        );
        // Displacement of Aff(Z_4, -1): translations by {0, 2}.
        let g = PermGroup::generate(&[translation(4, 2)], 4);
        assert_eq!(g.orbits(), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn semiregular_from_generators_early_exit() {
        assert!(is_semiregular_generated(&[translation(4, 2)], 4));
        let swap = Permutation::from_cycles(4, &[&[0, 1]]);
        assert!(!is_semiregular_generated(&[swap], 4));
        assert!(is_semiregular_generated(&[], 4));
    }

    #[test]
    fn abelian_structure_of_cyclic_and_klein_groups() {
        let trivial = PermGroup::trivial(2);
        assert_eq!(
            trivial.abelian_structure().unwrap().group,
            FiniteAbelianGroup::trivial()
        );

        let c4 = PermGroup::generate(&[Permutation::from_cycles(4, &[&[0, 1, 2, 3]])], 4);
        assert_eq!(
            c4.abelian_structure().unwrap().group,
            FiniteAbelianGroup::new(vec![4])
        );

        let klein = PermGroup::generate(
            &[
                Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]),
                Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]),
            ],
            4,
        );
        // No element of order 4, so the structure must split.
        assert!(klein.elements().iter().all(|p| p.order() <= 2));
        assert_eq!(
            klein.abelian_structure().unwrap().group,
            FiniteAbelianGroup::new(vec![2, 2])
        );
    }

    #[test]
    fn abelian_structure_bijection_is_homomorphism() {
        let groups = vec![
            PermGroup::generate(&[Permutation::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]])], 6),
            PermGroup::generate(
                &[
                    Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]),
                    Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]),
                ],
                4,
            ),
            PermGroup::generate(
                &[
                    Permutation::from_cycles(8, &[&[0, 1, 2, 3]]),
                    Permutation::from_cycles(8, &[&[4, 5]]),
                ],
                8,
            ),
        ];
        for g in groups {
            let s = g.abelian_structure().unwrap();
            for p in g.elements() {
                for q in g.elements() {
                    let sum = s.group.add(
                        s.tuple_of(p).unwrap(),
                        s.tuple_of(q).unwrap(),
                    );
                    assert_eq!(s.tuple_of(&p.compose(q)).unwrap(), &sum);
                }
            }
        }
    }

    #[test]
    fn rejects_non_abelian_structure() {
        let s3 = PermGroup::generate(
            &[
                Permutation::from_cycles(3, &[&[0, 1]]),
                Permutation::from_cycles(3, &[&[0, 1, 2]]),
            ],
            3,
        );
        assert_eq!(s3.order(), 6);
        assert!(s3.abelian_structure().is_err());
    }
}
