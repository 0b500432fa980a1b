//! Counting and listing quasi-affine quandles up to isomorphism.
//!
//! A quasi-affine quandle of order `n` is an indecomposable extension
//! `Ext(A, f, d̄)` with `k` fibers, where `k` divides `n`, `|A| = n/k`, and
//! `f` matters only up to conjugacy in `Aut(A)`. Within one cell `(k, A, f)`
//! two constant tuples give isomorphic quandles iff one is reachable from
//! the other by permuting entries, moving entries within their coset of
//! `Im(1−f)`, translating all entries, or applying an automorphism
//! commuting with `f`. That quotient is computed here as an orbit count of
//! count vectors over `Ā = A/Im(1−f)` under translations and the induced
//! centralizer automorphisms; the classical orbit-counting formula over the
//! holomorph is kept as an independent cross-check for `f = 1`.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::abelian::{
    abelian_groups_of_order, automorphism_group, automorphism_group_guarded, centralizer,
    conjugacy_class_reps, factorize, induced_on_quotient, Element, FiniteAbelianGroup, GroupMap,
    GuardExceeded, Subgroup,
};
use crate::constructions::ExtensionDescriptor;
use crate::quandle::{brute_force_isomorphism, FiniteQuandle};

/// Default bound on the order accepted by [`enumerate_quasi_affine`].
pub const DEFAULT_ENUMERATION_GUARD: usize = 32;

/// Hard bound on [`brute_force_enumerate_quandles`].
pub const BRUTE_FORCE_ORDER_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("order {n} exceeds the enumeration guard {guard}")]
    OrderGuard { n: usize, guard: usize },
    #[error(transparent)]
    Aut(#[from] GuardExceeded),
}

/// One isomorphism class of indecomposable extensions within a cell.
#[derive(Clone, Debug)]
pub struct QuandleClass {
    /// Canonical count vector over `Ā`, lexicographically least in its orbit.
    pub counts: Vec<usize>,
    /// Canonical descriptor: least coset representatives, repeated per count.
    pub descriptor: ExtensionDescriptor,
    /// Balanced constants, i.e. the class is affine.
    pub affine: bool,
    /// Single fiber with `1 − f` bijective, i.e. the class is latin.
    pub latin: bool,
}

/// All classes over a fixed `(k, A, f)`.
#[derive(Clone, Debug)]
pub struct EnumerationCell {
    pub fibers: usize,
    pub group: FiniteAbelianGroup,
    pub automorphism: GroupMap,
    pub classes: Vec<QuandleClass>,
}

/// The quasi-affine quandles of one order, carved into cells.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub order: usize,
    pub cells: Vec<EnumerationCell>,
}

impl Enumeration {
    pub fn total(&self) -> usize {
        self.cells.iter().map(|c| c.classes.len()).sum()
    }

    pub fn affine_total(&self) -> usize {
        self.classes().filter(|c| c.affine).count()
    }

    pub fn latin_total(&self) -> usize {
        self.classes().filter(|c| c.latin).count()
    }

    pub fn classes(&self) -> impl Iterator<Item = &QuandleClass> {
        self.cells.iter().flat_map(|c| c.classes.iter())
    }

    /// Class counts per fiber number, one entry per divisor of the order.
    pub fn fiber_breakdown(&self) -> Vec<(usize, usize)> {
        divisors(self.order)
            .into_iter()
            .map(|k| {
                let count = self
                    .cells
                    .iter()
                    .filter(|c| c.fibers == k)
                    .map(|c| c.classes.len())
                    .sum();
                (k, count)
            })
            .collect()
    }
}

/// Number of isomorphism classes of indecomposable extensions over `(A, f)`
/// with `k` fibers.
pub fn epsilon(a: &FiniteAbelianGroup, f: &GroupMap, k: usize) -> Result<usize, GuardExceeded> {
    Ok(epsilon_classes(a, f, k)?.len())
}

/// The classes themselves, with canonical descriptors.
pub fn epsilon_classes(
    a: &FiniteAbelianGroup,
    f: &GroupMap,
    k: usize,
) -> Result<Vec<QuandleClass>, GuardExceeded> {
    let auts = automorphism_group(a)?;
    Ok(epsilon_classes_with(a, f, k, &auts))
}

fn epsilon_classes_with(
    a: &FiniteAbelianGroup,
    f: &GroupMap,
    k: usize,
    auts: &[GroupMap],
) -> Vec<QuandleClass> {
    assert!(f.is_automorphism() && f.source() == a, "f must be an automorphism of A");
    assert!(k >= 1);
    let one_minus = f.one_minus().expect("endomorphism");
    let quotient = one_minus.image().quotient();
    let abar = quotient.group.clone();
    let nbar = abar.order();
    let abar_elems = abar.elements();

    // Indecomposable count vectors: support differences must generate Ā.
    let vectors: Vec<Vec<usize>> = compositions(k, nbar)
        .into_iter()
        .filter(|c| support_differences_generate(&abar, &abar_elems, c))
        .collect();
    if vectors.is_empty() {
        return Vec::new();
    }
    let index: HashMap<Vec<usize>, usize> = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();

    // Index permutations of Ā: all translations, plus the automorphisms
    // induced by the centralizer of f.
    let mut actions: Vec<Vec<usize>> = abar_elems
        .iter()
        .map(|u| {
            abar_elems
                .iter()
                .map(|x| abar.index_of(&abar.add(x, u)))
                .collect()
        })
        .collect();
    for psi in centralizer(auts, f) {
        let induced = induced_on_quotient(&psi, &quotient)
            .expect("Im(1-f) is invariant under the centralizer");
        actions.push(
            abar_elems
                .iter()
                .map(|x| abar.index_of(&induced.apply(x)))
                .collect(),
        );
    }
    actions.sort();
    actions.dedup();

    // Orbit partition under the generated transformation group.
    let mut parent: Vec<usize> = (0..vectors.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for vi in 0..vectors.len() {
        for action in &actions {
            let moved: Vec<usize> = (0..nbar).map(|i| vectors[vi][action[i]]).collect();
            let wi = *index
                .get(&moved)
                .expect("actions preserve indecomposability");
            let (r1, r2) = (find(&mut parent, vi), find(&mut parent, wi));
            if r1 != r2 {
                parent[r1] = r2;
            }
        }
    }
    let mut orbit_min: HashMap<usize, Vec<usize>> = HashMap::new();
    for vi in 0..vectors.len() {
        let root = find(&mut parent, vi);
        orbit_min
            .entry(root)
            .and_modify(|m| {
                if vectors[vi] < *m {
                    *m = vectors[vi].clone();
                }
            })
            .or_insert_with(|| vectors[vi].clone());
    }
    let mut reps: Vec<Vec<usize>> = orbit_min.into_values().collect();
    reps.sort();

    let latin = k == 1 && one_minus.kernel().order() == 1;
    reps.into_iter()
        .map(|counts| {
            let mut constants = Vec::with_capacity(k);
            for (i, &c) in counts.iter().enumerate() {
                for _ in 0..c {
                    constants.push(quotient.lift(&abar_elems[i]));
                }
            }
            let descriptor = ExtensionDescriptor::new(a.clone(), f.clone(), constants)
                .expect("class descriptor is valid");
            debug_assert!(descriptor.is_indecomposable());
            let affine = counts.windows(2).all(|w| w[0] == w[1]);
            debug_assert_eq!(descriptor.is_balanced(), affine);
            QuandleClass {
                counts,
                descriptor,
                affine,
                latin,
            }
        })
        .collect()
}

fn support_differences_generate(
    abar: &FiniteAbelianGroup,
    elems: &[Element],
    counts: &[usize],
) -> bool {
    let support: Vec<&Element> = counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c > 0)
        .map(|(i, _)| &elems[i])
        .collect();
    let base = support[0];
    let gens: Vec<Element> = support[1..].iter().map(|e| abar.sub(e, base)).collect();
    Subgroup::generated(abar, &gens).is_full()
}

/// Orbit-counting cross-check for `f = 1`: the class count equals the
/// average number of indecomposable count vectors fixed by an element of
/// the holomorph `A ⋊ Aut(A)` acting on indices by `x ↦ u + ψ(x)`.
pub fn epsilon_burnside_identity(
    a: &FiniteAbelianGroup,
    k: usize,
) -> Result<usize, GuardExceeded> {
    let auts = automorphism_group(a)?;
    let elems = a.elements();
    let n = a.order();
    let vectors: Vec<Vec<usize>> = compositions(k, n)
        .into_iter()
        .filter(|c| support_differences_generate(a, &elems, c))
        .collect();
    let mut fixed_total = 0usize;
    for u in &elems {
        for psi in &auts {
            let action: Vec<usize> = elems
                .iter()
                .map(|x| a.index_of(&a.add(u, &psi.apply(x))))
                .collect();
            fixed_total += vectors
                .iter()
                .filter(|v| (0..n).all(|i| v[i] == v[action[i]]))
                .count();
        }
    }
    let holomorph = n * auts.len();
    assert_eq!(fixed_total % holomorph, 0, "orbit count must be integral");
    Ok(fixed_total / holomorph)
}

/// Closed forms for specific `ε` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    /// `ε(Z_2, 1, k) = ⌊k/2⌋`.
    CyclicTwo { fibers: usize },
    /// `ε(Z_3, 1, k) = (k² + 6k − 4 + ξ_k)/12` with `ξ_k` periodic mod 6.
    CyclicThree { fibers: usize },
    /// `ε(Z_4, 1, 3) = 2`.
    CyclicFourThree,
    /// `ε(Z_5, 1, 3) = 2`.
    CyclicFiveThree,
    /// `ε(Z_2², 1, 3) = 1`.
    KleinThree,
    /// `ε(A, 1, 2) = 1` for cyclic `A` (and 0 for non-cyclic `A`).
    CyclicPair,
}

pub fn epsilon_closed_form(form: ClosedForm) -> usize {
    match form {
        ClosedForm::CyclicTwo { fibers } => fibers / 2,
        ClosedForm::CyclicThree { fibers } => {
            let k = fibers as i64;
            let xi = match k.rem_euclid(6) {
                0 => 4,
                3 => 1,
                2 | 4 => 0,
                _ => -3,
            };
            let value = (k * k + 6 * k - 4 + xi) / 12;
            debug_assert_eq!((k * k + 6 * k - 4 + xi) % 12, 0);
            value as usize
        }
        ClosedForm::CyclicFourThree | ClosedForm::CyclicFiveThree => 2,
        ClosedForm::KleinThree | ClosedForm::CyclicPair => 1,
    }
}

/// `|C(Z_m, k)|`, the number of indecomposable count vectors over a cyclic
/// group of order `m ≥ 2`: compositions of `k` into `m` parts minus the `m`
/// constant tuples.
pub fn cyclic_count_vector_formula(m: usize, k: usize) -> usize {
    assert!(m >= 2);
    binomial(m + k - 1, m - 1) - m
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let mut value: u128 = 1;
    for i in 0..r.min(n - r) {
        value = value * (n - i) as u128 / (i + 1) as u128;
    }
    value as usize
}

/// Enumerates the quasi-affine quandles of order `n` up to isomorphism.
/// Cells `(k, A, f)` are independent and evaluated in parallel; the result
/// order is canonical (`k` ascending, then group moduli, then automorphism
/// matrix) regardless of scheduling.
pub fn enumerate_quasi_affine(n: usize) -> Result<Enumeration, EnumerationError> {
    enumerate_quasi_affine_guarded(n, DEFAULT_ENUMERATION_GUARD)
}

pub fn enumerate_quasi_affine_guarded(
    n: usize,
    guard: usize,
) -> Result<Enumeration, EnumerationError> {
    if n == 0 || n > guard {
        return Err(EnumerationError::OrderGuard { n, guard });
    }
    let mut specs: Vec<(usize, FiniteAbelianGroup, GroupMap, std::sync::Arc<Vec<GroupMap>>)> =
        Vec::new();
    for k in divisors(n) {
        for a in abelian_groups_of_order(n / k) {
            let auts = std::sync::Arc::new(automorphism_group_guarded(
                &a,
                guard.max(crate::abelian::DEFAULT_AUT_GUARD),
            )?);
            for f in conjugacy_class_reps(&auts) {
                specs.push((k, a.clone(), f, auts.clone()));
            }
        }
    }
    let cells: Vec<EnumerationCell> = specs
        .par_iter()
        .map(|(k, a, f, auts)| EnumerationCell {
            fibers: *k,
            group: a.clone(),
            automorphism: f.clone(),
            classes: epsilon_classes_with(a, f, *k, auts),
        })
        .filter(|cell| !cell.classes.is_empty())
        .collect();
    Ok(Enumeration { order: n, cells })
}

/// One row per order: total, affine, and latin class counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountRow {
    pub order: usize,
    pub quasi_affine: usize,
    pub affine: usize,
    pub latin: usize,
}

pub fn count_table(max_order: usize) -> Result<Vec<CountRow>, EnumerationError> {
    (1..=max_order)
        .map(|n| {
            let e = enumerate_quasi_affine(n)?;
            Ok(CountRow {
                order: n,
                quasi_affine: e.total(),
                affine: e.affine_total(),
                latin: e.latin_total(),
            })
        })
        .collect()
}

/// Closed-form counts of quasi-affine quandles for orders `p`, `p²`, and
/// `pq` (distinct primes); `None` for other shapes.
pub fn closed_form_order_counts(n: usize) -> Option<usize> {
    let factors = factorize(n);
    match factors.as_slice() {
        [(p, 1)] => Some(p - 1),
        [(p, 2)] => {
            let zp = FiniteAbelianGroup::cyclic(*p);
            let eps = epsilon(&zp, &GroupMap::identity(&zp), *p).expect("small group");
            Some(2 * p * p - 2 * p - 2 + eps)
        }
        [(p, 1), (q, 1)] => {
            let zp = FiniteAbelianGroup::cyclic(*p);
            let zq = FiniteAbelianGroup::cyclic(*q);
            let eps_pq = epsilon(&zp, &GroupMap::identity(&zp), *q).expect("small group");
            let eps_qp = epsilon(&zq, &GroupMap::identity(&zq), *p).expect("small group");
            Some(p * q - p - q + 1 + eps_pq + eps_qp)
        }
        _ => None,
    }
}

/// All quandles of order `n ≤ 6` up to isomorphism, by backtracking over
/// rows-as-permutations with idempotence pinned and left distributivity
/// propagated (assigning a row forces the rows of its products). An
/// independent oracle for the displacement-based enumeration.
pub fn brute_force_enumerate_quandles(n: usize) -> Result<Vec<FiniteQuandle>, EnumerationError> {
    if n == 0 || n > BRUTE_FORCE_ORDER_LIMIT {
        return Err(EnumerationError::OrderGuard {
            n,
            guard: BRUTE_FORCE_ORDER_LIMIT,
        });
    }
    let all_perms = permutations(n);
    let row_choices: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|x| {
            all_perms
                .iter()
                .filter(|p| p[x] == x)
                .cloned()
                .collect()
        })
        .collect();

    fn propagate(rows: &mut Vec<Option<Vec<usize>>>, n: usize) -> bool {
        loop {
            let mut changed = false;
            for x in 0..n {
                let Some(lx) = rows[x].clone() else { continue };
                let mut lx_inv = vec![0; n];
                for (i, &v) in lx.iter().enumerate() {
                    lx_inv[v] = i;
                }
                for y in 0..n {
                    let Some(ly) = rows[y].clone() else { continue };
                    let t = lx[y];
                    // Left distributivity forces L_{x*y} = L_x L_y L_x⁻¹.
                    let conj: Vec<usize> = (0..n).map(|i| lx[ly[lx_inv[i]]]).collect();
                    match &rows[t] {
                        Some(existing) => {
                            if existing != &conj {
                                return false;
                            }
                        }
                        None => {
                            if conj[t] != t {
                                return false;
                            }
                            rows[t] = Some(conj);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(
        rows: &mut Vec<Option<Vec<usize>>>,
        row_choices: &[Vec<Vec<usize>>],
        n: usize,
        reps: &mut Vec<FiniteQuandle>,
    ) {
        match (0..n).find(|&x| rows[x].is_none()) {
            None => {
                let table: Vec<Vec<usize>> =
                    rows.iter().map(|r| r.clone().unwrap()).collect();
                let q = FiniteQuandle::from_table(table)
                    .expect("propagation enforces the axioms");
                if reps.iter().all(|r| brute_force_isomorphism(&q, r).is_none()) {
                    reps.push(q);
                }
            }
            Some(x) => {
                for candidate in &row_choices[x] {
                    let mut next = rows.clone();
                    next[x] = Some(candidate.clone());
                    if propagate(&mut next, n) {
                        search(&mut next, row_choices, n, reps);
                    }
                }
            }
        }
    }

    let mut reps = Vec::new();
    let mut rows: Vec<Option<Vec<usize>>> = vec![None; n];
    search(&mut rows, &row_choices, n, &mut reps);
    Ok(reps)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out.sort();
    out
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|k| n % k == 0).collect()
}

/// All vectors of `parts` non-negative integers summing to `total`, in
/// lexicographic order.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    assert!(parts >= 1);
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(parts);
    fn recurse(rest: usize, slots: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            current.push(rest);
            out.push(current.clone());
            current.pop();
            return;
        }
        for first in 0..=rest {
            current.push(first);
            recurse(rest - first, slots - 1, current, out);
            current.pop();
        }
    }
    recurse(total, parts, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::semiregular_extension;
    use crate::quandle::medial_identity_holds;
    use crate::recognition::{is_affine, is_quasi_affine};

    fn z(m: usize) -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(m)
    }

    fn id(a: &FiniteAbelianGroup) -> GroupMap {
        GroupMap::identity(a)
    }

    #[test]
    fn epsilon_reference_values() {
        assert_eq!(epsilon(&z(2), &id(&z(2)), 4).unwrap(), 2);
        assert_eq!(epsilon(&z(3), &id(&z(3)), 4).unwrap(), 3);
        assert_eq!(epsilon(&z(3), &GroupMap::scalar(&z(3), 2), 4).unwrap(), 1);
        // 1 - f onto forces a single class.
        assert_eq!(epsilon(&z(5), &GroupMap::scalar(&z(5), 3), 7).unwrap(), 1);
        // Two fibers need a cyclic group.
        let klein = FiniteAbelianGroup::new(vec![2, 2]);
        assert_eq!(epsilon(&klein, &id(&klein), 2).unwrap(), 0);
        assert_eq!(epsilon(&z(6), &id(&z(6)), 2).unwrap(), 1);
    }

    #[test]
    fn epsilon_closed_forms_match_orbit_counts() {
        for k in 1..=8 {
            assert_eq!(
                epsilon(&z(2), &id(&z(2)), k).unwrap(),
                epsilon_closed_form(ClosedForm::CyclicTwo { fibers: k }),
                "ε(Z_2, 1, {k})"
            );
            assert_eq!(
                epsilon(&z(3), &id(&z(3)), k).unwrap(),
                epsilon_closed_form(ClosedForm::CyclicThree { fibers: k }),
                "ε(Z_3, 1, {k})"
            );
        }
        assert_eq!(epsilon_closed_form(ClosedForm::CyclicThree { fibers: 3 }), 2);
        assert_eq!(epsilon_closed_form(ClosedForm::CyclicThree { fibers: 5 }), 4);
        assert_eq!(
            epsilon(&z(4), &id(&z(4)), 3).unwrap(),
            epsilon_closed_form(ClosedForm::CyclicFourThree)
        );
        assert_eq!(
            epsilon(&z(5), &id(&z(5)), 3).unwrap(),
            epsilon_closed_form(ClosedForm::CyclicFiveThree)
        );
        let klein = FiniteAbelianGroup::new(vec![2, 2]);
        assert_eq!(
            epsilon(&klein, &id(&klein), 3).unwrap(),
            epsilon_closed_form(ClosedForm::KleinThree)
        );
        for m in [1, 2, 3, 4, 5, 6] {
            assert_eq!(
                epsilon(&z(m), &id(&z(m)), 2).unwrap(),
                epsilon_closed_form(ClosedForm::CyclicPair),
                "ε(Z_{m}, 1, 2)"
            );
        }
    }

    #[test]
    fn burnside_cross_check() {
        let mut groups = vec![z(1), z(2), z(3), z(4), z(5)];
        groups.push(FiniteAbelianGroup::new(vec![2, 2]));
        for a in groups {
            for k in 1..=6 {
                assert_eq!(
                    epsilon(&a, &id(&a), k).unwrap(),
                    epsilon_burnside_identity(&a, k).unwrap(),
                    "group {a:?}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn count_vector_formula_matches_direct_enumeration() {
        for m in 2..=5 {
            let a = z(m);
            let elems = a.elements();
            for k in 1..=6 {
                let direct = compositions(k, m)
                    .into_iter()
                    .filter(|c| support_differences_generate(&a, &elems, c))
                    .count();
                assert_eq!(direct, cyclic_count_vector_formula(m, k), "m={m}, k={k}");
            }
        }
    }

    #[test]
    fn reduction_to_identity_automorphism() {
        // ε(A, f, k) ≤ ε(Ā, 1, k), with equality for cyclic A.
        for a in [z(4), z(6), z(8), FiniteAbelianGroup::new(vec![2, 4])] {
            for f in automorphism_group(&a).unwrap() {
                let quotient = f.one_minus().unwrap().image().quotient();
                let abar = quotient.group.clone();
                for k in 1..=4 {
                    let lhs = epsilon(&a, &f, k).unwrap();
                    let rhs = epsilon(&abar, &id(&abar), k).unwrap();
                    assert!(lhs <= rhs, "{a:?} {k}");
                    if a.rank() <= 1 {
                        assert_eq!(lhs, rhs, "{a:?} {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn order_eight_breakdown() {
        let e = enumerate_quasi_affine(8).unwrap();
        assert_eq!(e.total(), 9);
        assert_eq!(
            e.fiber_breakdown(),
            vec![(1, 2), (2, 4), (4, 2), (8, 1)]
        );
    }

    #[test]
    fn order_twelve_breakdown() {
        let e = enumerate_quasi_affine(12).unwrap();
        assert_eq!(e.total(), 17);
        assert_eq!(
            e.fiber_breakdown(),
            vec![(1, 1), (2, 2), (3, 6), (4, 4), (6, 3), (12, 1)]
        );
    }

    #[test]
    fn small_count_rows() {
        let rows = count_table(8).unwrap();
        let totals: Vec<usize> = rows.iter().map(|r| r.quasi_affine).collect();
        assert_eq!(totals, vec![1, 1, 2, 3, 4, 4, 6, 9]);
        let affine: Vec<usize> = rows.iter().map(|r| r.affine).collect();
        assert_eq!(affine, vec![1, 1, 2, 3, 4, 2, 6, 7]);
        let latin: Vec<usize> = rows.iter().map(|r| r.latin).collect();
        assert_eq!(latin, vec![1, 0, 1, 1, 3, 0, 5, 2]);
    }

    #[test]
    fn closed_form_orders() {
        assert_eq!(closed_form_order_counts(7), Some(6));
        assert_eq!(closed_form_order_counts(4), Some(3));
        assert_eq!(closed_form_order_counts(9), Some(12));
        assert_eq!(closed_form_order_counts(6), Some(4));
        assert_eq!(closed_form_order_counts(15), Some(14));
        assert_eq!(closed_form_order_counts(8), None);
        assert_eq!(closed_form_order_counts(12), None);
        for n in [4, 6, 7, 9, 10, 14, 15] {
            assert_eq!(
                closed_form_order_counts(n).unwrap(),
                enumerate_quasi_affine(n).unwrap().total()
            );
        }
    }

    #[test]
    fn twice_a_prime_has_three_p_minus_one_halves_classes() {
        for p in [3, 5, 7] {
            assert_eq!(
                enumerate_quasi_affine(2 * p).unwrap().total(),
                (3 * p - 1) / 2
            );
        }
    }

    #[test]
    fn class_flags_match_built_tables() {
        for n in 1..=10 {
            let e = enumerate_quasi_affine(n).unwrap();
            for class in e.classes() {
                let (q, _) = semiregular_extension(&class.descriptor);
                assert!(is_quasi_affine(&q).verdict);
                assert_eq!(is_affine(&q).verdict, class.affine, "order {n}");
                assert_eq!(q.is_latin(), class.latin, "order {n}");
            }
        }
    }

    #[test]
    fn guard_is_enforced() {
        assert!(matches!(
            enumerate_quasi_affine(33),
            Err(EnumerationError::OrderGuard { .. })
        ));
        assert!(enumerate_quasi_affine_guarded(33, 64).is_ok());
        assert!(brute_force_enumerate_quandles(7).is_err());
    }

    #[test]
    fn brute_force_counts() {
        assert_eq!(brute_force_enumerate_quandles(1).unwrap().len(), 1);
        assert_eq!(brute_force_enumerate_quandles(2).unwrap().len(), 1);
        assert_eq!(brute_force_enumerate_quandles(3).unwrap().len(), 3);
        assert_eq!(brute_force_enumerate_quandles(4).unwrap().len(), 7);
        assert_eq!(brute_force_enumerate_quandles(5).unwrap().len(), 22);
    }

    #[test]
    fn brute_force_quasi_affine_filter_matches_enumeration() {
        for n in 1..=5 {
            let quandles = brute_force_enumerate_quandles(n).unwrap();
            let qa = quandles
                .iter()
                .filter(|q| is_quasi_affine(q).verdict)
                .count();
            assert_eq!(qa, enumerate_quasi_affine(n).unwrap().total(), "order {n}");
        }
    }

    #[test]
    fn medial_fast_path_agrees_with_identity_oracle() {
        let mut found_non_medial = false;
        for n in 1..=4 {
            for q in brute_force_enumerate_quandles(n).unwrap() {
                let fast = q.is_medial();
                assert_eq!(fast, medial_identity_holds(&q));
                found_non_medial |= !fast;
            }
        }
        // The smallest non-medial quandle appears by order 4.
        assert!(found_non_medial);
    }
}
