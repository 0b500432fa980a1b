//! Decision procedures built on the displacement group.
//!
//! A finite quandle is quasi-affine iff its displacement group is abelian
//! and semiregular, and affine iff moreover one (equivalently every) column
//! of the multiplication table is balanced on its orbit. Both procedures
//! work with the generator set `D = {L_x ∘ L_e⁻¹ : x ∈ Q}` for `e = 0` and
//! run in `O(n³ log n)` time.
//!
//! Two independent oracles keep the fast paths honest:
//! [`affine_witness_search`] looks for an affine presentation directly from
//! the definition, and [`abelianness_oracle`] generates the congruence of
//! `Q²` spanned by the diagonal.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::abelian::{abelian_groups_of_order, automorphism_group_guarded, FiniteAbelianGroup,
    GroupMap};
use crate::constructions::affine_quandle;
use crate::perm::Permutation;
use crate::quandle::{brute_force_isomorphism, FiniteQuandle};

/// Largest order accepted by [`abelianness_oracle`]; the congruence closure
/// works on the n² elements of `Q²`.
pub const DEFAULT_ABELIANNESS_GUARD: usize = 8;

/// Why a recognition procedure rejected, or `Ok` when it accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    Ok,
    NotSemiregular,
    NotAbelian,
    NotTiny,
    Unbalanced,
    CapExceeded,
}

/// The violating datum behind a negative verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Witness {
    Permutation(Permutation),
    Pair(Permutation, Permutation),
    Element(usize),
}

/// Outcome of a recognition procedure. `reason` is `Ok` exactly when
/// `verdict` is true.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecognitionReport {
    pub verdict: bool,
    pub reason: Reason,
    pub witness: Option<Witness>,
}

impl RecognitionReport {
    fn ok() -> Self {
        RecognitionReport {
            verdict: true,
            reason: Reason::Ok,
            witness: None,
        }
    }

    fn fail(reason: Reason, witness: Option<Witness>) -> Self {
        debug_assert_ne!(reason, Reason::Ok);
        RecognitionReport {
            verdict: false,
            reason,
            witness,
        }
    }
}

/// Decides affineness: the displacement generators must be fixed-point-free
/// or trivial, commute, and close under composition (a tiny displacement
/// group), and the column of the base point must be balanced on its orbit.
pub fn is_affine(q: &FiniteQuandle) -> RecognitionReport {
    let n = q.order();
    let d = q.dis_generators(0);
    let dset: HashSet<&Permutation> = d.iter().collect();
    for alpha in &d {
        let fixed = alpha.fixed_point_count();
        if fixed > 0 && fixed < n {
            return RecognitionReport::fail(
                Reason::NotSemiregular,
                Some(Witness::Permutation(alpha.clone())),
            );
        }
        for beta in &d {
            let ab = alpha.compose(beta);
            if ab != beta.compose(alpha) {
                return RecognitionReport::fail(
                    Reason::NotAbelian,
                    Some(Witness::Pair(alpha.clone(), beta.clone())),
                );
            }
            if !dset.contains(&ab) {
                return RecognitionReport::fail(
                    Reason::NotTiny,
                    Some(Witness::Pair(alpha.clone(), beta.clone())),
                );
            }
        }
    }
    // Occurrence counts over the base column: tininess puts {x * 0 : x ∈ Q}
    // exactly on the orbit of 0, and all of them must match m_{0,0}.
    let counts = q.occurrence_counts(0);
    let base = counts[q.op(0, 0)];
    for x in 0..n {
        let y = q.op(x, 0);
        if counts[y] != base {
            return RecognitionReport::fail(Reason::Unbalanced, Some(Witness::Element(y)));
        }
    }
    RecognitionReport::ok()
}

/// Decides quasi-affineness: after the generator checks, the displacement
/// group is closed up with a pair queue, rejecting any new element with
/// fixed points and aborting if the count passes `|Q|` (a semiregular
/// displacement group never has more than `|Q|` elements).
pub fn is_quasi_affine(q: &FiniteQuandle) -> RecognitionReport {
    let n = q.order();
    let mut d = q.dis_generators(0);
    for alpha in &d {
        let fixed = alpha.fixed_point_count();
        if fixed > 0 && fixed < n {
            return RecognitionReport::fail(
                Reason::NotSemiregular,
                Some(Witness::Permutation(alpha.clone())),
            );
        }
        for beta in &d {
            if alpha.compose(beta) != beta.compose(alpha) {
                return RecognitionReport::fail(
                    Reason::NotAbelian,
                    Some(Witness::Pair(alpha.clone(), beta.clone())),
                );
            }
        }
    }
    let mut dset: HashSet<Permutation> = d.iter().cloned().collect();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for j in 0..d.len() {
        for i in 0..=j {
            queue.push_back((i, j));
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        let p = d[i].compose(&d[j]);
        if dset.contains(&p) {
            continue;
        }
        if d.len() >= n {
            return RecognitionReport::fail(Reason::CapExceeded, None);
        }
        let fixed = p.fixed_point_count();
        if fixed > 0 && fixed < n {
            return RecognitionReport::fail(
                Reason::NotSemiregular,
                Some(Witness::Permutation(p)),
            );
        }
        dset.insert(p.clone());
        d.push(p);
        let t = d.len() - 1;
        for l in 0..=t {
            queue.push_back((l, t));
        }
    }
    RecognitionReport::ok()
}

/// True iff the displacement group is tiny, i.e. already equal to the
/// generator set `{L_x ∘ L_0⁻¹ : x ∈ Q}`. Tininess does not depend on the
/// base point.
pub fn is_tiny_dis(q: &FiniteQuandle) -> bool {
    let d = q.dis_generators(0);
    let dset: HashSet<&Permutation> = d.iter().collect();
    d.iter()
        .all(|a| d.iter().all(|b| dset.contains(&a.compose(b))))
}

/// Occurrence-count balance at the base point: every element of the orbit
/// of 0 occurs equally often in column 0. For quasi-affine quandles this is
/// equivalent to the same condition at every point, and to affineness; on
/// arbitrary quandles it is strictly weaker.
pub fn balance_check(q: &FiniteQuandle) -> bool {
    balance_check_at(q, 0)
}

/// Balance of the column of `x` on the orbit of `x`.
pub fn balance_check_at(q: &FiniteQuandle, x: usize) -> bool {
    let counts = q.occurrence_counts(x);
    let orbit = q
        .orbits()
        .into_iter()
        .find(|o| o.contains(&x))
        .expect("every point lies in an orbit");
    orbit.windows(2).all(|w| counts[w[0]] == counts[w[1]])
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("order {actual} exceeds the oracle guard {limit}")]
pub struct OracleGuardExceeded {
    pub limit: usize,
    pub actual: usize,
}

/// Universal-algebra abelianness: the congruence of `Q² = (Q×Q, *, \)`
/// generated by the diagonal must keep the diagonal as a single block.
/// For quandles this is equivalent to quasi-affineness, which makes it an
/// independent (cubic in n²) oracle for [`is_quasi_affine`].
pub fn abelianness_oracle(q: &FiniteQuandle) -> Result<bool, OracleGuardExceeded> {
    abelianness_oracle_guarded(q, DEFAULT_ABELIANNESS_GUARD)
}

pub fn abelianness_oracle_guarded(
    q: &FiniteQuandle,
    guard: usize,
) -> Result<bool, OracleGuardExceeded> {
    let n = q.order();
    if n > guard {
        return Err(OracleGuardExceeded {
            limit: guard,
            actual: n,
        });
    }
    let size = n * n;
    // Left-division table.
    let ld: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).map(|y| q.left_divide(x, y)).collect())
        .collect();
    let star = |u: usize, v: usize| q.op(u / n, v / n) * n + q.op(u % n, v % n);
    let ldiv = |u: usize, v: usize| ld[u / n][v / n] * n + ld[u % n][v % n];

    let mut parent: Vec<usize> = (0..size).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut pending: VecDeque<(usize, usize)> = VecDeque::new();
    let union = |parent: &mut Vec<usize>,
                     pending: &mut VecDeque<(usize, usize)>,
                     x: usize,
                     y: usize| {
        let rx = find(parent, x);
        let ry = find(parent, y);
        if rx != ry {
            parent[rx] = ry;
            pending.push_back((x, y));
        }
    };

    let diagonal = |a: usize| a * n + a;
    for a in 1..n {
        union(&mut parent, &mut pending, diagonal(0), diagonal(a));
    }
    while let Some((x, y)) = pending.pop_front() {
        for z in 0..size {
            union(&mut parent, &mut pending, star(x, z), star(y, z));
            union(&mut parent, &mut pending, star(z, x), star(z, y));
            union(&mut parent, &mut pending, ldiv(x, z), ldiv(y, z));
            union(&mut parent, &mut pending, ldiv(z, x), ldiv(z, y));
        }
    }

    let root = find(&mut parent, diagonal(0));
    for u in 0..size {
        let on_diagonal = u / n == u % n;
        if (find(&mut parent, u) == root) != on_diagonal {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Definition-level affine oracle: searches all abelian groups of order
/// `|Q|` and all of their automorphisms for a presentation `Q ≅ Aff(A, f)`,
/// testing candidates with the brute-force isomorphism backtracker.
pub fn affine_witness_search(q: &FiniteQuandle) -> Option<(FiniteAbelianGroup, GroupMap)> {
    let n = q.order();
    for a in abelian_groups_of_order(n) {
        let auts = automorphism_group_guarded(&a, usize::MAX).expect("no guard");
        for f in auts {
            let (candidate, _) = affine_quandle(&a, &f).expect("f is an automorphism");
            if brute_force_isomorphism(q, &candidate).is_some() {
                return Some((a, f));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::projection_quandle;
    use crate::testutil::{aff_z4_neg, balanced_non_quasi_affine_8, cyclic_extension,
        quotient_of_aff_z4};

    #[test]
    fn affine_verdicts() {
        let a6 = FiniteAbelianGroup::cyclic(6);
        let (q6, _) = affine_quandle(&a6, &GroupMap::scalar(&a6, -1)).unwrap();
        assert!(is_affine(&q6).verdict);
        assert!(is_affine(&aff_z4_neg()).verdict);
        assert!(is_affine(&projection_quandle(7)).verdict);
    }

    #[test]
    fn unbalanced_extension_is_rejected() {
        let q = cyclic_extension(2, 1, &[0, 0, 1]);
        let report = is_affine(&q);
        assert!(!report.verdict);
        assert_eq!(report.reason, Reason::Unbalanced);
        assert!(matches!(report.witness, Some(Witness::Element(_))));
        // ... while being quasi-affine with a tiny displacement group.
        assert!(is_quasi_affine(&q).verdict);
        assert!(is_tiny_dis(&q));
    }

    #[test]
    fn quotient_fails_semiregularity_but_is_tiny() {
        let q = quotient_of_aff_z4();
        let report = is_affine(&q);
        assert!(!report.verdict);
        assert_eq!(report.reason, Reason::NotSemiregular);
        assert!(is_tiny_dis(&q));
        assert!(!is_quasi_affine(&q).verdict);
    }

    #[test]
    fn quasi_affine_with_non_tiny_displacement() {
        let q = cyclic_extension(3, 1, &[0, 1]);
        assert!(is_quasi_affine(&q).verdict);
        assert!(!is_tiny_dis(&q));
        assert!(!is_affine(&q).verdict);
    }

    #[test]
    fn eight_element_table_verdicts() {
        let q = balanced_non_quasi_affine_8();
        let report = is_quasi_affine(&q);
        assert!(!report.verdict);
        assert_eq!(report.reason, Reason::NotSemiregular);
        // Balanced columns without quasi-affineness.
        assert!(balance_check(&q));
        for x in 0..q.order() {
            assert!(balance_check_at(&q, x));
        }
    }

    #[test]
    fn projections_are_quasi_affine() {
        for k in 1..=6 {
            assert!(is_quasi_affine(&projection_quandle(k)).verdict);
            assert!(is_affine(&projection_quandle(k)).verdict);
        }
    }

    #[test]
    fn balance_examples() {
        assert!(balance_check(&aff_z4_neg()));
        assert!(!balance_check(&cyclic_extension(2, 1, &[0, 0, 1])));
    }

    #[test]
    fn balance_at_one_point_extends_to_all_on_quasi_affine_inputs() {
        let corpus = vec![
            aff_z4_neg(),
            cyclic_extension(2, 1, &[0, 0, 1]),
            cyclic_extension(3, 1, &[0, 1]),
            projection_quandle(5),
        ];
        for q in corpus {
            assert!(is_quasi_affine(&q).verdict);
            let at_zero = balance_check(&q);
            for x in 0..q.order() {
                assert_eq!(balance_check_at(&q, x), at_zero);
            }
        }
    }

    #[test]
    fn abelianness_oracle_agrees_on_small_corpus() {
        let mut corpus: Vec<FiniteQuandle> = (1..=6).map(projection_quandle).collect();
        corpus.push(aff_z4_neg());
        corpus.push(cyclic_extension(2, 1, &[0, 0, 1]));
        corpus.push(cyclic_extension(3, 1, &[0, 1]));
        corpus.push(cyclic_extension(3, 2, &[0, 0]));
        corpus.push(quotient_of_aff_z4());
        for q in corpus {
            assert_eq!(
                abelianness_oracle(&q).unwrap(),
                is_quasi_affine(&q).verdict,
                "disagreement at order {}",
                q.order()
            );
        }
    }

    #[test]
    fn abelianness_oracle_rejects_the_eight_element_table() {
        assert!(!abelianness_oracle(&balanced_non_quasi_affine_8()).unwrap());
    }

    #[test]
    fn abelianness_oracle_guard() {
        let q = projection_quandle(9);
        assert!(abelianness_oracle(&q).is_err());
        assert!(abelianness_oracle_guarded(&q, 9).unwrap());
    }

    #[test]
    fn witness_search_examples() {
        let q = cyclic_extension(2, 1, &[0, 1]);
        let (a, f) = affine_witness_search(&q).unwrap();
        let (candidate, _) = affine_quandle(&a, &f).unwrap();
        assert!(brute_force_isomorphism(&q, &candidate).is_some());

        assert!(affine_witness_search(&cyclic_extension(2, 1, &[0, 0, 1])).is_none());

        let (a, f) = affine_witness_search(&projection_quandle(4)).unwrap();
        assert!(f.is_identity());
        assert_eq!(a.order(), 4);
    }

    #[test]
    fn affine_implies_quasi_affine_and_tiny() {
        let a6 = FiniteAbelianGroup::cyclic(6);
        let (q6, _) = affine_quandle(&a6, &GroupMap::scalar(&a6, -1)).unwrap();
        for q in [aff_z4_neg(), q6, projection_quandle(4)] {
            assert!(is_affine(&q).verdict);
            assert!(is_quasi_affine(&q).verdict);
            assert!(is_tiny_dis(&q));
        }
    }
}
