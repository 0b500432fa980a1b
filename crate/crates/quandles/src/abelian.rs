//! Finite abelian groups in invariant-factor form.
//!
//! A group is a list of moduli `(m_1, …, m_r)`; its elements are residue
//! tuples `(a_1, …, a_r)` with `a_i ∈ Z_{m_i}`, ordered lexicographically.
//! Homomorphisms are integer matrices acting on tuples. Subgroups and
//! quotients are materialized as element sets; everything is sized for
//! groups of at most a few hundred elements.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// A group element: one residue per modulus.
pub type Element = Vec<usize>;

/// Upper bound on `|A|` for automorphism-group enumeration.
pub const DEFAULT_AUT_GUARD: usize = 256;

/// A finite abelian group as a direct sum of cyclic groups.
///
/// Moduli equal to 1 are dropped at construction, so the trivial group has
/// an empty modulus list and its only element is the empty tuple. The moduli
/// need not form a divisor chain; [`FiniteAbelianGroup::canonicalized`]
/// produces the invariant-factor form together with an isomorphism onto it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FiniteAbelianGroup {
    moduli: Vec<usize>,
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteAbelianGroup{:?}", self.moduli)
    }
}

impl FiniteAbelianGroup {
    pub fn new(moduli: Vec<usize>) -> Self {
        assert!(
            moduli.iter().all(|&m| m >= 1),
            "moduli must be positive, got {moduli:?}"
        );
        FiniteAbelianGroup {
            moduli: moduli.into_iter().filter(|&m| m > 1).collect(),
        }
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { moduli: Vec::new() }
    }

    pub fn cyclic(m: usize) -> Self {
        Self::new(vec![m])
    }

    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.moduli.iter().product()
    }

    pub fn zero(&self) -> Element {
        vec![0; self.rank()]
    }

    pub fn contains(&self, a: &[usize]) -> bool {
        a.len() == self.rank() && a.iter().zip(&self.moduli).all(|(&x, &m)| x < m)
    }

    pub fn add(&self, a: &[usize], b: &[usize]) -> Element {
        self.check(a);
        self.check(b);
        a.iter()
            .zip(b)
            .zip(&self.moduli)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect()
    }

    pub fn neg(&self, a: &[usize]) -> Element {
        self.check(a);
        a.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| (m - x) % m)
            .collect()
    }

    pub fn sub(&self, a: &[usize], b: &[usize]) -> Element {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, c: usize, a: &[usize]) -> Element {
        self.check(a);
        a.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| (c % m) * x % m)
            .collect()
    }

    pub fn element_order(&self, a: &[usize]) -> usize {
        self.check(a);
        a.iter()
            .zip(&self.moduli)
            .map(|(&x, &m)| m / gcd(x, m))
            .fold(1, lcm)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<Element> {
        (0..self.order()).map(|i| self.element_at(i)).collect()
    }

    /// The `idx`-th element in lexicographic order.
    pub fn element_at(&self, mut idx: usize) -> Element {
        let mut a = self.zero();
        for i in (0..self.rank()).rev() {
            a[i] = idx % self.moduli[i];
            idx /= self.moduli[i];
        }
        debug_assert_eq!(idx, 0, "index out of range");
        a
    }

    /// Lexicographic rank of an element; inverse of [`Self::element_at`].
    pub fn index_of(&self, a: &[usize]) -> usize {
        self.check(a);
        a.iter()
            .zip(&self.moduli)
            .fold(0, |acc, (&x, &m)| acc * m + x)
    }

    /// Unit tuple with 1 in coordinate `j`.
    pub fn unit(&self, j: usize) -> Element {
        let mut a = self.zero();
        a[j] = 1 % self.moduli[j];
        a
    }

    /// True iff the moduli form an ascending divisor chain.
    pub fn is_invariant_factor_form(&self) -> bool {
        self.moduli.windows(2).all(|w| w[1] % w[0] == 0)
    }

    /// Invariant-factor form of the group and an isomorphism onto it.
    pub fn canonicalized(&self) -> (FiniteAbelianGroup, GroupMap) {
        if self.is_invariant_factor_form() {
            return (self.clone(), GroupMap::identity(self));
        }
        let elements = self.elements();
        let dec = decompose_abelian(&elements, |a, b| self.add(a, b), &self.zero());
        let canon = dec.group.clone();
        let matrix: Vec<Vec<i64>> = (0..canon.rank())
            .map(|i| {
                (0..self.rank())
                    .map(|j| dec.tuple_of[&self.unit(j)][i] as i64)
                    .collect()
            })
            .collect();
        let iso = GroupMap::new(self.clone(), canon.clone(), matrix)
            .expect("coordinate map is well defined");
        debug_assert!(iso.is_isomorphism());
        (canon, iso)
    }

    fn check(&self, a: &[usize]) {
        debug_assert!(self.contains(a), "element {a:?} not in {self:?}");
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// A homomorphism between finite abelian groups, stored as an integer matrix
/// acting on residue tuples: the image of `a` is `M·a` reduced mod the target
/// moduli. Entries are kept reduced, so equality of maps is equality of
/// matrices.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct GroupMap {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    matrix: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("matrix must have {rows} rows of {cols} entries")]
    Shape { rows: usize, cols: usize },
    #[error("column {col} is not annihilated by the source modulus")]
    IllDefined { col: usize },
    #[error("map is not an endomorphism (source and target differ)")]
    EndomorphismExpected,
}

impl GroupMap {
    /// Builds a homomorphism, checking well-definedness: multiplying a column
    /// by its source modulus must vanish in the target.
    pub fn new(
        source: FiniteAbelianGroup,
        target: FiniteAbelianGroup,
        matrix: Vec<Vec<i64>>,
    ) -> Result<Self, MapError> {
        let rows = target.rank();
        let cols = source.rank();
        if matrix.len() != rows || matrix.iter().any(|r| r.len() != cols) {
            return Err(MapError::Shape { rows, cols });
        }
        let reduced: Vec<Vec<usize>> = matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let m = target.moduli[i] as i64;
                row.iter().map(|&e| e.rem_euclid(m) as usize).collect()
            })
            .collect();
        for j in 0..cols {
            for i in 0..rows {
                if reduced[i][j] * source.moduli[j] % target.moduli[i] != 0 {
                    return Err(MapError::IllDefined { col: j });
                }
            }
        }
        Ok(GroupMap {
            source,
            target,
            matrix: reduced,
        })
    }

    pub fn identity(a: &FiniteAbelianGroup) -> Self {
        Self::scalar(a, 1)
    }

    /// Multiplication by the integer `c`, an endomorphism of any group.
    pub fn scalar(a: &FiniteAbelianGroup, c: i64) -> Self {
        let matrix: Vec<Vec<i64>> = (0..a.rank())
            .map(|i| (0..a.rank()).map(|j| if i == j { c } else { 0 }).collect())
            .collect();
        Self::new(a.clone(), a.clone(), matrix).expect("scalar maps are well defined")
    }

    pub fn zero_map(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup) -> Self {
        let matrix = vec![vec![0i64; source.rank()]; target.rank()];
        Self::new(source.clone(), target.clone(), matrix).expect("zero map is well defined")
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<usize>] {
        &self.matrix
    }

    pub fn apply(&self, a: &[usize]) -> Element {
        debug_assert!(self.source.contains(a));
        (0..self.target.rank())
            .map(|i| {
                let s: usize = self.matrix[i]
                    .iter()
                    .zip(a)
                    .map(|(&e, &x)| e * x % self.target.moduli[i])
                    .sum();
                s % self.target.moduli[i]
            })
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GroupMap) -> GroupMap {
        assert_eq!(inner.target, self.source, "composition mismatch");
        let matrix: Vec<Vec<i64>> = (0..self.target.rank())
            .map(|i| {
                (0..inner.source.rank())
                    .map(|j| {
                        (0..self.source.rank())
                            .map(|l| (self.matrix[i][l] * inner.matrix[l][j]) as i64)
                            .sum()
                    })
                    .collect()
            })
            .collect();
        GroupMap::new(inner.source.clone(), self.target.clone(), matrix)
            .expect("composite of homomorphisms is well defined")
    }

    /// The map `x ↦ x − f(x)` for an endomorphism `f`.
    pub fn one_minus(&self) -> Result<GroupMap, MapError> {
        if !self.is_endomorphism() {
            return Err(MapError::EndomorphismExpected);
        }
        let matrix: Vec<Vec<i64>> = (0..self.target.rank())
            .map(|i| {
                (0..self.source.rank())
                    .map(|j| {
                        let d = if i == j { 1 } else { 0 };
                        d - self.matrix[i][j] as i64
                    })
                    .collect()
            })
            .collect();
        GroupMap::new(self.source.clone(), self.target.clone(), matrix)
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.order() == self.target.order() && self.image().order() == self.target.order()
    }

    pub fn is_automorphism(&self) -> bool {
        self.is_endomorphism() && self.is_isomorphism()
    }

    pub fn is_identity(&self) -> bool {
        self.is_endomorphism() && *self == GroupMap::identity(&self.source)
    }

    /// Image as a subgroup of the target, generated by the unit images.
    pub fn image(&self) -> Subgroup {
        let gens: Vec<Element> = (0..self.source.rank())
            .map(|j| self.apply(&self.source.unit(j)))
            .collect();
        Subgroup::generated(&self.target, &gens)
    }

    /// Kernel as a subgroup of the source.
    pub fn kernel(&self) -> Subgroup {
        let zero = self.target.zero();
        let members: Vec<Element> = self
            .source
            .elements()
            .into_iter()
            .filter(|a| self.apply(a) == zero)
            .collect();
        Subgroup::generated(&self.source, &members)
    }

    /// Inverse of an isomorphism, if the map is one.
    pub fn inverse(&self) -> Option<GroupMap> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut preimage: HashMap<Element, Element> = HashMap::new();
        for a in self.source.elements() {
            preimage.insert(self.apply(&a), a);
        }
        let matrix: Vec<Vec<i64>> = (0..self.source.rank())
            .map(|i| {
                (0..self.target.rank())
                    .map(|j| preimage[&self.target.unit(j)][i] as i64)
                    .collect()
            })
            .collect();
        Some(
            GroupMap::new(self.target.clone(), self.source.clone(), matrix)
                .expect("inverse of an isomorphism is well defined"),
        )
    }
}

/// A materialized subgroup of a finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteAbelianGroup,
    generators: Vec<Element>,
    elements: Vec<Element>,
}

impl Subgroup {
    /// Closure of a generating set under addition.
    pub fn generated(parent: &FiniteAbelianGroup, generators: &[Element]) -> Self {
        for g in generators {
            assert!(parent.contains(g), "generator {g:?} not in parent");
        }
        let mut seen: HashSet<Element> = HashSet::new();
        let mut frontier = vec![parent.zero()];
        seen.insert(parent.zero());
        while let Some(x) = frontier.pop() {
            for g in generators {
                let y = parent.add(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let mut elements: Vec<Element> = seen.into_iter().collect();
        elements.sort();
        Subgroup {
            parent: parent.clone(),
            generators: generators.to_vec(),
            elements,
        }
    }

    pub fn trivial(parent: &FiniteAbelianGroup) -> Self {
        Self::generated(parent, &[])
    }

    pub fn full(parent: &FiniteAbelianGroup) -> Self {
        let gens: Vec<Element> = (0..parent.rank()).map(|j| parent.unit(j)).collect();
        Self::generated(parent, &gens)
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: &[usize]) -> bool {
        self.elements.binary_search_by(|e| e.as_slice().cmp(a)).is_ok()
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.parent.order()
    }

    /// Cosets as sorted element lists, ordered by least representative.
    pub fn cosets(&self) -> Vec<Vec<Element>> {
        let mut seen: HashSet<Element> = HashSet::new();
        let mut cosets = Vec::new();
        for x in self.parent.elements() {
            if seen.contains(&x) {
                continue;
            }
            let mut coset: Vec<Element> = self
                .elements
                .iter()
                .map(|s| self.parent.add(&x, s))
                .collect();
            coset.sort();
            for e in &coset {
                seen.insert(e.clone());
            }
            cosets.push(coset);
        }
        cosets
    }

    /// Least element of the coset `a + S`.
    pub fn coset_rep(&self, a: &[usize]) -> Element {
        self.elements
            .iter()
            .map(|s| self.parent.add(a, s))
            .min()
            .expect("subgroup contains zero")
    }

    /// Least representatives, one per coset.
    pub fn transversal(&self) -> Vec<Element> {
        self.cosets().into_iter().map(|c| c[0].clone()).collect()
    }

    /// Quotient group in invariant-factor form, with projection and lifting.
    pub fn quotient(&self) -> Quotient {
        let reps = self.transversal();
        let dec = decompose_abelian(
            &reps,
            |x, y| self.coset_rep(&self.parent.add(x, y)),
            &self.coset_rep(&self.parent.zero()),
        );
        Quotient {
            group: dec.group,
            subgroup: self.clone(),
            rep_to_tuple: dec.tuple_of,
            tuple_to_rep: dec.value_of,
        }
    }
}

/// A quotient `A/S` materialized as a [`FiniteAbelianGroup`] together with
/// the projection and the least-representative section.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteAbelianGroup,
    subgroup: Subgroup,
    rep_to_tuple: HashMap<Element, Element>,
    tuple_to_rep: HashMap<Element, Element>,
}

impl Quotient {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        self.subgroup.parent()
    }

    /// Image of a parent element in the quotient.
    pub fn project(&self, a: &[usize]) -> Element {
        self.rep_to_tuple[&self.subgroup.coset_rep(a)].clone()
    }

    /// Least parent representative of a quotient element.
    pub fn lift(&self, t: &[usize]) -> Element {
        self.tuple_to_rep[t].clone()
    }
}

/// Multiplicity of `tuple` as a multitransversal of the cosets of `s`:
/// `Some(m)` iff every coset of `s` contains exactly `m` entries of the
/// tuple (counted with repetition).
pub fn multitransversal_multiplicity(tuple: &[Element], s: &Subgroup) -> Option<usize> {
    let coset_count = s.parent().order() / s.order();
    let mut counts: HashMap<Element, usize> = HashMap::new();
    for d in tuple {
        *counts.entry(s.coset_rep(d)).or_insert(0) += 1;
    }
    if tuple.is_empty() {
        return Some(0);
    }
    if counts.len() != coset_count {
        return None;
    }
    let mult = *counts.values().next().unwrap();
    counts.values().all(|&c| c == mult).then_some(mult)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the given tuple is not a transversal of the image cosets")]
pub struct NotTransversal;

/// Pushes a transversal `t` of `A/Im φ` through `φ` and returns the
/// multiplicity of `φ(t)` as a multitransversal of `Im φ / Im φ²`. The
/// multiplicity always equals `|Ker φ| / |Ker φ ∩ Im φ|`, which is checked.
pub fn multitransversal_image_multiplicity(
    a: &FiniteAbelianGroup,
    phi: &GroupMap,
    t: &[Element],
) -> Result<usize, NotTransversal> {
    assert!(phi.is_endomorphism() && phi.source() == a, "φ must be an endomorphism of A");
    let im = phi.image();
    let coset_count = a.order() / im.order();
    let mut reps: Vec<Element> = t.iter().map(|x| im.coset_rep(x)).collect();
    reps.sort();
    reps.dedup();
    if t.len() != coset_count || reps.len() != coset_count {
        return Err(NotTransversal);
    }

    let im2 = phi.compose(phi).image();
    // Partition Im φ into cosets of Im φ²; count images of t per coset.
    let mut counts: HashMap<Element, usize> = HashMap::new();
    let rep_in_im = |x: &Element| -> Element {
        im2.elements().iter().map(|s| a.add(x, s)).min().unwrap()
    };
    for x in t {
        let image = phi.apply(x);
        *counts.entry(rep_in_im(&image)).or_insert(0) += 1;
    }
    let inner_cosets = im.order() / im2.order();
    let mult = if counts.len() == inner_cosets {
        let m = *counts.values().next().unwrap();
        counts.values().all(|&c| c == m).then_some(m)
    } else {
        None
    };
    let mult = mult.expect("image of a transversal is a multitransversal");

    let ker = phi.kernel();
    let meet = ker
        .elements()
        .iter()
        .filter(|x| im.contains(x))
        .count();
    assert_eq!(
        mult,
        ker.order() / meet,
        "multiplicity must equal |Ker φ / Ker φ ∩ Im φ|"
    );
    Ok(mult)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("group of order {actual} exceeds the guard {limit}")]
pub struct GuardExceeded {
    pub limit: usize,
    pub actual: usize,
}

/// All endomorphisms of `a`, column by column. Exponential in the rank;
/// meant for the small groups exercised by the property suites.
pub fn endomorphisms(a: &FiniteAbelianGroup) -> Vec<GroupMap> {
    let column_options = column_candidates(a);
    let mut maps = Vec::new();
    let mut columns: Vec<Element> = Vec::new();
    build_endos(a, &column_options, &mut columns, &mut maps, false);
    maps.sort_by(|f, g| f.matrix.cmp(&g.matrix));
    maps
}

/// The automorphism group of `a`, enumerated by choosing unit images with
/// order constraints and pruning assignments that are not injective so far.
pub fn automorphism_group(a: &FiniteAbelianGroup) -> Result<Vec<GroupMap>, GuardExceeded> {
    automorphism_group_guarded(a, DEFAULT_AUT_GUARD)
}

pub fn automorphism_group_guarded(
    a: &FiniteAbelianGroup,
    guard: usize,
) -> Result<Vec<GroupMap>, GuardExceeded> {
    if a.order() > guard {
        return Err(GuardExceeded {
            limit: guard,
            actual: a.order(),
        });
    }
    let column_options = column_candidates(a);
    let mut maps = Vec::new();
    let mut columns: Vec<Element> = Vec::new();
    build_endos(a, &column_options, &mut columns, &mut maps, true);
    maps.sort_by(|f, g| f.matrix.cmp(&g.matrix));
    Ok(maps)
}

/// Candidate images of the `j`-th unit: elements annihilated by `m_j`.
fn column_candidates(a: &FiniteAbelianGroup) -> Vec<Vec<Element>> {
    (0..a.rank())
        .map(|j| {
            let m = a.moduli()[j];
            a.elements()
                .into_iter()
                .filter(|x| a.scalar_mul(m, x) == a.zero())
                .collect()
        })
        .collect()
}

fn build_endos(
    a: &FiniteAbelianGroup,
    options: &[Vec<Element>],
    columns: &mut Vec<Element>,
    out: &mut Vec<GroupMap>,
    bijective_only: bool,
) {
    if columns.len() == a.rank() {
        let matrix: Vec<Vec<i64>> = (0..a.rank())
            .map(|i| (0..a.rank()).map(|j| columns[j][i] as i64).collect())
            .collect();
        out.push(GroupMap::new(a.clone(), a.clone(), matrix).expect("columns satisfy constraints"));
        return;
    }
    let j = columns.len();
    for cand in &options[j] {
        columns.push(cand.clone());
        let keep = if bijective_only {
            let expected: usize = a.moduli()[..=j].iter().product();
            Subgroup::generated(a, columns).order() == expected
        } else {
            true
        };
        if keep {
            build_endos(a, options, columns, out, bijective_only);
        }
        columns.pop();
    }
}

/// One representative per conjugacy class, each the least matrix in its
/// class; the list is sorted.
pub fn conjugacy_class_reps(auts: &[GroupMap]) -> Vec<GroupMap> {
    let mut sorted: Vec<&GroupMap> = auts.iter().collect();
    sorted.sort_by(|f, g| f.matrix.cmp(&g.matrix));
    let inverses: Vec<GroupMap> = sorted
        .iter()
        .map(|g| g.inverse().expect("automorphisms are invertible"))
        .collect();
    let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
    let mut reps = Vec::new();
    for f in &sorted {
        if seen.contains(&f.matrix) {
            continue;
        }
        for (g, ginv) in sorted.iter().zip(&inverses) {
            let conj = g.compose(f).compose(ginv);
            seen.insert(conj.matrix);
        }
        reps.push((*f).clone());
    }
    reps
}

/// Elements of `auts` commuting with `f`.
pub fn centralizer(auts: &[GroupMap], f: &GroupMap) -> Vec<GroupMap> {
    auts.iter()
        .filter(|g| g.compose(f) == f.compose(*g))
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the subgroup is not invariant under the automorphism")]
pub struct NotInvariant;

/// The automorphism of `A/S` induced by `ψ`, defined when `ψ(S) = S`.
pub fn induced_on_quotient(psi: &GroupMap, q: &Quotient) -> Result<GroupMap, NotInvariant> {
    let s = q.subgroup();
    assert!(psi.is_automorphism() && psi.source() == s.parent());
    if !s.elements().iter().all(|x| s.contains(&psi.apply(x))) {
        return Err(NotInvariant);
    }
    let qg = &q.group;
    let matrix: Vec<Vec<i64>> = (0..qg.rank())
        .map(|i| {
            (0..qg.rank())
                .map(|j| {
                    let image = q.project(&psi.apply(&q.lift(&qg.unit(j))));
                    image[i] as i64
                })
                .collect()
        })
        .collect();
    let induced = GroupMap::new(qg.clone(), qg.clone(), matrix)
        .expect("induced map of an invariant subgroup is well defined");
    debug_assert!(induced.is_automorphism());
    Ok(induced)
}

/// All abelian groups of order `m` up to isomorphism, in invariant-factor
/// form: one group per tuple of partitions of the prime exponents.
pub fn abelian_groups_of_order(m: usize) -> Vec<FiniteAbelianGroup> {
    assert!(m >= 1);
    if m == 1 {
        return vec![FiniteAbelianGroup::trivial()];
    }
    let factors = factorize(m);
    let partition_lists: Vec<Vec<Vec<usize>>> = factors
        .iter()
        .map(|&(_, e)| partitions_descending(e))
        .collect();
    let mut groups = Vec::new();
    let mut choice = vec![0usize; factors.len()];
    loop {
        let max_len = choice
            .iter()
            .enumerate()
            .map(|(i, &c)| partition_lists[i][c].len())
            .max()
            .unwrap();
        // Invariant factor `i` (largest first) is the product of p^λ_i.
        let mut desc: Vec<usize> = vec![1; max_len];
        for (i, &c) in choice.iter().enumerate() {
            let (p, _) = factors[i];
            for (slot, &exp) in partition_lists[i][c].iter().enumerate() {
                desc[slot] *= p.pow(exp as u32);
            }
        }
        desc.reverse();
        groups.push(FiniteAbelianGroup::new(desc));
        // advance the mixed-radix choice vector
        let mut i = 0;
        loop {
            if i == choice.len() {
                groups.sort_by(|a, b| a.moduli.cmp(&b.moduli));
                return groups;
            }
            choice[i] += 1;
            if choice[i] < partition_lists[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

pub(crate) fn factorize(mut m: usize) -> Vec<(usize, usize)> {
    let mut factors = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    factors
}

/// Partitions of `e` as descending part lists.
fn partitions_descending(e: usize) -> Vec<Vec<usize>> {
    fn recurse(rest: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            current.push(part);
            recurse(rest - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    recurse(e, e, &mut Vec::new(), &mut out);
    out
}

/// Basis of a finite abelian group given as plain values with an operation:
/// generators with orders forming a descending divisor chain. Extracts an
/// element of maximal order, splits off the cyclic factor, and recurses on
/// the quotient, lifting quotient generators to preserve their orders.
pub(crate) fn abelian_basis<T>(
    elements: &[T],
    op: &dyn Fn(&T, &T) -> T,
    identity: &T,
) -> Vec<(T, usize)>
where
    T: Clone + Eq + Ord + std::hash::Hash,
{
    if elements.len() <= 1 {
        return Vec::new();
    }
    let order_of = |x: &T| -> usize {
        let mut p = x.clone();
        let mut k = 1;
        while &p != identity {
            p = op(&p, x);
            k += 1;
        }
        k
    };
    let mut sorted: Vec<&T> = elements.iter().collect();
    sorted.sort();
    let mut best: Option<(&T, usize)> = None;
    for e in &sorted {
        let o = order_of(e);
        if best.map_or(true, |(_, bo)| o > bo) {
            best = Some((e, o));
        }
    }
    let (g, m) = best.unwrap();

    let mut powers: Vec<T> = Vec::with_capacity(m);
    let mut p = identity.clone();
    for _ in 0..m {
        powers.push(p.clone());
        p = op(&p, g);
    }
    let rep = |x: &T| -> T { powers.iter().map(|w| op(x, w)).min().unwrap() };

    let mut reps: Vec<T> = elements.iter().map(&rep).collect();
    reps.sort();
    reps.dedup();
    let quotient_identity = rep(identity);
    let quotient_op = |x: &T, y: &T| rep(&op(x, y));
    let sub_basis = abelian_basis(&reps, &quotient_op, &quotient_identity);

    let mut basis = vec![(g.clone(), m)];
    for (xbar, r) in sub_basis {
        // x^r lies in ⟨g⟩ because the coset of x has order r; the exponent is
        // divisible by r since m is the group exponent, so dividing it out
        // yields a representative of order exactly r independent of ⟨g⟩.
        let mut xr = identity.clone();
        for _ in 0..r {
            xr = op(&xr, &xbar);
        }
        let s = powers
            .iter()
            .position(|w| w == &xr)
            .expect("r-th power lies in the cyclic factor");
        debug_assert_eq!(s % r, 0);
        let t = s / r;
        let lift = op(&xbar, &powers[(m - t % m) % m]);
        debug_assert_eq!(order_of(&lift), r);
        basis.push((lift, r));
    }
    basis
}

/// Invariant-factor decomposition of a value set under an abelian operation:
/// the canonical group plus the bijection tuples ↔ values, which is a group
/// isomorphism.
pub(crate) struct AbelianDecomposition<T> {
    pub group: FiniteAbelianGroup,
    pub tuple_of: HashMap<T, Element>,
    pub value_of: HashMap<Element, T>,
}

pub(crate) fn decompose_abelian<T>(
    elements: &[T],
    op: impl Fn(&T, &T) -> T,
    identity: &T,
) -> AbelianDecomposition<T>
where
    T: Clone + Eq + Ord + std::hash::Hash,
{
    let basis = abelian_basis(elements, &op, identity);
    let moduli: Vec<usize> = basis.iter().map(|&(_, o)| o).rev().collect();
    let group = FiniteAbelianGroup::new(moduli);
    assert_eq!(group.order(), elements.len(), "basis does not span");
    let rank = group.rank();
    let mut tuple_of = HashMap::new();
    let mut value_of = HashMap::new();
    for idx in 0..group.order() {
        let tuple = group.element_at(idx);
        let mut v = identity.clone();
        for (i, &c) in tuple.iter().enumerate() {
            let (b, _) = &basis[rank - 1 - i];
            for _ in 0..c {
                v = op(&v, b);
            }
        }
        tuple_of.insert(v.clone(), tuple.clone());
        value_of.insert(tuple, v);
    }
    assert_eq!(tuple_of.len(), elements.len(), "bijection failed");
    AbelianDecomposition {
        group,
        tuple_of,
        value_of,
    }
}
