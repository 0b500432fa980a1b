//! The finite quandle object: an `n × n` multiplication table over the
//! elements `0..n`, validated against the quandle axioms.
//!
//! Row `x` of the table is the left translation `L_x`; unique left division
//! says each row is a permutation, and left distributivity says each `L_x`
//! is an automorphism of the table. The displacement group is generated by
//! the compositions `L_x ∘ L_e⁻¹` for a fixed base point `e = 0`.

use std::fmt;

use serde::Serialize;

use crate::perm::{is_abelian_generators, orbits_of_generators, PermGroup, Permutation};

/// A finite quandle given by its multiplication table, `table[x][y] = x * y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuandle {
    n: usize,
    table: Vec<Vec<usize>>,
}

/// A way the candidate table failed the quandle axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AxiomViolation {
    /// The table is not square with one row per element.
    BadShape { rows: usize, row_len: Option<usize> },
    EntryOutOfRange { row: usize, col: usize, value: usize },
    NotIdempotent { x: usize },
    RowNotPermutation { x: usize },
    NotLeftDistributive { x: usize, y: usize, z: usize },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::BadShape { rows, row_len } => match row_len {
                Some(l) => write!(f, "table has {rows} rows but a row of length {l}"),
                None => write!(f, "table has {rows} rows"),
            },
            AxiomViolation::EntryOutOfRange { row, col, value } => {
                write!(f, "entry at row {row}, column {col} is out of range: {value}")
            }
            AxiomViolation::NotIdempotent { x } => write!(f, "{x} * {x} != {x}"),
            AxiomViolation::RowNotPermutation { x } => {
                write!(f, "row {x} is not a permutation (left division fails)")
            }
            AxiomViolation::NotLeftDistributive { x, y, z } => {
                write!(f, "{x} * ({y} * {z}) != ({x} * {y}) * ({x} * {z})")
            }
        }
    }
}

impl FiniteQuandle {
    /// Validates the quandle axioms and wraps the table. All violations are
    /// collected, not just the first.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, Vec<AxiomViolation>> {
        let n = table.len();
        let mut violations = Vec::new();
        for row in &table {
            if row.len() != n {
                return Err(vec![AxiomViolation::BadShape {
                    rows: n,
                    row_len: Some(row.len()),
                }]);
            }
        }
        for (x, row) in table.iter().enumerate() {
            for (y, &v) in row.iter().enumerate() {
                if v >= n {
                    violations.push(AxiomViolation::EntryOutOfRange { row: x, col: y, value: v });
                }
            }
        }
        if !violations.is_empty() {
            return Err(violations);
        }
        for x in 0..n {
            if table[x][x] != x {
                violations.push(AxiomViolation::NotIdempotent { x });
            }
            let mut seen = vec![false; n];
            let mut bijective = true;
            for &v in &table[x] {
                if seen[v] {
                    bijective = false;
                }
                seen[v] = true;
            }
            if !bijective {
                violations.push(AxiomViolation::RowNotPermutation { x });
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if table[x][table[y][z]] != table[table[x][y]][table[x][z]] {
                        violations.push(AxiomViolation::NotLeftDistributive { x, y, z });
                        break;
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(FiniteQuandle { n, table })
        } else {
            Err(violations)
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// The product `x * y`.
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// The left translation `L_x : y ↦ x * y`.
    pub fn left_translation(&self, x: usize) -> Permutation {
        Permutation::from_images(self.table[x].clone()).expect("rows are permutations")
    }

    /// Left division: the unique `z` with `x * z = y`.
    pub fn left_divide(&self, x: usize, y: usize) -> usize {
        self.table[x]
            .iter()
            .position(|&v| v == y)
            .expect("rows are permutations")
    }

    /// Distinct generators `L_x ∘ L_e⁻¹` of the displacement group, sorted.
    /// Duplicates collapse silently.
    pub fn dis_generators(&self, e: usize) -> Vec<Permutation> {
        let le_inv = self.left_translation(e).inverse();
        let mut gens: Vec<Permutation> = (0..self.n)
            .map(|x| self.left_translation(x).compose(&le_inv))
            .collect();
        gens.sort();
        gens.dedup();
        gens
    }

    /// The displacement group, materialized.
    pub fn displacement_group(&self) -> PermGroup {
        PermGroup::generate(&self.dis_generators(0), self.n)
    }

    /// Mediality via the displacement group: the generators commute pairwise
    /// iff the quandle satisfies the medial identity. The quartic identity
    /// check is kept separately as [`medial_identity_holds`] for
    /// cross-verification.
    pub fn is_medial(&self) -> bool {
        is_abelian_generators(&self.dis_generators(0))
    }

    /// Occurrence counts down column `x`: entry `y` is
    /// `m_{x,y} = |{z : z * x = y}|`.
    pub fn occurrence_counts(&self, x: usize) -> Vec<usize> {
        let mut counts = vec![0; self.n];
        for z in 0..self.n {
            counts[self.table[z][x]] += 1;
        }
        counts
    }

    /// True iff every column is also a permutation.
    pub fn is_latin(&self) -> bool {
        for y in 0..self.n {
            let mut seen = vec![false; self.n];
            for x in 0..self.n {
                let v = self.table[x][y];
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
        }
        true
    }

    /// Orbits of the displacement group (equivalently, of the multiplication
    /// group), sorted by least element.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits_of_generators(&self.dis_generators(0), self.n)
    }

    /// Least element of each orbit.
    pub fn orbit_transversal(&self) -> Vec<usize> {
        self.orbits().iter().map(|o| o[0]).collect()
    }

    /// Direct product, with pairs ordered as `(x, y) ↦ x * |other| + y`.
    pub fn direct_product(&self, other: &FiniteQuandle) -> FiniteQuandle {
        let m = other.n;
        let n = self.n * m;
        let table = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| self.table[a / m][b / m] * m + other.table[a % m][b % m])
                    .collect()
            })
            .collect();
        FiniteQuandle { n, table }
    }
}

impl fmt::Debug for FiniteQuandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FiniteQuandle(order {})", self.n)?;
        for row in &self.table {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Exhaustive check of the medial identity
/// `(x * y) * (u * v) = (x * u) * (y * v)`; quartic, used as an oracle
/// against [`FiniteQuandle::is_medial`].
pub fn medial_identity_holds(q: &FiniteQuandle) -> bool {
    let n = q.order();
    for x in 0..n {
        for y in 0..n {
            for u in 0..n {
                for v in 0..n {
                    if q.op(q.op(x, y), q.op(u, v)) != q.op(q.op(x, u), q.op(y, v)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Backtracking search for a table isomorphism `Q → R`, pruned by per-element
/// invariants: orbit size, fixed points of the translation, and the sorted
/// occurrence-count profile. Returns the bijection as a permutation sending
/// `Q`-elements to `R`-elements.
pub fn brute_force_isomorphism(q: &FiniteQuandle, r: &FiniteQuandle) -> Option<Permutation> {
    if q.order() != r.order() {
        return None;
    }
    let n = q.order();

    let keys = |t: &FiniteQuandle| -> Vec<(usize, usize, Vec<usize>)> {
        let orbits = t.orbits();
        let mut orbit_size = vec![0; n];
        for orbit in &orbits {
            for &x in orbit {
                orbit_size[x] = orbit.len();
            }
        }
        (0..n)
            .map(|x| {
                let mut profile: Vec<usize> = t
                    .occurrence_counts(x)
                    .into_iter()
                    .filter(|&c| c > 0)
                    .collect();
                profile.sort_unstable();
                (
                    orbit_size[x],
                    t.left_translation(x).fixed_point_count(),
                    profile,
                )
            })
            .collect()
    };
    let qk = keys(q);
    let rk = keys(r);
    {
        let mut a = qk.clone();
        let mut b = rk.clone();
        a.sort();
        b.sort();
        if a != b {
            return None;
        }
    }

    // Candidate images share the invariant key; scarce keys are assigned first.
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| rk[y] == qk[x]).collect())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (candidates[x].len(), x));

    fn extend(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        q: &FiniteQuandle,
        r: &FiniteQuandle,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            // Full verification; the incremental checks only cover pairs
            // whose product was already assigned.
            let n = q.order();
            for a in 0..n {
                for b in 0..n {
                    if map[q.op(a, b)].unwrap() != r.op(map[a].unwrap(), map[b].unwrap()) {
                        return false;
                    }
                }
            }
            return true;
        }
        let x = order[depth];
        'next: for &y in &candidates[x] {
            if used[y] {
                continue;
            }
            map[x] = Some(y);
            for a in 0..q.order() {
                let Some(fa) = map[a] else { continue };
                if let Some(im) = map[q.op(x, a)] {
                    if r.op(y, fa) != im {
                        map[x] = None;
                        continue 'next;
                    }
                }
                if let Some(im) = map[q.op(a, x)] {
                    if r.op(fa, y) != im {
                        map[x] = None;
                        continue 'next;
                    }
                }
            }
            used[y] = true;
            if extend(depth + 1, order, candidates, q, r, map, used) {
                return true;
            }
            used[y] = false;
            map[x] = None;
        }
        false
    }

    let mut map = vec![None; n];
    let mut used = vec![false; n];
    if extend(0, &order, &candidates, q, r, &mut map, &mut used) {
        let images: Vec<usize> = map.into_iter().map(|v| v.unwrap()).collect();
        Some(Permutation::from_images(images).expect("bijection"))
    } else {
        None
    }
}
