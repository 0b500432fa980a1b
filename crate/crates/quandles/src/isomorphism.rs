//! Isomorphism of indecomposable semiregular extensions.
//!
//! Two indecomposable extensions `Ext(A, f, d̄)` and `Ext(A′, f′, d̄′)` are
//! isomorphic iff there are a fiber bijection `π`, a group isomorphism
//! `ψ : A → A′` intertwining the automorphisms (`ψ f = f′ ψ`), and a shift
//! `a ∈ A′` with `ψ(d_i) − d′_{π(i)} ∈ a + Im(1−f′)` for every fiber. The
//! search enumerates `ψ` over the automorphisms of the common canonical
//! form, `a` over one representative per coset of `Im(1−f′)`, and matches
//! the coset multisets to produce `π`; every witness is verified against the
//! built tables before being returned.
//!
//! For balanced tuples the shift condition degenerates to equality of
//! multiplicities, and specializing further to one-fiber extensions gives
//! the classical isomorphism criterion for affine quandles.

use serde::Serialize;
use thiserror::Error;

use crate::abelian::{automorphism_group_guarded, decompose_abelian, Element, FiniteAbelianGroup,
    GroupMap};
use crate::constructions::{semiregular_extension, ExtensionDescriptor};
use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("descriptor {which} is decomposable; the criterion is stated for indecomposable extensions")]
    Decomposable { which: usize },
    #[error("descriptor {which} is not balanced")]
    NotBalanced { which: usize },
}

/// A verified isomorphism witness between two indecomposable extensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionIsoWitness {
    /// `π`: fiber `i` of the first extension maps to fiber `fiber_map[i]`.
    pub fiber_map: Vec<usize>,
    /// `ψ : A → A′` with `ψ f = f′ ψ`.
    pub group_iso: GroupMap,
    /// `a ∈ A′` with `ψ(d_i) − d′_{π(i)} ∈ a + Im(1−f′)`.
    pub shift: Element,
}

/// Decides isomorphism of two indecomposable extensions, returning a
/// verified witness if one exists.
pub fn ext_isomorphic(
    d1: &ExtensionDescriptor,
    d2: &ExtensionDescriptor,
) -> Result<Option<ExtensionIsoWitness>, IsoError> {
    if !d1.is_indecomposable() {
        return Err(IsoError::Decomposable { which: 1 });
    }
    if !d2.is_indecomposable() {
        return Err(IsoError::Decomposable { which: 2 });
    }
    if d1.fiber_count() != d2.fiber_count() || d1.group().order() != d2.group().order() {
        return Ok(None);
    }
    let (c1, to_c1) = d1.group().canonicalized();
    let (c2, to_c2) = d2.group().canonicalized();
    if c1 != c2 {
        return Ok(None);
    }
    let from_c2 = to_c2.inverse().expect("canonicalization is an isomorphism");
    let f1 = to_c1
        .compose(d1.automorphism())
        .compose(&to_c1.inverse().expect("isomorphism"));
    let f2 = to_c2.compose(d2.automorphism()).compose(&from_c2);
    let d1c: Vec<Element> = d1.constants().iter().map(|x| to_c1.apply(x)).collect();
    let d2c: Vec<Element> = d2.constants().iter().map(|x| to_c2.apply(x)).collect();

    let image2 = f2.one_minus().expect("endomorphism").image();
    let mut target_keys: Vec<(Element, usize)> = d2c
        .iter()
        .enumerate()
        .map(|(j, x)| (image2.coset_rep(x), j))
        .collect();
    target_keys.sort();

    for psi in automorphism_group_guarded(&c1, usize::MAX).expect("unguarded") {
        if psi.compose(&f1) != f2.compose(&psi) {
            continue;
        }
        let mapped: Vec<Element> = d1c.iter().map(|x| psi.apply(x)).collect();
        for a in image2.transversal() {
            let mut keys: Vec<(Element, usize)> = mapped
                .iter()
                .enumerate()
                .map(|(i, x)| (image2.coset_rep(&c1.sub(x, &a)), i))
                .collect();
            keys.sort();
            if keys
                .iter()
                .zip(&target_keys)
                .any(|(k1, k2)| k1.0 != k2.0)
            {
                continue;
            }
            let mut fiber_map = vec![0; d1.fiber_count()];
            for (k1, k2) in keys.iter().zip(&target_keys) {
                fiber_map[k1.1] = k2.1;
            }
            let witness = ExtensionIsoWitness {
                fiber_map,
                group_iso: from_c2.compose(&psi).compose(&to_c1),
                shift: from_c2.apply(&a),
            };
            // Verifies the induced table map; a failure here would be a bug.
            let _ = witness_table_map(d1, d2, &witness);
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Builds the explicit table isomorphism induced by a witness,
/// `(i, x) ↦ (π(i), ψ(x) + e_i)` with `(1−f′)(e_i) = ψ(d_i) − d′_{π(i)} − a`,
/// and checks it against the two built tables.
pub fn witness_table_map(
    d1: &ExtensionDescriptor,
    d2: &ExtensionDescriptor,
    witness: &ExtensionIsoWitness,
) -> Permutation {
    let a2 = d2.group();
    let psi = &witness.group_iso;
    let one_minus = d2.automorphism().one_minus().expect("endomorphism");
    let offsets: Vec<Element> = (0..d1.fiber_count())
        .map(|i| {
            let target = a2.sub(
                &a2.sub(
                    &psi.apply(&d1.constants()[i]),
                    &d2.constants()[witness.fiber_map[i]],
                ),
                &witness.shift,
            );
            a2.elements()
                .into_iter()
                .find(|e| one_minus.apply(e) == target)
                .expect("shifted difference lies in Im(1-f')")
        })
        .collect();
    let images: Vec<usize> = (0..d1.order())
        .map(|idx| {
            let (i, x) = d1.coords_of(idx);
            d2.index_of(
                witness.fiber_map[i],
                &a2.add(&psi.apply(&x), &offsets[i]),
            )
        })
        .collect();
    let map = Permutation::from_images(images).expect("witness map is a bijection");
    let (q1, _) = semiregular_extension(d1);
    let (q2, _) = semiregular_extension(d2);
    for u in 0..q1.order() {
        for v in 0..q1.order() {
            assert_eq!(
                map.apply(q1.op(u, v)),
                q2.op(map.apply(u), map.apply(v)),
                "witness must induce a table isomorphism"
            );
        }
    }
    map
}

/// Shortcut for balanced tuples: isomorphic iff some `ψ` intertwines the
/// automorphisms and the multiplicities agree.
pub fn ext_isomorphic_balanced(
    d1: &ExtensionDescriptor,
    d2: &ExtensionDescriptor,
) -> Result<bool, IsoError> {
    if !d1.is_indecomposable() {
        return Err(IsoError::Decomposable { which: 1 });
    }
    if !d2.is_indecomposable() {
        return Err(IsoError::Decomposable { which: 2 });
    }
    let m1 = d1.multiplicity().ok_or(IsoError::NotBalanced { which: 1 })?;
    let m2 = d2.multiplicity().ok_or(IsoError::NotBalanced { which: 2 })?;
    if d1.fiber_count() != d2.fiber_count()
        || d1.group().order() != d2.group().order()
        || m1 != m2
    {
        return Ok(false);
    }
    let (c1, to_c1) = d1.group().canonicalized();
    let (c2, to_c2) = d2.group().canonicalized();
    if c1 != c2 {
        return Ok(false);
    }
    let f1 = to_c1
        .compose(d1.automorphism())
        .compose(&to_c1.inverse().expect("isomorphism"));
    let f2 = to_c2
        .compose(d2.automorphism())
        .compose(&to_c2.inverse().expect("isomorphism"));
    Ok(automorphism_group_guarded(&c1, usize::MAX)
        .expect("unguarded")
        .iter()
        .any(|psi| psi.compose(&f1) == f2.compose(psi)))
}

/// Isomorphism of affine quandles `Aff(A, f)` and `Aff(B, g)`: there must be
/// an isomorphism `ψ : Im(1−f) → Im(1−g)` with `ψ f = g ψ` on `Im(1−f)`,
/// and the kernel multiplicities `|Ker(1−f) / Ker(1−f) ∩ Im(1−f)|` must
/// agree.
pub fn affine_isomorphic(
    a: &FiniteAbelianGroup,
    f: &GroupMap,
    b: &FiniteAbelianGroup,
    g: &GroupMap,
) -> bool {
    assert!(f.is_automorphism() && f.source() == a, "f must be an automorphism of A");
    assert!(g.is_automorphism() && g.source() == b, "g must be an automorphism of B");
    if a.order() != b.order() {
        return false;
    }
    let one_minus_f = f.one_minus().expect("endomorphism");
    let one_minus_g = g.one_minus().expect("endomorphism");
    let sf = one_minus_f.image();
    let sg = one_minus_g.image();
    if sf.order() != sg.order() {
        return false;
    }
    let kf = one_minus_f.kernel();
    let kg = one_minus_g.kernel();
    let meet_f = kf.elements().iter().filter(|x| sf.contains(x)).count();
    let meet_g = kg.elements().iter().filter(|x| sg.contains(x)).count();
    if kf.order() / meet_f != kg.order() / meet_g {
        return false;
    }

    let dec_f = decompose_abelian(sf.elements(), |x, y| a.add(x, y), &a.zero());
    let dec_g = decompose_abelian(sg.elements(), |x, y| b.add(x, y), &b.zero());
    if dec_f.group != dec_g.group {
        return false;
    }
    // ψ runs over value_g ∘ σ ∘ coords_f for σ in Aut of the common form;
    // f restricts to Im(1−f) because f commutes with 1−f.
    for sigma in automorphism_group_guarded(&dec_f.group, usize::MAX).expect("unguarded") {
        let psi = |u: &Element| -> &Element { &dec_g.value_of[&sigma.apply(&dec_f.tuple_of[u])] };
        if sf
            .elements()
            .iter()
            .all(|u| psi(&f.apply(u)) == &g.apply(psi(u)))
        {
            return true;
        }
    }
    false
}
