//! Automorphism groups of complexes and their action on flags.

use std::collections::HashSet;

use crate::complex::{FaceId, Flag, IncidenceComplex};
use crate::error::{Error, Result};
use crate::morphism::automorphism_search;
use crate::perm::{Permutation, PermutationGroup};

/// The automorphism group acting on face ids. Its order is always known;
/// the elements are enumerated when the order is at most `cap`.
pub fn automorphism_group(complex: &IncidenceComplex, budget: u64, cap: usize) -> Result<PermutationGroup> {
    let found = automorphism_search(complex, budget)?;
    let order = u64::try_from(found.order)
        .map_err(|_| Error::CapExceeded { what: "automorphism group order", cap: usize::MAX })?;
    let group = PermutationGroup::new(complex.len(), found.generators)?;
    if order as u128 > cap as u128 {
        return Ok(group.with_known_order(order));
    }
    let group = group.enumerated(cap)?;
    if group.order() != Some(order) {
        return Err(Error::PropertyViolation(format!(
            "automorphism search found order {order} but closure has {}",
            group.order().unwrap_or(0)
        )));
    }
    Ok(group)
}

/// Extends a permutation of vertex indices to the face ids of a
/// vertex-describable complex.
pub fn lift_vertex_permutation(complex: &IncidenceComplex, p: &Permutation) -> Result<Permutation> {
    if p.degree() != complex.vertex_count() {
        return Err(Error::DegreeMismatch { expected: complex.vertex_count(), got: p.degree() });
    }
    let mut images = Vec::with_capacity(complex.len());
    for f in complex.faces() {
        if f.id == complex.least() || f.id == complex.greatest() {
            images.push(f.id as u32);
            continue;
        }
        let mut vs: Vec<u32> = f.vertices.iter().map(|&v| p.apply(v)).collect();
        vs.sort_unstable();
        let image = complex.face_with_vertices(f.rank, &vs).ok_or_else(|| {
            Error::PropertyViolation(format!("vertex permutation does not map face {} onto a face", f.id))
        })?;
        images.push(image as u32);
    }
    Permutation::from_images(images)
}

/// Restricts a face-id automorphism to vertex indices.
pub fn vertex_action(complex: &IncidenceComplex, g: &Permutation) -> Permutation {
    let images = complex.faces_of_rank(0).map(|f| complex.vertex_index(g.apply(f as u32) as FaceId)).collect();
    Permutation::from_images(images).expect("automorphisms permute vertices")
}

pub fn flag_image(flag: &Flag, g: &Permutation) -> Flag {
    Flag::new(flag.faces().iter().map(|&f| g.apply(f as u32) as FaceId).collect())
}

/// Size of the orbit of `flag` under a group acting on face ids.
pub fn flag_orbit_size(group: &PermutationGroup, flag: &Flag) -> usize {
    let mut seen: HashSet<Flag> = HashSet::new();
    seen.insert(flag.clone());
    let mut queue = vec![flag.clone()];
    while let Some(f) = queue.pop() {
        for g in group.generators() {
            let h = flag_image(&f, g);
            if seen.insert(h.clone()) {
                queue.push(h);
            }
        }
    }
    seen.len()
}

/// True iff a group acting on face ids has a single orbit on flags.
pub fn is_flag_transitive(group: &PermutationGroup, complex: &IncidenceComplex) -> bool {
    group.degree() == complex.len() && flag_orbit_size(group, &complex.base_flag()) as u128 == complex.flag_count()
}

/// The subgroup fixing every face of `flag`.
pub fn flag_stabilizer(group: &PermutationGroup, flag: &Flag) -> Result<PermutationGroup> {
    let points: Vec<u32> = flag.faces().iter().map(|&f| f as u32).collect();
    group.stabilizer(&points)
}
