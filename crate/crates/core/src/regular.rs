//! Distinguished generating subgroups of flag-transitive groups, and the
//! reverse direction: building a complex from a group and such a system.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use indexmap::IndexSet;
use serde::Serialize;

use crate::complex::{FaceId, Flag, IncidenceComplex};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::morphism::{automorphism_search, find_isomorphism};
use crate::perm::{Permutation, PermutationGroup};
use crate::symmetry::{is_flag_transitive, lift_vertex_permutation, vertex_action};
use crate::validate::validate;

/// A group together with subgroups `R_{-1}, ..., R_k`, the raw input of the
/// coset construction. `subgroups[i + 1]` is `R_i`.
#[derive(Clone, Debug)]
pub struct GroupComplexSpec {
    pub group: PermutationGroup,
    pub subgroups: Vec<PermutationGroup>,
}

impl GroupComplexSpec {
    pub fn rank(&self) -> usize {
        self.subgroups.len().saturating_sub(2)
    }
}

/// The subgroups `R_i` of a flag-transitive group with respect to a base flag.
#[derive(Clone, Debug)]
pub struct DistinguishedSystem {
    pub group: PermutationGroup,
    pub base_flag: Flag,
    /// `subgroups[i + 1]` is `R_i`, for `i = -1..=k`.
    pub subgroups: Vec<PermutationGroup>,
    pub flag_stabilizer: PermutationGroup,
    /// The point set standing for each base-flag face: the face id itself
    /// for groups on faces, its vertex set for groups on vertices.
    pub point_sets: Vec<Vec<u32>>,
}

impl DistinguishedSystem {
    pub fn rank(&self) -> usize {
        self.subgroups.len() - 2
    }

    /// `R_i` for `-1 <= i <= k`.
    pub fn subgroup(&self, i: i32) -> &PermutationGroup {
        &self.subgroups[(i + 1) as usize]
    }

    pub fn spec(&self) -> GroupComplexSpec {
        GroupComplexSpec { group: self.group.clone(), subgroups: self.subgroups.clone() }
    }
}

/// `R_i` = stabilizer of the base flag with its `i`-face removed, for a
/// group acting on face ids.
pub fn distinguished_subgroups(
    group: &PermutationGroup,
    complex: &IncidenceComplex,
    base_flag: &Flag,
) -> Result<DistinguishedSystem> {
    if group.degree() != complex.len() {
        return Err(Error::DegreeMismatch { expected: complex.len(), got: group.degree() });
    }
    if !group.is_enumerated() {
        return Err(Error::RequiresEnumeration);
    }
    if !is_flag_transitive(group, complex) {
        return Err(Error::NotFlagTransitive);
    }
    let point_sets = base_flag.faces().iter().map(|&f| vec![f as u32]).collect();
    build_system(group, base_flag, point_sets)
}

/// Same as [`distinguished_subgroups`] for a group acting on the vertex
/// indices of a vertex-describable complex; faces are tracked by vertex set.
pub fn distinguished_subgroups_by_vertices(
    group: &PermutationGroup,
    complex: &IncidenceComplex,
    base_flag: &Flag,
) -> Result<DistinguishedSystem> {
    if group.degree() != complex.vertex_count() {
        return Err(Error::DegreeMismatch { expected: complex.vertex_count(), got: group.degree() });
    }
    if !group.is_enumerated() {
        return Err(Error::RequiresEnumeration);
    }
    if !complex.is_vertex_describable() {
        return Err(Error::NotVertexDescribable);
    }
    let lifted = group.generators().iter().map(|g| lift_vertex_permutation(complex, g)).collect::<Result<Vec<_>>>()?;
    if !is_flag_transitive(&PermutationGroup::new(complex.len(), lifted)?, complex) {
        return Err(Error::NotFlagTransitive);
    }
    let point_sets = base_flag.faces().iter().map(|&f| complex.face(f).vertices.clone()).collect();
    build_system(group, base_flag, point_sets)
}

fn build_system(group: &PermutationGroup, base_flag: &Flag, point_sets: Vec<Vec<u32>>) -> Result<DistinguishedSystem> {
    let mut subgroups = Vec::with_capacity(point_sets.len());
    for skip in 0..point_sets.len() {
        let sets: Vec<Vec<u32>> =
            point_sets.iter().enumerate().filter(|&(pos, _)| pos != skip).map(|(_, s)| s.clone()).collect();
        subgroups.push(group.setwise_stabilizer(&sets)?);
    }
    let flag_stabilizer = group.setwise_stabilizer(&point_sets)?;
    Ok(DistinguishedSystem {
        group: group.clone(),
        base_flag: base_flag.clone(),
        subgroups,
        flag_stabilizer,
        point_sets,
    })
}

/// `c_i = |R_i : R_{-1}|` for `i = 0..k-1`.
pub fn c_from_indices(spec: &GroupComplexSpec) -> Result<Vec<usize>> {
    let engine = Engine::new(spec)?;
    let base = engine.subgroup_sets[0].count_ones(..);
    Ok((1..=spec.rank()).map(|p| engine.subgroup_sets[p].count_ones(..) / base).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutationReport {
    pub holds: bool,
    /// Pairs `(i, j)` with `R_i R_j != R_j R_i`.
    pub failures: Vec<(i32, i32)>,
}

/// `R_i R_j = R_j R_i` as sets, for `-1 <= i < j - 1 <= k - 1`.
pub fn check_commutation(spec: &GroupComplexSpec) -> Result<CommutationReport> {
    let engine = Engine::new(spec)?;
    Ok(engine.commutation())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    pub holds: bool,
    /// First failing pair `(I, J)` as lists of subgroup indices.
    pub witness: Option<(Vec<i32>, Vec<i32>)>,
}

/// `Γ_I ∩ Γ_J = Γ_{I∩J}` over all subsets of `{-1, ..., k}`, where
/// `Γ_I = <R_i : i ∈ I>` and `Γ_∅ = R_{-1}`.
pub fn check_intersection_property(spec: &GroupComplexSpec) -> Result<IntersectionReport> {
    let mut engine = Engine::new(spec)?;
    engine.intersection()
}

/// `R_{-1}` and `R_k` are the same subgroup.
pub fn check_end_subgroups_equal(spec: &GroupComplexSpec) -> Result<bool> {
    let engine = Engine::new(spec)?;
    Ok(engine.subgroup_sets[0] == engine.subgroup_sets[engine.subgroup_sets.len() - 1])
}

/// `<R_{-1}, ..., R_k>` is the whole group.
pub fn check_generation(spec: &GroupComplexSpec) -> Result<bool> {
    let mut engine = Engine::new(spec)?;
    let full = (1u64 << spec.subgroups.len()) - 1;
    Ok(engine.span(full).count_ones(..) == engine.elements.len())
}

/// For every subchain `Ω` of the base flag, the stabilizer of `Ω` equals
/// `<R_i : F_i ∉ Ω>`.
pub fn verify_subchain_stabilizers(system: &DistinguishedSystem) -> Result<bool> {
    let spec = system.spec();
    let mut engine = Engine::new(&spec)?;
    let positions = system.point_sets.len();
    for omega in 0u64..(1 << positions) {
        let sets: Vec<Vec<u32>> =
            (0..positions).filter(|&p| omega >> p & 1 == 1).map(|p| system.point_sets[p].clone()).collect();
        let stabilizer = system.group.setwise_stabilizer(&sets)?;
        let mut set = FixedBitSet::with_capacity(engine.elements.len());
        for g in stabilizer.elements().expect("enumerated") {
            set.insert(engine.index(g)?);
        }
        let complement = !omega & ((1 << positions) - 1);
        if set != engine.span(complement) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A complex built from cosets, remembering how group elements map to faces.
#[derive(Clone, Debug)]
pub struct CosetComplex {
    pub complex: IncidenceComplex,
    /// `face_of[r + 1][e]`: the `r`-face (as a face id) containing element `e`.
    pub face_of: Vec<Vec<FaceId>>,
    /// One element index per face, whose coset the face is.
    pub representative: Vec<usize>,
}

impl CosetComplex {
    /// The permutation of face ids induced by right multiplication with `g`.
    pub fn action(&self, group: &PermutationGroup, g: &Permutation) -> Result<Permutation> {
        let elements = group.elements().ok_or(Error::RequiresEnumeration)?;
        let images = self
            .complex
            .faces()
            .iter()
            .map(|f| {
                let x = &elements[self.representative[f.id]];
                let y = elements.get_index_of(&(x * g)).ok_or(Error::NotASubgroup { index: 0 })?;
                Ok(self.face_of[(f.rank + 1) as usize][y] as u32)
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }
}

/// Builds the complex whose `i`-faces are the right cosets of
/// `<R_j : j != i>`, ordered by nonempty intersection of cosets.
///
/// With `checked`, the commutation, intersection and `R_{-1} = R_k`
/// conditions are verified first. The result is always validated.
pub fn complex_from_group(spec: &GroupComplexSpec, checked: bool) -> Result<IncidenceComplex> {
    Ok(coset_complex(spec, checked)?.complex)
}

pub fn coset_complex(spec: &GroupComplexSpec, checked: bool) -> Result<CosetComplex> {
    let mut engine = Engine::new(spec)?;
    if checked {
        let commutation = engine.commutation();
        if let Some(&(i, j)) = commutation.failures.first() {
            return Err(Error::PreconditionFailed(format!("commutation: R_{i} R_{j} != R_{j} R_{i}")));
        }
        if let Some((a, b)) = engine.intersection()?.witness {
            return Err(Error::PreconditionFailed(format!("intersection property: fails for I = {a:?}, J = {b:?}")));
        }
        if engine.subgroup_sets[0] != engine.subgroup_sets[engine.subgroup_sets.len() - 1] {
            return Err(Error::PreconditionFailed("R_-1 differs from R_k".into()));
        }
    }
    let positions = spec.subgroups.len();
    let k = positions as i32 - 2;
    let full = (1u64 << positions) - 1;
    let n = engine.elements.len();

    let mut faces: Vec<(i32, Option<Vec<u32>>)> = Vec::new();
    let mut representative = Vec::new();
    let mut face_of: Vec<Vec<FaceId>> = Vec::with_capacity(positions);
    for p in 0..positions {
        let parabolic = engine.span(full & !(1 << p));
        let members: Vec<usize> = parabolic.ones().collect();
        let mut coset = vec![usize::MAX; n];
        for e in 0..n {
            if coset[e] != usize::MAX {
                continue;
            }
            let id = faces.len();
            faces.push((p as i32 - 1, None));
            representative.push(e);
            for &h in &members {
                let x = engine.index(&(&engine.elements[h] * &engine.elements[e]))?;
                coset[x] = id;
            }
        }
        face_of.push(coset);
    }
    let mut covers = BTreeSet::new();
    for p in 0..positions - 1 {
        for (&low, &high) in face_of[p].iter().zip(&face_of[p + 1]) {
            covers.insert((low, high));
        }
    }
    let complex = IncidenceComplex::from_parts(k.max(0) as usize, faces, covers.into_iter().collect())?;
    // Faces were generated rank-major already, so ids are unchanged.
    let report = validate(&complex);
    if !report.is_valid() {
        return Err(Error::PropertyViolation(format!(
            "coset poset is not an incidence complex: {}",
            report.diagnostics.join("; ")
        )));
    }
    Ok(CosetComplex { complex, face_of, representative })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub group_order: u64,
    pub commutation: bool,
    pub intersection: bool,
    pub ends_equal: bool,
    /// The group acts flag-transitively on the rebuilt complex.
    pub rebuilt_flag_transitive: bool,
    pub isomorphic: bool,
}

impl RoundTripReport {
    pub fn passed(&self) -> bool {
        self.commutation && self.intersection && self.ends_equal && self.rebuilt_flag_transitive && self.isomorphic
    }
}

/// Computes the distinguished subgroups of `Aut(K)`, rebuilds a complex
/// from them and compares it with `K`. Vertex-describable complexes use the
/// action on vertices, which keeps the permutation degree small.
pub fn round_trip(complex: &IncidenceComplex, limits: &Limits) -> Result<RoundTripReport> {
    let found = automorphism_search(complex, limits.search_nodes)?;
    let flag = complex.base_flag();
    let system = if complex.is_vertex_describable() {
        let generators = found.generators.iter().map(|g| vertex_action(complex, g)).collect();
        let group = PermutationGroup::closure(complex.vertex_count(), generators, limits.group_order)?;
        distinguished_subgroups_by_vertices(&group, complex, &flag)?
    } else {
        let group = PermutationGroup::closure(complex.len(), found.generators, limits.group_order)?;
        distinguished_subgroups(&group, complex, &flag)?
    };
    let spec = system.spec();
    let mut engine = Engine::new(&spec)?;
    let commutation = engine.commutation().holds;
    let intersection = engine.intersection()?.holds;
    let ends_equal = engine.subgroup_sets[0] == engine.subgroup_sets[engine.subgroup_sets.len() - 1];
    drop(engine);
    let rebuilt = coset_complex(&spec, false)?;
    let on_faces =
        spec.group.generators().iter().map(|g| rebuilt.action(&spec.group, g)).collect::<Result<Vec<_>>>()?;
    let rebuilt_flag_transitive =
        is_flag_transitive(&PermutationGroup::new(rebuilt.complex.len(), on_faces)?, &rebuilt.complex);
    let isomorphic = find_isomorphism(&rebuilt.complex, complex, limits.search_nodes)?.is_some();
    Ok(RoundTripReport {
        group_order: spec.group.order().expect("enumerated"),
        commutation,
        intersection,
        ends_equal,
        rebuilt_flag_transitive,
        isomorphic,
    })
}

/// Group elements indexed by position, with cached right-multiplication
/// tables and subgroup bitsets.
struct Engine<'g> {
    elements: &'g IndexSet<Permutation>,
    identity: usize,
    tables: HashMap<usize, Vec<u32>>,
    subgroup_gens: Vec<Vec<usize>>,
    subgroup_sets: Vec<FixedBitSet>,
    spans: HashMap<u64, FixedBitSet>,
}

impl<'g> Engine<'g> {
    fn new(spec: &'g GroupComplexSpec) -> Result<Self> {
        let elements = spec.group.elements().ok_or(Error::RequiresEnumeration)?;
        if spec.subgroups.len() < 2 || spec.subgroups.len() > 40 {
            return Err(Error::InvalidArgument(format!(
                "need between 2 and 40 subgroups, got {}",
                spec.subgroups.len()
            )));
        }
        let identity = elements
            .get_index_of(&Permutation::identity(spec.group.degree()))
            .ok_or_else(|| Error::PreconditionFailed("group lacks the identity".into()))?;
        let mut engine = Engine {
            elements,
            identity,
            tables: HashMap::new(),
            subgroup_gens: Vec::new(),
            subgroup_sets: Vec::new(),
            spans: HashMap::new(),
        };
        for (pos, sub) in spec.subgroups.iter().enumerate() {
            let mut gens = Vec::new();
            for g in sub.generators() {
                let idx = elements.get_index_of(g).ok_or_else(|| {
                    Error::PreconditionFailed(format!("a generator of R_{} lies outside the group", pos as i32 - 1))
                })?;
                gens.push(idx);
            }
            let set = engine.closure(&gens);
            engine.subgroup_gens.push(gens);
            engine.subgroup_sets.push(set);
        }
        Ok(engine)
    }

    fn index(&self, p: &Permutation) -> Result<usize> {
        self.elements.get_index_of(p).ok_or_else(|| Error::PropertyViolation("product left the group".into()))
    }

    fn table(&mut self, g: usize) -> &[u32] {
        let elements = self.elements;
        self.tables.entry(g).or_insert_with(|| {
            let h = &elements[g];
            elements.iter().map(|e| elements.get_index_of(&(e * h)).expect("group is closed") as u32).collect()
        })
    }

    fn closure(&mut self, gens: &[usize]) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.elements.len());
        set.insert(self.identity);
        let mut queue = vec![self.identity];
        while let Some(e) = queue.pop() {
            for &g in gens {
                let x = self.table(g)[e] as usize;
                if !set.contains(x) {
                    set.insert(x);
                    queue.push(x);
                }
            }
        }
        set
    }

    /// `Γ_I` for `I` given as a bit mask over subgroup positions.
    fn span(&mut self, mask: u64) -> FixedBitSet {
        if mask == 0 {
            return self.subgroup_sets[0].clone();
        }
        if let Some(s) = self.spans.get(&mask) {
            return s.clone();
        }
        let gens: Vec<usize> = (0..self.subgroup_gens.len())
            .filter(|&p| mask >> p & 1 == 1)
            .flat_map(|p| self.subgroup_gens[p].clone())
            .collect();
        let set = self.closure(&gens);
        self.spans.insert(mask, set.clone());
        set
    }

    fn product(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.elements.len());
        let bs: Vec<usize> = b.ones().collect();
        for x in a.ones() {
            for &y in &bs {
                let p = &self.elements[x] * &self.elements[y];
                out.insert(self.elements.get_index_of(&p).expect("group is closed"));
            }
        }
        out
    }

    fn commutation(&self) -> CommutationReport {
        let positions = self.subgroup_sets.len();
        let mut failures = Vec::new();
        for p in 0..positions {
            for q in p + 2..positions {
                let (a, b) = (&self.subgroup_sets[p], &self.subgroup_sets[q]);
                if self.product(a, b) != self.product(b, a) {
                    failures.push((p as i32 - 1, q as i32 - 1));
                }
            }
        }
        CommutationReport { holds: failures.is_empty(), failures }
    }

    fn intersection(&mut self) -> Result<IntersectionReport> {
        let positions = self.subgroup_sets.len();
        if positions > 12 {
            return Err(Error::CapExceeded { what: "intersection-property subsets", cap: 1 << 12 });
        }
        let count = 1u64 << positions;
        let spans: Vec<FixedBitSet> = (0..count).map(|m| self.span(m)).collect();
        let to_indices = |m: u64| (0..positions).filter(|&p| m >> p & 1 == 1).map(|p| p as i32 - 1).collect::<Vec<_>>();
        for a in 0..count {
            for b in a + 1..count {
                let mut meet = spans[a as usize].clone();
                meet.intersect_with(&spans[b as usize]);
                if meet != spans[(a & b) as usize] {
                    return Ok(IntersectionReport { holds: false, witness: Some((to_indices(a), to_indices(b))) });
                }
            }
        }
        Ok(IntersectionReport { holds: true, witness: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::morphism::{are_isomorphic, DEFAULT_SEARCH_BUDGET};
    use crate::perm::DEFAULT_GROUP_CAP;
    use crate::symmetry::automorphism_group;

    fn system(c: &IncidenceComplex) -> DistinguishedSystem {
        let g = automorphism_group(c, DEFAULT_SEARCH_BUDGET, DEFAULT_GROUP_CAP).unwrap();
        distinguished_subgroups(&g, c, &c.base_flag()).unwrap()
    }

    fn perm(degree: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(degree, cycles).unwrap()
    }

    fn group(degree: usize, gens: Vec<Permutation>) -> PermutationGroup {
        PermutationGroup::closure(degree, gens, DEFAULT_GROUP_CAP).unwrap()
    }

    #[test]
    fn cube_system_has_involutory_generators() {
        let s = system(&catalog::cube(3));
        assert_eq!(s.subgroup(-1).order(), Some(1));
        for i in 0..3 {
            assert_eq!(s.subgroup(i).order(), Some(2));
        }
        assert_eq!(s.subgroup(3).order(), Some(1));
        assert_eq!(c_from_indices(&s.spec()).unwrap(), vec![2, 2, 2]);
    }

    #[test]
    fn fano_system() {
        let s = system(&catalog::fano_plane());
        assert_eq!(s.flag_stabilizer.order(), Some(8));
        assert_eq!(s.subgroup(0).order(), Some(24));
        assert_eq!(s.subgroup(1).order(), Some(24));
        assert_eq!(c_from_indices(&s.spec()).unwrap(), vec![3, 3]);
        assert!(check_intersection_property(&s.spec()).unwrap().holds);
        assert!(check_commutation(&s.spec()).unwrap().holds);
    }

    #[test]
    fn edge_system() {
        let s = system(&catalog::edge(5));
        assert_eq!(c_from_indices(&s.spec()).unwrap(), vec![5]);
        assert_eq!(s.subgroup(0).order().unwrap() / s.flag_stabilizer.order().unwrap(), 5);
    }

    #[test]
    fn non_transitive_group_is_refused() {
        let cube = catalog::cube(3);
        let err =
            distinguished_subgroups(&PermutationGroup::trivial(cube.len()), &cube, &cube.base_flag()).unwrap_err();
        assert_eq!(err, Error::NotFlagTransitive);
    }

    #[test]
    fn cube_generators_commute_elementwise() {
        let s = system(&catalog::cube(3));
        let a = &s.subgroup(0).generators()[0];
        let b = &s.subgroup(2).generators()[0];
        assert_eq!(a * b, b * a);
    }

    #[test]
    fn catalog_systems_satisfy_all_conditions() {
        for entry in catalog::entries().iter().filter(|e| !e.negative) {
            let c = entry.build();
            if c.len() > 200 {
                continue;
            }
            let s = system(&c);
            let spec = s.spec();
            assert!(check_commutation(&spec).unwrap().holds, "{}", entry.name);
            assert!(check_intersection_property(&spec).unwrap().holds, "{}", entry.name);
            assert!(check_end_subgroups_equal(&spec).unwrap());
            assert!(check_generation(&spec).unwrap());
            assert!(verify_subchain_stabilizers(&s).unwrap(), "{}", entry.name);
            assert_eq!(Some(c_from_indices(&spec).unwrap()), entry.expected.c_vector, "{}", entry.name);
            let rebuilt = coset_complex(&spec, true).unwrap();
            assert!(are_isomorphic(&rebuilt.complex, &c, DEFAULT_SEARCH_BUDGET).unwrap(), "{}", entry.name);
            let action = PermutationGroup::new(
                rebuilt.complex.len(),
                s.group.generators().iter().map(|g| rebuilt.action(&s.group, g).unwrap()).collect(),
            )
            .unwrap();
            assert!(is_flag_transitive(&action, &rebuilt.complex), "{}", entry.name);
        }
    }

    #[test]
    fn three_edge_from_symmetric_group() {
        let s3 = group(3, vec![perm(3, &[&[0, 1]]), perm(3, &[&[0, 1, 2]])]);
        let spec = GroupComplexSpec {
            group: s3.clone(),
            subgroups: vec![group(3, vec![perm(3, &[&[1, 2]])]), s3, group(3, vec![perm(3, &[&[1, 2]])])],
        };
        let c = complex_from_group(&spec, true).unwrap();
        assert_eq!(c.rank(), 1);
        assert_eq!(c.f_vector(), vec![3]);
    }

    #[test]
    fn klein_group_with_equal_subgroups_fails_intersection() {
        let a = perm(4, &[&[0, 1], &[2, 3]]);
        let b = perm(4, &[&[0, 2], &[1, 3]]);
        let v4 = group(4, vec![a, b]);
        let trivial = PermutationGroup::trivial(4);
        let spec = GroupComplexSpec { group: v4.clone(), subgroups: vec![trivial.clone(), v4.clone(), v4, trivial] };
        let report = check_intersection_property(&spec).unwrap();
        assert!(!report.holds);
        assert!(report.witness.is_some());
        assert!(matches!(complex_from_group(&spec, true), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn corrupted_commutation_in_s4() {
        // S_4 as the tetrahedron group with R_2 replaced by a transposition
        // that fails to commute with R_0 at the level of sets.
        let t = |a, b| perm(4, &[&[a, b]]);
        let s4 = group(4, vec![t(0, 1), t(1, 2), t(2, 3)]);
        let trivial = PermutationGroup::trivial(4);
        let good = GroupComplexSpec {
            group: s4.clone(),
            subgroups: vec![
                trivial.clone(),
                group(4, vec![t(0, 1)]),
                group(4, vec![t(1, 2)]),
                group(4, vec![t(2, 3)]),
                trivial.clone(),
            ],
        };
        assert!(check_commutation(&good).unwrap().holds);
        let mut bad = good.clone();
        bad.subgroups[3] = group(4, vec![t(1, 3)]);
        let report = check_commutation(&bad).unwrap();
        assert!(!report.holds);
        assert_eq!(report.failures, vec![(0, 2)]);
    }

    #[test]
    fn unchecked_bad_input_still_fails_validation() {
        let a = perm(4, &[&[0, 1], &[2, 3]]);
        let b = perm(4, &[&[0, 2], &[1, 3]]);
        let v4 = group(4, vec![a, b]);
        let trivial = PermutationGroup::trivial(4);
        let spec = GroupComplexSpec { group: v4.clone(), subgroups: vec![trivial.clone(), v4.clone(), v4, trivial] };
        assert!(complex_from_group(&spec, false).is_err());
    }

    #[test]
    fn product_form_matches_intersection_form() {
        // F_i φ <= F_j ψ iff the cosets meet, iff φ ψ^-1 lies in
        // Γ_{i+1..k} Γ_{-1..j-1}.
        for c in [catalog::cube(3), catalog::fano_plane(), catalog::edge(4)] {
            let s = system(&c);
            let spec = s.spec();
            let rebuilt = coset_complex(&spec, true).unwrap();
            let mut engine = Engine::new(&spec).unwrap();
            let positions = spec.subgroups.len();
            let elements = s.group.elements().unwrap();
            let n = elements.len();
            for pi in 0..positions {
                for pj in pi..positions {
                    let upper: u64 = ((pi + 1)..positions).map(|p| 1u64 << p).sum();
                    let lower: u64 = (0..pj).map(|p| 1u64 << p).sum();
                    let (a, b) = (engine.span(upper), engine.span(lower));
                    let product = engine.product(&a, &b);
                    for x in (0..n).step_by(3) {
                        for y in (0..n).step_by(5) {
                            let fx = rebuilt.face_of[pi][x];
                            let fy = rebuilt.face_of[pj][y];
                            let rel = elements[x].then(&elements[y].inverse());
                            let idx = elements.get_index_of(&rel).unwrap();
                            assert_eq!(rebuilt.complex.leq(fx, fy), product.contains(idx));
                        }
                    }
                }
            }
        }
    }
}
