//! Power complexes `n^K` and the wreath-product action on them.
//!
//! A vertex `ε ∈ {0, .., n-1}^v` is encoded as the integer `Σ ε_i n^i`, and
//! the vertex with that code has vertex index `code`. A face `F(ε)` is keyed
//! by the face `F` of the base complex and `ε` with the coordinates in `F`
//! zeroed.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::complex::{FaceId, Flag, IncidenceComplex};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::morphism::find_isomorphism;
use crate::perm::{Permutation, PermutationGroup};
use crate::regular::{c_from_indices, distinguished_subgroups, DistinguishedSystem};
use crate::symmetry::{automorphism_group, is_flag_transitive, lift_vertex_permutation, vertex_action};

#[derive(Clone, Debug)]
pub struct PowerComplex {
    n: usize,
    powers: Vec<usize>,
    base_vertices: Vec<Vec<u32>>,
    complex: IncidenceComplex,
    base_face: Vec<Option<FaceId>>,
    index: HashMap<(FaceId, usize), FaceId>,
}

impl PowerComplex {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of vertices of the base complex.
    pub fn v(&self) -> usize {
        self.powers.len()
    }

    pub fn complex(&self) -> &IncidenceComplex {
        &self.complex
    }

    pub fn into_complex(self) -> IncidenceComplex {
        self.complex
    }

    /// The base-complex face `F` of a face `F(ε)`; `None` for the least face.
    pub fn base_face(&self, id: FaceId) -> Option<FaceId> {
        self.base_face[id]
    }

    pub fn encode(&self, coordinates: &[u32]) -> usize {
        coordinates.iter().zip(&self.powers).map(|(&e, &p)| e as usize * p).sum()
    }

    pub fn decode(&self, code: usize) -> Vec<u32> {
        self.powers.iter().map(|&p| (code / p % self.n) as u32).collect()
    }

    pub fn digit(&self, code: usize, i: usize) -> usize {
        code / self.powers[i] % self.n
    }

    /// `ε` with the coordinates of the base face's vertices set to zero.
    pub fn anchor(&self, base_face: FaceId, code: usize) -> usize {
        self.base_vertices[base_face].iter().fold(code, |c, &i| c - self.digit(c, i as usize) * self.powers[i as usize])
    }

    /// The face `F(ε)` for `F` a face of the base complex and `ε` given by code.
    pub fn face(&self, base_face: FaceId, code: usize) -> FaceId {
        self.index[&(base_face, self.anchor(base_face, code))]
    }

    /// The code of `(n-1, ..., n-1)`.
    pub fn top_vertex_code(&self) -> usize {
        self.n.pow(self.v() as u32) - 1
    }

    /// The flag `{∅, ε, F_0(ε), ..., F_k(ε)}` over a flag of the base complex.
    pub fn flag_over(&self, base_flag: &Flag, code: usize) -> Flag {
        let mut faces = vec![self.complex.least()];
        faces.extend(base_flag.faces().iter().map(|&f| self.face(f, code)));
        Flag::new(faces)
    }
}

/// Codes of all `ε` that are zero on `fixed`, ascending.
fn anchors(n: usize, powers: &[usize], fixed: &[u32]) -> Vec<usize> {
    let free: Vec<usize> = (0..powers.len()).filter(|i| fixed.binary_search(&(*i as u32)).is_err()).collect();
    let count = n.pow(free.len() as u32);
    let mut out = Vec::with_capacity(count);
    let mut digits = vec![0usize; free.len()];
    let mut code = 0usize;
    for _ in 0..count {
        out.push(code);
        for (d, &pos) in digits.iter_mut().zip(&free) {
            *d += 1;
            code += powers[pos];
            if *d < n {
                break;
            }
            *d = 0;
            code -= n * powers[pos];
        }
    }
    out
}

/// Builds `n^K`.
pub fn power_complex(n: usize, base: &IncidenceComplex, vertex_cap: usize) -> Result<PowerComplex> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    if base.rank() < 1 {
        return Err(Error::PreconditionFailed("base complex needs rank at least 1".into()));
    }
    if !base.is_vertex_describable() {
        return Err(Error::NotVertexDescribable);
    }
    let v = base.vertex_count();
    let cap_err = Error::CapExceeded { what: "power complex vertices", cap: vertex_cap };
    let total = (n as u128).checked_pow(v as u32).ok_or(cap_err.clone())?;
    if total > vertex_cap as u128 {
        return Err(cap_err);
    }
    let powers: Vec<usize> = (0..v).map(|i| n.pow(i as u32)).collect();
    let base_vertices: Vec<Vec<u32>> = base.faces().iter().map(|f| f.vertices.clone()).collect();

    let mut faces: Vec<(i32, Option<Vec<u32>>)> = vec![(-1, Some(Vec::new()))];
    let mut base_face = vec![None];
    let mut index = HashMap::new();
    let mut face_anchors: Vec<Vec<usize>> = Vec::with_capacity(base.len());
    for f in base.faces() {
        let list = anchors(n, &powers, &f.vertices);
        for &a in &list {
            index.insert((f.id, a), faces.len());
            faces.push((f.rank + 1, None));
            base_face.push(Some(f.id));
        }
        face_anchors.push(list);
    }
    let mut covers = Vec::new();
    for &a in &face_anchors[base.least()] {
        covers.push((0, index[&(base.least(), a)]));
    }
    let mut result = PowerComplex {
        n,
        powers,
        base_vertices,
        complex: IncidenceComplex::from_parts(0, vec![(-1, None), (0, None)], vec![(0, 1)])?,
        base_face,
        index,
    };
    for (lo, hi) in base.covers() {
        for &a in &face_anchors[lo] {
            covers.push((result.index[&(lo, a)], result.face(hi, a)));
        }
    }
    result.complex = IncidenceComplex::from_parts(base.rank() + 1, faces, covers)?;
    Ok(result)
}

/// Face counts of `n^K` by rank, from the counting formula alone: rank `j`
/// has `Σ n^(v - |F|)` faces, summed over the `(j-1)`-faces `F` of `K`.
pub fn face_count_formula(n: u64, base: &IncidenceComplex) -> Result<Vec<u128>> {
    let v = base.vertex_count() as u32;
    let overflow = || Error::InvalidArgument("face count overflows".into());
    (0..=base.rank() as i32)
        .map(|j| {
            base.faces_of_rank(j - 1).try_fold(0u128, |acc, f| {
                let size = base.face(f).vertices.len() as u32;
                let term = (n as u128).checked_pow(v - size).ok_or_else(overflow)?;
                acc.checked_add(term).ok_or_else(overflow)
            })
        })
        .collect()
}

fn powers_of(n: usize, v: usize) -> Vec<usize> {
    (0..v).map(|i| n.pow(i as u32)).collect()
}

/// `ε ↦ ε` with coordinate `i` replaced by `(ε_i)u`.
pub fn coordinate_permutation(n: usize, v: usize, i: usize, u: &Permutation) -> Permutation {
    let mut sigma: Vec<Permutation> = vec![Permutation::identity(n); v];
    sigma[i] = u.clone();
    coordinatewise(n, &sigma)
}

/// `ε ↦ ((ε_1)σ_1, ..., (ε_v)σ_v)`.
pub fn coordinatewise(n: usize, sigma: &[Permutation]) -> Permutation {
    let v = sigma.len();
    let powers = powers_of(n, v);
    let total = n.pow(v as u32);
    let images = (0..total)
        .map(|code| {
            (0..v).map(|i| sigma[i].apply((code / powers[i] % n) as u32) as usize * powers[i]).sum::<usize>() as u32
        })
        .collect();
    Permutation::from_images_unchecked(images)
}

/// The permutation of `N^v` induced by a vertex permutation `φ` of the base
/// complex: coordinate `i` of `ε` moves to position `(i)φ`.
pub fn lift_base_permutation(n: usize, phi: &Permutation) -> Permutation {
    let v = phi.degree();
    let powers = powers_of(n, v);
    let total = n.pow(v as u32);
    let images = (0..total)
        .map(|code| (0..v).map(|i| (code / powers[i] % n) * powers[phi.apply(i as u32) as usize]).sum::<usize>() as u32)
        .collect();
    Permutation::from_images_unchecked(images)
}

/// An element `σφ` of `S_n ≀ Γ(K)`: first `σ` coordinatewise, then `φ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WreathElement {
    pub coordinates: Vec<Permutation>,
    pub base: Permutation,
}

impl WreathElement {
    pub fn vertex_permutation(&self, n: usize) -> Permutation {
        coordinatewise(n, &self.coordinates).then(&lift_base_permutation(n, &self.base))
    }
}

/// `U ≀ Λ` acting on the vertex codes of `n^K`, enumerated. `u` acts on
/// `{0, .., n-1}`, `lambda` on the face ids of `K`.
pub fn wreath_group(
    n: usize,
    u: &PermutationGroup,
    base: &IncidenceComplex,
    lambda: &PermutationGroup,
    cap: usize,
) -> Result<PermutationGroup> {
    if u.degree() != n {
        return Err(Error::DegreeMismatch { expected: n, got: u.degree() });
    }
    if !u.is_transitive() {
        return Err(Error::NotTransitive { degree: n });
    }
    if !is_flag_transitive(lambda, base) {
        return Err(Error::NotFlagTransitive);
    }
    let v = base.vertex_count();
    let mut generators = Vec::new();
    for g in u.generators() {
        for i in 0..v {
            generators.push(coordinate_permutation(n, v, i, g));
        }
    }
    for g in lambda.generators() {
        generators.push(lift_base_permutation(n, &vertex_action(base, g)));
    }
    PermutationGroup::closure(n.pow(v as u32), generators, cap)
}

/// Lifts permutations of vertex codes to face ids of the power complex.
pub fn lift_to_faces(power: &PowerComplex, group: &PermutationGroup, cap: usize) -> Result<PermutationGroup> {
    let generators =
        group.generators().iter().map(|g| lift_vertex_permutation(power.complex(), g)).collect::<Result<Vec<_>>>()?;
    let lifted = PermutationGroup::new(power.complex().len(), generators)?;
    if group.is_enumerated() {
        lifted.enumerated(cap)
    } else {
        Ok(lifted)
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerAutReport {
    pub n: usize,
    pub v: usize,
    pub base_order: u64,
    /// `(n!)^v · |Aut(K)|`.
    pub expected_order: u128,
    pub found_order: u128,
    pub elements_checked: usize,
    /// Every automorphism split as `σφ` with `σ` coordinatewise and `φ ∈ Aut(K)`.
    pub decomposed: bool,
    pub failure: Option<String>,
}

impl PowerAutReport {
    pub fn passed(&self) -> bool {
        self.found_order == self.expected_order && self.decomposed
    }
}

/// Splits an automorphism of `n^K` (given on vertex codes and on faces)
/// into `σφ`. `φ` is read off from where the edges at the zero vertex go.
pub fn decompose(power: &PowerComplex, base: &IncidenceComplex, on_faces: &Permutation) -> Option<WreathElement> {
    let n = power.n();
    let v = power.v();
    let on_vertices = vertex_action(power.complex(), on_faces);
    let images = (0..v as u32)
        .map(|i| {
            let edge = power.face(base.vertex_face(i), 0);
            let image = on_faces.apply(edge as u32) as FaceId;
            power.base_face(image).map(|f| base.vertex_index(f))
        })
        .collect::<Option<Vec<u32>>>()?;
    let phi = Permutation::from_images(images).ok()?;
    let sigma_total = on_vertices.then(&lift_base_permutation(n, &phi).inverse());
    let sigma = (0..v)
        .map(|i| {
            let images = (0..n)
                .map(|x| power.digit(sigma_total.apply((x * power.powers[i]) as u32) as usize, i) as u32)
                .collect();
            Permutation::from_images(images).ok()
        })
        .collect::<Option<Vec<_>>>()?;
    let element = WreathElement { coordinates: sigma, base: phi };
    (element.vertex_permutation(n) == on_vertices).then_some(element)
}

/// Brute-force check that `Aut(n^K)` is `S_n ≀ Aut(K)`: compares orders and
/// splits every automorphism as `σφ`.
pub fn verify_power_aut(n: usize, base: &IncidenceComplex, limits: &Limits) -> Result<PowerAutReport> {
    let power = power_complex(n, base, limits.vertices)?;
    let aut_base = automorphism_group(base, limits.search_nodes, limits.group_order)?;
    let base_elements =
        aut_base.elements().ok_or(Error::CapExceeded { what: "base automorphism group", cap: limits.group_order })?;
    let base_vertex_perms: HashSet<Permutation> = base_elements.iter().map(|g| vertex_action(base, g)).collect();
    let aut = automorphism_group(power.complex(), limits.search_nodes, limits.group_order)?;
    let elements = aut
        .elements()
        .ok_or(Error::CapExceeded { what: "power complex automorphism group", cap: limits.group_order })?;
    let v = base.vertex_count();
    let base_order = base_elements.len() as u64;
    let mut failure = None;
    for theta in elements {
        match decompose(&power, base, theta) {
            Some(w) if base_vertex_perms.contains(&w.base) => {}
            Some(_) => {
                failure = Some(format!("{theta:?}: base part is not an automorphism of K"));
                break;
            }
            None => {
                failure = Some(format!("{theta:?}: no coordinatewise decomposition"));
                break;
            }
        }
    }
    Ok(PowerAutReport {
        n,
        v,
        base_order,
        expected_order: factorial(n).pow(v as u32) * base_order as u128,
        found_order: elements.len() as u128,
        elements_checked: elements.len(),
        decomposed: failure.is_none(),
        failure,
    })
}

fn symmetric_generators(points: &[u32], degree: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    if points.len() >= 2 {
        out.push(Permutation::from_cycles(degree, &[&points[..2]]).expect("valid points"));
    }
    if points.len() >= 3 {
        out.push(Permutation::from_cycles(degree, &[points]).expect("valid points"));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerSystemReport {
    /// `|R̂_i|` for `i = -1..=k+1`, from stabilizers in `Aut(n^K)`.
    pub orders: Vec<u64>,
    /// Whether each `R̂_i` equals its formula group as a set of automorphisms.
    /// `R̂_0` is compared with `(S_n × S_{n-1}^{v-1}) ⋉ R_{-1}`.
    pub formula_matches: Vec<bool>,
    /// `n! · ((n-1)!)^(v-1) · |R_{-1}|`.
    pub r0_order_v_minus_1: u128,
    /// `n! · ((n-1)!)^v · |R_{-1}|`, the variant with `v` factors of `S_{n-1}`.
    pub r0_order_v: u128,
    pub r0_matches_v_minus_1: bool,
    pub r0_matches_v: bool,
    pub c_vector: Vec<usize>,
    /// `(n, c_0(K), ..., c_{k-1}(K))`.
    pub expected_c_vector: Vec<usize>,
}

impl PowerSystemReport {
    pub fn passed(&self) -> bool {
        self.formula_matches.iter().all(|&m| m) && self.c_vector == self.expected_c_vector
    }
}

/// Computes the distinguished subgroups of `Aut(n^K)` at the base flag over
/// the vertex `(n-1, ..., n-1)` as stabilizers, and compares each with the
/// wreath-product formula built from `K`'s own subgroups.
pub fn power_distinguished_subgroups(
    n: usize,
    base: &IncidenceComplex,
    limits: &Limits,
) -> Result<(DistinguishedSystem, PowerSystemReport)> {
    let power = power_complex(n, base, limits.vertices)?;
    let v = base.vertex_count();
    let k = base.rank() as i32;
    let aut_base = automorphism_group(base, limits.search_nodes, limits.group_order)?;
    if !aut_base.is_enumerated() {
        return Err(Error::CapExceeded { what: "base automorphism group", cap: limits.group_order });
    }
    let base_flag = base.base_flag();
    let base_system = distinguished_subgroups(&aut_base, base, &base_flag)?;
    let aut = automorphism_group(power.complex(), limits.search_nodes, limits.group_order)?;
    if !aut.is_enumerated() {
        return Err(Error::CapExceeded { what: "power complex automorphism group", cap: limits.group_order });
    }
    let top = power.top_vertex_code();
    let flag = power.flag_over(&base_flag, top);
    let system = distinguished_subgroups(&aut, power.complex(), &flag)?;

    let all_but_top: Vec<u32> = (0..n as u32 - 1).collect();
    let everything: Vec<u32> = (0..n as u32).collect();
    let stabilizing_top: Vec<Permutation> = (0..v)
        .flat_map(|i| {
            symmetric_generators(&all_but_top, n).into_iter().map(move |g| coordinate_permutation(n, v, i, &g))
        })
        .collect();
    let lifted = |group: &PermutationGroup| -> Vec<Permutation> {
        group.generators().iter().map(|g| lift_base_permutation(n, &vertex_action(base, g))).collect()
    };
    let first_vertex = base.vertex_index(base_flag.face(0)) as usize;
    let mut formulas: Vec<Vec<Permutation>> = Vec::new();
    for i in -1..=k + 1 {
        let mut gens = stabilizing_top.clone();
        match i {
            -1 => gens.extend(lifted(base_system.subgroup(-1))),
            0 => {
                gens.extend(
                    symmetric_generators(&everything, n)
                        .into_iter()
                        .map(|g| coordinate_permutation(n, v, first_vertex, &g)),
                );
                gens.extend(lifted(base_system.subgroup(-1)));
            }
            _ if i == k + 1 => gens.extend(lifted(base_system.subgroup(-1))),
            _ => gens.extend(lifted(base_system.subgroup(i - 1))),
        }
        formulas.push(gens);
    }
    let mut formula_matches = Vec::new();
    for (pos, gens) in formulas.iter().enumerate() {
        let on_faces = gens.iter().map(|g| lift_vertex_permutation(power.complex(), g)).collect::<Result<Vec<_>>>()?;
        let group = PermutationGroup::closure(power.complex().len(), on_faces, limits.group_order)?;
        let found = system.subgroups[pos].elements().expect("stabilizers are enumerated");
        let formula = group.elements().expect("closure enumerates");
        formula_matches.push(formula.len() == found.len() && formula.iter().all(|g| found.contains(g)));
    }

    let r_minus_1 = base_system.subgroup(-1).order().expect("enumerated") as u128;
    let r0_order_v_minus_1 = factorial(n) * factorial(n - 1).pow(v as u32 - 1) * r_minus_1;
    let r0_order_v = factorial(n) * factorial(n - 1).pow(v as u32) * r_minus_1;
    let r0 = system.subgroup(0).order().expect("enumerated") as u128;
    let orders = system.subgroups.iter().map(|g| g.order().expect("enumerated")).collect();
    let c_vector = c_from_indices(&system.spec())?;
    let mut expected_c_vector = vec![n];
    expected_c_vector.extend(c_from_indices(&base_system.spec())?);
    let report = PowerSystemReport {
        orders,
        formula_matches,
        r0_order_v_minus_1,
        r0_order_v,
        r0_matches_v_minus_1: r0 == r0_order_v_minus_1,
        r0_matches_v: r0 == r0_order_v,
        c_vector,
        expected_c_vector,
    };
    Ok((system, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SkeletonIdentityReport {
    /// Both sides have the same faces, as vertex sets by rank.
    pub same_face_sets: bool,
    pub isomorphic: bool,
}

impl SkeletonIdentityReport {
    pub fn passed(&self) -> bool {
        self.same_face_sets && self.isomorphic
    }
}

fn face_sets(c: &IncidenceComplex) -> BTreeSet<(i32, Vec<u32>)> {
    let top = c.greatest();
    c.faces().iter().filter(|f| f.id != top).map(|f| (f.rank, f.vertices.clone())).collect()
}

/// Compares `skel_{j+1}(n^K)` with `n^{skel_j(K)}`.
pub fn verify_skeleton_identity(
    n: usize,
    base: &IncidenceComplex,
    j: i32,
    limits: &Limits,
) -> Result<SkeletonIdentityReport> {
    if j < 0 || j >= base.rank() as i32 {
        return Err(Error::RankOutOfRange { rank: j as i64, min: 0, max: base.rank() as i64 - 1 });
    }
    let left = power_complex(n, base, limits.vertices)?.into_complex().skeleton(j + 1)?;
    let right = power_complex(n, &base.skeleton(j)?, limits.vertices)?.into_complex();
    Ok(SkeletonIdentityReport {
        same_face_sets: face_sets(&left) == face_sets(&right),
        isomorphic: find_isomorphism(&left, &right, limits.search_nodes)?.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::morphism::{are_isomorphic, is_automorphism};
    use crate::validate::validate;

    fn limits() -> Limits {
        Limits::default()
    }

    fn power(n: usize, k: &IncidenceComplex) -> PowerComplex {
        power_complex(n, k, 1 << 20).unwrap()
    }

    /// Faces of `n^K` straight from the definition: the vertex sets of all
    /// `F(ε)`, with order by inclusion.
    fn power_by_definition(n: usize, k: &IncidenceComplex) -> IncidenceComplex {
        let v = k.vertex_count();
        let total = n.pow(v as u32);
        let digit = |code: usize, i: usize| code / n.pow(i as u32) % n;
        let mut middle: Vec<Vec<Vec<u32>>> = vec![Vec::new(); k.rank()];
        for rank in 0..k.rank() as i32 {
            for f in k.faces_of_rank(rank) {
                let inside = &k.face(f).vertices;
                for eps in 0..total {
                    let set: Vec<u32> = (0..total)
                        .filter(|&eta| (0..v).all(|i| inside.contains(&(i as u32)) || digit(eta, i) == digit(eps, i)))
                        .map(|x| x as u32)
                        .collect();
                    middle[rank as usize].push(set);
                }
            }
        }
        IncidenceComplex::from_vertex_sets(k.rank() + 1, total, middle).unwrap()
    }

    #[test]
    fn cube_is_power_of_triangle() {
        let p = power(2, &catalog::simplex(2));
        assert_eq!(p.complex().f_vector(), vec![8, 12, 6]);
        assert!(are_isomorphic(p.complex(), &catalog::cube(3), 1_000_000).unwrap());
    }

    #[test]
    fn matches_definition() {
        for (n, k) in
            [(2, catalog::simplex(2)), (3, catalog::edge(2)), (2, catalog::fano_plane()), (3, catalog::polygon(4))]
        {
            let built = power(n, &k).into_complex();
            let oracle = power_by_definition(n, &k);
            assert_eq!(face_sets(&built), face_sets(&oracle));
            assert_eq!(built.cover_count(), oracle.cover_count());
        }
    }

    #[test]
    fn edge_power_is_cube_skeleton() {
        let n = 3;
        let v = 4;
        let p = power(n, &catalog::edge(v));
        assert_eq!(p.complex().f_vector(), vec![81, 4 * 27]);
    }

    #[test]
    fn fano_power_counts() {
        let p = power(2, &catalog::fano_plane());
        assert_eq!(p.complex().f_vector(), vec![128, 448, 112]);
        assert!(validate(p.complex()).is_valid());
    }

    #[test]
    fn formula_matches_construction() {
        for (n, k) in [(2, catalog::fano_plane()), (3, catalog::fano_plane()), (2, catalog::cross_polytope4())] {
            let formula = face_count_formula(n as u64, &k).unwrap();
            let built: Vec<u128> = power(n, &k).complex().f_vector().into_iter().map(|x| x as u128).collect();
            assert_eq!(formula, built);
        }
        assert_eq!(face_count_formula(2, &catalog::cross_polytope4()).unwrap(), vec![256, 1024, 1536, 1024, 256]);
    }

    #[test]
    fn refuses_bad_input() {
        assert_eq!(power_complex(2, &catalog::digon(), 100).unwrap_err(), Error::NotVertexDescribable);
        assert!(matches!(power_complex(2, &catalog::fano_plane(), 100), Err(Error::CapExceeded { .. })));
        assert!(matches!(power_complex(1, &catalog::edge(2), 100), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn flags_and_vertex_figures() {
        for (n, k) in [(2, catalog::fano_plane()), (3, catalog::edge(3)), (2, catalog::moebius_kantor())] {
            let p = power(n, &k);
            let c = p.complex();
            let v = k.vertex_count() as u32;
            assert_eq!(c.flag_count(), (n as u128).pow(v) * k.flag_count());
            for code in [0usize, 1, n.pow(v) - 1] {
                let figure = c.section(c.vertex_face(code as u32), c.greatest()).unwrap();
                assert!(are_isomorphic(&figure, &k, 1_000_000).unwrap());
            }
        }
    }

    #[test]
    fn faces_are_smaller_powers() {
        let k = catalog::cross_polytope4();
        let p = power(2, &k);
        for rank in 1..k.rank() as i32 {
            let f = k.faces_of_rank(rank).start;
            let face = p.face(f, 0);
            let section = p.complex().section(p.complex().least(), face).unwrap();
            let smaller = power(2, &k.section(k.least(), f).unwrap());
            assert!(are_isomorphic(&section, smaller.complex(), 1_000_000).unwrap());
        }
    }

    #[test]
    fn wreath_group_orders_and_transitivity() {
        let c2 = PermutationGroup::closure(2, vec![Permutation::from_cycles(2, &[&[0, 1]]).unwrap()], 10).unwrap();
        let c3 = PermutationGroup::closure(3, vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()], 10).unwrap();
        let triangle = catalog::simplex(2);
        let aut_t = automorphism_group(&triangle, 1_000_000, 1000).unwrap();
        let g = wreath_group(2, &c2, &triangle, &aut_t, 1000).unwrap();
        assert_eq!(g.order(), Some(48));
        let p = power(2, &triangle);
        assert!(is_flag_transitive(&lift_to_faces(&p, &g, 1000).unwrap(), p.complex()));

        let edge = catalog::edge(2);
        let aut_e = automorphism_group(&edge, 1_000_000, 1000).unwrap();
        let g = wreath_group(3, &c3, &edge, &aut_e, 1000).unwrap();
        assert_eq!(g.order(), Some(18));
        let p = power(3, &edge);
        assert!(is_flag_transitive(&lift_to_faces(&p, &g, 1000).unwrap(), p.complex()));

        let trivial_u = PermutationGroup::trivial(3);
        assert_eq!(wreath_group(3, &trivial_u, &edge, &aut_e, 1000).unwrap_err(), Error::NotTransitive { degree: 3 });
        let trivial_l = PermutationGroup::trivial(edge.len());
        assert_eq!(wreath_group(3, &c3, &edge, &trivial_l, 1000).unwrap_err(), Error::NotFlagTransitive);
    }

    #[test]
    fn full_wreath_group_acts_by_automorphisms() {
        let k = catalog::fano_plane();
        let aut_k = automorphism_group(&k, 1_000_000, 1000).unwrap();
        let s2 = PermutationGroup::closure(2, vec![Permutation::from_cycles(2, &[&[0, 1]]).unwrap()], 10).unwrap();
        let p = power(2, &k);
        let v = k.vertex_count();
        let mut gens: Vec<Permutation> = (0..v).map(|i| coordinate_permutation(2, v, i, &s2.generators()[0])).collect();
        gens.extend(aut_k.generators().iter().map(|g| lift_base_permutation(2, &vertex_action(&k, g))));
        for g in gens {
            let on_faces = lift_vertex_permutation(p.complex(), &g).unwrap();
            assert!(is_automorphism(p.complex(), on_faces.images()));
        }
    }

    #[test]
    fn lift_is_a_homomorphism() {
        let a = Permutation::from_cycles(4, &[&[0, 1, 2]]).unwrap();
        let b = Permutation::from_cycles(4, &[&[1, 3]]).unwrap();
        assert_eq!(
            lift_base_permutation(3, &a.then(&b)),
            lift_base_permutation(3, &a).then(&lift_base_permutation(3, &b))
        );
    }

    #[test]
    fn power_aut_small_cases() {
        for (n, k, order) in [(2, catalog::edge(2), 8u128), (3, catalog::edge(2), 72), (2, catalog::simplex(2), 48)] {
            let report = verify_power_aut(n, &k, &limits()).unwrap();
            assert_eq!(report.found_order, order);
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn distinguished_subgroups_of_powers() {
        let (_, r) = power_distinguished_subgroups(3, &catalog::edge(2), &limits()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.orders[0], 4);
        assert_eq!(r.orders[1], 12);
        assert_eq!(r.c_vector, vec![3, 2]);
        assert!(r.r0_matches_v_minus_1);
        assert!(!r.r0_matches_v);

        let (_, r) = power_distinguished_subgroups(2, &catalog::simplex(2), &limits()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.orders[1], 2);
        assert_eq!(r.c_vector, vec![2, 2, 2]);
        let (_, r) = power_distinguished_subgroups(2, &catalog::fano_plane(), &limits()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.c_vector, vec![2, 3, 3]);
    }

    #[test]
    fn skeleton_identity() {
        for (n, k, j) in [
            (2, catalog::simplex(2), 0),
            (3, catalog::simplex(1), 0),
            (2, catalog::fano_plane(), 0),
            (2, catalog::simplex(3), 1),
        ] {
            assert!(verify_skeleton_identity(n, &k, j, &limits()).unwrap().passed());
        }
    }
}
