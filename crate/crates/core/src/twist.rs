//! Regular complexes built by twisting: `n^K` recovered from `C_n ≀ Λ`, and
//! generalized power complexes `L^K` from the Coxeter group of a merged
//! diagram extended by `Λ`.

use serde::Serialize;

use crate::complex::IncidenceComplex;
use crate::coxeter::{regular_representation, CosetTable, CoxeterDiagram};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::morphism::{find_isomorphism, is_automorphism};
use crate::perm::{Permutation, PermutationGroup};
use crate::power::{coordinate_permutation, lift_base_permutation, power_complex};
use crate::regular::{complex_from_group, distinguished_subgroups, DistinguishedSystem, GroupComplexSpec};
use crate::symmetry::{automorphism_group, vertex_action};

/// A complex rebuilt from a group `W ⋊ Λ` and its distinguished subgroups.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub spec: GroupComplexSpec,
    pub complex: IncidenceComplex,
    /// Generators of `R̂_0, ..., R̂_{d-1}` (each together with `R_{-1}`).
    pub string_generators: Vec<Permutation>,
    /// `|W|`.
    pub kernel_order: u64,
    /// `|Λ|`.
    pub base_order: u64,
}

impl TwistedComplex {
    pub fn group(&self) -> &PermutationGroup {
        &self.spec.group
    }

    pub fn group_order(&self) -> u64 {
        self.spec.group.order().expect("enumerated")
    }

    /// Each string generator `i` commutes with every element of `R̂_j` for `|i - j| >= 2`.
    pub fn elementwise_commutation(&self, cap: usize) -> Result<bool> {
        let top = self.spec.subgroups.len() as i32 - 2;
        for (i, generator) in self.string_generators.iter().enumerate() {
            for j in 0..top {
                if (i as i32 - j).abs() < 2 {
                    continue;
                }
                let sub = &self.spec.subgroups[(j + 1) as usize];
                let sub = PermutationGroup::closure(sub.degree(), sub.generators().to_vec(), cap)?;
                if sub.elements().expect("enumerated").iter().any(|g| generator.then(g) != g.then(generator)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The distinguished subgroups of `Λ` (default `Aut(K)`) on the face ids of `K`.
pub fn base_system(
    base: &IncidenceComplex,
    lambda: Option<&PermutationGroup>,
    limits: &Limits,
) -> Result<DistinguishedSystem> {
    let group = match lambda {
        None => automorphism_group(base, limits.search_nodes, limits.group_order)?,
        Some(l) => {
            if l.degree() != base.len() {
                return Err(Error::DegreeMismatch { expected: base.len(), got: l.degree() });
            }
            if let Some(g) = l.generators().iter().find(|g| !is_automorphism(base, g.images())) {
                return Err(Error::InvalidArgument(format!("{g:?} is not an automorphism of the base complex")));
            }
            l.clone().enumerated(limits.group_order)?
        }
    };
    if !group.is_enumerated() {
        return Err(Error::CapExceeded { what: "base automorphism group", cap: limits.group_order });
    }
    distinguished_subgroups(&group, base, &base.base_flag())
}

fn check_base(base: &IncidenceComplex) -> Result<()> {
    if base.rank() < 1 {
        return Err(Error::PreconditionFailed("base complex needs rank at least 1".into()));
    }
    if !base.is_vertex_describable() {
        return Err(Error::NotVertexDescribable);
    }
    Ok(())
}

fn assemble(
    group: PermutationGroup,
    string_generators: Vec<Permutation>,
    lifted_r_minus_1: Vec<Permutation>,
    lifted_r: Vec<Vec<Permutation>>,
    kernel_order: u64,
    base_order: u64,
) -> Result<TwistedComplex> {
    let degree = group.degree();
    let order = group.order().expect("enumerated");
    if order != kernel_order * base_order {
        return Err(Error::PropertyViolation(format!(
            "group has order {order}, expected {kernel_order} * {base_order}"
        )));
    }
    let bottom = PermutationGroup::new(degree, lifted_r_minus_1.clone())?;
    let mut subgroups = vec![bottom.clone()];
    for r in &string_generators {
        let mut gens = vec![r.clone()];
        gens.extend(lifted_r_minus_1.iter().cloned());
        subgroups.push(PermutationGroup::new(degree, gens)?);
    }
    for gens in lifted_r {
        subgroups.push(PermutationGroup::new(degree, gens)?);
    }
    subgroups.push(bottom);
    let spec = GroupComplexSpec { group, subgroups };
    let complex = complex_from_group(&spec, true).map_err(|e| match e {
        Error::PreconditionFailed(msg) => Error::PropertyViolation(msg),
        other => other,
    })?;
    Ok(TwistedComplex { spec, complex, string_generators, kernel_order, base_order })
}

/// Lifts of the generators of `R_{-1}, ..., R_{k-1}` through `lift`.
fn lifted_subgroups(
    base: &IncidenceComplex,
    system: &DistinguishedSystem,
    lift: impl Fn(&Permutation) -> Permutation,
) -> (Vec<Permutation>, Vec<Vec<Permutation>>) {
    let k = base.rank() as i32;
    let through = |i: i32| -> Vec<Permutation> { system.subgroup(i).generators().iter().map(&lift).collect() };
    (through(-1), (0..k).map(through).collect())
}

/// Rebuilds `n^K` from `C_n ≀ Λ` acting on `{0, .., n-1}^v`, with
/// `R̂_0 = <σ_{F_0}>` and `R̂_i = R_{i-1}` (each also containing `R_{-1}`).
pub fn twist_cyclic(
    n: usize,
    base: &IncidenceComplex,
    lambda: Option<&PermutationGroup>,
    limits: &Limits,
) -> Result<TwistedComplex> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    check_base(base)?;
    let v = base.vertex_count();
    let degree = (n as u128)
        .checked_pow(v as u32)
        .filter(|&d| d <= limits.vertices as u128)
        .ok_or(Error::CapExceeded { what: "power complex vertices", cap: limits.vertices })? as usize;
    let system = base_system(base, lambda, limits)?;
    let lift = |g: &Permutation| lift_base_permutation(n, &vertex_action(base, g));
    let cycle = Permutation::from_images((0..n as u32).map(|x| (x + 1) % n as u32).collect())?;
    let base_vertex = base.vertex_index(system.base_flag.face(0)) as usize;
    let sigma = coordinate_permutation(n, v, base_vertex, &cycle);
    let mut gens = vec![sigma.clone()];
    gens.extend(system.group.generators().iter().map(lift));
    let group = PermutationGroup::closure(degree, gens, limits.group_order)?;
    let (bottom, rest) = lifted_subgroups(base, &system, lift);
    let base_order = system.group.order().expect("enumerated");
    assemble(group, vec![sigma], bottom, rest, (n as u64).pow(v as u32), base_order)
}

/// The string diagram of `L = {q_1, ..., q_{d-1}}` on nodes `0..d-1`,
/// merged with the trivial diagram on the vertices of `K`: node `d - 1 + i`
/// stands for vertex `i`, and each is joined to node `d - 2` by a branch
/// `q_{d-1}`. The base vertex's node plays the part of node `d - 1`.
pub fn merged_diagram(schlafli: &[u32], base: &IncidenceComplex) -> Result<CoxeterDiagram> {
    let d = schlafli.len() + 1;
    let mut nodes: Vec<String> = (0..d - 1).map(|i| i.to_string()).collect();
    nodes.extend((0..base.vertex_count()).map(|i| format!("v{i}")));
    let mut diagram = CoxeterDiagram::new(nodes)?;
    for (i, &q) in schlafli.iter().enumerate().take(d.saturating_sub(2)) {
        diagram.add_branch(i, i + 1, q)?;
    }
    if d >= 2 {
        for i in 0..base.vertex_count() {
            diagram.add_branch(d - 2, d - 1 + i, schlafli[d - 2])?;
        }
    }
    Ok(diagram)
}

/// The automorphism of `W` permuting its generators by `node_map`, as a
/// permutation of the elements of `W` (coset ids of the trivial subgroup).
fn diagram_automorphism(table: &CosetTable, tree: &[Option<(usize, usize)>], node_map: &[usize]) -> Permutation {
    let mut images = vec![0u32; table.len()];
    for c in 1..table.len() {
        let (parent, g) = tree[c].expect("every coset is reached");
        debug_assert!(parent < c);
        images[c] = table.image(images[parent] as usize, node_map[g]) as u32;
    }
    Permutation::from_images_unchecked(images)
}

/// The generalized power complex `L^K` for `L` the universal polytope of
/// type `schlafli`, built from `W ⋊ Λ` acting on the elements of `W`.
/// An empty symbol means `L` is a 2-edge, and the result is `2^K`.
pub fn generalized_power(
    schlafli: &[u32],
    base: &IncidenceComplex,
    lambda: Option<&PermutationGroup>,
    limits: &Limits,
) -> Result<TwistedComplex> {
    if schlafli.is_empty() {
        return twist_cyclic(2, base, lambda, limits);
    }
    check_base(base)?;
    let d = schlafli.len() + 1;
    let system = base_system(base, lambda, limits)?;
    let diagram = merged_diagram(schlafli, base)?;
    let table = regular_representation(&diagram, limits.cosets).map_err(|e| match e {
        Error::CapExceeded { what: "cosets", cap } => Error::InfiniteGroupSuspected { cap },
        other => other,
    })?;
    let tree = table.spanning_tree();
    let w_order = table.len() as u64;
    let nodes = diagram.node_count();
    let generators: Vec<Permutation> = (0..nodes).map(|g| table.permutation(g)).collect();
    let lift = |g: &Permutation| -> Permutation {
        let phi = vertex_action(base, g);
        let node_map: Vec<usize> =
            (0..nodes).map(|x| if x < d - 1 { x } else { d - 1 + phi.apply((x + 1 - d) as u32) as usize }).collect();
        diagram_automorphism(&table, &tree, &node_map)
    };
    for g in system.group.generators() {
        let a = lift(g);
        let phi = vertex_action(base, g);
        for (x, r) in generators.iter().enumerate() {
            let image = if x < d - 1 { x } else { d - 1 + phi.apply((x + 1 - d) as u32) as usize };
            if a.inverse().then(r).then(&a) != generators[image] {
                return Err(Error::PropertyViolation(format!(
                    "base automorphism does not act on W by permuting generators (node {x})"
                )));
            }
        }
    }
    let base_vertex = base.vertex_index(system.base_flag.face(0)) as usize;
    let mut string_generators: Vec<Permutation> = generators[..d - 1].to_vec();
    string_generators.push(generators[d - 1 + base_vertex].clone());
    let mut gens = string_generators.clone();
    gens.extend(system.group.generators().iter().map(lift));
    let group = PermutationGroup::closure(table.len(), gens, limits.group_order)?;
    let (bottom, rest) = lifted_subgroups(base, &system, lift);
    let base_order = system.group.order().expect("enumerated");
    assemble(group, string_generators, bottom, rest, w_order, base_order)
}

/// The universal regular polytope with the given Schläfli symbol, from the
/// string Coxeter group and `R_i = <ρ_i>`.
pub fn universal_polytope(schlafli: &[u32], limits: &Limits) -> Result<TwistedComplex> {
    let diagram = CoxeterDiagram::string(schlafli)?;
    let table = regular_representation(&diagram, limits.cosets)?;
    let string_generators: Vec<Permutation> = (0..diagram.node_count()).map(|g| table.permutation(g)).collect();
    let group = PermutationGroup::closure(table.len(), string_generators.clone(), limits.group_order)?;
    let order = table.len() as u64;
    assemble(group, string_generators, Vec::new(), Vec::new(), order, 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoveryReport {
    pub group_order: u64,
    /// `n^v · |Λ|`.
    pub expected_order: u64,
    pub f_vector: Vec<usize>,
    pub power_f_vector: Vec<usize>,
    /// `None` when the isomorphism search ran out of budget.
    pub isomorphic: Option<bool>,
}

impl RecoveryReport {
    pub fn passed(&self) -> bool {
        self.group_order == self.expected_order
            && self.f_vector == self.power_f_vector
            && self.isomorphic != Some(false)
    }
}

/// Compares the complex rebuilt from `C_n ≀ Λ` with `n^K` built directly.
pub fn verify_twist_recovery(
    n: usize,
    base: &IncidenceComplex,
    lambda: Option<&PermutationGroup>,
    limits: &Limits,
) -> Result<RecoveryReport> {
    let twisted = twist_cyclic(n, base, lambda, limits)?;
    let power = power_complex(n, base, limits.vertices)?.into_complex();
    let isomorphic = match find_isomorphism(&twisted.complex, &power, limits.search_nodes) {
        Ok(found) => Some(found.is_some()),
        Err(Error::SearchBudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(RecoveryReport {
        group_order: twisted.group_order(),
        expected_order: twisted.kernel_order * twisted.base_order,
        f_vector: twisted.complex.f_vector(),
        power_f_vector: power.f_vector(),
        isomorphic,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubcomplexReport {
    /// A `(d+i)`-face of `L^K` against `L^{K_i}`, for `1 <= i <= k`.
    pub face: Option<bool>,
    /// The co-face at an `i`-face of `L^K` against `L_i^K`, for `i <= d-2`.
    pub coface: Option<bool>,
}

impl SubcomplexReport {
    pub fn passed(&self) -> bool {
        (self.face.is_some() || self.coface.is_some()) && self.face != Some(false) && self.coface != Some(false)
    }
}

/// Checks that faces of `L^K` are `L^{K_i}` and co-faces are `L_i^K`.
pub fn verify_subcomplex_theorem(
    schlafli: &[u32],
    base: &IncidenceComplex,
    i: usize,
    limits: &Limits,
) -> Result<SubcomplexReport> {
    let d = schlafli.len() + 1;
    let k = base.rank();
    if i > k.max(d.saturating_sub(2)) {
        return Err(Error::RankOutOfRange { rank: i as i64, min: 0, max: k.max(d.saturating_sub(2)) as i64 });
    }
    let whole = generalized_power(schlafli, base, None, limits)?.complex;
    let face = if (1..=k).contains(&i) {
        let top = whole.faces_of_rank((d + i) as i32).start;
        let section = whole.section(whole.least(), top)?;
        let base_face = base.section(base.least(), base.faces_of_rank(i as i32).start)?;
        let smaller = generalized_power(schlafli, &base_face, None, limits)?.complex;
        Some(find_isomorphism(&section, &smaller, limits.search_nodes)?.is_some())
    } else {
        None
    };
    let coface = if d >= 2 && i <= d - 2 {
        let bottom = whole.faces_of_rank(i as i32).start;
        let section = whole.section(bottom, whole.greatest())?;
        let smaller = generalized_power(&schlafli[i + 1..], base, None, limits)?.complex;
        Some(find_isomorphism(&section, &smaller, limits.search_nodes)?.is_some())
    } else {
        None
    };
    Ok(SubcomplexReport { face, coface })
}

/// `skel_{d+j}(L^K) ≅ L^{skel_j(K)}`.
pub fn verify_twist_skel(schlafli: &[u32], base: &IncidenceComplex, j: i32, limits: &Limits) -> Result<bool> {
    let d = schlafli.len() as i32 + 1;
    if j < 0 || j >= base.rank() as i32 {
        return Err(Error::RankOutOfRange { rank: j as i64, min: 0, max: base.rank() as i64 - 1 });
    }
    let left = generalized_power(schlafli, base, None, limits)?.complex.skeleton(d + j)?;
    let right = generalized_power(schlafli, &base.skeleton(j)?, None, limits)?.complex;
    Ok(find_isomorphism(&left, &right, limits.search_nodes)?.is_some())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeIntersectionReport {
    pub holds: bool,
    /// First failing pair `(I, J)` of subsets of `{0, ..., k-1}`.
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
}

/// With `V(I)` the orbit of the base vertex under `<R_i : i ∈ I>`, checks
/// `V(I) ∩ V(J) = V(I ∩ J)` for all `I, J ⊆ {0, ..., k-1}`.
pub fn check_node_intersection(base: &IncidenceComplex, limits: &Limits) -> Result<NodeIntersectionReport> {
    let system = base_system(base, None, limits)?;
    let k = base.rank();
    let base_vertex = system.base_flag.face(0) as u32;
    let orbits: Vec<Vec<u32>> = (0u64..1 << k)
        .map(|mask| {
            let mut gens = system.subgroup(-1).generators().to_vec();
            for i in 0..k {
                if mask >> i & 1 == 1 {
                    gens.extend(system.subgroup(i as i32).generators().iter().cloned());
                }
            }
            let mut orbit = PermutationGroup::new(base.len(), gens).expect("same degree").orbit(base_vertex);
            orbit.sort_unstable();
            orbit
        })
        .collect();
    let members = |mask: u64| -> Vec<usize> { (0..k).filter(|&i| mask >> i & 1 == 1).collect() };
    for a in 0u64..1 << k {
        for b in a + 1..1 << k {
            let both: Vec<u32> =
                orbits[a as usize].iter().filter(|x| orbits[b as usize].binary_search(x).is_ok()).copied().collect();
            if both != orbits[(a & b) as usize] {
                return Ok(NodeIntersectionReport { holds: false, witness: Some((members(a), members(b))) });
            }
        }
    }
    Ok(NodeIntersectionReport { holds: true, witness: None })
}
