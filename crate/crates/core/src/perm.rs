//! Permutations and finite permutation groups by full enumeration.
//!
//! Permutations act on the right: `(x)(a * b) = ((x)a)b`, so `a * b` means
//! "apply `a`, then `b`".

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on enumerated group orders.
pub const DEFAULT_GROUP_CAP: usize = 2_000_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.0)
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    /// Wraps an image array, checking that it is a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let slot =
                seen.get_mut(x as usize).ok_or_else(|| Error::InvalidArgument(format!("image {x} out of range")))?;
            if *slot {
                return Err(Error::InvalidArgument(format!("image {x} repeated")));
            }
            *slot = true;
        }
        Ok(Permutation(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation(images)
    }

    /// Builds a permutation from disjoint cycles, e.g. `[[0, 1, 2]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let next = cycle[(i + 1) % cycle.len()];
                if x as usize >= degree || next as usize >= degree {
                    return Err(Error::InvalidArgument(format!("point {x} out of range")));
                }
                images[x as usize] = next;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Element order: lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.0.len()];
        let mut acc = 1u64;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            acc = lcm(acc, len);
        }
        acc
    }

    /// `self^-1 * other * self`.
    pub fn conjugate(&self, other: &Permutation) -> Permutation {
        self.inverse().then(other).then(self)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

/// A permutation group given by generators, optionally with all of its
/// elements enumerated.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Option<Arc<IndexSet<Permutation>>>,
    known_order: Option<u64>,
}

/// `{degree, generators, order}` as written to JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub degree: usize,
    pub generators: Vec<Permutation>,
    pub order: Option<u64>,
}

impl PermutationGroup {
    /// An unenumerated group from its generators.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        check_degrees(degree, &generators)?;
        Ok(PermutationGroup { degree, generators, elements: None, known_order: None })
    }

    pub fn trivial(degree: usize) -> Self {
        let mut elements = IndexSet::new();
        elements.insert(Permutation::identity(degree));
        PermutationGroup { degree, generators: Vec::new(), elements: Some(Arc::new(elements)), known_order: None }
    }

    /// Enumerates `<generators>` breadth-first. Elements are ordered by word
    /// length, then lexicographically by image array.
    pub fn closure(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Self> {
        check_degrees(degree, &generators)?;
        let elements = closure_set(degree, &generators, cap)?;
        Ok(PermutationGroup { degree, generators, elements: Some(Arc::new(elements)), known_order: None })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> Option<&IndexSet<Permutation>> {
        self.elements.as_deref()
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    /// The group order, if enumerated or otherwise known.
    pub fn order(&self) -> Option<u64> {
        match &self.elements {
            Some(elements) => Some(elements.len() as u64),
            None => self.known_order,
        }
    }

    /// Records an order computed without enumeration.
    pub fn with_known_order(mut self, order: u64) -> Self {
        self.known_order = Some(order);
        self
    }

    /// This group with its elements enumerated (no-op when already enumerated).
    pub fn enumerated(self, cap: usize) -> Result<Self> {
        if self.elements.is_some() {
            return Ok(self);
        }
        Self::closure(self.degree, self.generators, cap)
    }

    fn require_elements(&self) -> Result<&IndexSet<Permutation>> {
        self.elements.as_deref().ok_or(Error::RequiresEnumeration)
    }

    pub fn contains(&self, p: &Permutation) -> Result<bool> {
        Ok(self.require_elements()?.contains(p))
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.as_ref()?.get_index_of(p)
    }

    /// The orbit of `point` under the generators, in discovery order.
    pub fn orbit(&self, point: u32) -> Vec<u32> {
        let mut seen = vec![false; self.degree];
        let mut out = vec![point];
        seen[point as usize] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for g in &self.generators {
                let y = g.apply(x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    /// All orbits, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree as u32 {
            if seen[p as usize] {
                continue;
            }
            let mut orbit = self.orbit(p);
            for &x in &orbit {
                seen[x as usize] = true;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree == 0 || self.orbit(0).len() == self.degree
    }

    /// The subgroup fixing every point in `points`.
    pub fn stabilizer(&self, points: &[u32]) -> Result<PermutationGroup> {
        let elements = self.require_elements()?;
        let kept: IndexSet<Permutation> =
            elements.iter().filter(|g| points.iter().all(|&p| g.apply(p) == p)).cloned().collect();
        Ok(subgroup_from_elements(self.degree, kept))
    }

    /// The subgroup mapping each of `sets` onto itself.
    pub fn setwise_stabilizer(&self, sets: &[Vec<u32>]) -> Result<PermutationGroup> {
        let elements = self.require_elements()?;
        let sorted: Vec<Vec<u32>> = sets
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect();
        let kept: IndexSet<Permutation> = elements
            .iter()
            .filter(|g| sorted.iter().all(|s| s.iter().all(|&p| s.binary_search(&g.apply(p)).is_ok())))
            .cloned()
            .collect();
        Ok(subgroup_from_elements(self.degree, kept))
    }

    /// Decomposes the group into right cosets `H g` of `H = <subgroup_generators>`.
    pub fn right_cosets(&self, subgroup_generators: &[Permutation]) -> Result<CosetDecomposition> {
        let elements = self.require_elements()?;
        for (index, g) in subgroup_generators.iter().enumerate() {
            if !elements.contains(g) {
                return Err(Error::NotASubgroup { index });
            }
        }
        let subgroup = PermutationGroup::closure(self.degree, subgroup_generators.to_vec(), elements.len())?;
        let members = subgroup.elements().expect("closure enumerates");
        let mut coset_of = vec![u32::MAX; elements.len()];
        let mut transversal = Vec::new();
        for (i, g) in elements.iter().enumerate() {
            if coset_of[i] != u32::MAX {
                continue;
            }
            let c = transversal.len() as u32;
            transversal.push(g.clone());
            for h in members {
                let j = elements.get_index_of(&(h * g)).expect("group is closed");
                coset_of[j] = c;
            }
        }
        Ok(CosetDecomposition { subgroup, transversal, coset_of })
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary { degree: self.degree, generators: self.generators.clone(), order: self.order() }
    }
}

fn check_degrees(degree: usize, generators: &[Permutation]) -> Result<()> {
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch { expected: degree, got: g.degree() });
        }
    }
    Ok(())
}

pub(crate) fn closure_set(degree: usize, generators: &[Permutation], cap: usize) -> Result<IndexSet<Permutation>> {
    let mut all = IndexSet::new();
    all.insert(Permutation::identity(degree));
    let mut layer_start = 0;
    loop {
        let layer_end = all.len();
        let mut next = BTreeSet::new();
        for i in layer_start..layer_end {
            let e = &all[i];
            for g in generators {
                let p = e * g;
                if !all.contains(&p) {
                    next.insert(p);
                }
            }
        }
        if next.is_empty() {
            return Ok(all);
        }
        if all.len() + next.len() > cap {
            return Err(Error::CapExceeded { what: "group order", cap });
        }
        all.extend(next);
        layer_start = layer_end;
    }
}

/// Builds an enumerated group from a complete, closed element set and picks
/// a small generating set greedily in element order.
pub(crate) fn subgroup_from_elements(degree: usize, elements: IndexSet<Permutation>) -> PermutationGroup {
    let generators = greedy_generators(degree, &elements);
    let ordered = closure_set(degree, &generators, usize::MAX).expect("no cap");
    debug_assert_eq!(ordered.len(), elements.len());
    PermutationGroup { degree, generators, elements: Some(Arc::new(ordered)), known_order: None }
}

fn greedy_generators(degree: usize, elements: &IndexSet<Permutation>) -> Vec<Permutation> {
    let mut generators = Vec::new();
    let mut span: IndexSet<Permutation> = IndexSet::new();
    span.insert(Permutation::identity(degree));
    for e in elements {
        if span.len() == elements.len() {
            break;
        }
        if span.contains(e) {
            continue;
        }
        generators.push(e.clone());
        span = dimino_extend(&span, &generators, e);
    }
    generators
}

/// `<span, g>` given that `span` is a group closed under `generators` minus `g`.
fn dimino_extend(span: &IndexSet<Permutation>, generators: &[Permutation], _g: &Permutation) -> IndexSet<Permutation> {
    let base: Vec<Permutation> = span.iter().cloned().collect();
    let mut out: IndexSet<Permutation> = span.clone();
    let mut reps = VecDeque::new();
    reps.push_back(Permutation::identity(base[0].degree()));
    while let Some(r) = reps.pop_front() {
        for s in generators {
            let t = &r * s;
            if out.contains(&t) {
                continue;
            }
            for h in &base {
                out.insert(h * &t);
            }
            reps.push_back(t);
        }
    }
    out
}

/// Right cosets of a subgroup in an enumerated group.
#[derive(Clone, Debug)]
pub struct CosetDecomposition {
    pub subgroup: PermutationGroup,
    /// One representative per coset; the first is the identity.
    pub transversal: Vec<Permutation>,
    /// Coset index of each group element, by element index.
    pub coset_of: Vec<u32>,
}

impl CosetDecomposition {
    pub fn index(&self) -> usize {
        self.transversal.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s3() -> PermutationGroup {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        PermutationGroup::closure(3, vec![a, b], 100).unwrap()
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(3, &[&[1, 2]]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!((&a * &b).apply(0), 2);
        assert!((&a * &a.inverse()).is_identity());
    }

    #[test]
    fn bad_images_rejected() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
    }

    #[test]
    fn symmetric_and_cyclic_orders() {
        assert_eq!(s3().order(), Some(6));
        let c5 = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(c5.order(), 5);
        let g = PermutationGroup::closure(5, vec![c5], 100).unwrap();
        assert_eq!(g.order(), Some(5));
    }

    #[test]
    fn closure_respects_cap() {
        let a = Permutation::from_cycles(4, &[&[0, 1]]).unwrap();
        let b = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let err = PermutationGroup::closure(4, vec![a, b], 10).unwrap_err();
        assert_eq!(err, Error::CapExceeded { what: "group order", cap: 10 });
    }

    #[test]
    fn element_order_is_by_word_length() {
        let g = s3();
        let els = g.elements().unwrap();
        assert!(els[0].is_identity());
        // both generators at word length one, sorted lexicographically
        assert!(els[1] < els[2]);
    }

    #[test]
    fn cosets_of_alternating_group() {
        let g = s3();
        let c3 = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let d = g.right_cosets(&[c3]).unwrap();
        assert_eq!(d.index(), 2);
        assert!(d.transversal[0].is_identity());
        let whole = g.right_cosets(g.generators()).unwrap();
        assert_eq!(whole.index(), 1);
        let outside = Permutation::from_cycles(3, &[&[0, 1]]).unwrap().then(&Permutation::identity(3));
        let wrong =
            PermutationGroup::closure(3, vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()], 10).unwrap();
        assert_eq!(wrong.right_cosets(&[outside]).unwrap_err(), Error::NotASubgroup { index: 0 });
    }

    #[test]
    fn stabilizer_of_a_point() {
        let g = s3();
        let st = g.stabilizer(&[1]).unwrap();
        assert_eq!(st.order(), Some(2));
        let unenumerated = PermutationGroup::new(3, g.generators().to_vec()).unwrap();
        assert_eq!(unenumerated.stabilizer(&[0]).unwrap_err(), Error::RequiresEnumeration);
    }

    #[test]
    fn orbits_partition_points() {
        let a = Permutation::from_cycles(5, &[&[0, 1], &[2, 3, 4]]).unwrap();
        let g = PermutationGroup::new(5, vec![a]).unwrap();
        assert_eq!(g.orbits(), vec![vec![0, 1], vec![2, 3, 4]]);
        assert!(!g.is_transitive());
    }

    /// Multiply every known element by every known element until nothing new appears.
    fn naive_closure(degree: usize, gens: &[Permutation]) -> BTreeSet<Permutation> {
        let mut set: BTreeSet<Permutation> = gens.iter().cloned().collect();
        set.insert(Permutation::identity(degree));
        loop {
            let items: Vec<_> = set.iter().cloned().collect();
            let mut grew = false;
            for a in &items {
                for b in &items {
                    if set.insert(a * b) {
                        grew = true;
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    }

    fn arb_perm(degree: usize) -> impl Strategy<Value = Permutation> {
        Just((0..degree as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(Permutation::from_images_unchecked)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn closure_matches_naive_oracle(gens in proptest::collection::vec(arb_perm(6), 1..3)) {
            let fast = PermutationGroup::closure(6, gens.clone(), 5000).unwrap();
            let slow = naive_closure(6, &gens);
            let fast_set: BTreeSet<_> = fast.elements().unwrap().iter().cloned().collect();
            prop_assert_eq!(fast_set, slow);
        }

        #[test]
        fn orbit_stabilizer(gens in proptest::collection::vec(arb_perm(6), 1..3), point in 0u32..6) {
            let g = PermutationGroup::closure(6, gens, 5000).unwrap();
            let orbit = g.orbit(point).len();
            let stab = g.stabilizer(&[point]).unwrap().order().unwrap();
            prop_assert_eq!(g.order().unwrap(), orbit as u64 * stab);
        }

        #[test]
        fn inverse_roundtrip(p in arb_perm(9)) {
            prop_assert!((&p * &p.inverse()).is_identity());
            prop_assert_eq!(p.inverse().inverse(), p);
        }
    }
}
