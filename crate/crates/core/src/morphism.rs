//! Backtracking search for order isomorphisms between complexes.
//!
//! Both the isomorphism test and the automorphism-group computation map
//! proper faces one at a time along the Hasse diagram. A face is placed
//! only next to an already-placed neighbour, so every partial map is checked
//! for cover preservation as it grows.

use std::cmp::Reverse;
use std::collections::hash_map::DefaultHasher;
use std::collections::BinaryHeap;
use std::hash::{Hash, Hasher};

use crate::complex::{FaceId, IncidenceComplex};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::validate::UnionFind;

/// Default node budget for one search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

const UNSET: FaceId = usize::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Dir {
    Up,
    Down,
}

impl Dir {
    fn reverse(self) -> Dir {
        match self {
            Dir::Up => Dir::Down,
            Dir::Down => Dir::Up,
        }
    }
}

/// Proper-face neighbourhoods and refined colours of one complex.
struct Prepared<'a> {
    complex: &'a IncidenceComplex,
    up: Vec<Vec<FaceId>>,
    down: Vec<Vec<FaceId>>,
    color: Vec<u64>,
}

impl<'a> Prepared<'a> {
    fn new(complex: &'a IncidenceComplex) -> Self {
        let n = complex.len();
        let proper = |f: &FaceId| *f != complex.least() && *f != complex.greatest();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for f in 0..n {
            if !proper(&f) {
                continue;
            }
            up[f] = complex.upper_covers(f).iter().copied().filter(proper).collect();
            down[f] = complex.lower_covers(f).iter().copied().filter(proper).collect();
        }
        let mut color: Vec<u64> = (0..n)
            .map(|f| hash_of(&(complex.face(f).rank, complex.upper_covers(f).len(), complex.lower_covers(f).len())))
            .collect();
        for _ in 0..2 {
            color = (0..n)
                .map(|f| {
                    let mut above: Vec<u64> = complex.upper_covers(f).iter().map(|&g| color[g]).collect();
                    let mut below: Vec<u64> = complex.lower_covers(f).iter().map(|&g| color[g]).collect();
                    above.sort_unstable();
                    below.sort_unstable();
                    hash_of(&(color[f], above, below))
                })
                .collect();
        }
        Prepared { complex, up, down, color }
    }

    fn neighbours(&self, f: FaceId, dir: Dir) -> &[FaceId] {
        match dir {
            Dir::Up => &self.up[f],
            Dir::Down => &self.down[f],
        }
    }

    fn degree(&self, f: FaceId) -> usize {
        self.up[f].len() + self.down[f].len()
    }

    fn proper_faces(&self) -> std::ops::Range<FaceId> {
        let c = self.complex;
        if c.len() <= 2 {
            return 1..1;
        }
        1..c.len() - 1
    }

    fn sorted_colors(&self) -> Vec<u64> {
        let mut v = self.color.clone();
        v.sort_unstable();
        v
    }
}

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

/// The order in which pattern faces get mapped, with the placed neighbours
/// each one must be checked against.
struct Plan {
    order: Vec<FaceId>,
    /// `(position, direction from the face to that neighbour)` for every
    /// neighbour placed earlier; the first entry is the anchor.
    checks: Vec<Vec<(usize, Dir)>>,
}

impl Plan {
    fn new(p: &Prepared) -> Self {
        let range = p.proper_faces();
        let n = p.complex.len();
        let mut position = vec![UNSET; n];
        let mut score = vec![0usize; n];
        let mut heap: BinaryHeap<(usize, Reverse<FaceId>)> = BinaryHeap::new();
        let mut order = Vec::with_capacity(range.len());
        let mut checks = Vec::with_capacity(range.len());
        let mut next_unplaced = range.start;
        while order.len() < range.len() {
            let f = loop {
                match heap.pop() {
                    Some((s, Reverse(f))) if position[f] == UNSET && s == score[f] => break f,
                    Some(_) => continue,
                    None => {
                        while position[next_unplaced] != UNSET {
                            next_unplaced += 1;
                        }
                        break next_unplaced;
                    }
                }
            };
            let pos = order.len();
            position[f] = pos;
            order.push(f);
            let mut mine = Vec::new();
            for dir in [Dir::Down, Dir::Up] {
                for &g in p.neighbours(f, dir) {
                    if position[g] != UNSET {
                        mine.push((position[g], dir));
                    } else {
                        score[g] += 1;
                        heap.push((score[g], Reverse(g)));
                    }
                }
            }
            mine.sort_unstable_by_key(|&(q, _)| q);
            checks.push(mine);
        }
        Plan { order, checks }
    }
}

/// Mutable state of one backtracking run from pattern `a` into target `b`.
struct Search<'a, 'p> {
    a: &'p Prepared<'a>,
    b: &'p Prepared<'a>,
    plan: &'p Plan,
    image: Vec<FaceId>,
    used: Vec<bool>,
    used_neighbours: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl<'a, 'p> Search<'a, 'p> {
    fn new(a: &'p Prepared<'a>, b: &'p Prepared<'a>, plan: &'p Plan, budget: u64) -> Self {
        let n = b.complex.len();
        Search {
            a,
            b,
            plan,
            image: vec![UNSET; plan.order.len()],
            used: vec![false; n],
            used_neighbours: vec![0; n],
            nodes: 0,
            budget,
        }
    }

    fn assign(&mut self, pos: usize, x: FaceId) {
        self.image[pos] = x;
        self.used[x] = true;
        for dir in [Dir::Up, Dir::Down] {
            for &y in self.b.neighbours(x, dir) {
                self.used_neighbours[y] += 1;
            }
        }
    }

    fn unassign(&mut self, pos: usize) {
        let x = self.image[pos];
        self.image[pos] = UNSET;
        self.used[x] = false;
        for dir in [Dir::Up, Dir::Down] {
            for &y in self.b.neighbours(x, dir) {
                self.used_neighbours[y] -= 1;
            }
        }
    }

    fn fits(&self, pos: usize, x: FaceId) -> bool {
        let f = self.plan.order[pos];
        let checks = &self.plan.checks[pos];
        if self.used[x]
            || self.b.color[x] != self.a.color[f]
            || self.used_neighbours[x] != checks.len()
            || self.b.degree(x) != self.a.degree(f)
        {
            return false;
        }
        checks.iter().all(|&(q, dir)| {
            let y = self.image[q];
            match dir {
                Dir::Up => self.b.complex.is_cover(x, y),
                Dir::Down => self.b.complex.is_cover(y, x),
            }
        })
    }

    fn candidates(&self, pos: usize) -> Vec<FaceId> {
        match self.plan.checks[pos].first() {
            Some(&(q, dir)) => {
                self.b.neighbours(self.image[q], dir.reverse()).iter().copied().filter(|&x| self.fits(pos, x)).collect()
            }
            None => self.b.proper_faces().filter(|&x| self.fits(pos, x)).collect(),
        }
    }

    /// Extends the current assignment of positions `..start` to all positions.
    /// On success the full map is left in place.
    fn extend(&mut self, start: usize) -> Result<bool> {
        let m = self.plan.order.len();
        if start == m {
            return Ok(true);
        }
        let mut frames: Vec<(Vec<FaceId>, usize)> = vec![(self.candidates(start), 0)];
        loop {
            let depth = start + frames.len() - 1;
            let (list, next) = frames.last_mut().expect("nonempty");
            if *next > 0 {
                self.unassign(depth);
            }
            if *next == list.len() {
                frames.pop();
                if frames.is_empty() {
                    return Ok(false);
                }
                continue;
            }
            let x = list[*next];
            *next += 1;
            self.nodes += 1;
            if self.nodes > self.budget {
                self.unassign_from(start, depth);
                return Err(Error::SearchBudgetExceeded { budget: self.budget });
            }
            self.assign(depth, x);
            if depth + 1 == m {
                return Ok(true);
            }
            frames.push((self.candidates(depth + 1), 0));
        }
    }

    /// Clears positions `start..end`.
    fn unassign_from(&mut self, start: usize, end: usize) {
        for pos in start..end {
            if self.image[pos] != UNSET {
                self.unassign(pos);
            }
        }
    }

    /// The current full map as a permutation-style face array.
    fn face_map(&self) -> Vec<FaceId> {
        let a = self.a.complex;
        let mut map = vec![0; a.len()];
        map[a.least()] = self.b.complex.least();
        map[a.greatest()] = self.b.complex.greatest();
        for (pos, &f) in self.plan.order.iter().enumerate() {
            map[f] = self.image[pos];
        }
        map
    }
}

/// Finds an order isomorphism from `a` to `b` as a face-id map, or `None`.
pub fn find_isomorphism(a: &IncidenceComplex, b: &IncidenceComplex, budget: u64) -> Result<Option<Vec<FaceId>>> {
    if a.rank() != b.rank() || a.len() != b.len() || a.f_vector() != b.f_vector() {
        return Ok(None);
    }
    if a.cover_count() != b.cover_count() {
        return Ok(None);
    }
    let pa = Prepared::new(a);
    let pb = Prepared::new(b);
    if pa.sorted_colors() != pb.sorted_colors() {
        return Ok(None);
    }
    let plan = Plan::new(&pa);
    let mut search = Search::new(&pa, &pb, &plan, budget);
    if search.extend(0)? {
        Ok(Some(search.face_map()))
    } else {
        Ok(None)
    }
}

pub fn are_isomorphic(a: &IncidenceComplex, b: &IncidenceComplex, budget: u64) -> Result<bool> {
    Ok(find_isomorphism(a, b, budget)?.is_some())
}

/// Generators of the automorphism group (as permutations of face ids) and
/// its exact order.
#[derive(Debug, Clone)]
pub struct AutomorphismSearch {
    pub generators: Vec<Permutation>,
    pub order: u128,
    pub nodes: u64,
}

/// Computes automorphism-group generators by pruning candidates already in
/// a known orbit. The order is the product of the basic orbit sizes along
/// the search order, so the group never needs to be listed.
pub fn automorphism_search(complex: &IncidenceComplex, budget: u64) -> Result<AutomorphismSearch> {
    let p = Prepared::new(complex);
    let plan = Plan::new(&p);
    let m = plan.order.len();
    let n = complex.len();
    let mut search = Search::new(&p, &p, &plan, budget);
    for (pos, &f) in plan.order.iter().enumerate() {
        search.assign(pos, f);
    }
    let mut generators: Vec<Permutation> = Vec::new();
    let mut order: u128 = 1;
    for level in (0..m).rev() {
        search.unassign(level);
        let base = plan.order[level];
        let candidates = search.candidates(level);
        if candidates.len() > 1 {
            let mut orbits = UnionFind::new(n);
            for g in &generators {
                union_generator(&mut orbits, g);
            }
            let mut failed: Vec<FaceId> = Vec::new();
            for &x in &candidates {
                if x == base || orbits.find(x) == orbits.find(base) {
                    continue;
                }
                let rx = orbits.find(x);
                if failed.iter().any(|&r| orbits.find(r) == rx) {
                    continue;
                }
                search.assign(level, x);
                let found = search.extend(level + 1)?;
                if found {
                    let g =
                        Permutation::from_images_unchecked(search.face_map().into_iter().map(|v| v as u32).collect());
                    search.unassign_from(level + 1, m);
                    union_generator(&mut orbits, &g);
                    generators.push(g);
                } else {
                    failed.push(x);
                }
                search.unassign(level);
            }
            let root = orbits.find(base);
            let size = candidates.iter().filter(|&&x| orbits.find(x) == root).count();
            order *= size as u128;
        }
    }
    Ok(AutomorphismSearch { generators, order, nodes: search.nodes })
}

fn union_generator(uf: &mut UnionFind, g: &Permutation) {
    for (x, &y) in g.images().iter().enumerate() {
        uf.union(x, y as usize);
    }
}

/// True iff `map` (a face-id array) preserves covers in both directions.
pub fn is_automorphism(complex: &IncidenceComplex, map: &[u32]) -> bool {
    if map.len() != complex.len() {
        return false;
    }
    let mut seen = vec![false; map.len()];
    for &x in map {
        match seen.get_mut(x as usize) {
            Some(s) if !*s => *s = true,
            _ => return false,
        }
    }
    complex.covers().all(|(lo, hi)| complex.is_cover(map[lo] as usize, map[hi] as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    /// Tries every rank-preserving bijection of proper faces.
    fn brute_force_isomorphic(a: &IncidenceComplex, b: &IncidenceComplex) -> bool {
        if a.len() != b.len() || a.rank() != b.rank() {
            return false;
        }
        let proper: Vec<FaceId> = (1..a.len() - 1).collect();
        let mut map: Vec<FaceId> = vec![UNSET; a.len()];
        map[0] = 0;
        map[a.len() - 1] = b.len() - 1;
        let mut used = vec![false; b.len()];
        fn go(
            i: usize,
            proper: &[FaceId],
            a: &IncidenceComplex,
            b: &IncidenceComplex,
            map: &mut Vec<FaceId>,
            used: &mut Vec<bool>,
        ) -> bool {
            if i == proper.len() {
                return a.covers().all(|(lo, hi)| b.is_cover(map[lo], map[hi])) && a.cover_count() == b.cover_count();
            }
            let f = proper[i];
            for x in 1..b.len() - 1 {
                if !used[x] && b.face(x).rank == a.face(f).rank {
                    used[x] = true;
                    map[f] = x;
                    if go(i + 1, proper, a, b, map, used) {
                        return true;
                    }
                    used[x] = false;
                }
            }
            false
        }
        go(0, &proper, a, b, &mut map, &mut used)
    }

    fn shuffled(c: &IncidenceComplex, seed: u64) -> IncidenceComplex {
        // Reverse each rank block, then rotate by the seed.
        let mut order = Vec::new();
        for r in -1..=c.rank() as i32 {
            let mut block: Vec<FaceId> = c.faces_of_rank(r).rev().collect();
            let len = block.len();
            block.rotate_left(seed as usize % len);
            order.extend(block);
        }
        c.relabeled(&order).unwrap()
    }

    #[test]
    fn cube_is_isomorphic_to_relabeling() {
        let cube = catalog::cube(3);
        let other = shuffled(&cube, 5);
        let map = find_isomorphism(&cube, &other, DEFAULT_SEARCH_BUDGET).unwrap().unwrap();
        for (lo, hi) in cube.covers() {
            assert!(other.is_cover(map[lo], map[hi]));
        }
    }

    #[test]
    fn different_complexes_are_not_isomorphic() {
        let fano = catalog::fano_plane();
        let mk = catalog::moebius_kantor();
        assert!(!are_isomorphic(&fano, &mk, DEFAULT_SEARCH_BUDGET).unwrap());
        assert!(!are_isomorphic(&catalog::cube(3), &catalog::cross_polytope(3), DEFAULT_SEARCH_BUDGET).unwrap());
    }

    #[test]
    fn budget_is_reported() {
        let a = catalog::cube(4);
        let err = are_isomorphic(&a, &shuffled(&a, 3), 3).unwrap_err();
        assert_eq!(err, Error::SearchBudgetExceeded { budget: 3 });
    }

    #[test]
    fn automorphism_orders() {
        for (c, order) in [
            (catalog::cube(3), 48u128),
            (catalog::simplex(3), 24),
            (catalog::fano_plane(), 168),
            (catalog::moebius_kantor(), 48),
            (catalog::edge(4), 24),
            (catalog::polygon(5), 10),
            (catalog::digon(), 4),
        ] {
            let found = automorphism_search(&c, DEFAULT_SEARCH_BUDGET).unwrap();
            assert_eq!(found.order, order);
            for g in &found.generators {
                assert!(is_automorphism(&c, g.images()));
            }
        }
    }

    #[test]
    fn small_pairs_agree_with_brute_force() {
        let small = [
            catalog::polygon(3),
            catalog::polygon(4),
            catalog::edge(3),
            catalog::digon(),
            catalog::simplex(2).skeleton(0).unwrap(),
            catalog::polygon(5),
            catalog::polygon(6),
        ];
        for a in &small {
            for b in &small {
                assert_eq!(are_isomorphic(a, b, DEFAULT_SEARCH_BUDGET).unwrap(), brute_force_isomorphic(a, b),);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn isomorphism_is_reflexive_and_symmetric(which in 0usize..5, s1 in 0u64..50, s2 in 0u64..50) {
            let base = [
                catalog::cube(3),
                catalog::fano_plane(),
                catalog::moebius_kantor(),
                catalog::simplex(3),
                catalog::polygon(6),
            ][which].clone();
            let a = shuffled(&base, s1);
            let b = shuffled(&base, s2);
            let ab = find_isomorphism(&a, &b, DEFAULT_SEARCH_BUDGET).unwrap().unwrap();
            let ba = find_isomorphism(&b, &a, DEFAULT_SEARCH_BUDGET).unwrap().unwrap();
            for (lo, hi) in a.covers() {
                prop_assert!(b.is_cover(ab[lo], ab[hi]));
            }
            for (lo, hi) in b.covers() {
                prop_assert!(a.is_cover(ba[lo], ba[hi]));
            }
            prop_assert!(are_isomorphic(&a, &a, DEFAULT_SEARCH_BUDGET).unwrap());
        }
    }
}
