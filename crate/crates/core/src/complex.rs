//! Finite ranked incidence complexes.
//!
//! A complex of rank `k` is stored as its faces (ranks `-1..=k`) together with
//! the cover relation of its Hasse diagram. Face ids are dense and assigned
//! rank-major, input-order-minor, so every enumeration that walks ids in order
//! is deterministic.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense face index into [`IncidenceComplex::faces`].
pub type FaceId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub id: FaceId,
    pub rank: i32,
    /// Sorted vertex indices (positions among the rank-0 faces).
    pub vertices: Vec<u32>,
}

/// A maximal chain, one face per rank `-1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Flag(Vec<FaceId>);

impl Flag {
    pub fn new(faces: Vec<FaceId>) -> Self {
        Flag(faces)
    }

    /// The face of the given rank (`-1..=k`).
    pub fn face(&self, rank: i32) -> FaceId {
        self.0[(rank + 1) as usize]
    }

    pub fn faces(&self) -> &[FaceId] {
        &self.0
    }

    pub fn into_faces(self) -> Vec<FaceId> {
        self.0
    }
}

#[derive(Debug, Clone)]
pub struct IncidenceComplex {
    rank: usize,
    faces: Vec<Face>,
    /// Faces of rank `r` occupy `rank_start[r + 1]..rank_start[r + 2]`.
    rank_start: Vec<usize>,
    up: Vec<Vec<FaceId>>,
    down: Vec<Vec<FaceId>>,
    reach: OnceLock<Vec<FixedBitSet>>,
    by_vertices: OnceLock<HashMap<(i32, Vec<u32>), FaceId>>,
}

impl PartialEq for IncidenceComplex {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.faces == other.faces && self.up == other.up
    }
}

impl Eq for IncidenceComplex {}

impl IncidenceComplex {
    /// Builds a complex from faces given as `(rank, vertex set)` and covers
    /// `(lower, upper)` referring to positions in `faces`.
    ///
    /// Faces are renumbered rank-major with input order preserved inside a
    /// rank. Missing vertex sets are computed from the order. Only structural
    /// consistency is checked here; the axioms are checked by
    /// [`crate::validate::validate`].
    pub fn from_parts(rank: usize, faces: Vec<(i32, Option<Vec<u32>>)>, covers: Vec<(usize, usize)>) -> Result<Self> {
        let k = rank as i32;
        for (i, (r, _)) in faces.iter().enumerate() {
            if *r < -1 || *r > k {
                return Err(Error::MalformedPoset(format!("face {i} has rank {r} outside -1..={k}")));
            }
        }
        let mut order: Vec<usize> = (0..faces.len()).collect();
        order.sort_by_key(|&i| faces[i].0);
        let mut new_id = vec![0usize; faces.len()];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }

        let mut rank_start = vec![0usize; rank + 3];
        for (r, _) in &faces {
            rank_start[(*r + 2) as usize] += 1;
        }
        for i in 1..rank_start.len() {
            rank_start[i] += rank_start[i - 1];
        }

        let n = faces.len();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(lo, hi) in &covers {
            if lo >= n || hi >= n {
                return Err(Error::MalformedPoset(format!("cover ({lo}, {hi}) references a missing face")));
            }
            if faces[hi].0 != faces[lo].0 + 1 {
                return Err(Error::MalformedPoset(format!(
                    "cover ({lo}, {hi}) joins ranks {} and {}",
                    faces[lo].0, faces[hi].0
                )));
            }
            up[new_id[lo]].push(new_id[hi]);
            down[new_id[hi]].push(new_id[lo]);
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
            let before = list.len();
            list.dedup();
            if list.len() != before {
                return Err(Error::MalformedPoset("duplicate cover".into()));
            }
        }

        let mut sorted: Vec<(i32, Option<Vec<u32>>)> = Vec::with_capacity(n);
        let mut faces = faces.into_iter().map(Some).collect::<Vec<_>>();
        for &old in &order {
            sorted.push(faces[old].take().expect("each face taken once"));
        }

        let vertex_base = rank_start[1];
        let vertex_count = rank_start[2] - rank_start[1];
        let mut computed: Vec<Vec<u32>> = vec![Vec::new(); n];
        for id in 0..n {
            let r = sorted[id].0;
            computed[id] = match r {
                -1 => Vec::new(),
                0 => vec![(id - vertex_base) as u32],
                _ => {
                    let mut set = BTreeSet::new();
                    for &d in &down[id] {
                        set.extend(computed[d].iter().copied());
                    }
                    set.into_iter().collect()
                }
            };
        }
        let out_faces = sorted
            .into_iter()
            .enumerate()
            .map(|(id, (r, given))| {
                let vertices = match given {
                    Some(mut v) => {
                        v.sort_unstable();
                        v.dedup();
                        v
                    }
                    None => std::mem::take(&mut computed[id]),
                };
                Face { id, rank: r, vertices }
            })
            .collect::<Vec<_>>();
        for f in &out_faces {
            if let Some(&bad) = f.vertices.iter().find(|&&x| x as usize >= vertex_count) {
                return Err(Error::MalformedPoset(format!(
                    "face {} lists vertex {bad} but there are {vertex_count} vertices",
                    f.id
                )));
            }
        }

        Ok(IncidenceComplex {
            rank,
            faces: out_faces,
            rank_start,
            up,
            down,
            reach: OnceLock::new(),
            by_vertices: OnceLock::new(),
        })
    }

    /// Builds a vertex-describable complex of rank `rank >= 1` on `vertex_count`
    /// vertices from the vertex sets of its faces of ranks `1..rank`.
    ///
    /// `middle[r - 1]` lists the `r`-faces. Duplicated vertex sets within a rank
    /// are merged (first occurrence wins) and covers are given by inclusion
    /// between consecutive ranks.
    pub fn from_vertex_sets(rank: usize, vertex_count: usize, middle: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        if middle.len() != rank - 1 {
            return Err(Error::InvalidArgument(format!(
                "expected face lists for {} middle ranks, got {}",
                rank - 1,
                middle.len()
            )));
        }
        let mut levels: Vec<Vec<Vec<u32>>> = Vec::with_capacity(rank);
        levels.push((0..vertex_count as u32).map(|x| vec![x]).collect());
        for list in middle {
            let mut seen = HashMap::new();
            let mut level = Vec::new();
            for mut set in list {
                set.sort_unstable();
                set.dedup();
                if seen.insert(set.clone(), ()).is_none() {
                    level.push(set);
                }
            }
            levels.push(level);
        }

        let mut faces: Vec<(i32, Option<Vec<u32>>)> = vec![(-1, Some(Vec::new()))];
        let mut offsets = Vec::with_capacity(rank);
        for (r, level) in levels.iter().enumerate() {
            offsets.push(faces.len());
            faces.extend(level.iter().map(|s| (r as i32, Some(s.clone()))));
        }
        let top = faces.len();
        faces.push((rank as i32, Some((0..vertex_count as u32).collect())));

        let mut covers = Vec::new();
        for i in 0..levels[0].len() {
            covers.push((0, offsets[0] + i));
        }
        for r in 1..levels.len() {
            let mut containing: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
            for (i, set) in levels[r - 1].iter().enumerate() {
                for &x in set {
                    containing[x as usize].push(i);
                }
            }
            for (j, big) in levels[r].iter().enumerate() {
                let mut lower = BTreeSet::new();
                for &x in big {
                    for &i in &containing[x as usize] {
                        if is_subset(&levels[r - 1][i], big) {
                            lower.insert(i);
                        }
                    }
                }
                for i in lower {
                    covers.push((offsets[r - 1] + i, offsets[r] + j));
                }
            }
        }
        let last = levels.len() - 1;
        for i in 0..levels[last].len() {
            covers.push((offsets[last] + i, top));
        }
        Self::from_parts(rank, faces, covers)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    /// Ids of the faces of rank `r` (empty for ranks outside `-1..=k`).
    pub fn faces_of_rank(&self, r: i32) -> Range<FaceId> {
        if r < -1 || r > self.rank as i32 {
            return 0..0;
        }
        let i = (r + 1) as usize;
        self.rank_start[i]..self.rank_start[i + 1]
    }

    pub fn count_of_rank(&self, r: i32) -> usize {
        self.faces_of_rank(r).len()
    }

    /// The (first) face of rank -1.
    pub fn least(&self) -> FaceId {
        0
    }

    /// The (last) face of rank k.
    pub fn greatest(&self) -> FaceId {
        self.faces.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.count_of_rank(0)
    }

    /// Face id of the vertex with the given vertex index.
    pub fn vertex_face(&self, index: u32) -> FaceId {
        self.rank_start[1] + index as usize
    }

    pub fn vertex_index(&self, id: FaceId) -> u32 {
        (id - self.rank_start[1]) as u32
    }

    pub fn upper_covers(&self, id: FaceId) -> &[FaceId] {
        &self.up[id]
    }

    pub fn lower_covers(&self, id: FaceId) -> &[FaceId] {
        &self.down[id]
    }

    pub fn is_cover(&self, low: FaceId, high: FaceId) -> bool {
        self.up[low].binary_search(&high).is_ok()
    }

    /// All covers `(lower, upper)`, ordered by lower id then upper id.
    pub fn covers(&self) -> impl Iterator<Item = (FaceId, FaceId)> + '_ {
        self.up.iter().enumerate().flat_map(|(lo, ups)| ups.iter().map(move |&hi| (lo, hi)))
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    fn reach(&self) -> &[FixedBitSet] {
        self.reach.get_or_init(|| {
            let n = self.faces.len();
            let mut reach = vec![FixedBitSet::with_capacity(n); n];
            for id in (0..n).rev() {
                let mut set = FixedBitSet::with_capacity(n);
                set.insert(id);
                for &u in &self.up[id] {
                    set.union_with(&reach[u]);
                }
                reach[id] = set;
            }
            reach
        })
    }

    /// `a <= b` in the partial order.
    pub fn leq(&self, a: FaceId, b: FaceId) -> bool {
        if self.faces[a].rank > self.faces[b].rank {
            return false;
        }
        self.reach()[a].contains(b)
    }

    /// Looks up a face by rank and sorted vertex set (first match).
    pub fn face_with_vertices(&self, rank: i32, vertices: &[u32]) -> Option<FaceId> {
        let map = self.by_vertices.get_or_init(|| {
            let mut map = HashMap::with_capacity(self.faces.len());
            for f in &self.faces {
                map.entry((f.rank, f.vertices.clone())).or_insert(f.id);
            }
            map
        });
        map.get(&(rank, vertices.to_vec())).copied()
    }

    /// Counts of proper faces by rank `0..k`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.rank as i32).map(|r| self.count_of_rank(r)).collect()
    }

    /// Number of maximal chains from the least to the greatest face.
    pub fn flag_count(&self) -> u128 {
        let mut count = vec![0u128; self.faces.len()];
        for r in self.faces_of_rank(-1) {
            count[r] = 1;
        }
        for id in self.faces_of_rank(0).start..self.faces.len() {
            count[id] = self.down[id].iter().map(|&d| count[d]).sum();
        }
        count[self.greatest()]
    }

    /// All flags, in lexicographic order of their face ids.
    pub fn flags(&self) -> Vec<Flag> {
        let mut out = Vec::new();
        let top = self.greatest();
        let mut chain = vec![self.least()];
        self.extend_chains(&mut chain, top, &mut out);
        out
    }

    fn extend_chains(&self, chain: &mut Vec<FaceId>, top: FaceId, out: &mut Vec<Flag>) {
        let last = *chain.last().expect("chain is never empty");
        if last == top {
            out.push(Flag(chain.clone()));
            return;
        }
        for &u in &self.up[last] {
            chain.push(u);
            self.extend_chains(chain, top, out);
            chain.pop();
        }
    }

    /// The flags differing from `flag` exactly in the face of rank `i`.
    pub fn adjacent_flags(&self, flag: &Flag, i: i32) -> Result<Vec<Flag>> {
        let k = self.rank as i32;
        if i < 0 || i >= k {
            return Err(Error::RankOutOfRange { rank: i as i64, min: 0, max: k as i64 - 1 });
        }
        let below = flag.face(i - 1);
        let above = flag.face(i + 1);
        let current = flag.face(i);
        Ok(self.up[below]
            .iter()
            .copied()
            .filter(|&h| h != current && self.is_cover(h, above))
            .map(|h| {
                let mut faces = flag.0.clone();
                faces[(i + 1) as usize] = h;
                Flag(faces)
            })
            .collect())
    }

    /// The first flag in lexicographic order.
    pub fn base_flag(&self) -> Flag {
        let mut chain = vec![self.least()];
        while chain.len() < self.rank + 2 {
            let last = *chain.last().unwrap();
            match self.up[last].first() {
                Some(&u) => chain.push(u),
                None => break,
            }
        }
        Flag(chain)
    }

    /// Checks that `faces` is a flag of this complex.
    pub fn is_flag(&self, faces: &[FaceId]) -> bool {
        faces.len() == self.rank + 2
            && faces.iter().enumerate().all(|(i, &f)| f < self.faces.len() && self.faces[f].rank == i as i32 - 1)
            && faces.windows(2).all(|w| self.is_cover(w[0], w[1]))
    }

    /// The section `high/low`: all faces between `low` and `high`, re-ranked
    /// so that `low` becomes the least face.
    pub fn section(&self, low: FaceId, high: FaceId) -> Result<IncidenceComplex> {
        if low == high || !self.leq(low, high) {
            return Err(Error::NotComparable { low, high });
        }
        let reach = self.reach();
        let base = self.faces[low].rank;
        let members: Vec<FaceId> = reach[low].ones().filter(|&h| reach[h].contains(high)).collect();
        let mut local = HashMap::with_capacity(members.len());
        for (i, &m) in members.iter().enumerate() {
            local.insert(m, i);
        }
        let faces = members.iter().map(|&m| (self.faces[m].rank - base - 1, None)).collect();
        let mut covers = Vec::new();
        for &m in &members {
            for &u in &self.up[m] {
                if let Some(&j) = local.get(&u) {
                    covers.push((local[&m], j));
                }
            }
        }
        let rank = (self.faces[high].rank - base - 1) as usize;
        Self::from_parts(rank, faces, covers)
    }

    /// The `j`-skeleton: faces of rank at most `j`, with the greatest face
    /// re-ranked to `j + 1`.
    pub fn skeleton(&self, j: i32) -> Result<IncidenceComplex> {
        let k = self.rank as i32;
        if j < 0 || j > k - 1 {
            return Err(Error::RankOutOfRange { rank: j as i64, min: 0, max: k as i64 - 1 });
        }
        let kept = self.rank_start[(j + 2) as usize];
        let top = self.greatest();
        let mut faces: Vec<(i32, Option<Vec<u32>>)> =
            self.faces[..kept].iter().map(|f| (f.rank, Some(f.vertices.clone()))).collect();
        faces.push((j + 1, Some(self.faces[top].vertices.clone())));
        let mut covers: Vec<(usize, usize)> = self.covers().filter(|&(_, hi)| hi < kept).collect();
        for f in self.faces_of_rank(j) {
            covers.push((f, kept));
        }
        Self::from_parts((j + 1) as usize, faces, covers)
    }

    /// True iff proper faces are determined by `(rank, vertex set)` and every
    /// stored vertex set is the set of vertices below the face.
    pub fn is_vertex_describable(&self) -> bool {
        let k = self.rank as i32;
        let mut seen = HashMap::new();
        let mut below: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); self.faces.len()];
        for f in &self.faces {
            let set = match f.rank {
                -1 => BTreeSet::new(),
                0 => std::iter::once(self.vertex_index(f.id)).collect(),
                _ => {
                    let mut s = BTreeSet::new();
                    for &d in &self.down[f.id] {
                        s.extend(below[d].iter().copied());
                    }
                    s
                }
            };
            if f.rank >= 0 && f.rank < k {
                if !set.iter().copied().eq(f.vertices.iter().copied()) {
                    return false;
                }
                if seen.insert((f.rank, f.vertices.clone()), ()).is_some() {
                    return false;
                }
            }
            below[f.id] = set;
        }
        true
    }

    /// A copy with the given faces (and their covers) deleted.
    pub fn without_faces(&self, remove: &[FaceId]) -> Result<IncidenceComplex> {
        let drop: BTreeSet<FaceId> = remove.iter().copied().collect();
        let mut local = vec![usize::MAX; self.faces.len()];
        let mut faces = Vec::new();
        for f in &self.faces {
            if !drop.contains(&f.id) {
                local[f.id] = faces.len();
                faces.push((f.rank, Some(f.vertices.clone())));
            }
        }
        let covers = self
            .covers()
            .filter(|(a, b)| !drop.contains(a) && !drop.contains(b))
            .map(|(a, b)| (local[a], local[b]))
            .collect();
        Self::from_parts(self.rank, faces, covers)
    }

    /// A copy whose faces are renumbered: `order` lists every old id once, and
    /// new ids follow it (still rank-major).
    pub fn relabeled(&self, order: &[FaceId]) -> Result<IncidenceComplex> {
        if order.len() != self.faces.len() {
            return Err(Error::InvalidArgument("order must list every face".into()));
        }
        let mut pos = vec![usize::MAX; self.faces.len()];
        for (i, &old) in order.iter().enumerate() {
            if old >= pos.len() || pos[old] != usize::MAX {
                return Err(Error::InvalidArgument("order is not a permutation".into()));
            }
            pos[old] = i;
        }
        let faces = order.iter().map(|&old| (self.faces[old].rank, None)).collect();
        let covers = self.covers().map(|(a, b)| (pos[a], pos[b])).collect();
        Self::from_parts(self.rank, faces, covers)
    }
}

pub(crate) fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    'outer: for x in small {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn cube_basics() {
        let c = catalog::cube(3);
        assert_eq!(c.f_vector(), vec![8, 12, 6]);
        assert_eq!(c.flags().len(), 48);
        assert_eq!(c.flag_count(), 48);
        assert!(c.is_vertex_describable());
    }

    #[test]
    fn flags_are_lexicographic() {
        let flags = catalog::fano_plane().flags();
        assert_eq!(flags.len(), 21);
        assert!(flags.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn edge_flags_and_adjacency() {
        let e = catalog::edge(5);
        let flags = e.flags();
        assert_eq!(flags.len(), 5);
        assert_eq!(e.adjacent_flags(&flags[0], 0).unwrap().len(), 4);
        assert!(matches!(e.adjacent_flags(&flags[0], 1), Err(Error::RankOutOfRange { .. })));
    }

    #[test]
    fn adjacency_counts() {
        let cube = catalog::cube(3);
        for flag in cube.flags() {
            for i in 0..3 {
                assert_eq!(cube.adjacent_flags(&flag, i).unwrap().len(), 1);
            }
        }
        let fano = catalog::fano_plane();
        for flag in fano.flags() {
            assert_eq!(fano.adjacent_flags(&flag, 0).unwrap().len(), 2);
            assert_eq!(fano.adjacent_flags(&flag, 1).unwrap().len(), 2);
        }
    }

    #[test]
    fn sections_of_cube() {
        let c = catalog::cube(3);
        let whole = c.section(c.least(), c.greatest()).unwrap();
        assert_eq!(whole.f_vector(), vec![8, 12, 6]);
        let vf = c.section(c.vertex_face(0), c.greatest()).unwrap();
        assert_eq!(vf.rank(), 2);
        assert_eq!(vf.f_vector(), vec![3, 3]);
        let square = c.section(c.least(), c.faces_of_rank(2).start).unwrap();
        assert_eq!(square.f_vector(), vec![4, 4]);
        let v = c.vertex_face(0);
        assert_eq!(c.section(v, v), Err(Error::NotComparable { low: v, high: v }));
        let other = c.vertex_face(1);
        assert!(c.section(v, other).is_err());
    }

    #[test]
    fn skeletons() {
        let c = catalog::cube(3);
        let s = c.skeleton(1).unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.f_vector(), vec![8, 12]);
        assert_eq!(s.count_of_rank(2), 1);
        assert_eq!(c.skeleton(2).unwrap(), c);
        assert!(c.skeleton(3).is_err());
        let tri = catalog::simplex(2).skeleton(0).unwrap();
        assert_eq!(tri.rank(), 1);
        assert_eq!(tri.f_vector(), vec![3]);
    }

    #[test]
    fn vertex_describability() {
        assert!(catalog::cube(3).is_vertex_describable());
        assert!(catalog::fano_plane().is_vertex_describable());
        assert!(!catalog::digon().is_vertex_describable());
    }

    #[test]
    fn order_queries() {
        let c = catalog::cube(3);
        let v = c.vertex_face(0);
        assert!(c.leq(c.least(), v));
        assert!(c.leq(v, c.greatest()));
        assert!(c.leq(v, v));
        assert!(!c.leq(c.greatest(), v));
        let containing = c.faces_of_rank(2).filter(|&f| c.leq(v, f)).count();
        assert_eq!(containing, 3);
    }

    #[test]
    fn malformed_input_is_rejected() {
        let bad = IncidenceComplex::from_parts(1, vec![(-1, None), (1, None)], vec![(0, 1)]);
        assert!(matches!(bad, Err(Error::MalformedPoset(_))));
        let out_of_range = IncidenceComplex::from_parts(1, vec![(-1, None), (3, None)], vec![]);
        assert!(matches!(out_of_range, Err(Error::MalformedPoset(_))));
        let dangling = IncidenceComplex::from_parts(1, vec![(-1, None)], vec![(0, 7)]);
        assert!(matches!(dangling, Err(Error::MalformedPoset(_))));
    }

    #[test]
    fn subset_helper() {
        assert!(is_subset(&[1, 3], &[0, 1, 2, 3]));
        assert!(!is_subset(&[1, 4], &[0, 1, 2, 3]));
        assert!(is_subset(&[], &[0]));
    }
}
