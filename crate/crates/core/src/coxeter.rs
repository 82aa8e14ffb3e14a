//! Coxeter diagrams, their presentations, and Todd–Coxeter coset enumeration.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{Permutation, PermutationGroup};

pub const DEFAULT_COSET_CAP: usize = 1_000_000;

/// A labeled graph; an absent branch means the two generators commute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoxeterDiagram {
    nodes: Vec<String>,
    branches: BTreeMap<(usize, usize), u32>,
}

impl CoxeterDiagram {
    pub fn new(nodes: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for n in &nodes {
            if !seen.insert(n) {
                return Err(Error::InvalidArgument(format!("duplicate node label {n}")));
            }
        }
        Ok(CoxeterDiagram { nodes, branches: BTreeMap::new() })
    }

    /// The string diagram `0 - 1 - ... - d-1` with the given branch labels.
    pub fn string(labels: &[u32]) -> Result<Self> {
        let mut diagram = Self::new((0..=labels.len()).map(|i| i.to_string()).collect())?;
        for (i, &m) in labels.iter().enumerate() {
            diagram.add_branch(i, i + 1, m)?;
        }
        Ok(diagram)
    }

    pub fn add_branch(&mut self, a: usize, b: usize, label: u32) -> Result<()> {
        if a == b || a >= self.nodes.len() || b >= self.nodes.len() {
            return Err(Error::InvalidArgument(format!("bad branch {a}-{b}")));
        }
        if label < 3 {
            return Err(Error::InvalidArgument(format!("branch label {label} must be at least 3")));
        }
        self.branches.insert((a.min(b), a.max(b)), label);
        Ok(())
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Order of `g_a g_b`: the branch label, or 2 without a branch.
    pub fn label(&self, a: usize, b: usize) -> u32 {
        self.branches.get(&(a.min(b), a.max(b))).copied().unwrap_or(2)
    }

    pub fn branches(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.branches.iter().map(|(&k, &v)| (k, v))
    }

    pub fn presentation(&self) -> GroupPresentation {
        let n = self.nodes.len();
        let mut relators = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let m = self.label(a, b) as usize;
                relators.push([a, b].repeat(m));
            }
        }
        GroupPresentation { generator_count: n, relators }
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph coxeter {\n");
        for (i, name) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{name}\"];");
        }
        for ((a, b), m) in self.branches() {
            if m == 3 {
                let _ = writeln!(out, "  n{a} -- n{b};");
            } else {
                let _ = writeln!(out, "  n{a} -- n{b} [label=\"{m}\"];");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Generators are involutions; `relators` lists the remaining relations as
/// words in generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generator_count: usize,
    pub relators: Vec<Vec<usize>>,
}

/// The action of the generators on the cosets of a subgroup. Coset 0 is
/// the subgroup itself; the rest are numbered in breadth-first order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetTable {
    generator_count: usize,
    rows: Vec<u32>,
    pub complete: bool,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.rows.len() / self.generator_count.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn image(&self, coset: usize, generator: usize) -> usize {
        self.rows[coset * self.generator_count + generator] as usize
    }

    /// Generator `g` as a permutation of the cosets.
    pub fn permutation(&self, generator: usize) -> Permutation {
        Permutation::from_images_unchecked((0..self.len()).map(|c| self.image(c, generator) as u32).collect())
    }

    /// The permutation group generated by all columns.
    pub fn group(&self, cap: usize) -> Result<PermutationGroup> {
        PermutationGroup::closure(self.len(), (0..self.generator_count).map(|g| self.permutation(g)).collect(), cap)
    }

    /// For each coset other than 0, its breadth-first parent and the
    /// generator leading from the parent to it.
    pub fn spanning_tree(&self) -> Vec<Option<(usize, usize)>> {
        let mut parent = vec![None; self.len()];
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(c) = queue.pop_front() {
            for g in 0..self.generator_count {
                let d = self.image(c, g);
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = Some((c, g));
                    queue.push_back(d);
                }
            }
        }
        parent
    }
}

const NONE: u32 = u32::MAX;

struct Enumeration<'a> {
    gens: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    relators: &'a [Vec<usize>],
    cap: usize,
    queue: Vec<u32>,
}

impl Enumeration<'_> {
    fn entry(&self, c: u32, g: usize) -> u32 {
        self.table[c as usize * self.gens + g]
    }

    fn set(&mut self, c: u32, g: usize, d: u32) {
        self.table[c as usize * self.gens + g] = d;
        self.table[d as usize * self.gens + g] = c;
    }

    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, g: usize) -> Result<()> {
        let n = self.parent.len();
        if n >= self.cap {
            return Err(Error::CapExceeded { what: "cosets", cap: self.cap });
        }
        self.parent.push(n as u32);
        self.table.extend(std::iter::repeat_n(NONE, self.gens));
        self.set(c, g, n as u32);
        Ok(())
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    fn merge(&mut self, a: u32, b: u32) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop as usize] = keep;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for g in 0..self.gens {
                let f = self.entry(e, g);
                if f == NONE {
                    continue;
                }
                self.table[f as usize * self.gens + g] = NONE;
                let (e1, f1) = (self.rep(e), self.rep(f));
                let from_e = self.entry(e1, g);
                let from_f = self.entry(f1, g);
                if from_e != NONE {
                    self.merge(f1, from_e);
                } else if from_f != NONE {
                    self.merge(e1, from_f);
                } else {
                    self.set(e1, g, f1);
                }
            }
        }
    }

    /// Traces `word` from `c` from both ends, defining cosets as needed.
    fn scan_and_fill(&mut self, c: u32, word: &[usize]) -> Result<()> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = c;
        let mut b = c;
        let mut i = 0isize;
        let mut j = word.len() as isize - 1;
        loop {
            while i <= j && self.entry(f, word[i as usize]) != NONE {
                f = self.entry(f, word[i as usize]);
                i += 1;
            }
            if i > j {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            while j >= i && self.entry(b, word[j as usize]) != NONE {
                b = self.entry(b, word[j as usize]);
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                self.set(f, word[i as usize], b);
                return Ok(());
            }
            self.define(f, word[i as usize])?;
        }
    }
}

/// Enumerates the cosets of the subgroup generated by `subgroup` (words in
/// the generators) by the HLT strategy. Fails with `CapExceeded` once more
/// than `cap` cosets have been defined, which usually means the index is
/// infinite.
pub fn todd_coxeter(presentation: &GroupPresentation, subgroup: &[Vec<usize>], cap: usize) -> Result<CosetTable> {
    let gens = presentation.generator_count;
    if cap == 0 {
        return Err(Error::InvalidArgument("coset cap must be at least 1".into()));
    }
    for w in presentation.relators.iter().chain(subgroup) {
        if let Some(&g) = w.iter().find(|&&g| g >= gens) {
            return Err(Error::InvalidArgument(format!("generator {g} out of range")));
        }
    }
    let mut e = Enumeration {
        gens,
        table: vec![NONE; gens],
        parent: vec![0],
        relators: &presentation.relators,
        cap,
        queue: Vec::new(),
    };
    for w in subgroup {
        e.scan_and_fill(0, w)?;
    }
    let mut c = 0u32;
    while (c as usize) < e.parent.len() {
        for r in 0..e.relators.len() {
            if !e.live(c) {
                break;
            }
            let relator = e.relators[r].clone();
            e.scan_and_fill(c, &relator)?;
        }
        for g in 0..gens {
            if e.live(c) && e.entry(c, g) == NONE {
                e.define(c, g)?;
            }
        }
        c += 1;
    }
    // Renumber live cosets breadth-first from the subgroup.
    let mut number = vec![NONE; e.parent.len()];
    let mut order = vec![0u32];
    number[0] = 0;
    let mut i = 0;
    while i < order.len() {
        let c = order[i];
        i += 1;
        for g in 0..gens {
            let d = e.rep(e.entry(c, g));
            if number[d as usize] == NONE {
                number[d as usize] = order.len() as u32;
                order.push(d);
            }
        }
    }
    let mut rows = Vec::with_capacity(order.len() * gens);
    for &c in &order {
        for g in 0..gens {
            let d = e.rep(e.entry(c, g));
            rows.push(number[d as usize]);
        }
    }
    Ok(CosetTable { generator_count: gens, rows, complete: true })
}

/// The Coxeter group of `diagram` acting regularly on its own elements
/// (right multiplication), together with the coset table it came from.
pub fn regular_representation(diagram: &CoxeterDiagram, cap: usize) -> Result<CosetTable> {
    todd_coxeter(&diagram.presentation(), &[], cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::symmetry::automorphism_group;
    use proptest::prelude::*;

    fn cosets(diagram: &CoxeterDiagram, subgroup: &[Vec<usize>]) -> usize {
        todd_coxeter(&diagram.presentation(), subgroup, 100_000).unwrap().len()
    }

    fn d4() -> CoxeterDiagram {
        let mut d = CoxeterDiagram::new(vec!["c".into(), "a".into(), "b".into(), "e".into()]).unwrap();
        for s in 1..4 {
            d.add_branch(0, s, 3).unwrap();
        }
        d
    }

    #[test]
    fn octahedral_group() {
        let b3 = CoxeterDiagram::string(&[4, 3]).unwrap();
        assert_eq!(cosets(&b3, &[]), 48);
        assert_eq!(cosets(&b3, &[vec![1], vec![2]]), 8);
        assert_eq!(cosets(&b3, &[vec![0], vec![1]]), 6);
        let cube = catalog::cube(3);
        assert_eq!(automorphism_group(&cube, 1_000_000, 1000).unwrap().order(), Some(48));
    }

    #[test]
    fn d4_star() {
        assert_eq!(cosets(&d4(), &[]), 192);
        let table = regular_representation(&d4(), 1000).unwrap();
        assert_eq!(table.group(10_000).unwrap().order(), Some(192));
    }

    #[test]
    fn string_groups() {
        assert_eq!(cosets(&CoxeterDiagram::string(&[3, 4, 3]).unwrap(), &[]), 1152);
        assert_eq!(cosets(&CoxeterDiagram::string(&[3, 4, 3]).unwrap(), &[vec![1], vec![2], vec![3]]), 24);
        assert_eq!(cosets(&CoxeterDiagram::string(&[5]).unwrap(), &[]), 10);
        assert_eq!(cosets(&CoxeterDiagram::string(&[3, 3]).unwrap(), &[]), 24);
        assert_eq!(cosets(&CoxeterDiagram::string(&[]).unwrap(), &[]), 2);
        assert_eq!(cosets(&CoxeterDiagram::new(vec!["x".into(), "y".into(), "z".into()]).unwrap(), &[]), 8);
    }

    #[test]
    fn infinite_groups_hit_the_cap() {
        let affine = CoxeterDiagram::string(&[4, 4]).unwrap();
        assert_eq!(
            todd_coxeter(&affine.presentation(), &[], 5000).unwrap_err(),
            Error::CapExceeded { what: "cosets", cap: 5000 }
        );
        let mut star = CoxeterDiagram::new((0..8).map(|i| i.to_string()).collect()).unwrap();
        for s in 1..8 {
            star.add_branch(0, s, 3).unwrap();
        }
        assert!(todd_coxeter(&star.presentation(), &[], 20_000).is_err());
    }

    #[test]
    fn rejects_bad_diagrams() {
        let mut d = CoxeterDiagram::string(&[3]).unwrap();
        assert!(d.add_branch(0, 1, 2).is_err());
        assert!(d.add_branch(0, 0, 3).is_err());
        assert!(CoxeterDiagram::new(vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn spanning_tree_reaches_every_coset() {
        let table = regular_representation(&CoxeterDiagram::string(&[4, 3]).unwrap(), 1000).unwrap();
        let tree = table.spanning_tree();
        assert!(tree[0].is_none());
        assert!(tree[1..].iter().all(|p| p.is_some()));
        for (c, p) in tree.iter().enumerate() {
            if let Some((parent, g)) = p {
                assert_eq!(table.image(*parent, *g), c);
            }
        }
    }

    #[test]
    fn dot_lists_branches() {
        let dot = CoxeterDiagram::string(&[4, 3]).unwrap().to_dot();
        assert!(dot.contains("n0 -- n1 [label=\"4\"]"));
        assert!(dot.contains("n1 -- n2;"));
    }

    /// Order of a dihedral group from closure on the two generating reflections of a regular polygon.
    fn dihedral_order_oracle(m: u32) -> u64 {
        let p = catalog::polygon(m as usize);
        automorphism_group(&p, 1_000_000, 100_000).unwrap().order().unwrap()
    }

    proptest! {
        #[test]
        fn rank_two_groups_are_dihedral(m in 3u32..12) {
            let d = CoxeterDiagram::string(&[m]).unwrap();
            prop_assert_eq!(cosets(&d, &[]) as u64, dihedral_order_oracle(m));
            prop_assert_eq!(cosets(&d, &[vec![1]]), m as usize);
        }

        #[test]
        fn columns_are_involutions(a in 3u32..6, b in 3u32..4) {
            let d = CoxeterDiagram::string(&[a, b]).unwrap();
            if let Ok(t) = todd_coxeter(&d.presentation(), &[vec![0]], 10_000) {
                for g in 0..t.generator_count() {
                    let p = t.permutation(g);
                    prop_assert!(p.then(&p).is_identity());
                }
            }
        }
    }
}
