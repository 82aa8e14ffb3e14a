//! Checking the incidence-complex axioms (I1)-(I4).

use std::collections::HashMap;

use serde::Serialize;

use crate::complex::{FaceId, IncidenceComplex};

/// Default bound on the number of flags enumerated for a single section
/// during the strong flag-connectivity check.
pub const DEFAULT_FLAG_CAP: usize = 1_000_000;

/// Outcome of the strong flag-connectivity check, which can be too expensive
/// to finish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Pass,
    Fail,
    CapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub passed_i1: bool,
    pub passed_i2: bool,
    pub i3: Check,
    pub passed_i4: bool,
    /// `(c_0, ..., c_{k-1})`, present iff (I4) holds.
    pub c_vector: Option<Vec<usize>>,
    pub vertex_describable: bool,
    pub diagnostics: Vec<String>,
}

impl AxiomReport {
    pub fn passed_i3(&self) -> bool {
        self.i3 == Check::Pass
    }

    pub fn is_valid(&self) -> bool {
        self.passed_i1 && self.passed_i2 && self.passed_i3() && self.passed_i4
    }
}

pub fn validate(complex: &IncidenceComplex) -> AxiomReport {
    validate_with(complex, DEFAULT_FLAG_CAP)
}

pub fn validate_with(complex: &IncidenceComplex, flag_cap: usize) -> AxiomReport {
    let mut diagnostics = Vec::new();
    let k = complex.rank() as i32;

    let least = complex.count_of_rank(-1);
    let greatest = complex.count_of_rank(k);
    let passed_i1 = least == 1 && greatest == 1;
    if !passed_i1 {
        diagnostics.push(format!("I1: expected one face of rank -1 and one of rank {k}, found {least} and {greatest}"));
    }

    let mut passed_i2 = true;
    for f in complex.faces() {
        if f.rank > -1 && complex.lower_covers(f.id).is_empty() {
            passed_i2 = false;
            diagnostics.push(format!("I2: face {} of rank {} covers nothing", f.id, f.rank));
        }
        if f.rank < k && complex.upper_covers(f.id).is_empty() {
            passed_i2 = false;
            diagnostics.push(format!("I2: face {} of rank {} is covered by nothing", f.id, f.rank));
        }
    }

    let i3 = if passed_i1 && passed_i2 {
        check_strong_flag_connectivity(complex, flag_cap, &mut diagnostics)
    } else {
        diagnostics.push("I3: not evaluated because I1/I2 failed".into());
        Check::Fail
    };

    let c_vector = check_diamond_counts(complex, &mut diagnostics);
    let passed_i4 = c_vector.is_some();

    AxiomReport {
        passed_i1,
        passed_i2,
        i3,
        passed_i4,
        c_vector,
        vertex_describable: complex.is_vertex_describable(),
        diagnostics,
    }
}

/// Counts intermediate faces over every pair `F < G` two ranks apart.
fn check_diamond_counts(complex: &IncidenceComplex, diagnostics: &mut Vec<String>) -> Option<Vec<usize>> {
    let k = complex.rank() as i32;
    let mut c = Vec::with_capacity(k as usize);
    let mut ok = true;
    for i in 0..k {
        let mut expected: Option<usize> = None;
        let mut rank_ok = true;
        for f in complex.faces_of_rank(i - 1) {
            let mut counts: HashMap<FaceId, usize> = HashMap::new();
            for &h in complex.upper_covers(f) {
                for &g in complex.upper_covers(h) {
                    *counts.entry(g).or_default() += 1;
                }
            }
            let mut pairs: Vec<_> = counts.into_iter().collect();
            pairs.sort_unstable();
            for (g, m) in pairs {
                match expected {
                    None => expected = Some(m),
                    Some(e) if e != m => {
                        if rank_ok {
                            diagnostics
                                .push(format!("I4: faces {f} < {g} enclose {m} faces of rank {i}, expected {e}"));
                        }
                        rank_ok = false;
                    }
                    _ => {}
                }
            }
        }
        match expected {
            Some(e) if e >= 2 && rank_ok => c.push(e),
            Some(e) if rank_ok => {
                diagnostics.push(format!("I4: c_{i} = {e} is less than 2"));
                ok = false;
            }
            None => {
                diagnostics.push(format!("I4: no face pairs around rank {i}"));
                ok = false;
            }
            _ => ok = false,
        }
    }
    ok.then_some(c)
}

/// For every pair `F < G` with a section of rank at least 2, the flags of
/// `G/F` must form a connected graph under adjacency. Sections of rank at
/// most 1 are connected automatically.
fn check_strong_flag_connectivity(complex: &IncidenceComplex, flag_cap: usize, diagnostics: &mut Vec<String>) -> Check {
    let mut capped = false;
    for low in 0..complex.len() {
        let low_rank = complex.face(low).rank;
        for high in complex.faces_of_rank(low_rank + 3).start..complex.len() {
            if !complex.leq(low, high) {
                continue;
            }
            match section_flags_connected(complex, low, high, flag_cap) {
                Some(true) => {}
                Some(false) => {
                    diagnostics
                        .push(format!("I3: flags of the section between faces {low} and {high} are disconnected"));
                    return Check::Fail;
                }
                None => capped = true,
            }
        }
    }
    if capped {
        diagnostics.push(format!("I3: some section has more than {flag_cap} flags"));
        Check::CapExceeded
    } else {
        Check::Pass
    }
}

fn section_flags_connected(complex: &IncidenceComplex, low: FaceId, high: FaceId, cap: usize) -> Option<bool> {
    let mut chains: Vec<Vec<FaceId>> = Vec::new();
    let mut stack = vec![vec![low]];
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        if last == high {
            chains.push(chain);
            if chains.len() > cap {
                return None;
            }
            continue;
        }
        for &u in complex.upper_covers(last).iter().rev() {
            if complex.leq(u, high) {
                let mut next = chain.clone();
                next.push(u);
                stack.push(next);
            }
        }
    }
    let mut uf = UnionFind::new(chains.len());
    let len = chains.first().map_or(0, Vec::len);
    for pos in 1..len.saturating_sub(1) {
        let mut groups: HashMap<Vec<FaceId>, usize> = HashMap::new();
        for (idx, chain) in chains.iter().enumerate() {
            let mut key = chain.clone();
            key.remove(pos);
            match groups.get(&key) {
                Some(&first) => uf.union(first, idx),
                None => {
                    groups.insert(key, idx);
                }
            }
        }
    }
    Some(uf.components() <= 1)
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n], components: n }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.components -= 1;
    }

    pub(crate) fn components(&self) -> usize {
        self.components
    }
}
