//! Deterministic constructors for the named complexes used throughout the crate.
//!
//! The Fano plane and Möbius–Kantor labelings are frozen: changing them
//! changes every serialized complex built from them.

use serde::Serialize;

use crate::complex::IncidenceComplex;
use crate::error::{Error, Result};

/// Lines of the Fano plane on points `1..=7`.
pub const FANO_LINES: [[u32; 3]; 7] = [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]];

/// Lines of the Möbius–Kantor configuration on points `1..=8`: the cyclic
/// shifts of `{1, 2, 4}` modulo 8.
pub const MOEBIUS_KANTOR_LINES: [[u32; 3]; 8] =
    [[1, 2, 4], [2, 3, 5], [3, 4, 6], [4, 5, 7], [5, 6, 8], [6, 7, 1], [7, 8, 2], [8, 1, 3]];

fn build(rank: usize, vertices: usize, middle: Vec<Vec<Vec<u32>>>) -> IncidenceComplex {
    IncidenceComplex::from_vertex_sets(rank, vertices, middle).expect("catalog constructors produce well-formed posets")
}

/// The `v`-edge `{}_v`: rank 1 with `v` vertices.
pub fn edge(v: usize) -> IncidenceComplex {
    assert!(v >= 2, "an edge needs at least two vertices");
    build(1, v, vec![])
}

/// The `p`-gon `{p}`.
pub fn polygon(p: usize) -> IncidenceComplex {
    assert!(p >= 2, "a polygon needs at least two vertices");
    let edges = (0..p as u32).map(|i| vec![i, (i + 1) % p as u32]).collect();
    build(2, p, vec![edges])
}

/// The simplex of rank `k` (`k + 1` vertices, every subset a face).
pub fn simplex(k: usize) -> IncidenceComplex {
    assert!(k >= 1);
    let n = (k + 1) as u32;
    let middle = (1..k).map(|r| combinations(n, r + 1)).collect();
    build(k, k + 1, middle)
}

/// The ordinary `k`-cube, with vertices the bit strings of length `k`.
pub fn cube(k: usize) -> IncidenceComplex {
    assert!(k >= 1);
    let n = 1u32 << k;
    let mut middle = Vec::new();
    for j in 1..k {
        let mut faces = Vec::new();
        for axes in combinations(k as u32, j) {
            let mask: u32 = axes.iter().map(|a| 1 << a).sum();
            for base in (0..n).filter(|b| b & mask == 0) {
                let set = (0..n).filter(|x| x & !mask == base).collect();
                faces.push(set);
            }
        }
        middle.push(faces);
    }
    build(k, n as usize, middle)
}

/// The cross-polytope of rank `dim`; vertex `2i` is `+e_i` and `2i + 1` is `-e_i`.
pub fn cross_polytope(dim: usize) -> IncidenceComplex {
    assert!(dim >= 1);
    let mut middle = Vec::new();
    for r in 1..dim {
        let mut faces = Vec::new();
        for axes in combinations(dim as u32, r + 1) {
            for signs in 0..(1u32 << (r + 1)) {
                let set = axes.iter().enumerate().map(|(i, &a)| 2 * a + ((signs >> i) & 1)).collect();
                faces.push(set);
            }
        }
        middle.push(faces);
    }
    build(dim, 2 * dim, middle)
}

/// The regular 4-crosspolytope `{3,3,4}`.
pub fn cross_polytope4() -> IncidenceComplex {
    cross_polytope(4)
}

pub fn fano_plane() -> IncidenceComplex {
    let lines = FANO_LINES.iter().map(|l| l.iter().map(|p| p - 1).collect()).collect();
    build(2, 7, vec![lines])
}

/// The combinatorial structure of the complex polygon `3{3}3`.
pub fn moebius_kantor() -> IncidenceComplex {
    let lines = MOEBIUS_KANTOR_LINES.iter().map(|l| l.iter().map(|p| p - 1).collect()).collect();
    build(2, 8, vec![lines])
}

/// Cubical tessellation of the 4-torus `Z_s^4`, with the greatest face
/// adjoined (rank 5). A `j`-face is spanned by a base point and `j` axes.
/// For `s = 2` distinct spans collapse onto the same vertex sets; the
/// result is built anyway and left for validation to judge.
pub fn cubical_toroid(s: usize) -> IncidenceComplex {
    cubical_torus(4, s)
}

pub fn cubical_torus(dim: usize, s: usize) -> IncidenceComplex {
    assert!(s >= 2 && dim >= 1);
    let n = s.pow(dim as u32);
    let step = |p: usize, axis: u32| -> usize {
        let w = s.pow(axis);
        let c = (p / w) % s;
        p - c * w + ((c + 1) % s) * w
    };
    let mut middle = Vec::new();
    for j in 1..=dim {
        let mut faces = Vec::new();
        for axes in combinations(dim as u32, j) {
            for base in 0..n {
                let mut set = vec![base];
                for &a in &axes {
                    let shifted: Vec<usize> = set.iter().map(|&p| step(p, a)).collect();
                    set.extend(shifted);
                }
                faces.push(set.into_iter().map(|x| x as u32).collect());
            }
        }
        middle.push(faces);
    }
    build(dim + 1, n, middle)
}

/// Two vertices joined by two distinct edges: a valid rank-2 complex that is
/// not vertex-describable.
pub fn digon() -> IncidenceComplex {
    let faces = vec![(-1, None), (0, None), (0, None), (1, None), (1, None), (2, None)];
    let covers = vec![(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 5), (4, 5)];
    IncidenceComplex::from_parts(2, faces, covers).expect("digon is well formed")
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: u32, size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(start: u32, n: u32, size: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for x in start..n {
            current.push(x);
            rec(x + 1, n, size, current, out);
            current.pop();
        }
    }
    rec(0, n, size, &mut current, &mut out);
    out
}

/// Values a catalog entry is expected to reproduce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub f_vector: Vec<usize>,
    pub c_vector: Option<Vec<usize>>,
    pub aut_order: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub family: &'static str,
    pub parameter: Option<usize>,
    pub expected: Expected,
    /// Deliberately unusual fixture (e.g. not vertex-describable).
    pub negative: bool,
}

impl CatalogEntry {
    pub fn build(&self) -> IncidenceComplex {
        build_named(&self.name).expect("catalog entries have valid names")
    }
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// The standard fixture list.
pub fn entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let mut push = |name: &str, family, parameter, f: Vec<usize>, c: Option<Vec<usize>>, aut, negative| {
        out.push(CatalogEntry {
            name: name.to_string(),
            family,
            parameter,
            expected: Expected { f_vector: f, c_vector: c, aut_order: aut },
            negative,
        })
    };
    for v in [2usize, 3, 5] {
        push(&format!("edge{v}"), "edge", Some(v), vec![v], Some(vec![v]), factorial(v as u64), false);
    }
    push("polygon4", "polygon", Some(4), vec![4, 4], Some(vec![2, 2]), 8, false);
    push("polygon5", "polygon", Some(5), vec![5, 5], Some(vec![2, 2]), 10, false);
    for k in [2usize, 3] {
        let f = (0..k).map(|r| binomial(k as u64 + 1, r as u64 + 1) as usize).collect();
        push(&format!("simplex{k}"), "simplex", Some(k), f, Some(vec![2; k]), factorial(k as u64 + 1), false);
    }
    for k in [2usize, 3, 4] {
        let f = (0..k).map(|j| (binomial(k as u64, j as u64) << (k - j)) as usize).collect();
        push(&format!("cube{k}"), "cube", Some(k), f, Some(vec![2; k]), (1u64 << k) * factorial(k as u64), false);
    }
    push("cross4", "cross_polytope4", None, vec![8, 24, 32, 16], Some(vec![2; 4]), 384, false);
    push("fano", "fano_plane", None, vec![7, 7], Some(vec![3, 3]), 168, false);
    push("moebius-kantor", "moebius_kantor", None, vec![8, 8], Some(vec![3, 3]), 48, false);
    for s in [3usize, 4] {
        let s4 = s.pow(4);
        let f = (0..5).map(|j| binomial(4, j as u64) as usize * s4).collect();
        push(&format!("toroid{s}"), "cubical_toroid", Some(s), f, Some(vec![2; 5]), s4 as u64 * 384, false);
    }
    push("digon", "digon", None, vec![2, 2], Some(vec![2, 2]), 4, true);
    out
}

/// Builds a complex from a compact name such as `cube3`, `edge2`, `fano`.
pub fn build_named(name: &str) -> Result<IncidenceComplex> {
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (family, digits) = name.split_at(split);
    let param = if digits.is_empty() {
        None
    } else {
        Some(digits.parse::<usize>().map_err(|_| Error::Parse(format!("bad parameter in {name:?}")))?)
    };
    let need = |min: usize| -> Result<usize> {
        match param {
            Some(p) if p >= min => Ok(p),
            Some(p) => Err(Error::InvalidArgument(format!("{family} needs parameter >= {min}, got {p}"))),
            None => Err(Error::InvalidArgument(format!("{family} needs a numeric parameter, e.g. {family}{min}"))),
        }
    };
    Ok(match family {
        "edge" => edge(need(2)?),
        "polygon" => polygon(need(2)?),
        "simplex" => simplex(need(1)?),
        "cube" => cube(need(1)?),
        "cross" => cross_polytope(need(1)?),
        "toroid" => cubical_toroid(need(2)?),
        "fano" | "fano-plane" if param.is_none() => fano_plane(),
        "moebius-kantor" | "mk" if param.is_none() => moebius_kantor(),
        "digon" if param.is_none() => digon(),
        _ => return Err(Error::InvalidArgument(format!("unknown catalog entry {name:?}"))),
    })
}
