//! Named verification suites over fixed instances. Each check records a
//! JSON detail so failures come with their witness.

use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog;
use crate::complex::IncidenceComplex;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::morphism::{are_isomorphic, is_automorphism};
use crate::perm::{Permutation, PermutationGroup};
use crate::power::{
    lift_to_faces, power_complex, power_distinguished_subgroups, verify_power_aut, verify_skeleton_identity,
    wreath_group,
};
use crate::regular::{check_commutation, check_intersection_property, round_trip, GroupComplexSpec};
use crate::symmetry::{automorphism_group, is_flag_transitive};
use crate::twist::{
    generalized_power, universal_polytope, verify_subcomplex_theorem, verify_twist_recovery, verify_twist_skel,
};
use crate::validate::validate;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub instance: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

/// Suites run by `verify all`, in order.
pub const SUITES: &[&str] = &[
    "catalog",
    "power-aut",
    "power-subgroups",
    "wreath-transitive",
    "power-skeleton",
    "twist-recover",
    "twist-group",
    "twist-faces",
    "twist-skeleton",
    "simplex-powers",
];

/// A deliberately broken group system; this suite is expected to fail.
pub const NEGATIVE_CONTROL: &str = "control-corrupted";

struct Checks(Vec<CheckResult>);

impl Checks {
    fn push(&mut self, instance: impl Into<String>, passed: bool, detail: impl Serialize) {
        let detail = serde_json::to_value(detail).expect("reports serialize");
        self.0.push(CheckResult { instance: instance.into(), passed, detail });
    }
}

pub fn run_suite(name: &str, limits: &Limits) -> Result<SuiteReport> {
    let mut checks = Checks(Vec::new());
    match name {
        "catalog" => catalog_suite(&mut checks, limits)?,
        "power-aut" => {
            for (n, k, label) in [
                (2, catalog::edge(2), "2^edge2"),
                (3, catalog::edge(2), "3^edge2"),
                (2, catalog::simplex(2), "2^simplex2"),
                (2, catalog::polygon(4), "2^polygon4"),
            ] {
                let r = verify_power_aut(n, &k, limits)?;
                checks.push(label, r.passed(), &r);
            }
        }
        "power-subgroups" => {
            for (n, k, label) in [(3, catalog::edge(2), "3^edge2"), (2, catalog::simplex(2), "2^simplex2")] {
                let (_, r) = power_distinguished_subgroups(n, &k, limits)?;
                checks.push(label, r.passed() && r.r0_matches_v_minus_1, &r);
            }
        }
        "wreath-transitive" => {
            for (n, k, label) in [
                (2, catalog::simplex(2), "C2 wr Aut(simplex2)"),
                (3, catalog::edge(2), "C3 wr Aut(edge2)"),
                (2, catalog::fano_plane(), "C2 wr Aut(fano)"),
            ] {
                let (order, transitive, automorphisms) = wreath_check(n, &k, limits)?;
                checks.push(
                    label,
                    transitive && automorphisms,
                    json!({"order": order, "flag_transitive": transitive, "acts_by_automorphisms": automorphisms}),
                );
            }
        }
        "power-skeleton" => {
            for (n, k, j, label) in [
                (2, catalog::simplex(2), 0, "2^simplex2, j=0"),
                (2, catalog::fano_plane(), 0, "2^fano, j=0"),
                (3, catalog::simplex(1), 0, "3^simplex1, j=0"),
            ] {
                let r = verify_skeleton_identity(n, &k, j, limits)?;
                checks.push(label, r.passed(), &r);
            }
        }
        "twist-recover" => {
            for (n, k, label) in [
                (2, catalog::simplex(2), "2^simplex2"),
                (3, catalog::edge(2), "3^edge2"),
                (2, catalog::fano_plane(), "2^fano"),
            ] {
                let r = verify_twist_recovery(n, &k, None, limits)?;
                checks.push(label, r.passed(), &r);
            }
        }
        "twist-group" => {
            for (schlafli, k, label) in [
                (vec![3], catalog::simplex(2), "{3}^simplex2"),
                (vec![3], catalog::edge(3), "{3}^edge3"),
                (vec![3, 3], catalog::edge(2), "{3,3}^edge2"),
            ] {
                let t = generalized_power(&schlafli, &k, None, limits)?;
                let commutation = check_commutation(&t.spec)?.holds;
                let intersection = check_intersection_property(&t.spec)?.holds;
                let elementwise = t.elementwise_commutation(limits.group_order)?;
                let order_ok = t.group_order() == t.kernel_order * t.base_order;
                checks.push(
                    label,
                    commutation && intersection && elementwise && order_ok,
                    json!({
                        "group_order": t.group_order(),
                        "w_order": t.kernel_order,
                        "base_order": t.base_order,
                        "commutation": commutation,
                        "intersection": intersection,
                        "elementwise_commutation": elementwise,
                        "f_vector": t.complex.f_vector(),
                    }),
                );
            }
        }
        "twist-faces" => {
            for (schlafli, k, i, label) in [
                (vec![3], catalog::simplex(2), 1, "{3}^simplex2, i=1"),
                (vec![3], catalog::simplex(2), 2, "{3}^simplex2, i=2"),
                (vec![3], catalog::edge(3), 0, "{3}^edge3, co-face i=0"),
                (vec![3, 3], catalog::edge(2), 1, "{3,3}^edge2, i=1"),
            ] {
                let r = verify_subcomplex_theorem(&schlafli, &k, i, limits)?;
                checks.push(label, r.passed(), &r);
            }
        }
        "twist-skeleton" => {
            for (schlafli, k, j, label) in [
                (vec![3], catalog::simplex(2), 0, "{3}^simplex2, j=0"),
                (vec![3], catalog::simplex(2), 1, "{3}^simplex2, j=1"),
                (vec![3, 3], catalog::edge(2), 0, "{3,3}^edge2, j=0"),
            ] {
                let ok = verify_twist_skel(&schlafli, &k, j, limits)?;
                checks.push(label, ok, json!({"isomorphic": ok}));
            }
        }
        "simplex-powers" => {
            for (l, k, target, label) in [
                (vec![3], catalog::simplex(2), vec![3, 4, 3], "{3}^{3} = {3,4,3}"),
                (vec![3], catalog::simplex(1), vec![3, 4], "{3}^{} = {3,4}"),
                (vec![3, 3], catalog::simplex(1), vec![3, 3, 4], "{3,3}^{} = {3,3,4}"),
            ] {
                let t = generalized_power(&l, &k, None, limits)?;
                let u = universal_polytope(&target, limits)?;
                let iso = are_isomorphic(&t.complex, &u.complex, limits.search_nodes)?;
                let same_order = t.group_order() == u.group_order();
                checks.push(
                    label,
                    iso && same_order,
                    json!({
                        "group_order": t.group_order(),
                        "universal_order": u.group_order(),
                        "f_vector": t.complex.f_vector(),
                        "isomorphic": iso,
                    }),
                );
            }
        }
        NEGATIVE_CONTROL => {
            let spec = corrupted_spec()?;
            let c = check_commutation(&spec)?;
            let i = check_intersection_property(&spec)?;
            checks.push("S4 with R_2 = <(1 3)>", c.holds && i.holds, json!({"commutation": c, "intersection": i}));
        }
        _ => return Err(Error::InvalidArgument(format!("unknown suite {name:?}"))),
    }
    let checks = checks.0;
    Ok(SuiteReport { suite: name.to_string(), passed: checks.iter().all(|c| c.passed), checks })
}

/// Every entry validates with its expected vectors; regular entries
/// survive the group round trip; power complexes have `n^v` times the flags.
fn catalog_suite(checks: &mut Checks, limits: &Limits) -> Result<()> {
    for entry in catalog::entries() {
        let c = entry.build();
        let report = validate(&c);
        let ok = report.is_valid()
            && c.f_vector() == entry.expected.f_vector
            && report.c_vector.as_ref() == entry.expected.c_vector.as_ref();
        checks.push(format!("{} validates", entry.name), ok, &report);
        if entry.negative {
            continue;
        }
        let r = round_trip(&c, limits)?;
        checks.push(format!("{} round trip", entry.name), r.passed() && r.group_order == entry.expected.aut_order, &r);
    }
    for (n, k, label) in [
        (2, catalog::simplex(2), "2^simplex2"),
        (3, catalog::edge(2), "3^edge2"),
        (2, catalog::fano_plane(), "2^fano"),
        (3, catalog::fano_plane(), "3^fano"),
        (2, catalog::moebius_kantor(), "2^moebius-kantor"),
        (2, catalog::cross_polytope4(), "2^cross4"),
    ] {
        let p = power_complex(n, &k, limits.vertices)?.into_complex();
        let expected = (n as u128).pow(k.vertex_count() as u32) * k.flag_count();
        let flags = p.flag_count();
        checks.push(format!("{label} flags"), flags == expected, json!({"flags": flags, "expected": expected}));
    }
    Ok(())
}

fn wreath_check(n: usize, k: &IncidenceComplex, limits: &Limits) -> Result<(u64, bool, bool)> {
    let cycle = Permutation::from_images((0..n as u32).map(|x| (x + 1) % n as u32).collect())?;
    let cyclic = PermutationGroup::closure(n, vec![cycle], limits.group_order)?;
    let aut = automorphism_group(k, limits.search_nodes, limits.group_order)?;
    let group = wreath_group(n, &cyclic, k, &aut, limits.group_order)?;
    let power = power_complex(n, k, limits.vertices)?;
    let on_faces = lift_to_faces(&power, &PermutationGroup::new(group.degree(), group.generators().to_vec())?, 0)?;
    let automorphisms = on_faces.generators().iter().all(|g| is_automorphism(power.complex(), g.images()));
    Ok((group.order().expect("enumerated"), is_flag_transitive(&on_faces, power.complex()), automorphisms))
}

/// The tetrahedron group `S_4` with `R_2` replaced by `<(1 3)>`.
pub fn corrupted_spec() -> Result<GroupComplexSpec> {
    let t = |a: u32, b: u32| Permutation::from_cycles(4, &[&[a, b]]);
    let group = PermutationGroup::closure(4, vec![t(0, 1)?, t(1, 2)?, t(2, 3)?], 100)?;
    let trivial = PermutationGroup::trivial(4);
    Ok(GroupComplexSpec {
        group,
        subgroups: vec![
            trivial.clone(),
            PermutationGroup::new(4, vec![t(0, 1)?])?,
            PermutationGroup::new(4, vec![t(1, 2)?])?,
            PermutationGroup::new(4, vec![t(1, 3)?])?,
            trivial,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for name in ["power-aut", "power-subgroups", "twist-skeleton", "simplex-powers"] {
            let r = run_suite(name, &Limits::default()).unwrap();
            assert!(r.passed, "{}", serde_json::to_string_pretty(&r).unwrap());
        }
    }

    #[test]
    fn negative_control_fails_with_witness() {
        let r = run_suite(NEGATIVE_CONTROL, &Limits::default()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.checks[0].detail["commutation"]["failures"], json!([[0, 2]]));
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &Limits::default()), Err(Error::InvalidArgument(_))));
    }
}
