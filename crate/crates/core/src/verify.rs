//! The eight verification suites, each returning a [`Report`].

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::brauer::{
    check_bound, check_psi_all, cor_trivial_classes, enumerate_towers, enumerate_valid_pairs,
    same_surface, BrauerClass, EtaleAlgebra, GlobalFieldModel, GroupElement, Qz, SurfaceData,
    Tower,
};
use crate::cohomology::{self, Subgroup};
use crate::error::BrauerError;
use crate::hexagon::{self, HexSymmetry, IntersectionForm};
use crate::index_reduction::{
    algebras_over_base, case_formula, case_formula_without_split_terms, case_of, reduced_index,
    Case, CentralSimpleData,
};
use crate::involution;
use crate::k_theory;
use crate::lattice::{self, IntMatrix};
use crate::par::{self, Execution};
use crate::report::Report;

/// Largest orbit allowed for the action on `(B, Q)`.
pub const MAX_ORBIT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub bound: u32,
    pub max_places: usize,
    pub execution: Execution,
    pub form: IntersectionForm,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            bound: 6,
            max_places: 3,
            execution: Execution::default(),
            form: IntersectionForm::STANDARD,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub number: usize,
    pub title: &'static str,
    pub report: Report,
}

pub const TITLES: [&str; 8] = [
    "intersection table",
    "lattice sequences",
    "cohomology vanishing",
    "K₀ basis",
    "divisibility of matching pairs",
    "orbits and equivalence",
    "index reduction",
    "involution",
];

/// Runs criterion `number` (1 to 8).
pub fn criterion(number: usize, opts: &VerifyOptions) -> Result<Criterion, BrauerError> {
    check_bound(opts.bound)?;
    let report = match number {
        1 => intersection_table(&opts.form),
        2 => lattice_sequences(),
        3 => cohomology_vanishing(),
        4 => k_zero_basis(),
        5 => divisibility(opts)?,
        6 => orbits(opts)?,
        7 => index_reduction(opts)?,
        8 => involution::verify_hermitian_identity(),
        _ => panic!("criteria are numbered 1 to 8"),
    };
    Ok(Criterion {
        number,
        title: TITLES[number - 1],
        report,
    })
}

pub fn all_criteria(opts: &VerifyOptions) -> Result<Vec<Criterion>, BrauerError> {
    (1..=8).map(|n| criterion(n, opts)).collect()
}

pub fn intersection_table(form: &IntersectionForm) -> Report {
    hexagon::verify_intersection_theory(form)
}

pub fn lattice_sequences() -> Report {
    let mut report = hexagon::verify_module_sequences();
    let basis = hexagon::character_lattice_basis();
    let wanted = IntMatrix::from_columns(6, &[[1, -1, 0, -1, 1, 0], [0, 1, -1, 0, -1, 1]]);
    let contained = matches!(lattice::solve_in_basis(&basis, &wanted), Ok(Some(_)));
    report.push(
        "T̂ contains l₀ − l₁ − (m₀ − m₁) and l₁ − l₂ − (m₁ − m₂)",
        contained,
        "",
    );
    report
}

pub fn cohomology_vanishing() -> Report {
    let mut report = Report::default();
    let groups = cohomology::enumerate_subgroups();
    report.push(
        "16 subgroups of S₂ × S₃",
        groups.len() == 16,
        format!("{} found", groups.len()),
    );
    type Builder = fn(&Subgroup) -> cohomology::GLattice;
    let modules: [(&str, Builder); 5] = [
        ("Z[KL/F]", cohomology::lines_lattice),
        ("Z[K/F]", cohomology::triangles_lattice),
        ("Z[L/F]", cohomology::pairs_lattice),
        ("K₀⁽¹⁾", k_theory::filtration_one_lattice),
        ("K₀⁽²⁾", k_theory::filtration_two_lattice),
    ];
    for (name, build) in modules {
        let bad: Vec<String> = groups
            .iter()
            .filter_map(|g| {
                let h1 = cohomology::lattice_h1(&build(g));
                (!h1.is_trivial()).then(|| format!("{g}: {h1}"))
            })
            .collect();
        report.push(
            format!("H¹(G, {name}) = 0 for all G"),
            bad.is_empty(),
            bad.join("; "),
        );
    }
    let s2 = Subgroup::generated_by(&[HexSymmetry::SWAP]);
    let h1 = cohomology::lattice_h1(&cohomology::sign_lattice(&s2));
    report.push(
        "H¹(S₂, Z with sign action) = Z/2",
        h1 == lattice::FinAbGroup::cyclic(2),
        h1.to_string(),
    );
    report
}

pub fn k_zero_basis() -> Report {
    let mut report = k_theory::verify_k_theory();
    let p = k_theory::class_of_point();
    report.push(
        "[O_P] = (0, 0, 1)",
        p.coords() == [0, 0, 0, 0, 0, 1],
        p.to_string(),
    );
    report
}

fn towers(opts: &VerifyOptions) -> Vec<Arc<Tower>> {
    enumerate_towers(opts.max_places)
}

fn summarize(failures: Vec<String>) -> (bool, String) {
    let n = failures.len();
    match failures.into_iter().next() {
        None => (true, String::new()),
        Some(first) => (false, format!("{n} failures, first: {first}")),
    }
}

pub fn divisibility(opts: &VerifyOptions) -> Result<Report, BrauerError> {
    let towers = towers(opts);
    let checks = check_psi_all(&towers, opts.bound, opts.execution)?;
    let matches: usize = checks.iter().map(|c| c.matches).sum();
    let failures: Vec<String> = checks
        .iter()
        .zip(&towers)
        .flat_map(|(c, t)| {
            c.failures
                .iter()
                .map(move |f| format!("{}: {f}", describe(t)))
        })
        .collect();
    let (ok, detail) = summarize(failures);
    let mut report = Report::default();
    report.push(
        "matching pairs satisfy 3x = 0, 2y = 0, trivial restriction, and are exactly the valid pairs",
        ok,
        if ok { format!("{} towers, {matches} matching pairs", towers.len()) } else { detail },
    );
    Ok(report)
}

fn describe(t: &Tower) -> String {
    let shape = |a: &EtaleAlgebra| {
        a.components()
            .iter()
            .map(|c| format!("{:?}", c.splitting))
            .collect::<Vec<_>>()
            .join(" × ")
    };
    format!(
        "{} places, K {}, L {}",
        t.model.len(),
        shape(&t.k),
        shape(&t.l)
    )
}

#[derive(Default)]
struct OrbitTally {
    pairs: usize,
    largest: usize,
    failures: Vec<String>,
}

fn orbit_checks(t: &Arc<Tower>, bound: u32) -> Result<OrbitTally, BrauerError> {
    let mut tally = OrbitTally::default();
    for x in cor_trivial_classes(&t.k, &t.k_over_f, bound)? {
        if t.k_conjugation_pushforward(&x) != x.neg() {
            tally.failures.push(format!("σ★x ≠ −x for x = {x}"));
        }
    }
    let surfaces = enumerate_valid_pairs(t, bound)?;
    tally.pairs = surfaces.len();
    let key = |s: &SurfaceData| (s.b().clone(), s.q().clone());
    let index: std::collections::HashMap<_, usize> = surfaces
        .iter()
        .enumerate()
        .map(|(i, s)| (key(s), i))
        .collect();
    let orbits: Vec<BTreeSet<usize>> = surfaces
        .iter()
        .map(|s| {
            s.orbit()
                .into_iter()
                .map(|p| *index.get(&p).expect("orbits stay among valid pairs"))
                .collect()
        })
        .collect();
    for (i, s) in surfaces.iter().enumerate() {
        let orbit = &orbits[i];
        tally.largest = tally.largest.max(orbit.len());
        if orbit.len() > MAX_ORBIT {
            tally
                .failures
                .push(format!("orbit of size {} at {}", orbit.len(), s.b()));
        }
        let twice = s
            .g_action(GroupElement::KConjugation)?
            .g_action(GroupElement::KConjugation)?;
        if twice != *s {
            tally
                .failures
                .push("K-generator is not an involution".into());
        }
        // Reflexive, symmetric and transitive: same_surface agrees with orbit
        // membership, and orbits are either equal or disjoint.
        if !same_surface(s, s)? || !orbit.contains(&i) {
            tally.failures.push(format!("not reflexive at {}", s.b()));
        }
        for &j in orbit {
            if !same_surface(s, &surfaces[j])?
                || !same_surface(&surfaces[j], s)?
                || orbits[j] != *orbit
            {
                tally.failures.push(format!(
                    "symmetry or transitivity fails between {i} and {j}"
                ));
            }
        }
        for (j, other) in surfaces.iter().enumerate().skip(i + 1).step_by(7).take(4) {
            if same_surface(s, other)? != orbit.contains(&j) {
                tally
                    .failures
                    .push(format!("same_surface disagrees with the orbit at {i}, {j}"));
            }
        }
    }
    Ok(tally)
}

pub fn orbits(opts: &VerifyOptions) -> Result<Report, BrauerError> {
    let towers = towers(opts);
    let tallies: Vec<OrbitTally> =
        par::map(&towers, opts.execution, |t| orbit_checks(t, opts.bound))
            .into_iter()
            .collect::<Result<_, _>>()?;
    let pairs: usize = tallies.iter().map(|t| t.pairs).sum();
    let largest = tallies.iter().map(|t| t.largest).max().unwrap_or(0);
    let (ok, detail) = summarize(tallies.into_iter().flat_map(|t| t.failures).collect());
    let mut report = Report::default();
    report.push(
        format!("orbits have at most {MAX_ORBIT} elements, σ★ = negation, same_surface is an equivalence"),
        ok,
        if ok { format!("{pairs} valid pairs, largest orbit {largest}") } else { detail },
    );
    Ok(report)
}

#[derive(Default)]
struct ReductionTally {
    evaluations: usize,
    case_v: usize,
    split_pairs: usize,
    failures: Vec<String>,
}

fn reduction_checks(
    t: &Arc<Tower>,
    algebras: &[CentralSimpleData],
    bound: u32,
) -> Result<ReductionTally, BrauerError> {
    let mut tally = ReductionTally::default();
    for s in enumerate_valid_pairs(t, bound)? {
        let case = case_of(&s);
        for d in algebras {
            tally.evaluations += 1;
            let r = reduced_index(d, &s);
            let ind = d.index();
            let mut fail = |what: &str| {
                tally.failures.push(format!(
                    "{what}: D = {}, B = {}, Q = {}",
                    d.class(),
                    s.b(),
                    s.q()
                ))
            };
            if ind % r != 0 {
                fail("reduced index does not divide ind D");
            }
            if r != case_formula(d, &s) {
                fail("rank route and case formula differ");
            }
            if r != case_formula_without_split_terms(d, &s) {
                fail("dropping split terms changes the result");
            }
            if case == Case::V && r != ind {
                fail("case v does not return ind D");
            }
            if s.has_rational_point() && r != ind {
                fail("B = Q = 0 does not return ind D");
            }
            if reduced_index(&d.scaled(2), &s) != r {
                fail("scaling the degree changes the result");
            }
        }
        if case == Case::V {
            tally.case_v += 1;
        }
        if s.has_rational_point() {
            tally.split_pairs += 1;
        }
    }
    Ok(tally)
}

/// The worked model: `K` split, inert, split and `L` inert, split, split at
/// three places; `B` is `1/3, 2/3` over the first place, `Q` is `1/2` at two
/// places over the second; `D` has invariants `1/2, 1/2, 0` and degree 2.
pub fn worked_model() -> (SurfaceData, CentralSimpleData) {
    use crate::brauer::Component;
    let m = GlobalFieldModel::numbered(3);
    let k = EtaleAlgebra::new(
        &m,
        2,
        vec![Component {
            degree: 2,
            splitting: vec![vec![1, 1], vec![2], vec![1, 1]],
        }],
    )
    .expect("quadratic");
    let l = EtaleAlgebra::new(
        &m,
        3,
        vec![Component {
            degree: 3,
            splitting: vec![vec![3], vec![1, 1, 1], vec![1, 1, 1]],
        }],
    )
    .expect("cubic");
    let t = Arc::new(Tower::new(m.clone(), k, l, None).expect("tower"));
    let half = Qz::new(1, 2);
    let b = BrauerClass::new(
        &t.k,
        vec![Qz::new(1, 3), Qz::new(2, 3), Qz::ZERO, Qz::ZERO, Qz::ZERO],
    )
    .expect("B");
    let q = BrauerClass::new(
        &t.l,
        vec![Qz::ZERO, half, half, Qz::ZERO, Qz::ZERO, Qz::ZERO, Qz::ZERO],
    )
    .expect("Q");
    let s = SurfaceData::new(t, b, q).expect("worked model is valid");
    let f = EtaleAlgebra::base(&m);
    let d = CentralSimpleData::new(
        &m,
        BrauerClass::new(&f, vec![half, half, Qz::ZERO]).expect("D"),
        2,
    )
    .expect("D");
    (s, d)
}

pub fn index_reduction(opts: &VerifyOptions) -> Result<Report, BrauerError> {
    let mut report = Report::default();
    let (s, d) = worked_model();
    let r = reduced_index(&d, &s);
    report.push(
        "worked model reduces ind 2 to 2",
        r == 2,
        format!("reduced index {r}"),
    );

    let towers = towers(opts);
    let algebras: Vec<Vec<CentralSimpleData>> = (1..=opts.max_places)
        .map(|n| algebras_over_base(&GlobalFieldModel::numbered(n), opts.bound))
        .collect::<Result<_, _>>()?;
    let tallies: Vec<ReductionTally> = par::map(&towers, opts.execution, |t| {
        reduction_checks(t, &algebras[t.model.len() - 1], opts.bound)
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let evaluations: usize = tallies.iter().map(|t| t.evaluations).sum();
    let case_v: usize = tallies.iter().map(|t| t.case_v).sum();
    let split: usize = tallies.iter().map(|t| t.split_pairs).sum();
    let (ok, detail) = summarize(tallies.into_iter().flat_map(|t| t.failures).collect());
    report.push(
        "case v and B = Q = 0 give ind D; split terms can be dropped; the result divides ind D; both routes agree",
        ok && case_v > 0 && split > 0,
        if ok { format!("{evaluations} evaluations, {case_v} case v pairs, {split} split pairs") } else { detail },
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        let opts = VerifyOptions::default();
        for n in [1, 2, 3, 4, 8] {
            let c = criterion(n, &opts).unwrap();
            assert!(c.report.all_passed(), "criterion {n}:\n{}", c.report);
        }
    }

    #[test]
    fn enumeration_criteria_on_two_places() {
        let opts = VerifyOptions {
            max_places: 2,
            ..VerifyOptions::default()
        };
        for n in [5, 6, 7] {
            let c = criterion(n, &opts).unwrap();
            assert!(c.report.all_passed(), "criterion {n}:\n{}", c.report);
        }
    }

    #[test]
    fn corrupted_form_fails_criterion_one() {
        let mut gram = IntersectionForm::STANDARD.gram();
        gram[1][2] = 1;
        gram[2][1] = 1;
        let opts = VerifyOptions {
            form: IntersectionForm::from_gram(gram),
            ..VerifyOptions::default()
        };
        assert!(!criterion(1, &opts).unwrap().report.all_passed());
    }

    #[test]
    fn bad_bound_is_rejected() {
        let opts = VerifyOptions {
            bound: 5,
            ..VerifyOptions::default()
        };
        assert_eq!(criterion(1, &opts), Err(BrauerError::BadBound(5)));
    }
}
