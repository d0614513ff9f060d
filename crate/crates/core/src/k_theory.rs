//! `K₀(S̄) ≅ Z⁶` in coordinates `(rank, c₁, χ)`.
//!
//! Products go through the Chern character. `ch₂` is only ever held doubled,
//! `2·ch₂ = 2(χ − rank) + K_S·c₁`, so every stored value stays integral.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::Serialize;

use crate::cohomology::{self, GLattice, Subgroup};
use crate::hexagon::{
    self, canonical_class, intersection_number, line_to_pic, symmetry_action, HexSymmetry,
    LineClass, PicClass,
};
use crate::lattice::{self, IntMatrix};
use crate::report::Report;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct KZeroClass {
    pub rank: i64,
    pub c1: PicClass,
    pub chi: i64,
}

impl KZeroClass {
    pub const ZERO: KZeroClass = KZeroClass {
        rank: 0,
        c1: PicClass::ZERO,
        chi: 0,
    };

    pub fn new(rank: i64, c1: PicClass, chi: i64) -> Self {
        KZeroClass { rank, c1, chi }
    }

    /// `[O_S]`.
    pub fn structure_sheaf() -> Self {
        class_of_line_bundle(PicClass::ZERO)
    }

    pub fn coords(&self) -> [i64; 6] {
        let [a, b, c, d] = self.c1.0;
        [self.rank, a, b, c, d, self.chi]
    }

    pub fn from_coords(v: [i64; 6]) -> Self {
        KZeroClass {
            rank: v[0],
            c1: PicClass([v[1], v[2], v[3], v[4]]),
            chi: v[5],
        }
    }

    fn twice_ch2(&self) -> i64 {
        2 * (self.chi - self.rank) + intersection_number(canonical_class(), self.c1)
    }

    /// Whether `c₂ = c₁²/2 − ch₂` is an integer.
    pub fn c2_is_integral(&self) -> bool {
        (intersection_number(self.c1, self.c1) - self.twice_ch2()) % 2 == 0
    }
}

impl Add for KZeroClass {
    type Output = KZeroClass;
    fn add(self, rhs: KZeroClass) -> KZeroClass {
        KZeroClass {
            rank: self.rank + rhs.rank,
            c1: self.c1 + rhs.c1,
            chi: self.chi + rhs.chi,
        }
    }
}

impl Sub for KZeroClass {
    type Output = KZeroClass;
    fn sub(self, rhs: KZeroClass) -> KZeroClass {
        self + (-rhs)
    }
}

impl Neg for KZeroClass {
    type Output = KZeroClass;
    fn neg(self) -> KZeroClass {
        KZeroClass {
            rank: -self.rank,
            c1: -self.c1,
            chi: -self.chi,
        }
    }
}

impl std::iter::Sum for KZeroClass {
    fn sum<I: Iterator<Item = KZeroClass>>(iter: I) -> KZeroClass {
        iter.fold(KZeroClass::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for KZeroClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(rank {}, c1 {}, chi {})", self.rank, self.c1, self.chi)
    }
}

/// `[L(D)]`, with `χ` from Riemann–Roch and `χ(O_S) = 1`.
pub fn class_of_line_bundle(d: PicClass) -> KZeroClass {
    let twice = intersection_number(d, d) - intersection_number(canonical_class(), d);
    assert!(twice % 2 == 0, "D² − K·D is even on every surface");
    KZeroClass {
        rank: 1,
        c1: d,
        chi: 1 + twice / 2,
    }
}

pub fn k0_product(a: KZeroClass, b: KZeroClass) -> KZeroClass {
    let rank = a.rank * b.rank;
    let c1 = a.rank * b.c1 + b.rank * a.c1;
    let twice_ch2 =
        a.rank * b.twice_ch2() + b.rank * a.twice_ch2() + 2 * intersection_number(a.c1, b.c1);
    let twice_chi = 2 * rank + twice_ch2 - intersection_number(canonical_class(), c1);
    debug_assert!(twice_chi % 2 == 0);
    KZeroClass {
        rank,
        c1,
        chi: twice_chi / 2,
    }
}

pub fn class_of_point() -> KZeroClass {
    KZeroClass {
        rank: 0,
        c1: PicClass::ZERO,
        chi: 1,
    }
}

/// `[O_D] = [O_S] − [L(−D)]`.
pub fn class_of_curve(d: PicClass) -> KZeroClass {
    KZeroClass::structure_sheaf() - class_of_line_bundle(-d)
}

pub fn k0_galois_action(s: &HexSymmetry, a: KZeroClass) -> KZeroClass {
    KZeroClass {
        rank: a.rank,
        c1: symmetry_action(s, a.c1),
        chi: a.chi,
    }
}

fn pic(lines: &[LineClass]) -> PicClass {
    lines.iter().map(|&l| line_to_pic(l)).sum()
}

fn l(i: usize) -> LineClass {
    LineClass::l(i)
}

fn m(i: usize) -> LineClass {
    LineClass::m(i)
}

/// The six generators `[O_S]`, `[L(−m₁−l₀−m₂)]`, `[L(−l₁−m₀−l₂)]`,
/// `[L(−l₀−m₁)]`, `[L(−l₀−m₂)]`, `[L(−l₁−m₂)]`.
pub fn phi_generators() -> [KZeroClass; 6] {
    [
        KZeroClass::structure_sheaf(),
        class_of_line_bundle(-pic(&[m(1), l(0), m(2)])),
        class_of_line_bundle(-pic(&[l(1), m(0), l(2)])),
        class_of_line_bundle(-pic(&[l(0), m(1)])),
        class_of_line_bundle(-pic(&[l(0), m(2)])),
        class_of_line_bundle(-pic(&[l(1), m(2)])),
    ]
}

/// Rows are [`phi_generators`] in `(rank, c₁, χ)` coordinates.
pub fn phi_generator_matrix() -> IntMatrix {
    let rows: Vec<[i64; 6]> = phi_generators().iter().map(KZeroClass::coords).collect();
    IntMatrix::from_rows(&rows)
}

/// Classes of `O_{l₀} ⊕ O_{m₁}`, `O_{l₀} ⊕ O_{m₂}`, `O_{l₁} ⊕ O_{m₂}`,
/// `O_{m₁} ⊕ O_{l₀} ⊕ O_{m₂}`, `O_{l₁} ⊕ O_{m₀} ⊕ O_{l₂}`.
///
/// The set is permuted by every symmetry but satisfies one relation: the sum
/// of the first three equals the sum of the last two. Together with `[O_P]`
/// it generates `K₀⁽¹⁾`.
pub fn permuted_rank_zero_classes() -> [KZeroClass; 5] {
    let curves = |ls: &[LineClass]| ls.iter().map(|&x| class_of_curve(line_to_pic(x))).sum();
    [
        curves(&[l(0), m(1)]),
        curves(&[l(0), m(2)]),
        curves(&[l(1), m(2)]),
        curves(&[m(1), l(0), m(2)]),
        curves(&[l(1), m(0), l(2)]),
    ]
}

/// `K₀(S̄)` with the Galois action.
pub fn k0_lattice(group: &Subgroup) -> GLattice {
    GLattice::new(group.clone(), 6, |s| {
        let cols: Vec<[i64; 6]> = (0..6)
            .map(|j| {
                let mut e = [0; 6];
                e[j] = 1;
                k0_galois_action(s, KZeroClass::from_coords(e)).coords()
            })
            .collect();
        IntMatrix::from_columns(6, &cols)
    })
    .expect("Galois action on K₀")
}

/// Saturated basis (columns of a 6×5 matrix) of `K₀⁽¹⁾`, the rank-zero classes.
pub fn filtration_one_matrix() -> IntMatrix {
    lattice::kernel_basis(&IntMatrix::from_rows(&[[1, 0, 0, 0, 0, 0]]))
}

fn columns(classes: &[KZeroClass]) -> IntMatrix {
    let cols: Vec<[i64; 6]> = classes.iter().map(KZeroClass::coords).collect();
    IntMatrix::from_columns(6, &cols)
}

pub fn filtration_one_lattice(group: &Subgroup) -> GLattice {
    k0_lattice(group)
        .sublattice(&filtration_one_matrix())
        .expect("K₀⁽¹⁾ is stable")
}

/// `K₀⁽²⁾ = Z·[O_P]`.
pub fn filtration_two_lattice(group: &Subgroup) -> GLattice {
    let point = IntMatrix::from_columns(6, &[class_of_point().coords()]);
    k0_lattice(group)
        .sublattice(&point)
        .expect("the point class is invariant")
}

/// Resolutions, the filtration sequences, unimodularity of the generators,
/// and the permutation basis of `K₀⁽¹⁾`.
pub fn verify_k_theory() -> Report {
    let mut report = Report::default();
    let o = KZeroClass::structure_sheaf();
    let lb = |ls: &[LineClass]| class_of_line_bundle(-pic(ls));

    let det = phi_generator_matrix().determinant().expect("square");
    report.push(
        "generator matrix is unimodular",
        det == 1.into() || det == (-1).into(),
        format!("det {det}"),
    );

    let mut bad = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let point = o - lb(&[l(i)]) - lb(&[m(j)]) + lb(&[l(i), m(j)]);
            if point != class_of_point() {
                bad.push(format!("O_P via l{i}, m{j}"));
            }
            if o - lb(&[m(i)]) - lb(&[m(j)]) + lb(&[m(i), m(j)]) != KZeroClass::ZERO {
                bad.push(format!("skew m{i}, m{j}"));
            }
            if o - lb(&[l(i)]) - lb(&[l(j)]) + lb(&[l(i), l(j)]) != KZeroClass::ZERO {
                bad.push(format!("skew l{i}, l{j}"));
            }
        }
    }
    for line in LineClass::ALL {
        let d = line_to_pic(line);
        if class_of_curve(d) + class_of_line_bundle(-d) != o {
            bad.push(format!("O_{line}"));
        }
    }
    report.push(
        "point, skew-line and divisor resolutions",
        bad.is_empty(),
        bad.join(", "),
    );

    // O_{l_k} from the twisted skew-line relation, for {i, j, k} = {0, 1, 2}.
    let mut bad = Vec::new();
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        let via = o - lb(&[l(k), m(i)]) - lb(&[l(k), m(j)]) + lb(&[m(i), l(k), m(j)]);
        let swapped = o - lb(&[m(k), l(i)]) - lb(&[m(k), l(j)]) + lb(&[l(i), m(k), l(j)]);
        if via != class_of_curve(line_to_pic(l(k))) {
            bad.push(format!("O_l{k}"));
        }
        if swapped != class_of_curve(line_to_pic(m(k))) {
            bad.push(format!("O_m{k}"));
        }
    }
    report.push(
        "curve classes from twisted relations",
        bad.is_empty(),
        bad.join(", "),
    );

    let phi = phi_generator_matrix().transpose();
    let targets: Vec<[i64; 6]> = LineClass::ALL
        .iter()
        .map(|&x| class_of_curve(line_to_pic(x)).coords())
        .chain([class_of_point().coords()])
        .collect();
    let in_span = matches!(
        lattice::solve_in_basis(&phi, &IntMatrix::from_columns(6, &targets)),
        Ok(Some(_))
    );
    report.push(
        "curve and point classes lie in the generated lattice",
        in_span,
        "",
    );

    // 0 → K₀⁽¹⁾ → K₀ → Z → 0 and 0 → K₀⁽²⁾ → K₀⁽¹⁾ → Pic → 0.
    let f1 = filtration_one_matrix();
    let rank_map = IntMatrix::from_rows(&[[1, 0, 0, 0, 0, 0]]);
    let five = permuted_rank_zero_classes();
    let relation = five[0] + five[1] + five[2] - five[3] - five[4];
    report.push(
        "relation among the five permuted classes",
        relation == KZeroClass::ZERO,
        relation.to_string(),
    );
    let mut gens = five.to_vec();
    gens.push(class_of_point());
    let generated = columns(&gens);
    let spans = match lattice::solve_in_basis(&f1, &generated) {
        Ok(Some(coords)) => lattice::is_surjective(&coords),
        _ => false,
    };
    report.push(
        "the five classes and the point class generate K₀⁽¹⁾",
        spans,
        format!("rank of the five alone: {}", columns(&five).rank()),
    );
    report.push(
        "rank sequence exact",
        lattice::is_exact_pair(&f1, &rank_map).unwrap_or(false)
            && lattice::is_surjective(&rank_map),
        "",
    );
    let wedge = {
        let mut w = IntMatrix::zeros(4, f1.cols());
        for i in 0..4 {
            for j in 0..f1.cols() {
                w[(i, j)] = f1[(i + 1, j)].clone();
            }
        }
        w
    };
    let point_coords = lattice::solve_in_basis(
        &f1,
        &IntMatrix::from_columns(6, &[class_of_point().coords()]),
    )
    .ok()
    .flatten();
    let wedge_ok = match &point_coords {
        Some(p) => {
            lattice::is_injective(p)
                && lattice::is_exact_pair(p, &wedge).unwrap_or(false)
                && lattice::is_surjective(&wedge)
        }
        None => false,
    };
    report.push("first Chern class sequence exact", wedge_ok, "");

    let mut bad = Vec::new();
    let mut sorted_five: Vec<[i64; 6]> = five.iter().map(KZeroClass::coords).collect();
    sorted_five.sort_unstable();
    for s in HexSymmetry::all() {
        let mut img: Vec<[i64; 6]> = five
            .iter()
            .map(|&c| k0_galois_action(&s, c).coords())
            .collect();
        img.sort_unstable();
        if img != sorted_five {
            bad.push(s.to_string());
        }
        if k0_galois_action(&s, class_of_point()) != class_of_point() {
            bad.push(format!("{s} moves the point class"));
        }
    }
    report.push(
        "the five classes are permuted by every symmetry",
        bad.is_empty(),
        bad.join(", "),
    );

    let mut bad = Vec::new();
    for g in cohomology::enumerate_subgroups() {
        if !cohomology::lattice_h1(&filtration_one_lattice(&g)).is_trivial()
            || !cohomology::lattice_h1(&filtration_two_lattice(&g)).is_trivial()
        {
            bad.push(g.to_string());
        }
    }
    report.push(
        "H¹ of both filtration pieces vanishes",
        bad.is_empty(),
        bad.join(", "),
    );
    report
}

/// The anticanonical hexagon: `[O_S] − [L(K_S)]` is the class of the sum of the lines.
pub fn anticanonical_curve() -> KZeroClass {
    class_of_curve(-hexagon::canonical_class())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn line_bundle_examples() {
        assert_eq!(
            class_of_line_bundle(PicClass::ZERO),
            KZeroClass::new(1, PicClass::ZERO, 1)
        );
        let l0 = line_to_pic(l(0));
        assert_eq!(class_of_line_bundle(-l0), KZeroClass::new(1, -l0, 0));
        assert_eq!(
            class_of_line_bundle(-PicClass::H),
            KZeroClass::new(1, -PicClass::H, 0)
        );
    }

    #[test]
    fn product_examples() {
        let a = class_of_line_bundle(PicClass([2, -1, 0, 3]));
        assert_eq!(k0_product(a, KZeroClass::structure_sheaf()), a);
        let m0 = line_to_pic(m(0));
        let m1 = line_to_pic(m(1));
        assert_eq!(
            k0_product(class_of_line_bundle(-m0), class_of_line_bundle(-m1)),
            class_of_line_bundle(-m0 - m1)
        );
        assert_eq!(
            k0_product(class_of_point(), class_of_point()),
            KZeroClass::ZERO
        );
    }

    #[test]
    fn curve_and_point() {
        let l0 = line_to_pic(l(0));
        assert_eq!(class_of_curve(l0), KZeroClass::new(0, l0, 1));
        let o = KZeroClass::structure_sheaf();
        let lb = |d: PicClass| class_of_line_bundle(-d);
        let m1 = line_to_pic(m(1));
        assert_eq!(o - lb(l0) - lb(m1) + lb(l0 + m1), class_of_point());
        let m0 = line_to_pic(m(0));
        assert_eq!(o - lb(m0) - lb(m1) + lb(m0 + m1), KZeroClass::ZERO);
    }

    #[test]
    fn generator_matrix() {
        let g = phi_generator_matrix();
        assert_eq!(g.to_i64_rows()[0], vec![1, 0, 0, 0, 0, 1]);
        assert_eq!(g.to_i64_rows()[1], vec![1, -1, 0, 0, 0, 0]);
        assert_eq!(
            phi_generators()[2],
            class_of_line_bundle(PicClass([-2, 1, 1, 1]))
        );
        assert_eq!(phi_generators()[2].chi, 0);
        assert_eq!(g.determinant().unwrap().magnitude(), &1u32.into());
    }

    #[test]
    fn galois_examples() {
        let a = class_of_line_bundle(PicClass([1, 2, 3, 4]));
        assert_eq!(k0_galois_action(&HexSymmetry::IDENTITY, a), a);
        assert_eq!(
            k0_galois_action(&HexSymmetry::SWAP, class_of_curve(line_to_pic(l(0)))),
            class_of_curve(line_to_pic(m(0)))
        );
        let basis = permuted_rank_zero_classes();
        assert_eq!(basis[0], KZeroClass::new(0, PicClass([1, 0, 0, -1]), 2));
        assert_eq!(basis[3], KZeroClass::new(0, PicClass::H, 3));
        assert_eq!(basis[4], KZeroClass::new(0, PicClass([2, -1, -1, -1]), 3));
        for s in HexSymmetry::all() {
            let mut img: Vec<[i64; 6]> = basis
                .iter()
                .map(|&b| k0_galois_action(&s, b).coords())
                .collect();
            let mut orig: Vec<[i64; 6]> = basis.iter().map(KZeroClass::coords).collect();
            img.sort();
            orig.sort();
            assert_eq!(img, orig, "{s}");
        }
    }

    #[test]
    fn full_verification() {
        let r = verify_k_theory();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn anticanonical_curve_has_arithmetic_genus_one() {
        // χ(O_C) = 0 for a curve of arithmetic genus one.
        let c = anticanonical_curve();
        assert_eq!(c.rank, 0);
        assert_eq!(c.chi, 0);
    }

    fn class() -> impl Strategy<Value = KZeroClass> {
        prop::array::uniform6(-6i64..6).prop_map(KZeroClass::from_coords)
    }

    proptest! {
        #[test]
        fn every_lattice_point_has_integral_c2(a in class()) {
            prop_assert!(a.c2_is_integral());
        }

        #[test]
        fn product_is_commutative_and_equivariant(a in class(), b in class(), s in 0usize..12) {
            let s = HexSymmetry::all()[s];
            prop_assert_eq!(k0_product(a, b), k0_product(b, a));
            prop_assert_eq!(
                k0_galois_action(&s, k0_product(a, b)),
                k0_product(k0_galois_action(&s, a), k0_galois_action(&s, b))
            );
        }

        #[test]
        fn product_is_associative(a in class(), b in class(), c in class()) {
            prop_assert_eq!(k0_product(k0_product(a, b), c), k0_product(a, k0_product(b, c)));
        }

        #[test]
        fn line_bundles_multiply_by_adding_divisors(
            d in prop::array::uniform4(-5i64..5), e in prop::array::uniform4(-5i64..5)
        ) {
            let (d, e) = (PicClass(d), PicClass(e));
            prop_assert_eq!(
                k0_product(class_of_line_bundle(d), class_of_line_bundle(e)),
                class_of_line_bundle(d + e)
            );
        }
    }
}
