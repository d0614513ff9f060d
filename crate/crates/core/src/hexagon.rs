//! The split sextic del Pezzo surface: the hexagon of lines, its Picard
//! lattice, the `S₂ × S₃` symmetry and the character lattice of the torus.
//!
//! Coordinates on `Pic` are taken in the blow-up basis `(H, E₀, E₁, E₂)` of
//! the contraction of `m₀, m₁, m₂`. The six lines are always ordered
//! `l₀, l₁, l₂, m₀, m₁, m₂`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::lattice::{self, IntMatrix};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LineKind {
    L,
    M,
}

/// One of the six exceptional curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LineClass {
    kind: LineKind,
    index: usize,
}

impl LineClass {
    pub const ALL: [LineClass; 6] = [
        LineClass {
            kind: LineKind::L,
            index: 0,
        },
        LineClass {
            kind: LineKind::L,
            index: 1,
        },
        LineClass {
            kind: LineKind::L,
            index: 2,
        },
        LineClass {
            kind: LineKind::M,
            index: 0,
        },
        LineClass {
            kind: LineKind::M,
            index: 1,
        },
        LineClass {
            kind: LineKind::M,
            index: 2,
        },
    ];

    pub fn l(index: usize) -> Self {
        assert!(index < 3, "line index out of range");
        LineClass {
            kind: LineKind::L,
            index,
        }
    }

    pub fn m(index: usize) -> Self {
        assert!(index < 3, "line index out of range");
        LineClass {
            kind: LineKind::M,
            index,
        }
    }

    pub fn kind(self) -> LineKind {
        self.kind
    }

    pub fn index(self) -> usize {
        self.index
    }

    /// Position in the fixed ordering `l₀, l₁, l₂, m₀, m₁, m₂`.
    pub fn ordinal(self) -> usize {
        match self.kind {
            LineKind::L => self.index,
            LineKind::M => 3 + self.index,
        }
    }

    pub fn from_ordinal(i: usize) -> Self {
        Self::ALL[i]
    }
}

impl fmt::Display for LineClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            LineKind::L => 'l',
            LineKind::M => 'm',
        };
        write!(f, "{k}{}", self.index)
    }
}

/// A divisor class in `Pic(S̄) ≅ Z⁴`, basis `(H, E₀, E₁, E₂)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PicClass(pub [i64; 4]);

impl PicClass {
    pub const ZERO: PicClass = PicClass([0; 4]);
    pub const H: PicClass = PicClass([1, 0, 0, 0]);

    pub fn e(i: usize) -> Self {
        let mut c = [0; 4];
        c[1 + i] = 1;
        PicClass(c)
    }

    pub fn coords(&self) -> [i64; 4] {
        self.0
    }

    pub fn to_column(&self) -> IntMatrix {
        IntMatrix::from_i64(4, 1, &self.0)
    }
}

impl Add for PicClass {
    type Output = PicClass;
    fn add(self, rhs: PicClass) -> PicClass {
        PicClass(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for PicClass {
    type Output = PicClass;
    fn sub(self, rhs: PicClass) -> PicClass {
        PicClass(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for PicClass {
    type Output = PicClass;
    fn neg(self) -> PicClass {
        PicClass(self.0.map(|x| -x))
    }
}

impl Mul<PicClass> for i64 {
    type Output = PicClass;
    fn mul(self, rhs: PicClass) -> PicClass {
        PicClass(rhs.0.map(|x| self * x))
    }
}

impl std::iter::Sum for PicClass {
    fn sum<I: Iterator<Item = PicClass>>(iter: I) -> PicClass {
        iter.fold(PicClass::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

/// Symmetric bilinear form on `Pic`, given by its Gram matrix in the blow-up basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    gram: [[i64; 4]; 4],
}

impl IntersectionForm {
    /// `H² = 1`, `Eᵢ² = −1`, mixed products zero.
    pub const STANDARD: IntersectionForm = IntersectionForm {
        gram: [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]],
    };

    pub fn from_gram(gram: [[i64; 4]; 4]) -> Self {
        IntersectionForm { gram }
    }

    pub fn gram(&self) -> [[i64; 4]; 4] {
        self.gram
    }

    pub fn pair(&self, a: PicClass, b: PicClass) -> i64 {
        let mut s = 0;
        for i in 0..4 {
            for j in 0..4 {
                s += a.0[i] * self.gram[i][j] * b.0[j];
            }
        }
        s
    }

    /// The 6×6 table of products of line classes.
    pub fn line_table(&self) -> [[i64; 6]; 6] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                self.pair(
                    line_to_pic(LineClass::ALL[i]),
                    line_to_pic(LineClass::ALL[j]),
                )
            })
        })
    }
}

impl Default for IntersectionForm {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// The intersection table of the hexagon read off combinatorially: `−1` on the
/// diagonal, `1` for `lᵢ·mⱼ` with `i ≠ j`, zero otherwise.
pub fn expected_line_table() -> [[i64; 6]; 6] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (a, b) = (LineClass::ALL[i], LineClass::ALL[j]);
            if a == b {
                -1
            } else if a.kind != b.kind && a.index != b.index {
                1
            } else {
                0
            }
        })
    })
}

pub fn line_to_pic(line: LineClass) -> PicClass {
    match (line.kind, line.index) {
        (LineKind::M, i) => PicClass::e(i),
        (LineKind::L, i) => {
            let mut c = [1, -1, -1, -1];
            c[1 + i] = 0;
            PicClass(c)
        }
    }
}

pub fn intersection_number(a: PicClass, b: PicClass) -> i64 {
    IntersectionForm::STANDARD.pair(a, b)
}

/// `K_S = −3H + E₀ + E₁ + E₂`.
pub fn canonical_class() -> PicClass {
    PicClass([-3, 1, 1, 1])
}

/// The 4×6 matrix of `Z[KL/F] → Pic(S̄)`, columns in line order.
pub fn line_map_matrix() -> IntMatrix {
    let cols: Vec<[i64; 4]> = LineClass::ALL.iter().map(|&l| line_to_pic(l).0).collect();
    IntMatrix::from_columns(4, &cols)
}

/// An element of `S₂ × S₃` acting on the hexagon. The `S₂` factor exchanges
/// `lᵢ ↔ mᵢ`; the `S₃` factor permutes indices diagonally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HexSymmetry {
    pub swap: bool,
    pub perm: [usize; 3],
}

const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl HexSymmetry {
    pub const IDENTITY: HexSymmetry = HexSymmetry {
        swap: false,
        perm: [0, 1, 2],
    };
    pub const SWAP: HexSymmetry = HexSymmetry {
        swap: true,
        perm: [0, 1, 2],
    };

    pub fn new(swap: bool, perm: [usize; 3]) -> Option<Self> {
        PERMS3.contains(&perm).then_some(HexSymmetry { swap, perm })
    }

    /// All twelve elements, identity first, in a fixed order.
    pub fn all() -> Vec<HexSymmetry> {
        [false, true]
            .into_iter()
            .flat_map(|swap| {
                PERMS3
                    .into_iter()
                    .map(move |perm| HexSymmetry { swap, perm })
            })
            .collect()
    }

    /// Position of `self` in [`HexSymmetry::all`].
    pub fn ordinal(&self) -> usize {
        let p = PERMS3
            .iter()
            .position(|q| *q == self.perm)
            .expect("valid permutation");
        usize::from(self.swap) * 6 + p
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &HexSymmetry) -> HexSymmetry {
        HexSymmetry {
            swap: self.swap ^ other.swap,
            perm: std::array::from_fn(|i| self.perm[other.perm[i]]),
        }
    }

    pub fn inverse(&self) -> HexSymmetry {
        let mut inv = [0; 3];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        HexSymmetry {
            swap: self.swap,
            perm: inv,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn act_on_line(&self, line: LineClass) -> LineClass {
        let kind = match (line.kind, self.swap) {
            (k, false) => k,
            (LineKind::L, true) => LineKind::M,
            (LineKind::M, true) => LineKind::L,
        };
        LineClass {
            kind,
            index: self.perm[line.index],
        }
    }

    /// Permutation matrix on `Z[KL/F] = Z⁶`.
    pub fn line_matrix(&self) -> IntMatrix {
        permutation_matrix(6, |i| self.act_on_line(LineClass::ALL[i]).ordinal())
    }

    /// Action on `Z[K/F] = Z²`, the two triangles `{lᵢ}` and `{mᵢ}`.
    pub fn triangle_matrix(&self) -> IntMatrix {
        permutation_matrix(2, |i| if self.swap { 1 - i } else { i })
    }

    /// Action on `Z[L/F] = Z³`, the pairs `{lᵢ, mᵢ}`.
    pub fn pair_matrix(&self) -> IntMatrix {
        permutation_matrix(3, |i| self.perm[i])
    }

    /// Action on `Pic` in the blow-up basis, extended linearly from the lines
    /// through `Eᵢ = [mᵢ]` and `H = [m₁] + [l₀] + [m₂]`.
    pub fn pic_matrix(&self) -> [[i64; 4]; 4] {
        let img = |l: LineClass| line_to_pic(self.act_on_line(l));
        let h = img(LineClass::m(1)) + img(LineClass::l(0)) + img(LineClass::m(2));
        let cols = [
            h,
            img(LineClass::m(0)),
            img(LineClass::m(1)),
            img(LineClass::m(2)),
        ];
        std::array::from_fn(|i| std::array::from_fn(|j| cols[j].0[i]))
    }

    pub fn pic_int_matrix(&self) -> IntMatrix {
        let m = self.pic_matrix();
        IntMatrix::from_rows(&m)
    }
}

impl fmt::Display for HexSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.perm;
        write!(f, "{}({a}{b}{c})", if self.swap { "σ" } else { "" })
    }
}

fn permutation_matrix(n: usize, image: impl Fn(usize) -> usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for j in 0..n {
        m[(image(j), j)] = 1.into();
    }
    m
}

pub fn symmetry_action(s: &HexSymmetry, a: PicClass) -> PicClass {
    let m = s.pic_matrix();
    PicClass(std::array::from_fn(|i| {
        (0..4).map(|j| m[i][j] * a.0[j]).sum()
    }))
}

/// Saturated rank-2 basis (columns, 6×2) of the kernel of `Z[KL/F] → Pic`.
pub fn character_lattice_basis() -> IntMatrix {
    lattice::kernel_basis(&line_map_matrix())
}

/// `Z[KL/F] → Z[K/F] ⊕ Z[L/F]`: each line to its triangle and its pair.
/// Rows: triangle of the `l`s, triangle of the `m`s, then pairs 0, 1, 2.
pub fn lines_to_triangles_and_pairs() -> IntMatrix {
    let mut m = IntMatrix::zeros(5, 6);
    for line in LineClass::ALL {
        let j = line.ordinal();
        let tri = match line.kind {
            LineKind::L => 0,
            LineKind::M => 1,
        };
        m[(tri, j)] = 1.into();
        m[(2 + line.index, j)] = 1.into();
    }
    m
}

/// Difference of augmentations `Z[K/F] ⊕ Z[L/F] → Z`.
pub fn augmentation_difference() -> IntMatrix {
    IntMatrix::from_rows(&[[1, 1, -1, -1, -1]])
}

/// `Zⁿ → Zⁿ/Z·(1,…,1) ≅ Zⁿ⁻¹`, `x ↦ (xᵢ − xₙ)ᵢ`.
pub fn diagonal_quotient(n: usize) -> IntMatrix {
    let mut p = IntMatrix::zeros(n - 1, n);
    for i in 0..n - 1 {
        p[(i, i)] = 1.into();
        p[(i, n - 1)] = (-1).into();
    }
    p
}

/// A set-theoretic section `Zⁿ⁻¹ → Zⁿ` of [`diagonal_quotient`].
fn diagonal_section(n: usize) -> IntMatrix {
    let mut s = IntMatrix::zeros(n, n - 1);
    for i in 0..n - 1 {
        s[(i, i)] = 1.into();
    }
    s
}

/// Induced action on `Zⁿ/Z` of a permutation action on `Zⁿ`.
fn quotient_action(rho: &IntMatrix) -> IntMatrix {
    let n = rho.rows();
    &(&diagonal_quotient(n) * rho) * &diagonal_section(n)
}

fn stable(basis: &IntMatrix, rho: &IntMatrix) -> bool {
    let image = rho * basis;
    matches!(lattice::solve_in_basis(basis, &image), Ok(Some(_)))
}

fn commutes(map: &IntMatrix, rho_src: &IntMatrix, rho_dst: &IntMatrix) -> bool {
    (map * rho_src) == (rho_dst * map)
}

/// Exactness and equivariance of
/// `0 → T̂ → Z[KL/F] → Z[K/F] ⊕ Z[L/F] → Z → 0` and of its quotient by the
/// diagonal copies of `Z`, plus surjectivity of `Z[KL/F] → Pic`.
pub fn verify_module_sequences() -> Report {
    let mut report = Report::default();
    let t_hat = character_lattice_basis();
    let to_pic = line_map_matrix();
    let to_kl = lines_to_triangles_and_pairs();
    let aug = augmentation_difference();

    report.push(
        "T̂ has rank 2",
        t_hat.cols() == 2,
        format!("rank {}", t_hat.cols()),
    );
    report.push(
        "Z[KL/F] → Pic(S̄) is onto",
        lattice::is_surjective(&to_pic),
        lattice::cokernel(&to_pic).to_string(),
    );
    report.push(
        "Picard sequence exact at Z[KL/F]",
        lattice::is_exact_pair(&t_hat, &to_pic).unwrap_or(false),
        "",
    );

    // First sequence.
    report.push("sequence 1 exact at T̂", lattice::is_injective(&t_hat), "");
    report.push(
        "sequence 1 exact at Z[KL/F]",
        lattice::is_exact_pair(&t_hat, &to_kl).unwrap_or(false),
        "",
    );
    report.push(
        "sequence 1 exact at Z[K/F] ⊕ Z[L/F]",
        lattice::is_exact_pair(&to_kl, &aug).unwrap_or(false),
        "",
    );
    report.push("sequence 1 exact at Z", lattice::is_surjective(&aug), "");

    // Second sequence, on the quotients by the diagonal Z.
    let p6 = diagonal_quotient(6);
    let p23 = diagonal_quotient(2).direct_sum(&diagonal_quotient(3));
    let t_bar = &p6 * &t_hat;
    let kl_bar = &(&p23 * &to_kl) * &diagonal_section(6);
    report.push(
        "quotient map is well defined",
        &kl_bar * &p6 == &p23 * &to_kl,
        "",
    );
    report.push("sequence 2 exact at T̂", lattice::is_injective(&t_bar), "");
    report.push(
        "sequence 2 exact at Z[KL/F]/Z",
        lattice::is_exact_pair(&t_bar, &kl_bar).unwrap_or(false),
        "",
    );
    report.push(
        "sequence 2 right map onto",
        lattice::is_surjective(&kl_bar),
        "",
    );

    // Equivariance of every map under all twelve symmetries.
    let mut bad = Vec::new();
    for s in HexSymmetry::all() {
        let r6 = s.line_matrix();
        let r23 = s.triangle_matrix().direct_sum(&s.pair_matrix());
        let r_pic = s.pic_int_matrix();
        let ok = stable(&t_hat, &r6)
            && commutes(&to_pic, &r6, &r_pic)
            && commutes(&to_kl, &r6, &r23)
            && commutes(&aug, &r23, &IntMatrix::identity(1))
            && stable(&t_bar, &quotient_action(&r6))
            && commutes(&kl_bar, &quotient_action(&r6), &{
                let q2 = quotient_action(&s.triangle_matrix());
                let q3 = quotient_action(&s.pair_matrix());
                q2.direct_sum(&q3)
            });
        if !ok {
            bad.push(s.to_string());
        }
    }
    report.push(
        "all maps commute with the 12 symmetries",
        bad.is_empty(),
        if bad.is_empty() {
            String::new()
        } else {
            format!("fails for {}", bad.join(", "))
        },
    );
    report
}

/// Checks of the intersection theory against a given form: the line table,
/// `K_S² = 6`, and invariance of the form under the symmetry group.
pub fn verify_intersection_theory(form: &IntersectionForm) -> Report {
    let mut report = Report::default();
    let table = form.line_table();
    report.push(
        "line intersection table",
        table == expected_line_table(),
        format!("{table:?}"),
    );
    let k = canonical_class();
    let k2 = form.pair(k, k);
    report.push("K_S² = 6", k2 == 6, format!("K_S² = {k2}"));
    let hexagon_sum: PicClass = LineClass::ALL.iter().map(|&l| line_to_pic(l)).sum();
    report.push(
        "K_S = −(sum of the six lines)",
        hexagon_sum == -k,
        hexagon_sum.to_string(),
    );
    let basis = [PicClass::H, PicClass::e(0), PicClass::e(1), PicClass::e(2)];
    let preserved = HexSymmetry::all().iter().all(|s| {
        symmetry_action(s, k) == k
            && basis.iter().all(|&a| {
                basis.iter().all(|&b| {
                    form.pair(symmetry_action(s, a), symmetry_action(s, b)) == form.pair(a, b)
                })
            })
    });
    report.push("symmetries preserve the form and K_S", preserved, "");
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn line_images() {
        assert_eq!(line_to_pic(LineClass::m(0)), PicClass([0, 1, 0, 0]));
        assert_eq!(line_to_pic(LineClass::l(0)), PicClass([1, 0, -1, -1]));
        let total: PicClass = LineClass::ALL.iter().map(|&l| line_to_pic(l)).sum();
        assert_eq!(total, PicClass([3, -1, -1, -1]));
    }

    #[test]
    fn intersection_examples() {
        let l0 = line_to_pic(LineClass::l(0));
        assert_eq!(intersection_number(l0, l0), -1);
        assert_eq!(intersection_number(l0, line_to_pic(LineClass::m(1))), 1);
        assert_eq!(intersection_number(l0, line_to_pic(LineClass::m(0))), 0);
        let k = canonical_class();
        assert_eq!(k, PicClass([-3, 1, 1, 1]));
        assert_eq!(intersection_number(k, k), 6);
        assert_eq!(
            IntersectionForm::STANDARD.line_table(),
            expected_line_table()
        );
    }

    #[test]
    fn canonical_class_is_fixed() {
        for s in HexSymmetry::all() {
            assert_eq!(symmetry_action(&s, canonical_class()), canonical_class());
        }
    }

    #[test]
    fn swap_sends_m0_to_l0() {
        assert_eq!(
            symmetry_action(&HexSymmetry::IDENTITY, PicClass([5, 1, -2, 7])),
            PicClass([5, 1, -2, 7])
        );
        let img = symmetry_action(&HexSymmetry::SWAP, line_to_pic(LineClass::m(0)));
        assert_eq!(img, PicClass([1, 0, -1, -1]));
    }

    #[test]
    fn linear_extension_agrees_on_every_line() {
        for s in HexSymmetry::all() {
            for l in LineClass::ALL {
                assert_eq!(
                    symmetry_action(&s, line_to_pic(l)),
                    line_to_pic(s.act_on_line(l)),
                    "{s} on {l}"
                );
            }
        }
    }

    #[test]
    fn action_is_a_homomorphism() {
        let all = HexSymmetry::all();
        assert_eq!(all.len(), 12);
        for a in &all {
            for b in &all {
                let ab = a.compose(b);
                let lhs = IntMatrix::from_rows(&ab.pic_matrix());
                let rhs =
                    &IntMatrix::from_rows(&a.pic_matrix()) * &IntMatrix::from_rows(&b.pic_matrix());
                assert_eq!(lhs, rhs);
                assert_eq!(ab.line_matrix(), &a.line_matrix() * &b.line_matrix());
            }
            assert!(a.compose(&a.inverse()).is_identity());
        }
    }

    #[test]
    fn character_lattice() {
        let t = character_lattice_basis();
        assert_eq!(t.cols(), 2);
        let gen = IntMatrix::from_columns(6, &[[1, -1, 0, -1, 1, 0]]);
        assert!(lattice::solve_in_basis(&t, &gen).unwrap().is_some());
        let other = IntMatrix::from_columns(6, &[[0, 1, -1, 0, -1, 1]]);
        assert!(lattice::solve_in_basis(&t, &other).unwrap().is_some());
        assert!((&line_map_matrix() * &t).is_zero());
    }

    #[test]
    fn opposite_line_bundles_agree() {
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let a = line_to_pic(LineClass::l(i)) + line_to_pic(LineClass::m(j));
                let b = line_to_pic(LineClass::l(j)) + line_to_pic(LineClass::m(i));
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn sequences_verify() {
        let r = verify_module_sequences();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn corrupted_form_is_caught() {
        let mut g = IntersectionForm::STANDARD.gram();
        g[1][1] = -2;
        let r = verify_intersection_theory(&IntersectionForm::from_gram(g));
        assert!(!r.all_passed());
        assert!(verify_intersection_theory(&IntersectionForm::STANDARD).all_passed());
    }

    fn pic() -> impl Strategy<Value = PicClass> {
        prop::array::uniform4(-20i64..20).prop_map(PicClass)
    }

    proptest! {
        #[test]
        fn symmetries_are_isometries(s in 0usize..12, a in pic(), b in pic()) {
            let s = HexSymmetry::all()[s];
            prop_assert_eq!(
                intersection_number(symmetry_action(&s, a), symmetry_action(&s, b)),
                intersection_number(a, b)
            );
        }
    }
}
