//! The trace-form involution on `B = M₃(K)` in the split model `K = F × F`,
//! `L = F³`: elements are pairs `(M, N)` and `τ(M, N) = (Nᵀ, Mᵀ)`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::report::Report;

pub type Mat3 = [[BigRational; 3]; 3];

/// An element `(M, N)` of `M₃(F) × M₃(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitElement {
    pub m: Mat3,
    pub n: Mat3,
}

fn zero3() -> Mat3 {
    std::array::from_fn(|_| std::array::from_fn(|_| BigRational::zero()))
}

fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(BigRational::zero(), |s, k| s + &a[i][k] * &b[k][j]))
    })
}

fn transpose(a: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

/// The all-ones matrix.
pub fn all_ones() -> Mat3 {
    std::array::from_fn(|_| std::array::from_fn(|_| BigRational::one()))
}

impl SplitElement {
    pub fn zero() -> Self {
        SplitElement {
            m: zero3(),
            n: zero3(),
        }
    }

    pub fn one() -> Self {
        let id: Mat3 = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
        });
        SplitElement {
            m: id.clone(),
            n: id,
        }
    }

    /// `t = (J, J)`, the trace map in the idempotent basis.
    pub fn t() -> Self {
        SplitElement {
            m: all_ones(),
            n: all_ones(),
        }
    }

    /// The 18 matrix units `(E_ij, 0)` then `(0, E_ij)`.
    pub fn basis() -> Vec<SplitElement> {
        let unit = |i: usize, j: usize| {
            let mut e = zero3();
            e[i][j] = BigRational::one();
            e
        };
        let mut out = Vec::with_capacity(18);
        for side in 0..2 {
            for i in 0..3 {
                for j in 0..3 {
                    let e = unit(i, j);
                    out.push(if side == 0 {
                        SplitElement { m: e, n: zero3() }
                    } else {
                        SplitElement { m: zero3(), n: e }
                    });
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &SplitElement) -> SplitElement {
        SplitElement {
            m: mat_mul(&self.m, &other.m),
            n: mat_mul(&self.n, &other.n),
        }
    }

    pub fn add(&self, other: &SplitElement) -> SplitElement {
        SplitElement {
            m: std::array::from_fn(|i| std::array::from_fn(|j| &self.m[i][j] + &other.m[i][j])),
            n: std::array::from_fn(|i| std::array::from_fn(|j| &self.n[i][j] + &other.n[i][j])),
        }
    }

    pub fn tau(&self) -> SplitElement {
        SplitElement {
            m: transpose(&self.n),
            n: transpose(&self.m),
        }
    }

    /// Reduced trace, an element of `K = F × F`.
    pub fn trd(&self) -> (BigRational, BigRational) {
        let tr = |a: &Mat3| (0..3).fold(BigRational::zero(), |s, i| s + &a[i][i]);
        (tr(&self.m), tr(&self.n))
    }

    /// Coordinates in [`SplitElement::basis`].
    pub fn coords(&self) -> Vec<BigRational> {
        self.m
            .iter()
            .flatten()
            .chain(self.n.iter().flatten())
            .cloned()
            .collect()
    }

    /// `L = F³` embedded as diagonal pairs `(D, D)`; basis idempotents.
    pub fn l_basis() -> Vec<SplitElement> {
        (0..3)
            .map(|i| {
                let mut d = zero3();
                d[i][i] = BigRational::one();
                SplitElement { m: d.clone(), n: d }
            })
            .collect()
    }
}

/// Reduced row echelon form over `Q`; returns the nonzero rows.
fn row_reduce(mut rows: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

pub fn span_dimension(vectors: &[Vec<BigRational>]) -> usize {
    row_reduce(vectors.to_vec()).len()
}

/// Basis of the rational null space of `rows`.
fn null_space(rows: &[Vec<BigRational>], width: usize) -> Vec<Vec<BigRational>> {
    let rref = row_reduce(rows.to_vec());
    let pivots: Vec<usize> = rref
        .iter()
        .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    (0..width)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); width];
            v[free] = BigRational::one();
            for (row, &p) in rref.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

fn intersection_dimension(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> usize {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    span_dimension(a) + span_dimension(b) - span_dimension(&all)
}

/// Basis of `Sym(B, τ)` over `F`, as coordinate vectors.
fn symmetric_basis() -> Vec<Vec<BigRational>> {
    let basis = SplitElement::basis();
    let rows: Vec<Vec<BigRational>> = basis.iter().map(|e| e.add(&e.tau()).coords()).collect();
    row_reduce(rows)
}

/// Basis of `F ⊕ L^⊥`, with `L^⊥` the symmetric `x` with `Trd(l·x) = 0` for
/// every `l ∈ L`.
fn f_plus_l_perp_basis(sym: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    // Coefficients c with Σ cᵢ symᵢ orthogonal to L; one equation per (l, factor).
    let elements: Vec<SplitElement> = sym.iter().map(|v| from_coords(v)).collect();
    let mut equations = Vec::new();
    for l in SplitElement::l_basis() {
        let traces: Vec<(BigRational, BigRational)> =
            elements.iter().map(|x| l.mul(x).trd()).collect();
        equations.push(traces.iter().map(|(a, _)| a.clone()).collect::<Vec<_>>());
        equations.push(traces.iter().map(|(_, b)| b.clone()).collect::<Vec<_>>());
    }
    let mut out: Vec<Vec<BigRational>> = null_space(&equations, sym.len())
        .into_iter()
        .map(|c| {
            (0..18)
                .map(|k| {
                    c.iter()
                        .zip(sym)
                        .fold(BigRational::zero(), |s, (ci, v)| s + ci * &v[k])
                })
                .collect()
        })
        .collect();
    out.push(SplitElement::one().coords());
    row_reduce(out)
}

fn from_coords(v: &[BigRational]) -> SplitElement {
    SplitElement {
        m: std::array::from_fn(|i| std::array::from_fn(|j| v[3 * i + j].clone())),
        n: std::array::from_fn(|i| std::array::from_fn(|j| v[9 + 3 * i + j].clone())),
    }
}

/// `τ(t) = t`; `t·B·t = span_K(t)` with `(t·B·t) ∩ Sym = span_F(t)`; and
/// `span_F(t) ⊂ F ⊕ L^⊥`.
pub fn verify_hermitian_identity() -> Report {
    let mut report = Report::default();
    let t = SplitElement::t();
    let basis = SplitElement::basis();

    let anti = basis.iter().all(|a| {
        basis
            .iter()
            .all(|b| a.mul(b).tau() == b.tau().mul(&a.tau()))
    }) && basis.iter().all(|a| a.tau().tau() == *a);
    let fixes_l = SplitElement::l_basis().iter().all(|l| l.tau() == *l);
    report.push(
        "τ is an anti-automorphism of order 2 fixing L",
        anti && fixes_l,
        "",
    );

    report.push("τ(t) = t", t.tau() == t, "");

    let ideal: Vec<Vec<BigRational>> = basis.iter().map(|x| t.mul(x).mul(&t).coords()).collect();
    let k_span = [
        SplitElement {
            m: all_ones(),
            n: zero3(),
        }
        .coords(),
        SplitElement {
            m: zero3(),
            n: all_ones(),
        }
        .coords(),
    ];
    let mut joined = ideal.clone();
    joined.extend(k_span.iter().cloned());
    let ideal_dim = span_dimension(&ideal);
    let is_k_span = ideal_dim == 2 && span_dimension(&joined) == 2;
    let sym = symmetric_basis();
    let meet = intersection_dimension(&ideal, &sym);
    let t_in_sym = intersection_dimension(&[t.coords()], &sym) == 1;
    report.push(
        "t·B·t = span_K(t) and its symmetric part is span_F(t)",
        is_k_span && meet == 1 && t_in_sym,
        format!(
            "dim_F t·B·t = {ideal_dim}, dim_F of the symmetric part = {meet}, dim_F Sym = {}",
            sym.len()
        ),
    );

    let perp = f_plus_l_perp_basis(&sym);
    let diag_constant = {
        let j = all_ones();
        (0..3).all(|i| j[i][i] == j[0][0])
    };
    report.push(
        "span_F(t) ⊂ F ⊕ L^⊥",
        intersection_dimension(&[t.coords()], &perp) == 1 && diag_constant,
        format!("dim_F (F ⊕ L^⊥) = {}", perp.len()),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn hermitian_identity_holds() {
        let r = verify_hermitian_identity();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.checks.len(), 4);
    }

    #[test]
    fn dimensions() {
        let sym = symmetric_basis();
        assert_eq!(sym.len(), 9);
        assert_eq!(f_plus_l_perp_basis(&sym).len(), 7);
    }

    #[test]
    fn sandwich_of_a_matrix_unit() {
        let e11 = &SplitElement::basis()[0];
        let t = SplitElement::t();
        let p = t.mul(e11).mul(&t);
        assert_eq!(
            p,
            SplitElement {
                m: all_ones(),
                n: zero3()
            }
        );
    }

    proptest! {
        #[test]
        fn ones_sandwich_is_entry_sum(entries in prop::array::uniform9(-20i64..20)) {
            let m: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| rat(entries[3 * i + j])));
            let j = all_ones();
            let sum: i64 = entries.iter().sum();
            let expected: Mat3 = std::array::from_fn(|_| std::array::from_fn(|_| rat(sum)));
            prop_assert_eq!(mat_mul(&mat_mul(&j, &m), &j), expected);
        }
    }
}
