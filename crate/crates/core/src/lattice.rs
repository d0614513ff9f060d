//! Exact integer matrix algebra.
//!
//! Everything above this module reduces to questions about Z-linear maps
//! between small free lattices: kernels, images, cokernels and exactness.
//! All arithmetic is done with [`BigInt`] so that intermediate entries of
//! the Smith reduction can grow freely.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::LatticeError;

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major entries; fails unless `entries.len() == rows * cols`.
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LatticeError> {
        if entries.len() != rows * cols {
            return Err(LatticeError::EntryCount {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count must be rows * cols"
        );
        IntMatrix {
            rows,
            cols,
            entries: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// Rows given as slices; an empty list yields a 0×0 matrix.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            entries.extend(r.as_ref().iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// Matrix whose columns are the given vectors, all of length `len`.
    pub fn from_columns<C: AsRef<[i64]>>(len: usize, columns: &[C]) -> Self {
        let mut m = Self::zeros(len, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.as_ref().len(), len, "column length mismatch");
            for (i, &x) in c.as_ref().iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Entries as `i64`, panicking on overflow. Only used for small, known-bounded matrices.
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_i64().expect("entry fits in i64"))
                    .collect()
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Submatrix made of the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            entries.extend_from_slice(self.row(i));
        }
        IntMatrix {
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<Self, LatticeError> {
        if self.rows != other.rows {
            return Err(LatticeError::DimensionMismatch {
                op: "hstack",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(m)
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<Self, LatticeError> {
        if self.cols != other.cols {
            return Err(LatticeError::DimensionMismatch {
                op: "vstack",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Block diagonal `diag(self, other)`.
    pub fn direct_sum(&self, other: &IntMatrix) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<Self, LatticeError> {
        if self.cols != rhs.rows {
            return Err(LatticeError::DimensionMismatch {
                op: "multiply",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &IntMatrix) -> Result<Self, LatticeError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LatticeError::DimensionMismatch {
                op: "subtract",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn rank(&self) -> usize {
        let rows = independent_rows(self);
        rows.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * factor;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * factor;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i).to_vec()))
            .finish()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A finitely generated abelian group `Z^free_rank ⊕ Z/d₁ ⊕ … ⊕ Z/d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        FinAbGroup {
            invariant_factors: Vec::new(),
            free_rank: 0,
        }
    }

    /// Fails unless every factor is at least 2 and each divides the next.
    pub fn new(invariant_factors: Vec<BigInt>, free_rank: usize) -> Result<Self, LatticeError> {
        let two = BigInt::from(2);
        for (i, d) in invariant_factors.iter().enumerate() {
            if d < &two {
                return Err(LatticeError::BadInvariantFactor(d.clone()));
            }
            if let Some(next) = invariant_factors.get(i + 1) {
                if !(next % d).is_zero() {
                    return Err(LatticeError::DivisibilityChain);
                }
            }
        }
        Ok(FinAbGroup {
            invariant_factors,
            free_rank,
        })
    }

    pub fn cyclic(n: u64) -> Self {
        match n {
            0 => FinAbGroup {
                invariant_factors: Vec::new(),
                free_rank: 1,
            },
            1 => Self::trivial(),
            _ => FinAbGroup {
                invariant_factors: vec![BigInt::from(n)],
                free_rank: 0,
            },
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `dᵢ | dᵢ₊₁`, `dᵢ ≥ 0`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        diagonal_rank(&self.d)
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

fn diagonal_rank(d: &IntMatrix) -> usize {
    (0..d.rows.min(d.cols))
        .take_while(|&i| !d[(i, i)].is_zero())
        .count()
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (u, d, v) = snf_core(m, true, true);
    SmithForm {
        u: u.expect("tracked"),
        d,
        v: v.expect("tracked"),
    }
}

/// Smallest nonzero |entry| in the block `a[t.., t..]`, ties to the lowest (row, col).
fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let abs = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                best = Some((i, j, abs));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn snf_core(
    m: &IntMatrix,
    track_u: bool,
    track_v: bool,
) -> (Option<IntMatrix>, IntMatrix, Option<IntMatrix>) {
    let mut a = m.clone();
    let mut u = track_u.then(|| IntMatrix::identity(m.rows));
    let mut v = track_v.then(|| IntMatrix::identity(m.cols));
    let steps = m.rows.min(m.cols);

    for t in 0..steps {
        loop {
            let Some((pi, pj)) = find_pivot(&a, t) else {
                return (u, a, v);
            };
            a.swap_rows(t, pi);
            if let Some(u) = u.as_mut() {
                u.swap_rows(t, pi);
            }
            a.swap_cols(t, pj);
            if let Some(v) = v.as_mut() {
                v.swap_cols(t, pj);
            }

            let pivot = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..a.rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&pivot);
                a.add_row_multiple(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, t, &q);
                }
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..a.cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&pivot);
                a.add_col_multiple(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, t, &q);
                }
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            // Row t and column t are clear; enforce the divisibility chain.
            let offender = (t + 1..a.rows)
                .flat_map(|i| (t + 1..a.cols).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[(i, j)] % &pivot).is_zero());
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    if let Some(u) = u.as_mut() {
                        u.add_row_multiple(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
    }
    (u, a, v)
}

const MODULUS: u64 = (1 << 61) - 1;

fn mod_p(x: &BigInt) -> u64 {
    let p = BigInt::from(MODULUS);
    x.mod_floor(&p)
        .to_u64()
        .expect("reduced residue fits in u64")
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    r
}

/// Indices of a maximal set of rows that are linearly independent modulo a
/// large prime (hence over Q). Zero rows and rows repeating an earlier row up
/// to sign are skipped without elimination.
fn independent_rows(m: &IntMatrix) -> Vec<usize> {
    let mut seen = std::collections::HashSet::new();
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new(); // (pivot column, normalized row)
    let mut chosen = Vec::new();
    for i in 0..m.rows {
        let row = m.row(i);
        let Some(first) = row.iter().find(|x| !x.is_zero()) else {
            continue;
        };
        let key: Vec<BigInt> = if first.is_negative() {
            row.iter().map(|x| -x).collect()
        } else {
            row.to_vec()
        };
        if !seen.insert(key) {
            continue;
        }
        let mut r: Vec<u64> = row.iter().map(mod_p).collect();
        for (pc, b) in &basis {
            let f = r[*pc];
            if f != 0 {
                for (x, y) in r.iter_mut().zip(b) {
                    *x = (*x + MODULUS - mul_mod(f, *y)) % MODULUS;
                }
            }
        }
        if let Some(pc) = r.iter().position(|&x| x != 0) {
            let inv = pow_mod(r[pc], MODULUS - 2);
            for x in r.iter_mut() {
                *x = mul_mod(*x, inv);
            }
            basis.push((pc, r));
            chosen.push(i);
        }
    }
    chosen
}

fn kernel_from_snf(m: &IntMatrix) -> IntMatrix {
    let (_, d, v) = snf_core(m, false, true);
    let v = v.expect("tracked");
    let r = diagonal_rank(&d);
    let cols: Vec<usize> = (r..m.cols).collect();
    v.select_columns(&cols)
}

/// Z-basis of `{x : M·x = 0}` as the columns of the result, in column Hermite
/// normal form. The basis spans a saturated sublattice.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let rows = independent_rows(m);
    let raw = if rows.len() < m.rows {
        let k = kernel_from_snf(&m.select_rows(&rows));
        // A row wrongly dropped (prime dividing a minor) shows up here.
        if (m * &k).is_zero() {
            k
        } else {
            kernel_from_snf(m)
        }
    } else {
        kernel_from_snf(m)
    };
    hermite_columns(&raw)
}

/// Column-style Hermite normal form of a full-column-rank matrix: the unique
/// basis of the column lattice whose transpose is in row echelon form with
/// positive pivots and reduced entries above each pivot.
pub fn hermite_columns(basis: &IntMatrix) -> IntMatrix {
    let mut a = basis.transpose();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        // Euclid down the column until one nonzero entry remains at row r.
        loop {
            let pivot = (r..a.rows)
                .filter(|&i| !a[(i, c)].is_zero())
                .min_by(|&i, &j| a[(i, c)].abs().cmp(&a[(j, c)].abs()).then(i.cmp(&j)));
            let Some(p) = pivot else { break };
            a.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..a.rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = -a[(i, c)].div_floor(&a[(r, c)]);
                a.add_row_multiple(i, r, &q);
                done &= a[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            a.negate_row(r);
        }
        let pivot = a[(r, c)].clone();
        for i in 0..r {
            let q = -a[(i, c)].div_floor(&pivot);
            if !q.is_zero() {
                a.add_row_multiple(i, r, &q);
            }
        }
        r += 1;
    }
    let keep: Vec<usize> = (0..r).collect();
    a.select_rows(&keep).transpose()
}

/// `Z^rows / (column span of M)`.
pub fn cokernel(m: &IntMatrix) -> FinAbGroup {
    let (_, d, _) = snf_core(m, false, false);
    let diag: Vec<BigInt> = (0..d.rows.min(d.cols))
        .map(|i| d[(i, i)].clone())
        .take_while(|x| !x.is_zero())
        .collect();
    let rank = diag.len();
    let factors = diag.into_iter().filter(|x| !x.is_one()).collect();
    FinAbGroup {
        invariant_factors: factors,
        free_rank: m.rows - rank,
    }
}

/// Solves `basis · c = target` column by column, where `basis` has full column
/// rank. Returns `None` if some target column is not in the Z-span.
pub fn solve_in_basis(
    basis: &IntMatrix,
    target: &IntMatrix,
) -> Result<Option<IntMatrix>, LatticeError> {
    if basis.rows != target.rows {
        return Err(LatticeError::DimensionMismatch {
            op: "solve",
            left: (basis.rows, basis.cols),
            right: (target.rows, target.cols),
        });
    }
    let snf = smith_normal_form(basis);
    let r = snf.rank();
    if r != basis.cols {
        return Err(LatticeError::RankDeficient {
            rank: r,
            cols: basis.cols,
        });
    }
    let ut = &snf.u * target;
    let mut y = IntMatrix::zeros(r, target.cols);
    for j in 0..target.cols {
        for i in 0..ut.rows {
            let x = &ut[(i, j)];
            if i < r {
                let (q, rem) = x.div_rem(&snf.d[(i, i)]);
                if !rem.is_zero() {
                    return Ok(None);
                }
                y[(i, j)] = q;
            } else if !x.is_zero() {
                return Ok(None);
            }
        }
    }
    Ok(Some(&snf.v * &y))
}

/// Whether `Z^k --A--> Z^m --B--> Z^p` is exact at the middle: `B·A = 0` and
/// `image(A) = kernel(B)`.
pub fn is_exact_pair(a: &IntMatrix, b: &IntMatrix) -> Result<bool, LatticeError> {
    if b.cols != a.rows {
        return Err(LatticeError::DimensionMismatch {
            op: "compose",
            left: (b.rows, b.cols),
            right: (a.rows, a.cols),
        });
    }
    if !(b * a).is_zero() {
        return Ok(false);
    }
    let k = kernel_basis(b);
    if k.cols == 0 {
        return Ok(a.is_zero());
    }
    // image(A) ⊆ kernel(B), so the coordinates exist.
    let coords = solve_in_basis(&k, a)?.expect("image lies in the saturated kernel");
    Ok(cokernel(&coords).is_trivial())
}

/// Whether a map is injective (trivial kernel).
pub fn is_injective(m: &IntMatrix) -> bool {
    kernel_basis(m).cols == 0
}

/// Whether a map `Z^cols → Z^rows` is onto.
pub fn is_surjective(m: &IntMatrix) -> bool {
    cokernel(m).is_trivial()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.u.determinant().unwrap().abs().is_one());
        assert!(s.v.determinant().unwrap().abs().is_one());
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
        s
    }

    #[test]
    fn snf_zero_one_by_one() {
        let s = check_snf(&IntMatrix::from_rows(&[[0]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[[0]]));
        assert_eq!(s.u, IntMatrix::identity(1));
        assert_eq!(s.v, IntMatrix::identity(1));
    }

    #[test]
    fn snf_identity() {
        let s = check_snf(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
    }

    #[test]
    fn snf_two_by_two() {
        let s = check_snf(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[[2, 0], [0, 4]]));
    }

    #[test]
    fn snf_rectangular_and_empty() {
        check_snf(&IntMatrix::from_rows(&[[1, 2, 3], [4, 5, 6]]));
        check_snf(&IntMatrix::from_rows(&[[0, 0], [0, 6], [4, 0]]));
        check_snf(&IntMatrix::zeros(0, 3));
        check_snf(&IntMatrix::zeros(2, 0));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, 1]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(
            v == vec![BigInt::from(1), BigInt::from(-1)]
                || v == vec![BigInt::from(-1), BigInt::from(1)]
        );

        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
    }

    #[test]
    fn kernel_of_row_1_2_3() {
        let m = IntMatrix::from_rows(&[[1, 2, 3]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
        // Saturated: every invariant factor of the basis matrix is 1.
        assert!(smith_normal_form(&k).diagonal().iter().all(One::is_one));
        // Rational null space {(-2,1,0), (-3,0,1)} lies in the Z-span.
        let q = IntMatrix::from_columns(3, &[[-2, 1, 0], [-3, 0, 1]]);
        assert!(solve_in_basis(&k, &q).unwrap().is_some());
    }

    #[test]
    fn kernel_is_canonical() {
        // Two different presentations of the same map give the same basis.
        let m1 = IntMatrix::from_rows(&[[1, 2, 3, 4]]);
        let m2 = IntMatrix::from_rows(&[[1, 2, 3, 4], [2, 4, 6, 8], [-1, -2, -3, -4]]);
        assert_eq!(kernel_basis(&m1), kernel_basis(&m2));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(
            cokernel(&IntMatrix::from_rows(&[[2]])),
            FinAbGroup::cyclic(2)
        );
        assert!(cokernel(&IntMatrix::identity(3)).is_trivial());
        let g = cokernel(&IntMatrix::from_rows(&[[2, 4], [6, 8]]));
        assert_eq!(g.to_string(), "Z/2 ⊕ Z/4");
        assert_eq!(cokernel(&IntMatrix::zeros(2, 0)).free_rank(), 2);
    }

    #[test]
    fn exact_pair_examples() {
        let b = IntMatrix::from_rows(&[[1, 1]]);
        assert!(is_exact_pair(&IntMatrix::from_rows(&[[1], [-1]]), &b).unwrap());
        assert!(!is_exact_pair(&IntMatrix::from_rows(&[[2], [-2]]), &b).unwrap());
        // Nonzero composite.
        assert!(!is_exact_pair(&IntMatrix::identity(2), &IntMatrix::from_rows(&[[1, 0]])).unwrap());
        // Dimension mismatch is an input error.
        assert!(
            is_exact_pair(&IntMatrix::identity(2), &IntMatrix::from_rows(&[[1, 0, 0]])).is_err()
        );
    }

    #[test]
    fn group_validation() {
        assert!(FinAbGroup::new(vec![BigInt::from(2), BigInt::from(3)], 0).is_err());
        assert!(FinAbGroup::new(vec![BigInt::from(1)], 0).is_err());
        let g = FinAbGroup::new(vec![BigInt::from(2), BigInt::from(6)], 1).unwrap();
        assert_eq!(g.to_string(), "Z ⊕ Z/2 ⊕ Z/6");
        assert_eq!(g.torsion_order(), BigInt::from(12));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(
            IntMatrix::from_rows(&[[2, 4], [6, 8]])
                .determinant()
                .unwrap(),
            BigInt::from(-8)
        );
        assert_eq!(
            IntMatrix::from_rows(&[[0, 1], [1, 0]])
                .determinant()
                .unwrap(),
            BigInt::from(-1)
        );
        let m = IntMatrix::from_rows(&[[0, 2, 1], [3, 0, 1], [1, 1, 0]]);
        assert_eq!(m.determinant().unwrap(), BigInt::from(5));
    }
}
