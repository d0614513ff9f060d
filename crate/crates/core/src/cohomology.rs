//! Finite Galois images `G ≤ S₂ × S₃`, lattices with a `G`-action, fixed
//! sublattices and `H¹(G, M)`.

use std::fmt;

use serde::Serialize;

use crate::error::LatticeError;
use crate::hexagon::{self, HexSymmetry};
use crate::lattice::{self, FinAbGroup, IntMatrix};

/// A subgroup of `S₂ × S₃`, stored as its sorted list of elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Subgroup {
    elements: Vec<HexSymmetry>,
}

impl Subgroup {
    /// The subgroup generated by `gens`.
    pub fn generated_by(gens: &[HexSymmetry]) -> Subgroup {
        let mask = closure_mask(gens.iter().map(|g| g.ordinal()));
        Subgroup::from_mask(mask)
    }

    pub fn trivial() -> Subgroup {
        Subgroup::generated_by(&[])
    }

    pub fn full() -> Subgroup {
        Subgroup::from_mask((1 << 12) - 1)
    }

    fn from_mask(mask: u16) -> Subgroup {
        let all = HexSymmetry::all();
        Subgroup {
            elements: (0..12)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i])
                .collect(),
        }
    }

    pub fn elements(&self) -> &[HexSymmetry] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &HexSymmetry) -> bool {
        self.elements.contains(g)
    }

    pub fn is_closed(&self) -> bool {
        self.contains(&HexSymmetry::IDENTITY)
            && self
                .elements
                .iter()
                .all(|a| self.elements.iter().all(|b| self.contains(&a.compose(b))))
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.elements.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

fn closure_mask(gens: impl IntoIterator<Item = usize>) -> u16 {
    let all = HexSymmetry::all();
    let mut mask: u16 = 1;
    for g in gens {
        mask |= 1 << g;
    }
    loop {
        let mut next = mask;
        for i in (0..12).filter(|i| mask >> i & 1 == 1) {
            for j in (0..12).filter(|j| mask >> j & 1 == 1) {
                next |= 1 << all[i].compose(&all[j]).ordinal();
            }
        }
        if next == mask {
            return mask;
        }
        mask = next;
    }
}

/// Every subgroup of `S₂ × S₃`, each exactly once, ordered by order and then
/// by element list. Every subgroup of this group is generated by two elements.
pub fn enumerate_subgroups() -> Vec<Subgroup> {
    let mut masks: Vec<u16> = Vec::new();
    for a in 0..12 {
        for b in a..12 {
            let m = closure_mask([a, b]);
            if !masks.contains(&m) {
                masks.push(m);
            }
        }
    }
    let mut groups: Vec<Subgroup> = masks.into_iter().map(Subgroup::from_mask).collect();
    groups.sort_by(|x, y| {
        x.order()
            .cmp(&y.order())
            .then_with(|| x.elements.cmp(&y.elements))
    });
    groups
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum KShape {
    Field,
    Split,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LShape {
    Field,
    FieldTimesQuadratic,
    Split,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EtaleShape {
    pub k_shape: KShape,
    pub l_shape: LShape,
}

impl fmt::Display for EtaleShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.k_shape {
            KShape::Field => "K field",
            KShape::Split => "K = F×F",
        };
        let l = match self.l_shape {
            LShape::Field => "L field",
            LShape::FieldTimesQuadratic => "L = F×E",
            LShape::Split => "L = F×F×F",
        };
        write!(f, "{k}, {l}")
    }
}

/// Shapes of `K` and `L` from the orbits of `G` on the triangles and on the pairs.
pub fn etale_shape(group: &Subgroup) -> EtaleShape {
    let k_shape = if group.elements.iter().any(|g| g.swap) {
        KShape::Field
    } else {
        KShape::Split
    };
    let mut orbit_of = [usize::MAX; 3];
    let mut orbits = Vec::new();
    for i in 0..3 {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let mut size = 0;
        for (j, slot) in orbit_of.iter_mut().enumerate() {
            if *slot == usize::MAX && group.elements.iter().any(|g| g.perm[i] == j) {
                *slot = orbits.len();
                size += 1;
            }
        }
        orbits.push(size);
    }
    let l_shape = match orbits.len() {
        1 => LShape::Field,
        2 => LShape::FieldTimesQuadratic,
        _ => LShape::Split,
    };
    EtaleShape { k_shape, l_shape }
}

/// A free lattice `Zⁿ` with a linear action of a subgroup of `S₂ × S₃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLattice {
    rank: usize,
    group: Subgroup,
    action: Vec<IntMatrix>,
}

impl GLattice {
    /// Builds the lattice and checks that `rho` is a homomorphism.
    pub fn new(
        group: Subgroup,
        rank: usize,
        rho: impl Fn(&HexSymmetry) -> IntMatrix,
    ) -> Result<Self, LatticeError> {
        let action: Vec<IntMatrix> = group.elements.iter().map(&rho).collect();
        for m in &action {
            if m.rows() != rank || m.cols() != rank {
                return Err(LatticeError::DimensionMismatch {
                    op: "act on",
                    left: (m.rows(), m.cols()),
                    right: (rank, rank),
                });
            }
        }
        let lattice = GLattice {
            rank,
            group,
            action,
        };
        if !lattice.is_homomorphism() {
            return Err(LatticeError::NotAHomomorphism);
        }
        Ok(lattice)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn action(&self, g: &HexSymmetry) -> Option<&IntMatrix> {
        self.group
            .elements
            .iter()
            .position(|h| h == g)
            .map(|i| &self.action[i])
    }

    fn index_of(&self, g: &HexSymmetry) -> usize {
        self.group
            .elements
            .iter()
            .position(|h| h == g)
            .expect("closed subgroup")
    }

    pub fn is_homomorphism(&self) -> bool {
        let els = &self.group.elements;
        let id = self.index_of(&HexSymmetry::IDENTITY);
        if self.action[id] != IntMatrix::identity(self.rank) {
            return false;
        }
        (0..els.len()).all(|i| {
            (0..els.len()).all(|j| {
                let k = self.index_of(&els[i].compose(&els[j]));
                self.action[k] == &self.action[i] * &self.action[j]
            })
        })
    }

    /// The sublattice spanned by the columns of `basis`, which must be stable.
    pub fn sublattice(&self, basis: &IntMatrix) -> Result<GLattice, LatticeError> {
        let mut action = Vec::with_capacity(self.action.len());
        for m in &self.action {
            let image = m * basis;
            let coords = lattice::solve_in_basis(basis, &image)?.ok_or(LatticeError::NotStable)?;
            action.push(coords);
        }
        Ok(GLattice {
            rank: basis.cols(),
            group: self.group.clone(),
            action,
        })
    }

    /// Stacked `g − 1` over all group elements.
    fn augmentation_rows(&self) -> IntMatrix {
        let id = IntMatrix::identity(self.rank);
        let mut stacked = IntMatrix::zeros(0, self.rank);
        for m in &self.action {
            let d = m.checked_sub(&id).expect("square");
            stacked = stacked.vstack(&d).expect("same width");
        }
        stacked
    }
}

/// Saturated basis (columns) of `Mᴳ`.
pub fn lattice_invariants(m: &GLattice) -> IntMatrix {
    lattice::kernel_basis(&m.augmentation_rows())
}

/// Rank over `Q` of the span of all `(g − 1)·x`.
pub fn augmentation_image_rank(m: &GLattice) -> usize {
    m.augmentation_rows().rank()
}

/// `H¹(G, M) = Z¹ / B¹`, with cocycle conditions imposed for all pairs.
pub fn lattice_h1(m: &GLattice) -> FinAbGroup {
    let n = m.rank;
    let k = m.group.order();
    if n == 0 || k == 1 {
        return FinAbGroup::trivial();
    }
    let els = &m.group.elements;
    // Unknowns: f(g) for every g, blocks of n in element order.
    let mut eqs = IntMatrix::zeros(n * k * k, n * k);
    for (i, g) in els.iter().enumerate() {
        for (j, h) in els.iter().enumerate() {
            let gh = m.index_of(&g.compose(h));
            let row0 = (i * k + j) * n;
            // f(gh) − f(g) − g·f(h) = 0
            for r in 0..n {
                eqs[(row0 + r, gh * n + r)] += 1;
                eqs[(row0 + r, i * n + r)] -= 1;
                for c in 0..n {
                    eqs[(row0 + r, j * n + c)] -= &m.action[i][(r, c)];
                }
            }
        }
    }
    let z1 = lattice::kernel_basis(&eqs);
    if z1.cols() == 0 {
        return FinAbGroup::trivial();
    }
    // Coboundaries g ↦ (g − 1)·eₓ for each basis vector.
    let mut b1 = IntMatrix::zeros(n * k, n);
    for (i, a) in m.action.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                let mut v = a[(r, c)].clone();
                if r == c {
                    v -= 1;
                }
                b1[(i * n + r, c)] = v;
            }
        }
    }
    let coords = lattice::solve_in_basis(&z1, &b1)
        .expect("matching dimensions")
        .expect("coboundaries are cocycles");
    lattice::cokernel(&coords)
}

/// `Pic(S̄)` in the blow-up basis.
pub fn picard_lattice(group: &Subgroup) -> GLattice {
    GLattice::new(group.clone(), 4, HexSymmetry::pic_int_matrix).expect("hexagon action")
}

/// `Z[KL/F]`, the permutation module on the six lines.
pub fn lines_lattice(group: &Subgroup) -> GLattice {
    GLattice::new(group.clone(), 6, HexSymmetry::line_matrix).expect("hexagon action")
}

/// `Z[K/F]`, the permutation module on the two triangles.
pub fn triangles_lattice(group: &Subgroup) -> GLattice {
    GLattice::new(group.clone(), 2, HexSymmetry::triangle_matrix).expect("hexagon action")
}

/// `Z[L/F]`, the permutation module on the three pairs of opposite lines.
pub fn pairs_lattice(group: &Subgroup) -> GLattice {
    GLattice::new(group.clone(), 3, HexSymmetry::pair_matrix).expect("hexagon action")
}

/// `T̂` as the sublattice of `Z[KL/F]` cut out by the map to `Pic`.
pub fn character_lattice(group: &Subgroup) -> GLattice {
    lines_lattice(group)
        .sublattice(&hexagon::character_lattice_basis())
        .expect("T̂ is stable")
}

/// `Z` on which elements with a nontrivial `S₂` component act by `−1`.
pub fn sign_lattice(group: &Subgroup) -> GLattice {
    GLattice::new(group.clone(), 1, |g| {
        IntMatrix::from_rows(&[[if g.swap { -1 } else { 1 }]])
    })
    .expect("sign character")
}

/// `H¹(G, T̂)` for every subgroup, next to its étale shape.
pub fn character_h1_table() -> Vec<(Subgroup, EtaleShape, FinAbGroup)> {
    enumerate_subgroups()
        .into_iter()
        .map(|g| {
            let shape = etale_shape(&g);
            let h1 = lattice_h1(&character_lattice(&g));
            (g, shape, h1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexagon::canonical_class;

    fn swap_group() -> Subgroup {
        Subgroup::generated_by(&[HexSymmetry::SWAP])
    }

    #[test]
    fn subgroup_count_matches_brute_force() {
        // Oracle: test every subset of the 12 elements for closure.
        let all = HexSymmetry::all();
        let mut brute = 0;
        for mask in 0u32..(1 << 12) {
            let set: Vec<HexSymmetry> = (0..12)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i])
                .collect();
            if set.contains(&HexSymmetry::IDENTITY)
                && set
                    .iter()
                    .all(|a| set.iter().all(|b| set.contains(&a.compose(b))))
            {
                brute += 1;
            }
        }
        let groups = enumerate_subgroups();
        assert_eq!(brute, 16);
        assert_eq!(groups.len(), 16);
        assert!(groups.iter().all(Subgroup::is_closed));
        assert!(groups.contains(&Subgroup::trivial()));
        assert!(groups.contains(&Subgroup::full()));
    }

    #[test]
    fn shapes() {
        let split = EtaleShape {
            k_shape: KShape::Split,
            l_shape: LShape::Split,
        };
        assert_eq!(etale_shape(&Subgroup::trivial()), split);
        assert_eq!(
            etale_shape(&Subgroup::full()),
            EtaleShape {
                k_shape: KShape::Field,
                l_shape: LShape::Field
            }
        );
        assert_eq!(
            etale_shape(&swap_group()),
            EtaleShape {
                k_shape: KShape::Field,
                l_shape: LShape::Split
            }
        );
        let transposition = HexSymmetry::new(false, [1, 0, 2]).unwrap();
        assert_eq!(
            etale_shape(&Subgroup::generated_by(&[transposition])),
            EtaleShape {
                k_shape: KShape::Split,
                l_shape: LShape::FieldTimesQuadratic
            }
        );
    }

    #[test]
    fn invariants_examples() {
        assert_eq!(
            lattice_invariants(&picard_lattice(&Subgroup::trivial())).cols(),
            4
        );
        let fixed = lattice_invariants(&picard_lattice(&Subgroup::full()));
        assert_eq!(fixed.cols(), 1);
        let k = canonical_class().to_column();
        assert!(lattice::solve_in_basis(&fixed, &k).unwrap().is_some());
        let swap_fixed = lattice_invariants(&lines_lattice(&swap_group()));
        assert_eq!(swap_fixed.cols(), 3);
        for i in 0..3 {
            let mut v = [0i64; 6];
            v[i] = 1;
            v[3 + i] = 1;
            let col = IntMatrix::from_columns(6, &[v]);
            assert!(lattice::solve_in_basis(&swap_fixed, &col)
                .unwrap()
                .is_some());
        }
    }

    #[test]
    fn h1_examples() {
        assert!(lattice_h1(&picard_lattice(&Subgroup::trivial())).is_trivial());
        assert_eq!(
            lattice_h1(&sign_lattice(&swap_group())),
            FinAbGroup::cyclic(2)
        );
        for g in enumerate_subgroups() {
            assert!(lattice_h1(&lines_lattice(&g)).is_trivial(), "{g}");
            assert!(lattice_h1(&triangles_lattice(&g)).is_trivial(), "{g}");
            assert!(lattice_h1(&pairs_lattice(&g)).is_trivial(), "{g}");
        }
    }

    #[test]
    fn rational_splitting_and_finiteness() {
        for g in enumerate_subgroups() {
            for m in [
                picard_lattice(&g),
                lines_lattice(&g),
                character_lattice(&g),
                sign_lattice(&g),
            ] {
                assert_eq!(
                    lattice_invariants(&m).cols() + augmentation_image_rank(&m),
                    m.rank()
                );
                assert_eq!(lattice_h1(&m).free_rank(), 0);
            }
        }
    }

    #[test]
    fn character_table_is_computed() {
        let table = character_h1_table();
        assert_eq!(table.len(), 16);
        // Split K and L give a split torus.
        assert!(table[0].2.is_trivial());
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let bad = GLattice::new(swap_group(), 1, |_| IntMatrix::from_rows(&[[-1]]));
        assert!(bad.is_err());
    }
}
