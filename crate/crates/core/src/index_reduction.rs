//! Index of a central simple algebra `D` after extending scalars to the
//! function field of the surface.
//!
//! Two routes are implemented and must agree: the gcd of the ranks of the
//! images of simple modules divided by `deg D`, and the case-by-case gcd
//! formula keyed by the shapes of `K` and `L`.

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::brauer::{
    check_bound, restriction, BrauerClass, EtaleAlgebra, GlobalFieldModel, PlaceMap, Qz,
    SurfaceData,
};
use crate::error::BrauerError;

/// `rank(I) / deg(K_c)`: the sheaf attached to `B` has rank 3 over each
/// degree of its centre.
pub const RANK_I_PER_DEGREE: u64 = 3;
/// `rank(J) / deg(L_c)`.
pub const RANK_J_PER_DEGREE: u64 = 2;

/// A central simple `F`-algebra, seen through its class and degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CentralSimpleData {
    class: BrauerClass,
    degree: u64,
}

impl CentralSimpleData {
    pub fn new(
        model: &GlobalFieldModel,
        class: BrauerClass,
        degree: u64,
    ) -> Result<Self, BrauerError> {
        let f = EtaleAlgebra::base(model);
        let class = BrauerClass::new(&f, class.invariants().to_vec())?;
        let index = class.index(&f)[0];
        if degree == 0 || !degree.is_multiple_of(index) {
            return Err(BrauerError::DegreeIndex { degree, index });
        }
        Ok(CentralSimpleData { class, degree })
    }

    pub fn class(&self) -> &BrauerClass {
        &self.class
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn index(&self) -> u64 {
        self.class.index_on(0..self.class.len())
    }

    /// `D ⊗ M_n(F)`: same class, degree multiplied by `n`.
    pub fn scaled(&self, n: u64) -> Self {
        CentralSimpleData {
            class: self.class.clone(),
            degree: self.degree * n,
        }
    }
}

/// Which summand of `F × B × Q` a simple module comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Part {
    F,
    /// Component `c` of `K`.
    B(usize),
    /// Component `c` of `L`.
    Q(usize),
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::F => write!(f, "D"),
            Part::B(c) => write!(f, "B{}⊗D", c + 1),
            Part::Q(c) => write!(f, "Q{}⊗D", c + 1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    /// `K` and `L` fields.
    I,
    /// `K = F × F`, `L` a field.
    II,
    /// `K` a field, `L = F × E`.
    III,
    /// `K` a field, `L = F³`.
    IV,
    /// `K = F × F` and `L` not a field.
    V,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "i",
            Case::II => "ii",
            Case::III => "iii",
            Case::IV => "iv",
            Case::V => "v",
        })
    }
}

pub fn case_of(s: &SurfaceData) -> Case {
    let t = s.tower();
    match (t.k.is_field(), t.l.components().len()) {
        (true, 1) => Case::I,
        (false, 1) => Case::II,
        (true, 2) => Case::III,
        (true, _) => Case::IV,
        (false, _) => Case::V,
    }
}

/// One term of a gcd: the part, its multiplier, the index it multiplies, and
/// whether the corresponding component of `B` or `Q` is split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub part: Part,
    pub multiplier: u64,
    pub index: u64,
    pub split: bool,
}

impl Term {
    pub fn value(&self) -> u64 {
        self.multiplier * self.index
    }
}

/// Index over each component of `res(D) + X`.
fn twisted_indices(
    d: &CentralSimpleData,
    algebra: &EtaleAlgebra,
    over_f: &PlaceMap,
    x: &BrauerClass,
) -> Vec<(u64, bool)> {
    let twisted = restriction(&d.class, over_f).expect("class over F").add(x);
    (0..algebra.components().len())
        .map(|c| {
            let r = algebra.component_range(c);
            let split = x.invariants()[r.clone()].iter().all(|q| q.is_zero());
            (twisted.index_on(r), split)
        })
        .collect()
}

/// Rank of the image of a simple module over each summand, in the order
/// `F`, components of `K`, components of `L`.
///
/// For component `c` of `B` this is
/// `deg(B_c ⊗ D) · ind(B_c ⊗ D) · rank(I_c) / dim(B_c) = deg(K_c) · deg D · ind(B_c ⊗ D)`,
/// and likewise for `Q` with `rank(J_c) = 2 deg(L_c)` and `dim(Q_c) = 4`.
pub fn simple_image_ranks(d: &CentralSimpleData, s: &SurfaceData) -> Vec<(Part, u64)> {
    let t = s.tower();
    let mut out = vec![(Part::F, d.degree * d.index())];
    for (c, (ind, _)) in twisted_indices(d, &t.k, &t.k_over_f, s.b())
        .into_iter()
        .enumerate()
    {
        let deg_k = u64::from(t.k.components()[c].degree);
        let numer = 3 * d.degree * ind * RANK_I_PER_DEGREE * deg_k;
        out.push((Part::B(c), exact_div(numer, 9)));
    }
    for (c, (ind, _)) in twisted_indices(d, &t.l, &t.l_over_f, s.q())
        .into_iter()
        .enumerate()
    {
        let deg_l = u64::from(t.l.components()[c].degree);
        let numer = 2 * d.degree * ind * RANK_J_PER_DEGREE * deg_l;
        out.push((Part::Q(c), exact_div(numer, 4)));
    }
    out
}

fn exact_div(a: u64, b: u64) -> u64 {
    debug_assert_eq!(a % b, 0);
    a / b
}

pub fn rank_of_simple_image(part: Part, d: &CentralSimpleData, s: &SurfaceData) -> Option<u64> {
    simple_image_ranks(d, s)
        .into_iter()
        .find(|(p, _)| *p == part)
        .map(|(_, r)| r)
}

/// `gcd{rank of simple images} / deg D`.
pub fn reduced_index(d: &CentralSimpleData, s: &SurfaceData) -> u64 {
    let g = simple_image_ranks(d, s)
        .into_iter()
        .fold(0, |acc, (_, r)| acc.gcd(&r));
    exact_div(g, d.degree)
}

/// The terms of the case formula, with the split flag of each.
pub fn case_terms(d: &CentralSimpleData, s: &SurfaceData) -> Vec<Term> {
    let t = s.tower();
    let mut terms = vec![Term {
        part: Part::F,
        multiplier: 1,
        index: d.index(),
        split: false,
    }];
    let k_terms = twisted_indices(d, &t.k, &t.k_over_f, s.b());
    let l_terms = twisted_indices(d, &t.l, &t.l_over_f, s.q());
    let q_term = |c: usize, multiplier: u64| Term {
        part: Part::Q(c),
        multiplier,
        index: l_terms[c].0,
        split: l_terms[c].1,
    };
    let b_term = |c: usize, multiplier: u64| Term {
        part: Part::B(c),
        multiplier,
        index: k_terms[c].0,
        split: k_terms[c].1,
    };
    match case_of(s) {
        Case::I => {
            terms.push(b_term(0, 2));
            terms.push(q_term(0, 3));
        }
        Case::II => {
            terms.push(b_term(0, 1));
            terms.push(b_term(1, 1));
        }
        Case::III => {
            // The coefficient 2 belongs to the quadratic factor E.
            for c in 0..2 {
                let m = u64::from(t.l.components()[c].degree);
                terms.push(q_term(c, m));
            }
        }
        Case::IV => {
            for c in 0..3 {
                terms.push(q_term(c, 1));
            }
        }
        Case::V => {}
    }
    terms
}

/// The case formula: the gcd of [`case_terms`].
pub fn case_formula(d: &CentralSimpleData, s: &SurfaceData) -> u64 {
    case_terms(d, s)
        .iter()
        .fold(0, |acc, t| acc.gcd(&t.value()))
}

/// The case formula with every term from a split component of `B` or `Q`
/// dropped.
pub fn case_formula_without_split_terms(d: &CentralSimpleData, s: &SurfaceData) -> u64 {
    case_terms(d, s)
        .iter()
        .filter(|t| !t.split)
        .fold(0, |acc, t| acc.gcd(&t.value()))
}

/// Every class over `F` with denominators dividing `bound`, as an algebra of
/// degree equal to its index. Sorted by class.
pub fn algebras_over_base(
    model: &GlobalFieldModel,
    bound: u32,
) -> Result<Vec<CentralSimpleData>, BrauerError> {
    let n = check_bound(bound)?;
    let f = EtaleAlgebra::base(model);
    let values: Vec<Qz> = Qz::multiples_of_inverse(n).collect();
    let free = model.len() - 1;
    let mut out = Vec::with_capacity(values.len().pow(free as u32));
    for code in 0..values.len().pow(free as u32) {
        let mut inv: Vec<Qz> = (0..free)
            .map(|i| values[code / values.len().pow(i as u32) % values.len()])
            .collect();
        let s: Qz = inv.iter().copied().sum();
        inv.push(-s);
        let class = BrauerClass::new(&f, inv)?;
        let degree = class.index_on(0..class.len());
        out.push(CentralSimpleData { class, degree });
    }
    out.sort_by(|a, b| a.class.cmp(&b.class));
    Ok(out)
}
