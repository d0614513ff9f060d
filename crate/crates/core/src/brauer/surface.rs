//! Surface data `(B, Q, KL)`, its validity conditions, the action of the
//! automorphisms of `K` and `L`, and the rational-point criterion.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::class::{corestriction, restriction, BrauerClass};
use super::etale::{compose_etale, Composite, EtaleAlgebra, GlobalFieldModel, PlaceMap};
use crate::error::BrauerError;

/// A permutation of the places of `L`, given by the image of each place.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlacePermutation(Vec<usize>);

impl PlacePermutation {
    pub fn identity(n: usize) -> Self {
        PlacePermutation((0..n).collect())
    }

    /// Checks that `image` is a bijection respecting base places, local
    /// degrees and the decomposition into components.
    pub fn new(algebra: &EtaleAlgebra, image: Vec<usize>) -> Result<Self, BrauerError> {
        let places = algebra.places();
        let n = places.len();
        if image.len() != n {
            return Err(BrauerError::BadPermutation(format!(
                "{} images for {n} places",
                image.len()
            )));
        }
        let mut seen = vec![false; n];
        for &j in &image {
            if j >= n || std::mem::replace(&mut seen[j], true) {
                return Err(BrauerError::BadPermutation("not a bijection".into()));
            }
        }
        let mut component_image = vec![None; algebra.components().len()];
        for (i, &j) in image.iter().enumerate() {
            let (p, q) = (places[i], places[j]);
            if p.base != q.base || p.local_degree != q.local_degree {
                return Err(BrauerError::BadPermutation(format!(
                    "place {i} and its image {j} lie over different base places or have different degrees"
                )));
            }
            match component_image[p.component] {
                None => component_image[p.component] = Some(q.component),
                Some(c) if c == q.component => {}
                Some(_) => {
                    return Err(BrauerError::BadPermutation(
                        "a component is split across components".into(),
                    ))
                }
            }
        }
        for (c, img) in component_image.iter().enumerate() {
            let img = img.expect("every component has places");
            if algebra.components()[c].degree != algebra.components()[img].degree {
                return Err(BrauerError::BadPermutation(
                    "component degrees differ".into(),
                ));
            }
        }
        Ok(PlacePermutation(image))
    }

    pub fn image(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `h★x`, with `(h★x)(h(p)) = x(p)`.
    pub fn push_forward(&self, x: &BrauerClass) -> BrauerClass {
        let mut out = x.invariants().to_vec();
        for (i, &j) in self.0.iter().enumerate() {
            out[j] = x.invariants()[i];
        }
        BrauerClass::from_raw(out)
    }
}

/// The automorphisms of `L` that come with its description: coordinate
/// permutations for `F³`, the conjugation of `E` for `F × E`, a 3-cycle for a
/// cubic field whose local patterns are only `[3]` and `[1, 1, 1]`, and the
/// identity otherwise. The identity is always first.
pub fn natural_automorphisms(l: &EtaleAlgebra) -> Vec<PlacePermutation> {
    let n = l.places().len();
    let mut out = vec![PlacePermutation::identity(n)];
    let comps = l.components();
    let degrees: Vec<u32> = comps.iter().map(|c| c.degree).collect();
    let build = |f: &dyn Fn(usize) -> usize| {
        PlacePermutation::new(l, (0..n).map(f).collect()).expect("natural automorphism")
    };
    let find = |component: usize, base: usize, slot: usize| {
        l.places()
            .iter()
            .position(|p| p.component == component && p.base == base && p.slot == slot)
            .expect("place exists")
    };
    match degrees.as_slice() {
        [1, 1, 1] => {
            for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                out.push(build(&|i| {
                    let p = l.places()[i];
                    find(perm[p.component], p.base, 0)
                }));
            }
        }
        [3] if comps[0].splitting.iter().all(|s| s.len() != 2) => {
            for shift in [1, 2] {
                out.push(build(&|i| {
                    let p = l.places()[i];
                    let width = comps[0].splitting[p.base].len();
                    find(0, p.base, (p.slot + shift) % width)
                }));
            }
        }
        [_, _] => {
            let e = if degrees[0] == 2 { 0 } else { 1 };
            out.push(build(&|i| {
                let p = l.places()[i];
                if p.component == e {
                    let width = comps[e].splitting[p.base].len();
                    find(e, p.base, (p.slot + 1) % width)
                } else {
                    i
                }
            }));
        }
        _ => {}
    }
    out
}

/// The field model with `K`, `L`, `KL` and the declared automorphisms of `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tower {
    pub model: GlobalFieldModel,
    pub k: EtaleAlgebra,
    pub l: EtaleAlgebra,
    pub kl: Composite,
    pub k_over_f: PlaceMap,
    pub l_over_f: PlaceMap,
    pub l_automorphisms: Vec<PlacePermutation>,
}

impl Tower {
    /// `l_automorphisms = None` declares only the identity.
    pub fn new(
        model: GlobalFieldModel,
        k: EtaleAlgebra,
        l: EtaleAlgebra,
        l_automorphisms: Option<Vec<PlacePermutation>>,
    ) -> Result<Self, BrauerError> {
        if k.degree() != 2 || l.degree() != 3 {
            return Err(BrauerError::IncompatibleTower(format!(
                "K must have degree 2 and L degree 3 (got {} and {})",
                k.degree(),
                l.degree()
            )));
        }
        let n = l.places().len();
        let autos = l_automorphisms.unwrap_or_else(|| vec![PlacePermutation::identity(n)]);
        for h in &autos {
            PlacePermutation::new(&l, h.0.clone())?;
        }
        let kl = compose_etale(&model, &k, &l);
        let k_over_f = k.over_base(&model);
        let l_over_f = l.over_base(&model);
        Ok(Tower {
            model,
            k,
            l,
            kl,
            k_over_f,
            l_over_f,
            l_automorphisms: autos,
        })
    }

    /// A tower whose `L`-automorphisms are [`natural_automorphisms`].
    pub fn with_natural_automorphisms(
        model: GlobalFieldModel,
        k: EtaleAlgebra,
        l: EtaleAlgebra,
    ) -> Result<Self, BrauerError> {
        let autos = natural_automorphisms(&l);
        Self::new(model, k, l, Some(autos))
    }

    pub fn res_k_to_kl(&self, x: &BrauerClass) -> BrauerClass {
        restriction(x, &self.kl.over_k).expect("class over K")
    }

    pub fn res_l_to_kl(&self, y: &BrauerClass) -> BrauerClass {
        restriction(y, &self.kl.over_l).expect("class over L")
    }

    pub fn cor_k(&self, x: &BrauerClass) -> BrauerClass {
        corestriction(x, &self.k_over_f).expect("class over K")
    }

    pub fn cor_l(&self, y: &BrauerClass) -> BrauerClass {
        corestriction(y, &self.l_over_f).expect("class over L")
    }

    /// `σ★x` for the nontrivial automorphism `σ` of `K`: swaps the two places
    /// over every split base place (the two factors if `K = F × F`).
    pub fn k_conjugation_pushforward(&self, x: &BrauerClass) -> BrauerClass {
        let places = self.k.places();
        let mut out = x.invariants().to_vec();
        for (i, p) in places.iter().enumerate() {
            let partner = places.iter().position(|q| {
                q.base == p.base
                    && q.local_degree == 1
                    && p.local_degree == 1
                    && (q.component, q.slot) != (p.component, p.slot)
            });
            if let Some(j) = partner {
                out[j] = x.invariants()[i];
            }
        }
        BrauerClass::from_raw(out)
    }
}

/// A violated condition of [`validate_pair`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairViolation {
    CorB,
    CorQ,
    ResB,
    ResQ,
    IndexB,
    IndexQ,
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairViolation::CorB => "cor_{K/F}(B) ≠ 0",
            PairViolation::CorQ => "cor_{L/F}(Q) ≠ 0",
            PairViolation::ResB => "res_{KL/K}(B) ≠ 0",
            PairViolation::ResQ => "res_{KL/L}(Q) ≠ 0",
            PairViolation::IndexB => "ind(B) does not divide 3",
            PairViolation::IndexQ => "ind(Q) does not divide 2",
        })
    }
}

pub fn pair_violations(tower: &Tower, b: &BrauerClass, q: &BrauerClass) -> Vec<PairViolation> {
    let mut out = Vec::new();
    if !tower.cor_k(b).is_zero() {
        out.push(PairViolation::CorB);
    }
    if !tower.cor_l(q).is_zero() {
        out.push(PairViolation::CorQ);
    }
    if !tower.res_k_to_kl(b).is_zero() {
        out.push(PairViolation::ResB);
    }
    if !tower.res_l_to_kl(q).is_zero() {
        out.push(PairViolation::ResQ);
    }
    if b.index(&tower.k).iter().any(|i| 3 % i != 0) {
        out.push(PairViolation::IndexB);
    }
    if q.index(&tower.l).iter().any(|i| 2 % i != 0) {
        out.push(PairViolation::IndexQ);
    }
    out
}

pub fn validate_pair(tower: &Tower, b: &BrauerClass, q: &BrauerClass) -> bool {
    pair_violations(tower, b, q).is_empty()
}

/// A generator of the group acting on surface data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    /// The nontrivial automorphism of `K`: `B ↦ B^op`.
    KConjugation,
    /// The declared `L`-automorphism with this index.
    LAutomorphism(usize),
}

/// Valid surface data over a shared tower.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceData {
    tower: Arc<Tower>,
    b: BrauerClass,
    q: BrauerClass,
}

impl SurfaceData {
    pub fn new(tower: Arc<Tower>, b: BrauerClass, q: BrauerClass) -> Result<Self, BrauerError> {
        if b.len() != tower.k.places().len() || q.len() != tower.l.places().len() {
            return Err(BrauerError::IncompatibleTower(
                "B must live over K and Q over L".into(),
            ));
        }
        let bad = pair_violations(&tower, &b, &q);
        if !bad.is_empty() {
            let names: Vec<String> = bad.iter().map(ToString::to_string).collect();
            return Err(BrauerError::InvalidPair(names.join("; ")));
        }
        Ok(SurfaceData { tower, b, q })
    }

    pub fn trivial(tower: Arc<Tower>) -> Self {
        let b = BrauerClass::zero(&tower.k);
        let q = BrauerClass::zero(&tower.l);
        SurfaceData { tower, b, q }
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn b(&self) -> &BrauerClass {
        &self.b
    }

    pub fn q(&self) -> &BrauerClass {
        &self.q
    }

    pub fn g_action(&self, g: GroupElement) -> Result<SurfaceData, BrauerError> {
        match g {
            GroupElement::KConjugation => Ok(SurfaceData {
                b: self.b.neg(),
                ..self.clone()
            }),
            GroupElement::LAutomorphism(i) => {
                let h = self
                    .tower
                    .l_automorphisms
                    .get(i)
                    .ok_or(BrauerError::UnknownAutomorphism(i))?;
                Ok(SurfaceData {
                    q: h.push_forward(&self.q),
                    ..self.clone()
                })
            }
        }
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        std::iter::once(GroupElement::KConjugation)
            .chain((0..self.tower.l_automorphisms.len()).map(GroupElement::LAutomorphism))
            .collect()
    }

    /// The orbit of `(B, Q)` under the generated group, sorted.
    pub fn orbit(&self) -> Vec<(BrauerClass, BrauerClass)> {
        let gens = self.generators();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([self.clone()]);
        seen.insert((self.b.clone(), self.q.clone()));
        while let Some(s) = queue.pop_front() {
            for &g in &gens {
                let t = s.g_action(g).expect("declared generator");
                if seen.insert((t.b.clone(), t.q.clone())) {
                    queue.push_back(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    pub fn has_rational_point(&self) -> bool {
        self.b.is_zero() && self.q.is_zero()
    }
}

/// Whether `s2` lies in the orbit of `s1`. Both must share one tower.
pub fn same_surface(s1: &SurfaceData, s2: &SurfaceData) -> Result<bool, BrauerError> {
    if !Arc::ptr_eq(&s1.tower, &s2.tower) && s1.tower != s2.tower {
        return Err(BrauerError::IncompatibleTower(
            "surfaces over different étale data".into(),
        ));
    }
    let target = (s2.b.clone(), s2.q.clone());
    Ok(s1.orbit().binary_search(&target).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brauer::etale::Component;
    use crate::brauer::qz::Qz;

    fn q(n: i64, d: i64) -> Qz {
        Qz::new(n, d)
    }

    /// K split at v1, inert at v2, split at v3; L inert at v1, split at v2, v3.
    pub(crate) fn worked_tower() -> Arc<Tower> {
        let m = GlobalFieldModel::numbered(3);
        let k = EtaleAlgebra::new(
            &m,
            2,
            vec![Component {
                degree: 2,
                splitting: vec![vec![1, 1], vec![2], vec![1, 1]],
            }],
        )
        .unwrap();
        let l = EtaleAlgebra::new(
            &m,
            3,
            vec![Component {
                degree: 3,
                splitting: vec![vec![3], vec![1, 1, 1], vec![1, 1, 1]],
            }],
        )
        .unwrap();
        Arc::new(Tower::new(m, k, l, None).unwrap())
    }

    fn worked_b(t: &Tower) -> BrauerClass {
        // K places: v1:0, v1:1, v2:0, v3:0, v3:1
        BrauerClass::new(&t.k, vec![q(1, 3), q(2, 3), Qz::ZERO, Qz::ZERO, Qz::ZERO]).unwrap()
    }

    fn worked_q(t: &Tower) -> BrauerClass {
        // L places: v1:0, v2:0, v2:1, v2:2, v3:0, v3:1, v3:2
        let mut inv = vec![Qz::ZERO; 7];
        inv[1] = q(1, 2);
        inv[2] = q(1, 2);
        BrauerClass::new(&t.l, inv).unwrap()
    }

    #[test]
    fn worked_model_is_valid() {
        let t = worked_tower();
        let (b, qq) = (worked_b(&t), worked_q(&t));
        assert!(validate_pair(
            &t,
            &BrauerClass::zero(&t.k),
            &BrauerClass::zero(&t.l)
        ));
        assert!(
            validate_pair(&t, &b, &qq),
            "{:?}",
            pair_violations(&t, &b, &qq)
        );
        let s = SurfaceData::new(t.clone(), b, qq).unwrap();
        assert!(!s.has_rational_point());
    }

    #[test]
    fn quaternion_over_split_k_place_is_rejected() {
        let m = GlobalFieldModel::numbered(3);
        let k = EtaleAlgebra::new(&m, 2, vec![Component::uniform(2, &[1, 1], 3)]).unwrap();
        let l = EtaleAlgebra::new(
            &m,
            3,
            vec![Component {
                degree: 3,
                splitting: vec![vec![3], vec![1, 1, 1], vec![1, 1, 1]],
            }],
        )
        .unwrap();
        let t = Tower::new(m, k, l, None).unwrap();
        let mut inv = vec![Qz::ZERO; 7];
        inv[1] = q(1, 2);
        inv[2] = q(1, 2);
        let qq = BrauerClass::new(&t.l, inv).unwrap();
        assert_eq!(
            pair_violations(&t, &BrauerClass::zero(&t.k), &qq),
            vec![PairViolation::ResQ]
        );
    }

    #[test]
    fn k_generator() {
        let t = worked_tower();
        let s = SurfaceData::new(t.clone(), worked_b(&t), worked_q(&t)).unwrap();
        assert_eq!(s.g_action(GroupElement::LAutomorphism(0)).unwrap(), s);
        let once = s.g_action(GroupElement::KConjugation).unwrap();
        assert_eq!(once.b().invariants()[..2], [q(2, 3), q(1, 3)]);
        assert_eq!(once.b(), &t.k_conjugation_pushforward(s.b()));
        assert_eq!(once.g_action(GroupElement::KConjugation).unwrap(), s);
        assert!(matches!(
            s.g_action(GroupElement::LAutomorphism(3)),
            Err(BrauerError::UnknownAutomorphism(3))
        ));
    }

    #[test]
    fn orbits_and_equivalence() {
        let t = worked_tower();
        let s = SurfaceData::new(t.clone(), worked_b(&t), worked_q(&t)).unwrap();
        assert!(same_surface(&s, &s).unwrap());
        let s2 = s.g_action(GroupElement::KConjugation).unwrap();
        assert!(same_surface(&s, &s2).unwrap());
        assert!(same_surface(&s2, &s).unwrap());

        // Moving B to the split places over v3 breaks the restriction condition.
        let moved =
            BrauerClass::new(&t.k, vec![Qz::ZERO, Qz::ZERO, Qz::ZERO, q(1, 3), q(2, 3)]).unwrap();
        assert_eq!(
            SurfaceData::new(t.clone(), moved, worked_q(&t)),
            Err(BrauerError::InvalidPair("res_{KL/K}(B) ≠ 0".into()))
        );
        let other = SurfaceData::new(t.clone(), BrauerClass::zero(&t.k), worked_q(&t)).unwrap();
        assert!(!same_surface(&s, &other).unwrap());
        assert!(s.orbit().len() <= 6);
    }

    #[test]
    fn rational_points() {
        let t = worked_tower();
        assert!(SurfaceData::trivial(t.clone()).has_rational_point());
        let s = SurfaceData::new(t.clone(), BrauerClass::zero(&t.k), worked_q(&t)).unwrap();
        assert!(!s.has_rational_point());
    }

    #[test]
    fn natural_automorphisms_by_shape() {
        let m = GlobalFieldModel::numbered(2);
        let f3 = EtaleAlgebra::split(&m, 3);
        assert_eq!(natural_automorphisms(&f3).len(), 6);
        let galois = EtaleAlgebra::new(
            &m,
            3,
            vec![Component {
                degree: 3,
                splitting: vec![vec![3], vec![1, 1, 1]],
            }],
        )
        .unwrap();
        let autos = natural_automorphisms(&galois);
        assert_eq!(autos.len(), 3);
        assert_eq!(autos[1].image(), [0, 2, 3, 1]);
        let non_galois = EtaleAlgebra::new(
            &m,
            3,
            vec![Component {
                degree: 3,
                splitting: vec![vec![1, 2], vec![3]],
            }],
        )
        .unwrap();
        assert_eq!(natural_automorphisms(&non_galois).len(), 1);
        let fe = EtaleAlgebra::new(
            &m,
            3,
            vec![
                Component::uniform(1, &[1], 2),
                Component {
                    degree: 2,
                    splitting: vec![vec![1, 1], vec![2]],
                },
            ],
        )
        .unwrap();
        let autos = natural_automorphisms(&fe);
        assert_eq!(autos[1].image(), [0, 1, 3, 2, 4]);
    }

    #[test]
    fn bad_permutations() {
        let m = GlobalFieldModel::numbered(1);
        let l = EtaleAlgebra::new(
            &m,
            3,
            vec![
                Component::uniform(1, &[1], 1),
                Component::uniform(2, &[2], 1),
            ],
        )
        .unwrap();
        assert!(PlacePermutation::new(&l, vec![1, 0]).is_err());
        assert!(PlacePermutation::new(&l, vec![0, 0]).is_err());
        assert!(PlacePermutation::new(&l, vec![0]).is_err());
        assert!(PlacePermutation::new(&l, vec![0, 1]).is_ok());
    }
}
