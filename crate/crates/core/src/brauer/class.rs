use std::fmt;

use num_integer::Integer;

use super::etale::{EtaleAlgebra, PlaceMap};
use super::qz::Qz;
use crate::error::BrauerError;

/// A Brauer class of an étale algebra, as one local invariant per place.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerClass {
    invariants: Vec<Qz>,
}

impl BrauerClass {
    /// Checks the length and reciprocity on every component.
    pub fn new(algebra: &EtaleAlgebra, invariants: Vec<Qz>) -> Result<Self, BrauerError> {
        if invariants.len() != algebra.places().len() {
            return Err(BrauerError::IncompatibleTower(format!(
                "class has {} invariants, algebra has {} places",
                invariants.len(),
                algebra.places().len()
            )));
        }
        let x = BrauerClass { invariants };
        for c in 0..algebra.components().len() {
            let sum: Qz = x.invariants[algebra.component_range(c)]
                .iter()
                .copied()
                .sum();
            if !sum.is_zero() {
                return Err(BrauerError::Reciprocity {
                    component: c,
                    sum: sum.to_string(),
                });
            }
        }
        Ok(x)
    }

    pub(crate) fn from_raw(invariants: Vec<Qz>) -> Self {
        BrauerClass { invariants }
    }

    pub fn zero(algebra: &EtaleAlgebra) -> Self {
        BrauerClass {
            invariants: vec![Qz::ZERO; algebra.places().len()],
        }
    }

    pub fn invariants(&self) -> &[Qz] {
        &self.invariants
    }

    pub fn len(&self) -> usize {
        self.invariants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.invariants.iter().all(Qz::is_zero)
    }

    pub fn add(&self, other: &BrauerClass) -> BrauerClass {
        assert_eq!(self.len(), other.len(), "classes over different algebras");
        BrauerClass {
            invariants: self
                .invariants
                .iter()
                .zip(&other.invariants)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn neg(&self) -> BrauerClass {
        BrauerClass {
            invariants: self.invariants.iter().map(|&a| -a).collect(),
        }
    }

    pub fn times(&self, n: i64) -> BrauerClass {
        BrauerClass {
            invariants: self.invariants.iter().map(|&a| a.times(n)).collect(),
        }
    }

    /// Local index at every place is the denominator of the invariant; the
    /// index of a component is their lcm.
    pub fn index(&self, algebra: &EtaleAlgebra) -> Vec<u64> {
        (0..algebra.components().len())
            .map(|c| self.index_on(algebra.component_range(c)))
            .collect()
    }

    pub(crate) fn index_on(&self, range: std::ops::Range<usize>) -> u64 {
        self.invariants[range]
            .iter()
            .fold(1u64, |acc, x| acc.lcm(&(x.denom() as u64)))
    }
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.invariants.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Each target place gets the relative degree times the invariant below it.
pub fn restriction(x: &BrauerClass, map: &PlaceMap) -> Result<BrauerClass, BrauerError> {
    check_source(x, map)?;
    Ok(BrauerClass {
        invariants: map
            .image
            .iter()
            .map(|&(s, d)| x.invariants[s].times(d.into()))
            .collect(),
    })
}

/// Each source place gets the sum of the invariants above it.
pub fn corestriction(x: &BrauerClass, map: &PlaceMap) -> Result<BrauerClass, BrauerError> {
    if x.len() != map.target_len() {
        return Err(BrauerError::IncompatibleTower(format!(
            "class has {} invariants, extension has {} places",
            x.len(),
            map.target_len()
        )));
    }
    let mut out = vec![Qz::ZERO; map.source_len];
    for (&(s, _), &inv) in map.image.iter().zip(&x.invariants) {
        out[s] += inv;
    }
    Ok(BrauerClass { invariants: out })
}

fn check_source(x: &BrauerClass, map: &PlaceMap) -> Result<(), BrauerError> {
    if x.len() != map.source_len {
        return Err(BrauerError::IncompatibleTower(format!(
            "class has {} invariants, base of the extension has {} places",
            x.len(),
            map.source_len
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brauer::etale::{compose_etale, Component, GlobalFieldModel};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Qz {
        Qz::new(n, d)
    }

    fn inert_k(m: &GlobalFieldModel) -> EtaleAlgebra {
        EtaleAlgebra::new(m, 2, vec![Component::uniform(2, &[2], m.len())]).unwrap()
    }

    fn split_k(m: &GlobalFieldModel) -> EtaleAlgebra {
        EtaleAlgebra::new(m, 2, vec![Component::uniform(2, &[1, 1], m.len())]).unwrap()
    }

    #[test]
    fn restriction_examples() {
        let m = GlobalFieldModel::numbered(2);
        let f = EtaleAlgebra::base(&m);
        let k = inert_k(&m);
        assert!(restriction(&BrauerClass::zero(&f), &k.over_base(&m))
            .unwrap()
            .is_zero());
        let x = BrauerClass::new(&f, vec![q(1, 2), q(1, 2)]).unwrap();
        assert!(restriction(&x, &k.over_base(&m)).unwrap().is_zero());
        let y = BrauerClass::new(&f, vec![q(1, 3), q(2, 3)]).unwrap();
        let ks = split_k(&m);
        assert_eq!(
            restriction(&y, &ks.over_base(&m)).unwrap().invariants(),
            [q(1, 3), q(1, 3), q(2, 3), q(2, 3)]
        );
        assert!(restriction(
            &y,
            &compose_etale(&m, &ks, &EtaleAlgebra::split(&m, 3)).over_k
        )
        .is_err());
    }

    #[test]
    fn corestriction_examples() {
        let m = GlobalFieldModel::numbered(2);
        let ks = split_k(&m);
        let x = BrauerClass::new(&ks, vec![q(1, 3), q(2, 3), Qz::ZERO, Qz::ZERO]).unwrap();
        assert!(corestriction(&x, &ks.over_base(&m)).unwrap().is_zero());
        let k = inert_k(&m);
        let x = BrauerClass::new(&k, vec![q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(
            corestriction(&x, &k.over_base(&m)).unwrap().invariants(),
            [q(1, 2), q(1, 2)]
        );
    }

    #[test]
    fn index_examples() {
        let m = GlobalFieldModel::numbered(3);
        let f = EtaleAlgebra::base(&m);
        assert_eq!(BrauerClass::zero(&f).index(&f), vec![1]);
        let x = BrauerClass::new(&f, vec![q(1, 3), q(2, 3), Qz::ZERO]).unwrap();
        assert_eq!(x.index(&f), vec![3]);
        let y = BrauerClass::new(&f, vec![q(1, 2), q(1, 3), q(1, 6)]).unwrap();
        assert_eq!(y.index(&f), vec![6]);
    }

    #[test]
    fn reciprocity_is_enforced() {
        let m = GlobalFieldModel::numbered(2);
        let f = EtaleAlgebra::base(&m);
        assert!(matches!(
            BrauerClass::new(&f, vec![q(1, 3), Qz::ZERO]),
            Err(BrauerError::Reciprocity { component: 0, .. })
        ));
        assert!(BrauerClass::new(&f, vec![q(1, 3)]).is_err());
    }

    fn algebra_with_classes() -> impl Strategy<Value = (GlobalFieldModel, EtaleAlgebra, BrauerClass)>
    {
        let patterns = prop::collection::vec(0usize..3, 1..4);
        (patterns, prop::collection::vec(0i64..6, 3)).prop_map(|(pat, vals)| {
            let m = GlobalFieldModel::numbered(pat.len());
            let local = [vec![3], vec![1, 2], vec![1, 1, 1]];
            let splitting = pat.iter().map(|&i| local[i].clone()).collect();
            let l = EtaleAlgebra::new(
                &m,
                3,
                vec![Component {
                    degree: 3,
                    splitting,
                }],
            )
            .unwrap();
            let f = EtaleAlgebra::base(&m);
            let mut inv: Vec<Qz> = (0..m.len()).map(|i| q(vals[i % 3], 6)).collect();
            let s: Qz = inv.iter().copied().sum();
            inv[0] = inv[0] - s;
            let x = BrauerClass::new(&f, inv).unwrap();
            (m, l, x)
        })
    }

    proptest! {
        #[test]
        fn cor_after_res_multiplies_by_degree((m, l, x) in algebra_with_classes()) {
            let map = l.over_base(&m);
            let r = restriction(&x, &map).unwrap();
            prop_assert!(BrauerClass::new(&l, r.invariants().to_vec()).is_ok());
            prop_assert_eq!(corestriction(&r, &map).unwrap(), x.times(3));
        }
    }
}
