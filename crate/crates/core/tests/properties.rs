use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dp6_core::brauer::{
    cor_trivial_classes, enumerate_towers, enumerate_valid_pairs, same_surface, validate_pair,
    BrauerClass, GroupElement, SurfaceData, Tower,
};
use dp6_core::lattice::{cokernel, is_exact_pair, kernel_basis, smith_normal_form, IntMatrix};

fn matrix(max_dim: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(-9i64..=9, r * c).prop_map(move |e| IntMatrix::from_i64(r, c, &e))
    })
}

fn is_unit(x: &BigInt) -> bool {
    x.abs().is_one()
}

/// A unimodular matrix built from row operations.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, f) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        for c in 0..n {
            let add = &u[(j, c)] * BigInt::from(f);
            u[(i, c)] += add;
        }
    }
    u
}

proptest! {
    #[test]
    fn smith_form_is_a_factorization(m in matrix(5)) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(&(&s.u * &m) * &s.v, s.d.clone());
        prop_assert!(is_unit(&s.u.determinant().unwrap()));
        prop_assert!(is_unit(&s.v.determinant().unwrap()));
        let diag = s.diagonal();
        for (i, a) in diag.iter().enumerate() {
            prop_assert!(!a.is_negative());
            if let Some(b) = diag.get(i + 1) {
                let divides = if a.is_zero() { b.is_zero() } else { (b % a).is_zero() };
                prop_assert!(divides, "{} does not divide {}", a, b);
            }
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                prop_assert!(i == j || s.d[(i, j)].is_zero());
            }
        }
    }

    #[test]
    fn kernel_is_saturated_and_exact(m in matrix(6)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(k.rows(), m.cols());
        prop_assert_eq!(k.cols() + m.rank(), m.cols());
        prop_assert!((&m * &k).is_zero());
        prop_assert!(cokernel(&k).invariant_factors().is_empty());
        if k.cols() > 0 {
            prop_assert!(is_exact_pair(&k, &m).unwrap());
        }
    }

    #[test]
    fn exactness_survives_unimodular_change(
        m in matrix(5),
        ops in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3), 0..8),
    ) {
        let k = kernel_basis(&m);
        prop_assume!(k.cols() > 0);
        let u = unimodular(m.rows(), &ops);
        prop_assert!(is_exact_pair(&k, &(&u * &m)).unwrap());
        let v = unimodular(k.cols(), &ops);
        prop_assert!(is_exact_pair(&(&k * &v), &m).unwrap());
    }
}

struct Sampled {
    tower: std::sync::Arc<Tower>,
    xs: Vec<BrauerClass>,
    ys: Vec<BrauerClass>,
}

fn two_place_classes() -> &'static [Sampled] {
    static CELL: OnceLock<Vec<Sampled>> = OnceLock::new();
    CELL.get_or_init(|| {
        enumerate_towers(2)
            .into_iter()
            .map(|tower| {
                let xs = cor_trivial_classes(&tower.k, &tower.k_over_f, 6).unwrap();
                let ys = cor_trivial_classes(&tower.l, &tower.l_over_f, 6).unwrap();
                Sampled { tower, xs, ys }
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn validity_decouples(t in any::<prop::sample::Index>(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let s = t.get(two_place_classes());
        let (x, y) = (i.get(&s.xs), j.get(&s.ys));
        let zero_b = BrauerClass::zero(&s.tower.k);
        let zero_q = BrauerClass::zero(&s.tower.l);
        prop_assert_eq!(
            validate_pair(&s.tower, x, y),
            validate_pair(&s.tower, x, &zero_q) && validate_pair(&s.tower, &zero_b, y)
        );
        // σ★x = −x on cor-trivial classes, and negation keeps reciprocity.
        prop_assert_eq!(s.tower.k_conjugation_pushforward(x), x.neg());
        prop_assert!(BrauerClass::new(&s.tower.k, x.neg().invariants().to_vec()).is_ok());
        for h in &s.tower.l_automorphisms {
            prop_assert!(BrauerClass::new(&s.tower.l, h.push_forward(y).invariants().to_vec()).is_ok());
        }
    }
}

#[test]
fn same_surface_on_sampled_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let towers: Vec<(std::sync::Arc<Tower>, Vec<SurfaceData>)> = enumerate_towers(3)
        .into_iter()
        .map(|t| {
            let pairs = enumerate_valid_pairs(&t, 6).unwrap();
            (t, pairs)
        })
        .filter(|(_, pairs)| pairs.len() > 1)
        .collect();
    assert!(!towers.is_empty());
    let mut related = 0;
    for _ in 0..2000 {
        let (_, pairs) = &towers[rng.gen_range(0..towers.len())];
        let a = &pairs[rng.gen_range(0..pairs.len())];
        // Half the time draw b and c from the orbit so the implications bite.
        let pick = |rng: &mut ChaCha8Rng, from: &SurfaceData| {
            if rng.gen_bool(0.5) {
                let gens = from.generators();
                let mut s = from.clone();
                for _ in 0..rng.gen_range(0..4) {
                    s = s.g_action(gens[rng.gen_range(0..gens.len())]).unwrap();
                }
                s
            } else {
                pairs[rng.gen_range(0..pairs.len())].clone()
            }
        };
        let b = pick(&mut rng, a);
        let c = pick(&mut rng, &b);
        assert!(same_surface(a, a).unwrap());
        let ab = same_surface(a, &b).unwrap();
        assert_eq!(ab, same_surface(&b, a).unwrap());
        if ab && same_surface(&b, &c).unwrap() {
            related += 1;
            assert!(same_surface(a, &c).unwrap());
        }
        assert_eq!(
            a.g_action(GroupElement::KConjugation)
                .unwrap()
                .g_action(GroupElement::KConjugation)
                .unwrap(),
            *a
        );
    }
    assert!(related > 100, "only {related} related triples");
}
