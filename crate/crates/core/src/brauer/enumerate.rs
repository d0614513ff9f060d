//! Exhaustive enumeration of towers and of classes with bounded denominators.

use std::collections::HashMap;
use std::sync::Arc;

use super::class::BrauerClass;
use super::etale::{Component, EtaleAlgebra, GlobalFieldModel, PlaceMap};
use super::qz::Qz;
use super::surface::{validate_pair, SurfaceData, Tower};
use crate::error::BrauerError;
use crate::par::{self, Execution};

pub const ALLOWED_BOUNDS: [u32; 4] = [1, 2, 3, 6];

pub fn check_bound(bound: u32) -> Result<i64, BrauerError> {
    if ALLOWED_BOUNDS.contains(&bound) {
        Ok(bound.into())
    } else {
        Err(BrauerError::BadBound(bound))
    }
}

fn patterns<T: Clone>(choices: &[T], n: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(c.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// Every quadratic algebra: a field with each local pattern at each place,
/// then `F × F`.
pub fn k_patterns(model: &GlobalFieldModel) -> Vec<EtaleAlgebra> {
    let n = model.len();
    let mut out: Vec<EtaleAlgebra> = patterns(&[vec![1, 1], vec![2]], n)
        .into_iter()
        .map(|splitting| {
            EtaleAlgebra::new(
                model,
                2,
                vec![Component {
                    degree: 2,
                    splitting,
                }],
            )
            .expect("valid pattern")
        })
        .collect();
    out.push(EtaleAlgebra::split(model, 2));
    out
}

/// Every cubic algebra: a field, then `F × E`, then `F³`.
pub fn l_patterns(model: &GlobalFieldModel) -> Vec<EtaleAlgebra> {
    let n = model.len();
    let mut out: Vec<EtaleAlgebra> = patterns(&[vec![3], vec![1, 2], vec![1, 1, 1]], n)
        .into_iter()
        .map(|splitting| {
            EtaleAlgebra::new(
                model,
                3,
                vec![Component {
                    degree: 3,
                    splitting,
                }],
            )
            .expect("valid pattern")
        })
        .collect();
    for splitting in patterns(&[vec![2], vec![1, 1]], n) {
        let comps = vec![
            Component::uniform(1, &[1], n),
            Component {
                degree: 2,
                splitting,
            },
        ];
        out.push(EtaleAlgebra::new(model, 3, comps).expect("valid pattern"));
    }
    out.push(EtaleAlgebra::split(model, 3));
    out
}

/// All towers over `1..=max_places` numbered places, with the natural
/// automorphisms of `L`.
pub fn enumerate_towers(max_places: usize) -> Vec<Arc<Tower>> {
    let mut out = Vec::new();
    for n in 1..=max_places {
        let model = GlobalFieldModel::numbered(n);
        for k in k_patterns(&model) {
            for l in l_patterns(&model) {
                let t = Tower::with_natural_automorphisms(model.clone(), k.clone(), l)
                    .expect("valid tower");
                out.push(Arc::new(t));
            }
        }
    }
    out
}

/// A class with all invariants in `(1/n)Z/Z`, stored as numerators mod `n`.
type Code = Vec<u8>;

/// Cor-trivial classes as numerator vectors, in lexicographic order. Over each
/// base place the local numerators sum to zero; reciprocity filters the rest.
fn cor_trivial_codes(algebra: &EtaleAlgebra, over_f: &PlaceMap, n: u8) -> Vec<Code> {
    let mut by_base: Vec<Vec<usize>> = vec![Vec::new(); over_f.source_len];
    for (i, &(v, _)) in over_f.image.iter().enumerate() {
        by_base[v].push(i);
    }
    let local: Vec<Vec<Code>> = by_base
        .iter()
        .map(|places| {
            let free = places.len().saturating_sub(1);
            patterns(&(0..n).collect::<Vec<u8>>(), free)
                .into_iter()
                .map(|mut v| {
                    let s = v.iter().map(|&k| u32::from(k)).sum::<u32>() % u32::from(n);
                    v.push(((u32::from(n) - s) % u32::from(n)) as u8);
                    v
                })
                .collect()
        })
        .collect();
    let ranges: Vec<std::ops::Range<usize>> = (0..algebra.components().len())
        .map(|c| algebra.component_range(c))
        .collect();
    let mut out = Vec::new();
    let mut current = vec![0u8; algebra.places().len()];
    fill(&by_base, &local, 0, &mut current, &mut |code| {
        let reciprocal = ranges.iter().all(|r| {
            code[r.clone()].iter().map(|&k| u32::from(k)).sum::<u32>() % u32::from(n) == 0
        });
        if reciprocal {
            out.push(code.to_vec());
        }
    });
    out.sort_unstable();
    out
}

fn restrict_code(x: &[u8], map: &PlaceMap, n: u8) -> Code {
    map.image
        .iter()
        .map(|&(s, d)| ((u32::from(x[s]) * d) % u32::from(n)) as u8)
        .collect()
}

fn to_class(code: &[u8], n: u8) -> BrauerClass {
    BrauerClass::from_raw(code.iter().map(|&k| Qz::new(k.into(), n.into())).collect())
}

fn code_denominator(bound: u32) -> Result<u8, BrauerError> {
    Ok(check_bound(bound)? as u8)
}

/// Every class over `algebra` with invariants in `(1/bound)Z/Z` whose
/// corestriction to `F` vanishes, sorted.
pub fn cor_trivial_classes(
    algebra: &EtaleAlgebra,
    over_f: &PlaceMap,
    bound: u32,
) -> Result<Vec<BrauerClass>, BrauerError> {
    let n = code_denominator(bound)?;
    Ok(cor_trivial_codes(algebra, over_f, n)
        .iter()
        .map(|c| to_class(c, n))
        .collect())
}

fn fill(
    by_base: &[Vec<usize>],
    local: &[Vec<Code>],
    v: usize,
    current: &mut [u8],
    emit: &mut dyn FnMut(&[u8]),
) {
    if v == by_base.len() {
        emit(current);
        return;
    }
    for choice in &local[v] {
        for (&p, &x) in by_base[v].iter().zip(choice) {
            current[p] = x;
        }
        fill(by_base, local, v + 1, current, emit);
    }
}

fn matching_codes(tower: &Tower, xs: &[Code], ys: &[Code], n: u8) -> Vec<(usize, usize)> {
    let mut by_res: HashMap<Code, Vec<usize>> = HashMap::new();
    for (j, y) in ys.iter().enumerate() {
        by_res
            .entry(restrict_code(y, &tower.kl.over_l, n))
            .or_default()
            .push(j);
    }
    let mut out = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        if let Some(js) = by_res.get(&restrict_code(x, &tower.kl.over_k, n)) {
            out.extend(js.iter().map(|&j| (i, j)));
        }
    }
    out
}

/// All `(x, y)` with cor-trivial `x` over `K` and `y` over `L`, denominators
/// dividing `bound`, and `res_{KL/K}(x) = res_{KL/L}(y)`. Sorted.
pub fn matching_pairs(
    tower: &Tower,
    bound: u32,
) -> Result<Vec<(BrauerClass, BrauerClass)>, BrauerError> {
    let n = code_denominator(bound)?;
    let xs = cor_trivial_codes(&tower.k, &tower.k_over_f, n);
    let ys = cor_trivial_codes(&tower.l, &tower.l_over_f, n);
    Ok(matching_codes(tower, &xs, &ys, n)
        .into_iter()
        .map(|(i, j)| (to_class(&xs[i], n), to_class(&ys[j], n)))
        .collect())
}

/// The valid surface data with denominators dividing `bound`, sorted by
/// `(B, Q)`. Built from [`matching_pairs`]; every match must validate.
pub fn enumerate_valid_pairs(
    tower: &Arc<Tower>,
    bound: u32,
) -> Result<Vec<SurfaceData>, BrauerError> {
    matching_pairs(tower, bound)?
        .into_iter()
        .map(|(b, q)| SurfaceData::new(tower.clone(), b, q))
        .collect()
}

/// Outcome of the divisibility checks on one tower.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PsiCheck {
    pub cor_trivial_b: usize,
    pub cor_trivial_q: usize,
    pub matches: usize,
    pub valid_b: usize,
    pub valid_q: usize,
    pub failures: Vec<String>,
}

/// Checks on one tower that every match has `3x = 0`, `2y = 0` and trivial
/// restriction to `KL`, and that the matches are exactly the pairs passing
/// [`validate_pair`].
pub fn check_psi(tower: &Tower, bound: u32) -> Result<PsiCheck, BrauerError> {
    let n = code_denominator(bound)?;
    let xs = cor_trivial_codes(&tower.k, &tower.k_over_f, n);
    let ys = cor_trivial_codes(&tower.l, &tower.l_over_f, n);
    let zero_b = BrauerClass::zero(&tower.k);
    let zero_q = BrauerClass::zero(&tower.l);
    // A class can only validate if its restriction to KL vanishes, so
    // validate_pair runs on those candidates only.
    let restricts_to_zero =
        |code: &Code, map: &PlaceMap| restrict_code(code, map, n).iter().all(|&k| k == 0);
    let valid_b = xs
        .iter()
        .filter(|x| {
            restricts_to_zero(x, &tower.kl.over_k) && validate_pair(tower, &to_class(x, n), &zero_q)
        })
        .count();
    let valid_q = ys
        .iter()
        .filter(|y| {
            restricts_to_zero(y, &tower.kl.over_l) && validate_pair(tower, &zero_b, &to_class(y, n))
        })
        .count();
    let matches = matching_codes(tower, &xs, &ys, n);
    let mut failures = Vec::new();
    for &(i, j) in &matches {
        let (x, y) = (to_class(&xs[i], n), to_class(&ys[j], n));
        if tower.res_k_to_kl(&x) != tower.res_l_to_kl(&y) {
            failures.push(format!("({x}, {y}) do not match"));
        }
        if !x.times(3).is_zero() {
            failures.push(format!("3x ≠ 0 for x = {x}"));
        }
        if !y.times(2).is_zero() {
            failures.push(format!("2y ≠ 0 for y = {y}"));
        }
        if !tower.res_k_to_kl(&x).is_zero() {
            failures.push(format!("res_KL(x) ≠ 0 for x = {x}"));
        }
        if !validate_pair(tower, &x, &y) {
            failures.push(format!("({x}, {y}) matches but fails validation"));
        }
    }
    if matches.len() != valid_b * valid_q {
        failures.push(format!(
            "{} matches but {valid_b} × {valid_q} valid pairs",
            matches.len()
        ));
    }
    Ok(PsiCheck {
        cor_trivial_b: xs.len(),
        cor_trivial_q: ys.len(),
        matches: matches.len(),
        valid_b,
        valid_q,
        failures,
    })
}

/// [`check_psi`] over many towers.
pub fn check_psi_all(
    towers: &[Arc<Tower>],
    bound: u32,
    mode: Execution,
) -> Result<Vec<PsiCheck>, BrauerError> {
    check_bound(bound)?;
    par::map(towers, mode, |t| check_psi(t, bound))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_count() {
        assert_eq!(enumerate_towers(1).len(), 18);
        assert_eq!(enumerate_towers(2).len(), 18 + 70);
        assert_eq!(enumerate_towers(3).len(), 412);
    }

    #[test]
    fn bound_one_gives_only_the_trivial_pair() {
        for t in enumerate_towers(2) {
            let pairs = enumerate_valid_pairs(&t, 1).unwrap();
            assert_eq!(pairs.len(), 1);
            assert!(pairs[0].has_rational_point());
        }
    }

    #[test]
    fn bad_bound() {
        let t = &enumerate_towers(1)[0];
        assert_eq!(enumerate_valid_pairs(t, 4), Err(BrauerError::BadBound(4)));
    }

    #[test]
    fn cor_trivial_count_matches_brute_force() {
        // Oracle: every vector in (Z/6)^places, filtered by reciprocity and cor = 0.
        for t in enumerate_towers(2) {
            let alg = &t.l;
            let n = alg.places().len();
            let mut brute = 0;
            let total = 6usize.pow(n as u32);
            for code in 0..total {
                let inv: Vec<Qz> = (0..n)
                    .map(|i| Qz::new((code / 6usize.pow(i as u32) % 6) as i64, 6))
                    .collect();
                if let Ok(x) = BrauerClass::new(alg, inv) {
                    if t.cor_l(&x).is_zero() {
                        brute += 1;
                    }
                }
            }
            assert_eq!(
                cor_trivial_classes(alg, &t.l_over_f, 6).unwrap().len(),
                brute
            );
        }
    }

    #[test]
    fn psi_on_small_models() {
        for t in enumerate_towers(2) {
            let c = check_psi(&t, 6).unwrap();
            assert!(c.failures.is_empty(), "{:?}", c.failures);
        }
    }
}
