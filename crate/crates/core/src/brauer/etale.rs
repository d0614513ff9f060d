//! Étale algebras over the place model, described by their local degrees.

use num_integer::Integer;
use serde::Serialize;

use crate::error::BrauerError;

/// The base field, seen only through its ordered list of places.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GlobalFieldModel {
    places: Vec<String>,
}

impl GlobalFieldModel {
    pub fn new(places: Vec<String>) -> Result<Self, BrauerError> {
        if places.is_empty() {
            return Err(BrauerError::NoPlaces);
        }
        for (i, p) in places.iter().enumerate() {
            if p.is_empty() || p.contains(':') || places[..i].contains(p) {
                return Err(BrauerError::BadPlaceLabel(p.clone()));
            }
        }
        Ok(GlobalFieldModel { places })
    }

    /// Places named `v1, …, vn`.
    pub fn numbered(n: usize) -> Self {
        GlobalFieldModel::new((1..=n).map(|i| format!("v{i}")).collect()).expect("distinct labels")
    }

    pub fn places(&self) -> &[String] {
        &self.places
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.places.iter().position(|p| p == label)
    }
}

/// One field factor: its degree and, for every base place in order, the local
/// degrees of the places above it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Component {
    pub degree: u32,
    pub splitting: Vec<Vec<u32>>,
}

impl Component {
    /// A component with the same local pattern at every place.
    pub fn uniform(degree: u32, local: &[u32], places: usize) -> Self {
        Component {
            degree,
            splitting: vec![local.to_vec(); places],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Place {
    pub component: usize,
    pub base: usize,
    pub slot: usize,
    pub local_degree: u32,
}

/// A finite étale algebra. Places are ordered by component, then base place,
/// then slot, so each component owns a contiguous range.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EtaleAlgebra {
    degree: u32,
    components: Vec<Component>,
    #[serde(skip)]
    places: Vec<Place>,
}

impl EtaleAlgebra {
    pub fn new(
        model: &GlobalFieldModel,
        degree: u32,
        components: Vec<Component>,
    ) -> Result<Self, BrauerError> {
        let degrees: Vec<u32> = components.iter().map(|c| c.degree).collect();
        let allowed = match degree {
            1 => degrees == [1],
            2 => matches!(degrees.as_slice(), [2] | [1, 1]),
            3 => {
                let mut d = degrees.clone();
                d.sort_unstable();
                matches!(d.as_slice(), [3] | [1, 2] | [1, 1, 1])
            }
            _ => degrees.iter().sum::<u32>() == degree && degrees.iter().all(|&d| d > 0),
        };
        if !allowed {
            return Err(BrauerError::BadComponents {
                degree,
                components: degrees,
            });
        }
        Self::from_components(model, degree, components)
    }

    fn from_components(
        model: &GlobalFieldModel,
        degree: u32,
        components: Vec<Component>,
    ) -> Result<Self, BrauerError> {
        let mut places = Vec::new();
        for (c, comp) in components.iter().enumerate() {
            if comp.splitting.len() != model.len() {
                let missing = model.places()[comp.splitting.len().min(model.len() - 1)].clone();
                return Err(BrauerError::MissingSplitting {
                    component: c,
                    place: missing,
                });
            }
            for (v, local) in comp.splitting.iter().enumerate() {
                if local.iter().sum::<u32>() != comp.degree || local.contains(&0) {
                    return Err(BrauerError::BadSplitting {
                        component: c,
                        place: model.places()[v].clone(),
                        local: local.clone(),
                        degree: comp.degree,
                    });
                }
                for (slot, &d) in local.iter().enumerate() {
                    places.push(Place {
                        component: c,
                        base: v,
                        slot,
                        local_degree: d,
                    });
                }
            }
        }
        Ok(EtaleAlgebra {
            degree,
            components,
            places,
        })
    }

    /// `F` itself: one component with one place over each base place.
    pub fn base(model: &GlobalFieldModel) -> Self {
        Self::from_components(model, 1, vec![Component::uniform(1, &[1], model.len())])
            .expect("trivial algebra")
    }

    /// `F × ⋯ × F` with `n` factors.
    pub fn split(model: &GlobalFieldModel, n: u32) -> Self {
        let comps = (0..n)
            .map(|_| Component::uniform(1, &[1], model.len()))
            .collect();
        Self::new(model, n, comps).expect("split algebra")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn is_field(&self) -> bool {
        self.components.len() == 1
    }

    /// Place indices of component `c`, contiguous.
    pub fn component_range(&self, c: usize) -> std::ops::Range<usize> {
        let start = self
            .places
            .iter()
            .position(|p| p.component == c)
            .unwrap_or(self.places.len());
        let end = self.places[start..]
            .iter()
            .position(|p| p.component != c)
            .map_or(self.places.len(), |e| start + e);
        start..end
    }

    /// `"component:label:slot"`.
    pub fn place_id(&self, model: &GlobalFieldModel, i: usize) -> String {
        let p = &self.places[i];
        format!("{}:{}:{}", p.component, model.places()[p.base], p.slot)
    }

    pub fn place_index(&self, model: &GlobalFieldModel, id: &str) -> Option<usize> {
        let mut parts = id.splitn(3, ':');
        let component: usize = parts.next()?.parse().ok()?;
        let base = model.index_of(parts.next()?)?;
        let slot: usize = parts.next()?.parse().ok()?;
        self.places
            .iter()
            .position(|p| p.component == component && p.base == base && p.slot == slot)
    }

    /// Restriction data from the base field.
    pub fn over_base(&self, model: &GlobalFieldModel) -> PlaceMap {
        PlaceMap {
            source_len: model.len(),
            image: self
                .places
                .iter()
                .map(|p| (p.base, p.local_degree))
                .collect(),
        }
    }
}

/// For an extension `E'/E`: every place of `E'` with the place of `E` below it
/// and the relative local degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaceMap {
    pub source_len: usize,
    pub image: Vec<(usize, u32)>,
}

impl PlaceMap {
    pub fn target_len(&self) -> usize {
        self.image.len()
    }

    /// Total relative degree above each source place.
    pub fn fiber_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0; self.source_len];
        for &(s, d) in &self.image {
            deg[s] += d;
        }
        deg
    }
}

/// `K ⊗_F L` with its maps from `K` and from `L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composite {
    pub algebra: EtaleAlgebra,
    pub over_k: PlaceMap,
    pub over_l: PlaceMap,
}

/// Over a base place, a `K`-place of local degree `a` and an `L`-place of
/// local degree `b` meet in `gcd(a, b)` places of degree `lcm(a, b)`.
/// Components are the products `K_i ⊗ L_j`.
pub fn compose_etale(model: &GlobalFieldModel, k: &EtaleAlgebra, l: &EtaleAlgebra) -> Composite {
    let mut components = Vec::new();
    let mut over_k = Vec::new();
    let mut over_l = Vec::new();
    for (kc, kcomp) in k.components.iter().enumerate() {
        for (lc, lcomp) in l.components.iter().enumerate() {
            let mut splitting = Vec::with_capacity(model.len());
            for v in 0..model.len() {
                let mut local = Vec::new();
                let k_places = k
                    .places
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.component == kc && p.base == v);
                for (ki, kp) in k_places {
                    let l_places = l
                        .places
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| p.component == lc && p.base == v);
                    for (li, lp) in l_places {
                        let (a, b) = (kp.local_degree, lp.local_degree);
                        let m = a.lcm(&b);
                        for _ in 0..a.gcd(&b) {
                            local.push(m);
                            over_k.push((ki, m / a));
                            over_l.push((li, m / b));
                        }
                    }
                }
                splitting.push(local);
            }
            components.push(Component {
                degree: kcomp.degree * lcomp.degree,
                splitting,
            });
        }
    }
    let algebra = EtaleAlgebra::from_components(model, k.degree * l.degree, components)
        .expect("consistent local data");
    Composite {
        algebra,
        over_k: PlaceMap {
            source_len: k.places.len(),
            image: over_k,
        },
        over_l: PlaceMap {
            source_len: l.places.len(),
            image: over_l,
        },
    }
}
