//! The JSON surface document and the report computed from it.
//!
//! Place ids are `"component:label:slot"`. Invariants not listed are zero.
//! `D` is one algebra or a list; its invariants are keyed by base place
//! label. `L_automorphisms` is `"natural"` or a list of `{from: to}` maps on
//! place ids, unlisted places being fixed; when absent only the identity is
//! declared. A document of the form `{"input": {...}, ...}`, as emitted by
//! [`SurfaceReport`], is accepted and its `input` is read.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::brauer::{
    natural_automorphisms, pair_violations, BrauerClass, Component, EtaleAlgebra, GlobalFieldModel,
    PlacePermutation, Qz, SurfaceData, Tower,
};
use crate::error::{BrauerError, SchemaError};
use crate::index_reduction::{
    case_formula, case_of, reduced_index, simple_image_ranks, Case, CentralSimpleData,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub degree: u32,
    pub splitting: BTreeMap<String, Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub components: Vec<ComponentSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    #[serde(default)]
    pub invariants: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub degree: u64,
    #[serde(default)]
    pub invariants: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AutomorphismSpec {
    Named(String),
    Explicit(Vec<BTreeMap<String, String>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDocument {
    pub places: Vec<String>,
    #[serde(rename = "K")]
    pub k: AlgebraSpec,
    #[serde(rename = "L")]
    pub l: AlgebraSpec,
    #[serde(rename = "B", default)]
    pub b: ClassSpec,
    #[serde(rename = "Q", default)]
    pub q: ClassSpec,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<OneOrMany<AlgebraDSpec>>,
    #[serde(
        rename = "L_automorphisms",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub l_automorphisms: Option<AutomorphismSpec>,
}

/// A parsed document; `(B, Q)` has not been validated yet.
#[derive(Clone, Debug)]
pub struct SurfaceInput {
    pub tower: Arc<Tower>,
    pub b: BrauerClass,
    pub q: BrauerClass,
    pub algebras: Vec<(String, CentralSimpleData)>,
}

fn invalid(msg: impl Into<String>) -> SchemaError {
    SchemaError::Invalid(msg.into())
}

fn build_algebra(
    model: &GlobalFieldModel,
    degree: u32,
    spec: &AlgebraSpec,
) -> Result<EtaleAlgebra, BrauerError> {
    let mut comps = Vec::with_capacity(spec.components.len());
    for (c, comp) in spec.components.iter().enumerate() {
        if let Some(label) = comp.splitting.keys().find(|l| model.index_of(l).is_none()) {
            return Err(BrauerError::UnknownPlace(label.clone()));
        }
        let splitting = model
            .places()
            .iter()
            .map(|v| {
                comp.splitting
                    .get(v)
                    .cloned()
                    .ok_or(BrauerError::MissingSplitting {
                        component: c,
                        place: v.clone(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        comps.push(Component {
            degree: comp.degree,
            splitting,
        });
    }
    EtaleAlgebra::new(model, degree, comps)
}

fn build_class(
    algebra: &EtaleAlgebra,
    invariants: &BTreeMap<String, String>,
    index: impl Fn(&str) -> Option<usize>,
) -> Result<BrauerClass, BrauerError> {
    let mut inv = vec![Qz::ZERO; algebra.places().len()];
    for (id, value) in invariants {
        let i = index(id).ok_or_else(|| BrauerError::UnknownPlace(id.clone()))?;
        inv[i] = value.parse()?;
    }
    BrauerClass::new(algebra, inv)
}

fn sparse(x: &BrauerClass, id: impl Fn(usize) -> String) -> BTreeMap<String, String> {
    x.invariants()
        .iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(i, q)| (id(i), q.to_string()))
        .collect()
}

impl SurfaceDocument {
    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        let mut value: serde_json::Value = serde_json::from_str(text)?;
        if let Some(inner) = value.as_object_mut().and_then(|o| o.remove("input")) {
            value = inner;
        }
        Ok(serde_json::from_value(value)?)
    }

    pub fn load(&self) -> Result<SurfaceInput, SchemaError> {
        let model = GlobalFieldModel::new(self.places.clone())?;
        let k = build_algebra(&model, 2, &self.k)?;
        let l = build_algebra(&model, 3, &self.l)?;
        let autos = match &self.l_automorphisms {
            None => None,
            Some(AutomorphismSpec::Named(name)) if name == "natural" => {
                Some(natural_automorphisms(&l))
            }
            Some(AutomorphismSpec::Named(name)) => {
                return Err(invalid(format!(
                    "L_automorphisms must be \"natural\" or a list (got {name:?})"
                )))
            }
            Some(AutomorphismSpec::Explicit(maps)) => {
                let n = l.places().len();
                let mut out = Vec::with_capacity(maps.len());
                for map in maps {
                    let mut image: Vec<usize> = (0..n).collect();
                    for (from, to) in map {
                        let i = l
                            .place_index(&model, from)
                            .ok_or_else(|| BrauerError::UnknownPlace(from.clone()))?;
                        let j = l
                            .place_index(&model, to)
                            .ok_or_else(|| BrauerError::UnknownPlace(to.clone()))?;
                        image[i] = j;
                    }
                    out.push(PlacePermutation::new(&l, image)?);
                }
                Some(out)
            }
        };
        let b = build_class(&k, &self.b.invariants, |id| k.place_index(&model, id))?;
        let q = build_class(&l, &self.q.invariants, |id| l.place_index(&model, id))?;
        let f = EtaleAlgebra::base(&model);
        let specs: Vec<&AlgebraDSpec> = match &self.d {
            None => Vec::new(),
            Some(OneOrMany::One(d)) => vec![d],
            Some(OneOrMany::Many(ds)) => ds.iter().collect(),
        };
        let mut algebras: Vec<(String, CentralSimpleData)> = Vec::with_capacity(specs.len());
        for (i, spec) in specs.iter().enumerate() {
            let name = spec.name.clone().unwrap_or_else(|| {
                if specs.len() == 1 {
                    "D".into()
                } else {
                    format!("D{}", i + 1)
                }
            });
            if algebras.iter().any(|(n, _)| *n == name) {
                return Err(invalid(format!("algebra name {name:?} is used twice")));
            }
            let class = build_class(&f, &spec.invariants, |label| model.index_of(label))?;
            algebras.push((name, CentralSimpleData::new(&model, class, spec.degree)?));
        }
        let tower = Arc::new(Tower::new(model, k, l, autos)?);
        Ok(SurfaceInput {
            tower,
            b,
            q,
            algebras,
        })
    }
}

impl SurfaceInput {
    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        SurfaceDocument::from_json(text)?.load()
    }

    /// The canonical document describing this input: zero invariants and
    /// fixed places are omitted, automorphisms and `D` are explicit.
    pub fn to_document(&self) -> SurfaceDocument {
        let t = &self.tower;
        let model = &t.model;
        let algebra_spec = |a: &EtaleAlgebra| AlgebraSpec {
            components: a
                .components()
                .iter()
                .map(|c| ComponentSpec {
                    degree: c.degree,
                    splitting: model
                        .places()
                        .iter()
                        .cloned()
                        .zip(c.splitting.iter().cloned())
                        .collect(),
                })
                .collect(),
        };
        let autos = t
            .l_automorphisms
            .iter()
            .map(|h| {
                h.image()
                    .iter()
                    .enumerate()
                    .filter(|(i, j)| i != *j)
                    .map(|(i, &j)| (t.l.place_id(model, i), t.l.place_id(model, j)))
                    .collect()
            })
            .collect();
        let d = (!self.algebras.is_empty()).then(|| {
            OneOrMany::Many(
                self.algebras
                    .iter()
                    .map(|(name, d)| AlgebraDSpec {
                        name: Some(name.clone()),
                        degree: d.degree(),
                        invariants: sparse(d.class(), |i| model.places()[i].clone()),
                    })
                    .collect(),
            )
        });
        SurfaceDocument {
            places: model.places().to_vec(),
            k: algebra_spec(&t.k),
            l: algebra_spec(&t.l),
            b: ClassSpec {
                invariants: sparse(&self.b, |i| t.k.place_id(model, i)),
            },
            q: ClassSpec {
                invariants: sparse(&self.q, |i| t.l.place_id(model, i)),
            },
            d,
            l_automorphisms: Some(AutomorphismSpec::Explicit(autos)),
        }
    }

    pub fn surface(&self) -> Result<SurfaceData, BrauerError> {
        SurfaceData::new(self.tower.clone(), self.b.clone(), self.q.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankEntry {
    pub part: String,
    pub rank: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub name: String,
    pub degree: u64,
    pub index: u64,
    pub ranks: Vec<RankEntry>,
    pub reduced_index: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceReport {
    pub input: SurfaceDocument,
    pub valid: bool,
    pub violations: Vec<String>,
    pub index_b: Vec<u64>,
    pub index_q: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational_point: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
    pub reductions: Vec<ReductionReport>,
}

impl SurfaceReport {
    /// Evaluates `input`; `only` restricts the algebras `D` to one name.
    pub fn compute(input: &SurfaceInput, only: Option<&str>) -> Result<Self, SchemaError> {
        if let Some(name) = only {
            if !input.algebras.iter().any(|(n, _)| n == name) {
                return Err(invalid(format!("no algebra named {name:?}")));
            }
        }
        let t = &input.tower;
        let violations: Vec<String> = pair_violations(t, &input.b, &input.q)
            .iter()
            .map(ToString::to_string)
            .collect();
        let mut report = SurfaceReport {
            input: input.to_document(),
            valid: violations.is_empty(),
            violations,
            index_b: input.b.index(&t.k),
            index_q: input.q.index(&t.l),
            rational_point: None,
            orbit_size: None,
            case: None,
            reductions: Vec::new(),
        };
        let Ok(s) = input.surface() else {
            return Ok(report);
        };
        report.rational_point = Some(s.has_rational_point());
        report.orbit_size = Some(s.orbit().len());
        report.case = Some(case_of(&s));
        for (name, d) in input
            .algebras
            .iter()
            .filter(|(n, _)| only.is_none_or(|o| o == n))
        {
            let reduced = reduced_index(d, &s);
            debug_assert_eq!(reduced, case_formula(d, &s));
            report.reductions.push(ReductionReport {
                name: name.clone(),
                degree: d.degree(),
                index: d.index(),
                ranks: simple_image_ranks(d, &s)
                    .into_iter()
                    .map(|(p, rank)| RankEntry {
                        part: p.to_string(),
                        rank,
                    })
                    .collect(),
                reduced_index: reduced,
            });
        }
        Ok(report)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn list(xs: &[u64]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for SurfaceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            writeln!(f, "validate_pair: ok")?;
        } else {
            writeln!(f, "validate_pair: failed")?;
            for v in &self.violations {
                writeln!(f, "  violated: {v}")?;
            }
        }
        writeln!(f, "ind(B) per component of K: {}", list(&self.index_b))?;
        writeln!(f, "ind(Q) per component of L: {}", list(&self.index_q))?;
        if let Some(p) = self.rational_point {
            writeln!(f, "rational point: {}", yes_no(p))?;
        }
        if let Some(n) = self.orbit_size {
            writeln!(f, "orbit size: {n}")?;
        }
        if let Some(c) = self.case {
            writeln!(f, "case: {c}")?;
        }
        for r in &self.reductions {
            let ranks: Vec<String> = r
                .ranks
                .iter()
                .map(|e| format!("{} {}", e.part, e.rank))
                .collect();
            writeln!(
                f,
                "{}: degree {}, index {}, simple image ranks [{}]",
                r.name,
                r.degree,
                r.index,
                ranks.join(", ")
            )?;
            writeln!(f, "ind reduction of {}: {}", r.name, r.reduced_index)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const WORKED: &str = r#"{
        "places": ["v1", "v2", "v3"],
        "K": {"components": [{"degree": 2, "splitting": {"v1": [1, 1], "v2": [2], "v3": [1, 1]}}]},
        "L": {"components": [{"degree": 3, "splitting": {"v1": [3], "v2": [1, 1, 1], "v3": [1, 1, 1]}}]},
        "B": {"invariants": {"0:v1:0": "1/3", "0:v1:1": "2/3"}},
        "Q": {"invariants": {"0:v2:0": "1/2", "0:v2:1": "1/2"}},
        "D": {"degree": 2, "invariants": {"v1": "1/2", "v2": "1/2"}}
    }"#;

    #[test]
    fn worked_document() {
        let input = SurfaceInput::from_json(WORKED).unwrap();
        let r = SurfaceReport::compute(&input, None).unwrap();
        assert!(r.valid);
        assert_eq!(r.rational_point, Some(false));
        assert_eq!(r.reductions[0].reduced_index, 2);
        let text = r.to_string();
        assert!(text.contains("rational point: no"));
        assert!(text.contains("ind reduction of D: 2"));
    }

    #[test]
    fn round_trip() {
        let input = SurfaceInput::from_json(WORKED).unwrap();
        let first = SurfaceReport::compute(&input, None).unwrap().to_json();
        let again = SurfaceReport::compute(&SurfaceInput::from_json(&first).unwrap(), None)
            .unwrap()
            .to_json();
        assert_eq!(first, again);
    }

    #[test]
    fn rejects_unreduced_fraction() {
        let bad = WORKED.replace("\"1/2\", \"0:v2:1\"", "\"2/4\", \"0:v2:1\"");
        assert!(
            matches!(SurfaceInput::from_json(&bad), Err(SchemaError::Brauer(BrauerError::BadFraction(f))) if f == "2/4")
        );
    }

    #[test]
    fn invalid_pair_is_reported() {
        let moved = WORKED.replace("\"v2\": [2], \"v3\": [1, 1]", "\"v2\": [1, 1], \"v3\": [2]");
        let input = SurfaceInput::from_json(&moved).unwrap();
        let r = SurfaceReport::compute(&input, None).unwrap();
        assert!(!r.valid);
        assert_eq!(r.violations, vec!["res_{KL/L}(Q) ≠ 0"]);
        assert!(r.reductions.is_empty());
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(
            SurfaceInput::from_json("{"),
            Err(SchemaError::Json(_))
        ));
        let unknown = WORKED.replace("0:v1:0", "0:v9:0");
        assert!(matches!(
            SurfaceInput::from_json(&unknown),
            Err(SchemaError::Brauer(BrauerError::UnknownPlace(_)))
        ));
        let missing = WORKED.replace(", \"v3\": [1, 1]}", "}");
        assert!(matches!(
            SurfaceInput::from_json(&missing),
            Err(SchemaError::Brauer(BrauerError::MissingSplitting { .. }))
        ));
        let input = SurfaceInput::from_json(WORKED).unwrap();
        assert!(SurfaceReport::compute(&input, Some("E")).is_err());
    }

    #[test]
    fn natural_automorphisms_by_name() {
        let doc = WORKED.replace("\"D\":", "\"L_automorphisms\": \"natural\", \"D\":");
        let input = SurfaceInput::from_json(&doc).unwrap();
        assert_eq!(input.tower.l_automorphisms.len(), 3);
        let r = SurfaceReport::compute(&input, None).unwrap();
        let again = SurfaceInput::from_json(&r.to_json()).unwrap();
        assert_eq!(again.tower.l_automorphisms, input.tower.l_automorphisms);
    }
}
