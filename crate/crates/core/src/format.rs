//! JSON documents. Every top-level document carries `"format": "tanhrank/1"`
//! (optional on input); rationals are `"p/q"` strings and indices 1-based.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::compress::{CompressedParameter, CompressedUnit};
use crate::constant::ConstantTerm;
use crate::cover::{Cover, CoverError, CoverInstance, Partition, PointSet};
use crate::net::{BiaslessParameter, NetError, Parameter, Unit};
use crate::proximate::ParCertificate;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reductions::{
    Dir, Gadget, GridLayout, ParInstance, ReductionError, RestrictedFormula, SsumInstance, SszInstance, TileKind,
    TileType, UparInstance,
};
use crate::reductions::xsat::LayoutEdge;

pub const FORMAT: &str = "tanhrank/1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("expected a JSON object")]
    NotAnObject,
    #[error("unsupported format {0:?}, expected {FORMAT:?}")]
    Version(String),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

fn field_error(field: &str, message: impl ToString) -> FormatError {
    FormatError::Field { field: field.to_string(), message: message.to_string() }
}

/// A value with a versioned JSON representation.
pub trait Document: Sized {
    fn to_json(&self) -> Value;
    fn from_json(value: &Value) -> Result<Self, FormatError>;

    fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    fn from_json_str(text: &str) -> Result<Self, FormatError> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

fn tagged<T: Serialize>(doc: &T) -> Value {
    let mut out = Map::new();
    out.insert("format".into(), Value::String(FORMAT.into()));
    if let Value::Object(fields) = serde_json::to_value(doc).expect("serializable") {
        out.extend(fields);
    }
    Value::Object(out)
}

fn untagged<T: DeserializeOwned>(value: &Value) -> Result<T, FormatError> {
    let Value::Object(fields) = value else {
        return Err(FormatError::NotAnObject);
    };
    let mut fields = fields.clone();
    match fields.remove("format") {
        None => {}
        Some(Value::String(s)) if s == FORMAT => {}
        Some(other) => return Err(FormatError::Version(other.to_string())),
    }
    Ok(serde_json::from_value(Value::Object(fields))?)
}

fn q(field: &str, s: &str) -> Result<Rational, FormatError> {
    parse_rational(s).map_err(|e| field_error(field, e))
}

fn qs(field: &str, v: &[String]) -> Result<Vec<Rational>, FormatError> {
    v.iter().map(|s| q(field, s)).collect()
}

fn s(v: &Rational) -> String {
    format_rational(v)
}

fn ss(v: &[Rational]) -> Vec<String> {
    v.iter().map(s).collect()
}

fn one_based(groups: &[Vec<usize>]) -> Vec<Vec<usize>> {
    groups.iter().map(|g| g.iter().map(|i| i + 1).collect()).collect()
}

fn zero_based(groups: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, FormatError> {
    groups
        .iter()
        .map(|g| g.iter().map(|&i| i.checked_sub(1).ok_or_else(|| field_error("groups", "indices start at 1"))).collect())
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitDoc {
    a: Vec<String>,
    b: Vec<String>,
    c: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParameterDoc {
    n: usize,
    m: usize,
    units: Vec<UnitDoc>,
    d: Vec<String>,
}

impl ParameterDoc {
    fn of(w: &Parameter) -> Self {
        ParameterDoc {
            n: w.n(),
            m: w.m(),
            units: w.units().iter().map(|u| UnitDoc { a: ss(&u.a), b: ss(&u.b), c: s(&u.c) }).collect(),
            d: ss(w.d()),
        }
    }

    fn build(&self) -> Result<Parameter, FormatError> {
        let units = self
            .units
            .iter()
            .map(|u| Ok(Unit::new(qs("a", &u.a)?, qs("b", &u.b)?, q("c", &u.c)?)))
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(Parameter::new(self.n, self.m, units, qs("d", &self.d)?)?)
    }
}

impl Document for Parameter {
    fn to_json(&self) -> Value {
        tagged(&ParameterDoc::of(self))
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        untagged::<ParameterDoc>(value)?.build()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BiaslessUnitDoc {
    a: String,
    b: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BiaslessDoc {
    units: Vec<BiaslessUnitDoc>,
}

impl BiaslessDoc {
    fn of(u: &BiaslessParameter) -> Self {
        BiaslessDoc { units: u.units.iter().map(|x| BiaslessUnitDoc { a: s(&x.a), b: s(&x.b) }).collect() }
    }

    fn build(&self) -> Result<BiaslessParameter, FormatError> {
        let units = self.units.iter().map(|x| Ok((q("a", &x.a)?, q("b", &x.b)?))).collect::<Result<Vec<_>, FormatError>>()?;
        Ok(BiaslessParameter::new(units))
    }
}

impl Document for BiaslessParameter {
    fn to_json(&self) -> Value {
        tagged(&BiaslessDoc::of(self))
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        untagged::<BiaslessDoc>(value)?.build()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompressedUnitDoc {
    alpha: Vec<String>,
    beta: Vec<String>,
    gamma: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TanhTermDoc {
    a: Vec<String>,
    c: String,
}

/// `base + Σ a · tanh(c)`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantDoc {
    base: Vec<String>,
    terms: Vec<TanhTermDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CompressedDoc {
    n: usize,
    m: usize,
    units: Vec<CompressedUnitDoc>,
    delta: ConstantDoc,
}

impl Document for CompressedParameter {
    fn to_json(&self) -> Value {
        tagged(&CompressedDoc {
            n: self.n,
            m: self.m,
            units: self
                .units
                .iter()
                .map(|u| CompressedUnitDoc { alpha: ss(&u.alpha), beta: ss(&u.beta), gamma: s(&u.gamma) })
                .collect(),
            delta: ConstantDoc {
                base: ss(self.delta.base()),
                terms: self.delta.terms().map(|(c, a)| TanhTermDoc { a: ss(a), c: s(c) }).collect(),
            },
        })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        let doc: CompressedDoc = untagged(value)?;
        let mut delta = ConstantTerm::new(qs("delta.base", &doc.delta.base)?);
        for t in &doc.delta.terms {
            let a = qs("delta.terms.a", &t.a)?;
            if a.len() != delta.dim() {
                return Err(field_error("delta.terms.a", "dimension differs from base"));
            }
            delta.add_tanh(&a, &q("delta.terms.c", &t.c)?);
        }
        if delta.dim() != doc.m {
            return Err(field_error("delta.base", format!("expected {} entries", doc.m)));
        }
        let units = doc
            .units
            .iter()
            .map(|u| {
                let unit = CompressedUnit { alpha: qs("alpha", &u.alpha)?, beta: qs("beta", &u.beta)?, gamma: q("gamma", &u.gamma)? };
                if unit.alpha.len() != doc.m || unit.beta.len() != doc.n {
                    return Err(field_error("units", "shape does not match n and m"));
                }
                Ok(unit)
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(CompressedParameter { n: doc.n, m: doc.m, units, delta })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupsDoc {
    groups: Vec<Vec<usize>>,
}

impl Document for ParCertificate {
    fn to_json(&self) -> Value {
        tagged(&GroupsDoc { groups: one_based(&self.groups) })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        Ok(ParCertificate { groups: zero_based(&untagged::<GroupsDoc>(value)?.groups)? })
    }
}

impl Document for Partition {
    fn to_json(&self) -> Value {
        tagged(&GroupsDoc { groups: one_based(&self.groups) })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        Ok(Partition { groups: zero_based(&untagged::<GroupsDoc>(value)?.groups)? })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsDoc {
    p: usize,
    points: Vec<Vec<String>>,
}

impl PointsDoc {
    fn of(points: &PointSet) -> Self {
        PointsDoc { p: points.p(), points: points.points().iter().map(|x| ss(x)).collect() }
    }

    fn build(&self) -> Result<PointSet, FormatError> {
        let points = self.points.iter().map(|x| qs("points", x)).collect::<Result<Vec<_>, _>>()?;
        Ok(PointSet::new(self.p, points)?)
    }
}

impl Document for PointSet {
    fn to_json(&self) -> Value {
        tagged(&PointsDoc::of(self))
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        untagged::<PointsDoc>(value)?.build()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverInstanceDoc {
    p: usize,
    points: Vec<Vec<String>>,
    eps: String,
    r: usize,
}

impl Document for CoverInstance {
    fn to_json(&self) -> Value {
        let PointsDoc { p, points } = PointsDoc::of(&self.points);
        tagged(&CoverInstanceDoc { p, points, eps: s(&self.eps), r: self.r })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        let doc: CoverInstanceDoc = untagged(value)?;
        let points = PointsDoc { p: doc.p, points: doc.points }.build()?;
        Ok(CoverInstance::new(points, q("eps", &doc.eps)?, doc.r)?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverDoc {
    centres: Vec<Vec<String>>,
}

impl Document for Cover {
    fn to_json(&self) -> Value {
        tagged(&CoverDoc { centres: self.points.iter().map(|x| ss(x)).collect() })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        let doc: CoverDoc = untagged(value)?;
        Ok(Cover { points: doc.centres.iter().map(|x| qs("centres", x)).collect::<Result<_, _>>()? })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormulaDoc {
    n: usize,
    clauses: Vec<Vec<i32>>,
}

impl Document for RestrictedFormula {
    fn to_json(&self) -> Value {
        tagged(&FormulaDoc { n: self.n, clauses: self.clauses.clone() })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        let doc: FormulaDoc = untagged(value)?;
        Ok(RestrictedFormula::new(doc.n, doc.clauses)?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    variable: usize,
    clause: usize,
    path: Vec<[i64; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutDoc {
    variables: Vec<[i64; 2]>,
    clauses: Vec<[i64; 2]>,
    edges: Vec<EdgeDoc>,
}

impl Document for GridLayout {
    fn to_json(&self) -> Value {
        let cells = |v: &[(i64, i64)]| v.iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>();
        tagged(&LayoutDoc {
            variables: cells(&self.variables),
            clauses: cells(&self.clauses),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc { variable: e.variable + 1, clause: e.clause + 1, path: cells(&e.path) })
                .collect(),
        })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        let doc: LayoutDoc = untagged(value)?;
        let cells = |v: &[[i64; 2]]| v.iter().map(|&[x, y]| (x, y)).collect::<Vec<_>>();
        let edges = doc
            .edges
            .iter()
            .map(|e| {
                let variable = e.variable.checked_sub(1).ok_or_else(|| field_error("edges.variable", "indices start at 1"))?;
                let clause = e.clause.checked_sub(1).ok_or_else(|| field_error("edges.clause", "indices start at 1"))?;
                if variable >= doc.variables.len() || clause >= doc.clauses.len() {
                    return Err(field_error("edges", "endpoint index out of range"));
                }
                Ok(LayoutEdge { variable, clause, path: cells(&e.path) })
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(GridLayout { variables: cells(&doc.variables), clauses: cells(&doc.clauses), edges })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GadgetDoc {
    kind: String,
    dirs: String,
    negative: Option<String>,
    r: usize,
    interior: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LibraryDoc {
    gadgets: Vec<GadgetDoc>,
}

fn dirs_of(field: &str, text: &str) -> Result<Vec<Dir>, FormatError> {
    text.chars().map(|c| Dir::from_letter(c).ok_or_else(|| field_error(field, format!("unknown direction {c:?}")))).collect()
}

/// A gadget library: `{"gadgets": [{"kind", "dirs", "negative", "r", "interior"}]}`
/// with directions as letters from `NESW`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetLibrary {
    pub gadgets: Vec<Gadget>,
}

impl Document for GadgetLibrary {
    fn to_json(&self) -> Value {
        let gadgets = self
            .gadgets
            .iter()
            .map(|g| GadgetDoc {
                kind: g.tile().kind().name().into(),
                dirs: g.tile().dirs().iter().map(|d| d.letter()).collect(),
                negative: g.tile().negative().map(|d| d.letter().to_string()),
                r: g.r(),
                interior: g.interior().iter().map(|[x, y]| [s(x), s(y)]).collect(),
            })
            .collect();
        tagged(&LibraryDoc { gadgets })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        let doc: LibraryDoc = untagged(value)?;
        let gadgets = doc
            .gadgets
            .iter()
            .map(|g| {
                let kind = TileKind::from_name(&g.kind).ok_or_else(|| field_error("kind", format!("unknown kind {:?}", g.kind)))?;
                let negative = match &g.negative {
                    None => None,
                    Some(text) => match dirs_of("negative", text)?.as_slice() {
                        [d] => Some(*d),
                        _ => return Err(field_error("negative", "expected one direction")),
                    },
                };
                let tile = TileType::new(kind, &dirs_of("dirs", &g.dirs)?, negative)?;
                let interior = g
                    .interior
                    .iter()
                    .map(|[x, y]| Ok([q("interior", x)?, q("interior", y)?]))
                    .collect::<Result<Vec<_>, FormatError>>()?;
                Ok(Gadget::new(tile, g.r, interior)?)
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(GadgetLibrary { gadgets })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SszDoc {
    x: Vec<i64>,
}

impl Document for SszInstance {
    fn to_json(&self) -> Value {
        tagged(&SszDoc { x: self.x.clone() })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        Ok(SszInstance::new(untagged::<SszDoc>(value)?.x)?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SsumDoc {
    x: Vec<i64>,
    target: i64,
}

impl Document for SsumInstance {
    fn to_json(&self) -> Value {
        tagged(&SsumDoc { x: self.x.clone(), target: self.target })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        let doc: SsumDoc = untagged(value)?;
        Ok(SsumInstance::new(doc.x, doc.target)?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParDoc {
    parameter: ParameterDoc,
    eps: String,
    r: usize,
}

impl Document for ParInstance {
    fn to_json(&self) -> Value {
        tagged(&ParDoc { parameter: ParameterDoc::of(&self.parameter), eps: s(&self.eps), r: self.r })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        let doc: ParDoc = untagged(value)?;
        Ok(ParInstance { parameter: doc.parameter.build()?, eps: q("eps", &doc.eps)?, r: doc.r })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UparDoc {
    parameter: BiaslessDoc,
    eps: String,
    r: usize,
}

impl Document for UparInstance {
    fn to_json(&self) -> Value {
        tagged(&UparDoc { parameter: BiaslessDoc::of(&self.parameter), eps: s(&self.eps), r: self.r })
    }

    fn from_json(value: &Value) -> Result<Self, FormatError> {
        let doc: UparDoc = untagged(value)?;
        Ok(UparInstance { parameter: doc.parameter.build()?, eps: q("eps", &doc.eps)?, r: doc.r })
    }
}
