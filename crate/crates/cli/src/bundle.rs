//! Problem bundles: one JSON file with a lattice, cones, sheaf data and a
//! list of queries.

use std::fmt;
use std::sync::Arc;

use movstab_core::rational::{int, parse_rational};
use movstab_core::{
    NegativeCurveSet, NsLattice, NumClass, RationalCone, Rational, SheafClass, SubsheafFamily,
};
use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// A malformed bundle, with the JSON path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for SchemaError {}

/// A rational written either as a JSON integer or as a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rat(pub Rational);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => n
                .as_i64()
                .map(|v| Rat(int(v)))
                .ok_or_else(|| D::Error::custom(format!("{n} is not an integer; write \"p/q\""))),
            Value::String(s) => parse_rational(&s)
                .map(Rat)
                .map_err(|_| D::Error::custom(format!("invalid rational {s:?}"))),
            other => Err(D::Error::custom(format!("expected a rational, found {other}"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSheaf {
    pub rank: u32,
    pub c1: Vec<Rat>,
    pub c2: Rat,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    gram: Vec<Vec<Rat>>,
    #[serde(default)]
    labels: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCone {
    #[serde(default)]
    generators: Option<Vec<Vec<Rat>>>,
    #[serde(default)]
    facets: Option<Vec<Vec<Rat>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    #[serde(default)]
    top: Option<RawSheaf>,
    #[serde(default)]
    members: Vec<RawSheaf>,
    #[serde(default)]
    contains: Option<Vec<(usize, usize)>>,
    #[serde(default)]
    saturated: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBundle {
    schema: u32,
    #[serde(default)]
    name: Option<String>,
    lattice: RawLattice,
    eff_cone: RawCone,
    #[serde(default)]
    mov_cone: Option<RawCone>,
    #[serde(default)]
    sheaf: Option<RawSheaf>,
    #[serde(default)]
    family: Option<RawFamily>,
    #[serde(default)]
    curves: Vec<Vec<Rat>>,
    #[serde(default)]
    queries: Vec<Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeName {
    Eff,
    Mov,
}

#[derive(Debug, Clone)]
pub enum Query {
    Slope { alpha: NumClass },
    Stability { alpha: NumClass },
    Hn { alpha: NumClass },
    Jh { alpha: NumClass },
    Segment { from: NumClass, to: NumClass },
    Walls,
    Openness { alpha: NumClass, beta: NumClass },
    Destabilizers { beta: NumClass, bound: Rational },
    Signature,
    Hodge { divisor: NumClass, alpha: NumClass },
    Cartier { ambient: Vec<NumClass>, sub: Vec<NumClass> },
    Cone,
    Contains { class: NumClass, cone: ConeName, interior: bool },
    Discriminant,
    Tensor { other: SheafClass, alpha: Option<NumClass> },
    Zariski { divisor: NumClass, curves: Option<NegativeCurveSet> },
    NefZeroSquare { divisor: NumClass, alpha: NumClass },
    Classify { divisor: NumClass },
    Bgi { alpha: NumClass },
    Flat { alpha: NumClass },
    Projflat { alpha: NumClass },
    FlatHigher { n: u32, c1_h: Rational, c1sq_h: Rational, c2_h: Rational, rank: Option<u32> },
    TorusGate { n: u32, c2_h: Rational, kx_trivial: bool },
}

pub const COMMANDS: &[&str] = &[
    "slope", "stability", "hn", "jh", "segment", "walls", "openness", "destabilizers",
    "signature", "hodge", "cartier", "cone", "contains", "discriminant", "tensor", "zariski",
    "nef_zero_square", "classify", "bgi", "flat", "projflat", "flat_higher", "torus_gate",
];

#[derive(Debug, Clone)]
pub struct QuerySpec {
    pub index: usize,
    pub cmd: String,
    /// The query object as written.
    pub echo: Value,
    pub query: Query,
}

#[derive(Debug, Clone)]
pub struct Bundle {
    pub name: String,
    pub lattice: Arc<NsLattice>,
    pub eff: RationalCone,
    pub mov: RationalCone,
    pub family: SubsheafFamily,
    pub curves: NegativeCurveSet,
    pub queries: Vec<QuerySpec>,
}

fn typed<T: DeserializeOwned>(value: Value, prefix: &str) -> Result<T, SchemaError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner == ".") {
            (true, _) => inner,
            (false, true) => prefix.to_string(),
            (false, false) if inner.starts_with('[') => format!("{prefix}{inner}"),
            (false, false) => format!("{prefix}.{inner}"),
        };
        SchemaError::new(path, e.into_inner().to_string())
    })
}

fn class(l: &Arc<NsLattice>, v: Vec<Rat>, path: &str) -> Result<NumClass, SchemaError> {
    if v.len() != l.rank() {
        return Err(SchemaError::new(
            path,
            format!("expected {} coordinates, found {}", l.rank(), v.len()),
        ));
    }
    NumClass::new(l, v.into_iter().map(|r| r.0).collect())
        .map_err(|e| SchemaError::new(path, e.to_string()))
}

fn classes(l: &Arc<NsLattice>, vs: Vec<Vec<Rat>>, path: &str) -> Result<Vec<NumClass>, SchemaError> {
    vs.into_iter()
        .enumerate()
        .map(|(i, v)| class(l, v, &format!("{path}[{i}]")))
        .collect()
}

pub fn sheaf(l: &Arc<NsLattice>, raw: RawSheaf, path: &str) -> Result<SheafClass, SchemaError> {
    let c1 = class(l, raw.c1, &format!("{path}.c1"))?;
    SheafClass::new(raw.rank, c1, raw.c2.0).map_err(|e| SchemaError::new(path, e.to_string()))
}

fn cone(l: &Arc<NsLattice>, raw: RawCone, path: &str) -> Result<RationalCone, SchemaError> {
    let built = match (raw.generators, raw.facets) {
        (Some(g), None) => {
            let gens = classes(l, g, &format!("{path}.generators"))?;
            if gens.is_empty() {
                RationalCone::zero(l)
            } else {
                RationalCone::from_generators(&gens)
            }
        }
        (None, Some(f)) => RationalCone::from_facets(l, &classes(l, f, &format!("{path}.facets"))?),
        _ => return Err(SchemaError::new(path, "give exactly one of generators, facets")),
    };
    built.map_err(|e| SchemaError::new(path, e.to_string()))
}

fn curves(l: &Arc<NsLattice>, raw: Vec<Vec<Rat>>, path: &str) -> Result<NegativeCurveSet, SchemaError> {
    NegativeCurveSet::new(classes(l, raw, path)?).map_err(|e| SchemaError::new(path, e.to_string()))
}

pub fn parse_bundle(text: &str) -> Result<Bundle, SchemaError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| SchemaError::new("", format!("invalid JSON: {e}")))?;
    let raw: RawBundle = typed(value, "")?;
    if raw.schema != SCHEMA_VERSION {
        return Err(SchemaError::new(
            "schema",
            format!("unsupported schema version {} (expected {SCHEMA_VERSION})", raw.schema),
        ));
    }
    let labels = raw.lattice.labels;
    let gram: Vec<Vec<Rational>> =
        raw.lattice.gram.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect();
    let l = NsLattice::new(gram, labels).map_err(|e| SchemaError::new("lattice", e.to_string()))?;
    let eff = cone(&l, raw.eff_cone, "eff_cone")?;
    let mov = match raw.mov_cone {
        Some(c) => cone(&l, c, "mov_cone")?,
        None => eff.dual(),
    };

    let fam = raw.family.unwrap_or(RawFamily {
        top: None,
        members: Vec::new(),
        contains: None,
        saturated: false,
    });
    let top = match (raw.sheaf, fam.top) {
        (Some(s), None) => sheaf(&l, s, "sheaf")?,
        (None, Some(t)) => sheaf(&l, t, "family.top")?,
        (Some(s), Some(t)) => {
            let (s, t) = (sheaf(&l, s, "sheaf")?, sheaf(&l, t, "family.top")?);
            if s != t {
                return Err(SchemaError::new("family.top", "differs from sheaf"));
            }
            s
        }
        (None, None) => return Err(SchemaError::new("sheaf", "missing field")),
    };
    let members = fam
        .members
        .into_iter()
        .enumerate()
        .map(|(i, m)| sheaf(&l, m, &format!("family.members[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let family = SubsheafFamily::new(top, members, fam.contains, fam.saturated)
        .map_err(|e| SchemaError::new("family", e.to_string()))?;
    let curves = curves(&l, raw.curves, "curves")?;

    let queries = raw
        .queries
        .into_iter()
        .enumerate()
        .map(|(i, q)| parse_query(&l, i, q))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(Bundle {
        name: raw.name.unwrap_or_default(),
        lattice: l,
        eff,
        mov,
        family,
        curves,
        queries,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtArgs {
    #[serde(alias = "at")]
    alpha: Vec<Rat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NoArgs {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentArgs {
    from: Vec<Rat>,
    to: Vec<Rat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OpennessArgs {
    alpha: Vec<Rat>,
    beta: Vec<Rat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DestabArgs {
    beta: Vec<Rat>,
    bound: Rat,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HodgeArgs {
    divisor: Vec<Rat>,
    alpha: Vec<Rat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CartierArgs {
    ambient: Vec<Vec<Rat>>,
    sub: Vec<Vec<Rat>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ContainsArgs {
    class: Vec<Rat>,
    cone: ConeName,
    #[serde(default)]
    interior: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorArgs {
    other: RawSheaf,
    #[serde(default)]
    alpha: Option<Vec<Rat>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ZariskiArgs {
    divisor: Vec<Rat>,
    #[serde(default)]
    curves: Option<Vec<Vec<Rat>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DivisorArgs {
    divisor: Vec<Rat>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FlatHigherArgs {
    n: u32,
    #[serde(rename = "c1H")]
    c1_h: Rat,
    #[serde(rename = "c1sqH")]
    c1sq_h: Rat,
    #[serde(rename = "c2H")]
    c2_h: Rat,
    #[serde(default)]
    rank: Option<u32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TorusArgs {
    n: u32,
    #[serde(rename = "c2H")]
    c2_h: Rat,
    kx_trivial: bool,
}

/// Parses one query object; `index` is its position in `queries`.
pub fn parse_query(l: &Arc<NsLattice>, index: usize, value: Value) -> Result<QuerySpec, SchemaError> {
    let base = format!("queries[{index}]");
    let echo = value.clone();
    let Value::Object(mut obj) = value else {
        return Err(SchemaError::new(base, "query must be an object"));
    };
    let cmd = match obj.remove("cmd") {
        Some(Value::String(s)) => s,
        Some(_) => return Err(SchemaError::new(format!("{base}.cmd"), "must be a string")),
        None => return Err(SchemaError::new(format!("{base}.cmd"), "missing field")),
    };
    let args = Value::Object(obj);
    let p = |field: &str| format!("{base}.{field}");
    let at = |args: Value| -> Result<NumClass, SchemaError> {
        let a: AtArgs = typed(args, &base)?;
        class(l, a.alpha, &p("alpha"))
    };
    let query = match cmd.as_str() {
        "slope" => Query::Slope { alpha: at(args)? },
        "stability" => Query::Stability { alpha: at(args)? },
        "hn" => Query::Hn { alpha: at(args)? },
        "jh" => Query::Jh { alpha: at(args)? },
        "bgi" => Query::Bgi { alpha: at(args)? },
        "flat" => Query::Flat { alpha: at(args)? },
        "projflat" => Query::Projflat { alpha: at(args)? },
        "segment" => {
            let a: SegmentArgs = typed(args, &base)?;
            Query::Segment { from: class(l, a.from, &p("from"))?, to: class(l, a.to, &p("to"))? }
        }
        "walls" | "signature" | "cone" | "discriminant" => {
            let _: NoArgs = typed(args, &base)?;
            match cmd.as_str() {
                "walls" => Query::Walls,
                "signature" => Query::Signature,
                "cone" => Query::Cone,
                _ => Query::Discriminant,
            }
        }
        "openness" => {
            let a: OpennessArgs = typed(args, &base)?;
            Query::Openness {
                alpha: class(l, a.alpha, &p("alpha"))?,
                beta: class(l, a.beta, &p("beta"))?,
            }
        }
        "destabilizers" => {
            let a: DestabArgs = typed(args, &base)?;
            Query::Destabilizers { beta: class(l, a.beta, &p("beta"))?, bound: a.bound.0 }
        }
        "hodge" => {
            let a: HodgeArgs = typed(args, &base)?;
            Query::Hodge {
                divisor: class(l, a.divisor, &p("divisor"))?,
                alpha: class(l, a.alpha, &p("alpha"))?,
            }
        }
        "cartier" => {
            let a: CartierArgs = typed(args, &base)?;
            Query::Cartier {
                ambient: classes(l, a.ambient, &p("ambient"))?,
                sub: classes(l, a.sub, &p("sub"))?,
            }
        }
        "contains" => {
            let a: ContainsArgs = typed(args, &base)?;
            Query::Contains {
                class: class(l, a.class, &p("class"))?,
                cone: a.cone,
                interior: a.interior,
            }
        }
        "tensor" => {
            let a: TensorArgs = typed(args, &base)?;
            Query::Tensor {
                other: sheaf(l, a.other, &p("other"))?,
                alpha: a.alpha.map(|v| class(l, v, &p("alpha"))).transpose()?,
            }
        }
        "zariski" => {
            let a: ZariskiArgs = typed(args, &base)?;
            Query::Zariski {
                divisor: class(l, a.divisor, &p("divisor"))?,
                curves: a.curves.map(|c| curves(l, c, &p("curves"))).transpose()?,
            }
        }
        "nef_zero_square" => {
            let a: HodgeArgs = typed(args, &base)?;
            Query::NefZeroSquare {
                divisor: class(l, a.divisor, &p("divisor"))?,
                alpha: class(l, a.alpha, &p("alpha"))?,
            }
        }
        "classify" => {
            let a: DivisorArgs = typed(args, &base)?;
            Query::Classify { divisor: class(l, a.divisor, &p("divisor"))? }
        }
        "flat_higher" => {
            let a: FlatHigherArgs = typed(args, &base)?;
            Query::FlatHigher { n: a.n, c1_h: a.c1_h.0, c1sq_h: a.c1sq_h.0, c2_h: a.c2_h.0, rank: a.rank }
        }
        "torus_gate" => {
            let a: TorusArgs = typed(args, &base)?;
            Query::TorusGate { n: a.n, c2_h: a.c2_h.0, kx_trivial: a.kx_trivial }
        }
        other => {
            return Err(SchemaError::new(p("cmd"), format!("unknown command {other:?}")));
        }
    };
    Ok(QuerySpec { index, cmd, echo, query })
}
