//! Runs bundle queries against the core engines and collects reports.

use std::collections::BTreeMap;

use movstab_core::rational::format_rational;
use movstab_core::stability::{FiltrationKind, SegmentReport, WallPosition};
use movstab_core::surface::LambdaVanishing;
use movstab_core::{
    bg_discriminant, bgi_verdict, cartier_index, effectivity_classifier, flatness_higher,
    flatness_surface, hodge_bound, nef_from_zero_square, proj_flatness_surface, tensor_class,
    torus_quotient_gate, wall_hyperplanes, zariski_decomposition, BgiStatus, Effectivity,
    ErrorKind, Extremum, Filtration, FlatnessVerdict, Membership, NefVerdict, NumClass,
    ProjFlatBranch, Rational, SheafClass, Stability, Subobject, TorusGate, ZariskiPair,
};
use serde_json::{json, Value};

use crate::bundle::{Bundle, ConeName, Query, QuerySpec, SCHEMA_VERSION};
use crate::report::{ErrorClass, ErrorRecord, QueryReport, Report, Status};

fn q(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn class(x: &NumClass) -> Value {
    Value::Array(x.coords().iter().map(q).collect())
}

fn sheaf(s: &SheafClass) -> Value {
    json!({"rank": s.rank(), "c1": class(s.c1()), "c2": q(s.c2())})
}

fn node(s: Subobject) -> Value {
    Value::String(s.to_string())
}

fn extremum(e: &Extremum) -> Value {
    json!({
        "value": q(&e.value),
        "witness": node(e.witness),
        "attained_by": e.attained_by.iter().map(|s| node(*s)).collect::<Vec<_>>(),
    })
}

fn filtration(f: &Filtration) -> Value {
    json!({
        "steps": f.steps.iter().map(|s| node(*s)).collect::<Vec<_>>(),
        "quotients": f.quotients.iter().map(|x| json!({
            "rank": x.rank,
            "c1": class(&x.c1),
            "slope": q(&x.slope),
        })).collect::<Vec<_>>(),
        "refined_at": f.refined_at,
    })
}

fn zariski(z: &ZariskiPair) -> Value {
    json!({
        "positive": class(&z.positive),
        "negative": z.negative.iter().map(|(c, a)| json!({"curve": class(c), "coefficient": q(a)})).collect::<Vec<_>>(),
    })
}

fn segment(r: &SegmentReport) -> BTreeMap<String, Value> {
    let mut c = BTreeMap::new();
    let interval = |i: &Option<movstab_core::Interval>| match i {
        Some(i) => Value::String(i.to_string()),
        None => Value::String("empty".into()),
    };
    c.insert("stable".into(), interval(&r.stable));
    c.insert("semistable".into(), interval(&r.semistable));
    c.insert(
        "walls".into(),
        Value::Array(
            r.walls
                .iter()
                .map(|w| {
                    let at = match &w.position {
                        WallPosition::At(t) => q(t),
                        WallPosition::Everywhere => Value::String("everywhere".into()),
                    };
                    json!({"member": format!("F{}", w.member), "epsilon": at})
                })
                .collect(),
        ),
    );
    c.insert(
        "points".into(),
        Value::Array(
            r.points
                .iter()
                .map(|(t, k)| json!({"epsilon": q(t), "class": k.to_string()}))
                .collect(),
        ),
    );
    c
}

struct Outcome {
    verdict: String,
    certificates: BTreeMap<String, Value>,
    warnings: Vec<String>,
}

impl Outcome {
    fn new(verdict: impl Into<String>) -> Self {
        Outcome { verdict: verdict.into(), certificates: BTreeMap::new(), warnings: Vec::new() }
    }

    fn cert(mut self, key: &str, value: Value) -> Self {
        self.certificates.insert(key.to_string(), value);
        self
    }

    fn warn(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }

    fn zero_warning(self, label: &str, x: &NumClass) -> Self {
        if x.is_zero() {
            self.warn(format!("{label} = 0: every family is semistable"))
        } else {
            self
        }
    }
}

fn tie_warning(label: &str, e: &Extremum) -> Option<String> {
    (e.attained_by.len() > 1).then(|| {
        let names: Vec<String> = e.attained_by.iter().map(|s| s.to_string()).collect();
        format!("{label} attained by {}", names.join(", "))
    })
}

fn plural(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("1 {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn execute(b: &Bundle, query: &Query) -> movstab_core::Result<Outcome> {
    let fam = &b.family;
    let e = fam.top();
    let st = || Stability::new(fam, &b.mov);
    Ok(match query {
        Query::Slope { alpha } => {
            let mu = e.slope(alpha)?;
            Outcome::new(format_rational(&mu)).cert("slope", q(&mu)).zero_warning("α", alpha)
        }
        Query::Stability { alpha } => {
            let s = st()?;
            let semistable = s.is_semistable(alpha)?;
            let stable = s.is_stable(alpha)?;
            let verdict = match (semistable, stable) {
                (false, _) => "unstable",
                (true, true) => "stable",
                (true, false) => "strictly-semistable",
            };
            let max = s.mu_max(alpha)?;
            let mut out = Outcome::new(verdict)
                .cert("slope", q(&e.slope(alpha)?))
                .cert("semistable", json!(semistable))
                .cert("stable", json!(stable))
                .cert("mu_max", extremum(&max));
            if let Some(w) = tie_warning("μ^max", &max) {
                out = out.warn(w);
            }
            out = match s.mu_max_sc(alpha) {
                Ok(sc) => out.cert("mu_max_sc", extremum(&sc)),
                Err(movstab_core::Error::EmptyStrictFamily) => out
                    .cert("mu_max_sc", Value::Null)
                    .warn("no member of smaller rank: stability is vacuous"),
                Err(err) => return Err(err),
            };
            out.zero_warning("α", alpha)
        }
        Query::Hn { alpha } | Query::Jh { alpha } => {
            let s = st()?;
            let f = if matches!(query, Query::Hn { .. }) {
                s.hn_filtration(alpha)?
            } else {
                s.jh_filtration(alpha)?
            };
            let name = match f.kind {
                FiltrationKind::HarderNarasimhan => "HN",
                FiltrationKind::JordanHolder => "JH",
            };
            let mut out = Outcome::new(format!("length {}", f.steps.len()))
                .cert("filtration", filtration(&f));
            if f.ambiguous {
                out = out.warn(format!("{name} filtration not unique; smallest index chain shown"));
            }
            if fam.contains().is_none() && fam.members().len() > 1 {
                out = out.warn("family has no containment DAG: chains have length at most two");
            }
            out.zero_warning("α", alpha)
        }
        Query::Segment { from, to } => {
            let r = st()?.segment_stability(from, to)?;
            let verdict = format!(
                "stable {}, semistable {}",
                r.stable.as_ref().map_or("empty".into(), ToString::to_string),
                r.semistable.as_ref().map_or("empty".into(), ToString::to_string)
            );
            let mut out = Outcome::new(verdict);
            out.certificates = segment(&r);
            out.zero_warning("from", from).zero_warning("to", to)
        }
        Query::Walls => {
            let walls = wall_hyperplanes(fam)?;
            let mut rows = Vec::new();
            for w in &walls {
                let meets = if b.mov.is_full_dimensional() {
                    match b.mov.orthogonal_interior_point(&w.functional)? {
                        Some(h) => json!({"meets_interior": true, "witness": class(&h)}),
                        None => json!({"meets_interior": false, "witness": Value::Null}),
                    }
                } else {
                    json!({"meets_interior": Value::Null, "witness": Value::Null})
                };
                let mut row = json!({"member": format!("F{}", w.member), "functional": class(&w.functional)});
                row.as_object_mut().unwrap().extend(meets.as_object().unwrap().clone());
                rows.push(row);
            }
            Outcome::new(plural(walls.len(), "wall")).cert("walls", Value::Array(rows))
        }
        Query::Openness { alpha, beta } => {
            let eps = st()?.openness_epsilon(alpha, beta)?;
            Outcome::new(format_rational(&eps)).cert("epsilon", q(&eps))
        }
        Query::Destabilizers { beta, bound } => {
            let hits = st()?.destabilizers(beta, bound)?;
            let names: Vec<Value> = hits.iter().map(|i| Value::String(format!("F{i}"))).collect();
            Outcome::new(plural(hits.len(), "member")).cert("members", Value::Array(names))
        }
        Query::Signature => {
            let s = b.lattice.signature();
            Outcome::new(s.to_string())
                .cert("positive", json!(s.positive))
                .cert("negative", json!(s.negative))
                .cert("zero", json!(s.zero))
        }
        Query::Hodge { divisor, alpha } => {
            let h = hodge_bound(divisor, alpha)?;
            Outcome::new(if h.equality { "equality" } else { "strict" })
                .cert("square", q(&h.square))
                .cert("equality", json!(h.equality))
        }
        Query::Cartier { ambient, sub } => {
            let m = cartier_index(ambient, sub)?;
            Outcome::new(m.to_string()).cert("index", Value::String(m.to_string()))
        }
        Query::Cone => {
            let gens = |c: &movstab_core::RationalCone| {
                json!({
                    "generators": c.generators().iter().map(class).collect::<Vec<_>>(),
                    "facets": c.facets().iter().map(class).collect::<Vec<_>>(),
                    "dimension": c.dimension(),
                })
            };
            Outcome::new(format!("dim eff {}, dim mov {}", b.eff.dimension(), b.mov.dimension()))
                .cert("eff", gens(&b.eff))
                .cert("mov", gens(&b.mov))
        }
        Query::Contains { class: x, cone, interior } => {
            let c = match cone {
                ConeName::Eff => &b.eff,
                ConeName::Mov => &b.mov,
            };
            let mode = if *interior { Membership::Interior } else { Membership::Closed };
            let inside = c.contains(x, mode)?;
            Outcome::new(inside.to_string()).cert("contains", json!(inside))
        }
        Query::Discriminant => {
            let d = bg_discriminant(e);
            Outcome::new(format_rational(&d))
                .cert("discriminant", q(&d))
                .cert("ch2", q(&e.ch2()))
                .cert("sheaf", sheaf(e))
        }
        Query::Tensor { other, alpha } => {
            let t = tensor_class(e, other)?;
            let mut out = Outcome::new(format!("rank {}", t.rank())).cert("product", sheaf(&t));
            if let Some(a) = alpha {
                out = out
                    .cert("slope", q(&t.slope(a)?))
                    .cert("slope_sum", q(&(e.slope(a)? + other.slope(a)?)));
            }
            out
        }
        Query::Zariski { divisor, curves } => {
            let z = zariski_decomposition(divisor, curves.as_ref().unwrap_or(&b.curves), &b.eff)?;
            Outcome::new(if z.negative.is_empty() { "nef" } else { "non-trivial negative part" })
                .cert("zariski", zariski(&z))
        }
        Query::NefZeroSquare { divisor, alpha } => {
            match nef_from_zero_square(divisor, alpha, &b.curves, &b.eff, &b.mov)? {
                NefVerdict::Nef => Outcome::new("nef").cert("negative_part", json!([])),
                NefVerdict::InputInconsistent(z) => {
                    Outcome::new("counterexample-to-input-consistency").cert("zariski", zariski(&z))
                }
            }
        }
        Query::Classify { divisor } => match effectivity_classifier(divisor, &b.mov, &b.eff)? {
            Effectivity::Degenerate => Outcome::new("degenerate").warn("D = 0"),
            Effectivity::AmpleOrthogonal(h) => {
                Outcome::new("ample-orthogonal").cert("witness", class(&h))
            }
            Effectivity::PseudoEffective(side) => Outcome::new(format!("pseudo-effective({side})")),
        },
        Query::Bgi { alpha } => {
            let v = bgi_verdict(fam, alpha, &b.mov)?;
            let verdict = match v.status {
                BgiStatus::Consistent => "consistent",
                BgiStatus::FamilyIncompleteOrNongeometric => "FAMILY-INCOMPLETE-OR-NONGEOMETRIC",
            };
            let mut out = Outcome::new(verdict)
                .cert("discriminant", q(&v.discriminant))
                .cert("semistable", json!(v.semistable))
                .cert("equality", json!(v.equality));
            if v.status == BgiStatus::FamilyIncompleteOrNongeometric {
                out = out.warn("semistable with negative discriminant: family incomplete");
            }
            if v.equality {
                out = out.warn("Δ = 0: candidate for the projective flatness criterion");
            }
            out
        }
        Query::Flat { alpha } => match flatness_surface(fam, alpha, &b.mov)? {
            FlatnessVerdict::Certified { hodge, discriminant } => Outcome::new("flat-certified")
                .cert("c1_square", q(&hodge.square))
                .cert("c1_zero", json!(hodge.equality))
                .cert("discriminant", q(&discriminant))
                .cert(
                    "derivation",
                    json!([
                        "c1 · α = 0 and α² > 0 give c1² ≤ 0 (Hodge index)",
                        "semistability gives Δ = (r+1)·c1² ≥ 0, so c1² = c2 = 0",
                        "Hodge equality with c1 · α = 0 gives c1 = 0",
                    ]),
                ),
            FlatnessVerdict::NotCertified(cond) => Outcome::new(format!("not certified: {cond}")),
            FlatnessVerdict::InconsistentFamilyData { discriminant, c1_square } => {
                Outcome::new("inconsistent family data")
                    .cert("discriminant", q(&discriminant))
                    .cert("c1_square", q(&c1_square))
                    .warn("hypotheses hold but the numeric consequences fail: family incomplete")
            }
        },
        Query::Projflat { alpha } => {
            let v = proj_flatness_surface(fam, alpha, &b.mov, &b.eff, &b.curves)?;
            let mut out = Outcome::new("projectively-flat-certified");
            out = match v.branch {
                None => out.cert("branch", Value::Null),
                Some(ProjFlatBranch::Flat(h)) => out
                    .cert("branch", json!("flat (c1 = 0 forced)"))
                    .cert("witness", h.as_ref().map_or(Value::Null, class)),
                Some(ProjFlatBranch::ENef) => out.cert("branch", json!("E nef")),
                Some(ProjFlatBranch::DualNef) => out.cert("branch", json!("E^* nef")),
                Some(ProjFlatBranch::InputInconsistent(z)) => out
                    .cert("branch", json!("counterexample-to-input-consistency"))
                    .cert("zariski", zariski(&z)),
            };
            out
        }
        Query::FlatHigher { .. } | Query::TorusGate { .. } => {
            execute_gate(query).expect("gate query")?
        }
    })
}

/// The two gates that only consume intersection numbers.
fn execute_gate(query: &Query) -> Option<movstab_core::Result<Outcome>> {
    let out = (|| {
        Ok(match query {
            Query::FlatHigher { n, c1_h, c1sq_h, c2_h, rank } => {
                let v = flatness_higher(*n, c1_h, c1sq_h, c2_h, *rank)?;
                let verdict = if v.passed() {
                    "gate-passed".to_string()
                } else if !v.c1_vanishes {
                    "fails c1·H^(n-1) = 0".to_string()
                } else {
                    "fails c1²·H^(n-2) - c2·H^(n-2) = 0".to_string()
                };
                let mut out = Outcome::new(verdict)
                    .cert("c1_vanishes", json!(v.c1_vanishes))
                    .cert("coefficient_vanishes", json!(v.coefficient_vanishes));
                if let Some(l) = v.lambda {
                    let vanishing = match &l.vanishing {
                        LambdaVanishing::Everywhere => json!("every λ"),
                        LambdaVanishing::Nowhere => json!("no λ"),
                        LambdaVanishing::At(x) => q(x),
                    };
                    out = out.cert(
                        "lambda",
                        json!({
                            "upper": l.upper.as_ref().map_or(json!("unbounded"), q),
                            "premises": l.premises,
                            "vanishing": vanishing,
                            "at_1": l.at_one,
                            "at_2": l.at_two,
                            "equivalent_in_range": l.equivalence_holds(),
                        }),
                    );
                    if !l.premises {
                        out = out.warn("Δ·H ≥ 0 or c1²·H ≤ 0 fails: λ-equivalence does not apply");
                    }
                }
                out
            }
            Query::TorusGate { n, c2_h, kx_trivial } => {
                let verdict = match torus_quotient_gate(*n, c2_h, *kx_trivial)? {
                    TorusGate::HypothesesMet => "hypotheses-met",
                    TorusGate::C2Nonzero => "fails c2 condition",
                    TorusGate::CanonicalNotTrivial => "fails K_X condition",
                };
                Outcome::new(verdict)
            }
            _ => unreachable!("not a gate query"),
        })
    })();
    matches!(query, Query::FlatHigher { .. } | Query::TorusGate { .. }).then_some(out)
}

fn error_class(e: &movstab_core::Error) -> ErrorClass {
    match e.kind() {
        ErrorKind::Invariant => ErrorClass::Invariant,
        ErrorKind::Input | ErrorKind::Precondition => ErrorClass::Precondition,
    }
}

pub fn run_query(b: &Bundle, spec: &QuerySpec) -> QueryReport {
    report(spec, execute(b, &spec.query))
}

/// Runs `flat_higher` or `torus_gate` without a bundle; `None` for any other query.
pub fn run_gate(spec: &QuerySpec) -> Option<QueryReport> {
    execute_gate(&spec.query).map(|r| report(spec, r))
}

fn report(spec: &QuerySpec, result: movstab_core::Result<Outcome>) -> QueryReport {
    let (status, verdict, certificates, warnings, error) = match result {
        Ok(o) => (Status::Ok, Some(o.verdict), o.certificates, o.warnings, None),
        Err(e) => (
            Status::Error,
            None,
            BTreeMap::new(),
            Vec::new(),
            Some(ErrorRecord {
                class: error_class(&e),
                path: format!("queries[{}]", spec.index),
                message: e.to_string(),
            }),
        ),
    };
    QueryReport {
        index: spec.index,
        cmd: spec.cmd.clone(),
        query: spec.echo.clone(),
        status,
        verdict,
        certificates,
        warnings,
        error,
    }
}

/// Runs the bundle's queries in order, optionally only those named `only`.
pub fn run_bundle(b: &Bundle, only: Option<&str>) -> Report {
    let results = b
        .queries
        .iter()
        .filter(|s| only.is_none_or(|c| s.cmd == c))
        .map(|s| run_query(b, s))
        .collect();
    Report { schema: SCHEMA_VERSION, bundle: b.name.clone(), results }
}
