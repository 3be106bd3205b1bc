//! JSON formats for spaces, scalars, vectors, maps, reports, and witnesses.
//!
//! Everything is built on [`serde_json::Value`], whose objects keep keys
//! sorted, so serialized output is canonical. Rationals are written as
//! `"p/q"` strings (integers as `"p"`) and read from strings or JSON
//! integers. Values that live on a space are parsed against that space.

use num::Zero;
use serde_json::{json, Map, Value};

use crate::certifier::{
    AffineCertificate, ClaimWitness, EndoReport, EndoWitness, FailureWitness, ScalarMap,
    SegmentReport,
};
use crate::error::{L0Error, Result};
use crate::geometry::IndependenceDecomposition;
use crate::linalg::Matrix;
use crate::maps::{
    AffineMap, AtomPermutation, Exponents, InjectivityReport, InjectivityWitness,
    LinePreservationReport, LineWitness, LocalityReport, LocalityWitness, MapSpec, PerAtomMap,
    Piece, SemilinearMap, StabilityWitness,
};
use crate::rational::{self, Rational};
use crate::scalar::Scalar;
use crate::space::{Event, ProbSpace};
use crate::vector::Vector;

fn malformed(msg: impl Into<String>) -> L0Error {
    L0Error::Malformed(msg.into())
}

fn as_obj<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| malformed(format!("{what}: expected an object")))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, what: &str) -> Result<&'a Value> {
    o.get(key)
        .ok_or_else(|| malformed(format!("{what}: missing \"{key}\"")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| malformed(format!("{what}: expected an array")))
}

fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| malformed(format!("{what}: expected a string")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| malformed(format!("{what}: expected a nonnegative integer")))
}

pub fn rat_to_json(q: &Rational) -> Value {
    Value::String(rational::format(q))
}

pub fn rat_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => rational::parse(s),
        Value::Number(n) => n
            .as_i64()
            .map(rational::int)
            .ok_or_else(|| L0Error::BadRational(n.to_string())),
        other => Err(L0Error::BadRational(other.to_string())),
    }
}

fn rats_to_json(qs: &[Rational]) -> Value {
    Value::Array(qs.iter().map(rat_to_json).collect())
}

fn rats_from_json(v: &Value, what: &str) -> Result<Vec<Rational>> {
    as_array(v, what)?.iter().map(rat_from_json).collect()
}

/// An object keyed by atom id; every key must name an atom of `space`.
fn per_atom<'a>(space: &ProbSpace, v: &'a Value, what: &str) -> Result<Vec<Option<&'a Value>>> {
    let o = as_obj(v, what)?;
    let mut out = vec![None; space.len()];
    for (id, val) in o {
        out[space.index_of(id)?] = Some(val);
    }
    Ok(out)
}

fn per_atom_all<'a>(space: &ProbSpace, v: &'a Value, what: &str) -> Result<Vec<&'a Value>> {
    per_atom(space, v, what)?
        .into_iter()
        .enumerate()
        .map(|(a, val)| {
            val.ok_or_else(|| malformed(format!("{what}: missing atom {}", space.id(a))))
        })
        .collect()
}

fn atom_object(space: &ProbSpace, f: impl Fn(usize) -> Value) -> Value {
    Value::Object(
        (0..space.len())
            .map(|a| (space.id(a).to_string(), f(a)))
            .collect(),
    )
}

// ---- spaces, events, scalars, vectors, matrices

pub fn space_to_json(space: &ProbSpace) -> Value {
    let atoms: Vec<Value> = (0..space.len())
        .map(|a| json!({"id": space.id(a), "prob": rat_to_json(space.mass(a))}))
        .collect();
    json!({ "atoms": atoms })
}

pub fn space_from_json(v: &Value) -> Result<ProbSpace> {
    let o = as_obj(v, "space")?;
    let atoms = as_array(field(o, "atoms", "space")?, "space.atoms")?;
    let mut ids = Vec::with_capacity(atoms.len());
    let mut probs = Vec::with_capacity(atoms.len());
    for atom in atoms {
        let a = as_obj(atom, "atom")?;
        ids.push(as_str(field(a, "id", "atom")?, "atom.id")?.to_string());
        probs.push(rat_from_json(field(a, "prob", "atom")?)?);
    }
    ProbSpace::with_ids(ids, probs)
}

pub fn event_to_json(event: &Event) -> Value {
    json!({ "members": event.member_ids() })
}

pub fn event_from_json(space: &ProbSpace, v: &Value) -> Result<Event> {
    let o = as_obj(v, "event")?;
    let ids = as_array(field(o, "members", "event")?, "event.members")?
        .iter()
        .map(|id| as_str(id, "event member"))
        .collect::<Result<Vec<_>>>()?;
    Event::from_ids(space, &ids)
}

pub fn scalar_to_json(xi: &Scalar) -> Value {
    json!({ "values": atom_object(xi.space(), |a| rat_to_json(xi.get(a))) })
}

pub fn scalar_from_json(space: &ProbSpace, v: &Value) -> Result<Scalar> {
    let o = as_obj(v, "scalar")?;
    let values = per_atom_all(space, field(o, "values", "scalar")?, "scalar.values")?
        .into_iter()
        .map(rat_from_json)
        .collect::<Result<Vec<_>>>()?;
    Scalar::from_values(space, values)
}

pub fn vector_to_json(x: &Vector) -> Value {
    json!({
        "dim": x.dim(),
        "points": atom_object(x.space(), |a| rats_to_json(x.point(a))),
    })
}

pub fn vector_from_json(space: &ProbSpace, v: &Value) -> Result<Vector> {
    let o = as_obj(v, "vector")?;
    let points = per_atom_all(space, field(o, "points", "vector")?, "vector.points")?
        .into_iter()
        .map(|p| rats_from_json(p, "point"))
        .collect::<Result<Vec<_>>>()?;
    let dim = match o.get("dim") {
        Some(d) => as_usize(d, "vector.dim")?,
        None => points[0].len(),
    };
    Vector::from_points(space, dim, points)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| rats_to_json(r)).collect())
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix> {
    let rows = as_array(v, "matrix")?
        .iter()
        .map(|r| rats_from_json(r, "matrix row"))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

// ---- maps

fn exps_to_json(e: &Exponents) -> (&'static str, Value) {
    match e {
        Exponents::Uniform(k) => ("exp", json!(k)),
        Exponents::PerCoord(ks) => ("exps", json!(ks)),
    }
}

pub fn piece_to_json(p: &Piece) -> Value {
    match p {
        Piece::Identity => json!({"op": "identity"}),
        Piece::Affine { matrix, offset } => json!({
            "op": "affine",
            "matrix": matrix_to_json(matrix),
            "offset": rats_to_json(offset),
        }),
        Piece::Translate(t) => json!({"op": "translate", "by": rats_to_json(t)}),
        Piece::Power(e) => {
            let (key, val) = exps_to_json(e);
            let mut o = Map::new();
            o.insert("op".into(), json!("pow"));
            o.insert(key.into(), val);
            Value::Object(o)
        }
        Piece::Compose(parts) => json!({
            "op": "compose",
            "parts": parts.iter().map(piece_to_json).collect::<Vec<_>>(),
        }),
    }
}

/// Keeps exact powers of small rationals cheap.
const MAX_EXPONENT: u64 = 255;

fn exponent(v: &Value) -> Result<u32> {
    v.as_u64()
        .filter(|&n| n <= MAX_EXPONENT)
        .map(|n| n as u32)
        .ok_or_else(|| {
            malformed(format!(
                "pow: exponents must be integers in 0..={MAX_EXPONENT}"
            ))
        })
}

pub fn piece_from_json(v: &Value) -> Result<Piece> {
    let o = as_obj(v, "piece")?;
    let op = as_str(field(o, "op", "piece")?, "piece.op")?;
    Ok(match op {
        "identity" => Piece::Identity,
        "affine" => Piece::Affine {
            matrix: matrix_from_json(field(o, "matrix", "affine piece")?)?,
            offset: match o.get("offset") {
                Some(c) => rats_from_json(c, "affine piece offset")?,
                None => Vec::new(),
            },
        },
        "translate" => Piece::Translate(rats_from_json(
            field(o, "by", "translate piece")?,
            "translate",
        )?),
        "pow" => match (o.get("exp"), o.get("exps")) {
            (Some(e), None) => Piece::Power(Exponents::Uniform(exponent(e)?)),
            (None, Some(es)) => Piece::Power(Exponents::PerCoord(
                as_array(es, "pow.exps")?
                    .iter()
                    .map(exponent)
                    .collect::<Result<_>>()?,
            )),
            _ => {
                return Err(malformed(
                    "pow piece needs exactly one of \"exp\" or \"exps\"",
                ))
            }
        },
        "compose" => Piece::Compose(
            as_array(field(o, "parts", "compose piece")?, "compose.parts")?
                .iter()
                .map(piece_from_json)
                .collect::<Result<_>>()?,
        ),
        other => return Err(L0Error::InvalidPiece(format!("unknown op \"{other}\""))),
    })
}

/// Affine pieces may omit their offset; fill it with zeros once `dim` is known.
fn fill_offsets(p: Piece, dim: usize) -> Piece {
    match p {
        Piece::Affine { matrix, offset } if offset.is_empty() => Piece::Affine {
            matrix,
            offset: vec![Rational::zero(); dim],
        },
        Piece::Compose(parts) => {
            Piece::Compose(parts.into_iter().map(|q| fill_offsets(q, dim)).collect())
        }
        other => other,
    }
}

fn affine_to_json(m: &AffineMap) -> Value {
    json!({
        "kind": "affine",
        "A": atom_object(m.space(), |a| matrix_to_json(m.matrix(a))),
        "b": vector_to_json(m.offset()),
    })
}

fn affine_from_obj(space: &ProbSpace, o: &Map<String, Value>) -> Result<AffineMap> {
    let matrices = per_atom_all(space, field(o, "A", "affine map")?, "affine map A")?
        .into_iter()
        .map(matrix_from_json)
        .collect::<Result<Vec<_>>>()?;
    let dim = matrices[0].rows();
    let offset = match o.get("b") {
        Some(b) if b.get("points").is_some() => vector_from_json(space, b)?,
        // a bare {"a1": [...], ...} object is accepted for b as well
        Some(b) => vector_from_json(space, &json!({ "points": b }))?,
        None => Vector::zero(space, dim.max(1)),
    };
    AffineMap::new(matrices, offset)
}

pub fn permutation_to_json(p: &AtomPermutation) -> Value {
    let space = p.space();
    atom_object(space, |a| json!(space.id(p.apply(a))))
}

pub fn permutation_from_json(space: &ProbSpace, v: &Value) -> Result<AtomPermutation> {
    // atoms not listed are fixed
    let images = per_atom(space, v, "sigma")?
        .into_iter()
        .enumerate()
        .map(|(a, img)| match img {
            Some(id) => space.index_of(as_str(id, "sigma image")?),
            None => Ok(a),
        })
        .collect::<Result<Vec<_>>>()?;
    AtomPermutation::new(space, images)
}

pub fn map_to_json(map: &MapSpec) -> Result<Value> {
    Ok(match map {
        MapSpec::Affine(m) => affine_to_json(m),
        MapSpec::Semilinear(m) => json!({
            "kind": "semilinear",
            "sigma": permutation_to_json(m.sigma()),
            "affine": affine_to_json(m.affine()),
        }),
        MapSpec::PerAtom(m) => json!({
            "kind": "peratom",
            "dim": m.dim(),
            "pieces": atom_object(m.space(), |a| piece_to_json(&m.pieces()[a])),
        }),
        MapSpec::BlackBox(b) => {
            return Err(malformed(format!(
                "black-box map \"{}\" cannot be serialized",
                b.label()
            )))
        }
    })
}

/// Parses a map; unlisted per-atom pieces default to the identity.
pub fn map_from_json(space: &ProbSpace, v: &Value) -> Result<MapSpec> {
    let o = as_obj(v, "map")?;
    let kind = as_str(field(o, "kind", "map")?, "map.kind")?;
    Ok(match kind {
        "affine" => MapSpec::Affine(affine_from_obj(space, o)?),
        "semilinear" => {
            let sigma = permutation_from_json(space, field(o, "sigma", "semilinear map")?)?;
            let affine = affine_from_obj(
                space,
                as_obj(field(o, "affine", "semilinear map")?, "affine part")?,
            )?;
            MapSpec::Semilinear(SemilinearMap::new(sigma, affine)?)
        }
        "peratom" => {
            let listed = per_atom(space, field(o, "pieces", "peratom map")?, "peratom pieces")?;
            let pieces: Vec<Piece> = listed
                .into_iter()
                .map(|p| p.map_or(Ok(Piece::Identity), piece_from_json))
                .collect::<Result<_>>()?;
            let dim = match o.get("dim") {
                Some(d) => as_usize(d, "peratom.dim")?,
                None => pieces.iter().find_map(Piece::implied_dim).ok_or_else(|| {
                    malformed("peratom map: \"dim\" is required when no piece fixes it")
                })?,
            };
            let pieces = pieces.into_iter().map(|p| fill_offsets(p, dim)).collect();
            MapSpec::PerAtom(PerAtomMap::new(space, dim, pieces)?)
        }
        other => return Err(malformed(format!("unknown map kind \"{other}\""))),
    })
}

pub fn scalar_map_to_json(phi: &ScalarMap) -> Value {
    match phi {
        ScalarMap::Identity => json!({"kind": "identity"}),
        ScalarMap::PullBack(p) => json!({"kind": "pullback", "sigma": permutation_to_json(p)}),
        ScalarMap::Affine { alpha, beta } => json!({
            "kind": "affine",
            "alpha": scalar_to_json(alpha),
            "beta": scalar_to_json(beta),
        }),
        ScalarMap::Polynomial { space, coeffs } => json!({
            "kind": "polynomial",
            "coeffs": atom_object(space, |a| rats_to_json(&coeffs[a])),
        }),
        ScalarMap::Compose(parts) => json!({
            "kind": "compose",
            "parts": parts.iter().map(scalar_map_to_json).collect::<Vec<_>>(),
        }),
    }
}

pub fn scalar_map_from_json(space: &ProbSpace, v: &Value) -> Result<ScalarMap> {
    let o = as_obj(v, "scalar map")?;
    let kind = as_str(field(o, "kind", "scalar map")?, "scalar map kind")?;
    Ok(match kind {
        "identity" => ScalarMap::Identity,
        "pullback" => ScalarMap::PullBack(permutation_from_json(
            space,
            field(o, "sigma", "pullback")?,
        )?),
        "affine" => ScalarMap::Affine {
            alpha: scalar_from_json(space, field(o, "alpha", "affine scalar map")?)?,
            beta: match o.get("beta") {
                Some(b) => scalar_from_json(space, b)?,
                None => Scalar::zero(space),
            },
        },
        "polynomial" => ScalarMap::Polynomial {
            space: space.clone(),
            coeffs: per_atom_all(
                space,
                field(o, "coeffs", "polynomial")?,
                "polynomial coeffs",
            )?
            .into_iter()
            .map(|c| rats_from_json(c, "coefficients"))
            .collect::<Result<_>>()?,
        },
        "compose" => ScalarMap::Compose(
            as_array(field(o, "parts", "compose")?, "compose.parts")?
                .iter()
                .map(|p| scalar_map_from_json(space, p))
                .collect::<Result<_>>()?,
        ),
        other => return Err(malformed(format!("unknown scalar map kind \"{other}\""))),
    })
}

// ---- reports and witnesses

pub fn decomposition_to_json(d: &IndependenceDecomposition) -> Value {
    json!({
        "independent": event_to_json(&d.independent),
        "dependent": event_to_json(&d.dependent),
        "xi": scalar_to_json(&d.xi),
        "eta": scalar_to_json(&d.eta),
    })
}

pub fn locality_witness_to_json(w: &LocalityWitness) -> Value {
    json!({"event": event_to_json(&w.event), "x": vector_to_json(&w.x)})
}

pub fn locality_report_to_json(r: &LocalityReport) -> Value {
    json!({
        "verdict": r.verdict,
        "strength": r.strength,
        "witness": r.witness.as_ref().map(locality_witness_to_json),
    })
}

pub fn stability_witness_to_json(w: &StabilityWitness) -> Value {
    json!({
        "event": event_to_json(&w.event),
        "x": vector_to_json(&w.x),
        "y": vector_to_json(&w.y),
    })
}

pub fn injectivity_witness_to_json(w: &InjectivityWitness, space: &ProbSpace) -> Value {
    let atom = w.atom().map(|a| space.id(a).to_string());
    match w {
        InjectivityWitness::Collision { x, y } => json!({
            "type": "collision",
            "atom": atom,
            "x": vector_to_json(x),
            "y": vector_to_json(y),
        }),
        InjectivityWitness::SingularPiece { part, kernel, .. } => json!({
            "type": "singular-piece",
            "atom": atom,
            "part": part,
            "kernel": rats_to_json(kernel),
        }),
    }
}

pub fn injectivity_report_to_json(r: &InjectivityReport, space: &ProbSpace) -> Value {
    json!({
        "injective": r.injective,
        "strength": r.strength,
        "witness": r.witness.as_ref().map(|w| injectivity_witness_to_json(w, space)),
    })
}

pub fn line_witness_to_json(w: &LineWitness) -> Value {
    match w {
        LineWitness::Forward {
            x,
            y,
            lambda,
            image,
        } => json!({
            "type": "forward",
            "x": vector_to_json(x),
            "y": vector_to_json(y),
            "lambda": scalar_to_json(lambda),
            "image": vector_to_json(image),
        }),
        LineWitness::Collapse { x, y } => json!({
            "type": "collapse",
            "x": vector_to_json(x),
            "y": vector_to_json(y),
        }),
    }
}

pub fn line_report_to_json(r: &LinePreservationReport) -> Value {
    json!({
        "forward_ok": r.forward_ok,
        "onto_status": r.onto_status,
        "trials": r.trials,
        "witness": r.witness.as_ref().map(line_witness_to_json),
    })
}

fn witness_data(w: &FailureWitness, space: &ProbSpace) -> Value {
    match w {
        FailureWitness::Locality(l) => locality_witness_to_json(l),
        FailureWitness::Injectivity(i) => injectivity_witness_to_json(i, space),
        FailureWitness::Line(l) => line_witness_to_json(l),
        FailureWitness::Additivity { x, y } => {
            json!({"x": vector_to_json(x), "y": vector_to_json(y)})
        }
        FailureWitness::Homogeneity { xi, x } => {
            json!({"xi": scalar_to_json(xi), "x": vector_to_json(x)})
        }
        FailureWitness::Segment { x, y, mu, image } => json!({
            "x": vector_to_json(x),
            "y": vector_to_json(y),
            "mu": scalar_to_json(mu),
            "image": vector_to_json(image),
        }),
    }
}

pub fn failure_witness_to_json(w: &FailureWitness, space: &ProbSpace) -> Value {
    json!({
        "failed_hypothesis": w.hypothesis(),
        "data": witness_data(w, space),
    })
}

/// Reads back what [`failure_witness_to_json`] wrote.
pub fn failure_witness_from_json(space: &ProbSpace, v: &Value) -> Result<FailureWitness> {
    let o = as_obj(v, "witness")?;
    let class = as_str(
        field(o, "failed_hypothesis", "witness")?,
        "failed_hypothesis",
    )?;
    let d = as_obj(field(o, "data", "witness")?, "witness data")?;
    let vec_of = |key: &str| vector_from_json(space, field(d, key, "witness data")?);
    let scalar_of = |key: &str| scalar_from_json(space, field(d, key, "witness data")?);
    Ok(match class {
        "locality" => FailureWitness::Locality(LocalityWitness {
            event: event_from_json(space, field(d, "event", "witness data")?)?,
            x: vec_of("x")?,
        }),
        "injectivity" => match d.get("type").and_then(Value::as_str) {
            Some("collision") => FailureWitness::Injectivity(InjectivityWitness::Collision {
                x: vec_of("x")?,
                y: vec_of("y")?,
            }),
            Some("singular-piece") => {
                FailureWitness::Injectivity(InjectivityWitness::SingularPiece {
                    atom: space.index_of(as_str(field(d, "atom", "witness data")?, "atom")?)?,
                    part: as_usize(field(d, "part", "witness data")?, "part")?,
                    kernel: rats_from_json(field(d, "kernel", "witness data")?, "kernel")?,
                })
            }
            _ => return Err(malformed("injectivity witness: unknown type")),
        },
        "line-forward" => FailureWitness::Line(LineWitness::Forward {
            x: vec_of("x")?,
            y: vec_of("y")?,
            lambda: scalar_of("lambda")?,
            image: vec_of("image")?,
        }),
        "line-onto" => FailureWitness::Line(LineWitness::Collapse {
            x: vec_of("x")?,
            y: vec_of("y")?,
        }),
        "additivity" => FailureWitness::Additivity {
            x: vec_of("x")?,
            y: vec_of("y")?,
        },
        "homogeneity" => FailureWitness::Homogeneity {
            xi: scalar_of("xi")?,
            x: vec_of("x")?,
        },
        "segment-forward" => FailureWitness::Segment {
            x: vec_of("x")?,
            y: vec_of("y")?,
            mu: scalar_of("mu")?,
            image: vec_of("image")?,
        },
        other => return Err(malformed(format!("unknown hypothesis \"{other}\""))),
    })
}

pub fn certificate_to_json(c: &AffineCertificate) -> Value {
    let space = c.affine.space();
    let residual = rat_to_json(&Rational::zero());
    json!({
        "A": atom_object(space, |a| matrix_to_json(c.affine.matrix(a))),
        "b": vector_to_json(c.affine.offset()),
        "verification": c
            .verification
            .iter()
            .map(|x| json!({"probe": vector_to_json(x), "residual": residual}))
            .collect::<Vec<_>>(),
        "hypotheses": c.hypotheses,
        "provenance": c.provenance,
    })
}

fn claim_to_json(c: &ClaimWitness) -> Value {
    json!({
        "x": vector_to_json(&c.x),
        "y": vector_to_json(&c.y),
        "coefficient": scalar_to_json(&c.coefficient),
        "image": vector_to_json(&c.image),
    })
}

pub fn segment_report_to_json(r: &SegmentReport, space: &ProbSpace) -> Value {
    json!({
        "passed": r.passed(),
        "trials": r.trials,
        "precondition": r.precondition.as_ref().map(|w| failure_witness_to_json(w, space)),
        "segment": r.segment.as_ref().map(|w| failure_witness_to_json(w, space)),
        "integer_claim": r.integer_claim.as_ref().map(claim_to_json),
        "mixed_claim": r.mixed_claim.as_ref().map(claim_to_json),
    })
}

pub fn endo_witness_to_json(w: &EndoWitness) -> Value {
    match w {
        EndoWitness::Locality { event, xi } => {
            json!({"event": event_to_json(event), "xi": scalar_to_json(xi)})
        }
        EndoWitness::Additivity { xi, eta }
        | EndoWitness::Multiplicativity { xi, eta }
        | EndoWitness::Monotonicity { xi, eta } => {
            json!({"xi": scalar_to_json(xi), "eta": scalar_to_json(eta)})
        }
        EndoWitness::Unit { image } => json!({"image": scalar_to_json(image)}),
        EndoWitness::NotFixed { xi } => json!({"xi": scalar_to_json(xi)}),
    }
}

pub fn endo_report_to_json(r: &EndoReport) -> Value {
    let check = |w: &Option<EndoWitness>| json!({"pass": w.is_none(), "witness": w.as_ref().map(endo_witness_to_json)});
    json!({
        "axioms": {
            "locality": check(&r.locality),
            "additivity": check(&r.additivity),
            "multiplicativity": check(&r.multiplicativity),
            "unit": check(&r.unit),
        },
        "fixes_simple": check(&r.fixes_simple),
        "monotonicity": check(&r.monotone),
        "identity_verdict": check(&r.identity),
        "probes": r.probes,
    })
}

/// Canonical text form: sorted keys, two-space indentation, final newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}
