//! JSON reports. Rationals are written as exact strings, floats come with
//! the tolerance that produced them.

use serde_json::{json, Value};

use garden_core::bwg::{class_representative, equivalence_classes, BoundaryWeightedGarden};
use garden_core::garden::{
    edge_weights, face_signs, to_boundary_weighted, trace_garden, EdgeWeightedGardenData, GardenError, TraceOptions,
    TracedGarden, DEFAULT_LAMBDA_TOL,
};
use garden_core::hb::{zero_distribution, Mu};
use garden_core::hunt::ConjectureReport;
use garden_core::pencil::{
    has_constant_real_count, is_generic, is_hurwitz_generic, real_count_profile, CriticalValue, GenericityReport,
    GenericityStatus, Pencil, WitnessPoint, DEFAULT_HURWITZ_TOL,
};
use garden_core::poly::{RealPoly, Rational};

use crate::svg::{render_garden_svg, SvgOptions};
use crate::CliError;

/// Largest `n` for which a garden report looks up its class id.
pub const CLASS_ID_MAX_N: usize = 6;

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn poly(p: &RealPoly) -> Value {
    json!({
        "expr": p.to_string(),
        "coeffs": p.coeffs().iter().map(rational).collect::<Vec<_>>(),
    })
}

pub fn pencil(l: &Pencil) -> Value {
    json!({ "p": poly(l.p()), "q": poly(l.q()), "n": l.n() })
}

fn status_name(s: GenericityStatus) -> &'static str {
    match s {
        GenericityStatus::Generic => "Generic",
        GenericityStatus::Degenerate => "Degenerate",
        GenericityStatus::NongenericU => "NongenericU",
        GenericityStatus::NongenericV => "NongenericV",
        GenericityStatus::NongenericMixed => "NongenericMixed",
    }
}

pub fn genericity(r: &GenericityReport) -> Value {
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            let point = match &w.point {
                WitnessPoint::Finite(iv) => json!({ "lo": rational(&iv.lo), "hi": rational(&iv.hi), "approx": iv.approx() }),
                WitnessPoint::Infinity => Value::String("infinity".into()),
            };
            json!({ "point": point, "multiplicity": w.multiplicity, "component": format!("{:?}", w.component) })
        })
        .collect();
    json!({ "status": status_name(r.status), "witnesses": witnesses, "wronskian": poly(&r.wronskian) })
}

fn profile(l: &Pencil) -> Result<Value, CliError> {
    let p = real_count_profile(l).map_err(CliError::domain)?;
    let critical: Vec<Value> = p
        .critical
        .iter()
        .map(|c| match c {
            CriticalValue::Finite { lo, hi } => json!({ "lo": rational(lo), "hi": rational(hi), "approx": c.approx() }),
            CriticalValue::Infinity => Value::String("infinity".into()),
        })
        .collect();
    let samples: Vec<Value> = p.samples.iter().map(|s| s.as_ref().map_or(Value::String("infinity".into()), rational)).collect();
    Ok(json!({
        "critical": critical,
        "counts": p.counts,
        "samples": samples,
        "constant": p.is_constant(),
    }))
}

/// Exact invariants of a pencil: genericity, constant-count test, profile
/// and the advisory Hurwitz check.
pub fn analyze(l: &Pencil) -> Result<Value, CliError> {
    let g = is_generic(l).map_err(CliError::domain)?;
    let generic = g.status == GenericityStatus::Generic;
    let constant = if generic {
        let (c, k) = has_constant_real_count(l).map_err(CliError::domain)?;
        json!({ "constant": c, "count": k })
    } else {
        Value::Null
    };
    let hurwitz = is_hurwitz_generic(l, DEFAULT_HURWITZ_TOL).map_err(CliError::domain)?;
    Ok(json!({
        "pencil": pencil(l),
        "genericity": genericity(&g),
        "constant_count": constant,
        "profile": if generic { profile(l)? } else { Value::Null },
        "hurwitz": {
            "generic": hurwitz.generic,
            "violations": hurwitz.violations.len(),
            "tolerance": DEFAULT_HURWITZ_TOL,
            "exact": false,
        },
    }))
}

pub struct GardenOutput {
    pub report: Value,
    pub svg: String,
    pub traced: TracedGarden,
    pub weights: EdgeWeightedGardenData,
    pub bwg: Option<BoundaryWeightedGarden>,
}

fn garden_error(e: GardenError) -> CliError {
    match e {
        GardenError::NotGeneric(_) | GardenError::Singular(_) | GardenError::Dependent => CliError::domain(e),
        _ => CliError::Domain(format!("{e}")),
    }
}

/// Traces, weighs and projects the garden of a generic pencil.
pub fn garden(l: &Pencil, opts: &TraceOptions, svg: SvgOptions, with_class: bool) -> Result<GardenOutput, CliError> {
    let g = is_generic(l).map_err(CliError::domain)?;
    if g.status != GenericityStatus::Generic {
        return Err(CliError::Domain(format!("garden requires a generic pencil, got {}", status_name(g.status))));
    }
    let traced = face_signs(&trace_garden(l, opts).map_err(garden_error)?).map_err(garden_error)?;
    let weights = edge_weights(&traced).map_err(garden_error)?;
    let (bwg, lambda_error) = match to_boundary_weighted(&traced, &weights, DEFAULT_LAMBDA_TOL) {
        Ok(b) => (Some(b), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let vertices: Vec<Value> = traced.original_vertices().iter().map(|v| v.map_or(Value::String("infinity".into()), Value::from)).collect();
    let chords: Vec<Value> = traced
        .chords
        .iter()
        .zip(&weights.chords)
        .map(|(c, w)| json!({ "from": c.from, "to": c.to, "weight": w, "points": c.points.len() }))
        .collect();
    let ovals: Vec<Value> = traced
        .ovals
        .iter()
        .zip(&weights.ovals)
        .map(|(o, w)| json!({ "parent": o.parent, "weight": w, "points": o.points.len() }))
        .collect();
    let n = l.n();
    let class_id = match (&bwg, with_class && n <= CLASS_ID_MAX_N) {
        (Some(b), true) => {
            let rep = class_representative(b);
            equivalence_classes(n as u32).representatives.iter().position(|r| *r == rep).map(Value::from)
        }
        _ => None,
    };
    let boundary = bwg.as_ref().map(|b| {
        json!({
            "key": b.canonical_key(),
            "chords": b.k(),
            "face_weights": b.face_weights(),
            "ovals": b.oval_count(),
            "total_weight": b.total_weight(),
        })
    });
    let report = json!({
        "pencil": pencil(l),
        "genericity": genericity(&g),
        "profile": profile(l)?,
        "garden": {
            "chart": traced.chart,
            "vertices": vertices,
            "chords": chords,
            "ovals": ovals,
            "real_edges": weights.real_edges,
            "total_weight": weights.total,
            "tolerances": {
                "corrector": opts.corrector_tol,
                "step": opts.step,
                "weights": 1e-6,
                "lambda": DEFAULT_LAMBDA_TOL,
            },
        },
        "boundary_weighted": boundary,
        "lambda_error": lambda_error,
        "class_id": class_id,
        "class_id_max_n": CLASS_ID_MAX_N,
    });
    let svg = render_garden_svg(&traced, &weights, bwg.as_ref(), svg);
    Ok(GardenOutput { report, svg, traced, weights, bwg })
}

pub fn hb(p: &RealPoly, q: &RealPoly, mu: &Mu) -> Result<Value, CliError> {
    let d = zero_distribution(p, q, mu).map_err(CliError::domain)?;
    Ok(json!({
        "p": poly(p),
        "q": poly(q),
        "mu": { "re": rational(&mu.re), "im": rational(&mu.im) },
        "sharp_plus": d.sharp_plus,
        "sharp_minus": d.sharp_minus,
        "real_count": d.real_count,
        "n": d.n,
        "kappa": d.kappa,
        "t": d.t,
        "magnitude_law": d.magnitude_law,
        "conjugate_flips": d.conjugate_flips,
        "component": d.component,
    }))
}

pub fn conjecture(r: &ConjectureReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}
