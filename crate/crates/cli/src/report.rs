//! JSON serialization of classification reports.
//!
//! Rationals are serialized as `"num/den"` strings (plain integers when the
//! denominator is one), never as floats; matrices as entry strings plus the
//! scale `d`. Object keys are emitted in sorted order, so identical inputs
//! produce byte-identical output. Timing is opt-in to keep the default
//! output deterministic.

use jigsaw_core::arith::ArithOutcome;
use jigsaw_core::cuspset::{ClassificationReport, CoverStatus, Family, Verdict};
use jigsaw_core::exact::{ExtendedRational, GroupElement};
use jigsaw_core::TileType;
use num_rational::BigRational;
use serde_json::{json, Value};

pub fn rational_str(r: &BigRational) -> String {
    ExtendedRational::new(r.numer().clone(), r.denom().clone()).to_string()
}

pub fn point_str(x: &ExtendedRational) -> String {
    x.to_string()
}

pub fn matrix_json(m: &GroupElement) -> Value {
    json!({
        "entries": m.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "d": m.scale().to_string(),
    })
}

pub fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Arithmetic => "arithmetic",
        Verdict::Pseudomodular => "pseudomodular",
        Verdict::NonArithmeticWithSpecials => "specials",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn family_str(f: &Family) -> String {
    match f {
        Family::Modular => "modular".into(),
        Family::S12 => "S(1,2)".into(),
        Family::S13 => "S(1,3)".into(),
        Family::IntegralWeierstrass(n) => format!("weierstrass(1,1/{n},{n})"),
        Family::Other => "other".into(),
    }
}

pub fn tile_str(t: &TileType) -> String {
    match t.integral() {
        Some(n) => n.to_string(),
        None => {
            let p = t.params();
            format!("{},{},{}", rational_str(&p[0]), rational_str(&p[1]), rational_str(&p[2]))
        }
    }
}

pub fn report_json(r: &ClassificationReport, timing_ms: Option<u128>) -> Value {
    let arithmetic = r.arithmetic.as_ref().map(|a| match a {
        ArithOutcome::Arithmetic { traces } => json!({
            "arithmetic": true,
            "gamma2_trace_squares": traces.iter().map(rational_str).collect::<Vec<_>>(),
        }),
        ArithOutcome::NonArithmetic { witness, trace_sq } => json!({
            "arithmetic": false,
            "witness": matrix_json(witness),
            "trace_squared": rational_str(trace_sq),
        }),
    });
    let mut out = json!({
        "verdict": verdict_str(r.verdict),
        "family": family_str(&r.family),
        "L": rational_str(&r.length),
        "signature": r.signature.iter()
            .map(|(t, m)| json!([tile_str(t), m]))
            .collect::<Vec<_>>(),
        "boundary_labels": r.boundary_labels.iter().map(rational_str).collect::<Vec<_>>(),
        "specials": r.specials.iter().map(|s| json!({
            "point": point_str(&s.point),
            "witness": matrix_json(&s.witness.element),
            "fixed_points": s.witness.element.rational_fixed_points()
                .map(|ps| ps.iter().map(point_str).collect::<Vec<_>>())
                .unwrap_or_default(),
        })).collect::<Vec<_>>(),
        "cover": {
            "status": r.cover_status.map(|s| match s {
                CoverStatus::Complete => "complete",
                CoverStatus::PointGaps => "point-gaps",
                CoverStatus::IntervalGap => "interval-gap",
            }),
            "intervals": r.intervals.iter().map(|(c, rad)| json!({
                "center": point_str(c),
                "radius": rational_str(rad),
            })).collect::<Vec<_>>(),
            "cusp_points": r.cusp_points.iter().map(point_str).collect::<Vec<_>>(),
            "unknown_points": r.unknown_points.iter().map(point_str).collect::<Vec<_>>(),
        },
        "tangency": r.tangency.as_ref().map(|p| p.entries.iter()
            .map(|(gap, label)| json!([gap.to_string(), rational_str(label)]))
            .collect::<Vec<_>>()),
    });
    if let Some(a) = arithmetic {
        out["arithmeticity"] = a;
    }
    if let Some(ms) = timing_ms {
        out["timing_ms"] = json!(ms);
    }
    out
}
