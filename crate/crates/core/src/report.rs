//! Machine-readable renderings of results.
//!
//! JSON reports are canonical: object keys are sorted, every integer is a
//! decimal string, and no floating point appears. Re-serializing a parsed
//! report reproduces it byte for byte.

use num_bigint::{BigInt, BigUint};
use serde_json::{json, Map, Value};

use crate::descent::{CaseScanRow, DescentTrace, FilterOutcome};
use crate::gaussint::TwoSquares;
use crate::oracles::OracleReport;
use crate::sieve::ParityCertificate;
use crate::solver::{Bounds, SolutionRecord, VerificationReport};
use crate::triples::{HypothesisReport, TeraiInstance};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn s(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn instance_json(inst: &TeraiInstance) -> Value {
    json!({
        "m": s(&inst.m), "n": s(&inst.n),
        "a": s(&inst.a), "b": s(&inst.b), "c": s(&inst.c),
        "p": s(&inst.p), "q": s(&inst.q),
    })
}

pub fn hypotheses_json(h: &HypothesisReport) -> Value {
    json!({
        "coprime": h.coprime,
        "opposite_parity": h.opposite_parity,
        "c_mod8_is_5": h.c_mod8_is_5,
        "p_prime": h.p_prime,
        "q_prime": h.q_prime,
        "qualifies": h.qualifies,
    })
}

pub fn parity_json(cert: &ParityCertificate) -> Value {
    let conclusions = match &cert.conclusions {
        Some(c) => json!({
            "y": c.y.to_string(), "z": c.z.to_string(),
            "r": c.r.to_string(), "k": c.k.to_string(),
        }),
        None => Value::Null,
    };
    json!({
        "symbols": {
            "j_minus1_c": s(cert.j_minus1_c.as_i8()),
            "j_b_c": s(cert.j_b_c.as_i8()),
            "j_c_b": s(cert.j_c_b.as_i8()),
            "j_2_c": s(cert.j_2_c.as_i8()),
            "j_2_b": s(cert.j_2_b.as_i8()),
        },
        "conclusions": conclusions,
        "valid": cert.valid,
        "deviations": cert.deviations.iter().map(s).collect::<Vec<_>>(),
        "note": cert.note,
    })
}

pub fn case_scan_json(rows: &[CaseScanRow]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| json!([s(r.r), s(r.k), r.case_a_holds, r.case_b_holds]))
            .collect(),
    )
}

pub fn solutions_json(sols: &[SolutionRecord]) -> Value {
    Value::Array(sols.iter().map(|x| json!([s(&x.x), s(x.y), s(x.z)])).collect())
}

fn naturals(rows: &[Vec<BigUint>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|row| Value::Array(row.iter().map(s).collect()))
            .collect(),
    )
}

pub fn oracle_json(report: &OracleReport) -> Value {
    let window: Map<String, Value> = report
        .window
        .bounds()
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    json!({
        "name": report.window.name(),
        "window": window,
        "hits": naturals(&report.hits),
        "unexpected": naturals(&report.unexpected),
        "as_expected": report.as_expected(),
    })
}

pub fn bounds_json(b: &Bounds) -> Value {
    json!({
        "y_max": s(b.y_max), "z_max": s(b.z_max),
        "r_max": s(b.r_max), "k_max": s(b.k_max),
        "cohn_k_max": s(b.cohn_k_max), "cohn_z_max": s(b.cohn_z_max),
        "corollary_y_max": s(b.corollary_y_max),
        "corollary_q": b.corollary_exponents.iter().map(s).collect::<Vec<_>>(),
        "l2_m_max": s(b.l2_m_max), "l2_y_max": s(b.l2_y_max),
    })
}

fn dec_json(d: &TwoSquares, f: Option<&FilterOutcome>) -> Value {
    let mut v = json!({ "g": s(&d.g), "h": s(&d.h) });
    if let Some(f) = f {
        v["epsilon"] = s(f.epsilon);
        v["t1"] = s(f.t1);
        v["t2"] = s(f.t2);
    }
    v
}

fn signed(v: &BigInt) -> Value {
    s(v)
}

pub fn trace_json(t: &DescentTrace) -> Value {
    let checks: Map<String, Value> = t
        .identity_checks
        .iter()
        .map(|c| (c.name.to_string(), Value::Bool(c.holds)))
        .collect();
    json!({
        "solution": [s(&t.x), s(t.y), s(t.z)],
        "r": s(t.r),
        "k": s(t.k),
        "legs": { "u": s(&t.u), "v": s(&t.v) },
        "case_tag": t.case_tag.to_string(),
        "decompositions": t.decompositions.iter().map(|d| dec_json(d, None)).collect::<Vec<_>>(),
        "survivors": t.survivors.iter().map(|(d, f)| dec_json(d, Some(f))).collect::<Vec<_>>(),
        "chosen": t.chosen.as_ref().map(|(d, f)| dec_json(d, Some(f))).unwrap_or(Value::Null),
        "pq": t.pq.as_ref().map(|(p, q)| json!({ "P": signed(p), "Q": signed(q) })).unwrap_or(Value::Null),
        "identity_checks": checks,
        "k_conclusion": t.k_conclusion.to_string(),
        "verdict": t.verdict.to_string(),
    })
}

/// Full report for one instance. `config` is embedded verbatim.
pub fn verification_json(r: &VerificationReport, config: Value) -> Value {
    json!({
        "version": VERSION,
        "config": config,
        "instance": instance_json(&r.instance),
        "hypotheses": hypotheses_json(&r.hypotheses),
        "parity": parity_json(&r.parity),
        "case_scan": case_scan_json(&r.case_scan),
        "solutions": solutions_json(&r.solutions),
        "traces": r.traces.iter().map(trace_json).collect::<Vec<_>>(),
        "oracles": r.oracles.iter().map(oracle_json).collect::<Vec<_>>(),
        "failures": r.failures.iter().map(|f| json!({ "step": f.step, "detail": f.detail })).collect::<Vec<_>>(),
        "verdict": r.verdict.as_str(),
        "elapsed_ms": s(r.elapsed_ms),
    })
}

/// Config block shared by verification reports: bounds and primality policy.
pub fn verification_config(r: &VerificationReport) -> Value {
    json!({
        "bounds": bounds_json(&r.bounds),
        "primality": r.primality.describe(),
    })
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut out = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    out.push('\n');
    out
}
