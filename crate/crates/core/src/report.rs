//! Machine-readable emission of correlation records and verification tables.
//!
//! CSV is comma-separated with one header row; exact rationals are emitted as
//! separate numerator/denominator columns plus a 30-digit decimal rendering.
//! JSON output is one document per run with a `records` array. Rows are
//! always sorted by parameter tuple before emission so identical runs give
//! byte-identical files.

use crate::correlation::CorrelationRecord;
use crate::exact::format_decimal;
use crate::numerics::format_dd;
use serde_json::json;

pub const CORRELATION_HEADER: &str =
    "method,R1,v1,R2,v2,r,u,value_numerator,value_denominator,float_value,error_estimate";

fn sort_key(rec: &CorrelationRecord) -> (u8, i64, i64, i64, i64, i64, i64) {
    let q = rec.quadromer_params.unwrap_or((0, 0, 0, 0));
    let c = rec.center_params.unwrap_or((0, 0));
    (rec.method as u8, q.0, q.1, q.2, q.3, c.0, c.1)
}

fn record_fields(rec: &CorrelationRecord) -> Vec<String> {
    let (r1, v1, r2, v2) = match rec.quadromer_params {
        Some((a, b, c, d)) => (
            a.to_string(),
            b.to_string(),
            c.to_string(),
            d.to_string(),
        ),
        None => Default::default(),
    };
    let (r, u) = match rec.center_params {
        Some((r, u)) => (r.to_string(), u.to_string()),
        None => Default::default(),
    };
    let (num, den) = match &rec.exact_value {
        Some(v) => (v.numer().to_string(), v.denom().to_string()),
        None => Default::default(),
    };
    vec![
        rec.method.to_string(),
        r1,
        v1,
        r2,
        v2,
        r,
        u,
        num,
        den,
        format_dd(rec.float_value.value, 30),
        format!("{:.3e}", rec.float_value.err),
    ]
}

/// CSV document for a batch of correlation records.
pub fn correlation_csv(records: &[CorrelationRecord]) -> String {
    let mut rows = records.to_vec();
    rows.sort_by_key(sort_key);
    let mut out = String::from(CORRELATION_HEADER);
    out.push('\n');
    for rec in &rows {
        out.push_str(&record_fields(rec).join(","));
        out.push('\n');
    }
    out
}

/// JSON document for a batch of correlation records.
pub fn correlation_json(records: &[CorrelationRecord]) -> serde_json::Value {
    let mut rows = records.to_vec();
    rows.sort_by_key(sort_key);
    let records: Vec<_> = rows
        .iter()
        .map(|rec| {
            json!({
                "method": rec.method.to_string(),
                "quadromer_params": rec.quadromer_params,
                "center_params": rec.center_params,
                "value_numerator": rec.exact_value.as_ref().map(|v| v.numer().to_string()),
                "value_denominator": rec.exact_value.as_ref().map(|v| v.denom().to_string()),
                "value_decimal": rec.exact_value.as_ref().map(|v| format_decimal(v, 30)),
                "float_value": format_dd(rec.float_value.value, 30),
                "error_estimate": format!("{:.3e}", rec.float_value.err),
                "non_convergent": rec.non_convergent,
            })
        })
        .collect();
    json!({ "records": records })
}
