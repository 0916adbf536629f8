//! JSON and CSV rendering shared by the subcommands.

use cube_constants_core::rational::to_f64;
use cube_constants_core::verify::BoundsReport;
use cube_constants_core::{ExactRational, FamilyKind, SupportFamily};
use serde_json::{json, Map, Value};

/// Header line of every CSV table.
pub const CSV_HEADER: &str = "#cube-constants v1";

pub fn rational(q: &ExactRational) -> Value {
    json!({ "num": q.numer().to_string(), "den": q.denom().to_string() })
}

/// Short description of a family (sets are listed only for explicit ones).
pub fn family_summary(family: &SupportFamily) -> Value {
    let mut map = Map::new();
    let (kind, d) = match family.kind() {
        FamilyKind::Explicit => ("explicit", None),
        FamilyKind::Homogeneous(d) => ("homogeneous", Some(d)),
        FamilyKind::UpTo(d) => ("upto", Some(d)),
        FamilyKind::PrimeSingletons => ("prime-singletons", None),
        FamilyKind::SquareFree => ("squarefree", None),
    };
    map.insert("kind".into(), json!(kind));
    map.insert("N".into(), json!(family.dim()));
    if let Some(d) = d {
        map.insert("d".into(), json!(d));
    }
    map.insert("size".into(), json!(family.len()));
    if family.kind() == FamilyKind::Explicit {
        map.insert("sets".into(), json!(family.index_lists()));
    }
    Value::Object(map)
}

pub fn bounds_report(r: &BoundsReport) -> Value {
    let mut context = Map::new();
    for (k, v) in &r.context {
        context.insert((*k).to_string(), json!(v));
    }
    let mut map = Map::new();
    map.insert("name".into(), json!(r.name));
    map.insert("lhs".into(), json!(r.lhs));
    map.insert("rhs".into(), json!(r.rhs));
    if let Some(q) = &r.exact_lhs {
        map.insert("lhs_exact".into(), rational(q));
    }
    if let Some(q) = &r.exact_rhs {
        map.insert("rhs_exact".into(), rational(q));
    }
    map.insert("pass".into(), json!(r.pass));
    map.insert("context".into(), Value::Object(context));
    Value::Object(map)
}

pub fn lambda_value(q: &ExactRational) -> (Value, f64) {
    (rational(q), to_f64(q))
}

/// Pretty JSON with a trailing newline.
pub fn render_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values are always serializable");
    s.push('\n');
    s
}

/// CSV with the version header, a column line and one line per row.
pub fn render_csv(columns: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    s.push_str(CSV_HEADER);
    s.push('\n');
    s.push_str(&columns.join(","));
    s.push('\n');
    for row in rows {
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let text = render_csv(&["a", "b"], &[vec!["1".into(), "2".into()]]);
        assert_eq!(text, "#cube-constants v1\na,b\n1,2\n");
    }

    #[test]
    fn rational_and_keys() {
        let q = ExactRational::new(6.into(), (-4).into());
        assert_eq!(rational(&q), json!({ "num": "-3", "den": "2" }));
        let text = render_json(&json!({ "b": 1, "a": 2 }));
        assert!(text.find("\"a\"").unwrap() < text.find("\"b\"").unwrap());
        assert!(text.ends_with("}\n"));
    }
}
