//! Canonical printer for structure files. `parse(print(f)) == f`.

use std::fmt::Write;

use gcverify_core::scalar::{GaussianRational, EXP_NAME};

use crate::syntax::{FieldValue, StructureFile};

pub fn print(file: &StructureFile) -> String {
    let mut out = String::new();
    for c in &file.charts {
        let _ = write!(
            out,
            "chart {} dim {} coords {}",
            c.chart.name(),
            c.chart.dim(),
            c.base.join(" ")
        );
        if c.cylinder {
            out.push_str(" cylinder");
        }
        out.push('\n');
    }
    for p in &file.points {
        let implied_exp = p.values.get("t") == Some(&GaussianRational::from_int(0))
            && p.values.get(EXP_NAME) == Some(&GaussianRational::from_int(1));
        let chart = file
            .chart(&p.chart)
            .map(|c| c.chart.coords().to_vec())
            .unwrap_or_default();
        let mut parts: Vec<String> = chart
            .iter()
            .filter_map(|c| p.values.get(c).map(|v| format!("{c} = {v}")))
            .collect();
        if let Some(v) = p.values.get(EXP_NAME).filter(|_| !implied_exp) {
            parts.push(format!("{EXP_NAME} = {v}"));
        }
        let _ = writeln!(out, "point {} on {}: {}", p.name, p.chart, parts.join(", "));
    }
    for s in &file.structures {
        let _ = write!(out, "\n{} {} on {}", s.kind, s.name, s.chart);
        if let Some(src) = &s.source {
            let _ = write!(out, " from {src}");
        }
        out.push_str(" {\n");
        for (name, v) in &s.fields {
            let text = match v {
                FieldValue::Form(f) => f.to_string(),
                FieldValue::Multi(p) => p.to_string(),
                FieldValue::Endo(a) => a.to_string(),
                FieldValue::Metric(g) => g.to_string(),
                FieldValue::Ref(r) | FieldValue::Point(r) => r.clone(),
            };
            let _ = writeln!(out, "    {name} = {text}");
        }
        out.push_str("}\n");
    }
    if !file.checks.is_empty() {
        out.push('\n');
    }
    for c in &file.checks {
        let _ = write!(out, "check {} {}", c.check, c.structure);
        if let Some(m) = &c.method {
            let _ = write!(out, " {m}");
        }
        out.push('\n');
    }
    out
}
