//! JSON and Markdown rendering helpers.
//!
//! JSON objects are `serde_json::Map`, which keeps keys sorted, and
//! every multiprecision number is written as a decimal string with 40
//! significant digits, so identical runs give identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write;

use otlab_core::dcomplex::{DimTable, ZigzagDecomposition};
use otlab_core::dcomplex::Orientation;
use rug::{Complex, Float};
use serde_json::{json, Value};

pub const DIGITS: usize = 40;

pub fn float(x: &Float) -> Value {
    Value::String(x.to_string_radix(10, Some(DIGITS)))
}

pub fn complex(z: &Complex) -> Value {
    json!({ "re": float(z.real()), "im": float(z.imag()) })
}

pub fn small(x: f64) -> Value {
    Value::String(format!("{x:.3e}"))
}

pub fn table(t: &[Vec<usize>]) -> Value {
    json!(t)
}

pub fn dim_table(t: &DimTable) -> Value {
    Value::Array(t.iter().map(|(&(p, q), &n)| json!({ "p": p, "q": q, "dim": n })).collect())
}

pub fn odd_shapes<T: Copy + Into<i64>>(m: &BTreeMap<(T, T, T), usize>) -> Value {
    Value::Array(
        m.iter()
            .map(|(&(d, p, q), &n)| json!({ "d": d.into(), "p": p.into(), "q": q.into(), "mult": n }))
            .collect(),
    )
}

pub fn orientation(o: Orientation) -> &'static str {
    match o {
        Orientation::Column => "column",
        Orientation::Row => "row",
    }
}

pub fn decomposition(z: &ZigzagDecomposition) -> Value {
    json!({
        "odd": odd_shapes(&z.odd),
        "even": z.even.iter().map(|(&(o, r, p, q), &n)| {
            json!({ "orientation": orientation(o), "r": r, "p": p, "q": q, "mult": n })
        }).collect::<Vec<_>>(),
        "squares": z.squares.iter().map(|(&(p, q), &n)| json!({ "p": p, "q": q, "mult": n })).collect::<Vec<_>>(),
        "residual_checks": z.residual.iter().map(|r| json!({ "name": r.name, "passed": r.passed })).collect::<Vec<_>>(),
    })
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// A Markdown document built section by section.
#[derive(Default)]
pub struct Md(pub String);

impl Md {
    pub fn h(&mut self, level: usize, title: &str) {
        let _ = writeln!(self.0, "{} {title}\n", "#".repeat(level));
    }

    pub fn line(&mut self, text: impl AsRef<str>) {
        let _ = writeln!(self.0, "{}", text.as_ref());
    }

    pub fn para(&mut self, text: impl AsRef<str>) {
        let _ = writeln!(self.0, "{}\n", text.as_ref());
    }

    pub fn rows(&mut self, header: &[&str], rows: &[Vec<String>]) {
        let _ = writeln!(self.0, "| {} |", header.join(" | "));
        let _ = writeln!(self.0, "|{}", "---|".repeat(header.len()));
        for r in rows {
            let _ = writeln!(self.0, "| {} |", r.join(" | "));
        }
        self.0.push('\n');
    }

    /// Square grid with p down the rows and q across.
    pub fn grid(&mut self, t: &[Vec<usize>]) {
        let width = t.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut header = vec!["p\\q".to_string()];
        header.extend((0..width).map(|q| q.to_string()));
        let h: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
        let rows: Vec<Vec<String>> = t
            .iter()
            .enumerate()
            .map(|(p, row)| std::iter::once(p.to_string()).chain(row.iter().map(|v| v.to_string())).collect())
            .collect();
        self.rows(&h, &rows);
    }

    pub fn dim_grid(&mut self, t: &DimTable) {
        let n = t.keys().map(|&(p, q)| p.max(q)).max().unwrap_or(0).max(0) as usize;
        let grid: Vec<Vec<usize>> =
            (0..=n).map(|p| (0..=n).map(|q| t.get(&(p as i32, q as i32)).copied().unwrap_or(0)).collect()).collect();
        self.grid(&grid);
    }
}
