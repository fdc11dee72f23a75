//! Deterministic report emission: TOML text or CSV.

use std::fmt::Write as _;

/// Entries below this fraction of a matrix's largest entry are printed as zero.
const MATRIX_FLUSH: f64 = 1e-13;
/// Residual-type diagnostics below this are printed as zero.
pub const RESIDUAL_FLOOR: f64 = 1e-14;

/// 12 significant digits in exponent form; `-0` is normalized.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn residual(x: f64) -> String {
    if x.abs() < RESIDUAL_FLOOR {
        num(0.0)
    } else {
        format!("{x:.3e}")
    }
}

fn flushed_rows<const R: usize, const C: usize>(m: &nalgebra::SMatrix<f64, R, C>) -> Vec<Vec<f64>> {
    let scale = m.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    (0..R)
        .map(|i| (0..C).map(|j| if m[(i, j)].abs() <= MATRIX_FLUSH * scale { 0.0 } else { m[(i, j)] }).collect())
        .collect()
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Ordered key/value report printed as TOML, or as `key,value` CSV.
#[derive(Debug, Default, Clone)]
pub struct Report {
    items: Vec<Item>,
}

#[derive(Debug, Clone)]
enum Item {
    Section(String),
    Value(String, String),
    Matrix(String, Vec<Vec<f64>>),
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn section(&mut self, name: &str) -> &mut Self {
        self.items.push(Item::Section(name.to_string()));
        self
    }

    pub fn text(&mut self, key: &str, v: &str) -> &mut Self {
        self.items.push(Item::Value(key.to_string(), quote(v)));
        self
    }

    pub fn num(&mut self, key: &str, v: f64) -> &mut Self {
        self.items.push(Item::Value(key.to_string(), num(v)));
        self
    }

    pub fn residual(&mut self, key: &str, v: f64) -> &mut Self {
        self.items.push(Item::Value(key.to_string(), residual(v)));
        self
    }

    pub fn flag(&mut self, key: &str, v: bool) -> &mut Self {
        self.items.push(Item::Value(key.to_string(), v.to_string()));
        self
    }

    pub fn int(&mut self, key: &str, v: i64) -> &mut Self {
        self.items.push(Item::Value(key.to_string(), v.to_string()));
        self
    }

    pub fn matrix<const R: usize, const C: usize>(&mut self, key: &str, m: &nalgebra::SMatrix<f64, R, C>) -> &mut Self {
        self.items.push(Item::Matrix(key.to_string(), flushed_rows(m)));
        self
    }

    pub fn to_toml(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item {
                Item::Section(name) => {
                    if !out.is_empty() {
                        out.push('\n');
                    }
                    let _ = writeln!(out, "[{name}]");
                }
                Item::Value(k, v) => {
                    let _ = writeln!(out, "{k} = {v}");
                }
                Item::Matrix(k, rows) => {
                    let _ = writeln!(out, "{k} = [");
                    for r in rows {
                        let cells: Vec<String> = r.iter().map(|x| num(*x)).collect();
                        let _ = writeln!(out, "  [{}],", cells.join(", "));
                    }
                    out.push_str("]\n");
                }
            }
        }
        out
    }

    /// `key,value` rows; keys are prefixed by their section, matrices emit one row per matrix row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        let mut prefix = String::new();
        for item in &self.items {
            match item {
                Item::Section(name) => prefix = format!("{name}."),
                Item::Value(k, v) => {
                    let v = v.trim_matches('"');
                    let _ = writeln!(out, "{prefix}{k},{v}");
                }
                Item::Matrix(k, rows) => {
                    for (i, r) in rows.iter().enumerate() {
                        let cells: Vec<String> = r.iter().map(|x| num(*x)).collect();
                        let _ = writeln!(out, "{prefix}{k}[{}],{}", i + 1, cells.join(","));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(2.0), "2.00000000000e0");
        assert_eq!(num(-0.0), "0.00000000000e0");
        assert_eq!(num(-0.5), "-5.00000000000e-1");
        assert_eq!(num(1.9999999999999998), "2.00000000000e0");
    }

    #[test]
    fn report_is_valid_toml() {
        let mut r = Report::new();
        r.text("command", "x\"y").section("a").num("v", 1.5).matrix("m", &nalgebra::Matrix3::<f64>::identity());
        let parsed: toml::Table = toml::from_str(&r.to_toml()).unwrap();
        assert_eq!(parsed["command"].as_str(), Some("x\"y"));
        assert_eq!(parsed["a"]["m"][1][1].as_float(), Some(1.0));
    }
}
