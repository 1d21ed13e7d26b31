//! Command reports and their JSON, CSV and human renderings.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Success,
    Refused,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Refused => 1,
            Status::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub claim: String,
    pub pass: bool,
    pub measured: Map<String, Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub verdict: String,
    pub summary: Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<Claim>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
    /// Replaces the CSV rendering (profile data for plotting).
    #[serde(skip)]
    pub csv_body: Option<String>,
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(format!("{x}")), Value::Number)
}

/// Map from `(name, value)` pairs, keeping their order.
pub fn fields<const N: usize>(pairs: [(&str, Value); N]) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

impl Report {
    pub fn new(command: &str, status: Status, verdict: impl Into<String>) -> Self {
        Self {
            command: command.to_string(),
            status,
            verdict: verdict.into(),
            summary: Map::new(),
            claims: Vec::new(),
            tables: Vec::new(),
            detail: None,
            csv_body: None,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.summary.insert(key.to_string(), value.into());
        self
    }

    pub fn with_num(self, key: &str, x: f64) -> Self {
        self.with(key, num(x))
    }

    pub fn with_detail<T: Serialize>(mut self, detail: &T) -> Self {
        self.detail = Some(serde_json::to_value(detail).expect("reports serialize"));
        self
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("reports serialize") + "\n",
            Format::Csv => self.csv_body.clone().unwrap_or_else(|| self.to_csv()),
            Format::Human => self.to_human(),
        }
    }

    fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
        let mut put = |rec: Vec<String>| w.write_record(&rec).expect("writes to memory");
        put(vec!["section".into(), "name".into(), "value".into()]);
        put(vec!["command".into(), self.command.clone(), self.verdict.clone()]);
        put(vec!["status".into(), format!("{:?}", self.status).to_lowercase(), self.exit_code().to_string()]);
        for (k, v) in &self.summary {
            put(vec!["summary".into(), k.clone(), plain(v)]);
        }
        for c in &self.claims {
            let mut rec = vec!["claim".into(), c.claim.clone(), c.pass.to_string()];
            rec.extend(c.measured.iter().map(|(k, v)| format!("{k}={}", plain(v))));
            put(rec);
        }
        for t in &self.tables {
            let mut head = vec!["table".into(), t.title.clone()];
            head.extend(t.columns.iter().cloned());
            put(head);
            for row in &t.rows {
                let mut rec = vec!["row".into(), t.title.clone()];
                rec.extend(row.iter().map(|x| format!("{x:?}")));
                put(rec);
            }
        }
        drop(put);
        String::from_utf8(w.into_inner().expect("flushes to memory")).expect("utf-8")
    }

    fn to_human(&self) -> String {
        let mut out = format!("{}: {} [{}]\n", self.command, self.verdict, format!("{:?}", self.status).to_lowercase());
        let width = self.summary.keys().map(String::len).max().unwrap_or(0);
        for (k, v) in &self.summary {
            out.push_str(&format!("  {k:<width$}  {}\n", human(v)));
        }
        for c in &self.claims {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            let measured: Vec<String> = c.measured.iter().map(|(k, v)| format!("{k} = {}", human(v))).collect();
            out.push_str(&format!("  [{tag}] {}", c.claim));
            if !measured.is_empty() {
                out.push_str(&format!("  ({})", measured.join(", ")));
            }
            out.push('\n');
        }
        for t in &self.tables {
            out.push_str(&format!("  {}\n", t.title));
            let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(|&x| if x.is_nan() { "-".into() } else { sig6(x) }).collect()).collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| cells.iter().map(|r| r[j].len()).chain([t.columns[j].len()]).max().unwrap_or(0))
                .collect();
            let line = |row: &[String]| {
                let padded: Vec<String> = row.iter().zip(&widths).map(|(s, &w)| format!("{s:>w$}")).collect();
                format!("    {}\n", padded.join("  "))
            };
            out.push_str(&line(&t.columns));
            for r in &cells {
                out.push_str(&line(r));
            }
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if !n.is_i64() && !n.is_u64() => format!("{x:?}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

fn human(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        Value::Number(n) => sig6(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(items) => format!("({})", items.iter().map(human).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// Six significant digits, trailing zeros dropped.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let s = format!("{:.*}", (5 - exp).max(0) as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        let mantissa = if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
        format!("{mantissa}e{e}")
    }
}
