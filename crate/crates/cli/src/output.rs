use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};
use torusasym::asymptotics::ExpansionReport;
use torusasym::Mpc;

/// Above this many digits a JSON number would silently lose precision.
pub const MAX_NUMERIC_DIGITS: u32 = 17;

#[derive(Clone, Copy, Debug)]
pub struct Numbers {
    pub digits: u32,
}

impl Numbers {
    pub fn as_strings(&self) -> bool {
        self.digits > MAX_NUMERIC_DIGITS
    }

    fn parts(&self, z: &Mpc) -> (Value, Value) {
        if self.as_strings() {
            let (re, im) = z.to_decimal_strings(self.digits as usize);
            (Value::String(re), Value::String(im))
        } else {
            (json!(z.re()), json!(z.im()))
        }
    }

    pub fn re(&self, z: &Mpc) -> Value {
        self.parts(z).0
    }

    pub fn im(&self, z: &Mpc) -> Value {
        self.parts(z).1
    }

    pub fn abs(&self, z: &Mpc) -> Value {
        self.parts(&z.abs_mpc()).0
    }

    pub fn complex(&self, z: &Mpc) -> Value {
        let (re, im) = self.parts(z);
        json!({ "re": re, "im": im })
    }
}

pub fn expansion_json(r: &ExpansionReport, a: i64, b: i64, xi: &str, order_j: usize, nums: Numbers) -> Value {
    let terms: Vec<Value> = r
        .exp_terms
        .iter()
        .map(|t| json!({ "k": t.k, "weight": t.weight, "a_value": nums.complex(&t.a_value), "term": nums.complex(&t.term) }))
        .collect();
    let mut m = Map::new();
    m.insert("a".into(), json!(a));
    m.insert("b".into(), json!(b));
    m.insert("N".into(), json!(r.n));
    m.insert("xi".into(), json!(xi));
    m.insert("J".into(), json!(order_j));
    m.insert("case_tag".into(), json!(r.case_tag.as_str()));
    m.insert("prefactor".into(), nums.complex(&r.prefactor));
    m.insert("leading".into(), nums.complex(&r.leading));
    m.insert("exp_terms".into(), Value::Array(terms));
    m.insert("corrections".into(), Value::Array(r.corrections.iter().map(|c| nums.complex(c)).collect()));
    m.insert("approximant".into(), nums.complex(&r.approximant));
    m.insert("oracle".into(), nums.complex(&r.oracle));
    m.insert("residual".into(), json!(r.residual));
    m.insert("residual_is_relative".into(), json!(r.residual_is_relative));
    m.insert("precision_digits".into(), json!(nums.digits));
    Value::Object(m)
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => File::create(p)?.write_all(text.as_bytes()),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn csv_text<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
