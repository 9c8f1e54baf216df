use serde_json::{Map, Value};

/// Process exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    InputError,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 2,
            Status::InputError => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
            Status::InputError => "error",
        }
    }
}

/// Ordered report fields plus an optional file document (seed or
/// triangulation text) that is printed verbatim in text mode.
#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    fields: Map<String, Value>,
    document: Option<(String, String)>,
}

impl Report {
    pub fn new(status: Status) -> Self {
        Report {
            status,
            fields: Map::new(),
            document: None,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn document(&mut self, key: &str, text: String) -> &mut Self {
        self.document = Some((key.to_string(), text));
        self
    }

    pub fn fields(&self) -> &Map<String, Value> {
        &self.fields
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("status: {}\n", self.status.name());
        write_fields(&mut out, &self.fields, 0);
        if let Some((_, text)) = &self.document {
            out.push_str(text);
        }
        out
    }

    pub fn render_structured(&self) -> String {
        let mut map = Map::new();
        map.insert("status".into(), self.status.name().into());
        map.insert("exit_code".into(), self.status.code().into());
        for (k, v) in &self.fields {
            map.insert(k.clone(), v.clone());
        }
        if let Some((key, text)) = &self.document {
            // Every document is written in the JSON-compatible file syntax.
            let value = serde_json::from_str(text).unwrap_or_else(|_| Value::String(text.clone()));
            map.insert(key.clone(), value);
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("serializable");
        s.push('\n');
        s
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn write_fields(out: &mut String, fields: &Map<String, Value>, indent: usize) {
    let pad = " ".repeat(indent);
    for (k, v) in fields {
        match v {
            Value::Array(items) if items.iter().any(|i| i.is_array() || i.is_object()) => {
                out.push_str(&format!("{pad}{k}:\n"));
                for item in items {
                    match item {
                        Value::Object(m) => {
                            out.push_str(&format!("{pad}  -\n"));
                            write_fields(out, m, indent + 4);
                        }
                        other => out.push_str(&format!(
                            "{pad}  - {}\n",
                            scalar(other).unwrap_or_else(|| other.to_string())
                        )),
                    }
                }
            }
            Value::Object(m) => {
                out.push_str(&format!("{pad}{k}:\n"));
                write_fields(out, m, indent + 2);
            }
            other => out.push_str(&format!("{pad}{k}: {}\n", scalar(other).expect("scalar"))),
        }
    }
}
