//! Text formats for seeds, triangulations and maps.
//!
//! All three share one grammar, a subset of JSON without floats or null:
//!
//! ```text
//! value  := object | array | string | integer | "true" | "false"
//! object := "{" [ string ":" value { "," string ":" value } ] "}"
//! array  := "[" [ value { "," value } ] "]"
//! ```
//!
//! Strings accept the escapes `\"`, `\\`, `\/`, `\n`, `\t`. Keys may not
//! repeat and unknown keys are rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::laurent::{LaurentPoly, VarId};
use crate::morphism::{ClusterMap, Image, MorphismError};
use crate::seed::{ExchangeMatrix, Seed};
use crate::triangulation::{
    format_fraction, parse_fraction, AngleSequence, Arc, ArcFamily, Endpoint, FamilyKind, FiniteTriangulation,
    InfiniteTriangulation, MarkedPoint,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: expected {expected}")]
    Parse {
        line: usize,
        column: usize,
        expected: String,
    },
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
}

fn read_file(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

pub fn load_seed_file(path: &Path) -> Result<Seed, FormatError> {
    parse_seed(&read_file(path)?)
}

pub fn save_seed_file(s: &Seed, path: &Path) -> Result<(), FormatError> {
    std::fs::write(path, format_seed(s)).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

pub fn load_triangulation_file(path: &Path) -> Result<InfiniteTriangulation, FormatError> {
    parse_triangulation(&read_file(path)?)
}

pub fn load_map_file(path: &Path, source: &Seed, target: &Seed) -> Result<ClusterMap, FormatError> {
    parse_map(&read_file(path)?, source, target)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Object(Vec<(String, Node)>),
    Array(Vec<Node>),
    Str(String),
    Int(BigInt),
    Bool(bool),
}

/// A parsed value with the position of its first character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    pub line: usize,
    pub column: usize,
}

impl Node {
    fn error(&self, expected: impl Into<String>) -> FormatError {
        FormatError::Parse {
            line: self.line,
            column: self.column,
            expected: expected.into(),
        }
    }

    fn as_str(&self) -> Result<&str, FormatError> {
        match &self.kind {
            NodeKind::Str(s) => Ok(s),
            _ => Err(self.error("a string")),
        }
    }

    fn as_int(&self) -> Result<&BigInt, FormatError> {
        match &self.kind {
            NodeKind::Int(n) => Ok(n),
            _ => Err(self.error("an integer")),
        }
    }

    fn as_i64(&self) -> Result<i64, FormatError> {
        self.as_int()?
            .to_i64()
            .ok_or_else(|| self.error("an integer in 64-bit range"))
    }

    fn as_bool(&self) -> Result<bool, FormatError> {
        match &self.kind {
            NodeKind::Bool(b) => Ok(*b),
            _ => Err(self.error("true or false")),
        }
    }

    fn as_array(&self) -> Result<&[Node], FormatError> {
        match &self.kind {
            NodeKind::Array(items) => Ok(items),
            _ => Err(self.error("an array")),
        }
    }

    fn as_tuple(&self, n: usize) -> Result<&[Node], FormatError> {
        let items = self.as_array()?;
        if items.len() != n {
            return Err(self.error(format!("an array of {n} elements")));
        }
        Ok(items)
    }

    fn as_var(&self) -> Result<VarId, FormatError> {
        VarId::new(self.as_str()?).map_err(|_| self.error("a variable name"))
    }

    /// Fields of an object, checked against the allowed keys.
    fn fields<'a>(&'a self, required: &[&str], optional: &[&str]) -> Result<Fields<'a>, FormatError> {
        let NodeKind::Object(entries) = &self.kind else {
            return Err(self.error("an object"));
        };
        let mut map = BTreeMap::new();
        for (k, v) in entries {
            if !required.contains(&k.as_str()) && !optional.contains(&k.as_str()) {
                let keys: Vec<String> = required.iter().chain(optional).map(|k| format!("\"{k}\"")).collect();
                return Err(v.error(format!("one of the keys {}", keys.join(", "))));
            }
            map.insert(k.as_str(), v);
        }
        for k in required {
            if !map.contains_key(k) {
                return Err(self.error(format!("key \"{k}\"")));
            }
        }
        Ok(Fields { map })
    }
}

struct Fields<'a> {
    map: BTreeMap<&'a str, &'a Node>,
}

impl<'a> Fields<'a> {
    fn get(&self, k: &str) -> &'a Node {
        self.map[k]
    }

    fn opt(&self, k: &str) -> Option<&'a Node> {
        self.map.get(k).copied()
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn error(&self, expected: &str) -> FormatError {
        FormatError::Parse {
            line: self.line,
            column: self.column,
            expected: expected.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\r' | '\n')) {
            self.bump();
        }
    }

    fn expect(&mut self, c: char, what: &str) -> Result<(), FormatError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn value(&mut self) -> Result<Node, FormatError> {
        self.skip_ws();
        let (line, column) = (self.line, self.column);
        let kind = match self.peek() {
            Some('{') => self.object()?,
            Some('[') => self.array()?,
            Some('"') => NodeKind::Str(self.string()?),
            Some(c) if c == '-' || c.is_ascii_digit() => NodeKind::Int(self.integer()?),
            Some(c) if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(c) = self.peek().filter(char::is_ascii_alphabetic) {
                    word.push(c);
                    self.bump();
                }
                match word.as_str() {
                    "true" => NodeKind::Bool(true),
                    "false" => NodeKind::Bool(false),
                    _ => {
                        return Err(FormatError::Parse {
                            line,
                            column,
                            expected: "a value (object, array, string, integer, true or false)".into(),
                        })
                    }
                }
            }
            _ => return Err(self.error("a value (object, array, string, integer, true or false)")),
        };
        Ok(Node { kind, line, column })
    }

    fn object(&mut self) -> Result<NodeKind, FormatError> {
        self.bump();
        let mut entries: Vec<(String, Node)> = Vec::new();
        self.skip_ws();
        if self.peek() == Some('}') {
            self.bump();
            return Ok(NodeKind::Object(entries));
        }
        loop {
            self.skip_ws();
            if self.peek() != Some('"') {
                return Err(self.error("a string key"));
            }
            let (line, column) = (self.line, self.column);
            let key = self.string()?;
            if entries.iter().any(|(k, _)| *k == key) {
                return Err(FormatError::Parse {
                    line,
                    column,
                    expected: format!("a key other than the repeated \"{key}\""),
                });
            }
            self.expect(':', "':'")?;
            let v = self.value()?;
            entries.push((key, v));
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some('}') => {
                    self.bump();
                    return Ok(NodeKind::Object(entries));
                }
                _ => return Err(self.error("',' or '}'")),
            }
        }
    }

    fn array(&mut self) -> Result<NodeKind, FormatError> {
        self.bump();
        let mut items = Vec::new();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.bump();
            return Ok(NodeKind::Array(items));
        }
        loop {
            items.push(self.value()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => {
                    self.bump();
                }
                Some(']') => {
                    self.bump();
                    return Ok(NodeKind::Array(items));
                }
                _ => return Err(self.error("',' or ']'")),
            }
        }
    }

    fn string(&mut self) -> Result<String, FormatError> {
        self.bump();
        let mut out = String::new();
        loop {
            match self.peek() {
                None | Some('\n') => return Err(self.error("closing '\"'")),
                Some('"') => {
                    self.bump();
                    return Ok(out);
                }
                Some('\\') => {
                    self.bump();
                    let c = match self.peek() {
                        Some('"') => '"',
                        Some('\\') => '\\',
                        Some('/') => '/',
                        Some('n') => '\n',
                        Some('t') => '\t',
                        _ => return Err(self.error("an escape (\\\" \\\\ \\/ \\n \\t)")),
                    };
                    self.bump();
                    out.push(c);
                }
                Some(c) => {
                    self.bump();
                    out.push(c);
                }
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt, FormatError> {
        let mut text = String::new();
        if self.peek() == Some('-') {
            text.push('-');
            self.bump();
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            text.push(c);
            self.bump();
        }
        if matches!(self.peek(), Some('.' | 'e' | 'E')) {
            return Err(self.error("an integer (fractions are written as strings)"));
        }
        let digits = text.trim_start_matches('-');
        if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
            return Err(self.error("an integer without leading zeros"));
        }
        Ok(text.parse().expect("validated digits"))
    }
}

/// Parses a whole document.
pub fn parse_document(src: &str) -> Result<Node, FormatError> {
    let mut p = Parser::new(src);
    let v = p.value()?;
    p.skip_ws();
    if p.peek().is_some() {
        return Err(p.error("end of input"));
    }
    Ok(v)
}

fn parse_laurent(node: &Node) -> Result<LaurentPoly, FormatError> {
    node.as_str()?
        .parse()
        .map_err(|e| node.error(format!("a Laurent polynomial ({e})")))
}

/// Reads a seed file.
pub fn parse_seed(src: &str) -> Result<Seed, FormatError> {
    let doc = parse_document(src)?;
    let f = doc.fields(&["variables", "matrix"], &["values"])?;
    let mut labels: Vec<VarId> = Vec::new();
    let mut exchangeable = BTreeSet::new();
    for item in f.get("variables").as_array()? {
        let g = item.fields(&["id"], &["exchangeable"])?;
        let id = g.get("id").as_var()?;
        if labels.contains(&id) {
            return Err(g.get("id").error("a variable name not declared before"));
        }
        if g.opt("exchangeable").map(Node::as_bool).transpose()?.unwrap_or(false) {
            exchangeable.insert(id.clone());
        }
        labels.push(id);
    }
    let declared: BTreeSet<&VarId> = labels.iter().collect();
    let declared_var = |n: &Node| -> Result<VarId, FormatError> {
        let v = n.as_var()?;
        if declared.contains(&v) {
            Ok(v)
        } else {
            Err(n.error("a declared variable"))
        }
    };
    let mut m = ExchangeMatrix::new();
    let mut seen = BTreeSet::new();
    for item in f.get("matrix").as_array()? {
        let t = item.as_tuple(3)?;
        let (v, w) = (declared_var(&t[0])?, declared_var(&t[1])?);
        let b = t[2].as_i64()?;
        if b == 0 {
            return Err(t[2].error("a nonzero integer"));
        }
        if !seen.insert((v.clone(), w.clone())) {
            return Err(item.error("an entry not listed before"));
        }
        m.set(v, w, b);
    }
    let seed = match f.opt("values") {
        None => Seed::initial(labels, exchangeable, m),
        Some(values) => {
            let mut map: BTreeMap<VarId, LaurentPoly> = BTreeMap::new();
            for item in values.as_array()? {
                let t = item.as_tuple(2)?;
                let v = declared_var(&t[0])?;
                if map.insert(v, parse_laurent(&t[1])?).is_some() {
                    return Err(t[0].error("a variable whose value is not given before"));
                }
            }
            if let Some(l) = labels.iter().find(|l| !map.contains_key(*l)) {
                return Err(values.error(format!("a value for every variable, {l} has none")));
            }
            Seed::new(
                labels
                    .into_iter()
                    .map(|l| (l.clone(), map.remove(&l).unwrap()))
                    .collect(),
                exchangeable,
                m,
            )
        }
    };
    seed.map_err(|e| FormatError::InvalidSeed(e.to_string()))
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn write_list(out: &mut String, key: &str, items: &[String], last: bool) {
    if items.is_empty() {
        let _ = write!(out, "  \"{key}\": []");
    } else {
        let _ = writeln!(out, "  \"{key}\": [");
        for (i, item) in items.iter().enumerate() {
            let sep = if i + 1 < items.len() { "," } else { "" };
            let _ = writeln!(out, "    {item}{sep}");
        }
        out.push_str("  ]");
    }
    out.push_str(if last { "\n" } else { ",\n" });
}

/// Canonical text of a seed: variables and matrix entries sorted, values
/// written only when the seed is not initial.
pub fn format_seed(s: &Seed) -> String {
    let variables: Vec<String> = s
        .labels()
        .map(|l| {
            format!(
                "{{\"id\": {}, \"exchangeable\": {}}}",
                quote(l.as_str()),
                s.is_exchangeable(l)
            )
        })
        .collect();
    let mut entries: Vec<(&VarId, &VarId, i64)> = s.matrix().entries().collect();
    entries.sort();
    let matrix: Vec<String> = entries
        .iter()
        .map(|(v, w, b)| format!("[{}, {}, {b}]", quote(v.as_str()), quote(w.as_str())))
        .collect();
    let initial = s.is_initial();
    let mut out = String::from("{\n");
    write_list(&mut out, "variables", &variables, false);
    write_list(&mut out, "matrix", &matrix, initial);
    if !initial {
        let values: Vec<String> = s
            .cluster()
            .map(|(l, v)| format!("[{}, {}]", quote(l.as_str()), quote(&v.to_string())))
            .collect();
        write_list(&mut out, "values", &values, true);
    }
    out.push_str("}\n");
    out
}

fn parse_point(node: &Node) -> Result<MarkedPoint, FormatError> {
    node.as_str()?
        .parse()
        .map_err(|_| node.error("a point as a reduced fraction in [0, 1), such as \"3/4\""))
}

fn parse_arc(node: &Node) -> Result<Arc, FormatError> {
    let t = node.as_tuple(2)?;
    Arc::new(parse_point(&t[0])?, parse_point(&t[1])?).map_err(|_| node.error("an arc with distinct endpoints"))
}

fn parse_rational_field(node: &Node) -> Result<num_rational::BigRational, FormatError> {
    let s = node.as_str()?;
    parse_fraction(s)
        .filter(|r| format_fraction(r) == s)
        .ok_or_else(|| node.error("a reduced fraction such as \"-1/2\""))
}

fn parse_sequence(node: &Node) -> Result<AngleSequence, FormatError> {
    let f = node.fields(&["limit", "scale"], &["shift"])?;
    Ok(AngleSequence {
        limit: parse_rational_field(f.get("limit"))?,
        scale: parse_rational_field(f.get("scale"))?,
        shift: f.opt("shift").map(Node::as_i64).transpose()?.unwrap_or(0),
    })
}

fn parse_family(node: &Node) -> Result<ArcFamily, FormatError> {
    let NodeKind::Object(entries) = &node.kind else {
        return Err(node.error("a family record"));
    };
    let kind_node = entries
        .iter()
        .find(|(k, _)| k == "kind")
        .map(|(_, v)| v)
        .ok_or_else(|| node.error("key \"kind\""))?;
    let kind = FamilyKind::from_name(kind_node.as_str()?)
        .ok_or_else(|| kind_node.error("one of fountain, left-fountain, right-fountain, nest, half-nest"))?;
    let family = match kind {
        FamilyKind::Fountain | FamilyKind::LeftFountain | FamilyKind::RightFountain => {
            let f = node.fields(&["kind", "base", "limit", "scale", "start"], &["shift"])?;
            ArcFamily {
                kind,
                first: Endpoint::Fixed(parse_point(f.get("base"))?),
                second: Endpoint::Moving(AngleSequence {
                    limit: parse_rational_field(f.get("limit"))?,
                    scale: parse_rational_field(f.get("scale"))?,
                    shift: f.opt("shift").map(Node::as_i64).transpose()?.unwrap_or(0),
                }),
                start: f.get("start").as_i64()?,
            }
        }
        FamilyKind::Nest | FamilyKind::HalfNest => {
            let f = node.fields(&["kind", "first", "second", "start"], &[])?;
            ArcFamily {
                kind,
                first: Endpoint::Moving(parse_sequence(f.get("first"))?),
                second: Endpoint::Moving(parse_sequence(f.get("second"))?),
                start: f.get("start").as_i64()?,
            }
        }
    };
    family
        .validate()
        .map_err(|e| node.error(format!("a well-formed family ({e})")))?;
    Ok(family)
}

/// Reads a triangulation file. Edges between consecutive marked points
/// are added when missing.
pub fn parse_triangulation(src: &str) -> Result<InfiniteTriangulation, FormatError> {
    let doc = parse_document(src)?;
    let f = doc.fields(&["points"], &["arcs", "families", "roots"])?;
    let mut points = BTreeSet::new();
    for p in f.get("points").as_array()? {
        if !points.insert(parse_point(p)?) {
            return Err(p.error("a point not listed before"));
        }
    }
    let mut arcs = BTreeSet::new();
    for a in f.opt("arcs").map(Node::as_array).transpose()?.unwrap_or(&[]) {
        arcs.insert(parse_arc(a)?);
    }
    let families = f
        .opt("families")
        .map(Node::as_array)
        .transpose()?
        .unwrap_or(&[])
        .iter()
        .map(parse_family)
        .collect::<Result<Vec<_>, _>>()?;
    let roots = f
        .opt("roots")
        .map(Node::as_array)
        .transpose()?
        .unwrap_or(&[])
        .iter()
        .map(parse_arc)
        .collect::<Result<Vec<_>, _>>()?;
    let it = InfiniteTriangulation {
        points,
        arcs,
        families,
        roots,
    };
    it.validate()
        .map_err(|e| FormatError::InvalidTriangulation(e.to_string()))?;
    Ok(it)
}

/// The finite triangulation described by a file without families.
pub fn finite_triangulation(it: &InfiniteTriangulation) -> Result<FiniteTriangulation, FormatError> {
    if !it.families.is_empty() {
        return Err(FormatError::InvalidTriangulation(
            "expected a finite triangulation (no families)".into(),
        ));
    }
    let window = it
        .window(0)
        .map_err(|e| FormatError::InvalidTriangulation(e.to_string()))?;
    crate::triangulation::validate_triangulation(it.points.clone(), window.arc_set())
        .map_err(|e| FormatError::InvalidTriangulation(e.to_string()))
}

/// Canonical text of a finite triangulation.
pub fn format_triangulation(t: &FiniteTriangulation) -> String {
    let points: Vec<String> = t.points().iter().map(|p| quote(&p.to_string())).collect();
    let arcs: Vec<String> = t
        .arcs()
        .iter()
        .map(|a| {
            let (p, q) = a.endpoints();
            format!("[{}, {}]", quote(&p.to_string()), quote(&q.to_string()))
        })
        .collect();
    let mut out = String::from("{\n");
    write_list(&mut out, "points", &points, false);
    write_list(&mut out, "arcs", &arcs, true);
    out.push_str("}\n");
    out
}

/// Reads a map file against its source and target seeds.
pub fn parse_map(src: &str, source: &Seed, target: &Seed) -> Result<ClusterMap, FormatError> {
    let doc = parse_document(src)?;
    let f = doc.fields(&["assignment"], &["images"])?;
    let mut assignment = BTreeMap::new();
    for item in f.get("assignment").as_array()? {
        let t = item.as_tuple(2)?;
        let x = t[0].as_var()?;
        if !source.contains(&x) {
            return Err(t[0].error("a label of the source seed"));
        }
        let img = match &t[1].kind {
            NodeKind::Int(n) => Image::Int(n.clone()),
            NodeKind::Str(_) => {
                let w = t[1].as_var()?;
                if !target.contains(&w) {
                    return Err(t[1].error("a label of the target seed or an integer"));
                }
                Image::Var(w)
            }
            _ => return Err(t[1].error("a target label or an integer")),
        };
        if assignment.insert(x, img).is_some() {
            return Err(t[0].error("a source label not assigned before"));
        }
    }
    let m = ClusterMap::new(source.clone(), target.clone(), assignment).map_err(map_error)?;
    let mut images = Vec::new();
    for item in f.opt("images").map(Node::as_array).transpose()?.unwrap_or(&[]) {
        let t = item.as_tuple(2)?;
        images.push((parse_laurent(&t[0])?, parse_laurent(&t[1])?));
    }
    m.with_declared_images(images).map_err(map_error)
}

fn map_error(e: MorphismError) -> FormatError {
    FormatError::InvalidMap(e.to_string())
}

/// Canonical text of a map.
pub fn format_map(m: &ClusterMap) -> String {
    let assignment: Vec<String> = m
        .assignment()
        .iter()
        .map(|(x, img)| match img {
            Image::Var(w) => format!("[{}, {}]", quote(x.as_str()), quote(w.as_str())),
            Image::Int(n) => format!("[{}, {n}]", quote(x.as_str())),
        })
        .collect();
    let images: Vec<String> = m
        .declared_images()
        .iter()
        .map(|(v, d)| format!("[{}, {}]", quote(&v.to_string()), quote(&d.to_string())))
        .collect();
    let mut out = String::from("{\n");
    write_list(&mut out, "assignment", &assignment, images.is_empty());
    if !images.is_empty() {
        write_list(&mut out, "images", &images, true);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = r#"{
  "variables": [{"id": "y1", "exchangeable": true}, {"id": "y2", "exchangeable": true}],
  "matrix": [["y1", "y2", 1], ["y2", "y1", -1]]
}"#;

    #[test]
    fn reads_a2() {
        let s = parse_seed(A2).unwrap();
        assert_eq!(
            s,
            Seed::from_arrows(&["y1", "y2"], &["y1", "y2"], &[("y1", "y2", 1)]).unwrap()
        );
    }

    #[test]
    fn diagonal_entry_is_invalid() {
        let src = r#"{"variables": [{"id": "x1"}], "matrix": [["x1", "x1", 1]]}"#;
        assert!(matches!(parse_seed(src), Err(FormatError::InvalidSeed(_))));
    }

    #[test]
    fn undeclared_variable_is_a_parse_error() {
        let src = "{\"variables\": [{\"id\": \"x1\"}],\n \"matrix\": [[\"x1\", \"x9\", 1]]}";
        assert_eq!(
            parse_seed(src),
            Err(FormatError::Parse {
                line: 2,
                column: 20,
                expected: "a declared variable".into()
            })
        );
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_seed("{\"variables\": [}").unwrap_err();
        assert!(
            matches!(
                e,
                FormatError::Parse {
                    line: 1,
                    column: 16,
                    ..
                }
            ),
            "{e:?}"
        );
        assert!(matches!(parse_document("[1.5]"), Err(FormatError::Parse { .. })));
        assert!(matches!(parse_document("null"), Err(FormatError::Parse { .. })));
        assert!(matches!(
            parse_document("{\"a\": 1, \"a\": 2}"),
            Err(FormatError::Parse { .. })
        ));
        assert!(matches!(
            parse_seed("{\"variables\": [], \"matrix\": [], \"extra\": 1}"),
            Err(FormatError::Parse { .. })
        ));
    }

    #[test]
    fn seed_round_trip() {
        let s = parse_seed(A2).unwrap();
        let text = format_seed(&s);
        assert_eq!(parse_seed(&text).unwrap(), s);
        let (t, _) = s.mutate(&VarId::from("y1")).unwrap();
        let text = format_seed(&t);
        assert!(text.contains("\"values\""));
        assert_eq!(parse_seed(&text).unwrap(), t);
        assert_eq!(format_seed(&parse_seed(&text).unwrap()), text);
        assert_eq!(
            format_seed(&Seed::empty()),
            "{\n  \"variables\": [],\n  \"matrix\": []\n}\n"
        );
        assert_eq!(parse_seed(&format_seed(&Seed::empty())).unwrap(), Seed::empty());
    }

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join(format!("clusterkit-format-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("a2.seed");
        let s = parse_seed(A2).unwrap();
        save_seed_file(&s, &path).unwrap();
        assert_eq!(load_seed_file(&path).unwrap(), s);
        assert!(matches!(
            load_seed_file(&dir.join("missing.seed")),
            Err(FormatError::Io { .. })
        ));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn triangulation_file() {
        let src = r#"{
  "points": ["0", "1/4", "1/2", "3/4"],
  "arcs": [["0", "1/2"]]
}"#;
        let it = parse_triangulation(src).unwrap();
        let t = finite_triangulation(&it).unwrap();
        assert_eq!(t.arcs().len(), 5);
        let again = finite_triangulation(&parse_triangulation(&format_triangulation(&t)).unwrap()).unwrap();
        assert_eq!(again, t);
        assert!(parse_triangulation(r#"{"points": ["2/4"]}"#).is_err());
    }

    #[test]
    fn family_file() {
        let src = r#"{
  "points": ["1/2", "1/4", "3/4", "1/6", "5/6"],
  "arcs": [["1/4", "3/4"]],
  "families": [
    {"kind": "left-fountain", "base": "1/4", "limit": "0", "scale": "1/2", "start": 4},
    {"kind": "right-fountain", "base": "3/4", "limit": "1", "scale": "-1/2", "start": 4}
  ]
}"#;
        assert_eq!(
            parse_triangulation(src).unwrap(),
            crate::triangulation::split_fountain()
        );
        let bad = r#"{"points": ["1/2"], "families": [{"kind": "left-fountain", "base": "1/2", "limit": "0", "scale": "-1/8", "start": 1}]}"#;
        assert!(matches!(parse_triangulation(bad), Err(FormatError::Parse { .. })));
    }

    #[test]
    fn map_file() {
        let s = parse_seed(A2).unwrap();
        let m = parse_map(r#"{"assignment": [["y1", "y2"], ["y2", "y1"]]}"#, &s, &s).unwrap();
        assert_eq!(m.image(&VarId::from("y1")), Some(&Image::Var(VarId::from("y2"))));
        assert_eq!(parse_map(&format_map(&m), &s, &s).unwrap(), m);
        assert!(matches!(
            parse_map(r#"{"assignment": [["y1", "q"]]}"#, &s, &s),
            Err(FormatError::Parse { .. })
        ));
        assert!(matches!(
            parse_map(r#"{"assignment": [["y1", 3]]}"#, &s, &s),
            Err(FormatError::InvalidMap(_))
        ));
    }
}
