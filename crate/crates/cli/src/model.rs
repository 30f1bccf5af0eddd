//! Input documents: polynomials, curves, abstract graphs, functions and
//! points in a small JSON schema with rationals written as strings.
//!
//! A document is a JSON object. A key naming a kind (`poly`, `curve`,
//! `abstract`, `func`, `point`) holds one item of that kind under that
//! name; any other key is a name whose value is `{"<kind>": {...}}`.
//!
//! ```json
//! {"poly": {"dim": 2, "terms": [{"e": [0, 0], "c": "0"}, {"e": [1, 0], "c": "5/3"}]}}
//! {"C": {"curve": {"dim": 2, "vertices": [["0", "0"]],
//!                  "edges": [], "legs": [{"at": 0, "dir": [-1, 0], "weight": 1}]}}}
//! {"G": {"abstract": {"vertices": 2, "edges": [{"from": 0, "to": 1, "length": "3/2"}], "legs": [0]}},
//!  "f": {"func": {"edges": [[["0", "0"], ["3/2", "3/2"]]], "legs": [{"points": [["0", "0"]], "tail": 1}]}}}
//! ```

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;
use tropmod::pl::{LegFunction, MetricEdge};
use tropmod::scalar::TropicalScalar;
use tropmod::{parse_rational, EmbeddedCurve, MetricGraph, PlFunction, Point, Rational, TropicalPolynomial};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{path}: line {line}, column {column}: {message}")]
    Syntax { path: String, line: usize, column: usize, message: String },
    #[error("{path}: at {at}: {message}")]
    Schema { path: String, at: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Lookup(String),
}

/// Breakpoint data of a function, interpreted on a graph supplied by the
/// command (an abstract graph or the metric graph of a curve).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncData {
    pub edges: Vec<Vec<(Rational, Rational)>>,
    pub legs: Vec<LegFunction>,
}

impl FuncData {
    pub fn on(&self, graph: &MetricGraph) -> tropmod::Result<PlFunction> {
        PlFunction::new(graph, self.edges.clone(), self.legs.clone())
    }

    pub fn of(h: &PlFunction, graph: &MetricGraph) -> FuncData {
        FuncData {
            edges: (0..graph.edges().len()).map(|e| h.edge_points(e).to_vec()).collect(),
            legs: (0..graph.legs().len()).map(|l| h.leg_function(l).clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Poly(TropicalPolynomial),
    Curve(EmbeddedCurve),
    Abstract(MetricGraph),
    Func(FuncData),
    Point(Point),
}

const KINDS: [&str; 5] = ["poly", "curve", "abstract", "func", "point"];

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Poly(_) => "poly",
            Item::Curve(_) => "curve",
            Item::Abstract(_) => "abstract",
            Item::Func(_) => "func",
            Item::Point(_) => "point",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Document {
    pub items: BTreeMap<String, Item>,
}

struct Ctx<'a> {
    path: &'a str,
}

impl Ctx<'_> {
    fn err(&self, at: &str, message: impl Into<String>) -> ParseError {
        ParseError::Schema { path: self.path.to_string(), at: at.to_string(), message: message.into() }
    }

    fn rational(&self, v: &Value, at: &str) -> Result<Rational, ParseError> {
        match v {
            Value::String(s) => parse_rational(s).map_err(|e| self.err(at, e)),
            Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap() as i128)),
            _ => Err(self.err(at, "expected a rational number as a string")),
        }
    }

    fn scalar(&self, v: &Value, at: &str) -> Result<TropicalScalar, ParseError> {
        match v {
            Value::String(s) if s.trim() == "-inf" => Ok(TropicalScalar::NegInfinity),
            _ => Ok(TropicalScalar::Finite(self.rational(v, at)?)),
        }
    }

    fn int(&self, v: &Value, at: &str) -> Result<i64, ParseError> {
        v.as_i64().ok_or_else(|| self.err(at, "expected an integer"))
    }

    fn index(&self, v: &Value, at: &str) -> Result<usize, ParseError> {
        v.as_u64().map(|x| x as usize).ok_or_else(|| self.err(at, "expected a nonnegative integer"))
    }

    fn array<'v>(&self, v: &'v Value, at: &str) -> Result<&'v Vec<Value>, ParseError> {
        v.as_array().ok_or_else(|| self.err(at, "expected an array"))
    }

    fn field<'v>(&self, v: &'v Value, key: &str, at: &str) -> Result<&'v Value, ParseError> {
        v.get(key).ok_or_else(|| self.err(at, format!("missing field {key:?}")))
    }

    fn point(&self, v: &Value, at: &str) -> Result<Point, ParseError> {
        self.array(v, at)?.iter().enumerate().map(|(i, x)| self.rational(x, &format!("{at}[{i}]"))).collect()
    }

    fn pairs(&self, v: &Value, at: &str) -> Result<Vec<(Rational, Rational)>, ParseError> {
        self.array(v, at)?
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let at = format!("{at}[{i}]");
                let p = self.point(p, &at)?;
                match p[..] {
                    [s, v] => Ok((s, v)),
                    _ => Err(self.err(&at, "expected [offset, value]")),
                }
            })
            .collect()
    }

    fn poly(&self, v: &Value, at: &str) -> Result<TropicalPolynomial, ParseError> {
        let dim = self.index(self.field(v, "dim", at)?, &format!("{at}.dim"))?;
        let terms = self.array(self.field(v, "terms", at)?, &format!("{at}.terms"))?;
        let mut out = Vec::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            let at = format!("{at}.terms[{i}]");
            let e = self
                .array(self.field(t, "e", &at)?, &format!("{at}.e"))?
                .iter()
                .map(|x| self.int(x, &format!("{at}.e")))
                .collect::<Result<Vec<i64>, _>>()?;
            let c = self.scalar(self.field(t, "c", &at)?, &format!("{at}.c"))?;
            out.push((e, c));
        }
        TropicalPolynomial::new(dim, out).map_err(|e| self.err(at, e.to_string()))
    }

    fn curve(&self, v: &Value, at: &str) -> Result<EmbeddedCurve, ParseError> {
        let dim = self.index(self.field(v, "dim", at)?, &format!("{at}.dim"))?;
        let vertices = self
            .array(self.field(v, "vertices", at)?, &format!("{at}.vertices"))?
            .iter()
            .enumerate()
            .map(|(i, p)| self.point(p, &format!("{at}.vertices[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let weight = |x: &Value, at: &str| match x.get("weight") {
            None => Ok(1u64),
            Some(w) => w.as_u64().ok_or_else(|| self.err(at, "weight must be a positive integer")),
        };
        let mut edges = Vec::new();
        for (i, e) in self.array(self.field(v, "edges", at)?, &format!("{at}.edges"))?.iter().enumerate() {
            let at = format!("{at}.edges[{i}]");
            edges.push((
                self.index(self.field(e, "from", &at)?, &at)?,
                self.index(self.field(e, "to", &at)?, &at)?,
                weight(e, &at)?,
            ));
        }
        let mut legs = Vec::new();
        for (i, l) in self.array(self.field(v, "legs", at)?, &format!("{at}.legs"))?.iter().enumerate() {
            let at = format!("{at}.legs[{i}]");
            let dir = self
                .array(self.field(l, "dir", &at)?, &at)?
                .iter()
                .map(|x| self.int(x, &format!("{at}.dir")))
                .collect::<Result<Vec<i64>, _>>()?;
            legs.push((self.index(self.field(l, "at", &at)?, &at)?, dir, weight(l, &at)?));
        }
        EmbeddedCurve::new(dim, vertices, edges, legs).map_err(|e| self.err(at, e.to_string()))
    }

    fn graph(&self, v: &Value, at: &str) -> Result<MetricGraph, ParseError> {
        let n = self.index(self.field(v, "vertices", at)?, &format!("{at}.vertices"))?;
        let mut edges = Vec::new();
        for (i, e) in self.array(self.field(v, "edges", at)?, &format!("{at}.edges"))?.iter().enumerate() {
            let at = format!("{at}.edges[{i}]");
            edges.push(MetricEdge {
                tail: self.index(self.field(e, "from", &at)?, &at)?,
                head: self.index(self.field(e, "to", &at)?, &at)?,
                length: self.rational(self.field(e, "length", &at)?, &format!("{at}.length"))?,
            });
        }
        let legs = self
            .array(self.field(v, "legs", at)?, &format!("{at}.legs"))?
            .iter()
            .map(|x| self.index(x, &format!("{at}.legs")))
            .collect::<Result<Vec<_>, _>>()?;
        MetricGraph::new(n, edges, legs).map_err(|e| self.err(at, e.to_string()))
    }

    fn func(&self, v: &Value, at: &str) -> Result<FuncData, ParseError> {
        let edges = match v.get("edges") {
            None => Vec::new(),
            Some(e) => self
                .array(e, &format!("{at}.edges"))?
                .iter()
                .enumerate()
                .map(|(i, p)| self.pairs(p, &format!("{at}.edges[{i}]")))
                .collect::<Result<Vec<_>, _>>()?,
        };
        let mut legs = Vec::new();
        if let Some(ls) = v.get("legs") {
            for (i, l) in self.array(ls, &format!("{at}.legs"))?.iter().enumerate() {
                let at = format!("{at}.legs[{i}]");
                let points = self.pairs(self.field(l, "points", &at)?, &format!("{at}.points"))?;
                let tail_slope = self.int(self.field(l, "tail", &at)?, &format!("{at}.tail"))?;
                legs.push(LegFunction { points, tail_slope });
            }
        }
        Ok(FuncData { edges, legs })
    }

    fn item(&self, kind: &str, v: &Value, at: &str) -> Result<Item, ParseError> {
        Ok(match kind {
            "poly" => Item::Poly(self.poly(v, at)?),
            "curve" => Item::Curve(self.curve(v, at)?),
            "abstract" => Item::Abstract(self.graph(v, at)?),
            "func" => Item::Func(self.func(v, at)?),
            "point" => Item::Point(self.point(self.field(v, "coords", at)?, &format!("{at}.coords"))?),
            other => return Err(self.err(at, format!("unknown kind {other:?}"))),
        })
    }
}

/// Parses a document; `path` only labels error messages.
pub fn parse_document(text: &str, path: &str) -> Result<Document, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: {
            let m = e.to_string();
            m.split(" at line ").next().unwrap_or(&m).to_string()
        },
    })?;
    let ctx = Ctx { path };
    let obj = value.as_object().ok_or_else(|| ctx.err("$", "a document is a JSON object"))?;
    let mut items = BTreeMap::new();
    for (key, v) in obj {
        let item = if KINDS.contains(&key.as_str()) {
            ctx.item(key, v, key)?
        } else {
            let inner = v
                .as_object()
                .filter(|o| o.len() == 1)
                .ok_or_else(|| ctx.err(key, "expected an object with a single kind key"))?;
            let (kind, body) = inner.iter().next().unwrap();
            ctx.item(kind, body, &format!("{key}.{kind}"))?
        };
        items.insert(key.clone(), item);
    }
    Ok(Document { items })
}

pub fn read_document(path: &str) -> Result<Document, ParseError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| ParseError::Io { path: path.to_string(), message: e.to_string() })?;
    parse_document(&text, path)
}

fn q(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn point_json(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(q).collect())
}

fn pairs_json(p: &[(Rational, Rational)]) -> Value {
    Value::Array(p.iter().map(|(s, v)| json!([q(s), q(v)])).collect())
}

pub fn item_json(item: &Item) -> Value {
    match item {
        Item::Poly(f) => json!({
            "dim": f.dim(),
            "terms": f.terms().map(|(e, c)| json!({"e": e, "c": q(c)})).collect::<Vec<_>>(),
        }),
        Item::Curve(c) => json!({
            "dim": c.dim(),
            "vertices": c.vertices().iter().map(|p| point_json(p)).collect::<Vec<_>>(),
            "edges": c.edges().iter().map(|e| json!({"from": e.tail, "to": e.head, "weight": e.weight})).collect::<Vec<_>>(),
            "legs": c.legs().iter().map(|l| json!({"at": l.vertex, "dir": l.direction.coords(), "weight": l.weight})).collect::<Vec<_>>(),
        }),
        Item::Abstract(g) => json!({
            "vertices": g.vertex_count(),
            "edges": g.edges().iter().map(|e| json!({"from": e.tail, "to": e.head, "length": q(&e.length)})).collect::<Vec<_>>(),
            "legs": g.legs(),
        }),
        Item::Func(f) => json!({
            "edges": f.edges.iter().map(|e| pairs_json(e)).collect::<Vec<_>>(),
            "legs": f.legs.iter().map(|l| json!({"points": pairs_json(&l.points), "tail": l.tail_slope})).collect::<Vec<_>>(),
        }),
        Item::Point(p) => json!({"coords": point_json(p)}),
    }
}

/// Serializes with stable key order; parsing the result gives back an equal
/// document.
pub fn document_json(doc: &Document) -> Value {
    let mut out = Map::new();
    for (name, item) in &doc.items {
        let body = item_json(item);
        if name == item.kind() {
            out.insert(name.clone(), body);
        } else {
            out.insert(name.clone(), json!({ item.kind(): body }));
        }
    }
    Value::Object(out)
}

impl Document {
    fn pick(&self, kind: &str, name: Option<&str>) -> Result<(&String, &Item), ParseError> {
        if let Some(n) = name {
            return match self.items.get_key_value(n) {
                Some((k, it)) if it.kind() == kind => Ok((k, it)),
                Some((_, it)) => Err(ParseError::Lookup(format!("{n:?} is a {}, not a {kind}", it.kind()))),
                None => Err(ParseError::Lookup(format!("no item named {n:?}"))),
            };
        }
        let found: Vec<_> = self.items.iter().filter(|(_, it)| it.kind() == kind).collect();
        match found[..] {
            [one] => Ok(one),
            [] => Err(ParseError::Lookup(format!("no {kind} in document"))),
            _ => Err(ParseError::Lookup(format!("several {kind} items; name one with FILE#NAME"))),
        }
    }

    pub fn poly(&self, name: Option<&str>) -> Result<&TropicalPolynomial, ParseError> {
        match self.pick("poly", name)?.1 {
            Item::Poly(f) => Ok(f),
            _ => unreachable!(),
        }
    }

    pub fn curve(&self, name: Option<&str>) -> Result<&EmbeddedCurve, ParseError> {
        match self.pick("curve", name)?.1 {
            Item::Curve(c) => Ok(c),
            _ => unreachable!(),
        }
    }

    pub fn graph(&self, name: Option<&str>) -> Result<&MetricGraph, ParseError> {
        match self.pick("abstract", name)?.1 {
            Item::Abstract(g) => Ok(g),
            _ => unreachable!(),
        }
    }

    pub fn func(&self, name: Option<&str>) -> Result<&FuncData, ParseError> {
        match self.pick("func", name)?.1 {
            Item::Func(f) => Ok(f),
            _ => unreachable!(),
        }
    }

    pub fn point(&self, name: Option<&str>) -> Result<&Point, ParseError> {
        match self.pick("point", name)?.1 {
            Item::Point(p) => Ok(p),
            _ => unreachable!(),
        }
    }

    pub fn has(&self, kind: &str) -> bool {
        self.items.values().any(|i| i.kind() == kind)
    }
}

/// `FILE` or `FILE#NAME`.
pub fn split_ref(arg: &str) -> (&str, Option<&str>) {
    match arg.rsplit_once('#') {
        Some((file, name)) if !name.is_empty() => (file, Some(name)),
        _ => (arg, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropmod::scalar::{int, q as rat};

    #[test]
    fn line_polynomial() {
        let d = parse_document(
            r#"{"poly":{"dim":2,"terms":[{"e":[0,0],"c":"0"},{"e":[1,0],"c":"0"},{"e":[0,1],"c":"0"}]}}"#,
            "t",
        )
        .unwrap();
        assert_eq!(d.poly(None).unwrap(), &tropmod::fixtures::tropical_line());
    }

    #[test]
    fn exact_coefficients() {
        let d =
            parse_document(r#"{"poly":{"dim":1,"terms":[{"e":[2],"c":"5/3"},{"e":[0],"c":"-1.3"}]}}"#, "t").unwrap();
        let f = d.poly(None).unwrap();
        assert_eq!(f.coefficient(&[2]), TropicalScalar::Finite(rat(5, 3)));
        assert_eq!(f.coefficient(&[0]), TropicalScalar::Finite(rat(-13, 10)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_document("{\n  \"poly\": {\"dim\": 2,, }\n}", "bad.json") {
            Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 21)),
            other => panic!("{other:?}"),
        }
        let dup = r#"{"poly":{"dim":1,"terms":[{"e":[1],"c":"0"},{"e":[1],"c":"2"}]}}"#;
        assert!(matches!(parse_document(dup, "t"), Err(ParseError::Schema { .. })));
        let junk = r#"{"poly":{"dim":1,"terms":[{"e":[1],"c":"x"}]}}"#;
        match parse_document(junk, "t") {
            Err(ParseError::Schema { at, .. }) => assert_eq!(at, "poly.terms[0].c"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn named_items_round_trip() {
        let text = r#"{
            "G": {"abstract": {"vertices": 1, "edges": [], "legs": [0, 0]}},
            "f": {"func": {"legs": [{"points": [["0", "0"]], "tail": 0}, {"points": [["0", "0"]], "tail": 1}]}},
            "point": {"coords": ["1", "-2/3"]},
            "C": {"curve": {"dim": 2, "vertices": [["0", "0"], ["1", "0"]], "edges": [{"from": 0, "to": 1, "weight": 2}],
                   "legs": [{"at": 0, "dir": [-1, 0], "weight": 2}, {"at": 1, "dir": [1, 0], "weight": 2}]}}
        }"#;
        let d = parse_document(text, "t").unwrap();
        assert_eq!(d.point(None).unwrap(), &vec![int(1), rat(-2, 3)]);
        let again = parse_document(&document_json(&d).to_string(), "t").unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn references() {
        assert_eq!(split_ref("a.json#f"), ("a.json", Some("f")));
        assert_eq!(split_ref("a.json"), ("a.json", None));
    }
}
