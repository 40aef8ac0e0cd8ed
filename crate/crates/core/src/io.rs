//! JSON instance files.
//!
//! ```text
//! {
//!   "directed": false,
//!   "n": 4,
//!   "edges": [[0, 1, 1], [1, 2, 1], [2, 3, 1]],
//!   "windows": [[0, 5], [1, 2], [2, 3], [0, 5]],
//!   "rewards": [1, 1, 1, 1],
//!   "s": 0,
//!   "t": 3,
//!   "budget": 5,
//!   "wait_policy": "wait",
//!   "time_scale": 2
//! }
//! ```
//!
//! Numbers are exact: integers, decimals with at most six fractional digits,
//! or strings such as `"7/4"`. With `time_scale = k`, edge lengths, windows
//! and the budget must be integers and are read in units of `1/k`.
//! `directed`, `rewards` (default all ones), `s`, `t`, `wait_policy` and
//! `time_scale` are optional.

use std::fs;
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::instance::{TimeWindow, TwInstance, WaitPolicy};
use crate::metric::{metric_closure, Graph};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// Fractional digits accepted in decimal literals.
pub const MAX_FRACTION_DIGITS: usize = 6;

#[derive(Debug, Clone, Copy)]
enum Step<'a> {
    Key(&'a str),
    Index(usize),
}

/// Line and column (1-based) of the value at `path`, found by scanning the
/// raw text.
fn locate(text: &str, path: &[Step]) -> Option<(usize, usize)> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    for step in path {
        pos = skip_ws(bytes, pos);
        match (step, bytes.get(pos)?) {
            (Step::Key(k), b'{') => {
                pos += 1;
                loop {
                    pos = skip_ws(bytes, pos);
                    if bytes.get(pos)? == &b'}' {
                        return None;
                    }
                    let end = skip_string(bytes, pos)?;
                    let name: String = serde_json::from_str(&text[pos..end]).ok()?;
                    pos = skip_ws(bytes, end);
                    if bytes.get(pos)? != &b':' {
                        return None;
                    }
                    pos = skip_ws(bytes, pos + 1);
                    if name == *k {
                        break;
                    }
                    pos = skip_ws(bytes, skip_value(bytes, pos)?);
                    if bytes.get(pos)? == &b',' {
                        pos += 1;
                    }
                }
            }
            (Step::Index(i), b'[') => {
                pos += 1;
                for _ in 0..*i {
                    pos = skip_ws(bytes, pos);
                    pos = skip_ws(bytes, skip_value(bytes, pos)?);
                    if bytes.get(pos)? != &b',' {
                        return None;
                    }
                    pos += 1;
                }
                pos = skip_ws(bytes, pos);
            }
            _ => return None,
        }
    }
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
    Some((line, col))
}

fn skip_ws(b: &[u8], mut pos: usize) -> usize {
    while pos < b.len() && b[pos].is_ascii_whitespace() {
        pos += 1;
    }
    pos
}

fn skip_string(b: &[u8], pos: usize) -> Option<usize> {
    if b.get(pos)? != &b'"' {
        return None;
    }
    let mut i = pos + 1;
    while i < b.len() {
        match b[i] {
            b'\\' => i += 2,
            b'"' => return Some(i + 1),
            _ => i += 1,
        }
    }
    None
}

fn skip_value(b: &[u8], pos: usize) -> Option<usize> {
    match b.get(pos)? {
        b'"' => skip_string(b, pos),
        b'{' | b'[' => {
            let mut depth = 0usize;
            let mut i = pos;
            while i < b.len() {
                match b[i] {
                    b'"' => {
                        i = skip_string(b, i)?;
                        continue;
                    }
                    b'{' | b'[' => depth += 1,
                    b'}' | b']' => {
                        depth -= 1;
                        if depth == 0 {
                            return Some(i + 1);
                        }
                    }
                    _ => {}
                }
                i += 1;
            }
            None
        }
        _ => {
            let mut i = pos;
            while i < b.len() && !matches!(b[i], b',' | b']' | b'}') && !b[i].is_ascii_whitespace() {
                i += 1;
            }
            Some(i)
        }
    }
}

fn render_path(path: &[Step]) -> String {
    let mut out = String::new();
    for step in path {
        match step {
            Step::Key(k) => {
                if !out.is_empty() {
                    out.push('.');
                }
                out.push_str(k);
            }
            Step::Index(i) => out.push_str(&format!("[{i}]")),
        }
    }
    out
}

struct Reader<'a> {
    text: &'a str,
    root: &'a Map<String, Value>,
    time_scale: Option<i128>,
}

impl<'a> Reader<'a> {
    fn error(&self, path: &[Step], message: impl Into<String>) -> Error {
        // point at the deepest part of the path that exists
        let found = (0..=path.len()).rev().find_map(|k| locate(self.text, &path[..k]));
        let location = match found {
            Some((line, col)) => format!("line {line}, column {col} ({})", render_path(path)),
            None => render_path(path),
        };
        Error::Parse { location, message: message.into() }
    }

    fn get(&self, path: &[Step]) -> Option<&'a Value> {
        let mut cur: &Value = self.root.get(match path[0] {
            Step::Key(k) => k,
            Step::Index(_) => return None,
        })?;
        for step in &path[1..] {
            cur = match step {
                Step::Key(k) => cur.get(k)?,
                Step::Index(i) => cur.get(i)?,
            };
        }
        Some(cur)
    }

    fn required(&self, path: &[Step]) -> Result<&'a Value> {
        self.get(path).ok_or_else(|| self.error(path, "missing value"))
    }

    fn array(&self, path: &[Step]) -> Result<&'a Vec<Value>> {
        self.required(path)?.as_array().ok_or_else(|| self.error(path, "expected a list"))
    }

    fn index(&self, path: &[Step]) -> Result<usize> {
        let v = self.required(path)?;
        v.as_u64()
            .and_then(|k| usize::try_from(k).ok())
            .ok_or_else(|| self.error(path, "expected a nonnegative integer"))
    }

    fn rational(&self, path: &[Step]) -> Result<Rational> {
        let v = self.required(path)?;
        let text = match v {
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            _ => return Err(self.error(path, "expected a number")),
        };
        parse_rational(&text, MAX_FRACTION_DIGITS).map_err(|e| self.error(path, e.to_string()))
    }

    fn time(&self, path: &[Step]) -> Result<Rational> {
        let r = self.rational(path)?;
        match self.time_scale {
            None => Ok(r),
            Some(k) if r.is_integer() => Ok(r / int(k)),
            Some(_) => Err(self.error(path, "times must be integers when time_scale is given")),
        }
    }
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<TwInstance> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let Some(root) = value.as_object() else {
        return Err(Error::Parse { location: "line 1, column 1".into(), message: "expected an object".into() });
    };
    let mut r = Reader { text, root, time_scale: None };
    if r.get(&[Step::Key("time_scale")]).is_some() {
        let k = r.index(&[Step::Key("time_scale")])?;
        if k == 0 {
            return Err(r.error(&[Step::Key("time_scale")], "time_scale must be positive"));
        }
        r.time_scale = Some(k as i128);
    }
    let directed = match r.get(&[Step::Key("directed")]) {
        None => false,
        Some(v) => v.as_bool().ok_or_else(|| r.error(&[Step::Key("directed")], "expected true or false"))?,
    };
    let n = r.index(&[Step::Key("n")])?;

    let mut g = Graph::new(directed, n);
    for i in 0..r.array(&[Step::Key("edges")])?.len() {
        let at = |j: usize| [Step::Key("edges"), Step::Index(i), Step::Index(j)];
        if r.array(&[Step::Key("edges"), Step::Index(i)])?.len() != 3 {
            return Err(r.error(&[Step::Key("edges"), Step::Index(i)], "an edge is [u, v, length]"));
        }
        let (u, v) = (r.index(&at(0))?, r.index(&at(1))?);
        for (j, x) in [(0, u), (1, v)] {
            if x >= n {
                return Err(r.error(&at(j), format!("vertex {x} outside 0..{n}")));
            }
        }
        let w = r.time(&at(2))?;
        if w < Rational::from_integer(0) {
            return Err(r.error(&at(2), "edge lengths must be nonnegative"));
        }
        g.add_edge(u, v, w);
    }
    let metric = metric_closure(&g).map_err(|e| r.error(&[Step::Key("edges")], e.to_string()))?;

    let windows_len = r.array(&[Step::Key("windows")])?.len();
    if windows_len != n {
        return Err(r.error(&[Step::Key("windows")], format!("{windows_len} windows for {n} vertices")));
    }
    let mut windows = Vec::with_capacity(n);
    for i in 0..n {
        let at = |j: usize| [Step::Key("windows"), Step::Index(i), Step::Index(j)];
        if r.array(&[Step::Key("windows"), Step::Index(i)])?.len() != 2 {
            return Err(r.error(&[Step::Key("windows"), Step::Index(i)], "a window is [release, deadline]"));
        }
        let (rel, dl) = (r.time(&at(0))?, r.time(&at(1))?);
        let w = TimeWindow::new(rel, dl).map_err(|e| r.error(&[Step::Key("windows"), Step::Index(i)], e.to_string()))?;
        windows.push(w);
    }

    let rewards = match r.get(&[Step::Key("rewards")]) {
        None => vec![int(1); n],
        Some(_) => {
            let len = r.array(&[Step::Key("rewards")])?.len();
            if len != n {
                return Err(r.error(&[Step::Key("rewards")], format!("{len} rewards for {n} vertices")));
            }
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let path = [Step::Key("rewards"), Step::Index(i)];
                let v = r.rational(&path)?;
                if v < Rational::from_integer(0) {
                    return Err(r.error(&path, "rewards must be nonnegative"));
                }
                out.push(v);
            }
            out
        }
    };
    let mut anchors = [None, None];
    for (slot, key) in ["s", "t"].into_iter().enumerate() {
        if r.get(&[Step::Key(key)]).is_some() {
            let v = r.index(&[Step::Key(key)])?;
            if v >= n {
                return Err(r.error(&[Step::Key(key)], format!("vertex {v} outside 0..{n}")));
            }
            anchors[slot] = Some(v);
        }
    }
    let budget = r.time(&[Step::Key("budget")])?;
    if budget < Rational::from_integer(0) {
        return Err(r.error(&[Step::Key("budget")], "budget must be nonnegative"));
    }
    let wait = match r.get(&[Step::Key("wait_policy")]) {
        None => WaitPolicy::Wait,
        Some(v) => match v.as_str() {
            Some("wait") => WaitPolicy::Wait,
            Some("no-wait") => WaitPolicy::NoWait,
            _ => return Err(r.error(&[Step::Key("wait_policy")], "expected \"wait\" or \"no-wait\"")),
        },
    };
    TwInstance::new(metric, windows, rewards, anchors[0], anchors[1], budget, wait)
        .map_err(|e| Error::Parse { location: "instance".into(), message: e.to_string() })
}

fn number(x: &Rational) -> Value {
    if x.is_integer() {
        Value::Number(x.numer().to_string().parse::<Number>().expect("integers are valid numbers"))
    } else {
        Value::String(format_rational(x))
    }
}

/// Writes the canonical document: every finite metric distance becomes an
/// edge, integers are numbers and other rationals strings `"p/q"`.
pub fn serialize_instance(x: &TwInstance) -> String {
    let mut root = Map::new();
    root.insert("directed".into(), Value::Bool(x.metric.directed()));
    root.insert("n".into(), Value::from(x.n()));
    let edges: Vec<Value> = x
        .metric
        .to_graph()
        .edges
        .iter()
        .map(|e| Value::Array(vec![Value::from(e.u), Value::from(e.v), number(&e.w)]))
        .collect();
    root.insert("edges".into(), Value::Array(edges));
    let windows: Vec<Value> =
        x.windows.iter().map(|w| Value::Array(vec![number(&w.release), number(&w.deadline)])).collect();
    root.insert("windows".into(), Value::Array(windows));
    root.insert("rewards".into(), Value::Array(x.rewards.iter().map(number).collect()));
    if let Some(s) = x.start {
        root.insert("s".into(), Value::from(s));
    }
    if let Some(t) = x.end {
        root.insert("t".into(), Value::from(t));
    }
    root.insert("budget".into(), number(&x.budget));
    let policy = match x.wait {
        WaitPolicy::Wait => "wait",
        WaitPolicy::NoWait => "no-wait",
    };
    root.insert("wait_policy".into(), Value::String(policy.into()));
    compact_rows(&serde_json::to_string_pretty(&Value::Object(root)).expect("values serialize"))
}

/// Puts every innermost list (edges, windows) on one line.
fn compact_rows(pretty: &str) -> String {
    let mut out = String::with_capacity(pretty.len());
    let mut row: Option<String> = None;
    for line in pretty.lines() {
        let t = line.trim();
        match &mut row {
            Some(buf) => {
                if t == "]" || t == "]," {
                    buf.push_str(t);
                    out.push_str(buf);
                    out.push('\n');
                    row = None;
                } else if t.starts_with('[') || t.starts_with('{') {
                    // not innermost after all: flush unchanged
                    out.push_str(buf);
                    out.push('\n');
                    row = None;
                    out.push_str(line);
                    out.push('\n');
                } else {
                    if !buf.ends_with('[') {
                        buf.push(' ');
                    }
                    buf.push_str(t);
                }
            }
            None => {
                if t == "[" || t == "[," {
                    let indent = &line[..line.len() - line.trim_start().len()];
                    row = Some(format!("{indent}["));
                } else {
                    out.push_str(line);
                    out.push('\n');
                }
            }
        }
    }
    out
}

pub fn read_instance(path: &Path) -> Result<TwInstance> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| match e {
        Error::Parse { location, message } => Error::Parse { location: format!("{}: {location}", path.display()), message },
        other => other,
    })
}

pub fn write_instance(path: &Path, x: &TwInstance) -> Result<()> {
    fs::write(path, serialize_instance(x)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
