//! The line-oriented `.km` model format.
//!
//! ```text
//! kind: nelsonian free
//! worlds: w0 w1
//! rel: (w0,w1)
//! objects: h0 h1
//! intension d = w0:h0 w1:h0
//! domain w0: d
//! exists w0: d
//! const a = d
//! pos P w0: (h0)
//! neg P w1: (h0)
//! neg= w1: (h0,h0)
//! ```
//!
//! `free` after the kind marks a negative free structure. Missing `domain`
//! lines mean every intension; missing `exists` lines copy the domain.
//! A predicate with no tuples anywhere is declared as `pos Q/1 w0:`. In
//! intuitionistic models the primed identity is written `pos =' w: ...`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::syntax::PRIMED_IDENTITY;

use super::model::{bits, Extension, KripkeModel, Kind, Predicate, MAX_INTENSIONS};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {msg}")]
pub struct ModelParseError {
    pub line: usize,
    pub msg: String,
}

struct Reader {
    m: KripkeModel,
    seen_domain: Vec<bool>,
    seen_exists: Vec<bool>,
    kind_seen: bool,
}

pub fn parse_model(text: &str) -> Result<KripkeModel, ModelParseError> {
    let mut r = Reader {
        m: KripkeModel::skeleton(Kind::Intuitionistic, false, 0, 0),
        seen_domain: Vec::new(),
        seen_exists: Vec::new(),
        kind_seen: false,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        r.line(line).map_err(|msg| ModelParseError { line: i + 1, msg })?;
    }
    let end = text.lines().count().max(1);
    if !r.kind_seen {
        return Err(ModelParseError {
            line: end,
            msg: "missing `kind:` line".into(),
        });
    }
    let mut m = r.m;
    let all = if m.intensions.len() >= 64 {
        u64::MAX
    } else {
        (1u64 << m.intensions.len()) - 1
    };
    for w in 0..m.worlds.len() {
        if !r.seen_domain[w] {
            m.domain[w] = all;
        }
        if !r.seen_exists[w] {
            m.exists[w] = m.domain[w];
        }
    }
    m.close_relation();
    Ok(m)
}

fn words(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

/// `(a,b) (c,d)` into name lists.
fn tuples(s: &str) -> Result<Vec<Vec<&str>>, String> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let close = body.find(')').ok_or("unclosed tuple")?;
        let items: Vec<&str> = body[..close].split(',').map(str::trim).collect();
        if items.iter().any(|x| x.is_empty()) {
            return Err(format!("empty component in `({})`", &body[..close]));
        }
        out.push(items);
        rest = body[close + 1..].trim_start();
    }
    Ok(out)
}

impl Reader {
    fn world(&self, name: &str) -> Result<usize, String> {
        self.m.world(name).ok_or_else(|| format!("unknown world {name}"))
    }

    fn object(&self, name: &str) -> Result<usize, String> {
        self.m.object(name).ok_or_else(|| format!("unknown object {name}"))
    }

    fn intension(&self, name: &str) -> Result<usize, String> {
        self.m.intension(name).ok_or_else(|| format!("unknown intension {name}"))
    }

    fn line(&mut self, line: &str) -> Result<(), String> {
        // These two have no `key:` shape.
        if let Some(decl) = line.strip_prefix("intension ") {
            return self.intension_line(decl);
        }
        if let Some(decl) = line.strip_prefix("const ") {
            return self.const_line(decl);
        }
        let (head, rest) = line.split_once(':').ok_or("expected `key: ...`")?;
        let head = head.trim();
        let rest = rest.trim();
        let mut hw = head.split_whitespace();
        let key = hw.next().ok_or("empty key")?;
        let args: Vec<&str> = hw.collect();
        match (key, args.as_slice()) {
            ("kind", []) => self.kind_line(rest),
            ("worlds", []) => {
                if !self.m.worlds.is_empty() {
                    return Err("worlds declared twice".into());
                }
                let ws = words(rest);
                let n = ws.len();
                let mut m = KripkeModel::skeleton(self.m.kind, self.m.free, n, 0);
                m.worlds = ws.iter().map(|s| s.to_string()).collect();
                m.objects = std::mem::take(&mut self.m.objects);
                self.m = m;
                self.seen_domain = vec![false; n];
                self.seen_exists = vec![false; n];
                Ok(())
            }
            ("rel", []) => {
                for t in tuples(rest)? {
                    if t.len() != 2 {
                        return Err("accessibility pairs have two worlds".into());
                    }
                    let (w, v) = (self.world(t[0])?, self.world(t[1])?);
                    self.m.rel[w][v] = true;
                }
                Ok(())
            }
            ("objects", []) => {
                self.m.objects = words(rest).iter().map(|s| s.to_string()).collect();
                Ok(())
            }
            ("domain", [w]) | ("exists", [w]) => {
                let w = self.world(w)?;
                let mut set = 0u64;
                for d in words(rest) {
                    set |= 1 << self.intension(d)?;
                }
                if key == "domain" {
                    self.m.domain[w] = set;
                    self.seen_domain[w] = true;
                } else {
                    self.m.exists[w] = set;
                    self.seen_exists[w] = true;
                }
                Ok(())
            }
            ("pos", [p, w]) | ("neg", [p, w]) => self.extension_line(key == "pos", p, w, rest),
            ("neg=", [w]) => {
                let w = self.world(w)?;
                let ts = self.object_tuples(rest, 2)?;
                self.m.neg_eq[w].extend(ts);
                Ok(())
            }
            _ => Err(format!("unrecognised line `{line}`")),
        }
    }

    fn kind_line(&mut self, rest: &str) -> Result<(), String> {
        let ws = words(rest);
        let kind = match ws.first().copied() {
            Some("intuitionistic") => Kind::Intuitionistic,
            Some("nelsonian") => Kind::Nelsonian,
            _ => return Err("kind is `intuitionistic` or `nelsonian`".into()),
        };
        let free = match &ws[1..] {
            [] => false,
            ["free"] => true,
            _ => return Err("only `free` may follow the kind".into()),
        };
        self.m.kind = kind;
        self.m.free = free;
        self.kind_seen = true;
        Ok(())
    }

    fn intension_line(&mut self, decl: &str) -> Result<(), String> {
        let (name, vals) = decl.split_once('=').ok_or("expected `intension d = w:h ...`")?;
        let name = name.trim();
        if name.is_empty() || self.m.intension(name).is_some() {
            return Err(format!("bad or repeated intension name `{name}`"));
        }
        if self.m.intensions.len() == MAX_INTENSIONS {
            return Err(format!("at most {MAX_INTENSIONS} intensions"));
        }
        let mut values = vec![None; self.m.worlds.len()];
        for item in words(vals) {
            let (w, h) = item.split_once(':').ok_or_else(|| format!("expected `w:h`, got `{item}`"))?;
            values[self.world(w)?] = Some(self.object(h)?);
        }
        let values: Option<Vec<usize>> = values.into_iter().collect();
        let values = values.ok_or_else(|| format!("intension {name} needs a value at every world"))?;
        self.m.intensions.push(super::model::Intension {
            name: name.to_string(),
            values,
        });
        Ok(())
    }

    fn const_line(&mut self, decl: &str) -> Result<(), String> {
        let (c, d) = decl.split_once('=').ok_or("expected `const a = d`")?;
        let (c, d) = (c.trim(), d.trim());
        if c.is_empty() || self.m.constant(c).is_some() {
            return Err(format!("bad or repeated constant `{c}`"));
        }
        let d = self.intension(d)?;
        self.m.constants.push((c.to_string(), d));
        Ok(())
    }

    fn object_tuples(&self, s: &str, arity: usize) -> Result<Vec<Vec<usize>>, String> {
        tuples(s)?
            .into_iter()
            .map(|t| {
                if t.len() != arity {
                    return Err(format!("expected {arity}-tuples, found ({})", t.join(",")));
                }
                t.iter().map(|h| self.object(h)).collect()
            })
            .collect()
    }

    fn extension_line(&mut self, pos: bool, p: &str, w: &str, rest: &str) -> Result<(), String> {
        let w = self.world(w)?;
        let (name, declared) = match p.split_once('/') {
            Some((n, a)) => (n, Some(a.parse::<usize>().map_err(|_| format!("bad arity in {p}"))?)),
            None => (p, None),
        };
        let raw = tuples(rest)?;
        let arity = match (declared, raw.first(), self.m.predicate(name)) {
            (Some(a), _, _) => a,
            (None, Some(t), _) => t.len(),
            (None, None, Some(q)) => q.arity,
            (None, None, None) => return Err(format!("arity of {name} unknown; write {name}/n")),
        };
        let ts = self.object_tuples(rest, arity)?;
        if name == PRIMED_IDENTITY {
            if !pos || arity != 2 {
                return Err("=' is binary and only has a positive extension".into());
            }
            self.m.neg_eq[w].extend(ts);
            return Ok(());
        }
        let nw = self.m.worlds.len();
        if self.m.predicate(name).is_none() {
            self.m.predicates.push(Predicate::new(name, arity, nw));
        }
        let q = self.m.predicate_mut(name).expect("just added");
        if q.arity != arity {
            return Err(format!("{name} used with arities {} and {arity}", q.arity));
        }
        let ext: &mut Extension = if pos { &mut q.pos[w] } else { &mut q.neg[w] };
        ext.extend(ts);
        Ok(())
    }
}

pub fn write_model(m: &KripkeModel) -> String {
    let mut s = String::new();
    let obj = |h: usize| m.objects[h].as_str();
    let tup = |t: &[usize]| format!("({})", t.iter().map(|&h| obj(h)).collect::<Vec<_>>().join(","));
    let _ = writeln!(s, "kind: {}{}", m.kind, if m.free { " free" } else { "" });
    let _ = writeln!(s, "worlds: {}", m.worlds.join(" "));
    let n = m.worlds.len();
    let pairs: Vec<String> = (0..n)
        .flat_map(|w| (0..n).filter(move |&v| v != w && m.rel[w][v]).map(move |v| (w, v)))
        .map(|(w, v)| format!("({},{})", m.worlds[w], m.worlds[v]))
        .collect();
    let _ = writeln!(s, "{}", format!("rel: {}", pairs.join(" ")).trim_end());
    let _ = writeln!(s, "objects: {}", m.objects.join(" "));
    for d in &m.intensions {
        let vals: Vec<String> = d
            .values
            .iter()
            .enumerate()
            .map(|(w, &h)| format!("{}:{}", m.worlds[w], obj(h)))
            .collect();
        let _ = writeln!(s, "intension {} = {}", d.name, vals.join(" "));
    }
    let names = |set: u64| bits(set).map(|d| m.intensions[d].name.as_str()).collect::<Vec<_>>().join(" ");
    for w in 0..n {
        let _ = writeln!(s, "domain {}: {}", m.worlds[w], names(m.domain[w]));
    }
    if m.free {
        for w in 0..n {
            let _ = writeln!(s, "exists {}: {}", m.worlds[w], names(m.exists[w]));
        }
    }
    for (c, d) in &m.constants {
        let _ = writeln!(s, "const {c} = {}", m.intensions[*d].name);
    }
    for p in &m.predicates {
        let empty = p.pos.iter().chain(&p.neg).all(|e| e.is_empty());
        if empty && n > 0 {
            let _ = writeln!(s, "pos {}/{} {}:", p.name, p.arity, m.worlds[0]);
        }
        for (sign, exts) in [("pos", &p.pos), ("neg", &p.neg)] {
            for (w, e) in exts.iter().enumerate() {
                if !e.is_empty() {
                    let ts: Vec<String> = e.iter().map(|t| tup(t)).collect();
                    let _ = writeln!(s, "{sign} {} {}: {}", p.name, m.worlds[w], ts.join(" "));
                }
            }
        }
    }
    for (w, e) in m.neg_eq.iter().enumerate() {
        if !e.is_empty() {
            let ts: Vec<String> = e.iter().map(|t| tup(t)).collect();
            let head = match m.kind {
                Kind::Nelsonian => format!("neg= {}", m.worlds[w]),
                Kind::Intuitionistic => format!("pos {PRIMED_IDENTITY} {}", m.worlds[w]),
            };
            let _ = writeln!(s, "{head}: {}", ts.join(" "));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::validate_model;

    const GLUT: &str = "\
# P(a) and ~P(a) both hold
kind: nelsonian
worlds: w0
rel:
objects: h0
intension d = w0:h0
const a = d
pos P w0: (h0)
neg P w0: (h0)
pos Q/1 w0:
";

    #[test]
    fn reads_a_glut() {
        let m = parse_model(GLUT).unwrap();
        assert_eq!(m.kind, Kind::Nelsonian);
        assert!(!m.free);
        assert_eq!(m.constant("a"), Some(0));
        assert!(m.predicate("P").unwrap().neg[0].contains(&vec![0]));
        assert_eq!(m.predicate("Q").unwrap().arity, 1);
        assert!(validate_model(&m).is_empty());
    }

    #[test]
    fn closure_and_defaults() {
        let m = parse_model(
            "kind: intuitionistic free\nworlds: u v x\nrel: (u,v) (v,x)\nobjects: h\nintension d = u:h v:h x:h\nexists u:\n",
        )
        .unwrap();
        assert!(m.rel[0][2] && m.rel[1][1]);
        assert_eq!(m.domain, vec![1, 1, 1]);
        assert_eq!(m.exists, vec![0, 1, 1]);
    }

    #[test]
    fn round_trip() {
        let text = "\
kind: nelsonian free
worlds: w0 w1
rel: (w0,w1)
objects: h0 h1
intension d = w0:h0 w1:h0
intension e = w0:h1 w1:h1
domain w0: d e
domain w1: d e
exists w0: d
exists w1: d e
const a = e
pos P w1: (h0) (h1)
neg P w0: (h0)
neg P w1: (h0)
neg= w1: (h0,h1)
";
        let m = parse_model(text).unwrap();
        assert_eq!(write_model(&m), text);
        assert_eq!(parse_model(&write_model(&m)).unwrap(), m);
        assert!(validate_model(&m).is_empty(), "{:?}", validate_model(&m));
    }

    #[test]
    fn positioned_errors() {
        let e = parse_model("kind: nelsonian\nworlds: w0\nrel: (w0,w9)\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("w9"));
        let e = parse_model("worlds: w0\n").unwrap_err();
        assert!(e.msg.contains("kind"));
        let e = parse_model("kind: nelsonian\nworlds: w0\nobjects: h\nintension d = w0:h\npos P w0: (h) (h,h)\n")
            .unwrap_err();
        assert_eq!(e.line, 5);
    }
}
