//! Space names, space-definition files and bundle descriptions.
//!
//! A definition file holds one `key = value` assignment per line; `#`
//! starts a comment.
//!
//! ```text
//! name = deformedW2
//! fibers = 2
//! params = t1
//! values = 1
//! forward = (z^-1, z^2*u1 + z*t1*u2, u2)
//! inverse = (xi^-1, xi^2*v1 - xi*t1*v2, v2)
//! ```
//!
//! `params` and `values` are optional; with `values` the parameters are
//! specialised after validation.

use std::collections::BTreeMap;
use std::path::Path;

use crate::bundle::{direct_sum, dual, end_bundle, extension_bundle, line_bundle, tangent_bundle, TransitionBundle};
use crate::error::{Error, Result};
use crate::expr::{parse_expr, parse_poly};
use crate::geometry::{ChartMap, Family, TwoChartSpace};
use crate::ring::{Frame, Rational, Signature};

/// `Z<k>`, `Z(<k>)`, `W<k>` with `k` possibly negative.
pub fn named_space(name: &str) -> Option<TwoChartSpace> {
    let family = match name.chars().next()? {
        'Z' => Family::Z,
        'W' => Family::W,
        _ => return None,
    };
    let rest = &name[1..];
    let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    let k: i64 = rest.parse().ok()?;
    Some(TwoChartSpace::standard(family, k))
}

/// A space name, or else a path to a definition file.
pub fn resolve_space(desc: &str) -> Result<TwoChartSpace> {
    if let Some(s) = named_space(desc) {
        return Ok(s);
    }
    let path = Path::new(desc);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{desc}: {e}")))?;
        return parse_space_file(&text);
    }
    Err(Error::Input(format!("`{desc}` is neither Z<k>, W<k> nor a readable definition file")))
}

/// Splits at top-level commas.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn tuple(s: &str) -> Result<Vec<&str>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Input(format!("expected a parenthesised tuple, got `{s}`")))?;
    Ok(split_top(inner))
}

pub fn parse_space_file(text: &str) -> Result<TwoChartSpace> {
    let mut fields = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("line {}: expected `key = value`", n + 1)))?;
        let k = k.trim();
        if !matches!(k, "name" | "fibers" | "params" | "values" | "forward" | "inverse") {
            return Err(Error::Input(format!("line {}: unknown key `{k}`", n + 1)));
        }
        if fields.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Input(format!("line {}: `{k}` assigned twice", n + 1)));
        }
    }
    let get = |k: &str| fields.get(k).ok_or_else(|| Error::Input(format!("definition lacks `{k}`")));
    let name = get("name")?.clone();
    let forward = tuple(get("forward")?)?;
    let inverse = tuple(get("inverse")?)?;
    let fibers = match fields.get("fibers") {
        Some(f) => f.parse::<usize>().map_err(|_| Error::Input(format!("bad fiber count `{f}`")))?,
        None => forward.len().saturating_sub(1),
    };
    if forward.len() != fibers + 1 || inverse.len() != fibers + 1 {
        return Err(Error::Input(format!("forward and inverse need {} entries", fibers + 1)));
    }
    let params: Vec<String> = match fields.get("params") {
        Some(p) if !p.is_empty() => split_top(p).into_iter().map(str::to_string).collect(),
        _ => vec![],
    };
    for (k, p) in params.iter().enumerate() {
        if *p != format!("t{}", k + 1) {
            return Err(Error::Input(format!("parameters must be named t1, t2, .. in order, got `{p}`")));
        }
    }
    let u = Signature::new(fibers, params.len(), Frame::U);
    let v = Signature::new(fibers, params.len(), Frame::V);
    let map = ChartMap {
        forward: forward.iter().map(|e| parse_poly(e, &u, 0)).collect::<Result<_>>()?,
        inverse: inverse.iter().map(|e| parse_poly(e, &v, 0)).collect::<Result<_>>()?,
    };
    let space = TwoChartSpace::new(name, map, params)?;
    match fields.get("values") {
        Some(vals) => {
            let vals = split_top(vals).into_iter().map(parse_rational).collect::<Result<Vec<_>>>()?;
            space.specialize(&vals)
        }
        None => Ok(space),
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let sig = Signature::new(0, 0, Frame::U);
    let p = parse_poly(s, &sig, 0)?;
    if p.terms().any(|(e, _)| e.base != 0) {
        return Err(Error::Input(format!("`{s}` is not a number")));
    }
    Ok(p.constant_term())
}

/// Bundle descriptions: `T`, `O(n)`, `End(T)`, `dual(B)`, `B + B` and
/// `ext(b, a, p)` where `p` is a U-frame expression (`exp` truncated at
/// `cutoff`).
pub fn parse_bundle(space: &TwoChartSpace, desc: &str, cutoff: u32) -> Result<TransitionBundle> {
    let desc = desc.trim();
    let parts = split_plus(desc);
    if parts.len() > 1 {
        let mut acc = parse_bundle(space, parts[0], cutoff)?;
        for p in &parts[1..] {
            acc = direct_sum(&acc, &parse_bundle(space, p, cutoff)?)?;
        }
        return Ok(acc);
    }
    if desc == "T" {
        return tangent_bundle(space);
    }
    let call = |head: &str| desc.strip_prefix(head).and_then(|r| r.strip_prefix('(')).and_then(|r| r.strip_suffix(')'));
    if let Some(n) = call("O") {
        let n: i64 = n.trim().parse().map_err(|_| Error::Input(format!("bad line bundle degree in `{desc}`")))?;
        return Ok(line_bundle(space, n));
    }
    if let Some(inner) = call("End") {
        return end_bundle(&parse_bundle(space, inner, cutoff)?);
    }
    if let Some(inner) = call("dual") {
        return dual(&parse_bundle(space, inner, cutoff)?);
    }
    if let Some(args) = call("ext") {
        let args = split_top(args);
        if args.len() != 3 {
            return Err(Error::Input("ext needs (b, a, p)".into()));
        }
        let int = |s: &str| s.parse::<i64>().map_err(|_| Error::Input(format!("bad degree `{s}`")));
        let p = parse_poly(args[2], space.u_signature(), cutoff)?;
        return extension_bundle(space, int(args[0])?, int(args[1])?, &p);
    }
    Err(Error::Input(format!("unrecognised bundle `{desc}`")))
}

fn split_plus(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// Cochain given as `(e1, e2, ..)` or a single expression for rank one.
pub fn parse_cochain(bundle: &TransitionBundle, text: &str, cutoff: u32) -> Result<Vec<crate::ring::LaurentPoly>> {
    let sig = bundle.space().u_signature();
    let t = text.trim();
    let entries = if t.starts_with('(') && t.ends_with(')') && bundle.rank() > 1 { tuple(t)? } else { vec![t] };
    if entries.len() != bundle.rank() {
        return Err(Error::Input(format!("{} needs {} components, got {}", bundle.name(), bundle.rank(), entries.len())));
    }
    entries.iter().map(|e| parse_expr(e)?.eval(sig, cutoff)).collect()
}
