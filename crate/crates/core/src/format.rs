//! Set file formats.
//!
//! Canonical JSON:
//!
//! ```json
//! {"ambient":{"kind":"prime-field","p":13},"elements":[0,1,3]}
//! ```
//!
//! Plain text: a `# ambient: <kind> [N=..|p=..]` header, an optional
//! `# label: ...` line, then one element per line (`x,y` for the plane).
//! Other `#` lines are comments. Both forms round-trip.

use serde::Deserialize;

use crate::ambient::{AmbientSpec, Element};
use crate::error::{Error, Result};
use crate::set::GroundSet;

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Merge duplicate elements (with a warning) instead of failing.
    pub allow_duplicates: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SetFile {
    ambient: AmbientSpec,
    elements: Vec<Element>,
    #[serde(default)]
    label: Option<String>,
}

/// Parse either format, detected from the first non-blank character.
pub fn parse_set(text: &str, opts: ParseOptions) -> Result<GroundSet> {
    if text.trim_start().starts_with('{') {
        parse_set_json(text, opts)
    } else {
        parse_set_text(text, opts)
    }
}

pub fn parse_set_json(text: &str, opts: ParseOptions) -> Result<GroundSet> {
    let file: SetFile = serde_json::from_str(text).map_err(|e| Error::MalformedInput {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    build(file.ambient, file.elements, file.label, opts)
}

pub fn parse_set_text(text: &str, opts: ParseOptions) -> Result<GroundSet> {
    let mut ambient = None;
    let mut label = None;
    let mut elements = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |message: String| Error::MalformedInput {
            line: line_no,
            column: raw.len() - raw.trim_start().len() + 1,
            message,
        };
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            if let Some(spec) = comment.strip_prefix("ambient:") {
                if ambient.is_some() {
                    return Err(malformed("duplicate ambient header".into()));
                }
                ambient = Some(spec.trim().parse::<AmbientSpec>().map_err(|e| malformed(e.to_string()))?);
            } else if let Some(l) = comment.strip_prefix("label:") {
                label = Some(l.trim().to_string());
            }
            continue;
        }
        let amb = ambient.ok_or_else(|| malformed("element before `# ambient:` header".into()))?;
        let parse_int = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| malformed(format!("expected an integer, got `{}`", t.trim())))
        };
        let elem = match amb {
            AmbientSpec::PrimeSquarePlane(_) => {
                let (x, y) = line
                    .split_once(',')
                    .ok_or_else(|| malformed(format!("expected `x,y`, got `{line}`")))?;
                Element::Pair(parse_int(x)?, parse_int(y)?)
            }
            _ => Element::Int(parse_int(line)?),
        };
        elements.push(elem);
    }
    let ambient = ambient.ok_or(Error::MalformedInput {
        line: 1,
        column: 1,
        message: "missing `# ambient:` header".into(),
    })?;
    build(ambient, elements, label, opts)
}

fn build(
    ambient: AmbientSpec,
    elements: Vec<Element>,
    label: Option<String>,
    opts: ParseOptions,
) -> Result<GroundSet> {
    let n = elements.len();
    let set = if opts.allow_duplicates {
        let s = GroundSet::new(ambient, elements)?;
        if s.len() != n {
            log::warn!("merged {} duplicate element(s)", n - s.len());
        }
        s
    } else {
        GroundSet::new_strict(ambient, elements)?
    };
    Ok(match label {
        Some(l) => set.with_label(l),
        None => set,
    })
}

/// Canonical compact JSON.
pub fn serialize_set(set: &GroundSet) -> String {
    serde_json::to_string(set).expect("set serialization is infallible")
}

pub fn serialize_set_text(set: &GroundSet) -> String {
    let mut out = format!("# ambient: {}\n", set.ambient());
    if let Some(l) = set.label() {
        out.push_str(&format!("# label: {l}\n"));
    }
    for e in set.iter() {
        match e {
            Element::Int(x) => out.push_str(&format!("{x}\n")),
            Element::Pair(x, y) => out.push_str(&format!("{x},{y}\n")),
        }
    }
    out
}
