//! The line-oriented starter file format.
//!
//! ```text
//! # comments and blank lines are ignored
//! group Z(10)
//! subgroup (5)
//! 3 , 4
//! 7 , 9
//! ```
//!
//! The `subgroup` line lists generators separated by `;`. Elements use coordinate
//! notation `(c1,...,ck)`; single-factor groups may drop the parentheses. The
//! writer always emits the same canonical text, so write-parse-write is a fixed
//! point.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::group::{Element, Group, Subgroup};
use crate::starter::FrameStarter;

/// Parses `Z(n1,...,nk)`; `Z()` is the trivial group. The result is canonical.
pub fn parse_group(s: &str) -> Result<Group> {
    let s = s.trim();
    let inner = s
        .strip_prefix("Z(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::invalid(format!("expected Z(n1,...,nk), got {s:?}")))?;
    Group::new(&parse_numbers(inner)?)
}

fn parse_numbers(s: &str) -> Result<Vec<u32>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::invalid(format!("not a nonnegative integer: {:?}", t.trim())))
        })
        .collect()
}

/// Parses `(c1,...,ck)` or, for single-factor groups, a bare integer.
pub fn parse_element(g: &Group, s: &str) -> Result<Element> {
    let s = s.trim();
    let coords = match s.strip_prefix('(') {
        Some(rest) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::invalid(format!("unbalanced parentheses in {s:?}")))?;
            parse_numbers(inner)?
        }
        None => parse_numbers(s)?,
    };
    if coords.len() != g.rank() {
        return Err(Error::DimensionMismatch {
            expected: g.rank(),
            found: coords.len(),
        });
    }
    g.element(&coords)
}

/// Parses a `;`-separated generator list.
pub fn parse_generators(g: &Group, s: &str) -> Result<Vec<Element>> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_element(g, t))
        .collect()
}

pub fn parse_subgroup(g: &Group, s: &str) -> Result<Subgroup> {
    Subgroup::closure(g, &parse_generators(g, s)?)
}

/// Splits `x , y` at the comma outside parentheses.
fn split_pair(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    let mut at = None;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                if at.is_some() {
                    return None;
                }
                at = Some(i);
            }
            _ => {}
        }
    }
    at.map(|i| (&s[..i], &s[i + 1..]))
}

/// Coordinates written with parentheses always, as on the `subgroup` line.
fn tuple(e: &Element) -> String {
    let inner: Vec<String> = e.coords().iter().map(ToString::to_string).collect();
    format!("({})", inner.join(","))
}

/// A parsed starter file. Pairs are not verified at this stage.
#[derive(Clone, Debug)]
pub struct StarterFile {
    pub subgroup: Subgroup,
    pub pairs: Vec<(Element, Element)>,
}

impl StarterFile {
    pub fn group(&self) -> &Group {
        self.subgroup.parent()
    }

    /// Verifies the pairs as a frame starter.
    pub fn to_starter(&self) -> Result<FrameStarter> {
        FrameStarter::new(&self.subgroup, &self.pairs)
    }
}

impl From<&FrameStarter> for StarterFile {
    fn from(s: &FrameStarter) -> Self {
        StarterFile {
            subgroup: s.subgroup().clone(),
            pairs: s.pairs(),
        }
    }
}

pub fn parse_starter_file(text: &str) -> Result<StarterFile> {
    let mut group: Option<Group> = None;
    let mut subgroup: Option<Subgroup> = None;
    let mut pairs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| Error::parse(line_no, e.to_string());
        if let Some(rest) = line.strip_prefix("group") {
            if group.is_some() {
                return Err(Error::parse(line_no, "duplicate group line"));
            }
            group = Some(parse_group(rest).map_err(at)?);
        } else if let Some(rest) = line.strip_prefix("subgroup") {
            let g = group
                .as_ref()
                .ok_or_else(|| Error::parse(line_no, "subgroup line before group line"))?;
            if subgroup.is_some() {
                return Err(Error::parse(line_no, "duplicate subgroup line"));
            }
            subgroup = Some(parse_subgroup(g, rest).map_err(at)?);
        } else {
            let g = subgroup
                .as_ref()
                .map(Subgroup::parent)
                .ok_or_else(|| Error::parse(line_no, "pair before group and subgroup lines"))?;
            let (x, y) = split_pair(line)
                .ok_or_else(|| Error::parse(line_no, format!("expected `x , y`, got {line:?}")))?;
            pairs.push((parse_element(g, x).map_err(at)?, parse_element(g, y).map_err(at)?));
        }
    }
    let subgroup = match (group, subgroup) {
        (Some(_), Some(h)) => h,
        (None, _) => return Err(Error::parse(0, "missing group line")),
        (Some(_), None) => return Err(Error::parse(0, "missing subgroup line")),
    };
    Ok(StarterFile { subgroup, pairs })
}

pub fn write_starter_file(file: &StarterFile) -> String {
    let mut out = String::new();
    writeln!(out, "group {}", file.group()).unwrap();
    let gens: Vec<String> = file.subgroup.generators().iter().map(tuple).collect();
    if gens.is_empty() {
        writeln!(out, "subgroup").unwrap();
    } else {
        writeln!(out, "subgroup {}", gens.join(";")).unwrap();
    }
    for (x, y) in &file.pairs {
        writeln!(out, "{x} , {y}").unwrap();
    }
    out
}

pub fn write_starter(s: &FrameStarter) -> String {
    write_starter_file(&StarterFile::from(s))
}
