//! Plain-text world files.
//!
//! ```text
//! grid 2
//! initial (0,0)
//! target 1
//! region 0 actions RIGHT,UP
//!     (0,0) (1,0) (1,2) (0,2)
//! region 1 actions none
//!     (1,0) (2,0) (2,2) (1,2)
//! ```
//!
//! `#` starts a comment. Coordinates are exact rationals (`3`, `-7/2`).

use std::fmt::Write as _;

use super::{Gridworld, Region};
use crate::geometry::{ActionCone, Direction, Point};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct LoadError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn save(world: &Gridworld) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "grid {}", world.side);
    let _ = writeln!(out, "initial {}", world.initial);
    let _ = writeln!(out, "target {}", world.target);
    for r in &world.regions {
        let dirs = r.actions.directions();
        let actions = if dirs.is_empty() {
            "none".to_string()
        } else {
            dirs.iter().map(|d| d.name()).collect::<Vec<_>>().join(",")
        };
        let _ = writeln!(out, "region {} actions {}", r.id, actions);
        let pts: Vec<String> = r.vertices.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "    {}", pts.join(" "));
    }
    out
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> LoadError {
        LoadError { line: self.line, column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn word(&mut self) -> Result<(usize, &'a str), LoadError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest.find(char::is_whitespace).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("unexpected end of line"));
        }
        self.pos += len;
        Ok((start, &rest[..len]))
    }

    fn expect_end(&mut self) -> Result<(), LoadError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    fn rat(&mut self) -> Result<Rat, LoadError> {
        let (start, w) = self.word()?;
        w.parse().map_err(|e| LoadError { line: self.line, column: start + 1, message: format!("{e}") })
    }

    fn usize(&mut self) -> Result<usize, LoadError> {
        let (start, w) = self.word()?;
        w.parse().map_err(|_| LoadError { line: self.line, column: start + 1, message: format!("expected an index, found {w:?}") })
    }

    fn point(&mut self) -> Result<Point, LoadError> {
        let (start, w) = self.word()?;
        let bad = || LoadError { line: self.line, column: start + 1, message: format!("expected a point (x,y), found {w:?}") };
        let inner = w.strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
        let (x, y) = inner.split_once(',').ok_or_else(bad)?;
        Ok(Point::new(x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?))
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a)
}

pub fn load(text: &str) -> Result<Gridworld, LoadError> {
    let mut side = None;
    let mut initial = None;
    let mut target = None;
    let mut regions: Vec<Region> = Vec::new();
    let mut pending: Option<(usize, usize, ActionCone)> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let mut c = Cursor { line: idx + 1, text: strip_comment(raw), pos: 0 };
        last_line = idx + 1;
        if c.at_end() {
            continue;
        }
        if let Some((id, _, actions)) = pending.take() {
            let mut vertices = Vec::new();
            while !c.at_end() {
                vertices.push(c.point()?);
            }
            regions.push(Region::new(id, vertices, actions));
            continue;
        }
        let (col, key) = c.word()?;
        match key {
            "grid" => {
                side = Some(c.rat()?);
                c.expect_end()?;
            }
            "initial" => {
                initial = Some(c.point()?);
                c.expect_end()?;
            }
            "target" => {
                target = Some(c.usize()?);
                c.expect_end()?;
            }
            "region" => {
                let id = c.usize()?;
                let (kcol, kw) = c.word()?;
                if kw != "actions" {
                    return Err(LoadError { line: c.line, column: kcol + 1, message: format!("expected `actions`, found {kw:?}") });
                }
                let (acol, list) = c.word()?;
                let mut dirs = Vec::new();
                if list != "none" {
                    let mut offset = acol;
                    for name in list.split(',') {
                        let d = Direction::from_name(name).ok_or_else(|| LoadError {
                            line: c.line,
                            column: offset + 1,
                            message: format!("unknown direction {name:?}"),
                        })?;
                        dirs.push(d);
                        offset += name.len() + 1;
                    }
                }
                c.expect_end()?;
                pending = Some((id, c.line, ActionCone::of(&dirs)));
            }
            other => {
                return Err(LoadError { line: c.line, column: col + 1, message: format!("unknown keyword {other:?}") });
            }
        }
    }
    if let Some((id, line, _)) = pending {
        return Err(LoadError { line, column: 1, message: format!("region {id} has no vertex line") });
    }
    let missing = |what: &str| LoadError { line: last_line.max(1), column: 1, message: format!("missing `{what}` line") };
    Ok(Gridworld {
        side: side.ok_or_else(|| missing("grid"))?,
        initial: initial.ok_or_else(|| missing("initial"))?,
        target: target.ok_or_else(|| missing("target"))?,
        regions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{double_pass_triangle, spiral, two_cell};

    #[test]
    fn round_trip_fixtures() {
        for w in [spiral(), two_cell(), double_pass_triangle()] {
            assert_eq!(load(&save(&w)).unwrap(), w);
        }
    }

    #[test]
    fn rational_coordinates() {
        let text = "grid 1\ninitial (1/2,0)\ntarget 0\nregion 0 actions none # whole square\n  (0,0) (1,0) (1,1) (0,1)\n";
        let w = load(text).unwrap();
        assert_eq!(w.initial, Point::new(Rat::new(1, 2), Rat::zero()));
        assert!(w.validate().is_empty());
    }

    #[test]
    fn errors_carry_position() {
        let e = load("grid 2\ninitial (0,0)\ntarget 1\nregion 0 actions RIGHT,SIDEWAYS\n").unwrap_err();
        assert_eq!((e.line, e.column), (4, 24));
        let e = load("grid 2\ninitial (0;0)\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));
        let e = load("grid 2\nbogus\n").unwrap_err();
        assert_eq!(e.line, 2);
    }
}
