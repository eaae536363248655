//! Subgoal programs: `Do ... Until(e)` blocks of prioritised `From` rules.
//!
//! ```text
//! Do:
//!     From [(0,0),(0,2)] ->
//!         Target [(1,0),(1,2)], Preference: (1,0)
//!         Else GO UP
//! Until([(1,0),(1,2)])
//! ```

mod parse;

use std::fmt;

use crate::geometry::{Direction, Point, Segment};

pub use parse::{parse, ParseError};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Program {
    pub blocks: Vec<DoUntil>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoUntil {
    pub body: Vec<FromInstr>,
    pub goal: Segment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FromInstr {
    pub source: Segment,
    /// Highest priority first.
    pub alternatives: Vec<Alt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alt {
    Target { segment: Segment, preference: Point },
    Go(Direction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProgramSize {
    pub instructions: usize,
    pub bytes: usize,
}

impl Program {
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn size(&self) -> ProgramSize {
        program_size(self)
    }
}

/// Instructions are Target and GO alternatives; bytes are the printed length.
pub fn program_size(program: &Program) -> ProgramSize {
    let instructions = program.blocks.iter().flat_map(|b| &b.body).map(|f| f.alternatives.len()).sum();
    ProgramSize { instructions, bytes: program.to_string().len() }
}

fn write_segment(f: &mut fmt::Formatter<'_>, s: &Segment) -> fmt::Result {
    write!(f, "[{},{}]", s.a, s.b)
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            writeln!(f, "Do:")?;
            for from in &block.body {
                write!(f, "    From ")?;
                write_segment(f, &from.source)?;
                writeln!(f, " ->")?;
                for (k, alt) in from.alternatives.iter().enumerate() {
                    let lead = if k == 0 { "        " } else { "        Else " };
                    match alt {
                        Alt::Target { segment, preference } => {
                            write!(f, "{lead}Target ")?;
                            write_segment(f, segment)?;
                            writeln!(f, ", Preference: {preference}")?;
                        }
                        Alt::Go(d) => writeln!(f, "{lead}GO {}", d.name())?,
                    }
                }
            }
            write!(f, "Until(")?;
            write_segment(f, &block.goal)?;
            writeln!(f, ")")?;
        }
        Ok(())
    }
}

pub fn print(program: &Program) -> String {
    program.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn seg(a: (i64, i64), b: (i64, i64)) -> Segment {
        Segment::new(Point::int(a.0, a.1), Point::int(b.0, b.1))
    }

    pub(crate) fn minimal() -> Program {
        Program {
            blocks: vec![DoUntil {
                body: vec![FromInstr {
                    source: seg((0, 0), (0, 2)),
                    alternatives: vec![Alt::Target { segment: seg((1, 0), (1, 2)), preference: Point::int(1, 0) }],
                }],
                goal: seg((1, 0), (1, 2)),
            }],
        }
    }

    #[test]
    fn prints_minimal_program() {
        let text = print(&minimal());
        assert_eq!(
            text,
            "Do:\n    From [(0,0),(0,2)] ->\n        Target [(1,0),(1,2)], Preference: (1,0)\nUntil([(1,0),(1,2)])\n"
        );
        assert_eq!(minimal().size(), ProgramSize { instructions: 1, bytes: text.len() });
    }

    #[test]
    fn empty_program() {
        assert_eq!(print(&Program::default()), "");
        assert_eq!(Program::default().size(), ProgramSize { instructions: 0, bytes: 0 });
    }

    #[test]
    fn go_lines() {
        let mut p = minimal();
        p.blocks[0].body[0].alternatives.push(Alt::Go(Direction::Left));
        assert!(print(&p).contains("\n        Else GO LEFT\n"));
        assert_eq!(p.size().instructions, 2);
    }
}
