//! Keyword-driven parser; indentation is not significant.

use super::{Alt, DoUntil, FromInstr, Program};
use crate::geometry::{Direction, Point, Segment};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Num(String),
    Sym(char),
    Arrow,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) | Tok::Num(w) => format!("`{w}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Arrow => "`->`".to_string(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        let mut k = 0;
        while k < chars.len() {
            let (col, c) = chars[k];
            let at = |tok| Spanned { tok, line: li + 1, column: col + 1 };
            if c.is_whitespace() {
                k += 1;
            } else if c == '-' && chars.get(k + 1).is_some_and(|&(_, d)| d == '>') {
                out.push(at(Tok::Arrow));
                k += 2;
            } else if c.is_ascii_digit() || c == '-' {
                let start = k;
                k += 1;
                while k < chars.len() && (chars[k].1.is_ascii_digit() || chars[k].1 == '/') {
                    k += 1;
                }
                let s: String = chars[start..k].iter().map(|&(_, c)| c).collect();
                out.push(at(Tok::Num(s)));
            } else if c.is_alphabetic() {
                let start = k;
                while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                    k += 1;
                }
                let s: String = chars[start..k].iter().map(|&(_, c)| c).collect();
                out.push(at(Tok::Word(s)));
            } else if "[](),:".contains(c) {
                out.push(at(Tok::Sym(c)));
                k += 1;
            } else {
                return Err(ParseError { line: li + 1, column: col + 1, expected: "a token".into(), found: format!("`{c}`") });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn error(&self, expected: &str) -> ParseError {
        match self.toks.get(self.pos) {
            Some(s) => ParseError { line: s.line, column: s.column, expected: expected.into(), found: s.tok.describe() },
            None => ParseError { line: self.end.0, column: self.end.1, expected: expected.into(), found: "end of input".into() },
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn keyword(&mut self, w: &str) -> Result<(), ParseError> {
        self.expect(Tok::Word(w.into()), &format!("`{w}`"))
    }

    fn rat(&mut self) -> Result<Rat, ParseError> {
        let err = self.error("a rational number");
        match self.peek() {
            Some(Tok::Num(s)) => {
                let r = s.parse::<Rat>().map_err(|_| err)?;
                self.pos += 1;
                Ok(r)
            }
            _ => Err(err),
        }
    }

    fn point(&mut self) -> Result<Point, ParseError> {
        self.expect(Tok::Sym('('), "`(`")?;
        let x = self.rat()?;
        self.expect(Tok::Sym(','), "`,`")?;
        let y = self.rat()?;
        self.expect(Tok::Sym(')'), "`)`")?;
        Ok(Point::new(x, y))
    }

    fn segment(&mut self) -> Result<Segment, ParseError> {
        self.expect(Tok::Sym('['), "`[`")?;
        let a = self.point()?;
        self.expect(Tok::Sym(','), "`,`")?;
        let b = self.point()?;
        self.expect(Tok::Sym(']'), "`]`")?;
        Ok(Segment::new(a, b))
    }

    fn alt(&mut self) -> Result<Alt, ParseError> {
        if self.is_word("GO") {
            self.pos += 1;
            let err = self.error("a direction");
            let d = match self.peek() {
                Some(Tok::Word(w)) => Direction::from_name(w).ok_or(err)?,
                _ => return Err(err),
            };
            self.pos += 1;
            return Ok(Alt::Go(d));
        }
        self.keyword("Target").map_err(|_| self.error("`Target` or `GO`"))?;
        let segment = self.segment()?;
        self.expect(Tok::Sym(','), "`,`")?;
        self.keyword("Preference")?;
        self.expect(Tok::Sym(':'), "`:`")?;
        let at = self.pos;
        let preference = self.point()?;
        if preference != segment.a && preference != segment.b {
            self.pos = at;
            return Err(self.error("a preference equal to a segment endpoint"));
        }
        Ok(Alt::Target { segment, preference })
    }

    fn from(&mut self) -> Result<FromInstr, ParseError> {
        self.keyword("From")?;
        let source = self.segment()?;
        self.expect(Tok::Arrow, "`->`")?;
        let mut alternatives = vec![self.alt()?];
        while self.is_word("Else") {
            self.pos += 1;
            alternatives.push(self.alt()?);
        }
        Ok(FromInstr { source, alternatives })
    }

    fn block(&mut self) -> Result<DoUntil, ParseError> {
        self.keyword("Do")?;
        self.expect(Tok::Sym(':'), "`:`")?;
        let mut body = Vec::new();
        while self.is_word("From") {
            body.push(self.from()?);
        }
        if !self.is_word("Until") {
            return Err(self.error("`From` or `Until`"));
        }
        self.pos += 1;
        self.expect(Tok::Sym('('), "`(`")?;
        let goal = self.segment()?;
        self.expect(Tok::Sym(')'), "`)`")?;
        Ok(DoUntil { body, goal })
    }
}

pub fn parse(text: &str) -> Result<Program, ParseError> {
    let toks = lex(text)?;
    let lines = text.lines().count().max(1);
    let last_len = text.lines().last().map_or(0, |l| l.chars().count());
    let mut p = Parser { toks, pos: 0, end: (lines, last_len + 1) };
    let mut blocks = Vec::new();
    while p.peek().is_some() {
        if !p.is_word("Do") {
            return Err(p.error("`Do`"));
        }
        blocks.push(p.block()?);
    }
    Ok(Program { blocks })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{minimal, seg};
    use super::super::{print, Alt, DoUntil, FromInstr, Program};
    use super::*;
    use proptest::prelude::*;

    pub(crate) const SPIRAL_LISTING: &str = "Do:
    From [(0, 0), (13, 13)] ->
        Target [(13, 13), (14, 12)], Preference: (13,13)
        Else Target [(14, 12), (26, 0)], Preference: (14,12)
    From [(14, 12), (26, 0)] ->
        Target [(14, 14), (28, 28)], Preference: (14, 14)
    From [(14, 14), (28, 28)] ->
        Target [(14, 14), (0, 28)], Preference: (0,28)
    From [(14, 14), (0, 28)] ->
        Target [(0, 0), (13, 13)], Preference: (0,0)
Until([(13, 13), (14, 12)])
";

    #[test]
    fn spiral_listing() {
        let p = parse(SPIRAL_LISTING).unwrap();
        assert_eq!(p.blocks.len(), 1);
        assert_eq!(p.blocks[0].body.len(), 4);
        let first = &p.blocks[0].body[0].alternatives;
        assert_eq!(first.len(), 2);
        let prefs: Vec<Point> = first
            .iter()
            .map(|a| match a {
                Alt::Target { preference, .. } => preference.clone(),
                Alt::Go(_) => unreachable!(),
            })
            .collect();
        assert_eq!(prefs, vec![Point::int(13, 13), Point::int(14, 12)]);
        assert_eq!(p.size().instructions, 5);
        let again = print(&p);
        assert_eq!(parse(&again).unwrap(), p);
        assert_eq!(print(&parse(&again).unwrap()), again);
    }

    #[test]
    fn minimal_text() {
        let p = parse("Do:\n From [(0,0),(0,2)] ->\n  Target [(1,0),(1,2)], Preference: (1,0)\nUntil([(1,0),(1,2)])").unwrap();
        assert_eq!(p, minimal());
    }

    #[test]
    fn errors_have_positions() {
        let e = parse("Do:\nUntil(").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse("Do:\n    From [(0,0),(0,2)] ->\n        Target [(1,0),(1,2)], Preference: (5,5)\nUntil([(1,0),(1,2)])").unwrap_err();
        assert_eq!((e.line, e.column), (3, 43));
        let e = parse("Do:\n    From [(0,0),(0,2)] ->\n        GO SIDEWAYS\nUntil([(1,0),(1,2)])").unwrap_err();
        assert_eq!((e.line, e.column), (3, 12));
        assert!(parse("Do:\nUntil([(0,0),(1/0,1)])").is_err());
        assert!(parse("Until([(0,0),(1,1)])").is_err());
    }

    #[test]
    fn rational_coordinates_round_trip() {
        let text = "Do:\n    From [(-1/2,0),(3/4,7)] ->\n        GO DOWN\nUntil([(0,0),(1,1)])\n";
        let p = parse(text).unwrap();
        assert_eq!(print(&p), text);
    }

    fn rat() -> impl Strategy<Value = Rat> {
        (-50i64..50, 1i64..9).prop_map(|(n, d)| Rat::new(n, d))
    }

    fn point() -> impl Strategy<Value = Point> {
        (rat(), rat()).prop_map(|(x, y)| Point::new(x, y))
    }

    fn segment() -> impl Strategy<Value = Segment> {
        (point(), point()).prop_map(|(a, b)| Segment::new(a, b))
    }

    fn alt() -> impl Strategy<Value = Alt> {
        prop_oneof![
            (segment(), any::<bool>()).prop_map(|(s, first)| {
                let preference = if first { s.a.clone() } else { s.b.clone() };
                Alt::Target { segment: s, preference }
            }),
            prop::sample::select(Direction::ALL.to_vec()).prop_map(Alt::Go),
        ]
    }

    pub(crate) fn program() -> impl Strategy<Value = Program> {
        let from = (segment(), prop::collection::vec(alt(), 1..4)).prop_map(|(source, alternatives)| FromInstr { source, alternatives });
        let block = (prop::collection::vec(from, 0..4), segment()).prop_map(|(body, goal)| DoUntil { body, goal });
        prop::collection::vec(block, 0..4).prop_map(|blocks| Program { blocks })
    }

    proptest! {
        #[test]
        fn print_parse_identity(p in program()) {
            let text = print(&p);
            prop_assert_eq!(parse(&text).unwrap(), p);
        }
    }

    #[test]
    fn segment_helper_matches() {
        assert_eq!(seg((0, 0), (1, 1)), Segment::new(Point::int(0, 0), Point::int(1, 1)));
    }
}
