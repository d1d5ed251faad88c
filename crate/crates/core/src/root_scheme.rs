//! Real root schemes as cyclic words on the oriented real base circle.
//!
//! A scheme alternates marked segments and gaps around the circle. Two
//! schemes are equivalent when one is a rotation or a reflection of the
//! other; a reflection reverses the circle, so it also reverses the mark
//! sequence inside every segment.
//!
//! Text form: `"(" item+ ")" ["@" grade]`, where an item is `.` for a gap
//! or `[marks]` for a segment, and marks are `a:k` (a point of multiplicity
//! `k` in the leading coefficient), `d:k` (a discriminant root of order
//! `k >= 2`) or `o` (a vertex of the exceptional section). Example:
//! `([o] . [] . [] .)@2`. The empty scheme is `()`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::permgroup::{generate, PermGroup, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    APoint(u32),
    DPoint(u32),
    CircleVertex,
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mark::APoint(mu) => write!(f, "a:{mu}"),
            Mark::DPoint(nu) => write!(f, "d:{nu}"),
            Mark::CircleVertex => f.write_str("o"),
        }
    }
}

/// `Gap` sorts before any segment.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Token {
    Gap,
    Segment(Vec<Mark>),
}

impl Token {
    pub fn is_segment(&self) -> bool {
        matches!(self, Token::Segment(_))
    }

    fn mirrored(&self) -> Token {
        match self {
            Token::Gap => Token::Gap,
            Token::Segment(marks) => Token::Segment(marks.iter().rev().copied().collect()),
        }
    }

    fn has_vertex(&self) -> bool {
        matches!(self, Token::Segment(m) if m.contains(&Mark::CircleVertex))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Gap => f.write_str("."),
            Token::Segment(marks) => {
                f.write_str("[")?;
                for (i, m) in marks.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str("]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSchemeError {
    #[error("segments and gaps must alternate around the circle")]
    NotAlternating,
    #[error("invalid mark {0}: a:k needs k >= 1, d:k needs k >= 2")]
    BadMark(Mark),
    #[error("grade must be at least 1")]
    BadGrade,
    #[error("segment {0} does not exist")]
    NoSuchSegment(usize),
    #[error("segment {0} carries a vertex mark and cannot be removed")]
    VertexSegment(usize),
    #[error("unexpected {found} at position {pos}, expected {expected}")]
    Syntax {
        pos: usize,
        found: String,
        expected: &'static str,
    },
}

/// Dihedral symmetry of the cycle positions `0..degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CyclicSymmetry {
    /// `j ↦ j + shift`.
    Rotation { shift: usize, degree: usize },
    /// `j ↦ axis - j`.
    Reflection { axis: usize, degree: usize },
}

impl CyclicSymmetry {
    pub fn apply(&self, j: usize) -> usize {
        match *self {
            CyclicSymmetry::Rotation { shift, degree } => (j + shift) % degree,
            CyclicSymmetry::Reflection { axis, degree } => (axis + degree - j % degree) % degree,
        }
    }

    pub fn is_reflection(&self) -> bool {
        matches!(self, CyclicSymmetry::Reflection { .. })
    }

    pub fn all(degree: usize) -> impl Iterator<Item = CyclicSymmetry> {
        let rotations = (0..degree).map(move |shift| CyclicSymmetry::Rotation { shift, degree });
        let reflections = (0..degree).map(move |axis| CyclicSymmetry::Reflection { axis, degree });
        rotations.chain(reflections)
    }
}

impl fmt::Display for CyclicSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CyclicSymmetry::Rotation { shift, .. } => write!(f, "rot{shift}"),
            CyclicSymmetry::Reflection { axis, .. } => write!(f, "ref{axis}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootScheme {
    cycle: Vec<Token>,
    grade: Option<u32>,
}

impl RootScheme {
    pub fn new(cycle: Vec<Token>, grade: Option<u32>) -> Result<Self, RootSchemeError> {
        let n = cycle.len();
        if (0..n).any(|i| cycle[i].is_segment() == cycle[(i + 1) % n].is_segment()) {
            return Err(RootSchemeError::NotAlternating);
        }
        for token in &cycle {
            if let Token::Segment(marks) = token {
                for &m in marks {
                    match m {
                        Mark::APoint(0) | Mark::DPoint(0 | 1) => {
                            return Err(RootSchemeError::BadMark(m))
                        }
                        _ => {}
                    }
                }
            }
        }
        if grade == Some(0) {
            return Err(RootSchemeError::BadGrade);
        }
        Ok(RootScheme { cycle, grade })
    }

    pub fn empty() -> Self {
        RootScheme {
            cycle: Vec::new(),
            grade: None,
        }
    }

    pub fn with_grade(mut self, grade: Option<u32>) -> Result<Self, RootSchemeError> {
        if grade == Some(0) {
            return Err(RootSchemeError::BadGrade);
        }
        self.grade = grade;
        Ok(self)
    }

    pub fn cycle(&self) -> &[Token] {
        &self.cycle
    }

    pub fn grade(&self) -> Option<u32> {
        self.grade
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Cycle positions of the segments, in cycle order.
    pub fn segment_positions(&self) -> Vec<usize> {
        (0..self.cycle.len())
            .filter(|&i| self.cycle[i].is_segment())
            .collect()
    }

    pub fn segment_count(&self) -> usize {
        self.cycle.iter().filter(|t| t.is_segment()).count()
    }

    /// The word read off after applying `sym` to the circle.
    pub fn transformed(&self, sym: CyclicSymmetry) -> RootScheme {
        let n = self.cycle.len();
        let cycle = (0..n)
            .map(|j| {
                let t = &self.cycle[sym.apply(j)];
                if sym.is_reflection() {
                    t.mirrored()
                } else {
                    t.clone()
                }
            })
            .collect();
        RootScheme {
            cycle,
            grade: self.grade,
        }
    }

    fn is_fixed_by(&self, sym: CyclicSymmetry) -> bool {
        (0..self.cycle.len()).all(|j| {
            let image = &self.cycle[sym.apply(j)];
            if sym.is_reflection() {
                *image == self.cycle[j].mirrored()
            } else {
                *image == self.cycle[j]
            }
        })
    }
}

impl fmt::Display for RootScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, t) in self.cycle.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")?;
        if let Some(r) = self.grade {
            write!(f, "@{r}")?;
        }
        Ok(())
    }
}

/// Lexicographically least word over all rotations and reflections.
pub fn canonical_form(s: &RootScheme) -> RootScheme {
    CyclicSymmetry::all(s.len())
        .map(|sym| s.transformed(sym))
        .min_by(|a, b| a.cycle.cmp(&b.cycle))
        .unwrap_or_else(|| s.clone())
}

/// Dihedral symmetries fixing the word, and the group they induce on the
/// segments (numbered in cycle order).
pub fn symmetry_group(s: &RootScheme) -> (Vec<CyclicSymmetry>, PermGroup) {
    let syms: Vec<CyclicSymmetry> = CyclicSymmetry::all(s.len())
        .filter(|&sym| s.is_fixed_by(sym))
        .collect();
    let positions = s.segment_positions();
    let m = positions.len();
    let mut segment_of = vec![usize::MAX; s.len()];
    for (k, &p) in positions.iter().enumerate() {
        segment_of[p] = k;
    }
    let induced: BTreeSet<Permutation> = syms
        .iter()
        .map(|sym| {
            let images = positions
                .iter()
                .map(|&p| segment_of[sym.apply(p)])
                .collect();
            Permutation::from_images(images).expect("a symmetry maps segments onto segments")
        })
        .collect();
    let gens: Vec<Permutation> = induced.into_iter().collect();
    let group = generate(m, &gens).expect("induced permutations are bijections");
    (syms, group)
}

/// Deletes the given segments (indices in cycle order) and merges the gaps
/// around each of them.
pub fn remove_segments(
    s: &RootScheme,
    segments: &BTreeSet<usize>,
) -> Result<RootScheme, RootSchemeError> {
    let positions = s.segment_positions();
    for &k in segments {
        let &p = positions.get(k).ok_or(RootSchemeError::NoSuchSegment(k))?;
        if s.cycle[p].has_vertex() {
            return Err(RootSchemeError::VertexSegment(k));
        }
    }
    let n = s.cycle.len();
    let mut drop = vec![false; n];
    for &k in segments {
        let p = positions[k];
        drop[p] = true;
        drop[(p + 1) % n] = true;
    }
    Ok(RootScheme {
        cycle: (0..n)
            .filter(|&i| !drop[i])
            .map(|i| s.cycle[i].clone())
            .collect(),
        grade: s.grade,
    })
}

/// `count` unmarked segments, preceded by one segment carrying a vertex mark
/// when `vertex_segment` is set.
pub fn segments_scheme(count: usize, vertex_segment: bool) -> RootScheme {
    let mut cycle = Vec::with_capacity(2 * count + 2);
    if vertex_segment {
        cycle.push(Token::Segment(vec![Mark::CircleVertex]));
        cycle.push(Token::Gap);
    }
    for _ in 0..count {
        cycle.push(Token::Segment(Vec::new()));
        cycle.push(Token::Gap);
    }
    RootScheme { cycle, grade: None }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn err(&self, expected: &'static str) -> RootSchemeError {
        let (pos, found) = match self.chars.get(self.at) {
            Some(&(p, c)) => (p, format!("{c:?}")),
            None => (self.src.len(), "end of input".to_string()),
        };
        RootSchemeError::Syntax {
            pos,
            found,
            expected,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<u32, RootSchemeError> {
        let start = self.at;
        let mut v: u32 = 0;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add(d))
                .ok_or_else(|| self.err("a smaller number"))?;
            self.at += 1;
        }
        if self.at == start {
            return Err(self.err("a number"));
        }
        Ok(v)
    }

    fn mark(&mut self) -> Result<Mark, RootSchemeError> {
        match self.peek() {
            Some('o') => {
                self.at += 1;
                Ok(Mark::CircleVertex)
            }
            Some(c @ ('a' | 'd')) => {
                self.at += 1;
                if !self.eat(':') {
                    return Err(self.err("':'"));
                }
                let k = self.nat()?;
                Ok(if c == 'a' {
                    Mark::APoint(k)
                } else {
                    Mark::DPoint(k)
                })
            }
            _ => Err(self.err("a mark (a:k, d:k or o)")),
        }
    }

    fn scheme(&mut self) -> Result<RootScheme, RootSchemeError> {
        if !self.eat('(') {
            return Err(self.err("'('"));
        }
        let mut cycle = Vec::new();
        loop {
            match self.peek() {
                Some('.') => {
                    self.at += 1;
                    cycle.push(Token::Gap);
                }
                Some('[') => {
                    self.at += 1;
                    let mut marks = Vec::new();
                    while !self.eat(']') {
                        marks.push(self.mark()?);
                        self.eat(',');
                    }
                    cycle.push(Token::Segment(marks));
                }
                Some(')') => {
                    self.at += 1;
                    break;
                }
                _ => return Err(self.err("'.', '[' or ')'")),
            }
        }
        let grade = if self.eat('@') {
            Some(self.nat()?)
        } else {
            None
        };
        if self.peek().is_some() {
            return Err(self.err("end of input"));
        }
        RootScheme::new(cycle, grade)
    }
}

pub fn parse_root_scheme(text: &str) -> Result<RootScheme, RootSchemeError> {
    Parser {
        src: text,
        chars: text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect(),
        at: 0,
    }
    .scheme()
}

impl FromStr for RootScheme {
    type Err = RootSchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_root_scheme(s)
    }
}
