//! Closed surface components, halves of the real part and their numeric
//! invariants.
//!
//! A [`Half`] is a multiset of [`SurfaceComponent`]s. Its text form is
//!
//! ```text
//! Half ::= "0" | Term ("+" Term)*
//! Term ::= [count] Comp
//! Comp ::= "S" | "Sg" nat | "V" nat
//! ```
//!
//! with whitespace ignored, e.g. `"V1 + 4S"` or `"V4+2V1"`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A connected closed surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceComponent {
    Sphere,
    /// Connected sum of `genus` tori, `genus >= 1`.
    Orientable(u32),
    /// Connected sum of `crosscaps` projective planes, `crosscaps >= 1`.
    Nonorientable(u32),
}

impl SurfaceComponent {
    /// Checked constructor for the orientable surface of the given genus.
    /// Genus zero is the sphere.
    pub fn orientable(genus: u32) -> Self {
        if genus == 0 {
            SurfaceComponent::Sphere
        } else {
            SurfaceComponent::Orientable(genus)
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        match *self {
            SurfaceComponent::Sphere => 2,
            SurfaceComponent::Orientable(g) => 2 - 2 * i64::from(g),
            SurfaceComponent::Nonorientable(p) => 2 - i64::from(p),
        }
    }

    /// Total mod-2 Betti number.
    pub fn betti(&self) -> i64 {
        match *self {
            SurfaceComponent::Sphere => 2,
            SurfaceComponent::Orientable(g) => 2 + 2 * i64::from(g),
            SurfaceComponent::Nonorientable(p) => 2 + i64::from(p),
        }
    }

    // V before Sg before S; larger parameter first within a class.
    fn sort_key(&self) -> (u8, std::cmp::Reverse<u32>) {
        match *self {
            SurfaceComponent::Nonorientable(p) => (0, std::cmp::Reverse(p)),
            SurfaceComponent::Orientable(g) => (1, std::cmp::Reverse(g)),
            SurfaceComponent::Sphere => (2, std::cmp::Reverse(0)),
        }
    }
}

impl Ord for SurfaceComponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for SurfaceComponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SurfaceComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SurfaceComponent::Sphere => f.write_str("S"),
            SurfaceComponent::Orientable(g) => write!(f, "Sg{g}"),
            SurfaceComponent::Nonorientable(p) => write!(f, "V{p}"),
        }
    }
}

pub fn euler_characteristic(c: SurfaceComponent) -> i64 {
    c.euler_characteristic()
}

/// A multiset of surface components, kept in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Half {
    components: Vec<SurfaceComponent>,
}

impl Half {
    pub fn empty() -> Self {
        Half::default()
    }

    pub fn new(components: impl IntoIterator<Item = SurfaceComponent>) -> Self {
        let mut components: Vec<_> = components.into_iter().collect();
        components.sort();
        Half { components }
    }

    /// Components in canonical order. Indices into this slice are the
    /// component labels used by quarter partitions and permutations.
    pub fn components(&self) -> &[SurfaceComponent] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn count(&self, c: SurfaceComponent) -> usize {
        self.components.iter().filter(|&&x| x == c).count()
    }

    pub fn contains(&self, c: SurfaceComponent) -> bool {
        self.components.contains(&c)
    }

    pub fn total_betti(&self) -> i64 {
        self.components.iter().map(SurfaceComponent::betti).sum()
    }

    /// True when two components of this half are homeomorphic.
    pub fn has_repeated_components(&self) -> bool {
        self.components.windows(2).any(|w| w[0] == w[1])
    }

    /// `(component, multiplicity)` runs in canonical order.
    pub fn classes(&self) -> Vec<(SurfaceComponent, usize)> {
        let mut out: Vec<(SurfaceComponent, usize)> = Vec::new();
        for &c in &self.components {
            match out.last_mut() {
                Some((last, n)) if *last == c => *n += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    /// Replaces the component at canonical index `index`, or removes it when
    /// `replacement` is `None`.
    pub fn replaced(&self, index: usize, replacement: Option<SurfaceComponent>) -> Half {
        let mut comps = self.components.clone();
        match replacement {
            Some(c) => comps[index] = c,
            None => {
                comps.remove(index);
            }
        }
        Half::new(comps)
    }

    /// Labels each component by its canonical index.
    pub fn labeled(&self) -> LabeledHalf {
        LabeledHalf::new(
            self.components
                .iter()
                .enumerate()
                .map(|(i, &c)| (i.to_string(), c)),
        )
        .expect("indices are distinct")
    }
}

impl FromIterator<SurfaceComponent> for Half {
    fn from_iter<I: IntoIterator<Item = SurfaceComponent>>(iter: I) -> Self {
        Half::new(iter)
    }
}

pub fn total_betti(h: &Half) -> i64 {
    h.total_betti()
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, n)) in self.classes().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if n > 1 {
                write!(f, "{n}")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HalfParseError {
    #[error("unexpected {found} at position {pos}, expected {expected}")]
    Unexpected {
        pos: usize,
        found: String,
        expected: &'static str,
    },
    #[error("malformed component at position {pos}: {token} (use S for the sphere)")]
    ZeroParameter { pos: usize, token: String },
    #[error("count must be at least 1 at position {pos}")]
    ZeroCount { pos: usize },
    #[error("number too large at position {pos}")]
    Overflow { pos: usize },
}

struct HalfParser<'a> {
    // Non-whitespace characters paired with their byte offsets in the input.
    chars: Vec<(usize, char)>,
    at: usize,
    len: usize,
    _src: &'a str,
}

impl<'a> HalfParser<'a> {
    fn new(src: &'a str) -> Self {
        let chars: Vec<_> = src
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        HalfParser {
            chars,
            at: 0,
            len: src.len(),
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.len, |&(p, _)| p)
    }

    fn unexpected(&self, expected: &'static str) -> HalfParseError {
        HalfParseError::Unexpected {
            pos: self.pos(),
            found: self
                .peek()
                .map_or_else(|| "end of input".to_string(), |c| format!("{c:?}")),
            expected,
        }
    }

    fn number(&mut self) -> Result<Option<u32>, HalfParseError> {
        let start = self.pos();
        let mut value: Option<u32> = None;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            let v = value.unwrap_or(0);
            value = Some(
                v.checked_mul(10)
                    .and_then(|v| v.checked_add(d))
                    .ok_or(HalfParseError::Overflow { pos: start })?,
            );
            self.at += 1;
        }
        Ok(value)
    }

    fn term(&mut self) -> Result<(u32, SurfaceComponent), HalfParseError> {
        let count_pos = self.pos();
        let count = match self.number()? {
            Some(0) => return Err(HalfParseError::ZeroCount { pos: count_pos }),
            Some(n) => n,
            None => 1,
        };
        let comp_pos = self.pos();
        let comp = match self.peek() {
            Some('S') => {
                self.at += 1;
                if self.peek() == Some('g') {
                    self.at += 1;
                    match self.number()? {
                        Some(0) => {
                            return Err(HalfParseError::ZeroParameter {
                                pos: comp_pos,
                                token: "Sg0".into(),
                            })
                        }
                        Some(g) => SurfaceComponent::Orientable(g),
                        None => return Err(self.unexpected("genus")),
                    }
                } else {
                    SurfaceComponent::Sphere
                }
            }
            Some('V') => {
                self.at += 1;
                match self.number()? {
                    Some(0) => {
                        return Err(HalfParseError::ZeroParameter {
                            pos: comp_pos,
                            token: "V0".into(),
                        })
                    }
                    Some(p) => SurfaceComponent::Nonorientable(p),
                    None => return Err(self.unexpected("number of crosscaps")),
                }
            }
            _ => return Err(self.unexpected("S, Sg<genus> or V<crosscaps>")),
        };
        Ok((count, comp))
    }

    fn half(&mut self) -> Result<Half, HalfParseError> {
        if self.peek() == Some('0') && self.chars.len() == self.at + 1 {
            return Ok(Half::empty());
        }
        let mut comps = Vec::new();
        loop {
            let (n, c) = self.term()?;
            comps.extend(std::iter::repeat_n(c, n as usize));
            match self.peek() {
                Some('+') => self.at += 1,
                None => break,
                _ => return Err(self.unexpected("'+' or end of input")),
            }
        }
        Ok(Half::new(comps))
    }
}

pub fn parse_half(text: &str) -> Result<Half, HalfParseError> {
    HalfParser::new(text).half()
}

impl FromStr for Half {
    type Err = HalfParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_half(s)
    }
}

/// The ordered pair `(E^(1), E^(2))`; `half1` is the distinguished half.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfDecomposition {
    pub half1: Half,
    pub half2: Half,
}

impl HalfDecomposition {
    pub fn new(half1: Half, half2: Half) -> Self {
        HalfDecomposition { half1, half2 }
    }

    pub fn parse(half1: &str, half2: &str) -> Result<Self, HalfParseError> {
        Ok(HalfDecomposition::new(
            parse_half(half1)?,
            parse_half(half2)?,
        ))
    }

    pub fn half(&self, index: HalfIndex) -> &Half {
        match index {
            HalfIndex::First => &self.half1,
            HalfIndex::Second => &self.half2,
        }
    }

    pub fn components(&self) -> impl Iterator<Item = &SurfaceComponent> {
        self.half1
            .components()
            .iter()
            .chain(self.half2.components())
    }
}

impl fmt::Display for HalfDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} | {{{}}}", self.half1, self.half2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HalfIndex {
    First,
    Second,
}

impl HalfIndex {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(HalfIndex::First),
            2 => Some(HalfIndex::Second),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Hyperbolic,
    Parabolic,
    Elliptic,
    Undefined,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Hyperbolic => "hyperbolic",
            Kind::Parabolic => "parabolic",
            Kind::Elliptic => "elliptic",
            Kind::Undefined => "undefined",
        })
    }
}

/// Sign of the minimal Euler characteristic over all components.
pub fn surface_kind(d: &HalfDecomposition) -> Kind {
    match d
        .components()
        .map(SurfaceComponent::euler_characteristic)
        .min()
    {
        None => Kind::Undefined,
        Some(chi) if chi < 0 => Kind::Hyperbolic,
        Some(0) => Kind::Parabolic,
        Some(_) => Kind::Elliptic,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("duplicate label {0:?}")]
pub struct DuplicateLabel(pub String);

/// Components with stable, pairwise distinct labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledHalf {
    entries: Vec<(String, SurfaceComponent)>,
}

impl LabeledHalf {
    pub fn new<L: Into<String>>(
        entries: impl IntoIterator<Item = (L, SurfaceComponent)>,
    ) -> Result<Self, DuplicateLabel> {
        let entries: Vec<(String, SurfaceComponent)> =
            entries.into_iter().map(|(l, c)| (l.into(), c)).collect();
        let mut seen = std::collections::HashSet::new();
        for (label, _) in &entries {
            if !seen.insert(label.as_str()) {
                return Err(DuplicateLabel(label.clone()));
            }
        }
        Ok(LabeledHalf { entries })
    }

    pub fn entries(&self) -> &[(String, SurfaceComponent)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|(l, _)| l == label)
    }

    pub fn label(&self, index: usize) -> &str {
        &self.entries[index].0
    }

    pub fn unlabeled(&self) -> Half {
        self.entries.iter().map(|&(_, c)| c).collect()
    }

    /// Positions grouped by component, blocks in canonical class order and
    /// positions within a block ordered by label.
    pub fn class_positions(&self) -> Vec<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.sort_by(|&a, &b| {
            let (la, ca) = &self.entries[a];
            let (lb, cb) = &self.entries[b];
            ca.cmp(cb).then_with(|| la.cmp(lb))
        });
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in order {
            match blocks.last_mut() {
                Some(block) if self.entries[block[0]].1 == self.entries[i].1 => block.push(i),
                _ => blocks.push(vec![i]),
            }
        }
        blocks
    }
}

/// Labels grouped by homeomorphism type.
pub fn homeomorphism_classes(h: &LabeledHalf) -> Vec<Vec<String>> {
    h.class_positions()
        .into_iter()
        .map(|block| block.into_iter().map(|i| h.label(i).to_string()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::SurfaceComponent::*;
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_half("V1 + 4S").unwrap(),
            Half::new([Nonorientable(1), Sphere, Sphere, Sphere, Sphere])
        );
        assert_eq!(parse_half("0").unwrap(), Half::empty());
        assert_eq!(
            parse_half("2V1").unwrap(),
            Half::new([Nonorientable(1), Nonorientable(1)])
        );
        assert_eq!(parse_half(" 3 Sg2+S ").unwrap().to_string(), "3Sg2 + S");
    }

    #[test]
    fn canonical_order() {
        let h = parse_half("S + V1 + Sg1 + V3 + S + Sg2").unwrap();
        assert_eq!(h.to_string(), "V3 + V1 + Sg2 + Sg1 + 2S");
        assert_eq!(parse_half("V1+V1").unwrap().to_string(), "2V1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_half("Sg0"),
            Err(HalfParseError::ZeroParameter { .. })
        ));
        assert!(matches!(
            parse_half("V1 + V0"),
            Err(HalfParseError::ZeroParameter { pos: 5, .. })
        ));
        assert!(matches!(
            parse_half("0S"),
            Err(HalfParseError::ZeroCount { .. })
        ));
        assert!(matches!(
            parse_half("V1 +"),
            Err(HalfParseError::Unexpected { pos: 4, .. })
        ));
        assert!(parse_half("").is_err());
        assert!(parse_half("V").is_err());
        assert!(parse_half("T").is_err());
        assert!(parse_half("0 + S").is_err());
        assert!(parse_half("S S").is_err());
        assert!(parse_half("99999999999S").is_err());
    }

    #[test]
    fn euler_and_betti() {
        assert_eq!(euler_characteristic(Sphere), 2);
        assert_eq!(euler_characteristic(Nonorientable(3)), -1);
        assert_eq!(euler_characteristic(Orientable(2)), -2);
        assert_eq!(total_betti(&parse_half("V1+4S").unwrap()), 11);
        assert_eq!(total_betti(&Half::empty()), 0);
        assert_eq!(total_betti(&Half::new([Orientable(2)])), 6);
    }

    #[test]
    fn kinds() {
        let d = HalfDecomposition::parse("V3", "V1+4S").unwrap();
        assert_eq!(surface_kind(&d), Kind::Hyperbolic);
        let d = HalfDecomposition::parse("Sg1", "0").unwrap();
        assert_eq!(surface_kind(&d), Kind::Parabolic);
        let d = HalfDecomposition::parse("S", "S").unwrap();
        assert_eq!(surface_kind(&d), Kind::Elliptic);
        assert_eq!(surface_kind(&HalfDecomposition::default()), Kind::Undefined);
    }

    #[test]
    fn classes_by_homeomorphism() {
        let h = LabeledHalf::new([("a", Nonorientable(1)), ("b", Sphere), ("c", Sphere)]).unwrap();
        assert_eq!(
            homeomorphism_classes(&h),
            vec![vec!["a".to_string()], vec!["b".into(), "c".into()]]
        );
        let h =
            LabeledHalf::new([("d", Sphere), ("a", Sphere), ("c", Sphere), ("b", Sphere)]).unwrap();
        assert_eq!(homeomorphism_classes(&h), vec![vec!["a", "b", "c", "d"]]);
        assert!(homeomorphism_classes(&LabeledHalf::default()).is_empty());
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(LabeledHalf::new([("a", Sphere), ("a", Sphere)]).is_err());
    }

    #[test]
    fn sphere_is_genus_zero() {
        assert_eq!(SurfaceComponent::orientable(0), Sphere);
        assert_eq!(SurfaceComponent::orientable(3), Orientable(3));
    }
}
