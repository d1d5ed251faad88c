//! Real schemes of curves: nested ovals in the plane and zone-separated
//! arrangements on the quadratic cone.
//!
//! ASCII notation (`<` `>` for the angle brackets, `u` for disjoint union):
//!
//! ```text
//! Scheme ::= "<" Body ">" | "<" Zone ("|" Zone)+ ">"
//! Body   ::= "0" | "J" [ "u" Item ("u" Item)* ] | Item ("u" Item)*
//! Item   ::= nat | "1" "<" Body ">"
//! Zone   ::= Body | (empty)
//! ```
//!
//! `n` stands for `n` disjoint empty ovals, `1<B>` for an oval surrounding
//! the scheme `B`, `J` for a one-sided component. A bar `|` separates zones.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::{parse_half, Half};

/// An oval together with everything it surrounds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OvalNode {
    children: Vec<OvalNode>,
}

impl OvalNode {
    pub fn empty() -> Self {
        OvalNode {
            children: Vec::new(),
        }
    }

    pub fn surrounding(children: impl IntoIterator<Item = OvalNode>) -> Self {
        let mut children: Vec<_> = children.into_iter().collect();
        children.sort();
        OvalNode { children }
    }

    pub fn children(&self) -> &[OvalNode] {
        &self.children
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(OvalNode::depth).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(OvalNode::size).sum::<usize>()
    }

    fn text(&self) -> String {
        if self.children.is_empty() {
            "1".to_string()
        } else {
            format!("1<{}>", items_text(&self.children))
        }
    }
}

impl Ord for OvalNode {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.depth(), self.size())
            .cmp(&(other.depth(), other.size()))
            .then_with(|| self.text().cmp(&other.text()))
    }
}

impl PartialOrd for OvalNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Sorted siblings, with runs of empty ovals collapsed to a count.
fn items_text(nodes: &[OvalNode]) -> String {
    let empties = nodes.iter().take_while(|n| n.children.is_empty()).count();
    let mut parts = Vec::new();
    if empties > 0 {
        parts.push(empties.to_string());
    }
    parts.extend(nodes[empties..].iter().map(OvalNode::text));
    parts.join(" u ")
}

/// The ovals of one region, with an optional one-sided component.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OvalForest {
    roots: Vec<OvalNode>,
    has_j: bool,
}

impl OvalForest {
    pub fn new(roots: impl IntoIterator<Item = OvalNode>, has_j: bool) -> Self {
        let mut roots: Vec<_> = roots.into_iter().collect();
        roots.sort();
        OvalForest { roots, has_j }
    }

    /// `n` disjoint empty ovals.
    pub fn ovals(n: usize) -> Self {
        OvalForest::new(std::iter::repeat_n(OvalNode::empty(), n), false)
    }

    pub fn roots(&self) -> &[OvalNode] {
        &self.roots
    }

    pub fn has_j(&self) -> bool {
        self.has_j
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty() && !self.has_j
    }

    pub fn oval_count(&self) -> usize {
        self.roots.iter().map(OvalNode::size).sum()
    }

    pub fn depth(&self) -> usize {
        self.roots.iter().map(OvalNode::depth).max().unwrap_or(0)
    }

    fn body_text(&self, empty: &str) -> String {
        match (self.has_j, self.roots.is_empty()) {
            (false, true) => empty.to_string(),
            (true, true) => "J".to_string(),
            (true, false) => format!("J u {}", items_text(&self.roots)),
            (false, false) => items_text(&self.roots),
        }
    }
}

/// Zones of a curve on the cone, in the order fixed by an orientation of a
/// real generatrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sigma2Scheme {
    zones: Vec<OvalForest>,
}

impl Sigma2Scheme {
    /// At least two zones, i.e. at least one bar.
    pub fn new(zones: Vec<OvalForest>) -> Option<Self> {
        (zones.len() >= 2).then_some(Sigma2Scheme { zones })
    }

    pub fn zones(&self) -> &[OvalForest] {
        &self.zones
    }

    pub fn bars(&self) -> usize {
        self.zones.len() - 1
    }

    pub fn reversed(&self) -> Sigma2Scheme {
        Sigma2Scheme {
            zones: self.zones.iter().rev().cloned().collect(),
        }
    }

    pub fn oval_count(&self) -> usize {
        self.zones.iter().map(OvalForest::oval_count).sum()
    }
}

pub fn reversal_equivalent(a: &Sigma2Scheme, b: &Sigma2Scheme) -> bool {
    a == b || a.reversed() == *b
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RealScheme {
    Plane(OvalForest),
    Sigma2(Sigma2Scheme),
}

impl RealScheme {
    pub fn oval_count(&self) -> usize {
        match self {
            RealScheme::Plane(f) => f.oval_count(),
            RealScheme::Sigma2(s) => s.oval_count(),
        }
    }

    pub fn as_sigma2(&self) -> Option<&Sigma2Scheme> {
        match self {
            RealScheme::Sigma2(s) => Some(s),
            RealScheme::Plane(_) => None,
        }
    }

    pub fn canonical_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RealScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealScheme::Plane(forest) => write!(f, "<{}>", forest.body_text("0")),
            RealScheme::Sigma2(s) => {
                // Empty zones print as "0" next to a single bar and as
                // nothing once there are two or more bars: <0|0>, <|||>.
                let empty = if s.bars() == 1 { "0" } else { "" };
                let zones: Vec<String> = s.zones.iter().map(|z| z.body_text(empty)).collect();
                write!(f, "<{}>", zones.join("|"))
            }
        }
    }
}

pub fn canonical_text(s: &RealScheme) -> String {
    s.canonical_text()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeParseError {
    #[error("unexpected {found} at position {pos}, expected {expected}")]
    Unexpected {
        pos: usize,
        found: String,
        expected: &'static str,
    },
    #[error("one-sided component J inside an oval at position {pos}")]
    NestedJ { pos: usize },
    #[error("second one-sided component at position {pos}")]
    DuplicateJ { pos: usize },
    #[error("only a single oval (1) may surround others, at position {pos}")]
    MultiSurround { pos: usize },
    #[error("empty zone without bars at position {pos}")]
    EmptyBody { pos: usize },
    #[error("number too large at position {pos}")]
    Overflow { pos: usize },
}

struct SchemeParser {
    chars: Vec<(usize, char)>,
    at: usize,
    len: usize,
}

impl SchemeParser {
    fn new(src: &str) -> Self {
        SchemeParser {
            chars: src
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            at: 0,
            len: src.len(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or(self.len, |&(p, _)| p)
    }

    fn unexpected(&self, expected: &'static str) -> SchemeParseError {
        SchemeParseError::Unexpected {
            pos: self.pos(),
            found: self
                .peek()
                .map_or_else(|| "end of input".to_string(), |c| format!("{c:?}")),
            expected,
        }
    }

    fn expect(&mut self, ch: char, expected: &'static str) -> Result<(), SchemeParseError> {
        if self.peek() == Some(ch) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn nat(&mut self) -> Result<Option<usize>, SchemeParseError> {
        let start = self.pos();
        let mut value: Option<usize> = None;
        while let Some(d) = self.peek().and_then(|c| c.to_digit(10)) {
            value = Some(
                value
                    .unwrap_or(0)
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as usize))
                    .filter(|&v| v <= 1 << 20)
                    .ok_or(SchemeParseError::Overflow { pos: start })?,
            );
            self.at += 1;
        }
        Ok(value)
    }

    fn at_zone_end(&self) -> bool {
        matches!(self.peek(), Some('>') | Some('|'))
    }

    fn scheme(&mut self) -> Result<RealScheme, SchemeParseError> {
        self.expect('<', "'<'")?;
        let mut zones = vec![self.zone()?];
        while self.peek() == Some('|') {
            self.at += 1;
            zones.push(self.zone()?);
        }
        self.expect('>', "'>' or '|'")?;
        if self.peek().is_some() {
            return Err(self.unexpected("end of input"));
        }
        if zones.len() == 1 {
            let zone = zones.pop().unwrap();
            match zone {
                Some(forest) => Ok(RealScheme::Plane(forest)),
                None => Err(SchemeParseError::EmptyBody {
                    pos: self.len.saturating_sub(1),
                }),
            }
        } else {
            Ok(RealScheme::Sigma2(Sigma2Scheme {
                zones: zones.into_iter().map(Option::unwrap_or_default).collect(),
            }))
        }
    }

    // None for a syntactically empty zone.
    fn zone(&mut self) -> Result<Option<OvalForest>, SchemeParseError> {
        if self.at_zone_end() {
            return Ok(None);
        }
        self.body(false).map(Some)
    }

    fn body(&mut self, nested: bool) -> Result<OvalForest, SchemeParseError> {
        let start = self.at;
        if self.nat()? == Some(0) {
            return Ok(OvalForest::default());
        }
        self.at = start;
        let mut has_j = false;
        let mut roots = Vec::new();
        loop {
            let pos = self.pos();
            if self.peek() == Some('J') {
                if nested {
                    return Err(SchemeParseError::NestedJ { pos });
                }
                if has_j {
                    return Err(SchemeParseError::DuplicateJ { pos });
                }
                self.at += 1;
                has_j = true;
            } else {
                self.item(&mut roots)?;
            }
            if self.peek() == Some('u') {
                self.at += 1;
            } else {
                break;
            }
        }
        Ok(OvalForest::new(roots, has_j))
    }

    fn item(&mut self, out: &mut Vec<OvalNode>) -> Result<(), SchemeParseError> {
        let pos = self.pos();
        let start = self.at;
        let n = match self.nat()? {
            Some(n) if n >= 1 => n,
            _ => {
                self.at = start;
                return Err(self.unexpected("oval count >= 1 or J"));
            }
        };
        if self.peek() == Some('<') {
            if n != 1 {
                return Err(SchemeParseError::MultiSurround { pos });
            }
            self.at += 1;
            let inner = self.body(true)?;
            self.expect('>', "'>'")?;
            out.push(OvalNode::surrounding(inner.roots));
        } else {
            out.extend(std::iter::repeat_n(OvalNode::empty(), n));
        }
        Ok(())
    }
}

pub fn parse_scheme(text: &str) -> Result<RealScheme, SchemeParseError> {
    SchemeParser::new(text).scheme()
}

impl FromStr for RealScheme {
    type Err = SchemeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scheme(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeFamily {
    /// Nonsingular plane quartics, classified by real scheme.
    PlaneQuartic,
    /// Cubic sections of the quadratic cone, classified by real scheme.
    Sigma2Cubic,
    /// Intersections of two quadrics in P4, classified by real part.
    P4QuadricPair,
}

impl SchemeFamily {
    pub const ALL: [SchemeFamily; 3] = [
        SchemeFamily::PlaneQuartic,
        SchemeFamily::Sigma2Cubic,
        SchemeFamily::P4QuadricPair,
    ];

    /// Number of rigid isotopy classes in the family.
    pub fn class_count(&self) -> usize {
        match self {
            SchemeFamily::PlaneQuartic => 6,
            SchemeFamily::Sigma2Cubic => 11,
            SchemeFamily::P4QuadricPair => 7,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SchemeFamily::PlaneQuartic => "PlaneQuartic",
            SchemeFamily::Sigma2Cubic => "Sigma2Cubic",
            SchemeFamily::P4QuadricPair => "P4QuadricPair",
        }
    }
}

impl FromStr for SchemeFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemeFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown scheme family {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassKey {
    Scheme(RealScheme),
    RealPart(Half),
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKey::Scheme(s) => write!(f, "{s}"),
            ClassKey::RealPart(h) => write!(f, "{h}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMetadata {
    /// Every permutation of the ovals is realized by a rigid isotopy.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub all_oval_permutations_rigid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub key: ClassKey,
    pub metadata: ClassMetadata,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeCatalogError {
    #[error("{family}: class key {key:?}: {msg}")]
    BadKey {
        family: &'static str,
        key: String,
        msg: String,
    },
    #[error("{family}: duplicate class {key}")]
    Duplicate { family: &'static str, key: String },
    #[error("{family}: expected {expected} classes, found {found}")]
    WrongCount {
        family: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{family}: no class {key:?}")]
    NotFound { family: &'static str, key: String },
}

/// The rigid isotopy classes of one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidIsotopyCatalog {
    family: SchemeFamily,
    classes: Vec<ClassRecord>,
}

impl RigidIsotopyCatalog {
    pub fn new(
        family: SchemeFamily,
        classes: Vec<ClassRecord>,
    ) -> Result<Self, SchemeCatalogError> {
        for (i, c) in classes.iter().enumerate() {
            let ok = matches!(
                (&c.key, family),
                (ClassKey::RealPart(_), SchemeFamily::P4QuadricPair)
                    | (
                        ClassKey::Scheme(RealScheme::Plane(_)),
                        SchemeFamily::PlaneQuartic
                    )
                    | (
                        ClassKey::Scheme(RealScheme::Sigma2(_)),
                        SchemeFamily::Sigma2Cubic
                    )
            );
            if !ok {
                return Err(SchemeCatalogError::BadKey {
                    family: family.name(),
                    key: c.key.to_string(),
                    msg: "wrong key kind for family".into(),
                });
            }
            if classes[..i].iter().any(|d| d.key == c.key) {
                return Err(SchemeCatalogError::Duplicate {
                    family: family.name(),
                    key: c.key.to_string(),
                });
            }
        }
        if classes.len() != family.class_count() {
            return Err(SchemeCatalogError::WrongCount {
                family: family.name(),
                expected: family.class_count(),
                found: classes.len(),
            });
        }
        Ok(RigidIsotopyCatalog { family, classes })
    }

    pub fn family(&self) -> SchemeFamily {
        self.family
    }

    pub fn classes(&self) -> &[ClassRecord] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Parses `key` in the family's notation and looks it up.
    pub fn lookup(&self, key: &str) -> Result<&ClassRecord, SchemeCatalogError> {
        let not_found = || SchemeCatalogError::NotFound {
            family: self.family.name(),
            key: key.to_string(),
        };
        let parsed = parse_class_key(self.family, key).map_err(|_| not_found())?;
        self.classes
            .iter()
            .find(|c| c.key == parsed)
            .ok_or_else(not_found)
    }

    /// Classes of the cone family grouped up to reversal of the zones.
    pub fn reversal_orbits(&self) -> Vec<Vec<&ClassRecord>> {
        let mut orbits: Vec<Vec<&ClassRecord>> = Vec::new();
        for c in &self.classes {
            let ClassKey::Scheme(RealScheme::Sigma2(s)) = &c.key else {
                orbits.push(vec![c]);
                continue;
            };
            let home = orbits.iter_mut().find(|orbit| {
                matches!(&orbit[0].key, ClassKey::Scheme(RealScheme::Sigma2(t)) if reversal_equivalent(s, t))
            });
            match home {
                Some(orbit) => orbit.push(c),
                None => orbits.push(vec![c]),
            }
        }
        orbits
    }
}

pub fn parse_class_key(family: SchemeFamily, key: &str) -> Result<ClassKey, String> {
    match family {
        SchemeFamily::P4QuadricPair => parse_half(key)
            .map(ClassKey::RealPart)
            .map_err(|e| e.to_string()),
        _ => parse_scheme(key)
            .map(ClassKey::Scheme)
            .map_err(|e| e.to_string()),
    }
}

/// The three class catalogs; a family may be absent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SchemeCatalogs {
    catalogs: BTreeMap<SchemeFamily, RigidIsotopyCatalog>,
}

impl SchemeCatalogs {
    pub fn new(catalogs: impl IntoIterator<Item = RigidIsotopyCatalog>) -> Self {
        SchemeCatalogs {
            catalogs: catalogs.into_iter().map(|c| (c.family(), c)).collect(),
        }
    }

    pub fn get(&self, family: SchemeFamily) -> Option<&RigidIsotopyCatalog> {
        self.catalogs.get(&family)
    }

    pub fn iter(&self) -> impl Iterator<Item = &RigidIsotopyCatalog> {
        self.catalogs.values()
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        let size = |f| self.get(f).map_or(0, RigidIsotopyCatalog::len);
        (
            size(SchemeFamily::PlaneQuartic),
            size(SchemeFamily::Sigma2Cubic),
            size(SchemeFamily::P4QuadricPair),
        )
    }
}

pub fn catalog_lookup<'a>(
    catalogs: &'a SchemeCatalogs,
    family: SchemeFamily,
    key: &str,
) -> Result<&'a ClassRecord, SchemeCatalogError> {
    catalogs
        .get(family)
        .ok_or(SchemeCatalogError::NotFound {
            family: family.name(),
            key: key.to_string(),
        })?
        .lookup(key)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> RealScheme {
        parse_scheme(text).unwrap()
    }

    #[test]
    fn parse_examples() {
        let RealScheme::Plane(f) = s("<1<1>>") else {
            panic!()
        };
        assert_eq!(f.roots().len(), 1);
        assert_eq!(f.roots()[0].children(), &[OvalNode::empty()]);

        assert_eq!(s("<4>"), RealScheme::Plane(OvalForest::ovals(4)));

        let RealScheme::Sigma2(z) = s("<3|0>") else {
            panic!()
        };
        assert_eq!(z.zones(), &[OvalForest::ovals(3), OvalForest::default()]);
        assert_eq!(z.bars(), 1);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(RealScheme::Plane(OvalForest::ovals(3)).to_string(), "<3>");
        assert_eq!(s("<1 u 1 u 1>").to_string(), "<3>");
        // Empty ovals sort before nests.
        assert_eq!(s("<1<1> u 1>").to_string(), "<1 u 1<1>>");
        assert_eq!(s("<1 u 1<1>>").to_string(), "<1 u 1<1>>");
        assert_eq!(s("<|||>").to_string(), "<|||>");
        assert_eq!(s("<0|0>").to_string(), "<0|0>");
        assert_eq!(s("<|>").to_string(), "<0|0>");
        assert_eq!(s("<0|0|0|0>").to_string(), "<|||>");
        assert_eq!(s("<0>").to_string(), "<0>");
        assert_eq!(s("<J>").to_string(), "<J>");
        assert_eq!(s("< 2 u J >").to_string(), "<J u 2>");
        assert_eq!(s("<1<0>>").to_string(), "<1>");
        assert_eq!(
            s("<1<1<2>> u 1<1> u 3>").to_string(),
            "<3 u 1<1> u 1<1<2>>>"
        );
        assert_eq!(s("<1<2> u 1<1<1>>>").to_string(), "<1<2> u 1<1<1>>>");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_scheme("<1<J>>"),
            Err(SchemeParseError::NestedJ { pos: 3 })
        ));
        assert!(matches!(
            parse_scheme("<J u J>"),
            Err(SchemeParseError::DuplicateJ { .. })
        ));
        assert!(matches!(
            parse_scheme("<2<1>>"),
            Err(SchemeParseError::MultiSurround { .. })
        ));
        assert!(matches!(
            parse_scheme("<>"),
            Err(SchemeParseError::EmptyBody { .. })
        ));
        for bad in [
            "", "<", "<1", "1", "<1 u>", "<0 u 1>", "<1>>", "<x>", "<1<>>", "<3|0", "<u 1>",
        ] {
            assert!(parse_scheme(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn oval_counts() {
        for n in 0..=9 {
            assert_eq!(s(&format!("<{n}>")).oval_count(), n);
        }
        assert_eq!(s("<1<1<2>> u J>").oval_count(), 4);
    }

    #[test]
    fn reversal() {
        let get = |t: &str| s(t).as_sigma2().unwrap().clone();
        assert!(reversal_equivalent(&get("<3|0>"), &get("<0|3>")));
        assert!(reversal_equivalent(&get("<1|1>"), &get("<1|1>")));
        assert!(!reversal_equivalent(&get("<2|0>"), &get("<0|3>")));
        assert!(!reversal_equivalent(&get("<1|0|0>"), &get("<0|1|0>")));
    }
}
