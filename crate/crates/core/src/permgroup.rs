//! Finite permutation groups stored by explicit element enumeration.
//!
//! Degrees here are tiny (the largest half has eight components), so a
//! group is just a closed `BTreeSet` of permutations. Breadth-first closure
//! builds it from generators; stabilizers are filters over the elements.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::topology::LabeledHalf;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("not a bijection of 0..{degree}: {images:?}")]
    NotBijective { degree: usize, images: Vec<usize> },
    #[error("degree mismatch: expected {expected}, got {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("point {point} outside 0..{degree}")]
    UnknownPoint { point: usize, degree: usize },
    #[error("point {0} appears in more than one block")]
    OverlappingBlocks(usize),
    #[error("empty block")]
    EmptyBlock,
    #[error("malformed cycle notation at position {pos}: {msg}")]
    CycleSyntax { pos: usize, msg: &'static str },
}

/// A bijection of `{0, …, n-1}` given by its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(PermError::NotBijective { degree: n, images });
            }
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a >= degree || b >= degree {
                    return Err(PermError::UnknownPoint {
                        point: a.max(b),
                        degree,
                    });
                }
                if std::mem::replace(&mut touched[a], true) {
                    return Err(PermError::NotBijective { degree, images });
                }
                images[a] = b;
            }
        }
        Permutation::from_images(images)
    }

    pub fn transposition(degree: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..degree).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// `conj ∘ self ∘ conj⁻¹`.
    pub fn conjugate_by(&self, conj: &Permutation) -> Permutation {
        conj.compose(self).compose(&conj.inverse())
    }

    pub fn order(&self) -> usize {
        self.cycles()
            .iter()
            .map(Vec::len)
            .fold(1, |acc, len| acc / gcd(acc, len) * len)
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.images[start];
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.images[next];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Parses cycle notation such as `"(0 1)(2 3)"`; `"()"` is the identity.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self, PermError> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number: Option<(usize, usize)> = None;
        let flush = |number: &mut Option<(usize, usize)>, current: &mut Option<Vec<usize>>| {
            if let Some((_, n)) = number.take() {
                current
                    .as_mut()
                    .expect("digits only inside a cycle")
                    .push(n);
            }
        };
        for (pos, ch) in text.char_indices() {
            match ch {
                '(' if current.is_none() => current = Some(Vec::new()),
                ')' if current.is_some() => {
                    flush(&mut number, &mut current);
                    let cycle = current.take().unwrap();
                    if !cycle.is_empty() {
                        cycles.push(cycle);
                    }
                }
                d if d.is_ascii_digit() && current.is_some() => {
                    let digit = d.to_digit(10).unwrap() as usize;
                    let (start, n) = number.unwrap_or((pos, 0));
                    let n = n.checked_mul(10).and_then(|n| n.checked_add(digit)).ok_or(
                        PermError::CycleSyntax {
                            pos: start,
                            msg: "number too large",
                        },
                    )?;
                    number = Some((start, n));
                }
                c if (c.is_whitespace() || c == ',') => flush(&mut number, &mut current),
                _ => {
                    return Err(PermError::CycleSyntax {
                        pos,
                        msg: "unexpected character",
                    })
                }
            }
        }
        if current.is_some() {
            return Err(PermError::CycleSyntax {
                pos: text.len(),
                msg: "unclosed cycle",
            });
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(degree, &refs)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, p) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A finite permutation group: a set of permutations closed under
/// composition, containing the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    elements: BTreeSet<Permutation>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            elements: BTreeSet::from([Permutation::identity(degree)]),
        }
    }

    pub fn symmetric(degree: usize) -> Self {
        let gens: Vec<_> = (1..degree)
            .map(|i| Permutation::transposition(degree, i - 1, i))
            .collect();
        generate(degree, &gens).expect("transpositions are bijections")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Permutation> {
        self.elements.iter()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, pi: &Permutation) -> Result<bool, PermError> {
        if pi.degree() != self.degree {
            return Err(PermError::DegreeMismatch {
                expected: self.degree,
                found: pi.degree(),
            });
        }
        Ok(self.elements.contains(pi))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.is_subset(&other.elements)
    }

    /// Checks the group axioms on the stored element set.
    pub fn is_closed(&self) -> bool {
        self.elements.contains(&Permutation::identity(self.degree))
            && self.elements.iter().all(|g| {
                self.elements.contains(&g.inverse())
                    && self
                        .elements
                        .iter()
                        .all(|h| self.elements.contains(&g.compose(h)))
            })
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|g| self.elements.iter().all(|h| g.compose(h) == h.compose(g)))
    }

    /// Element order → number of elements of that order.
    pub fn element_order_counts(&self) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for g in &self.elements {
            *counts.entry(g.order()).or_insert(0) += 1;
        }
        counts
    }

    /// A small generating set, chosen greedily over the sorted elements so
    /// the result is deterministic.
    pub fn generators(&self) -> Vec<Permutation> {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut span = PermGroup::trivial(self.degree);
        for g in &self.elements {
            if !span.elements.contains(g) {
                gens.push(g.clone());
                span = generate(self.degree, &gens).expect("elements are bijections");
            }
        }
        gens
    }

    /// Image of the group under relabeling of the points by `conj`.
    pub fn conjugate_by(&self, conj: &Permutation) -> PermGroup {
        PermGroup {
            degree: self.degree,
            elements: self.elements.iter().map(|g| g.conjugate_by(conj)).collect(),
        }
    }

    pub fn filter(&self, mut keep: impl FnMut(&Permutation) -> bool) -> PermGroup {
        PermGroup {
            degree: self.degree,
            elements: self.elements.iter().filter(|g| keep(g)).cloned().collect(),
        }
    }

    pub fn from_closed_elements(
        degree: usize,
        elements: impl IntoIterator<Item = Permutation>,
    ) -> Option<PermGroup> {
        let group = PermGroup {
            degree,
            elements: elements.into_iter().collect(),
        };
        (group.elements.iter().all(|g| g.degree() == degree) && group.is_closed()).then_some(group)
    }
}

/// Smallest subgroup of `Sym(degree)` containing `generators`.
pub fn generate(degree: usize, generators: &[Permutation]) -> Result<PermGroup, PermError> {
    for g in generators {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        Permutation::from_images(g.images.clone())?;
    }
    let identity = Permutation::identity(degree);
    let mut elements = BTreeSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.compose(&x);
            if elements.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    Ok(PermGroup { degree, elements })
}

/// Direct product of the full symmetric groups on the homeomorphism classes
/// of `h`, acting on the positions of `h`'s entries.
pub fn young_group(h: &LabeledHalf) -> PermGroup {
    young_group_of_blocks(h.len(), &h.class_positions())
}

pub fn young_group_of_blocks(degree: usize, blocks: &[Vec<usize>]) -> PermGroup {
    let gens: Vec<Permutation> = blocks
        .iter()
        .flat_map(|b| {
            b.windows(2)
                .map(|w| Permutation::transposition(degree, w[0], w[1]))
        })
        .collect();
    generate(degree, &gens).expect("transpositions are bijections")
}

/// A set of pairwise disjoint nonempty blocks of points. Points outside
/// every block are unconstrained.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct UnorderedPartition {
    blocks: Vec<BTreeSet<usize>>,
}

impl UnorderedPartition {
    pub fn new(
        blocks: impl IntoIterator<Item = impl IntoIterator<Item = usize>>,
    ) -> Result<Self, PermError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for block in blocks {
            let block: BTreeSet<usize> = block.into_iter().collect();
            if block.is_empty() {
                return Err(PermError::EmptyBlock);
            }
            for &p in &block {
                if !seen.insert(p) {
                    return Err(PermError::OverlappingBlocks(p));
                }
            }
            out.push(block);
        }
        out.sort();
        Ok(UnorderedPartition { blocks: out })
    }

    pub fn blocks(&self) -> &[BTreeSet<usize>] {
        &self.blocks
    }

    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().flatten().copied()
    }

    pub fn max_point(&self) -> Option<usize> {
        self.points().max()
    }

    /// Whether `pi` maps every block onto some block.
    pub fn is_preserved_by(&self, pi: &Permutation) -> bool {
        self.blocks.iter().all(|block| {
            let image: BTreeSet<usize> = block.iter().map(|&p| pi.apply(p)).collect();
            self.blocks.contains(&image)
        })
    }
}

impl TryFrom<Vec<Vec<usize>>> for UnorderedPartition {
    type Error = PermError;

    fn try_from(value: Vec<Vec<usize>>) -> Result<Self, Self::Error> {
        UnorderedPartition::new(value)
    }
}

impl From<UnorderedPartition> for Vec<Vec<usize>> {
    fn from(p: UnorderedPartition) -> Self {
        p.blocks
            .into_iter()
            .map(|b| b.into_iter().collect())
            .collect()
    }
}

impl fmt::Display for UnorderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            f.write_str("{")?;
            for (j, p) in block.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// Elements of `g` that permute the blocks of `p` among themselves.
pub fn partition_stabilizer(g: &PermGroup, p: &UnorderedPartition) -> Result<PermGroup, PermError> {
    if let Some(point) = p.points().find(|&x| x >= g.degree()) {
        return Err(PermError::UnknownPoint {
            point,
            degree: g.degree(),
        });
    }
    Ok(g.filter(|pi| p.is_preserved_by(pi)))
}

pub fn contains(g: &PermGroup, pi: &Permutation) -> Result<bool, PermError> {
    g.contains(pi)
}

/// Small-group isomorphism label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupId {
    Trivial,
    Z2,
    Z3,
    Z4,
    Z2xZ2,
    S3,
    Z6,
    Z8,
    Z4xZ2,
    Z2Cubed,
    D8,
    Q8,
    A4,
    /// Abelian groups of order 12 (Z12 and Z2 × Z6).
    Z12Class,
    S4,
    Other(usize),
}

// (name, order, abelian, element-order histogram as (order, count) pairs)
type Signature = (GroupId, usize, bool, &'static [(usize, usize)]);

const SIGNATURES: &[Signature] = &[
    (GroupId::Trivial, 1, true, &[(1, 1)]),
    (GroupId::Z2, 2, true, &[(1, 1), (2, 1)]),
    (GroupId::Z3, 3, true, &[(1, 1), (3, 2)]),
    (GroupId::Z4, 4, true, &[(1, 1), (2, 1), (4, 2)]),
    (GroupId::Z2xZ2, 4, true, &[(1, 1), (2, 3)]),
    (GroupId::S3, 6, false, &[(1, 1), (2, 3), (3, 2)]),
    (GroupId::Z6, 6, true, &[(1, 1), (2, 1), (3, 2), (6, 2)]),
    (GroupId::Z8, 8, true, &[(1, 1), (2, 1), (4, 2), (8, 4)]),
    (GroupId::Z4xZ2, 8, true, &[(1, 1), (2, 3), (4, 4)]),
    (GroupId::Z2Cubed, 8, true, &[(1, 1), (2, 7)]),
    (GroupId::D8, 8, false, &[(1, 1), (2, 5), (4, 2)]),
    (GroupId::Q8, 8, false, &[(1, 1), (2, 1), (4, 6)]),
    (GroupId::A4, 12, false, &[(1, 1), (2, 3), (3, 8)]),
    (
        GroupId::Z12Class,
        12,
        true,
        &[(1, 1), (2, 1), (3, 2), (4, 2), (6, 2), (12, 4)],
    ),
    (
        GroupId::Z12Class,
        12,
        true,
        &[(1, 1), (2, 3), (3, 2), (6, 6)],
    ),
    (GroupId::S4, 24, false, &[(1, 1), (2, 9), (3, 8), (4, 6)]),
];

impl GroupId {
    pub fn name(&self) -> String {
        match self {
            GroupId::Trivial => "1".into(),
            GroupId::Z2 => "Z2".into(),
            GroupId::Z3 => "Z3".into(),
            GroupId::Z4 => "Z4".into(),
            GroupId::Z2xZ2 => "Z2xZ2".into(),
            GroupId::S3 => "S3".into(),
            GroupId::Z6 => "Z6".into(),
            GroupId::Z8 => "Z8".into(),
            GroupId::Z4xZ2 => "Z4xZ2".into(),
            GroupId::Z2Cubed => "Z2^3".into(),
            GroupId::D8 => "D8".into(),
            GroupId::Q8 => "Q8".into(),
            GroupId::A4 => "A4".into(),
            GroupId::Z12Class => "Z12-class".into(),
            GroupId::S4 => "S4".into(),
            GroupId::Other(n) => format!("other({n})"),
        }
    }

    /// Notation used when the group is read as a permutation group of
    /// homeomorphic components: the symmetric groups S2 and S3, and
    /// "trivial" for the one-element group.
    pub fn alias(&self) -> String {
        match self {
            GroupId::Trivial => "trivial".into(),
            GroupId::Z2 => "S2".into(),
            other => other.name(),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown group name {0:?}")]
pub struct UnknownGroupName(pub String);

impl FromStr for GroupId {
    type Err = UnknownGroupName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let named = SIGNATURES.iter().map(|s| s.0).find(|id| id.name() == s);
        if let Some(id) = named {
            return Ok(id);
        }
        match s {
            "S2" => Ok(GroupId::Z2),
            "trivial" => Ok(GroupId::Trivial),
            _ => s
                .strip_prefix("other(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|n| n.parse().ok())
                .map(GroupId::Other)
                .ok_or_else(|| UnknownGroupName(s.to_string())),
        }
    }
}

impl Serialize for GroupId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for GroupId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Names `g` by its order, commutativity and element-order histogram.
pub fn identify(g: &PermGroup) -> GroupId {
    let order = g.order();
    let abelian = g.is_abelian();
    let counts = g.element_order_counts();
    SIGNATURES
        .iter()
        .find(|(_, n, ab, hist)| {
            *n == order
                && *ab == abelian
                && hist.len() == counts.len()
                && hist.iter().all(|(o, c)| counts.get(o) == Some(c))
        })
        .map_or(GroupId::Other(order), |s| s.0)
}
