//! Realized permutation groups of the components of each half.
//!
//! A hyperbolic decomposition falls into one of three families by its
//! distinguished half. Inside a family, every permutation of homeomorphic
//! components of a half is realized, except that:
//!
//! * for `V3 ⊔ …` families nothing moves the components of the first half;
//! * for the listed exceptional decompositions only permutations of the
//!   second half that preserve its quarter decomposition are realized.
//!
//! The engine answers only for decompositions reachable by Morse
//! simplification of the second half from an extremal type in the catalog.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::catalog::Catalog;
use crate::morse::derive_dag;
use crate::permgroup::{
    identify, partition_stabilizer, young_group, GroupId, PermError, PermGroup, Permutation,
    UnorderedPartition,
};
use crate::topology::{HalfDecomposition, HalfIndex, SurfaceComponent};

/// Flag attached to every result of the `V3 ⊔ …` family.
pub const NOTE_HALF1_OPEN: &str = "half1-homeomorphism-question-open";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `E1 = V(d+2)`, `d >= 1`.
    DelPezzo,
    /// `E1 = V(d) ⊔ …`, `d >= 4`, disconnected.
    GrSurface,
    /// `E1 = V3 ⊔ …`, disconnected.
    TwoRSurface,
    Unclassified,
}

impl Family {
    pub const CLASSIFIED: [Family; 3] = [Family::DelPezzo, Family::GrSurface, Family::TwoRSurface];

    pub fn tag(&self) -> &'static str {
        match self {
            Family::DelPezzo => "DelPezzo",
            Family::GrSurface => "GR_Surface",
            Family::TwoRSurface => "TwoR_Surface",
            Family::Unclassified => "Unclassified",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Family::DelPezzo,
            Family::GrSurface,
            Family::TwoRSurface,
            Family::Unclassified,
        ]
        .into_iter()
        .find(|f| f.tag() == s)
        .ok_or_else(|| format!("unknown family tag {s:?}"))
    }
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.tag())
    }
}

pub fn classify_family(d: &HalfDecomposition) -> Family {
    let comps = d.half1.components();
    let crosscaps = || {
        comps.iter().filter_map(|c| match *c {
            SurfaceComponent::Nonorientable(p) => Some(p),
            _ => None,
        })
    };
    match comps {
        [SurfaceComponent::Nonorientable(p)] if *p >= 3 => Family::DelPezzo,
        _ if comps.len() >= 2 && crosscaps().any(|p| p == 3) => Family::TwoRSurface,
        _ if comps.len() >= 2 && crosscaps().any(|p| p >= 4) => Family::GrSurface,
        _ => Family::Unclassified,
    }
}

/// A decomposition whose second-half group is cut down by its quarters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionEntry {
    pub decomposition: HalfDecomposition,
    /// Blocks of canonical component indices of the second half.
    pub quarters2: UnorderedPartition,
    pub named_group: GroupId,
    /// Quarters of the first half; recorded, never used by the engine.
    pub quarters1: Option<UnorderedPartition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("{0} is not a derivative of any cataloged extremal type")]
    NotInCatalog(HalfDecomposition),
    #[error(transparent)]
    Perm(#[from] PermError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupReport {
    pub group: PermGroup,
    pub id: GroupId,
}

impl GroupReport {
    pub fn new(group: PermGroup) -> Self {
        let id = identify(&group);
        GroupReport { group, id }
    }
}

impl Serialize for GroupReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let gens: Vec<String> = self
            .group
            .generators()
            .iter()
            .map(ToString::to_string)
            .collect();
        let mut st = serializer.serialize_struct("GroupReport", 3)?;
        st.serialize_field("order", &self.group.order())?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("generators", &gens)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonodromyResult {
    pub family: Family,
    #[serde(rename = "half1")]
    pub group_half1: GroupReport,
    #[serde(rename = "half2")]
    pub group_half2: GroupReport,
    pub exceptional: bool,
    #[serde(rename = "quarters")]
    pub quarter_partition: Option<UnorderedPartition>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mechanism: Option<String>,
}

impl MonodromyResult {
    pub fn group(&self, index: HalfIndex) -> &GroupReport {
        match index {
            HalfIndex::First => &self.group_half1,
            HalfIndex::Second => &self.group_half2,
        }
    }
}

pub fn monodromy_group(
    d: &HalfDecomposition,
    catalog: &Catalog,
) -> Result<MonodromyResult, MonodromyError> {
    let family = classify_family(d);
    let not_found = || MonodromyError::NotInCatalog(d.clone());
    let record = catalog.family(family).ok_or_else(not_found)?;
    let extremal = record
        .extremal
        .iter()
        .find(|e| e.decomposition.half1 == d.half1 && derive_dag(&e.decomposition).contains(d))
        .ok_or_else(not_found)?;

    let mut notes = Vec::new();
    let group1 = match family {
        Family::GrSurface => young_group(&d.half1.labeled()),
        Family::TwoRSurface => {
            notes.push(NOTE_HALF1_OPEN.to_string());
            PermGroup::trivial(d.half1.len())
        }
        _ => PermGroup::trivial(d.half1.len()),
    };

    let young2 = young_group(&d.half2.labeled());
    let exception = record.exceptions.iter().find(|x| x.decomposition == *d);
    let (group2, quarters) = match exception {
        Some(x) => (
            partition_stabilizer(&young2, &x.quarters2)?,
            Some(x.quarters2.clone()),
        ),
        None => (young2, None),
    };

    Ok(MonodromyResult {
        family,
        group_half1: GroupReport::new(group1),
        group_half2: GroupReport::new(group2),
        exceptional: exception.is_some(),
        quarter_partition: quarters,
        notes,
        mechanism: extremal.mechanism.clone(),
    })
}

/// Whether `pi`, acting on the canonical component indices of the chosen
/// half, is realized by deformations and automorphisms.
pub fn is_realizable(
    d: &HalfDecomposition,
    half: HalfIndex,
    pi: &Permutation,
    catalog: &Catalog,
) -> Result<bool, MonodromyError> {
    let result = monodromy_group(d, catalog)?;
    Ok(result.group(half).group.contains(pi)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: String, passed: bool, detail: String) {
        self.checks.push(Check {
            name,
            passed,
            detail,
        });
    }
}

/// Recomputes every group the catalog makes a claim about.
///
/// Exceptions must reproduce their named group. Every other derivative with
/// homeomorphic components must get the full product of symmetric groups
/// (on both halves for the `V(d≥4) ⊔ …` family, on the second half
/// otherwise). Non-provisional root schemes with a named group must induce
/// it on their segments.
pub fn verify_catalog(catalog: &Catalog) -> VerifyReport {
    let mut report = VerifyReport::default();
    for record in catalog.families() {
        for x in &record.exceptions {
            let name = format!("exception {}", x.decomposition);
            match monodromy_group(&x.decomposition, catalog) {
                Ok(r) => {
                    let passed = r.exceptional && r.group_half2.id == x.named_group;
                    let detail = format!(
                        "quarters {} -> order {} {} (expected {})",
                        x.quarters2,
                        r.group_half2.group.order(),
                        r.group_half2.id,
                        x.named_group
                    );
                    report.push(name, passed, detail);
                }
                Err(e) => report.push(name, false, e.to_string()),
            }
        }

        let mut seen = Vec::new();
        for e in &record.extremal {
            for d in derive_dag(&e.decomposition).nodes() {
                if seen.contains(d) || record.exceptions.iter().any(|x| x.decomposition == *d) {
                    continue;
                }
                seen.push(d.clone());
                let half1_moves =
                    record.family == Family::GrSurface && d.half1.has_repeated_components();
                if !d.half2.has_repeated_components() && !half1_moves {
                    continue;
                }
                let name = format!("full {}", d);
                match monodromy_group(d, catalog) {
                    Ok(r) => {
                        let young1 = young_group(&d.half1.labeled());
                        let young2 = young_group(&d.half2.labeled());
                        let half1_ok = if record.family == Family::GrSurface {
                            r.group_half1.group == young1
                        } else {
                            r.group_half1.group.is_trivial()
                        };
                        let passed = !r.exceptional && half1_ok && r.group_half2.group == young2;
                        let detail = format!(
                            "half1 {} (order {}), half2 {} (order {}, full {})",
                            r.group_half1.id,
                            r.group_half1.group.order(),
                            r.group_half2.id,
                            r.group_half2.group.order(),
                            young2.order()
                        );
                        report.push(name, passed, detail);
                    }
                    Err(e) => report.push(name, false, e.to_string()),
                }
            }
        }
    }
    for entry in catalog.root_schemes() {
        let Some(expected) = entry.group else {
            continue;
        };
        if entry.provisional {
            continue;
        }
        let (_, g) = crate::root_scheme::symmetry_group(&entry.scheme);
        let id = identify(&g);
        report.push(
            format!("root scheme {}", entry.key),
            id == expected,
            format!(
                "{} -> order {} {} (expected {})",
                entry.scheme,
                g.order(),
                id,
                expected
            ),
        );
    }
    report
}
