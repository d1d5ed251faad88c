//! The catalog file: extremal types per family, exceptional decompositions
//! with their quarter partitions, rigid isotopy class lists and root
//! schemes.
//!
//! The file is JSON:
//!
//! ```json
//! {
//!   "version": "1",
//!   "families": [
//!     {
//!       "tag": "DelPezzo",
//!       "extremal": [["V3", "V1 + 4S", "involution lift"]],
//!       "exceptions": [
//!         {"half1": "V3", "half2": "V1 + 4S", "quarters2": [[0, 1, 2], [3, 4]], "group": "Z2xZ2"}
//!       ]
//!     }
//!   ],
//!   "scheme_catalogs": {"PlaneQuartic": [{"key": "<0>"}]},
//!   "root_schemes": [{"key": "four", "scheme": "([] . [] . [] . [] .)", "group": "D8"}]
//! }
//! ```
//!
//! Quarter blocks index the components of a half in canonical order (for
//! `V1 + 4S`: 0 is `V1`, 1 to 4 are the spheres). An extremal entry may carry
//! a third element naming the mechanism that realizes its permutations.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monodromy::{classify_family, ExceptionEntry, Family};
use crate::morse::derive_dag;
use crate::permgroup::{GroupId, UnorderedPartition};
use crate::real_scheme::{
    parse_class_key, ClassMetadata, ClassRecord, RigidIsotopyCatalog, SchemeCatalogs, SchemeFamily,
};
use crate::root_scheme::{parse_root_scheme, RootScheme};
use crate::topology::HalfDecomposition;

pub const DEFAULT_CATALOG_TEXT: &str = include_str!("../data/default_catalog.json");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("invalid catalog: {0}")]
    Validation(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalEntry {
    pub decomposition: HalfDecomposition,
    pub mechanism: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRecord {
    pub family: Family,
    pub extremal: Vec<ExtremalEntry>,
    pub exceptions: Vec<ExceptionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSchemeEntry {
    pub key: String,
    pub scheme: RootScheme,
    /// Not pinned by the proofs; excluded from verification.
    pub provisional: bool,
    /// Group the symmetries should induce on the segments.
    pub group: Option<GroupId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    version: String,
    families: Vec<FamilyRecord>,
    scheme_catalogs: SchemeCatalogs,
    root_schemes: Vec<RootSchemeEntry>,
}

impl Catalog {
    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn families(&self) -> &[FamilyRecord] {
        &self.families
    }

    pub fn family(&self, family: Family) -> Option<&FamilyRecord> {
        self.families.iter().find(|r| r.family == family)
    }

    pub fn scheme_catalogs(&self) -> &SchemeCatalogs {
        &self.scheme_catalogs
    }

    pub fn root_schemes(&self) -> &[RootSchemeEntry] {
        &self.root_schemes
    }

    pub fn root_scheme(&self, key: &str) -> Option<&RootSchemeEntry> {
        self.root_schemes.iter().find(|e| e.key == key)
    }

    pub fn extremal_count(&self) -> usize {
        self.families.iter().map(|f| f.extremal.len()).sum()
    }

    pub fn exception_count(&self) -> usize {
        self.families.iter().map(|f| f.exceptions.len()).sum()
    }

    pub fn exceptions(&self) -> impl Iterator<Item = &ExceptionEntry> {
        self.families.iter().flat_map(|f| f.exceptions.iter())
    }

    /// Mutable access for building test fixtures; the result is revalidated.
    pub fn modified(
        &self,
        edit: impl FnOnce(&mut Vec<FamilyRecord>),
    ) -> Result<Catalog, CatalogError> {
        let mut families = self.families.clone();
        edit(&mut families);
        let c = Catalog {
            families,
            ..self.clone()
        };
        validate(&c)?;
        Ok(c)
    }

    /// Serializes to the file format; `parse` reads it back unchanged.
    pub fn format(&self) -> String {
        let raw = RawCatalog::from(self);
        let mut out = serde_json::to_string_pretty(&raw).expect("catalog serializes");
        out.push('\n');
        out
    }

    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let raw: RawCatalog = serde_json::from_str(text).map_err(|e| CatalogError::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        let catalog = raw.into_catalog()?;
        validate(&catalog)?;
        Ok(catalog)
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Catalog::parse(&text)
}

pub fn embedded_default() -> Catalog {
    Catalog::parse(DEFAULT_CATALOG_TEXT).expect("shipped catalog is valid")
}

fn invalid(msg: impl Into<String>) -> CatalogError {
    CatalogError::Validation(msg.into())
}

fn validate(c: &Catalog) -> Result<(), CatalogError> {
    for (i, record) in c.families.iter().enumerate() {
        if record.family == Family::Unclassified {
            return Err(invalid("family tag Unclassified cannot carry data"));
        }
        if c.families[..i].iter().any(|r| r.family == record.family) {
            return Err(invalid(format!("family {} listed twice", record.family)));
        }
        for e in &record.extremal {
            let found = classify_family(&e.decomposition);
            if found != record.family {
                return Err(invalid(format!(
                    "extremal type {} belongs to family {found}, listed under {}",
                    e.decomposition, record.family
                )));
            }
        }
        for x in &record.exceptions {
            let d = &x.decomposition;
            let reachable = record.extremal.iter().any(|e| {
                e.decomposition.half1 == d.half1 && derive_dag(&e.decomposition).contains(d)
            });
            if !reachable {
                return Err(invalid(format!(
                    "exception {d} is not a Morse derivative of any {} extremal type",
                    record.family
                )));
            }
            if record
                .exceptions
                .iter()
                .filter(|y| y.decomposition == *d)
                .count()
                > 1
            {
                return Err(invalid(format!("exception {d} listed twice")));
            }
            check_quarters(&x.quarters2, d.half2.len(), "quarters2", d)?;
            if let Some(q1) = &x.quarters1 {
                check_quarters(q1, d.half1.len(), "quarters1", d)?;
            }
        }
    }
    for (i, e) in c.root_schemes.iter().enumerate() {
        if c.root_schemes[..i].iter().any(|f| f.key == e.key) {
            return Err(invalid(format!("root scheme key {:?} listed twice", e.key)));
        }
    }
    Ok(())
}

fn check_quarters(
    q: &UnorderedPartition,
    len: usize,
    field: &str,
    d: &HalfDecomposition,
) -> Result<(), CatalogError> {
    match q.max_point() {
        Some(p) if p >= len => Err(invalid(format!(
            "{field} of {d}: component index {p} out of range (half has {len} components)"
        ))),
        _ => Ok(()),
    }
}

// On-disk shapes.

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    version: String,
    #[serde(default)]
    families: Vec<RawFamily>,
    #[serde(default)]
    scheme_catalogs: BTreeMap<SchemeFamily, Vec<RawClass>>,
    #[serde(default)]
    root_schemes: Vec<RawRootScheme>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFamily {
    tag: String,
    #[serde(default)]
    extremal: Vec<Vec<String>>,
    #[serde(default)]
    exceptions: Vec<RawException>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawException {
    half1: String,
    half2: String,
    quarters2: Vec<Vec<usize>>,
    group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quarters1: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    key: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    all_oval_permutations_rigid: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRootScheme {
    key: String,
    scheme: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    provisional: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<String>,
}

fn decomposition(h1: &str, h2: &str, ctx: &str) -> Result<HalfDecomposition, CatalogError> {
    HalfDecomposition::parse(h1, h2).map_err(|e| invalid(format!("{ctx}: {e}")))
}

fn group_id(name: &str, ctx: &str) -> Result<GroupId, CatalogError> {
    name.parse().map_err(|e| invalid(format!("{ctx}: {e}")))
}

fn partition(blocks: Vec<Vec<usize>>, ctx: &str) -> Result<UnorderedPartition, CatalogError> {
    UnorderedPartition::new(blocks).map_err(|e| invalid(format!("{ctx}: {e}")))
}

impl RawCatalog {
    fn into_catalog(self) -> Result<Catalog, CatalogError> {
        let mut families = Vec::new();
        for f in self.families {
            let family: Family = f.tag.parse().map_err(invalid)?;
            let mut extremal = Vec::new();
            for entry in f.extremal {
                let ctx = format!("{} extremal {:?}", f.tag, entry);
                let (h1, h2, mechanism) = match entry.as_slice() {
                    [h1, h2] => (h1, h2, None),
                    [h1, h2, m] => (h1, h2, Some(m.clone())),
                    _ => {
                        return Err(invalid(format!(
                            "{ctx}: expected [half1, half2] or [half1, half2, mechanism]"
                        )))
                    }
                };
                extremal.push(ExtremalEntry {
                    decomposition: decomposition(h1, h2, &ctx)?,
                    mechanism,
                });
            }
            let mut exceptions = Vec::new();
            for x in f.exceptions {
                let ctx = format!("{} exception {{{}}} | {{{}}}", f.tag, x.half1, x.half2);
                exceptions.push(ExceptionEntry {
                    decomposition: decomposition(&x.half1, &x.half2, &ctx)?,
                    quarters2: partition(x.quarters2, &ctx)?,
                    named_group: group_id(&x.group, &ctx)?,
                    quarters1: x.quarters1.map(|q| partition(q, &ctx)).transpose()?,
                });
            }
            families.push(FamilyRecord {
                family,
                extremal,
                exceptions,
            });
        }

        let mut catalogs = Vec::new();
        for (family, classes) in self.scheme_catalogs {
            let records = classes
                .into_iter()
                .map(|c| {
                    let key = parse_class_key(family, &c.key).map_err(|e| {
                        invalid(format!("{} class {:?}: {e}", family.name(), c.key))
                    })?;
                    Ok(ClassRecord {
                        key,
                        metadata: ClassMetadata {
                            all_oval_permutations_rigid: c.all_oval_permutations_rigid,
                        },
                    })
                })
                .collect::<Result<Vec<_>, CatalogError>>()?;
            catalogs.push(
                RigidIsotopyCatalog::new(family, records).map_err(|e| invalid(e.to_string()))?,
            );
        }

        let root_schemes = self
            .root_schemes
            .into_iter()
            .map(|r| {
                let ctx = format!("root scheme {:?}", r.key);
                Ok(RootSchemeEntry {
                    scheme: parse_root_scheme(&r.scheme)
                        .map_err(|e| invalid(format!("{ctx}: {e}")))?,
                    group: r.group.as_deref().map(|g| group_id(g, &ctx)).transpose()?,
                    key: r.key,
                    provisional: r.provisional,
                })
            })
            .collect::<Result<Vec<_>, CatalogError>>()?;

        Ok(Catalog {
            version: self.version,
            families,
            scheme_catalogs: SchemeCatalogs::new(catalogs),
            root_schemes,
        })
    }
}

impl From<&Catalog> for RawCatalog {
    fn from(c: &Catalog) -> Self {
        RawCatalog {
            version: c.version.clone(),
            families: c
                .families
                .iter()
                .map(|f| RawFamily {
                    tag: f.family.tag().to_string(),
                    extremal: f
                        .extremal
                        .iter()
                        .map(|e| {
                            let d = &e.decomposition;
                            let mut v = vec![d.half1.to_string(), d.half2.to_string()];
                            v.extend(e.mechanism.clone());
                            v
                        })
                        .collect(),
                    exceptions: f
                        .exceptions
                        .iter()
                        .map(|x| RawException {
                            half1: x.decomposition.half1.to_string(),
                            half2: x.decomposition.half2.to_string(),
                            quarters2: x.quarters2.clone().into(),
                            group: x.named_group.name(),
                            quarters1: x.quarters1.clone().map(Into::into),
                        })
                        .collect(),
                })
                .collect(),
            scheme_catalogs: c
                .scheme_catalogs
                .iter()
                .map(|cat| {
                    let classes = cat
                        .classes()
                        .iter()
                        .map(|r| RawClass {
                            key: r.key.to_string(),
                            all_oval_permutations_rigid: r.metadata.all_oval_permutations_rigid,
                        })
                        .collect();
                    (cat.family(), classes)
                })
                .collect(),
            root_schemes: c
                .root_schemes
                .iter()
                .map(|r| RawRootScheme {
                    key: r.key.clone(),
                    scheme: r.scheme.to_string(),
                    provisional: r.provisional,
                    group: r.group.map(|g| g.name()),
                })
                .collect(),
        }
    }
}

/// Quarter blocks as half texts, e.g. `(V1 + 2S) | (2S)`.
pub fn describe_quarters(half: &crate::topology::Half, q: &UnorderedPartition) -> String {
    q.blocks()
        .iter()
        .map(|b| {
            let h: crate::topology::Half = b.iter().map(|&i| half.components()[i]).collect();
            format!("({h})")
        })
        .collect::<Vec<_>>()
        .join(" | ")
}
