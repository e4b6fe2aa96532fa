//! The group catalog: generators, orders and known subgroup data, loaded from
//! a TOML document (schema in `data/CATALOG_SCHEMA.md`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::AtlasError;
use crate::permgroup::{GroupTable, Perm, SubgroupHandle};

/// The catalog shipped with the crate.
pub const BUILTIN_CATALOG: &str = include_str!("../../data/catalog.toml");

pub const CATALOG_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupHint {
    pub order: usize,
    pub generators: Vec<String>,
}

/// A suggested `(h, k)` pair for the double-coset search at divisor `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorHint {
    pub a: usize,
    pub h: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub name: String,
    /// Conventional notation, e.g. `L2(8)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display: Option<String>,
    pub degree: usize,
    pub generators: Vec<String>,
    pub claimed_order: usize,
    pub known_subgroup_orders: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subgroup_hints: Vec<SubgroupHint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime_chain_hint: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factor_hints: Vec<FactorHint>,
}

impl GroupSpec {
    /// A spec with no catalog knowledge beyond generators and order.
    pub fn bare(
        name: impl Into<String>,
        degree: usize,
        generators: Vec<String>,
        order: usize,
    ) -> Self {
        GroupSpec {
            name: name.into(),
            display: None,
            degree,
            generators,
            claimed_order: order,
            known_subgroup_orders: Vec::new(),
            subgroup_hints: Vec::new(),
            prime_chain_hint: None,
            factor_hints: Vec::new(),
        }
    }

    pub fn display_name(&self) -> &str {
        self.display.as_deref().unwrap_or(&self.name)
    }

    pub fn parsed_generators(&self) -> Result<Vec<Perm>, AtlasError> {
        parse_list(&self.name, "generators", &self.generators, self.degree)
    }

    /// Enumerates the group from its generators (no order check).
    pub fn table(&self) -> Result<GroupTable, AtlasError> {
        GroupTable::close(&self.parsed_generators()?).map_err(|source| AtlasError::Entry {
            name: self.name.clone(),
            field: "generators",
            message: source.to_string(),
        })
    }

    /// Static checks that need no enumeration.
    pub fn validate(&self) -> Result<(), AtlasError> {
        let entry = |field: &'static str, message: String| AtlasError::Entry {
            name: self.name.clone(),
            field,
            message,
        };
        if self.name.is_empty() {
            return Err(entry("name", "empty name".into()));
        }
        if self.degree == 0 {
            return Err(entry("degree", "degree must be positive".into()));
        }
        if self.claimed_order == 0 {
            return Err(entry("claimed_order", "order must be positive".into()));
        }
        if self.generators.is_empty() {
            return Err(entry(
                "generators",
                "at least one generator required".into(),
            ));
        }
        self.parsed_generators()?;
        if let Some(&m) = self
            .known_subgroup_orders
            .iter()
            .find(|&&m| m == 0 || !self.claimed_order.is_multiple_of(m))
        {
            return Err(entry(
                "known_subgroup_orders",
                format!("{m} does not divide {}", self.claimed_order),
            ));
        }
        for hint in &self.subgroup_hints {
            if hint.order == 0 || !self.claimed_order.is_multiple_of(hint.order) {
                return Err(entry(
                    "subgroup_hints",
                    format!(
                        "order {} does not divide {}",
                        hint.order, self.claimed_order
                    ),
                ));
            }
            parse_list(&self.name, "subgroup_hints", &hint.generators, self.degree)?;
        }
        if let Some(chain) = &self.prime_chain_hint {
            if chain
                .iter()
                .any(|&m| m == 0 || !self.claimed_order.is_multiple_of(m))
            {
                return Err(entry(
                    "prime_chain_hint",
                    "orders must divide the group order".into(),
                ));
            }
        }
        for h in &self.factor_hints {
            let n = self.claimed_order;
            if h.a == 0
                || !n.is_multiple_of(h.a)
                || h.h == 0
                || h.a % h.h != 0
                || h.k == 0
                || !(n / h.a).is_multiple_of(h.k)
            {
                return Err(entry(
                    "factor_hints",
                    format!(
                        "hint (a={}, h={}, k={}) inconsistent with order {n}",
                        h.a, h.h, h.k
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Enumerates the group and checks the claimed order and every subgroup hint.
    pub fn selfcheck(&self) -> Result<GroupTable, AtlasError> {
        self.validate()?;
        let table = self.table()?;
        if table.order() != self.claimed_order {
            return Err(AtlasError::OrderMismatch {
                name: self.name.clone(),
                claimed: self.claimed_order,
                enumerated: table.order(),
            });
        }
        for hint in &self.subgroup_hints {
            let sub = self.hint_subgroup(&table, hint)?;
            if sub.order() != hint.order {
                return Err(AtlasError::Entry {
                    name: self.name.clone(),
                    field: "subgroup_hints",
                    message: format!(
                        "hint for order {} closes to order {}",
                        hint.order,
                        sub.order()
                    ),
                });
            }
        }
        Ok(table)
    }

    /// Closes a hint's generators inside `table`.
    pub fn hint_subgroup(
        &self,
        table: &GroupTable,
        hint: &SubgroupHint,
    ) -> Result<SubgroupHandle, AtlasError> {
        let entry = |message: String| AtlasError::Entry {
            name: self.name.clone(),
            field: "subgroup_hints",
            message,
        };
        let gens = parse_list(&self.name, "subgroup_hints", &hint.generators, self.degree)?
            .iter()
            .map(|p| {
                table
                    .index_of(p)
                    .ok_or_else(|| entry(format!("{p} is not in the group")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        SubgroupHandle::closure(table, &gens, table.order())
            .map_err(|e| entry(e.to_string()))?
            .subgroup()
            .ok_or_else(|| entry("closure too large".into()))
    }
}

fn parse_list(
    name: &str,
    field: &'static str,
    cycles: &[String],
    degree: usize,
) -> Result<Vec<Perm>, AtlasError> {
    cycles
        .iter()
        .map(|c| {
            Perm::parse_cycles(c, degree).map_err(|e| AtlasError::Entry {
                name: name.to_string(),
                field,
                message: format!("{c:?}: {e}"),
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogDocument {
    schema: u32,
    group: Vec<GroupSpec>,
}

/// An ordered list of group specs.
#[derive(Clone, Debug)]
pub struct Catalog {
    groups: Vec<GroupSpec>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CATALOG).expect("builtin catalog is valid")
    }

    pub fn load(path: &Path) -> Result<Self, AtlasError> {
        let text = std::fs::read_to_string(path).map_err(|e| AtlasError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, AtlasError> {
        let doc: CatalogDocument =
            toml::from_str(text).map_err(|e| AtlasError::Schema(e.to_string()))?;
        if doc.schema != CATALOG_SCHEMA_VERSION {
            return Err(AtlasError::Schema(format!(
                "unsupported catalog schema {} (expected {CATALOG_SCHEMA_VERSION})",
                doc.schema
            )));
        }
        let mut names = std::collections::HashSet::new();
        for spec in &doc.group {
            spec.validate()?;
            if !names.insert(spec.name.as_str()) {
                return Err(AtlasError::Entry {
                    name: spec.name.clone(),
                    field: "name",
                    message: "duplicate entry".into(),
                });
            }
        }
        Ok(Catalog { groups: doc.group })
    }

    pub fn groups(&self) -> &[GroupSpec] {
        &self.groups
    }

    pub fn get(&self, name: &str) -> Option<&GroupSpec> {
        self.groups.iter().find(|g| g.name == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.groups.iter().map(|g| g.name.as_str()).collect()
    }
}

/// Loads a catalog file.
pub fn load_catalog(path: &Path) -> Result<Vec<GroupSpec>, AtlasError> {
    Ok(Catalog::load(path)?.groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINI: &str = r#"
schema = 1

[[group]]
name = "S3"
degree = 3
generators = ["(1,2,3)", "(1,2)"]
claimed_order = 6
known_subgroup_orders = [3, 2]

[[group.subgroup_hints]]
order = 3
generators = ["(1,2,3)"]
"#;

    #[test]
    fn parses_minimal_document() {
        let cat = Catalog::parse(MINI).unwrap();
        assert_eq!(cat.names(), vec!["S3"]);
        let t = cat.get("S3").unwrap().selfcheck().unwrap();
        assert_eq!(t.order(), 6);
    }

    #[test]
    fn reports_entry_and_field() {
        let bad = MINI.replace("[3, 2]", "[4]");
        match Catalog::parse(&bad) {
            Err(AtlasError::Entry { name, field, .. }) => {
                assert_eq!(name, "S3");
                assert_eq!(field, "known_subgroup_orders");
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad = MINI.replace("\"(1,2)\"]", "\"(1,4)\"]");
        assert!(matches!(
            Catalog::parse(&bad),
            Err(AtlasError::Entry {
                field: "generators",
                ..
            })
        ));
        let bad = MINI.replace("claimed_order = 6", "claimed_order = 6\nextra = 1");
        assert!(matches!(Catalog::parse(&bad), Err(AtlasError::Schema(_))));
    }

    #[test]
    fn selfcheck_catches_wrong_order() {
        let bad = MINI
            .replace("claimed_order = 6", "claimed_order = 12")
            .replace("[3, 2]", "[3]");
        let cat = Catalog::parse(&bad).unwrap();
        assert!(matches!(
            cat.get("S3").unwrap().selfcheck(),
            Err(AtlasError::OrderMismatch { enumerated: 6, .. })
        ));
    }
}
