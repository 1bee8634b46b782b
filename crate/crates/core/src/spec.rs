//! JSON action specifications.
//!
//! ```json
//! {"label": "optional",
//!  "group": {"kind": "cyclic", "order": 3} | {"kind": "table", "table": [[0,1],[1,0]]},
//!  "space": {"points": ["x0", "v"], "opens": [[], ["v"], ["x0", "v"]]},
//!  "domains": {"0": ["x0", "v"], "1": ["v"]},
//!  "maps": {"0": {"x0": "x0", "v": "v"}, "1": {"v": "v"}}}
//! ```
//!
//! Group elements are decimal-string indices. `domains["g"]` lists `X_g`;
//! `maps["g"]` is `m_g` on `X_{g⁻¹}`. Missing elements have empty domain and
//! map. The open sets generate the topology.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::group::FiniteGroup;
use crate::paction::PartialAction;
use crate::subset::{Subset, MAX_POINTS};
use crate::topology::FinTop;

/// Largest carrier accepted from input; `X×X` must fit in a [`Subset`].
pub const MAX_INPUT_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> InputError {
    InputError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic { order: usize },
    Table { table: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpec {
    pub label: Option<String>,
    pub group: GroupSpec,
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
    pub domains: BTreeMap<usize, Vec<String>>,
    pub maps: BTreeMap<usize, BTreeMap<String, String>>,
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, InputError> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, InputError> {
    obj.get(key)
        .ok_or_else(|| schema(format!("{path}/{key}"), "missing required field"))
}

fn only_keys(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<(), InputError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(schema(format!("{path}/{k}"), "unknown field")),
        None => Ok(()),
    }
}

fn string(v: &Value, path: &str) -> Result<String, InputError> {
    v.as_str()
        .map(str::to_owned)
        .ok_or_else(|| schema(path, "expected a string"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, InputError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn index(v: &Value, path: &str) -> Result<usize, InputError> {
    v.as_u64()
        .and_then(|u| usize::try_from(u).ok())
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn string_list(v: &Value, path: &str) -> Result<Vec<String>, InputError> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| string(s, &format!("{path}/{i}")))
        .collect()
}

/// JSON-pointer escaping of one path segment.
fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn element_key(key: &str, order: usize, path: &str) -> Result<usize, InputError> {
    let canonical = key == "0" || (!key.starts_with('0') && !key.is_empty());
    match key.parse::<usize>() {
        Ok(g) if canonical && key.bytes().all(|b| b.is_ascii_digit()) && g < order => Ok(g),
        _ => Err(schema(
            format!("{path}/{}", escape(key)),
            format!("expected a group element index below {order}"),
        )),
    }
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, crate::Error> {
        match self {
            GroupSpec::Cyclic { order } => {
                if *order > MAX_POINTS {
                    return Err(crate::Error::TooLarge {
                        what: "group",
                        size: *order,
                        max: MAX_POINTS,
                    });
                }
                FiniteGroup::cyclic(*order)
            }
            GroupSpec::Table { table } => FiniteGroup::from_table(table),
        }
    }
}

impl ActionSpec {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| InputError::Parse(e.to_string()))?;
        Self::from_value(&doc)
    }

    pub fn from_value(doc: &Value) -> Result<Self, InputError> {
        let root = object(doc, "")?;
        only_keys(root, &["label", "group", "space", "domains", "maps"], "")?;

        let label = root.get("label").map(|v| string(v, "/label")).transpose()?;

        let group_obj = object(field(root, "group", "")?, "/group")?;
        let kind = string(field(group_obj, "kind", "/group")?, "/group/kind")?;
        let group = match kind.as_str() {
            "cyclic" => {
                only_keys(group_obj, &["kind", "order"], "/group")?;
                GroupSpec::Cyclic {
                    order: index(field(group_obj, "order", "/group")?, "/group/order")?,
                }
            }
            "table" => {
                only_keys(group_obj, &["kind", "table"], "/group")?;
                let rows = array(field(group_obj, "table", "/group")?, "/group/table")?;
                let table = rows
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        let p = format!("/group/table/{i}");
                        array(row, &p)?
                            .iter()
                            .enumerate()
                            .map(|(j, e)| index(e, &format!("{p}/{j}")))
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                GroupSpec::Table { table }
            }
            _ => return Err(schema("/group/kind", "expected \"cyclic\" or \"table\"")),
        };
        let built = group.build().map_err(|e| schema("/group", e.to_string()))?;
        let order = built.order();

        let space = object(field(root, "space", "")?, "/space")?;
        only_keys(space, &["points", "opens"], "/space")?;
        let points = string_list(field(space, "points", "/space")?, "/space/points")?;
        if points.len() > MAX_INPUT_POINTS {
            return Err(schema(
                "/space/points",
                format!("{} points, at most {MAX_INPUT_POINTS} supported", points.len()),
            ));
        }
        if order * points.len() > MAX_POINTS {
            return Err(schema(
                "/space/points",
                format!(
                    "G×X has {} points, at most {MAX_POINTS} supported",
                    order * points.len()
                ),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(schema(
                    format!("/space/points/{i}"),
                    format!("duplicate point {p:?}"),
                ));
            }
        }
        let known = |name: &str, path: String| -> Result<(), InputError> {
            if points.iter().any(|p| p == name) {
                Ok(())
            } else {
                Err(schema(path, format!("unknown point {name:?}")))
            }
        };

        let opens_v = array(field(space, "opens", "/space")?, "/space/opens")?;
        let mut opens = Vec::with_capacity(opens_v.len());
        for (i, o) in opens_v.iter().enumerate() {
            let p = format!("/space/opens/{i}");
            let names = string_list(o, &p)?;
            for (j, n) in names.iter().enumerate() {
                known(n, format!("{p}/{j}"))?;
            }
            opens.push(names);
        }

        let mut domains = BTreeMap::new();
        for (key, v) in object(field(root, "domains", "")?, "/domains")? {
            let g = element_key(key, order, "/domains")?;
            let p = format!("/domains/{}", escape(key));
            let names = string_list(v, &p)?;
            for (j, n) in names.iter().enumerate() {
                known(n, format!("{p}/{j}"))?;
                if names[..j].contains(n) {
                    return Err(schema(format!("{p}/{j}"), format!("duplicate point {n:?}")));
                }
            }
            domains.insert(g, names);
        }

        let mut maps = BTreeMap::new();
        for (key, v) in object(field(root, "maps", "")?, "/maps")? {
            let g = element_key(key, order, "/maps")?;
            let p = format!("/maps/{}", escape(key));
            let mut m = BTreeMap::new();
            for (src, dst) in object(v, &p)? {
                let q = format!("{p}/{}", escape(src));
                known(src, q.clone())?;
                let dst = string(dst, &q)?;
                known(&dst, q)?;
                m.insert(src.clone(), dst);
            }
            maps.insert(g, m);
        }

        let id = built.identity();
        let id_domain = domains.get(&id).map(Vec::as_slice).unwrap_or_default();
        if id_domain.len() != points.len() {
            return Err(schema(
                format!("/domains/{id}"),
                "the identity element's domain must be the whole point list",
            ));
        }

        Ok(ActionSpec {
            label,
            group,
            points,
            opens,
            domains,
            maps,
        })
    }

    pub fn to_value(&self) -> Value {
        let mut root = Map::new();
        if let Some(l) = &self.label {
            root.insert("label".into(), json!(l));
        }
        root.insert(
            "group".into(),
            match &self.group {
                GroupSpec::Cyclic { order } => json!({"kind": "cyclic", "order": order}),
                GroupSpec::Table { table } => json!({"kind": "table", "table": table}),
            },
        );
        root.insert(
            "space".into(),
            json!({"points": self.points, "opens": self.opens}),
        );
        let domains: Map<String, Value> = self
            .domains
            .iter()
            .map(|(g, d)| (g.to_string(), json!(d)))
            .collect();
        root.insert("domains".into(), Value::Object(domains));
        let maps: Map<String, Value> = self.maps.iter().map(|(g, m)| (g.to_string(), json!(m))).collect();
        root.insert("maps".into(), Value::Object(maps));
        Value::Object(root)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("values serialize")
    }

    /// Spec for `pa` with points named by `names`; the group is written as a
    /// table and the topology by its minimal neighbourhoods.
    pub fn from_partial_action(pa: &PartialAction, names: &[String], label: Option<String>) -> Self {
        assert_eq!(names.len(), pa.size(), "one name per point");
        let group = pa.group();
        let named = |s: Subset| s.iter().map(|x| names[x].clone()).collect::<Vec<_>>();
        ActionSpec {
            label,
            group: GroupSpec::Table { table: group.table() },
            points: names.to_vec(),
            opens: pa.space().neighbourhoods().iter().map(|&u| named(u)).collect(),
            domains: group.elements().map(|g| (g, named(pa.domain(g)))).collect(),
            maps: group
                .elements()
                .map(|g| {
                    let m = (0..pa.size())
                        .filter_map(|x| pa.apply(g, x).map(|y| (names[x].clone(), names[y].clone())))
                        .collect();
                    (g, m)
                })
                .collect(),
        }
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    /// Resolves names to indices and assembles the partial action. Axioms are
    /// not checked here.
    pub fn to_partial_action(&self) -> Result<PartialAction, InputError> {
        let group = self.group.build().map_err(|e| schema("/group", e.to_string()))?;
        let n = self.points.len();
        let idx = |name: &String| self.point_index(name).expect("names validated");
        let generators: Vec<Subset> = self.opens.iter().map(|o| o.iter().map(idx).collect()).collect();
        let space = FinTop::generated(n, &generators).map_err(|e| schema("/space", e.to_string()))?;
        let dom = group
            .elements()
            .map(|g| {
                self.domains
                    .get(&g)
                    .map(|d| d.iter().map(idx).collect())
                    .unwrap_or_default()
            })
            .collect();
        let map = group
            .elements()
            .map(|g| {
                let mut row = vec![None; n];
                if let Some(m) = self.maps.get(&g) {
                    for (src, dst) in m {
                        row[idx(src)] = Some(idx(dst));
                    }
                }
                row
            })
            .collect();
        PartialAction::new(group, space, dom, map).map_err(|e| schema("", e.to_string()))
    }
}

/// The finite analog of the integer example, shipped with the crate.
pub const BUNDLED_EXAMPLE: &str = include_str!("../data/example48.json");
