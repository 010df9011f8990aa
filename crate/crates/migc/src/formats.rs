//! JSON and DOT file formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use migc_core::scenarios::{LayoutSet, Placement};
use migc_core::{
    CodeReport, DecisionTree, Distribution, Node, QuerySet, Question, RawQuery, SymbolSet,
};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A label may be written as a JSON string or number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Text(String),
    Number(serde_json::Number),
}

impl Label {
    fn into_string(self) -> String {
        match self {
            Label::Text(s) => s,
            Label::Number(n) => n.to_string(),
        }
    }
}

/// `{"labels": [...], "probs": [...]}`. Missing labels default to `1..N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    #[serde(default)]
    pub labels: Vec<Label>,
    pub probs: Vec<f64>,
}

/// A validated distribution plus, when zero-mass symbols were dropped, the
/// map from file index to distribution index.
#[derive(Debug, Clone)]
pub struct LoadedDistribution {
    pub dist: Distribution,
    pub map: Option<Vec<Option<usize>>>,
}

impl DistributionFile {
    fn labels(&self) -> Vec<String> {
        if self.labels.is_empty() {
            (1..=self.probs.len()).map(|i| i.to_string()).collect()
        } else {
            self.labels
                .iter()
                .cloned()
                .map(Label::into_string)
                .collect()
        }
    }

    pub fn to_distribution(&self) -> Result<Distribution> {
        Ok(Distribution::new(self.labels(), self.probs.clone())?)
    }

    /// With `allow_zero`, zero-mass symbols are removed before validation.
    pub fn load(&self, allow_zero: bool) -> Result<LoadedDistribution> {
        if !allow_zero {
            return Ok(LoadedDistribution {
                dist: self.to_distribution()?,
                map: None,
            });
        }
        let (dist, map) = Distribution::without_zero_mass(self.labels(), self.probs.clone())?;
        let map = map.iter().any(Option::is_none).then_some(map);
        Ok(LoadedDistribution { dist, map })
    }

    pub fn from_distribution(dist: &Distribution) -> Self {
        Self {
            labels: dist.labels().iter().cloned().map(Label::Text).collect(),
            probs: dist.probs().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    pub id: usize,
    pub cells: Vec<Vec<usize>>,
}

/// `{"d": 3, "unconstrained": false, "queries": [{"id": 0, "cells": [[0, 1], [2]]}]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuerySetFile {
    pub d: u32,
    #[serde(default)]
    pub unconstrained: bool,
    #[serde(default)]
    pub queries: Vec<QueryFile>,
}

impl QuerySetFile {
    pub fn unconstrained(d: u32) -> Self {
        Self {
            d,
            unconstrained: true,
            queries: Vec::new(),
        }
    }

    /// Canonical pool over `n` symbols.
    pub fn to_query_set(&self, n: usize) -> Result<QuerySet> {
        if self.unconstrained {
            if !self.queries.is_empty() {
                return Err(Error::Format(
                    "an unconstrained query set must not list queries".into(),
                ));
            }
            return Ok(QuerySet::unconstrained(self.d, n)?);
        }
        let raw = self
            .queries
            .iter()
            .map(|q| RawQuery {
                id: q.id,
                cells: q.cells.clone(),
            })
            .collect();
        Ok(QuerySet::new(self.d, n, raw)?)
    }

    /// Like [`to_query_set`](Self::to_query_set) but expressed over a
    /// distribution that dropped symbols.
    pub fn load(&self, loaded: &LoadedDistribution) -> Result<QuerySet> {
        match &loaded.map {
            None => self.to_query_set(loaded.dist.len()),
            Some(map) => self
                .to_query_set(map.len())?
                .restrict(map, loaded.dist.len())
                .map_err(Error::from),
        }
    }

    pub fn from_query_set(qset: &QuerySet) -> Self {
        Self {
            d: qset.arity(),
            unconstrained: qset.is_unconstrained(),
            queries: qset
                .queries()
                .iter()
                .map(|q| QueryFile {
                    id: q.id(),
                    cells: q.cells().iter().map(SymbolSet::to_vec).collect(),
                })
                .collect(),
        }
    }
}

/// Nested tree: `{"leaf": i}`, `{"query": id, "children": {...}}`, or for
/// ad hoc partitions `{"cells": [[...]], "children": {...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum TreeJson {
    Leaf {
        leaf: usize,
    },
    Query {
        query: usize,
        children: BTreeMap<usize, TreeJson>,
    },
    Cells {
        cells: Vec<Vec<usize>>,
        children: BTreeMap<usize, TreeJson>,
    },
}

impl<'de> Deserialize<'de> for TreeJson {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        TreeJson::from_value(&value).map_err(serde::de::Error::custom)
    }
}

impl TreeJson {
    fn from_value(v: &serde_json::Value) -> std::result::Result<Self, String> {
        let obj = v.as_object().ok_or("tree node must be an object")?;
        let index = |key: &str| -> std::result::Result<usize, String> {
            obj[key]
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| format!("\"{key}\" must be a non-negative integer"))
        };
        let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        let children = || -> std::result::Result<BTreeMap<usize, TreeJson>, String> {
            let map = obj
                .get("children")
                .and_then(|c| c.as_object())
                .ok_or("internal node needs a \"children\" object")?;
            map.iter()
                .map(|(k, c)| {
                    let a = k
                        .parse::<usize>()
                        .map_err(|_| format!("child key {k:?} is not an answer index"))?;
                    Ok((a, TreeJson::from_value(c)?))
                })
                .collect()
        };
        match keys.as_slice() {
            ["leaf"] => Ok(TreeJson::Leaf {
                leaf: index("leaf")?,
            }),
            ["children", "query"] | ["query", "children"] => Ok(TreeJson::Query {
                query: index("query")?,
                children: children()?,
            }),
            ["cells", "children"] | ["children", "cells"] => {
                let cells = serde_json::from_value(obj["cells"].clone())
                    .map_err(|e| format!("bad \"cells\": {e}"))?;
                Ok(TreeJson::Cells {
                    cells,
                    children: children()?,
                })
            }
            _ => Err(format!("unrecognized tree node with keys {keys:?}")),
        }
    }

    pub fn from_node(node: &Node) -> Self {
        match node {
            Node::Leaf(s) => TreeJson::Leaf { leaf: *s },
            Node::Internal { question, children } => {
                let children = children
                    .iter()
                    .map(|(&a, c)| (a, TreeJson::from_node(c)))
                    .collect();
                match question {
                    Question::Listed(q) => TreeJson::Query {
                        query: *q,
                        children,
                    },
                    Question::Partition(cells) => TreeJson::Cells {
                        cells: cells.iter().map(SymbolSet::to_vec).collect(),
                        children,
                    },
                }
            }
        }
    }

    pub fn to_node(&self) -> Node {
        let kids = |children: &BTreeMap<usize, TreeJson>| {
            children.iter().map(|(&a, c)| (a, c.to_node())).collect()
        };
        match self {
            TreeJson::Leaf { leaf } => Node::Leaf(*leaf),
            TreeJson::Query { query, children } => Node::Internal {
                question: Question::Listed(*query),
                children: kids(children),
            },
            TreeJson::Cells { cells, children } => Node::Internal {
                question: Question::Partition(
                    cells.iter().map(|c| c.iter().copied().collect()).collect(),
                ),
                children: kids(children),
            },
        }
    }

    pub fn from_tree(tree: &DecisionTree) -> Self {
        Self::from_node(&tree.root)
    }

    pub fn to_tree(&self) -> DecisionTree {
        DecisionTree::new(self.to_node())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolReport {
    pub index: usize,
    pub label: String,
    pub prob: f64,
    pub length: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codeword: Option<Vec<u32>>,
}

/// A [`CodeReport`] with the coder name and per-symbol detail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub coder: String,
    pub d: u32,
    pub expected_length: f64,
    pub entropy: f64,
    pub kraft_sum: f64,
    pub symbols: Vec<SymbolReport>,
}

impl ReportJson {
    pub fn new(coder: &str, report: &CodeReport, dist: &Distribution) -> Self {
        let symbols = report
            .per_symbol_lengths
            .iter()
            .enumerate()
            .map(|(i, &length)| SymbolReport {
                index: i,
                label: dist.label(i).to_string(),
                prob: dist.prob(i),
                length,
                codeword: report.codewords.as_ref().map(|c| c[i].clone()),
            })
            .collect();
        Self {
            coder: coder.to_string(),
            d: report.arity,
            expected_length: report.expected_length,
            entropy: report.entropy_base_d,
            kraft_sum: report.kraft_sum(),
            symbols,
        }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn cell_text(cell: &SymbolSet, dist: &Distribution) -> String {
    let labels: Vec<&str> = cell.iter().map(|s| dist.label(s)).collect();
    format!("{{{}}}", labels.join(","))
}

/// Graphviz rendering. Listed queries show their cells restricted to the
/// node's candidates.
pub fn tree_to_dot(tree: &DecisionTree, dist: &Distribution, qset: &QuerySet) -> String {
    fn walk(
        node: &Node,
        dist: &Distribution,
        qset: &QuerySet,
        next: &mut usize,
        out: &mut String,
    ) -> usize {
        let me = *next;
        *next += 1;
        match node {
            Node::Leaf(s) => {
                let label = dist.labels().get(*s).map_or("?", String::as_str);
                let _ = writeln!(out, "  n{me} [shape=box, label=\"{}\"];", dot_escape(label));
            }
            Node::Internal { question, children } => {
                let here = node.symbols();
                let text = match question {
                    Question::Listed(q) => {
                        let cells = qset.query(*q).map(|query| {
                            query
                                .cells()
                                .iter()
                                .map(|c| cell_text(&c.intersection(&here), dist))
                                .collect::<Vec<_>>()
                                .join(" | ")
                        });
                        match cells {
                            Some(c) => format!("q{q}: {c}"),
                            None => format!("q{q}"),
                        }
                    }
                    Question::Partition(cells) => cells
                        .iter()
                        .map(|c| cell_text(c, dist))
                        .collect::<Vec<_>>()
                        .join(" | "),
                };
                let _ = writeln!(out, "  n{me} [label=\"{}\"];", dot_escape(&text));
                for (answer, child) in children {
                    let id = walk(child, dist, qset, next, out);
                    let _ = writeln!(out, "  n{me} -> n{id} [label=\"{answer}\"];");
                }
            }
        }
        me
    }
    let mut out = String::from("digraph tree {\n  node [fontname=\"Helvetica\"];\n");
    walk(&tree.root, dist, qset, &mut 0, &mut out);
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShipJson {
    pub owner: usize,
    pub row: u8,
    pub col: u8,
    pub len: u8,
    pub horizontal: bool,
}

/// Layout file: board shape plus one list of ship rectangles per layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutsFile {
    pub rows: usize,
    pub cols: usize,
    pub players: usize,
    pub layouts: Vec<Vec<ShipJson>>,
}

impl LayoutsFile {
    pub fn from_set(set: &LayoutSet) -> Self {
        let layouts = (0..set.len())
            .map(|i| {
                set.ships(i)
                    .map(|(owner, p)| ShipJson {
                        owner,
                        row: p.row,
                        col: p.col,
                        len: p.len,
                        horizontal: p.horizontal,
                    })
                    .collect()
            })
            .collect();
        Self {
            rows: set.rows,
            cols: set.cols,
            players: set.players,
            layouts,
        }
    }

    pub fn to_set(&self) -> Result<LayoutSet> {
        let layouts: Vec<Vec<(usize, Placement)>> = self
            .layouts
            .iter()
            .map(|ships| {
                ships
                    .iter()
                    .map(|s| {
                        let p = Placement {
                            row: s.row,
                            col: s.col,
                            len: s.len,
                            horizontal: s.horizontal,
                        };
                        (s.owner, p)
                    })
                    .collect()
            })
            .collect();
        Ok(LayoutSet::from_ships(
            self.rows,
            self.cols,
            self.players,
            &layouts,
        )?)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    Ok(serde_json::from_str(&text)?)
}
