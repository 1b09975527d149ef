//! Built-in example diagrams with their expected verdicts, graphs and Betti
//! numbers.
//!
//! Each entry pairs a diagram file from `catalog/diagrams` with a sidecar in
//! `catalog/expected`; GKM entries also carry a golden graph snapshot in
//! `catalog/golden`. Everything is embedded at compile time.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::cohomology::betti_numbers;
use crate::diagram::{parse_diagram_with, parse_homogeneous_with, validate, validate_homogeneous, GroupDiagram, HomogeneousSpace, Params};
use crate::error::{Error, Result};
use crate::graph::{build_graph, emit_json, homogeneous_space_graph, EdgeKind, GkmGraph};
use crate::report::ValidationReport;
use crate::verdict::{direct_weight_check, gkm_verdict, homogeneous_euler, CaseTag};

macro_rules! files {
    ($dir:literal; $($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../catalog/", $dir, "/", $name, ".json")))),*]
    };
}

static DIAGRAMS: &[(&str, &str)] = files!("diagrams";
    "s6_su3", "s6_su2sq", "2_6H", "cp3_u3", "hp3_sp3sp1", "hp3_hom", "op2_hom", "2_6D", "2_6C", "2_6A1",
    "2_6I", "2_6J", "3_6a", "3_6_case2", "4_6", "5_6", "6_6a", "6_6b", "s4_s3", "1_6_reject", "dim4_t2",
    "dim4_cp2",
);

static EXPECTED: &[(&str, &str)] = files!("expected";
    "s6_su3", "s6_su2sq", "2_6H", "cp3_u3", "hp3_sp3sp1", "hp3_hom", "op2_hom", "2_6D", "2_6D_p2",
    "2_6D_p0", "2_6C", "2_6A1", "2_6A1_p0", "2_6A1_q0", "2_6I", "2_6I_p0", "2_6J", "3_6a", "3_6_case2",
    "4_6", "5_6", "6_6a", "6_6b", "s4_s3", "1_6_reject", "dim4_t2", "dim4_cp2",
);

static GOLDEN: &[(&str, &str)] = files!("golden";
    "s6_su3", "s6_su2sq", "2_6H", "cp3_u3", "hp3_sp3sp1", "hp3_hom", "op2_hom", "2_6D", "2_6D_p2", "2_6C",
    "2_6A1", "2_6I", "2_6J", "3_6a", "3_6_case2", "4_6", "5_6", "6_6a", "6_6b", "dim4_t2", "dim4_cp2",
);

/// Provenance tags accepted in a sidecar's `source` map.
pub const PROVENANCE_TAGS: [&str; 3] = ["published", "derived", "trivial"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Diagram,
    Homogeneous,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub is_gkm: Option<bool>,
    #[serde(default, deserialize_with = "case_tag")]
    pub case: Option<CaseTag>,
    pub condition_rank: Option<bool>,
    pub condition_roots: Option<bool>,
    pub offending_roots: Option<Vec<String>>,
    pub swapped: Option<bool>,
    pub chi: Option<usize>,
    pub vertices: Option<usize>,
    pub edge_count: Option<usize>,
    /// Homogeneous entries: every pair of vertices is joined by this many edges.
    pub edges_per_pair: Option<usize>,
    /// Label multisets by edge kind.
    pub edges: Option<BTreeMap<String, Vec<String>>>,
    /// Normal edges as `orbit:word` endpoints and a label.
    pub normal_pairs: Option<Vec<[String; 3]>>,
    pub betti: Option<Vec<i64>>,
    #[serde(default)]
    pub snapshot: bool,
}

fn case_tag<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Option<CaseTag>, D::Error> {
    let s: Option<String> = Option::deserialize(d)?;
    s.map(|s| s.parse().map_err(serde::de::Error::custom)).transpose()
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
struct Sidecar {
    id: String,
    diagram: String,
    kind: EntryKind,
    #[serde(default)]
    params: Params,
    description: String,
    source: BTreeMap<String, String>,
    expected: Expected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: String,
    /// File stem of the diagram in the catalog.
    pub diagram: String,
    pub kind: EntryKind,
    pub params: Params,
    pub description: String,
    /// Provenance tag for each group of expected values.
    pub source: BTreeMap<String, String>,
    pub expected: Expected,
    pub diagram_text: &'static str,
    pub golden: Option<&'static str>,
}

/// A loaded catalog input.
#[derive(Clone, Debug)]
pub enum CatalogInput {
    Diagram(GroupDiagram),
    Homogeneous(HomogeneousSpace),
}

impl CatalogEntry {
    pub fn load(&self) -> Result<CatalogInput> {
        Ok(match self.kind {
            EntryKind::Diagram => CatalogInput::Diagram(parse_diagram_with(self.diagram_text, &self.params)?),
            EntryKind::Homogeneous => CatalogInput::Homogeneous(parse_homogeneous_with(self.diagram_text, &self.params)?),
        })
    }

    /// The GKM graph of the entry, if it has one.
    pub fn graph(&self) -> Result<GkmGraph> {
        match self.load()? {
            CatalogInput::Diagram(d) => build_graph(&d),
            CatalogInput::Homogeneous(s) => homogeneous_space_graph(&s),
        }
    }
}

/// Text of a catalog diagram file by stem, with or without `.json`.
pub fn diagram_source(name: &str) -> Option<&'static str> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    DIAGRAMS.iter().find(|(n, _)| *n == stem).map(|(_, t)| *t)
}

/// Names of the catalog diagram files.
pub fn diagram_names() -> Vec<&'static str> {
    DIAGRAMS.iter().map(|(n, _)| *n).collect()
}

fn parse_entry(name: &str, text: &str) -> Result<CatalogEntry> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let s: Sidecar = serde_path_to_error::deserialize(de)
        .map_err(|e| Error::Schema { path: format!("{name}: {}", e.path()), msg: e.inner().to_string() })?;
    let diagram_text = diagram_source(&s.diagram)
        .ok_or_else(|| Error::Schema { path: format!("{name}: diagram"), msg: format!("no catalog diagram `{}`", s.diagram) })?;
    let golden = GOLDEN.iter().find(|(n, _)| *n == s.id).map(|(_, t)| *t);
    Ok(CatalogEntry {
        id: s.id,
        diagram: s.diagram,
        kind: s.kind,
        params: s.params,
        description: s.description,
        source: s.source,
        expected: s.expected,
        diagram_text,
        golden,
    })
}

/// All entries, in catalog order.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    EXPECTED
        .iter()
        .map(|(name, text)| parse_entry(name, text).unwrap_or_else(|e| panic!("embedded catalog entry {name}: {e}")))
        .collect()
}

pub fn find_entry(id: &str) -> Option<CatalogEntry> {
    catalog_entries().into_iter().find(|e| e.id == id)
}

fn cmp<T: PartialEq + std::fmt::Debug>(rep: &mut ValidationReport, name: &str, expected: &Option<T>, actual: &T) {
    if let Some(exp) = expected {
        rep.push(name, exp == actual, format!("expected {exp:?}, got {actual:?}"));
    }
}

fn label_census(g: &GkmGraph) -> BTreeMap<String, Vec<String>> {
    g.census()
        .into_iter()
        .map(|(k, labels)| {
            let mut ls: Vec<String> = labels.iter().map(ToString::to_string).collect();
            ls.sort();
            (k.as_str().to_string(), ls)
        })
        .collect()
}

fn normal_pairs(g: &GkmGraph) -> Vec<[String; 3]> {
    let name = |id: usize| {
        let v = &g.vertices[id];
        format!("{}:{}", v.orbit.as_str(), v.word)
    };
    let mut out: Vec<[String; 3]> = g
        .edges
        .iter()
        .filter(|e| e.kind == EdgeKind::Normal)
        .map(|e| {
            let (a, b) = (name(e.u), name(e.v));
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            [a, b, e.label.to_string()]
        })
        .collect();
    out.sort();
    out
}

fn sorted_pairs(pairs: &[[String; 3]]) -> Vec<[String; 3]> {
    let mut out: Vec<[String; 3]> = pairs
        .iter()
        .map(|[a, b, l]| if a <= b { [a.clone(), b.clone(), l.clone()] } else { [b.clone(), a.clone(), l.clone()] })
        .collect();
    out.sort();
    out
}

fn check_graph(rep: &mut ValidationReport, e: &CatalogEntry, g: &GkmGraph) {
    let x = &e.expected;
    cmp(rep, "vertex count", &x.vertices, &g.vertices.len());
    cmp(rep, "edge count", &x.edge_count, &g.edges.len());
    if let Some(k) = x.edges_per_pair {
        let n = g.vertices.len();
        let mut ok = true;
        for u in 0..n {
            for v in u + 1..n {
                ok &= g.edges.iter().filter(|ed| ed.u == u && ed.v == v).count() == k;
            }
        }
        rep.push("edges per vertex pair", ok, format!("expected {k}"));
    }
    if let Some(exp) = &x.edges {
        let mut exp = exp.clone();
        exp.values_mut().for_each(|v| v.sort());
        let got = label_census(g);
        rep.push("edge census", exp == got, format!("expected {exp:?}, got {got:?}"));
    }
    if let Some(exp) = &x.normal_pairs {
        let (exp, got) = (sorted_pairs(exp), normal_pairs(g));
        rep.push("normal edge endpoints", exp == got, format!("expected {exp:?}, got {got:?}"));
    }
    if let Some(exp) = &x.betti {
        match g.n.ok_or_else(|| Error::InvalidGraph("dimension unknown".into())).and_then(|n| betti_numbers(g, n)) {
            Ok(b) => rep.push("betti numbers", &b.betti == exp, format!("expected {exp:?}, got {:?}", b.betti)),
            Err(err) => rep.push("betti numbers", false, err.to_string()),
        }
    }
    if x.snapshot {
        let text = emit_json(g);
        match e.golden {
            Some(golden) => rep.push("golden snapshot", golden == text, "graph JSON differs from the stored snapshot"),
            None => rep.push("golden snapshot", false, "no stored snapshot"),
        }
    }
}

fn run_diagram(rep: &mut ValidationReport, e: &CatalogEntry, d: &GroupDiagram) {
    let x = &e.expected;
    let valid = validate(d);
    rep.push("diagram valid", valid.all_passed(), valid.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join(", "));
    let v = gkm_verdict(d);
    cmp(rep, "is_gkm", &x.is_gkm, &v.is_gkm);
    cmp(rep, "case", &x.case, &v.case_tag);
    cmp(rep, "condition_rank", &x.condition_rank, &v.rank.holds);
    cmp(rep, "condition_roots", &x.condition_roots, &v.roots.holds);
    cmp(rep, "swapped", &x.swapped, &v.swapped);
    let offending: Vec<String> = v.roots.offending.iter().map(ToString::to_string).collect();
    cmp(rep, "offending roots", &x.offending_roots, &offending);
    let direct = v.rank.holds && direct_weight_check(d).unwrap_or(false);
    rep.push("direct weight check agrees", direct == v.is_gkm, format!("criterion {}, direct {direct}", v.is_gkm));
    if !v.is_gkm {
        return;
    }
    cmp(rep, "euler characteristic", &x.chi, &v.euler.unwrap_or(0));
    match build_graph(d) {
        Ok(g) => {
            rep.push("χ = vertex count", v.euler == Some(g.vertices.len()), format!("χ {:?}, {} vertices", v.euler, g.vertices.len()));
            check_graph(rep, e, &g);
        }
        Err(err) => rep.push("graph", false, err.to_string()),
    }
}

fn run_homogeneous(rep: &mut ValidationReport, e: &CatalogEntry, s: &HomogeneousSpace) {
    let valid = validate_homogeneous(s);
    rep.push("space valid", valid.all_passed(), valid.failures().map(|c| c.name.clone()).collect::<Vec<_>>().join(", "));
    let chi = homogeneous_euler(&s.g.roots, &s.k.roots, &s.gram);
    match (chi, homogeneous_space_graph(s)) {
        (Ok(chi), Ok(g)) => {
            cmp(rep, "euler characteristic", &e.expected.chi, &chi);
            rep.push("χ = vertex count", chi == g.vertices.len(), format!("χ {chi}, {} vertices", g.vertices.len()));
            check_graph(rep, e, &g);
        }
        (Err(err), _) | (_, Err(err)) => rep.push("graph", false, err.to_string()),
    }
}

/// Runs verdict, graph and Betti numbers as applicable and compares every
/// stored expectation exactly. Mismatches are report entries, not errors.
pub fn run_entry(e: &CatalogEntry) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let bad: Vec<&String> = e.source.values().filter(|t| !PROVENANCE_TAGS.contains(&t.as_str())).collect();
    rep.push("provenance tags", !e.source.is_empty() && bad.is_empty(), format!("{bad:?}"));
    match e.load() {
        Ok(CatalogInput::Diagram(d)) => run_diagram(&mut rep, e, &d),
        Ok(CatalogInput::Homogeneous(s)) => run_homogeneous(&mut rep, e, &s),
        Err(err) => rep.push("load", false, err.to_string()),
    }
    rep
}
