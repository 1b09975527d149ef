//! GKM graphs: vertices are Weyl cosets of the singular orbits, edges are
//! invariant two-spheres labeled by weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::diagram::{matrix_json, validate, GroupDiagram, HomogeneousSpace};
use crate::error::{Error, Result};
use crate::ratlin::{parse_rat, primitive_covector, proportional, Covector, Rat, RatMatrix};
use crate::report::ValidationReport;
use crate::verdict::{euler_characteristic, gkm_verdict, normalize, CaseTag};
use crate::weyl::{
    coset_space, gen_cap, reflection_matrix, stabilizer_mod_sign, CosetSpace, GramForm, RootSet, WeylGroup,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orbit {
    Plus,
    Minus,
}

impl Orbit {
    pub fn as_str(self) -> &'static str {
        match self {
            Orbit::Plus => "plus",
            Orbit::Minus => "minus",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    TangentialPlus,
    TangentialMinus,
    Normal,
}

impl EdgeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeKind::TangentialPlus => "tangential_plus",
            EdgeKind::TangentialMinus => "tangential_minus",
            EdgeKind::Normal => "normal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "tangential_plus" => EdgeKind::TangentialPlus,
            "tangential_minus" => EdgeKind::TangentialMinus,
            "normal" => EdgeKind::Normal,
            _ => return None,
        })
    }

    pub fn is_tangential(self) -> bool {
        self != EdgeKind::Normal
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: usize,
    pub orbit: Orbit,
    pub coset_index: usize,
    /// Lexicographically minimal element of the coset.
    pub representative: RatMatrix,
    /// Shortest word in the reflections of the positive roots of G.
    pub word: String,
}

impl Vertex {
    /// `P3`, `M0`, ...
    pub fn node_name(&self) -> String {
        match self.orbit {
            Orbit::Plus => format!("P{}", self.coset_index),
            Orbit::Minus => format!("M{}", self.coset_index),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    /// Smaller endpoint id.
    pub u: usize,
    pub v: usize,
    pub label: Covector,
    pub kind: EdgeKind,
}

impl Edge {
    fn new(a: usize, b: usize, label: Covector, kind: EdgeKind) -> Self {
        Edge { u: a.min(b), v: a.max(b), label, kind }
    }

    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmGraph {
    pub name: String,
    pub rank: usize,
    /// Half the dimension of the manifold, when known.
    pub n: Option<usize>,
    pub case_tag: CaseTag,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl GkmGraph {
    pub fn degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|e| e.u == id || e.v == id).count()
    }

    pub fn incident(&self, id: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.u == id || e.v == id)
    }

    pub fn vertex_by_word(&self, orbit: Orbit, word: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.orbit == orbit && v.word == word)
    }

    /// Sorted labels per edge kind.
    pub fn census(&self) -> BTreeMap<EdgeKind, Vec<Covector>> {
        let mut out: BTreeMap<EdgeKind, Vec<Covector>> = BTreeMap::new();
        for e in &self.edges {
            out.entry(e.kind).or_default().push(e.label.clone());
        }
        for labels in out.values_mut() {
            labels.sort();
        }
        out
    }

    pub fn count(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = BTreeSet::from([0]);
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            for e in self.incident(x) {
                let y = e.other(x);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    fn finish(mut self) -> Self {
        self.edges.sort();
        self
    }
}

struct Side {
    weyl: WeylGroup,
    cosets: CosetSpace,
    offset: usize,
}

fn side(wg: &WeylGroup, roots: &RootSet, gram: &GramForm, offset: usize) -> Result<Side> {
    let weyl = WeylGroup::from_roots(roots, gram, gen_cap())?;
    let cosets = coset_space(wg, &weyl)?;
    Ok(Side { weyl, cosets, offset })
}

fn vertices(side: &Side, orbit: Orbit) -> Vec<Vertex> {
    side.cosets
        .representatives()
        .iter()
        .zip(side.cosets.words())
        .enumerate()
        .map(|(i, (rep, word))| Vertex {
            id: side.offset + i,
            orbit,
            coset_index: i,
            representative: rep.clone(),
            word: word.clone(),
        })
        .collect()
}

fn coset(side: &Side, wg: &WeylGroup, m: &RatMatrix) -> Result<usize> {
    side.cosets
        .coset_of(wg, m)
        .map(|c| c + side.offset)
        .ok_or_else(|| Error::NotSubgroup("element outside W(G)".into()))
}

fn check_subsystem(g_roots: &RootSet, k_roots: &RootSet) -> Result<()> {
    if k_roots.is_subset_of(g_roots) {
        return Ok(());
    }
    let bad: Vec<String> = k_roots.roots().iter().filter(|a| !g_roots.contains(a)).map(ToString::to_string).collect();
    Err(Error::NotSubsystem(bad.join(", ")))
}

/// Edges `[w] -- [w σ_α]` labeled `w·α` for `α ∈ (Δ_G \ Δ_K)/±1`.
fn tangential_edges(
    wg: &WeylGroup,
    g_roots: &RootSet,
    k_roots: &RootSet,
    side: &Side,
    gram: &GramForm,
    kind: EdgeKind,
) -> Result<Vec<Edge>> {
    check_subsystem(g_roots, k_roots)?;
    let classes = g_roots.difference(k_roots).positive_classes();
    let reflections: Vec<RatMatrix> = classes.iter().map(|a| reflection_matrix(a, gram)).collect::<Result<_>>()?;
    let mut seen: BTreeMap<(usize, usize, Covector), usize> = BTreeMap::new();
    for (i, w) in side.cosets.representatives().iter().enumerate() {
        let src = i + side.offset;
        for (alpha, s) in classes.iter().zip(&reflections) {
            let dst = coset(side, wg, &w.mul(s))?;
            if dst == src {
                return Err(Error::SelfEdge(format!("reflection in {alpha} fixes coset {i}")));
            }
            let label = w.apply(alpha).sign_normalized();
            *seen.entry((src.min(dst), src.max(dst), label)).or_default() += 1;
        }
    }
    if let Some(((u, v, label), n)) = seen.iter().find(|(_, &n)| n != 2) {
        return Err(Error::InvalidGraph(format!("edge {u}--{v} labeled {label} enumerated {n} times")));
    }
    Ok(seen.into_keys().map(|(u, v, label)| Edge::new(u, v, label, kind)).collect())
}

/// The GKM graph of `G/K` for roots of equal-rank groups.
pub fn homogeneous_graph(g_roots: &RootSet, k_roots: &RootSet, gram: &GramForm) -> Result<GkmGraph> {
    check_subsystem(g_roots, k_roots)?;
    let wg = WeylGroup::from_roots(g_roots, gram, gen_cap())?;
    let plus = side(&wg, k_roots, gram, 0)?;
    let edges = tangential_edges(&wg, g_roots, k_roots, &plus, gram, EdgeKind::TangentialPlus)?;
    Ok(GkmGraph {
        name: String::new(),
        rank: gram.rank(),
        n: Some(g_roots.difference(k_roots).len() / 2),
        case_tag: CaseTag::Homogeneous,
        vertices: vertices(&plus, Orbit::Plus),
        edges,
    }
    .finish())
}

pub fn homogeneous_space_graph(s: &HomogeneousSpace) -> Result<GkmGraph> {
    let rep = crate::diagram::validate_homogeneous(s);
    if let Some(c) = rep.failures().next() {
        return Err(Error::NotSubsystem(format!("{}: {}", c.name, c.message)));
    }
    let mut g = homogeneous_graph(&s.g.roots, &s.k.roots, &s.gram)?;
    g.name = s.name.clone();
    Ok(g)
}

/// Everything needed to place edges of a normalized GKM diagram.
struct Layout {
    d: GroupDiagram,
    lambda: Covector,
    wg: WeylGroup,
    plus: Side,
    minus: Option<Side>,
}

impl Layout {
    fn new(d: &GroupDiagram, expected: Option<CaseTag>) -> Result<Layout> {
        let v = gkm_verdict(d);
        if !v.is_gkm {
            return Err(Error::NotGkm(not_gkm_reason(&v)));
        }
        if let Some(exp) = expected {
            if exp != v.case_tag {
                return Err(Error::WrongCase { expected: exp.to_string(), found: v.case_tag.to_string() });
            }
        }
        let (d, _) = normalize(d);
        let lambda = v.lambda.clone().ok_or_else(|| Error::RankMismatch("λ undefined".into()))?;
        let wg = WeylGroup::from_roots(&d.g.roots, &d.gram, gen_cap())?;
        let plus = side(&wg, &d.kplus.roots, &d.gram, 0)?;
        let minus = if d.kminus.full_rank {
            Some(side(&wg, &d.kminus.roots, &d.gram, plus.cosets.len())?)
        } else {
            None
        };
        Ok(Layout { d, lambda, wg, plus, minus })
    }
}

pub(crate) fn not_gkm_reason(v: &crate::verdict::GkmVerdict) -> String {
    if !v.rank.holds {
        format!(
            "rank condition fails (K+ full rank: {}, K- full rank: {}, rank H = {}, rank G = {})",
            v.rank.kplus_full_rank, v.rank.kminus_full_rank, v.rank.rank_h, v.rank.rank_g
        )
    } else {
        let roots: Vec<String> = v.roots.offending.iter().map(ToString::to_string).collect();
        format!("roots vanishing on t ∩ h: {}", roots.join(", "))
    }
}

fn case1_edges(l: &Layout) -> Result<Vec<Edge>> {
    let minus = l.minus.as_ref().ok_or_else(|| Error::WrongCase { expected: "Case1".into(), found: "Case2".into() })?;
    let wprime = stabilizer_mod_sign(&l.plus.weyl, &l.lambda)?;
    if !wprime.is_subgroup_of(&minus.weyl) {
        return Err(Error::WprimeNotInKminus);
    }
    let cosets = coset_space(&l.wg, &wprime)?;
    cosets
        .representatives()
        .iter()
        .map(|w| {
            let u = coset(&l.plus, &l.wg, w)?;
            let v = coset(minus, &l.wg, w)?;
            Ok(Edge::new(u, v, primitive_covector(&w.apply(&l.lambda))?, EdgeKind::Normal))
        })
        .collect()
}

/// Normal edges between the two full-rank orbits.
pub fn normal_edges_case1(d: &GroupDiagram) -> Result<Vec<Edge>> {
    let mut e = case1_edges(&Layout::new(d, Some(CaseTag::Case1))?)?;
    e.sort();
    Ok(e)
}

/// The element `g` of `W(K-) \ W(H)` used for case 2, with the data behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case2Choice {
    pub kminus_order: usize,
    pub h_order: usize,
    /// Lexicographically minimal element of the nontrivial coset.
    pub g: RatMatrix,
    /// Every element of `g W(H)`, sorted.
    pub coset: Vec<RatMatrix>,
}

impl Case2Choice {
    pub fn index(&self) -> usize {
        self.kminus_order / self.h_order
    }

    /// A second representative of `g W(H)`, if there is one.
    pub fn alternate(&self) -> Option<&RatMatrix> {
        self.coset.iter().find(|m| **m != self.g)
    }
}

fn case2_choice_in(l: &Layout) -> Result<Case2Choice> {
    let cap = gen_cap();
    let wk = l.d.kminus.weyl_group(&l.d.gram, cap)?;
    let wh = l.d.h.weyl_group(&l.d.gram, cap)?;
    if !wh.is_subgroup_of(&wk) {
        return Err(Error::NotSubgroup("W(H) is not contained in W(K-)".into()));
    }
    if wk.order() != 2 * wh.order() {
        return Err(Error::QuotientNotZ2 { index: wk.order() / wh.order() });
    }
    let g = wk.elements().iter().find(|m| !wh.contains(m)).cloned().expect("index 2 leaves a nontrivial coset");
    if !l.wg.contains(&g) {
        return Err(Error::NotSubgroup("the element g of W(K-) is not in W(G)".into()));
    }
    let mut coset: Vec<RatMatrix> = wh.elements().iter().map(|h| g.mul(h)).collect();
    coset.sort();
    Ok(Case2Choice { kminus_order: wk.order(), h_order: wh.order(), g, coset })
}

fn case2_edges_with(l: &Layout, g: &RatMatrix) -> Result<Vec<Edge>> {
    let e = coset(&l.plus, &l.wg, &RatMatrix::identity(l.d.rank))?;
    if coset(&l.plus, &l.wg, g)? == e {
        return Err(Error::SelfEdge("g lies in W(K+)".into()));
    }
    let wprime = stabilizer_mod_sign(&l.plus.weyl, &l.lambda)?;
    let generated = wprime.adjoin(g, &l.d.gram, gen_cap())?;
    let cosets = coset_space(&l.wg, &generated)?;
    let mut edges = cosets
        .representatives()
        .iter()
        .map(|w| {
            let u = coset(&l.plus, &l.wg, w)?;
            let v = coset(&l.plus, &l.wg, &w.mul(g))?;
            if u == v {
                return Err(Error::SelfEdge(format!("[w] = [wg] for coset {u}")));
            }
            Ok(Edge::new(u, v, primitive_covector(&w.apply(&l.lambda))?, EdgeKind::Normal))
        })
        .collect::<Result<Vec<_>>>()?;
    edges.sort();
    Ok(edges)
}

fn case2_edges(l: &Layout) -> Result<Vec<Edge>> {
    let choice = case2_choice_in(l)?;
    let edges = case2_edges_with(l, &choice.g)?;
    if let Some(alt) = choice.alternate() {
        if case2_edges_with(l, alt)? != edges {
            return Err(Error::InconsistentChoice("a second representative of g W(H) gives different edges".into()));
        }
    }
    Ok(edges)
}

pub fn case2_choice(d: &GroupDiagram) -> Result<Case2Choice> {
    case2_choice_in(&Layout::new(d, Some(CaseTag::Case2))?)
}

/// Normal edges for case 2 using a caller-chosen element of `g W(H)`.
pub fn normal_edges_case2_with(d: &GroupDiagram, g: &RatMatrix) -> Result<Vec<Edge>> {
    let l = Layout::new(d, Some(CaseTag::Case2))?;
    let choice = case2_choice_in(&l)?;
    if !choice.coset.contains(g) {
        return Err(Error::InconsistentChoice("element is not in g W(H)".into()));
    }
    case2_edges_with(&l, g)
}

/// Normal edges joining the full-rank orbit to itself.
pub fn normal_edges_case2(d: &GroupDiagram) -> Result<Vec<Edge>> {
    case2_edges(&Layout::new(d, Some(CaseTag::Case2))?)
}

fn assemble(d: &GroupDiagram) -> Result<GkmGraph> {
    let v = gkm_verdict(d);
    let l = Layout::new(d, None)?;
    let nd = &l.d;
    let mut verts = vertices(&l.plus, Orbit::Plus);
    let mut edges =
        tangential_edges(&l.wg, &nd.g.roots, &nd.kplus.roots, &l.plus, &nd.gram, EdgeKind::TangentialPlus)?;
    if let Some(minus) = &l.minus {
        verts.extend(vertices(minus, Orbit::Minus));
        edges.extend(tangential_edges(&l.wg, &nd.g.roots, &nd.kminus.roots, minus, &nd.gram, EdgeKind::TangentialMinus)?);
        edges.extend(case1_edges(&l)?);
    } else {
        edges.extend(case2_edges(&l)?);
    }
    Ok(GkmGraph {
        name: d.name.clone(),
        rank: d.rank,
        n: nd.manifold_dim().map(|m| m / 2),
        case_tag: v.case_tag,
        vertices: verts,
        edges,
    }
    .finish())
}

/// Builds and validates the GKM graph. Disconnection is reported by
/// [`validate_graph`] but is not an error here.
pub fn build_graph(d: &GroupDiagram) -> Result<GkmGraph> {
    let rep = validate(d);
    if !rep.all_passed() {
        let msgs: Vec<String> = rep.failures().map(|c| format!("{}: {}", c.name, c.message)).collect();
        return Err(Error::InvalidDiagram(msgs.join("; ")));
    }
    let g = assemble(d)?;
    let checks = validate_graph(&g, d);
    let fails: Vec<String> =
        checks.failures().filter(|c| c.name != "connected").map(|c| format!("{}: {}", c.name, c.message)).collect();
    if !fails.is_empty() {
        return Err(Error::InvalidGraph(fails.join("; ")));
    }
    Ok(g)
}

fn label_checks(g: &GkmGraph, rep: &mut ValidationReport) {
    let mut bad = Vec::new();
    for vtx in &g.vertices {
        let labels: Vec<&Covector> = g.incident(vtx.id).map(|e| &e.label).collect();
        'outer: for (i, a) in labels.iter().enumerate() {
            for b in &labels[i + 1..] {
                if proportional(a, b).unwrap_or(true) {
                    bad.push(vtx.node_name());
                    break 'outer;
                }
            }
        }
    }
    rep.push("labels independent at each vertex", bad.is_empty(), bad.join(", "));
}

fn degree_check(g: &GkmGraph, rep: &mut ValidationReport) {
    match g.n {
        Some(n) => {
            let bad: Vec<String> = g
                .vertices
                .iter()
                .filter(|v| g.degree(v.id) != n)
                .map(|v| format!("{} has degree {}", v.node_name(), g.degree(v.id)))
                .collect();
            rep.push("degree = n", bad.is_empty(), if bad.is_empty() { format!("n = {n}") } else { bad.join(", ") });
        }
        None => rep.push("degree = n", true, "skipped: dimensions not given"),
    }
}

/// Structural checks on a graph built from `d`.
pub fn validate_graph(g: &GkmGraph, d: &GroupDiagram) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let (nd, _) = normalize(d);
    degree_check(g, &mut rep);
    label_checks(g, &mut rep);
    match euler_characteristic(&nd) {
        Ok(chi) => rep.push("vertex count = χ", chi == g.vertices.len(), format!("χ = {chi}, {} vertices", g.vertices.len())),
        Err(e) => rep.push("vertex count = χ", false, e.to_string()),
    }
    let s = g.vertices.iter().filter(|v| v.orbit == Orbit::Plus).count();
    let s2 = g.vertices.len() - s;
    if g.case_tag == CaseTag::Case1 {
        let k = nd.g.roots.difference(&nd.kplus.roots).len() / 2;
        let k2 = nd.g.roots.difference(&nd.kminus.roots).len() / 2;
        match g.n {
            Some(n) if n >= k && n >= k2 => rep.push(
                "edge count identity",
                s * (n - k) == s2 * (n - k2),
                format!("{s}·({n}-{k}) vs {s2}·({n}-{k2})"),
            ),
            Some(n) => rep.push("edge count identity", false, format!("orbit dimension exceeds n = {n}")),
            None => rep.push("edge count identity", true, "skipped: dimensions not given"),
        }
        let normal_per_plus: BTreeSet<usize> = g
            .vertices
            .iter()
            .filter(|v| v.orbit == Orbit::Plus)
            .map(|v| g.incident(v.id).filter(|e| e.kind == EdgeKind::Normal).count())
            .collect();
        match Layout::new(d, None).and_then(|l| Ok((l.plus.weyl.order(), stabilizer_mod_sign(&l.plus.weyl, &l.lambda)?.order()))) {
            Ok((wk, wp)) => rep.push(
                "normal edges per K+ vertex",
                normal_per_plus == BTreeSet::from([wk / wp]),
                format!("|W(K+)|/|W'| = {}", wk / wp),
            ),
            Err(e) => rep.push("normal edges per K+ vertex", false, e.to_string()),
        }
    }
    if g.case_tag == CaseTag::Case2 {
        match Layout::new(d, None).and_then(|l| {
            let c = case2_choice_in(&l)?;
            let first = case2_edges_with(&l, &c.g)?;
            let second = match c.alternate() {
                Some(alt) => case2_edges_with(&l, alt)?,
                None => first.clone(),
            };
            Ok((c.index(), first == second))
        }) {
            Ok((index, same)) => {
                rep.push("W(K-)/W(H) has order 2", index == 2, format!("index {index}"));
                rep.push("alternate g gives the same edges", same, "");
            }
            Err(e) => rep.push("W(K-)/W(H) has order 2", false, e.to_string()),
        }
    }
    rep.push("connected", g.is_connected(), "");
    rep
}

/// Checks for a homogeneous graph.
pub fn validate_homogeneous_graph(g: &GkmGraph, s: &HomogeneousSpace) -> ValidationReport {
    let mut rep = ValidationReport::new();
    degree_check(g, &mut rep);
    label_checks(g, &mut rep);
    match crate::verdict::homogeneous_euler(&s.g.roots, &s.k.roots, &s.gram) {
        Ok(chi) => rep.push("vertex count = χ", chi == g.vertices.len(), format!("χ = {chi}, {} vertices", g.vertices.len())),
        Err(e) => rep.push("vertex count = χ", false, e.to_string()),
    }
    rep.push("connected", g.is_connected(), "");
    rep
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn emit_dot(g: &GkmGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"{}\" {{", dot_escape(&g.name));
    for v in &g.vertices {
        let _ = writeln!(out, "  {} [tooltip=\"{}\"];", v.node_name(), dot_escape(&v.word));
    }
    for e in &g.edges {
        let style = if e.kind.is_tangential() { "solid" } else { "dotted" };
        let _ = writeln!(
            out,
            "  {} -- {} [label=\"{}\", style={}];",
            g.vertices[e.u].node_name(),
            g.vertices[e.v].node_name(),
            e.label,
            style
        );
    }
    out.push_str("}\n");
    out
}

fn label_json(c: &Covector) -> Value {
    Value::Array(c.coords().iter().map(crate::diagram::rat_json).collect())
}

pub fn graph_to_json(g: &GkmGraph) -> Value {
    json!({
        "name": g.name,
        "rank": g.rank,
        "n": g.n,
        "case": g.case_tag.to_string(),
        "vertices": g.vertices.iter().map(|v| json!({
            "id": v.id,
            "orbit": v.orbit.as_str(),
            "coset_index": v.coset_index,
            "word": v.word,
            "representative": matrix_json(&v.representative),
        })).collect::<Vec<_>>(),
        "edges": g.edges.iter().map(|e| json!({
            "u": e.u,
            "v": e.v,
            "label": label_json(&e.label),
            "kind": e.kind.as_str(),
        })).collect::<Vec<_>>(),
    })
}

pub fn emit_json(g: &GkmGraph) -> String {
    serde_json::to_string_pretty(&graph_to_json(g)).expect("graph serializes") + "\n"
}

fn bad(path: &str, msg: &str) -> Error {
    Error::Schema { path: path.into(), msg: msg.into() }
}

fn json_rat(v: &Value, path: &str) -> Result<Rat> {
    match v {
        Value::Number(n) => n.as_i64().map(|i| Rat::from_integer(i.into())).ok_or_else(|| bad(path, "expected an integer")),
        Value::String(s) => parse_rat(s).ok_or_else(|| bad(path, "expected a rational")),
        _ => Err(bad(path, "expected a number")),
    }
}

fn json_usize(v: &Value, key: &str, path: &str) -> Result<usize> {
    v.get(key).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(&format!("{path}.{key}"), "expected a nonnegative integer"))
}

/// Reads a document produced by [`emit_json`].
pub fn parse_graph_json(text: &str) -> Result<GkmGraph> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() })?;
    let name = doc.get("name").and_then(Value::as_str).unwrap_or_default().to_string();
    let rank = json_usize(&doc, "rank", "")?;
    let n = doc.get("n").and_then(Value::as_u64).map(|x| x as usize);
    let case_tag = doc
        .get("case")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("case", "missing"))?
        .parse()?;
    let mut vertices = Vec::new();
    for (i, v) in doc.get("vertices").and_then(Value::as_array).ok_or_else(|| bad("vertices", "missing"))?.iter().enumerate() {
        let path = format!("vertices[{i}]");
        let orbit = match v.get("orbit").and_then(Value::as_str) {
            Some("plus") => Orbit::Plus,
            Some("minus") => Orbit::Minus,
            _ => return Err(bad(&format!("{path}.orbit"), "expected plus or minus")),
        };
        let rows = v
            .get("representative")
            .and_then(Value::as_array)
            .ok_or_else(|| bad(&format!("{path}.representative"), "missing"))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| bad(&format!("{path}.representative"), "expected rows"))?
                    .iter()
                    .map(|x| json_rat(x, &format!("{path}.representative")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        vertices.push(Vertex {
            id: json_usize(v, "id", &path)?,
            orbit,
            coset_index: json_usize(v, "coset_index", &path)?,
            representative: RatMatrix::from_rows(rows)?,
            word: v.get("word").and_then(Value::as_str).unwrap_or_default().to_string(),
        });
    }
    let mut edges = Vec::new();
    for (i, e) in doc.get("edges").and_then(Value::as_array).ok_or_else(|| bad("edges", "missing"))?.iter().enumerate() {
        let path = format!("edges[{i}]");
        let label = e
            .get("label")
            .and_then(Value::as_array)
            .ok_or_else(|| bad(&format!("{path}.label"), "missing"))?
            .iter()
            .map(|x| json_rat(x, &format!("{path}.label")))
            .collect::<Result<Vec<_>>>()?;
        let kind = e
            .get("kind")
            .and_then(Value::as_str)
            .and_then(EdgeKind::parse)
            .ok_or_else(|| bad(&format!("{path}.kind"), "unknown edge kind"))?;
        edges.push(Edge { u: json_usize(e, "u", &path)?, v: json_usize(e, "v", &path)?, label: Covector(label), kind });
    }
    Ok(GkmGraph { name, rank, n, case_tag, vertices, edges })
}
