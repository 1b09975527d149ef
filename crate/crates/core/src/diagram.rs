//! Group diagrams `(G, K+, K-, H)`: data model, JSON input format and
//! structural validation.
//!
//! Input documents are JSON. Integer fields may be written as `"$p"` or
//! `"-$p"`, which are replaced by bound parameters before the document is
//! read; a top-level `"params"` object supplies defaults.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::ratlin::{annihilator_line, format_rat, parse_rat, Covector, Rat, RatMatrix, Subspace};
use crate::report::ValidationReport;
use crate::weyl::{gen_cap, preserves_roots, standard_roots, GramForm, RootSet, WeylGroup};

/// Parameter bindings, e.g. `p = 2`.
pub type Params = BTreeMap<String, i64>;

/// One group of a diagram, in the ambient torus coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDatum {
    pub roots: RootSet,
    /// False for groups of lower rank than the ambient torus (and always for H).
    pub full_rank: bool,
    /// Explicit Weyl action on t*; used instead of root reflections when present.
    pub weyl_generators: Option<Vec<RatMatrix>>,
    /// Basis of the Lie algebra of the group's torus, intersected with t.
    pub torus_span: Option<Subspace>,
    pub dim: Option<usize>,
    pub note: Option<String>,
}

impl GroupDatum {
    pub fn full(roots: RootSet) -> Self {
        GroupDatum { roots, full_rank: true, weyl_generators: None, torus_span: None, dim: None, note: None }
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = Some(dim);
        self
    }

    /// A lower-rank group with the given Weyl generators and torus span.
    pub fn partial(weyl_generators: Vec<RatMatrix>, torus_span: Option<Subspace>) -> Self {
        GroupDatum {
            roots: RootSet::empty(),
            full_rank: false,
            weyl_generators: Some(weyl_generators),
            torus_span,
            dim: None,
            note: None,
        }
    }

    /// The Weyl group acting on t*: root reflections for full-rank groups,
    /// the explicit generators otherwise (trivial when none are given).
    pub fn weyl_group(&self, gram: &GramForm, cap: usize) -> Result<WeylGroup> {
        if self.full_rank {
            return WeylGroup::from_roots(&self.roots, gram, cap);
        }
        match &self.weyl_generators {
            Some(gens) if !gens.is_empty() => crate::weyl::generate_group(gens, gram, cap),
            _ => Ok(WeylGroup::trivial(gram.rank())),
        }
    }

    /// Declared dimension, or `rank + |roots|` for full-rank groups.
    pub fn effective_dim(&self, rank: usize) -> Option<usize> {
        self.dim.or_else(|| self.full_rank.then(|| rank + self.roots.len()))
    }
}

/// The quadruple `(G, K+, K-, H)` on a shared torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDiagram {
    pub name: String,
    pub rank: usize,
    pub gram: GramForm,
    pub g: GroupDatum,
    pub kplus: GroupDatum,
    pub kminus: GroupDatum,
    pub h: GroupDatum,
    pub note: Option<String>,
}

impl GroupDiagram {
    /// Basis of `t ∩ h`.
    pub fn h_span(&self) -> &Subspace {
        self.h.torus_span.as_ref().expect("H always carries a torus span")
    }

    pub fn rank_h(&self) -> usize {
        self.h_span().dim()
    }

    /// Rank of a singular isotropy group: the ambient rank when full rank,
    /// otherwise its torus span, falling back to the rank of H.
    pub fn rank_of(&self, k: &GroupDatum) -> usize {
        if k.full_rank {
            self.rank
        } else {
            k.torus_span.as_ref().map_or(self.rank_h(), Subspace::dim)
        }
    }

    /// `dim G - dim H + 1`, when both are known.
    pub fn manifold_dim(&self) -> Option<usize> {
        let g = self.g.effective_dim(self.rank)?;
        let h = self.h.dim?;
        (g + 1).checked_sub(h)
    }

    /// The same diagram with `K+` and `K-` exchanged.
    pub fn swapped(&self) -> GroupDiagram {
        let mut d = self.clone();
        std::mem::swap(&mut d.kplus, &mut d.kminus);
        d
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.name));
        m.insert("rank".into(), json!(self.rank));
        m.insert("gram".into(), matrix_json(self.gram.matrix()));
        m.insert("G".into(), group_json(&self.g, false));
        m.insert("Kplus".into(), group_json(&self.kplus, false));
        m.insert("Kminus".into(), group_json(&self.kminus, false));
        m.insert("H".into(), group_json(&self.h, true));
        if let Some(n) = &self.note {
            m.insert("note".into(), json!(n));
        }
        Value::Object(m)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("diagram serializes") + "\n"
    }
}

/// A homogeneous space `G/K` given by two groups of equal rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousSpace {
    pub name: String,
    pub rank: usize,
    pub gram: GramForm,
    pub g: GroupDatum,
    pub k: GroupDatum,
    pub note: Option<String>,
}

impl HomogeneousSpace {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), json!(self.name));
        m.insert("rank".into(), json!(self.rank));
        m.insert("gram".into(), matrix_json(self.gram.matrix()));
        m.insert("G".into(), group_json(&self.g, false));
        m.insert("K".into(), group_json(&self.k, false));
        if let Some(n) = &self.note {
            m.insert("note".into(), json!(n));
        }
        Value::Object(m)
    }
}

pub(crate) fn rat_json(r: &Rat) -> Value {
    if r.is_integer() {
        if let Ok(i) = i64::try_from(r.numer()) {
            return json!(i);
        }
    }
    json!(format_rat(r))
}

pub(crate) fn matrix_json(m: &RatMatrix) -> Value {
    Value::Array(m.rows().iter().map(|row| Value::Array(row.iter().map(rat_json).collect())).collect())
}

fn vectors_json(vs: &[Vec<Rat>]) -> Value {
    Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(rat_json).collect())).collect())
}

fn group_json(d: &GroupDatum, is_h: bool) -> Value {
    let mut m = Map::new();
    if !d.full_rank && !is_h {
        m.insert("full_rank".into(), json!(false));
    }
    if d.full_rank || !d.roots.is_empty() {
        let roots: Vec<Vec<Rat>> = d.roots.roots().iter().map(|r| r.0.clone()).collect();
        m.insert("roots".into(), vectors_json(&roots));
    }
    if let Some(gens) = &d.weyl_generators {
        m.insert("weyl_generators".into(), Value::Array(gens.iter().map(matrix_json).collect()));
    } else if !d.full_rank && !is_h {
        m.insert("weyl_generators".into(), json!([]));
    }
    if let Some(span) = &d.torus_span {
        m.insert("torus_span".into(), vectors_json(span.basis()));
    }
    if let Some(dim) = d.dim {
        m.insert("dim".into(), json!(dim));
    }
    if let Some(n) = &d.note {
        m.insert("note".into(), json!(n));
    }
    Value::Object(m)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawRat {
    Int(i64),
    Str(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstruct {
    family: String,
    n: usize,
    #[serde(default)]
    offset: usize,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    roots: Option<Vec<Vec<i64>>>,
    construct: Option<RawConstruct>,
    product: Option<Vec<RawGroup>>,
    dim: Option<usize>,
    full_rank: Option<bool>,
    weyl_generators: Option<Vec<Vec<Vec<RawRat>>>>,
    torus_span: Option<Vec<Vec<i64>>>,
    note: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDiagram {
    name: String,
    rank: usize,
    gram: Option<Vec<Vec<RawRat>>>,
    #[serde(rename = "G")]
    g: RawGroup,
    #[serde(rename = "Kplus")]
    kplus: RawGroup,
    #[serde(rename = "Kminus")]
    kminus: RawGroup,
    #[serde(rename = "H")]
    h: RawGroup,
    note: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHomogeneous {
    name: String,
    rank: usize,
    gram: Option<Vec<Vec<RawRat>>>,
    #[serde(rename = "G")]
    g: RawGroup,
    #[serde(rename = "K")]
    k: RawGroup,
    note: Option<String>,
}

fn schema(path: &str, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), msg: msg.into() }
}

/// Reads the JSON text, applies parameters and strips the `params` block.
fn prepare(text: &str, overrides: &Params) -> Result<Value> {
    let mut doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse { line: e.line(), column: e.column(), msg: e.to_string() })?;
    let mut params = Params::new();
    if let Some(obj) = doc.as_object_mut() {
        if let Some(p) = obj.remove("params") {
            let defaults = p.as_object().ok_or_else(|| schema("params", "expected an object"))?;
            for (k, v) in defaults {
                let v = v.as_i64().ok_or_else(|| schema(&format!("params.{k}"), "expected an integer"))?;
                params.insert(k.clone(), v);
            }
        }
    }
    params.extend(overrides.iter().map(|(k, v)| (k.clone(), *v)));
    substitute(&mut doc, &params)?;
    Ok(doc)
}

fn substitute(v: &mut Value, params: &Params) -> Result<()> {
    match v {
        Value::String(s) => {
            let (neg, rest) = match s.strip_prefix('-') {
                Some(r) => (true, r),
                None => (false, s.as_str()),
            };
            if let Some(name) = rest.strip_prefix('$') {
                let val = *params.get(name).ok_or_else(|| Error::UnboundParameter(name.to_string()))?;
                *v = json!(if neg { -val } else { val });
            }
        }
        Value::Array(items) => {
            for item in items {
                substitute(item, params)?;
            }
        }
        Value::Object(map) => {
            for (k, item) in map.iter_mut() {
                if k != "name" && k != "note" {
                    substitute(item, params)?;
                }
            }
        }
        _ => {}
    }
    Ok(())
}

fn typed<T: serde::de::DeserializeOwned>(doc: Value) -> Result<T> {
    serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        schema(&path, e.into_inner().to_string())
    })
}

/// Parses a diagram document with parameter overrides.
pub fn parse_diagram_with(text: &str, params: &Params) -> Result<GroupDiagram> {
    let raw: RawDiagram = typed(prepare(text, params)?)?;
    let r = raw.rank;
    if r == 0 {
        return Err(schema("rank", "rank must be positive"));
    }
    let mut blocks = Vec::new();
    let g = resolve_group(&raw.g, r, "G", Role::G, &mut blocks)?;
    let gram = resolve_gram(raw.gram.as_deref(), r, &blocks)?;
    let kplus = resolve_group(&raw.kplus, r, "Kplus", Role::K, &mut Vec::new())?;
    let kminus = resolve_group(&raw.kminus, r, "Kminus", Role::K, &mut Vec::new())?;
    let h = resolve_group(&raw.h, r, "H", Role::H, &mut Vec::new())?;
    Ok(GroupDiagram { name: raw.name, rank: r, gram, g, kplus, kminus, h, note: raw.note })
}

/// Parses a diagram document using only its own parameter defaults.
pub fn parse_diagram(text: &str) -> Result<GroupDiagram> {
    parse_diagram_with(text, &Params::new())
}

/// Parses a `{name, rank, gram?, G, K}` document.
pub fn parse_homogeneous_with(text: &str, params: &Params) -> Result<HomogeneousSpace> {
    let raw: RawHomogeneous = typed(prepare(text, params)?)?;
    let r = raw.rank;
    if r == 0 {
        return Err(schema("rank", "rank must be positive"));
    }
    let mut blocks = Vec::new();
    let g = resolve_group(&raw.g, r, "G", Role::G, &mut blocks)?;
    let gram = resolve_gram(raw.gram.as_deref(), r, &blocks)?;
    let k = resolve_group(&raw.k, r, "K", Role::K, &mut Vec::new())?;
    if !k.full_rank || k.torus_span.as_ref().is_some_and(|s| s.dim() < r) {
        let kr = k.torus_span.as_ref().map_or(0, Subspace::dim);
        return Err(Error::RankMismatch(format!("K has rank {kr} but G has rank {r}; G/K has Euler characteristic 0")));
    }
    Ok(HomogeneousSpace { name: raw.name, rank: r, gram, g, k, note: raw.note })
}

pub fn parse_homogeneous(text: &str) -> Result<HomogeneousSpace> {
    parse_homogeneous_with(text, &Params::new())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    G,
    K,
    H,
}

fn resolve_gram(raw: Option<&[Vec<RawRat>]>, r: usize, blocks: &[(usize, GramForm)]) -> Result<GramForm> {
    match raw {
        Some(rows) => GramForm::new(resolve_matrix(rows, r, "gram")?),
        None => {
            let mut gram = GramForm::identity(r);
            for (offset, block) in blocks {
                gram = gram.with_block(block, *offset)?;
            }
            Ok(gram)
        }
    }
}

fn resolve_matrix(rows: &[Vec<RawRat>], r: usize, path: &str) -> Result<RatMatrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != r) {
        return Err(Error::DimensionMismatch(format!("{path} must be a {r}x{r} matrix")));
    }
    let mut out = Vec::with_capacity(r);
    for (i, row) in rows.iter().enumerate() {
        let mut vals = Vec::with_capacity(r);
        for (j, x) in row.iter().enumerate() {
            vals.push(match x {
                RawRat::Int(v) => Rat::from_integer((*v).into()),
                RawRat::Str(s) => parse_rat(s)
                    .ok_or_else(|| schema(&format!("{path}[{i}][{j}]"), format!("`{s}` is not a rational number")))?,
            });
        }
        out.push(vals);
    }
    RatMatrix::from_rows(out)
}

fn resolve_vectors(vs: &[Vec<i64>], r: usize, path: &str) -> Result<Vec<Covector>> {
    vs.iter()
        .enumerate()
        .map(|(i, v)| {
            if v.len() != r {
                Err(Error::DimensionMismatch(format!("{path}[{i}] has length {} but rank is {r}", v.len())))
            } else {
                Ok(Covector::from_ints(v))
            }
        })
        .collect()
}

fn resolve_roots(raw: &RawGroup, r: usize, path: &str, blocks: &mut Vec<(usize, GramForm)>) -> Result<RootSet> {
    let given = [raw.roots.is_some(), raw.construct.is_some(), raw.product.is_some()];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(schema(path, "exactly one of `roots`, `construct`, `product` is required"));
    }
    if let Some(roots) = &raw.roots {
        return RootSet::new(resolve_vectors(roots, r, &format!("{path}.roots"))?);
    }
    if let Some(c) = &raw.construct {
        let family = c.family.parse().map_err(|_| schema(&format!("{path}.construct.family"), format!("unknown family `{}`", c.family)))?;
        let std = standard_roots(family, c.n)?;
        if c.offset + std.coords > r {
            return Err(Error::DimensionMismatch(format!(
                "{path}.construct: {}({}) at offset {} does not fit in rank {r}",
                c.family, c.n, c.offset
            )));
        }
        let embedded = std
            .roots
            .roots()
            .iter()
            .map(|a| {
                let mut v = vec![Rat::from_integer(0.into()); r];
                for (i, x) in a.coords().iter().enumerate() {
                    v[c.offset + i] = x.clone();
                }
                Covector(v)
            })
            .collect();
        blocks.push((c.offset, std.gram));
        return RootSet::new(embedded);
    }
    let mut acc = RootSet::empty();
    for (i, part) in raw.product.as_deref().unwrap_or_default().iter().enumerate() {
        let p = format!("{path}.product[{i}]");
        if part.dim.is_some() || part.full_rank.is_some() || part.weyl_generators.is_some() || part.torus_span.is_some() {
            return Err(schema(&p, "product factors take only `roots`, `construct` or `product`"));
        }
        acc = acc.union(&resolve_roots(part, r, &p, blocks)?)?;
    }
    Ok(acc)
}

fn resolve_group(raw: &RawGroup, r: usize, path: &str, role: Role, blocks: &mut Vec<(usize, GramForm)>) -> Result<GroupDatum> {
    let generators = |gens: &Option<Vec<Vec<Vec<RawRat>>>>| -> Result<Option<Vec<RatMatrix>>> {
        gens.as_ref()
            .map(|gs| {
                gs.iter()
                    .enumerate()
                    .map(|(i, m)| resolve_matrix(m, r, &format!("{path}.weyl_generators[{i}]")))
                    .collect()
            })
            .transpose()
    };
    let span = |vs: &Option<Vec<Vec<i64>>>| -> Result<Option<Subspace>> {
        vs.as_ref()
            .map(|vs| {
                let cov = resolve_vectors(vs, r, &format!("{path}.torus_span"))?;
                Subspace::from_vectors(cov.into_iter().map(|c| c.0).collect(), r)
            })
            .transpose()
    };
    let partial = role == Role::H || raw.full_rank == Some(false);
    if !partial {
        if raw.weyl_generators.is_some() || raw.torus_span.is_some() {
            return Err(schema(path, "`weyl_generators` and `torus_span` require `\"full_rank\": false`"));
        }
        let roots = resolve_roots(raw, r, path, blocks)?;
        return Ok(GroupDatum {
            roots,
            full_rank: true,
            weyl_generators: None,
            torus_span: None,
            dim: raw.dim,
            note: raw.note.clone(),
        });
    }
    if role == Role::G {
        return Err(schema(path, "G must be given by its roots"));
    }
    if raw.construct.is_some() || raw.product.is_some() {
        return Err(schema(path, "lower-rank groups take explicit `roots` only"));
    }
    if role == Role::H && raw.roots.is_some() {
        return Err(schema(&format!("{path}.roots"), "H takes no roots"));
    }
    if role == Role::H && raw.full_rank == Some(true) {
        return Err(schema(&format!("{path}.full_rank"), "H is described by its torus span"));
    }
    let torus_span = span(&raw.torus_span)?;
    if role == Role::H && torus_span.is_none() {
        return Err(schema(path, "missing field `torus_span`"));
    }
    let weyl_generators = generators(&raw.weyl_generators)?;
    if role == Role::K && weyl_generators.is_none() {
        return Err(schema(path, "missing field `weyl_generators`"));
    }
    let roots = match &raw.roots {
        Some(rs) => RootSet::new(resolve_vectors(rs, r, &format!("{path}.roots"))?)?,
        None => RootSet::empty(),
    };
    Ok(GroupDatum { roots, full_rank: false, weyl_generators, torus_span, dim: raw.dim, note: raw.note.clone() })
}

/// Structural checks on a parsed diagram, in a fixed order.
pub fn validate(d: &GroupDiagram) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let r = d.rank;
    let rh = d.rank_h();

    let mut msgs = Vec::new();
    for (label, k) in [("Kplus", &d.kplus), ("Kminus", &d.kminus)] {
        let rk = d.rank_of(k);
        if rk < rh {
            msgs.push(format!("rank {label} = {rk} < rank H = {rh}"));
        }
        if !k.full_rank && rk >= r {
            msgs.push(format!("{label} is marked lower rank but its torus has dimension {rk}"));
        }
    }
    if rh > r {
        msgs.push(format!("rank H = {rh} exceeds rank G = {r}"));
    }
    rep.push("rank bookkeeping", msgs.is_empty(), msgs.join("; "));

    rep.push(
        "gram positive definite",
        GramForm::new(d.gram.matrix().clone()).is_ok(),
        "",
    );

    let cap = gen_cap();
    match WeylGroup::from_roots(&d.g.roots, &d.gram, cap) {
        Ok(w) => rep.push("G roots Weyl invariant", preserves_roots(&w, &d.g.roots), ""),
        Err(e) => rep.push("G roots Weyl invariant", false, e.to_string()),
    }

    for (label, k) in [("Kplus", &d.kplus), ("Kminus", &d.kminus)] {
        if k.full_rank {
            let missing: Vec<String> =
                k.roots.roots().iter().filter(|a| !d.g.roots.contains(a)).map(ToString::to_string).collect();
            rep.push(format!("{label} roots in G"), missing.is_empty(), missing.join(", "));
        }
    }

    let mut bad = Vec::new();
    for (label, k) in [("Kplus", &d.kplus), ("Kminus", &d.kminus), ("H", &d.h)] {
        for (i, m) in k.weyl_generators.iter().flatten().enumerate() {
            if !d.gram.preserved_by(m) {
                bad.push(format!("{label} generator {}", i + 1));
            }
        }
    }
    rep.push("generators preserve gram", bad.is_empty(), bad.join(", "));

    let h_gens = d.h.weyl_generators.as_deref().unwrap_or_default();
    for (label, k) in [("Kplus", &d.kplus), ("Kminus", &d.kminus)] {
        let name = format!("W(H) in W({label})");
        if h_gens.is_empty() {
            rep.push(name, true, "W(H) trivial");
            continue;
        }
        match k.weyl_group(&d.gram, cap) {
            Ok(wk) => {
                let outside = h_gens.iter().filter(|m| !wk.contains(m)).count();
                rep.push(name, outside == 0, if outside == 0 { String::new() } else { format!("{outside} generator(s) outside") });
            }
            Err(e) => rep.push(name, false, e.to_string()),
        }
    }

    let h_dim = d.h.dim;
    for (label, k) in [("Kplus", &d.kplus), ("Kminus", &d.kminus)] {
        let name = format!("dim {label} > dim H");
        match (k.effective_dim(r), h_dim) {
            (Some(dk), Some(dh)) => rep.push(name, dk > dh, format!("{dk} vs {dh}")),
            _ => rep.push(name, true, "skipped: dimensions not given"),
        }
    }
    match d.manifold_dim() {
        Some(m) => rep.push("dim M even", m % 2 == 0, format!("dim M = {m}")),
        None => rep.push("dim M even", true, "skipped: dimensions not given"),
    }

    let mut wrong = Vec::new();
    for (label, k) in [("G", &d.g), ("Kplus", &d.kplus), ("Kminus", &d.kminus)] {
        if let (true, Some(dim)) = (k.full_rank, k.dim) {
            if dim != r + k.roots.len() {
                wrong.push(format!("{label}: dim {dim} != {r} + {}", k.roots.len()));
            }
        }
    }
    rep.push("full-rank dimensions", wrong.is_empty(), wrong.join("; "));
    rep
}

/// Structural checks on a homogeneous space document.
pub fn validate_homogeneous(s: &HomogeneousSpace) -> ValidationReport {
    let mut rep = ValidationReport::new();
    match WeylGroup::from_roots(&s.g.roots, &s.gram, gen_cap()) {
        Ok(w) => rep.push("G roots Weyl invariant", preserves_roots(&w, &s.g.roots), ""),
        Err(e) => rep.push("G roots Weyl invariant", false, e.to_string()),
    }
    let missing: Vec<String> =
        s.k.roots.roots().iter().filter(|a| !s.g.roots.contains(a)).map(ToString::to_string).collect();
    rep.push("K roots in G", missing.is_empty(), missing.join(", "));
    rep
}

/// The primitive covector whose kernel is `t ∩ h`; requires `rank H = rank G - 1`.
pub fn lambda_weight(d: &GroupDiagram) -> Result<Covector> {
    annihilator_line(d.h_span(), d.rank)
}
