//! Root systems and the finite reflection groups they generate.
//!
//! Every group is realised concretely as a set of rational matrices acting on
//! t* coordinates, enumerated by breadth-first closure. Element lists are kept
//! sorted lexicographically so that cosets, representatives and words are
//! reproducible.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::ratlin::{rat, rat_frac, Covector, Rat, RatMatrix};

/// Default cap on the number of elements produced by [`generate_group`].
pub const DEFAULT_GEN_CAP: usize = 1_000_000;

/// Environment variable overriding [`DEFAULT_GEN_CAP`].
pub const GEN_CAP_ENV: &str = "GKM_GEN_CAP";

/// The generation cap, honouring `GKM_GEN_CAP` when it parses.
pub fn gen_cap() -> usize {
    std::env::var(GEN_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&c: &usize| c >= 1)
        .unwrap_or(DEFAULT_GEN_CAP)
}

/// Inner product on t*, stored as a symmetric positive definite matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramForm {
    matrix: RatMatrix,
}

impl GramForm {
    pub fn identity(rank: usize) -> Self {
        GramForm { matrix: RatMatrix::identity(rank) }
    }

    pub fn new(matrix: RatMatrix) -> Result<Self> {
        let n = matrix.size();
        for i in 0..n {
            for j in 0..i {
                if matrix.get(i, j) != matrix.get(j, i) {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        // Elimination without pivoting: all pivots positive iff all leading
        // principal minors are positive.
        let mut m = matrix.rows();
        for k in 0..n {
            if !m[k][k].is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
            for i in k + 1..n {
                let f = &m[i][k] / &m[k][k];
                for j in k..n {
                    let t = &m[k][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        Ok(GramForm { matrix })
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.size()
    }

    pub fn inner(&self, a: &Covector, b: &Covector) -> Rat {
        a.pair(self.matrix.apply(b).coords())
    }

    /// `M^T B M == B`.
    pub fn preserved_by(&self, m: &RatMatrix) -> bool {
        m.size() == self.rank() && m.transpose().mul(&self.matrix).mul(m) == self.matrix
    }

    /// Places `block` on the diagonal at `offset`, leaving the rest untouched.
    pub fn with_block(&self, block: &GramForm, offset: usize) -> Result<GramForm> {
        let n = self.rank();
        if offset + block.rank() > n {
            return Err(Error::DimensionMismatch(format!(
                "block of size {} at offset {offset} exceeds rank {n}",
                block.rank()
            )));
        }
        let mut rows = self.matrix.rows();
        for i in 0..block.rank() {
            for j in 0..block.rank() {
                rows[offset + i][offset + j] = block.matrix.get(i, j).clone();
            }
        }
        GramForm::new(RatMatrix::from_rows(rows)?)
    }
}

/// A finite set of roots, closed under negation and free of zero and duplicates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    roots: Vec<Covector>,
}

impl RootSet {
    pub fn empty() -> Self {
        RootSet { roots: Vec::new() }
    }

    pub fn new(roots: Vec<Covector>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &roots {
            if r.is_zero() {
                return Err(Error::InvalidRoots("zero is not a root".into()));
            }
            if !seen.insert(r.clone()) {
                return Err(Error::InvalidRoots(format!("duplicate root {r}")));
            }
        }
        if let Some(r) = roots.iter().find(|r| !seen.contains(&r.neg())) {
            return Err(Error::InvalidRoots(format!("{r} present but {} missing", r.neg())));
        }
        Ok(RootSet { roots })
    }

    pub fn from_ints(roots: &[Vec<i64>]) -> Result<Self> {
        Self::new(roots.iter().map(|r| Covector::from_ints(r)).collect())
    }

    pub fn roots(&self) -> &[Covector] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, r: &Covector) -> bool {
        self.roots.contains(r)
    }

    pub fn is_subset_of(&self, other: &RootSet) -> bool {
        self.roots.iter().all(|r| other.contains(r))
    }

    /// `self \ other`, in the order of `self`.
    pub fn difference(&self, other: &RootSet) -> RootSet {
        RootSet { roots: self.roots.iter().filter(|r| !other.contains(r)).cloned().collect() }
    }

    /// One sign-normalized representative per `±` pair, in order of first appearance.
    pub fn positive_classes(&self) -> Vec<Covector> {
        let mut out: Vec<Covector> = Vec::new();
        for r in &self.roots {
            let n = r.sign_normalized();
            if !out.contains(&n) {
                out.push(n);
            }
        }
        out
    }

    /// Union of disjoint root sets living in the same coordinates.
    pub fn union(&self, other: &RootSet) -> Result<RootSet> {
        let mut roots = self.roots.clone();
        roots.extend(other.roots.iter().cloned());
        RootSet::new(roots)
    }
}

/// `sigma_alpha(beta) = beta - 2 (beta, alpha) / (alpha, alpha) * alpha`, as a
/// matrix on t* coordinates.
pub fn reflection_matrix(alpha: &Covector, gram: &GramForm) -> Result<RatMatrix> {
    if alpha.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = gram.rank();
    if alpha.len() != n {
        return Err(Error::DimensionMismatch(format!("root of length {} in rank {n}", alpha.len())));
    }
    let b_alpha = gram.matrix().apply(alpha);
    let norm = alpha.pair(b_alpha.coords());
    let scale = rat(2) / norm;
    let mut rows = RatMatrix::identity(n).rows();
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x -= &scale * &alpha.coords()[i] * &b_alpha.coords()[j];
        }
    }
    RatMatrix::from_rows(rows)
}

/// A finite matrix group on t* with every element enumerated.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    rank: usize,
    generators: Vec<RatMatrix>,
    elements: Vec<RatMatrix>,
    index: HashMap<RatMatrix, usize>,
    /// Shortest word for each element (parallel to `elements`), as generator indices.
    words: Vec<Vec<usize>>,
}

impl PartialEq for WeylGroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for WeylGroup {}

impl WeylGroup {
    pub fn trivial(rank: usize) -> Self {
        let id = RatMatrix::identity(rank);
        WeylGroup {
            rank,
            generators: Vec::new(),
            index: HashMap::from([(id.clone(), 0)]),
            elements: vec![id],
            words: vec![Vec::new()],
        }
    }

    /// The group generated by the reflections in the given roots.
    pub fn from_roots(roots: &RootSet, gram: &GramForm, cap: usize) -> Result<Self> {
        let mut gens: Vec<RatMatrix> = Vec::new();
        for alpha in roots.positive_classes() {
            let s = reflection_matrix(&alpha, gram)?;
            if !gens.contains(&s) {
                gens.push(s);
            }
        }
        generate_group(&gens, gram, cap)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[RatMatrix] {
        &self.generators
    }

    /// All elements, sorted lexicographically.
    pub fn elements(&self) -> &[RatMatrix] {
        &self.elements
    }

    pub fn position(&self, m: &RatMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &RatMatrix) -> bool {
        self.index.contains_key(m)
    }

    pub fn is_subgroup_of(&self, other: &WeylGroup) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    pub fn word(&self, pos: usize) -> &[usize] {
        &self.words[pos]
    }

    pub fn word_string(&self, pos: usize) -> String {
        format_word(&self.words[pos])
    }

    /// The subgroup of elements satisfying `keep`. Words are inherited from `self`.
    pub fn subgroup_where(&self, keep: impl Fn(&RatMatrix) -> bool) -> WeylGroup {
        let (elements, words): (Vec<_>, Vec<_>) = self
            .elements
            .iter()
            .zip(&self.words)
            .filter(|(e, _)| keep(e))
            .map(|(e, w)| (e.clone(), w.clone()))
            .unzip();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let generators = elements.iter().filter(|e| !e.is_identity()).cloned().collect();
        WeylGroup { rank: self.rank, generators, elements, index, words }
    }

    /// `<self, extra>`.
    pub fn adjoin(&self, extra: &RatMatrix, gram: &GramForm, cap: usize) -> Result<WeylGroup> {
        let mut gens = self.generators.clone();
        gens.push(extra.clone());
        generate_group(&gens, gram, cap)
    }
}

/// `"e"` for the identity, otherwise `s1s2...`; indices above 9 are braced.
pub fn format_word(word: &[usize]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter()
        .map(|&g| if g < 9 { format!("s{}", g + 1) } else { format!("s{{{}}}", g + 1) })
        .collect()
}

/// Breadth-first closure of `generators` under right multiplication.
pub fn generate_group(generators: &[RatMatrix], gram: &GramForm, cap: usize) -> Result<WeylGroup> {
    let rank = gram.rank();
    for (i, g) in generators.iter().enumerate() {
        if g.size() != rank {
            return Err(Error::DimensionMismatch(format!(
                "generator {} has size {} in rank {rank}",
                i + 1,
                g.size()
            )));
        }
        if !gram.preserved_by(g) {
            return Err(Error::NotOrthogonal(format!("generator {}", i + 1)));
        }
    }
    let found = match closure_small(generators, rank, cap)? {
        Some(found) => found,
        None => closure_exact(generators, rank, cap)?,
    };
    let mut pairs = found;
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (elements, words): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    Ok(WeylGroup { rank, generators: generators.to_vec(), elements, index, words })
}

/// Group elements paired with their generator words.
type Closure = Vec<(RatMatrix, Vec<usize>)>;

fn closure_exact(generators: &[RatMatrix], rank: usize, cap: usize) -> Result<Closure> {
    let id = RatMatrix::identity(rank);
    let mut found: HashMap<RatMatrix, Vec<usize>> = HashMap::from([(id.clone(), Vec::new())]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        let word = found[&x].clone();
        for (gi, g) in generators.iter().enumerate() {
            let y = x.mul(g);
            if found.contains_key(&y) {
                continue;
            }
            let mut w = word.clone();
            w.push(gi);
            found.insert(y.clone(), w);
            if found.len() > cap {
                return Err(Error::GroupTooLarge { cap });
            }
            queue.push_back(y);
        }
    }
    Ok(found.into_iter().collect())
}

/// A rational matrix as machine integers over a positive common denominator,
/// reduced so that the representation is unique.
#[derive(Clone, PartialEq, Eq, Hash)]
struct SmallMatrix {
    den: i64,
    num: Vec<i64>,
}

impl SmallMatrix {
    fn from_rat(m: &RatMatrix) -> Option<SmallMatrix> {
        let mut den: i64 = 1;
        for e in m.entries() {
            let d = i64::try_from(e.denom()).ok()?;
            den = num_integer::Integer::lcm(&den, &d);
        }
        let num = m
            .entries()
            .iter()
            .map(|e| {
                let n = i64::try_from(e.numer()).ok()?;
                n.checked_mul(den / i64::try_from(e.denom()).ok()?)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(SmallMatrix { den, num }.reduced())
    }

    fn reduced(mut self) -> SmallMatrix {
        let mut g = self.den;
        for &x in &self.num {
            g = num_integer::Integer::gcd(&g, &x);
        }
        if g > 1 {
            self.den /= g;
            self.num.iter_mut().for_each(|x| *x /= g);
        }
        self
    }

    fn mul(&self, other: &SmallMatrix, n: usize) -> Option<SmallMatrix> {
        let mut num = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.num[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = a.checked_mul(other.num[k * n + j])?;
                    num[i * n + j] = num[i * n + j].checked_add(t)?;
                }
            }
        }
        Some(SmallMatrix { den: self.den.checked_mul(other.den)?, num }.reduced())
    }

    fn to_rat(&self, n: usize) -> RatMatrix {
        let rows = self.num.chunks(n.max(1)).take(n).map(|r| r.iter().map(|&x| rat_frac(x, self.den)).collect()).collect();
        RatMatrix::from_rows(rows).expect("square")
    }
}

/// Closure in machine integers; `None` when some entry leaves `i64`.
fn closure_small(generators: &[RatMatrix], rank: usize, cap: usize) -> Result<Option<Closure>> {
    let Some(gens) = generators.iter().map(SmallMatrix::from_rat).collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    let id = SmallMatrix { den: 1, num: (0..rank * rank).map(|k| i64::from(k % (rank + 1) == 0)).collect() };
    let mut found: HashMap<SmallMatrix, Vec<usize>> = HashMap::from([(id.clone(), Vec::new())]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        let word = found[&x].clone();
        for (gi, g) in gens.iter().enumerate() {
            let Some(y) = x.mul(g, rank) else {
                return Ok(None);
            };
            if found.contains_key(&y) {
                continue;
            }
            let mut w = word.clone();
            w.push(gi);
            found.insert(y.clone(), w);
            if found.len() > cap {
                return Err(Error::GroupTooLarge { cap });
            }
            queue.push_back(y);
        }
    }
    Ok(Some(found.into_iter().map(|(m, w)| (m.to_rat(rank), w)).collect()))
}

/// Left cosets `w * W_sub` with lexicographically minimal representatives.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    ambient_order: usize,
    subgroup_order: usize,
    representatives: Vec<RatMatrix>,
    /// Coset index of each ambient element, parallel to the ambient element list.
    coset_of: Vec<usize>,
    words: Vec<String>,
}

impl CosetSpace {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn representatives(&self) -> &[RatMatrix] {
        &self.representatives
    }

    /// Shortest generator word among the members of each coset.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn ambient_order(&self) -> usize {
        self.ambient_order
    }

    pub fn subgroup_order(&self) -> usize {
        self.subgroup_order
    }

    /// Coset of an ambient element, given its position in the ambient group.
    pub fn coset_of_position(&self, pos: usize) -> usize {
        self.coset_of[pos]
    }

    pub fn coset_of(&self, ambient: &WeylGroup, m: &RatMatrix) -> Option<usize> {
        ambient.position(m).map(|p| self.coset_of[p])
    }
}

pub fn coset_space(w: &WeylGroup, sub: &WeylGroup) -> Result<CosetSpace> {
    if let Some(bad) = sub.elements().iter().find(|e| !w.contains(e)) {
        return Err(Error::NotSubgroup(format!("element {:?} not in ambient group", bad.rows())));
    }
    let mut coset_of = vec![usize::MAX; w.order()];
    let mut representatives = Vec::new();
    let mut words = Vec::new();
    for (pos, x) in w.elements().iter().enumerate() {
        if coset_of[pos] != usize::MAX {
            continue;
        }
        // Elements are visited in sorted order, so the first unassigned member
        // of a coset is its minimum.
        let idx = representatives.len();
        representatives.push(x.clone());
        let mut best: Option<&[usize]> = None;
        for h in sub.elements() {
            let p = w.position(&x.mul(h)).ok_or_else(|| {
                Error::NotSubgroup("coset leaves the ambient group".into())
            })?;
            coset_of[p] = idx;
            let cand = w.word(p);
            if best.is_none_or(|b| (cand.len(), cand) < (b.len(), b)) {
                best = Some(cand);
            }
        }
        words.push(format_word(best.unwrap_or(&[])));
    }
    Ok(CosetSpace {
        ambient_order: w.order(),
        subgroup_order: sub.order(),
        representatives,
        coset_of,
        words,
    })
}

/// `{ w * lambda : w in W }`, signs kept.
pub fn orbit(w: &WeylGroup, lambda: &Covector) -> BTreeSet<Covector> {
    w.elements().iter().map(|m| m.apply(lambda)).collect()
}

/// Orbit modulo `±1`, as sign-normalized representatives.
pub fn orbit_mod_sign(w: &WeylGroup, lambda: &Covector) -> BTreeSet<Covector> {
    w.elements().iter().map(|m| m.apply(lambda).sign_normalized()).collect()
}

/// `{ w : w * lambda = ±lambda }`.
pub fn stabilizer_mod_sign(w: &WeylGroup, lambda: &Covector) -> Result<WeylGroup> {
    if lambda.is_zero() {
        return Err(Error::ZeroVector);
    }
    let neg = lambda.neg();
    Ok(w.subgroup_where(|m| {
        let image = m.apply(lambda);
        image == *lambda || image == neg
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    A,
    B,
    C,
    D,
    G2,
    F4,
    U,
    Torus,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "G2" => Family::G2,
            "F4" => Family::F4,
            "U" => Family::U,
            "torus" => Family::Torus,
            other => {
                return Err(Error::Schema {
                    path: "construct.family".into(),
                    msg: format!("unknown family `{other}`"),
                })
            }
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::G2 => "G2",
            Family::F4 => "F4",
            Family::U => "U",
            Family::Torus => "torus",
        })
    }
}

/// Output of [`standard_roots`].
#[derive(Clone, Debug)]
pub struct StandardRoots {
    pub roots: RootSet,
    /// The inner product under which the roots form a reflection-invariant system.
    pub gram: GramForm,
    /// Number of torus coordinates used.
    pub coords: usize,
    /// Dimension of the compact group: `coords + |roots|`.
    pub group_dim: usize,
}

/// Standard root systems in standard coordinates.
///
/// * `A(n)`: type A_n in the n coordinates of SU(n+1), with
///   `e_{n+1} = -(e_1 + ... + e_n)` and gram `delta_ij - 1/(n+1)`.
/// * `B(n)`, `C(n)`, `D(n)`: the usual `±e_i±e_j` plus `±e_i` or `±2e_i`.
/// * `G2`: long roots `e_i - e_j` and short roots `±e_i` in the A_2 coordinates.
/// * `F4`: twice the usual coordinates, `±2e_i±2e_j`, `±2e_i`, `(±1,±1,±1,±1)`.
/// * `U(n)`: `e_i - e_j` in n coordinates.
/// * `torus(n)`: no roots.
pub fn standard_roots(family: Family, n: usize) -> Result<StandardRoots> {
    let unsupported = || Error::UnsupportedRank { family: family.to_string(), n };
    if n == 0 {
        return Err(unsupported());
    }
    let unit = |len: usize, i: usize, c: i64| {
        let mut v = vec![0i64; len];
        v[i] = c;
        v
    };
    let mut pos: Vec<Vec<i64>> = Vec::new();
    let mut gram = GramForm::identity(n);
    match family {
        Family::A | Family::G2 => {
            if family == Family::G2 && n != 2 {
                return Err(unsupported());
            }
            // e_i for i <= n, and e_{n+1} as minus the sum.
            let e = |i: usize| {
                if i < n {
                    unit(n, i, 1)
                } else {
                    vec![-1; n]
                }
            };
            for i in 0..=n {
                for j in i + 1..=n {
                    pos.push(e(i).iter().zip(e(j)).map(|(a, b)| a - b).collect());
                }
            }
            if family == Family::G2 {
                pos.extend([vec![1, 0], vec![0, 1], vec![1, 1]]);
            }
            let np1 = (n + 1) as i64;
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| rat_frac(if i == j { np1 - 1 } else { -1 }, np1))
                        .collect()
                })
                .collect();
            gram = GramForm::new(RatMatrix::from_rows(rows)?)?;
        }
        Family::B | Family::C | Family::D => {
            for i in 0..n {
                for j in i + 1..n {
                    let mut a = vec![0; n];
                    a[i] = 1;
                    a[j] = -1;
                    pos.push(a);
                    let mut b = vec![0; n];
                    b[i] = 1;
                    b[j] = 1;
                    pos.push(b);
                }
            }
            match family {
                Family::B => pos.extend((0..n).map(|i| unit(n, i, 1))),
                Family::C => pos.extend((0..n).map(|i| unit(n, i, 2))),
                _ => {}
            }
        }
        Family::F4 => {
            if n != 4 {
                return Err(unsupported());
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    for s in [2, -2] {
                        let mut v = vec![0; 4];
                        v[i] = 2;
                        v[j] = s;
                        pos.push(v);
                    }
                }
            }
            pos.extend((0..4).map(|i| unit(4, i, 2)));
            for mask in 0..8u32 {
                let mut v = vec![1i64];
                v.extend((0..3).map(|b| if mask >> b & 1 == 1 { -1 } else { 1 }));
                pos.push(v);
            }
        }
        Family::U => {
            for i in 0..n {
                for j in i + 1..n {
                    let mut v = vec![0; n];
                    v[i] = 1;
                    v[j] = -1;
                    pos.push(v);
                }
            }
        }
        Family::Torus => {}
    }
    let mut all: Vec<Vec<i64>> = pos.clone();
    all.extend(pos.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<_>>()));
    let roots = RootSet::from_ints(&all)?;
    let group_dim = n + roots.len();
    Ok(StandardRoots { roots, gram, coords: n, group_dim })
}

/// True iff every element of `w` maps the root set onto itself.
pub fn preserves_roots(w: &WeylGroup, roots: &RootSet) -> bool {
    w.generators().iter().all(|g| roots.roots().iter().all(|r| roots.contains(&g.apply(r))))
}

/// `|W| / |W_sub|` when it divides.
pub fn index_of(w: &WeylGroup, sub: &WeylGroup) -> Option<usize> {
    w.order().is_multiple_of(sub.order()).then(|| w.order() / sub.order())
}

/// Convenience used by tests and the catalog: `±1` scalar matrix.
pub fn minus_identity(rank: usize) -> RatMatrix {
    RatMatrix::diagonal(&vec![-1; rank])
}
