//! Exact rational linear algebra on the Cartan coordinates.
//!
//! Covectors (elements of t*) and vectors of t are both plain coordinate
//! tuples; the pairing between them is the standard dot product. Weyl group
//! elements are square matrices acting on covector coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always stored reduced with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"7"`, `"-3"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// `"3"` for integers, `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// An element of t*, in the ambient torus coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Covector(pub Vec<Rat>);

impl Covector {
    pub fn from_ints(coords: &[i64]) -> Self {
        Covector(coords.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Covector(vec![Rat::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.0[i] = Rat::one();
        c
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Evaluates the form on a vector of t.
    pub fn pair(&self, v: &[Rat]) -> Rat {
        dot(&self.0, v)
    }

    pub fn neg(&self) -> Covector {
        Covector(self.0.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, c: &Rat) -> Covector {
        Covector(self.0.iter().map(|x| x * c).collect())
    }

    /// Representative of the class in t*/±1 whose first nonzero coordinate
    /// is positive. Lengths are kept.
    pub fn sign_normalized(&self) -> Covector {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(first) if first.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    /// Integer coordinates, if every coordinate is an integer fitting i64.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|x| if x.is_integer() { x.numer().to_i64() } else { None })
            .collect()
    }
}

impl fmt::Display for Covector {
    /// Renders as a signed combination of `e1, e2, ...`, e.g. `e1-2e2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                f.write_str("-")?;
            } else if wrote {
                f.write_str("+")?;
            }
            if !mag.is_one() {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({}/{})", mag.numer(), mag.denom())?;
                }
            }
            write!(f, "e{}", i + 1)?;
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A linear subspace of t given by linearly independent basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Vec<Vec<Rat>>,
    ambient: usize,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { basis: Vec::new(), ambient }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| Covector::unit(ambient, i).0).collect();
        Subspace { basis, ambient }
    }

    /// Keeps the given vectors as the basis; they must be independent.
    pub fn from_vectors(vectors: Vec<Vec<Rat>>, ambient: usize) -> Result<Self> {
        for v in &vectors {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch(format!(
                    "vector of length {} in rank {ambient}",
                    v.len()
                )));
            }
        }
        if rank(&vectors) != vectors.len() {
            return Err(Error::LinearlyDependent(format!(
                "{} spanning vectors have rank {}",
                vectors.len(),
                rank(&vectors)
            )));
        }
        Ok(Subspace { basis: vectors, ambient })
    }

    pub fn from_int_vectors(vectors: &[Vec<i64>], ambient: usize) -> Result<Self> {
        let vs = vectors.iter().map(|v| v.iter().map(|&x| rat(x)).collect()).collect();
        Self::from_vectors(vs, ambient)
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// True iff the form vanishes on every basis vector.
    pub fn annihilated_by(&self, form: &Covector) -> bool {
        self.basis.iter().all(|v| form.pair(v).is_zero())
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rank(&rows) == self.dim()
    }
}

/// Square rational matrix acting on covector coordinates by `M * c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n: usize,
    data: Vec<Rat>,
}

impl PartialOrd for RatMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatMatrix {
    /// Lexicographic on the row-major flattened entries.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n.cmp(&other.n).then_with(|| self.data.cmp(&other.data))
    }
}

impl RatMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Rat::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Rat::one();
        }
        RatMatrix { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("matrix with {n} rows is not square")));
        }
        Ok(RatMatrix { n, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::identity(n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = rat(e);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.n + j]
    }

    pub fn entries(&self) -> &[Rat] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        let n = self.n;
        let mut data = vec![Rat::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        data[i * n + j] += a * b;
                    }
                }
            }
        }
        RatMatrix { n, data }
    }

    pub fn transpose(&self) -> RatMatrix {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                data.push(self.data[i * n + j].clone());
            }
        }
        RatMatrix { n, data }
    }

    pub fn apply(&self, c: &Covector) -> Covector {
        let n = self.n;
        Covector((0..n).map(|i| dot(&self.data[i * n..(i + 1) * n], &c.0)).collect())
    }

    /// Inverse by Gauss-Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        let n = self.n;
        let mut aug: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row = self.data[i * n..(i + 1) * n].to_vec();
                row.extend(Covector::unit(n, i).0);
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, piv);
            let inv = aug[col][col].recip();
            for x in aug[col].iter_mut() {
                *x *= &inv;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in 0..2 * n {
                        let t = &aug[col][c] * &f;
                        aug[r][c] -= t;
                    }
                }
            }
        }
        Some(RatMatrix { n, data: aug.into_iter().flat_map(|r| r[n..].to_vec()).collect() })
    }

    /// Block-diagonal placement of `block` at `offset` inside an `n`-identity.
    pub fn embed(&self, n: usize, offset: usize) -> RatMatrix {
        let mut m = Self::identity(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.data[(i + offset) * n + j + offset] = self.get(i, j).clone();
            }
        }
        m
    }
}

/// Reduced row-echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for c in col..ncols {
                    let t = &m[r][c] * &f;
                    m[i][c] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rref(rows).1.len()
}

/// Scales a nonzero vector to coprime integers with first nonzero entry positive.
pub fn primitive(v: &[Rat]) -> Result<Vec<Rat>> {
    if v.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVector);
    }
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let first_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative);
    let g = if first_negative { -g } else { g };
    Ok(ints.into_iter().map(|x| Rat::from_integer(x / &g)).collect())
}

/// Basis of `{ v : <row, v> = 0 for all rows }`, one primitive integral
/// vector per free column of the echelon form, ordered by free column.
pub fn kernel_basis(rows: &[Covector], rank_: usize) -> Result<Subspace> {
    if let Some(bad) = rows.iter().find(|r| r.len() != rank_) {
        return Err(Error::DimensionMismatch(format!("row of length {} in rank {rank_}", bad.len())));
    }
    let plain: Vec<Vec<Rat>> = rows.iter().map(|r| r.0.clone()).collect();
    let (red, pivots) = rref(&plain);
    let mut basis = Vec::new();
    for free in (0..rank_).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); rank_];
        v[free] = Rat::one();
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(primitive(&v)?);
    }
    Ok(Subspace { basis, ambient: rank_ })
}

/// The primitive sign-normalized covector vanishing on a hyperplane.
pub fn annihilator_line(span: &Subspace, rank_: usize) -> Result<Covector> {
    if span.ambient != rank_ {
        return Err(Error::DimensionMismatch(format!(
            "subspace of rank {} used in rank {rank_}",
            span.ambient
        )));
    }
    if span.dim() + 1 != rank_ {
        return Err(Error::RankMismatch(format!(
            "annihilator line needs a subspace of dimension {}, got {}",
            rank_.saturating_sub(1),
            span.dim()
        )));
    }
    let rows: Vec<Covector> = span.basis.iter().map(|v| Covector(v.clone())).collect();
    let ker = kernel_basis(&rows, rank_)?;
    debug_assert_eq!(ker.dim(), 1);
    Ok(Covector(ker.basis[0].clone()))
}

pub fn primitive_covector(v: &Covector) -> Result<Covector> {
    primitive(&v.0).map(Covector)
}

/// True iff `a = c * b` for a nonzero rational `c`.
pub fn proportional(a: &Covector, b: &Covector) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("lengths {} and {}", a.len(), b.len())));
    }
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(rank(&[a.0.clone(), b.0.clone()]) == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cv(x: &[i64]) -> Covector {
        Covector::from_ints(x)
    }

    fn ints(s: &Subspace) -> Vec<Vec<i64>> {
        s.basis().iter().map(|v| Covector(v.clone()).to_ints().unwrap()).collect()
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&[cv(&[1, 0]), cv(&[0, 1])], 2).unwrap();
        assert_eq!(k.dim(), 0);
        let k = kernel_basis(&[cv(&[1, 1])], 2).unwrap();
        assert_eq!(ints(&k), vec![vec![1, -1]]);
        let k = kernel_basis(&[cv(&[1, -1]), cv(&[1, 2]), cv(&[2, 1])], 2).unwrap();
        assert_eq!(k.dim(), 0);
    }

    #[test]
    fn kernel_rejects_bad_length() {
        assert!(matches!(kernel_basis(&[cv(&[1, 0, 0])], 2), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn annihilator_examples() {
        let s = Subspace::from_int_vectors(&[vec![1, -1]], 2).unwrap();
        assert_eq!(annihilator_line(&s, 2).unwrap(), cv(&[1, 1]));
        let s = Subspace::from_int_vectors(&[vec![2, 1]], 2).unwrap();
        assert_eq!(annihilator_line(&s, 2).unwrap(), cv(&[1, -2]));
        let s = Subspace::from_int_vectors(&[vec![1, 1, 0], vec![0, 0, 1]], 3).unwrap();
        assert_eq!(annihilator_line(&s, 3).unwrap(), cv(&[1, -1, 0]));
    }

    #[test]
    fn annihilator_rank_mismatch() {
        let s = Subspace::zero(2);
        assert!(matches!(annihilator_line(&s, 2), Err(Error::RankMismatch(_))));
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive_covector(&cv(&[2, -4])).unwrap(), cv(&[1, -2]));
        assert_eq!(primitive_covector(&cv(&[0, -3])).unwrap(), cv(&[0, 1]));
        let half_third = Covector(vec![rat_frac(1, 2), rat_frac(-1, 3)]);
        assert_eq!(primitive_covector(&half_third).unwrap(), cv(&[3, -2]));
        assert_eq!(primitive_covector(&cv(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn proportional_examples() {
        assert!(proportional(&cv(&[2, 0]), &cv(&[1, 0])).unwrap());
        assert!(!proportional(&cv(&[1, -1]), &cv(&[1, 1])).unwrap());
        assert!(proportional(&cv(&[2, 4]), &cv(&[1, 2])).unwrap());
        assert_eq!(proportional(&cv(&[0, 0]), &cv(&[1, 2])), Err(Error::ZeroVector));
    }

    #[test]
    fn display_labels() {
        assert_eq!(cv(&[1, -2]).to_string(), "e1-2e2");
        assert_eq!(cv(&[0, 2]).to_string(), "2e2");
        assert_eq!(cv(&[1, 1, 0]).to_string(), "e1+e2");
        assert_eq!(cv(&[-1, 0, 3]).to_string(), "-e1+3e3");
    }

    #[test]
    fn rat_parsing() {
        assert_eq!(parse_rat("-1/3"), Some(rat_frac(-1, 3)));
        assert_eq!(parse_rat("4"), Some(rat(4)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
        assert_eq!(format_rat(&rat_frac(2, -4)), "-1/2");
    }

    #[test]
    fn matrix_inverse_roundtrip() {
        let m = RatMatrix::from_int_rows(&[vec![1, 2], vec![3, 5]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(RatMatrix::from_int_rows(&[vec![1, 2], vec![2, 4]]).unwrap().inverse().is_none());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = Rat> {
            (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat_frac(n, d))
        }

        fn rows(r: usize) -> impl Strategy<Value = Vec<Covector>> {
            prop::collection::vec(prop::collection::vec(small_rat(), r).prop_map(Covector), 0..5)
        }

        fn nonzero(r: usize) -> impl Strategy<Value = Covector> {
            prop::collection::vec(small_rat(), r)
                .prop_map(Covector)
                .prop_filter("nonzero", |c| !c.is_zero())
        }

        proptest! {
            #[test]
            fn rank_nullity((r, rs) in (1usize..5).prop_flat_map(|r| (Just(r), rows(r)))) {
                let ker = kernel_basis(&rs, r).unwrap();
                let plain: Vec<Vec<Rat>> = rs.iter().map(|c| c.0.clone()).collect();
                prop_assert_eq!(rank(&plain) + ker.dim(), r);
                for v in ker.basis() {
                    for row in &rs {
                        prop_assert!(row.pair(v).is_zero());
                    }
                }
            }

            #[test]
            fn annihilator_vanishes(vs in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 2)) {
                if let Ok(span) = Subspace::from_int_vectors(&vs, 3) {
                    let line = annihilator_line(&span, 3).unwrap();
                    prop_assert!(span.annihilated_by(&line));
                    prop_assert_eq!(primitive_covector(&line).unwrap(), line);
                }
            }

            #[test]
            fn proportional_symmetric_and_scale_invariant(a in nonzero(3), b in nonzero(3), c in small_rat()) {
                let p = proportional(&a, &b).unwrap();
                prop_assert_eq!(p, proportional(&b, &a).unwrap());
                if !c.is_zero() {
                    prop_assert_eq!(p, proportional(&a.scale(&c), &b).unwrap());
                    prop_assert!(proportional(&a, &a.scale(&c)).unwrap());
                }
            }

            #[test]
            fn primitive_idempotent(a in nonzero(4)) {
                let p = primitive_covector(&a).unwrap();
                prop_assert_eq!(primitive_covector(&p).unwrap(), p.clone());
                prop_assert!(proportional(&a, &p).unwrap());
            }
        }
    }
}
