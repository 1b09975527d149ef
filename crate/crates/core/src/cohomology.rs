//! Equivariant cohomology dimensions of a GKM graph and the Betti numbers
//! they determine.
//!
//! In polynomial degree `d` the equivariant cohomology is the space of
//! tuples `(f_p)` of degree-`d` polynomials on t such that `f_p - f_q` is
//! divisible by the label of every edge `pq`. Divisibility by `α` is the
//! vanishing of the restriction to `ker α`, which is linear in the
//! coefficients.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::GkmGraph;
use crate::ratlin::{kernel_basis, Covector};
use crate::report::ValidationReport;

/// Which basis of `ker α` to substitute; the dimensions do not depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelBasis {
    Canonical,
    /// An invertible integral recombination of the canonical basis.
    Alternate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiResult {
    /// `b_0, b_2, ..., b_2n`.
    pub betti: Vec<i64>,
    /// `h_0, h_1, ...` up to degree `n + 2`.
    pub ht_dims: Vec<usize>,
    pub r: usize,
    /// `b_2(n+1)` and `b_2(n+2)`, which must vanish.
    pub over_degree: Vec<i64>,
}

/// `C(n, k)` for small arguments.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim Sym^d` of an `r`-dimensional space.
pub fn sym_dim(d: usize, r: usize) -> usize {
    if r == 0 {
        return usize::from(d == 0);
    }
    binomial(d + r - 1, r - 1)
}

/// Exponent vectors of degree `d` in `r` variables, in lexicographic order.
pub fn monomials(d: usize, r: usize) -> Vec<Vec<u32>> {
    fn go(d: u32, r: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if r == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            go(d - a, r - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(d as u32, r, &mut Vec::new(), &mut out);
    out
}

type Poly = HashMap<Vec<u32>, BigInt>;

fn poly_mul_linear(p: &Poly, lin: &[BigInt]) -> Poly {
    let mut out = Poly::new();
    for (m, c) in p {
        for (j, l) in lin.iter().enumerate() {
            if l.is_zero() {
                continue;
            }
            let mut e = m.clone();
            e[j] += 1;
            *out.entry(e).or_insert_with(BigInt::zero) += c * l;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn kernel_vectors(alpha: &Covector, basis: KernelBasis) -> Result<Vec<Vec<BigInt>>> {
    let ker = kernel_basis(std::slice::from_ref(alpha), alpha.len())?;
    let mut vs: Vec<Vec<BigInt>> = ker
        .basis()
        .iter()
        .map(|v| v.iter().map(|x| x.to_integer()).collect())
        .collect();
    if basis == KernelBasis::Alternate {
        // v_i <- 2 v_i + v_{i+1} + ... + v_k, reversed: upper triangular with
        // nonzero diagonal, hence invertible.
        let k = vs.len();
        let orig = vs.clone();
        for i in 0..k {
            for (c, x) in vs[i].iter_mut().enumerate() {
                *x = &orig[i][c] * 2 + (i + 1..k).map(|j| orig[j][c].clone()).sum::<BigInt>();
            }
        }
        vs.reverse();
    }
    Ok(vs)
}

/// Matrix of the restriction `Sym^d(t*) -> Sym^d(ker α)*`, one row per
/// monomial in the kernel coordinates.
fn restriction(alpha: &Covector, d: usize, basis: KernelBasis) -> Result<Vec<Vec<BigInt>>> {
    let r = alpha.len();
    let vs = kernel_vectors(alpha, basis)?;
    let k = vs.len();
    let src = monomials(d, r);
    let dst = monomials(d, k);
    let dst_index: HashMap<&Vec<u32>, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
    // x_i restricted to ker α is the linear form y -> sum_j y_j v_j[i].
    let coord_forms: Vec<Vec<BigInt>> = (0..r).map(|i| vs.iter().map(|v| v[i].clone()).collect()).collect();
    let mut rows = vec![vec![BigInt::zero(); src.len()]; dst.len()];
    for (col, m) in src.iter().enumerate() {
        let mut p = Poly::from([(vec![0u32; k], BigInt::from(1))]);
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                p = poly_mul_linear(&p, &coord_forms[i]);
            }
        }
        for (mono, c) in p {
            rows[dst_index[&mono]][col] = c;
        }
    }
    Ok(rows)
}

fn content_reduce_i128(row: &mut [i128]) {
    let mut g: i128 = 0;
    for &x in row.iter() {
        if x != 0 {
            g = g.gcd(&x);
            if g == 1 {
                return;
            }
        }
    }
    if g > 1 {
        for x in row.iter_mut() {
            *x /= g;
        }
    }
}

/// Fraction-free elimination in `i128`; `None` on overflow.
fn rank_i128(rows: Vec<Vec<i128>>, ncols: usize) -> Option<usize> {
    let mut rows = rows;
    rows.retain(|r| r.iter().any(|&x| x != 0));
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).filter(|&i| rows[i][col] != 0).min_by_key(|&i| rows[i][col].unsigned_abs()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let piv = &head[rank];
        let a = piv[col];
        for row in tail.iter_mut() {
            let b = row[col];
            if b == 0 {
                continue;
            }
            let g = a.gcd(&b);
            let (ma, mb) = (a / g, b / g);
            for c in col..ncols {
                row[c] = row[c].checked_mul(ma)?.checked_sub(piv[c].checked_mul(mb)?)?;
            }
            content_reduce_i128(row);
        }
        rank += 1;
        let mut i = rank;
        while i < rows.len() {
            if rows[i].iter().all(|&x| x == 0) {
                rows.swap_remove(i);
            } else {
                i += 1;
            }
        }
    }
    Some(rank)
}

fn rank_bigint(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> usize {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(pivot) = (rank..rows.len()).filter(|&i| !rows[i][col].is_zero()).min_by_key(|&i| rows[i][col].abs()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let piv = &head[rank];
        let a = piv[col].clone();
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let b = row[col].clone();
            let g = a.gcd(&b);
            let (ma, mb) = (&a / &g, &b / &g);
            for c in col..ncols {
                row[c] = &row[c] * &ma - &piv[c] * &mb;
            }
            let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if g > BigInt::from(1) {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
        }
        rank += 1;
        let mut i = rank;
        while i < rows.len() {
            if rows[i].iter().all(Zero::is_zero) {
                rows.swap_remove(i);
            } else {
                i += 1;
            }
        }
    }
    rank
}

/// Exact rank of an integer matrix.
pub fn integer_rank(rows: &[Vec<BigInt>], ncols: usize) -> usize {
    let small: Option<Vec<Vec<i128>>> = rows.iter().map(|r| r.iter().map(ToPrimitive::to_i128).collect()).collect();
    if let Some(small) = small {
        if let Some(rank) = rank_i128(small, ncols) {
            return rank;
        }
    }
    rank_bigint(rows.to_vec(), ncols)
}

/// The linear system whose null space is the degree-`d` part.
fn constraint_rows(g: &GkmGraph, d: usize, basis: KernelBasis) -> Result<(Vec<Vec<BigInt>>, usize)> {
    let r = g.rank;
    let width = sym_dim(d, r);
    let ncols = width * g.vertices.len();
    let mut cache: HashMap<&Covector, Vec<Vec<BigInt>>> = HashMap::new();
    let mut rows = Vec::new();
    for e in &g.edges {
        if !cache.contains_key(&e.label) {
            cache.insert(&e.label, restriction(&e.label, d, basis)?);
        }
        for rrow in &cache[&e.label] {
            if rrow.iter().all(Zero::is_zero) {
                continue;
            }
            let mut row = vec![BigInt::zero(); ncols];
            for (c, x) in rrow.iter().enumerate() {
                row[e.u * width + c] += x;
                row[e.v * width + c] -= x;
            }
            rows.push(row);
        }
    }
    Ok((rows, ncols))
}

/// Dimension of the degree-`d` part of the equivariant cohomology.
pub fn ht_dimension(g: &GkmGraph, d: usize) -> Result<usize> {
    ht_dimension_with(g, d, KernelBasis::Canonical)
}

pub fn ht_dimension_with(g: &GkmGraph, d: usize, basis: KernelBasis) -> Result<usize> {
    let (rows, ncols) = constraint_rows(g, d, basis)?;
    Ok(ncols - integer_rank(&rows, ncols))
}

/// Betti numbers from freeness: `h_d = Σ_{i≤d} b_2i · dim Sym^{d-i}`.
/// Computes through degree `n + 2` and rejects anything inconsistent with
/// an equivariantly formal space of dimension `2n`.
pub fn betti_numbers(g: &GkmGraph, n: usize) -> Result<BettiResult> {
    let r = g.rank;
    let top = n + 2;
    let ht_dims: Vec<usize> = (0..=top).map(|d| ht_dimension(g, d)).collect::<Result<_>>()?;
    let mut all: Vec<i64> = Vec::with_capacity(top + 1);
    for (d, &h) in ht_dims.iter().enumerate() {
        let mut b = h as i64;
        for (i, bi) in all.iter().enumerate() {
            b -= bi * sym_dim(d - i, r) as i64;
        }
        all.push(b);
    }
    let res = BettiResult { betti: all[..=n].to_vec(), ht_dims, r, over_degree: all[n + 1..].to_vec() };
    if let Some(d) = all.iter().position(|&b| b < 0) {
        return Err(Error::FormalityViolation(format!("b_{} = {} is negative", 2 * d, all[d])));
    }
    let rep = poincare_check(&res, n, g.vertices.len());
    let mut fails: Vec<String> = rep.failures().map(|c| format!("{}: {}", c.name, c.message)).collect();
    if g.is_connected() && res.betti.first() != Some(&1) {
        fails.push(format!("b_0 = {:?}", res.betti.first()));
    }
    if !fails.is_empty() {
        return Err(Error::FormalityViolation(fails.join("; ")));
    }
    Ok(res)
}

/// Duality, Euler characteristic, `b_0 = 1` and vanishing above the top degree.
pub fn poincare_check(b: &BettiResult, n: usize, chi: usize) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let len_ok = b.betti.len() == n + 1;
    let dual = len_ok && (0..=n).all(|d| b.betti[d] == b.betti[n - d]);
    rep.push("Poincaré duality", dual, format!("{:?}", b.betti));
    let sum: i64 = b.betti.iter().sum();
    rep.push("sum = χ", sum == chi as i64, format!("sum {sum}, χ {chi}"));
    rep.push("b_0 = 1", b.betti.first() == Some(&1), "");
    rep.push("zero above top degree", b.over_degree.iter().all(|&x| x == 0), format!("{:?}", b.over_degree));
    rep
}
