#![allow(dead_code)]

use gkm_core::diagram::{validate, GroupDatum, GroupDiagram};
use gkm_core::ratlin::{kernel_basis, rank, rat, Covector, RatMatrix, Subspace};
use gkm_core::weyl::{standard_roots, Family, GramForm, RootSet, WeylGroup, DEFAULT_GEN_CAP};
use rand::seq::SliceRandom;
use rand::Rng;

fn pm(vs: &[Vec<i64>]) -> Vec<Vec<i64>> {
    vs.iter().cloned().chain(vs.iter().map(|v| v.iter().map(|x| -x).collect())).collect()
}

fn unit2(r: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = scale;
    v
}

/// Root systems on `r` coordinates with a list of closed subsystems usable as
/// singular isotropy groups.
fn ambient<R: Rng>(rng: &mut R, r: usize) -> (RootSet, GramForm, Vec<RootSet>) {
    let choice = rng.gen_range(0..3);
    if choice == 1 && r >= 2 {
        let c2 = standard_roots(Family::C, 2).unwrap();
        let lift = |v: &Covector| {
            let mut c = v.to_ints().unwrap();
            c.resize(r, 0);
            c
        };
        let g: Vec<Vec<i64>> = c2.roots.roots().iter().map(lift).collect();
        let subs = [
            vec![],
            pm(&[unit2(r, 0, 2), unit2(r, 1, 2)]),
            pm(&[unit2(r, 0, 2)]),
            pm(&[{
                let mut v = vec![0; r];
                v[0] = 1;
                v[1] = -1;
                v
            }]),
            g.clone(),
        ];
        let subs = subs.iter().map(|s| RootSet::from_ints(s).unwrap()).collect();
        return (RootSet::from_ints(&g).unwrap(), GramForm::identity(r), subs);
    }
    if choice == 2 && r == 3 {
        let u3 = standard_roots(Family::U, 3).unwrap();
        let subs = vec![RootSet::empty(), RootSet::from_ints(&pm(&[vec![1, -1, 0]])).unwrap(), u3.roots.clone()];
        return (u3.roots, u3.gram, subs);
    }
    let s3: Vec<usize> = (0..r).filter(|_| rng.gen_bool(0.6)).collect();
    let g = pm(&s3.iter().map(|&i| unit2(r, i, 2)).collect::<Vec<_>>());
    let mut subs = vec![RootSet::empty()];
    for &i in &s3 {
        subs.push(RootSet::from_ints(&pm(&[unit2(r, i, 2)])).unwrap());
    }
    subs.push(RootSet::from_ints(&g).unwrap());
    (RootSet::from_ints(&g).unwrap(), GramForm::identity(r), subs)
}

fn full(roots: &RootSet, r: usize) -> GroupDatum {
    GroupDatum::full(roots.clone()).with_dim(r + roots.len())
}

fn preserves(w: &RatMatrix, span: &Subspace) -> bool {
    span.basis().iter().all(|v| span.contains(&w.apply(&Covector(v.clone())).0))
}

/// Involutions of W(G) that preserve `span` and act on it as a reflection:
/// Weyl groups of a rank-one group whose maximal torus spans `span`.
fn lower_rank_side(g_roots: &RootSet, gram: &GramForm, span: &Subspace) -> Option<Vec<RatMatrix>> {
    let w = WeylGroup::from_roots(g_roots, gram, DEFAULT_GEN_CAP).ok()?;
    let id = RatMatrix::identity(gram.rank());
    let out: Vec<RatMatrix> = w
        .elements()
        .iter()
        .filter(|m| !m.is_identity() && m.mul(m) == id && preserves(m, span))
        .filter(|m| {
            let moved: Vec<Vec<_>> = span
                .basis()
                .iter()
                .map(|v| {
                    let image = m.apply(&Covector(v.clone())).0;
                    image.iter().zip(v).map(|(a, b)| a - b).collect()
                })
                .collect();
            rank(&moved) == 1
        })
        .cloned()
        .collect();
    (!out.is_empty()).then_some(out)
}

/// A random diagram on a torus of rank `r`; not necessarily valid.
pub fn random_diagram<R: Rng>(rng: &mut R, r: usize) -> GroupDiagram {
    let (g_roots, gram, subs) = ambient(rng, r);
    let lambda: Vec<i64> = loop {
        let v: Vec<i64> = (0..r).map(|_| rng.gen_range(-2..=2)).collect();
        if v.iter().any(|&x| x != 0) {
            break v;
        }
    };
    let span = kernel_basis(&[Covector::from_ints(&lambda)], r).unwrap();
    let mut h = GroupDatum::partial(vec![], Some(span.clone()));
    h.dim = Some(span.dim());
    let pick = |rng: &mut R| subs.choose(rng).unwrap().clone();
    let kplus = full(&pick(rng), r);
    let lower = lower_rank_side(&g_roots, &gram, &span);
    let partial = |rng: &mut R, choices: &[RatMatrix]| {
        let mut k = GroupDatum::partial(vec![choices.choose(rng).unwrap().clone()], Some(span.clone()));
        k.dim = Some(span.dim() + 2);
        k
    };
    let (kplus, kminus) = match &lower {
        // Neither side of full rank.
        Some(choices) if rng.gen_bool(0.15) => (partial(rng, choices), partial(rng, choices)),
        Some(choices) if rng.gen_bool(0.5) => (kplus, partial(rng, choices)),
        _ => (kplus, full(&pick(rng), r)),
    };
    GroupDiagram {
        name: "random".into(),
        rank: r,
        gram,
        g: full(&g_roots, r),
        kplus,
        kminus,
        h,
        note: None,
    }
}

/// With H a torus of corank one, a full-rank K has `K/H` a sphere exactly
/// when K has at most one pair of roots and the coroot is not tangent to H.
pub fn spherical_quotients(d: &GroupDiagram) -> bool {
    if d.h.dim != Some(d.rank_h()) || d.rank_h() + 1 != d.rank {
        return true;
    }
    [&d.kplus, &d.kminus].iter().filter(|k| k.full_rank).all(|k| match k.roots.roots() {
        [] => true,
        [a, _] => {
            let coroot = d.gram.matrix().apply(a);
            !d.h_span().contains(&coroot.0)
        }
        _ => false,
    })
}

/// A random structurally valid diagram of rank at most `max_rank`.
pub fn random_valid_diagram<R: Rng>(rng: &mut R, max_rank: usize) -> GroupDiagram {
    loop {
        let r = rng.gen_range(1..=max_rank);
        let d = random_diagram(rng, r);
        if validate(&d).all_passed() && spherical_quotients(&d) {
            return d;
        }
    }
}

/// A random integer matrix of determinant ±1.
pub fn random_unimodular<R: Rng>(rng: &mut R, r: usize) -> RatMatrix {
    let mut rows: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..r * 2 {
        if r < 2 {
            break;
        }
        let i = rng.gen_range(0..r);
        let j = (i + rng.gen_range(1..r)) % r;
        let k = rng.gen_range(-1..=1);
        for c in 0..r {
            rows[i][c] += k * rows[j][c];
        }
    }
    rows.shuffle(rng);
    if rng.gen_bool(0.5) {
        rows[0].iter_mut().for_each(|x| *x = -*x);
    }
    RatMatrix::from_int_rows(&rows).unwrap()
}

fn map_roots(roots: &RootSet, m: &RatMatrix) -> RootSet {
    RootSet::new(roots.roots().iter().map(|c| m.apply(c)).collect()).unwrap()
}

fn map_span(s: &Subspace, a: &RatMatrix) -> Subspace {
    let vs = s.basis().iter().map(|v| a.apply(&Covector(v.clone())).0).collect();
    Subspace::from_vectors(vs, s.ambient()).unwrap()
}

/// The same diagram after the change of torus coordinates `v -> A v`.
/// Covectors move by the inverse transpose and the Weyl action is conjugated.
pub fn change_coordinates(d: &GroupDiagram, a: &RatMatrix) -> GroupDiagram {
    let cov = a.inverse().unwrap().transpose();
    let cov_inv = a.transpose();
    let gram = GramForm::new(a.mul(d.gram.matrix()).mul(&a.transpose())).unwrap();
    let datum = |k: &GroupDatum| GroupDatum {
        roots: map_roots(&k.roots, &cov),
        full_rank: k.full_rank,
        weyl_generators: k.weyl_generators.as_ref().map(|gs| gs.iter().map(|m| cov.mul(m).mul(&cov_inv)).collect()),
        torus_span: k.torus_span.as_ref().map(|s| map_span(s, a)),
        dim: k.dim,
        note: k.note.clone(),
    };
    GroupDiagram {
        name: d.name.clone(),
        rank: d.rank,
        gram,
        g: datum(&d.g),
        kplus: datum(&d.kplus),
        kminus: datum(&d.kminus),
        h: datum(&d.h),
        note: d.note.clone(),
    }
}

/// The diagram with an extra circle factor acting trivially, included in every group.
pub fn add_circle(d: &GroupDiagram) -> GroupDiagram {
    let r = d.rank + 1;
    let lift_c = |c: &Covector| {
        let mut v = c.0.clone();
        v.push(rat(0));
        Covector(v)
    };
    let lift_roots = |rs: &RootSet| RootSet::new(rs.roots().iter().map(lift_c).collect()).unwrap();
    let mut rows = d.gram.matrix().rows();
    rows.iter_mut().for_each(|row| row.push(rat(0)));
    rows.push(Covector::unit(r, r - 1).0);
    let gram = GramForm::new(RatMatrix::from_rows(rows).unwrap()).unwrap();
    let datum = |k: &GroupDatum, in_h: bool| GroupDatum {
        roots: lift_roots(&k.roots),
        full_rank: k.full_rank,
        weyl_generators: k.weyl_generators.as_ref().map(|gs| gs.iter().map(|m| m.embed(r, 0)).collect()),
        torus_span: k.torus_span.as_ref().map(|s| {
            let mut vs: Vec<_> = s.basis().iter().map(|v| lift_c(&Covector(v.clone())).0).collect();
            if in_h {
                vs.push(Covector::unit(r, r - 1).0);
            }
            Subspace::from_vectors(vs, r).unwrap()
        }),
        dim: k.dim.map(|x| x + 1),
        note: k.note.clone(),
    };
    GroupDiagram {
        name: d.name.clone(),
        rank: r,
        gram,
        g: datum(&d.g, true),
        kplus: datum(&d.kplus, true),
        kminus: datum(&d.kminus, true),
        h: datum(&d.h, true),
        note: d.note.clone(),
    }
}

/// Exchanges the two singular isotropy groups.
pub fn swap_sides(d: &GroupDiagram) -> GroupDiagram {
    d.swapped()
}
