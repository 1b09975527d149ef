//! Acceptance suite: one pass/fail line per criterion, exact comparisons only.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use gkm_core::catalog::{catalog_entries, diagram_source, find_entry, CatalogInput};
use gkm_core::cohomology::{betti_numbers, poincare_check};
use gkm_core::diagram::{parse_diagram_with, validate, GroupDiagram, Params};
use gkm_core::graph::{case2_choice, emit_dot, emit_json, normal_edges_case2, normal_edges_case2_with, EdgeKind, GkmGraph, Orbit};
use gkm_core::ratlin::{proportional, rat, Covector};
use gkm_core::verdict::{condition_rank, direct_weight_check, gkm_verdict, normalize, CaseTag};
use gkm_core::weyl::{coset_space, gen_cap, standard_roots, Family, RootSet, WeylGroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c(v: &[i64]) -> Covector {
    Covector::from_ints(v)
}

fn sorted(mut v: Vec<Covector>) -> Vec<Covector> {
    v.sort();
    v
}

fn diagram(name: &str, params: &[(&str, i64)]) -> GroupDiagram {
    let params: Params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    parse_diagram_with(diagram_source(name).unwrap(), &params).unwrap()
}

fn graph_of(d: &GroupDiagram) -> Result<GkmGraph, String> {
    gkm_core::graph::build_graph(d).map_err(|e| format!("{}: {e}", d.name))
}

fn entry_graph(id: &str) -> Result<GkmGraph, String> {
    find_entry(id).ok_or(format!("no entry {id}"))?.graph().map_err(|e| format!("{id}: {e}"))
}

fn labels(g: &GkmGraph, kind: EdgeKind) -> Vec<Covector> {
    sorted(g.edges.iter().filter(|e| e.kind == kind).map(|e| e.label.clone()).collect())
}

fn tangential(g: &GkmGraph) -> Vec<Covector> {
    sorted(g.edges.iter().filter(|e| e.kind.is_tangential()).map(|e| e.label.clone()).collect())
}

fn vertex(g: &GkmGraph, word: &str) -> Result<usize, String> {
    g.vertex_by_word(Orbit::Plus, word).map(|v| v.id).ok_or(format!("{}: no vertex [{word}]", g.name))
}

fn has_edge(g: &GkmGraph, a: usize, b: usize, label: &Covector, kind: EdgeKind) -> bool {
    let (u, v) = (a.min(b), a.max(b));
    g.edges.iter().any(|e| e.u == u && e.v == v && &e.label == label && e.kind == kind)
}

fn criterion_1() -> Outcome {
    let g = graph_of(&diagram("s6_su3", &[]))?;
    ensure(g.vertices.len() == 2 && g.edges.len() == 3, || format!("s6_su3: {} vertices, {} edges", g.vertices.len(), g.edges.len()))?;
    ensure(labels(&g, EdgeKind::Normal) == sorted(vec![c(&[1, 0]), c(&[0, 1]), c(&[1, 1])]), || "s6_su3 labels".into())?;

    let g = graph_of(&diagram("2_6H", &[]))?;
    ensure(g.vertices.len() == 2, || "2_6H vertex count".into())?;
    ensure(tangential(&g) == vec![c(&[0, 2])], || "2_6H tangential labels".into())?;
    ensure(labels(&g, EdgeKind::Normal) == sorted(vec![c(&[1, -1]), c(&[1, 1])]), || "2_6H normal labels".into())?;
    let e = vertex(&g, "e")?;
    let sigma = g.vertices.iter().find(|v| v.id != e).unwrap().id;
    ensure(g.edges.iter().filter(|x| x.kind == EdgeKind::Normal).all(|x| x.other(e) == sigma), || "2_6H normal edges from [e]".into())?;

    let g = graph_of(&diagram("cp3_u3", &[]))?;
    ensure(g.vertices.len() == 4, || "cp3_u3 vertex count".into())?;
    ensure(tangential(&g) == sorted(vec![c(&[1, -1, 0]), c(&[0, 1, -1]), c(&[1, 0, -1])]), || "cp3_u3 triangle".into())?;
    ensure(labels(&g, EdgeKind::Normal) == sorted(vec![c(&[1, 0, 0]), c(&[0, 1, 0]), c(&[0, 0, 1])]), || "cp3_u3 normal".into())?;

    for p in [1, 2] {
        let g = graph_of(&diagram("2_6D", &[("p", p)]))?;
        ensure(g.vertices.len() == 6, || format!("2_6D p={p} vertex count"))?;
        ensure(labels(&g, EdgeKind::TangentialPlus) == sorted(vec![c(&[2, 0]), c(&[2, 0]), c(&[0, 2]), c(&[0, 2])]), || format!("2_6D p={p} square"))?;
        ensure(labels(&g, EdgeKind::TangentialMinus) == vec![c(&[0, 2])], || format!("2_6D p={p} K- edge"))?;
        let normal = sorted(vec![c(&[1, -p]), c(&[1, -p]), c(&[1, p]), c(&[1, p])]);
        ensure(labels(&g, EdgeKind::Normal) == normal, || format!("2_6D p={p} normal labels"))?;
    }

    let g = graph_of(&diagram("2_6C", &[]))?;
    ensure(g.vertices.len() == 4, || "2_6C vertex count".into())?;
    for v in &g.vertices {
        let mut square: Vec<Covector> = g.incident(v.id).filter(|e| e.kind.is_tangential()).map(|e| e.label.clone()).collect();
        square.sort();
        ensure(square == sorted(vec![c(&[2, 0]), c(&[0, 2])]), || format!("2_6C square at [{}]", v.word))?;
    }
    let (e, s1, s2, s12) = (vertex(&g, "e")?, vertex(&g, "s1")?, vertex(&g, "s2")?, vertex(&g, "s1s2")?);
    ensure(g.count(EdgeKind::Normal) == 2, || "2_6C normal count".into())?;
    ensure(has_edge(&g, e, s12, &c(&[1, -1]), EdgeKind::Normal), || "2_6C [e]-[s1s2]".into())?;
    ensure(has_edge(&g, s2, s1, &c(&[1, 1]), EdgeKind::Normal), || "2_6C [s2]-[s1]".into())?;

    let g = entry_graph("op2_hom")?;
    ensure(g.vertices.len() == 3 && g.edges.len() == 12, || "op2 counts".into())?;
    for u in 0..3 {
        for v in u + 1..3 {
            ensure(g.edges.iter().filter(|e| e.u == u && e.v == v).count() == 4, || format!("op2 pair {u}{v}"))?;
        }
    }

    let g = graph_of(&diagram("hp3_sp3sp1", &[]))?;
    ensure(g.vertices.len() == 4, || "hp3 vertex count".into())?;
    ensure(g.count(EdgeKind::TangentialMinus) == 6 && g.count(EdgeKind::Normal) == 6 && g.edges.len() == 12, || "hp3 edge kinds".into())?;
    let h = entry_graph("hp3_hom")?;
    ensure(h.vertices.len() == 4 && h.edges.len() == 12, || "hp3 homogeneous counts".into())
}

fn criterion_2() -> Outcome {
    let rows = ["2_6A1", "2_6C", "2_6D", "2_6H", "2_6I", "2_6J", "3_6a", "3_6_case2", "4_6", "5_6", "6_6a", "6_6b"];
    for row in rows {
        let v = gkm_verdict(&diagram(row, &[]));
        ensure(v.is_gkm, || format!("{row} should be GKM"))?;
    }
    let excluded: [(&str, &[(&str, i64)]); 4] =
        [("2_6A1", &[("p", 0)]), ("2_6A1", &[("q", 0)]), ("2_6D", &[("p", 0)]), ("2_6I", &[("p", 0)])];
    for (row, params) in excluded {
        let v = gkm_verdict(&diagram(row, params));
        ensure(!v.is_gkm && v.rank.holds && !v.roots.holds, || format!("{row} {params:?} should fail the root condition only"))?;
    }
    let v = gkm_verdict(&diagram("s4_s3", &[]));
    ensure(v.rank.holds && !v.roots.holds, || "s4_s3".into())?;
    let v = gkm_verdict(&diagram("1_6_reject", &[]));
    ensure(!v.rank.holds && !v.is_gkm, || "1_6_reject".into())?;
    for name in ["dim4_t2", "dim4_cp2"] {
        ensure(gkm_verdict(&diagram(name, &[])).is_gkm, || format!("{name} should be GKM"))?;
    }
    Ok(())
}

fn direct(d: &GroupDiagram) -> bool {
    let (nd, _) = normalize(d);
    condition_rank(&nd).holds && direct_weight_check(&nd).unwrap_or(false)
}

fn criterion_3() -> Outcome {
    for e in catalog_entries() {
        if let Ok(CatalogInput::Diagram(d)) = e.load() {
            ensure(gkm_verdict(&d).is_gkm == direct(&d), || format!("catalog {}", e.id))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let d = common::random_valid_diagram(&mut rng, 3);
        ensure(validate(&d).all_passed() && d.rank <= 3, || format!("random case {i} invalid"))?;
        ensure(gkm_verdict(&d).is_gkm == direct(&d), || format!("random case {i}: {}", d.to_json_string()))?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let expected = [("s6_su3", 2), ("2_6H", 2), ("cp3_u3", 4), ("2_6D", 6), ("2_6C", 4), ("op2_hom", 3), ("hp3_sp3sp1", 4)];
    for (id, chi) in expected {
        let e = find_entry(id).ok_or(format!("no entry {id}"))?;
        let got = match e.load().map_err(|err| err.to_string())? {
            CatalogInput::Diagram(d) => gkm_verdict(&d).euler,
            CatalogInput::Homogeneous(s) => gkm_core::verdict::homogeneous_euler(&s.g.roots, &s.k.roots, &s.gram).ok(),
        };
        ensure(got == Some(chi), || format!("{id}: χ {got:?}, expected {chi}"))?;
    }
    for e in catalog_entries() {
        let CatalogInput::Diagram(d) = e.load().map_err(|err| err.to_string())? else { continue };
        let v = gkm_verdict(&d);
        if v.is_gkm {
            let g = graph_of(&d)?;
            ensure(v.euler == Some(g.vertices.len()), || format!("{}: χ {:?}, {} vertices", e.id, v.euler, g.vertices.len()))?;
        }
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let cases: [(&str, &[i64]); 5] = [
        ("s6_su3", &[1, 0, 0, 1]),
        ("s6_su2sq", &[1, 0, 0, 1]),
        ("cp3_u3", &[1, 1, 1, 1]),
        ("hp3_sp3sp1", &[1, 0, 1, 0, 1, 0, 1]),
        ("hp3_hom", &[1, 0, 1, 0, 1, 0, 1]),
    ];
    let mut hp3 = Vec::new();
    for (id, want) in cases {
        let g = entry_graph(id)?;
        let n = g.n.ok_or(format!("{id}: no dimension"))?;
        let b = betti_numbers(&g, n).map_err(|e| format!("{id}: {e}"))?;
        ensure(b.betti == want, || format!("{id}: {:?}", b.betti))?;
        let rep = poincare_check(&b, n, g.vertices.len());
        ensure(rep.all_passed(), || format!("{id}: {rep}"))?;
        ensure(b.over_degree.len() == 2 && b.over_degree.iter().all(|&x| x == 0), || format!("{id}: over degree {:?}", b.over_degree))?;
        if id.starts_with("hp3") {
            hp3.push(b.betti);
        }
    }
    ensure(hp3[0] == hp3[1], || "hp3 encodings differ".into())
}

fn structural(id: &str, g: &GkmGraph, d: Option<&GroupDiagram>) -> Outcome {
    let n = g.n.ok_or(format!("{id}: no dimension"))?;
    for v in &g.vertices {
        let ls: Vec<&Covector> = g.incident(v.id).map(|e| &e.label).collect();
        ensure(ls.len() == n, || format!("{id}: degree {} at {}", ls.len(), v.node_name()))?;
        for (i, a) in ls.iter().enumerate() {
            for b in &ls[i + 1..] {
                ensure(!proportional(a, b).unwrap(), || format!("{id}: proportional labels {a}, {b} at {}", v.node_name()))?;
            }
        }
    }
    let Some(d) = d else { return Ok(()) };
    let (nd, _) = normalize(d);
    match gkm_verdict(&nd).case_tag {
        CaseTag::Case1 => {
            let mut side: BTreeMap<Orbit, (usize, Option<usize>)> = BTreeMap::new();
            for v in &g.vertices {
                let k = g.incident(v.id).filter(|e| e.kind.is_tangential()).count();
                let entry = side.entry(v.orbit).or_insert((0, Some(k)));
                entry.0 += 1;
                if entry.1 != Some(k) {
                    entry.1 = None;
                }
            }
            let (s, k) = side[&Orbit::Plus];
            let (s2, k2) = side[&Orbit::Minus];
            let (k, k2) = (k.ok_or(format!("{id}: uneven K+ degrees"))?, k2.ok_or(format!("{id}: uneven K- degrees"))?);
            ensure(s * (n - k) == s2 * (n - k2), || format!("{id}: {s}({n}-{k}) != {s2}({n}-{k2})"))?;
            ensure(s * (n - k) == g.count(EdgeKind::Normal), || format!("{id}: normal edge count"))
        }
        CaseTag::Case2 => {
            let choice = case2_choice(&nd).map_err(|e| format!("{id}: {e}"))?;
            ensure(choice.index() == 2, || format!("{id}: index {}", choice.index()))?;
            let base = sorted_edges(normal_edges_case2(&nd).map_err(|e| format!("{id}: {e}"))?);
            for alt in &choice.coset {
                let other = sorted_edges(normal_edges_case2_with(&nd, alt).map_err(|e| format!("{id}: {e}"))?);
                ensure(base == other, || format!("{id}: alternate representative changes the edges"))?;
            }
            Ok(())
        }
        _ => Err(format!("{id}: unexpected case")),
    }
}

fn sorted_edges(mut v: Vec<gkm_core::Edge>) -> Vec<gkm_core::Edge> {
    v.sort();
    v
}

fn criterion_6() -> Outcome {
    let mut case2 = 0;
    for e in catalog_entries() {
        match e.load().map_err(|err| err.to_string())? {
            CatalogInput::Diagram(d) => {
                if !gkm_verdict(&d).is_gkm {
                    continue;
                }
                if gkm_verdict(&d).case_tag == CaseTag::Case2 {
                    case2 += 1;
                }
                structural(&e.id, &graph_of(&d)?, Some(&d))?;
            }
            CatalogInput::Homogeneous(_) => structural(&e.id, &e.graph().map_err(|err| err.to_string())?, None)?,
        }
    }
    ensure(case2 >= 4, || format!("only {case2} case-2 entries"))
}

fn weyl_order(family: Family, n: usize) -> Result<usize, String> {
    let s = standard_roots(family, n).map_err(|e| e.to_string())?;
    Ok(WeylGroup::from_roots(&s.roots, &s.gram, gen_cap()).map_err(|e| e.to_string())?.order())
}

fn criterion_7() -> Outcome {
    let fact = |n: usize| (1..=n).product::<usize>();
    for n in 1..=4 {
        ensure(weyl_order(Family::A, n)? == fact(n + 1), || format!("A{n}"))?;
        ensure(weyl_order(Family::U, n)? == fact(n), || format!("U({n})"))?;
        ensure(weyl_order(Family::B, n)? == (1 << n) * fact(n), || format!("B{n}"))?;
        ensure(weyl_order(Family::C, n)? == (1 << n) * fact(n), || format!("C{n}"))?;
        if n >= 2 {
            ensure(weyl_order(Family::D, n)? == (1 << (n - 1)) * fact(n), || format!("D{n}"))?;
        }
    }
    ensure(weyl_order(Family::G2, 2)? == 12, || "G2".into())?;
    ensure(weyl_order(Family::F4, 4)? == 1152, || "F4".into())?;

    let f4 = standard_roots(Family::F4, 4).map_err(|e| e.to_string())?;
    let wf4 = WeylGroup::from_roots(&f4.roots, &f4.gram, gen_cap()).map_err(|e| e.to_string())?;
    let b4: Vec<Covector> = f4.roots.roots().iter().filter(|a| a.coords().iter().all(|x| (x / rat(2)).is_integer())).cloned().collect();
    let b4 = RootSet::new(b4).map_err(|e| e.to_string())?;
    let wb4 = WeylGroup::from_roots(&b4, &f4.gram, gen_cap()).map_err(|e| e.to_string())?;
    ensure(wb4.order() == 384, || format!("B4 inside F4 has order {}", wb4.order()))?;
    ensure(coset_space(&wf4, &wb4).map_err(|e| e.to_string())?.len() == 3, || "F4/B4".into())?;

    let s = find_entry("hp3_hom").ok_or("no hp3_hom")?;
    let CatalogInput::Homogeneous(s) = s.load().map_err(|e| e.to_string())? else { return Err("hp3_hom kind".into()) };
    let wg = WeylGroup::from_roots(&s.g.roots, &s.gram, gen_cap()).map_err(|e| e.to_string())?;
    let wk = WeylGroup::from_roots(&s.k.roots, &s.gram, gen_cap()).map_err(|e| e.to_string())?;
    ensure(wk.order() == 48 * 2, || "C3 x C1".into())?;
    ensure(coset_space(&wg, &wk).map_err(|e| e.to_string())?.len() == 4, || "C4/(C3 x C1)".into())
}

fn criterion_8() -> Outcome {
    let run = || -> Result<Vec<(String, String, String)>, String> {
        catalog_entries()
            .iter()
            .filter(|e| e.expected.snapshot)
            .map(|e| {
                let g = e.graph().map_err(|err| format!("{}: {err}", e.id))?;
                Ok((e.id.clone(), emit_dot(&g), emit_json(&g)))
            })
            .collect()
    };
    let (a, b) = (run()?, run()?);
    ensure(a == b, || "outputs differ between runs".into())?;
    for ((id, _, json), e) in a.iter().zip(catalog_entries().iter().filter(|e| e.expected.snapshot)) {
        ensure(Some(json.as_str()) == e.golden, || format!("{id}: differs from golden snapshot"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("graph reproduction", criterion_1),
        ("verdict table", criterion_2),
        ("oracle equivalence", criterion_3),
        ("Euler characteristic = vertex count", criterion_4),
        ("Betti numbers", criterion_5),
        ("structural invariants", criterion_6),
        ("Weyl infrastructure", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(()) => println!("criterion {}: PASS  {name}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
