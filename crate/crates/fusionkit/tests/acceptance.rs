//! Acceptance criteria 1–9. Prints one line per criterion and exits nonzero
//! unless every failure is one of the known reference conflicts below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use fusionkit::checks::{run_suite, CheckItem, CheckOptions, Suite};
use fusionkit::dims::{closed_formula_oracle, dim_report, load_fixtures, sl3_block_identities, weyl_relation_check};
use fusionkit::exactnum::{parse_expr, CycReal};
use fusionkit::fusion::{build_fusion, Irrep, Kind};
use fusionkit::graphs::{catalog, graph_by_name, Series};
use fusionkit::linalg::from_rows;
use fusionkit::modact::annular;
use fusionkit::modular::{invariant_catalog, invariant_for};
use fusionkit::qdims::{charpoly, j_sum_identity, poly_discriminant};
use fusionkit::tables::{build_table, graph_data, load_reference, Table, TableId};

/// Failures that reproduce a disagreement inside the reference data itself.
/// Each entry is (criterion, substring of the failure message).
const KNOWN_CONFLICTS: &[(u32, &str)] = &[
    (7, "D_9^t r_O: computed 55, reference 63"),
    (7, "D_9^tc r_O: computed 55, reference 63"),
];

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failures: vec![], notes: vec![] }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn items(&mut self, items: &[CheckItem]) {
        for i in items.iter().filter(|i| !i.passed) {
            self.failures.push(i.to_string());
        }
    }

    fn table(&mut self, t: &Table, columns: &[&str]) {
        for r in &t.rows {
            self.check(!r.unavailable, || format!("{} unavailable", r.graph));
            for m in &r.mismatches {
                if columns.is_empty() || columns.iter().any(|c| m.starts_with(&format!("{c}:"))) {
                    self.failures.push(format!("{} {m}", r.graph));
                }
            }
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn opts(kind: Option<Kind>, level: Option<u32>, graph: Option<&str>) -> CheckOptions {
    CheckOptions { kind, level, graph: graph.map(String::from), ..Default::default() }
}

fn exact(kappa: u32, expr: &str) -> CycReal {
    parse_expr(expr, kappa).expect("expression parses")
}

fn criterion1(o: &mut Outcome) {
    let (table, t) = timed(|| build_table(TableId::T1, None).expect("reference data"));
    o.table(&table, &[]);
    o.check(t < Duration::from_secs(5), || format!("table1 took {t:?}"));
    o.note(format!("{} rows in {:.2}s", table.rows.len(), t.as_secs_f64()));
    let fixtures = load_fixtures().expect("fixtures");
    for (name, d_h, d_b) in [("A_11", Some(286), 8294), ("E_7", Some(399), 10905), ("E_8", None, 63136)] {
        let gd = graph_data(graph_by_name(Kind::Sl2, name).unwrap(), &fixtures).unwrap();
        if let Some(h) = d_h {
            o.check(gd.dims.d_h == BigInt::from(h), || format!("{name} d_H = {}", gd.dims.d_h));
        }
        o.check(gd.dims.d_b == BigInt::from(d_b), || format!("{name} d_B = {}", gd.dims.d_b));
    }
    let d4 = graph_data(graph_by_name(Kind::Sl2, "D_4").unwrap(), &fixtures).unwrap();
    let gap = d4.dims.d_v.as_ref().map(|v| v - &d4.dims.d_h);
    o.check(d4.dims.gap_fixture == Some(8) && gap == Some(BigInt::from(8)), || format!("D_4 d_V − d_H = {gap:?}"));
}

fn criterion2(o: &mut Outcome) {
    let cat = catalog(Kind::Sl2, 28).unwrap();
    for g in &cat {
        let sys = build_fusion(Kind::Sl2, g.level).unwrap();
        let d = dim_report(&annular(&sys, g).unwrap());
        let kap = i64::from(g.kappa());
        let r = g.rank() as i64;
        o.check(d.d_h == BigInt::from(kap * (kap + 1) * r / 6), || format!("{} d_H = {}", g.name, d.d_h));
        // Formulas written out independently of the library oracle.
        let d_b = match g.series {
            Series::A => Some(kap * (kap.pow(4) - 1) / 30),
            Series::DEven => Some((2 + kap) * (120 + kap * (28 + kap * (26 + kap * (17 + 4 * kap)))) / 480),
            Series::DOdd => Some(kap * (176 + kap * (80 + kap * (60 + kap * (25 + 4 * kap)))) / 480),
            _ => None,
        };
        if let Some(b) = d_b {
            o.check(d.d_b == BigInt::from(b), || format!("{} d_B = {}, formula {b}", g.name, d.d_b));
        }
        if let Some(p) = closed_formula_oracle(Kind::Sl2, g.series, g.level) {
            o.check(p.d_b.map_or(true, |b| b == d.d_b), || format!("{} library oracle d_B", g.name));
        }
    }
    o.note(format!("{} sl2 graphs, k ≤ 28", cat.len()));
}

fn criterion3(o: &mut Outcome) {
    let reference = load_reference().unwrap();
    let fixtures = load_fixtures().unwrap();
    let rows = ["A_1", "A_2", "A_3", "A_4", "A_5", "A_6", "A_9", "D_3", "D_6", "D_9", "E_5", "E_9", "E_21"];
    for name in rows {
        let r = reference.iter().find(|r| r.kind == Kind::Sl3 && r.graph == name).expect("reference row");
        let gd = graph_data(graph_by_name(Kind::Sl3, name).unwrap(), &fixtures).unwrap();
        let want_h = r.d_h.as_ref().and_then(|x| x.known()).expect("tabulated d_H");
        let want_b = r.d_b.as_ref().and_then(|x| x.known()).expect("tabulated d_B");
        o.check(gd.dims.d_h == BigInt::from(want_h), || format!("{name} d_H = {}, reference {want_h}", gd.dims.d_h));
        o.check(gd.dims.d_b == BigInt::from(want_b), || format!("{name} d_B = {}, reference {want_b}", gd.dims.d_b));
    }
    for (name, h, b) in [("A_9", 21307, 10517299), ("E_5", 720, 29376), ("E_21", 288576, 480701952)] {
        let gd = graph_data(graph_by_name(Kind::Sl3, name).unwrap(), &fixtures).unwrap();
        o.check(gd.dims.d_h == BigInt::from(h) && gd.dims.d_b == BigInt::from(b), || format!("{name} spot values"));
    }
    let (a21, t) = timed(|| build_table(TableId::T4, Some("A_21")).unwrap());
    o.table(&a21, &[]);
    o.check(t < Duration::from_secs(60), || format!("A_21 row took {t:?}"));
    o.note(format!("{} rows; A_21 row in {:.2}s", rows.len(), t.as_secs_f64()));
}

fn criterion4(o: &mut Outcome) {
    let reference = load_reference().unwrap();
    let fixtures = load_fixtures().unwrap();
    let mut self_fusion = 0;
    for r in &reference {
        let Ok(g) = graph_by_name(r.kind, &r.graph) else {
            o.failures.push(format!("{} {} missing", r.kind, r.graph));
            continue;
        };
        let gd = graph_data(g, &fixtures).unwrap();
        let rep = &gd.orders;
        o.check(rep.quotient_identity(), || format!("{}: |A/E|·|E| ≠ |A|", r.graph));
        if gd.graph.self_fusion {
            self_fusion += 1;
            o.check(rep.self_fusion_identity() == Some(true), || format!("{}: |A|/|E| ≠ |E|/|J|", r.graph));
            o.check(j_sum_identity(&gd.fam, &gd.sys, rep) == Some(true), || format!("{}: |A| ≠ Σ_J |Γ_c|²", r.graph));
        }
    }
    let order = |kind, name: &str| graph_data(graph_by_name(kind, name).unwrap(), &fixtures).unwrap().orders;
    let e6 = order(Kind::Sl2, "E_6");
    o.check(e6.order_e == exact(12, "4(3+sqrt3)"), || format!("|E_6| = {}", e6.order_e.to_exact_string()));
    o.check(e6.order_quotient == exact(12, "3+sqrt3"), || "|A_11/E_6|".into());
    let e5 = order(Kind::Sl3, "E_5");
    o.check(e5.order_e == exact(8, "12(2+sqrt2)"), || format!("|E_5| = {}", e5.order_e.to_exact_string()));
    let d3 = order(Kind::Sl3, "D_3");
    o.check(d3.order_e == exact(6, "12"), || format!("|D_3| = {}", d3.order_e.to_exact_string()));
    let e21 = order(Kind::Sl3, "E_21");
    o.check(e21.order_j == Some(exact(24, "2")), || format!("|J(E_21)| = {:?}", e21.order_j.map(|j| j.to_exact_string())));
    o.note(format!("{} graphs, {self_fusion} with self-fusion", reference.len()));
}

fn criterion5(o: &mut Outcome) {
    let items = run_suite(Suite::Trig, &opts(None, None, None));
    o.items(&items);
    o.note(format!("{} checks at tolerance 1e-9", items.len()));
}

/// Adjacency matrix of the path A_r.
fn path(r: usize) -> Vec<Vec<i64>> {
    (0..r).map(|i| (0..r).map(|j| i64::from(i.abs_diff(j) == 1)).collect()).collect()
}

fn criterion6(o: &mut Outcome) {
    let a11 = from_rows(&path(11)).unwrap();
    let disc = poly_discriminant(&charpoly(&a11));
    let want = BigInt::from(10_567_230_160_896_i64);
    o.check(disc == want, || format!("disc(charpoly A_11) = {disc}"));
    o.check(want == BigInt::from(2).pow(11) * BigInt::from(12).pow(9), || "2¹¹·12⁹".into());
    let items = run_suite(Suite::Discriminant, &opts(None, None, None));
    o.items(&items);
    o.note(format!("{} checks, sl2 k ≤ 12, sl3 k ≤ 8", items.len()));
}

fn criterion7(o: &mut Outcome) {
    for id in [TableId::T3, TableId::T4, TableId::T5] {
        o.table(&build_table(id, None).unwrap(), &["r_E", "r_O"]);
    }
    let blocks = |name: &str| invariant_for(&graph_by_name(Kind::Sl2, name).unwrap()).unwrap();
    let e6: Vec<Vec<Irrep>> = blocks("E_6").modular_blocks().blocks;
    let want: Vec<Vec<Irrep>> = [[0, 6], [3, 7], [4, 10]].iter().map(|b| b.iter().map(|&n| Irrep::Sl2(n)).collect()).collect();
    o.check(e6 == want, || format!("E_6 blocks {e6:?}"));
    let e7 = blocks("E_7").modular_blocks().blocks;
    o.check(e7.contains(&vec![Irrep::Sl2(8)]), || format!("E_7 blocks {e7:?}"));
    let d6 = blocks("D_6");
    o.check(d6.level == 8 && d6.ocneanu_block_structure() == [1, 1, 1, 1, 1, 1, 1, 1, 2], || {
        format!("D_6 blocks {:?}", d6.ocneanu_block_structure())
    });
    let invs = invariant_catalog(Kind::Sl2, 28).unwrap();
    let worst = invs.iter().map(|z| z.commutators()).fold(0.0_f64, |m, (s, t)| m.max(s).max(t));
    o.check(worst < 1e-8, || format!("max commutator norm {worst:e}"));
    o.note(format!("{} sl2 invariants, max ‖[Z,S]‖, ‖[Z,T]‖ = {worst:.1e}", invs.len()));
}

fn criterion8(o: &mut Outcome) {
    let cat = catalog(Kind::Sl2, 28).unwrap();
    let mut slowest = (String::new(), Duration::ZERO);
    for g in &cat {
        let (items, t) = timed(|| run_suite(Suite::Splitting, &opts(Some(Kind::Sl2), Some(28), Some(&g.name))));
        o.check(!items.is_empty(), || format!("{} not run", g.name));
        o.items(&items);
        if g.series == Series::A {
            o.check(items.iter().any(|i| i.claim == "toric matrices are the fusion matrices" && i.passed), || {
                format!("{} toric family", g.name)
            });
        }
        o.check(t < Duration::from_secs(120), || format!("{} took {t:?}", g.name));
        if t > slowest.1 {
            slowest = (g.name.clone(), t);
        }
    }
    o.note(format!("{} graphs; slowest {} in {:.2}s", cat.len(), slowest.0, slowest.1.as_secs_f64()));
}

fn criterion9(o: &mut Outcome) {
    let rig = run_suite(Suite::Rigidity, &opts(None, None, None));
    o.items(&rig);
    let mut graphs = catalog(Kind::Sl2, 28).unwrap();
    graphs.extend(catalog(Kind::Sl3, 21).unwrap());
    let weyl = fusionkit::par::map(&graphs, |g| {
        let sys = build_fusion(g.kind, g.level).unwrap();
        (g.name.clone(), g.kind, annular(&sys, g).map(|f| weyl_relation_check(&f)).unwrap_or(false))
    });
    for (name, kind, ok) in &weyl {
        o.check(*ok, || format!("{kind} {name}: A·X ≠ Λ"));
    }
    for k in 1..=12 {
        let sys = build_fusion(Kind::Sl3, k).unwrap();
        let r = sl3_block_identities(&sys);
        o.check(r.is_ok(), || format!("sl3 A_{k} d_(pq) identities fail at {:?}", r.err()));
    }
    let fixtures = load_fixtures().unwrap();
    let dx = fixtures.iter().find(|f| f.kind == Kind::Sl3 && f.graph == "E_21").and_then(|f| f.all_d_x());
    let sums = dx.map(|d| (d.iter().sum::<i64>(), d.iter().map(|x| x * x).sum::<i64>()));
    o.check(sums == Some((288_576, 480_701_952)), || format!("E_21 fixture sums {sums:?}"));
    o.note(format!("{} rigidity checks, {} Weyl relations", rig.len(), weyl.len()));
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn(&mut Outcome)); 9] = [
        (1, "sl2 dimension table", criterion1),
        (2, "sl2 closed formulas", criterion2),
        (3, "sl3 dimension tables", criterion3),
        (4, "orders", criterion4),
        (5, "trigonometric identities", criterion5),
        (6, "discriminants", criterion6),
        (7, "modular bookkeeping", criterion7),
        (8, "modular splitting", criterion8),
        (9, "property suites", criterion9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = 0;
    for (n, name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == n.to_string()) {
            continue;
        }
        let mut o = Outcome::new();
        let (_, t) = timed(|| run(&mut o));
        let summary = o.notes.join("; ");
        if o.failures.is_empty() {
            println!("criterion {n} ({name}): PASS in {:.2}s [{summary}]", t.as_secs_f64());
            continue;
        }
        let known = |f: &String| KNOWN_CONFLICTS.iter().any(|(c, s)| *c == n && f.contains(s));
        let surprises: Vec<&String> = o.failures.iter().filter(|f| !known(f)).collect();
        println!(
            "criterion {n} ({name}): FAIL in {:.2}s, {} failures, {} unexpected [{summary}]",
            t.as_secs_f64(),
            o.failures.len(),
            surprises.len()
        );
        for f in &o.failures {
            let tag = if known(f) { "known reference conflict" } else { "unexpected" };
            println!("    {tag}: {f}");
        }
        unexpected += surprises.len();
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failures");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
