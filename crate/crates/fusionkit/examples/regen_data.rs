//! Regenerate the reconstructed sl(3) graph files under data/graphs.
//!
//! Each graph is rebuilt from its algebra object and modular invariant,
//! put in canonical order from the unit vertex and checked against its
//! (d_H, d_B) checksum before being written.
//!
//!     cargo run --release --example regen_data [NAME...]

use std::path::PathBuf;

use fusionkit::fusion::{build_fusion, FusionSystem, Irrep, Kind};
use fusionkit::graphs::induce::{reconstruct, Budget};
use fusionkit::graphs::{data_file_name, GraphSpec, CONJUGATE_LEVELS};
use fusionkit::linalg::IMat;
use fusionkit::modular::{invariant_for, load_invariant, ModularInvariant};

struct Job {
    name: String,
    level: u32,
    object: Vec<(Irrep, u32)>,
    checksum: Option<(i64, i64)>,
}

fn irr(list: &[(u32, u32)]) -> Vec<Irrep> {
    list.iter().map(|&(p, q)| Irrep::Sl3(p, q)).collect()
}

fn once(ws: Vec<Irrep>) -> Vec<(Irrep, u32)> {
    ws.into_iter().map(|w| (w, 1)).collect()
}

fn jobs() -> Vec<Job> {
    let job = |name: &str, level, object, checksum| Job { name: name.to_string(), level, object, checksum };
    let e9_b0 = irr(&[(0, 0), (0, 9), (9, 0), (4, 4), (4, 1), (1, 4)]);
    let e9_b1 = irr(&[(2, 2), (2, 5), (5, 2)]);
    let mut e9_3 = once(e9_b0.clone());
    e9_3.extend(e9_b1.iter().map(|&w| (w, 2)));
    let mut d9tc = once(irr(&[
        (0, 0), (3, 0), (0, 3), (2, 2), (4, 1), (1, 4), (6, 0), (0, 6),
        (5, 2), (2, 5), (4, 4), (9, 0), (0, 9), (6, 3), (3, 6),
    ]));
    d9tc.push((Irrep::Sl3(3, 3), 2));
    let mut out = vec![
        job("E_5", 5, once(irr(&[(0, 0), (2, 2)])), Some((720, 29376))),
        job("E_5/3", 5, once(irr(&[(0, 0), (2, 2), (2, 1), (0, 5), (1, 2), (5, 0)])), Some((240, 3264))),
        job("E_9", 9, once(e9_b0), Some((4656, 518976))),
        job("E_9/3", 9, e9_3, Some((5616, 754272))),
        job(
            "E_21",
            21,
            once(irr(&[
                (0, 0), (4, 4), (6, 6), (10, 10), (21, 0), (0, 21),
                (13, 4), (4, 13), (10, 1), (1, 10), (9, 6), (6, 9),
            ])),
            Some((288576, 480701952)),
        ),
        job("D_9^t", 9, once(irr(&[(0, 0), (9, 0), (0, 9), (3, 3)])), Some((7001, 1167355))),
        job("D_9^tc", 9, d9tc, Some((4713, 531435))),
    ];
    for k in CONJUGATE_LEVELS {
        let sys = build_fusion(Kind::Sl3, k).expect("level ≥ 1");
        let all = sys.irreps().to_vec();
        let t0: Vec<Irrep> = all.iter().copied().filter(|w| w.grading() == 0).collect();
        let known_ac = match k {
            1 => Some((3, 3)),
            2 => Some((15, 39)),
            3 => Some((36, 144)),
            4 => Some((102, 798)),
            5 => Some((204, 2376)),
            6 => Some((442, 8578)),
            7 => Some((780, 21360)),
            9 => Some((2331, 129699)),
            _ => None,
        };
        // D^c_k has three times the horizontal and nine times the bialgebra
        // dimension of A^c_k.
        let known_dc = known_ac.map(|(h, b)| (3 * h, 9 * b));
        out.push(job(&format!("A^c_{k}"), k, once(all), known_ac));
        out.push(job(&format!("D^c_{k}"), k, once(t0), known_dc));
    }
    out
}

fn invariant(job: &Job) -> ModularInvariant {
    if job.name.starts_with("A^c_") || job.name.starts_with("D^c_") {
        let stub = GraphSpec::new(job.name.clone(), Kind::Sl3, job.level, vec![], IMat::zeros(0, 0), false)
            .expect("known series");
        invariant_for(&stub).expect("series invariant")
    } else {
        load_invariant(&job.name).expect("bundled invariant")
    }
}

fn run(job: &Job) -> GraphSpec {
    let sys: FusionSystem = build_fusion(Kind::Sl3, job.level).expect("level ≥ 1");
    let inv = invariant(job);
    let exponents: Vec<usize> =
        (0..sys.rank()).flat_map(|i| std::iter::repeat(i).take(inv.z[(i, i)].max(0) as usize)).collect();
    let mut obj = vec![0i64; sys.rank()];
    for &(w, m) in &job.object {
        obj[sys.index(w).expect("object irrep at this level")] += i64::from(m);
    }
    let r_e = exponents.len();
    let mut budget = Budget::new(2_000_000_000);
    let rec = reconstruct(&sys, &obj, r_e, &exponents, &mut budget)
        .unwrap_or_else(|e| panic!("{}: budget exhausted {e:?}", job.name))
        .unwrap_or_else(|| panic!("{}: no graph for this algebra object", job.name));
    let unit = (0..r_e).find(|&b| rec.eps[0][b] == 1).expect("unit column");
    let d_h: i64 = rec.annular.iter().map(|f| f.sum()).sum();
    let d_b: i64 = rec.annular.iter().map(|f| f.sum() * f.sum()).sum();
    if let Some(c) = job.checksum {
        assert_eq!((d_h, d_b), c, "{} checksum", job.name);
    }
    let vertices = (0..r_e).map(|i| i.to_string()).collect();
    let mut g = GraphSpec::new(job.name.clone(), Kind::Sl3, job.level, vertices, rec.generator.clone(), false)
        .expect("known series");
    g.self_fusion = matches!(job.name.as_str(), "E_5" | "E_9" | "E_21");
    g.provenance = Some(format!(
        "reconstructed from its algebra object and modular invariant; d_H = {d_h}, d_B = {d_b}"
    ));
    g.algebra_object = Some(job.object.clone());
    let mut g = g.canonical(unit);
    g.vertices = (0..r_e).map(|i| format!("v{i}")).collect();
    g
}

fn main() {
    let wanted: Vec<String> = std::env::args().skip(1).collect();
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    for job in jobs() {
        if !wanted.is_empty() && !wanted.contains(&job.name) {
            continue;
        }
        let t = std::time::Instant::now();
        let g = run(&job);
        let path = root.join(data_file_name(Kind::Sl3, &job.name));
        std::fs::write(&path, g.to_json()).expect("write graph file");
        println!("{:<8} r_E = {:<3} {:?}  -> {}", job.name, g.rank(), t.elapsed(), path.display());
    }
}
