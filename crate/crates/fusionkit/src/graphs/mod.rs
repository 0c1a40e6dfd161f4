//! Module graphs (McKay graphs of module categories over A_k).

mod data;
pub mod induce;
mod sl2;
mod sl3;

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::fusion::{FusionError, Irrep, Kind};
use crate::linalg::{self, IMat};

pub use data::{bundled_files, data_dir, read_data_file, DataError};
pub use sl2::{dynkin, tadpole};
pub use sl3::{orbifold, sl3_a};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph data unavailable: {0}")]
    Unavailable(String),
    #[error("malformed graph file {file}: {msg}")]
    Malformed { file: String, msg: String },
    #[error("unknown graph {0}")]
    Unknown(String),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

impl From<DataError> for GraphError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::Missing(p) => GraphError::Unavailable(p),
            DataError::Io(p, m) => GraphError::Malformed { file: p, msg: m },
        }
    }
}

/// Family a graph belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Series {
    A,
    /// sl(2) D with r even (self-fusion).
    DEven,
    /// sl(2) D with r odd.
    DOdd,
    E6,
    E7,
    E8,
    /// sl(3) Z₃ orbifold of A_k.
    D,
    Ac,
    Dc,
    E5,
    E5Orb,
    E9,
    E9Orb,
    E21,
    D9t,
    D9tc,
    /// Ad hoc sl(2) graphs with a loop; never in the catalog.
    Tadpole,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    pub name: String,
    pub kind: Kind,
    pub level: u32,
    pub series: Series,
    pub vertices: Vec<String>,
    /// Matrix of the generator λ_1 (sl2) or (1,0) (sl3).
    pub adjacency: IMat,
    pub self_fusion: bool,
    pub provenance: Option<String>,
    /// Algebra object Γ₀ recorded for reconstructed graphs.
    pub algebra_object: Option<Vec<(Irrep, u32)>>,
}

/// On-disk layout; field order is the serialization order.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    name: String,
    kind: Kind,
    level: u32,
    self_fusion: bool,
    vertices: Vec<String>,
    adjacency: Vec<Vec<i64>>,
    #[serde(default)]
    provenance: Option<String>,
    #[serde(default)]
    algebra_object: Option<Vec<(String, u32)>>,
}

/// Series tag from a graph name, e.g. `E_5/3`, `A^c_4`, `D_9^tc`.
pub fn series_of(kind: Kind, name: &str, level: u32) -> Option<Series> {
    let s = match (kind, name) {
        (_, n) if n.starts_with("A^c_") => Series::Ac,
        (_, n) if n.starts_with("D^c_") => Series::Dc,
        (_, "D_9^t") => Series::D9t,
        (_, "D_9^tc") => Series::D9tc,
        (Kind::Sl3, "E_5") => Series::E5,
        (Kind::Sl3, "E_5/3") => Series::E5Orb,
        (Kind::Sl3, "E_9") => Series::E9,
        (Kind::Sl3, "E_9/3") => Series::E9Orb,
        (Kind::Sl3, "E_21") => Series::E21,
        (Kind::Sl2, "E_6") => Series::E6,
        (Kind::Sl2, "E_7") => Series::E7,
        (Kind::Sl2, "E_8") => Series::E8,
        (Kind::Sl2, n) if n.starts_with("T_") => Series::Tadpole,
        (_, n) if n.starts_with("A_") => Series::A,
        (Kind::Sl3, n) if n.starts_with("D_") => Series::D,
        (Kind::Sl2, n) if n.starts_with("D_") => {
            if level % 4 == 0 {
                Series::DEven
            } else {
                Series::DOdd
            }
        }
        _ => return None,
    };
    Some(s)
}

impl GraphSpec {
    pub fn new(
        name: impl Into<String>,
        kind: Kind,
        level: u32,
        vertices: Vec<String>,
        adjacency: IMat,
        self_fusion: bool,
    ) -> Result<Self, GraphError> {
        let name = name.into();
        let series = series_of(kind, &name, level).ok_or_else(|| GraphError::Unknown(name.clone()))?;
        Ok(GraphSpec {
            name,
            kind,
            level,
            series,
            vertices,
            adjacency,
            self_fusion,
            provenance: None,
            algebra_object: None,
        })
    }

    pub fn kappa(&self) -> u32 {
        self.level + self.kind.dual_coxeter()
    }

    pub fn rank(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Spectral radius of the adjacency. Module graphs have normal G, so
    /// this is the top singular value, found by power iteration on GᵗG.
    pub fn perron_frobenius(&self) -> f64 {
        let g = self.adjacency.map(|x| x as f64);
        let n = g.nrows();
        let gtg = g.transpose() * &g;
        let mut v = nalgebra::DVector::from_element(n, 1.0);
        let mut lam = 0.0;
        for _ in 0..5000 {
            let w = &gtg * &v;
            let nrm = w.norm();
            if nrm == 0.0 {
                return 0.0;
            }
            let next = w / nrm;
            let diff = (&next - &v).norm();
            v = next;
            lam = nrm;
            if diff < 1e-15 {
                break;
            }
        }
        lam.sqrt()
    }

    /// Permute vertices so that `order[i]` becomes vertex i.
    pub fn permuted(&self, order: &[usize]) -> GraphSpec {
        let n = order.len();
        let adj = IMat::from_fn(n, n, |i, j| self.adjacency[(order[i], order[j])]);
        GraphSpec {
            vertices: order.iter().map(|&i| self.vertices[i].clone()).collect(),
            adjacency: adj,
            ..self.clone()
        }
    }

    /// Canonical order: `unit` first, then breadth-first along the generator
    /// (out-edges, then in-edges for sl3), ties by current index.
    pub fn canonical(&self, unit: usize) -> GraphSpec {
        let order = bfs_order(&self.adjacency, unit);
        self.permuted(&order)
    }

    pub fn from_json(text: &str, file: &str) -> Result<GraphSpec, GraphError> {
        let bad = |msg: String| GraphError::Malformed { file: file.to_string(), msg };
        let f: GraphFile = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let adjacency = linalg::from_rows(&f.adjacency).ok_or_else(|| bad("ragged adjacency".into()))?;
        if adjacency.nrows() != f.vertices.len() || adjacency.ncols() != f.vertices.len() {
            return Err(bad("adjacency size does not match vertex count".into()));
        }
        let series = series_of(f.kind, &f.name, f.level).ok_or_else(|| bad(format!("unknown series {}", f.name)))?;
        let algebra_object = match f.algebra_object {
            None => None,
            Some(list) => Some(
                list.into_iter()
                    .map(|(w, m)| w.parse::<Irrep>().map(|w| (w, m)).map_err(|e| bad(e.to_string())))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        Ok(GraphSpec {
            name: f.name,
            kind: f.kind,
            level: f.level,
            series,
            vertices: f.vertices,
            adjacency,
            self_fusion: f.self_fusion,
            provenance: f.provenance,
            algebra_object,
        })
    }

    /// Serialize in the canonical layout (one adjacency row per line); the
    /// output of `from_json` followed by `to_json` is byte-identical.
    pub fn to_json(&self) -> String {
        let js = |s: &str| serde_json::to_string(s).expect("string serialization");
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"name\": {},", js(&self.name));
        let _ = writeln!(out, "  \"kind\": \"{}\",", self.kind);
        let _ = writeln!(out, "  \"level\": {},", self.level);
        let _ = writeln!(out, "  \"self_fusion\": {},", self.self_fusion);
        let verts: Vec<String> = self.vertices.iter().map(|v| js(v)).collect();
        let _ = writeln!(out, "  \"vertices\": [{}],", verts.join(", "));
        out.push_str("  \"adjacency\": [\n");
        let rows = linalg::to_rows(&self.adjacency);
        for (i, r) in rows.iter().enumerate() {
            let cells: Vec<String> = r.iter().map(i64::to_string).collect();
            let sep = if i + 1 == rows.len() { "" } else { "," };
            let _ = writeln!(out, "    [{}]{sep}", cells.join(", "));
        }
        out.push_str("  ]");
        if let Some(p) = &self.provenance {
            let _ = write!(out, ",\n  \"provenance\": {}", js(p));
        }
        if let Some(obj) = &self.algebra_object {
            let items: Vec<String> = obj.iter().map(|(w, m)| format!("[{}, {m}]", js(&w.to_string()))).collect();
            let _ = write!(out, ",\n  \"algebra_object\": [{}]", items.join(", "));
        }
        out.push_str("\n}\n");
        out
    }
}

/// Breadth-first order from `start` over out-edges then in-edges.
pub fn bfs_order(adj: &IMat, start: usize) -> Vec<usize> {
    let n = adj.nrows();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let outs = (0..n).filter(|&u| adj[(v, u)] != 0);
        let ins = (0..n).filter(|&u| adj[(u, v)] != 0);
        for u in outs.chain(ins) {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.extend((0..n).filter(|&u| !seen[u]));
    order
}

/// Bundled data file name for a named sl(3) graph.
pub fn data_file_name(kind: Kind, name: &str) -> String {
    let stem: String = name
        .replace("^c", "c")
        .replace("^tc", "tc")
        .replace("^t", "t")
        .replace('/', "_")
        .chars()
        .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
        .collect();
    format!("graphs/{kind}_{stem}.json")
}

/// Load a graph from the data directory (bundled or `FUSIONKIT_DATA`).
pub fn load_graph(kind: Kind, name: &str) -> Result<GraphSpec, GraphError> {
    let file = data_file_name(kind, name);
    let text = read_data_file(&file)?;
    let g = GraphSpec::from_json(&text, &file)?;
    if g.name != name || g.kind != kind {
        return Err(GraphError::Malformed { file, msg: format!("file describes {} {}", g.kind, g.name) });
    }
    Ok(g)
}

/// Levels of the conjugate series shipped as data.
pub const CONJUGATE_LEVELS: std::ops::RangeInclusive<u32> = 1..=9;

/// Named sl(3) graphs that ship as data, with their levels.
pub const SL3_EXCEPTIONAL: &[(&str, u32)] =
    &[("E_5", 5), ("E_5/3", 5), ("E_9", 9), ("E_9/3", 9), ("D_9^t", 9), ("D_9^tc", 9), ("E_21", 21)];

/// Look up any catalog graph by kind and name.
pub fn graph_by_name(kind: Kind, name: &str) -> Result<GraphSpec, GraphError> {
    let unknown = || GraphError::Unknown(name.to_string());
    let num = |s: &str| s.parse::<u32>().map_err(|_| unknown());
    match kind {
        Kind::Sl2 => {
            let (head, tail) = name.split_once('_').ok_or_else(unknown)?;
            let r = num(tail)?;
            let g = match head {
                "A" if r >= 2 => dynkin(name, r - 1)?,
                "D" if r >= 4 => dynkin(name, 2 * r - 4)?,
                "E" => match r {
                    6 => dynkin(name, 10)?,
                    7 => dynkin(name, 16)?,
                    8 => dynkin(name, 28)?,
                    _ => return Err(unknown()),
                },
                _ => return Err(unknown()),
            };
            Ok(g)
        }
        Kind::Sl3 => {
            if let Some(k) = name.strip_prefix("A_") {
                return Ok(sl3_a(num(k)?)?);
            }
            if let Some(k) = name.strip_prefix("D_").filter(|k| k.chars().all(|c| c.is_ascii_digit())) {
                return Ok(orbifold(num(k)?)?);
            }
            let known = name.starts_with("A^c_")
                || name.starts_with("D^c_")
                || SL3_EXCEPTIONAL.iter().any(|(n, _)| *n == name);
            if !known {
                return Err(unknown());
            }
            load_graph(kind, name)
        }
    }
}

/// Every graph of the given algebra with level ≤ `max_level`, in a fixed
/// order: by level, then A, D, conjugates, exceptionals.
pub fn catalog(kind: Kind, max_level: u32) -> Result<Vec<GraphSpec>, GraphError> {
    if max_level < 1 {
        return Err(GraphError::Fusion(FusionError::Domain("max_level must be at least 1".into())));
    }
    let mut out = Vec::new();
    for k in 1..=max_level {
        match kind {
            Kind::Sl2 => {
                out.push(dynkin(&format!("A_{}", k + 1), k)?);
                if k % 2 == 0 && k >= 4 {
                    out.push(dynkin(&format!("D_{}", k / 2 + 2), k)?);
                }
                match k {
                    10 => out.push(dynkin("E_6", 10)?),
                    16 => out.push(dynkin("E_7", 16)?),
                    28 => out.push(dynkin("E_8", 28)?),
                    _ => {}
                }
            }
            Kind::Sl3 => {
                out.push(sl3_a(k)?);
                out.push(orbifold(k)?);
                if CONJUGATE_LEVELS.contains(&k) {
                    out.push(load_graph(kind, &format!("A^c_{k}"))?);
                    out.push(load_graph(kind, &format!("D^c_{k}"))?);
                }
                for (name, lvl) in SL3_EXCEPTIONAL {
                    if *lvl == k {
                        out.push(load_graph(kind, name)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Rigidity of a module: (F_n̄)_{ab} = (F_n)_{ba} for every n. For sl(2),
/// where odd irreps are pseudo-real, internal ends must also contain each
/// odd irrep with even multiplicity, so odd F_n have even diagonals.
pub fn rigidity_check(g: &GraphSpec, fam: &[IMat], irreps: &[Irrep]) -> bool {
    let pos = |w: Irrep| irreps.iter().position(|&x| x == w);
    for (i, w) in irreps.iter().enumerate() {
        let Some(j) = pos(w.conj()) else { return false };
        if fam[j] != fam[i].transpose() {
            return false;
        }
        if let Irrep::Sl2(n) = w {
            if n % 2 == 1 && (0..g.rank()).any(|a| fam[i][(a, a)] % 2 != 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_sl2_contents() {
        let cat = catalog(Kind::Sl2, 10).unwrap();
        let d6 = cat.iter().find(|g| g.name == "D_6").unwrap();
        assert_eq!((d6.rank(), d6.level), (6, 8));
        assert!(cat.iter().any(|g| g.name == "E_6"));
        assert!(cat.iter().all(|g| g.adjacency == g.adjacency.transpose()));
        assert!(catalog(Kind::Sl2, 0).is_err());
    }

    #[test]
    fn catalog_sl3_contents() {
        let cat = catalog(Kind::Sl3, 9).unwrap();
        let get = |n: &str| cat.iter().find(|g| g.name == n).unwrap();
        assert_eq!(get("E_5").rank(), 12);
        assert_eq!(get("D_9").rank(), 21);
        assert_eq!(get("D_6").rank(), 12);
        assert_eq!(get("D_9^t").rank(), 17);
        assert_eq!(get("A^c_7").rank(), 4);
    }

    #[test]
    fn pf_eigenvalues() {
        for g in catalog(Kind::Sl3, 9).unwrap().iter().chain(catalog(Kind::Sl2, 16).unwrap().iter()) {
            let beta = match g.kind {
                Kind::Sl2 => crate::exactnum::qint(2, g.kappa()).unwrap(),
                Kind::Sl3 => crate::exactnum::qint(3, g.kappa()).unwrap(),
            };
            assert!((g.perron_frobenius() - beta.to_f64()).abs() < 1e-9, "{}", g.name);
        }
    }

    #[test]
    fn json_round_trip_is_byte_exact() {
        let g = dynkin("E_6", 10).unwrap();
        let text = g.to_json();
        let back = GraphSpec::from_json(&text, "mem").unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_json(), text);
        let e9 = load_graph(Kind::Sl3, "E_9").unwrap();
        assert_eq!(e9.to_json(), read_data_file(&data_file_name(Kind::Sl3, "E_9")).unwrap());
    }

    #[test]
    fn unknown_and_missing() {
        assert!(matches!(graph_by_name(Kind::Sl2, "E_9"), Err(GraphError::Unknown(_))));
        assert_eq!(data_file_name(Kind::Sl3, "E_5/3"), "graphs/sl3_E_5_3.json");
        assert_eq!(data_file_name(Kind::Sl3, "A^c_4"), "graphs/sl3_Ac_4.json");
        assert_eq!(data_file_name(Kind::Sl3, "D_9^tc"), "graphs/sl3_D_9tc.json");
    }
}
