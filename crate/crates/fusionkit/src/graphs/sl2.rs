//! Simply-laced Dynkin diagrams as sl(2) module graphs.

use super::{GraphError, GraphSpec};
use crate::fusion::{FusionError, Kind};
use crate::linalg::IMat;

fn from_edges(n: usize, edges: &[(usize, usize)]) -> IMat {
    let mut g = IMat::zeros(n, n);
    for &(a, b) in edges {
        g[(a, b)] = 1;
        g[(b, a)] = 1;
    }
    g
}

fn path(n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|i| (i - 1, i)).collect()
}

/// A_r, D_r or E_{6,7,8} at level `k`, vertex 0 being the unit (the end of
/// the longest arm).
pub fn dynkin(name: &str, k: u32) -> Result<GraphSpec, GraphError> {
    let bad = || GraphError::Unknown(format!("{name} at level {k}"));
    let (head, tail) = name.split_once('_').ok_or_else(bad)?;
    let r: usize = tail.parse().map_err(|_| bad())?;
    let (edges, self_fusion) = match head {
        "A" if r == k as usize + 1 => (path(r), true),
        "D" if r >= 4 && k as usize == 2 * r - 4 => {
            let mut e = path(r - 1);
            e.push((r - 3, r - 1));
            (e, r % 2 == 0)
        }
        "E" => {
            let (branch, expected_k, sf) = match r {
                6 => (2, 10, true),
                7 => (3, 16, false),
                8 => (4, 28, true),
                _ => return Err(bad()),
            };
            if k != expected_k {
                return Err(bad());
            }
            let mut e = path(r - 1);
            e.push((branch, r - 1));
            (e, sf)
        }
        _ => return Err(bad()),
    };
    let vertices = (0..r).map(|i| i.to_string()).collect();
    let g = GraphSpec::new(name, Kind::Sl2, k, vertices, from_edges(r, &edges), self_fusion)?;
    Ok(g.canonical(0))
}

/// The tadpole T_n: A_n with a loop on its last vertex. Its natural level is
/// 2n − 1 (same Perron–Frobenius eigenvalue as A_{2n}). Not in the catalog.
pub fn tadpole(n: usize) -> Result<GraphSpec, FusionError> {
    if n < 1 {
        return Err(FusionError::Domain("tadpole needs a vertex".into()));
    }
    let mut g = from_edges(n, &path(n));
    g[(n - 1, n - 1)] = 1;
    Ok(GraphSpec {
        name: format!("T_{n}"),
        kind: Kind::Sl2,
        level: 2 * n as u32 - 1,
        series: super::Series::Tadpole,
        vertices: (0..n).map(|i| i.to_string()).collect(),
        adjacency: g,
        self_fusion: false,
        provenance: Some("tadpole, built ad hoc".into()),
        algebra_object: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let e7 = dynkin("E_7", 16).unwrap();
        assert_eq!(e7.rank(), 7);
        let degrees: Vec<i64> = (0..7).map(|i| e7.adjacency.row(i).sum()).collect();
        assert_eq!(degrees.iter().filter(|&&d| d == 3).count(), 1);
        assert!(dynkin("E_7", 10).is_err());
        assert!(dynkin("D_5", 8).is_err());
        assert_eq!(dynkin("D_5", 6).unwrap().rank(), 5);
    }

    #[test]
    fn tadpole_pf() {
        let t = tadpole(2).unwrap();
        assert!((t.perron_frobenius() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }
}
