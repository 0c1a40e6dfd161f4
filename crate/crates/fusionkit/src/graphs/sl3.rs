//! The generated sl(3) families: A_k and its Z₃ orbifold D_k.

use super::{GraphError, GraphSpec};
use crate::fusion::{build_fusion, Irrep, Kind};
use crate::linalg::IMat;

/// A_k: the fusion graph of (1,0) itself.
pub fn sl3_a(k: u32) -> Result<GraphSpec, GraphError> {
    let sys = build_fusion(Kind::Sl3, k)?;
    let vertices = sys.irreps().iter().map(ToString::to_string).collect();
    let g = GraphSpec::new(format!("A_{k}"), Kind::Sl3, k, vertices, sys.n_of(Irrep::Sl3(1, 0)).clone(), true)?;
    Ok(g.canonical(0))
}

/// D_k: orbits of the simple-current rotation on the alcove. When k ≡ 0
/// mod 3 the fixed point (k/3, k/3) splits into three vertices.
pub fn orbifold(k: u32) -> Result<GraphSpec, GraphError> {
    let sys = build_fusion(Kind::Sl3, k)?;
    let g = sys.n_of(Irrep::Sl3(1, 0));
    let mut seen = vec![false; sys.rank()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    let mut fixed = None;
    for (i, &w) in sys.irreps().iter().enumerate() {
        if seen[i] {
            continue;
        }
        let w1 = sys.rotate(w);
        if w1 == w {
            fixed = Some(i);
            seen[i] = true;
            continue;
        }
        let orbit: Vec<usize> =
            [w, w1, sys.rotate(w1)].iter().map(|&x| sys.index(x).expect("rotation stays in alcove")).collect();
        for &j in &orbit {
            seen[j] = true;
        }
        orbits.push(orbit);
    }
    let mut vertices: Vec<String> =
        orbits.iter().map(|o| format!("[{}]", sys.irrep(o[0]))).collect();
    // Vertex v: (representative irrep, members, is_fixed_copy).
    let mut verts: Vec<(usize, Vec<usize>, bool)> = orbits.iter().map(|o| (o[0], o.clone(), false)).collect();
    if let Some(f) = fixed {
        for c in 1..=3 {
            vertices.push(format!("{}_{c}", sys.irrep(f)));
            verts.push((f, vec![f], true));
        }
    }
    let n = verts.len();
    let adj = IMat::from_fn(n, n, |i, j| {
        let (rep, _, fi) = &verts[i];
        let (_, members, fj) = &verts[j];
        if *fi && *fj {
            return 0;
        }
        let s: i64 = members.iter().map(|&m| g[(*rep, m)]).sum();
        // A fixed point's neighbours form a single orbit, met three times.
        if *fi {
            s / 3
        } else {
            s
        }
    });
    let self_fusion = k % 3 == 0;
    let spec = GraphSpec::new(format!("D_{k}"), Kind::Sl3, k, vertices, adj, self_fusion)?;
    Ok(spec.canonical(0))
}
