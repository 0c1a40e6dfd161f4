//! The action of A_k on a module graph: annular matrices F_n, essential
//! matrices ε_a, induction Γ_a and the algebra object F = Γ_0.

use std::fmt::Write as _;

use thiserror::Error;

use crate::exactnum::CycReal;
use crate::fusion::{recursion, FusionSystem, Irrep, Kind};
use crate::graphs::GraphSpec;
use crate::linalg::{self, IMat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModactError {
    #[error("{graph} is not a level-{level} module: F_{irrep} has a negative entry")]
    NotAModule { graph: String, level: u32, irrep: Irrep },
    #[error("{graph} is a {gkind} graph at level {glevel}, fusion system is {kind} at level {level}")]
    Mismatch { graph: String, gkind: Kind, glevel: u32, kind: Kind, level: u32 },
}

/// Annular matrices F_n of a module graph, one per irrep in fusion order.
#[derive(Clone, Debug)]
pub struct AnnularFamily {
    pub graph: String,
    pub kind: Kind,
    pub level: u32,
    pub vertices: Vec<String>,
    pub irreps: Vec<Irrep>,
    pub f: Vec<IMat>,
}

pub fn annular(sys: &FusionSystem, g: &GraphSpec) -> Result<AnnularFamily, ModactError> {
    if g.kind != sys.kind || g.level != sys.level {
        return Err(ModactError::Mismatch {
            graph: g.name.clone(),
            gkind: g.kind,
            glevel: g.level,
            kind: sys.kind,
            level: sys.level,
        });
    }
    let f = recursion(sys.kind, sys.irreps(), sys.index_map(), &g.adjacency).map_err(|irrep| {
        ModactError::NotAModule { graph: g.name.clone(), level: g.level, irrep }
    })?;
    Ok(AnnularFamily {
        graph: g.name.clone(),
        kind: g.kind,
        level: g.level,
        vertices: g.vertices.clone(),
        irreps: sys.irreps().to_vec(),
        f,
    })
}

impl AnnularFamily {
    /// r_E.
    pub fn rank(&self) -> usize {
        self.vertices.len()
    }

    pub fn f_of(&self, w: Irrep) -> Option<&IMat> {
        self.irreps.iter().position(|&x| x == w).map(|i| &self.f[i])
    }

    /// First (m, n) violating F_m F_n = Σ_p (N_m)_{np} F_p, if any.
    pub fn module_property(&self, sys: &FusionSystem) -> Result<(), (Irrep, Irrep)> {
        let r = self.irreps.len();
        let bad: Vec<Option<(Irrep, Irrep)>> = crate::par::map_range(r, |m| {
            let nm = sys.n(m);
            // F_m F_n = F_n F_m, so n ≥ m suffices.
            for n in m..r {
                let lhs = &self.f[m] * &self.f[n];
                let mut rhs = IMat::zeros(self.rank(), self.rank());
                for p in 0..r {
                    let c = nm[(n, p)];
                    if c != 0 {
                        rhs += &self.f[p] * c;
                    }
                }
                if lhs != rhs {
                    return Some((self.irreps[m], self.irreps[n]));
                }
            }
            None
        });
        match bad.into_iter().flatten().next() {
            Some(p) => Err(p),
            None => Ok(()),
        }
    }

    /// d_n = Σ_ab (F_n)_ab.
    pub fn dims(&self) -> Vec<i64> {
        self.f.iter().map(|m| m.sum()).collect()
    }
}

/// ε_a, r_A × r_E with (ε_a)_{nb} = (F_n)_{ab}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialMatrix {
    pub base: usize,
    pub m: IMat,
}

pub fn essential(fam: &AnnularFamily, a: usize) -> EssentialMatrix {
    let m = IMat::from_fn(fam.irreps.len(), fam.rank(), |n, b| fam.f[n][(a, b)]);
    EssentialMatrix { base: a, m }
}

/// Γ_b = Σ_n (ε_0)_{nb} λ_n as (irrep, multiplicity), zero entries dropped.
pub fn induction(fam: &AnnularFamily, b: usize) -> Vec<(Irrep, u32)> {
    fam.irreps
        .iter()
        .zip(&fam.f)
        .filter_map(|(&w, m)| u32::try_from(m[(0, b)]).ok().filter(|&c| c > 0).map(|c| (w, c)))
        .collect()
}

/// F = Γ_0 with multiplicities.
pub fn frobenius_object(fam: &AnnularFamily) -> Vec<(Irrep, u32)> {
    induction(fam, 0)
}

/// dim Γ_a = Σ_n (ε_0)_{na} μ_n.
pub fn gamma_dim(fam: &AnnularFamily, a: usize, sys: &FusionSystem) -> CycReal {
    let mut acc = CycReal::zero(sys.kappa).expect("valid altitude");
    for (w, c) in induction(fam, a) {
        acc = &acc + &sys.quantum_dim(w).scale(&num_rational::BigRational::from_integer(c.into()));
    }
    acc
}

/// Rows irreps, columns vertices, entries (ε_0)_{nb}.
pub fn induction_table_md(fam: &AnnularFamily) -> String {
    let mut out = String::from("| λ |");
    for v in &fam.vertices {
        let _ = write!(out, " {v} |");
    }
    out.push_str("\n|---|");
    out.push_str(&"---|".repeat(fam.rank()));
    out.push('\n');
    for (w, m) in fam.irreps.iter().zip(&fam.f) {
        let _ = write!(out, "| {w} |");
        for b in 0..fam.rank() {
            let _ = write!(out, " {} |", m[(0, b)]);
        }
        out.push('\n');
    }
    out
}

pub fn induction_table_csv(fam: &AnnularFamily) -> String {
    let quote = |s: &str| if s.contains(',') { format!("\"{s}\"") } else { s.to_string() };
    let mut out = String::from("irrep");
    for v in &fam.vertices {
        out.push(',');
        out.push_str(&quote(v));
    }
    out.push('\n');
    for (w, m) in fam.irreps.iter().zip(&fam.f) {
        out.push_str(&quote(&w.to_string()));
        for b in 0..fam.rank() {
            let _ = write!(out, ",{}", m[(0, b)]);
        }
        out.push('\n');
    }
    out
}

/// Restriction multiplicities read from ε_0ᵗ agree with induction read from
/// ε_0, entry by entry: ⟨λ_n, Γ_b⟩ = ⟨σ_b, λ_n|_E⟩ = (F_n)_{0b}.
pub fn adjunction_holds(fam: &AnnularFamily) -> bool {
    let eps = essential(fam, 0).m;
    let restriction = eps.transpose();
    (0..fam.rank()).all(|b| {
        let from_rows: Vec<i64> = (0..fam.irreps.len()).map(|n| restriction[(b, n)]).collect();
        let from_cols: Vec<i64> = (0..fam.irreps.len()).map(|n| fam.f[n][(0, b)]).collect();
        from_rows == from_cols && linalg::is_nonneg(&eps)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::parse_expr;
    use crate::fusion::build_fusion;
    use crate::graphs::{graph_by_name, tadpole};

    fn fam(kind: Kind, name: &str) -> (FusionSystem, AnnularFamily) {
        let g = graph_by_name(kind, name).unwrap();
        let sys = build_fusion(kind, g.level).unwrap();
        let f = annular(&sys, &g).unwrap();
        (sys, f)
    }

    #[test]
    fn a_graph_annular_is_fusion() {
        let (sys, f) = fam(Kind::Sl2, "A_11");
        assert_eq!(f.f, sys.fusion_matrices());
        assert_eq!(frobenius_object(&f), vec![(Irrep::Sl2(0), 1)]);
        assert_eq!(essential(&f, 0).m, linalg::identity(11));
    }

    #[test]
    fn e6_dims_and_object() {
        let (sys, f) = fam(Kind::Sl2, "E_6");
        assert_eq!(f.dims(), vec![6, 10, 14, 18, 20, 20, 20, 18, 14, 10, 6]);
        assert_eq!(frobenius_object(&f), vec![(Irrep::Sl2(0), 1), (Irrep::Sl2(6), 1)]);
        assert_eq!(gamma_dim(&f, 0, &sys), parse_expr("3+sqrt3", 12).unwrap());
        let ratio = &gamma_dim(&f, 2, &sys) / &gamma_dim(&f, 0, &sys);
        assert_eq!(ratio, parse_expr("1+sqrt3", 12).unwrap());
        assert!(f.module_property(&sys).is_ok());
    }

    #[test]
    fn d6_and_e7_e8_objects() {
        let (_, d6) = fam(Kind::Sl2, "D_6");
        assert_eq!(d6.dims(), vec![6, 10, 14, 16, 18, 16, 14, 10, 6]);
        assert_eq!(frobenius_object(&d6), vec![(Irrep::Sl2(0), 1), (Irrep::Sl2(8), 1)]);
        let (_, e7) = fam(Kind::Sl2, "E_7");
        let obj: Vec<u32> = frobenius_object(&e7).iter().map(|(w, _)| w.height()).collect();
        assert_eq!(obj, vec![0, 8, 16]);
        let (_, e8) = fam(Kind::Sl2, "E_8");
        let obj: Vec<u32> = frobenius_object(&e8).iter().map(|(w, _)| w.height()).collect();
        assert_eq!(obj, vec![0, 10, 18, 28]);
    }

    #[test]
    fn sl3_objects_carry_multiplicity() {
        let (_, e9) = fam(Kind::Sl3, "E_9/3");
        let obj = frobenius_object(&e9);
        assert!(obj.contains(&(Irrep::Sl3(2, 2), 2)));
        let (sys, d3) = fam(Kind::Sl3, "D_3");
        assert_eq!(gamma_dim(&d3, 0, &sys), CycReal::from_int(6, 3).unwrap());
    }

    #[test]
    fn tadpole_is_not_a_module_beyond_its_level() {
        let t = tadpole(3).unwrap();
        let sys = build_fusion(Kind::Sl2, t.level + 2).unwrap();
        let mut g = t.clone();
        g.level = sys.level;
        assert!(matches!(annular(&sys, &g), Err(ModactError::NotAModule { .. })));
        let sys = build_fusion(Kind::Sl2, t.level).unwrap();
        let f = annular(&sys, &t).unwrap();
        assert!(f.module_property(&sys).is_ok());
    }

    #[test]
    fn tables_and_adjunction() {
        let (_, f) = fam(Kind::Sl2, "E_6");
        let md = induction_table_md(&f);
        assert_eq!(md.lines().count(), 2 + 11);
        let csv = induction_table_csv(&f);
        assert!(csv.lines().nth(7).unwrap().starts_with("6,1"));
        assert!(adjunction_holds(&f));
    }

    #[test]
    fn level_mismatch_is_reported() {
        let g = graph_by_name(Kind::Sl2, "E_6").unwrap();
        let sys = build_fusion(Kind::Sl2, 9).unwrap();
        assert!(matches!(annular(&sys, &g), Err(ModactError::Mismatch { .. })));
    }
}
