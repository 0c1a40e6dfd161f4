//! Modular invariants, modular blocks, the block structure of the algebra
//! of quantum symmetries, and the modular splitting equation.

pub mod splitting;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::{build_fusion, FusionError, FusionSystem, Irrep, Kind};
use crate::graphs::{read_data_file, DataError, GraphSpec, Series};
use crate::linalg::{self, IMat};

pub use splitting::{solve_splitting, solve_splitting_all, verify_splitting, SplitError, ToricFamily};

#[derive(Debug, Error)]
pub enum ModularError {
    #[error("invariant data unavailable: {0}")]
    Unavailable(String),
    #[error("invariant file {file}: {msg}")]
    Integrity { file: String, msg: String },
    #[error("no modular invariant known for {0}")]
    Unknown(String),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

/// One sesquilinear term c·(Σ_{m∈left} χ_m)(Σ_{n∈right} χ̄_n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub left: Vec<Irrep>,
    pub right: Vec<Irrep>,
    pub coeff: i64,
}

impl Term {
    fn square(block: Vec<Irrep>, coeff: i64) -> Term {
        Term { left: block.clone(), right: block, coeff }
    }
}

#[derive(Clone, Debug)]
pub struct ModularInvariant {
    pub graph: String,
    pub kind: Kind,
    pub level: u32,
    pub z: IMat,
    pub terms: Vec<Term>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct InvariantFile {
    graph: String,
    kind: Kind,
    level: u32,
    /// Expected (Tr Z, Tr ZZᵗ), checked on load.
    traces: (i64, i64),
    terms: Vec<(Vec<String>, Vec<String>, i64)>,
}

/// Expand a partition-function presentation into the matrix Z.
pub fn expand(sys: &FusionSystem, terms: &[Term]) -> Result<IMat, FusionError> {
    let r = sys.rank();
    let mut z = IMat::zeros(r, r);
    let idx = |w: Irrep| sys.index(w).ok_or_else(|| FusionError::Domain(format!("{w} is not at level {}", sys.level)));
    for t in terms {
        for &m in &t.left {
            for &n in &t.right {
                z[(idx(m)?, idx(n)?)] += t.coeff;
            }
        }
    }
    Ok(z)
}

fn sl2_terms(series: Series, k: u32) -> Result<Vec<Term>, ModularError> {
    let s = |v: &[u32]| v.iter().map(|&n| Irrep::Sl2(n)).collect::<Vec<_>>();
    let sq = |v: &[u32]| Term::square(s(v), 1);
    let terms = match series {
        Series::A => (0..=k).map(|n| sq(&[n])).collect(),
        Series::DEven => {
            let mut t: Vec<Term> = (0..k / 2).step_by(2).map(|l| sq(&[l, k - l])).collect();
            t.push(Term::square(s(&[k / 2]), 2));
            t
        }
        Series::DOdd => {
            let mut t: Vec<Term> = (0..=k).step_by(2).map(|l| sq(&[l])).collect();
            t.push(sq(&[k / 2]));
            for l in (1..=k).step_by(2).filter(|&l| l != k / 2) {
                t.push(Term { left: s(&[l]), right: s(&[k - l]), coeff: 1 });
            }
            t
        }
        Series::E6 => vec![sq(&[0, 6]), sq(&[3, 7]), sq(&[4, 10])],
        Series::E7 => vec![
            sq(&[0, 16]),
            sq(&[4, 12]),
            sq(&[6, 10]),
            sq(&[8]),
            Term { left: s(&[2, 14]), right: s(&[8]), coeff: 1 },
            Term { left: s(&[8]), right: s(&[2, 14]), coeff: 1 },
        ],
        Series::E8 => vec![sq(&[0, 10, 18, 28]), sq(&[6, 12, 16, 22])],
        _ => return Err(ModularError::Unknown(format!("sl2 series {series:?}"))),
    };
    Ok(terms)
}

/// Orbits of the simple-current rotation; the fixed point (if any) last.
fn rotation_orbits(sys: &FusionSystem) -> (Vec<[Irrep; 3]>, Option<Irrep>) {
    let mut seen = std::collections::HashSet::new();
    let mut orbits = Vec::new();
    let mut fixed = None;
    for &w in sys.irreps() {
        if seen.contains(&w) {
            continue;
        }
        let w1 = sys.rotate(w);
        if w1 == w {
            fixed = Some(w);
            seen.insert(w);
            continue;
        }
        let o = [w, w1, sys.rotate(w1)];
        seen.extend(o);
        orbits.push(o);
    }
    (orbits, fixed)
}

/// Z of the Z₃ orbifold series D_k.
fn sl3_d_terms(sys: &FusionSystem) -> Vec<Term> {
    let k = sys.level;
    if k % 3 == 0 {
        let (orbits, fixed) = rotation_orbits(sys);
        let mut t: Vec<Term> =
            orbits.iter().filter(|o| o[0].grading() == 0).map(|o| Term::square(o.to_vec(), 1)).collect();
        if let Some(f) = fixed {
            t.push(Term::square(vec![f], 3));
        }
        t
    } else {
        sys.irreps()
            .iter()
            .map(|&w| {
                let mut x = w;
                for _ in 0..(k * w.grading()) % 3 {
                    x = sys.rotate(x);
                }
                Term { left: vec![w], right: vec![x], coeff: 1 }
            })
            .collect()
    }
}

fn conjugate_terms(terms: &[Term]) -> Vec<Term> {
    terms
        .iter()
        .map(|t| Term { left: t.left.clone(), right: t.right.iter().map(|w| w.conj()).collect(), coeff: t.coeff })
        .collect()
}

fn invariant_file_name(name: &str) -> String {
    crate::graphs::data_file_name(Kind::Sl3, name).replacen("graphs/", "invariants/", 1)
}

/// Load an exceptional sl(3) invariant and check its recorded traces.
pub fn load_invariant(name: &str) -> Result<ModularInvariant, ModularError> {
    let file = invariant_file_name(name);
    let text = read_data_file(&file).map_err(|e| match e {
        DataError::Missing(p) => ModularError::Unavailable(p),
        DataError::Io(p, m) => ModularError::Integrity { file: p, msg: m },
    })?;
    let bad = |msg: String| ModularError::Integrity { file: file.clone(), msg };
    let f: InvariantFile = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let parse = |v: &[String]| -> Result<Vec<Irrep>, ModularError> {
        v.iter().map(|s| s.parse::<Irrep>().map_err(|e| bad(e.to_string()))).collect()
    };
    let mut terms = Vec::new();
    for (l, r, c) in &f.terms {
        terms.push(Term { left: parse(l)?, right: parse(r)?, coeff: *c });
    }
    let sys = build_fusion(f.kind, f.level)?;
    let z = expand(&sys, &terms).map_err(|e| bad(e.to_string()))?;
    let inv = ModularInvariant { graph: f.graph, kind: f.kind, level: f.level, z, terms };
    let got = (inv.trace(), inv.trace_zzt());
    if got.0 != f.traces.0 {
        return Err(bad(format!("Tr Z = {} but the file records {}", got.0, f.traces.0)));
    }
    if got.1 != f.traces.1 {
        return Err(bad(format!("Tr ZZᵗ = {} but the file records {}", got.1, f.traces.1)));
    }
    if inv.graph != name {
        return Err(bad(format!("file describes {}", inv.graph)));
    }
    Ok(inv)
}

/// The modular invariant attached to a catalog graph.
pub fn invariant_for(g: &GraphSpec) -> Result<ModularInvariant, ModularError> {
    let sys = build_fusion(g.kind, g.level)?;
    let k = g.level;
    let terms = match (g.kind, g.series) {
        (Kind::Sl2, s) => sl2_terms(s, k)?,
        (Kind::Sl3, Series::A) => sys.irreps().iter().map(|&w| Term::square(vec![w], 1)).collect(),
        (Kind::Sl3, Series::D) => sl3_d_terms(&sys),
        (Kind::Sl3, Series::Ac) => sys.irreps().iter().map(|&w| Term { left: vec![w], right: vec![w.conj()], coeff: 1 }).collect(),
        (Kind::Sl3, Series::Dc) => conjugate_terms(&sl3_d_terms(&sys)),
        (Kind::Sl3, _) => return load_invariant(&g.name),
    };
    let z = expand(&sys, &terms)?;
    Ok(ModularInvariant { graph: g.name.clone(), kind: g.kind, level: k, z, terms })
}

/// One invariant per catalog graph, in catalog order.
pub fn invariant_catalog(kind: Kind, max_level: u32) -> Result<Vec<ModularInvariant>, ModularError> {
    let cat = crate::graphs::catalog(kind, max_level).map_err(|e| ModularError::Unavailable(e.to_string()))?;
    crate::par::map(&cat, invariant_for).into_iter().collect()
}

/// Partition of the exponents into modular blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    /// Exponents with multiplicity Z_nn.
    pub exponents: Vec<(Irrep, i64)>,
    /// Blocks in irrep order; `blocks[0]` contains the identity (K₀).
    pub blocks: Vec<Vec<Irrep>>,
}

impl ModularInvariant {
    pub fn trace(&self) -> i64 {
        linalg::trace(&self.z)
    }

    pub fn trace_zzt(&self) -> i64 {
        self.z.iter().map(|x| x * x).sum()
    }

    fn system(&self) -> FusionSystem {
        build_fusion(self.kind, self.level).expect("invariant level is valid")
    }

    /// Exponent indices repeated by multiplicity.
    pub fn exponent_indices(&self) -> Vec<usize> {
        (0..self.z.nrows()).flat_map(|i| std::iter::repeat(i).take(self.z[(i, i)].max(0) as usize)).collect()
    }

    pub fn modular_blocks(&self) -> Blocks {
        let sys = self.system();
        let r = sys.rank();
        let ex: Vec<usize> = (0..r).filter(|&i| self.z[(i, i)] > 0).collect();
        let mut parent: Vec<usize> = (0..r).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &a in &ex {
            for &b in &ex {
                if self.z[(a, b)] != 0 {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra.max(rb)] = ra.min(rb);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<Irrep>> = BTreeMap::new();
        for &a in &ex {
            let root = find(&mut parent, a);
            groups.entry(root).or_default().push(sys.irrep(a));
        }
        Blocks {
            exponents: ex.iter().map(|&i| (sys.irrep(i), self.z[(i, i)])).collect(),
            blocks: groups.into_values().collect(),
        }
    }

    /// Sizes of the matrix blocks of the algebra of quantum symmetries:
    /// one M(Z_mn) per nonzero entry, sorted.
    pub fn ocneanu_block_structure(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.z.iter().copied().filter(|&x| x != 0).collect();
        v.sort_unstable();
        debug_assert_eq!(v.iter().map(|x| x * x).sum::<i64>(), self.trace_zzt());
        v
    }

    /// (‖SZ − ZS‖, ‖TZ − ZT‖), Frobenius norms.
    pub fn commutators(&self) -> (f64, f64) {
        let sys = self.system();
        let s = sys.modular_s();
        let t = sys.modular_t();
        let zc: DMatrix<Complex64> = self.z.map(|x| Complex64::new(x as f64, 0.0));
        let cs = (&s * &zc - &zc * &s).norm();
        let r = sys.rank();
        let tz = DMatrix::from_fn(r, r, |i, j| t[i] * zc[(i, j)] - zc[(i, j)] * t[j]);
        (cs, tz.norm())
    }

    /// Partition function, e.g. `|χ0 + χ6|² + |χ3 + χ7|² + …`.
    pub fn presentation(&self) -> String {
        let sum = |v: &[Irrep]| {
            let parts: Vec<String> = v.iter().map(|w| format!("χ{w}")).collect();
            parts.join(" + ")
        };
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            if t.coeff != 1 {
                let _ = write!(out, "{}", t.coeff);
            }
            if t.left == t.right {
                let _ = write!(out, "|{}|²", sum(&t.left));
            } else {
                let wrap = |v: &[Irrep]| if v.len() > 1 { format!("({})", sum(v)) } else { sum(v) };
                let _ = write!(out, "{}·conj({})", wrap(&t.left), sum(&t.right));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{catalog, dynkin, graph_by_name};

    fn inv(kind: Kind, name: &str) -> ModularInvariant {
        invariant_for(&graph_by_name(kind, name).unwrap()).unwrap()
    }

    #[test]
    fn sl2_traces() {
        let e6 = inv(Kind::Sl2, "E_6");
        assert_eq!((e6.trace(), e6.trace_zzt()), (6, 12));
        let d6 = invariant_for(&dynkin("D_6", 8).unwrap()).unwrap();
        assert_eq!((d6.trace(), d6.trace_zzt()), (6, 12));
        let d4 = inv(Kind::Sl2, "D_4");
        assert_eq!(d4.trace_zzt(), 8);
        let a = inv(Kind::Sl2, "A_5");
        assert_eq!(a.z, linalg::identity(5));
        let e7 = inv(Kind::Sl2, "E_7");
        assert_eq!((e7.trace(), e7.trace_zzt()), (7, 17));
        let e8 = inv(Kind::Sl2, "E_8");
        assert_eq!((e8.trace(), e8.trace_zzt()), (8, 32));
    }

    #[test]
    fn blocks_e6_e7() {
        let b = inv(Kind::Sl2, "E_6").modular_blocks();
        let s = |v: &[u32]| v.iter().map(|&n| Irrep::Sl2(n)).collect::<Vec<_>>();
        assert_eq!(b.blocks, vec![s(&[0, 6]), s(&[3, 7]), s(&[4, 10])]);
        let b7 = inv(Kind::Sl2, "E_7").modular_blocks();
        assert_eq!(b7.blocks, vec![s(&[0, 16]), s(&[4, 12]), s(&[6, 10]), s(&[8])]);
        assert_eq!(inv(Kind::Sl2, "A_4").modular_blocks().blocks.len(), 4);
    }

    #[test]
    fn block_sizes() {
        let d6 = inv(Kind::Sl2, "D_6").ocneanu_block_structure();
        assert_eq!(d6, vec![1, 1, 1, 1, 1, 1, 1, 1, 2]);
        assert_eq!(inv(Kind::Sl2, "E_6").ocneanu_block_structure(), vec![1; 12]);
    }

    #[test]
    fn sl2_invariants_commute() {
        for g in catalog(Kind::Sl2, 28).unwrap() {
            let z = invariant_for(&g).unwrap();
            assert_eq!(z.z[(0, 0)], 1);
            assert_eq!(z.trace(), g.rank() as i64, "{}", g.name);
            let (s, t) = z.commutators();
            assert!(s < 1e-8 && t < 1e-8, "{}: {s} {t}", g.name);
        }
    }

    #[test]
    fn sl3_traces_and_modularity() {
        let expect = [
            ("D_3", 6, 18),
            ("D_4", 5, 15),
            ("D_6", 12, 36),
            ("D_9", 21, 63),
            ("A^c_4", 3, 15),
            ("D^c_3", 6, 18),
            ("D^c_9", 15, 63),
            ("E_5", 12, 24),
            ("E_5/3", 4, 24),
            ("E_9", 12, 72),
            ("E_9/3", 12, 72),
            ("D_9^t", 17, 55),
            ("D_9^tc", 11, 55),
        ];
        for (name, te, to) in expect {
            let z = inv(Kind::Sl3, name);
            assert_eq!((z.trace(), z.trace_zzt()), (te, to), "{name}");
            let (s, t) = z.commutators();
            assert!(s < 1e-8 && t < 1e-8, "{name}: {s} {t}");
        }
    }

    #[test]
    fn presentation_text() {
        assert_eq!(inv(Kind::Sl2, "E_6").presentation(), "|χ0 + χ6|² + |χ3 + χ7|² + |χ4 + χ10|²");
    }
}
