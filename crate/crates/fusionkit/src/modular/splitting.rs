//! The modular splitting equation Σ_x (W_0x)_{λμ} W_x0 = N_λ Z N_μᵗ.
//!
//! Reshaping K_{λμ} = N_λ Z N_μᵗ with conjugated columns gives a symmetric
//! matrix K'[(λμ),(ab)] = (K_{λμ})_{āb̄} = Σ_x (W_0x)_{λμ}(W_0x)_{ab}, since
//! W_x0 = C·W_0x·C. Toric matrices are therefore the columns of a
//! nonnegative integer Gram factorization of K' with Tr(ZZᵗ) columns.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ModularInvariant;
use crate::fusion::{FusionSystem, Irrep};
use crate::graphs::induce::{factor_gram, Budget, Exhausted, Factor};
use crate::linalg::{self, IMat};

/// Solved toric matrices; `toric[0]` is W_00 = Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricFamily {
    pub graph: String,
    /// W_x0, r_A × r_A each.
    pub toric: Vec<IMat>,
    /// W_0x, the coefficient matrices (W_0x)_{λμ}.
    pub coeffs: Vec<IMat>,
}

#[derive(Serialize, Deserialize)]
struct ToricEntry {
    x: usize,
    #[serde(rename = "W")]
    w: Vec<Vec<i64>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplitError {
    #[error("search budget exhausted after {nodes} nodes; {rows_placed} of {rows_total} rows of K' placed on the deepest branch")]
    Exhausted { nodes: u64, rows_placed: usize, rows_total: usize },
    #[error("no nonnegative integer decomposition with {0} toric matrices")]
    Infeasible(i64),
}

/// First failing check of `verify_splitting`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitFailure {
    Count { expected: i64, got: usize },
    W00NotZ,
    Negative(usize),
    Equation(Irrep, Irrep),
}

impl ToricFamily {
    pub fn len(&self) -> usize {
        self.toric.len()
    }

    pub fn is_empty(&self) -> bool {
        self.toric.is_empty()
    }

    /// JSON list of `{x, W}` with W = W_x0 rows.
    pub fn to_json(&self) -> String {
        let entries: Vec<ToricEntry> =
            self.toric.iter().enumerate().map(|(x, w)| ToricEntry { x, w: linalg::to_rows(w) }).collect();
        serde_json::to_string(&entries).expect("serializable")
    }

    pub fn from_json(graph: &str, text: &str, sys: &FusionSystem) -> Result<ToricFamily, serde_json::Error> {
        let entries: Vec<ToricEntry> = serde_json::from_str(text)?;
        let c = sys.conjugation();
        let toric: Vec<IMat> = entries
            .iter()
            .map(|e| linalg::from_rows(&e.w).unwrap_or_else(|| IMat::zeros(0, 0)))
            .collect();
        let coeffs = toric.iter().map(|w| &c * w * &c).collect();
        Ok(ToricFamily { graph: graph.to_string(), toric, coeffs })
    }

    /// Row sums Σ_{λμ}(W_x0)_{λμ} per x.
    pub fn entry_sums(&self) -> Vec<i64> {
        self.toric.iter().map(|w| w.sum()).collect()
    }
}

/// K_{λμ} = N_λ Z N_μᵗ for all pairs, flattened as [λ][μ][a][b].
fn k_tensor(sys: &FusionSystem, z: &IMat) -> Vec<i64> {
    let r = sys.rank();
    let nz: Vec<IMat> = sys.fusion_matrices().iter().map(|n| n * z).collect();
    let blocks: Vec<Vec<i64>> = crate::par::map_range(r * r, |lm| {
        let (l, m) = (lm / r, lm % r);
        let k = &nz[l] * sys.n(m).transpose();
        let mut out = Vec::with_capacity(r * r);
        for a in 0..r {
            for b in 0..r {
                out.push(k[(a, b)]);
            }
        }
        out
    });
    blocks.concat()
}

/// Check the splitting equation exactly, plus the family invariants.
/// Distinct x may share a toric matrix (D_4 has such a pair), so only the
/// count of x is checked, not distinctness of the matrices.
pub fn verify_splitting(sys: &FusionSystem, inv: &ModularInvariant, fam: &ToricFamily) -> Result<(), SplitFailure> {
    let expected = inv.trace_zzt();
    if fam.toric.len() as i64 != expected || fam.coeffs.len() != fam.toric.len() {
        return Err(SplitFailure::Count { expected, got: fam.toric.len() });
    }
    if fam.toric.first() != Some(&inv.z) {
        return Err(SplitFailure::W00NotZ);
    }
    for (x, w) in fam.toric.iter().enumerate() {
        if !linalg::is_nonneg(w) || !linalg::is_nonneg(&fam.coeffs[x]) {
            return Err(SplitFailure::Negative(x));
        }
    }
    let r = sys.rank();
    for l in 0..r {
        let nlz = sys.n(l) * &inv.z;
        for m in 0..r {
            let lhs = &nlz * sys.n(m).transpose();
            let mut rhs = IMat::zeros(r, r);
            for (w, c) in fam.toric.iter().zip(&fam.coeffs) {
                let k = c[(l, m)];
                if k != 0 {
                    rhs += w * k;
                }
            }
            if lhs != rhs {
                return Err(SplitFailure::Equation(sys.irrep(l), sys.irrep(m)));
            }
        }
    }
    Ok(())
}

/// Turn Gram columns into a canonically ordered family, or None if no
/// column reproduces Z.
fn family_from_factor(sys: &FusionSystem, inv: &ModularInvariant, f: &Factor, cols: usize) -> Option<ToricFamily> {
    let r = sys.rank();
    let c = sys.conjugation();
    let mut pairs: Vec<(IMat, IMat)> = (0..cols)
        .map(|x| {
            let w0x = IMat::from_fn(r, r, |l, m| f[l * r + m][x]);
            (&c * &w0x * &c, w0x)
        })
        .collect();
    let zero = pairs.iter().position(|(w, _)| *w == inv.z)?;
    let first = pairs.remove(zero);
    pairs.sort_by(|a, b| a.0.as_slice().cmp(b.0.as_slice()));
    pairs.insert(0, first);
    let (toric, coeffs) = pairs.into_iter().unzip();
    Some(ToricFamily { graph: inv.graph.clone(), toric, coeffs })
}

fn search(
    sys: &FusionSystem,
    inv: &ModularInvariant,
    budget: u64,
    max_solutions: usize,
) -> Result<Vec<ToricFamily>, SplitError> {
    let r = sys.rank();
    let kt = k_tensor(sys, &inv.z);
    let conj: Vec<usize> = (0..r).map(|i| sys.conj_index(i)).collect();
    let entry = |i: usize, j: usize| {
        let (a, b) = (j / r, j % r);
        kt[(i * r + conj[a]) * r + conj[b]]
    };
    let n = r * r;
    // Rows by height of (λ, μ), then diagonal; zero rows are omitted.
    let height = |i: usize| sys.irrep(i / r).height() + sys.irrep(i % r).height();
    let mut order: Vec<usize> = (0..n).filter(|&i| entry(i, i) != 0).collect();
    order.sort_by_key(|&i| (height(i), entry(i, i), i));
    let target = inv.trace_zzt() as usize;
    let mut b = Budget::new(budget);
    let mut found: Vec<ToricFamily> = Vec::new();
    let mut accept = |f: &Factor| {
        if let Some(fam) = family_from_factor(sys, inv, f, target) {
            if verify_splitting(sys, inv, &fam).is_ok() && !found.contains(&fam) {
                found.push(fam);
            }
        }
        found.len() >= max_solutions
    };
    match factor_gram(n, &entry, target, &order, &mut b, &mut accept) {
        Ok(_) => {}
        Err(Exhausted { deepest, nodes }) if found.is_empty() => {
            return Err(SplitError::Exhausted { nodes, rows_placed: deepest, rows_total: order.len() });
        }
        Err(_) => {}
    }
    if found.is_empty() {
        return Err(SplitError::Infeasible(inv.trace_zzt()));
    }
    Ok(found)
}

/// First solution in search order, with W_00 = Z first and the remaining
/// toric matrices sorted lexicographically.
pub fn solve_splitting(sys: &FusionSystem, inv: &ModularInvariant, budget: u64) -> Result<ToricFamily, SplitError> {
    search(sys, inv, budget, 1).map(|mut v| v.remove(0))
}

/// Up to `max` distinct solutions found within the budget.
pub fn solve_splitting_all(
    sys: &FusionSystem,
    inv: &ModularInvariant,
    budget: u64,
    max: usize,
) -> Result<Vec<ToricFamily>, SplitError> {
    search(sys, inv, budget, max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{build_fusion, Kind};
    use crate::graphs::graph_by_name;
    use crate::modular::invariant_for;

    fn setup(kind: Kind, name: &str) -> (FusionSystem, ModularInvariant) {
        let g = graph_by_name(kind, name).unwrap();
        (build_fusion(kind, g.level).unwrap(), invariant_for(&g).unwrap())
    }

    #[test]
    fn a_series_returns_fusion_matrices() {
        let (sys, inv) = setup(Kind::Sl2, "A_6");
        let fam = solve_splitting(&sys, &inv, 1_000_000).unwrap();
        let mut got = fam.toric.clone();
        let mut want = sys.fusion_matrices().to_vec();
        got.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        want.sort_by(|a, b| a.as_slice().cmp(b.as_slice()));
        assert_eq!(got, want);
    }

    #[test]
    fn d4_and_e6() {
        for (name, count) in [("D_4", 8), ("E_6", 12), ("D_6", 12)] {
            let (sys, inv) = setup(Kind::Sl2, name);
            let fam = solve_splitting(&sys, &inv, 10_000_000).unwrap();
            assert_eq!(fam.len(), count, "{name}");
            assert_eq!(verify_splitting(&sys, &inv, &fam), Ok(()));
        }
    }

    #[test]
    fn perturbation_is_caught() {
        let (sys, inv) = setup(Kind::Sl2, "E_6");
        let mut fam = solve_splitting(&sys, &inv, 10_000_000).unwrap();
        fam.toric[3][(1, 2)] += 1;
        assert!(verify_splitting(&sys, &inv, &fam).is_err());
    }

    #[test]
    fn json_round_trip() {
        let (sys, inv) = setup(Kind::Sl2, "D_4");
        let fam = solve_splitting(&sys, &inv, 10_000_000).unwrap();
        let text = fam.to_json();
        let back = ToricFamily::from_json("D_4", &text, &sys).unwrap();
        assert_eq!(back, fam);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn tiny_budget_reports_exhaustion() {
        let (sys, inv) = setup(Kind::Sl2, "E_6");
        assert!(matches!(solve_splitting(&sys, &inv, 3), Err(SplitError::Exhausted { .. })));
    }
}
