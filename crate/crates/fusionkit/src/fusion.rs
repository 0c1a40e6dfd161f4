//! Fusion rings of sl(2) and sl(3) at level k, with modular S and T data.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{qint, CycReal, ExactError};
use crate::linalg::{self, IMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Sl2,
    Sl3,
}

impl Kind {
    /// Dual Coxeter number; κ = k + h.
    pub fn dual_coxeter(self) -> u32 {
        match self {
            Kind::Sl2 => 2,
            Kind::Sl3 => 3,
        }
    }

    /// Conformal charge dim(g)·k/(k+h).
    pub fn central_charge(self, level: u32) -> f64 {
        let dim = match self {
            Kind::Sl2 => 3.0,
            Kind::Sl3 => 8.0,
        };
        dim * level as f64 / (level + self.dual_coxeter()) as f64
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Sl2 => "sl2",
            Kind::Sl3 => "sl3",
        })
    }
}

impl FromStr for Kind {
    type Err = FusionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sl2" | "su2" => Ok(Kind::Sl2),
            "sl3" | "su3" => Ok(Kind::Sl3),
            _ => Err(FusionError::Domain(format!("unknown algebra {s:?}"))),
        }
    }
}

/// Highest weight of an integrable irrep: n for sl(2), (p, q) for sl(3).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Irrep {
    Sl2(u32),
    Sl3(u32, u32),
}

impl Irrep {
    pub fn kind(self) -> Kind {
        match self {
            Irrep::Sl2(_) => Kind::Sl2,
            Irrep::Sl3(..) => Kind::Sl3,
        }
    }

    pub fn conj(self) -> Irrep {
        match self {
            Irrep::Sl2(n) => Irrep::Sl2(n),
            Irrep::Sl3(p, q) => Irrep::Sl3(q, p),
        }
    }

    /// Level of the weight (n, or p + q).
    pub fn height(self) -> u32 {
        match self {
            Irrep::Sl2(n) => n,
            Irrep::Sl3(p, q) => p + q,
        }
    }

    /// Z₃ grading (p − q) mod 3 for sl(3); n mod 2 for sl(2).
    pub fn grading(self) -> u32 {
        match self {
            Irrep::Sl2(n) => n % 2,
            Irrep::Sl3(p, q) => (p + 2 * q) % 3,
        }
    }

    /// Label shifted by ρ, the convention for exponents.
    pub fn shifted(self) -> Vec<u32> {
        match self {
            Irrep::Sl2(n) => vec![n + 1],
            Irrep::Sl3(p, q) => vec![p + 1, q + 1],
        }
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Irrep::Sl2(n) => write!(f, "{n}"),
            Irrep::Sl3(p, q) => write!(f, "({p},{q})"),
        }
    }
}

impl FromStr for Irrep {
    type Err = FusionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || FusionError::Domain(format!("bad irrep label {s:?}"));
        if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            let mut it = inner.split(',').map(|x| x.trim().parse::<u32>());
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(p)), Some(Ok(q)), None) => Ok(Irrep::Sl3(p, q)),
                _ => Err(bad()),
            }
        } else {
            t.parse().map(Irrep::Sl2).map_err(|_| bad())
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FusionError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The fusion ring A_k with its fusion matrices (N_λ)_{μν} = N_{λμ}^ν.
#[derive(Clone, Debug)]
pub struct FusionSystem {
    pub kind: Kind,
    pub level: u32,
    pub kappa: u32,
    irreps: Vec<Irrep>,
    index: HashMap<Irrep, usize>,
    n: Vec<IMat>,
    mu: OnceLock<Vec<CycReal>>,
}

/// sl(3) irreps ordered by level, then by p descending.
pub fn sl3_irreps(k: u32) -> Vec<Irrep> {
    (0..=k).flat_map(|s| (0..=s).rev().map(move |p| Irrep::Sl3(p, s - p))).collect()
}

pub fn irreps(kind: Kind, k: u32) -> Vec<Irrep> {
    match kind {
        Kind::Sl2 => (0..=k).map(Irrep::Sl2).collect(),
        Kind::Sl3 => sl3_irreps(k),
    }
}

/// Matrix of multiplication by the generator, truncated to the alcove.
fn generator(k: u32, irr: &[Irrep], index: &HashMap<Irrep, usize>) -> IMat {
    let r = irr.len();
    let mut g = IMat::zeros(r, r);
    for (i, w) in irr.iter().enumerate() {
        let targets: Vec<Irrep> = match *w {
            Irrep::Sl2(n) => {
                let mut t = vec![];
                if n >= 1 {
                    t.push(Irrep::Sl2(n - 1));
                }
                if n < k {
                    t.push(Irrep::Sl2(n + 1));
                }
                t
            }
            Irrep::Sl3(p, q) => {
                let mut t = vec![];
                if p + q < k {
                    t.push(Irrep::Sl3(p + 1, q));
                }
                if p >= 1 {
                    t.push(Irrep::Sl3(p - 1, q + 1));
                }
                if q >= 1 {
                    t.push(Irrep::Sl3(p, q - 1));
                }
                t
            }
        };
        for t in targets {
            g[(i, index[&t])] += 1;
        }
    }
    g
}

/// Nonzero entries of each row.
fn sparse_rows(g: &IMat) -> Vec<Vec<(usize, i64)>> {
    (0..g.nrows()).map(|i| (0..g.ncols()).filter(|&j| g[(i, j)] != 0).map(|j| (j, g[(i, j)])).collect()).collect()
}

/// G·M for a sparse G given by rows.
fn sparse_mul(rows: &[Vec<(usize, i64)>], m: &IMat) -> IMat {
    IMat::from_fn(rows.len(), m.ncols(), |i, c| rows[i].iter().map(|&(j, v)| v * m[(j, c)]).sum())
}

/// Run the fusion recursion seeded with a generator matrix `g` (size r_E).
///
/// Returns one matrix per irrep in `irr` order, or the first irrep at which
/// a negative entry appears. Used both for fusion matrices (g = N_gen) and
/// for annular matrices of a module graph.
pub fn recursion(
    kind: Kind,
    irr: &[Irrep],
    index: &HashMap<Irrep, usize>,
    g: &IMat,
) -> Result<Vec<IMat>, Irrep> {
    let n = g.nrows();
    let mut out: Vec<Option<IMat>> = vec![None; irr.len()];
    fn get<'a>(out: &'a [Option<IMat>], index: &HashMap<Irrep, usize>, w: Irrep) -> &'a IMat {
        out[index[&w]].as_ref().expect("recursion order: lower weights first")
    }
    let gt = g.transpose();
    let (gs, gts) = (sparse_rows(g), sparse_rows(&gt));
    for (i, w) in irr.iter().enumerate() {
        let m = match *w {
            Irrep::Sl2(0) | Irrep::Sl3(0, 0) => linalg::identity(n),
            Irrep::Sl2(1) | Irrep::Sl3(1, 0) => g.clone(),
            Irrep::Sl3(0, 1) => gt.clone(),
            Irrep::Sl2(m) => sparse_mul(&gs, get(&out, index, Irrep::Sl2(m - 1))) - get(&out, index, Irrep::Sl2(m - 2)),
            Irrep::Sl3(p, q) if p >= 1 => {
                let mut m = sparse_mul(&gs, get(&out, index, Irrep::Sl3(p - 1, q)));
                if p >= 2 {
                    m -= get(&out, index, Irrep::Sl3(p - 2, q + 1));
                }
                if q >= 1 {
                    m -= get(&out, index, Irrep::Sl3(p - 1, q - 1));
                }
                m
            }
            Irrep::Sl3(_, q) => {
                let mut m = sparse_mul(&gts, get(&out, index, Irrep::Sl3(0, q - 1)));
                if q >= 2 {
                    m -= get(&out, index, Irrep::Sl3(1, q - 2));
                }
                m
            }
        };
        if !linalg::is_nonneg(&m) {
            return Err(*w);
        }
        let _ = kind;
        out[i] = Some(m);
    }
    Ok(out.into_iter().map(|m| m.expect("filled")).collect())
}

/// Construct the fusion ring A_k.
pub fn build_fusion(kind: Kind, k: u32) -> Result<FusionSystem, FusionError> {
    if k < 1 {
        return Err(FusionError::Domain("level must be at least 1".into()));
    }
    let irr = irreps(kind, k);
    let index: HashMap<Irrep, usize> = irr.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    let g = generator(k, &irr, &index);
    let n = recursion(kind, &irr, &index, &g).map_err(|w| FusionError::Domain(format!("negative fusion at {w}")))?;
    Ok(FusionSystem { kind, level: k, kappa: k + kind.dual_coxeter(), irreps: irr, index, n, mu: OnceLock::new() })
}

impl FusionSystem {
    pub fn rank(&self) -> usize {
        self.irreps.len()
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn index_map(&self) -> &HashMap<Irrep, usize> {
        &self.index
    }

    pub fn index(&self, w: Irrep) -> Option<usize> {
        self.index.get(&w).copied()
    }

    pub fn irrep(&self, i: usize) -> Irrep {
        self.irreps[i]
    }

    /// The generator: λ_1 for sl(2), (1,0) for sl(3).
    pub fn generator(&self) -> Irrep {
        match self.kind {
            Kind::Sl2 => Irrep::Sl2(1),
            Kind::Sl3 => Irrep::Sl3(1, 0),
        }
    }

    pub fn n(&self, i: usize) -> &IMat {
        &self.n[i]
    }

    pub fn n_of(&self, w: Irrep) -> &IMat {
        &self.n[self.index[&w]]
    }

    pub fn fusion_matrices(&self) -> &[IMat] {
        &self.n
    }

    pub fn conj_index(&self, i: usize) -> usize {
        self.index[&self.irreps[i].conj()]
    }

    /// Charge-conjugation permutation matrix C.
    pub fn conjugation(&self) -> IMat {
        let perm: Vec<usize> = (0..self.rank()).map(|i| self.conj_index(i)).collect();
        linalg::permutation(&perm)
    }

    /// Z₃ simple-current rotation (p, q) ↦ (k − p − q, p); sl(2) uses n ↦ k − n.
    pub fn rotate(&self, w: Irrep) -> Irrep {
        match w {
            Irrep::Sl2(n) => Irrep::Sl2(self.level - n),
            Irrep::Sl3(p, q) => Irrep::Sl3(self.level - p - q, p),
        }
    }

    /// Extended sl(2) recursion N_{n+1} = N_1·N_n − N_{n−1} for any n ≥ 0,
    /// which is periodic of period 2κ up to sign.
    pub fn extended_sl2(&self, n: u32) -> Option<IMat> {
        if self.kind != Kind::Sl2 {
            return None;
        }
        let g = &self.n[1];
        let mut prev = IMat::zeros(self.rank(), self.rank());
        let mut cur = linalg::identity(self.rank());
        for _ in 0..n {
            let next = g * &cur - &prev;
            prev = cur;
            cur = next;
        }
        Some(cur)
    }

    pub fn quantum_dim(&self, w: Irrep) -> CycReal {
        match self.index(w) {
            Some(i) => self.quantum_dims_ref()[i].clone(),
            None => self.compute_quantum_dim(w),
        }
    }

    fn compute_quantum_dim(&self, w: Irrep) -> CycReal {
        let kap = self.kappa;
        let q = |n: u32| qint(n, kap).expect("κ ≥ 3");
        match w {
            Irrep::Sl2(n) => q(n + 1),
            Irrep::Sl3(p, qq) => &(&(&q(p + 1) * &q(qq + 1)) * &q(p + qq + 2)) / &q(2),
        }
    }

    pub fn quantum_dims(&self) -> Vec<CycReal> {
        self.quantum_dims_ref().to_vec()
    }

    /// Cached μ_n in irrep order.
    pub fn quantum_dims_ref(&self) -> &[CycReal] {
        self.mu.get_or_init(|| self.irreps.iter().map(|&w| self.compute_quantum_dim(w)).collect())
    }

    /// |A| = Σ μ_n².
    pub fn order(&self) -> CycReal {
        self.quantum_dims_ref()
            .iter()
            .fold(CycReal::zero(self.kappa).expect("valid κ"), |acc, m| &acc + &(m * m))
    }

    /// Unit, rigidity (N_λ̄ = N_λᵗ), commutativity and associativity
    /// (N_a N_b = Σ_p (N_a)_{bp} N_p); the first failing pair otherwise.
    pub fn ring_axioms(&self) -> Result<(), (Irrep, Irrep)> {
        let r = self.rank();
        if self.n[0] != linalg::identity(r) {
            return Err((self.irreps[0], self.irreps[0]));
        }
        let bad = crate::par::map_range(r, |a| {
            let na = &self.n[a];
            if na.transpose() != self.n[self.conj_index(a)] {
                return Some((self.irreps[a], self.irreps[a]));
            }
            for b in a..r {
                let prod = na * &self.n[b];
                if prod != &self.n[b] * na {
                    return Some((self.irreps[a], self.irreps[b]));
                }
                let mut sum = IMat::zeros(r, r);
                for p in 0..r {
                    if na[(b, p)] != 0 {
                        sum += &self.n[p] * na[(b, p)];
                    }
                }
                if prod != sum {
                    return Some((self.irreps[a], self.irreps[b]));
                }
            }
            None
        });
        match bad.into_iter().flatten().next() {
            Some(p) => Err(p),
            None => Ok(()),
        }
    }

    /// Closed trigonometric form of |A|.
    pub fn order_closed_form(&self) -> f64 {
        let k = self.kappa as f64;
        let s = (PI / k).sin();
        match self.kind {
            Kind::Sl2 => k / 2.0 / (s * s),
            Kind::Sl3 => 3.0 / 256.0 * k * k / (s.powi(6) * (PI / k).cos().powi(2)),
        }
    }

    /// Modular S matrix (floating point).
    pub fn modular_s(&self) -> DMatrix<Complex64> {
        let r = self.rank();
        let k = self.kappa as f64;
        match self.kind {
            Kind::Sl2 => DMatrix::from_fn(r, r, |m, n| {
                Complex64::new((2.0 / k).sqrt() * (((m + 1) * (n + 1)) as f64 * PI / k).sin(), 0.0)
            }),
            Kind::Sl3 => {
                let weyl = sl3_weyl();
                let raw = DMatrix::from_fn(r, r, |a, b| {
                    let (lp, lq) = shifted_pair(self.irreps[a]);
                    let (mp, mq) = shifted_pair(self.irreps[b]);
                    weyl.iter()
                        .map(|(sign, w)| {
                            let (x, y) = w(lp, lq);
                            let ip = (2 * x * mp + x * mq + y * mp + 2 * y * mq) as f64 / 3.0;
                            Complex64::from_polar(*sign as f64, -2.0 * PI * ip / k)
                        })
                        .sum::<Complex64>()
                });
                let norm = (0..r).map(|j| raw[(0, j)].norm_sqr()).sum::<f64>().sqrt();
                let phase = raw[(0, 0)] / raw[(0, 0)].norm();
                raw.map(|z| z / (phase * norm))
            }
        }
    }

    /// Conformal weights h_λ.
    pub fn conformal_weight(&self, w: Irrep) -> f64 {
        let k = self.kappa as f64;
        match w {
            Irrep::Sl2(n) => (n * (n + 2)) as f64 / (4.0 * k),
            Irrep::Sl3(p, q) => (p * p + q * q + p * q + 3 * p + 3 * q) as f64 / (3.0 * k),
        }
    }

    /// Diagonal of T: exp(2πi(h_λ − c/24)).
    pub fn modular_t(&self) -> Vec<Complex64> {
        let c = self.kind.central_charge(self.level);
        self.irreps
            .iter()
            .map(|&w| Complex64::from_polar(1.0, 2.0 * PI * (self.conformal_weight(w) - c / 24.0)))
            .collect()
    }

    /// Fusion matrices as JSON (array of row-major arrays).
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "level": self.level,
            "irreps": self.irreps.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "N": self.n.iter().map(linalg::to_rows).collect::<Vec<_>>(),
        })
    }
}

fn shifted_pair(w: Irrep) -> (i64, i64) {
    match w {
        Irrep::Sl3(p, q) => (p as i64 + 1, q as i64 + 1),
        Irrep::Sl2(n) => (n as i64 + 1, 0),
    }
}

type WeylMap = fn(i64, i64) -> (i64, i64);

/// The six Weyl group elements of SU(3) in fundamental-weight coordinates,
/// with their signs.
fn sl3_weyl() -> [(i32, WeylMap); 6] {
    [
        (1, |a, b| (a, b)),
        (-1, |a, b| (-a, a + b)),
        (-1, |a, b| (a + b, -b)),
        (1, |a, b| (-a - b, a)),
        (1, |a, b| (b, -a - b)),
        (-1, |a, b| (-b, -a)),
    ]
}
