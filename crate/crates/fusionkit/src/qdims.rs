//! Quantum dimensions of module-graph vertices, the orders |E|, |A/E|, |J|,
//! the trigonometric identities for invariants, and the discriminant D.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactnum::CycReal;
use crate::fusion::{FusionSystem, Irrep, Kind};
use crate::linalg::IMat;
use crate::modact::{gamma_dim, induction, AnnularFamily};
use crate::modular::ModularInvariant;

/// μ_a = dim Γ_a / dim Γ_0 for every vertex.
pub fn vertex_qdims(fam: &AnnularFamily, sys: &FusionSystem) -> Vec<CycReal> {
    let g0 = gamma_dim(fam, 0, sys).inv().expect("dim Γ_0 > 0");
    (0..fam.rank()).map(|a| &gamma_dim(fam, a, sys) * &g0).collect()
}

#[derive(Clone, Debug)]
pub struct OrderReport {
    pub graph: String,
    pub mu: Vec<CycReal>,
    /// |E| = Σ μ_a².
    pub order_e: CycReal,
    /// |A/E| = dim Γ_0.
    pub order_quotient: CycReal,
    pub order_a: CycReal,
    pub order_j: Option<CycReal>,
    pub j_vertices: Option<Vec<usize>>,
    pub warning: Option<String>,
}

impl OrderReport {
    /// |A/E|·|E| = |A|.
    pub fn quotient_identity(&self) -> bool {
        &self.order_quotient * &self.order_e == self.order_a
    }

    /// |A|/|E| = |E|/|J|, i.e. |A|·|J| = |E|²; `None` without J.
    pub fn self_fusion_identity(&self) -> Option<bool> {
        self.order_j.as_ref().map(|j| &self.order_a * j == &self.order_e * &self.order_e)
    }
}

/// Vertices whose induction support is a modular block of Z, provided each
/// block is met by exactly as many vertices as its diagonal multiplicity.
fn identify_j(fam: &AnnularFamily, inv: &ModularInvariant) -> Result<Vec<usize>, String> {
    let blocks = inv.modular_blocks();
    let mult = |w: Irrep| blocks.exponents.iter().find(|(x, _)| *x == w).map_or(0, |(_, m)| *m);
    let mut j = Vec::new();
    for block in &blocks.blocks {
        let mut want = block.clone();
        want.sort_unstable_by_key(|w| fam.irreps.iter().position(|x| x == w));
        let hits: Vec<usize> = (0..fam.rank())
            .filter(|&c| {
                let support: Vec<Irrep> = induction(fam, c).into_iter().map(|(w, _)| w).collect();
                support == want
            })
            .collect();
        let expected = mult(block[0]) as usize;
        if hits.len() != expected {
            let names: Vec<String> = block.iter().map(ToString::to_string).collect();
            return Err(format!(
                "block {{{}}} has multiplicity {expected} but matches {} vertices",
                names.join(", "),
                hits.len()
            ));
        }
        j.extend(hits);
    }
    j.sort_unstable();
    Ok(j)
}

/// Orders of a module graph. J is identified only for self-fusion graphs.
pub fn order_report(fam: &AnnularFamily, sys: &FusionSystem, inv: &ModularInvariant, self_fusion: bool) -> OrderReport {
    let mu = vertex_qdims(fam, sys);
    let zero = CycReal::zero(sys.kappa).expect("valid altitude");
    let order_e = mu.iter().fold(zero.clone(), |acc, m| &acc + &(m * m));
    let order_quotient = gamma_dim(fam, 0, sys);
    let (mut order_j, mut j_vertices, mut warning) = (None, None, None);
    if self_fusion {
        match identify_j(fam, inv) {
            Ok(j) => {
                order_j = Some(j.iter().fold(zero, |acc, &c| &acc + &(&mu[c] * &mu[c])));
                j_vertices = Some(j);
            }
            Err(w) => warning = Some(w),
        }
    }
    OrderReport {
        graph: fam.graph.clone(),
        mu,
        order_e,
        order_quotient,
        order_a: sys.order(),
        order_j,
        j_vertices,
        warning,
    }
}

/// |A| = Σ_{c∈J} (dim Γ_c)², exactly; `None` without J.
pub fn j_sum_identity(fam: &AnnularFamily, sys: &FusionSystem, report: &OrderReport) -> Option<bool> {
    let j = report.j_vertices.as_ref()?;
    let zero = CycReal::zero(sys.kappa).expect("valid altitude");
    let s = j.iter().fold(zero, |acc, &c| {
        let g = gamma_dim(fam, c, sys);
        &acc + &(&g * &g)
    });
    Some(s == report.order_a)
}

/// Outcome of the identity checks for one invariant.
#[derive(Clone, Debug)]
pub struct TrigCheck {
    pub sum: f64,
    pub expected: f64,
    pub within_tol: bool,
    /// Σ μ_m Z_mn μ_n = Σ μ_m², exactly.
    pub exact: bool,
}

/// The sine-sum identity (labels shifted by ρ) and its exact counterpart.
pub fn trig_identity_check(sys: &FusionSystem, inv: &ModularInvariant, tol: f64) -> TrigCheck {
    let kap = f64::from(sys.kappa);
    let s = |m: u32| (f64::from(m) * PI / kap).sin();
    let weight = |w: Irrep| match w {
        Irrep::Sl2(n) => s(n + 1),
        Irrep::Sl3(p, q) => s(p + 1) * s(q + 1) * s(p + q + 2),
    };
    let r = sys.rank();
    let wts: Vec<f64> = (0..r).map(|i| weight(sys.irrep(i))).collect();
    let mut sum = 0.0;
    for i in 0..r {
        for j in 0..r {
            if inv.z[(i, j)] != 0 {
                sum += inv.z[(i, j)] as f64 * wts[i] * wts[j];
            }
        }
    }
    let expected = match sys.kind {
        Kind::Sl2 => kap / 2.0,
        Kind::Sl3 => 3.0 * kap * kap / 64.0,
    };
    let mu = sys.quantum_dims();
    let zero = CycReal::zero(sys.kappa).expect("valid altitude");
    let mut lhs = zero.clone();
    for i in 0..r {
        for j in 0..r {
            let z = inv.z[(i, j)];
            if z != 0 {
                lhs = &lhs + &(&mu[i] * &mu[j]).scale(&BigInt::from(z).into());
            }
        }
    }
    let rhs = mu.iter().fold(zero, |acc, m| &acc + &(m * m));
    TrigCheck { sum, expected, within_tol: (sum - expected).abs() < tol, exact: lhs == rhs }
}

#[derive(Clone, Debug)]
pub struct Discriminant {
    /// (Σ μ²)^r / Π μ², exactly.
    pub d: BigInt,
    pub closed_form: BigInt,
    pub prod_mu_sq: CycReal,
    /// Float value of the product formula for Π μ².
    pub prod_formula: f64,
    /// Discriminant of the characteristic polynomial of the A_r adjacency
    /// matrix (sl2 only).
    pub charpoly_disc: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("(Σμ²)^r / Πμ² = {0} is not an integer")]
pub struct NonIntegral(pub String);

fn pow_big(b: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

pub fn closed_form_d(kind: Kind, kappa: u32) -> BigInt {
    let k = u64::from(kappa);
    match kind {
        Kind::Sl2 => pow_big(2, k - 1) * pow_big(k, k - 3),
        Kind::Sl3 => pow_big(3, (k - 2) * (k - 1) / 2) * pow_big(k, (k - 4) * (k - 2)),
    }
}

fn product_formula(kind: Kind, kappa: u32) -> f64 {
    let k = f64::from(kappa);
    let (s, c) = ((PI / k).sin(), (PI / k).cos());
    match kind {
        Kind::Sl2 => (2f64.powf(-(k - 1.0)) * k * s.powf(-(k - 1.0))).powi(2),
        Kind::Sl3 => {
            let e = (k - 2.0) * (k - 1.0);
            16f64.powf(-e) * k.powf(3.0 * (k - 2.0)) * (c * s.powi(3)).powf(-e)
        }
    }
}

pub fn discriminant_suite(sys: &FusionSystem) -> Result<Discriminant, NonIntegral> {
    let mu = sys.quantum_dims();
    let one = CycReal::one(sys.kappa).expect("valid altitude");
    let prod = mu.iter().fold(one, |acc, m| &acc * &(m * m));
    let d_exact = &sys.order().pow(sys.rank() as u32) / &prod;
    let d = d_exact.as_integer().ok_or_else(|| NonIntegral(d_exact.to_string()))?;
    let charpoly_disc = match sys.kind {
        Kind::Sl2 => Some(poly_discriminant(&path_charpoly(sys.rank()))),
        Kind::Sl3 => None,
    };
    Ok(Discriminant {
        d,
        closed_form: closed_form_d(sys.kind, sys.kappa),
        prod_mu_sq: prod,
        prod_formula: product_formula(sys.kind, sys.kappa),
        charpoly_disc,
    })
}

/// det(s·1 − A) for the path on n vertices, low degree first.
pub fn path_charpoly(n: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::one()];
    let mut cur = vec![BigInt::zero(), BigInt::one()];
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Characteristic polynomial of an integer matrix (Faddeev–LeVerrier over
/// the integers), low degree first.
pub fn charpoly(a: &IMat) -> Vec<BigInt> {
    let n = a.nrows();
    let am: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(a[(i, j)])).collect()).collect();
    let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| &x[i][k] * &y[k][j]).sum()).collect()).collect()
    };
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(&am, &m);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        m = next;
        let am_m = mul(&am, &m);
        let tr: BigInt = (0..n).map(|i| am_m[i][i].clone()).sum();
        c[n - k] = -tr / BigInt::from(k);
    }
    c
}

/// Discriminant of a polynomial (low degree first) through the Sylvester
/// resultant with its derivative.
pub fn poly_discriminant(p: &[BigInt]) -> BigInt {
    let n = p.len() - 1;
    if n < 1 {
        return BigInt::zero();
    }
    let dp: Vec<BigInt> = (1..=n).map(|i| &p[i] * BigInt::from(i)).collect();
    let res = resultant(p, &dp);
    let lead = &p[n];
    let sign = if (n * (n - 1) / 2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    sign * res / lead
}

/// Determinant of the Sylvester matrix, by fraction-free elimination.
fn resultant(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let (m, n) = (p.len() - 1, q.len() - 1);
    let size = m + n;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    // Rows hold coefficients from the leading one down.
    for i in 0..n {
        for (j, c) in p.iter().rev().enumerate() {
            s[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in q.iter().rev().enumerate() {
            s[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(s)
}

pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign.is_negative() {
        -det
    } else {
        det
    }
}
