//! Horizontal dimensions d_n, d_H, d_B, their closed formulas, the relation
//! A·X = Λ, and vertical-dimension fixtures d_x.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Deserialize;

use crate::exactnum::ratlin;
use crate::fusion::{FusionSystem, Irrep, Kind};
use crate::graphs::{read_data_file, DataError, Series};
use crate::linalg::{self, IMat};
use crate::modact::AnnularFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimReport {
    pub graph: String,
    pub kind: Kind,
    pub d_n: Vec<(Irrep, i64)>,
    pub d_h: BigInt,
    pub d_b: BigInt,
    /// Vertical dimensions from the fixture file; never computed.
    pub d_x_fixture: Option<Vec<i64>>,
    pub d_v: Option<BigInt>,
    pub d_b_hat: Option<BigInt>,
    /// Tabulated d_V − d_H, when known.
    pub gap_fixture: Option<i64>,
}

pub fn dim_report(fam: &AnnularFamily) -> DimReport {
    let d_n: Vec<(Irrep, i64)> = fam.irreps.iter().copied().zip(fam.dims()).collect();
    let d_h = d_n.iter().map(|(_, d)| BigInt::from(*d)).sum();
    let d_b = d_n.iter().map(|(_, d)| BigInt::from(*d) * BigInt::from(*d)).sum();
    DimReport {
        graph: fam.graph.clone(),
        kind: fam.kind,
        d_n,
        d_h,
        d_b,
        d_x_fixture: None,
        d_v: None,
        d_b_hat: None,
        gap_fixture: None,
    }
}

impl DimReport {
    /// Attach the vertical fixture for this graph, if one exists.
    pub fn with_fixture(mut self, fixtures: &[VerticalFixture]) -> Self {
        if let Some(f) = fixtures.iter().find(|f| f.kind == self.kind && f.graph == self.graph) {
            self.gap_fixture = f.gap;
            if let Some(dx) = f.all_d_x() {
                self.d_v = Some(dx.iter().map(|&d| BigInt::from(d)).sum());
                self.d_b_hat = Some(dx.iter().map(|&d| BigInt::from(d) * BigInt::from(d)).sum());
                self.d_x_fixture = Some(dx);
            }
        }
        self
    }

    pub fn d_n_values(&self) -> Vec<i64> {
        self.d_n.iter().map(|(_, d)| *d).collect()
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub label: u32,
    pub values: Vec<i64>,
}

/// One row of the vertical-dimension fixture file.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct VerticalFixture {
    pub kind: Kind,
    pub graph: String,
    #[serde(default)]
    pub d_x: Option<Vec<i64>>,
    /// d_V − d_H; absent where the published value is unknown.
    #[serde(default)]
    pub gap: Option<i64>,
    /// d_x arranged as labelled grids (E_21).
    #[serde(default)]
    pub d_x_grids: Option<Vec<Grid>>,
}

impl VerticalFixture {
    pub fn all_d_x(&self) -> Option<Vec<i64>> {
        if let Some(d) = &self.d_x {
            return Some(d.clone());
        }
        self.d_x_grids.as_ref().map(|g| g.iter().flat_map(|g| g.values.iter().copied()).collect())
    }
}

pub const FIXTURE_FILE: &str = "fixtures/vertical.json";

pub fn load_fixtures() -> Result<Vec<VerticalFixture>, DataError> {
    let text = read_data_file(FIXTURE_FILE)?;
    serde_json::from_str(&text).map_err(|e| DataError::Io(FIXTURE_FILE.into(), e.to_string()))
}

/// Outcome of comparing a report with its fixture.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixtureCheck {
    NoFixture,
    /// `None` entries could not be checked (no d_x, or unknown gap).
    Checked { d_b_matches: Option<bool>, gap_matches: Option<bool> },
}

pub fn dv_fixture_check(report: &DimReport) -> FixtureCheck {
    if report.d_x_fixture.is_none() && report.gap_fixture.is_none() {
        return FixtureCheck::NoFixture;
    }
    let d_b_matches = report.d_b_hat.as_ref().map(|b| *b == report.d_b);
    let gap_matches = match (&report.d_v, report.gap_fixture) {
        (Some(v), Some(g)) => Some(v - &report.d_h == BigInt::from(g)),
        _ => None,
    };
    FixtureCheck::Checked { d_b_matches, gap_matches }
}

/// Closed-form predictions for a family at level k.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Prediction {
    pub d_h: Option<BigInt>,
    pub d_b: Option<BigInt>,
    /// Spot values of d_n.
    pub d_n: Vec<(Irrep, i64)>,
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Exact quotient; the formulas are integral by construction.
fn exact_div(num: BigInt, den: i64) -> BigInt {
    let d = big(den);
    debug_assert!((&num % &d).is_zero(), "closed formula not integral");
    num / d
}

/// Closed formulas, or `None` when the series has none.
pub fn closed_formula_oracle(kind: Kind, series: Series, k: u32) -> Option<Prediction> {
    let kap = big(i64::from(k + kind.dual_coxeter()));
    let ki = k as i64;
    let kf = || kap.clone();
    match (kind, series) {
        (Kind::Sl2, s) => {
            let r: i64 = match s {
                Series::A => ki + 1,
                Series::DEven | Series::DOdd => ki / 2 + 2,
                Series::E6 => 6,
                Series::E7 => 7,
                Series::E8 => 8,
                _ => return None,
            };
            let d_h = exact_div(kf() * (kf() + 1) * r, 6);
            let k4 = kf() * kf() * kf() * kf();
            let d_b = match s {
                Series::A => Some(exact_div(kf() * (k4 - 1), 30)),
                Series::DEven => Some(exact_div(
                    (kf() + 2) * (kf() * (kf() * (kf() * (kf() * 4 + 17) + 26) + 28) + 120),
                    480,
                )),
                Series::DOdd => {
                    Some(exact_div(kf() * (kf() * (kf() * (kf() * (kf() * 4 + 25) + 60) + 80) + 176), 480))
                }
                _ => None,
            };
            let kapi = ki + 2;
            let d_n = match s {
                Series::A => (0..=k).map(|n| (Irrep::Sl2(n), (n as i64 + 1) * (ki + 1 - n as i64))).collect(),
                Series::DEven => {
                    let mid = (2 + kapi) * (2 + kapi) / 8;
                    vec![
                        (Irrep::Sl2(0), r),
                        (Irrep::Sl2(1), kapi),
                        (Irrep::Sl2(k / 2), mid),
                        (Irrep::Sl2(k - 1), kapi),
                        (Irrep::Sl2(k), r),
                    ]
                }
                Series::DOdd => {
                    vec![(Irrep::Sl2(0), r), (Irrep::Sl2(1), kapi), (Irrep::Sl2(k - 1), kapi), (Irrep::Sl2(k), r)]
                }
                _ => vec![],
            };
            Some(Prediction { d_h: Some(d_h), d_b, d_n })
        }
        (Kind::Sl3, Series::A) => {
            let d_h = exact_div(
                (kf() - 2) * (kf() - 1) * kf() * (kf() + 1) * (kf() + 2) * (kf() * kf() + 5),
                1680,
            );
            let k2 = kf() * kf();
            let poly = k2.clone() * k2.clone() * k2.clone() * 5 + k2.clone() * k2.clone() * 58 + k2.clone() * 325 + 1052;
            let d_b = exact_div((kf() - 2) * (kf() - 1) * k2 * (kf() + 1) * (kf() + 2) * poly, 4_435_200);
            let d_n = (0..=k)
                .flat_map(|p| {
                    let v = (ki + 2 - p as i64) * (ki + 1 - p as i64) * (1 + p as i64) * (2 + p as i64) / 4;
                    [(Irrep::Sl3(p, 0), v), (Irrep::Sl3(0, p), v)]
                })
                .collect();
            Some(Prediction { d_h: Some(d_h), d_b: Some(d_b), d_n })
        }
        (Kind::Sl3, Series::Ac) => Some(Prediction { d_h: Some(sl3_ac_d_h(k)), d_b: None, d_n: vec![] }),
        _ => None,
    }
}

/// d_H of the conjugate series A^c_k, split by parity of k.
fn sl3_ac_d_h(k: u32) -> BigInt {
    let kap = big(i64::from(k + 3));
    let kf = || kap.clone();
    if k % 2 == 1 {
        exact_div((kf() - 2) * kf() * kf() * (kf() + 2) * (kf() * kf() + 4), 1280)
    } else {
        let a: BigInt = kf() - 1;
        let b: BigInt = kf() + 1;
        exact_div(a.clone() * b.clone() * (a.clone() * a + 4) * (b.clone() * b + 4), 1280)
    }
}

/// Dimension ratios relative to a base graph at the same level: returns
/// (base name, d_H factor, d_B factor).
pub fn ratio_prediction(kind: Kind, series: Series, k: u32) -> Option<(String, BigRational, BigRational)> {
    let q = |a: i64, b: i64| BigRational::new(big(a), big(b));
    match (kind, series) {
        (Kind::Sl3, Series::D) if k % 3 != 0 => Some((format!("A_{k}"), q(1, 3), q(1, 9))),
        (Kind::Sl3, Series::Dc) => Some((format!("A^c_{k}"), q(3, 1), q(9, 1))),
        _ => None,
    }
}

/// X = Σ_n F_n.
fn annular_sum(fam: &AnnularFamily) -> IMat {
    let r = fam.rank();
    fam.f.iter().fold(IMat::zeros(r, r), |acc, m| acc + m)
}

/// Cartan-type matrix scaled to integers: 2·1 − F_1 (sl2) or
/// 6·1 − F_(1,0) − F_(0,1) (twice the sl3 one), with the matching scale.
fn scaled_cartan(fam: &AnnularFamily) -> (IMat, i64) {
    let r = fam.rank();
    match fam.kind {
        Kind::Sl2 => (linalg::identity(r) * 2 - &fam.f[1], 1),
        Kind::Sl3 => {
            let g = fam.f_of(Irrep::Sl3(1, 0)).expect("generator");
            (linalg::identity(r) * 6 - g - g.transpose(), 2)
        }
    }
}

/// Λ: F_0 + F_k (sl2); the alcove boundary with corners counted twice (sl3).
fn boundary_sum(fam: &AnnularFamily) -> IMat {
    let r = fam.rank();
    let k = fam.level;
    let mut lam = IMat::zeros(r, r);
    let mut add = |w: Irrep| lam += fam.f_of(w).expect("irrep at this level");
    match fam.kind {
        Kind::Sl2 => {
            add(Irrep::Sl2(0));
            add(Irrep::Sl2(k));
        }
        Kind::Sl3 => {
            for m in 0..=k {
                add(Irrep::Sl3(m, 0));
                add(Irrep::Sl3(0, m));
                add(Irrep::Sl3(m, k - m));
            }
        }
    }
    lam
}

/// A·X = Λ, exactly.
pub fn weyl_relation_check(fam: &AnnularFamily) -> bool {
    let (a, scale) = scaled_cartan(fam);
    a * annular_sum(fam) == boundary_sum(fam) * scale
}

/// Σ_{ij} (A⁻¹)_{ij} as an exact rational, or `None` if A is singular.
pub fn inverse_cartan_sum(fam: &AnnularFamily) -> Option<BigRational> {
    let (a, scale) = scaled_cartan(fam);
    let r = fam.rank();
    let rows: Vec<Vec<BigRational>> =
        (0..r).map(|i| (0..r).map(|j| BigRational::from_integer(big(a[(i, j)]))).collect()).collect();
    let ones = vec![BigRational::one(); r];
    let y = ratlin::solve(&rows, &ones)?;
    // A_true = A / scale, so A_true⁻¹ = scale · A⁻¹.
    let s: BigRational = y.iter().fold(BigRational::zero(), |acc, v| acc + v);
    Some(s * BigRational::from_integer(big(scale)))
}

/// d_(p,q) recurrence and the d_(p,0) closed form on A_k (sl3).
pub fn sl3_block_identities(sys: &FusionSystem) -> Result<(), Irrep> {
    let k = sys.level;
    let d = |p: u32, q: u32| sys.n_of(Irrep::Sl3(p, q)).sum();
    for p in 0..=k {
        let closed = (k as i64 + 2 - p as i64) * (k as i64 + 1 - p as i64) * (1 + p as i64) * (2 + p as i64) / 4;
        if d(p, 0) != closed || d(0, p) != closed {
            return Err(Irrep::Sl3(p, 0));
        }
    }
    for q in 1..=k {
        for p in (q + 1)..=(k - q) {
            if d(p, q) != d(p + 1, q - 1) - d(p - q, q - 1) + d(p - q, q) {
                return Err(Irrep::Sl3(p, q));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::build_fusion;
    use crate::graphs::graph_by_name;
    use crate::modact::annular;

    fn report(kind: Kind, name: &str) -> (AnnularFamily, DimReport) {
        let g = graph_by_name(kind, name).unwrap();
        let sys = build_fusion(kind, g.level).unwrap();
        let fam = annular(&sys, &g).unwrap();
        let rep = dim_report(&fam).with_fixture(&load_fixtures().unwrap());
        (fam, rep)
    }

    #[test]
    fn spot_values() {
        let (_, r) = report(Kind::Sl2, "A_11");
        assert_eq!((r.d_h, r.d_b), (big(286), big(8294)));
        let (_, r) = report(Kind::Sl2, "E_8");
        assert_eq!((r.d_h, r.d_b), (big(1240), big(63136)));
        let (_, r) = report(Kind::Sl3, "A_3");
        assert_eq!((r.d_h, r.d_b), (big(164), big(2920)));
    }

    #[test]
    fn oracle_examples() {
        let p = closed_formula_oracle(Kind::Sl2, Series::A, 4).unwrap();
        assert_eq!(p.d_b, Some(big(259)));
        let p = closed_formula_oracle(Kind::Sl2, Series::E6, 10).unwrap();
        assert_eq!(p.d_h, Some(big(156)));
        let p = closed_formula_oracle(Kind::Sl3, Series::A, 9).unwrap();
        assert_eq!(p.d_h, Some(big(21307)));
        assert_eq!(p.d_b, Some(big(10_517_299)));
        assert_eq!(closed_formula_oracle(Kind::Sl3, Series::Ac, 7).unwrap().d_h, Some(big(780)));
        assert!(closed_formula_oracle(Kind::Sl3, Series::E9, 9).is_none());
    }

    #[test]
    fn fixture_checks() {
        let (_, r) = report(Kind::Sl2, "D_4");
        assert_eq!(r.d_v.clone().unwrap() - &r.d_h, big(8));
        assert_eq!(r.d_b, big(168));
        assert_eq!(dv_fixture_check(&r), FixtureCheck::Checked { d_b_matches: Some(true), gap_matches: Some(true) });
        let (_, r) = report(Kind::Sl3, "E_21");
        assert_eq!(r.d_b_hat, Some(big(480_701_952)));
        assert_eq!(dv_fixture_check(&r), FixtureCheck::Checked { d_b_matches: Some(true), gap_matches: Some(true) });
        let (_, r) = report(Kind::Sl3, "E_9");
        assert_eq!(r.gap_fixture, Some(792));
        assert_eq!(dv_fixture_check(&r), FixtureCheck::Checked { d_b_matches: None, gap_matches: None });
        let (_, r) = report(Kind::Sl2, "D_8");
        assert_eq!(dv_fixture_check(&r), FixtureCheck::NoFixture);
    }

    #[test]
    fn weyl_relation_and_cartan_sum() {
        for (kind, name) in [(Kind::Sl2, "E_7"), (Kind::Sl2, "D_9"), (Kind::Sl3, "A_1"), (Kind::Sl3, "E_5"), (Kind::Sl3, "D_6")] {
            let (fam, rep) = report(kind, name);
            assert!(weyl_relation_check(&fam), "{name}");
            if kind == Kind::Sl2 {
                let s = inverse_cartan_sum(&fam).unwrap();
                assert_eq!(s * BigRational::from_integer(big(2)), BigRational::from_integer(rep.d_h));
            }
        }
        let (fam, rep) = report(Kind::Sl3, "A_1");
        assert_eq!(rep.d_h, big(9));
        // r(κ+1)(κ+2)/60 for A_k; k = 1 gives 3·5·6/60.
        assert_eq!(inverse_cartan_sum(&fam).unwrap(), BigRational::new(big(3 * 5 * 6), big(60)));
    }

    #[test]
    fn block_identities() {
        for k in [1, 2, 5, 8] {
            assert_eq!(sl3_block_identities(&build_fusion(Kind::Sl3, k).unwrap()), Ok(()));
        }
        let sys = build_fusion(Kind::Sl3, 2).unwrap();
        assert_eq!(sys.n_of(Irrep::Sl3(0, 0)).sum(), 6);
    }
}
