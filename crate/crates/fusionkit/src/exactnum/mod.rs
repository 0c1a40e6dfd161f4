//! Exact arithmetic in Q(β), β = 2cos(π/κ).
//!
//! Elements are polynomials in β with rational coefficients, reduced modulo
//! the minimal polynomial of β, so equality is coefficient equality.

mod expr;
mod field;
pub(crate) mod ratlin;
mod render;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use expr::parse_expr;
pub use field::{minpoly, IntPoly};
pub(crate) use field::field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// An element of the real cyclotomic field Q(2cos(π/κ)).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycReal {
    kappa: u32,
    coeffs: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycReal {
    fn from_coeffs(kappa: u32, coeffs: Vec<BigRational>) -> Self {
        let f = field(kappa).expect("altitude validated by constructor");
        let mut c = reduce(coeffs, &f.minpoly);
        c.resize(f.degree, BigRational::zero());
        CycReal { kappa, coeffs: c }
    }

    fn check_kappa(kappa: u32) -> Result<(), ExactError> {
        field(kappa).map(|_| ())
    }

    pub fn from_rational(kappa: u32, q: BigRational) -> Result<Self, ExactError> {
        Self::check_kappa(kappa)?;
        Ok(Self::from_coeffs(kappa, vec![q]))
    }

    pub fn from_int(kappa: u32, n: i64) -> Result<Self, ExactError> {
        Self::from_rational(kappa, rat(n))
    }

    pub fn from_bigint(kappa: u32, n: BigInt) -> Result<Self, ExactError> {
        Self::from_rational(kappa, BigRational::from_integer(n))
    }

    pub fn zero(kappa: u32) -> Result<Self, ExactError> {
        Self::from_int(kappa, 0)
    }

    pub fn one(kappa: u32) -> Result<Self, ExactError> {
        Self::from_int(kappa, 1)
    }

    /// β = 2cos(π/κ).
    pub fn beta(kappa: u32) -> Result<Self, ExactError> {
        Self::check_kappa(kappa)?;
        Ok(Self::from_coeffs(kappa, vec![rat(0), rat(1)]))
    }

    /// 2cos(mπ/κ) as the Chebyshev polynomial C_m(β).
    pub fn two_cos(m: u32, kappa: u32) -> Result<Self, ExactError> {
        let b = Self::beta(kappa)?;
        let mut prev = Self::from_int(kappa, 2)?;
        if m == 0 {
            return Ok(prev);
        }
        let mut cur = b.clone();
        for _ in 1..m {
            let next = &(&b * &cur) - &prev;
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    pub fn kappa(&self) -> u32 {
        self.kappa
    }

    /// Coefficients on 1, β, β², … (always `degree` entries).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Value when the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    fn same(&self, other: &Self) -> Result<(), ExactError> {
        if self.kappa == other.kappa {
            Ok(())
        } else {
            Err(ExactError::Domain(format!("altitudes {} and {} differ", self.kappa, other.kappa)))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycReal { kappa: self.kappa, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycReal { kappa: self.kappa, coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.same(other)?;
        let d = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_coeffs(self.kappa, prod))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ExactError> {
        self.same(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Multiplicative inverse, by solving the linear system a·y = 1 in the
    /// power basis.
    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::Arithmetic("division by zero".into()));
        }
        let d = self.coeffs.len();
        // Column j of the multiplication matrix is a·β^j.
        let b = Self::beta(self.kappa)?;
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        for _ in 0..d {
            cols.push(cur.coeffs.clone());
            cur = &cur * &b;
        }
        let a: Vec<Vec<BigRational>> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
        let mut rhs = vec![BigRational::zero(); d];
        rhs[0] = BigRational::one();
        let y = ratlin::solve(&a, &rhs).ok_or_else(|| ExactError::Arithmetic("singular multiplication map".into()))?;
        Ok(CycReal { kappa: self.kappa, coeffs: y })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.kappa).expect("valid altitude");
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycReal { kappa: self.kappa, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    fn eval_at(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Value under the Perron–Frobenius embedding β ↦ 2cos(π/κ).
    pub fn to_f64(&self) -> f64 {
        self.eval_at(field(self.kappa).expect("valid altitude").beta())
    }

    /// Values under every real embedding, the PF embedding first.
    pub fn conjugates(&self) -> Vec<f64> {
        field(self.kappa).expect("valid altitude").embeddings.iter().map(|&x| self.eval_at(x)).collect()
    }

    /// The square root in the field that is nonnegative under the PF
    /// embedding, when one exists.
    ///
    /// After clearing denominators the radicand is an algebraic integer, and
    /// Z[β] is the full ring of integers of the real cyclotomic field, so the
    /// root has integer power-basis coefficients. The coefficients are
    /// recovered from one sign choice per Galois conjugate and then checked
    /// exactly.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let den = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let den_r = BigRational::from_integer(den.clone());
        let target = self.scale(&(&den_r * &den_r));
        let f = field(self.kappa).ok()?;
        let d = f.degree;
        let conj = target.conjugates();
        let scale = conj.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if conj.iter().any(|&x| x < -1e-9 * scale) || conj[0] <= 0.0 {
            return None;
        }
        let roots: Vec<f64> = conj.iter().map(|x| x.max(0.0).sqrt()).collect();
        let vinv = vandermonde_inverse(&f.embeddings)?;
        for mask in 0u64..(1u64 << (d - 1)) {
            let y: Vec<f64> = (0..d)
                .map(|j| if j > 0 && mask >> (j - 1) & 1 == 1 { -roots[j] } else { roots[j] })
                .collect();
            let mut coeffs = Vec::with_capacity(d);
            let mut ok = true;
            for row in &vinv {
                let c: f64 = row.iter().zip(&y).map(|(a, b)| a * b).sum();
                let r = c.round();
                if (c - r).abs() > 1e-6 * (1.0 + c.abs()) || !r.is_finite() {
                    ok = false;
                    break;
                }
                coeffs.push(BigRational::from_integer(BigInt::from(r as i128)));
            }
            if !ok {
                continue;
            }
            let cand = CycReal { kappa: self.kappa, coeffs };
            if &cand * &cand == target {
                return Some(cand.scale(&den_r.recip()));
            }
        }
        None
    }
}

fn vandermonde_inverse(nodes: &[f64]) -> Option<Vec<Vec<f64>>> {
    let d = nodes.len();
    let v: Vec<Vec<f64>> = nodes.iter().map(|&x| (0..d).map(|i| x.powi(i as i32)).collect()).collect();
    // Columns of the inverse, then transpose.
    let mut cols = Vec::with_capacity(d);
    for k in 0..d {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        cols.push(ratlin::solve_f64(v.clone(), e)?);
    }
    Some((0..d).map(|i| (0..d).map(|k| cols[k][i]).collect()).collect())
}

/// Reduce a rational polynomial modulo a monic integer polynomial.
fn reduce(mut p: Vec<BigRational>, modulus: &IntPoly) -> Vec<BigRational> {
    let d = modulus.len() - 1;
    let m: Vec<BigRational> = modulus.iter().map(|c| BigRational::from_integer(c.clone())).collect();
    while p.len() > d {
        let top = p.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        let base = p.len() - d;
        for j in 0..d {
            p[base + j] -= &top * &m[j];
        }
    }
    p
}

/// The q-integer [n] = sin(nπ/κ)/sin(π/κ), from [n+1] = β[n] − [n−1].
pub fn qint(n: u32, kappa: u32) -> Result<CycReal, ExactError> {
    let b = CycReal::beta(kappa)?;
    let mut prev = CycReal::zero(kappa)?;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = CycReal::one(kappa)?;
    for _ in 1..n {
        let next = &(&b * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithValue {
    Number(CycReal),
    Bool(bool),
}

/// Checked field arithmetic; mismatched altitudes are a domain error.
pub fn arith(a: &CycReal, b: &CycReal, op: ArithOp) -> Result<ArithValue, ExactError> {
    Ok(match op {
        ArithOp::Add => ArithValue::Number(a.try_add(b)?),
        ArithOp::Sub => ArithValue::Number(a.try_sub(b)?),
        ArithOp::Mul => ArithValue::Number(a.try_mul(b)?),
        ArithOp::Div => ArithValue::Number(a.try_div(b)?),
        ArithOp::Eq => {
            a.same(b)?;
            ArithValue::Bool(a == b)
        }
    })
}

// Operator sugar panics on mismatched altitudes; use `arith`/`try_*` for
// the checked variants.
macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&CycReal> for &CycReal {
            type Output = CycReal;
            fn $m(self, rhs: &CycReal) -> CycReal {
                self.$f(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycReal> for CycReal {
            type Output = CycReal;
            fn $m(self, rhs: CycReal) -> CycReal {
                (&self).$f(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<&CycReal> for CycReal {
            type Output = CycReal;
            fn $m(self, rhs: &CycReal) -> CycReal {
                (&self).$f(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &CycReal {
    type Output = CycReal;
    fn neg(self) -> CycReal {
        CycReal { kappa: self.kappa, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycReal {
    type Output = CycReal;
    fn neg(self) -> CycReal {
        -&self
    }
}

impl fmt::Display for CycReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bpoly())
    }
}

impl PartialOrd for CycReal {
    /// Ordering under the PF embedding; exact when the difference is zero.
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        if self.kappa != other.kappa {
            return None;
        }
        let d = self - other;
        if d.is_zero() {
            return Some(std::cmp::Ordering::Equal);
        }
        d.to_f64().partial_cmp(&0.0)
    }
}

pub(crate) fn rational_sign(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}
