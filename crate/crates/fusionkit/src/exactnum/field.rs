use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ExactError;

/// Integer polynomial, coefficients from the constant term upward.
pub type IntPoly = Vec<BigInt>;

fn trim(p: &mut IntPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Exact division by a monic divisor; panics if the remainder is nonzero.
fn poly_div_exact(num: &IntPoly, den: &IntPoly) -> IntPoly {
    let mut rem = num.clone();
    let dl = den.len();
    assert!(den[dl - 1].is_one(), "divisor must be monic");
    if rem.len() < dl {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - dl + 1];
    for i in (0..q.len()).rev() {
        let c = rem[i + dl - 1].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
        q[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    q
}

/// Cyclotomic polynomial Φ_n.
pub fn cyclotomic(n: u64) -> IntPoly {
    let mut num: IntPoly = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic(d));
        }
    }
    trim(&mut num);
    num
}

#[cfg(test)]
pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|&j| j.gcd(&n) == 1).count() as u64
}

/// Minimal polynomial of 2cos(π/κ) over Q, monic, constant term first.
///
/// Φ_{2κ}(z) is palindromic of degree 2m; dividing by z^m and substituting
/// z^j + z^{-j} = C_j(x) gives the polynomial in x = z + 1/z.
pub fn minpoly(kappa: u32) -> Result<IntPoly, ExactError> {
    if kappa < 2 {
        return Err(ExactError::Domain(format!("altitude {kappa} < 2")));
    }
    let phi = cyclotomic(2 * kappa as u64);
    let m = (phi.len() - 1) / 2;
    // Chebyshev C_j as integer polynomials in x.
    let mut cheb: Vec<IntPoly> = vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
    for j in 2..=m {
        let mut next = vec![BigInt::zero(); j + 1];
        for (i, c) in cheb[j - 1].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in cheb[j - 2].iter().enumerate() {
            next[i] -= c;
        }
        cheb.push(next);
    }
    let mut out = vec![BigInt::zero(); m + 1];
    out[0] += &phi[m];
    for j in 1..=m {
        for (i, c) in cheb[j].iter().enumerate() {
            out[i] += &phi[m + j] * c;
        }
    }
    trim(&mut out);
    debug_assert!(out[m].is_one());
    Ok(out)
}

/// Per-altitude data shared by every element of Q(2cos(π/κ)).
#[derive(Debug)]
pub struct Field {
    pub minpoly: IntPoly,
    pub degree: usize,
    /// Galois conjugates 2cos(jπ/κ), gcd(j, 2κ) = 1, the PF embedding first.
    pub embeddings: Vec<f64>,
}

impl Field {
    fn build(kappa: u32) -> Result<Self, ExactError> {
        let minpoly = minpoly(kappa)?;
        let degree = minpoly.len() - 1;
        let embeddings: Vec<f64> = (1..kappa)
            .step_by(2)
            .filter(|j| j.gcd(&(2 * kappa)) == 1)
            .map(|j| 2.0 * (j as f64 * std::f64::consts::PI / kappa as f64).cos())
            .collect();
        debug_assert_eq!(embeddings.len(), degree.max(1));
        Ok(Field { minpoly, degree, embeddings })
    }

    pub fn beta(&self) -> f64 {
        self.embeddings[0]
    }
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<Field>>>> = OnceLock::new();

pub fn field(kappa: u32) -> Result<Arc<Field>, ExactError> {
    let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("field cache poisoned").get(&kappa) {
        return Ok(f.clone());
    }
    let f = Arc::new(Field::build(kappa)?);
    cache.lock().expect("field cache poisoned").insert(kappa, f.clone());
    Ok(f)
}
