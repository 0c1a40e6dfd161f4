use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ratlin, rational_sign, CycReal};

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Squarefree radicands available as field elements, with their roots.
fn radical_basis(kappa: u32) -> Vec<(u32, CycReal)> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<(u32, CycReal)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("radical cache poisoned").get(&kappa) {
        return v.clone();
    }
    let primes: Vec<u32> = [2u32, 3, 5, 7, 11, 13].into_iter().filter(|p| kappa % p == 0).collect();
    let mut out = vec![(1, CycReal::one(kappa).expect("valid altitude"))];
    for mask in 1u32..(1 << primes.len()) {
        let d: u32 = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).product();
        if let Some(r) = CycReal::from_int(kappa, d as i64).expect("valid altitude").sqrt() {
            out.push((d, r));
        }
    }
    cache.lock().expect("radical cache poisoned").insert(kappa, out.clone());
    out
}

impl CycReal {
    /// Polynomial in `b` (standing for β = 2cos(π/κ)), e.g. `1 + 2*b^2`.
    pub fn to_bpoly(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => "b".to_string(),
                _ => format!("b^{i}"),
            };
            let body = if i == 0 {
                fmt_rational(&a)
            } else if a.is_one() {
                mono
            } else {
                format!("{}*{mono}", fmt_rational(&a))
            };
            if out.is_empty() {
                out = if neg { format!("-{body}") } else { body };
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        if out.is_empty() {
            "0".to_string()
        } else {
            out
        }
    }

    /// Decimal rendering under the PF embedding.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*}", digits, self.to_f64())
    }

    /// Rational combination of square roots, e.g. `12(2 + √2)`, when the
    /// value lies in the span of {1, √2, √3, √5, …} inside the field.
    pub fn to_radical(&self) -> Option<String> {
        let basis = radical_basis(self.kappa);
        let d = self.coeffs.len();
        let a: Vec<Vec<BigRational>> =
            (0..d).map(|i| basis.iter().map(|(_, r)| r.coeffs[i].clone()).collect()).collect();
        let x = ratlin::solve(&a, &self.coeffs)?;
        let terms: Vec<(u32, BigRational)> =
            basis.iter().zip(x).filter(|(_, c)| !c.is_zero()).map(|((d, _), c)| (*d, c)).collect();
        if terms.is_empty() {
            return Some("0".to_string());
        }
        let lcm = terms.iter().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
        let gcd = terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c.numer()));
        let mut content = BigRational::new(gcd, lcm);
        if rational_sign(&terms[0].1) < 0 {
            content = -content;
        }
        let single = terms.len() == 1;
        let inner_terms: Vec<(u32, BigRational)> = if single {
            terms.clone()
        } else {
            terms.iter().map(|(d, c)| (*d, c / &content)).collect()
        };
        let mut inner = String::new();
        for (i, (rad, c)) in inner_terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            let body = match (*rad, a.is_one()) {
                (1, _) => fmt_rational(&a),
                (r, true) => format!("√{r}"),
                (r, false) => format!("{}√{r}", fmt_rational(&a)),
            };
            if i == 0 {
                inner = if neg { format!("-{body}") } else { body };
            } else {
                inner.push_str(if neg { " - " } else { " + " });
                inner.push_str(&body);
            }
        }
        if single || content.is_one() {
            Some(inner)
        } else {
            Some(format!("{}({inner})", fmt_rational(&content)))
        }
    }

    /// Radical form when available, the `b`-polynomial otherwise.
    pub fn to_exact_string(&self) -> String {
        self.to_radical().unwrap_or_else(|| self.to_bpoly())
    }
}

#[cfg(test)]
mod tests {
    use crate::exactnum::{qint, CycReal};

    #[test]
    fn bpoly_strings() {
        let b = CycReal::beta(12).unwrap();
        let x = &CycReal::one(12).unwrap() + &(&(&b * &b) * &CycReal::from_int(12, 2).unwrap());
        assert_eq!(x.to_bpoly(), "1 + 2*b^2");
        assert_eq!(CycReal::zero(5).unwrap().to_bpoly(), "0");
        assert_eq!((-&b).to_bpoly(), "-b");
    }

    #[test]
    fn radical_strings() {
        assert_eq!(qint(7, 12).unwrap().to_radical().unwrap(), "2 + √3");
        let e5 = &CycReal::from_int(8, 12).unwrap()
            * &(&CycReal::from_int(8, 2).unwrap() + &CycReal::two_cos(2, 8).unwrap());
        assert_eq!(e5.to_radical().unwrap(), "12(2 + √2)");
        assert_eq!(CycReal::from_int(9, 36).unwrap().to_radical().unwrap(), "36");
        assert_eq!(qint(2, 12).unwrap().to_radical().unwrap(), "1/2(√2 + √6)");
        assert!(qint(2, 7).unwrap().to_radical().is_none());
        assert_eq!(qint(3, 10).unwrap().to_radical().unwrap(), "1/2(3 + √5)");
    }

    #[test]
    fn decimals() {
        assert_eq!(qint(7, 12).unwrap().to_decimal(3), "3.732");
    }
}
