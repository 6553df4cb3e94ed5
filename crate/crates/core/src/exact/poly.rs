use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::matrix::{Rational, RationalMatrix};
use crate::error::{Error, Result};
use crate::float::{eigenvalues, ComplexMatrix};

/// Monic characteristic polynomial, coefficients from `λⁿ` down to `λ⁰`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    coefficients: Vec<Rational>,
}

impl CharPoly {
    /// Wraps descending coefficients. The leading one must be 1.
    pub fn new(coefficients: Vec<Rational>) -> Result<Self> {
        match coefficients.first() {
            Some(c) if c.is_one() => Ok(Self { coefficients }),
            _ => Err(Error::InvalidConfig(
                "characteristic polynomial must be monic".into(),
            )),
        }
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coefficients
            .iter()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

/// `det(λI − M)` by the Faddeev–LeVerrier recurrence.
///
/// With `N₀ = 0`, `cₙ = 1`: `Nₖ = M·Nₖ₋₁ + cₙ₋ₖ₊₁·I` and `cₙ₋ₖ = −tr(M·Nₖ)/k`.
/// Every division is by an integer, so the recurrence is exact over ℚ.
pub fn charpoly(m: &RationalMatrix) -> Result<CharPoly> {
    let n = m.require_square()?;
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(Rational::one());
    let mut aux = RationalMatrix::zeros(n, n);
    let ident = RationalMatrix::identity(n);
    for k in 1..=n {
        let prev = coeffs.last().expect("seeded").clone();
        aux = &(m * &aux) + &ident.scale(&prev);
        let t = (m * &aux).trace();
        coeffs.push(-t / Rational::from_integer(BigInt::from(k)));
    }
    CharPoly::new(coeffs)
}

// Dense polynomials below are ascending: a[0] + a[1] x + ...

fn trim(mut a: Vec<Rational>) -> Vec<Rational> {
    while a.len() > 1 && a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn is_zero_poly(a: &[Rational]) -> bool {
    a.iter().all(Zero::is_zero)
}

fn eval_asc(a: &[Rational], x: &Rational) -> Rational {
    a.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn derivative(a: &[Rational]) -> Vec<Rational> {
    if a.len() <= 1 {
        return vec![Rational::zero()];
    }
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
        .collect()
}

fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let lead = b.last().expect("non-empty divisor").clone();
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !is_zero_poly(&r) {
        let shift = r.len() - b.len();
        let f = r.last().expect("non-empty") / &lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= c * &f;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(Rational::zero());
        }
    }
    (trim(q), r)
}

fn monic(a: Vec<Rational>) -> Vec<Rational> {
    let lead = a.last().expect("non-empty").clone();
    a.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !is_zero_poly(&y) {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

/// Scales to integer coefficients with content 1; returns the leading coefficient.
fn primitive_leading(a: &[Rational]) -> BigInt {
    let lcm = a.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = a
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let lead = ints.last().expect("non-empty").clone();
    if content.is_zero() {
        lead
    } else {
        (lead / content).abs()
    }
}

/// Companion-matrix eigenvalues of a monic real polynomial (ascending coefficients).
fn approximate_roots(monic_asc: &[Rational]) -> Vec<(f64, f64)> {
    let d = monic_asc.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let mut data = vec![0.0; d * d];
    for i in 1..d {
        data[i * d + (i - 1)] = 1.0;
    }
    for (j, c) in monic_asc[..d].iter().enumerate() {
        data[j * d + (d - 1)] = -c.to_f64().unwrap_or(f64::NAN);
    }
    if data.iter().any(|v| !v.is_finite()) {
        return Vec::new();
    }
    let Ok(comp) = ComplexMatrix::from_real(d, d, &data) else {
        return Vec::new();
    };
    match eigenvalues(&comp) {
        Ok(ev) => ev.into_iter().map(|z| (z.re, z.im)).collect(),
        Err(_) => Vec::new(),
    }
}

fn newton_polish(a: &[Rational], x0: f64) -> f64 {
    let coeffs: Vec<f64> = a.iter().map(|c| c.to_f64().unwrap_or(0.0)).collect();
    let mut x = x0;
    for _ in 0..4 {
        let (mut p, mut dp) = (0.0, 0.0);
        for c in coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        if dp == 0.0 || !dp.is_finite() || !p.is_finite() {
            break;
        }
        let next = x - p / dp;
        if !next.is_finite() {
            break;
        }
        x = next;
    }
    x
}

/// Complete factorization over ℚ as `(root, multiplicity)`, roots ascending.
///
/// Candidate roots come from a floating approximation of the square-free part;
/// every accepted root is confirmed by exact evaluation and divided out exactly.
/// If the confirmed multiplicities do not account for the full degree the
/// spectrum is reported as irrational.
pub fn rational_roots(p: &CharPoly) -> Result<Vec<(Rational, usize)>> {
    let mut rest: Vec<Rational> = p.coefficients().iter().rev().cloned().collect();
    let degree = rest.len() - 1;
    let mut roots: Vec<(Rational, usize)> = Vec::new();

    let zeros = rest.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push((Rational::zero(), zeros));
        rest.drain(..zeros);
    }

    if rest.len() > 1 {
        let squarefree = {
            let g = gcd(&rest, &derivative(&rest));
            monic(divrem(&rest, &g).0)
        };
        let lead = primitive_leading(&squarefree);
        let lead_f = lead.to_f64().unwrap_or(f64::INFINITY);
        for (re, im) in approximate_roots(&squarefree) {
            if im.abs() > 1e-6 * re.abs().max(1.0) {
                continue;
            }
            let x = newton_polish(&squarefree, re);
            let center = (x * lead_f).round();
            if !center.is_finite() {
                continue;
            }
            for delta in [0.0, -1.0, 1.0] {
                let Some(num) = BigInt::from_f64(center + delta) else {
                    continue;
                };
                let cand = Rational::new(num, lead.clone());
                if roots.iter().any(|(r, _)| *r == cand) {
                    continue;
                }
                if !eval_asc(&squarefree, &cand).is_zero() {
                    continue;
                }
                let linear = vec![-cand.clone(), Rational::one()];
                let mut mult = 0;
                loop {
                    let (q, r) = divrem(&rest, &linear);
                    if !is_zero_poly(&r) {
                        break;
                    }
                    rest = q;
                    mult += 1;
                }
                roots.push((cand, mult));
                break;
            }
        }
    }

    let found: usize = roots.iter().map(|(_, m)| m).sum();
    if found != degree {
        return Err(Error::IrrationalSpectrum);
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::{rat, ratio};

    fn poly(desc: &[i64]) -> CharPoly {
        CharPoly::new(desc.iter().map(|&c| rat(c)).collect()).unwrap()
    }

    #[test]
    fn charpoly_of_worked_nilpotent_is_cubic_monomial() {
        let a = RationalMatrix::from_i64_rows(&[[4, -1, 2], [7, -2, 3], [-4, 1, -2]]);
        assert_eq!(charpoly(&a).unwrap(), poly(&[1, 0, 0, 0]));
        let j = RationalMatrix::from_i64_rows(&[[0, 1, 0], [0, 0, 1], [0, 0, 0]]);
        assert_eq!(charpoly(&j).unwrap(), poly(&[1, 0, 0, 0]));
    }

    #[test]
    fn charpoly_of_diagonal() {
        let d = RationalMatrix::diag(&[rat(2), rat(3)]);
        assert_eq!(charpoly(&d).unwrap(), poly(&[1, -5, 6]));
        assert!(charpoly(&RationalMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn roots_of_simple_polynomials() {
        assert_eq!(
            rational_roots(&poly(&[1, 0, 0, 0])).unwrap(),
            vec![(rat(0), 3)]
        );
        assert_eq!(
            rational_roots(&poly(&[1, -5, 6])).unwrap(),
            vec![(rat(2), 1), (rat(3), 1)]
        );
        assert_eq!(
            rational_roots(&poly(&[1, 0, -2])),
            Err(Error::IrrationalSpectrum)
        );
        assert_eq!(
            rational_roots(&poly(&[1, 0, 1])),
            Err(Error::IrrationalSpectrum)
        );
    }

    #[test]
    fn roots_with_fractions_and_multiplicity() {
        // (x - 1/2)^2 (x + 3) = x^3 + 2x^2 - 11/4 x + 3/4
        let p = CharPoly::new(vec![rat(1), rat(2), ratio(-11, 4), ratio(3, 4)]).unwrap();
        assert_eq!(
            rational_roots(&p).unwrap(),
            vec![(rat(-3), 1), (ratio(1, 2), 2)]
        );
        // (x - 2)^4 x
        let p = poly(&[1, -8, 24, -32, 16, 0]);
        assert_eq!(rational_roots(&p).unwrap(), vec![(rat(0), 1), (rat(2), 4)]);
    }

    #[test]
    fn polynomial_gcd() {
        let a = vec![rat(-1), rat(0), rat(1)]; // x^2 - 1
        let b = vec![rat(1), rat(1)]; // x + 1
        assert_eq!(gcd(&a, &b), vec![rat(1), rat(1)]);
        assert_eq!(eval_asc(&a, &rat(3)), rat(8));
    }
}
