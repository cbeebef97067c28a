use std::fmt;

use rug::{Integer, Rational};

use super::PolyError;

/// Monic integer polynomial, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Integer>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Integer>) -> Result<Self, PolyError> {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(PolyError::DegreeTooSmall);
        }
        if *coeffs.last().unwrap() != 1 {
            return Err(PolyError::NonMonic(coeffs.last().unwrap().to_string()));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, PolyError> {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    /// Parses ascending coefficients given as decimal integer strings.
    pub fn parse<S: AsRef<str>>(coeffs: &[S]) -> Result<Self, PolyError> {
        let mut out = Vec::with_capacity(coeffs.len());
        for c in coeffs {
            let c = c.as_ref().trim();
            let v = Integer::from_str_radix(c, 10)
                .map_err(|_| PolyError::Parse(format!("not an integer coefficient: {c:?}")))?;
            out.push(v);
        }
        Self::new(out)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn rational_coeffs(&self) -> Vec<Rational> {
        self.coeffs.iter().map(|c| Rational::from(c)).collect()
    }

    /// Largest |coefficient| in absolute value, as f64.
    pub fn height(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let a = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = a != 1 || k == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Dense polynomial over Q, ascending, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(pub Vec<Rational>);

impl RatPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| *x == 0) {
            c.pop();
        }
        RatPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * Integer::from(k)))
                .collect(),
        )
    }

    pub fn rem(&self, m: &RatPoly) -> RatPoly {
        let dm = m.degree().expect("division by zero polynomial");
        let lead = m.0[dm].clone();
        let mut r = self.0.clone();
        while r.len() > dm && !r.is_empty() {
            let k = r.len() - 1;
            if r[k] != 0 {
                let q = Rational::from(&r[k] / &lead);
                let shift = k - dm;
                for (i, mc) in m.0.iter().enumerate() {
                    r[shift + i] -= Rational::from(&q * mc);
                }
            }
            r.pop();
            while r.last().is_some_and(|x| *x == 0) {
                r.pop();
            }
        }
        RatPoly::new(r)
    }

    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if let Some(d) = a.degree() {
            let lead = a.0[d].clone();
            for c in a.0.iter_mut() {
                *c /= &lead;
            }
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_monic_and_constants() {
        assert!(matches!(Polynomial::from_i64(&[1, 2]), Err(PolyError::NonMonic(_))));
        assert!(matches!(Polynomial::from_i64(&[5]), Err(PolyError::DegreeTooSmall)));
        assert!(matches!(Polynomial::parse(&["1", "x"]), Err(PolyError::Parse(_))));
    }

    #[test]
    fn display_is_readable() {
        let f = Polynomial::from_i64(&[-1, -1, 0, 1]).unwrap();
        assert_eq!(f.to_string(), "x^3 - x - 1");
    }

    #[test]
    fn rational_gcd() {
        let q = |v: &[i64]| RatPoly::new(v.iter().map(|&x| Rational::from(x)).collect());
        // (x-1)(x+2) and (x-1)(x-3)
        let g = q(&[-2, 1, 1]).gcd(&q(&[3, -4, 1]));
        assert_eq!(g, q(&[-1, 1]));
    }
}
