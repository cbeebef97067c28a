//! Polynomials over F_p with p below 2^32, and distinct-degree factorization.

use super::Polynomial;

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv(a: u64, p: u64) -> u64 {
    pow_u(a, p - 2, p)
}

fn pow_u(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Fp {
    let dm = m.len() - 1;
    let li = inv(m[dm], p);
    let mut r = a.to_vec();
    while r.len() > dm {
        let k = r.len() - 1;
        let q = mulm(r[k], li, p);
        if q != 0 {
            for i in 0..=dm {
                let sub = mulm(q, m[i], p);
                let idx = k - dm + i;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

fn divexact(a: &[u64], m: &[u64], p: u64) -> Fp {
    let dm = m.len() - 1;
    let li = inv(m[dm], p);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - dm];
    while r.len() > dm {
        let k = r.len() - 1;
        let c = mulm(r[k], li, p);
        q[k - dm] = c;
        for i in 0..=dm {
            let sub = mulm(c, m[i], p);
            let idx = k - dm + i;
            r[idx] = (r[idx] + p - sub) % p;
        }
        r.pop();
    }
    trim(q)
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulm(x, y, p)) % p;
        }
    }
    rem(&trim(out), m, p)
}

fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Fp {
    let mut r = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(&r, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    r
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let li = inv(l, p);
        for c in a.iter_mut() {
            *c = mulm(*c, li, p);
        }
    }
    a
}

fn derivative(a: &[u64], p: u64) -> Fp {
    trim(a.iter().enumerate().skip(1).map(|(k, &c)| mulm(c, k as u64 % p, p)).collect())
}

pub fn reduce(f: &Polynomial, p: u64) -> Fp {
    trim(f.coeffs().iter().map(|c| c.mod_u(p as u32) as u64).collect())
}

/// Degrees of the irreducible factors of f mod p, ascending, or `None`
/// when p divides the leading coefficient or f mod p is not squarefree.
pub fn factor_degrees_mod_p(f: &Polynomial, p: u64) -> Option<Vec<usize>> {
    assert!(p >= 2 && p < (1 << 32), "prime out of supported range");
    let mut g = reduce(f, p);
    if g.len() != f.coeffs().len() {
        return None;
    }
    let d = derivative(&g, p);
    if d.is_empty() || gcd(&g, &d, p).len() != 1 {
        return None;
    }
    let x = vec![0u64, 1];
    let mut h = rem(&x, &g, p);
    let mut degrees = vec![];
    let mut k = 1usize;
    while g.len() - 1 >= 2 * k {
        h = powmod(&h, p, &g, p);
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = (hx[1] + p - 1) % p;
        let c = gcd(&trim(hx), &g, p);
        let dc = c.len() - 1;
        if dc > 0 {
            degrees.extend(std::iter::repeat(k).take(dc / k));
            g = divexact(&g, &c, p);
            h = rem(&h, &g, p);
        }
        k += 1;
    }
    if g.len() > 1 {
        degrees.push(g.len() - 1);
    }
    degrees.sort_unstable();
    Some(degrees)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn first_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&n| is_prime(n)).take(count).collect()
}

/// The first `count` primes for which f mod p is squarefree of full degree.
pub fn usable_primes(f: &Polynomial, count: usize) -> Vec<u64> {
    (2u64..)
        .filter(|&n| is_prime(n))
        .filter(|&p| factor_degrees_mod_p(f, p).is_some())
        .take(count)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x4_minus_1_mod_5_splits() {
        let f = Polynomial::from_i64(&[-1, 0, 0, 0, 1]).unwrap();
        assert_eq!(factor_degrees_mod_p(&f, 5), Some(vec![1, 1, 1, 1]));
        // mod 3: (x-1)(x+1)(x^2+1)
        assert_eq!(factor_degrees_mod_p(&f, 3), Some(vec![1, 1, 2]));
        assert_eq!(factor_degrees_mod_p(&f, 2), None);
    }

    #[test]
    fn plastic_mod_small_primes() {
        let f = Polynomial::from_i64(&[-1, -1, 0, 1]).unwrap();
        // x^3 - x - 1 is irreducible mod 2 and mod 3
        assert_eq!(factor_degrees_mod_p(&f, 2), Some(vec![3]));
        assert_eq!(factor_degrees_mod_p(&f, 3), Some(vec![3]));
        // mod 5: 2 is a root, quotient x^2 + 2x + 3 is irreducible
        assert_eq!(factor_degrees_mod_p(&f, 5), Some(vec![1, 2]));
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
    }
}
