//! Distinct-degree factorisation over small prime fields, used only to rule
//! out factor degrees.

use super::DensePolynomial;
use crate::arith::mod_floor_u64;

type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn make_monic(a: Fp, p: u64) -> Fp {
    let Some(&lead) = a.last() else { return a };
    let li = inv(lead, p);
    a.into_iter().map(|c| c * li % p).collect()
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Fp {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let li = inv(b[db], p);
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let q = top * li % p;
            let shift = r.len() - 1 - db;
            for (j, &c) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - q * c % p) % p;
            }
        }
        r.pop();
    }
    trim(r)
}

fn div(a: &[u64], b: &[u64], p: u64) -> Fp {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let li = inv(b[db], p);
    let mut q = vec![0u64; a.len().saturating_sub(db)];
    while r.len() > db {
        let top = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if top != 0 {
            let c = top * li % p;
            q[shift] = c;
            for (j, &bc) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - c * bc % p) % p;
            }
        }
        r.pop();
    }
    trim(q)
}

fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&trim(out), m, p)
}

fn pow_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Fp {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, m, p);
        }
        b = mul_mod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(a, p)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn reduce(f: &DensePolynomial, p: u64) -> Fp {
    trim(f.coefficients().iter().map(|c| mod_floor_u64(c, p)).collect())
}

/// Degrees of the irreducible factors of `f` mod `p`, or `None` when `p` divides
/// the leading coefficient or `f` is not squarefree mod `p`.
pub fn degree_pattern(f: &DensePolynomial, p: u64) -> Option<Vec<usize>> {
    let n = f.degree()?;
    let lead = f.leading()?;
    if mod_floor_u64(lead, p) == 0 {
        return None;
    }
    let fp = make_monic(reduce(f, p), p);
    let dfp = {
        let d = f.derivative();
        reduce(&d, p)
    };
    if dfp.is_empty() || gcd(&fp, &dfp, p).len() > 1 {
        return None;
    }
    let x = vec![0, 1];
    let mut rest = fp;
    let mut h = x.clone();
    let mut degrees = Vec::new();
    let mut i = 1;
    while rest.len() > 1 {
        if rest.len() - 1 < 2 * i {
            degrees.push(rest.len() - 1);
            break;
        }
        h = pow_poly(&h, p, &rest, p);
        let g = gcd(&rest, &sub(&h, &x, p), p);
        let dg = g.len() - 1;
        if dg > 0 {
            degrees.extend(std::iter::repeat_n(i, dg / i));
            rest = div(&rest, &g, p);
            h = rem(&h, &rest, p);
        }
        i += 1;
    }
    debug_assert_eq!(degrees.iter().sum::<usize>(), n);
    Some(degrees)
}

/// Degrees `d` in `1..=deg-1` that a rational factor of `f` could have, judged
/// by factorisation patterns modulo the first `primes` usable primes.
pub fn admissible_factor_degrees(f: &DensePolynomial, primes: usize) -> Vec<usize> {
    let n = f.degree().unwrap_or(0);
    let mut allowed = vec![true; n + 1];
    let mut used = 0;
    for p in small_primes() {
        if used >= primes {
            break;
        }
        let Some(pattern) = degree_pattern(f, p) else { continue };
        used += 1;
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in pattern {
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for (a, s) in allowed.iter_mut().zip(&sums) {
            *a &= *s;
        }
    }
    (1..n).filter(|&d| allowed[d]).collect()
}

fn small_primes() -> impl Iterator<Item = u64> {
    (2u64..2000).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Irreducible modulo some small prime not dividing the leading coefficient.
pub fn irreducible_mod_some_prime(f: &DensePolynomial, primes: usize) -> Option<u64> {
    let n = f.degree()?;
    small_primes()
        .filter_map(|p| degree_pattern(f, p).map(|d| (p, d)))
        .take(primes)
        .find(|(_, d)| d.as_slice() == [n])
        .map(|(p, _)| p)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patterns() {
        // x^2 + 1 splits mod 5, stays irreducible mod 3
        let f = DensePolynomial::from_i64(&[1, 0, 1]);
        assert_eq!(degree_pattern(&f, 5), Some(vec![1, 1]));
        assert_eq!(degree_pattern(&f, 3), Some(vec![2]));
        assert_eq!(degree_pattern(&f, 2), None);
        // (x^2 - 11)(x^2 - 13): every admissible set contains 2
        let g = DensePolynomial::from_i64(&[143, 0, -24, 0, 1]);
        assert!(admissible_factor_degrees(&g, 8).contains(&2));
        // x^4 + 1 is reducible mod every prime but irreducible over Q
        let h = DensePolynomial::from_i64(&[1, 0, 0, 0, 1]);
        assert_eq!(irreducible_mod_some_prime(&h, 20), None);
        assert_eq!(irreducible_mod_some_prime(&f, 20), Some(3));
    }
}
