//! Dense polynomials over a prime field F_p, little-endian coefficient vectors.
//!
//! Only what the extension-field code needs: multiplication, remainder by a
//! monic polynomial, gcd, and the distinct-degree irreducibility test.

use rand::Rng;

#[inline]
pub(crate) fn mul_mod_p(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod_p(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod_p(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub(crate) fn pow_mod_p(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_p(acc, base, p);
        }
        base = mul_mod_p(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue by Fermat.
pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod_p(a, p - 2, p)
}

pub(crate) fn trim(poly: &mut Vec<u64>) {
    while poly.last() == Some(&0) {
        poly.pop();
    }
}

/// Degree of a trimmed polynomial; `None` for the zero polynomial.
pub(crate) fn degree(poly: &[u64]) -> Option<usize> {
    poly.iter().rposition(|&c| c != 0)
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = add_mod_p(out[i + j], mul_mod_p(ai, bj, p), p);
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo a nonzero divisor (leading coefficient need not be 1).
pub(crate) fn rem(a: &[u64], divisor: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let d = degree(divisor).expect("division by the zero polynomial");
    let lead_inv = inv_mod_p(divisor[d], p);
    while let Some(dr) = degree(&r) {
        if dr < d {
            break;
        }
        let factor = mul_mod_p(r[dr], lead_inv, p);
        let shift = dr - d;
        for (i, &c) in divisor[..=d].iter().enumerate() {
            r[shift + i] = sub_mod_p(r[shift + i], mul_mod_p(factor, c, p), p);
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn mul_rem(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), modulus, p)
}

fn pow_rem(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, modulus, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &b, modulus, p);
        }
        b = mul_rem(&b, &b, modulus, p);
        exp >>= 1;
    }
    acc
}

/// Distinct-degree test: a monic `f` of degree k is irreducible over F_p iff
/// gcd(f, x^{p^i} - x) = 1 for every 1 <= i <= k/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let k = match degree(f) {
        Some(d) => d,
        None => return false,
    };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut frob = x.clone();
    for _ in 1..=k / 2 {
        frob = pow_rem(&frob, p, f, p);
        let mut diff = frob.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = sub_mod_p(diff[1], 1, p);
        trim(&mut diff);
        let g = gcd(f, &diff, p);
        if degree(&g).is_some_and(|d| d > 0) {
            return false;
        }
    }
    true
}

/// Draws random monic degree-`k` polynomials until one is irreducible.
pub(crate) fn random_irreducible<R: Rng>(p: u64, k: usize, rng: &mut R) -> Vec<u64> {
    loop {
        let mut f: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn has_root(f: &[u64], p: u64) -> bool {
        (0..p).any(|x| {
            f.iter()
                .rev()
                .fold(0u64, |acc, &c| add_mod_p(mul_mod_p(acc, x, p), c, p))
                == 0
        })
    }

    #[test]
    fn quadratics_irreducible_iff_rootless() {
        for p in [5u64, 7, 11] {
            for c0 in 0..p {
                for c1 in 0..p {
                    let f = [c0, c1, 1];
                    assert_eq!(is_irreducible(&f, p), !has_root(&f, p), "p={p} f={f:?}");
                }
            }
        }
    }

    #[test]
    fn product_of_quadratics_is_reducible() {
        // x^2 + 2 is irreducible over F_5; its square is a reducible quartic with no roots.
        let q = [2u64, 0, 1];
        let f = mul(&q, &q, 5);
        assert!(!has_root(&f, 5));
        assert!(!is_irreducible(&f, 5));
    }

    #[test]
    fn gcd_finds_common_factor() {
        // (x - 1)(x - 2) and (x - 1)(x - 3) over F_7
        let a = mul(&[6, 1], &[5, 1], 7);
        let b = mul(&[6, 1], &[4, 1], 7);
        let g = gcd(&a, &b, 7);
        assert_eq!(degree(&g), Some(1));
        // g is a scalar multiple of x - 1
        assert_eq!(mul_mod_p(g[0], inv_mod_p(g[1], 7), 7), 6);
    }
}
