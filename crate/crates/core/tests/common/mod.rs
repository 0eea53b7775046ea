//! Brute-force oracles that share no code with the library's arithmetic.
//!
//! Field elements are handled by their canonical encodings: little-endian
//! base-p digits of a polynomial reduced modulo the field's monic modulus.
#![allow(dead_code)]

use rainbow_core::coloring::Coloring;
use rainbow_core::field::FieldSpec;

/// Schoolbook arithmetic on encodings.
pub struct Oracle {
    pub p: u64,
    pub k: usize,
    pub q: u64,
    modulus: Vec<u64>,
}

impl Oracle {
    pub fn new(field: &FieldSpec) -> Oracle {
        Oracle {
            p: field.p(),
            k: field.k() as usize,
            q: field.q(),
            modulus: field.modulus().to_vec(),
        }
    }

    fn digits(&self, mut x: u64) -> Vec<u64> {
        (0..self.k)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, x: u64, y: u64) -> u64 {
        let (a, b) = (self.digits(x), self.digits(y));
        let s: Vec<u64> = a.iter().zip(&b).map(|(u, v)| (u + v) % self.p).collect();
        self.undigits(&s)
    }

    pub fn neg(&self, x: u64) -> u64 {
        let s: Vec<u64> = self
            .digits(x)
            .iter()
            .map(|&u| (self.p - u) % self.p)
            .collect();
        self.undigits(&s)
    }

    pub fn sub(&self, x: u64, y: u64) -> u64 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u64, y: u64) -> u64 {
        if self.k == 1 {
            return (x as u128 * y as u128 % self.p as u128) as u64;
        }
        let (a, b) = (self.digits(x), self.digits(y));
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, &u) in a.iter().enumerate() {
            for (j, &v) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u * v) % self.p;
            }
        }
        // reduce with x^k = -(c0 + c1 x + ... + c_{k-1} x^{k-1})
        for top in (self.k..prod.len()).rev() {
            let lead = prod[top];
            if lead == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..self.k {
                let shift = top - self.k + i;
                prod[shift] =
                    (prod[shift] + self.p * self.p - lead * self.modulus[i] % self.p) % self.p;
            }
        }
        self.undigits(&prod[..self.k])
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// (x1 - y1)^2 + (x2 - y2)^2 on point indices `x1 * q + x2`.
    pub fn distance(&self, x: u64, y: u64) -> u64 {
        let d1 = self.sub(x / self.q, y / self.q);
        let d2 = self.sub(x % self.q, y % self.q);
        self.add(self.mul(d1, d1), self.mul(d2, d2))
    }

    /// All (a, b) with a^2 + b^2 = 1, by scanning the whole plane.
    pub fn circle(&self) -> Vec<(u64, u64)> {
        let squares: Vec<u64> = (0..self.q).map(|a| self.mul(a, a)).collect();
        let mut out = Vec::new();
        for a in 0..self.q {
            for b in 0..self.q {
                if self.add(squares[a as usize], squares[b as usize]) == 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Unit-distance adjacency over all q^2 points.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let circle = self.circle();
        let n = self.q * self.q;
        (0..n)
            .map(|x| {
                let mut nb: Vec<u32> = circle
                    .iter()
                    .map(|&(a, b)| {
                        (self.add(x / self.q, a) * self.q + self.add(x % self.q, b)) as u32
                    })
                    .collect();
                nb.sort_unstable();
                nb
            })
            .collect()
    }

    /// Every unordered triple of pairwise unit-distance points, sorted.
    pub fn triangles(&self) -> Vec<[u32; 3]> {
        let adj = self.adjacency();
        let n = adj.len();
        let mut is_adj = vec![false; n * n];
        for (x, nb) in adj.iter().enumerate() {
            for &y in nb {
                is_adj[x * n + y as usize] = true;
            }
        }
        let mut out = Vec::new();
        for x in 0..n {
            for &y in adj[x].iter().filter(|&&y| y as usize > x) {
                for &z in adj[y as usize].iter().filter(|&&z| z > y) {
                    if is_adj[x * n + z as usize] {
                        out.push([x as u32, y, z]);
                    }
                }
            }
        }
        out
    }

    /// Triangles whose three vertices all have different colors.
    pub fn rainbow_triangles(&self, c: &Coloring) -> Vec<[u32; 3]> {
        self.triangles()
            .into_iter()
            .filter(|t| {
                let [a, b, d] = t.map(|i| c.color_of(i));
                a != b && b != d && a != d
            })
            .collect()
    }

    /// Unordered unit pairs whose endpoints share a color.
    pub fn mono_pairs(&self, c: &Coloring) -> u64 {
        let adj = self.adjacency();
        let mut count = 0;
        for (x, nb) in adj.iter().enumerate() {
            for &y in nb.iter().filter(|&&y| y as usize > x) {
                if c.color_of(x as u32) == c.color_of(y) {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn is_square(&self, x: u64) -> bool {
        (0..self.q).any(|a| self.mul(a, a) == x)
    }
}

/// Primes in [lo, hi].
pub fn primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi)
        .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

/// Coloring with the given class sizes, colors numbered in order.
pub fn by_sizes(sizes: &[usize]) -> Coloring {
    let mut assignment = Vec::new();
    for (color, &n) in sizes.iter().enumerate() {
        assignment.extend(std::iter::repeat_n(color as u32, n));
    }
    Coloring::from_assignment(assignment).unwrap()
}

/// Classes as sorted member sets, independent of color ids.
pub fn blocks(c: &Coloring) -> Vec<Vec<u32>> {
    let mut b: Vec<Vec<u32>> = c.classes().iter().map(|cls| cls.members.clone()).collect();
    b.sort();
    b
}

/// Every block of `fine` lies inside one block of `coarse`.
pub fn refines_oracle(fine: &Coloring, coarse: &Coloring) -> bool {
    blocks(fine).iter().all(|b| {
        let target = coarse.color_of(b[0]);
        b.iter().all(|&x| coarse.color_of(x) == target)
    })
}

/// Seeded class-size profiles of three shapes: geometric decay, uniform
/// sizes, and a few huge classes next to many tiny ones.
pub fn size_profile(seed: u64) -> Vec<usize> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let classes = rng.gen_range(1..=60);
    match seed % 3 {
        0 => {
            let ratio = rng.gen_range(0.3..0.95);
            let top = rng.gen_range(50.0..5000.0);
            (0..classes)
                .map(|i| ((top * f64::powi(ratio, i)) as usize).max(1))
                .collect()
        }
        1 => (0..classes).map(|_| rng.gen_range(1..=200)).collect(),
        _ => {
            let big = rng.gen_range(1..=4);
            let mut sizes: Vec<usize> = (0..big).map(|_| rng.gen_range(500..=3000)).collect();
            sizes.extend((0..classes).map(|_| rng.gen_range(1..=5)));
            sizes
        }
    }
}

/// Shuffled assignment with the given class sizes.
pub fn shuffled(sizes: &[usize], seed: u64) -> Coloring {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = by_sizes(sizes).assignment().to_vec();
    assignment.shuffle(&mut rng);
    Coloring::from_assignment(assignment).unwrap()
}
