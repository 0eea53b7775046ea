//! Exact arithmetic in F_q, q = p^k, for odd primes p >= 5.
//!
//! Elements are polynomials of degree < k over F_p reduced modulo a monic
//! irreducible polynomial. The canonical integer encoding of an element is its
//! coefficient list read as little-endian base-p digits, so for prime fields
//! the encoding is simply the residue.

mod poly;
mod sqrt;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use sqrt::SquareRoots;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is not supported; p must be at least 5")]
    CharacteristicTooSmall(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus must be monic of degree {degree} with coefficients below {p}")]
    MalformedModulus { p: u64, degree: u32 },
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("field order {p}^{k} is too large")]
    TooLarge { p: u64, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("encoding {value} is outside [0, {q})")]
    EncodingOutOfRange { value: u64, q: u64 },
    #[error("expected {expected} coefficients, got {got}")]
    WrongLength { expected: usize, got: usize },
}

struct FieldInner {
    p: u64,
    k: u32,
    /// Monic, length k + 1. For k = 1 this is the unused sentinel `x`.
    modulus: Vec<u64>,
    q: u64,
    non_residue: OnceLock<Option<FieldElement>>,
}

/// A finite field F_{p^k}. Cheap to clone; clones share one allocation.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Builds and validates a field.
///
/// For k > 1 without an explicit modulus, an irreducible monic polynomial is
/// found by random search driven by a ChaCha8 stream seeded with `seed`, so
/// the same `(p, k, seed)` always yields the same field.
pub fn make_field(
    p: u64,
    k: u32,
    modulus: Option<&[u64]>,
    seed: u64,
) -> Result<FieldSpec, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p < 5 {
        return Err(FieldError::CharacteristicTooSmall(p));
    }
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    // products of two coefficients go through u128, but encodings and point
    // indices are kept in u64
    if p > u32::MAX as u64 {
        return Err(FieldError::TooLarge { p, k });
    }
    let q = p.checked_pow(k).ok_or(FieldError::TooLarge { p, k })?;
    q.checked_mul(q).ok_or(FieldError::TooLarge { p, k })?;

    let modulus = match modulus {
        Some(m) => {
            let well_formed =
                m.len() == k as usize + 1 && m[k as usize] == 1 && m.iter().all(|&c| c < p);
            if !well_formed {
                return Err(FieldError::MalformedModulus { p, degree: k });
            }
            if k > 1 && !poly::is_irreducible(m, p) {
                return Err(FieldError::ReducibleModulus { p });
            }
            m.to_vec()
        }
        None if k == 1 => vec![0, 1],
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            poly::random_irreducible(p, k as usize, &mut rng)
        }
    };
    Ok(FieldSpec(Arc::new(FieldInner {
        p,
        k,
        modulus,
        q,
        non_residue: OnceLock::new(),
    })))
}

/// Shorthand for the prime field F_p.
pub fn prime_field(p: u64) -> Result<FieldSpec, FieldError> {
    make_field(p, 1, None, 0)
}

impl FieldSpec {
    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    /// The reduction polynomial, monic, little-endian (length k + 1).
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![0; self.0.k as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.0.p as i64;
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(p) as u64;
        e
    }

    /// Element from little-endian coefficients, each in [0, p).
    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.0.k as usize {
            return Err(FieldError::WrongLength {
                expected: self.0.k as usize,
                got: coeffs.len(),
            });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= self.0.p) {
            return Err(FieldError::EncodingOutOfRange {
                value: bad,
                q: self.0.p,
            });
        }
        Ok(FieldElement {
            field: self.clone(),
            coeffs: coeffs.to_vec(),
        })
    }

    /// Inverse of [`FieldElement::encode`].
    pub fn decode(&self, mut value: u64) -> Result<FieldElement, FieldError> {
        if value >= self.0.q {
            return Err(FieldError::EncodingOutOfRange { value, q: self.0.q });
        }
        let p = self.0.p;
        let coeffs = (0..self.0.k)
            .map(|_| {
                let c = value % p;
                value /= p;
                c
            })
            .collect();
        Ok(FieldElement {
            field: self.clone(),
            coeffs,
        })
    }

    /// All q elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |v| self.decode(v).expect("encoding in range"))
    }

    /// Smallest-encoding quadratic non-residue, used by Tonelli-Shanks.
    pub(crate) fn non_residue(&self) -> Option<&FieldElement> {
        self.0
            .non_residue
            .get_or_init(|| self.elements().find(|e| e.quadratic_character() == -1))
            .as_ref()
    }

    /// `field p=<p> k=<k> [modulus=<c0,...,ck>]`
    pub fn header(&self) -> String {
        if self.0.k == 1 {
            format!("field p={} k=1", self.0.p)
        } else {
            let coeffs: Vec<String> = self.0.modulus.iter().map(u64::to_string).collect();
            format!(
                "field p={} k={} modulus={}",
                self.0.p,
                self.0.k,
                coeffs.join(",")
            )
        }
    }

    /// Parses a line written by [`FieldSpec::header`].
    pub fn parse_header(line: &str) -> Result<FieldSpec, HeaderError> {
        let mut words = line.split_whitespace();
        if words.next() != Some("field") {
            return Err(HeaderError::Syntax("expected `field`".into()));
        }
        let (mut p, mut k, mut modulus) = (None, 1u32, None);
        for word in words {
            let (key, value) = word
                .split_once('=')
                .ok_or_else(|| HeaderError::Syntax(format!("expected key=value, got `{word}`")))?;
            let bad = || HeaderError::Syntax(format!("bad value for `{key}`: `{value}`"));
            match key {
                "p" => p = Some(value.parse::<u64>().map_err(|_| bad())?),
                "k" => k = value.parse::<u32>().map_err(|_| bad())?,
                "modulus" => {
                    let coeffs = value
                        .split(',')
                        .map(|c| c.trim().parse::<u64>())
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|_| bad())?;
                    modulus = Some(coeffs);
                }
                _ => return Err(HeaderError::Syntax(format!("unknown key `{key}`"))),
            }
        }
        let p = p.ok_or_else(|| HeaderError::Syntax("missing p".into()))?;
        if k > 1 && modulus.is_none() {
            return Err(HeaderError::Syntax(
                "extension field needs a modulus".into(),
            ));
        }
        let modulus = if k == 1 { None } else { modulus };
        Ok(make_field(p, k, modulus.as_deref(), 0)?)
    }

    pub(crate) fn same(&self, other: &FieldSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self == other
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeaderError {
    #[error("malformed field header: {0}")]
    Syntax(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus
    }
}

impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.k.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}[{:?}]", self.0.p, self.0.k, self.0.modulus)
        }
    }
}

/// An element of a [`FieldSpec`], stored canonically.
#[derive(Clone)]
pub struct FieldElement {
    field: FieldSpec,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Little-endian base-p value of the coefficients, in [0, q).
    pub fn encode(&self) -> u64 {
        let p = self.field.p();
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field.same(&other.field) {
            Ok(())
        } else {
            Err(FieldError::MixedFields)
        }
    }

    fn with_coeffs(&self, coeffs: Vec<u64>) -> Self {
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.field.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| poly::add_mod_p(a, b, p))
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.field.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| poly::sub_mod_p(a, b, p))
            .collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn neg(&self) -> Self {
        let p = self.field.p();
        self.with_coeffs(
            self.coeffs
                .iter()
                .map(|&a| poly::sub_mod_p(0, a, p))
                .collect(),
        )
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let p = self.field.p();
        let k = self.field.k() as usize;
        if k == 1 {
            return self.with_coeffs(vec![poly::mul_mod_p(self.coeffs[0], other.coeffs[0], p)]);
        }
        let mut r = poly::rem(
            &poly::mul(&self.coeffs, &other.coeffs, p),
            self.field.modulus(),
            p,
        );
        r.resize(k, 0);
        self.with_coeffs(r)
    }

    pub fn square(&self) -> Self {
        self.mul_unchecked(self)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via e^{q-2}.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(self.field.q() - 2))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field.same(&other.field)
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by canonical encoding.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

// Operator forms panic on mixed fields; use the named methods to get a `Result`.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("operands from different fields")
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("operands from different fields")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}
