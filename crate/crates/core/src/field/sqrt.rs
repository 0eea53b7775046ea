use super::FieldElement;

/// The square roots of an element, ordered by canonical encoding.
///
/// For zero both roots are the same element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareRoots {
    pub low: FieldElement,
    pub high: FieldElement,
}

impl SquareRoots {
    fn new(r: FieldElement) -> Self {
        let s = r.neg();
        if r <= s {
            SquareRoots { low: r, high: s }
        } else {
            SquareRoots { low: s, high: r }
        }
    }

    pub fn is_double(&self) -> bool {
        self.low == self.high
    }
}

impl FieldElement {
    /// Euler's criterion: 0 for zero, otherwise e^{(q-1)/2} read as +1 or -1.
    pub fn quadratic_character(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if self.pow((self.field.q() - 1) / 2).is_one() {
            1
        } else {
            -1
        }
    }

    /// Tonelli-Shanks over F_q.
    ///
    /// The auxiliary non-residue is the one with the smallest encoding, so the
    /// returned pair is fully determined by the input.
    pub fn sqrt(&self) -> Option<SquareRoots> {
        if self.is_zero() {
            return Some(SquareRoots::new(self.clone()));
        }
        if self.quadratic_character() != 1 {
            return None;
        }
        let q = self.field.q();
        let two_adicity = (q - 1).trailing_zeros();
        let odd = (q - 1) >> two_adicity;

        if two_adicity == 1 {
            return Some(SquareRoots::new(self.pow((q + 1) / 4)));
        }

        let z = self
            .field
            .non_residue()
            .expect("odd field has a non-residue");
        let mut m = two_adicity;
        let mut c = z.pow(odd);
        let mut t = self.pow(odd);
        let mut r = self.pow(odd.div_ceil(2));
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = t2.square();
                i += 1;
            }
            debug_assert!(i < m);
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            t = &t * &c;
            r = &r * &b;
        }
        Some(SquareRoots::new(r))
    }
}

#[cfg(test)]
mod tests {
    use crate::field::{make_field, prime_field, FieldSpec};

    #[test]
    fn character_examples() {
        let f13 = prime_field(13).unwrap();
        let f7 = prime_field(7).unwrap();
        assert_eq!(f13.from_int(3).quadratic_character(), 1);
        assert_eq!(f7.from_int(3).quadratic_character(), -1);
        assert_eq!(f7.zero().quadratic_character(), 0);
    }

    #[test]
    fn sqrt_examples() {
        let f13 = prime_field(13).unwrap();
        let roots = f13.from_int(3).sqrt().unwrap();
        assert_eq!((roots.low.encode(), roots.high.encode()), (4, 9));
        assert!(prime_field(7).unwrap().from_int(3).sqrt().is_none());
        let one = f13.one().sqrt().unwrap();
        assert_eq!((one.low.encode(), one.high.encode()), (1, 12));
        assert!(f13.zero().sqrt().unwrap().is_double());
    }

    fn fields() -> Vec<FieldSpec> {
        let mut out: Vec<FieldSpec> = [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
            .iter()
            .map(|&p| prime_field(p).unwrap())
            .collect();
        out.push(make_field(5, 2, None, 0).unwrap());
        out.push(make_field(7, 2, None, 0).unwrap());
        // 2-adicity 4 for q = 17 is covered above; 97 has 2-adicity 5
        out.push(prime_field(97).unwrap());
        out
    }

    #[test]
    fn character_matches_square_table() {
        for f in fields() {
            let squares: std::collections::HashSet<u64> =
                f.elements().map(|e| e.square().encode()).collect();
            let mut residues = 0;
            for e in f.elements() {
                let expected = if e.is_zero() {
                    0
                } else if squares.contains(&e.encode()) {
                    1
                } else {
                    -1
                };
                assert_eq!(e.quadratic_character(), expected, "{f:?} {e:?}");
                if expected == 1 {
                    residues += 1;
                }
                match e.sqrt() {
                    Some(r) => {
                        assert_eq!(r.low.square(), e);
                        assert_eq!(r.high.square(), e);
                        assert_eq!(r.low, -&r.high);
                    }
                    None => assert_eq!(expected, -1),
                }
            }
            assert_eq!(residues, (f.q() - 1) / 2);
        }
    }
}
