//! Small finite fields GF(p^k) with table-driven arithmetic.
//!
//! An element is stored as the integer `c0 + c1·p + … + c(k-1)·p^(k-1)` of its
//! coefficient vector over GF(p), i.e. the polynomial `c0 + c1·x + …` reduced
//! modulo the field's irreducible modulus.

use super::AtlasError;

/// Largest field order supported.
pub const MAX_FIELD_ORDER: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub u32);

#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    /// Lower coefficients `c0..c(k-1)` of the monic modulus.
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

pub fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Splits `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl Field {
    /// GF(p^k) with the least monic irreducible modulus of degree `k`.
    ///
    /// Candidates `x^k + c(k-1)x^(k-1) + … + c0` are tried in increasing order
    /// of the integer `c0 + c1·p + … + c(k-1)·p^(k-1)`.
    pub fn new(p: u32, k: u32) -> Result<Self, AtlasError> {
        if !is_prime(p) {
            return Err(AtlasError::NotPrime(p));
        }
        if k == 0 {
            return Err(AtlasError::FieldTooLarge(p, k));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(AtlasError::FieldTooLarge(p, k))?;
        let modulus = (0..q)
            .map(|code| digits(code, p, k))
            .find(|lower| {
                let mut poly = lower.clone();
                poly.push(1);
                is_irreducible(&poly, p)
            })
            .expect("an irreducible polynomial exists in every degree");

        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            let da = digits(a, p, k);
            for b in 0..q {
                let db = digits(b, p, k);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&sum, p);
                mul[(a * q + b) as usize] = undigits(&poly_mulmod(&da, &db, &modulus, p), p);
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap())
            .collect();
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap()
                }
            })
            .collect();
        Ok(Field {
            p,
            k,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Full monic modulus, constant term first.
    pub fn modulus(&self) -> Vec<u32> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The GF(p)-basis `1, x, …, x^(k-1)`.
    pub fn basis(&self) -> Vec<FieldElement> {
        (0..self.k).map(|i| FieldElement(self.p.pow(i))).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        digits(a.0, self.p, self.k)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        (a.0 != 0).then(|| FieldElement(self.inv[a.0 as usize]))
    }

    pub fn pow(&self, a: FieldElement, e: u32) -> FieldElement {
        (0..e).fold(self.one(), |acc, _| self.mul(acc, a))
    }
}

fn digits(mut code: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).unwrap()
}

/// Remainder of `num` modulo `den` over GF(p); `den` must have nonzero lead.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let den = trim(den.to_vec());
    let mut r = trim(num.to_vec());
    let dl = den.len();
    let lead_inv = inv_mod_p(*den.last().unwrap(), p);
    while r.len() >= dl && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - dl;
        let factor = r.last().unwrap() * lead_inv % p;
        for (i, &d) in den.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - factor * d % p) % p;
        }
        r = trim(r);
        if dl == 1 {
            return vec![0];
        }
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], lower: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut modulus = lower.to_vec();
    modulus.push(1);
    let mut r = poly_rem(&prod, &modulus, p);
    r.resize(lower.len(), 0);
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d as u32) {
            let mut divisor = digits(code, p, d as u32);
            divisor.push(1);
            let r = poly_rem(poly, &divisor, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.inv(FieldElement(3)), Some(FieldElement(5)));
        assert_eq!(f.inv(FieldElement(0)), None);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(6, 1), Err(AtlasError::NotPrime(6))));
        assert!(matches!(
            Field::new(2, 6),
            Err(AtlasError::FieldTooLarge(2, 6))
        ));
    }

    #[test]
    fn chosen_moduli() {
        assert_eq!(Field::new(2, 3).unwrap().modulus(), vec![1, 1, 0, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), vec![1, 0, 1]);
        assert_eq!(Field::new(3, 3).unwrap().modulus(), vec![1, 2, 0, 1]);
        assert_eq!(Field::new(2, 4).unwrap().modulus(), vec![1, 1, 0, 0, 1]);
    }

    // Brute force: the cube of the class of x equals x + 1 in GF(2)[x]/(x^3+x+1).
    #[test]
    fn gf8_cube_of_x() {
        let f = Field::new(2, 3).unwrap();
        let x = f.basis()[1];
        assert_eq!(f.coeffs(x), vec![0, 1, 0]);
        assert_eq!(f.coeffs(f.mul(f.mul(x, x), x)), vec![1, 1, 0]);
        for a in f.elements().skip(1) {
            assert_eq!(f.pow(a, 7), f.one());
        }
    }

    #[test]
    fn gf27_multiplicative_group_is_cyclic() {
        let f = Field::new(3, 3).unwrap();
        let order = |a: FieldElement| (1..=26).find(|&e| f.pow(a, e) == f.one()).unwrap();
        assert!(f.elements().skip(1).any(|a| order(a) == 26));
        assert!(f.elements().skip(1).all(|a| 26 % order(a) == 0));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, k) in [
            (2, 1),
            (3, 1),
            (5, 1),
            (2, 2),
            (2, 3),
            (3, 2),
            (2, 4),
            (5, 2),
            (3, 3),
            (2, 5),
        ] {
            let f = Field::new(p, k).unwrap();
            assert_eq!(f.order(), p.pow(k));
            for a in f.elements() {
                if a != f.zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
                }
                assert_eq!(f.add(a, f.neg(a)), f.zero());
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    if f.order() <= 27 {
                        for c in f.elements() {
                            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
