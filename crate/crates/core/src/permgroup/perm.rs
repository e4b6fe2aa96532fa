//! Permutations of `{0..d-1}` stored as image arrays.
//!
//! Products use the apply-left-first convention throughout the crate:
//! `p.compose(&q)` maps point `i` to `q(p(i))`. Every coset, transversal and
//! double-coset routine relies on this, so `H·y` means "apply an element of
//! `H`, then `y`".

use std::fmt;

use super::PermError;

/// A permutation; `images()[i]` is the image of point `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Self, PermError> {
        if images.is_empty() {
            return Err(PermError::EmptyDegree);
        }
        if images.len() > u16::MAX as usize {
            return Err(PermError::DegreeTooLarge(images.len()));
        }
        let mut seen = vec![false; images.len()];
        for &im in &images {
            let slot = seen.get_mut(im as usize).ok_or(PermError::NotBijective)?;
            if *slot {
                return Err(PermError::NotBijective);
            }
            *slot = true;
        }
        Ok(Perm { images })
    }

    /// Trusted constructor for images produced by composing valid permutations.
    pub(crate) fn from_images_unchecked(images: Vec<u16>) -> Self {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm { images }
    }

    /// Parses disjoint-cycle notation over 1-based points, e.g. `(1,2)(3,4,5)`.
    ///
    /// Whitespace is not accepted; `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        if degree == 0 {
            return Err(PermError::EmptyDegree);
        }
        if degree > u16::MAX as usize {
            return Err(PermError::DegreeTooLarge(degree));
        }
        if text == "()" {
            return Ok(Perm::identity(degree));
        }
        let bytes = text.as_bytes();
        let mut images: Vec<u16> = (0..degree as u16).collect();
        let mut used = vec![false; degree];
        let mut pos = 0;
        if bytes.is_empty() {
            return Err(PermError::Malformed(text.to_string()));
        }
        while pos < bytes.len() {
            if bytes[pos] != b'(' {
                return Err(PermError::Malformed(text.to_string()));
            }
            let close = text[pos..]
                .find(')')
                .map(|off| pos + off)
                .ok_or_else(|| PermError::Malformed(text.to_string()))?;
            let body = &text[pos + 1..close];
            if body.is_empty() || body.contains('(') {
                return Err(PermError::Malformed(text.to_string()));
            }
            let mut cycle = Vec::new();
            for tok in body.split(',') {
                let point: usize = tok
                    .parse()
                    .map_err(|_| PermError::Malformed(text.to_string()))?;
                if point == 0 || point > degree {
                    return Err(PermError::PointOutOfRange { point, degree });
                }
                if used[point - 1] {
                    return Err(PermError::RepeatedPoint(point));
                }
                used[point - 1] = true;
                cycle.push(point - 1);
            }
            for (i, &from) in cycle.iter().enumerate() {
                images[from] = cycle[(i + 1) % cycle.len()] as u16;
            }
            pos = close + 1;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// The product `self·other`: apply `self` first, then `other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Perm) -> Perm {
        Perm {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.degree()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im as usize] = i as u16;
        }
        Perm { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &im)| i == im as usize)
    }

    /// Disjoint-cycle string over 1-based points; inverse of [`Perm::parse_cycles`].
    pub fn to_cycles(&self) -> String {
        let mut out = String::new();
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            out.push('(');
            let mut cur = start;
            loop {
                seen[cur] = true;
                if cur != start {
                    out.push(',');
                }
                out.push_str(&(cur + 1).to_string());
                cur = self.apply(cur);
                if cur == start {
                    break;
                }
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({})", self.to_cycles())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycles())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Second, independent reading of cycle notation: walks the characters
    // once and records successor pairs without the slice-splitting parser.
    fn naive_cycles(text: &str, degree: usize) -> Vec<u16> {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        let mut cycle: Vec<usize> = Vec::new();
        let mut num = String::new();
        for ch in text.chars() {
            match ch {
                '(' => cycle.clear(),
                ',' | ')' => {
                    if !num.is_empty() {
                        cycle.push(num.parse::<usize>().unwrap() - 1);
                        num.clear();
                    }
                    if ch == ')' {
                        for w in 0..cycle.len() {
                            images[cycle[w]] = cycle[(w + 1) % cycle.len()] as u16;
                        }
                    }
                }
                d => num.push(d),
            }
        }
        images
    }

    #[test]
    fn parse_identity_and_cycles() {
        assert_eq!(Perm::parse_cycles("()", 5).unwrap(), Perm::identity(5));
        assert_eq!(
            Perm::parse_cycles("(1,2,3)", 3).unwrap().images(),
            &[1, 2, 0]
        );
        let p = Perm::parse_cycles("(1,2)(3,4,5)", 5).unwrap();
        assert_eq!(p.images(), &[1, 0, 3, 4, 2]);
        assert_eq!(p.images(), naive_cycles("(1,2)(3,4,5)", 5).as_slice());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Perm::parse_cycles("(1,2)(2,3)", 3),
            Err(PermError::RepeatedPoint(2))
        ));
        assert!(matches!(
            Perm::parse_cycles("(1,6)", 5),
            Err(PermError::PointOutOfRange { point: 6, .. })
        ));
        for bad in ["(1,2", "1,2)", "((1,2))", "(1,,2)", "", "(1,2) ", "(a)"] {
            assert!(
                matches!(Perm::parse_cycles(bad, 5), Err(PermError::Malformed(_))),
                "{bad:?} should be malformed"
            );
        }
    }

    #[test]
    fn compose_convention() {
        let p = Perm::parse_cycles("(1,2,3)", 3).unwrap();
        let q = Perm::parse_cycles("(1,2)", 3).unwrap();
        // point-by-point: 0 -p-> 1 -q-> 0, 1 -p-> 2 -q-> 2, 2 -p-> 0 -q-> 1
        assert_eq!(p.compose(&q).unwrap().images(), &[0, 2, 1]);
        assert_eq!(
            p.compose(&q).unwrap(),
            Perm::parse_cycles("(2,3)", 3).unwrap()
        );
        let e = Perm::identity(3);
        assert_eq!(e.compose(&q).unwrap(), q);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert!(matches!(
            p.compose(&Perm::identity(4)),
            Err(PermError::DegreeMismatch(3, 4))
        ));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
        assert!(Perm::from_images(vec![]).is_err());
    }

    fn arb_perm(degree: usize) -> impl Strategy<Value = Perm> {
        Just((0..degree as u16).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn compose_is_associative(p in arb_perm(9), q in arb_perm(9), r in arb_perm(9)) {
            let left = p.compose(&q).unwrap().compose(&r).unwrap();
            let right = p.compose(&q.compose(&r).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_cancels(p in arb_perm(12)) {
            prop_assert!(p.inverse().compose(&p).unwrap().is_identity());
        }

        #[test]
        fn cycle_string_roundtrip(p in arb_perm(11)) {
            let s = p.to_cycles();
            prop_assert_eq!(&Perm::parse_cycles(&s, 11).unwrap(), &p);
            prop_assert_eq!(naive_cycles(&s, 11), p.images().to_vec());
        }
    }
}
