//! Projective linear groups as permutation groups on projective points.
//!
//! Matrices act on row vectors from the right, `v ↦ v·M`, so a matrix product
//! `M1·M2` acts as "apply `M1`, then `M2`", matching [`Perm::compose`].

use super::field::{prime_power, Field, FieldElement};
use super::AtlasError;
use crate::permgroup::Perm;

type Matrix = Vec<Vec<FieldElement>>;

/// Generators of PSL(2, q) acting on the `q + 1` points of the projective line.
///
/// Point 0 is `∞ = (1:0)`; point `1 + c` is `(c:1)` for the field element
/// with code `c`. The generators are the transvections `[[1,α],[0,1]]` for
/// `α` in the basis `1, x, …` followed by `[[0,1],[-1,0]]`.
pub fn psl2_permutation_generators(q: u32) -> Result<Vec<Perm>, AtlasError> {
    if !(4..=32).contains(&q) {
        return Err(AtlasError::UnsupportedFieldOrder(q));
    }
    let (p, k) = prime_power(q).ok_or(AtlasError::UnsupportedFieldOrder(q))?;
    let f = Field::new(p, k)?;
    let (zero, one) = (f.zero(), f.one());

    let mut mats: Vec<Matrix> = f
        .basis()
        .into_iter()
        .map(|alpha| vec![vec![one, alpha], vec![zero, one]])
        .collect();
    mats.push(vec![vec![zero, one], vec![f.neg(one), zero]]);

    let points: Vec<[FieldElement; 2]> = std::iter::once([one, zero])
        .chain(f.elements().map(|c| [c, one]))
        .collect();
    let index = |v: [FieldElement; 2]| -> usize {
        if v[1] == zero {
            0
        } else {
            let c = f.mul(v[0], f.inv(v[1]).unwrap());
            1 + c.0 as usize
        }
    };
    mats.iter()
        .map(|m| {
            let images = points
                .iter()
                .map(|v| index(row_times(&f, v, m).try_into().unwrap()) as u16)
                .collect();
            Ok(Perm::from_images(images).expect("invertible matrix permutes points"))
        })
        .collect()
}

/// Generators of PSL(3, 3) acting on the 13 points of PG(2, 3).
///
/// Points are the nonzero vectors whose first nonzero coordinate is 1, in
/// lexicographic order of `(v0, v1, v2)`; generators are the six elementary
/// transvections `I + E(i,j)` in row-major order of `(i, j)`.
pub fn psl3_permutation_generators(q: u32) -> Result<Vec<Perm>, AtlasError> {
    if q != 3 {
        return Err(AtlasError::UnsupportedFieldOrder(q));
    }
    let f = Field::new(3, 1)?;
    let (zero, one) = (f.zero(), f.one());

    let mut points: Vec<[FieldElement; 3]> = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            for c in f.elements() {
                let v = [a, b, c];
                if v.iter().find(|&&x| x != zero) == Some(&one) {
                    points.push(v);
                }
            }
        }
    }
    let normalize = |v: Vec<FieldElement>| -> [FieldElement; 3] {
        let lead = *v.iter().find(|&&x| x != zero).unwrap();
        let s = f.inv(lead).unwrap();
        [f.mul(v[0], s), f.mul(v[1], s), f.mul(v[2], s)]
    };

    let mut gens = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let mut m = vec![vec![zero; 3]; 3];
            for (d, row) in m.iter_mut().enumerate() {
                row[d] = one;
            }
            m[i][j] = one;
            let images = points
                .iter()
                .map(|v| {
                    let w = normalize(row_times(&f, v, &m));
                    points.iter().position(|u| *u == w).unwrap() as u16
                })
                .collect();
            gens.push(Perm::from_images(images).expect("transvection permutes points"));
        }
    }
    Ok(gens)
}

fn row_times(f: &Field, v: &[FieldElement], m: &Matrix) -> Vec<FieldElement> {
    (0..m[0].len())
        .map(|j| {
            v.iter()
                .zip(m)
                .fold(f.zero(), |acc, (&x, row)| f.add(acc, f.mul(x, row[j])))
        })
        .collect()
}
