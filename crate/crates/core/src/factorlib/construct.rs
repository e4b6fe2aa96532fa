//! Constructions that turn known factorizations into new ones.
//!
//! Every function here verifies its output before returning it; a failure at
//! that point is reported as [`FactorError::Internal`].

use super::{verify_in, FactorError, Factorization, Provenance, Verdict};
use crate::permgroup::{GroupTable, Side, SubgroupHandle, Transversal};

pub(crate) fn checked(
    table: &GroupTable,
    domain: &SubgroupHandle,
    f: Factorization,
) -> Result<Factorization, FactorError> {
    match verify_in(table, domain, &f) {
        Verdict::Valid => Ok(f),
        Verdict::Invalid(reason) => Err(FactorError::Internal(format!(
            "{} construction: {reason}",
            f.provenance.label()
        ))),
    }
}

fn require_valid(
    table: &GroupTable,
    domain: &SubgroupHandle,
    f: &Factorization,
) -> Result<(), FactorError> {
    match verify_in(table, domain, f) {
        Verdict::Valid => Ok(()),
        Verdict::Invalid(reason) => Err(FactorError::InvalidInput(reason)),
    }
}

/// Translates `f` to `(a⁻¹·A, B·b⁻¹)` for the least indices `a ∈ A`,
/// `b ∈ B`, so the identity lies in both factors.
pub fn normalize(
    table: &GroupTable,
    domain: &SubgroupHandle,
    f: &Factorization,
) -> Result<Factorization, FactorError> {
    require_valid(table, domain, f)?;
    let ai = table.inv(f.a[0]);
    let bi = table.inv(f.b[0]);
    let a = f.a.iter().map(|&x| table.mul(ai, x)).collect();
    let b = f.b.iter().map(|&y| table.mul(y, bi)).collect();
    checked(
        table,
        domain,
        Factorization::new(a, b, f.provenance.clone()),
    )
}

/// `(B⁻¹, A⁻¹)`, a factorization with the sizes swapped.
pub fn invert_dual(
    table: &GroupTable,
    domain: &SubgroupHandle,
    f: &Factorization,
) -> Result<Factorization, FactorError> {
    require_valid(table, domain, f)?;
    let a = f.b.iter().map(|&y| table.inv(y)).collect();
    let b = f.a.iter().map(|&x| table.inv(x)).collect();
    let provenance = match &f.provenance {
        // undo rather than nest a second inversion
        Provenance::InvertedDual { inner } => (**inner).clone(),
        p => Provenance::InvertedDual {
            inner: Box::new(p.clone()),
        },
    };
    checked(table, domain, Factorization::new(a, b, provenance))
}

/// Extends a factorization `H = A·C` of a subgroup to `G = A·(C·T)`, where
/// `T` is the right transversal of `H` in `ambient`.
pub fn extend_by_transversal(
    table: &GroupTable,
    ambient: &SubgroupHandle,
    h: &SubgroupHandle,
    f_h: &Factorization,
) -> Result<Factorization, FactorError> {
    if f_h.a.iter().chain(&f_h.b).any(|&x| !h.contains(x)) {
        return Err(FactorError::NotInSubgroup);
    }
    require_valid(table, h, f_h)?;
    let t = Transversal::new(table, ambient, h, Side::Right);
    let b = f_h
        .b
        .iter()
        .flat_map(|&c| t.reps.iter().map(move |&r| (c, r)))
        .map(|(c, r)| table.mul(c, r))
        .collect();
    let provenance = Provenance::LemmaSecond {
        subgroup_order: h.order(),
        c: f_h.b.len(),
        transversal: t.len(),
        inner: Box::new(f_h.provenance.clone()),
    };
    checked(
        table,
        ambient,
        Factorization::new(f_h.a.clone(), b, provenance),
    )
}

/// Lifts a factorization `N = A0·B0` of a normal subgroup and a quotient
/// factorization given by coset representatives `U`, `V` (so that the cosets
/// `N·u·v` are all distinct) to `G = (U·A0)·(B0·V)`.
pub fn combine_normal(
    table: &GroupTable,
    ambient: &SubgroupHandle,
    normal: &SubgroupHandle,
    f_n: &Factorization,
    u: &[u32],
    v: &[u32],
) -> Result<Factorization, FactorError> {
    if !normal.is_normal_in(table, ambient) {
        return Err(FactorError::NotNormal);
    }
    if f_n.a.iter().chain(&f_n.b).any(|&x| !normal.contains(x)) {
        return Err(FactorError::NotInSubgroup);
    }
    require_valid(table, normal, f_n)?;

    let index = ambient.order() / normal.order();
    if u.len() * v.len() != index {
        return Err(FactorError::InvalidQuotient(format!(
            "|U|·|V| = {}·{} but |G:N| = {index}",
            u.len(),
            v.len()
        )));
    }
    if let Some(&x) = u.iter().chain(v).find(|&&x| !ambient.contains(x)) {
        return Err(FactorError::InvalidQuotient(format!(
            "representative {x} outside the group"
        )));
    }
    let mut coset = vec![u32::MAX; table.order()];
    let reps = Transversal::new(table, ambient, normal, Side::Right);
    for (id, &r) in reps.reps.iter().enumerate() {
        for &x in normal.members() {
            coset[table.mul(x, r) as usize] = id as u32;
        }
    }
    let mut hit = vec![false; index];
    for &x in u {
        for &y in v {
            let id = coset[table.mul(x, y) as usize] as usize;
            if hit[id] {
                return Err(FactorError::InvalidQuotient(format!(
                    "cosets of N·{x}·{y} repeat"
                )));
            }
            hit[id] = true;
        }
    }

    let a = u
        .iter()
        .flat_map(|&x| f_n.a.iter().map(move |&y| (x, y)))
        .map(|(x, y)| table.mul(x, y))
        .collect();
    let b = f_n
        .b
        .iter()
        .flat_map(|&z| v.iter().map(move |&w| (z, w)))
        .map(|(z, w)| table.mul(z, w))
        .collect();
    let provenance = Provenance::LemmaSimple {
        normal_order: normal.order(),
        a0: f_n.a.len(),
        b0: f_n.b.len(),
        quotient_a: u.len(),
        quotient_b: v.len(),
        inner: Box::new(f_n.provenance.clone()),
    };
    checked(table, ambient, Factorization::new(a, b, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorlib::verify;
    use crate::permgroup::Perm;

    fn s4() -> GroupTable {
        GroupTable::close(&[
            Perm::parse_cycles("(1,2,3,4)", 4).unwrap(),
            Perm::parse_cycles("(1,2)", 4).unwrap(),
        ])
        .unwrap()
    }

    fn idx(g: &GroupTable, s: &str) -> u32 {
        g.index_of(&Perm::parse_cycles(s, g.degree()).unwrap())
            .unwrap()
    }

    fn sub(g: &GroupTable, gens: &[&str]) -> SubgroupHandle {
        let gens: Vec<u32> = gens.iter().map(|s| idx(g, s)).collect();
        SubgroupHandle::closure(g, &gens, usize::MAX)
            .unwrap()
            .subgroup()
            .unwrap()
    }

    #[test]
    fn normalize_translates() {
        let g = s4();
        let full = SubgroupHandle::full(&g);
        let x = idx(&g, "(1,3)");
        let xi = g.inv(x);
        let b: Vec<u32> = (0..24).map(|y| g.mul(xi, y)).collect();
        let f = Factorization::new(vec![x], b, Provenance::Trivial);
        assert!(verify(&g, &f).is_valid());
        let n = normalize(&g, &full, &f).unwrap();
        assert_eq!(n.a, vec![0]);
        assert_eq!(n.b, (0..24).collect::<Vec<_>>());

        let h = sub(&g, &["(1,2,3)"]);
        let t = Transversal::new(&g, &full, &h, Side::Right);
        let f = Factorization::new(h.members().to_vec(), t.reps, Provenance::Trivial);
        let n = normalize(&g, &full, &f).unwrap();
        assert_eq!(n, f);
    }

    #[test]
    fn dual_is_an_involution() {
        let g = s4();
        let full = SubgroupHandle::full(&g);
        let f = Factorization::new((0..24).collect(), vec![0], Provenance::Trivial);
        let d = invert_dual(&g, &full, &f).unwrap();
        assert_eq!((d.a.clone(), d.b.clone()), (vec![0], (0..24).collect()));
        assert_eq!(invert_dual(&g, &full, &d).unwrap(), f);
    }

    #[test]
    fn extend_trivial_cases() {
        let g = s4();
        let full = SubgroupHandle::full(&g);
        let h = sub(&g, &["(1,2,3,4)"]);
        let t = Transversal::new(&g, &full, &h, Side::Right);
        let f = Factorization::new(h.members().to_vec(), vec![0], Provenance::Trivial);
        let e = extend_by_transversal(&g, &full, &h, &f).unwrap();
        assert_eq!(e.a, h.members());
        let mut reps = t.reps.clone();
        reps.sort_unstable();
        assert_eq!(e.b, reps);

        let f = Factorization::new(vec![0], h.members().to_vec(), Provenance::Trivial);
        let e = extend_by_transversal(&g, &full, &h, &f).unwrap();
        assert_eq!(e.a, vec![0]);
        assert_eq!(e.b, (0..24).collect::<Vec<_>>());

        let outside = Factorization::new(
            vec![idx(&g, "(1,2)")],
            h.members().to_vec(),
            Provenance::Trivial,
        );
        assert_eq!(
            extend_by_transversal(&g, &full, &h, &outside),
            Err(FactorError::NotInSubgroup)
        );
    }

    #[test]
    fn combine_normal_s4_over_a4() {
        let g = s4();
        let full = SubgroupHandle::full(&g);
        let a4 = sub(&g, &["(1,2,3)", "(2,3,4)"]);
        let v4 = sub(&g, &["(1,2)(3,4)", "(1,3)(2,4)"]);
        // A4 = V4 · {e, (1,2,3), (1,3,2)}
        let t = Transversal::new(&g, &a4, &v4, Side::Right);
        let f_n = Factorization::new(v4.members().to_vec(), t.reps, Provenance::Trivial);
        let u = [0, idx(&g, "(1,2)")];
        let f = combine_normal(&g, &full, &a4, &f_n, &u, &[0]).unwrap();
        assert_eq!(f.sizes(), (8, 3));

        // degenerate: N = G, N trivial
        let f_full = Factorization::new((0..24).collect(), vec![0], Provenance::Trivial);
        let same = combine_normal(&g, &full, &full, &f_full, &[0], &[0]).unwrap();
        assert_eq!((same.a, same.b), (f_full.a.clone(), f_full.b.clone()));
        let triv = SubgroupHandle::trivial(&g);
        let f_triv = Factorization::new(vec![0], vec![0], Provenance::Trivial);
        let s3 = sub(&g, &["(1,2,3)", "(1,2)"]);
        let tr = Transversal::new(&g, &full, &s3, Side::Right);
        let lifted = combine_normal(&g, &full, &triv, &f_triv, s3.members(), &tr.reps).unwrap();
        assert_eq!(lifted.a, s3.members());

        let s3_bad = combine_normal(&g, &full, &s3, &f_triv, &[0], &[0]);
        assert_eq!(s3_bad, Err(FactorError::NotNormal));
        let bad_quotient = combine_normal(&g, &full, &a4, &f_n, &[0, idx(&g, "(1,2,3)")], &[0]);
        assert!(matches!(bad_quotient, Err(FactorError::InvalidQuotient(_))));
    }
}
