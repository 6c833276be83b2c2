use num_traits::{Signed, Zero};

use super::matrix::{act, is_positive_definite, IntMatrix, SymMatQ, UnimodularMat};
use crate::arith::{int, rat, Rational};
use crate::error::{Error, Result};

/// Vectors in `{0, +-1}^s` whose last nonzero entry is `+1`, paired with that
/// entry's index. These give the complete list of Minkowski conditions for
/// `s <= 3` (and even `s <= 4`).
fn sign_vectors(s: usize) -> Vec<(usize, Vec<i64>)> {
    let mut out = Vec::new();
    let total = 3usize.pow(s as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<i64> = (0..s)
            .map(|_| {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                d
            })
            .collect();
        if let Some(k) = v.iter().rposition(|&x| x != 0) {
            if v[k] == 1 && v.iter().filter(|&&x| x != 0).count() >= 2 {
                out.push((k, v));
            }
        }
    }
    out
}

/// Minkowski conditions for sizes up to three: nondecreasing diagonal and
/// `n[v] >= n_kk` for every `v` in `{0, +-1}^s` with last nonzero entry at `k`.
pub fn is_minkowski_reduced(n: &SymMatQ) -> bool {
    let s = n.size();
    if !is_positive_definite(n) {
        return false;
    }
    if (1..s).any(|i| n.get(i - 1, i - 1) > n.get(i, i)) {
        return false;
    }
    sign_vectors(s)
        .into_iter()
        .all(|(k, v)| &n.eval(&v) >= n.get(k, k))
}

/// Reduces a positive definite form of size at most three.
///
/// Returns `(n[rho], rho)`. The descent alternates column sorting, pairwise
/// size reduction and replacement of a basis vector by a shorter
/// `{0, +-1}`-combination. Among the sign changes `diag(+-1)` of the result the
/// lexicographically smallest entry vector is returned, so the output is a
/// function of the input alone.
pub fn minkowski_reduce(n: &SymMatQ) -> Result<(SymMatQ, UnimodularMat)> {
    if !is_positive_definite(n) {
        return Err(Error::NotPositiveDefinite);
    }
    let s = n.size();
    let mut u = IntMatrix::identity(s);
    let mut g = n.clone();
    let candidates = sign_vectors(s);
    loop {
        let mut changed = false;

        // sort columns by diagonal (stable insertion sort keeps it deterministic)
        for i in 1..s {
            let mut j = i;
            while j > 0 && g.get(j - 1, j - 1) > g.get(j, j) {
                u.swap_columns(j - 1, j);
                g = act(n, &u)?;
                changed = true;
                j -= 1;
            }
        }

        // pairwise size reduction
        for j in 0..s {
            for i in 0..s {
                if i == j || g.get(i, i) > g.get(j, j) {
                    continue;
                }
                let two_off = g.get(i, j) * int(2);
                if two_off.abs() > *g.get(i, i) {
                    let c = (g.get(i, j) / g.get(i, i)).round();
                    let c: i64 = c.to_integer().try_into().map_err(|_| {
                        Error::InvalidArgument("entries too large to reduce".into())
                    })?;
                    u.add_column(j, i, -c);
                    g = act(n, &u)?;
                    changed = true;
                }
            }
        }

        // shorter {0, +-1} combinations
        for (k, v) in &candidates {
            if &g.eval(v) < g.get(*k, *k) {
                let combo: Vec<i64> = (0..s)
                    .map(|r| (0..s).map(|c| u.get(r, c) * v[c]).sum())
                    .collect();
                for (r, x) in combo.into_iter().enumerate() {
                    u.set(r, *k, x);
                }
                g = act(n, &u)?;
                changed = true;
                break;
            }
        }

        if !changed {
            break;
        }
    }
    debug_assert!(is_minkowski_reduced(&g));

    // canonical signs
    let mut best: Option<(SymMatQ, IntMatrix)> = None;
    for mask in 0..(1u32 << s) {
        let mut w = u.clone();
        for j in 0..s {
            if mask & (1 << j) != 0 {
                w.negate_column(j);
            }
        }
        let h = act(n, &w)?;
        if best.as_ref().map_or(true, |(b, _)| h.entries() < b.entries()) {
            best = Some((h, w));
        }
    }
    let (g, u) = best.expect("at least one sign choice");
    Ok((g, UnimodularMat::new(u)?))
}

/// `n_11^s <= gamma_s^s det(n)` with Hermite constants `gamma_1 = 1`,
/// `gamma_2^2 = 4/3`, `gamma_3^3 = 2`.
pub fn hermite_check(n: &SymMatQ) -> Result<bool> {
    if !is_positive_definite(n) {
        return Err(Error::NotPositiveDefinite);
    }
    if !is_minkowski_reduced(n) {
        return Err(Error::NotReduced);
    }
    let s = n.size();
    let gamma_power = match s {
        1 => int(1),
        2 => rat(4, 3),
        3 => int(2),
        _ => unreachable!("sizes are at most three"),
    };
    let lhs = num_traits::pow(n.get(0, 0).clone(), s);
    Ok(lhs <= gamma_power * n.det())
}

/// Smallest value of `n[v]` over nonzero integer vectors with entries in
/// `[-bound, bound]`.
pub fn brute_force_minimum(n: &SymMatQ, bound: i64) -> Rational {
    let s = n.size();
    let width = (2 * bound + 1) as usize;
    let mut best: Option<Rational> = None;
    for code in 0..width.pow(s as u32) {
        let mut c = code;
        let v: Vec<i64> = (0..s)
            .map(|_| {
                let d = (c % width) as i64 - bound;
                c /= width;
                d
            })
            .collect();
        if v.iter().all(|x| *x == 0) {
            continue;
        }
        let val = n.eval(&v);
        if best.as_ref().map_or(true, |b| &val < b) {
            best = Some(val);
        }
    }
    best.unwrap_or_else(Rational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m2(a: Rational, b: Rational, c: Rational) -> SymMatQ {
        SymMatQ::from_rows(&[vec![a, b.clone()], vec![b, c]]).unwrap()
    }

    #[test]
    fn identity_is_fixed() {
        let (g, u) = minkowski_reduce(&SymMatQ::identity(2)).unwrap();
        assert_eq!(g, SymMatQ::identity(2));
        assert_eq!(u, UnimodularMat::identity(2));
        let (g, u) = minkowski_reduce(&SymMatQ::identity(3)).unwrap();
        assert_eq!(g, SymMatQ::identity(3));
        assert_eq!(u, UnimodularMat::identity(3));
    }

    #[test]
    fn permutation_example() {
        let (g, u) = minkowski_reduce(&m2(int(2), int(0), int(1))).unwrap();
        assert_eq!(g, m2(int(1), int(0), int(2)));
        assert_eq!(u, UnimodularMat::swap());
    }

    #[test]
    fn five_four_five() {
        let n = m2(int(5), int(4), int(5));
        let (g, u) = minkowski_reduce(&n).unwrap();
        assert_eq!(g.get(0, 0), &brute_force_minimum(&n, 5));
        assert_eq!(g.get(0, 0), &int(2));
        assert_eq!(act(&n, u.matrix()).unwrap(), g);
        assert!(is_minkowski_reduced(&g));
    }

    #[test]
    fn rejects_indefinite() {
        assert!(matches!(
            minkowski_reduce(&m2(int(1), int(2), int(1))),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn hermite_examples() {
        assert!(hermite_check(&SymMatQ::identity(2)).unwrap());
        // boundary case: 1 = (4/3)(3/4)
        assert!(hermite_check(&m2(int(1), rat(1, 2), int(1))).unwrap());
        assert!(matches!(
            hermite_check(&m2(int(2), int(0), int(1))),
            Err(Error::NotReduced)
        ));
        // A_3 root lattice scaled: the extremal form in dimension three
        let a3 = SymMatQ::parse("1,1/2,1/2;1/2,1,1/2;1/2,1/2,1").unwrap();
        assert!(hermite_check(&a3).unwrap());
        assert_eq!(a3.det(), rat(1, 2));
    }

    #[test]
    fn size_three_reduction() {
        let n = SymMatQ::parse("10,7,3;7,6,2;3,2,4").unwrap();
        let (g, u) = minkowski_reduce(&n).unwrap();
        assert!(is_minkowski_reduced(&g));
        assert_eq!(act(&n, u.matrix()).unwrap(), g);
        assert_eq!(g.det(), n.det());
        assert_eq!(g.get(0, 0), &brute_force_minimum(&n, 4));
    }

    fn arb_pd2() -> impl Strategy<Value = SymMatQ> {
        (1i64..40, -60i64..60, 1i64..40, 1i64..6)
            .prop_filter("positive definite", |(a, b, c, _)| 4 * a * c > b * b)
            .prop_map(|(a, b, c, d)| m2(rat(a, d), rat(b, 2 * d), rat(c, d)))
    }

    fn arb_pd3() -> impl Strategy<Value = SymMatQ> {
        (prop::collection::vec(-3i64..4, 9), 1i64..4).prop_filter_map("nonsingular", |(e, d)| {
            // B^T B + I/d with random integer B is positive definite
            let b = IntMatrix::new(3, 3, e).unwrap();
            let g = act(&SymMatQ::identity(3), &b).ok()?;
            let entries: Vec<Rational> = g
                .entries()
                .iter()
                .enumerate()
                .map(|(k, x)| if k % 4 == 0 { x + rat(1, d) } else { x.clone() })
                .collect();
            SymMatQ::new(3, entries).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn reduced_first_entry_is_the_minimum(n in arb_pd2()) {
            let (g, u) = minkowski_reduce(&n).unwrap();
            prop_assert!(is_minkowski_reduced(&g));
            prop_assert_eq!(&act(&n, u.matrix()).unwrap(), &g);
            prop_assert!(g.get(0, 0) <= &brute_force_minimum(&n, 5));
            prop_assert!(hermite_check(&g).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn size_three_outputs_are_reduced(n in arb_pd3()) {
            let (g, u) = minkowski_reduce(&n).unwrap();
            prop_assert!(is_minkowski_reduced(&g));
            prop_assert_eq!(&act(&n, u.matrix()).unwrap(), &g);
            prop_assert!(hermite_check(&g).unwrap());
            // idempotent on its own output
            let (again, _) = minkowski_reduce(&g).unwrap();
            prop_assert_eq!(again, g);
        }
    }
}
