use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::JacobiFormQExp;
use crate::arith::Rational;

/// Nonzero entries of each row as `(r, numerator)` over a common denominator.
struct IntegerRows {
    denom: BigInt,
    rows: Vec<Vec<(i64, BigInt)>>,
}

fn integer_rows(f: &JacobiFormQExp, precision: u64) -> IntegerRows {
    let rows = &f.rows()[..precision as usize];
    let denom = rows
        .iter()
        .flatten()
        .filter(|c| !c.is_zero())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let rows = rows
        .iter()
        .enumerate()
        .map(|(n, row)| {
            let radius = JacobiFormQExp::radius(n as u64, f.index());
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as i64 - radius, c.numer() * (&denom / c.denom())))
                .collect()
        })
        .collect();
    IntegerRows { denom, rows }
}

fn narrow(rows: &IntegerRows) -> Option<Vec<Vec<(i64, i128)>>> {
    rows.rows
        .iter()
        .map(|row| row.iter().map(|(r, c)| Some((*r, c.to_i128()?))).collect())
        .collect()
}

fn max_bits(rows: &IntegerRows) -> u64 {
    rows.rows
        .iter()
        .flatten()
        .map(|(_, c)| c.bits())
        .max()
        .unwrap_or(0)
}

fn term_count_bits(rows: &IntegerRows) -> u64 {
    let count: usize = rows.rows.iter().map(Vec::len).sum();
    64 - (count as u64).leading_zeros() as u64
}

pub(super) fn multiply(a: &JacobiFormQExp, b: &JacobiFormQExp) -> JacobiFormQExp {
    let precision = a.precision().min(b.precision());
    let index = a.index() + b.index();
    let weight = a.weight() + b.weight();
    let ia = integer_rows(a, precision);
    let ib = integer_rows(b, precision);
    let denom = &ia.denom * &ib.denom;

    // every output entry collects at most one term per nonzero entry of `a`
    let fits = max_bits(&ia) + max_bits(&ib) + term_count_bits(&ia) <= 125;
    let rows: Vec<Vec<Rational>> = match (fits, narrow(&ia), narrow(&ib)) {
        (true, Some(sa), Some(sb)) => (0..precision as usize)
            .into_par_iter()
            .map(|n| {
                let radius = JacobiFormQExp::radius(n as u64, index);
                let mut acc = vec![0i128; 2 * radius as usize + 1];
                for n1 in 0..=n {
                    for (r1, x) in &sa[n1] {
                        for (r2, y) in &sb[n - n1] {
                            acc[(r1 + r2 + radius) as usize] += x * y;
                        }
                    }
                }
                acc.into_iter()
                    .map(|v| Rational::new(BigInt::from(v), denom.clone()))
                    .collect()
            })
            .collect(),
        _ => (0..precision as usize)
            .into_par_iter()
            .map(|n| {
                let radius = JacobiFormQExp::radius(n as u64, index);
                let mut acc = vec![BigInt::zero(); 2 * radius as usize + 1];
                for n1 in 0..=n {
                    for (r1, x) in &ia.rows[n1] {
                        for (r2, y) in &ib.rows[n - n1] {
                            acc[(r1 + r2 + radius) as usize] += x * y;
                        }
                    }
                }
                acc.into_iter()
                    .map(|v| {
                        if v.is_zero() {
                            Rational::zero()
                        } else {
                            Rational::new(v, denom.clone())
                        }
                    })
                    .collect()
            })
            .collect(),
    };
    debug_assert!(rows.iter().flatten().all(|c| !c.denom().is_negative()));
    JacobiFormQExp::from_rows(weight, index, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    /// Oracle: plain double convolution on maps.
    fn naive(a: &JacobiFormQExp, b: &JacobiFormQExp) -> BTreeMap<(u64, i64), Rational> {
        let prec = a.precision().min(b.precision());
        let mut out: BTreeMap<(u64, i64), Rational> = BTreeMap::new();
        for (n1, r1, x) in a.terms() {
            for (n2, r2, y) in b.terms() {
                if n1 + n2 < prec {
                    *out.entry((n1 + n2, r1 + r2)).or_insert_with(Rational::zero) += x * y;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn arb_form(index: u64) -> impl Strategy<Value = JacobiFormQExp> {
        (
            prop::collection::vec((0u64..5, -6i64..7, -50i64..50, 1i64..4), 0..12),
            3u64..6,
        )
            .prop_map(move |(terms, prec)| {
                let mut f = JacobiFormQExp::zero(2, index, prec);
                for (n, r, p, q) in terms {
                    if f.in_window(n, r) {
                        f.add_to(n, r, rat(p, q)).unwrap();
                    }
                }
                f
            })
    }

    proptest! {
        #[test]
        fn matches_naive_convolution(a in arb_form(1), b in arb_form(2)) {
            let p = a.multiply(&b);
            let got: BTreeMap<(u64, i64), Rational> =
                p.terms().map(|(n, r, c)| ((n, r), c.clone())).collect();
            prop_assert_eq!(got, naive(&a, &b));
            prop_assert_eq!(p.index(), 3);
            prop_assert_eq!(p.weight(), 4);
        }
    }

    #[test]
    fn big_integer_fallback_agrees() {
        let huge = BigInt::from(10).pow(40);
        let a = JacobiFormQExp::from_terms(
            0,
            1,
            3,
            [(0, 0, Rational::from_integer(huge.clone())), (1, 1, int(3))],
        )
        .unwrap();
        let b = JacobiFormQExp::from_terms(0, 1, 3, [(0, 1, int(2)), (1, -1, rat(1, 7))]).unwrap();
        let p = a.multiply(&b);
        assert_eq!(p.coeff(0, 1).unwrap(), Rational::from_integer(&huge * 2));
        assert_eq!(p.coeff(1, -1).unwrap(), Rational::new(huge, BigInt::from(7)));
        assert_eq!(p.coeff(1, 2).unwrap(), int(6));
    }
}
