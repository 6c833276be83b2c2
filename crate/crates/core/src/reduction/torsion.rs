use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::{act, IntMatrix, QMatrix, SymMatQ, UnimodularMat};
use super::minkowski::minkowski_reduce;
use crate::arith::{int, Rational};
use crate::error::{Error, Result};

/// Completes a primitive integer vector to a unimodular matrix whose last row
/// is the vector.
pub fn unimodular_completion(v: &[i64]) -> Result<UnimodularMat> {
    let (_, inverse) = column_reduce(v)?;
    UnimodularMat::new(inverse)
}

/// Returns `(U, U^{-1})` with `v U = e_g` (last unit row vector).
///
/// Euclid on the entries of `v` by integer column operations; `U^{-1}` is
/// maintained by the inverse row operations, so its last row is `v`.
fn column_reduce(v: &[i64]) -> Result<(IntMatrix, IntMatrix)> {
    let g = v.len();
    if g == 0 {
        return Err(Error::SizeMismatch("empty vector".into()));
    }
    let content = v.iter().fold(0i64, |acc, x| acc.gcd(x));
    if content != 1 {
        return Err(Error::NotPrimitive(v.to_vec()));
    }
    let mut w = v.to_vec();
    let mut u = IntMatrix::identity(g);
    let mut inv = IntMatrix::identity(g);
    loop {
        let nonzero: Vec<usize> = (0..g).filter(|&i| w[i] != 0).collect();
        if nonzero.len() == 1 {
            break;
        }
        let pivot = *nonzero
            .iter()
            .min_by_key(|&&i| (w[i].abs(), i))
            .expect("nonempty");
        for &j in &nonzero {
            if j == pivot {
                continue;
            }
            let q = w[j].div_euclid(w[pivot]);
            if q != 0 {
                // col_j -= q col_pivot
                u.add_column(j, pivot, -q);
                inv.add_row(pivot, j, q);
                w[j] -= q * w[pivot];
            }
        }
    }
    let i = (0..g).find(|&i| w[i] != 0).expect("primitive vector");
    if i != g - 1 {
        u.swap_columns(i, g - 1);
        inv.swap_rows(i, g - 1);
        w.swap(i, g - 1);
    }
    if w[g - 1] < 0 {
        u.negate_column(g - 1);
        inv.negate_row(g - 1);
    }
    Ok((u, inv))
}

/// Output of [`torsion_decomposition`].
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionDecomposition {
    /// `u` in `GL_g(Z)`.
    pub u: UnimodularMat,
    /// Upper left `(g-1) x (g-1)` block, `|det rho| = M`.
    pub rho: IntMatrix,
    /// Upper right column.
    pub xi: Vec<i64>,
    /// Exact denominator of `lambda`.
    pub denominator: i64,
}

impl TorsionDecomposition {
    /// The permutation swapping the first and last coordinates.
    pub fn swap_matrix(g: usize) -> IntMatrix {
        let mut s = IntMatrix::identity(g);
        s.swap_columns(0, g - 1);
        s
    }

    /// Left side `[[1, 0], [-lambda^T, 1]] u` of the defining identity.
    pub fn left_side(&self, lambda: &[Rational]) -> Result<QMatrix> {
        let g = lambda.len() + 1;
        let mut shear = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in 0..g {
                shear.push(if i == j {
                    Rational::one()
                } else if i == g - 1 {
                    -lambda[j].clone()
                } else {
                    Rational::zero()
                });
            }
        }
        QMatrix::new(g, g, shear)?.mul(&self.u.matrix().to_rational())
    }

    /// Right side `[[rho, xi], [0, 1/M]] s` of the defining identity.
    pub fn right_side(&self) -> Result<QMatrix> {
        let g = self.xi.len() + 1;
        let mut block = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in 0..g {
                block.push(if i < g - 1 && j < g - 1 {
                    int(self.rho.get(i, j))
                } else if i < g - 1 {
                    int(self.xi[i])
                } else if j == g - 1 {
                    Rational::new(BigInt::one(), BigInt::from(self.denominator))
                } else {
                    Rational::zero()
                });
            }
        }
        QMatrix::new(g, g, block)?.mul(&Self::swap_matrix(g).to_rational())
    }
}

/// Exact common denominator of a rational vector.
pub fn common_denominator(lambda: &[Rational]) -> BigInt {
    lambda
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Finds `u`, `rho`, `xi` with
/// `[[1, 0], [-lambda^T, 1]] u = [[rho, xi], [0, 1/M]] s`.
///
/// `u` comes from column reducing the primitive vector `(-M lambda, M)`. If a
/// positive definite `target` of size `g - 1` is supplied, `u` is
/// post-composed with `diag(w, 1)` where `w` Minkowski-reduces
/// `target[rho]`, so the returned `rho` makes `target[rho]` reduced.
pub fn torsion_decomposition(
    lambda: &[Rational],
    denominator: i64,
    target: Option<&SymMatQ>,
) -> Result<TorsionDecomposition> {
    let s = lambda.len();
    if !(1..=3).contains(&s) {
        return Err(Error::UnsupportedGenus(s + 1));
    }
    if denominator < 1 || common_denominator(lambda) != BigInt::from(denominator) {
        return Err(Error::BadDenominator {
            denominator: denominator.unsigned_abs(),
            detail: format!(
                "exact denominator of lambda is {}",
                common_denominator(lambda)
            ),
        });
    }
    let mut v: Vec<i64> = lambda
        .iter()
        .map(|x| {
            (-x * int(denominator))
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::InvalidArgument("lambda too large".into()))
        })
        .collect::<Result<_>>()?;
    v.push(denominator);
    let (mut big_u, _) = column_reduce(&v)?;

    if let Some(n) = target {
        if n.size() != s {
            return Err(Error::SizeMismatch(format!(
                "target of size {} for lambda of length {s}",
                n.size()
            )));
        }
        let (_, w) = minkowski_reduce(&act(n, &upper_left(&big_u, s))?)?;
        let mut lift = IntMatrix::identity(s + 1);
        for i in 0..s {
            for j in 0..s {
                lift.set(i, j, w.matrix().get(i, j));
            }
        }
        big_u = big_u.mul(&lift)?;
    }

    let rho = upper_left(&big_u, s);
    let xi = (0..s).map(|i| big_u.get(i, s)).collect();
    let u = UnimodularMat::new(big_u.mul(&TorsionDecomposition::swap_matrix(s + 1))?)?;
    Ok(TorsionDecomposition {
        u,
        rho,
        xi,
        denominator,
    })
}

fn upper_left(m: &IntMatrix, s: usize) -> IntMatrix {
    let entries = (0..s)
        .flat_map(|i| (0..s).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j))
        .collect();
    IntMatrix::new(s, s, entries).expect("square block")
}
