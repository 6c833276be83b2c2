use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{format_rational, int, parse_rational, Rational};
use crate::error::{Error, Result};

/// Dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::SizeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::SizeMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix {
            rows: n,
            cols: n,
            entries: vec![0; n * n],
        };
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: vec![0; self.rows * other.cols],
        };
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s = (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: vec![0; self.rows * self.cols],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Determinant by cofactor expansion (square matrices of small size).
    pub fn det(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(Error::SizeMismatch("determinant of a non-square matrix".into()));
        }
        Ok(det_cofactor(&self.entries, self.rows))
    }

    pub fn to_rational(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&x| int(x)).collect(),
        }
    }

    pub(crate) fn swap_columns(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `col_dst += factor * col_src`
    pub(crate) fn add_column(&mut self, dst: usize, src: usize, factor: i64) {
        for i in 0..self.rows {
            let v = self.get(i, dst) + factor * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    /// `row_dst += factor * row_src`
    pub(crate) fn add_row(&mut self, dst: usize, src: usize, factor: i64) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + factor * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    pub(crate) fn negate_column(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

fn det_cofactor(entries: &[i64], n: usize) -> i64 {
    match n {
        0 => 1,
        1 => entries[0],
        2 => entries[0] * entries[3] - entries[1] * entries[2],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<i64> = (1..n)
                    .flat_map(|i| (0..n).filter(move |&c| c != j).map(move |c| (i, c)))
                    .map(|(i, c)| entries[i * n + c])
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * entries[j] * det_cofactor(&minor, n - 1)
            })
            .sum(),
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(i64::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Integer matrix with determinant `+1` or `-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnimodularMat(IntMatrix);

impl UnimodularMat {
    pub fn new(m: IntMatrix) -> Result<Self> {
        let d = m.det()?;
        if d.abs() != 1 {
            return Err(Error::NotUnimodular(d));
        }
        Ok(UnimodularMat(m))
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMat(IntMatrix::identity(n))
    }

    pub fn swap() -> Self {
        UnimodularMat(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).expect("2x2"))
    }

    pub fn det(&self) -> i64 {
        self.0.det().expect("square")
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_inner(self) -> IntMatrix {
        self.0
    }

    pub fn mul(&self, other: &UnimodularMat) -> Result<UnimodularMat> {
        Ok(UnimodularMat(self.0.mul(&other.0)?))
    }
}

impl fmt::Display for UnimodularMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::SizeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(QMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut s = Rational::zero();
                for k in 0..self.cols {
                    s += self.get(i, k) * other.get(k, j);
                }
                entries.push(s);
            }
        }
        QMatrix::new(self.rows, other.cols, entries)
    }
}

/// Symmetric rational matrix of size 1, 2 or 3.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymMatQ {
    size: usize,
    entries: Vec<Rational>,
}

impl SymMatQ {
    pub fn new(size: usize, entries: Vec<Rational>) -> Result<Self> {
        if !(1..=3).contains(&size) {
            return Err(Error::SizeMismatch(format!("unsupported size {size}")));
        }
        if entries.len() != size * size {
            return Err(Error::SizeMismatch(format!(
                "{} entries for size {size}",
                entries.len()
            )));
        }
        for i in 0..size {
            for j in 0..i {
                if entries[i * size + j] != entries[j * size + i] {
                    return Err(Error::InvalidArgument("matrix is not symmetric".into()));
                }
            }
        }
        Ok(SymMatQ { size, entries })
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::SizeMismatch("matrix is not square".into()));
        }
        Self::new(size, rows.concat())
    }

    pub fn identity(size: usize) -> Self {
        let entries = (0..size * size)
            .map(|k| if k / size == k % size { int(1) } else { int(0) })
            .collect();
        SymMatQ { size, entries }
    }

    pub fn scalar(value: Rational) -> Self {
        SymMatQ {
            size: 1,
            entries: vec![value],
        }
    }

    /// The genus-two index `[[n, r/2], [r/2, m]]`.
    pub fn binary(n: Rational, r: Rational, m: Rational) -> Self {
        let half = &r / int(2);
        SymMatQ {
            size: 2,
            entries: vec![n, half.clone(), half, m],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Upper triangle in row-major order.
    pub fn upper(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for i in 0..self.size {
            for j in i..self.size {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        QMatrix {
            rows: self.size,
            cols: self.size,
            entries: self.entries.clone(),
        }
    }

    fn minor(&self, k: usize) -> Rational {
        let e = |i: usize, j: usize| self.get(i, j);
        match k {
            1 => e(0, 0).clone(),
            2 => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
            3 => {
                e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
                    - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                    + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
            }
            _ => unreachable!("sizes are at most three"),
        }
    }

    pub fn det(&self) -> Rational {
        self.minor(self.size)
    }

    /// Quadratic form value `v^T A v`.
    pub fn eval(&self, v: &[i64]) -> Rational {
        let mut s = Rational::zero();
        for i in 0..self.size {
            for j in 0..self.size {
                let c = v[i] * v[j];
                if c != 0 {
                    s += self.get(i, j) * int(c);
                }
            }
        }
        s
    }

    /// Parses `"a,b;b,c"` with rational entries `p/q`.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Result<Vec<Vec<Rational>>> = text
            .split(';')
            .map(|row| row.split(',').map(parse_rational).collect())
            .collect();
        Self::from_rows(&rows?)
    }

    pub fn to_text(&self) -> String {
        (0..self.size)
            .map(|i| {
                (0..self.size)
                    .map(|j| {
                        let q = self.get(i, j);
                        if q.is_integer() {
                            q.numer().to_string()
                        } else {
                            format_rational(q)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Display for SymMatQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// True iff all leading principal minors are positive.
pub fn is_positive_definite(a: &SymMatQ) -> bool {
    (1..=a.size).all(|k| a.minor(k) > Rational::zero())
}

/// `t[u] = u^T t u`.
pub fn act(t: &SymMatQ, u: &IntMatrix) -> Result<SymMatQ> {
    if u.rows() != t.size || u.cols() != t.size {
        return Err(Error::SizeMismatch(format!(
            "cannot act on a size-{} matrix by a {}x{} matrix",
            t.size,
            u.rows(),
            u.cols()
        )));
    }
    let n = t.size;
    let mut entries = vec![Rational::zero(); n * n];
    for i in 0..n {
        for j in i..n {
            let mut s = Rational::zero();
            for k in 0..n {
                for l in 0..n {
                    let c = u.get(k, i) * u.get(l, j);
                    if c != 0 {
                        s += t.get(k, l) * int(c);
                    }
                }
            }
            entries[j * n + i] = s.clone();
            entries[i * n + j] = s;
        }
    }
    Ok(SymMatQ { size: n, entries })
}

/// Genus-two Fourier index `t = [[n, r/2], [r/2, m]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfIntIndex {
    pub n: Rational,
    pub r: Rational,
    pub m: BigInt,
}

impl HalfIntIndex {
    pub fn new(n: Rational, r: Rational, m: i64) -> Self {
        HalfIntIndex {
            n,
            r,
            m: BigInt::from(m),
        }
    }

    pub fn integral(n: i64, r: i64, m: i64) -> Self {
        Self::new(int(n), int(r), m)
    }

    pub fn matrix(&self) -> SymMatQ {
        SymMatQ::binary(
            self.n.clone(),
            self.r.clone(),
            Rational::from_integer(self.m.clone()),
        )
    }

    /// Reads `[[n, r/2], [r/2, m]]` back; `None` unless `m` is an integer.
    pub fn from_matrix(t: &SymMatQ) -> Option<Self> {
        if t.size() != 2 || !t.get(1, 1).is_integer() {
            return None;
        }
        Some(HalfIntIndex {
            n: t.get(0, 0).clone(),
            r: t.get(0, 1) * int(2),
            m: t.get(1, 1).to_integer(),
        })
    }

    /// `4 det t = 4nm - r^2`.
    pub fn discriminant(&self) -> Rational {
        int(4) * &self.n * Rational::from_integer(self.m.clone()) - &self.r * &self.r
    }

    /// Positive semidefinite (`n, m >= 0` and `4nm - r^2 >= 0`).
    pub fn is_semidefinite(&self) -> bool {
        !self.n.is_negative() && !self.m.is_negative() && !self.discriminant().is_negative()
    }

    /// `(n, r, m)` when all three are integers.
    pub fn as_integers(&self) -> Option<(i64, i64, i64)> {
        use num_traits::ToPrimitive;
        if !self.n.is_integer() || !self.r.is_integer() {
            return None;
        }
        Some((
            self.n.to_integer().to_i64()?,
            self.r.to_integer().to_i64()?,
            self.m.to_i64()?,
        ))
    }
}

impl fmt::Display for HalfIntIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, r={}, m={})", self.n, self.r, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn m2(a: i64, b: i64, c: i64) -> SymMatQ {
        SymMatQ::from_rows(&[vec![int(a), int(b)], vec![int(b), int(c)]]).unwrap()
    }

    #[test]
    fn positive_definite_examples() {
        assert!(is_positive_definite(&SymMatQ::identity(2)));
        assert!(!is_positive_definite(&m2(1, 2, 1)));
        assert!(is_positive_definite(&m2(2, 1, 2)));
        assert!(!is_positive_definite(&m2(0, 0, 1)));
        assert!(is_positive_definite(&SymMatQ::identity(3)));
    }

    #[test]
    fn act_examples() {
        let (n, r, m) = (rat(3, 2), int(1), int(5));
        let t = SymMatQ::binary(n.clone(), r.clone(), m.clone());
        assert_eq!(act(&t, &IntMatrix::identity(2)).unwrap(), t);
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(
            act(&t, &swap).unwrap(),
            SymMatQ::binary(m.clone(), r.clone(), n.clone())
        );
        let shear = IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        // direct multiplication: [[1,1],[0,1]] t [[1,0],[1,1]]
        let expected = SymMatQ::binary(&n + &r + &m, &r + int(2) * &m, m.clone());
        assert_eq!(act(&t, &shear).unwrap(), expected);
        assert!(act(&t, &IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn parse_text_matrices() {
        let a = SymMatQ::parse("5,4;4,5").unwrap();
        assert_eq!(a, m2(5, 4, 5));
        let b = SymMatQ::parse("1/2, 1/4; 1/4, 3").unwrap();
        assert_eq!(b.get(0, 1), &rat(1, 4));
        assert_eq!(b.to_text(), "1/2,1/4;1/4,3");
        assert!(SymMatQ::parse("1,2;3,4").is_err());
        assert!(SymMatQ::parse("1,2").is_err());
    }

    #[test]
    fn unimodular_requires_unit_determinant() {
        assert!(UnimodularMat::new(IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap()).is_err());
        assert_eq!(UnimodularMat::swap().det(), -1);
    }

    fn arb_int_matrix() -> impl Strategy<Value = IntMatrix> {
        prop::collection::vec(-4i64..5, 4).prop_map(|e| IntMatrix::new(2, 2, e).unwrap())
    }

    proptest! {
        #[test]
        fn act_is_a_right_action(
            a in 1i64..20, b in -10i64..10, c in 1i64..20, d in 1i64..5,
            u in arb_int_matrix(), v in arb_int_matrix()
        ) {
            let t = SymMatQ::from_rows(&[vec![rat(a, d), rat(b, 2 * d)], vec![rat(b, 2 * d), int(c)]]).unwrap();
            let lhs = act(&act(&t, &u).unwrap(), &v).unwrap();
            let rhs = act(&t, &u.mul(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
