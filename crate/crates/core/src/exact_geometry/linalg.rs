use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::{ChambrierError, Result};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || ChambrierError::Validation(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn scale(v: &[Q], s: &Q) -> Vec<Q> {
    v.iter().map(|x| x * s).collect()
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| -x).collect()
}

/// Clears denominators and divides by the content. When `normalize_sign` is set
/// the first nonzero entry is made positive.
pub fn primitive_int(v: &[Q], normalize_sign: bool) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * qi(&lcm)).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let mut out: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
    if normalize_sign {
        if let Some(first) = out.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                out.iter_mut().for_each(|x| *x = -x.clone());
            }
        }
    }
    out
}

pub fn ints_to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(qi).collect()
}

/// Dense rational matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Q>], cols: usize) -> Self {
        let mut m = Mat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_cols(cols: &[Vec<Q>], rows: usize) -> Self {
        Mat::from_rows(cols, rows).transpose()
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let qrows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Mat::from_rows(&qrows, cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Q> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut m = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = m.get(i, j) + a * b;
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect()
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.rows, v.len());
        (0..self.cols)
            .map(|j| (0..self.rows).fold(Q::zero(), |acc, i| acc + &v[i] * self.get(i, j)))
            .collect()
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.rows)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right nullspace, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(k, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Q::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        let mut inv = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = r.get(k, self.cols).clone();
        }
        Some(x)
    }
}

/// Canonical basis (reduced echelon rows) of the row space of `rows`.
pub fn row_space_basis(rows: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Mat::from_rows(rows, dim).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

/// Vector of rationals expressed in the simple-coroot basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RatVec(pub Vec<Q>);

impl RatVec {
    pub fn zeros(n: usize) -> Self {
        RatVec(vec![Q::zero(); n])
    }
    pub fn from_i64(v: &[i64]) -> Self {
        RatVec(v.iter().map(|&x| q(x)).collect())
    }
    pub fn dim(&self) -> usize {
        self.0.len()
    }
    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.0)
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(fmt_q).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Serializes a rational sequence as `"p/q"` strings.
pub fn ser_qvec<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(fmt_q).collect();
    strs.serialize(s)
}

pub fn de_qvec<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
    let strs: Vec<String> = Vec::deserialize(d)?;
    strs.iter()
        .map(|s| parse_q(s).map_err(serde::de::Error::custom))
        .collect()
}

impl Serialize for RatVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ser_qvec(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for RatVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        de_qvec(d).map(RatVec)
    }
}

/// Linear form on the ambient space, evaluated as the dot product with coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LinForm {
    pub coeffs: Vec<Q>,
}

impl LinForm {
    pub fn new(coeffs: Vec<Q>) -> Self {
        LinForm { coeffs }
    }
    pub fn from_i64(v: &[i64]) -> Self {
        LinForm { coeffs: v.iter().map(|&x| q(x)).collect() }
    }
    pub fn from_ints(v: &[BigInt]) -> Self {
        LinForm { coeffs: ints_to_q(v) }
    }
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }
    pub fn eval(&self, x: &[Q]) -> Q {
        dot(&self.coeffs, x)
    }
    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }
    pub fn neg(&self) -> LinForm {
        LinForm { coeffs: neg(&self.coeffs) }
    }
    /// Canonical primitive integer representative with first nonzero entry positive.
    pub fn canonical(&self) -> Vec<BigInt> {
        primitive_int(&self.coeffs, true)
    }
    /// Primitive integer multiple by a positive factor (orientation kept).
    pub fn primitive_oriented(&self) -> Vec<BigInt> {
        primitive_int(&self.coeffs, false)
    }
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_q).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Gram-weighted inner product `x^T G y`.
pub fn gram_dot(g: &Mat, x: &[Q], y: &[Q]) -> Q {
    dot(x, &g.apply(y))
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn sign_of(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
