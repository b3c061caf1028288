//! Exact scalar arithmetic and dense exact linear algebra.
//!
//! Scalars live in one of two domains: arbitrary-precision rationals or a
//! prime field F_p with p < 2^31. Rationals are always kept in lowest terms
//! with positive denominator, prime-field residues always reduced mod p.
//!
//! Linear algebra is deterministic: pivots are the first nonzero entry in
//! row-major order, so kernels, solutions and inverses are reproducible.
//! Over the rationals the forward elimination is fraction-free
//! (Bareiss-style) on a denominator-cleared integer matrix to bound
//! intermediate growth; over F_p plain Gauss-Jordan is used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

use crate::{Error, Result};

/// Coefficient domain tag: the rationals or a prime field F_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Rational,
    Prime(u64),
}

impl Domain {
    /// Prime-field domain; `p` must be prime (trial division) and < 2^31.
    pub fn prime(p: u64) -> Result<Domain> {
        if p >= 1 << 31 {
            return Err(Error::InvalidInput(format!("prime {p} exceeds 2^31 cap")));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(Domain::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            Domain::Rational => Scalar::Rational(BigRational::zero()),
            Domain::Prime(p) => Scalar::Prime { p: *p, residue: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Domain::Rational => Scalar::Rational(BigRational::one()),
            Domain::Prime(p) => Scalar::Prime { p: *p, residue: 1 % *p },
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            Domain::Rational => Scalar::Rational(BigRational::from(BigInt::from(v))),
            Domain::Prime(p) => {
                let m = v.rem_euclid(*p as i64) as u64;
                Scalar::Prime { p: *p, residue: m }
            }
        }
    }

    /// Parse a scalar in the file format: `"n"` or `"n/d"` over Q, a decimal
    /// residue over F_p (negative values are reduced).
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = |_| Error::InvalidInput(format!("malformed scalar {s:?}"));
        match self {
            Domain::Rational => {
                if let Some((n, d)) = s.split_once('/') {
                    let num: BigInt = n.trim().parse().map_err(bad)?;
                    let den: BigInt = d.trim().parse().map_err(bad)?;
                    if den.is_zero() {
                        return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
                    }
                    Ok(Scalar::Rational(BigRational::new(num, den)))
                } else {
                    let num: BigInt = s.parse().map_err(bad)?;
                    Ok(Scalar::Rational(BigRational::from(num)))
                }
            }
            Domain::Prime(p) => {
                let v: BigInt = s.parse().map_err(bad)?;
                let m = v.mod_floor(&BigInt::from(*p));
                let (_, digits) = m.to_u64_digits();
                Ok(Scalar::Prime {
                    p: *p,
                    residue: digits.first().copied().unwrap_or(0),
                })
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Rational => write!(f, "Q"),
            Domain::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime_u64(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact scalar: a reduced rational or a residue in [0, p).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { p: u64, residue: u64 },
}

impl Scalar {
    pub fn domain(&self) -> Domain {
        match self {
            Scalar::Rational(_) => Domain::Rational,
            Scalar::Prime { p, .. } => Domain::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { p, residue } => *residue == 1 % *p,
        }
    }

    fn same_domain(&self, other: &Scalar) -> Domain {
        let (a, b) = (self.domain(), other.domain());
        assert_eq!(a, b, "scalar domain mismatch: {a} vs {b}");
        a
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.same_domain(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { p, residue: a }, Scalar::Prime { residue: b, .. }) => Scalar::Prime {
                p: *p,
                residue: (a + b) % p,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.same_domain(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Prime { p, residue: a }, Scalar::Prime { residue: b, .. }) => Scalar::Prime {
                p: *p,
                residue: (a + p - b) % p,
            },
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.same_domain(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { p, residue: a }, Scalar::Prime { residue: b, .. }) => Scalar::Prime {
                p: *p,
                residue: (a * b) % p,
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { p, residue } => Scalar::Prime {
                p: *p,
                residue: (p - residue) % p,
            },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { p, residue } => Scalar::Prime {
                p: *p,
                residue: mod_inverse(*residue, *p),
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self.mul(&i))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid; a != 0, p prime
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i128) as u64
}

/// Coordinate vector helpers used throughout the crate.
pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn vec_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vec_sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vec_scale(s: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| s.mul(x)).collect()
}

fn dim_err(rows: usize, cols: usize, got: usize) -> Error {
    Error::InvalidInput(format!(
        "dimension mismatch: {rows}x{cols} against length {got}"
    ))
}

/// Dense matrix over a single exact domain, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    domain: Domain,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, domain: Domain, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(dim_err(rows, cols, entries.len()));
        }
        for e in &entries {
            if e.domain() != domain {
                return Err(Error::DomainMismatch(format!(
                    "matrix entry in {} but matrix declared over {domain}",
                    e.domain()
                )));
            }
        }
        Ok(Matrix {
            rows,
            cols,
            domain,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, domain: Domain, f: impl Fn(usize, usize) -> Scalar) -> Matrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix::new(rows, cols, domain, entries).expect("from_fn builds consistent entries")
    }

    pub fn identity(n: usize, domain: Domain) -> Matrix {
        Matrix::from_fn(n, n, domain, |i, j| if i == j { domain.one() } else { domain.zero() })
    }

    pub fn zero(rows: usize, cols: usize, domain: Domain) -> Matrix {
        Matrix::from_fn(rows, cols, domain, |_, _| domain.zero())
    }

    /// Stack matrices with equal column counts on top of each other.
    pub fn vstack(blocks: &[Matrix]) -> Result<Matrix> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::InvalidInput("vstack of no blocks".into()))?;
        let cols = first.cols;
        let domain = first.domain;
        let mut entries = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.cols != cols || b.domain != domain {
                return Err(dim_err(b.rows, b.cols, cols));
            }
            rows += b.rows;
            entries.extend(b.entries.iter().cloned());
        }
        Matrix::new(rows, cols, domain, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.domain(), self.domain);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.domain, |i, j| self.get(j, i).clone())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, domain: Domain, cols: &[Vec<Scalar>]) -> Result<Matrix> {
        for c in cols {
            if c.len() != dim {
                return Err(dim_err(dim, cols.len(), c.len()));
            }
        }
        Ok(Matrix::from_fn(dim, cols.len(), domain, |i, j| cols[j][i].clone()))
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(dim_err(self.rows, self.cols, other.rows));
        }
        let d = self.domain;
        let mut out = Matrix::zero(self.rows, other.cols, d);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(dim_err(self.rows, self.cols, v.len()));
        }
        let mut out = vec![self.domain.zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for i in 0..self.rows {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                out[i] = out[i].add(&a.mul(x));
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        match self.domain {
            Domain::Rational => self.rref_rational(),
            Domain::Prime(_) => self.rref_prime(),
        }
    }

    /// Fraction-free (Bareiss) forward elimination on a denominator-cleared
    /// integer matrix, then pivot normalization and back-substitution in Q.
    fn rref_rational(&self) -> (Matrix, Vec<usize>) {
        // clear denominators row-wise (row scaling preserves row space)
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut lcm = BigInt::one();
                for e in row {
                    if let Scalar::Rational(r) = e {
                        lcm = lcm.lcm(r.denom());
                    }
                }
                row.iter()
                    .map(|e| match e {
                        Scalar::Rational(r) => r.numer() * (&lcm / r.denom()),
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect();

        let mut pivots: Vec<usize> = Vec::new();
        let mut prev_pivot = BigInt::one();
        let mut r = 0usize;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, pr);
            let pivot = m[r][c].clone();
            for i in r + 1..self.rows {
                if m[i][c].is_zero() {
                    // still rescale to keep the Bareiss division exact
                    for j in 0..self.cols {
                        let v = &m[i][j] * &pivot;
                        m[i][j] = v / &prev_pivot;
                    }
                    continue;
                }
                let factor = m[i][c].clone();
                for j in 0..self.cols {
                    let v = &m[i][j] * &pivot - &factor * &m[r][j];
                    m[i][j] = v / &prev_pivot;
                }
            }
            prev_pivot = pivot;
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }

        // normalize pivots and eliminate above, over Q
        let mut q: Vec<Vec<BigRational>> = m
            .into_iter()
            .map(|row| row.into_iter().map(BigRational::from).collect())
            .collect();
        for (ri, &c) in pivots.iter().enumerate() {
            let inv = q[ri][c].clone().recip();
            for j in 0..self.cols {
                let v = &q[ri][j] * &inv;
                q[ri][j] = v;
            }
            for i in 0..ri {
                if q[i][c].is_zero() {
                    continue;
                }
                let f = q[i][c].clone();
                for j in 0..self.cols {
                    let v = &q[i][j] - &f * &q[ri][j];
                    q[i][j] = v;
                }
            }
        }
        let entries = q
            .into_iter()
            .flat_map(|row| row.into_iter().map(Scalar::Rational))
            .collect();
        let out = Matrix::new(self.rows, self.cols, self.domain, entries).expect("rref shape");
        (out, pivots)
    }

    fn rref_prime(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                let tmp = m.get(r, j).clone();
                m.set(r, j, m.get(pr, j).clone());
                m.set(pr, j, tmp);
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(r, j).mul(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).sub(&f.mul(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space. Every returned vector v satisfies m·v = 0 and
    /// rank + basis.len() = cols.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (rref, pivots) = self.rref();
        let pivot_row: std::collections::HashMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_row.contains_key(&free) {
                continue;
            }
            let mut v = vec![self.domain.zero(); self.cols];
            v[free] = self.domain.one();
            for (&c, &r) in &pivot_row {
                v[c] = rref.get(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Exact solution of self·x = b, or `None` when b is outside the column
    /// span. Free variables are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(dim_err(self.rows, self.cols, b.len()));
        }
        let mut aug = Matrix::zero(self.rows, self.cols + 1, self.domain);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (rref, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.domain.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = rref.get(r, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Two-sided inverse, or `None` when singular.
    pub fn inverse(&self) -> Result<Option<Matrix>> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput(format!(
                "inverse of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n, self.domain);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.domain.one());
        }
        let (rref, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(r, &c)| r != c) {
            return Ok(None);
        }
        let inv = Matrix::from_fn(n, n, self.domain, |i, j| rref.get(i, n + j).clone());
        Ok(Some(inv))
    }
}

/// True when v lies in the span of the given vectors (all of length `dim`).
pub fn span_contains(dim: usize, domain: Domain, basis: &[Vec<Scalar>], v: &[Scalar]) -> Result<bool> {
    if vec_is_zero(v) {
        return Ok(true);
    }
    let m = Matrix::from_columns(dim, domain, basis)?;
    Ok(m.solve(v)?.is_some())
}

/// True when two families of vectors span the same subspace.
pub fn spans_equal(dim: usize, domain: Domain, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Result<bool> {
    let ra = Matrix::from_columns(dim, domain, a)?.rank();
    let rb = Matrix::from_columns(dim, domain, b)?.rank();
    if ra != rb {
        return Ok(false);
    }
    let mut all: Vec<Vec<Scalar>> = a.to_vec();
    all.extend_from_slice(b);
    Ok(Matrix::from_columns(dim, domain, &all)?.rank() == ra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn qi(n: i64) -> Scalar {
        q(n, 1)
    }

    #[test]
    fn rational_normal_form() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(-1, -2), q(1, 2));
        assert_eq!(q(1, -2), q(-1, 2));
        assert_eq!(q(3, 1).to_string(), "3");
        assert_eq!(q(-1, 2).to_string(), "-1/2");
    }

    #[test]
    fn prime_domain_validation() {
        assert!(Domain::prime(7).is_ok());
        assert!(Domain::prime(1).is_err());
        assert!(Domain::prime(9).is_err());
        assert!(Domain::prime(1 << 31).is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let d = Domain::prime(7).unwrap();
        let a = d.from_i64(5);
        let b = d.from_i64(4);
        assert_eq!(a.mul(&b), d.from_i64(6));
        assert_eq!(a.add(&b), d.from_i64(2));
        assert_eq!(a.inv().unwrap(), d.from_i64(3)); // 5*3 = 15 = 1 mod 7
        assert_eq!(d.from_i64(-1), d.from_i64(6));
    }

    #[test]
    fn scalar_parse_round_trip() {
        let d = Domain::Rational;
        for s in ["0", "7", "-3", "1/2", "-11/13"] {
            assert_eq!(d.parse(s).unwrap().to_string(), s);
        }
        let p = Domain::prime(5).unwrap();
        assert_eq!(p.parse("-1").unwrap(), p.from_i64(4));
        assert!(d.parse("1/0").is_err());
        assert!(d.parse("x").is_err());
    }

    #[test]
    fn kernel_identity_is_empty() {
        let m = Matrix::identity(3, Domain::Rational);
        assert!(m.kernel().is_empty());
    }

    #[test]
    fn kernel_zero_matrix_is_standard_basis() {
        let m = Matrix::zero(2, 2, Domain::Rational);
        let k = m.kernel();
        assert_eq!(k, vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]]);
    }

    #[test]
    fn kernel_rank_one_2x2() {
        // hand elimination: [[1,1],[2,2]] has kernel spanned by (1,-1)
        let m = Matrix::new(2, 2, Domain::Rational, vec![qi(1), qi(1), qi(2), qi(2)]).unwrap();
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(vec_is_zero(&m.mul_vec(&k[0]).unwrap()));
        // up to scaling: (-1, 1) in our deterministic form
        assert_eq!(k[0], vec![qi(-1), qi(1)]);
    }

    #[test]
    fn solve_identity_and_scaling() {
        let id = Matrix::identity(2, Domain::Rational);
        let b = vec![qi(3), qi(-5)];
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);

        let m = Matrix::new(1, 1, Domain::Rational, vec![qi(2)]).unwrap();
        assert_eq!(m.solve(&[qi(1)]).unwrap().unwrap(), vec![q(1, 2)]);
    }

    #[test]
    fn solve_inconsistent_returns_none() {
        let m = Matrix::new(2, 1, Domain::Rational, vec![qi(1), qi(1)]).unwrap();
        assert!(m.solve(&[qi(0), qi(1)]).unwrap().is_none());
    }

    #[test]
    fn inverse_examples() {
        let id = Matrix::identity(3, Domain::Rational);
        assert_eq!(id.inverse().unwrap().unwrap(), id);

        let swap = Matrix::new(2, 2, Domain::Rational, vec![qi(0), qi(1), qi(1), qi(0)]).unwrap();
        assert_eq!(swap.inverse().unwrap().unwrap(), swap);

        let sing = Matrix::new(2, 2, Domain::Rational, vec![qi(1), qi(1), qi(1), qi(1)]).unwrap();
        assert!(sing.inverse().unwrap().is_none());

        let rect = Matrix::zero(2, 3, Domain::Rational);
        assert!(rect.inverse().is_err());
    }

    #[test]
    fn matrix_rejects_mixed_domains() {
        let p = Domain::prime(3).unwrap();
        let err = Matrix::new(1, 2, Domain::Rational, vec![qi(1), p.from_i64(1)]);
        assert!(matches!(err, Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn kernel_over_prime_field() {
        let d = Domain::prime(5).unwrap();
        let m = Matrix::new(
            2,
            3,
            d,
            vec![
                d.from_i64(1),
                d.from_i64(2),
                d.from_i64(3),
                d.from_i64(2),
                d.from_i64(4),
                d.from_i64(1),
            ],
        )
        .unwrap();
        let k = m.kernel();
        assert_eq!(m.rank() + k.len(), 3);
        for v in &k {
            assert!(vec_is_zero(&m.mul_vec(v).unwrap()));
        }
    }

    #[test]
    fn span_helpers() {
        let d = Domain::Rational;
        let b = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        assert!(span_contains(2, d, &b[..1], &[qi(3), qi(0)]).unwrap());
        assert!(!span_contains(2, d, &b[..1], &[qi(3), qi(1)]).unwrap());
        assert!(spans_equal(2, d, &b, &[vec![qi(1), qi(1)], vec![qi(1), qi(-1)]]).unwrap());
        assert!(!spans_equal(2, d, &b[..1], &b).unwrap());
    }

    fn arb_rat() -> impl Strategy<Value = Scalar> {
        (-20i64..20, 1i64..12).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in arb_rat(), b in arb_rat(), c in arb_rat()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b.add(&c)), a.add(&b).add(&c));
            prop_assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn kernel_annihilates_and_rank_nullity(
            entries in proptest::collection::vec(-6i64..6, 12)
        ) {
            let m = Matrix::new(4, 3, Domain::Rational,
                entries.iter().map(|&v| qi(v)).collect()).unwrap();
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.len(), 3);
            for v in &k {
                prop_assert!(vec_is_zero(&m.mul_vec(v).unwrap()));
            }
            // returned vectors are linearly independent
            if !k.is_empty() {
                let mk = Matrix::from_columns(3, Domain::Rational, &k).unwrap();
                prop_assert_eq!(mk.rank(), k.len());
            }
        }
    }
}
