//! Exact dense matrices over the rationals and over prime fields.
//!
//! Rank over ℚ uses fraction-free (Bareiss) elimination on an integer
//! rescaling of the rows, so intermediate entries stay bounded by minors of
//! the input instead of accumulating denominators. Over 𝔽_p every entry is a
//! residue in `[0, p)` and elimination is the textbook one.
//!
//! Matrices with zero rows or zero columns are ordinary values with rank 0.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Prime used for generic-point sampling.
pub const DEFAULT_PRIME: u32 = 32003;

/// The ground field of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// A prime field; rejects composite moduli and moduli that do not fit the
    /// residue representation.
    pub fn prime(p: u64) -> Result<Field> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(self) -> u32 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn ensure_same(self, other: Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self,
                right: other,
            })
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix("Fp:")
            .ok_or_else(|| Error::Parse(format!("unknown field tag {s:?}")))?;
        let p: u64 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime in field tag {s:?}")))?;
        Field::prime(p)
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// A single field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u32, p: u32 },
}

impl Scalar {
    pub fn zero(field: Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
            Field::Prime(p) => Scalar::Residue {
                value: v.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    /// Builds `num/den` in `field`; over 𝔽_p the denominator must be a unit.
    pub fn from_fraction(field: Field, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        match field {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(p) => {
                let ops = PrimeOps { p: p as u64 };
                let n = reduce_mod(num, p);
                let d = reduce_mod(den, p);
                if d == 0 {
                    return Err(Error::ZeroDenominator);
                }
                Ok(Scalar::Residue {
                    value: ops.mul(&n, &ops.inv(&d)),
                    p,
                })
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Residue { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.binary(other, |a, b| a + b, |ops, a, b| ops.add(a, b))
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.binary(other, |a, b| a - b, |ops, a, b| ops.sub(a, b))
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.binary(other, |a, b| a * b, |ops, a, b| ops.mul(a, b))
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: PrimeOps { p: *p as u64 }.sub(&0, value),
                p: *p,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Singular);
        }
        Ok(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: PrimeOps { p: *p as u64 }.inv(value),
                p: *p,
            },
        })
    }

    fn binary(
        &self,
        other: &Scalar,
        rational: impl Fn(&BigRational, &BigRational) -> BigRational,
        residue: impl Fn(&PrimeOps, &u32, &u32) -> u32,
    ) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(rational(a, b))),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, p: q }) if p == q => {
                Ok(Scalar::Residue {
                    value: residue(&PrimeOps { p: *p as u64 }, a, b),
                    p: *p,
                })
            }
            _ => Err(Error::FieldMismatch {
                left: self.field(),
                right: other.field(),
            }),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn reduce_mod(v: &BigInt, p: u32) -> u32 {
    v.mod_floor(&BigInt::from(p)).to_u32().expect("residue fits u32")
}

/// Arithmetic of one concrete field on unboxed entries.
trait FieldOps {
    type E: Clone + PartialEq;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Caller guarantees `a` is nonzero.
    fn inv(&self, a: &Self::E) -> Self::E;
}

struct RationalOps;

impl FieldOps for RationalOps {
    type E = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

#[derive(Clone, Copy)]
struct PrimeOps {
    p: u64,
}

impl FieldOps for PrimeOps {
    type E = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p - *b as u64) % self.p) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p) as u32
    }
    fn inv(&self, a: &u32) -> u32 {
        // Fermat: a^(p-2)
        let mut base = *a as u64 % self.p;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Entries {
    Rational(Vec<BigRational>),
    Residue(Vec<u32>),
}

/// A dense row-major matrix with exact entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Entries,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> ExactMatrix {
        let entries = match field {
            Field::Rational => Entries::Rational(vec![BigRational::zero(); rows * cols]),
            Field::Prime(_) => Entries::Residue(vec![0; rows * cols]),
        };
        ExactMatrix {
            rows,
            cols,
            field,
            entries,
        }
    }

    pub fn identity(field: Field, n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set_i64(i, i, 1);
        }
        m
    }

    /// Builds a matrix from integer rows. The row count is `rows.len()`; use
    /// [`ExactMatrix::from_i64_shape`] for matrices with zero columns.
    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Result<ExactMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        ExactMatrix::from_i64_shape(field, rows.len(), cols, &flat)
    }

    pub fn from_i64_shape(field: Field, rows: usize, cols: usize, flat: &[i64]) -> Result<ExactMatrix> {
        if flat.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                flat.len()
            )));
        }
        let mut m = ExactMatrix::zeros(field, rows, cols);
        for (k, &v) in flat.iter().enumerate() {
            m.set_i64(k / cols.max(1), k % cols.max(1), v);
        }
        Ok(m)
    }

    /// Residue matrix straight from values already reduced mod `p`.
    pub fn from_residues(p: u32, rows: usize, cols: usize, values: Vec<u32>) -> Result<ExactMatrix> {
        let field = Field::prime(p as u64)?;
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        if values.iter().any(|&v| v >= p) {
            return Err(Error::Parse(format!("residue out of range mod {p}")));
        }
        Ok(ExactMatrix {
            rows,
            cols,
            field,
            entries: Entries::Residue(values),
        })
    }

    /// Like [`ExactMatrix::from_residues`] for a field already known to be
    /// prime; skips the primality and range checks.
    pub(crate) fn from_residues_in(field: Field, rows: usize, cols: usize, values: Vec<u32>) -> ExactMatrix {
        debug_assert!(matches!(field, Field::Prime(_)) && values.len() == rows * cols);
        ExactMatrix {
            rows,
            cols,
            field,
            entries: Entries::Residue(values),
        }
    }

    /// Uniform entries over `F_p`; integers in `-9..=9` over `Q`.
    pub fn random<R: rand::Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> ExactMatrix {
        let entries = match field {
            Field::Rational => Entries::Rational(
                (0..rows * cols)
                    .map(|_| BigRational::from_integer(BigInt::from(rng.random_range(-9i64..=9))))
                    .collect(),
            ),
            Field::Prime(p) => Entries::Residue((0..rows * cols).map(|_| rng.random_range(0..p)).collect()),
        };
        ExactMatrix {
            rows,
            cols,
            field,
            entries,
        }
    }

    /// Random invertible matrix, by rejection.
    pub fn random_invertible<R: rand::Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> ExactMatrix {
        loop {
            let m = ExactMatrix::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let k = i * self.cols + j;
        match (&self.entries, self.field) {
            (Entries::Rational(v), _) => Scalar::Rational(v[k].clone()),
            (Entries::Residue(v), Field::Prime(p)) => Scalar::Residue { value: v[k], p },
            _ => unreachable!("entry storage matches field"),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) -> Result<()> {
        self.field.ensure_same(value.field())?;
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let k = i * self.cols + j;
        match (&mut self.entries, value) {
            (Entries::Rational(v), Scalar::Rational(q)) => v[k] = q,
            (Entries::Residue(v), Scalar::Residue { value, .. }) => v[k] = value,
            _ => unreachable!(),
        }
        Ok(())
    }

    pub fn set_i64(&mut self, i: usize, j: usize, value: i64) {
        let k = i * self.cols + j;
        match (&mut self.entries, self.field) {
            (Entries::Rational(v), _) => v[k] = BigRational::from_integer(value.into()),
            (Entries::Residue(v), Field::Prime(p)) => v[k] = value.rem_euclid(p as i64) as u32,
            _ => unreachable!(),
        }
    }

    /// Residues in row-major order, for prime-field matrices.
    pub fn residues(&self) -> Option<&[u32]> {
        match &self.entries {
            Entries::Residue(v) => Some(v),
            Entries::Rational(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Rational(v) => v.iter().all(Zero::is_zero),
            Entries::Residue(v) => v.iter().all(|&x| x == 0),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e == Scalar::one(self.field)
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> ExactMatrix {
        let (r, c) = (self.rows, self.cols);
        let entries = match &self.entries {
            Entries::Rational(v) => {
                Entries::Rational((0..r * c).map(|k| v[(k % r) * c + k / r].clone()).collect())
            }
            Entries::Residue(v) => Entries::Residue((0..r * c).map(|k| v[(k % r) * c + k / r]).collect()),
        };
        ExactMatrix {
            rows: c,
            cols: r,
            field: self.field,
            entries,
        }
    }

    /// The submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ExactMatrix {
        let entries = match &self.entries {
            Entries::Rational(v) => Entries::Rational(
                rows.iter()
                    .flat_map(|&i| cols.iter().map(move |&j| v[i * self.cols + j].clone()))
                    .collect(),
            ),
            Entries::Residue(v) => Entries::Residue(
                rows.iter()
                    .flat_map(|&i| cols.iter().map(move |&j| v[i * self.cols + j]))
                    .collect(),
            ),
        };
        ExactMatrix {
            rows: rows.len(),
            cols: cols.len(),
            field: self.field,
            entries,
        }
    }

    /// The northwest submatrix with `rows` rows and `cols` columns.
    pub fn top_left(&self, rows: usize, cols: usize) -> ExactMatrix {
        let r: Vec<usize> = (0..rows).collect();
        let c: Vec<usize> = (0..cols).collect();
        self.select(&r, &c)
    }

    /// Row rank by exact elimination.
    pub fn rank(&self) -> usize {
        self.pivot_columns().len()
    }

    /// Columns that raise the rank when scanning left to right. Its length
    /// is the rank, and the number of pivots below `c` is the rank of the
    /// first `c` columns.
    pub fn pivot_columns(&self) -> Vec<usize> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        match (&self.entries, self.field) {
            (Entries::Rational(v), _) => bareiss_pivots(self.rows, self.cols, v),
            (Entries::Residue(v), Field::Prime(p)) => {
                gauss_pivots(&PrimeOps { p: p as u64 }, self.rows, self.cols, v.clone())
            }
            _ => unreachable!(),
        }
    }

    pub fn multiply(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        self.field.ensure_same(other.field)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = match (&self.entries, &other.entries, self.field) {
            (Entries::Rational(a), Entries::Rational(b), _) => {
                Entries::Rational(mat_mul(&RationalOps, self.rows, self.cols, other.cols, a, b))
            }
            (Entries::Residue(a), Entries::Residue(b), Field::Prime(p)) => Entries::Residue(mat_mul(
                &PrimeOps { p: p as u64 },
                self.rows,
                self.cols,
                other.cols,
                a,
                b,
            )),
            _ => unreachable!(),
        };
        Ok(ExactMatrix {
            rows: self.rows,
            cols: other.cols,
            field: self.field,
            entries,
        })
    }

    pub fn inverse(&self) -> Result<ExactMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let entries = match (&self.entries, self.field) {
            (Entries::Rational(v), _) => Entries::Rational(gauss_jordan_inverse(&RationalOps, n, v.clone())?),
            (Entries::Residue(v), Field::Prime(p)) => {
                Entries::Residue(gauss_jordan_inverse(&PrimeOps { p: p as u64 }, n, v.clone())?)
            }
            _ => unreachable!(),
        };
        Ok(ExactMatrix {
            rows: n,
            cols: n,
            field: self.field,
            entries,
        })
    }

    /// Block-diagonal sum `[[self, 0], [0, other]]`.
    pub fn direct_sum(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        assemble_blocks(
            self.field,
            &[self.rows, other.rows],
            &[self.cols, other.cols],
            &[vec![Some(self), None], vec![None, Some(other)]],
        )
    }

    fn write_block(&mut self, row0: usize, col0: usize, block: &ExactMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                let src = i * block.cols + j;
                let dst = (row0 + i) * self.cols + col0 + j;
                match (&mut self.entries, &block.entries) {
                    (Entries::Rational(d), Entries::Rational(s)) => d[dst] = s[src].clone(),
                    (Entries::Residue(d), Entries::Residue(s)) => d[dst] = s[src],
                    _ => unreachable!(),
                }
            }
        }
    }
}

/// Assembles a block matrix; `None` slots are zero blocks of the slot's size.
pub fn assemble_blocks(
    field: Field,
    row_sizes: &[usize],
    col_sizes: &[usize],
    layout: &[Vec<Option<&ExactMatrix>>],
) -> Result<ExactMatrix> {
    if layout.len() != row_sizes.len() || layout.iter().any(|r| r.len() != col_sizes.len()) {
        return Err(Error::DimensionMismatch("block layout does not match block sizes".into()));
    }
    let total_rows = row_sizes.iter().sum();
    let total_cols = col_sizes.iter().sum();
    let mut out = ExactMatrix::zeros(field, total_rows, total_cols);
    let mut row0 = 0;
    for (bi, row) in layout.iter().enumerate() {
        let mut col0 = 0;
        for (bj, slot) in row.iter().enumerate() {
            if let Some(block) = slot {
                field.ensure_same(block.field)?;
                if block.shape() != (row_sizes[bi], col_sizes[bj]) {
                    return Err(Error::DimensionMismatch(format!(
                        "block ({bi},{bj}) is {}x{}, slot is {}x{}",
                        block.rows, block.cols, row_sizes[bi], col_sizes[bj]
                    )));
                }
                out.write_block(row0, col0, block);
            }
            col0 += col_sizes[bj];
        }
        row0 += row_sizes[bi];
    }
    Ok(out)
}

fn mat_mul<F: FieldOps>(ops: &F, n: usize, k: usize, m: usize, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let mut out = vec![ops.zero(); n * m];
    for i in 0..n {
        for l in 0..k {
            let x = &a[i * k + l];
            if ops.is_zero(x) {
                continue;
            }
            for j in 0..m {
                let t = ops.mul(x, &b[l * m + j]);
                out[i * m + j] = ops.add(&out[i * m + j], &t);
            }
        }
    }
    out
}

fn gauss_pivots<F: FieldOps>(ops: &F, rows: usize, cols: usize, mut a: Vec<F::E>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !ops.is_zero(&a[r * cols + c])) else {
            continue;
        };
        swap_rows(&mut a, cols, rank, piv);
        let inv = ops.inv(&a[rank * cols + c]);
        for r in rank + 1..rows {
            let f = ops.mul(&a[r * cols + c], &inv);
            if ops.is_zero(&f) {
                continue;
            }
            for j in c..cols {
                let t = ops.mul(&f, &a[rank * cols + j]);
                a[r * cols + j] = ops.sub(&a[r * cols + j], &t);
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    pivots
}

fn swap_rows<T>(a: &mut [T], cols: usize, r1: usize, r2: usize) {
    if r1 != r2 {
        for j in 0..cols {
            a.swap(r1 * cols + j, r2 * cols + j);
        }
    }
}

/// Fraction-free elimination. Each row is first scaled to integers, which
/// does not change the row space.
fn bareiss_pivots(rows: usize, cols: usize, v: &[BigRational]) -> Vec<usize> {
    let mut a: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let row = &v[r * cols..(r + 1) * cols];
        let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        a.extend(row.iter().map(|q| q.numer() * (&lcm / q.denom())));
    }
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !a[r * cols + c].is_zero()) else {
            continue;
        };
        swap_rows(&mut a, cols, rank, piv);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let num = &a[rank * cols + c] * &a[r * cols + j] - &a[r * cols + c] * &a[rank * cols + j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                a[r * cols + j] = num / &prev;
            }
            a[r * cols + c] = BigInt::zero();
        }
        prev = a[rank * cols + c].clone();
        pivots.push(c);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    pivots
}

fn gauss_jordan_inverse<F: FieldOps>(ops: &F, n: usize, mut a: Vec<F::E>) -> Result<Vec<F::E>> {
    let mut inv = vec![ops.zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = ops.one();
    }
    for c in 0..n {
        let piv = (c..n).find(|&r| !ops.is_zero(&a[r * n + c])).ok_or(Error::Singular)?;
        swap_rows(&mut a, n, c, piv);
        swap_rows(&mut inv, n, c, piv);
        let s = ops.inv(&a[c * n + c]);
        for j in 0..n {
            a[c * n + j] = ops.mul(&a[c * n + j], &s);
            inv[c * n + j] = ops.mul(&inv[c * n + j], &s);
        }
        for r in 0..n {
            if r == c || ops.is_zero(&a[r * n + c]) {
                continue;
            }
            let f = a[r * n + c].clone();
            for j in 0..n {
                let t = ops.mul(&f, &a[c * n + j]);
                a[r * n + j] = ops.sub(&a[r * n + j], &t);
                let t = ops.mul(&f, &inv[c * n + j]);
                inv[r * n + j] = ops.sub(&inv[r * n + j], &t);
            }
        }
    }
    Ok(inv)
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rows == 0 || self.cols == 0 {
            return write!(f, "[{}x{} empty]", self.rows, self.cols);
        }
        let cells: Vec<String> = (0..self.rows * self.cols)
            .map(|k| self.get(k / self.cols, k % self.cols).to_string())
            .collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<Vec<serde_json::Value>>,
}

fn scalar_to_json(s: &Scalar) -> serde_json::Value {
    match s {
        Scalar::Residue { value, .. } => serde_json::Value::from(*value),
        Scalar::Rational(q) => {
            if q.is_integer() {
                if let Some(v) = q.numer().to_i64() {
                    return serde_json::Value::from(v);
                }
            }
            serde_json::Value::from(q.to_string())
        }
    }
}

fn scalar_from_json(field: Field, v: &serde_json::Value) -> Result<Scalar> {
    let (num, den) = match v {
        serde_json::Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("matrix entry {n} is not an integer")))?;
            (BigInt::from(i), BigInt::one())
        }
        serde_json::Value::String(s) => {
            let (n, d) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            let parse = |t: &str| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad matrix entry {s:?}")))
            };
            (parse(n)?, parse(d)?)
        }
        other => return Err(Error::Parse(format!("bad matrix entry {other}"))),
    };
    Scalar::from_fraction(field, &num, &den)
}

#[derive(Deserialize)]
struct LooseMatrixJson {
    rows: usize,
    cols: usize,
    #[serde(default)]
    field: Option<Field>,
    entries: Vec<Vec<serde_json::Value>>,
}

/// Field tag of a matrix written as a full JSON object, if it has one.
pub fn json_matrix_field(v: &serde_json::Value) -> Option<Result<Field>> {
    v.get("field")
        .map(|f| f.as_str().ok_or_else(|| Error::Parse("field tag must be a string".into()))?.parse())
}

/// Reads a matrix that is either the full `{rows, cols, field, entries}`
/// object or a bare array of rows. `field` and `shape` fill in what the value
/// leaves out; an explicit field or shape that disagrees is an error.
pub fn matrix_from_json(v: &serde_json::Value, field: Field, shape: (usize, usize)) -> Result<ExactMatrix> {
    let js = if v.is_array() {
        let entries: Vec<Vec<serde_json::Value>> =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("matrix rows: {e}")))?;
        MatrixJson {
            rows: entries.len().max(if shape.1 == 0 { shape.0 } else { 0 }),
            cols: entries.first().map_or(shape.1, Vec::len),
            field,
            entries,
        }
    } else {
        let loose: LooseMatrixJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
        let own = loose.field.unwrap_or(field);
        field.ensure_same(own)?;
        MatrixJson {
            rows: loose.rows,
            cols: loose.cols,
            field,
            entries: loose.entries,
        }
    };
    if (js.rows, js.cols) != shape {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, expected {}x{}",
            js.rows, js.cols, shape.0, shape.1
        )));
    }
    ExactMatrix::try_from(js)
}

impl TryFrom<MatrixJson> for ExactMatrix {
    type Error = Error;

    fn try_from(js: MatrixJson) -> Result<ExactMatrix> {
        // a 0-column matrix may list its rows as empty arrays or omit them
        let rows_listed = js.entries.len();
        if rows_listed != js.rows && !(js.cols == 0 && rows_listed == 0) {
            return Err(Error::DimensionMismatch(format!(
                "header says {} rows, found {rows_listed}",
                js.rows
            )));
        }
        let mut m = ExactMatrix::zeros(js.field, js.rows, js.cols);
        for (i, row) in js.entries.iter().enumerate() {
            if row.len() != js.cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, header says {}",
                    row.len(),
                    js.cols
                )));
            }
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, scalar_from_json(js.field, v)?)?;
            }
        }
        Ok(m)
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| scalar_to_json(&self.get(i, j))).collect())
            .collect();
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let js = MatrixJson::deserialize(deserializer)?;
        ExactMatrix::try_from(js).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn m(field: Field, rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(field, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(Q, 2).rank(), 2);
        assert_eq!(ExactMatrix::zeros(Q, 3, 0).rank(), 0);
        assert_eq!(ExactMatrix::zeros(Q, 0, 4).rank(), 0);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(m(f2, &[&[1, 0], &[0, 1], &[1, 0]]).rank(), 2);
        // 2 = 0 in F_2 makes this rank one there, rank two over Q
        assert_eq!(m(f2, &[&[1, 1], &[1, 3]]).rank(), 1);
        assert_eq!(m(Q, &[&[1, 1], &[1, 3]]).rank(), 2);
    }

    #[test]
    fn multiply_examples() {
        let a = m(Q, &[&[1, 1], &[0, 1]]);
        let b = m(Q, &[&[1, 0], &[1, 1]]);
        assert_eq!(a.multiply(&b).unwrap(), m(Q, &[&[2, 1], &[1, 1]]));
        assert_eq!(ExactMatrix::identity(Q, 2).multiply(&a).unwrap(), a);
        let e = ExactMatrix::zeros(Q, 2, 0).multiply(&ExactMatrix::zeros(Q, 0, 3)).unwrap();
        assert_eq!(e, ExactMatrix::zeros(Q, 2, 3));
    }

    #[test]
    fn multiply_errors() {
        let a = ExactMatrix::zeros(Q, 2, 3);
        assert!(matches!(a.multiply(&a), Err(Error::DimensionMismatch(_))));
        let b = ExactMatrix::zeros(Field::prime(3).unwrap(), 3, 1);
        assert!(matches!(a.multiply(&b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ExactMatrix::identity(Q, 3).inverse().unwrap(), ExactMatrix::identity(Q, 3));
        let two = m(Q, &[&[2]]).inverse().unwrap();
        assert_eq!(two.get(0, 0), Scalar::Rational(BigRational::new(1.into(), 2.into())));
        assert_eq!(m(Q, &[&[1, 1], &[0, 1]]).inverse().unwrap(), m(Q, &[&[1, -1], &[0, 1]]));
        assert_eq!(m(Q, &[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
        assert!(matches!(ExactMatrix::zeros(Q, 1, 2).inverse(), Err(Error::NotSquare { .. })));
        assert_eq!(ExactMatrix::zeros(Q, 0, 0).inverse().unwrap().shape(), (0, 0));
    }

    #[test]
    fn assemble_antidiagonal_gives_w() {
        // [[0, 1_dy], [1_dx, 0]] with d_x = 1, d_y = 2 is the permutation (2,3,1)
        let iy = ExactMatrix::identity(Q, 2);
        let ix = ExactMatrix::identity(Q, 1);
        let w = assemble_blocks(Q, &[2, 1], &[1, 2], &[vec![None, Some(&iy)], vec![Some(&ix), None]]).unwrap();
        assert_eq!(w, m(Q, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
        assert_eq!(w.rank(), 3);
    }

    #[test]
    fn assemble_single_and_absent_blocks() {
        let a = m(Q, &[&[1, 2], &[3, 4]]);
        assert_eq!(assemble_blocks(Q, &[2], &[2], &[vec![Some(&a)]]).unwrap(), a);
        let one = m(Q, &[&[5]]);
        let out = assemble_blocks(Q, &[1, 1], &[1, 1], &[vec![Some(&one), None], vec![None, Some(&one)]]).unwrap();
        assert_eq!(out, m(Q, &[&[5, 0], &[0, 5]]));
        let bad = assemble_blocks(Q, &[1], &[1], &[vec![Some(&a)]]);
        assert!(matches!(bad, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn field_tags_and_scalars() {
        assert_eq!("Fp:32003".parse::<Field>().unwrap(), Field::Prime(32003));
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert!(matches!("Fp:4".parse::<Field>(), Err(Error::NotPrime(4))));
        let f5 = Field::prime(5).unwrap();
        let a = Scalar::from_i64(f5, 3);
        assert_eq!(a.mul(&a.inv().unwrap()).unwrap(), Scalar::one(f5));
        assert_eq!(a.neg(), Scalar::from_i64(f5, 2));
        assert!(a.add(&Scalar::one(Q)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut a = m(Q, &[&[1, -2], &[0, 7]]);
        a.set(0, 0, Scalar::Rational(BigRational::new(3.into(), 4.into()))).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"3/4\""), "{s}");
        assert!(s.contains("\"field\":\"Q\""));
        assert_eq!(serde_json::from_str::<ExactMatrix>(&s).unwrap(), a);

        let e = ExactMatrix::zeros(Field::Prime(3), 2, 0);
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(serde_json::from_str::<ExactMatrix>(&s).unwrap(), e);

        let parsed: ExactMatrix =
            serde_json::from_str(r#"{"rows":1,"cols":2,"field":"Fp:5","entries":[["1/2", 7]]}"#).unwrap();
        assert_eq!(parsed.residues().unwrap(), &[3, 2]);
    }

    /// Plain elimination over fractions, no fraction-free tricks.
    fn naive_rank(m: &ExactMatrix) -> usize {
        let mut a: Vec<Vec<BigRational>> = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| match m.get(i, j) {
                        Scalar::Rational(q) => q,
                        _ => unreachable!(),
                    })
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..a.len() {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[rank][c];
                    for j in 0..m.cols() {
                        let t = &f * &a[rank][j];
                        a[r][j] -= t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn small_matrix(max: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
        (0..=max, 0..=max).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-4i64..=4, r * c)))
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn rank_is_transpose_invariant((r, c, v) in small_matrix(5), p in prop::sample::select(vec![0u32, 2, 3, 7])) {
            let field = if p == 0 { Q } else { Field::Prime(p) };
            let a = ExactMatrix::from_i64_shape(field, r, c, &v).unwrap();
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn bareiss_matches_naive(v in prop::collection::vec(-3i64..=3, 36), sparsity in 0usize..4) {
            let v: Vec<i64> = v.iter().enumerate().map(|(k, &x)| if k % 4 < sparsity { 0 } else { x }).collect();
            let a = ExactMatrix::from_i64_shape(Q, 6, 6, &v).unwrap();
            prop_assert_eq!(a.rank(), naive_rank(&a));
        }

        #[test]
        fn pivots_give_prefix_ranks((r, c, v) in small_matrix(5)) {
            let a = ExactMatrix::from_i64_shape(Field::Prime(3), r, c, &v).unwrap();
            let piv = a.pivot_columns();
            for k in 0..=c {
                let prefix = a.top_left(r, k);
                prop_assert_eq!(prefix.rank(), piv.iter().filter(|&&p| p < k).count());
            }
        }

        #[test]
        fn identity_blocks_add_up(sizes in prop::collection::vec(0usize..4, 1..4)) {
            let k = sizes.len();
            let ids: Vec<ExactMatrix> = sizes.iter().map(|&s| ExactMatrix::identity(Q, s)).collect();
            // identities on an anti-diagonal, so rows and columns are distinct
            let col_sizes: Vec<usize> = sizes.iter().rev().copied().collect();
            let layout: Vec<Vec<Option<&ExactMatrix>>> = (0..k)
                .map(|i| (0..k).map(|j| (i + j == k - 1).then_some(&ids[i])).collect())
                .collect();
            let m = assemble_blocks(Q, &sizes, &col_sizes, &layout).unwrap();
            prop_assert_eq!(m.rank(), sizes.iter().sum::<usize>());
        }

        #[test]
        fn inverse_times_matrix_is_identity(n in 1usize..=5, seed in any::<u64>(), p in prop::sample::select(vec![0u32, 5, 32003])) {
            use rand::SeedableRng;
            let field = if p == 0 { Q } else { Field::Prime(p) };
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = ExactMatrix::random_invertible(field, n, &mut rng);
            prop_assert!(m.inverse().unwrap().multiply(&m).unwrap().is_identity());
        }
    }
}
