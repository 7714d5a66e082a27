//! Matrices over `Z/p^D`.

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::extsig::ExtendedSignature;
use super::ring::{is_prime, small_modulus, BigRing, ResidueRing, SmallRing, Storage};
use super::smith::smith_generic;
use crate::error::{arg, Error, Result};
use crate::symfunc::Signature;

/// A `rows × cols` matrix with entries reduced mod `p^D`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicMatrix {
    p: u64,
    precision: u32,
    rows: usize,
    cols: usize,
    entries: Storage,
}

/// Runs `$body` with `$ring` bound to the matching residue ring and `$v`
/// to the entry vector of `$m`.
macro_rules! with_ring {
    ($m:expr, |$ring:ident, $v:ident| $body:expr) => {
        match &$m.entries {
            Storage::Small($v) => {
                let $ring = SmallRing::new($m.p, $m.precision).expect("small storage implies small modulus");
                $body
            }
            Storage::Big($v) => {
                let $ring = BigRing::new($m.p, $m.precision);
                $body
            }
        }
    };
}

fn check_params(p: u64, precision: u32) -> Result<()> {
    if !is_prime(p) {
        return arg(format!("{p} is not prime"));
    }
    if precision == 0 {
        return arg("precision must be at least 1");
    }
    Ok(())
}

impl PadicMatrix {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Whether the word-sized representation is in use.
    pub fn is_word_sized(&self) -> bool {
        matches!(self.entries, Storage::Small(_))
    }

    /// Builds a matrix from arbitrary nonnegative integers, reducing mod `p^D`.
    pub fn from_entries(p: u64, precision: u32, rows: usize, cols: usize, entries: &[BigUint]) -> Result<Self> {
        check_params(p, precision)?;
        if entries.len() != rows * cols {
            return arg(format!("expected {} entries, got {}", rows * cols, entries.len()));
        }
        Ok(Self::build(p, precision, rows, cols, |i, j| entries[i * cols + j].clone()))
    }

    pub fn from_u64s(p: u64, precision: u32, rows: usize, cols: usize, entries: &[u64]) -> Result<Self> {
        let big: Vec<BigUint> = entries.iter().map(|&v| BigUint::from(v)).collect();
        Self::from_entries(p, precision, rows, cols, &big)
    }

    fn build(p: u64, precision: u32, rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigUint) -> Self {
        let entries = match SmallRing::new(p, precision) {
            Some(r) => Storage::Small((0..rows * cols).map(|k| r.from_biguint(&f(k / cols, k % cols))).collect()),
            None => {
                let r = BigRing::new(p, precision);
                Storage::Big((0..rows * cols).map(|k| r.from_biguint(&f(k / cols, k % cols))).collect())
            }
        };
        PadicMatrix { p, precision, rows, cols, entries }
    }

    pub fn identity(p: u64, precision: u32, n: usize) -> Result<Self> {
        check_params(p, precision)?;
        Ok(Self::build(p, precision, n, n, |i, j| BigUint::from((i == j) as u8)))
    }

    /// `diag_{rows × cols}(p^{λ_1}, …)`; parts must be nonnegative.
    pub fn diagonal_powers(p: u64, precision: u32, rows: usize, cols: usize, lambda: &Signature) -> Result<Self> {
        check_params(p, precision)?;
        if lambda.len() != rows.min(cols) || !lambda.is_nonnegative() {
            return arg(format!("{lambda} does not fit a {rows}×{cols} diagonal"));
        }
        let pb = BigUint::from(p);
        Ok(Self::build(p, precision, rows, cols, |i, j| {
            if i == j {
                num_traits::pow(pb.clone(), lambda.parts()[i] as usize)
            } else {
                BigUint::from(0u8)
            }
        }))
    }

    fn from_elems<R: ResidueRing>(ring: &R, rows: usize, cols: usize, v: Vec<R::E>) -> Self {
        PadicMatrix { p: ring.p(), precision: ring.precision(), rows, cols, entries: R::store(v) }
    }

    pub fn entry(&self, i: usize, j: usize) -> BigUint {
        let k = i * self.cols + j;
        match &self.entries {
            Storage::Small(v) => BigUint::from(v[k]),
            Storage::Big(v) => v[k].clone(),
        }
    }

    pub fn entries(&self) -> Vec<BigUint> {
        (0..self.rows * self.cols).map(|k| self.entry(k / self.cols, k % self.cols)).collect()
    }

    /// Top-left `nrows × ncols` submatrix.
    pub fn corner(&self, nrows: usize, ncols: usize) -> Result<Self> {
        if nrows > self.rows || ncols > self.cols {
            return arg(format!("corner {nrows}×{ncols} exceeds {}×{}", self.rows, self.cols));
        }
        let pick = |k: usize| (k / ncols) * self.cols + k % ncols;
        let entries = match &self.entries {
            Storage::Small(v) => Storage::Small((0..nrows * ncols).map(|k| v[pick(k)]).collect()),
            Storage::Big(v) => Storage::Big((0..nrows * ncols).map(|k| v[pick(k)].clone()).collect()),
        };
        Ok(PadicMatrix { p: self.p, precision: self.precision, rows: nrows, cols: ncols, entries })
    }

    pub fn matmul(&self, other: &PadicMatrix) -> Result<Self> {
        if self.p != other.p || self.precision != other.precision {
            return arg("matrices over different rings");
        }
        if self.cols != other.rows {
            return arg(format!("cannot multiply {}×{} by {}×{}", self.rows, self.cols, other.rows, other.cols));
        }
        let (n, m, k) = (self.rows, other.cols, self.cols);
        Ok(match (&self.entries, &other.entries) {
            (Storage::Small(a), Storage::Small(b)) => {
                let r = SmallRing::new(self.p, self.precision).expect("small");
                Self::from_elems(&r, n, m, matmul_generic(&r, a, b, n, k, m))
            }
            (Storage::Big(a), Storage::Big(b)) => {
                let r = BigRing::new(self.p, self.precision);
                Self::from_elems(&r, n, m, matmul_generic(&r, a, b, n, k, m))
            }
            _ => unreachable!("storage is determined by (p, D)"),
        })
    }

    /// Singular numbers at the working precision.
    pub fn smith(&self) -> ExtendedSignature {
        with_ring!(self, |ring, v| smith_generic(&ring, self.rows, self.cols, v.clone()))
    }

    /// Determinant mod `p` is nonzero (square matrices only).
    pub fn is_invertible(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let residues: Vec<u64> = with_ring!(self, |ring, v| v.iter().map(|e| ring.residue(e)).collect());
        invertible_mod_p(residues, self.rows, self.p)
    }

    /// Uniform element of `GL_N(Z/p^D)`: residues are redrawn until
    /// invertible mod `p`, then lifted uniformly.
    pub fn haar_gl<R: Rng + ?Sized>(n: usize, p: u64, precision: u32, rng: &mut R) -> Result<Self> {
        check_params(p, precision)?;
        if n == 0 {
            return arg("matrix size must be positive");
        }
        const CAP: usize = 1_000_000;
        for _ in 0..CAP {
            let residues: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
            if !invertible_mod_p(residues.clone(), n, p) {
                continue;
            }
            return Ok(match SmallRing::new(p, precision) {
                Some(r) => Self::from_elems(&r, n, n, residues.iter().map(|&x| r.random_lift(x, rng)).collect()),
                None => {
                    let r = BigRing::new(p, precision);
                    Self::from_elems(&r, n, n, residues.iter().map(|&x| r.random_lift(x, rng)).collect())
                }
            });
        }
        Err(Error::Resource(format!("no invertible matrix after {CAP} draws")))
    }

    /// Entries iid uniform mod `p^D`.
    pub fn haar_additive<R: Rng + ?Sized>(rows: usize, cols: usize, p: u64, precision: u32, rng: &mut R) -> Result<Self> {
        check_params(p, precision)?;
        Ok(match SmallRing::new(p, precision) {
            Some(r) => Self::from_elems(&r, rows, cols, (0..rows * cols).map(|_| r.random(rng)).collect()),
            None => {
                let r = BigRing::new(p, precision);
                Self::from_elems(&r, rows, cols, (0..rows * cols).map(|_| r.random(rng)).collect())
            }
        })
    }

    /// `U diag(p^λ) V` with `U`, `V` independent Haar elements of `GL_n`.
    pub fn bi_invariant<R: Rng + ?Sized>(lambda: &Signature, p: u64, precision: u32, rng: &mut R) -> Result<Self> {
        let n = lambda.len();
        let d = Self::diagonal_powers(p, precision, n, n, lambda)?;
        let u = Self::haar_gl(n, p, precision, rng)?;
        let v = Self::haar_gl(n, p, precision, rng)?;
        u.matmul(&d)?.matmul(&v)
    }

    /// Same matrix viewed at a different precision (lower: reduction; higher:
    /// the canonical lift of the stored representatives).
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        let e = self.entries();
        Self::from_entries(self.p, precision, self.rows, self.cols, &e)
    }
}

fn matmul_generic<R: ResidueRing>(ring: &R, a: &[R::E], b: &[R::E], n: usize, k: usize, m: usize) -> Vec<R::E> {
    let mut out = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let mut acc = ring.zero();
            for l in 0..k {
                acc = ring.add(&acc, &ring.mul(&a[i * k + l], &b[l * m + j]));
            }
            out.push(acc);
        }
    }
    out
}

fn invertible_mod_p(mut a: Vec<u64>, n: usize, p: u64) -> bool {
    let pm = |x: u128| (x % p as u128) as u64;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| a[r * n + col] % p != 0) else {
            return false;
        };
        if piv != col {
            for j in 0..n {
                a.swap(piv * n + j, col * n + j);
            }
        }
        let inv = {
            // Fermat inverse; p is prime.
            let mut base = a[col * n + col] % p;
            let mut e = p - 2;
            let mut r = 1u64;
            while e > 0 {
                if e & 1 == 1 {
                    r = pm(r as u128 * base as u128);
                }
                base = pm(base as u128 * base as u128);
                e >>= 1;
            }
            r
        };
        for r in col + 1..n {
            let f = pm(a[r * n + col] as u128 * inv as u128);
            if f == 0 {
                continue;
            }
            for j in col..n {
                let sub = pm(f as u128 * a[col * n + j] as u128);
                a[r * n + j] = (a[r * n + j] % p + p - sub) % p;
            }
        }
    }
    true
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    p: u64,
    precision: u32,
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl Serialize for PadicMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            p: self.p,
            precision: self.precision,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries().iter().map(|e| e.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatrixJson::deserialize(d)?;
        let entries: std::result::Result<Vec<BigUint>, _> = raw.entries.iter().map(|s| s.parse::<BigUint>()).collect();
        let entries = entries.map_err(D::Error::custom)?;
        PadicMatrix::from_entries(raw.p, raw.precision, raw.rows, raw.cols, &entries).map_err(D::Error::custom)
    }
}

/// True when `(p, D)` uses word-sized storage.
pub fn uses_word_storage(p: u64, precision: u32) -> bool {
    small_modulus(p, precision).is_some()
}
