//! Prime field arithmetic, quadratic residues, irreducible polynomial search
//! and projective point enumeration.
//!
//! Field elements are stored as `u32` residues in `[0, p)`. The hot loops of
//! the census work directly on raw residues through [`PrimeField`] methods;
//! [`FieldElement`] is the checked wrapper used at API boundaries.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest prime accepted by [`PrimeField::new`]. Products of two residues
/// must fit in `u64` and the residue tables stay small.
pub const MAX_PRIME: u64 = 1 << 24;

#[derive(Debug)]
struct Tables {
    inv: Vec<u32>,
    legendre: Vec<i8>,
}

/// The field `F_p` for an odd prime `p`.
#[derive(Clone)]
pub struct PrimeField {
    p: u32,
    tables: Arc<Tables>,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

/// An element of `F_p`, always reduced into `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Builds `F_p`. Rejects composites, `p = 2` and primes above [`MAX_PRIME`].
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if p > MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        let pu = p as u32;
        let mut inv = vec![0u32; pu as usize];
        for a in 1..pu {
            if inv[a as usize] == 0 {
                let b = pow_mod(a, pu - 2, pu);
                inv[a as usize] = b;
                inv[b as usize] = a;
            }
        }
        let mut legendre = vec![-1i8; pu as usize];
        legendre[0] = 0;
        for a in 1..pu {
            let sq = ((a as u64 * a as u64) % p) as usize;
            legendre[sq] = 1;
        }
        Ok(PrimeField {
            p: pu,
            tables: Arc::new(Tables { inv, legendre }),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Wraps an arbitrary integer, reducing it mod `p`.
    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement(self.reduce(v))
    }

    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut base = a as u64 % self.p as u64;
        let mut acc = 1u64;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            e >>= 1;
        }
        acc as u32
    }

    /// Inverse of a raw residue; `0` maps to `0`. Use [`PrimeField::inv`] for
    /// the checked version.
    #[inline]
    pub fn inv_raw(&self, a: u32) -> u32 {
        self.tables.inv[a as usize]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement(self.inv_raw(a.0)))
    }

    #[inline]
    pub fn legendre_raw(&self, a: u32) -> i8 {
        self.tables.legendre[a as usize]
    }

    pub fn legendre(&self, a: FieldElement) -> i8 {
        self.legendre_raw(a.0)
    }

    pub fn smallest_nonresidue(&self) -> FieldElement {
        let l = (1..self.p)
            .find(|&a| self.legendre_raw(a) == -1)
            .expect("odd prime fields have non-residues");
        FieldElement(l)
    }

    /// Monic irreducible polynomial of degree `d ∈ {2,3,4}`, lexicographically
    /// minimal in `(a_{d-1}, …, a_0)`.
    pub fn find_irreducible_monic(&self, d: usize) -> Result<FpPolynomial> {
        if !(2..=4).contains(&d) {
            return Err(Error::InvalidArgument(format!(
                "irreducible search supports degrees 2..=4, got {d}"
            )));
        }
        let p = self.p as u64;
        let total = p.pow(d as u32);
        let quadratics: Vec<FpPolynomial> = if d == 4 {
            self.irreducible_quadratics()
        } else {
            Vec::new()
        };
        for idx in 0..total {
            // idx read with a_{d-1} as the most significant digit
            let mut tail = vec![0u32; d];
            let mut rest = idx;
            for k in 0..d {
                tail[k] = (rest % p) as u32;
                rest /= p;
            }
            let mut coeffs = tail;
            coeffs.push(1);
            let f = FpPolynomial::new(coeffs);
            if self.has_root(&f) {
                continue;
            }
            if d == 4 && quadratics.iter().any(|g| self.divides(g, &f)) {
                continue;
            }
            return Ok(f);
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn irreducible_quadratics(&self) -> Vec<FpPolynomial> {
        let mut out = Vec::new();
        for b in 0..self.p {
            for c in 0..self.p {
                let g = FpPolynomial::new(vec![c, b, 1]);
                if !self.has_root(&g) {
                    out.push(g);
                }
            }
        }
        out
    }

    pub fn has_root(&self, f: &FpPolynomial) -> bool {
        (0..self.p).any(|x| self.eval_poly(f, x) == 0)
    }

    pub fn eval_poly(&self, f: &FpPolynomial, x: u32) -> u32 {
        f.coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Whether monic `g` divides `f`.
    fn divides(&self, g: &FpPolynomial, f: &FpPolynomial) -> bool {
        let mut r = f.coeffs.clone();
        let dg = g.coeffs.len() - 1;
        while r.len() > dg {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dg;
            for (k, &gc) in g.coeffs.iter().enumerate() {
                r[shift + k] = self.sub(r[shift + k], self.mul(lead, gc));
            }
            r.pop();
        }
        r.iter().all(|&c| c == 0)
    }

    /// Normalized representatives of `P^{n-1}(F_p)`: the first nonzero
    /// coordinate is 1, listed in increasing mixed-radix index (coordinate 0
    /// least significant).
    pub fn projective_points(&self, n: usize) -> Vec<Vec<u32>> {
        let p = self.p as u64;
        let total = p.pow(n as u32);
        let mut out = Vec::with_capacity(((total - 1) / (p - 1)) as usize);
        for idx in 1..total {
            let mut v = vec![0u32; n];
            let mut rest = idx;
            for c in v.iter_mut() {
                *c = (rest % p) as u32;
                rest /= p;
            }
            if v.iter().find(|&&c| c != 0) == Some(&1) {
                out.push(v);
            }
        }
        out
    }
}

fn pow_mod(a: u32, mut e: u32, p: u32) -> u32 {
    let mut base = a as u64 % p as u64;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Polynomial over `F_p`, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPolynomial {
    pub coeffs: Vec<u32>,
}

impl FpPolynomial {
    /// Strips trailing zero coefficients.
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        FpPolynomial { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.iter().all(|&c| c == 0) {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }
}

impl fmt::Display for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && k > 0 { String::new() } else { c.to_string() };
            terms.push(match k {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{k}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}
