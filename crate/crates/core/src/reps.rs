//! The five representations: descriptors, group actions, invariants and
//! orbit classifiers.
//!
//! Coordinates follow the monomial order of each space:
//!
//! | rep       | coordinates                                           |
//! |-----------|-------------------------------------------------------|
//! | `sym3-2`  | `(a,b,c,d)` for `au³+bu²v+cuv²+dv³`                   |
//! | `sym2-2`  | `(a,b,c)` for `au²+buv+cv²`                           |
//! | `sym2-3`  | `(a,b,c,d,e,f)` for `au²+buv+cuw+dv²+evw+fw²`         |
//! | `2sym2-2` | the `sym2-2` coordinates of `A`, then of `B`          |
//! | `2sym2-3` | the `sym2-3` coordinates of `A`, then of `B`          |

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{int, rat, BigRational};
use crate::ffield::{FpPolynomial, PrimeField};
use crate::poly::{parse, QPolynomial};

/// Which of the five spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RepKind {
    #[serde(rename = "sym3-2")]
    Sym32,
    #[serde(rename = "sym2-2")]
    Sym22,
    #[serde(rename = "sym2-3")]
    Sym23,
    #[serde(rename = "2sym2-2")]
    Pair22,
    #[serde(rename = "2sym2-3")]
    Pair23,
}

impl RepKind {
    pub const ALL: [RepKind; 5] = [
        RepKind::Sym32,
        RepKind::Sym22,
        RepKind::Sym23,
        RepKind::Pair22,
        RepKind::Pair23,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepKind::Sym32 => "sym3-2",
            RepKind::Sym22 => "sym2-2",
            RepKind::Sym23 => "sym2-3",
            RepKind::Pair22 => "2sym2-2",
            RepKind::Pair23 => "2sym2-3",
        }
    }

    pub fn descriptor(self) -> &'static RepDescriptor {
        static ALL: OnceLock<Vec<RepDescriptor>> = OnceLock::new();
        let all = ALL.get_or_init(|| RepKind::ALL.iter().map(|&k| build_descriptor(k)).collect());
        &all[self as usize]
    }

    pub fn dim(self) -> usize {
        match self {
            RepKind::Sym32 => 4,
            RepKind::Sym22 => 3,
            RepKind::Sym23 => 6,
            RepKind::Pair22 => 6,
            RepKind::Pair23 => 12,
        }
    }

    pub fn bad_primes(self) -> &'static [u64] {
        match self {
            RepKind::Sym32 => &[2, 3],
            _ => &[2],
        }
    }

    pub fn is_valid_prime(self, p: u64) -> bool {
        crate::ffield::is_prime(p) && !self.bad_primes().contains(&p)
    }

    /// Modulus for the congruence split of the theorem matrices.
    pub fn modulus(self) -> u64 {
        match self {
            RepKind::Sym32 => 3,
            _ => 1,
        }
    }

    /// Congruence class of `q` (always 0 when the modulus is 1).
    pub fn class_of(self, q: u64) -> u64 {
        q % self.modulus()
    }

    /// Classes that occur for valid primes.
    pub fn classes(self) -> &'static [u64] {
        match self {
            RepKind::Sym32 => &[1, 2],
            _ => &[0],
        }
    }

    /// Sizes of the general linear group factors.
    pub fn group_shape(self) -> &'static [usize] {
        match self {
            RepKind::Sym32 => &[2],
            RepKind::Sym22 => &[1, 2],
            RepKind::Sym23 => &[1, 3],
            RepKind::Pair22 => &[2, 2],
            RepKind::Pair23 => &[2, 3],
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RepKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RepKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownRep(s.to_string()))
    }
}

/// Orbit names as printed in the orbit tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitLabel {
    Zero,
    Cube,
    SquareLinear,
    ThreeLinear,
    QuadLinear,
    Cubic,
    Square,
    Split,
    Nonsplit,
    Nonsingular,
    D1Sq,
    D11,
    D2,
    Dns,
    Cs,
    Cns,
    Ts,
    Ti,
    Q1e4,
    Q1e3x1,
    Q1e2x1e2,
    Q2e2,
    Q1e2x11,
    Q1e2x2,
    Q1111,
    Q112,
    Q22,
    Q13,
    Q4,
}

impl OrbitLabel {
    const NAMES: [(OrbitLabel, &'static str); 29] = [
        (OrbitLabel::Zero, "(0)"),
        (OrbitLabel::Cube, "(1^3)"),
        (OrbitLabel::SquareLinear, "(1^2 1)"),
        (OrbitLabel::ThreeLinear, "(111)"),
        (OrbitLabel::QuadLinear, "(21)"),
        (OrbitLabel::Cubic, "(3)"),
        (OrbitLabel::Square, "(1^2)"),
        (OrbitLabel::Split, "(11)"),
        (OrbitLabel::Nonsplit, "(2)"),
        (OrbitLabel::Nonsingular, "ns"),
        (OrbitLabel::D1Sq, "D1^2"),
        (OrbitLabel::D11, "D11"),
        (OrbitLabel::D2, "D2"),
        (OrbitLabel::Dns, "Dns"),
        (OrbitLabel::Cs, "Cs"),
        (OrbitLabel::Cns, "Cns"),
        (OrbitLabel::Ts, "Ts"),
        (OrbitLabel::Ti, "Ti"),
        (OrbitLabel::Q1e4, "1^4"),
        (OrbitLabel::Q1e3x1, "1^3 1"),
        (OrbitLabel::Q1e2x1e2, "1^2 1^2"),
        (OrbitLabel::Q2e2, "2^2"),
        (OrbitLabel::Q1e2x11, "1^2 11"),
        (OrbitLabel::Q1e2x2, "1^2 2"),
        (OrbitLabel::Q1111, "1111"),
        (OrbitLabel::Q112, "112"),
        (OrbitLabel::Q22, "22"),
        (OrbitLabel::Q13, "13"),
        (OrbitLabel::Q4, "4"),
    ];

    pub fn as_str(self) -> &'static str {
        Self::NAMES
            .iter()
            .find(|(l, _)| *l == self)
            .map(|(_, s)| *s)
            .expect("every label is named")
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrbitLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(l, _)| *l)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

impl Serialize for OrbitLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for OrbitLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Static description of one representation.
#[derive(Debug)]
pub struct RepDescriptor {
    pub kind: RepKind,
    pub dim: usize,
    /// Diagonal pairing weights.
    pub weights: Vec<BigRational>,
    pub labels: Vec<OrbitLabel>,
    pub sizes: Vec<QPolynomial>,
    /// Projective zeros (common zeros for pairs) of each orbit.
    pub zeros: Vec<QPolynomial>,
}

impl RepDescriptor {
    pub fn orbit_count(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: OrbitLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.as_str().to_string()))
    }

    pub fn label_index(&self, s: &str) -> Result<usize> {
        self.index_of(s.parse()?)
    }

    pub fn orbit_size(&self, label: OrbitLabel, q: i64) -> Result<num_bigint::BigInt> {
        self.sizes[self.index_of(label)?].eval_integer(q)
    }
}

fn polys(src: &[&str]) -> Vec<QPolynomial> {
    src.iter().map(|s| parse(s).expect("built-in polynomial")).collect()
}

fn build_descriptor(kind: RepKind) -> RepDescriptor {
    use OrbitLabel::*;
    let binary = vec![int(1), rat(1, 2), int(1)];
    let ternary = vec![int(1), rat(1, 2), rat(1, 2), int(1), rat(1, 2), int(1)];
    let (weights, labels, sizes, zeros) = match kind {
        RepKind::Sym32 => (
            vec![int(1), rat(1, 3), rat(1, 3), int(1)],
            vec![Zero, Cube, SquareLinear, ThreeLinear, QuadLinear, Cubic],
            polys(&[
                "1",
                "q^2-1",
                "q(q^2-1)",
                "(q^2-1)(q^2-q)/6",
                "(q^2-1)(q^2-q)/2",
                "(q^2-1)(q^2-q)/3",
            ]),
            polys(&["q+1", "1", "2", "3", "1", "0"]),
        ),
        RepKind::Sym22 => (
            binary,
            vec![Zero, Square, Split, Nonsplit],
            polys(&["1", "q^2-1", "q(q^2-1)/2", "q(q-1)^2/2"]),
            polys(&["q+1", "1", "2", "0"]),
        ),
        RepKind::Sym23 => (
            ternary,
            vec![Zero, Square, Split, Nonsplit, Nonsingular],
            polys(&["1", "q^3-1", "q(q^3-1)(q+1)/2", "q(q^3-1)(q-1)/2", "(q^5-q^2)(q-1)"]),
            polys(&["q^2+q+1", "q+1", "2q+1", "1", "q+1"]),
        ),
        RepKind::Pair22 => (
            binary.iter().chain(&binary).cloned().collect(),
            vec![Zero, D1Sq, D11, D2, Cs, Ts, Ti],
            polys(&[
                "1",
                "(q-1)(q+1)^2",
                "q(q-1)(q+1)^2/2",
                "q(q-1)^2(q+1)/2",
                "q(q^2-1)^2",
                "(q^3-q)^2/2",
                "(q^2-q)^2(q^2-1)/2",
            ]),
            polys(&["q+1", "1", "2", "0", "1", "0", "0"]),
        ),
        RepKind::Pair23 => (
            ternary.iter().chain(&ternary).cloned().collect(),
            vec![
                Zero, D1Sq, D11, D2, Dns, Cs, Cns, Ts, Ti, Q1e4, Q1e3x1, Q1e2x1e2, Q2e2, Q1e2x11, Q1e2x2, Q1111, Q112,
                Q22, Q13, Q4,
            ],
            polys(&[
                "1",
                "s(1,0,1,2)",
                "s(1,1,2,2)/2",
                "s(2,1,1,2)/2",
                "s(2,2,1,2)",
                "s(2,1,2,2)",
                "s(2,3,1,2)",
                "s(2,2,2,2)/2",
                "s(3,2,1,2)/2",
                "s(3,2,2,2)",
                "s(3,3,2,2)",
                "s(2,4,2,2)/2",
                "s(3,4,1,2)/2",
                "s(3,4,2,2)/2",
                "s(3,4,2,2)/2",
                "s(4,4,2,2)/24",
                "s(4,4,2,2)/4",
                "s(4,4,2,2)/8",
                "s(4,4,2,2)/3",
                "s(4,4,2,2)/4",
            ]),
            polys(&[
                "q^2+q+1", "q+1", "2q+1", "1", "q+1", "q+1", "q+2", "1", "1", "1", "2", "2", "0", "3", "1", "4", "2",
                "0", "1", "0",
            ]),
        ),
    };
    RepDescriptor {
        kind,
        dim: kind.dim(),
        weights,
        labels,
        sizes,
        zeros,
    }
}

/// A coefficient vector of a given representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vector {
    pub kind: RepKind,
    pub coords: Vec<u32>,
}

/// Square matrix over `F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub n: usize,
    pub e: Vec<u32>,
}

impl Mat {
    pub fn new(n: usize, e: Vec<u32>) -> Self {
        assert_eq!(e.len(), n * n);
        Mat { n, e }
    }

    pub fn identity(n: usize) -> Self {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = 1;
        }
        Mat { n, e }
    }

    pub fn scalar(n: usize, s: u32) -> Self {
        let mut m = Self::identity(n);
        for i in 0..n {
            m.e[i * n + i] = s;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.e[i * self.n + j]
    }

    pub fn det(&self, f: &PrimeField) -> u32 {
        match self.n {
            1 => self.e[0],
            2 => f.sub(f.mul(self.at(0, 0), self.at(1, 1)), f.mul(self.at(0, 1), self.at(1, 0))),
            3 => {
                let m = |i, j| self.at(i, j);
                let t0 = f.mul(m(0, 0), f.sub(f.mul(m(1, 1), m(2, 2)), f.mul(m(1, 2), m(2, 1))));
                let t1 = f.mul(m(0, 1), f.sub(f.mul(m(1, 0), m(2, 2)), f.mul(m(1, 2), m(2, 0))));
                let t2 = f.mul(m(0, 2), f.sub(f.mul(m(1, 0), m(2, 1)), f.mul(m(1, 1), m(2, 0))));
                f.add(f.sub(t0, t1), t2)
            }
            _ => unreachable!("only GL1..GL3 occur"),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                e[j * n + i] = self.at(i, j);
            }
        }
        Mat { n, e }
    }

    pub fn mul(&self, other: &Mat, f: &PrimeField) -> Mat {
        let n = self.n;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = f.add(acc, f.mul(self.at(i, k), other.at(k, j)));
                }
                e[i * n + j] = acc;
            }
        }
        Mat { n, e }
    }

    pub fn inverse(&self, f: &PrimeField) -> Result<Mat> {
        let d = self.det(f);
        if d == 0 {
            return Err(Error::NotInvertible);
        }
        let di = f.inv_raw(d);
        let n = self.n;
        let adj = match n {
            1 => vec![1],
            2 => vec![self.at(1, 1), f.neg(self.at(0, 1)), f.neg(self.at(1, 0)), self.at(0, 0)],
            3 => {
                let mut out = vec![0; 9];
                for i in 0..3 {
                    for j in 0..3 {
                        let (r0, r1) = other_two(j);
                        let (c0, c1) = other_two(i);
                        let minor = f.sub(
                            f.mul(self.at(r0, c0), self.at(r1, c1)),
                            f.mul(self.at(r0, c1), self.at(r1, c0)),
                        );
                        out[i * 3 + j] = if (i + j) % 2 == 0 { minor } else { f.neg(minor) };
                    }
                }
                out
            }
            _ => unreachable!(),
        };
        Ok(Mat {
            n,
            e: adj.into_iter().map(|v| f.mul(v, di)).collect(),
        })
    }
}

fn other_two(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// An element of the acting group, one invertible matrix per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub factors: Vec<Mat>,
}

impl GroupElement {
    pub fn identity(kind: RepKind) -> Self {
        GroupElement {
            factors: kind.group_shape().iter().map(|&n| Mat::identity(n)).collect(),
        }
    }

    /// Factor-wise inverse transpose.
    pub fn inverse_transpose(&self, f: &PrimeField) -> Result<Self> {
        Ok(GroupElement {
            factors: self
                .factors
                .iter()
                .map(|m| m.inverse(f).map(|i| i.transpose()))
                .collect::<Result<_>>()?,
        })
    }

    pub fn random<R: Rng + ?Sized>(kind: RepKind, f: &PrimeField, rng: &mut R) -> Self {
        let factors = kind
            .group_shape()
            .iter()
            .map(|&n| loop {
                let m = Mat::new(n, (0..n * n).map(|_| rng.gen_range(0..f.p())).collect());
                if m.det(f) != 0 {
                    break m;
                }
            })
            .collect();
        GroupElement { factors }
    }
}

/// Orbit index in [`Space::classify_index`] output meaning "no orbit matched".
pub const UNCLASSIFIED: u8 = u8::MAX;

/// Field sizes up to which per-form lookup tables are built.
const CUBIC_TABLE_MAX_P: u32 = 13;
const TERNARY_TABLE_MAX_P: u32 = 7;

/// Per-form data for ternary quadratic forms, indexed by the mixed-radix
/// index of `(a,b,c,d,e,f)`.
struct TernaryTables {
    zero_mask: Vec<u64>,
    det2: Vec<u32>,
    /// Weights `w` with `tr(adj(2A)·2B) = Σ w_k B_k`.
    adj_weights: Vec<[u32; 6]>,
}

/// A representation over a fixed prime field, with the lookup tables used by
/// the classifiers.
pub struct Space {
    kind: RepKind,
    field: PrimeField,
    weights: Vec<u32>,
    inv2: u32,
    nonresidue: u32,
    p1: Vec<[u32; 2]>,
    /// `(u², uv, uw, v², vw, w²)` at each point of `p2`.
    p2_monomials: Vec<[u32; 6]>,
    cubic_table: OnceLock<Vec<u8>>,
    ternary_tables: OnceLock<TernaryTables>,
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space({} over {:?})", self.kind, self.field)
    }
}

impl Space {
    pub fn new(kind: RepKind, p: u64) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if kind.bad_primes().contains(&p) {
            return Err(Error::BadPrime {
                rep: kind.name().to_string(),
                p,
            });
        }
        let weights = kind
            .descriptor()
            .weights
            .iter()
            .map(|w| rational_mod_p(w, &field))
            .collect::<Result<Vec<_>>>()?;
        let p1 = field.projective_points(2).into_iter().map(|v| [v[0], v[1]]).collect();
        let p2_monomials = field
            .projective_points(3)
            .into_iter()
            .map(|pt| {
                let (u, v, w) = (pt[0], pt[1], pt[2]);
                [
                    field.mul(u, u),
                    field.mul(u, v),
                    field.mul(u, w),
                    field.mul(v, v),
                    field.mul(v, w),
                    field.mul(w, w),
                ]
            })
            .collect();
        Ok(Space {
            kind,
            inv2: field.inv_raw(2),
            nonresidue: field.smallest_nonresidue().value(),
            field,
            weights,
            p1,
            p2_monomials,
            cubic_table: OnceLock::new(),
            ternary_tables: OnceLock::new(),
        })
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p() as u64
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    pub fn descriptor(&self) -> &'static RepDescriptor {
        self.kind.descriptor()
    }

    pub fn orbit_count(&self) -> usize {
        self.descriptor().orbit_count()
    }

    /// Pairing weights reduced mod p.
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn nonresidue(&self) -> u32 {
        self.nonresidue
    }

    fn check_len(&self, x: &[u32]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Reduces arbitrary integers into a coordinate vector.
    pub fn vector(&self, coords: &[i64]) -> Result<Vec<u32>> {
        let v: Vec<u32> = coords.iter().map(|&c| self.field.reduce(c)).collect();
        self.check_len(&v)?;
        Ok(v)
    }

    pub fn coords_of_index(&self, mut idx: u64) -> Vec<u32> {
        let p = self.p();
        (0..self.dim())
            .map(|_| {
                let c = (idx % p) as u32;
                idx /= p;
                c
            })
            .collect()
    }

    pub fn index_of_coords(&self, x: &[u32]) -> u64 {
        x.iter().rev().fold(0u64, |acc, &c| acc * self.p() + c as u64)
    }

    pub fn bilinear(&self, x: &[u32], y: &[u32]) -> Result<u32> {
        self.check_len(x)?;
        self.check_len(y)?;
        let f = &self.field;
        Ok(x.iter()
            .zip(y)
            .zip(&self.weights)
            .fold(0, |acc, ((&a, &b), &w)| f.add(acc, f.mul(w, f.mul(a, b)))))
    }

    // ---- group action ----------------------------------------------------

    pub fn act(&self, g: &GroupElement, x: &[u32]) -> Result<Vec<u32>> {
        self.check_len(x)?;
        let shape = self.kind.group_shape();
        if g.factors.len() != shape.len() || g.factors.iter().zip(shape).any(|(m, &n)| m.n != n) {
            return Err(Error::InvalidArgument("group element has the wrong shape".into()));
        }
        let f = &self.field;
        if g.factors.iter().any(|m| m.det(f) == 0) {
            return Err(Error::NotInvertible);
        }
        Ok(match self.kind {
            RepKind::Sym32 => {
                let g0 = &g.factors[0];
                let y = subst_binary(f, x, g0);
                let di = f.inv_raw(g0.det(f));
                y.into_iter().map(|c| f.mul(c, di)).collect()
            }
            RepKind::Sym22 | RepKind::Sym23 => {
                let s = g.factors[0].e[0];
                let y = self.congruence(x, &g.factors[1]);
                y.into_iter().map(|c| f.mul(c, s)).collect()
            }
            RepKind::Pair22 | RepKind::Pair23 => {
                let half = x.len() / 2;
                let a = self.congruence(&x[..half], &g.factors[1]);
                let b = self.congruence(&x[half..], &g.factors[1]);
                let g1 = &g.factors[0];
                let comb = |s: u32, t: u32| -> Vec<u32> {
                    a.iter()
                        .zip(&b)
                        .map(|(&u, &v)| f.add(f.mul(s, u), f.mul(t, v)))
                        .collect()
                };
                let mut out = comb(g1.at(0, 0), g1.at(0, 1));
                out.extend(comb(g1.at(1, 0), g1.at(1, 1)));
                out
            }
        })
    }

    /// Quadratic form `x` mapped to `x((u,…)g)`, i.e. `A ↦ g A gᵀ`.
    fn congruence(&self, x: &[u32], g: &Mat) -> Vec<u32> {
        let f = &self.field;
        let n = g.n;
        let a = self.sym_matrix(x);
        let ga = g.mul(&a, f);
        let m = ga.mul(&g.transpose(), f);
        self.coords_of_sym_matrix(&m, n)
    }

    /// Symmetric matrix of a binary or ternary quadratic form.
    fn sym_matrix(&self, x: &[u32]) -> Mat {
        let f = &self.field;
        let h = |c: u32| f.mul(c, self.inv2);
        match x.len() {
            3 => Mat::new(2, vec![x[0], h(x[1]), h(x[1]), x[2]]),
            6 => Mat::new(
                3,
                vec![x[0], h(x[1]), h(x[2]), h(x[1]), x[3], h(x[4]), h(x[2]), h(x[4]), x[5]],
            ),
            _ => unreachable!(),
        }
    }

    fn coords_of_sym_matrix(&self, m: &Mat, n: usize) -> Vec<u32> {
        let f = &self.field;
        let d = |c: u32| f.add(c, c);
        match n {
            2 => vec![m.at(0, 0), d(m.at(0, 1)), m.at(1, 1)],
            3 => vec![
                m.at(0, 0),
                d(m.at(0, 1)),
                d(m.at(0, 2)),
                m.at(1, 1),
                d(m.at(1, 2)),
                m.at(2, 2),
            ],
            _ => unreachable!(),
        }
    }

    // ---- invariants --------------------------------------------------------

    pub fn disc(&self, x: &[u32]) -> Result<u32> {
        self.check_len(x)?;
        let f = &self.field;
        match self.kind {
            RepKind::Sym32 => Ok(cubic_disc(f, [x[0], x[1], x[2], x[3]])),
            RepKind::Sym22 => Ok(f.sub(f.mul(x[1], x[1]), f.mul(4, f.mul(x[0], x[2])))),
            RepKind::Sym23 => {
                let d = self.sym_matrix(x).det(f);
                Ok(f.neg(f.mul(4, d)))
            }
            _ => Err(Error::UnsupportedInvariant("disc")),
        }
    }

    /// `r_x(u,v) = −4 det(Au + Bv)`, as binary form coefficients
    /// (`u², uv, v²` or `u³, u²v, uv², v³`).
    pub fn resolvent(&self, x: &[u32]) -> Result<Vec<u32>> {
        self.check_len(x)?;
        let f = &self.field;
        match self.kind {
            RepKind::Pair22 => {
                let (a, b, c, d, e, g) = (x[0], x[1], x[2], x[3], x[4], x[5]);
                let four = |v: u32| f.mul(4, v);
                Ok(vec![
                    f.sub(f.mul(b, b), four(f.mul(a, c))),
                    f.sub(f.mul(2, f.mul(b, e)), four(f.add(f.mul(a, g), f.mul(c, d)))),
                    f.sub(f.mul(e, e), four(f.mul(d, g))),
                ])
            }
            RepKind::Pair23 => {
                // det(2Au + 2Bv) = 8 det(Au + Bv), so r = −det(2Au + 2Bv)/2
                let c = det_pencil_doubled(f, &x[..6], &x[6..]);
                let s = f.neg(self.inv2);
                Ok(c.iter().map(|&v| f.mul(v, s)).collect())
            }
            _ => Err(Error::UnsupportedInvariant("resolvent")),
        }
    }

    /// Discriminant of the resolvent cubic of a pair of ternary forms.
    pub fn quartic_disc(&self, x: &[u32]) -> Result<u32> {
        if self.kind != RepKind::Pair23 {
            return Err(Error::UnsupportedInvariant("quartic discriminant"));
        }
        let r = self.resolvent(x)?;
        Ok(cubic_disc(&self.field, [r[0], r[1], r[2], r[3]]))
    }

    /// Projective zeros of the form, or common zeros of the pair.
    pub fn count_projective_zeros(&self, x: &[u32]) -> Result<u64> {
        self.check_len(x)?;
        let f = &self.field;
        Ok(match self.kind {
            RepKind::Sym32 | RepKind::Sym22 => {
                self.p1.iter().filter(|&&[u, v]| eval_binary(f, x, u, v) == 0).count() as u64
            }
            RepKind::Sym23 => self.p2_zero_count(x, None),
            RepKind::Pair22 => self
                .p1
                .iter()
                .filter(|&&[u, v]| eval_binary(f, &x[..3], u, v) == 0 && eval_binary(f, &x[3..], u, v) == 0)
                .count() as u64,
            RepKind::Pair23 => self.p2_zero_count(&x[..6], Some(&x[6..])),
        })
    }

    fn p2_zero_count(&self, a: &[u32], b: Option<&[u32]>) -> u64 {
        let f = &self.field;
        self.p2_monomials
            .iter()
            .filter(|&m| dot6(f, m, a) == 0 && b.is_none_or(|b| dot6(f, m, b) == 0))
            .count() as u64
    }

    /// Roots of a binary cubic in `P¹`, without multiplicity.
    pub fn count_p1_roots(&self, x: &[u32]) -> Result<u64> {
        if self.kind != RepKind::Sym32 {
            return Err(Error::UnsupportedInvariant("binary cubic roots"));
        }
        self.count_projective_zeros(x)
    }

    /// Members `[λ:μ]` of the pencil `λA + μB` of rank at most one.
    pub fn pencil_rank_le1_count(&self, x: &[u32]) -> Result<u64> {
        if self.kind != RepKind::Pair23 {
            return Err(Error::UnsupportedInvariant("pencil rank count"));
        }
        self.check_len(x)?;
        Ok(self.pencil_count(&x[..6], &x[6..]))
    }

    fn pencil_count(&self, a: &[u32], b: &[u32]) -> u64 {
        let f = &self.field;
        self.p1
            .iter()
            .filter(|&&[l, m]| {
                let c: Vec<u32> = a
                    .iter()
                    .zip(b)
                    .map(|(&s, &t)| f.add(f.mul(l, s), f.mul(m, t)))
                    .collect();
                adjugate_doubled(f, &c).iter().all(|&v| v == 0)
            })
            .count() as u64
    }

    // ---- classification ----------------------------------------------------

    /// Orbit label of `x`.
    pub fn classify(&self, x: &[u32]) -> Result<OrbitLabel> {
        self.check_len(x)?;
        let i = self.classify_index(x);
        if i == UNCLASSIFIED {
            return Err(Error::Inconsistent(format!(
                "no {} orbit matches the invariants of {:?}",
                self.kind, x
            )));
        }
        Ok(self.descriptor().labels[i as usize])
    }

    /// Orbit index in descriptor order, or [`UNCLASSIFIED`]. Hot-loop entry
    /// point: no length checks.
    #[inline]
    pub fn classify_index(&self, x: &[u32]) -> u8 {
        match self.kind {
            RepKind::Sym32 => self.cubic_type([x[0], x[1], x[2], x[3]]),
            RepKind::Sym22 => binary_quadratic_type(&self.field, x[0], x[1], x[2]),
            RepKind::Sym23 => self.ternary_type(x),
            RepKind::Pair22 => self.classify_pair22(x),
            RepKind::Pair23 => self.classify_pair23(x),
        }
    }

    fn cubic_type(&self, c: [u32; 4]) -> u8 {
        let p = self.field.p();
        if p <= CUBIC_TABLE_MAX_P {
            let table = self.cubic_table.get_or_init(|| {
                let p = p as usize;
                let mut t = vec![0u8; p * p * p * p];
                for (idx, slot) in t.iter_mut().enumerate() {
                    let c = [
                        (idx % p) as u32,
                        (idx / p % p) as u32,
                        (idx / (p * p) % p) as u32,
                        (idx / (p * p * p)) as u32,
                    ];
                    *slot = cubic_type_direct(&self.field, &self.p1, c);
                }
                t
            });
            let p = p as usize;
            table[c[0] as usize + p * (c[1] as usize + p * (c[2] as usize + p * c[3] as usize))]
        } else {
            cubic_type_direct(&self.field, &self.p1, c)
        }
    }

    /// Rank, then the rank-2 split by projective zero count.
    fn ternary_type(&self, x: &[u32]) -> u8 {
        let f = &self.field;
        let adj = adjugate_doubled(f, x);
        if adj.iter().all(|&v| v == 0) {
            // rank ≤ 1
            return if x.iter().all(|&c| c == 0) { 0 } else { 1 };
        }
        if det_doubled(f, x) != 0 {
            return 4;
        }
        let q = self.p();
        match self.p2_zero_count(x, None) {
            z if z == 2 * q + 1 => 2,
            1 => 3,
            _ => UNCLASSIFIED,
        }
    }

    fn classify_pair22(&self, x: &[u32]) -> u8 {
        let f = &self.field;
        let minors = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .any(|&(i, j)| f.mul(x[i], x[3 + j]) != f.mul(x[j], x[3 + i]));
        if !minors {
            let y = if x[3..].iter().any(|&c| c != 0) {
                &x[3..]
            } else {
                &x[..3]
            };
            // (0), (1²), (11), (2) ↦ (0), D1², D11, D2
            return binary_quadratic_type(f, y[0], y[1], y[2]);
        }
        let r0 = f.sub(f.mul(x[1], x[1]), f.mul(4, f.mul(x[0], x[2])));
        let r1 = f.sub(
            f.mul(2, f.mul(x[1], x[4])),
            f.mul(4, f.add(f.mul(x[0], x[5]), f.mul(x[2], x[3]))),
        );
        let r2 = f.sub(f.mul(x[4], x[4]), f.mul(4, f.mul(x[3], x[5])));
        match binary_quadratic_type(f, r0, r1, r2) {
            1 => 4,
            2 => 5,
            3 => 6,
            _ => UNCLASSIFIED,
        }
    }

    fn ternary_tables(&self) -> Option<&TernaryTables> {
        if self.field.p() > TERNARY_TABLE_MAX_P {
            return None;
        }
        Some(self.ternary_tables.get_or_init(|| {
            let f = &self.field;
            let p = f.p() as usize;
            let n = p.pow(6);
            let mut zero_mask = Vec::with_capacity(n);
            let mut det2 = Vec::with_capacity(n);
            let mut adj_weights = Vec::with_capacity(n);
            let mut c = [0u32; 6];
            for idx in 0..n {
                let mut r = idx;
                for slot in c.iter_mut() {
                    *slot = (r % p) as u32;
                    r /= p;
                }
                let mut mask = 0u64;
                for (k, m) in self.p2_monomials.iter().enumerate() {
                    if dot6(f, m, &c) == 0 {
                        mask |= 1 << k;
                    }
                }
                zero_mask.push(mask);
                det2.push(det_doubled(f, &c));
                adj_weights.push(adj_trace_weights(f, &c));
            }
            TernaryTables {
                zero_mask,
                det2,
                adj_weights,
            }
        }))
    }

    fn classify_pair23(&self, x: &[u32]) -> u8 {
        let f = &self.field;
        let (a, b) = (&x[..6], &x[6..]);
        let (res, zeros) = match self.ternary_tables() {
            Some(t) => {
                let p = f.p() as usize;
                let ia = a.iter().rev().fold(0usize, |acc, &c| acc * p + c as usize);
                let ib = b.iter().rev().fold(0usize, |acc, &c| acc * p + c as usize);
                let res = [
                    t.det2[ia],
                    dot6(f, &t.adj_weights[ia], b),
                    dot6(f, &t.adj_weights[ib], a),
                    t.det2[ib],
                ];
                let ty = self.cubic_type(res);
                if ty == 5 {
                    return 18;
                }
                (ty, (t.zero_mask[ia] & t.zero_mask[ib]).count_ones() as u64)
            }
            None => {
                let ty = self.cubic_type(det_pencil_doubled(f, a, b));
                if ty == 5 {
                    return 18;
                }
                (ty, self.p2_zero_count(a, Some(b)))
            }
        };
        let q = self.p();
        let dependent = || (0..6).all(|i| (i + 1..6).all(|j| f.mul(a[i], b[j]) == f.mul(a[j], b[i])));
        match res {
            0 => {
                if dependent() {
                    match zeros {
                        z if z == q * q + q + 1 => 0,
                        z if z == q + 1 => 1,
                        z if z == 2 * q + 1 => 2,
                        1 => 3,
                        _ => UNCLASSIFIED,
                    }
                } else {
                    match zeros {
                        z if z == q + 1 => 5,
                        z if z == q + 2 => 6,
                        1 => match self.pencil_count(a, b) {
                            2 => 7,
                            0 => 8,
                            _ => UNCLASSIFIED,
                        },
                        _ => UNCLASSIFIED,
                    }
                }
            }
            1 => {
                if dependent() {
                    if zeros == q + 1 {
                        4
                    } else {
                        UNCLASSIFIED
                    }
                } else {
                    match zeros {
                        1 => 9,
                        2 => 10,
                        _ => UNCLASSIFIED,
                    }
                }
            }
            2 => match zeros {
                2 => 11,
                0 => 12,
                3 => 13,
                1 => 14,
                _ => UNCLASSIFIED,
            },
            3 => match zeros {
                4 => 15,
                0 => 17,
                _ => UNCLASSIFIED,
            },
            4 => match zeros {
                2 => 16,
                0 => 19,
                _ => UNCLASSIFIED,
            },
            _ => UNCLASSIFIED,
        }
    }

    // ---- representatives ---------------------------------------------------

    /// Table representative of an orbit, with the smallest non-residue and the
    /// lexicographically first irreducible polynomials.
    pub fn representative(&self, label: OrbitLabel) -> Result<Vec<u32>> {
        use OrbitLabel::*;
        let d = self.descriptor();
        d.index_of(label)?;
        let f = &self.field;
        let l = self.nonresidue as i64;
        let irr = |deg: usize| -> Result<FpPolynomial> { f.find_irreducible_monic(deg) };
        let v: Vec<i64> = match self.kind {
            RepKind::Sym32 => match label {
                Zero => vec![0, 0, 0, 0],
                Cube => vec![0, 0, 0, 1],
                SquareLinear => vec![0, 0, 1, 0],
                ThreeLinear => vec![0, 1, -1, 0],
                QuadLinear => {
                    let g = irr(2)?;
                    vec![0, 1, g.coeffs[1] as i64, g.coeffs[0] as i64]
                }
                Cubic => {
                    let g = irr(3)?;
                    vec![1, g.coeffs[2] as i64, g.coeffs[1] as i64, g.coeffs[0] as i64]
                }
                _ => unreachable!(),
            },
            RepKind::Sym22 => match label {
                Zero => vec![0, 0, 0],
                Square => vec![0, 0, 1],
                Split => vec![0, 1, 0],
                Nonsplit => vec![1, 0, -l],
                _ => unreachable!(),
            },
            RepKind::Sym23 => match label {
                Zero => vec![0; 6],
                Square => vec![1, 0, 0, 0, 0, 0],
                Split => vec![0, 1, 0, 0, 0, 0],
                Nonsplit => vec![1, 0, 0, -l, 0, 0],
                Nonsingular => vec![1, 0, 0, 0, -1, 0],
                _ => unreachable!(),
            },
            RepKind::Pair22 => match label {
                Zero => vec![0; 6],
                D1Sq => vec![0, 0, 0, 0, 0, 1],
                D11 => vec![0, 0, 0, 0, 1, 0],
                D2 => vec![0, 0, 0, 1, 0, -l],
                Cs => vec![0, 0, 1, 0, 1, 0],
                Ts => vec![0, 0, 1, 1, 0, 0],
                Ti => vec![0, 1, 0, 1, 0, l],
                _ => unreachable!(),
            },
            RepKind::Pair23 => {
                // (u², uv, uw, v², vw, w²) for A, then B
                let pair = |a: [i64; 6], b: [i64; 6]| -> Vec<i64> { a.iter().chain(&b).copied().collect() };
                let z = [0; 6];
                let w2 = [0, 0, 0, 0, 0, 1];
                let vw = [0, 0, 0, 0, 1, 0];
                let uw = [0, 0, 1, 0, 0, 0];
                match label {
                    Zero => pair(z, z),
                    D1Sq => pair(z, w2),
                    D11 => pair(z, vw),
                    D2 => pair(z, [0, 0, 0, 1, 0, -l]),
                    Dns => pair(z, [1, 0, 0, 0, -1, 0]),
                    Cs => pair(w2, vw),
                    Cns => pair(vw, uw),
                    Ts => pair(w2, [0, 0, 0, 1, 0, 0]),
                    Ti => pair(vw, [0, 0, 0, 1, 0, l]),
                    Q1e4 => pair(w2, [0, 0, 1, 1, 0, 0]),
                    Q1e3x1 => pair(vw, [0, 0, 1, 1, 0, 0]),
                    Q1e2x1e2 => pair(w2, [1, 0, 0, -1, 0, 0]),
                    Q2e2 => pair(w2, [1, 0, 0, -l, 0, 0]),
                    Q1e2x11 => pair([0, 0, 0, 1, 0, -1], uw),
                    Q1e2x2 => pair([0, 0, 0, 1, 0, -l], uw),
                    Q1111 => pair([0, 0, 1, 0, -1, 0], [0, 1, 0, 0, -1, 0]),
                    Q112 => pair(vw, [1, 0, 0, -1, 0, -l]),
                    Q22 => pair(vw, [1, 0, 0, -l, 0, -l]),
                    Q13 => {
                        let g = irr(3)?;
                        let (a3, b3, c3) = (g.coeffs[2] as i64, g.coeffs[1] as i64, g.coeffs[0] as i64);
                        pair([0, 0, 1, -1, 0, 0], [0, 1, 0, a3, b3, c3])
                    }
                    Q4 => {
                        let g = irr(4)?;
                        let c = |k: usize| g.coeffs[k] as i64;
                        pair([0, 0, 1, -1, 0, 0], [1, c(3), 0, c(2), c(1), c(0)])
                    }
                    _ => unreachable!(),
                }
            }
        };
        self.vector(&v)
    }

    pub fn representatives(&self) -> Result<Vec<Vec<u32>>> {
        self.descriptor()
            .labels
            .iter()
            .map(|&l| self.representative(l))
            .collect()
    }
}

/// Reduces a rational into `F_p`, refusing values that vanish or are
/// undefined mod p.
pub fn rational_mod_p(w: &BigRational, f: &PrimeField) -> Result<u32> {
    use num_traits::ToPrimitive;
    let p = num_bigint::BigInt::from(f.p());
    let n = (w.numer() % &p + &p) % &p;
    let d = (w.denom() % &p + &p) % &p;
    let (n, d) = (n.to_u32().unwrap(), d.to_u32().unwrap());
    if n == 0 || d == 0 {
        return Err(Error::BadPrime {
            rep: format!("weight {w}"),
            p: f.p() as u64,
        });
    }
    Ok(f.mul(n, f.inv_raw(d)))
}

#[inline]
fn dot6(f: &PrimeField, a: &[u32], b: &[u32]) -> u32 {
    let p = f.p() as u64;
    let s: u64 = (0..6).map(|k| a[k] as u64 * b[k] as u64).sum();
    (s % p) as u32
}

/// Value of a binary form of degree `len-1` at `[u:v]`.
fn eval_binary(f: &PrimeField, c: &[u32], u: u32, v: u32) -> u32 {
    let d = c.len() - 1;
    let mut acc = 0;
    for (k, &ck) in c.iter().enumerate() {
        if ck != 0 {
            let m = f.mul(f.pow(u, (d - k) as u64), f.pow(v, k as u64));
            acc = f.add(acc, f.mul(ck, m));
        }
    }
    acc
}

/// `x((u,v)g)` for a binary form `x` given by coefficients of `u^{d-k} v^k`.
fn subst_binary(f: &PrimeField, x: &[u32], g: &Mat) -> Vec<u32> {
    let d = x.len() - 1;
    // linear forms as (u-coefficient, v-coefficient)
    let big_u = [g.at(0, 0), g.at(1, 0)];
    let big_v = [g.at(0, 1), g.at(1, 1)];
    let mul_lin = |poly: &[u32], lin: &[u32; 2]| -> Vec<u32> {
        let mut out = vec![0; poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            out[k] = f.add(out[k], f.mul(c, lin[0]));
            out[k + 1] = f.add(out[k + 1], f.mul(c, lin[1]));
        }
        out
    };
    let mut acc = vec![0; d + 1];
    for (k, &c) in x.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mut term = vec![c];
        for _ in 0..d - k {
            term = mul_lin(&term, &big_u);
        }
        for _ in 0..k {
            term = mul_lin(&term, &big_v);
        }
        for (slot, t) in acc.iter_mut().zip(term) {
            *slot = f.add(*slot, t);
        }
    }
    acc
}

/// `b²c² + 18abcd − 4ac³ − 4b³d − 27a²d²` mod p.
pub(crate) fn cubic_disc(f: &PrimeField, [a, b, c, d]: [u32; 4]) -> u32 {
    let m = |x: u32, y: u32| f.mul(x, y);
    let t1 = m(m(b, b), m(c, c));
    let t2 = m(18 % f.p(), m(m(a, b), m(c, d)));
    let t3 = m(4 % f.p(), m(a, m(c, m(c, c))));
    let t4 = m(4 % f.p(), m(m(b, m(b, b)), d));
    let t5 = m(27 % f.p(), m(m(a, a), m(d, d)));
    f.sub(f.sub(f.sub(f.add(t1, t2), t3), t4), t5)
}

/// Orbit index of a binary cubic in the `sym3-2` label order. Uses distinct
/// roots on `P¹` and the discriminant, so it is valid in every odd
/// characteristic (including 3, where it types the quartic resolvent).
fn cubic_type_direct(f: &PrimeField, p1: &[[u32; 2]], c: [u32; 4]) -> u8 {
    if c.iter().all(|&v| v == 0) {
        return 0;
    }
    let roots = p1.iter().filter(|&&[u, v]| eval_binary(f, &c, u, v) == 0).count();
    match roots {
        3 => 3,
        2 => 2,
        1 if cubic_disc(f, c) == 0 => 1,
        1 => 4,
        0 => 5,
        _ => UNCLASSIFIED,
    }
}

/// Orbit index of `au²+buv+cv²` in the `sym2-2` label order.
#[inline]
fn binary_quadratic_type(f: &PrimeField, a: u32, b: u32, c: u32) -> u8 {
    if a == 0 && b == 0 && c == 0 {
        return 0;
    }
    let disc = f.sub(f.mul(b, b), f.mul(4, f.mul(a, c)));
    match f.legendre_raw(disc) {
        0 => 1,
        1 => 2,
        _ => 3,
    }
}

/// Entries of `2A` for a ternary form: `[[2a,b,c],[b,2d,e],[c,e,2f]]`.
#[inline]
fn doubled(f: &PrimeField, x: &[u32]) -> [[u32; 3]; 3] {
    let t = |v: u32| f.add(v, v);
    [[t(x[0]), x[1], x[2]], [x[1], t(x[3]), x[4]], [x[2], x[4], t(x[5])]]
}

fn det_doubled(f: &PrimeField, x: &[u32]) -> u32 {
    let m = doubled(f, x);
    let mat = Mat::new(3, m.iter().flatten().copied().collect());
    mat.det(f)
}

/// The six distinct entries `(11,12,13,22,23,33)` of `adj(2A)`.
fn adjugate_doubled(f: &PrimeField, x: &[u32]) -> [u32; 6] {
    let m = doubled(f, x);
    let minor =
        |r0: usize, r1: usize, c0: usize, c1: usize| f.sub(f.mul(m[r0][c0], m[r1][c1]), f.mul(m[r0][c1], m[r1][c0]));
    [
        minor(1, 2, 1, 2),
        f.neg(minor(0, 2, 1, 2)),
        minor(0, 1, 1, 2),
        minor(0, 2, 0, 2),
        f.neg(minor(0, 1, 0, 2)),
        minor(0, 1, 0, 1),
    ]
}

/// Weights `w` with `tr(adj(2A)·2B) = Σ_k w_k B_k` in coordinate order.
fn adj_trace_weights(f: &PrimeField, a: &[u32]) -> [u32; 6] {
    let [m11, m12, m13, m22, m23, m33] = adjugate_doubled(f, a);
    let t = |v: u32| f.add(v, v);
    [t(m11), t(m12), t(m13), t(m22), t(m23), t(m33)]
}

/// Coefficients `(u³, u²v, uv², v³)` of `det(2Au + 2Bv)`.
fn det_pencil_doubled(f: &PrimeField, a: &[u32], b: &[u32]) -> [u32; 4] {
    [
        det_doubled(f, a),
        dot6(f, &adj_trace_weights(f, a), b),
        dot6(f, &adj_trace_weights(f, b), a),
        det_doubled(f, b),
    ]
}
